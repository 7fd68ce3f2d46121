use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;

fn brute_force_free(sets: &[Vec<Atom>]) -> bool {
    fn go(sets: &[Vec<Atom>], used: &mut BTreeSet<Atom>) -> bool {
        let Some((first, rest)) = sets.split_first() else {
            return true;
        };
        for &a in first {
            if used.insert(a) {
                if go(rest, used) {
                    return true;
                }
                used.remove(&a);
            }
        }
        false
    }
    go(sets, &mut BTreeSet::new())
}

fn check_outcome(family: &SetFamily) -> bool {
    match find_transversal(family) {
        TransversalOutcome::Transversal { assignment } => {
            let atoms: BTreeSet<_> = assignment.values().collect();
            assert_eq!(atoms.len(), assignment.len());
            assert_eq!(assignment.len(), family.len());
            for (i, a) in &assignment {
                assert!(family.sets()[i].contains(a));
            }
            true
        }
        TransversalOutcome::Violator { sets, union } => {
            assert!(union.len() < sets.len());
            assert_eq!(family.union_of(&sets).into_iter().collect::<Vec<_>>(), union);
            false
        }
    }
}

#[test]
fn spec_examples() {
    let single = SetFamily::from_sets([vec![7]]);
    assert_eq!(
        find_transversal(&single),
        TransversalOutcome::Transversal {
            assignment: BTreeMap::from([(0, 7)])
        }
    );
    let pigeon = SetFamily::from_sets([vec![1], vec![1]]);
    assert_eq!(
        find_transversal(&pigeon),
        TransversalOutcome::Violator {
            sets: vec![0, 1],
            union: vec![1]
        }
    );
    let triangle = SetFamily::from_sets([vec![1, 2], vec![2, 3], vec![1, 3]]);
    assert!(check_outcome(&triangle));
    assert!(is_free(&triangle));
}

#[test]
fn almost_free_patterns() {
    assert!(is_almost_free(&SetFamily::default()));
    for n in 2..=5u32 {
        let mut sets: Vec<Vec<Atom>> = (1..=n).map(|i| vec![i]).collect();
        sets.push((1..=n).collect());
        let family = SetFamily::from_sets(sets);
        assert!(!is_free(&family));
        assert!(is_almost_free(&family));

        let same = SetFamily::from_sets((0..=n).map(|_| vec![0]));
        assert!(!is_almost_free(&same));
    }
}

#[test]
fn validation_and_json() {
    assert!(SetFamily::new([1, 2], [(0, vec![3])]).is_err());
    assert!(SetFamily::new([1, 2], [(0, vec![1]), (0, vec![2])]).is_err());
    let family = SetFamily::new([1, 2, 3], [(4, vec![1, 2]), (9, vec![3])]).unwrap();
    let json = serde_json::to_string(&family).unwrap();
    assert_eq!(json, r#"{"universe":[1,2,3],"sets":{"4":[1,2],"9":[3]}}"#);
    assert_eq!(serde_json::from_str::<SetFamily>(&json).unwrap(), family);
    assert!(serde_json::from_str::<SetFamily>(r#"{"universe":[1],"sets":{"0":[2]}}"#).is_err());
}

#[test]
fn exhaustive_small() {
    // Every multiset of up to 4 subsets of a 4-atom universe.
    let masks: Vec<u32> = (0..16).collect();
    let mut stack: Vec<Vec<u32>> = vec![vec![]];
    while let Some(family) = stack.pop() {
        let sets: Vec<Vec<Atom>> = family
            .iter()
            .map(|&m| (0..4).filter(|b| m & (1 << b) != 0).collect())
            .collect();
        let f = SetFamily::new(0..4, sets.iter().cloned().enumerate().map(|(i, s)| (i as u32, s))).unwrap();
        assert_eq!(check_outcome(&f), brute_force_free(&sets), "{sets:?}");
        if family.len() < 4 {
            let from = family.last().copied().unwrap_or(0);
            for &m in &masks[from as usize..] {
                let mut next = family.clone();
                next.push(m);
                stack.push(next);
            }
        }
    }
}

fn family_strategy() -> impl Strategy<Value = Vec<Vec<Atom>>> {
    prop::collection::vec(prop::collection::vec(0u32..8, 0..4), 0..7)
}

proptest! {
    #[test]
    fn matches_brute_force(sets in family_strategy()) {
        let family = SetFamily::from_sets(sets.clone());
        prop_assert_eq!(check_outcome(&family), brute_force_free(&sets));
    }

    #[test]
    fn freeness_is_antitone(sets in family_strategy(), drop in any::<prop::sample::Index>()) {
        let family = SetFamily::from_sets(sets.clone());
        if is_free(&family) && !family.is_empty() {
            let i = drop.index(family.len()) as u32;
            prop_assert!(is_free(&family.without(i)));
        }
    }

    #[test]
    fn almost_free_matches_definition(sets in family_strategy()) {
        let family = SetFamily::from_sets(sets);
        let expected = family.sets().keys().all(|&i| is_free(&family.without(i)));
        prop_assert_eq!(is_almost_free(&family), expected || is_free(&family));
    }
}

fn leaf(base: &[Atom]) -> Node {
    Node {
        label: 0,
        base: base.iter().copied().collect(),
        children: BTreeMap::new(),
    }
}

fn valid_height_two() -> TreeSystem {
    let middle = |atoms: &[Atom], extra: Atom| Node {
        label: 2,
        base: atoms.iter().copied().collect(),
        children: BTreeMap::from([(0, leaf(&[extra])), (1, leaf(&[extra]))]),
    };
    TreeSystem {
        height: 2,
        root: Node {
            label: 3,
            base: BTreeSet::new(),
            children: BTreeMap::from([
                (0, middle(&[1, 2], 10)),
                (1, middle(&[1, 2], 11)),
                (2, middle(&[1, 2], 12)),
            ]),
        },
    }
}

#[test]
fn valid_system_has_no_violations() {
    let system = valid_height_two();
    assert_eq!(validate_tree_system(&system), vec![]);
    assert_eq!(system.final_nodes().len(), 6);
    let json = serde_json::to_string(&system).unwrap();
    assert_eq!(serde_json::from_str::<TreeSystem>(&json).unwrap(), system);
}

#[test]
fn empty_index_set_is_reported() {
    let system = TreeSystem {
        height: 1,
        root: Node {
            label: 5,
            ..Node::default()
        },
    };
    let violations = validate_tree_system(&system);
    assert!(violations.iter().any(|v| v.clause == "stationarity"));
}

#[test]
fn broken_chain_is_reported() {
    let system = TreeSystem {
        height: 1,
        root: Node {
            label: 5,
            base: BTreeSet::new(),
            children: BTreeMap::from([(2, leaf(&[1, 2])), (4, leaf(&[1, 3]))]),
        },
    };
    let violations = validate_tree_system(&system);
    assert!(violations
        .iter()
        .any(|v| v.clause == "increasing chain" && v.node == vec![4]));
}

/// Every single-field mutation of the valid system is caught.
#[test]
fn mutations_are_detected() {
    let valid = valid_height_two();
    type Mutation = (&'static str, fn(&mut TreeSystem));
    let mutations: Vec<Mutation> = vec![
        ("root base", |s| {
            s.root.base.insert(99);
        }),
        ("final label", |s| s.node_mut(&[0, 1]).unwrap().label = 1),
        ("inner label zero", |s| s.node_mut(&[1]).unwrap().label = 0),
        ("label too large", |s| s.node_mut(&[2]).unwrap().label = 3),
        ("missing top index", |s| {
            s.root.children.remove(&2);
        }),
        ("index beyond label", |s| {
            let child = s.root.children[&2].clone();
            s.root.children.insert(3, child);
        }),
        ("base too small", |s| {
            s.node_mut(&[1]).unwrap().base.remove(&2);
        }),
        ("base too large", |s| {
            s.node_mut(&[1, 0]).unwrap().base.insert(77);
        }),
        ("chain broken", |s| {
            s.node_mut(&[0]).unwrap().base = [1, 5].into_iter().collect();
        }),
        ("too deep", |s| {
            s.height = 1;
        }),
        ("final with positive label", |s| {
            s.node_mut(&[2]).unwrap().children.clear();
        }),
    ];
    for (name, mutate) in mutations {
        let mut system = valid.clone();
        mutate(&mut system);
        assert!(!validate_tree_system(&system).is_empty(), "{name}");
    }
}

fn pigeon_based(n: u32) -> BasedFamily {
    let base: Vec<Atom> = (1..=n).collect();
    let children = (0..=u64::from(n)).map(|b| (b, leaf(&base))).collect();
    let mut sets: Vec<BasedSet> = (1..=n)
        .map(|i| BasedSet {
            node: vec![u64::from(i) - 1],
            set: [i].into_iter().collect(),
        })
        .collect();
    sets.push(BasedSet {
        node: vec![u64::from(n)],
        set: base.iter().copied().collect(),
    });
    BasedFamily {
        system: TreeSystem {
            height: 1,
            root: Node {
                label: u64::from(n) + 1,
                base: BTreeSet::new(),
                children,
            },
        },
        sets,
    }
}

#[test]
fn based_families() {
    let single = BasedFamily {
        system: TreeSystem {
            height: 0,
            root: leaf(&[]),
        },
        sets: vec![],
    };
    // The root of a height-0 system is final but carries no atoms.
    assert!(based_family_to_setfamily(&single).is_err());

    let disjoint = BasedFamily {
        system: TreeSystem {
            height: 1,
            root: Node {
                label: 3,
                base: BTreeSet::new(),
                children: BTreeMap::from([(1, leaf(&[1])), (2, leaf(&[1, 2]))]),
            },
        },
        sets: vec![
            BasedSet {
                node: vec![1],
                set: [1].into_iter().collect(),
            },
            BasedSet {
                node: vec![2],
                set: [2].into_iter().collect(),
            },
        ],
    };
    let family = based_family_to_setfamily(&disjoint).unwrap();
    assert_eq!(family.len(), 2);
    assert!(is_free(&family));

    for n in 2..=4 {
        let family = based_family_to_setfamily(&pigeon_based(n)).unwrap();
        assert!(is_almost_free(&family));
        assert!(!is_free(&family));
    }

    let mut outside = pigeon_based(2);
    outside.sets[0].set.insert(50);
    assert!(based_family_to_setfamily(&outside).is_err());
}
