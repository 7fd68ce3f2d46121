use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use proptest::prelude::*;

use super::*;
use crate::model::law_holds_in_family;
use crate::term::{Application, Equation};

fn t(coords: &[usize]) -> Tuple {
    Tuple(coords.to_vec())
}

fn model(carrier: usize, projections: &[(&str, usize)]) -> ProjectionAlgebra {
    ProjectionAlgebra::new(
        carrier,
        projections.iter().map(|&(n, p)| (n.into(), p)).collect(),
        BTreeMap::new(),
    )
    .unwrap()
}

fn binary_f() -> Vocabulary {
    Vocabulary::new([FunctionSymbol::new("f", 2u32)]).unwrap()
}

/// Two factors where `f` projects onto different arguments.
fn mixing() -> Family {
    Family::new(binary_f(), vec![model(2, &[("f", 0)]), model(2, &[("f", 1)])]).unwrap()
}

fn f(args: Vec<Term>) -> Term {
    Term::App(Application { f: "f".into(), args })
}

#[test]
fn apply_symbol_examples() {
    let one = Family::new(binary_f(), vec![model(6, &[("f", 0)])]).unwrap();
    let sym = FunctionSymbol::new("f", 2u32);
    assert_eq!(one.apply_symbol(&sym, &[t(&[3]), t(&[5])]).unwrap(), t(&[3]));
    assert_eq!(
        mixing().apply_symbol(&sym, &[t(&[0, 0]), t(&[1, 1])]).unwrap(),
        t(&[0, 1])
    );
    let unary = Family::new(
        Vocabulary::new([FunctionSymbol::new("u", 1u32)]).unwrap(),
        vec![model(4, &[("u", 0)]), model(4, &[("u", 0)])],
    )
    .unwrap();
    assert_eq!(
        unary
            .apply_symbol(&FunctionSymbol::new("u", 1u32), &[t(&[2, 3])])
            .unwrap(),
        t(&[2, 3])
    );
    assert!(matches!(
        mixing().apply_symbol(&sym, &[t(&[0, 0])]),
        Err(EngineError::Term(TermError::ArityMismatch { .. }))
    ));
}

#[test]
fn closure_examples() {
    let one = Family::new(binary_f(), vec![model(3, &[("f", 1)])]).unwrap();
    assert_eq!(
        one.subalgebra_closure(&[t(&[2])]).unwrap(),
        BTreeSet::from([t(&[2])])
    );
    assert_eq!(
        mixing().subalgebra_closure(&[t(&[0, 0]), t(&[1, 1])]).unwrap(),
        BTreeSet::from([t(&[0, 0]), t(&[0, 1]), t(&[1, 0]), t(&[1, 1])])
    );
    assert!(mixing().subalgebra_closure(&[]).unwrap().is_empty());
    assert!(matches!(
        mixing().closure_within(&[t(&[0, 0]), t(&[1, 1])], 3),
        Err(EngineError::ClosureTooLarge { limit: 3 })
    ));
}

#[test]
fn word_problem_examples() {
    let gens = [t(&[0, 0]), t(&[1, 1])];
    let x = Term::var(0);
    let y = Term::var(1);
    let fxy = f(vec![x.clone(), y.clone()]);
    assert!(mixing().word_problem(&gens, &fxy, &fxy).unwrap());

    let left = Family::new(binary_f(), vec![model(2, &[("f", 0)]), model(3, &[("f", 0)])]).unwrap();
    assert!(left.word_problem(&[t(&[0, 0]), t(&[1, 2])], &fxy, &x).unwrap());

    assert!(!mixing().word_problem(&gens, &fxy, &x).unwrap());
    assert_eq!(mixing().word_problem_witness(&gens, &fxy, &x).unwrap(), Some(1));
    assert!(matches!(
        mixing().word_problem(&gens, &Term::var(2), &x),
        Err(EngineError::VariableOutOfRange { variable: 2, .. })
    ));
}

#[test]
fn free_generation_examples() {
    let k = mixing();
    assert!(k.is_free_generating(&[t(&[0, 0]), t(&[1, 1])]));
    assert!(!k.is_free_generating(&[t(&[0, 0]), t(&[0, 1])]));
    assert!(k.is_free_generating(&[t(&[1, 0])]));
}

#[test]
fn membership_examples() {
    let k = mixing();
    let gens = [t(&[0, 0]), t(&[1, 1])];
    assert!(k.membership_closure(&gens, &t(&[1, 1])).unwrap());
    assert!(k.membership_closure(&gens, &t(&[0, 1])).unwrap());
    let wide = Family::new(binary_f(), vec![model(3, &[("f", 0)]), model(3, &[("f", 1)])]).unwrap();
    assert!(!wide.membership_closure(&gens, &t(&[2, 0])).unwrap());
    assert!(!wide.membership_closure(&[t(&[0, 0])], &t(&[0, 1])).unwrap());
}

#[test]
fn decomposition_examples() {
    let k = mixing();
    let gens = [t(&[0, 0]), t(&[1, 1])];
    assert!(k
        .membership_decomposition(&gens, &Term::var(1), &BTreeSet::from([1]))
        .unwrap());
    let term = f(vec![Term::var(0), Term::var(1)]);
    assert!(k
        .membership_decomposition(&gens, &term, &BTreeSet::from([0, 1]))
        .unwrap());
    assert!(!k
        .membership_decomposition(&gens, &term, &BTreeSet::from([0]))
        .unwrap());
    // The oracle agrees on both.
    let value = k.evaluate(&gens, &term).unwrap();
    assert!(k.membership_closure(&gens, &value).unwrap());
    assert!(!k.membership_closure(&gens[..1], &value).unwrap());

    let empty = Family::new(binary_f(), vec![]).unwrap();
    assert_eq!(
        empty.membership_decomposition(&[], &Term::var(0), &BTreeSet::new()),
        Err(EngineError::EmptyFamily)
    );
}

#[test]
fn extend_with_free_examples() {
    let k = mixing();
    assert!(k.extend_with_free(&[t(&[0, 0])], 0).unwrap().is_empty());

    let five = Family::new(binary_f(), vec![model(5, &[("f", 0)])]).unwrap();
    let gens = [t(&[0]), t(&[1])];
    let fresh = five.extend_with_free(&gens, 2).unwrap();
    assert_eq!(fresh, vec![t(&[2]), t(&[3])]);
    let mut all = gens.to_vec();
    all.extend(fresh);
    assert!(five.is_free_generating(&all));

    let two = Family::new(binary_f(), vec![model(2, &[("f", 0)])]).unwrap();
    assert!(matches!(
        two.extend_with_free(&gens, 1),
        Err(EngineError::CarrierTooSmall { factor: 0, .. })
    ));
}

#[test]
fn free_factor_examples() {
    let k = mixing();
    let l = [t(&[0, 0]), t(&[1, 1])];
    assert_eq!(
        k.free_factor_search(&l, &l, 64).unwrap(),
        FactorVerdict::IsFactor { witness: vec![] }
    );
    let h = [t(&[0, 0])];
    let verdict = k.free_factor_search(&h, &l, 64).unwrap();
    assert_eq!(
        verdict,
        FactorVerdict::IsFactor {
            witness: vec![t(&[1, 1])]
        }
    );

    // H outside the generating set goes through the exhaustive search.
    let h = [t(&[0, 1])];
    let FactorVerdict::IsFactor { witness } = k.free_factor_search(&h, &l, 64).unwrap() else {
        panic!("expected a witness");
    };
    assert_eq!(witness, vec![t(&[1, 0])]);
    assert!(k.validate_factor_witness(&h, &witness, &l).unwrap());

    assert_eq!(
        k.free_factor_search(&[t(&[0, 0]), t(&[0, 1])], &l, 64),
        Err(EngineError::NotFreeGenerating("H"))
    );
    let wide = Family::new(binary_f(), vec![model(3, &[("f", 0)]), model(3, &[("f", 1)])]).unwrap();
    assert_eq!(
        wide.free_factor_search(&[t(&[2, 2])], &l, 64),
        Err(EngineError::NotInClosure(t(&[2, 2])))
    );
}

// Random small instances: up to three factors, carriers up to four, up to
// four generators, a couple of binary/ternary symbols.
#[derive(Debug, Clone)]
struct Instance {
    family: Family,
    generators: Vec<Tuple>,
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..=3, 1usize..=2)
        .prop_flat_map(|(factors, symbols)| {
            let arities = prop::collection::vec(2usize..=3, symbols);
            let carriers = prop::collection::vec(1usize..=4, factors);
            (Just(factors), arities, carriers)
        })
        .prop_flat_map(|(factors, arities, carriers)| {
            let projections: Vec<_> = arities
                .iter()
                .map(|&a| prop::collection::vec(0..a, factors))
                .collect();
            let gens = carriers.iter().map(|&c| 0..c).collect::<Vec<_>>();
            (
                Just(arities),
                Just(carriers.clone()),
                projections,
                prop::collection::vec(gens, 0..=4),
            )
        })
        .prop_map(|(arities, carriers, projections, generators)| {
            let vocabulary = Vocabulary::new(
                arities
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| FunctionSymbol::new(alloc::format!("f{i}"), a as u64)),
            )
            .unwrap();
            let models = carriers
                .iter()
                .enumerate()
                .map(|(m, &c)| {
                    let table = projections
                        .iter()
                        .enumerate()
                        .map(|(s, p)| (alloc::format!("f{s}"), p[m]))
                        .collect();
                    ProjectionAlgebra::new(c, table, BTreeMap::new()).unwrap()
                })
                .collect();
            Instance {
                family: Family::new(vocabulary, models).unwrap(),
                generators: generators.into_iter().map(Tuple).collect(),
            }
        })
}

fn arb_term(vars: u32, arities: Vec<usize>) -> impl Strategy<Value = Term> {
    let leaf = (0..vars.max(1)).prop_map(Term::Var);
    leaf.prop_recursive(4, 40, 3, move |inner| {
        let arities = arities.clone();
        (0..arities.len(), prop::collection::vec(inner, 3)).prop_map(move |(s, mut args)| {
            args.truncate(arities[s]);
            Term::App(Application {
                f: alloc::format!("f{s}"),
                args,
            })
        })
    })
}

fn arities(family: &Family) -> Vec<usize> {
    family
        .vocabulary()
        .symbols()
        .iter()
        .map(|s| s.small_arity().unwrap())
        .collect()
}

/// Closedness checked directly with `apply_symbol` on every argument list.
fn is_closed(family: &Family, set: &BTreeSet<Tuple>) -> bool {
    let elements: Vec<&Tuple> = set.iter().collect();
    family.vocabulary().symbols().iter().all(|symbol| {
        let arity = symbol.small_arity().unwrap();
        let mut pick = vec![0usize; arity];
        if elements.is_empty() {
            return true;
        }
        loop {
            let args: Vec<Tuple> = pick.iter().map(|&i| elements[i].clone()).collect();
            if !set.contains(&family.apply_symbol(symbol, &args).unwrap()) {
                return false;
            }
            let mut slot = arity;
            loop {
                if slot == 0 {
                    return true;
                }
                slot -= 1;
                pick[slot] += 1;
                if pick[slot] < elements.len() {
                    break;
                }
                pick[slot] = 0;
            }
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn decomposition_agrees_with_closure(
        (instance, term, targets) in arb_instance().prop_flat_map(|inst| {
            let n = inst.generators.len() as u32;
            let ar = arities(&inst.family);
            let targets = prop::collection::btree_set(0..n.max(1), 0..=n as usize);
            (Just(inst), arb_term(n, ar), targets)
        })
    ) {
        prop_assume!(!instance.generators.is_empty());
        let Instance { family, generators } = instance;
        let targets: BTreeSet<u32> = targets.into_iter().filter(|&v| (v as usize) < generators.len()).collect();
        let value = family.evaluate(&generators, &term).unwrap();
        let target_tuples: Vec<Tuple> = targets.iter().map(|&v| generators[v as usize].clone()).collect();
        let oracle = family.membership_closure(&target_tuples, &value).unwrap();
        prop_assert_eq!(family.membership_decomposition(&generators, &term, &targets).unwrap(), oracle);
        prop_assert_eq!(family.membership_span(&target_tuples, &value).unwrap(), oracle);
    }

    #[test]
    fn closure_is_closed_and_minimal(instance in arb_instance()) {
        let Instance { family, generators } = instance;
        let closure = family.subalgebra_closure(&generators).unwrap();
        prop_assert!(is_closed(&family, &closure));
        if closure.len() <= 12 {
            for x in closure.iter().filter(|x| !generators.contains(x)) {
                let mut smaller = closure.clone();
                smaller.remove(x);
                prop_assert!(!is_closed(&family, &smaller));
            }
        }
    }

    #[test]
    fn word_problem_equality_is_a_law(
        (instance, t1, t2) in arb_instance().prop_flat_map(|inst| {
            let n = inst.generators.len() as u32;
            let ar = arities(&inst.family);
            (Just(inst), arb_term(n, ar.clone()), arb_term(n, ar))
        })
    ) {
        let Instance { family, generators } = instance;
        prop_assume!(!generators.is_empty());
        prop_assume!(family.is_free_generating(&generators));
        // Repeated generators name one element under two variables.
        prop_assume!(generators.iter().collect::<BTreeSet<_>>().len() == generators.len());
        if family.word_problem(&generators, &t1, &t2).unwrap() {
            let law = Equation::new(t1, t2);
            prop_assert!(law_holds_in_family(&law, family.models()).unwrap());
        }
    }

    #[test]
    fn factor_witnesses_revalidate(instance in arb_instance(), pick in any::<prop::sample::Index>()) {
        let Instance { family, generators } = instance;
        let l: Vec<Tuple> = generators.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        prop_assume!(!l.is_empty() && family.is_free_generating(&l));
        let closure = family.subalgebra_closure(&l).unwrap();
        prop_assume!(closure.len() <= 16);
        let h = vec![closure.iter().nth(pick.index(closure.len())).unwrap().clone()];
        if let FactorVerdict::IsFactor { witness } = family.free_factor_search(&h, &l, 64).unwrap() {
            prop_assert!(family.validate_factor_witness(&h, &witness, &l).unwrap());
        }
    }
}
