//! Seeded random instances and brute-force oracles for the property suites.
//!
//! The oracles here deliberately avoid the shortcuts the core crate takes:
//! laws are checked by enumerating assignments, closures by naive fixpoint
//! iteration, transversals by backtracking.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use varietas_core::engine::EngineError;
use varietas_core::term::Application;
use varietas_core::transversal::Atom;
use varietas_core::{
    ConstantName, Equation, Family, FunctionSymbol, ProjectionAlgebra, SetFamily, Term, Tuple, Vocabulary,
};

pub type Rng64 = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Constants available to random law instances.
pub const LAW_CONSTANTS: [ConstantName; 3] = [
    ConstantName::C { m: 0, n: 0 },
    ConstantName::C { m: 0, n: 1 },
    ConstantName::D { n: 0 },
];

fn symbols(rng: &mut Rng64, count: usize, arities: std::ops::RangeInclusive<usize>) -> Vec<(String, usize)> {
    (0..count)
        .map(|i| (format!("f{i}"), rng.gen_range(arities.clone())))
        .collect()
}

fn vocabulary(symbols: &[(String, usize)]) -> Vocabulary {
    Vocabulary::new(
        symbols
            .iter()
            .map(|(name, arity)| FunctionSymbol::new(name.clone(), *arity as u64)),
    )
    .expect("generated names are distinct")
}

/// A random term over `x0..x{vars-1}`, the given symbols and constants, of
/// depth at most `depth`.
pub fn random_term(
    rng: &mut Rng64,
    vars: u32,
    symbols: &[(String, usize)],
    constants: &[ConstantName],
    depth: usize,
) -> Term {
    let leaf_only = depth == 0 || symbols.is_empty() || rng.gen_bool(0.3);
    if leaf_only {
        if !constants.is_empty() && (vars == 0 || rng.gen_bool(0.25)) {
            return Term::Const(*constants.choose(rng).expect("nonempty"));
        }
        return Term::Var(rng.gen_range(0..vars.max(1)));
    }
    let (name, arity) = symbols.choose(rng).expect("nonempty");
    let args = (0..*arity)
        .map(|_| random_term(rng, vars, symbols, constants, depth - 1))
        .collect();
    Term::App(Application {
        f: name.clone(),
        args,
    })
}

/// A random model (carrier ≤ 4) with constants, and a random equation with
/// at most three variables and depth at most four.
pub fn random_law_instance(rng: &mut Rng64) -> (ProjectionAlgebra, Equation) {
    let carrier = rng.gen_range(1..=4);
    let count = rng.gen_range(1..=3);
    let syms = symbols(rng, count, 1..=3);
    let projections = syms
        .iter()
        .map(|(name, arity)| (name.clone(), rng.gen_range(0..*arity)))
        .collect();
    let constants = LAW_CONSTANTS
        .iter()
        .map(|&c| (c, rng.gen_range(0..carrier)))
        .collect();
    let model = ProjectionAlgebra::new(carrier, projections, constants).expect("values in range");
    let vars = rng.gen_range(1..=3);
    let lhs = random_term(rng, vars, &syms, &LAW_CONSTANTS, 4);
    // Bias towards equations that share structure so that both verdicts occur.
    let rhs = if rng.gen_bool(0.3) {
        lhs.clone()
    } else {
        random_term(rng, vars, &syms, &LAW_CONSTANTS, 4)
    };
    (model, Equation::new(lhs, rhs))
}

/// Law check by enumerating every assignment of the variables.
pub fn law_holds_exhaustive(model: &ProjectionAlgebra, equation: &Equation) -> bool {
    let vars = equation
        .lhs
        .variables()
        .into_iter()
        .chain(equation.rhs.variables())
        .max()
        .map_or(0, |v| v as usize + 1);
    let mut assignment = vec![0usize; vars];
    loop {
        let lhs = model
            .eval(&equation.lhs, &assignment)
            .expect("well-formed instance");
        let rhs = model
            .eval(&equation.rhs, &assignment)
            .expect("well-formed instance");
        if lhs != rhs {
            return false;
        }
        let mut slot = 0;
        loop {
            if slot == vars {
                return true;
            }
            assignment[slot] += 1;
            if assignment[slot] < model.carrier_size() {
                break;
            }
            assignment[slot] = 0;
            slot += 1;
        }
    }
}

/// A random family of 1–3 factors with carriers of size 1–4 and one or two
/// symbols of arity 2–3, plus up to four random generator tuples.
pub fn random_engine_instance(rng: &mut Rng64) -> (Family, Vec<(String, usize)>, Vec<Tuple>) {
    let factors = rng.gen_range(1..=3);
    let count = rng.gen_range(1..=2);
    let syms = symbols(rng, count, 2..=3);
    let carriers: Vec<usize> = (0..factors).map(|_| rng.gen_range(1..=4)).collect();
    let models = carriers
        .iter()
        .map(|&c| {
            let table = syms
                .iter()
                .map(|(name, arity)| (name.clone(), rng.gen_range(0..*arity)))
                .collect();
            ProjectionAlgebra::new(c, table, BTreeMap::new()).expect("no constants")
        })
        .collect();
    let family = Family::new(vocabulary(&syms), models).expect("projections below arity");
    let count = rng.gen_range(1..=4);
    let generators = (0..count)
        .map(|_| Tuple(carriers.iter().map(|&c| rng.gen_range(0..c)).collect()))
        .collect();
    (family, syms, generators)
}

/// Closure by naive fixpoint: apply every symbol to every argument list of
/// current elements until nothing new appears.
pub fn naive_closure(family: &Family, generators: &[Tuple]) -> Result<BTreeSet<Tuple>, EngineError> {
    let mut set: BTreeSet<Tuple> = generators.iter().cloned().collect();
    loop {
        let elements: Vec<Tuple> = set.iter().cloned().collect();
        let mut grown = false;
        for symbol in family.vocabulary().symbols() {
            let arity = symbol.small_arity().expect("small test vocabularies");
            if elements.is_empty() {
                break;
            }
            let mut pick = vec![0usize; arity];
            'args: loop {
                let args: Vec<Tuple> = pick.iter().map(|&i| elements[i].clone()).collect();
                grown |= set.insert(family.apply_symbol(symbol, &args)?);
                let mut slot = 0;
                loop {
                    if slot == arity {
                        break 'args;
                    }
                    pick[slot] += 1;
                    if pick[slot] < elements.len() {
                        break;
                    }
                    pick[slot] = 0;
                    slot += 1;
                }
            }
        }
        if !grown {
            return Ok(set);
        }
    }
}

/// Whether some `G ⊆ ⟨L⟩ \ H` makes `H ∪ G` free generating with the same
/// closure as `L`, by trying every subset.
pub fn brute_force_free_factor(family: &Family, h: &[Tuple], l: &[Tuple]) -> Result<bool, EngineError> {
    let target = naive_closure(family, l)?;
    let pool: Vec<&Tuple> = target.iter().filter(|x| !h.contains(x)).collect();
    assert!(pool.len() <= 16, "brute force is meant for tiny closures");
    for mask in 0u32..(1 << pool.len()) {
        let mut generators = h.to_vec();
        generators.extend(
            (0..pool.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| pool[i].clone()),
        );
        if family.is_free_generating(&generators) && naive_closure(family, &generators)? == target {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One hand-built free-factor instance.
pub struct FactorCase {
    pub name: &'static str,
    pub family: Family,
    pub h: Vec<Tuple>,
    pub l: Vec<Tuple>,
}

fn family_of(symbols: &[(&str, usize)], models: &[(usize, &[usize])]) -> Family {
    let syms: Vec<(String, usize)> = symbols.iter().map(|&(n, a)| (n.to_string(), a)).collect();
    let models = models
        .iter()
        .map(|&(carrier, positions)| {
            let table = syms
                .iter()
                .map(|(n, _)| n.clone())
                .zip(positions.iter().copied())
                .collect();
            ProjectionAlgebra::new(carrier, table, BTreeMap::new()).expect("valid fixture")
        })
        .collect();
    Family::new(vocabulary(&syms), models).expect("valid fixture")
}

fn tuples(rows: &[&[usize]]) -> Vec<Tuple> {
    rows.iter().map(|r| Tuple(r.to_vec())).collect()
}

/// Twenty small instances whose closures have at most ten elements.
pub fn factor_cases() -> Vec<FactorCase> {
    let mixing = || family_of(&[("f", 2)], &[(2, &[0]), (2, &[1])]);
    let mixing3 = || family_of(&[("f", 2)], &[(3, &[0]), (3, &[1])]);
    let trio = || family_of(&[("f", 2), ("g", 2)], &[(2, &[0, 0]), (2, &[1, 0]), (2, &[1, 1])]);
    let left = || family_of(&[("f", 3)], &[(3, &[2])]);
    let unary = || family_of(&[("u", 1)], &[(4, &[0]), (4, &[0])]);
    let case = |name, family, h: &[&[usize]], l: &[&[usize]]| FactorCase {
        name,
        family,
        h: tuples(h),
        l: tuples(l),
    };
    vec![
        case("mixing: empty H", mixing(), &[], &[&[0, 0], &[1, 1]]),
        case(
            "mixing: H = one generator",
            mixing(),
            &[&[0, 0]],
            &[&[0, 0], &[1, 1]],
        ),
        case(
            "mixing: H = L",
            mixing(),
            &[&[0, 0], &[1, 1]],
            &[&[0, 0], &[1, 1]],
        ),
        case("mixing: H = f(x,y)", mixing(), &[&[0, 1]], &[&[0, 0], &[1, 1]]),
        case("mixing: H = f(y,x)", mixing(), &[&[1, 0]], &[&[0, 0], &[1, 1]]),
        case(
            "mixing: H = both mixed",
            mixing(),
            &[&[0, 1], &[1, 0]],
            &[&[0, 0], &[1, 1]],
        ),
        case(
            "mixing: L already mixed",
            mixing(),
            &[&[0, 0]],
            &[&[0, 1], &[1, 0]],
        ),
        case("mixing3: rank 1", mixing3(), &[&[2, 2]], &[&[2, 2]]),
        case(
            "mixing3: H inside rank 2",
            mixing3(),
            &[&[0, 2]],
            &[&[0, 1], &[2, 2]],
        ),
        case(
            "mixing3: H = diagonal",
            mixing3(),
            &[&[1, 1]],
            &[&[1, 0], &[0, 1]],
        ),
        case("trio: empty H", trio(), &[], &[&[0, 0, 0], &[1, 1, 1]]),
        case(
            "trio: H = generator",
            trio(),
            &[&[1, 1, 1]],
            &[&[0, 0, 0], &[1, 1, 1]],
        ),
        case(
            "trio: H = f-mix",
            trio(),
            &[&[0, 1, 1]],
            &[&[0, 0, 0], &[1, 1, 1]],
        ),
        case(
            "trio: H = g-mix",
            trio(),
            &[&[0, 0, 1]],
            &[&[0, 0, 0], &[1, 1, 1]],
        ),
        case(
            "trio: H = mixed pair",
            trio(),
            &[&[0, 0, 1], &[1, 1, 0]],
            &[&[0, 0, 0], &[1, 1, 1]],
        ),
        case("left: H = L", left(), &[&[0], &[1], &[2]], &[&[0], &[1], &[2]]),
        case("left: proper H", left(), &[&[2]], &[&[0], &[2]]),
        case("left: empty L", left(), &[], &[]),
        case("unary: split rank", unary(), &[&[3, 1]], &[&[3, 1], &[0, 2]]),
        case(
            "unary: rank 3",
            unary(),
            &[&[0, 0], &[2, 1]],
            &[&[0, 0], &[1, 3], &[2, 1]],
        ),
    ]
}

/// A random family of up to `max_sets` sets over `0..max_atoms`.
pub fn random_set_family(rng: &mut Rng64, max_sets: usize, max_atoms: u32) -> SetFamily {
    let sets = rng.gen_range(0..=max_sets);
    let atoms = rng.gen_range(1..=max_atoms);
    let density = rng.gen_range(0.1..0.7);
    SetFamily::from_sets((0..sets).map(|_| {
        (0..atoms)
            .filter(|_| rng.gen_bool(density))
            .collect::<Vec<Atom>>()
    }))
}

/// Transversal existence by backtracking over bit masks (at most 32 atoms).
pub fn brute_force_free_masks(sets: &[u32]) -> bool {
    fn go(sets: &[u32], used: u32) -> bool {
        let Some((&first, rest)) = sets.split_first() else {
            return true;
        };
        let mut options = first & !used;
        while options != 0 {
            let bit = options & options.wrapping_neg();
            if go(rest, used | bit) {
                return true;
            }
            options &= !bit;
        }
        false
    }
    go(sets, 0)
}

/// The family as bit masks over the position of each atom in its universe.
pub fn as_masks(family: &SetFamily) -> Vec<u32> {
    let atoms: Vec<Atom> = family.universe().iter().copied().collect();
    assert!(atoms.len() <= 32);
    family
        .sets()
        .values()
        .map(|s| {
            s.iter()
                .map(|a| 1u32 << atoms.binary_search(a).expect("inside universe"))
                .fold(0, |acc, b| acc | b)
        })
        .collect()
}

/// `n` singletons `{1}..{n}` plus `{1..n}`: not free, every proper
/// subfamily free.
pub fn minimal_non_free(n: u32) -> SetFamily {
    let mut sets: Vec<Vec<Atom>> = (1..=n).map(|i| vec![i]).collect();
    sets.push((1..=n).collect());
    SetFamily::from_sets(sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_law_check_sees_carrier_one() {
        let model = ProjectionAlgebra::new(1, BTreeMap::new(), BTreeMap::new()).unwrap();
        assert!(law_holds_exhaustive(
            &model,
            &Equation::new(Term::Var(0), Term::Var(1))
        ));
        let two = ProjectionAlgebra::new(2, BTreeMap::new(), BTreeMap::new()).unwrap();
        assert!(!law_holds_exhaustive(
            &two,
            &Equation::new(Term::Var(0), Term::Var(1))
        ));
    }

    #[test]
    fn same_seed_same_instances() {
        let a: Vec<_> = (0..5).map(|_| random_law_instance(&mut rng(3)).1).collect();
        let b: Vec<_> = (0..5).map(|_| random_law_instance(&mut rng(3)).1).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn masks_and_backtracking() {
        assert!(brute_force_free_masks(&[0b11, 0b10]));
        assert!(!brute_force_free_masks(&[0b1, 0b1]));
        assert!(!brute_force_free_masks(&as_masks(&minimal_non_free(3))));
    }
}
