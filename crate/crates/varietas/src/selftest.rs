//! The seeded property and oracle suites behind `varietas selftest`.
//!
//! Suites, in order: `law-oracle`, `membership-oracles`, `closure-laws`,
//! `free-factor`, `construction`, `obstruction`, `plan-roundtrip`,
//! `matching`, `hall-duality`, `tree-mutation`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use varietas_core::construction::{default_plan, Status, Witness, DEFAULT_PAD};
use varietas_core::transversal::{validate_tree_system, Node, TreeSystem};
use varietas_core::{
    build_collapse_model, build_generic_model, cp1_finite_witness, find_transversal, is_almost_free, is_free,
    verify_k0_truncation, ConstantName, Equation, SetFamily, StagePlan, TransversalOutcome,
};

use crate::docs::{plan_document, render};
use crate::gen;

pub const SUITES: [&str; 10] = [
    "law-oracle",
    "membership-oracles",
    "closure-laws",
    "free-factor",
    "construction",
    "obstruction",
    "plan-roundtrip",
    "matching",
    "hall-duality",
    "tree-mutation",
];

/// Deliberate defects for checking that the suites notice them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    None,
    /// Report the opposite of `law_holds`.
    NegateLawCheck,
    /// Drop one pair from every transversal found.
    TruncateTransversal,
    /// Build generic models where collapse models are asked for.
    SkipCollapseSeed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            passed: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteResult>,
    pub passed: usize,
    pub failed: usize,
}

impl Summary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Runs every suite. Randomized suites draw `cases` instances each from a
/// ChaCha stream derived from `seed` and the suite's position.
pub fn run(seed: u64, cases: usize, fault: Fault) -> Summary {
    let stream = |i: u64| gen::rng(seed ^ (i.wrapping_add(1)).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let suites = vec![
        law_oracle(&mut stream(0), cases, fault),
        membership_oracles(&mut stream(1), cases),
        closure_laws(&mut stream(2), cases),
        free_factor(),
        construction(fault),
        obstruction(),
        plan_roundtrip(),
        matching(&mut stream(7), cases, fault),
        hall_duality(&mut stream(8), cases),
        tree_mutation(),
    ];
    debug_assert_eq!(suites.len(), SUITES.len());
    Summary {
        seed,
        cases,
        passed: suites.iter().map(|s| s.passed).sum(),
        failed: suites.iter().map(|s| s.failed).sum(),
        suites,
    }
}

fn law_oracle(rng: &mut gen::Rng64, cases: usize, fault: Fault) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[0]);
    for _ in 0..cases {
        let (model, equation) = gen::random_law_instance(rng);
        let fast = model
            .law_holds(&equation)
            .expect("generated instances are well-formed");
        let fast = if fault == Fault::NegateLawCheck {
            !fast
        } else {
            fast
        };
        let slow = gen::law_holds_exhaustive(&model, &equation);
        suite.record(fast == slow, || {
            format!("{equation} in a model of size {}", model.carrier_size())
        });
    }
    suite
}

fn membership_oracles(rng: &mut gen::Rng64, cases: usize) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[1]);
    for _ in 0..cases {
        let (family, symbols, generators) = gen::random_engine_instance(rng);
        let term = gen::random_term(rng, generators.len() as u32, &symbols, &[], 4);
        let targets: BTreeSet<u32> = (0..generators.len() as u32)
            .filter(|_| rand::Rng::gen_bool(rng, 0.5))
            .collect();
        let target_tuples: Vec<_> = targets.iter().map(|&v| generators[v as usize].clone()).collect();
        let value = family.evaluate(&generators, &term).expect("well-formed");
        let closure = family
            .membership_closure(&target_tuples, &value)
            .expect("well-formed");
        let decomposition = family
            .membership_decomposition(&generators, &term, &targets)
            .expect("well-formed");
        let span = family
            .membership_span(&target_tuples, &value)
            .expect("well-formed");
        suite.record(closure == decomposition && closure == span, || {
            format!("{term} over {generators:?}, targets {targets:?}: closure {closure}, decomposition {decomposition}, span {span}")
        });
    }
    suite
}

fn closure_laws(rng: &mut gen::Rng64, cases: usize) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[2]);
    for _ in 0..cases {
        let (family, symbols, generators) = gen::random_engine_instance(rng);
        let fast = family.subalgebra_closure(&generators).expect("well-formed");
        let slow = gen::naive_closure(&family, &generators).expect("well-formed");
        suite.record(fast == slow, || format!("closure of {generators:?}"));

        let distinct: BTreeSet<_> = generators.iter().collect();
        if distinct.len() == generators.len() && family.is_free_generating(&generators) {
            let vars = generators.len() as u32;
            let t1 = gen::random_term(rng, vars, &symbols, &[], 3);
            let t2 = gen::random_term(rng, vars, &symbols, &[], 3);
            if family.word_problem(&generators, &t1, &t2).expect("well-formed") {
                let law = Equation::new(t1, t2);
                let holds = family.models().iter().all(|m| gen::law_holds_exhaustive(m, &law));
                suite.record(holds, || format!("{law} equal in the free algebra but not a law"));
            }
        }
    }
    suite
}

fn free_factor() -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[3]);
    for case in gen::factor_cases() {
        let verdict = case
            .family
            .free_factor_search(&case.h, &case.l, 1 << 12)
            .expect("fixtures satisfy the preconditions");
        let brute = gen::brute_force_free_factor(&case.family, &case.h, &case.l).expect("fixture");
        let valid = match &verdict {
            varietas_core::FactorVerdict::IsFactor { witness } => case
                .family
                .validate_factor_witness(&case.h, witness, &case.l)
                .expect("fixture"),
            varietas_core::FactorVerdict::NotFactor => true,
        };
        suite.record(verdict.is_factor() == brute && valid, || {
            format!("{}: search {verdict:?}, brute force {brute}", case.name)
        });
    }
    suite
}

fn construction(fault: Fault) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[4]);
    let plan = default_plan(20);
    for m in 0..=10u32 {
        let built = if fault == Fault::SkipCollapseSeed {
            build_generic_model(&plan, DEFAULT_PAD)
        } else {
            build_collapse_model(&plan, m, DEFAULT_PAD)
        };
        let Ok(built) = built else {
            suite.record(false, || format!("collapse model {m} could not be built"));
            continue;
        };
        let model = &built.model;
        let equations = plan.stages().iter().all(|s| s.holds_in(model) == Ok(true));
        suite.record(equations, || format!("collapse model {m}: an equation fails"));
        let identified =
            model.interpret(&ConstantName::c(0, 0)).ok() == model.interpret(&ConstantName::d(m)).ok();
        suite.record(identified, || {
            format!("collapse model {m}: c(0,0) and d({m}) differ")
        });
        let budget = built.trace.iter().all(|t| t.budget_used <= 2 * (t.stage + 1));
        suite.record(budget, || format!("collapse model {m}: merge budget exceeded"));
        let report = verify_k0_truncation(model, &plan);
        suite.record(report.passed(), || {
            format!("collapse model {m}: {} violations", report.counts.fail)
        });
    }
    match build_generic_model(&plan, DEFAULT_PAD) {
        Ok(generic) => {
            let report = verify_k0_truncation(&generic.model, &plan);
            suite.record(report.passed(), || {
                String::from("generic model fails verification")
            });
        }
        Err(e) => suite.record(false, || format!("generic model: {e}")),
    }
    suite
}

fn obstruction() -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[5]);
    let plan = default_plan(20);
    let report = match cp1_finite_witness(&plan, 5, 2, DEFAULT_PAD) {
        Ok(r) => r,
        Err(e) => {
            suite.record(false, || format!("witness construction failed: {e}"));
            return suite;
        }
    };
    for check in &report.checks {
        let named = match (&check.witness, check.section.starts_with("clause-2")) {
            (Some(Witness::Obstruction { coordinate, .. }), true) => {
                let m: usize = check
                    .name
                    .trim_start_matches("m = ")
                    .parse()
                    .unwrap_or(usize::MAX);
                *coordinate == m + 1
            }
            (_, true) => false,
            _ => true,
        };
        suite.record(check.status == Status::Pass && named, || {
            format!("{} / {}: {}", check.section, check.name, check.detail)
        });
    }
    suite
}

fn plan_roundtrip() -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[6]);
    for n in 0..=12 {
        let plan = default_plan(n);
        let first = render(&plan_document(&plan));
        let parsed: Result<serde_json::Value, _> = serde_json::from_str(&first);
        let again = parsed
            .ok()
            .and_then(|v| serde_json::from_value::<StagePlan>(v["plan"].clone()).ok())
            .map(|p| render(&plan_document(&p)));
        suite.record(again.as_deref() == Some(first.as_str()), || {
            format!("{n}-stage plan")
        });
    }
    suite
}

fn check_outcome(family: &SetFamily, outcome: &TransversalOutcome) -> bool {
    match outcome {
        TransversalOutcome::Transversal { assignment } => {
            let atoms: BTreeSet<_> = assignment.values().collect();
            atoms.len() == family.len()
                && assignment.len() == family.len()
                && assignment
                    .iter()
                    .all(|(i, a)| family.sets().get(i).is_some_and(|s| s.contains(a)))
        }
        TransversalOutcome::Violator { sets, union } => {
            union.len() < sets.len() && family.union_of(sets).len() == union.len()
        }
    }
}

fn matching(rng: &mut gen::Rng64, cases: usize, fault: Fault) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[7]);
    for _ in 0..cases {
        let family = gen::random_set_family(rng, 6, 8);
        let mut outcome = find_transversal(&family);
        if let (Fault::TruncateTransversal, TransversalOutcome::Transversal { assignment }) =
            (fault, &mut outcome)
        {
            assignment.pop_last();
        }
        let brute = gen::brute_force_free_masks(&gen::as_masks(&family));
        suite.record(
            outcome.is_transversal() == brute && check_outcome(&family, &outcome),
            || format!("{family:?}"),
        );
    }
    suite
}

fn hall_duality(rng: &mut gen::Rng64, cases: usize) -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[8]);
    for _ in 0..cases {
        let family = gen::random_set_family(rng, 6, 8);
        let free = is_free(&family);
        let masks = gen::as_masks(&family);
        // Hall: non-free iff some subfamily has a smaller union.
        let violator_exists = (1u32..(1 << masks.len())).any(|sub| {
            let union = (0..masks.len())
                .filter(|i| sub & (1 << i) != 0)
                .fold(0u32, |acc, i| acc | masks[i]);
            union.count_ones() < sub.count_ones()
        });
        suite.record(free != violator_exists, || format!("duality on {family:?}"));
        if free {
            let antitone = family.sets().keys().all(|&i| is_free(&family.without(i)));
            suite.record(antitone, || format!("antitone on {family:?}"));
        }
        let definition = free || family.sets().keys().all(|&i| is_free(&family.without(i)));
        suite.record(is_almost_free(&family) == definition, || {
            format!("almost free on {family:?}")
        });
    }
    for n in 2..=5 {
        let family = gen::minimal_non_free(n);
        suite.record(is_almost_free(&family) && !is_free(&family), || {
            format!("{}-over-{n} pattern", n + 1)
        });
    }
    suite
}

fn leaf(atoms: &[u32]) -> Node {
    Node {
        label: 0,
        base: atoms.iter().copied().collect(),
        children: BTreeMap::new(),
    }
}

/// A valid height-2 system used by the mutation suite.
pub fn sample_tree_system() -> TreeSystem {
    let middle = |extra: u32| Node {
        label: 2,
        base: [1, 2].into_iter().collect(),
        children: BTreeMap::from([(0, leaf(&[extra])), (1, leaf(&[extra]))]),
    };
    TreeSystem {
        height: 2,
        root: Node {
            label: 3,
            base: BTreeSet::new(),
            children: BTreeMap::from([(0, middle(10)), (1, middle(11)), (2, middle(12))]),
        },
    }
}

fn tree_mutation() -> SuiteResult {
    let mut suite = SuiteResult::new(SUITES[9]);
    let valid = sample_tree_system();
    suite.record(validate_tree_system(&valid).is_empty(), || {
        String::from("sample system rejected")
    });
    // Mutate every node's label, base and index set in turn.
    for (path, node) in valid.nodes() {
        let mut variants: Vec<(String, TreeSystem)> = Vec::new();
        let edit = |f: &dyn Fn(&mut Node)| {
            let mut s = valid.clone();
            f(s.node_mut(&path).expect("path exists"));
            s
        };
        variants.push((String::from("label + 1"), edit(&|n| n.label += 1)));
        if node.label > 0 {
            variants.push((String::from("label 0"), edit(&|n| n.label = 0)));
            variants.push((
                String::from("drop top index"),
                edit(&|n| {
                    n.children.pop_last();
                }),
            ));
            variants.push((
                String::from("index beyond label"),
                edit(&|n| {
                    let child = n.children.values().next().cloned().unwrap_or_default();
                    n.children.insert(n.label, child);
                }),
            ));
        }
        if !path.is_empty() {
            variants.push((
                String::from("grow base"),
                edit(&|n| {
                    n.base.extend([100, 101, 102]);
                }),
            ));
        } else {
            variants.push((
                String::from("root base"),
                edit(&|n| {
                    n.base.insert(100);
                }),
            ));
        }
        for (what, system) in variants {
            let caught = !validate_tree_system(&system).is_empty();
            suite.record(caught, || format!("{what} at {path:?} went unnoticed"));
        }
    }
    suite
}
