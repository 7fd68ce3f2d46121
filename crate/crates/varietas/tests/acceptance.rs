//! Acceptance run: one line per criterion with its verdict and timing.
//! Exits nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use varietas::gen;
use varietas_core::construction::{default_plan, Status, Witness, DEFAULT_PAD};
use varietas_core::{
    build_collapse_model, cp1_finite_witness, find_transversal, is_almost_free, is_free,
    verify_k0_truncation, ConstantName, FactorVerdict, SetFamily, TransversalOutcome,
};

type Verdict = Result<String, String>;

fn criterion(id: &str, limit_secs: u64, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = f();
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let in_time = elapsed <= limit;
    let (ok, detail) = match verdict {
        Ok(detail) if in_time => (true, detail),
        Ok(detail) => (false, format!("{detail}; over the time limit")),
        Err(detail) => (false, detail),
    };
    println!(
        "{id} {} {detail} ({:.2}s of {limit_secs}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    ok
}

fn a1_laws() -> Verdict {
    let mut rng = gen::rng(1);
    let (mut holds, mut fails) = (0, 0);
    for i in 0..600 {
        let (model, equation) = gen::random_law_instance(&mut rng);
        let fast = model.law_holds(&equation).map_err(|e| e.to_string())?;
        if fast != gen::law_holds_exhaustive(&model, &equation) {
            return Err(format!("instance {i}: {equation} disagrees with enumeration"));
        }
        if fast {
            holds += 1;
        } else {
            fails += 1;
        }
    }
    Ok(format!(
        "600 law instances agree with enumeration ({holds} hold, {fails} fail)"
    ))
}

fn a2_membership() -> Verdict {
    let mut rng = gen::rng(2);
    let (mut members, mut outside) = (0, 0);
    for i in 0..250 {
        let (family, symbols, generators) = gen::random_engine_instance(&mut rng);
        let term = gen::random_term(&mut rng, generators.len() as u32, &symbols, &[], 4);
        let all: BTreeSet<u32> = (0..generators.len() as u32).collect();
        let targets: BTreeSet<u32> = all.iter().copied().filter(|v| v % 2 == (i % 2)).collect();
        let target_tuples: Vec<_> = targets.iter().map(|&v| generators[v as usize].clone()).collect();
        let value = family.evaluate(&generators, &term).map_err(|e| e.to_string())?;
        let oracle = gen::naive_closure(&family, &target_tuples)
            .map_err(|e| e.to_string())?
            .contains(&value);
        let closure = family
            .membership_closure(&target_tuples, &value)
            .map_err(|e| e.to_string())?;
        let span = family
            .membership_span(&target_tuples, &value)
            .map_err(|e| e.to_string())?;
        let decomposition = family
            .membership_decomposition(&generators, &term, &targets)
            .map_err(|e| e.to_string())?;
        if closure != oracle || span != oracle || decomposition != oracle {
            return Err(format!(
                "instance {i}: oracle {oracle}, closure {closure}, span {span}, decomposition {decomposition}"
            ));
        }
        if oracle {
            members += 1;
        } else {
            outside += 1;
        }
    }
    Ok(format!(
        "250 membership instances agree ({members} members, {outside} non-members)"
    ))
}

fn a3_collapse_models() -> Verdict {
    let plan = default_plan(20);
    for m in 0..=10 {
        let built = build_collapse_model(&plan, m, DEFAULT_PAD).map_err(|e| format!("m={m}: {e}"))?;
        for stage in plan.stages() {
            if !stage.holds_in(&built.model).map_err(|e| e.to_string())? {
                return Err(format!("m={m}: stage {} fails", stage.stage));
            }
            if let Some(eq) = stage.equation() {
                if !built.model.law_holds(&eq).map_err(|e| e.to_string())? {
                    return Err(format!("m={m}: materialized stage {} fails", stage.stage));
                }
            }
        }
        let c00 = built
            .model
            .interpret(&ConstantName::c(0, 0))
            .map_err(|e| e.to_string())?;
        let dm = built
            .model
            .interpret(&ConstantName::d(m))
            .map_err(|e| e.to_string())?;
        if c00 != dm {
            return Err(format!("m={m}: c(0,0) ≠ d({m})"));
        }
        // n counts the stages applied so far, so the bound after stage s is 2(s+1).
        for t in &built.trace {
            if t.budget_used > 2 * (t.stage + 1) {
                return Err(format!("m={m}: {} merges after stage {}", t.budget_used, t.stage));
            }
        }
        let report = verify_k0_truncation(&built.model, &plan);
        if !report.passed() {
            return Err(format!(
                "m={m}: verifier reports {} violations",
                report.violations().count()
            ));
        }
    }
    Ok(String::from(
        "20 stages, m = 0..10: equations hold, c(0,0) = d(m), merges within 2n, no violations",
    ))
}

fn a4_obstruction() -> Verdict {
    let plan = default_plan(20);
    let report = cp1_finite_witness(&plan, 5, 2, DEFAULT_PAD).map_err(|e| e.to_string())?;
    let entries: Vec<_> = report.section("clause-2 (membership obstruction)").collect();
    if entries.len() != 6 {
        return Err(format!("{} obstruction entries, expected 6", entries.len()));
    }
    for (m, check) in entries.iter().enumerate() {
        let named = match &check.witness {
            Some(Witness::Obstruction {
                coordinate, model, ..
            }) => *coordinate == m + 1 && *model == format!("collapse[{m}]"),
            _ => false,
        };
        if check.status != Status::Pass || !named {
            return Err(format!(
                "m={m}: {:?} without the collapse coordinate",
                check.status
            ));
        }
    }
    if !report.passed() {
        return Err(format!("{} report entries fail", report.violations().count()));
    }
    Ok(String::from("m = 0..5 each obstructed at coordinate collapse[m]"))
}

fn a5_free_factor() -> Verdict {
    let plan = default_plan(20);
    let report = cp1_finite_witness(&plan, 5, 2, DEFAULT_PAD).map_err(|e| e.to_string())?;
    let witnessed = report
        .section("clause-1 (free factor)")
        .filter(|c| c.status == Status::Pass && matches!(c.witness, Some(Witness::FactorComplement { .. })))
        .count();
    let total = report.section("clause-1 (free factor)").count();
    if witnessed != total || total == 0 {
        return Err(format!(
            "{witnessed} of {total} free-factor entries carry a passing witness"
        ));
    }
    let cases = gen::factor_cases();
    for case in &cases {
        let fast = case
            .family
            .free_factor_search(&case.h, &case.l, 1 << 12)
            .map_err(|e| format!("{}: {e}", case.name))?;
        let slow = gen::brute_force_free_factor(&case.family, &case.h, &case.l).map_err(|e| e.to_string())?;
        if fast.is_factor() != slow {
            return Err(format!(
                "{}: search says {}, brute force {slow}",
                case.name,
                fast.is_factor()
            ));
        }
        if let FactorVerdict::IsFactor { witness } = &fast {
            let valid = case
                .family
                .validate_factor_witness(&case.h, witness, &case.l)
                .map_err(|e| e.to_string())?;
            if !valid {
                return Err(format!("{}: witness does not re-validate", case.name));
            }
        }
    }
    Ok(format!(
        "{total} report witnesses pass; {} hand-built instances match brute force",
        cases.len()
    ))
}

fn check_outcome(family: &SetFamily, outcome: &TransversalOutcome) -> Result<(), String> {
    match outcome {
        TransversalOutcome::Transversal { assignment } => {
            let distinct: BTreeSet<_> = assignment.values().collect();
            let chosen = assignment.iter().all(|(i, a)| family.sets()[i].contains(a));
            if assignment.len() != family.len() || distinct.len() != assignment.len() || !chosen {
                return Err(format!("bad transversal {assignment:?}"));
            }
        }
        TransversalOutcome::Violator { sets, union } => {
            let actual: Vec<_> = family.union_of(sets).into_iter().collect();
            if actual != *union || union.len() >= sets.len() {
                return Err(format!("bad violator {sets:?} with union {union:?}"));
            }
        }
    }
    Ok(())
}

fn a6_exhaustive() -> Verdict {
    const ATOMS: u32 = 6;
    const MAX_SETS: usize = 5;
    let masks = 1u32 << ATOMS;
    let mut checked = 0u64;
    let mut not_free = 0u64;
    let mut pick: Vec<u32> = Vec::with_capacity(MAX_SETS);
    // Multisets of masks in nondecreasing order: freeness ignores set order.
    fn visit(
        pick: &mut Vec<u32>,
        from: u32,
        masks: u32,
        checked: &mut u64,
        not_free: &mut u64,
    ) -> Result<(), String> {
        let family = SetFamily::from_sets(
            pick.iter()
                .map(|&m| (0..ATOMS).filter(|a| m & (1 << a) != 0).collect::<Vec<_>>()),
        );
        let outcome = find_transversal(&family);
        if outcome.is_transversal() != gen::brute_force_free_masks(pick) {
            return Err(format!("{pick:?}: verdict differs from brute force"));
        }
        check_outcome(&family, &outcome).map_err(|e| format!("{pick:?}: {e}"))?;
        *checked += 1;
        if !outcome.is_transversal() {
            *not_free += 1;
        }
        if pick.len() < MAX_SETS {
            for m in from..masks {
                pick.push(m);
                visit(pick, m, masks, checked, not_free)?;
                pick.pop();
            }
        }
        Ok(())
    }
    visit(&mut pick, 0, masks, &mut checked, &mut not_free)?;
    Ok(format!(
        "{checked} families of ≤{MAX_SETS} sets over {ATOMS} atoms match brute force ({not_free} not free, each with a genuine violator)"
    ))
}

fn a7_almost_free() -> Verdict {
    for n in 2..=5 {
        let family = gen::minimal_non_free(n);
        if is_free(&family) || !is_almost_free(&family) {
            return Err(format!("n={n}: expected almost free, not free"));
        }
    }
    let mut rng = gen::rng(7);
    let mut free = 0;
    for _ in 0..500 {
        let family = gen::random_set_family(&mut rng, 6, 8);
        if is_free(&family) {
            free += 1;
            if !is_almost_free(&family) {
                return Err(String::from("a free family is not almost free"));
            }
        }
    }
    Ok(format!(
        "n+1 sets over n atoms, n = 2..5: almost free, not free; {free} random free families almost free"
    ))
}

fn a8_determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_varietas");
    let runs: [&[&str]; 4] = [
        &["plan"],
        &["model", "--m", "3"],
        &["cp1-report"],
        &["selftest", "--seed", "11"],
    ];
    for args in runs {
        let once = || Command::new(bin).args(args).output().map_err(|e| e.to_string());
        let (a, b) = (once()?, once()?);
        if !a.status.success() {
            return Err(format!("{args:?} exited with {}", a.status));
        }
        if a.stdout != b.stdout || a.stdout.is_empty() {
            return Err(format!("{args:?}: outputs differ between runs"));
        }
    }
    Ok(String::from(
        "plan, model, cp1-report and selftest are byte-identical across runs",
    ))
}

fn main() {
    let results = [
        criterion("A1", 10, a1_laws),
        criterion("A2", 30, a2_membership),
        criterion("A3", 5, a3_collapse_models),
        criterion("A4", 5, a4_obstruction),
        criterion("A5", 60, a5_free_factor),
        criterion("A6", 120, a6_exhaustive),
        criterion("A7", 5, a7_almost_free),
        criterion("A8", 60, a8_determinism),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
