//! One function per subcommand. Each returns the JSON document, a text
//! rendering and whether every check passed.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Value};
use varietas_core::construction::{default_plan, largest_arity_bits, BuiltModel, Status, DEFAULT_PAD};
use varietas_core::transversal::{based_family_to_setfamily, validate_tree_system, BasedFamily, TreeSystem};
use varietas_core::{
    build_collapse_model, build_generic_model, cp1_finite_witness, find_transversal, is_almost_free,
    verify_k0_truncation, ConstantName, CpReport, FactorVerdict, SetFamily, StagePlan, TransversalOutcome,
};

use crate::docs::{self, document, plan_document, EngineInput};
use crate::selftest::{self, Fault};
use crate::WorkbenchError;

/// Largest stage count accepted on the command line. Arity bit lengths
/// roughly double per stage, so later plans become unwieldy to print.
pub const MAX_STAGES: usize = 24;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Value,
    pub text: String,
    pub ok: bool,
}

fn timed<T>(what: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    log::info!("{what} took {:.3?}", start.elapsed());
    out
}

pub fn cmd_plan(plan: &StagePlan) -> Outcome {
    let mut text = format!("stage plan with {} stages\n", plan.len());
    for s in plan.stages() {
        let ds = match s.m {
            0 => String::new(),
            1 => String::from("d(0), "),
            m => format!("d(0)..d({}), ", m - 1),
        };
        let _ = writeln!(
            text,
            "  {:>2}  {} = {}({ds}c({},0)..c({},k-1))  arity: {} bits",
            s.stage,
            s.t,
            s.symbol.name,
            s.m,
            s.m,
            s.symbol.arity.bits()
        );
    }
    if !plan.is_empty() {
        let _ = writeln!(text, "largest arity: {} bits", largest_arity_bits(plan));
    }
    Outcome {
        document: plan_document(plan),
        text,
        ok: true,
    }
}

/// The plan to work on: read from a file, or the default plan.
pub fn load_plan(path: Option<&std::path::Path>, stages: usize) -> Result<StagePlan, WorkbenchError> {
    match path {
        Some(p) => docs::read_plan(p),
        None => Ok(timed("building the plan", || default_plan(stages))),
    }
}

fn report_text(report: &CpReport, out: &mut String) {
    for check in &report.checks {
        let tag = match check.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Insufficient => "INSUFFICIENT",
        };
        let _ = write!(out, "  [{tag}] {} / {}", check.section, check.name);
        if !check.detail.is_empty() {
            let _ = write!(out, ": {}", check.detail);
        }
        out.push('\n');
    }
    let c = report.counts;
    let _ = writeln!(
        out,
        "  {} passed, {} failed, {} insufficient",
        c.pass, c.fail, c.insufficient
    );
}

pub fn cmd_model(plan: &StagePlan, collapse: Option<u32>, pad: u32) -> Result<Outcome, WorkbenchError> {
    let built: BuiltModel = timed("building the model", || match collapse {
        Some(m) => build_collapse_model(plan, m, pad),
        None => build_generic_model(plan, pad),
    })?;
    let report = timed("verifying the model", || verify_k0_truncation(&built.model, plan));
    let mut ok = report.passed();
    let mut text = format!(
        "{} model over {} stages: carrier {} (window {})\n",
        built.label(),
        plan.len(),
        built.model.carrier_size(),
        built.window
    );
    let identification = match collapse {
        Some(m) => {
            let c00 = built.model.interpret(&ConstantName::c(0, 0)).ok();
            let dm = built.model.interpret(&ConstantName::d(m)).ok();
            let equal = c00.is_some() && c00 == dm;
            ok &= equal;
            let _ = writeln!(text, "  c(0,0) = d({m}): {}", if equal { "yes" } else { "NO" });
            Some(json!({ "m": m, "c00": c00, "dm": dm, "equal": equal }))
        }
        None => None,
    };
    report_text(&report, &mut text);
    let body = json!({
        "label": built.label(),
        "stage_count": plan.len(),
        "pad": pad,
        "window": built.window,
        "model": built.model,
        "trace": built.trace,
        "identification": identification,
        "report": report,
    });
    Ok(Outcome {
        document: document("model", body),
        text,
        ok,
    })
}

pub fn cmd_cp1_report(
    plan: &StagePlan,
    m_max: u32,
    j_max: usize,
    pad: u32,
) -> Result<Outcome, WorkbenchError> {
    let report = timed("the finite witness", || {
        cp1_finite_witness(plan, m_max, j_max, pad)
    })?;
    let mut text = format!(
        "finite construction-principle witness: {} stages, m ≤ {m_max}, |J| ≤ {j_max}, pad {pad}\n",
        plan.len()
    );
    for note in &report.notes {
        let _ = writeln!(text, "  note: {note}");
    }
    report_text(&report, &mut text);
    Ok(Outcome {
        ok: report.passed(),
        document: document("cp1_report", json!({ "report": report })),
        text,
    })
}

pub fn cmd_closure(input: &EngineInput, limit: usize) -> Result<Outcome, WorkbenchError> {
    let family = input.family()?;
    let closure = timed("the closure", || family.closure_within(&input.generators, limit))?;
    let free = family.is_free_generating(&input.generators);
    let mut text = format!(
        "closure of {} generators: {} elements\n",
        input.generators.len(),
        closure.len()
    );
    for x in &closure {
        let _ = writeln!(text, "  {x}");
    }
    Ok(Outcome {
        document: document(
            "closure",
            json!({ "size": closure.len(), "free_generating": free, "elements": closure }),
        ),
        text,
        ok: true,
    })
}

pub fn cmd_membership(input: &EngineInput) -> Result<Outcome, WorkbenchError> {
    let family = input.family()?;
    let (element, decomposition) = match (&input.term, &input.element) {
        (Some(term), _) => {
            let targets: BTreeSet<u32> = match &input.targets {
                Some(t) => t.iter().copied().collect(),
                None => (0..input.generators.len() as u32).collect(),
            };
            let value = family.evaluate(&input.generators, term)?;
            let verdict = family.membership_decomposition(&input.generators, term, &targets)?;
            let targets: Vec<_> = targets
                .iter()
                .map(|&v| input.generators[v as usize].clone())
                .collect();
            (value, Some((verdict, targets)))
        }
        (None, Some(element)) => (element.clone(), None),
        (None, None) => {
            return Err(WorkbenchError::Schema(String::from(
                "membership needs either `element` or `term`",
            )))
        }
    };
    let targets = decomposition
        .as_ref()
        .map_or_else(|| input.generators.clone(), |(_, t)| t.clone());
    let closure = family.membership_closure(&targets, &element)?;
    let span = family.membership_span(&targets, &element)?;
    let uncovered = family.uncovered_coordinates(&targets, &element);
    let verdicts = std::iter::once(closure)
        .chain(Some(span))
        .chain(decomposition.as_ref().map(|(v, _)| *v));
    let agree = verdicts.clone().all(|v| v == closure);
    let mut text = format!(
        "{element} {} the subalgebra generated by {} tuples\n",
        if closure { "lies in" } else { "is outside" },
        targets.len()
    );
    if !uncovered.is_empty() {
        let _ = writeln!(text, "  coordinates no generator reaches: {uncovered:?}");
    }
    if !agree {
        text.push_str("  ORACLES DISAGREE\n");
    }
    Ok(Outcome {
        document: document(
            "membership",
            json!({
                "element": element,
                "member": closure,
                "closure": closure,
                "span": span,
                "decomposition": decomposition.map(|(v, _)| v),
                "uncovered_coordinates": uncovered,
                "agree": agree,
            }),
        ),
        text,
        ok: agree,
    })
}

pub fn cmd_free_factor(input: &EngineInput, limit: usize) -> Result<Outcome, WorkbenchError> {
    let family = input.family()?;
    let verdict = timed("the free-factor search", || {
        family.free_factor_search(&input.h, &input.l, limit)
    })?;
    let validated = match &verdict {
        FactorVerdict::IsFactor { witness } => {
            Some(family.validate_factor_witness(&input.h, witness, &input.l)?)
        }
        FactorVerdict::NotFactor => None,
    };
    let text = match (&verdict, validated) {
        (FactorVerdict::IsFactor { witness }, Some(valid)) => format!(
            "H is a free factor of L; complement: {}{}\n",
            witness
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            if valid { "" } else { " (WITNESS FAILED VALIDATION)" }
        ),
        _ => String::from("no free complement of H inside ⟨L⟩ in this family\n"),
    };
    Ok(Outcome {
        document: document(
            "free_factor",
            json!({ "result": verdict, "validated": validated }),
        ),
        text,
        ok: validated != Some(false),
    })
}

fn freeness_summary(family: &SetFamily, almost: bool) -> (Value, String) {
    let outcome = find_transversal(family);
    let free = outcome.is_transversal();
    let almost_free = almost.then(|| free || is_almost_free(family));
    let summary = match (free, almost_free) {
        (true, _) => "free",
        (false, Some(true)) => "almost free, not free",
        (false, Some(false)) => "not almost free",
        (false, None) => "not free",
    };
    let mut text = format!("{} sets: {summary}\n", family.len());
    match &outcome {
        TransversalOutcome::Transversal { assignment } => {
            for (set, atom) in assignment {
                let _ = writeln!(text, "  set {set} -> {atom}");
            }
        }
        TransversalOutcome::Violator { sets, union } => {
            let _ = writeln!(
                text,
                "  Hall violator: sets {sets:?} cover only {union:?} ({} < {})",
                union.len(),
                sets.len()
            );
        }
    }
    let value = json!({
        "sets": family.len(),
        "free": free,
        "almost_free": almost_free,
        "summary": summary,
        "outcome": outcome,
    });
    (value, text)
}

pub fn cmd_transversal(family: &SetFamily, almost: bool) -> Outcome {
    let (value, text) = freeness_summary(family, almost);
    Outcome {
        document: document("transversal", value),
        text,
        ok: true,
    }
}

/// Validates a tree system, or a based family (a document with a `system`
/// field), in which case the induced set family is also analysed.
pub fn cmd_tree_validate(input: &str, what: &str) -> Result<Outcome, WorkbenchError> {
    let value: Value = docs::parse(input, what)?;
    if value.get("system").is_some() {
        let based: BasedFamily = docs::parse(input, what)?;
        let violations = validate_tree_system(&based.system);
        let mut text = String::new();
        for v in &violations {
            let _ = writeln!(text, "  {:?} [{}] {}", v.node, v.clause, v.detail);
        }
        let family = if violations.is_empty() {
            let family = based_family_to_setfamily(&based)?;
            let (value, summary) = freeness_summary(&family, true);
            text.push_str(&summary);
            Some(json!({ "family": family, "freeness": value }))
        } else {
            None
        };
        return Ok(Outcome {
            ok: violations.is_empty(),
            document: document(
                "tree_validation",
                json!({ "valid": violations.is_empty(), "violations": violations, "based_family": family }),
            ),
            text: format!("based family: {} violations\n{text}", violations.len()),
        });
    }
    let system: TreeSystem = docs::parse(input, what)?;
    let violations = validate_tree_system(&system);
    let mut text = format!(
        "tree system of height {}: {} violations\n",
        system.height,
        violations.len()
    );
    for v in &violations {
        let _ = writeln!(text, "  {:?} [{}] {}", v.node, v.clause, v.detail);
    }
    Ok(Outcome {
        ok: violations.is_empty(),
        document: document(
            "tree_validation",
            json!({ "valid": violations.is_empty(), "violations": violations }),
        ),
        text,
    })
}

pub fn cmd_selftest(seed: u64, cases: usize) -> Outcome {
    let summary = timed("the self-test", || selftest::run(seed, cases, Fault::None));
    let mut text = format!("self-test, seed {seed}, {cases} cases per randomized suite\n");
    for suite in &summary.suites {
        let _ = writeln!(
            text,
            "  [{}] {}: {} passed, {} failed",
            if suite.failed == 0 { "pass" } else { "FAIL" },
            suite.name,
            suite.passed,
            suite.failed
        );
        if let Some(first) = &suite.first_failure {
            let _ = writeln!(text, "      first failure: {first}");
        }
    }
    Outcome {
        ok: summary.ok(),
        document: document("selftest", &summary),
        text,
    }
}

/// Default padding, re-exported for the CLI.
pub const PAD: u32 = DEFAULT_PAD;
