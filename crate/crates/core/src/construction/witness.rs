use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::builder::{build_collapse_model, build_generic_model, BuiltModel};
use super::plan::StagePlan;
use super::report::{CpReport, Status, Truncation, Witness};
use super::ConstructionError;
use crate::engine::{FactorVerdict, Family, Tuple};
use crate::model::ProjectionAlgebra;
use crate::term::ConstantName;

/// Bound on any closure computed while searching for a free complement.
pub const FACTOR_SEARCH_LIMIT: usize = 1 << 16;

/// Checks a model against the finite form of the defining conditions:
/// equations, projections below arity, level distinctness and that every
/// carrier element names a constant. Violations become report entries.
pub fn verify_k0_truncation(model: &ProjectionAlgebra, plan: &StagePlan) -> CpReport {
    let mut report = CpReport::new(Truncation {
        stages: plan.len(),
        ..Truncation::default()
    });

    for stage in plan.stages() {
        let name = format!("{} : {} = {}(…)", stage.stage, stage.t, stage.symbol.name);
        match stage.holds_in(model) {
            Ok(true) => report.push("equations", name, Status::Pass, String::new()),
            Ok(false) => {
                let position = model.projection(&stage.symbol.name).unwrap_or(0);
                let argument = stage
                    .argument(position)
                    .map(|c| c.to_string())
                    .unwrap_or_default();
                report.push(
                    "equations",
                    name,
                    Status::Fail,
                    format!(
                        "projection onto position {position} ({argument}) differs from {}",
                        stage.t
                    ),
                );
            }
            Err(e) => report.push("equations", name, Status::Fail, e.to_string()),
        }
    }

    let out_of_range: Vec<String> = plan
        .stages()
        .iter()
        .filter_map(|s| match model.projection(&s.symbol.name) {
            Some(p) if s.symbol.has_position(p) => None,
            Some(p) => Some(format!("{} projects onto {p}", s.symbol.name)),
            None => Some(format!("{} is not interpreted", s.symbol.name)),
        })
        .collect();
    let status = if out_of_range.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    report.push(
        "projections",
        String::from("below arity"),
        status,
        out_of_range.join("; "),
    );

    let levels: BTreeSet<u32> = model
        .constants()
        .keys()
        .filter_map(|c| match *c {
            ConstantName::C { m, .. } => Some(m),
            ConstantName::D { .. } => None,
        })
        .collect();
    for level in levels {
        let mut seen: BTreeMap<usize, ConstantName> = BTreeMap::new();
        let mut clashes = Vec::new();
        for (&name, &value) in model.constants() {
            let member = match name {
                ConstantName::C { m, .. } => m == level,
                ConstantName::D { n } => n < level,
            };
            if member {
                if let Some(other) = seen.insert(value, name) {
                    clashes.push(format!("{other} = {name}"));
                }
            }
        }
        let status = if clashes.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        report.push(
            "distinctness",
            format!("level {level}"),
            status,
            clashes.join("; "),
        );
    }

    let named: BTreeSet<usize> = model.constants().values().copied().collect();
    let unnamed: Vec<String> = (0..model.carrier_size())
        .filter(|v| !named.contains(v))
        .map(|v| v.to_string())
        .collect();
    let status = if unnamed.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    };
    let detail = if unnamed.is_empty() {
        String::new()
    } else {
        format!("elements {} name no constant", unnamed.join(","))
    };
    report.push("carrier", String::from("every element is named"), status, detail);
    report
}

/// The family `K = {generic} ∪ {collapse m : m ≤ m_max}` used by
/// [`cp1_finite_witness`]: coordinate 0 is the generic model, coordinate
/// `m + 1` the collapse model for `m`.
pub fn witness_family(
    plan: &StagePlan,
    m_max: u32,
    pad: u32,
) -> Result<(Family, Vec<BuiltModel>), ConstructionError> {
    let mut built = Vec::with_capacity(m_max as usize + 2);
    built.push(build_generic_model(plan, pad)?);
    for m in 0..=m_max {
        built.push(build_collapse_model(plan, m, pad)?);
    }
    let family = Family::new(plan.vocabulary(), built.iter().map(|b| b.model.clone()).collect())?;
    Ok((family, built))
}

fn constant_tuple(built: &[BuiltModel], name: ConstantName) -> Result<Tuple, ConstructionError> {
    built
        .iter()
        .map(|b| b.model.interpret(&name).map_err(ConstructionError::from))
        .collect::<Result<Vec<_>, _>>()
        .map(Tuple)
}

fn subsets(universe: &[u32], max_size: usize) -> Vec<Vec<u32>> {
    let mut out = alloc::vec![Vec::new()];
    for size in 1..=max_size.min(universe.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| universe[i]).collect());
            let Some(p) = (0..size).rev().find(|&p| idx[p] != p + universe.len() - size) else {
                break;
            };
            idx[p] += 1;
            for q in p + 1..size {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

/// Finite evidence for the construction principle at this truncation.
///
/// Clause 1: for every `J ⊆ {0..m_max}` with `|J| ≤ j_max`, the `d(j)`
/// (`j ∈ J`) generate a free factor of a free truncation `L` of rank
/// `ℓ + |window level ℓ| + 2`, where `ℓ = max J + 1`.
///
/// Clause 2 is reported as a membership obstruction: `c(0,0)` is not in the
/// subalgebra generated by `d(0)..d(m-1)` and two fresh free generators, and
/// the collapse model for `m` is a coordinate where no generator reaches
/// it. This is evidence, not a decision of non-factorhood.
pub fn cp1_finite_witness(
    plan: &StagePlan,
    m_max: u32,
    j_max: usize,
    pad: u32,
) -> Result<CpReport, ConstructionError> {
    let window = plan.max_level().saturating_add(pad);
    let covered = m_max.min(window.saturating_sub(1));
    let (family, built) = witness_family(plan, covered, pad)?;
    let labels: Vec<String> = built.iter().map(BuiltModel::label).collect();
    let mut report = CpReport::new(Truncation {
        stages: plan.len(),
        window: Some(window),
        pad: Some(pad),
        m_max: Some(m_max),
        j_max: Some(j_max),
        models: labels.clone(),
    });
    report.notes.push(String::from(
        "clause-2 entries are membership obstructions, not proofs that H fails to be a free factor",
    ));

    for b in &built {
        let sub = verify_k0_truncation(&b.model, plan);
        let status = if sub.passed() { Status::Pass } else { Status::Fail };
        let detail = format!(
            "{} checks, {} violations",
            sub.checks.len(),
            sub.counts.fail + sub.counts.insufficient
        );
        report.push("models", b.label(), status, detail);
    }

    let d_tuple = |n: u32| constant_tuple(&built, ConstantName::d(n));

    let universe: Vec<u32> = (0..=covered).collect();
    for j_set in subsets(&universe, j_max) {
        let level = j_set.iter().max().map_or(0, |&j| j + 1);
        let mut names: Vec<String> = Vec::new();
        let mut basis: Vec<Tuple> = Vec::new();
        for i in 0..level {
            names.push(ConstantName::d(i).to_string());
            basis.push(d_tuple(i)?);
        }
        for n in 0..=window - level {
            let c = ConstantName::c(level, n);
            names.push(c.to_string());
            basis.push(constant_tuple(&built, c)?);
        }
        let fresh = family.extend_with_free(&basis, 2)?;
        names.extend(["e0".to_string(), "e1".to_string()]);
        basis.extend(fresh);
        let h: Vec<Tuple> = j_set.iter().map(|&j| d_tuple(j)).collect::<Result<_, _>>()?;
        let name = format!(
            "J = {{{}}}",
            j_set.iter().map(|j| j.to_string()).collect::<Vec<_>>().join(",")
        );
        if !family.is_free_generating(&basis) {
            report.push(
                "clause-1 (free factor)",
                name,
                Status::Fail,
                format!("level-{level} basis is not free generating"),
            );
            continue;
        }
        match family.free_factor_search(&h, &basis, FACTOR_SEARCH_LIMIT)? {
            FactorVerdict::IsFactor { witness } => {
                let mut combined = h.clone();
                combined.extend(witness.iter().cloned());
                let status = if family.is_free_generating(&combined) {
                    Status::Pass
                } else {
                    Status::Fail
                };
                let generators: Vec<String> = basis
                    .iter()
                    .zip(&names)
                    .filter(|(t, _)| witness.contains(t))
                    .map(|(_, n)| n.clone())
                    .collect();
                report.push_with(
                    "clause-1 (free factor)",
                    name,
                    status,
                    format!(
                        "complement of {} generators inside a rank-{} basis at level {level}",
                        witness.len(),
                        basis.len()
                    ),
                    Some(Witness::FactorComplement {
                        generators,
                        tuples: witness,
                    }),
                );
            }
            FactorVerdict::NotFactor => report.push(
                "clause-1 (free factor)",
                name,
                Status::Fail,
                String::from("no free complement inside the truncation"),
            ),
        }
    }

    let c00 = constant_tuple(&built, ConstantName::c(0, 0))?;
    for m in 0..=m_max {
        let name = format!("m = {m}");
        if m > covered {
            report.push(
                "clause-2 (membership obstruction)",
                name,
                Status::Insufficient,
                format!("insufficient truncation: d({m}) needs window > {window}; raise the padding"),
            );
            continue;
        }
        let all_d: Vec<Tuple> = (0..=m).map(d_tuple).collect::<Result<_, _>>()?;
        let fresh = family.extend_with_free(&all_d, 2)?;
        let mut generators: Vec<Tuple> = all_d[..m as usize].to_vec();
        generators.extend(fresh);
        let member = family.membership_closure(&generators, &c00)?;
        let uncovered = family.uncovered_coordinates(&generators, &c00);
        let coordinate = m as usize + 1;
        let confirmed = !member && uncovered.contains(&coordinate);
        let status = if confirmed { Status::Pass } else { Status::Fail };
        let span = match m {
            0 => String::from("e0, e1"),
            1 => String::from("d(0), e0, e1"),
            _ => format!("d(0)..d({}), e0, e1", m - 1),
        };
        let detail = if member {
            format!("c(0,0) lies in the subalgebra generated by {span}")
        } else {
            format!("c(0,0) is outside the subalgebra generated by {span}")
        };
        report.push_with(
            "clause-2 (membership obstruction)",
            name,
            status,
            detail,
            confirmed.then(|| Witness::Obstruction {
                coordinate,
                model: labels[coordinate].clone(),
                uncovered: uncovered.iter().map(|&i| labels[i].clone()).collect(),
            }),
        );
    }
    Ok(report)
}
