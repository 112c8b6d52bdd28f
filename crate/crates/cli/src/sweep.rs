//! Runs the relational pipeline over every two-generated subgroup of every
//! small product.

use arrowaut_core::goursat::{GeneratingData, GoursatDecomposition};
use arrowaut_core::group::{subgroups_two_generated, DirectProduct, FiniteGroup};
use arrowaut_core::relsys::RelPipeline;
use arrowaut_core::{Result, SearchBudget};
use rayon::prelude::*;
use serde::Serialize;

use crate::pipeline::{h_generator_pairs, verify_relational, RelArtifacts};
use crate::report::Report;

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub g1: String,
    pub g2: String,
    pub h_order: usize,
    pub h_generators: Vec<(usize, usize)>,
    pub checks: usize,
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub instances: usize,
    pub failures: usize,
    pub entries: Vec<SweepEntry>,
}

/// Ordered pairs with `|G₁|·|G₂| ≤ max_order`, and all their subgroups.
pub fn sweep_instances(groups: &[FiniteGroup], max_order: usize) -> Result<Vec<(DirectProduct, usize)>> {
    let mut out = Vec::new();
    for g1 in groups {
        for g2 in groups {
            if g1.order() * g2.order() > max_order {
                continue;
            }
            let p = DirectProduct::new(g1, g2)?;
            let count = subgroups_two_generated(p.group()).len();
            out.extend((0..count).map(|i| (p.clone(), i)));
        }
    }
    Ok(out)
}

fn run_one(p: &DirectProduct, index: usize, budget: &SearchBudget) -> Result<SweepEntry> {
    let h = subgroups_two_generated(p.group()).swap_remove(index);
    let gd = GeneratingData::new(GoursatDecomposition::new(p, &h)?)?;
    let pipeline = RelPipeline::new(gd.clone())?;
    let mut report = Report::default();
    verify_relational(&gd, &RelArtifacts::from_pipeline(&pipeline), budget, &mut report)?;
    Ok(SweepEntry {
        g1: p.left().name().into(),
        g2: p.right().name().into(),
        h_order: h.len(),
        h_generators: h_generator_pairs(&gd),
        checks: report.checks.len(),
        failed: report.failures().iter().map(|c| format!("{}: {}", c.name, c.detail)).collect(),
    })
}

/// Verifies every instance in parallel; entries keep instance order. An
/// error inside one instance is recorded as a failure of that instance.
pub fn run_sweep(groups: &[FiniteGroup], max_order: usize, budget: &SearchBudget) -> Result<SweepReport> {
    let instances = sweep_instances(groups, max_order)?;
    let entries: Vec<SweepEntry> = instances
        .par_iter()
        .map(|(p, i)| {
            run_one(p, *i, budget).unwrap_or_else(|e| SweepEntry {
                g1: p.left().name().into(),
                g2: p.right().name().into(),
                h_order: 0,
                h_generators: Vec::new(),
                checks: 0,
                failed: vec![format!("error: {e}")],
            })
        })
        .collect();
    let failures = entries.iter().filter(|e| !e.failed.is_empty()).count();
    Ok(SweepReport { instances: entries.len(), failures, entries })
}
