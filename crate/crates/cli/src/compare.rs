//! Parameter sweeps: one table row per grid point.

use entropic_core::report::{evaluate, BoundId, EvalOptions};
use rayon::prelude::*;

use crate::config::ScenarioConfig;
use crate::output::Table;
use crate::{CliError, Result};

/// Slack for the `lhs ≥ bound` check reported in the notes.
pub const SOUNDNESS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub table: Table,
    /// Provenance and warnings, deduplicated, in first-seen order.
    pub notes: Vec<String>,
}

/// Bound ids evaluated per row: the configured bounds plus the LHS when a state is given.
pub fn evaluated_ids(config: &ScenarioConfig, has_state: bool) -> Vec<BoundId> {
    let mut ids = config.bounds.clone();
    if has_state && !ids.contains(&BoundId::EntropySumLhs) {
        ids.push(BoundId::EntropySumLhs);
    }
    ids
}

pub fn run_compare(config: &ScenarioConfig) -> Result<Comparison> {
    if config.bounds.is_empty() {
        return Err(CliError::Config("no bounds requested".into()));
    }
    let points = config.points()?;
    let opts = EvalOptions {
        log_base: config.log_base,
        budget: config.budget,
        work_limit: config.work_limit,
    };
    let has_state = config.state != crate::config::StateChoice::None;
    let ids = evaluated_ids(config, has_state);

    let rows: Vec<(Vec<f64>, Vec<String>)> = points
        .par_iter()
        .map(|p| {
            let dim = p.bases[0].dim();
            let state = config.state_for(p.index, dim)?;
            let report = evaluate(&p.bases, state.as_ref(), &ids, opts)
                .map_err(|e| CliError::from_core(format!("row {}", p.index), e))?;
            let mut cells = p.params.clone();
            cells.extend(report.values.iter().map(|&(_, v)| v));
            for d in &config.differences {
                let l = report.get(d.left).expect("difference operands are evaluated");
                let r = report.get(d.right).expect("difference operands are evaluated");
                cells.push(l - r);
            }
            let mut notes = report.notes.clone();
            for v in report.violations(SOUNDNESS_SLACK) {
                notes.push(format!(
                    "warning: row {} ({:?}): {} = {} exceeds {} = {}",
                    p.index, p.params, v.bound, v.value, v.target, v.target_value
                ));
            }
            Ok((cells, notes))
        })
        .collect::<Result<_>>()?;

    let mut notes = vec![format!(
        "log base {} ({}); columns: {}",
        config.log_base,
        config.log_base.unit(),
        ids.iter().map(|i| i.name()).collect::<Vec<_>>().join(", ")
    )];
    let mut table_rows = Vec::with_capacity(rows.len());
    for (cells, row_notes) in rows {
        for n in row_notes {
            if !notes.contains(&n) {
                notes.push(n);
            }
        }
        table_rows.push(cells);
    }

    let mut columns: Vec<String> = ids.iter().map(|i| i.name().to_string()).collect();
    columns.extend(config.differences.iter().map(|d| d.name.clone()));
    Ok(Comparison {
        table: Table {
            param_names: config.param_names().into_iter().map(String::from).collect(),
            columns,
            rows: table_rows,
        },
        notes,
    })
}
