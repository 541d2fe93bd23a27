//! `omega` subcommand: print ω, ω̂ and ω₀ for each sweep point.

use std::fmt::Write as _;

use entropic_core::majorization::shannon_entropy;
use entropic_core::omega::{compute_omega, compute_omega_hat, omega_simple};
use entropic_core::MajVector;

use crate::config::ScenarioConfig;
use crate::{CliError, Result};

fn fmt_vec(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", cells.join(", "))
}

fn line(out: &mut String, name: &str, v: &MajVector, config: &ScenarioConfig) {
    let _ = writeln!(
        out,
        "  {name:<7} = {}  H = {:.12} {}",
        fmt_vec(v.entries()),
        shannon_entropy(v.entries(), config.log_base),
        config.log_base.unit()
    );
}

pub fn run_omega(config: &ScenarioConfig) -> Result<String> {
    let names = config.param_names();
    let mut out = String::new();
    for p in config.points()? {
        let ctx = |e| CliError::from_core(format!("row {}", p.index), e);
        let omega = compute_omega(&p.bases, config.budget).map_err(ctx)?;
        let hat = compute_omega_hat(&p.bases, config.budget).map_err(ctx)?;
        let simple = omega_simple(&p.bases, config.budget).map_err(ctx)?;
        let params: Vec<String> = names.iter().zip(&p.params).map(|(n, v)| format!("{n} = {v}")).collect();
        let _ = writeln!(out, "{} (N = {}, d = {})", params.join(", "), p.bases.len(), p.bases[0].dim());
        let _ = writeln!(out, "  s_k     = {}", fmt_vec(&omega.s));
        let _ = writeln!(out, "  s_hat_k = {}", fmt_vec(&hat.s));
        line(&mut out, "omega", &omega.omega, config);
        line(&mut out, "omega^", &hat.omega, config);
        line(&mut out, "omega_0", &simple, config);
    }
    Ok(out)
}
