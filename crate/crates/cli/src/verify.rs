//! `verify` subcommand: invariant suites with counterexample dumps.
//!
//! Every property is checked at every sweep point of every scenario; a failing
//! check records the point, the state seed and the offending values. Results
//! are aggregated in scenario and grid order so the report is deterministic.

use std::fmt::Write as _;

use entropic_core::admixture::{admixture_bound_with_limit, cyclic_pre_bound};
use entropic_core::channel::{average_i, liu_b, liu_b_min, state_dependent_i_ordered, AverageMode, MeasurementOrder};
use entropic_core::linalg::top_singular_value;
use entropic_core::majorization::{majorization_gap, tensor_product, MAJORIZATION_SLACK};
use entropic_core::omega::{compute_omega, compute_omega_hat, compute_s_k, omega_simple};
use entropic_core::quantum::{born_probabilities, overlap_matrix, von_neumann_entropy, OverlapMatrix};
use entropic_core::report::{evaluate, BoundId, EvalOptions};
use entropic_core::scenarios::random_state;
use entropic_core::{ComplexMatrix, DensityMatrix, Error, LogBase, MeasurementBasis, ProbVector};
use rayon::prelude::*;

use crate::config::{Point, ScenarioConfig, Source, StateChoice};
use crate::{CliError, Result};

const TOL: f64 = 1e-9;

/// Seed base for the states used when a scenario has no `[state]` section.
pub const FALLBACK_STATE_SEED: u64 = 0x5eed;

pub const PROPERTIES: [&str; 12] = [
    "basis_orthonormality",
    "born_validity",
    "overlap_doubly_stochastic",
    "omega_majorizes_joint",
    "omega_hat_relaxation",
    "omega_simple_relaxation",
    "bound_soundness",
    "channel_chain",
    "b_min_dominates_b",
    "liu_b_oracle",
    "pre_bound_identity",
    "two_measurement_s_k_oracle",
];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PropertyResult {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// Indexed like [`PROPERTIES`].
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|r| !r.failures.is_empty()).count()
    }

    /// One `PASS`/`FAIL` line per property, then up to five counterexamples each.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, r) in PROPERTIES.iter().zip(&self.results) {
            let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {name} ({} checks, {} failures)", r.checked, r.failures.len());
            for f in r.failures.iter().take(5) {
                let _ = writeln!(out, "    counterexample: {f}");
            }
        }
        out
    }
}

type Outcome = (usize, std::result::Result<(), String>);

struct Ctx<'a> {
    label: String,
    bases: &'a [MeasurementBasis],
    rho: &'a DensityMatrix,
    base: LogBase,
    budget: u64,
    work_limit: u64,
    out: Vec<Outcome>,
}

impl Ctx<'_> {
    fn record(&mut self, prop: &str, r: std::result::Result<(), String>) {
        let idx = PROPERTIES.iter().position(|p| *p == prop).expect("known property");
        self.out.push((idx, r.map_err(|e| format!("{}: {e}", self.label))));
    }
}

/// Budget errors abort the run; everything else is a property failure.
fn core<T>(r: entropic_core::Result<T>) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(e @ (Error::BudgetExceeded { .. } | Error::WorkBudgetExceeded { .. })) => Err(CliError::Budget(e.to_string())),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `b` by full enumeration of index paths, independent of the chain contraction.
fn naive_b(overlaps: &[OverlapMatrix], d: usize) -> f64 {
    let n = overlaps.len() + 1;
    let mut best = f64::NEG_INFINITY;
    for last in 0..d {
        let mut total = 0.0;
        for mid in 0..d.pow(n as u32 - 2) {
            let mut path = vec![0; n];
            path[n - 1] = last;
            let mut m = mid;
            for slot in path[1..n - 1].iter_mut().rev() {
                *slot = m % d;
                m /= d;
            }
            let mut inner = f64::NEG_INFINITY;
            for first in 0..d {
                path[0] = first;
                let prod: f64 = overlaps.iter().enumerate().map(|(t, c)| c.get(path[t], path[t + 1])).product();
                inner = inner.max(prod);
            }
            total += inner;
        }
        best = best.max(total);
    }
    best
}

fn subsets(d: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << d)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..d).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

/// `max 1 + σ₁(A_S₁† B_S₂)` over subset pairs with `|S₁| + |S₂| = k + 1`.
fn two_measurement_s_k(a: &MeasurementBasis, b: &MeasurementBasis, k: usize) -> f64 {
    let d = a.dim();
    let mut best = f64::NEG_INFINITY;
    for s1 in 1..=d {
        let Some(s2) = (k + 1).checked_sub(s1).filter(|s| (1..=d).contains(s)) else {
            continue;
        };
        for rows in subsets(d, s1) {
            for cols in subsets(d, s2) {
                let entries = rows
                    .iter()
                    .flat_map(|&r| {
                        cols.iter().map(move |&c| a.vector(r).iter().zip(b.vector(c)).map(|(p, q)| p.conj() * q).sum())
                    })
                    .collect();
                let x = ComplexMatrix::new(rows.len(), cols.len(), entries).expect("sized");
                best = best.max(1.0 + top_singular_value(&x));
            }
        }
    }
    best
}

fn run_point(ctx: &mut Ctx) -> Result<()> {
    let (bases, rho, base) = (ctx.bases, ctx.rho, ctx.base);
    let n = bases.len();
    let d = bases[0].dim();

    // Born and overlap sanity.
    let mut probs: Vec<ProbVector> = Vec::new();
    for b in bases {
        match core(born_probabilities(rho, b))? {
            Ok(p) => {
                let sum: f64 = p.probs().iter().sum();
                ctx.record(
                    "born_validity",
                    check((sum - 1.0).abs() < 1e-10 && p.probs().iter().all(|&x| x >= 0.0), || {
                        format!("basis {:?}: p = {:?}", b.label(), p.probs())
                    }),
                );
                probs.push(p);
            }
            Err(e) => ctx.record("born_validity", Err(e)),
        }
    }
    if probs.len() != n {
        return Ok(());
    }
    let mut overlaps = Vec::new();
    for w in bases.windows(2) {
        let c = overlap_matrix(&w[0], &w[1]).expect("same dimension");
        ctx.record(
            "overlap_doubly_stochastic",
            check(c.stochastic_defect() < 1e-10, || {
                format!("{:?}/{:?}: defect {:e}", w[0].label(), w[1].label(), c.stochastic_defect())
            }),
        );
        overlaps.push(c);
    }

    // Majorization chain.
    let joint = tensor_product(&probs);
    let omega = core(compute_omega(bases, ctx.budget))?;
    let hat = core(compute_omega_hat(bases, ctx.budget))?;
    let simple = core(omega_simple(bases, ctx.budget))?;
    let (omega, hat, simple) = match (omega, hat, simple) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (a, b, c) => {
            let e = [a.err(), b.err(), c.err()].into_iter().flatten().collect::<Vec<_>>().join("; ");
            ctx.record("omega_majorizes_joint", Err(e));
            return Ok(());
        }
    };
    let gap = majorization_gap(omega.omega.entries(), joint.probs());
    ctx.record(
        "omega_majorizes_joint",
        check(gap <= MAJORIZATION_SLACK, || format!("gap {gap:e}, ω = {:?}", omega.omega.entries())),
    );
    let gap = majorization_gap(hat.omega.entries(), omega.omega.entries());
    ctx.record(
        "omega_hat_relaxation",
        check(gap <= MAJORIZATION_SLACK, || {
            format!("gap {gap:e}, ω = {:?}, ω̂ = {:?}", omega.omega.entries(), hat.omega.entries())
        }),
    );
    let gap = majorization_gap(simple.entries(), omega.omega.entries());
    ctx.record(
        "omega_simple_relaxation",
        check(gap <= MAJORIZATION_SLACK, || format!("gap {gap:e}, ω₀ = {:?}", simple.entries())),
    );

    // Every applicable bound against its target.
    let mut ids = vec![
        BoundId::LiuB,
        BoundId::LiuBMin,
        BoundId::CyclicAverageI,
        BoundId::Admixture,
        BoundId::AdmixtureOmegaHat,
        BoundId::HOmega,
        BoundId::HOmegaHat,
        BoundId::HOmegaSimple,
        BoundId::EntropySum,
        BoundId::EntropySumLhs,
    ];
    if n == 2 {
        ids.extend([BoundId::Deutsch, BoundId::MaassenUffink, BoundId::ColesPiani]);
    }
    let opts = EvalOptions {
        log_base: base,
        budget: ctx.budget,
        work_limit: ctx.work_limit,
    };
    match core(evaluate(bases, Some(rho), &ids, opts))? {
        Ok(report) => {
            let v = report.violations(TOL);
            ctx.record(
                "bound_soundness",
                check(v.is_empty(), || {
                    v.iter()
                        .map(|v| format!("{} = {} > {} = {}", v.bound, v.value, v.target, v.target_value))
                        .collect::<Vec<_>>()
                        .join("; ")
                }),
            );
        }
        Err(e) => ctx.record("bound_soundness", Err(e)),
    }

    // Channel chain: LHS ≥ cyclic average ≥ min cyclic I.
    let lhs: f64 = probs
        .iter()
        .map(|p| entropic_core::majorization::shannon_entropy(p.probs(), base))
        .sum::<f64>()
        - (n as f64 - 1.0) * von_neumann_entropy(rho, base);
    let cyc: std::result::Result<Vec<f64>, String> = (0..n)
        .map(|s| state_dependent_i_ordered(rho, bases, &MeasurementOrder::cyclic(n, s), base).map_err(|e| e.to_string()))
        .collect();
    let avg = average_i(rho, bases, AverageMode::Cyclic, base).map_err(|e| e.to_string());
    match (cyc, avg) {
        (Ok(cyc), Ok(avg)) => {
            let min = cyc.iter().copied().fold(f64::INFINITY, f64::min);
            ctx.record(
                "channel_chain",
                check(lhs >= avg - TOL && avg >= min - TOL, || format!("lhs {lhs}, cyclic average {avg}, min I {min}")),
            );
            match core(cyclic_pre_bound(rho, bases, base))? {
                Ok(pre) => ctx.record(
                    "pre_bound_identity",
                    check((pre - avg).abs() <= TOL, || format!("pre-bound {pre} vs cyclic average {avg}")),
                ),
                Err(e) => ctx.record("pre_bound_identity", Err(e)),
            }
        }
        (a, b) => ctx.record("channel_chain", Err(format!("{:?} {:?}", a.err(), b.err()))),
    }

    // b: contraction vs enumeration, and the orbit minimum.
    match (liu_b(bases), liu_b_min(bases)) {
        (Ok(b), Ok((b_min, order))) => {
            let naive = naive_b(&overlaps, d);
            ctx.record("liu_b_oracle", check((b - naive).abs() <= 1e-12, || format!("contraction {b} vs enumeration {naive}")));
            ctx.record(
                "b_min_dominates_b",
                check(-base.log(b_min) >= -base.log(b), || format!("b_min {b_min} (order {order}) vs b {b}")),
            );
        }
        (a, b) => ctx.record("liu_b_oracle", Err(format!("{:?} {:?}", a.err(), b.err()))),
    }

    // Admixture with ω must not exceed the LHS (already in bound_soundness); also
    // exercise the explicit work limit path.
    if let Err(e) = core(admixture_bound_with_limit(bases, &omega.omega, base, ctx.work_limit))? {
        ctx.record("bound_soundness", Err(e));
    }

    if n == 2 {
        for k in 1..=(2 * (d - 1) + 1) {
            match core(compute_s_k(bases, k, ctx.budget))? {
                Ok(s) => {
                    let oracle = two_measurement_s_k(&bases[0], &bases[1], k);
                    ctx.record(
                        "two_measurement_s_k_oracle",
                        check((s - oracle).abs() <= TOL, || format!("k = {k}: s_k {s} vs oracle {oracle}")),
                    );
                }
                Err(e) => ctx.record("two_measurement_s_k_oracle", Err(e)),
            }
        }
    }
    Ok(())
}

fn state_for(config: &ScenarioConfig, p: &Point, dim: usize) -> Result<(DensityMatrix, String)> {
    if config.state == StateChoice::None {
        let seed = FALLBACK_STATE_SEED + p.index as u64;
        let rho = random_state(dim, dim.min(2), seed).map_err(|e| CliError::from_core("state", e))?;
        return Ok((rho, format!("random rank-{} state, seed {seed}", dim.min(2))));
    }
    let rho = config.state_for(p.index, dim)?.expect("state configured");
    let desc = match &config.state {
        StateChoice::PureRandom { seed } => format!("pure state, seed {}", seed.wrapping_add(p.index as u64)),
        StateChoice::Random { rank, seed } => format!("rank-{rank} state, seed {}", seed.wrapping_add(p.index as u64)),
        StateChoice::MaximallyMixed => "maximally mixed state".to_string(),
        StateChoice::Explicit { line, .. } => format!("state from line {line}"),
        StateChoice::None => unreachable!(),
    };
    Ok((rho, desc))
}

pub fn run_verify(configs: &[ScenarioConfig]) -> Result<VerifyReport> {
    let mut results = vec![PropertyResult::default(); PROPERTIES.len()];
    let mut add = |outcomes: Vec<Outcome>| {
        for (idx, r) in outcomes {
            results[idx].checked += 1;
            if let Err(e) = r {
                results[idx].failures.push(e);
            }
        }
    };

    for (ci, config) in configs.iter().enumerate() {
        // Explicit bases are checked before anything relies on them.
        if let Source::Explicit { bases } = &config.source {
            let outcomes: Vec<Outcome> = bases
                .iter()
                .map(|b| {
                    let r = MeasurementBasis::validate(&b.label, &b.vectors)
                        .map_err(|e| format!("scenario {ci}, line {}: {e}", b.line));
                    (0, r)
                })
                .collect();
            let bad = outcomes.iter().any(|(_, r)| r.is_err());
            add(outcomes);
            if bad {
                continue;
            }
        }

        let points = config.points()?;
        let names = config.param_names();
        let per_point: Vec<Vec<Outcome>> = points
            .par_iter()
            .map(|p| {
                let dim = p.bases[0].dim();
                let (rho, state_desc) = state_for(config, p, dim)?;
                let params: Vec<String> = names.iter().zip(&p.params).map(|(n, v)| format!("{n} = {v}")).collect();
                let mut ctx = Ctx {
                    label: format!("scenario {ci}, {} ({state_desc})", params.join(", ")),
                    bases: &p.bases,
                    rho: &rho,
                    base: config.log_base,
                    budget: config.budget,
                    work_limit: config.work_limit,
                    out: Vec::new(),
                };
                if !matches!(config.source, Source::Explicit { .. }) {
                    for b in &p.bases {
                        let r = MeasurementBasis::validate(b.label(), b.vectors()).map_err(|e| e.to_string());
                        ctx.record("basis_orthonormality", r);
                    }
                }
                run_point(&mut ctx)?;
                Ok(ctx.out)
            })
            .collect::<Result<_>>()?;
        for outcomes in per_point {
            add(outcomes);
        }
    }
    Ok(VerifyReport { results })
}
