//! Scenario files.
//!
//! A scenario is a TOML document; the full grammar is in the README. Schema
//! errors carry the line and column reported by the TOML parser, and semantic
//! errors (unknown bound for this N, non-orthonormal basis, bad state) name the
//! line of the offending entry.

use std::ops::Range;
use std::path::{Path, PathBuf};

use entropic_core::admixture::DEFAULT_WORK_LIMIT;
use entropic_core::omega::DEFAULT_BUDGET;
use entropic_core::report::BoundId;
use entropic_core::rng::SplitMix64;
use entropic_core::scenarios::{qutrit_family, random_basis, random_state, QutritFamilyParams};
use entropic_core::{Complex64, ComplexMatrix, DensityMatrix, LogBase, MeasurementBasis};
use serde::Deserialize;
use toml::Spanned;

use crate::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    log_base: Option<Spanned<String>>,
    #[serde(default)]
    bounds: Vec<Spanned<String>>,
    budget: Option<u64>,
    work_limit: Option<u64>,
    source: RawSource,
    state: Option<RawState>,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    differences: Vec<Spanned<RawDifference>>,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum SourceKind {
    QutritFamily,
    Explicit,
    Random,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    kind: Spanned<SourceKind>,
    a: Option<GridSpec>,
    phi: Option<f64>,
    bases: Option<Vec<Spanned<RawBasis>>>,
    dim: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    instances: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

/// A complex number written as `x` or `[re, im]`.
#[derive(Debug, Deserialize, Clone, Copy)]
#[serde(untagged)]
enum CNum {
    Real(f64),
    Pair([f64; 2]),
}

impl From<CNum> for Complex64 {
    fn from(c: CNum) -> Self {
        match c {
            CNum::Real(x) => Complex64::new(x, 0.0),
            CNum::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBasis {
    label: Option<String>,
    vectors: Vec<Vec<CNum>>,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum StateKind {
    None,
    MaximallyMixed,
    PureRandom,
    Random,
    Explicit,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    kind: Spanned<StateKind>,
    seed: Option<u64>,
    rank: Option<usize>,
    matrix: Option<Spanned<Vec<Vec<CNum>>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv: Option<PathBuf>,
    svg: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDifference {
    name: String,
    left: String,
    right: String,
}

/// Basis vectors as written, before the orthonormality check.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitBasis {
    pub label: String,
    pub vectors: Vec<Vec<Complex64>>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    QutritFamily { a: Vec<f64>, phi: f64 },
    Explicit { bases: Vec<ExplicitBasis> },
    /// `instances` sets of `n` random bases. Instance `r` seeds basis `m` with the
    /// `m`-th SplitMix64 output of `seed + r`.
    Random {
        dim: usize,
        n: usize,
        seed: u64,
        instances: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateChoice {
    None,
    MaximallyMixed,
    /// Row `r` uses `random_state(d, 1, seed + r)`.
    PureRandom { seed: u64 },
    /// Row `r` uses `random_state(d, rank, seed + r)`.
    Random { rank: usize, seed: u64 },
    Explicit { matrix: ComplexMatrix, line: usize },
}

/// An extra output column `left − right`.
#[derive(Debug, Clone, PartialEq)]
pub struct Difference {
    pub name: String,
    pub left: BoundId,
    pub right: BoundId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub source: Source,
    pub state: StateChoice,
    pub bounds: Vec<BoundId>,
    pub differences: Vec<Difference>,
    pub log_base: LogBase,
    pub budget: u64,
    pub work_limit: u64,
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

/// One sweep point: parameter values and its measurement bases.
#[derive(Debug, Clone)]
pub struct Point {
    pub index: usize,
    pub params: Vec<f64>,
    pub bases: Vec<MeasurementBasis>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

fn at(text: &str, span: Range<usize>, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {}: {msg}", line_of(text, span)))
}

fn complex_rows(rows: Vec<Vec<CNum>>) -> Vec<Vec<Complex64>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(Complex64::from).collect())
        .collect()
}

fn expand_grid(grid: GridSpec) -> std::result::Result<Vec<f64>, String> {
    match grid {
        GridSpec::List(v) if v.is_empty() => Err("source.a is empty".into()),
        GridSpec::List(v) => Ok(v),
        GridSpec::Range { start, stop, step } => {
            if !(step > 0.0) || !(stop >= start) {
                return Err(format!("source.a range needs step > 0 and stop ≥ start (got {start}..{stop} by {step})"));
            }
            let n = ((stop - start) / step).round() as usize;
            if ((start + n as f64 * step) - stop).abs() > 1e-9 * step.max(1.0) {
                return Err(format!("source.a: step {step} does not divide {start}..{stop}"));
            }
            // Interpolate rather than accumulate so grid points are correctly rounded.
            Ok((0..=n).map(|i| start + (stop - start) * i as f64 / n.max(1) as f64).collect())
        }
    }
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;

        let log_base = match raw.log_base {
            Some(s) => s.get_ref().parse().map_err(|e| at(text, s.span(), e))?,
            None => LogBase::Two,
        };

        let src = raw.source;
        let kind_span = src.kind.span();
        let kind = *src.kind.get_ref();
        let reject = |present: bool, field: &str| -> Result<()> {
            if present {
                return Err(at(text, kind_span.clone(), format!("field source.{field} does not apply to kind {kind:?}")));
            }
            Ok(())
        };
        let source = match kind {
            SourceKind::QutritFamily => {
                reject(src.bases.is_some(), "bases")?;
                reject(src.dim.is_some() || src.n.is_some(), "dim/n")?;
                reject(src.seed.is_some() || src.instances.is_some(), "seed/instances")?;
                let a = src
                    .a
                    .ok_or_else(|| at(text, kind_span.clone(), "qutrit_family needs source.a"))?;
                let a = expand_grid(a).map_err(|e| at(text, kind_span.clone(), e))?;
                if let Some(bad) = a.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                    return Err(at(text, kind_span, format!("source.a value {bad} is outside [0, 1]")));
                }
                let phi = src
                    .phi
                    .ok_or_else(|| at(text, kind_span.clone(), "qutrit_family needs source.phi"))?;
                Source::QutritFamily { a, phi }
            }
            SourceKind::Explicit => {
                reject(src.a.is_some() || src.phi.is_some(), "a/phi")?;
                reject(src.dim.is_some() || src.n.is_some(), "dim/n")?;
                reject(src.seed.is_some() || src.instances.is_some(), "seed/instances")?;
                let bases = src
                    .bases
                    .ok_or_else(|| at(text, kind_span.clone(), "explicit needs [[source.bases]]"))?;
                if bases.len() < 2 {
                    return Err(at(text, kind_span, "explicit needs at least two bases"));
                }
                let bases: Vec<ExplicitBasis> = bases
                    .into_iter()
                    .enumerate()
                    .map(|(m, b)| {
                        let line = line_of(text, b.span());
                        let b = b.into_inner();
                        ExplicitBasis {
                            label: b.label.unwrap_or_else(|| format!("M{}", m + 1)),
                            vectors: complex_rows(b.vectors),
                            line,
                        }
                    })
                    .collect();
                let d = bases[0].vectors.len();
                for b in &bases {
                    if b.vectors.len() != d || b.vectors.iter().any(|v| v.len() != d) {
                        return Err(CliError::Config(format!(
                            "line {}: basis {:?} must be {d} vectors of length {d}",
                            b.line, b.label
                        )));
                    }
                }
                Source::Explicit { bases }
            }
            SourceKind::Random => {
                reject(src.a.is_some() || src.phi.is_some(), "a/phi")?;
                reject(src.bases.is_some(), "bases")?;
                let need = |v: Option<usize>, f: &str| v.ok_or_else(|| at(text, kind_span.clone(), format!("random needs source.{f}")));
                let dim = need(src.dim, "dim")?;
                let n = need(src.n, "n")?;
                if dim < 2 || n < 2 {
                    return Err(at(text, kind_span, "random needs dim ≥ 2 and n ≥ 2"));
                }
                Source::Random {
                    dim,
                    n,
                    seed: src.seed.unwrap_or(0),
                    instances: src.instances.unwrap_or(1).max(1),
                }
            }
        };

        let dim = match &source {
            Source::QutritFamily { .. } => 3,
            Source::Explicit { bases } => bases[0].vectors.len(),
            Source::Random { dim, .. } => *dim,
        };
        let n_meas = match &source {
            Source::QutritFamily { .. } => 3,
            Source::Explicit { bases } => bases.len(),
            Source::Random { n, .. } => *n,
        };

        let state = match raw.state {
            None => StateChoice::None,
            Some(s) => {
                let span = s.kind.span();
                let kind = *s.kind.get_ref();
                if kind != StateKind::Explicit && s.matrix.is_some() {
                    return Err(at(text, span, "state.matrix only applies to kind explicit"));
                }
                match kind {
                    StateKind::None => StateChoice::None,
                    StateKind::MaximallyMixed => StateChoice::MaximallyMixed,
                    StateKind::PureRandom => StateChoice::PureRandom {
                        seed: s.seed.unwrap_or(0),
                    },
                    StateKind::Random => {
                        let rank = s.rank.unwrap_or(dim);
                        if rank == 0 || rank > dim {
                            return Err(at(text, span, format!("state.rank must be in 1..={dim}")));
                        }
                        StateChoice::Random {
                            rank,
                            seed: s.seed.unwrap_or(0),
                        }
                    }
                    StateKind::Explicit => {
                        let m = s.matrix.ok_or_else(|| at(text, span, "explicit state needs state.matrix"))?;
                        let mspan = m.span();
                        let rows = complex_rows(m.into_inner());
                        if rows.len() != dim {
                            return Err(at(text, mspan, format!("state.matrix must be {dim}×{dim}")));
                        }
                        let matrix = ComplexMatrix::from_rows(&rows).map_err(|e| at(text, mspan.clone(), e))?;
                        DensityMatrix::new(matrix.clone()).map_err(|e| at(text, mspan.clone(), e))?;
                        StateChoice::Explicit {
                            matrix,
                            line: line_of(text, mspan),
                        }
                    }
                }
            }
        };

        let mut bounds = Vec::with_capacity(raw.bounds.len());
        for b in raw.bounds {
            let span = b.span();
            let id: BoundId = b.get_ref().parse().map_err(|e| at(text, span.clone(), e))?;
            if matches!(id, BoundId::Deutsch | BoundId::MaassenUffink | BoundId::ColesPiani) && n_meas != 2 {
                return Err(at(text, span, format!("{id} needs exactly 2 measurements, the source has {n_meas}")));
            }
            if id.needs_state() && state == StateChoice::None {
                return Err(at(text, span, format!("{id} needs a [state] section")));
            }
            if bounds.contains(&id) {
                return Err(at(text, span, format!("{id} is listed twice")));
            }
            bounds.push(id);
        }

        let mut differences = Vec::new();
        for d in raw.differences {
            let span = d.span();
            let d = d.into_inner();
            let resolve = |name: &str| -> Result<BoundId> {
                let id: BoundId = name.parse().map_err(|e| at(text, span.clone(), e))?;
                let auto_lhs = id == BoundId::EntropySumLhs && state != StateChoice::None;
                if !bounds.contains(&id) && !auto_lhs {
                    return Err(at(text, span.clone(), format!("difference {:?} uses {id}, which is not in bounds", d.name)));
                }
                Ok(id)
            };
            differences.push(Difference {
                left: resolve(&d.left)?,
                right: resolve(&d.right)?,
                name: d.name,
            });
        }

        Ok(ScenarioConfig {
            source,
            state,
            bounds,
            differences,
            log_base,
            budget: raw.budget.unwrap_or(DEFAULT_BUDGET),
            work_limit: raw.work_limit.unwrap_or(DEFAULT_WORK_LIMIT),
            csv: raw.output.csv,
            svg: raw.output.svg,
        })
    }

    /// The fixed suite used by `verify` without a config file: random qubit and
    /// qutrit instances with two and three measurements, random mixed states.
    pub fn default_suite(seed: u64) -> Vec<ScenarioConfig> {
        let mut out = Vec::new();
        for dim in [2, 3] {
            for n in [2, 3] {
                out.push(ScenarioConfig {
                    source: Source::Random {
                        dim,
                        n,
                        seed: seed.wrapping_add((dim * 10 + n) as u64 * 1_000_003),
                        instances: 15,
                    },
                    state: StateChoice::Random {
                        rank: dim - 1,
                        seed: seed.wrapping_add(7),
                    },
                    bounds: vec![],
                    differences: vec![],
                    log_base: LogBase::Two,
                    budget: DEFAULT_BUDGET,
                    work_limit: DEFAULT_WORK_LIMIT,
                    csv: None,
                    svg: None,
                });
            }
        }
        out
    }

    /// Replaces every seed in the file with `seed`.
    pub fn override_seed(&mut self, seed: u64) {
        if let Source::Random { seed: s, .. } = &mut self.source {
            *s = seed;
        }
        match &mut self.state {
            StateChoice::PureRandom { seed: s } | StateChoice::Random { seed: s, .. } => *s = seed,
            _ => {}
        }
    }

    pub fn n_meas(&self) -> usize {
        match &self.source {
            Source::QutritFamily { .. } => 3,
            Source::Explicit { bases } => bases.len(),
            Source::Random { n, .. } => *n,
        }
    }

    pub fn param_names(&self) -> Vec<&'static str> {
        match &self.source {
            Source::QutritFamily { .. } => vec!["a"],
            Source::Explicit { .. } => vec!["index"],
            Source::Random { .. } => vec!["instance"],
        }
    }

    /// All sweep points in grid order, with validated bases.
    pub fn points(&self) -> Result<Vec<Point>> {
        match &self.source {
            Source::QutritFamily { a, phi } => a
                .iter()
                .enumerate()
                .map(|(index, &a)| {
                    let params = QutritFamilyParams::new(a, *phi).map_err(|e| CliError::from_core("source", e))?;
                    let bases = qutrit_family(params).map_err(|e| CliError::from_core("source", e))?;
                    Ok(Point {
                        index,
                        params: vec![a],
                        bases,
                    })
                })
                .collect(),
            Source::Explicit { bases } => {
                let bases = bases
                    .iter()
                    .map(|b| {
                        MeasurementBasis::new(b.label.clone(), b.vectors.clone())
                            .map_err(|e| CliError::Config(format!("line {}: {e}", b.line)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(vec![Point {
                    index: 0,
                    params: vec![0.0],
                    bases,
                }])
            }
            Source::Random {
                dim,
                n,
                seed,
                instances,
            } => (0..*instances)
                .map(|index| {
                    let mut rng = SplitMix64::new(seed.wrapping_add(index as u64));
                    let bases = (0..*n)
                        .map(|m| {
                            random_basis(*dim, rng.next_u64())
                                .map(|b| b.with_label(format!("B{}", m + 1)))
                                .map_err(|e| CliError::from_core("source", e))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Point {
                        index,
                        params: vec![index as f64],
                        bases,
                    })
                })
                .collect(),
        }
    }

    /// The state for sweep row `row` on `C^dim`.
    pub fn state_for(&self, row: usize, dim: usize) -> Result<Option<DensityMatrix>> {
        let seeded = |rank: usize, seed: u64| {
            random_state(dim, rank, seed.wrapping_add(row as u64))
                .map(Some)
                .map_err(|e| CliError::from_core("state", e))
        };
        match &self.state {
            StateChoice::None => Ok(None),
            StateChoice::MaximallyMixed => Ok(Some(DensityMatrix::maximally_mixed(dim))),
            StateChoice::PureRandom { seed } => seeded(1, *seed),
            StateChoice::Random { rank, seed } => seeded(*rank, *seed),
            StateChoice::Explicit { matrix, line } => DensityMatrix::new(matrix.clone())
                .map(Some)
                .map_err(|e| CliError::Config(format!("line {line}: {e}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = r#"
log_base = "2"
bounds = ["H_omega_simple", "liu_b"]

[source]
kind = "qutrit_family"
phi = 1.5707963267948966
a = { start = 0.0, stop = 1.0, step = 0.01 }
"#;

    #[test]
    fn range_grid_is_exact() {
        let c = ScenarioConfig::parse(FIG1).unwrap();
        let Source::QutritFamily { a, .. } = &c.source else { panic!() };
        assert_eq!(a.len(), 101);
        assert_eq!(a[7], 0.07);
        assert_eq!(a[100], 1.0);
    }

    #[test]
    fn unknown_bound_reports_line() {
        let text = FIG1.replace("\"liu_b\"]", "\"liu_c\"]");
        let err = ScenarioConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("liu_c"), "{err}");
    }

    #[test]
    fn schema_errors_carry_position() {
        let text = FIG1.replace("phi =", "phii =");
        let err = ScenarioConfig::parse(&text).unwrap_err().to_string();
        assert!(err.contains("line 7"), "{err}");
    }

    #[test]
    fn two_measurement_bounds_need_two_measurements() {
        let text = FIG1.replace("\"liu_b\"]", "\"deutsch\"]");
        assert!(ScenarioConfig::parse(&text).unwrap_err().to_string().contains("exactly 2"));
    }

    #[test]
    fn state_dependent_bounds_need_a_state() {
        let text = FIG1.replace("\"liu_b\"]", "\"cyclic_average_I\"]");
        assert!(ScenarioConfig::parse(&text).unwrap_err().to_string().contains("[state]"));
    }

    #[test]
    fn explicit_basis_line_on_failure() {
        let text = r#"bounds = ["maassen_uffink"]
[source]
kind = "explicit"

[[source.bases]]
vectors = [[1, 0], [0, 1]]

[[source.bases]]
label = "tilted"
vectors = [[1, 0], [0.1, 1]]
"#;
        let c = ScenarioConfig::parse(text).unwrap();
        let err = c.points().unwrap_err().to_string();
        assert!(err.contains("line 8") && err.contains("vectors 0 and 1"), "{err}");
    }

    #[test]
    fn complex_entries_and_states() {
        let text = r#"bounds = ["entropy_sum"]
[source]
kind = "explicit"
[[source.bases]]
vectors = [[1, 0], [0, 1]]
[[source.bases]]
vectors = [[0.7071067811865476, [0, 0.7071067811865476]], [0.7071067811865476, [0, -0.7071067811865476]]]
[state]
kind = "explicit"
matrix = [[0.5, [0, -0.5]], [[0, 0.5], 0.5]]
"#;
        let c = ScenarioConfig::parse(text).unwrap();
        assert!(c.state_for(0, 2).unwrap().is_some());
        assert_eq!(c.points().unwrap()[0].bases.len(), 2);
    }
}
