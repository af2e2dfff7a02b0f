//! Scenario runners producing [`CsvRow`]s.
//!
//! Every scenario expands its configuration into independent sweep points,
//! evaluates them on a rayon pool and returns rows in a fixed order, so the
//! CSV does not depend on the number of workers.

pub mod config;
pub mod csv;

use rayon::prelude::*;

use crate::coin::{coin_matrix, Axis, CoinOperator, CoinState};
use crate::error::{Error, Result};
use crate::evolution::Walk;
use crate::metrology::{
    closed_form_enhanced, closed_form_line_z, enhanced_max, max_qfi_line_xy, FisherReport,
};
use crate::probes::{gaussian_probe, localized, optimal_coin_state, uniform_probe};
use crate::state::WalkerState;
use crate::topology::{enhanced_graph, line_graph, parse_graph, Graph, ShiftOperator};

pub use config::{CoinChoice, ExperimentConfig, Family, ProbeKind, Scenario};
pub use csv::{format_g, to_csv_string, write_csv, CsvRow, CSV_HEADER};

/// Deviation from a closed form above which a row is flagged.
pub const DEVIATION_TOLERANCE: f64 = 1e-8;

/// Environment variable capping the worker count.
pub const WORKERS_ENV: &str = "QWPROBE_WORKERS";

/// Rows of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub scenario: Scenario,
    pub rows: Vec<CsvRow>,
    pub meas_count: u64,
}

impl Outcome {
    /// Whether a row breaks `F ≤ H` or deviates from its closed form.
    pub fn is_flagged(row: &CsvRow) -> bool {
        !row.report.satisfies_cramer_rao()
            || row
                .report
                .abs_dev()
                .is_some_and(|d| d.is_nan() || d > DEVIATION_TOLERANCE)
    }

    pub fn flagged(&self) -> impl Iterator<Item = &CsvRow> {
        self.rows.iter().filter(|r| Self::is_flagged(r))
    }

    pub fn passed(&self) -> bool {
        self.flagged().next().is_none()
    }

    pub fn to_csv(&self) -> String {
        to_csv_string(&self.rows)
    }

    /// One line describing the run and the Cramér–Rao bounds of its last row.
    pub fn summary(&self) -> String {
        let flagged = self.flagged().count();
        let max_dev = self
            .rows
            .iter()
            .filter_map(|r| r.report.abs_dev())
            .fold(None, |acc: Option<f64>, d| {
                Some(acc.map_or(d, |a| a.max(d)))
            });
        let mut s = format!("{}: {} rows", self.scenario, self.rows.len());
        if let Some(last) = self.rows.last() {
            let r = &last.report;
            let bound = |b: Option<f64>| b.map(format_g).unwrap_or_else(|| "inf".into());
            s.push_str(&format!(
                "; t={} qfi={} fi={}; Cramér–Rao bound (M={}) qfi {} fi {}",
                r.t,
                format_g(r.qfi),
                format_g(r.fi),
                self.meas_count,
                bound(r.qfi_bound()),
                bound(r.fi_bound()),
            ));
        }
        if let Some(d) = max_dev {
            s.push_str(&format!("; max abs_dev {}", format_g(d)));
        }
        s.push_str(&format!("; {flagged} flagged"));
        s
    }
}

/// Worker count from [`WORKERS_ENV`], if set.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::config(
                WORKERS_ENV,
                format!("expected a positive integer, got `{v}`"),
            )),
        },
    }
}

/// Runs the configured scenario on a pool sized by [`WORKERS_ENV`].
pub fn run(cfg: &ExperimentConfig) -> Result<Outcome> {
    run_with_workers(cfg, workers_from_env()?)
}

/// Runs the configured scenario on a pool of `workers` threads (all cores when `None`).
pub fn run_with_workers(cfg: &ExperimentConfig, workers: Option<usize>) -> Result<Outcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::config(WORKERS_ENV, e.to_string()))?;
    pool.install(|| match cfg.scenario {
        Scenario::LineSweep => run_line_sweep(cfg),
        Scenario::EnhancedTable => run_enhanced_table(cfg),
        Scenario::ClosedFormCheck => run_closed_form_check(cfg),
        Scenario::Custom => run_custom(cfg),
    })
}

/// `N = 2t + 6⌈σ⌉ + 16`: the wavefront and the Gaussian tails never meet
/// across the ring within `t` steps.
pub fn auto_ring_size(t_max: usize, sigma: f64) -> usize {
    2 * t_max + 6 * sigma.max(0.0).ceil() as usize + 16
}

/// Evolves `probe` and reports every step `1..=steps`.
pub fn trajectory(
    shift: &ShiftOperator,
    coin: &CoinOperator,
    probe: &WalkerState,
    steps: usize,
    meas_count: u64,
) -> Result<Vec<FisherReport>> {
    let mut walk = Walk::new(shift, coin, probe)?;
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        walk.advance()?;
        out.push(FisherReport::from_pair(walk.pair(), meas_count));
    }
    Ok(out)
}

fn other_axis(axis: Axis) -> Axis {
    match axis {
        Axis::X => Axis::Y,
        _ => Axis::X,
    }
}

/// Encoding coin, with the configured perturbation appended.
fn build_coin(cfg: &ExperimentConfig, axis: Axis, theta: f64, dim: usize) -> Result<CoinOperator> {
    let coin = coin_matrix(axis, theta, dim)?;
    if cfg.perturb == 0.0 {
        return Ok(coin);
    }
    let fixed = coin_matrix(other_axis(axis), cfg.perturb, dim)?;
    coin.followed_by_fixed(fixed.matrix())
}

fn resolve_coin(cfg: &ExperimentConfig, axis: Axis, dim: usize) -> Result<CoinState> {
    let gamma = cfg.gammas()[0];
    match cfg.coin() {
        CoinChoice::Minus => CoinState::basis(dim, 0),
        CoinChoice::Plus => CoinState::basis(dim, dim - 1),
        CoinChoice::Optimal => optimal_coin_state(axis, dim, gamma),
        CoinChoice::Qubit => {
            if dim != 2 {
                return Err(Error::config(
                    "coin",
                    format!("the qubit coin needs dim = 2, got {dim}"),
                ));
            }
            CoinState::qubit(cfg.alphas()[0], gamma)
        }
    }
}

fn x0_or(cfg: &ExperimentConfig, default: usize, n: usize) -> Result<usize> {
    match cfg.x0 {
        None => Ok(default),
        Some(x) if x <= n => Ok(x - 1),
        Some(x) => Err(Error::config(
            "x0",
            format!("vertex {x} is outside 1..={n}"),
        )),
    }
}

fn build_probe(
    cfg: &ExperimentConfig,
    coin: &CoinState,
    sigma: f64,
    x0: usize,
    n: usize,
) -> Result<WalkerState> {
    match cfg.probe() {
        ProbeKind::Localized => localized(x0, coin, n),
        ProbeKind::Gaussian => gaussian_probe(x0, sigma, coin, n),
        ProbeKind::Uniform => uniform_probe(coin, n),
    }
}

/// `(|α_x|², |β_x|²)` per site of a qubit state.
fn qubit_profile(state: &WalkerState) -> Vec<(f64, f64)> {
    (0..state.n_positions())
        .map(|x| {
            let s = state.site(x);
            (s[0].norm_sqr(), s[1].norm_sqr())
        })
        .collect()
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Gaussian (or other) probes on a ring, one block of rows per `(axis, θ, σ)`,
/// each block covering `t = 1..=steps`.
pub fn run_line_sweep(cfg: &ExperimentConfig) -> Result<Outcome> {
    let steps = cfg.steps();
    let gaussian = cfg.probe() == ProbeKind::Gaussian;
    let sigmas = if gaussian {
        sorted(&cfg.sigmas)
    } else {
        vec![0.0]
    };
    let mut points = Vec::new();
    for axis in cfg.axes() {
        for theta in cfg.thetas() {
            for &sigma in &sigmas {
                points.push((axis, theta, sigma));
            }
        }
    }
    let blocks = points
        .par_iter()
        .map(|&(axis, theta, sigma)| -> Result<Vec<CsvRow>> {
            let n = cfg.n.unwrap_or_else(|| auto_ring_size(steps, sigma));
            let shift = ShiftOperator::from_graph(&line_graph(n)?)?;
            let coin_state = resolve_coin(cfg, axis, 2)?;
            let probe = build_probe(cfg, &coin_state, sigma, x0_or(cfg, n / 2, n)?, n)?;
            let coin = build_coin(cfg, axis, theta, 2)?;
            let profile = (axis == Axis::Z).then(|| qubit_profile(&probe));
            let reports = trajectory(&shift, &coin, &probe, steps, cfg.m)?;
            reports
                .into_iter()
                .map(|r| {
                    let closed = match &profile {
                        Some(p) => Some(closed_form_line_z(p, r.t)?),
                        None => None,
                    };
                    let fi_closed = (axis == Axis::Z).then_some(0.0);
                    Ok(CsvRow {
                        scenario: Scenario::LineSweep.as_str().into(),
                        axis,
                        dim: 2,
                        sigma: gaussian.then_some(sigma),
                        report: r.with_closed(closed, fi_closed),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        scenario: Scenario::LineSweep,
        rows: blocks.into_iter().flatten().collect(),
        meas_count: cfg.m,
    })
}

/// Probes on the enhanced topology for each `(D, axis, θ)`, `t = 1..=steps`.
/// Optimal probes carry `(D−1)²t²` as their closed form.
pub fn run_enhanced_table(cfg: &ExperimentConfig) -> Result<Outcome> {
    let steps = cfg.steps();
    let mut points = Vec::new();
    for &dim in &cfg.dims {
        for axis in cfg.axes() {
            for theta in cfg.thetas() {
                points.push((dim, axis, theta));
            }
        }
    }
    let gamma = cfg.gammas()[0];
    let blocks = points
        .par_iter()
        .map(|&(dim, axis, theta)| -> Result<Vec<CsvRow>> {
            let graph = enhanced_graph(dim, steps)?;
            let shift = ShiftOperator::from_graph(&graph)?;
            let coin_state = resolve_coin(cfg, axis, dim)?;
            let x0 = x0_or(cfg, 0, graph.n_vertices())?;
            let probe = localized(x0, &coin_state, graph.n_vertices())?;
            let coin = build_coin(cfg, axis, theta, dim)?;
            let from_root = x0 == 0;
            trajectory(&shift, &coin, &probe, steps, cfg.m)?
                .into_iter()
                .map(|r| {
                    let (q, f) = match (cfg.coin(), axis) {
                        _ if !from_root => (None, None),
                        (CoinChoice::Optimal, Axis::Z) => (Some(enhanced_max(dim, r.t)), Some(0.0)),
                        (CoinChoice::Optimal, _) => {
                            let h = enhanced_max(dim, r.t);
                            (Some(h), (gamma == 0.0).then_some(h))
                        }
                        (CoinChoice::Qubit, Axis::X | Axis::Y) => {
                            let h = closed_form_enhanced(axis, cfg.alphas()[0], gamma, r.t)?;
                            (Some(h), (h == 0.0).then_some(0.0))
                        }
                        (_, Axis::Z) => (None, Some(0.0)),
                        _ => (None, None),
                    };
                    Ok(CsvRow {
                        scenario: Scenario::EnhancedTable.as_str().into(),
                        axis,
                        dim,
                        sigma: None,
                        report: r.with_closed(q, f),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        scenario: Scenario::EnhancedTable,
        rows: blocks.into_iter().flatten().collect(),
        meas_count: cfg.m,
    })
}

#[derive(Debug, Clone, Copy)]
enum CheckPoint {
    LineZ { alpha: f64 },
    LineXy { axis: Axis },
    Enhanced { axis: Axis, alpha: f64, gamma: f64 },
}

impl CheckPoint {
    fn label(&self) -> String {
        match *self {
            CheckPoint::LineZ { alpha } => {
                format!("closed_form_check:line_z:alpha={}", format_g(alpha))
            }
            CheckPoint::LineXy { .. } => "closed_form_check:line_xy".into(),
            CheckPoint::Enhanced { alpha, gamma, .. } => format!(
                "closed_form_check:enhanced:alpha={}:gamma={}",
                format_g(alpha),
                format_g(gamma)
            ),
        }
    }
}

/// Simulated values next to their closed forms:
///
/// * `line_z`: localized `α|−1⟩ + √(1−α²)|+1⟩` on a ring with a z-coin,
///   against `t²[1 − (2α²−1)²]` and a vanishing FI;
/// * `line_xy`: localized `|−1⟩` on a ring at θ = π, against `t²/2 + (t mod 2)/2`;
/// * `enhanced`: `α|−1⟩ + e^{iγ}√(1−α²)|+1⟩` on the qubit enhanced graph
///   against the x/y surfaces.
///
/// Each family covers `t = 1..=steps`; θ is the first configured value where
/// the family does not fix it.
pub fn run_closed_form_check(cfg: &ExperimentConfig) -> Result<Outcome> {
    let steps = cfg.steps();
    let theta = cfg.thetas()[0];
    let mut families = cfg.families.clone();
    families.sort();
    families.dedup();
    let mut points = Vec::new();
    for family in families {
        match family {
            Family::LineZ => points.extend(
                cfg.alphas()
                    .into_iter()
                    .map(|alpha| CheckPoint::LineZ { alpha }),
            ),
            Family::LineXy => {
                points.extend([Axis::X, Axis::Y].map(|axis| CheckPoint::LineXy { axis }))
            }
            Family::Enhanced => {
                for axis in [Axis::X, Axis::Y] {
                    for alpha in cfg.alphas() {
                        for gamma in cfg.gammas() {
                            points.push(CheckPoint::Enhanced { axis, alpha, gamma });
                        }
                    }
                }
            }
        }
    }
    let blocks = points
        .par_iter()
        .map(|point| -> Result<Vec<CsvRow>> {
            let (graph, axis, theta, coin_state, x0) = match *point {
                CheckPoint::LineZ { alpha } => {
                    let n = auto_ring_size(steps, 0.0);
                    (
                        line_graph(n)?,
                        Axis::Z,
                        theta,
                        CoinState::qubit(alpha, 0.0)?,
                        n / 2,
                    )
                }
                CheckPoint::LineXy { axis } => {
                    let n = auto_ring_size(steps, 0.0);
                    (
                        line_graph(n)?,
                        axis,
                        std::f64::consts::PI,
                        CoinState::basis(2, 0)?,
                        n / 2,
                    )
                }
                CheckPoint::Enhanced { axis, alpha, gamma } => (
                    enhanced_graph(2, steps)?,
                    axis,
                    theta,
                    CoinState::qubit(alpha, gamma)?,
                    0,
                ),
            };
            let shift = ShiftOperator::from_graph(&graph)?;
            let probe = localized(x0, &coin_state, graph.n_vertices())?;
            let coin = build_coin(cfg, axis, theta, 2)?;
            let label = point.label();
            trajectory(&shift, &coin, &probe, steps, cfg.m)?
                .into_iter()
                .map(|r| {
                    let (q, f) = match *point {
                        CheckPoint::LineZ { alpha } => {
                            let a2 = alpha * alpha;
                            (closed_form_line_z(&[(a2, 1.0 - a2)], r.t)?, Some(0.0))
                        }
                        CheckPoint::LineXy { .. } => (max_qfi_line_xy(r.t), None),
                        CheckPoint::Enhanced { axis, alpha, gamma } => {
                            let h = closed_form_enhanced(axis, alpha, gamma, r.t)?;
                            (h, (h == 0.0).then_some(0.0))
                        }
                    };
                    Ok(CsvRow {
                        scenario: label.clone(),
                        axis,
                        dim: 2,
                        sigma: None,
                        report: r.with_closed(Some(q), f),
                    })
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        scenario: Scenario::ClosedFormCheck,
        rows: blocks.into_iter().flatten().collect(),
        meas_count: cfg.m,
    })
}

/// Loads the configured graph file, or builds a ring when none is given.
pub fn load_graph(cfg: &ExperimentConfig) -> Result<Graph> {
    match &cfg.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config("graph", format!("{}: {e}", path.display())))?;
            parse_graph(&text)
        }
        None => {
            let sigma = if cfg.probe() == ProbeKind::Gaussian {
                cfg.sigmas[0]
            } else {
                0.0
            };
            line_graph(cfg.n.unwrap_or_else(|| auto_ring_size(cfg.steps(), sigma)))
        }
    }
}

/// One probe on a user graph (or a ring) for each `(axis, θ)`. z-coins carry
/// a vanishing FI as their closed form.
pub fn run_custom(cfg: &ExperimentConfig) -> Result<Outcome> {
    let steps = cfg.steps();
    let graph = load_graph(cfg)?;
    let shift = ShiftOperator::from_graph(&graph)?;
    let dim = graph.coin_dim();
    let n = graph.n_vertices();
    let gaussian = cfg.probe() == ProbeKind::Gaussian;
    let sigma = cfg.sigmas[0];
    let default_x0 = if cfg.graph.is_some() { 0 } else { n / 2 };
    let x0 = x0_or(cfg, default_x0, n)?;
    let mut points = Vec::new();
    for axis in cfg.axes() {
        for theta in cfg.thetas() {
            points.push((axis, theta));
        }
    }
    let blocks = points
        .par_iter()
        .map(|&(axis, theta)| -> Result<Vec<CsvRow>> {
            let coin_state = resolve_coin(cfg, axis, dim)?;
            let probe = build_probe(cfg, &coin_state, sigma, x0, n)?;
            let coin = build_coin(cfg, axis, theta, dim)?;
            Ok(trajectory(&shift, &coin, &probe, steps, cfg.m)?
                .into_iter()
                .map(|r| CsvRow {
                    scenario: Scenario::Custom.as_str().into(),
                    axis,
                    dim,
                    sigma: gaussian.then_some(sigma),
                    report: r.with_closed(None, (axis == Axis::Z).then_some(0.0)),
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome {
        scenario: Scenario::Custom,
        rows: blocks.into_iter().flatten().collect(),
        meas_count: cfg.m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrology::qudit_reference_qfi;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn ring_size_rule() {
        assert_eq!(auto_ring_size(20, 1.0), 62);
        assert_eq!(auto_ring_size(20, 2.5), 74);
        assert_eq!(auto_ring_size(6, 0.0), 28);
    }

    #[test]
    fn line_sweep_shape_and_order() {
        let mut cfg = ExperimentConfig::new(Scenario::LineSweep);
        cfg.set("sigma", "5,1").unwrap();
        cfg.set("steps", "6").unwrap();
        let out = run_with_workers(&cfg, Some(2)).unwrap();
        assert_eq!(out.rows.len(), 12);
        assert_eq!(out.rows[0].sigma, Some(1.0));
        assert_eq!(out.rows[6].sigma, Some(5.0));
        assert!(out
            .rows
            .iter()
            .zip(1..)
            .all(|(r, i)| r.report.t == (i - 1) % 6 + 1));
        assert!(out.passed());
    }

    #[test]
    fn gaussian_narrow_limit_is_localized() {
        let mut cfg = ExperimentConfig::new(Scenario::LineSweep);
        cfg.set("sigma", "0.001").unwrap();
        cfg.set("steps", "10").unwrap();
        let gauss = run_line_sweep(&cfg).unwrap();
        cfg.set("probe", "localized").unwrap();
        let loc = run_line_sweep(&cfg).unwrap();
        for (a, b) in gauss.rows.iter().zip(&loc.rows) {
            assert!((a.report.qfi - b.report.qfi).abs() < 1e-8);
        }
    }

    #[test]
    fn enhanced_rows_match_table() {
        let mut cfg = ExperimentConfig::new(Scenario::EnhancedTable);
        cfg.set("dim", "3").unwrap();
        cfg.set("steps", "5").unwrap();
        let out = run_enhanced_table(&cfg).unwrap();
        let last = &out.rows[4].report;
        assert!((last.qfi - 100.0).abs() < 1e-8);
        assert!((last.fi - 100.0).abs() < 1e-8);
        assert!(out.passed(), "{}", out.summary());
    }

    #[test]
    fn enhanced_z_has_no_position_information() {
        let mut cfg = ExperimentConfig::new(Scenario::EnhancedTable);
        cfg.set("axis", "z").unwrap();
        let out = run_enhanced_table(&cfg).unwrap();
        assert!(out.rows.iter().all(|r| r.report.fi < 1e-12));
        assert!(out.passed());
    }

    #[test]
    fn check_passes_and_perturbation_fails() {
        let mut cfg = ExperimentConfig::new(Scenario::ClosedFormCheck);
        cfg.set("steps", "6").unwrap();
        let out = run_closed_form_check(&cfg).unwrap();
        assert_eq!(out.rows.len(), (5 + 2 + 50) * 6);
        assert!(out.passed(), "{}", out.summary());
        cfg.set("perturb", "0.05").unwrap();
        assert!(!run_closed_form_check(&cfg).unwrap().passed());
    }

    #[test]
    fn custom_ring_matches_coin_only_reference_for_uniform_probe() {
        let mut cfg = ExperimentConfig::new(Scenario::Custom);
        cfg.set("probe", "uniform").unwrap();
        cfg.set("axis", "x").unwrap();
        cfg.set("theta", "0.7").unwrap();
        cfg.set("steps", "5").unwrap();
        cfg.set("n", "12").unwrap();
        let out = run_custom(&cfg).unwrap();
        let reference =
            qudit_reference_qfi(Axis::X, 0.7, 5, &CoinState::basis(2, 0).unwrap(), 2).unwrap();
        assert!((out.rows[4].report.qfi - reference).abs() < 1e-9);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let mut cfg = ExperimentConfig::new(Scenario::LineSweep);
        cfg.set("axis", "x,y").unwrap();
        cfg.set("theta", "pi/2,1").unwrap();
        cfg.set("steps", "8").unwrap();
        let one = run_with_workers(&cfg, Some(1)).unwrap().to_csv();
        let four = run_with_workers(&cfg, Some(4)).unwrap().to_csv();
        assert_eq!(one, four);
    }

    #[test]
    fn summary_mentions_the_bound() {
        let mut cfg = ExperimentConfig::new(Scenario::LineSweep);
        cfg.set("sigma", "2").unwrap();
        cfg.set("steps", "3").unwrap();
        cfg.set("theta", &FRAC_PI_2.to_string()).unwrap();
        cfg.set("m", "10").unwrap();
        let s = run_line_sweep(&cfg).unwrap().summary();
        assert!(s.starts_with("line_sweep: 3 rows"), "{s}");
        assert!(s.contains("(M=10)"), "{s}");
    }
}
