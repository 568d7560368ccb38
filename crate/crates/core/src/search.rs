//! Search experiments: time series, peak detection, scaling fits and
//! comparison with the spectral predictions.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::LatticeConfig;
use crate::spectral::{self, SpectralSummary};
use crate::walk::{
    marked_probability, overlap_sq, LogBase, OracleControl, SearchTarget, TulsiParams, Walk,
    WalkState,
};

/// Which search dynamics to run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Repeated `U·R_t` from the uniform state.
    Akr,
    /// The ancilla-extended step from `|1⟩ ⊗ uniform`.
    Tulsi(TulsiParams),
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::Akr => "akr",
            SearchMode::Tulsi(_) => "tulsi",
        }
    }
}

/// A search mode whose parameters may depend on the lattice size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Akr,
    Tulsi {
        log_base: LogBase,
        oracle_control: OracleControl,
    },
}

impl ModeSpec {
    /// `δ = 1/√(log N)` with the oracle controlled on `|0⟩`.
    pub fn tulsi() -> Self {
        ModeSpec::Tulsi {
            log_base: LogBase::Natural,
            oracle_control: OracleControl::Zero,
        }
    }

    pub fn resolve(&self, cfg: LatticeConfig) -> Result<SearchMode> {
        Ok(match *self {
            ModeSpec::Akr => SearchMode::Akr,
            ModeSpec::Tulsi {
                log_base,
                oracle_control,
            } => {
                let delta = TulsiParams::for_lattice(cfg, log_base).delta();
                SearchMode::Tulsi(TulsiParams::new(delta, oracle_control)?)
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModeSpec::Akr => "akr",
            ModeSpec::Tulsi { .. } => "tulsi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub t: usize,
    pub p_support: f64,
    pub overlap_sq: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchRun {
    pub cfg: LatticeConfig,
    pub target: SearchTarget,
    pub mode: SearchMode,
    pub series: Vec<SeriesPoint>,
    pub t_star: usize,
    pub p_star: f64,
}

impl SearchRun {
    /// Steps per success when the search is repeated classically:
    /// `t*/p*`.
    pub fn expected_cost(&self) -> f64 {
        self.t_star as f64 / self.p_star
    }

    pub fn p_support(&self) -> Vec<f64> {
        self.series.iter().map(|p| p.p_support).collect()
    }
}

/// `3·T` with `T` the predicted iteration count.
pub fn default_window(cfg: LatticeConfig) -> Result<usize> {
    Ok(3 * spectral::predict(cfg)?.predicted_steps)
}

/// Evolve for `max_steps` steps, recording `t = 0..=max_steps`.
///
/// `max_steps` must be at least twice the predicted iteration count.
pub fn run_search(
    cfg: LatticeConfig,
    target: &SearchTarget,
    mode: SearchMode,
    max_steps: usize,
) -> Result<SearchRun> {
    let minimum = 2 * spectral::predict(cfg)?.predicted_steps;
    if max_steps < minimum {
        return Err(Error::WindowTooShort {
            given: max_steps,
            minimum,
        });
    }
    let walk = Walk::new(cfg);
    let mut state = initial_state(&walk, mode);
    let mut series = Vec::with_capacity(max_steps + 1);
    for t in 0..=max_steps {
        if t > 0 {
            step(&walk, &mut state, target, &mode)?;
        }
        series.push(SeriesPoint {
            t,
            p_support: marked_probability(&state, target),
            overlap_sq: overlap_sq(&state, target),
        });
    }
    let (t_star, p_star) = argmax(&series);
    Ok(SearchRun {
        cfg,
        target: target.clone(),
        mode,
        series,
        t_star,
        p_star,
    })
}

fn initial_state(walk: &Walk, mode: SearchMode) -> WalkState {
    match mode {
        SearchMode::Akr => walk.uniform_state(),
        SearchMode::Tulsi(_) => walk.tulsi_initial_state(),
    }
}

fn step(
    walk: &Walk,
    state: &mut WalkState,
    target: &SearchTarget,
    mode: &SearchMode,
) -> Result<()> {
    match mode {
        SearchMode::Akr => walk.step_search(state, target),
        SearchMode::Tulsi(params) => walk.step_tulsi(state, target, params),
    }
}

/// The state after `steps` search steps from the mode's initial state.
pub fn evolve(
    cfg: LatticeConfig,
    target: &SearchTarget,
    mode: SearchMode,
    steps: usize,
) -> Result<WalkState> {
    let walk = Walk::new(cfg);
    let mut state = initial_state(&walk, mode);
    for _ in 0..steps {
        step(&walk, &mut state, target, &mode)?;
    }
    Ok(state)
}

/// First index of the largest `p_support`.
fn argmax(series: &[SeriesPoint]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for p in series {
        if p.p_support > best.1 {
            best = (p.t, p.p_support);
        }
    }
    best
}

/// Run one search per lattice size with the default window, in parallel.
/// Results come back in the order of `sizes`.
pub fn run_sweep(
    sizes: &[usize],
    spec: ModeSpec,
    marked: (usize, usize),
) -> Result<Vec<SearchRun>> {
    sizes
        .par_iter()
        .map(|&m| {
            let cfg = LatticeConfig::new(m)?;
            let target = SearchTarget::new(cfg, marked.0, marked.1)?;
            run_search(cfg, &target, spec.resolve(cfg)?, default_window(cfg)?)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    pub mode: &'static str,
    pub sizes: Vec<usize>,
    pub times: Vec<usize>,
    pub peaks: Vec<f64>,
    /// Least-squares slope of `ln t*` against `ln N`.
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `c` in the fit `t* = c·√(N ln N)`.
    pub sqrt_n_log_n_coefficient: f64,
    /// Root-mean-square relative residual of that fit.
    pub sqrt_n_log_n_residual: f64,
}

pub const MIN_FIT_SIZES: usize = 4;

pub fn fit_scaling(runs: &[SearchRun]) -> Result<ScalingFit> {
    let distinct: BTreeSet<usize> = runs.iter().map(|r| r.cfg.m()).collect();
    if distinct.len() < MIN_FIT_SIZES {
        return Err(Error::TooFewSizes {
            needed: MIN_FIT_SIZES,
            got: distinct.len(),
        });
    }
    let mode = runs[0].mode.name();
    if runs.iter().any(|r| r.mode.name() != mode) {
        return Err(Error::MixedModes);
    }
    let xs: Vec<f64> = runs.iter().map(|r| (r.cfg.sites() as f64).ln()).collect();
    let ys: Vec<f64> = runs.iter().map(|r| (r.t_star as f64).ln()).collect();
    let (exponent, intercept, r_squared) = linear_fit(&xs, &ys);

    let model: Vec<f64> = runs
        .iter()
        .map(|r| {
            let n = r.cfg.sites() as f64;
            (n * n.ln()).sqrt()
        })
        .collect();
    let times: Vec<f64> = runs.iter().map(|r| r.t_star as f64).collect();
    let c = dot(&model, &times) / dot(&model, &model);
    let mse = times
        .iter()
        .zip(&model)
        .map(|(t, x)| ((t - c * x) / t).powi(2))
        .sum::<f64>()
        / times.len() as f64;

    Ok(ScalingFit {
        mode,
        sizes: runs.iter().map(|r| r.cfg.m()).collect(),
        times: runs.iter().map(|r| r.t_star).collect(),
        peaks: runs.iter().map(|r| r.p_star).collect(),
        exponent,
        intercept,
        r_squared,
        sqrt_n_log_n_coefficient: c,
        sqrt_n_log_n_residual: mse.sqrt(),
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Ordinary least squares `y = slope·x + intercept`, returning
/// `(slope, intercept, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, intercept, r_squared)
}

/// Accepted range of `t*/T`.
pub const T_RATIO_BAND: (f64, f64) = (0.2, 5.0);
/// Accepted range of `p*·B`.
pub const PB_BAND: (f64, f64) = (0.1, 10.0);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredictionReport {
    pub m: usize,
    pub t_star: usize,
    pub predicted_steps: usize,
    pub t_ratio: f64,
    pub p_star: f64,
    pub b: f64,
    pub p_b_product: f64,
    pub t_ratio_ok: bool,
    pub p_b_ok: bool,
}

impl PredictionReport {
    pub fn passed(&self) -> bool {
        self.t_ratio_ok && self.p_b_ok
    }
}

pub fn verify_prediction(run: &SearchRun, summary: &SpectralSummary) -> Result<PredictionReport> {
    if run.cfg != summary.cfg {
        return Err(Error::LatticeMismatch {
            expected: summary.cfg.m(),
            found: run.cfg.m(),
        });
    }
    let t_ratio = run.t_star as f64 / summary.predicted_steps as f64;
    let p_b_product = run.p_star * summary.b.spectral;
    let within = |x: f64, band: (f64, f64)| band.0 <= x && x <= band.1;
    Ok(PredictionReport {
        m: run.cfg.m(),
        t_star: run.t_star,
        predicted_steps: summary.predicted_steps,
        t_ratio,
        p_star: run.p_star,
        b: summary.b.spectral,
        p_b_product,
        t_ratio_ok: within(t_ratio, T_RATIO_BAND),
        p_b_ok: within(p_b_product, PB_BAND),
    })
}
