//! Monte Carlo experiments: convergence tables across a grid of meshes and
//! Hölder regressions.
//!
//! Replicate `j` at mesh level `l` draws its path from the seed
//! `derive_seed(derive_seed(master, l), j)`, and aggregation runs over the
//! replicates in index order, so results do not depend on the thread count.

use std::path::PathBuf;
use std::sync::Arc;

use pvlab_core::hilbert::{CoefficientView, Functional};
use pvlab_core::limits::{
    k_r, limit_constant_even_power, limit_constant_power, limit_process_general_sigma, mode_tail_bound,
    mu_rf_estimate, tau_n, Regime, Weight, MAX_MU_TRUNCATION, QUADRATURE_TOLERANCE,
};
use pvlab_core::quadrature::{adaptive_simpson, pairwise_sum};
use pvlab_core::rng::{derive_seed, path_rng};
use pvlab_core::simulator::{stream_path, IncrementSampler, SigmaMode};
use pvlab_core::spectrum::eigenvalues;
use pvlab_core::variations::{ScalarFn, VariationAccumulator, VariationRequest};
use pvlab_core::{RegimeParams, SimConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{HarnessError, Result};

/// Largest truncation the default rule will pick.
pub const MAX_DEFAULT_TRUNCATION: usize = 4096;

#[derive(Clone)]
pub enum IntegrandSpec {
    Power(f64),
    Scalar(ScalarFn),
    Functional(Functional),
}

#[derive(Clone)]
pub struct RequestSpec {
    pub label: String,
    pub r: f64,
    pub integrand: IntegrandSpec,
    pub tau_override: Option<f64>,
}

impl RequestSpec {
    pub fn power(r: f64, order: f64) -> Self {
        Self { label: format!("r={r}:power{order}"), r, integrand: IntegrandSpec::Power(order), tau_override: None }
    }

    /// The estimator at mesh `delta`.
    pub fn request(&self, params: &RegimeParams, delta: f64) -> Result<VariationRequest> {
        let tau = match self.tau_override {
            Some(t) => t,
            None => tau_n(params, delta)?,
        };
        Ok(match &self.integrand {
            IntegrandSpec::Power(p) => VariationRequest::power(self.r, *p, tau),
            IntegrandSpec::Scalar(f) => VariationRequest::scalar(self.r, f.clone(), tau),
            IntegrandSpec::Functional(f) => VariationRequest::functional(self.r, f.clone(), tau),
        })
    }
}

#[derive(Clone)]
pub struct ExperimentSpec {
    pub name: String,
    /// Template; `delta` and `seed` are replaced per level and replicate.
    pub sim: SimConfig,
    pub requests: Vec<RequestSpec>,
    /// Strictly decreasing meshes; the first one is the common coarse grid.
    pub delta_grid: Vec<f64>,
    pub replicates: usize,
    pub output_dir: Option<PathBuf>,
    /// `s ↦ ∫_D σ²(s, y) dy` for deterministic noise.
    pub sigma_sq_integral: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    /// Samples behind targets estimated with the Gaussian measure sampler.
    pub target_samples: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let grid = &self.delta_grid;
        if grid.is_empty() {
            return Err(HarnessError::Config("delta grid is empty".into()));
        }
        if grid.windows(2).any(|w| !(w[1] < w[0])) || grid.iter().any(|d| !(*d > 0.0)) {
            return Err(HarnessError::Config(format!("delta grid must be positive and strictly decreasing: {grid:?}")));
        }
        if self.replicates == 0 {
            return Err(HarnessError::Config("need at least one replicate".into()));
        }
        if self.requests.is_empty() {
            return Err(HarnessError::Config("no variation requested".into()));
        }
        let t = self.sim.horizon;
        for &d in grid {
            let n = (t / d).round();
            if n < 1.0 || (n * d - t).abs() > 1e-12 * t {
                return Err(HarnessError::Config(format!("Δ = {d} does not divide T = {t}")));
            }
            let ratio = grid[0] / d;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio {
                return Err(HarnessError::Config(format!("Δ = {d} does not refine the coarsest grid Δ = {}", grid[0])));
            }
        }
        let mut probe = self.sim.clone();
        probe.delta = grid[0];
        probe.validate()?;
        Ok(())
    }

    fn params_for(&self, r: f64) -> Result<RegimeParams> {
        Ok(RegimeParams::new(r, self.sim.params.gamma, self.sim.params.domain.clone())?)
    }
}

/// Truncation picked so that `∑_{k>K} λ_k^{r-γ} < 1e-4 · K_r · Δ` for every requested `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationChoice {
    pub truncation: usize,
    pub rule_met: bool,
    pub tails: Vec<TailRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRecord {
    pub r: f64,
    pub tail_bound: f64,
    pub threshold: f64,
}

/// Smallest power of two meeting the tail rule, capped at [`MAX_DEFAULT_TRUNCATION`].
pub fn default_truncation(params: &[RegimeParams], finest_delta: f64) -> Result<TruncationChoice> {
    let thresholds = params.iter().map(|p| Ok(1e-4 * k_r(p)? * finest_delta)).collect::<Result<Vec<_>>>()?;
    let mut k = 64;
    loop {
        let tails = params
            .iter()
            .zip(&thresholds)
            .map(|(p, th)| Ok(TailRecord { r: p.r, tail_bound: mode_tail_bound(p, k)?, threshold: *th }))
            .collect::<Result<Vec<_>>>()?;
        let met = tails.iter().all(|t| t.tail_bound < t.threshold);
        if met || k >= MAX_DEFAULT_TRUNCATION {
            return Ok(TruncationChoice { truncation: k, rule_met: met, tails });
        }
        k *= 2;
    }
}

/// Tail record of a fixed truncation.
pub fn truncation_report(params: &[RegimeParams], truncation: usize, finest_delta: f64) -> Result<TruncationChoice> {
    let tails = params
        .iter()
        .map(|p| Ok(TailRecord { r: p.r, tail_bound: mode_tail_bound(p, truncation)?, threshold: 1e-4 * k_r(p)? * finest_delta }))
        .collect::<Result<Vec<_>>>()?;
    let rule_met = tails.iter().all(|t| t.tail_bound < t.threshold);
    Ok(TruncationChoice { truncation, rule_met, tails })
}

/// Limit `t ↦ V(t)` of a request.
pub struct Target {
    curve: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Monte Carlo error of the target per unit time (0 for closed forms).
    pub std_error_rate: f64,
}

impl Target {
    fn linear(rate: f64, std_error_rate: f64) -> Self {
        Self { curve: Box::new(move |t| rate * t), std_error_rate }
    }

    pub fn at(&self, t: f64) -> f64 {
        (self.curve)(t)
    }
}

/// The theoretical limit of `request` under the experiment's noise.
pub fn target(spec: &ExperimentSpec, index: usize) -> Result<Target> {
    let req = &spec.requests[index];
    if req.tau_override.is_some() {
        return Err(HarnessError::Config(format!("{}: no limit is known for a fixed normalizer", req.label)));
    }
    let params = spec.params_for(req.r)?;
    let regime = params.regime();
    let mu = |f: Functional, weight: f64| -> Result<Target> {
        let k = spec.sim.truncation.min(MAX_MU_TRUNCATION);
        let seed = derive_seed(spec.sim.seed, 1_000_000 + index as u64);
        let est = mu_rf_estimate(&f, &Weight::Constant(weight), &params, k, spec.target_samples, seed)?;
        Ok(Target::linear(est.mean, est.std_error))
    };
    match &spec.sim.sigma {
        SigmaMode::Constant(c) => {
            let c = *c;
            match (&req.integrand, regime) {
                (IntegrandSpec::Power(p), Regime::Sub) => {
                    let half = p / 2.0;
                    if half.fract() == 0.0 {
                        Ok(Target::linear(limit_constant_even_power(&params, half as u32, c)?, 0.0))
                    } else {
                        let p = *p;
                        mu(Arc::new(move |h: &CoefficientView| h.hr_norm().powf(p)), c * c)
                    }
                }
                (IntegrandSpec::Power(p), _) => Ok(Target::linear(limit_constant_power(&params, *p, c)?, 0.0)),
                (IntegrandSpec::Scalar(f), Regime::Sub) => {
                    let f = f.clone();
                    mu(Arc::new(move |h: &CoefficientView| f(h.hr_norm())), c * c)
                }
                (IntegrandSpec::Scalar(f), _) => Ok(Target::linear(f(c.abs() * k_r(&params)?.sqrt()), 0.0)),
                (IntegrandSpec::Functional(f), Regime::Sub) => mu(f.clone(), c * c),
                (IntegrandSpec::Functional(_), _) => {
                    Err(HarnessError::Config(format!("{}: functional variations need r < -d/2", req.label)))
                }
            }
        }
        SigmaMode::DeterministicField(_) => {
            let integral = spec
                .sigma_sq_integral
                .clone()
                .ok_or_else(|| HarnessError::Config("field noise without ∫σ² cannot be compared to a limit".into()))?;
            if regime == Regime::Sub {
                return Err(HarnessError::Config(format!(
                    "{}: limits below r = -d/2 under field noise are not tabulated; use limits::limit_process_sub_regime",
                    req.label
                )));
            }
            match &req.integrand {
                IntegrandSpec::Power(p) => {
                    let lim = limit_process_general_sigma(&params, *p, move |s| integral(s))?;
                    Ok(Target { curve: Box::new(move |t| lim.value(t)), std_error_rate: 0.0 })
                }
                IntegrandSpec::Scalar(f) => {
                    let scale = k_r(&params)? / params.domain.volume();
                    let f = f.clone();
                    let curve = move |t: f64| {
                        let g = |s: f64| f((scale * integral(s)).max(0.0).sqrt());
                        adaptive_simpson(&g, 0.0, t, QUADRATURE_TOLERANCE)
                    };
                    Ok(Target { curve: Box::new(curve), std_error_rate: 0.0 })
                }
                IntegrandSpec::Functional(_) => {
                    Err(HarnessError::Config(format!("{}: functional variations need r < -d/2", req.label)))
                }
            }
        }
        SigmaMode::StateDependent(_) => {
            Err(HarnessError::Config("state-dependent noise has a path-dependent limit; no target available".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub request: String,
    pub delta: f64,
    pub mean_v_at_t: f64,
    pub std_error: f64,
    pub theoretical_limit: f64,
    pub target_std_error: f64,
    pub abs_error: f64,
    /// Mean over replicates of `max_t |V(t) - target(t)|` on the coarsest grid.
    pub sup_error_over_grid: f64,
    pub sup_error_std_error: f64,
    pub replicates: usize,
    /// Set when `M = 1`: the standard errors are not sample based.
    pub sample_free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub name: String,
    pub truncation: TruncationChoice,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Rows of one request in grid order.
    pub fn rows_for(&self, request: &str) -> Vec<&ConvergenceRow> {
        self.rows.iter().filter(|r| r.request == request).collect()
    }
}

/// Length of the longest run of consecutive levels along which `errors` strictly decreases.
pub fn longest_decreasing_run(errors: &[f64]) -> usize {
    if errors.is_empty() {
        return 0;
    }
    let (mut best, mut run) = (1, 1);
    for w in errors.windows(2) {
        run = if w[1] < w[0] { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    let mean = pairwise_sum(values) / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).powi(2)).collect();
    (mean, (pairwise_sum(&dev) / (n - 1) as f64 / n as f64).sqrt())
}

/// Per-level accumulator inputs: mesh, subsampling factor from the finest mesh, requests.
struct Level {
    delta: f64,
    every: usize,
    sup_stride: usize,
    requests: Vec<VariationRequest>,
}

/// One replicate on the finest mesh, with coarser meshes read off the same path.
/// Returns, per level and request, `(V(T), sup deviation on the coarse grid)`.
fn run_replicate(
    spec: &ExperimentSpec,
    config: &SimConfig,
    lambdas: &[f64],
    levels: &[Level],
    targets_on_grid: &[Vec<f64>],
) -> pvlab_core::Result<Vec<Vec<(f64, f64)>>> {
    let dim = spec.sim.params.dim();
    let mut accs = levels
        .iter()
        .map(|l| {
            l.requests
                .iter()
                .map(|r| VariationAccumulator::new(r.clone(), lambdas, dim, l.delta, l.sup_stride))
                .collect::<pvlab_core::Result<Vec<_>>>()
        })
        .collect::<pvlab_core::Result<Vec<_>>>()?;
    let mut anchors = vec![vec![0.0; lambdas.len()]; levels.len()];
    stream_path(config, |i, prev, cur| {
        if i == 1 {
            for a in anchors.iter_mut() {
                a.copy_from_slice(prev);
            }
        }
        for ((level, level_accs), anchor) in levels.iter().zip(accs.iter_mut()).zip(anchors.iter_mut()) {
            if i % level.every != 0 {
                continue;
            }
            for acc in level_accs.iter_mut() {
                acc.push(anchor, cur)?;
            }
            anchor.copy_from_slice(cur);
        }
        Ok(())
    })?;
    Ok(accs
        .into_iter()
        .map(|level_accs| {
            level_accs
                .into_iter()
                .zip(targets_on_grid)
                .map(|(acc, target)| {
                    let value = acc.value();
                    let series = acc.into_series();
                    let sup = series.values.iter().zip(target).map(|(v, t)| (v - t).abs()).fold(0.0, f64::max);
                    (value, sup)
                })
                .collect()
        })
        .collect())
}

/// Simulates `M` paths on the finest mesh and tabulates every request against its limit at each mesh.
/// Coarser meshes subsample the same paths, so errors across rows share their Monte Carlo noise.
pub fn run_convergence(spec: &ExperimentSpec) -> Result<ConvergenceTable> {
    spec.validate()?;
    let coarse = spec.delta_grid[0];
    let horizon = spec.sim.horizon;
    let coarse_times: Vec<f64> = (1..=(horizon / coarse).round() as usize).map(|i| i as f64 * coarse).collect();
    let targets = (0..spec.requests.len()).map(|i| target(spec, i)).collect::<Result<Vec<_>>>()?;
    let targets_on_grid: Vec<Vec<f64>> =
        targets.iter().map(|t| coarse_times.iter().map(|s| t.at(*s)).collect()).collect();
    let params = spec.requests.iter().map(|r| spec.params_for(r.r)).collect::<Result<Vec<_>>>()?;
    let finest = *spec.delta_grid.last().unwrap();
    let truncation = truncation_report(&params, spec.sim.truncation, finest)?;
    let lambdas = eigenvalues(&spec.sim.params.domain, spec.sim.truncation)?;
    let levels = spec
        .delta_grid
        .iter()
        .map(|&delta| {
            let requests = spec
                .requests
                .iter()
                .zip(&params)
                .map(|(r, p)| r.request(p, delta))
                .collect::<Result<Vec<_>>>()?;
            Ok(Level {
                delta,
                every: (delta / finest).round() as usize,
                sup_stride: (coarse / delta).round() as usize,
                requests,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let results: Vec<Vec<Vec<(f64, f64)>>> = (0..spec.replicates)
        .into_par_iter()
        .map(|j| {
            let mut cfg = spec.sim.clone();
            cfg.delta = finest;
            cfg.seed = derive_seed(spec.sim.seed, j as u64);
            run_replicate(spec, &cfg, &lambdas, &levels, &targets_on_grid)
                .map_err(|source| HarnessError::Replicate { seed: cfg.seed, source })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (level, l) in levels.iter().enumerate() {
        for (i, req) in spec.requests.iter().enumerate() {
            let values: Vec<f64> = results.iter().map(|r| r[level][i].0).collect();
            let sups: Vec<f64> = results.iter().map(|r| r[level][i].1).collect();
            let (mean, se) = mean_and_se(&values);
            let (sup, sup_se) = mean_and_se(&sups);
            let limit = targets[i].at(horizon);
            rows.push(ConvergenceRow {
                request: req.label.clone(),
                delta: l.delta,
                mean_v_at_t: mean,
                std_error: se,
                theoretical_limit: limit,
                target_std_error: targets[i].std_error_rate * horizon,
                abs_error: (mean - limit).abs(),
                sup_error_over_grid: sup,
                sup_error_std_error: sup_se,
                replicates: spec.replicates,
                sample_free: spec.replicates == 1,
            });
        }
    }
    Ok(ConvergenceTable { name: spec.name.clone(), truncation, rows })
}

#[derive(Debug, Clone)]
pub struct HolderSpec {
    pub params: RegimeParams,
    pub sigma: f64,
    pub truncation: usize,
    pub t0: f64,
    pub delta_grid: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderPoint {
    pub delta: f64,
    pub mean_norm: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderEstimate {
    pub r: f64,
    pub theoretical_alpha: f64,
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_error: f64,
    /// 95% OLS confidence interval for the slope.
    pub ci_low: f64,
    pub ci_high: f64,
    pub points: Vec<HolderPoint>,
}

/// Regresses `log E‖u(t₀+Δ) - u(t₀)‖_{H_r}` on `log Δ`.
///
/// Each sample draws `(u(t₀), u(t₀+Δ) - u(t₀))` exactly, so no path up to `t₀`
/// is simulated.
pub fn estimate_holder(spec: &HolderSpec) -> Result<HolderEstimate> {
    let n = spec.delta_grid.len();
    if n < 4 {
        return Err(HarnessError::Config(format!("Hölder regression needs at least 4 meshes, got {n}")));
    }
    if spec.replicates < 2 {
        return Err(HarnessError::Config("Hölder regression needs at least 2 replicates".into()));
    }
    if !(spec.t0 > 0.0) || spec.delta_grid.iter().any(|d| !(*d > 0.0)) {
        return Err(HarnessError::Config("need t0 > 0 and positive meshes".into()));
    }
    let lambdas = eigenvalues(&spec.params.domain, spec.truncation)?;
    let weights: Vec<f64> = lambdas.iter().map(|l| l.powf(spec.params.r)).collect();
    let mut points = Vec::with_capacity(n);
    for (level, &delta) in spec.delta_grid.iter().enumerate() {
        let sampler = IncrementSampler::new(&lambdas, spec.params.gamma, spec.t0, delta, spec.sigma);
        let level_seed = derive_seed(spec.seed, level as u64);
        let norms: Vec<f64> = (0..spec.replicates)
            .into_par_iter()
            .map_init(
                || vec![0.0; lambdas.len()],
                |buf, j| {
                    let mut rng = path_rng(derive_seed(level_seed, j as u64));
                    sampler.sample(&mut rng, buf);
                    buf.iter().zip(&weights).map(|(a, w)| w * a * a).sum::<f64>().sqrt()
                },
            )
            .collect();
        let (mean, se) = mean_and_se(&norms);
        points.push(HolderPoint { delta, mean_norm: mean, std_error: se });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.delta.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_norm.ln()).collect();
    let fit = ols(&xs, &ys);
    let t = StudentsT::new(0.0, 1.0, (n - 2) as f64).expect("valid degrees of freedom").inverse_cdf(0.975);
    Ok(HolderEstimate {
        r: spec.params.r,
        theoretical_alpha: pvlab_core::limits::holder_exponent(&spec.params)?,
        slope: fit.slope,
        intercept: fit.intercept,
        slope_std_error: fit.slope_se,
        ci_low: fit.slope - t * fit.slope_se,
        ci_high: fit.slope + t * fit.slope_se,
        points,
    })
}

struct Fit {
    slope: f64,
    intercept: f64,
    slope_se: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> Fit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Fit { slope, intercept, slope_se: (ssr / (n - 2.0) / sxx).sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pvlab_core::DomainSpec;

    fn spec(replicates: usize, grid: Vec<f64>) -> ExperimentSpec {
        let params = RegimeParams::new(-1.0, 1.0, DomainSpec::pi_interval()).unwrap();
        ExperimentSpec {
            name: "t".into(),
            sim: SimConfig::additive(params, 32, grid[0], 1.0, 1.0, 9),
            requests: vec![RequestSpec::power(-1.0, 2.0)],
            delta_grid: grid,
            replicates,
            output_dir: None,
            sigma_sq_integral: None,
            target_samples: 100,
        }
    }

    #[test]
    fn ols_recovers_a_line() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [1.0, 3.0, 5.0, 7.0];
        let f = ols(&xs, &ys);
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.slope_se < 1e-12);
    }

    #[test]
    fn decreasing_runs() {
        assert_eq!(longest_decreasing_run(&[5.0, 4.0, 3.0, 3.5, 2.0]), 3);
        assert_eq!(longest_decreasing_run(&[1.0]), 1);
        assert_eq!(longest_decreasing_run(&[]), 0);
    }

    #[test]
    fn single_replicate_single_level() {
        let table = run_convergence(&spec(1, vec![1.0 / 16.0])).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].sample_free);
        assert_eq!(table.rows[0].std_error, 0.0);
    }

    #[test]
    fn grid_validation() {
        assert!(spec(1, vec![0.25, 0.5]).validate().is_err());
        assert!(spec(1, vec![0.3]).validate().is_err());
        assert!(spec(0, vec![0.25]).validate().is_err());
        assert!(spec(2, vec![0.25, 0.125]).validate().is_ok());
    }

    #[test]
    fn rows_are_finite_with_positive_error() {
        let table = run_convergence(&spec(4, vec![1.0 / 8.0, 1.0 / 16.0])).unwrap();
        for row in &table.rows {
            assert!(row.abs_error.is_finite() && row.sup_error_over_grid.is_finite());
            assert!(row.std_error > 0.0);
        }
    }

    #[test]
    fn default_truncation_meets_rule_in_sub_regime() {
        let p = RegimeParams::new(-1.0, 1.0, DomainSpec::pi_interval()).unwrap();
        let c = default_truncation(&[p], 2f64.powi(-12)).unwrap();
        assert!(c.rule_met);
        assert!(c.truncation <= 512);
        let q = RegimeParams::new(0.0, 1.0, DomainSpec::pi_interval()).unwrap();
        let c = default_truncation(&[q], 2f64.powi(-12)).unwrap();
        assert!(!c.rule_met);
        assert_eq!(c.truncation, MAX_DEFAULT_TRUNCATION);
    }
}
