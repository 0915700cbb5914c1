//! Solution paths as spectral coefficient matrices.
//!
//! Additive noise uses the exact Ornstein–Uhlenbeck transition of each mode,
//! so its only errors are mode truncation and Monte Carlo noise. Field and
//! state-dependent noise use an exponential Euler step on a midpoint grid
//! (one Gaussian per space-time cell), available in one dimension.
//!
//! Normals are drawn from one ChaCha8 stream per path, step-major and
//! mode-minor (cell-minor for field noise).

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::hilbert::norm_weights;
use crate::limits::RegimeParams;
use crate::rng::path_rng;
use crate::spectrum::{enumerate_eigenpairs, EigenPair};

pub type FieldSigma = Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
pub type StateSigma = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Noise intensity `σ`.
#[derive(Clone)]
pub enum SigmaMode {
    Constant(f64),
    /// `σ(t, x)`
    DeterministicField(FieldSigma),
    /// `σ(u(t, x))`
    StateDependent(StateSigma),
}

impl fmt::Debug for SigmaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::DeterministicField(_) => f.write_str("DeterministicField(..)"),
            Self::StateDependent(_) => f.write_str("StateDependent(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    /// Domain and `γ`; `r` plays no role in simulation.
    pub params: RegimeParams,
    pub truncation: usize,
    pub delta: f64,
    pub horizon: f64,
    pub sigma: SigmaMode,
    /// Number of midpoint cells for field noise.
    pub spatial_grid: usize,
    pub seed: u64,
}

impl SimConfig {
    pub fn additive(params: RegimeParams, truncation: usize, delta: f64, horizon: f64, c: f64, seed: u64) -> Self {
        Self { params, truncation, delta, horizon, sigma: SigmaMode::Constant(c), spatial_grid: 0, seed }
    }

    /// Number of steps `N = [T/Δ]`.
    pub fn steps(&self) -> usize {
        grid_index(self.horizon, self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation == 0 {
            return Err(Error::InvalidArgument("truncation must be at least 1".to_string()));
        }
        if !(self.gamma() > 0.0) {
            return Err(Error::InvalidArgument(format!("γ must be positive, got {}", self.gamma())));
        }
        if !(self.delta > 0.0 && self.delta < self.horizon && self.horizon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < Δ < T, got Δ = {}, T = {}",
                self.delta, self.horizon
            )));
        }
        match &self.sigma {
            SigmaMode::Constant(c) if !c.is_finite() => {
                Err(Error::InvalidArgument(format!("σ must be finite, got {c}")))
            }
            SigmaMode::Constant(_) => Ok(()),
            _ if self.spatial_grid < 2 * self.truncation => Err(Error::InvalidArgument(format!(
                "spatial grid M = {} must be at least 2K = {}",
                self.spatial_grid,
                2 * self.truncation
            ))),
            _ => Ok(()),
        }
    }

    fn gamma(&self) -> f64 {
        self.params.gamma
    }
}

/// `[t/Δ]` with a guard against rounding just below an integer.
pub fn grid_index(t: f64, delta: f64) -> usize {
    libm::floor(t / delta + 1e-12) as usize
}

/// Exact one-step transition of all modes for additive noise `σ ≡ c`:
/// `a ← q a + s ξ` with `q = e^{-λ^γ Δ}`, `s = c √((1 - q²)/(2λ^γ))`.
#[derive(Debug, Clone)]
pub struct AdditiveStepper {
    decay: Vec<f64>,
    noise: Vec<f64>,
    state: Vec<f64>,
}

impl AdditiveStepper {
    pub fn new(eigenvalues: &[f64], gamma: f64, delta: f64, c: f64) -> Self {
        let mut decay = Vec::with_capacity(eigenvalues.len());
        let mut noise = Vec::with_capacity(eigenvalues.len());
        for &l in eigenvalues {
            let rate = libm::pow(l, gamma);
            decay.push(libm::exp(-rate * delta));
            noise.push(c * libm::sqrt(-libm::expm1(-2.0 * rate * delta) / (2.0 * rate)));
        }
        Self { decay, noise, state: vec![0.0; eigenvalues.len()] }
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state.iter_mut().for_each(|a| *a = 0.0);
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for ((a, q), s) in self.state.iter_mut().zip(&self.decay).zip(&self.noise) {
            let xi: f64 = StandardNormal.sample(rng);
            *a = q * *a + s * xi;
        }
    }
}

/// Exact joint draw of `(u(t₀), u(t₀ + Δ) - u(t₀))` for additive noise from
/// the zero initial condition, without simulating the path up to `t₀`.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    marginal_sd: Vec<f64>,
    decay_minus_one: Vec<f64>,
    noise: Vec<f64>,
}

impl IncrementSampler {
    pub fn new(eigenvalues: &[f64], gamma: f64, t0: f64, delta: f64, c: f64) -> Self {
        let mut marginal_sd = Vec::with_capacity(eigenvalues.len());
        let mut decay_minus_one = Vec::with_capacity(eigenvalues.len());
        let mut noise = Vec::with_capacity(eigenvalues.len());
        for &l in eigenvalues {
            let rate = libm::pow(l, gamma);
            marginal_sd.push(c * libm::sqrt(-libm::expm1(-2.0 * rate * t0) / (2.0 * rate)));
            decay_minus_one.push(libm::expm1(-rate * delta));
            noise.push(c * libm::sqrt(-libm::expm1(-2.0 * rate * delta) / (2.0 * rate)));
        }
        Self { marginal_sd, decay_minus_one, noise }
    }

    /// Writes the increment coefficients into `out`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for k in 0..out.len() {
            let a: f64 = StandardNormal.sample(rng);
            let xi: f64 = StandardNormal.sample(rng);
            out[k] = self.decay_minus_one[k] * self.marginal_sd[k] * a + self.noise[k] * xi;
        }
    }
}

/// Draws `a_k(t)` for additive noise from its exact Gaussian marginal.
pub fn sample_marginal<R: Rng + ?Sized>(eigenvalues: &[f64], gamma: f64, t: f64, c: f64, rng: &mut R, out: &mut [f64]) {
    for (o, &l) in out.iter_mut().zip(eigenvalues) {
        let rate = libm::pow(l, gamma);
        let xi: f64 = StandardNormal.sample(rng);
        *o = c * libm::sqrt(-libm::expm1(-2.0 * rate * t) / (2.0 * rate)) * xi;
    }
}

/// Exponential Euler scheme for field noise on a one-dimensional domain.
pub struct FieldStepper {
    sigma: SigmaMode,
    delta: f64,
    decay: Vec<f64>,
    cells: Vec<f64>,
    /// `φ_k(y_m)`, row-major `K × M`.
    basis: Vec<f64>,
    cell_scale: f64,
    state: Vec<f64>,
    increment: Vec<f64>,
    time: f64,
}

impl FieldStepper {
    pub fn new(config: &SimConfig, modes: &[EigenPair]) -> Result<Self> {
        config.validate()?;
        let domain = &config.params.domain;
        if domain.dim() != 1 {
            return Err(Error::InvalidArgument(format!(
                "field noise needs a one-dimensional domain, got d = {}",
                domain.dim()
            )));
        }
        match &config.sigma {
            SigmaMode::Constant(_) => {
                return Err(Error::InvalidArgument(
                    "constant σ uses the exact additive scheme".to_string(),
                ))
            }
            SigmaMode::StateDependent(_) if !(config.gamma() > 0.5) => {
                return Err(Error::InvalidArgument(format!(
                    "state-dependent σ needs γ > d/2, got γ = {}",
                    config.gamma()
                )))
            }
            _ => {}
        }
        let k = modes.len();
        let m = config.spatial_grid;
        let width = domain.sides()[0] / m as f64;
        let cells: Vec<f64> = (0..m).map(|j| (j as f64 + 0.5) * width).collect();
        let mut basis = Vec::with_capacity(k * m);
        for mode in modes {
            for y in &cells {
                basis.push(mode.phi(core::slice::from_ref(y)));
            }
        }
        let decay = modes.iter().map(|p| libm::exp(-libm::pow(p.lambda, config.gamma()) * config.delta)).collect();
        Ok(Self {
            sigma: config.sigma.clone(),
            delta: config.delta,
            decay,
            cells,
            basis,
            cell_scale: libm::sqrt(config.delta * width),
            state: vec![0.0; k],
            increment: vec![0.0; m],
            time: 0.0,
        })
    }

    pub fn state(&self) -> &[f64] {
        &self.state
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let k = self.state.len();
        let m = self.cells.len();
        for j in 0..m {
            let s = match &self.sigma {
                SigmaMode::DeterministicField(f) => f(self.time, core::slice::from_ref(&self.cells[j])),
                SigmaMode::StateDependent(f) => {
                    let u: f64 = (0..k).map(|i| self.state[i] * self.basis[i * m + j]).sum();
                    f(u)
                }
                SigmaMode::Constant(c) => *c,
            };
            let xi: f64 = StandardNormal.sample(rng);
            self.increment[j] = s * self.cell_scale * xi;
        }
        for i in 0..k {
            let row = &self.basis[i * m..(i + 1) * m];
            let forcing: f64 = row.iter().zip(&self.increment).map(|(p, g)| p * g).sum();
            self.state[i] = self.decay[i] * (self.state[i] + forcing);
        }
        self.time += self.delta;
    }
}

/// Runs a path step by step, calling `visit(i, a(t_{i-1}), a(t_i))` for
/// `i = 1..=N` without storing it.
pub fn stream_path(config: &SimConfig, mut visit: impl FnMut(usize, &[f64], &[f64]) -> Result<()>) -> Result<()> {
    config.validate()?;
    let modes = enumerate_eigenpairs(&config.params.domain, config.truncation)?;
    let mut rng = path_rng(config.seed);
    let mut prev = vec![0.0; config.truncation];
    match &config.sigma {
        SigmaMode::Constant(c) => {
            let lambdas: Vec<f64> = modes.iter().map(|p| p.lambda).collect();
            let mut stepper = AdditiveStepper::new(&lambdas, config.gamma(), config.delta, *c);
            for i in 1..=config.steps() {
                stepper.step(&mut rng);
                visit(i, &prev, stepper.state())?;
                prev.copy_from_slice(stepper.state());
            }
        }
        _ => {
            let mut stepper = FieldStepper::new(config, &modes)?;
            for i in 1..=config.steps() {
                stepper.step(&mut rng);
                visit(i, &prev, stepper.state())?;
                prev.copy_from_slice(stepper.state());
            }
        }
    }
    Ok(())
}

/// A stored path: `coeffs[i][k] = a_k(t_i)` for `i = 0..=N`, row-major.
#[derive(Debug, Clone)]
pub struct CoefficientPath {
    pub times: Vec<f64>,
    pub coeffs: Vec<f64>,
    pub modes: Vec<EigenPair>,
    pub config: SimConfig,
}

fn record(config: &SimConfig) -> Result<CoefficientPath> {
    let n = config.steps();
    let k = config.truncation;
    let mut coeffs = vec![0.0; (n + 1) * k];
    stream_path(config, |i, _, cur| {
        coeffs[i * k..(i + 1) * k].copy_from_slice(cur);
        Ok(())
    })?;
    Ok(CoefficientPath {
        times: (0..=n).map(|i| i as f64 * config.delta).collect(),
        coeffs,
        modes: enumerate_eigenpairs(&config.params.domain, k)?,
        config: config.clone(),
    })
}

/// Path under additive noise `σ ≡ c` via the exact OU transition.
pub fn simulate_additive(config: &SimConfig) -> Result<CoefficientPath> {
    if !matches!(config.sigma, SigmaMode::Constant(_)) {
        return Err(Error::InvalidArgument("simulate_additive needs a constant σ".to_string()));
    }
    record(config)
}

/// Path under field or state-dependent noise via exponential Euler.
pub fn simulate_field_sigma(config: &SimConfig) -> Result<CoefficientPath> {
    if matches!(config.sigma, SigmaMode::Constant(_)) {
        return Err(Error::InvalidArgument("constant σ uses simulate_additive".to_string()));
    }
    record(config)
}

/// Either scheme, chosen by the noise mode.
pub fn simulate(config: &SimConfig) -> Result<CoefficientPath> {
    record(config)
}

impl CoefficientPath {
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn truncation(&self) -> usize {
        self.modes.len()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().map(|p| p.lambda).collect()
    }

    pub fn row(&self, i: usize) -> Result<&[f64]> {
        let k = self.truncation();
        if i > self.steps() {
            return Err(Error::InvalidArgument(format!("time index {i} exceeds N = {}", self.steps())));
        }
        Ok(&self.coeffs[i * k..(i + 1) * k])
    }

    /// `‖u(t_i)‖_{H_r}`.
    pub fn hr_norm(&self, i: usize, r: f64) -> Result<f64> {
        let w = norm_weights(&self.eigenvalues(), r);
        let row = self.row(i)?;
        Ok(libm::sqrt(row.iter().zip(&w).map(|(a, w)| w * a * a).sum()))
    }

    /// `‖u(t_i) - u(t_{i-1})‖_{H_r}` for `i ≥ 1`.
    pub fn increment_hr_norm(&self, i: usize, r: f64) -> Result<f64> {
        if i == 0 {
            return Err(Error::InvalidArgument("increments start at i = 1".to_string()));
        }
        let w = norm_weights(&self.eigenvalues(), r);
        let (prev, cur) = (self.row(i - 1)?, self.row(i)?);
        Ok(libm::sqrt(increment_norm_sq(prev, cur, &w)))
    }

    /// `u(t_i, x) = ∑ a_k(t_i) φ_k(x)`.
    pub fn evaluate_field(&self, i: usize, x: &[f64]) -> Result<f64> {
        let domain = &self.config.params.domain;
        if x.len() != domain.dim() || !domain.contains_closure(x) {
            return Err(Error::InvalidArgument(format!("point {x:?} lies outside the domain")));
        }
        let row = self.row(i)?;
        Ok(row.iter().zip(&self.modes).map(|(a, p)| a * p.phi(x)).sum())
    }
}

/// `∑ w_k (cur_k - prev_k)²`.
pub fn increment_norm_sq(prev: &[f64], cur: &[f64], weights: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..weights.len() {
        let d = cur[k] - prev[k];
        s += weights[k] * d * d;
    }
    s
}
