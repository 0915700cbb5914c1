//! Limit constants and exact moment identities the estimators converge to.
//!
//! Three regimes split at `r = -d/2`: below it (`Sub`) the normalized
//! increments are asymptotically i.i.d. and the limits involve the spectral
//! zeta function; at and above it (`Critical`, `Super`) the normalized
//! increment norms concentrate at `√K_r`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::combinatorics::complete_bell;
use crate::error::{Error, Result};
use crate::hilbert::{CoefficientView, Functional};
use crate::quadrature::{adaptive_simpson, gauss_legendre, pairwise_sum, CompositeRule};
use crate::rng::derive_seed;
use crate::spectrum::{eigenvalues, enumerate_eigenpairs, power_tail, spectral_zeta, DomainSpec, ZetaValue};

/// Eigenvalues used for zeta evaluations when no truncation is given.
pub const DEFAULT_ZETA_TRUNCATION: usize = 20_000;

/// Largest truncation accepted by [`mu_rf_estimate`].
pub const MAX_MU_TRUNCATION: usize = 2000;

/// Absolute tolerance of the time quadrature in [`GeneralSigmaLimit`].
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// `|r + d/2|` below which `r` is treated as the critical value.
const CRITICAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    /// `r < -d/2`
    Sub,
    /// `r = -d/2`
    Critical,
    /// `-d/2 < r < γ - d/2`
    Super,
}

/// Smoothness `r`, fractional power `γ` and domain of an experiment.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RegimeParams {
    pub r: f64,
    pub gamma: f64,
    pub domain: DomainSpec,
}

impl RegimeParams {
    /// Validates `γ > 0` and `r < γ - d/2`.
    pub fn new(r: f64, gamma: f64, domain: DomainSpec) -> Result<Self> {
        let p = Self { r, gamma, domain };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("γ must be positive, got {}", self.gamma)));
        }
        if !(self.r < self.upper_bound()) {
            return Err(Error::OutOfRegime { r: self.r, bound: self.upper_bound() });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `γ - d/2`: the solution lives in `H_r` iff `r` is below this.
    pub fn upper_bound(&self) -> f64 {
        self.gamma - self.half_dim()
    }

    fn half_dim(&self) -> f64 {
        self.dim() as f64 / 2.0
    }

    pub fn regime(&self) -> Regime {
        regime_of(self.r, self.dim())
    }
}

/// Regime of smoothness `r` in dimension `d`.
pub fn regime_of(r: f64, d: usize) -> Regime {
    let critical = -(d as f64) / 2.0;
    if (r - critical).abs() <= CRITICAL_TOLERANCE {
        Regime::Critical
    } else if r < critical {
        Regime::Sub
    } else {
        Regime::Super
    }
}

/// `τ = Δ^{delta_exponent} |log Δ|^{log_exponent}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TauScaling {
    pub delta_exponent: f64,
    pub log_exponent: f64,
}

impl TauScaling {
    pub fn of(params: &RegimeParams) -> Self {
        match params.regime() {
            Regime::Sub => Self { delta_exponent: 0.5, log_exponent: 0.0 },
            Regime::Critical => Self { delta_exponent: 0.5, log_exponent: 0.5 },
            Regime::Super => Self {
                delta_exponent: (params.upper_bound() - params.r) / (2.0 * params.gamma),
                log_exponent: 0.0,
            },
        }
    }

    pub fn eval(&self, delta: f64) -> f64 {
        let mut tau = libm::pow(delta, self.delta_exponent);
        if self.log_exponent != 0.0 {
            tau *= libm::pow(libm::log(delta).abs(), self.log_exponent);
        }
        tau
    }
}

/// The normalizer `τ_n(r)` for mesh `delta ∈ (0, 1)`.
pub fn tau_n(params: &RegimeParams, delta: f64) -> Result<f64> {
    params.validate()?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("mesh must lie in (0, 1), got {delta}")));
    }
    Ok(TauScaling::of(params).eval(delta))
}

/// `K_r`: `ζ_D(-r)` below the critical value, closed forms at and above it.
pub fn k_r(params: &RegimeParams) -> Result<f64> {
    Ok(k_r_detailed(params, DEFAULT_ZETA_TRUNCATION)?.0)
}

/// `K_r` together with the zeta value behind it (`Sub` regime only).
pub fn k_r_detailed(params: &RegimeParams, truncation: usize) -> Result<(f64, Option<ZetaValue>)> {
    params.validate()?;
    let d = params.half_dim();
    let vol = params.domain.volume();
    let base = libm::pow(4.0 * PI, d) * libm::tgamma(d);
    Ok(match params.regime() {
        Regime::Sub => {
            let z = spectral_zeta(&params.domain, -params.r, truncation)?;
            (z.value, Some(z))
        }
        Regime::Critical => (vol / (params.gamma * base), None),
        Regime::Super => {
            let gap = params.upper_bound() - params.r;
            (vol / (base * gap) * libm::tgamma((params.r + d) / params.gamma), None)
        }
    })
}

/// Per-unit-time limit of the normalized variation of even order `2p`
/// for additive noise of size `sigma`.
///
/// Below the critical value this is `σ^{2p} 2^p B_p(x_1, …, x_p)` with
/// `x_ℓ = (ℓ-1)!/2 · ζ_D(-ℓ r)`; otherwise `σ^{2p} K_r^p`.
pub fn limit_constant_even_power(params: &RegimeParams, p: u32, sigma: f64) -> Result<f64> {
    Ok(even_power_detailed(params, p, sigma, DEFAULT_ZETA_TRUNCATION)?.0)
}

fn even_power_detailed(params: &RegimeParams, p: u32, sigma: f64, truncation: usize) -> Result<(f64, Vec<ZetaValue>)> {
    params.validate()?;
    if p == 0 {
        return Err(Error::InvalidArgument("order p must be at least 1".to_string()));
    }
    let scale = libm::pow(sigma * sigma, p as f64);
    match params.regime() {
        Regime::Sub => {
            let mut zetas = Vec::with_capacity(p as usize);
            let mut x = Vec::with_capacity(p as usize);
            let mut factorial = 1.0;
            for l in 1..=p {
                if l > 1 {
                    factorial *= (l - 1) as f64;
                }
                let z = spectral_zeta(&params.domain, -(l as f64) * params.r, truncation)?;
                x.push(factorial / 2.0 * z.value);
                zetas.push(z);
            }
            Ok((scale * libm::pow(2.0, p as f64) * complete_bell(&x), zetas))
        }
        _ => {
            let (k, _) = k_r_detailed(params, truncation)?;
            Ok((scale * libm::pow(k, p as f64), Vec::new()))
        }
    }
}

/// Per-unit-time limit of the normalized variation of order `order > 0`
/// for additive noise of size `sigma`: `|σ|^p K_r^{p/2}` at and above the
/// critical value; below it only even integer orders have a closed form.
pub fn limit_constant_power(params: &RegimeParams, order: f64, sigma: f64) -> Result<f64> {
    params.validate()?;
    if !(order > 0.0) {
        return Err(Error::InvalidArgument(format!("order must be positive, got {order}")));
    }
    match params.regime() {
        Regime::Sub => {
            let half = order / 2.0;
            if libm::trunc(half) != half {
                return Err(Error::WrongRegime(format!(
                    "order {order} below the critical value has no closed-form limit; \
                     estimate it with mu_rf_estimate"
                )));
            }
            limit_constant_even_power(params, half as u32, sigma)
        }
        _ => Ok(libm::pow(sigma.abs(), order) * libm::pow(k_r(params)?, order / 2.0)),
    }
}

/// `t ↦ (K_r/|D|)^{p/2} ∫_0^t (∫_D σ²(s, y) dy)^{p/2} ds`, the limit of the
/// order-`p` variation for a deterministic noise intensity at or above the
/// critical value. `sigma_sq_integral(s)` must return `∫_D σ²(s, y) dy`.
pub struct GeneralSigmaLimit<F> {
    factor: f64,
    half_order: f64,
    sigma_sq_integral: F,
}

impl<F: Fn(f64) -> f64> GeneralSigmaLimit<F> {
    pub fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let integrand = |s: f64| libm::pow((self.sigma_sq_integral)(s).max(0.0), self.half_order);
        self.factor * adaptive_simpson(&integrand, 0.0, t, QUADRATURE_TOLERANCE)
    }
}

pub fn limit_process_general_sigma<F: Fn(f64) -> f64>(
    params: &RegimeParams,
    order: f64,
    sigma_sq_integral: F,
) -> Result<GeneralSigmaLimit<F>> {
    params.validate()?;
    if params.regime() == Regime::Sub {
        return Err(Error::WrongRegime(
            "below the critical value the limit is ∫ μ_{r,F}(σ²(s,·)) ds; use limit_process_sub_regime".to_string(),
        ));
    }
    if !(order >= 0.0) {
        return Err(Error::InvalidArgument(format!("order must be non-negative, got {order}")));
    }
    let factor = libm::pow(k_r(params)? / params.domain.volume(), order / 2.0);
    Ok(GeneralSigmaLimit { factor, half_order: order / 2.0, sigma_sq_integral })
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl MonteCarloEstimate {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let mean = pairwise_sum(values) / n as f64;
        let std_error = if n > 1 {
            let dev: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
            libm::sqrt(pairwise_sum(&dev) / (n - 1) as f64 / n as f64)
        } else {
            0.0
        };
        Self { mean, std_error, samples: n }
    }
}

/// Weight function `w ≥ 0` on the domain defining the covariance operator `Q_r(w)`.
#[derive(Clone)]
pub enum Weight {
    Constant(f64),
    Field(alloc::sync::Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

/// Sampler for `H ~ N_r(0, Q_r(w))` in the factor form
/// `H = ∑_k X_k λ_k^{-r/2} φ_k`, `Cov(X_k, X_ℓ) = λ_k^{r/2} λ_ℓ^{r/2} ∫ φ_k φ_ℓ w`,
/// truncated to the first `K` modes.
pub struct GaussianMeasureSampler {
    eigenvalues: Vec<f64>,
    r: f64,
    factor: CovarianceFactor,
}

enum CovarianceFactor {
    Diagonal(Vec<f64>),
    Dense(DMatrix<f64>),
}

impl GaussianMeasureSampler {
    pub fn new(params: &RegimeParams, weight: &Weight, truncation: usize) -> Result<Self> {
        params.validate()?;
        if params.regime() != Regime::Sub {
            return Err(Error::WrongRegime("Q_r(w) is trace class only for r < -d/2".to_string()));
        }
        if truncation == 0 || truncation > MAX_MU_TRUNCATION {
            return Err(Error::InvalidArgument(format!(
                "truncation must lie in 1..={MAX_MU_TRUNCATION}, got {truncation}"
            )));
        }
        let r = params.r;
        let lambdas = eigenvalues(&params.domain, truncation)?;
        let scale: Vec<f64> = lambdas.iter().map(|l| libm::pow(*l, r / 2.0)).collect();
        let factor = match weight {
            Weight::Constant(c) => {
                if !(*c >= 0.0) {
                    return Err(Error::InvalidArgument(format!("weight must be non-negative, got {c}")));
                }
                CovarianceFactor::Diagonal(scale.iter().map(|s| s * libm::sqrt(*c)).collect())
            }
            Weight::Field(w) => {
                let gram = weighted_gram(&params.domain, truncation, w.as_ref())?;
                let cov = DMatrix::from_fn(truncation, truncation, |k, l| scale[k] * scale[l] * gram[(k, l)]);
                CovarianceFactor::Dense(psd_square_root(cov)?)
            }
        };
        Ok(Self { eigenvalues: lambdas, r, factor })
    }

    pub fn truncation(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Draws the spectral coefficients `a_k(H)` of one sample into `out`.
    pub fn sample_into<R: rand::Rng + ?Sized>(&self, rng: &mut R, xi: &mut [f64], out: &mut [f64]) {
        let k = self.truncation();
        for v in xi.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        match &self.factor {
            CovarianceFactor::Diagonal(s) => {
                for i in 0..k {
                    out[i] = s[i] * xi[i];
                }
            }
            CovarianceFactor::Dense(l) => {
                for i in 0..k {
                    out[i] = l.row(i).iter().zip(xi.iter()).map(|(a, b)| a * b).sum();
                }
            }
        }
        for (o, l) in out.iter_mut().zip(&self.eigenvalues) {
            *o *= libm::pow(*l, -self.r / 2.0);
        }
    }

    /// Monte Carlo estimate of `E[F(H)]`.
    pub fn estimate(&self, functional: &Functional, samples: usize, seed: u64) -> Result<MonteCarloEstimate> {
        if samples == 0 {
            return Err(Error::InvalidArgument("at least one sample is needed".to_string()));
        }
        let k = self.truncation();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut xi = alloc::vec![0.0; k];
        let mut coeffs = alloc::vec![0.0; k];
        let mut values = Vec::with_capacity(samples);
        for _ in 0..samples {
            self.sample_into(&mut rng, &mut xi, &mut coeffs);
            let view = CoefficientView { coeffs: &coeffs, eigenvalues: &self.eigenvalues, r: self.r };
            values.push(functional(&view));
        }
        Ok(MonteCarloEstimate::from_samples(&values))
    }
}

/// `∫_D φ_k φ_ℓ w` for the first `k` eigenfunctions, by tensor Gauss–Legendre.
fn weighted_gram(domain: &DomainSpec, k: usize, w: &(dyn Fn(&[f64]) -> f64 + Send + Sync)) -> Result<DMatrix<f64>> {
    let pairs = enumerate_eigenpairs(domain, k)?;
    let d = domain.dim();
    let rules: Vec<CompositeRule> = (0..d)
        .map(|j| {
            let maxw = pairs.iter().map(|p| p.frequencies()[j]).fold(0.0, f64::max);
            CompositeRule::for_frequency(0.0, domain.sides()[j], 2.0 * maxw + 8.0)
        })
        .collect();
    let counts: Vec<usize> = rules.iter().map(|r| r.nodes.len()).collect();
    let total: usize = counts.iter().product();
    let mut phi = DMatrix::<f64>::zeros(total, k);
    let mut wts = alloc::vec![0.0; total];
    let mut point = alloc::vec![0.0; d];
    let mut idx = alloc::vec![0usize; d];
    for n in 0..total {
        let mut rem = n;
        for j in (0..d).rev() {
            idx[j] = rem % counts[j];
            rem /= counts[j];
        }
        let mut weight = 1.0;
        for j in 0..d {
            point[j] = rules[j].nodes[idx[j]];
            weight *= rules[j].weights[idx[j]];
        }
        let wv = w(&point);
        if !(wv >= 0.0) {
            return Err(Error::InvalidArgument(format!("weight is negative ({wv}) at {point:?}")));
        }
        wts[n] = weight * wv;
        for (c, p) in pairs.iter().enumerate() {
            phi[(n, c)] = p.phi(&point);
        }
    }
    let mut weighted = phi.clone();
    for (n, wn) in wts.iter().enumerate() {
        weighted.row_mut(n).scale_mut(*wn);
    }
    Ok(phi.transpose() * weighted)
}

/// `L` with `L Lᵀ = C` from the symmetric eigendecomposition, negative
/// eigenvalues from rounding clipped to zero.
fn psd_square_root(cov: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let eig = cov.symmetric_eigen();
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = eig.eigenvalues.min();
    if min < -1e-8 * max.max(f64::MIN_POSITIVE) {
        return Err(Error::Factorization(format!(
            "covariance has eigenvalue {min:e} (largest {max:e})"
        )));
    }
    let mut l = eig.eigenvectors;
    for (j, v) in eig.eigenvalues.iter().enumerate() {
        l.column_mut(j).scale_mut(libm::sqrt(v.max(0.0)));
    }
    Ok(l)
}

/// Monte Carlo estimate of `μ_{r,F}(w) = E[F(H)]`, `H ~ N_r(0, Q_r(w))`.
pub fn mu_rf_estimate(
    functional: &Functional,
    weight: &Weight,
    params: &RegimeParams,
    truncation: usize,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    GaussianMeasureSampler::new(params, weight, truncation)?.estimate(functional, samples, seed)
}

/// `∫_0^t μ_{r,F}(σ²(s, ·)) ds` for a deterministic `σ(s, y)`, by
/// Gauss–Legendre in time over `time_nodes` nodes with one Monte Carlo
/// estimate per node. The standard error combines the per-node errors.
#[allow(clippy::too_many_arguments)]
pub fn limit_process_sub_regime(
    params: &RegimeParams,
    functional: &Functional,
    sigma: alloc::sync::Arc<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>,
    t: f64,
    time_nodes: usize,
    truncation: usize,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if !(t >= 0.0) || time_nodes == 0 {
        return Err(Error::InvalidArgument("need t ≥ 0 and at least one time node".to_string()));
    }
    if t == 0.0 {
        return Ok(MonteCarloEstimate { mean: 0.0, std_error: 0.0, samples: 0 });
    }
    let (xs, ws) = gauss_legendre(time_nodes);
    let mut mean = 0.0;
    let mut var = 0.0;
    for (i, (x, w)) in xs.iter().zip(&ws).enumerate() {
        let s = 0.5 * t * (x + 1.0);
        let sig = sigma.clone();
        let weight = Weight::Field(alloc::sync::Arc::new(move |y: &[f64]| {
            let v = sig(s, y);
            v * v
        }));
        let est = mu_rf_estimate(functional, &weight, params, truncation, samples, derive_seed(seed, i as u64))?;
        let h = 0.5 * t * w;
        mean += h * est.mean;
        var += h * h * est.std_error * est.std_error;
    }
    Ok(MonteCarloEstimate { mean, std_error: libm::sqrt(var), samples: samples * time_nodes })
}

/// A truncated series with a bound on the omitted terms.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeriesValue {
    pub value: f64,
    pub truncation: usize,
    /// Upper bound on the (non-negative) omitted tail.
    pub tail_bound: f64,
}

fn sum_decreasing(terms: impl DoubleEndedIterator<Item = f64>) -> f64 {
    // reversed: small high-mode terms first
    terms.rev().fold(0.0, |acc, t| acc + t)
}

fn require_truncation(truncation: usize) -> Result<()> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".to_string()));
    }
    Ok(())
}

/// Upper bound on `∑_{k>K} λ_k^{r-γ}` from the Weyl-law tail model.
fn weight_tail_bound(params: &RegimeParams, lambda_k: f64, truncation: usize) -> f64 {
    let s = params.gamma - params.r;
    let (est, bound) = power_tail(&params.domain, lambda_k, truncation, s);
    est + bound
}

/// Upper bound on the `H_r` mass `∑_{k>K} λ_k^{r-γ}` dropped by truncating at `K` modes.
pub fn mode_tail_bound(params: &RegimeParams, truncation: usize) -> Result<f64> {
    params.validate()?;
    require_truncation(truncation)?;
    let lambdas = eigenvalues(&params.domain, truncation)?;
    Ok(weight_tail_bound(params, lambdas[truncation - 1], truncation))
}

/// `E‖u(t_i) - u(t_i - Δ)‖²_{H_r}` for `σ ≡ 1`:
/// `∑ λ_k^{r-γ} [(1 - e^{-λ_k^γ Δ}) - ½ (e^{-λ_k^γ (t_i-Δ)} - e^{-λ_k^γ t_i})²]`.
///
/// The second bracket term equals `½ e^{-2λ_k^γ t_i}(e^{λ_k^γ Δ} - 1)²`, written
/// without the overflowing exponential.
pub fn increment_variance(params: &RegimeParams, delta: f64, t_i: f64, truncation: usize) -> Result<SeriesValue> {
    params.validate()?;
    require_truncation(truncation)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("mesh must be positive, got {delta}")));
    }
    if t_i < delta * (1.0 - 1e-12) {
        return Err(Error::InvalidArgument(format!("t_i = {t_i} precedes the first grid point Δ = {delta}")));
    }
    let lambdas = eigenvalues(&params.domain, truncation)?;
    let (r, g) = (params.r, params.gamma);
    let prev = (t_i - delta).max(0.0);
    let value = sum_decreasing(lambdas.iter().map(|&l| {
        let rate = libm::pow(l, g);
        let jump = libm::exp(-rate * prev) - libm::exp(-rate * t_i);
        libm::pow(l, r - g) * (-libm::expm1(-rate * delta) - 0.5 * jump * jump)
    }));
    Ok(SeriesValue { value, truncation, tail_bound: weight_tail_bound(params, lambdas[truncation - 1], truncation) })
}

/// `E‖u(t)‖²_{H_r} = ½ ∑ λ_k^{r-γ}(1 - e^{-2λ_k^γ t})` for `σ ≡ 1`.
pub fn expected_hr_norm_sq(params: &RegimeParams, t: f64, truncation: usize) -> Result<SeriesValue> {
    params.validate()?;
    require_truncation(truncation)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("t must be non-negative, got {t}")));
    }
    let lambdas = eigenvalues(&params.domain, truncation)?;
    let (r, g) = (params.r, params.gamma);
    let value = 0.5
        * sum_decreasing(lambdas.iter().map(|&l| libm::pow(l, r - g) * -libm::expm1(-2.0 * libm::pow(l, g) * t)));
    let tail_bound = if t == 0.0 { 0.0 } else { 0.5 * weight_tail_bound(params, lambdas[truncation - 1], truncation) };
    Ok(SeriesValue { value, truncation, tail_bound })
}

/// Exact `E[V(T)]` of the order-2 variation with normalizer `tau`, horizon
/// `steps · Δ`, additive `σ ≡ 1`, summed in closed form over the time grid.
pub fn expected_quadratic_variation(
    params: &RegimeParams,
    delta: f64,
    steps: usize,
    tau: f64,
    truncation: usize,
) -> Result<f64> {
    params.validate()?;
    require_truncation(truncation)?;
    let lambdas = eigenvalues(&params.domain, truncation)?;
    let (r, g) = (params.r, params.gamma);
    let n = steps as f64;
    let total = sum_decreasing(lambdas.iter().map(|&l| {
        let rate = libm::pow(l, g) * delta;
        let one_minus_q = -libm::expm1(-rate);
        // ∑_{i=1}^{N} (q^{i-1} - q^i)² = (1-q)² (1 - q^{2N}) / (1 - q²)
        let transient = one_minus_q * one_minus_q * -libm::expm1(-2.0 * rate * n) / -libm::expm1(-2.0 * rate);
        libm::pow(l, r - g) * (n * one_minus_q - 0.5 * transient)
    }));
    Ok(total * delta / (tau * tau))
}

/// Optimal temporal Hölder exponent of `t ↦ u(t)` in `H_r`:
/// `1/2` for `r ≤ -d/2`, `(γ - d/2 - r)/(2γ)` above.
pub fn holder_exponent(params: &RegimeParams) -> Result<f64> {
    params.validate()?;
    Ok(match params.regime() {
        Regime::Sub | Regime::Critical => 0.5,
        Regime::Super => (params.upper_bound() - params.r) / (2.0 * params.gamma),
    })
}

/// Limit constant of the variation of order `2p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrderConstant {
    pub p: u32,
    pub order: u32,
    pub value: f64,
}

/// Every theoretical quantity attached to one `(r, γ, D)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitReport {
    pub params: RegimeParams,
    pub regime: Regime,
    pub tau: TauScaling,
    pub k_r: f64,
    pub constants_by_order: Vec<OrderConstant>,
    pub holder_alpha: f64,
    pub zeta_values_used: Vec<ZetaValue>,
}

/// Builds the [`LimitReport`] for `σ ≡ 1` and the even orders `2p`, `p ∈ orders`.
pub fn report_constants(params: &RegimeParams, orders: &[u32]) -> Result<LimitReport> {
    params.validate()?;
    let (k, kz) = k_r_detailed(params, DEFAULT_ZETA_TRUNCATION)?;
    let mut zetas: Vec<ZetaValue> = kz.into_iter().collect();
    let mut constants = Vec::with_capacity(orders.len());
    for &p in orders {
        let (value, zs) = even_power_detailed(params, p, 1.0, DEFAULT_ZETA_TRUNCATION)?;
        for z in zs {
            if !zetas.iter().any(|q| q.z == z.z) {
                zetas.push(z);
            }
        }
        constants.push(OrderConstant { p, order: 2 * p, value });
    }
    Ok(LimitReport {
        params: params.clone(),
        regime: params.regime(),
        tau: TauScaling::of(params),
        k_r: k,
        constants_by_order: constants,
        holder_alpha: holder_exponent(params)?,
        zeta_values_used: zetas,
    })
}
