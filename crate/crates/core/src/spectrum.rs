//! Dirichlet eigenpairs of `-Δ` on boxes, Weyl asymptotics, the spectral zeta
//! function and the Green's kernel of the fractional heat semigroup.
//!
//! On a box `∏ (0, L_j)` the eigenfunctions separate:
//! `φ(x) = ∏ √(2/L_j) sin(π m_j x_j / L_j)` with eigenvalue `∑ (π m_j / L_j)²`.
//! Eigenpairs are indexed from 1 in increasing eigenvalue order; equal
//! eigenvalues are ordered lexicographically by multi-index.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// A bounded box `∏_j (0, L_j)` in `R^d` (an interval when `d = 1`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "DomainRepr", into = "DomainRepr")
)]
pub struct DomainSpec {
    sides: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct DomainRepr {
    dim: usize,
    sides: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<DomainRepr> for DomainSpec {
    type Error = Error;

    fn try_from(repr: DomainRepr) -> Result<Self> {
        if repr.dim != repr.sides.len() {
            return Err(Error::InvalidDomain(format!(
                "dim = {} but {} side lengths given",
                repr.dim,
                repr.sides.len()
            )));
        }
        DomainSpec::new(repr.sides)
    }
}

#[cfg(feature = "serde")]
impl From<DomainSpec> for DomainRepr {
    fn from(d: DomainSpec) -> Self {
        DomainRepr { dim: d.dim(), sides: d.sides }
    }
}

impl DomainSpec {
    pub fn new(sides: Vec<f64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidDomain("dimension must be at least 1".to_string()));
        }
        if let Some(bad) = sides.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(Error::InvalidDomain(format!("side length {bad} is not positive")));
        }
        Ok(Self { sides })
    }

    pub fn interval(length: f64) -> Result<Self> {
        Self::new(alloc::vec![length])
    }

    /// The interval `(0, π)`, where `λ_k = k²`.
    pub fn pi_interval() -> Self {
        Self { sides: alloc::vec![PI] }
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    /// Lebesgue measure `|D|`.
    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    /// Whether `x` lies in the closure of the box.
    pub fn contains_closure(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(&self.sides).all(|(xi, l)| (0.0..=*l).contains(xi))
    }
}

/// One Dirichlet eigenpair `(λ_k, φ_k)` of `-Δ` on a box.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    /// 1-based position in the sorted spectrum.
    pub index: usize,
    pub lambda: f64,
    pub multi_index: Vec<u32>,
    frequencies: Vec<f64>,
    amplitude: f64,
}

impl EigenPair {
    fn new(domain: &DomainSpec, multi_index: Vec<u32>) -> Self {
        let frequencies: Vec<f64> = multi_index
            .iter()
            .zip(domain.sides())
            .map(|(&m, &l)| PI * m as f64 / l)
            .collect();
        let lambda = frequencies.iter().map(|w| w * w).sum();
        let amplitude = domain.sides().iter().map(|l| libm::sqrt(2.0 / l)).product();
        Self { index: 0, lambda, multi_index, frequencies, amplitude }
    }

    /// The normalized eigenfunction `φ_k(x)`.
    pub fn phi(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.frequencies.len());
        self.frequencies
            .iter()
            .zip(x)
            .fold(self.amplitude, |acc, (w, xi)| acc * libm::sin(w * xi))
    }

    /// `sup_x |φ_k(x)|`.
    pub fn sup_norm(&self) -> f64 {
        self.amplitude
    }

    /// Angular frequencies `π m_j / L_j` along each axis.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }
}

fn require_count(count: usize) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("eigenpair count must be at least 1".to_string()));
    }
    Ok(())
}

/// The `count` smallest Dirichlet eigenpairs, sorted by eigenvalue.
pub fn enumerate_eigenpairs(domain: &DomainSpec, count: usize) -> Result<Vec<EigenPair>> {
    require_count(count)?;
    let multi = sorted_multi_indices(domain, count);
    Ok(multi
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let mut pair = EigenPair::new(domain, m);
            pair.index = i + 1;
            pair
        })
        .collect())
}

/// The `count` smallest Dirichlet eigenvalues (same order as [`enumerate_eigenpairs`]).
pub fn eigenvalues(domain: &DomainSpec, count: usize) -> Result<Vec<f64>> {
    require_count(count)?;
    if domain.dim() == 1 {
        let w = PI / domain.sides()[0];
        return Ok((1..=count).map(|k| (w * k as f64) * (w * k as f64)).collect());
    }
    Ok(sorted_multi_indices(domain, count)
        .into_iter()
        .map(|m| eigenvalue_of(domain, &m))
        .collect())
}

fn eigenvalue_of(domain: &DomainSpec, m: &[u32]) -> f64 {
    m.iter()
        .zip(domain.sides())
        .map(|(&mj, &l)| {
            let w = PI * mj as f64 / l;
            w * w
        })
        .sum()
}

/// Bounded multi-index sweep: collect every `m` with `λ(m) ≤ cut`, doubling
/// `cut` until at least `count` indices are found.
fn sorted_multi_indices(domain: &DomainSpec, count: usize) -> Vec<Vec<u32>> {
    let d = domain.dim();
    if d == 1 {
        return (1..=count as u32).map(|k| alloc::vec![k]).collect();
    }
    let floor: f64 = domain.sides().iter().map(|l| (PI / l) * (PI / l)).sum();
    let mut cut = (1.2 * weyl_constant(domain) * libm::pow(count as f64, 2.0 / d as f64)).max(floor);
    loop {
        let mut found: Vec<(f64, Vec<u32>)> = Vec::new();
        let mut current = alloc::vec![0u32; d];
        sweep(domain, cut, 0, 0.0, &mut current, &mut found);
        if found.len() >= count {
            found.sort_by(|a, b| match a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal) {
                Ordering::Equal => a.1.cmp(&b.1),
                o => o,
            });
            found.truncate(count);
            return found.into_iter().map(|(_, m)| m).collect();
        }
        cut *= 2.0;
    }
}

fn sweep(
    domain: &DomainSpec,
    cut: f64,
    axis: usize,
    partial: f64,
    current: &mut Vec<u32>,
    found: &mut Vec<(f64, Vec<u32>)>,
) {
    let l = domain.sides()[axis];
    let last = axis + 1 == domain.dim();
    // smallest possible contribution of the remaining axes
    let rest: f64 = domain.sides()[axis + 1..].iter().map(|s| (PI / s) * (PI / s)).sum();
    let mut m = 1u32;
    loop {
        let w = PI * m as f64 / l;
        let lam = partial + w * w;
        if lam + rest > cut {
            break;
        }
        current[axis] = m;
        if last {
            found.push((eigenvalue_of(domain, current), current.clone()));
        } else {
            sweep(domain, cut, axis + 1, lam, current, found);
        }
        m += 1;
    }
}

/// Weyl constant `C_D = 4π Γ(1 + d/2)^{2/d} / |D|^{2/d}`, so that `λ_n ~ C_D n^{2/d}`.
pub fn weyl_constant(domain: &DomainSpec) -> f64 {
    let d = domain.dim() as f64;
    4.0 * PI * libm::pow(libm::tgamma(1.0 + d / 2.0), 2.0 / d) / libm::pow(domain.volume(), 2.0 / d)
}

/// A value of the spectral zeta function with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZetaValue {
    pub z: f64,
    /// Partial sum plus the analytic tail estimate.
    pub value: f64,
    pub partial_sum: f64,
    pub truncation_index: usize,
    pub tail_estimate: f64,
    /// Bound on `|true tail - tail_estimate|`.
    pub tail_bound: f64,
}

/// Tail `∑_{k>n} λ_k^{-s}` for `s > d/2`, returned as `(estimate, bound)`.
///
/// The estimate replaces the eigenvalue counting function `N` by the two-term
/// Weyl law `Ñ(λ) = A λ^{d/2} - B λ^{(d-1)/2}` in
/// `∑_{k>n} λ_k^{-s} = s ∫_{λ_n}^∞ (N(λ) - n) λ^{-s-1} dλ`.
/// On an interval this is first-order Euler–Maclaurin and the bound brackets
/// the sum between the integrals over `[n, ∞)` and `[n+1, ∞)`. On boxes the
/// bound also covers the distance to the one-term model.
pub(crate) fn power_tail(domain: &DomainSpec, lambda_n: f64, n: usize, s: f64) -> (f64, f64) {
    let d = domain.dim() as f64;
    let q = 2.0 * s / d;
    debug_assert!(q > 1.0);
    let nf = n as f64;
    let (a, b) = weyl_coefficients(domain);
    let lead = a * (d / 2.0) * libm::pow(lambda_n, d / 2.0 - s) / (s - d / 2.0);
    let boundary = b * ((d - 1.0) / 2.0) * libm::pow(lambda_n, (d - 1.0) / 2.0 - s) / (s - (d - 1.0) / 2.0);
    let smoothed = a * libm::pow(lambda_n, d / 2.0) - b * libm::pow(lambda_n, (d - 1.0) / 2.0);
    let estimate = lead - boundary - (nf - smoothed) * libm::pow(lambda_n, -s);
    // bracket under the power law λ_k = λ_n (k/n)^{2/d}
    let scale = libm::pow(lambda_n, -s) * libm::pow(nf, q);
    let upper = scale * libm::pow(nf, 1.0 - q) / (q - 1.0);
    let lower = scale * libm::pow(nf + 1.0, 1.0 - q) / (q - 1.0);
    let mut bound = (upper - estimate).max(estimate - lower).max(0.0);
    if domain.dim() > 1 {
        let one_term = lead - (nf - a * libm::pow(lambda_n, d / 2.0)) * libm::pow(lambda_n, -s);
        bound = bound.max((estimate - one_term).abs());
    }
    (estimate, bound)
}

/// `(A, B)` of the two-term Weyl law `N(λ) ≈ A λ^{d/2} - B λ^{(d-1)/2}` for
/// the Dirichlet Laplacian on a box.
fn weyl_coefficients(domain: &DomainSpec) -> (f64, f64) {
    let d = domain.dim() as f64;
    let ball = |k: f64| libm::pow(PI, k / 2.0) / libm::tgamma(k / 2.0 + 1.0);
    let vol = domain.volume();
    let surface: f64 = domain.sides().iter().map(|l| 2.0 * vol / l).sum();
    let a = ball(d) * vol / libm::pow(2.0 * PI, d);
    let b = ball(d - 1.0) * surface / (4.0 * libm::pow(2.0 * PI, d - 1.0));
    (a, b)
}

/// `ζ_D(z) = ∑_k λ_k^{-z}`, convergent for `z > d/2`.
pub fn spectral_zeta(domain: &DomainSpec, z: f64, truncation: usize) -> Result<ZetaValue> {
    let threshold = domain.dim() as f64 / 2.0;
    if !(z > threshold) {
        return Err(Error::Divergent { z, threshold });
    }
    let lambdas = eigenvalues(domain, truncation)?;
    let terms: Vec<f64> = lambdas.iter().map(|l| libm::pow(*l, -z)).collect();
    // smallest terms first
    let partial_sum: f64 = terms.iter().rev().sum();
    let (tail_estimate, tail_bound) = power_tail(domain, lambdas[truncation - 1], truncation, z);
    Ok(ZetaValue {
        z,
        value: partial_sum + tail_estimate,
        partial_sum,
        truncation_index: truncation,
        tail_estimate,
        tail_bound,
    })
}

fn require_point(domain: &DomainSpec, x: &[f64], name: &str) -> Result<()> {
    if !domain.contains_closure(x) {
        return Err(Error::InvalidArgument(format!("{name} = {x:?} lies outside the domain")));
    }
    Ok(())
}

/// Truncated Green's kernel `g(t; x, y) = ∑_{k ≤ K} φ_k(x) φ_k(y) e^{-λ_k^γ t}`.
///
/// See [`greens_kernel_tail_bound`] for the size of the omitted modes.
pub fn greens_kernel(
    domain: &DomainSpec,
    gamma: f64,
    t: f64,
    x: &[f64],
    y: &[f64],
    truncation: usize,
) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("kernel needs t > 0, got {t}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument(format!("γ must be positive, got {gamma}")));
    }
    require_point(domain, x, "x")?;
    require_point(domain, y, "y")?;
    let pairs = enumerate_eigenpairs(domain, truncation)?;
    Ok(pairs
        .iter()
        .rev()
        .map(|p| p.phi(x) * p.phi(y) * libm::exp(-libm::pow(p.lambda, gamma) * t))
        .sum())
}

/// Bound on the modes omitted by [`greens_kernel`]:
/// `sup|φ|² ∑_{k>K} e^{-λ_k^γ t}` with `sup|φ_k|² = 2^d/|D|`, the exponential
/// sum bounded through the Weyl model `λ_k ≈ C_D k^{2/d}` anchored at `λ_K`.
///
/// Available when `k ↦ λ_k^γ` is convex under the model (`2γ/d ≥ 1`).
pub fn greens_kernel_tail_bound(domain: &DomainSpec, gamma: f64, t: f64, truncation: usize) -> Option<f64> {
    let d = domain.dim() as f64;
    let b = 2.0 * gamma / d;
    if b < 1.0 || !(t > 0.0) || truncation == 0 {
        return None;
    }
    let lambdas = eigenvalues(domain, truncation).ok()?;
    let lam_k = lambdas[truncation - 1];
    let kf = truncation as f64;
    // model: λ_k^γ = c k^b with c fixed by λ_K
    let c = libm::pow(lam_k, gamma) / libm::pow(kf, b);
    let slope = c * b * libm::pow(kf, b - 1.0);
    let exp_tail = libm::exp(-c * libm::pow(kf, b) * t) / (slope * t);
    Some(libm::pow(2.0, d) / domain.volume() * exp_tail)
}

/// Exact `∫_a^b φ_k φ_ℓ dy` on an interval domain, `k ≠ ℓ`.
pub fn cross_inner_product(domain: &DomainSpec, k: u32, l: u32, a: f64, b: f64) -> Result<f64> {
    if domain.dim() != 1 {
        return Err(Error::InvalidDomain("closed-form cross products need d = 1".to_string()));
    }
    if k == l {
        return Err(Error::InvalidArgument(
            "k = ℓ: diagonal integrals follow from orthonormality".to_string(),
        ));
    }
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("mode indices start at 1".to_string()));
    }
    let len = domain.sides()[0];
    if !(0.0 <= a && a <= b && b <= len) {
        return Err(Error::InvalidArgument(format!("({a}, {b}) is not a subinterval of (0, {len})")));
    }
    let wk = PI * k as f64 / len;
    let wl = PI * l as f64 / len;
    // d/dy [wk sin(wl y) cos(wk y) - wl sin(wk y) cos(wl y)] = (wl² - wk²) sin(wk y) sin(wl y)
    let anti = |y: f64| {
        wk * libm::sin(wl * y) * libm::cos(wk * y) - wl * libm::sin(wk * y) * libm::cos(wl * y)
    };
    Ok(2.0 / len * (anti(b) - anti(a)) / (wl * wl - wk * wk))
}
