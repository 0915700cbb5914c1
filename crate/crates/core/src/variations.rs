//! Normalized variations of a path along the uniform time grid:
//! `V(t) = Δ ∑_{i=1}^{[t/Δ]} g(increment_i / τ)` with `g` a power of the
//! `H_r` norm, a scalar function of it, or a functional of the increment.

use alloc::format;
use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hilbert::{norm_weights, CoefficientView, Functional};
use crate::limits::{regime_of, tau_n, Regime, RegimeParams};
use crate::simulator::{grid_index, increment_norm_sq, CoefficientPath};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Integrand {
    /// `x ↦ x^p` applied to the normalized increment norm.
    Power(f64),
    /// `f` applied to the normalized increment norm.
    Scalar(ScalarFn),
    /// `F` applied to the normalized increment itself.
    Functional(Functional),
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power(p) => write!(f, "Power({p})"),
            Self::Scalar(_) => f.write_str("Scalar(..)"),
            Self::Functional(_) => f.write_str("Functional(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VariationRequest {
    pub r: f64,
    pub integrand: Integrand,
    /// Normalizer `τ > 0`.
    pub tau: f64,
}

impl VariationRequest {
    pub fn power(r: f64, order: f64, tau: f64) -> Self {
        Self { r, integrand: Integrand::Power(order), tau }
    }

    pub fn scalar(r: f64, f: ScalarFn, tau: f64) -> Self {
        Self { r, integrand: Integrand::Scalar(f), tau }
    }

    pub fn functional(r: f64, f: Functional, tau: f64) -> Self {
        Self { r, integrand: Integrand::Functional(f), tau }
    }

    /// Power request normalized by the regime's `τ_n(r)` at mesh `delta`.
    pub fn power_normalized(params: &RegimeParams, order: f64, delta: f64) -> Result<Self> {
        Ok(Self::power(params.r, order, tau_n(params, delta)?))
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::InvalidArgument(format!("normalizer must be positive, got {}", self.tau)));
        }
        match &self.integrand {
            Integrand::Power(p) if !(*p > 0.0) => {
                Err(Error::InvalidArgument(format!("power must be positive, got {p}")))
            }
            Integrand::Functional(_) if regime_of(self.r, dim) != Regime::Sub => Err(Error::WrongRegime(format!(
                "functional variations need r < -d/2 = {}; at or above it no normalization gives a \
                 nondegenerate limit",
                -(dim as f64) / 2.0
            ))),
            _ => Ok(()),
        }
    }
}

/// `V(t_i)` at grid points `t_i`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VariationSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl VariationSeries {
    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }

    /// `max_i |V(t_i) - slope · t_i|`.
    pub fn sup_deviation(&self, slope: f64) -> f64 {
        self.times.iter().zip(&self.values).map(|(t, v)| (v - slope * t).abs()).fold(0.0, f64::max)
    }
}

/// Streaming evaluation of a variation, fed one increment at a time.
///
/// Values are recorded every `stride` steps, so a sup over a coarse grid
/// needs no stored path.
pub struct VariationAccumulator {
    request: VariationRequest,
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
    delta: f64,
    stride: usize,
    steps: usize,
    sum: f64,
    scratch: Vec<f64>,
    series: VariationSeries,
}

impl VariationAccumulator {
    pub fn new(request: VariationRequest, eigenvalues: &[f64], dim: usize, delta: f64, stride: usize) -> Result<Self> {
        request.validate(dim)?;
        if stride == 0 {
            return Err(Error::InvalidArgument("stride must be at least 1".to_string()));
        }
        Ok(Self {
            weights: norm_weights(eigenvalues, request.r),
            eigenvalues: eigenvalues.to_vec(),
            scratch: vec![0.0; eigenvalues.len()],
            request,
            delta,
            stride,
            steps: 0,
            sum: 0.0,
            series: VariationSeries { times: Vec::new(), values: Vec::new() },
        })
    }

    /// Adds the increment from `prev` to `cur`.
    pub fn push(&mut self, prev: &[f64], cur: &[f64]) -> Result<()> {
        self.steps += 1;
        let tau = self.request.tau;
        let term = match &self.request.integrand {
            Integrand::Power(p) => libm::pow(libm::sqrt(increment_norm_sq(prev, cur, &self.weights)) / tau, *p),
            Integrand::Scalar(f) => f(libm::sqrt(increment_norm_sq(prev, cur, &self.weights)) / tau),
            Integrand::Functional(f) => {
                for k in 0..self.scratch.len() {
                    self.scratch[k] = (cur[k] - prev[k]) / tau;
                }
                f(&CoefficientView { coeffs: &self.scratch, eigenvalues: &self.eigenvalues, r: self.request.r })
            }
        };
        if !term.is_finite() {
            return Err(Error::Evaluation {
                index: self.steps,
                message: format!("integrand returned {term}"),
            });
        }
        self.sum += term;
        if self.steps % self.stride == 0 {
            self.series.times.push(self.steps as f64 * self.delta);
            self.series.values.push(self.value());
        }
        Ok(())
    }

    /// `V` at the last pushed grid point.
    pub fn value(&self) -> f64 {
        self.delta * self.sum
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn into_series(self) -> VariationSeries {
        self.series
    }
}

/// The variation series of a stored path at every grid point `t_i`, `i = 1..=N`.
pub fn variation(path: &CoefficientPath, request: &VariationRequest) -> Result<VariationSeries> {
    let cfg = &path.config;
    let mut acc =
        VariationAccumulator::new(request.clone(), &path.eigenvalues(), cfg.params.dim(), cfg.delta, 1)?;
    for i in 1..=path.steps() {
        acc.push(path.row(i - 1)?, path.row(i)?)?;
    }
    Ok(acc.into_series())
}

pub fn power_variation(path: &CoefficientPath, request: &VariationRequest) -> Result<VariationSeries> {
    require(matches!(request.integrand, Integrand::Power(_)), "a power")?;
    variation(path, request)
}

pub fn f_variation(path: &CoefficientPath, request: &VariationRequest) -> Result<VariationSeries> {
    require(matches!(request.integrand, Integrand::Scalar(_)), "a scalar function")?;
    variation(path, request)
}

pub fn general_f_variation(path: &CoefficientPath, request: &VariationRequest) -> Result<VariationSeries> {
    require(matches!(request.integrand, Integrand::Functional(_)), "a functional")?;
    variation(path, request)
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("request integrand must be {what}")))
    }
}

/// `V(t)` read off a full series (`[t/Δ]` increments).
pub fn value_at(series: &VariationSeries, delta: f64, t: f64) -> f64 {
    match grid_index(t, delta) {
        0 => 0.0,
        i => series.values[(i - 1).min(series.values.len() - 1)],
    }
}
