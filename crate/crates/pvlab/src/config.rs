//! JSON experiment configuration.
//!
//! Every field has a default, so `{}` is a valid configuration: the unit-σ
//! heat equation on `(0, π)` with `γ = 1`, `r = -1`, `T = 1` and the dyadic
//! grid `Δ = 2^-8 … 2^-12`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use pvlab_core::hilbert::Functional;
use pvlab_core::simulator::{FieldSigma, SigmaMode, StateSigma};
use pvlab_core::variations::ScalarFn;
use pvlab_core::{DomainSpec, RegimeParams, SimConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{HarnessError, Result};
use crate::harness::{default_truncation, ExperimentSpec, HolderSpec, IntegrandSpec, RequestSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub name: String,
    pub domain: DomainSpec,
    pub gamma: f64,
    /// Smoothness used by `constants` and by `simulate` for its norm CSV.
    pub r: f64,
    pub horizon: f64,
    /// Number of modes; chosen from the delta grid when absent.
    pub truncation: Option<usize>,
    pub sigma: SigmaConfig,
    /// Midpoint cells for field noise; `2K` when absent.
    pub spatial_grid: Option<usize>,
    pub variations: Vec<VariationConfig>,
    pub delta_grid: DeltaGrid,
    pub replicates: usize,
    pub seed: u64,
    /// `p` values of the even orders `2p` listed by `constants`.
    pub orders: Vec<u32>,
    pub holder: Option<HolderConfig>,
    /// Monte Carlo samples for targets that need the Gaussian measure sampler.
    pub target_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            domain: DomainSpec::pi_interval(),
            gamma: 1.0,
            r: -1.0,
            horizon: 1.0,
            truncation: None,
            sigma: SigmaConfig::Constant { value: 1.0 },
            spatial_grid: None,
            variations: vec![VariationConfig { r: -1.0, integrand: IntegrandConfig::Power { order: 2.0 }, normalizer: None }],
            delta_grid: DeltaGrid::Dyadic { dyadic: [8, 12] },
            replicates: 20,
            seed: 0,
            orders: vec![1, 2],
            holder: None,
            target_samples: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SigmaConfig {
    Constant { value: f64 },
    Field {
        profile: FieldProfile,
        #[serde(default = "one")]
        scale: f64,
    },
    /// `σ(u) = a + b·u` (affine) or `a + b·sin u` (sine).
    StateDependent { form: StateForm, a: f64, b: f64 },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldProfile {
    /// `σ ≡ 1`
    One,
    /// `σ(t, x) = sin x₁`
    SinX,
    /// `σ(t, x) = √t`
    SqrtT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateForm {
    Affine,
    Sine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationConfig {
    pub r: f64,
    #[serde(flatten)]
    pub integrand: IntegrandConfig,
    /// Fixed `τ`; the regime's `τ_n(r)` at each `Δ` when absent.
    #[serde(default)]
    pub normalizer: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntegrandConfig {
    /// `x^order` of the normalized increment norm.
    Power { order: f64 },
    /// `min(x², 1)`
    MinSqOne,
    /// `f ≡ 1`
    ConstantOne,
    /// `F(h) = ‖h‖^order_{H_r}` as a functional
    NormPower { order: f64 },
    /// `F(h) = ⟨h, b_1⟩²_{H_r}`
    FirstCoordinateSq,
    /// `F(h) = ⟨h, b_1⟩_{H_r}`
    FirstCoordinate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaGrid {
    /// `Δ = 2^-from, …, 2^-to`
    Dyadic { dyadic: [u32; 2] },
    List(Vec<f64>),
}

impl DeltaGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Dyadic { dyadic: [from, to] } => (*from..=*to).map(|e| 2f64.powi(-(e as i32))).collect(),
            Self::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderConfig {
    pub r: f64,
    /// Reference time; `T/2` when absent.
    #[serde(default)]
    pub t0: Option<f64>,
    pub delta_grid: DeltaGrid,
    #[serde(default)]
    pub replicates: Option<usize>,
    #[serde(default)]
    pub truncation: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            HarnessError::Config(m) => HarnessError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// SHA-256 of the canonical JSON form.
    pub fn spec_hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn params(&self, r: f64) -> Result<RegimeParams> {
        Ok(RegimeParams::new(r, self.gamma, self.domain.clone())?)
    }

    pub fn sigma_mode(&self) -> SigmaMode {
        match &self.sigma {
            SigmaConfig::Constant { value } => SigmaMode::Constant(*value),
            SigmaConfig::Field { profile, scale } => {
                let s = *scale;
                let f: FieldSigma = match profile {
                    FieldProfile::One => Arc::new(move |_, _| s),
                    FieldProfile::SinX => Arc::new(move |_, x| s * x[0].sin()),
                    FieldProfile::SqrtT => Arc::new(move |t, _| s * t.max(0.0).sqrt()),
                };
                SigmaMode::DeterministicField(f)
            }
            SigmaConfig::StateDependent { form, a, b } => {
                let (a, b) = (*a, *b);
                let f: StateSigma = match form {
                    StateForm::Affine => Arc::new(move |u| a + b * u),
                    StateForm::Sine => Arc::new(move |u| a + b * u.sin()),
                };
                SigmaMode::StateDependent(f)
            }
        }
    }

    /// `∫_D σ²(s, y) dy` for deterministic noise.
    pub fn sigma_sq_integral(&self) -> Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>> {
        let vol = self.domain.volume();
        match &self.sigma {
            SigmaConfig::Constant { value } => {
                let c = value * value * vol;
                Some(Arc::new(move |_| c))
            }
            SigmaConfig::Field { profile, scale } => {
                let s2 = scale * scale;
                Some(match profile {
                    FieldProfile::One => Arc::new(move |_| s2 * vol),
                    // ∫ sin²(x₁) over the box
                    FieldProfile::SinX => {
                        let l = self.domain.sides()[0];
                        let factor = vol / l * (l / 2.0 - (2.0 * l).sin() / 4.0);
                        Arc::new(move |_| s2 * factor)
                    }
                    FieldProfile::SqrtT => Arc::new(move |t| s2 * t.max(0.0) * vol),
                })
            }
            SigmaConfig::StateDependent { .. } => None,
        }
    }

    pub fn resolved_truncation(&self) -> Result<usize> {
        if let Some(k) = self.truncation {
            return Ok(k);
        }
        let grid = self.delta_grid.values();
        let finest = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let rs: Vec<f64> = if self.variations.is_empty() { vec![self.r] } else { self.variations.iter().map(|v| v.r).collect() };
        let params = rs.iter().map(|r| self.params(*r)).collect::<Result<Vec<_>>>()?;
        Ok(default_truncation(&params, finest)?.truncation)
    }

    pub fn sim_config(&self, delta: f64) -> Result<SimConfig> {
        let truncation = self.resolved_truncation()?;
        let params = self.params(self.r)?;
        Ok(SimConfig {
            params,
            truncation,
            delta,
            horizon: self.horizon,
            sigma: self.sigma_mode(),
            spatial_grid: self.spatial_grid.unwrap_or(2 * truncation),
            seed: self.seed,
        })
    }

    pub fn requests(&self) -> Vec<RequestSpec> {
        self.variations
            .iter()
            .map(|v| RequestSpec { label: v.label(), r: v.r, integrand: v.integrand.build(), tau_override: v.normalizer })
            .collect()
    }

    pub fn experiment(&self, output_dir: Option<PathBuf>) -> Result<ExperimentSpec> {
        let grid = self.delta_grid.values();
        let first = *grid.first().ok_or_else(|| HarnessError::Config("delta grid is empty".into()))?;
        let spec = ExperimentSpec {
            name: self.name.clone(),
            sim: self.sim_config(first)?,
            requests: self.requests(),
            delta_grid: grid,
            replicates: self.replicates,
            output_dir,
            sigma_sq_integral: self.sigma_sq_integral(),
            target_samples: self.target_samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn holder_spec(&self) -> Result<HolderSpec> {
        let h = self.holder.as_ref().ok_or_else(|| HarnessError::Config("config has no \"holder\" section".into()))?;
        let c = match self.sigma {
            SigmaConfig::Constant { value } => value,
            _ => return Err(HarnessError::Config("Hölder regression needs constant σ".into())),
        };
        let params = self.params(h.r)?;
        let grid = h.delta_grid.values();
        let finest = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let truncation = match h.truncation.or(self.truncation) {
            Some(k) => k,
            None => default_truncation(std::slice::from_ref(&params), finest)?.truncation,
        };
        Ok(HolderSpec {
            params,
            sigma: c,
            truncation,
            t0: h.t0.unwrap_or(self.horizon / 2.0),
            delta_grid: grid,
            replicates: h.replicates.unwrap_or(self.replicates),
            seed: self.seed,
        })
    }
}

impl VariationConfig {
    pub fn label(&self) -> String {
        let what = match &self.integrand {
            IntegrandConfig::Power { order } => format!("power{order}"),
            IntegrandConfig::MinSqOne => "min_sq_one".into(),
            IntegrandConfig::ConstantOne => "constant_one".into(),
            IntegrandConfig::NormPower { order } => format!("norm_power{order}"),
            IntegrandConfig::FirstCoordinateSq => "first_coordinate_sq".into(),
            IntegrandConfig::FirstCoordinate => "first_coordinate".into(),
        };
        format!("r={}:{what}", self.r)
    }
}

impl IntegrandConfig {
    pub fn build(&self) -> IntegrandSpec {
        match *self {
            Self::Power { order } => IntegrandSpec::Power(order),
            Self::MinSqOne => {
                let f: ScalarFn = Arc::new(|x| (x * x).min(1.0));
                IntegrandSpec::Scalar(f)
            }
            Self::ConstantOne => IntegrandSpec::Scalar(Arc::new(|_| 1.0)),
            Self::NormPower { order } => {
                let f: Functional = Arc::new(move |h| h.hr_norm_sq().powf(order / 2.0));
                IntegrandSpec::Functional(f)
            }
            Self::FirstCoordinateSq => IntegrandSpec::Functional(Arc::new(|h| h.basis_coordinate(0).powi(2))),
            Self::FirstCoordinate => IntegrandSpec::Functional(Arc::new(|h| h.basis_coordinate(0))),
        }
    }
}
