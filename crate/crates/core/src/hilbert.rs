//! Coefficient-space view of elements of the Sobolev scale `H_r`.

use alloc::sync::Arc;

/// Spectral coefficients `a_k` of an element of `H_r`, with the eigenvalues
/// `λ_k` and the smoothness index `r` that define its norm
/// `‖h‖_{H_r}² = ∑ λ_k^r a_k²`.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientView<'a> {
    pub coeffs: &'a [f64],
    pub eigenvalues: &'a [f64],
    pub r: f64,
}

impl CoefficientView<'_> {
    pub fn hr_norm_sq(&self) -> f64 {
        hr_norm_sq(self.coeffs, self.eigenvalues, self.r)
    }

    pub fn hr_norm(&self) -> f64 {
        libm::sqrt(self.hr_norm_sq())
    }

    /// `⟨h, b_k⟩_{H_r} = λ_k^{r/2} a_k` for the orthonormal basis `b_k = λ_k^{-r/2} φ_k`
    /// (`k` is 0-based here).
    pub fn basis_coordinate(&self, k: usize) -> f64 {
        libm::pow(self.eigenvalues[k], self.r / 2.0) * self.coeffs[k]
    }
}

/// A functional `F : H_r → R`, evaluated on coefficient vectors.
///
/// Continuity on `H_r` and polynomial growth are the caller's responsibility.
pub type Functional = Arc<dyn Fn(&CoefficientView<'_>) -> f64 + Send + Sync>;

pub fn hr_norm_sq(coeffs: &[f64], eigenvalues: &[f64], r: f64) -> f64 {
    coeffs
        .iter()
        .zip(eigenvalues)
        .map(|(a, l)| libm::pow(*l, r) * a * a)
        .sum()
}

/// Precomputed weights `λ_k^r`, for repeated norm evaluations.
pub fn norm_weights(eigenvalues: &[f64], r: f64) -> alloc::vec::Vec<f64> {
    eigenvalues.iter().map(|l| libm::pow(*l, r)).collect()
}
