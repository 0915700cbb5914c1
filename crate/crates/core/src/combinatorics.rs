//! Complete Bell polynomials, α-permanents and Gaussian even moments.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest matrix size accepted by [`alpha_permanent`] (`10! ≈ 3.6·10⁶` terms).
pub const MAX_PERMANENT_SIZE: usize = 10;

/// Smallest eigenvalue tolerated by [`gaussian_even_moment`].
pub const PSD_TOLERANCE: f64 = -1e-10;

/// A real symmetric `p × p` matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Checks shape and symmetry (to a relative `1e-12`).
    pub fn new(size: usize, entries: Vec<f64>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::InvalidArgument(format!(
                "expected {size}×{size} entries, got {}",
                entries.len()
            )));
        }
        for i in 0..size {
            for j in (i + 1)..size {
                let (a, b) = (entries[i * size + j], entries[j * size + i]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidArgument("rows must form a square matrix".to_string()));
        }
        Self::new(size, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    pub fn identity(size: usize) -> Self {
        let mut entries = alloc::vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.size, self.size, &self.entries)
    }

    /// Smallest eigenvalue (symmetric eigendecomposition).
    pub fn min_eigenvalue(&self) -> f64 {
        self.to_dmatrix().symmetric_eigenvalues().min()
    }
}

/// Number of disjoint cycles (fixed points included) of a permutation of `0..p`.
pub fn cycle_count(perm: &[usize]) -> Result<usize> {
    let p = perm.len();
    let mut seen = alloc::vec![false; p];
    for &v in perm {
        if v >= p || seen[v] {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
        seen[v] = true;
    }
    Ok(count_cycles_unchecked(perm, &mut seen))
}

fn count_cycles_unchecked(perm: &[usize], visited: &mut [bool]) -> usize {
    visited.iter_mut().for_each(|v| *v = false);
    let mut cycles = 0;
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = perm[i];
        }
    }
    cycles
}

/// `per_α(A) = ∑_{σ ∈ Sym_p} α^{#σ} ∏_i A[i][σ(i)]`.
///
/// Enumerates all `p!` permutations with Heap's algorithm; each term needs the
/// cycle structure of `σ`, which rules out Ryser-type formulas.
pub fn alpha_permanent(a: &SymMatrix, alpha: f64) -> Result<f64> {
    let p = a.size();
    if p > MAX_PERMANENT_SIZE {
        return Err(Error::SizeLimit { size: p, max: MAX_PERMANENT_SIZE });
    }
    let alpha_pow: Vec<f64> = (0..=p).map(|c| libm::pow(alpha, c as f64)).collect();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut visited = alloc::vec![false; p];
    let mut total = 0.0;
    let mut term = |perm: &[usize], visited: &mut [bool]| {
        let prod: f64 = perm.iter().enumerate().map(|(i, &j)| a.get(i, j)).product();
        if prod != 0.0 {
            total += alpha_pow[count_cycles_unchecked(perm, visited)] * prod;
        }
    };
    term(&perm, &mut visited);
    // iterative Heap's algorithm
    let mut c = alloc::vec![0usize; p];
    let mut i = 1;
    while i < p {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            term(&perm, &mut visited);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(total)
}

/// `E[X_1² ⋯ X_p²] = 2^p per_{1/2}(C)` for a centered Gaussian vector with covariance `C`.
pub fn gaussian_even_moment(c: &SymMatrix) -> Result<f64> {
    let min = c.min_eigenvalue();
    if min < PSD_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
    }
    Ok(libm::pow(2.0, c.size() as f64) * alpha_permanent(c, 0.5)?)
}

/// Complete Bell polynomial `B_p(x_1, …, x_p)` with `p = x.len()`, via
/// `B_{n+1} = ∑_{i=0}^{n} C(n, i) B_{n-i} x_{i+1}`, `B_0 = 1`.
pub fn complete_bell(x: &[f64]) -> f64 {
    let p = x.len();
    let mut bell = alloc::vec![0.0; p + 1];
    bell[0] = 1.0;
    let mut binom = alloc::vec![1.0f64];
    for n in 0..p {
        // binom holds row n of Pascal's triangle
        bell[n + 1] = (0..=n).map(|i| binom[i] * bell[n - i] * x[i]).sum();
        let mut next = alloc::vec![1.0; n + 2];
        for i in 1..=n {
            next[i] = binom[i - 1] + binom[i];
        }
        binom = next;
    }
    bell[p]
}
