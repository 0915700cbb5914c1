//! Spectral Galerkin simulation of parabolic SPDEs driven by space-time white
//! noise with a fractional Dirichlet Laplacian on boxes, and the power
//! variation estimators built on top of it.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

extern crate alloc;

pub mod combinatorics;
pub mod error;
pub mod hilbert;
pub mod limits;
pub mod quadrature;
pub mod rng;
pub mod simulator;
pub mod spectrum;
pub mod variations;

pub use error::{Error, Result};
pub use hilbert::{CoefficientView, Functional};
pub use limits::{Regime, RegimeParams};
pub use simulator::{CoefficientPath, SigmaMode, SimConfig};
pub use spectrum::DomainSpec;
pub use variations::{Integrand, VariationRequest, VariationSeries};
