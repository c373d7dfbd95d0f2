//! Heat kernels, Nash entropy and heat-kernel inequalities on model manifolds.
//!
//! The crate works with the exact heat kernels of four model spaces
//! (Euclidean space, hyperbolic 3-space, the round 2-sphere and the circle)
//! and evaluates the small-time behaviour of the Nash entropy, the moment
//! identities behind it and a family of differential Harnack-type estimates.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod error;
pub mod estimates;
pub mod kernels;
pub mod manifolds;
pub mod moments;
pub mod numerics;
pub mod parametrix;
pub mod special;

pub use error::{Error, Result};
pub use kernels::{eval_kernel, kernel_jet, total_mass, KernelJet, KernelSample};
pub use manifolds::ModelSpace;
