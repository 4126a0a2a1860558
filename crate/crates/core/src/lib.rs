//! Electromagnetic transfer matrices, Dirichlet-to-Neumann maps and Herglotz
//! certificates for passive layered media.
//!
//! A stack of homogeneous, possibly anisotropic layers is described by passive
//! material models ([`herglotz`]). At a complex frequency ω with Im ω > 0 and a
//! real tangential wave vector κ, [`transfer`] propagates the tangential fields
//! (E₁, E₂, H₁, H₂) across the stack, and [`dtn`] turns the resulting transfer
//! matrix into the boundary map from tangential E to tangential H together with
//! a certificate of its well-definedness and positivity.
//!
//! [`analyticity`] checks the map numerically as a function of ω and of each
//! tensor entry, and [`tubular`] provides Hermitian coordinates, cone tests and
//! the one-parameter tensor trajectories through the upper half-space.
//!
//! Runnable examples live in `examples/`: `herglotz_models`, `transfer_matrix`,
//! `dtn_map`, `energy_balance`, `herglotz_certificate`, `hartogs_slices`,
//! `tubular_domain` and `trajectory`. The `layerdtn` binary wraps [`cli`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyticity;
pub mod cli;
pub mod config;
pub mod dtn;
pub mod error;
pub mod herglotz;
pub mod linalg;
pub mod stack;
pub mod transfer;
pub mod tubular;

pub use error::{Error, Result};
