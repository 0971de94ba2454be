//! Numerical verification of local gauge invariance for kinetic Lagrangians
//! of SU(n)_U ⊗ SU(m)_V theories, with fermions transforming bilaterally as
//! `Ψ → U Ψ V`.
//!
//! All spacetime dependence lives in truncated Fourier series on the
//! periodic 4-torus, so derivatives are exact and every identity check
//! reduces to a floating-point residual.

pub mod cli;
pub mod error;
pub mod ewmodel;
pub mod linalg;
pub mod fieldcfg;
pub mod gauge;
pub mod liealg;
pub mod verify;

pub use error::{Error, Result};
