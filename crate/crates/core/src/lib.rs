//! Spectral analysis of the overdetermined Dirichlet eigenvalue problem on
//! perturbed cylinders `B_1 x R`.
//!
//! The crate computes, for the unit ball in dimension `N`:
//!
//! * the radial Dirichlet spectrum and second-eigenfunction boundary data
//!   ([`spectrum`]),
//! * the dispersion function `sigma_k(T)` of the linearized boundary-flux
//!   operator on the straight cylinder of period `T` ([`dispersion`]),
//! * the bifurcation periods `T_*` and `T^*` where nontrivial periodic
//!   domains branch off, together with transversality and kernel-dimension
//!   certificates ([`bifurcation`]),
//! * an independent ODE-shooting oracle for `sigma_k` that never touches
//!   Bessel-ratio formulas ([`shooting`]),
//! * numerical audits of the Turan-type inequality
//!   `J_nu^2 > J_{nu-1} J_{nu+1}` and related monotonicity facts
//!   ([`inequality`]),
//! * a desk-scale eigensolver on perturbed cylinders that measures the
//!   boundary-flux deviation operator directly ([`cylinder`]).
//!
//! Everything is pure `f64` arithmetic with no global state; all public
//! functions are safe to call concurrently. The crate is `no_std`-compatible
//! (with `alloc`) when built with `--no-default-features --features libm`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bessel;
pub mod bifurcation;
pub mod cylinder;
pub mod dispersion;
pub mod error;
pub mod inequality;
pub mod shooting;
pub mod spectrum;

pub use error::{Error, Result};
