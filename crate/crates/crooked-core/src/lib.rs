//! Flat Lorentzian geometry in signature (2,1), hyperbolic one-holed tori,
//! and crooked-plane fundamental domains for their proper affine deformations.
//!
//! The crate is organized bottom-up:
//!
//! * [`lorentz`] — the inner product space `V`, Minkowski space `E`,
//!   null frames, and (affine) isometries;
//! * [`hyperbolic`] — the hyperboloid model of `H^2`, halfplanes, ideal
//!   triangles, and the adjoint lift from `SL(2,R)`;
//! * [`farey`] — exact integer Farey/superbasis combinatorics in the rank
//!   two free group;
//! * [`surface`] — Fuchsian one-holed torus groups from trace triples and
//!   their Coxeter extensions by point involutions;
//! * [`crooked`] — crooked halfspaces, crooked ideal triangles, the
//!   structure decomposition, and exact disjointness decisions;
//! * [`margulis`] — affine deformations, Margulis invariants, tiles, and
//!   the tiling atlas of the deformation space;
//! * [`suites`] — the verification suites exercised by the CLI and the
//!   acceptance tests.
//!
//! Everything is pure and deterministic. The crate is `no_std`-compatible
//! (with `alloc`); disable the default `std` feature and enable `libm` to
//! build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
// Index loops over fixed 3x3/3x6 arrays read better than iterator chains
// in the matrix kernels below.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("crooked-core requires either the `std` or the `libm` feature");

pub mod crooked;
pub mod farey;
pub mod hyperbolic;
pub mod lorentz;
pub mod margulis;
pub mod rng;
pub mod suites;
pub mod surface;

mod error;
mod flt;
mod lp;

pub use error::GeomError;

/// Default tolerance for causal classification and orthogonality checks.
pub const EPS: f64 = 1e-9;

/// Tolerance for matrix-level residuals (isometry defect, involution defect).
pub const MAT_EPS: f64 = 1e-8;

pub type Result<T> = core::result::Result<T, GeomError>;
