//! Exact-arithmetic kernel for certifying rational curves on complete-intersection
//! Calabi-Yau 3-folds.
//!
//! The crate builds explicit witness curves on the five CY complete-intersection
//! types (quadric quadruple in P^7, cubic+two quadrics in P^6, cubic pair and
//! quartic+quadric in P^5, quintic in P^4), assembles the incidence Jacobian of
//! the curve-in-hypersurface conditions at marked parameter values, and certifies
//! its rank by exact elimination over the rationals or a large prime field.
//! Splitting types of restricted tangent and normal bundles are recovered from
//! twisted global-section counts, and a high-precision Newton continuation pushes
//! a certified witness toward a nearby generic complete intersection.
//!
//! Everything outside [`continuation`] is exact: no floating point, no rounding.
//! The crate is `no_std` (with `alloc`); IO, serialization and the command-line
//! front end live in the companion `cicy-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod banded;
pub mod bigfloat;
pub mod bundles;
pub mod ci;
pub mod continuation;
pub mod curve;
pub mod error;
pub mod grids;
pub mod homform;
pub mod incidence;
pub mod matrix;
pub mod primes;
pub mod rng;
pub mod scalar;
pub mod unipoly;
pub mod vandermonde;
pub mod witness;

pub use error::CoreError;
pub use scalar::{Scalar, ScalarCtx};
