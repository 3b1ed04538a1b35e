//! Two-electron repulsion integrals over Slater-type orbitals on a diatomic,
//! evaluated analytically through the Neumann expansion of `1/r12` in prolate
//! spheroidal coordinates, together with independent quadrature oracles and
//! the correlation-graph combinatorics.
//!
//! - [`specfun`]: exact combinatorics, Legendre functions, E1, Bessel.
//! - [`orbital`]: Slater orbitals, prolate geometry, two-center expansions.
//! - [`eta`]: the η-channel integral in its three regimes.
//! - [`xi`]: the ξ-channel double integral in closed form.
//! - [`engine`]: assembly of exchange, hybrid and Coulomb integrals.
//! - [`oracle`]: quadrature counterparts of every analytic object.
//! - [`graphs`]: connected-graph enumeration and degree compositions.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod eta;
pub mod graphs;
pub mod math;
pub mod mp;
pub mod oracle;
pub mod orbital;
pub mod poly;
pub mod specfun;
pub mod xi;

pub use error::{Error, Result};
