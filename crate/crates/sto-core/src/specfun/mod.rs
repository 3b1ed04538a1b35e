//! Exact combinatorics and the special functions the integral modules consume.

mod bessel;
mod exact;
mod expint;
mod legendre;

pub use bessel::bessel_i_halfint;
pub use exact::{binomial, factorial, ExactInteger};
pub use expint::{euler_gamma, exp_e1, exp_integral_e1};
pub use legendre::{
    legendre_p_cut, legendre_p_cut_row, weighted_p_offcut, weighted_p_row, weighted_q_offcut,
    weighted_q_row, LowerTerm, WeightedLegendrePoly, WeightedQ,
};

pub(crate) use exact::{binom, fact, fact_f64, ratio, sign};
pub use legendre::cut_moment;
