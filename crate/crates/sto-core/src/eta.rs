//! The η-channel integral
//! `(-∂/∂β)^g ∫_{-1}^{1} P_μ^σ(η) (1-η²)^{σ/2} e^{-βη} dη`
//! with the on-cut (Condon–Shortley) `P_μ^σ`.
//!
//! The derivative is never taken numerically: it is the `η^g` weight,
//! which the series below carry analytically. The ascending series is the
//! production path; the finite exponential sum and the Bessel form exist as
//! cross-checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::math;
use crate::poly::rational_to_f64;
use crate::specfun::{bessel_i_halfint, binom, fact, fact_f64, sign};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaIntegralRequest {
    pub mu: u32,
    pub sigma: u32,
    pub g: u32,
    pub beta: f64,
}

impl EtaIntegralRequest {
    pub fn new(mu: u32, sigma: u32, g: u32, beta: f64) -> Self {
        EtaIntegralRequest { mu, sigma, g, beta }
    }
}

/// `|β|` below this (scaled by `1+g`) takes the exact β = 0 branch.
const BETA_ZERO: f64 = 1e-10;

/// Dispatching entry point: exact branch near β = 0, ascending series otherwise.
pub fn eta_integral(req: EtaIntegralRequest) -> Result<f64> {
    if req.sigma > req.mu || !req.beta.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "eta integral needs sigma <= mu and finite beta, got mu={} sigma={} beta={}",
            req.mu, req.sigma, req.beta
        )));
    }
    if req.beta.abs() < BETA_ZERO * (1.0 + req.g as f64) {
        Ok(eta_beta_zero(req.mu, req.sigma, req.g))
    } else {
        eta_ascending(req)
    }
}

/// Ascending series. All terms share one sign, so the sum is
/// accurate to a few ulps:
///
/// `(-1)^{μ+g} 2^{μ+1} (μ+σ)!/(μ-σ)! Σ_k β^{N-g} N!/(N-g)! (μ+k)!/(k! (2μ+2k+1)!)`,
/// `N = μ+2k-σ`; terms with `N < g` vanish.
pub fn eta_ascending(req: EtaIntegralRequest) -> Result<f64> {
    let EtaIntegralRequest { mu, sigma, g, beta } = req;
    if sigma > mu {
        return Ok(0.0);
    }
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Domain(alloc::format!("ascending eta series needs finite beta != 0, got {beta}")));
    }
    let (m, s, g_) = (mu as i64, sigma as i64, g as i64);
    let k0 = ((g_ + s - m).max(0) + 1) / 2;
    let term = |k: i64| -> f64 {
        let n = m + 2 * k - s;
        let mut t = math::powi(beta, (n - g_) as i32);
        for i in 0..g_ {
            t *= (n - i) as f64;
        }
        // (μ+k)!/(k!(2μ+2k+1)!) as a running product to stay in range.
        for i in 1..=m {
            t *= (k + i) as f64;
        }
        for j in 1..=(2 * m + 2 * k + 1) {
            t /= j as f64;
        }
        t
    };
    let mut t = term(k0);
    let mut sum = t;
    let b2 = beta * beta;
    for k in k0..k0 + 200 {
        // t_{k+1}/t_k
        let n = m + 2 * k - s;
        let mut r = b2 * (m + k + 1) as f64
            / ((k + 1) as f64 * (2 * m + 2 * k + 2) as f64 * (2 * m + 2 * k + 3) as f64);
        for i in 0..g_ {
            r *= (n + 2 - i) as f64 / (n - i) as f64;
        }
        t *= r;
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            let pre = math::sign_pow(m + g_)
                * math::powi(2.0, mu as i32 + 1)
                * (fact_f64(mu + sigma) / fact_f64(mu - sigma));
            return Ok(pre * sum);
        }
    }
    Err(Error::SeriesCap("ascending eta"))
}

/// Finite exponential sum:
///
/// `-(μ+σ)!/((μ-σ)! β^{σ+1}) Σ_{k≤μ} μ!/(μ-k)! C(μ+k,k)/(2β)^k
///   Σ_{j≤g} C(g,j) C(k+σ+j,j) j!/β^j [(-1)^{k+j+g+μ+1} e^β + e^{-β}]`.
///
/// Loses digits to cancellation for small `|β|`; cross-check only.
pub fn eta_descending(req: EtaIntegralRequest) -> Result<f64> {
    let EtaIntegralRequest { mu, sigma, g, beta } = req;
    if sigma > mu {
        return Ok(0.0);
    }
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::Domain(alloc::format!("descending eta sum needs finite beta != 0, got {beta}")));
    }
    let (ep, em) = (math::exp(beta), math::exp(-beta));
    let mut acc = math::KahanSum::new();
    for k in 0..=mu {
        let outer = fact_f64(mu) / fact_f64(mu - k)
            * binom_f64((mu + k) as i64, k as i64)
            / math::powi(2.0 * beta, k as i32);
        for j in 0..=g {
            let inner = binom_f64(g as i64, j as i64)
                * binom_f64((k + sigma + j) as i64, j as i64)
                * fact_f64(j)
                / math::powi(beta, j as i32);
            let bracket = math::sign_pow((k + j + g + mu + 1) as i64) * ep + em;
            acc.add(outer * inner * bracket);
        }
    }
    let pre = -(fact_f64(mu + sigma) / fact_f64(mu - sigma)) / math::powi(beta, sigma as i32 + 1);
    Ok(pre * acc.value())
}

/// `g = 0` Bessel form `(-1)^μ √(2π) (μ+σ)!/(μ-σ)! I_{μ+1/2}(β)/β^{σ+1/2}`,
/// extended to `β < 0` by the `η → -η` reflection.
pub fn eta_bessel(mu: u32, sigma: u32, beta: f64) -> Result<f64> {
    if sigma > mu {
        return Ok(0.0);
    }
    if beta < 0.0 {
        return Ok(math::sign_pow((mu + sigma) as i64) * eta_bessel(mu, sigma, -beta)?);
    }
    let i = bessel_i_halfint(mu, beta)?;
    let pre = math::sign_pow(mu as i64)
        * math::sqrt(2.0 * core::f64::consts::PI)
        * (fact_f64(mu + sigma) / fact_f64(mu - sigma));
    Ok(pre * i / math::pow(beta, sigma as f64 + 0.5))
}

/// β = 0 value, as f64.
pub fn eta_beta_zero(mu: u32, sigma: u32, g: u32) -> f64 {
    rational_to_f64(&eta_beta_zero_exact(mu, sigma, g))
}

/// β = 0 value, exact:
///
/// `(-1)^σ 2^{μ+2} (μ+σ)!/(μ-σ)! C(1+g+σ, (g+σ-μ)/2)
///   / ((1+σ)! C(g+σ+1, g) C(2+g+σ+μ, 1+(g+σ+μ)/2))`,
///
/// zero when `μ+σ+g` is odd or `g+σ < μ`.
pub fn eta_beta_zero_exact(mu: u32, sigma: u32, g: u32) -> BigRational {
    let (m, s, g) = (mu as i64, sigma as i64, g as i64);
    if s > m || (m + s + g) % 2 != 0 || g + s < m {
        return BigRational::zero();
    }
    let num = BigInt::from(2).pow(mu + 2) * fact(mu + sigma) * binom(1 + g + s, (g + s - m) / 2);
    let den = fact(mu - sigma)
        * fact(1 + sigma)
        * binom(g + s + 1, g)
        * binom(2 + g + s + m, 1 + (g + s + m) / 2);
    BigRational::new(num, den) * sign(s)
}

fn binom_f64(n: i64, k: i64) -> f64 {
    rational_to_f64(&BigRational::from_integer(binom(n, k)))
}
