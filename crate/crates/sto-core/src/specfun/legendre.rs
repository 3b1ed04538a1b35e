use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::exact::{binom, fact, ratio, sign};
use crate::error::{Error, Result};
use crate::math;
use crate::mp::{Mp, MpCtx};
use crate::poly::Poly;

/// `P_l^m(x)` on the cut, Condon–Shortley phase included:
/// `P_l^m(x) = (-1)^m (1-x²)^{m/2} d^m P_l/dx^m`.
///
/// `m > l` yields the zero function.
pub fn legendre_p_cut(l: u32, m: u32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(alloc::format!("P_l^m on the cut needs |x| <= 1, got {x}")));
    }
    Ok(p_cut_unchecked(l, m, x))
}

fn p_cut_unchecked(l: u32, m: u32, x: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let s = math::sqrt((1.0 - x) * (1.0 + x));
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= -((2 * i - 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 1)..l {
        let next = ((2 * ll + 1) as f64 * x * cur - (ll + m) as f64 * prev) / (ll - m + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_μ^σ(x)` on the cut for `μ = 0..=mu_max` (zeros below `σ`).
pub fn legendre_p_cut_row(mu_max: u32, sigma: u32, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; mu_max as usize + 1];
    if sigma > mu_max {
        return out;
    }
    let s = math::sqrt((1.0 - x) * (1.0 + x));
    let mut pmm = 1.0;
    for i in 1..=sigma {
        pmm *= -((2 * i - 1) as f64) * s;
    }
    fill_row(&mut out, sigma, pmm, x);
    out
}

/// Upward three-term recurrence in the degree from `P_σ^σ`.
fn fill_row(out: &mut [f64], sigma: u32, start: f64, x: f64) {
    let m = sigma as usize;
    out[m] = start;
    if m + 1 < out.len() {
        out[m + 1] = x * (2 * m + 1) as f64 * start;
    }
    for l in (m + 1)..out.len().saturating_sub(1) {
        out[l + 1] =
            ((2 * l + 1) as f64 * x * out[l] - (l + m) as f64 * out[l - 1]) / (l - m + 1) as f64;
    }
}

/// Exact polynomial `P_μ^σ(z)(z²-1)^{σ/2}` off the cut (no phase).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLegendrePoly {
    pub mu: u32,
    pub sigma: u32,
    poly: Poly,
}

impl WeightedLegendrePoly {
    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Nonzero `(exponent, coefficient)` pairs, ascending in the exponent.
    pub fn coeffs(&self) -> Vec<(u32, BigRational)> {
        self.poly.terms().map(|(e, c)| (e, c.clone())).collect()
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.poly.eval(z)
    }
}

/// `P_μ^σ(z)(z²-1)^{σ/2} = (μ+σ)!/(2^μ μ!) Σ_p (-1)^p C(2μ-2p, μ-σ) C(μ,p) z^{μ+σ-2p}`.
///
/// `σ > μ` gives the zero polynomial.
pub fn weighted_p_offcut(mu: u32, sigma: u32) -> WeightedLegendrePoly {
    let mut poly = Poly::zero();
    if sigma <= mu {
        let (m, s) = (mu as i64, sigma as i64);
        let pre = ratio(fact(mu + sigma), BigInt::from(2).pow(mu) * fact(mu));
        for p in 0..=((m + s) / 2) {
            let c = binom(2 * m - 2 * p, m - s) * binom(m, p);
            if !c.is_zero() {
                let v = &pre * BigRational::from_integer(c) * sign(p);
                poly.add_term((m + s - 2 * p) as u32, &v);
            }
        }
    }
    WeightedLegendrePoly { mu, sigma, poly }
}

/// One `j`-term of the lower-order sum: `coeff · P_{μ-2j-1}^σ(z)(z²-1)^{σ/2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerTerm {
    pub j: u32,
    pub coeff: BigRational,
    pub p: WeightedLegendrePoly,
}

/// `Q_μ^σ(z)(z²-1)^{σ/2} = ½ Pw(z) ln((z+1)/(z-1)) + algebraic(z) + Σ lower`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedQ {
    pub log_part: WeightedLegendrePoly,
    /// The κ-sum: `Σ_κ C(σ,κ)(-1)^κ(κ-1)! Pw_μ^{σ-κ}(z) Σ_j C(κ,κ-2j-1) z^{κ-2j-1}`.
    pub algebraic_part: Poly,
    pub lower_terms: Vec<LowerTerm>,
}

impl WeightedQ {
    /// Algebraic part plus all lower terms, as one polynomial.
    pub fn polynomial_part(&self) -> Poly {
        self.lower_terms
            .iter()
            .fold(self.algebraic_part.clone(), |acc, t| &acc + &t.p.poly().scale(&t.coeff))
    }

    /// Direct f64 evaluation; cancels badly for large `μ` or `z`, see [`Self::eval_mp`].
    pub fn eval(&self, z: f64) -> f64 {
        let log = math::ln_1p(2.0 / (z - 1.0));
        0.5 * self.log_part.eval(z) * log + self.polynomial_part().eval(z)
    }

    pub fn eval_mp(&self, z: &Mp, ctx: &mut MpCtx) -> Mp {
        let p = z.precision();
        let one = Mp::from_i64(1, p);
        let ratio = &(z + &one) / &(z - &one);
        let log = ctx.ln(&ratio);
        let half = Mp::from_f64(0.5, p);
        &(&(&half * &self.log_part.poly().eval_mp(z)) * &log) + &self.polynomial_part().eval_mp(z)
    }
}

pub fn weighted_q_offcut(mu: u32, sigma: u32) -> WeightedQ {
    let log_part = weighted_p_offcut(mu, sigma);
    let mut algebraic_part = Poly::zero();
    for kappa in 1..=sigma {
        let k = kappa as i64;
        let mut inner = Poly::zero();
        for j in 0..=((k - 1) / 2) {
            inner.add_term((k - 2 * j - 1) as u32, &BigRational::from_integer(binom(k, k - 2 * j - 1)));
        }
        let c = BigRational::from_integer(binom(sigma as i64, k) * fact(kappa - 1)) * sign(k);
        let term = &weighted_p_offcut(mu, sigma - kappa).poly * &inner;
        algebraic_part = &algebraic_part + &term.scale(&c);
    }
    let mut lower_terms = Vec::new();
    let (m, s) = (mu as i64, sigma as i64);
    if m - 1 - s >= 0 {
        for j in 0..=((m - 1 - s) / 2) {
            let coeff = -BigRational::new(
                BigInt::from(2 * m - 4 * j - 1),
                BigInt::from((2 * j + 1) * (m - j)),
            );
            lower_terms.push(LowerTerm { j: j as u32, coeff, p: weighted_p_offcut((m - 2 * j - 1) as u32, sigma) });
        }
    }
    WeightedQ { log_part, algebraic_part, lower_terms }
}

/// `P_μ^σ(z)(z²-1)^{σ/2}` for `μ = 0..=mu_max`, `z > 1`, by upward recurrence.
pub fn weighted_p_row(mu_max: u32, sigma: u32, z: f64) -> Vec<f64> {
    let mut out = vec![0.0; mu_max as usize + 1];
    if sigma > mu_max {
        return out;
    }
    // (2σ-1)!! (z²-1)^σ
    let w = (z - 1.0) * (z + 1.0);
    let mut start = 1.0;
    for i in 1..=sigma {
        start *= (2 * i - 1) as f64 * w;
    }
    fill_row(&mut out, sigma, start, z);
    out
}

/// `Q_μ^σ(z)(z²-1)^{σ/2}` for `μ = 0..=mu_max`, `z > 1`.
///
/// Degree-zero order is a forward or Miller recurrence depending on which
/// is stable at `z`; orders are raised with
/// `qw_μ^{σ+1} = (μ-σ) z qw_μ^σ - (μ+σ) qw_{μ-1}^σ`.
pub fn weighted_q_row(mu_max: u32, sigma: u32, z: f64) -> Vec<f64> {
    let n = mu_max as usize;
    let mut row = q0_row(mu_max, z);
    let w = (z - 1.0) * (z + 1.0);
    for s in 0..sigma as usize {
        let mut next = vec![0.0; n + 1];
        // μ = 0 closed form at order s+1.
        let so = (s + 1) as i32;
        let d = 0.5
            * math::sign_pow(so as i64 - 1)
            * super::exact::fact_f64(s as u32)
            * (math::powi(z + 1.0, -so) - math::powi(z - 1.0, -so));
        next[0] = d * math::powi(w, so);
        for mu in 1..=n {
            next[mu] = (mu as f64 - s as f64) * z * row[mu] - (mu + s) as f64 * row[mu - 1];
        }
        row = next;
    }
    row
}

fn q0_row(mu_max: u32, z: f64) -> Vec<f64> {
    let n = mu_max as usize;
    let mut q = vec![0.0; n + 1];
    let q0 = 0.5 * math::ln_1p(2.0 / (z - 1.0));
    q[0] = q0;
    if n == 0 {
        return q;
    }
    let a = math::acosh(z);
    if a * 2.0 * n as f64 <= 3.0 {
        q[1] = z * q0 - 1.0;
        for mu in 1..n {
            q[mu + 1] = ((2 * mu + 1) as f64 * z * q[mu] - mu as f64 * q[mu - 1]) / (mu + 1) as f64;
        }
        return q;
    }
    // Miller: the minimal solution is recovered by downward recurrence
    // from far enough above that the dominant P-component has died out.
    let start = n + (40.0 / a) as usize + 20;
    let mut hi = 0.0; // q_{k+1}
    let mut cur = 1e-300; // q_k
    for k in (1..=start).rev() {
        let lo = ((2 * k + 1) as f64 * z * cur - (k + 1) as f64 * hi) / k as f64;
        hi = cur;
        cur = lo;
        if k - 1 <= n {
            q[k - 1] = cur;
        }
        if cur.abs() > 1e250 {
            hi *= 1e-250;
            cur *= 1e-250;
            for v in q.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let scale = q0 / q[0];
    for v in q.iter_mut() {
        *v *= scale;
    }
    q
}

/// Exact `∫_{-1}^{1} x^k P_μ^σ(x)(1-x²)^{σ/2} dx` (Condon–Shortley phase included).
pub fn cut_moment(mu: u32, sigma: u32, k: u32) -> BigRational {
    if sigma > mu {
        return BigRational::zero();
    }
    // On the cut, P_μ^σ(x)(1-x²)^{σ/2} = (-1)^σ (1-x²)^σ d^σP_μ, and
    // (1-x²)^σ = (-1)^σ (x²-1)^σ, so it equals the off-cut weighted polynomial.
    let p = weighted_p_offcut(mu, sigma);
    let xk = Poly::monomial(k, BigRational::one());
    (&xk * p.poly()).integrate_symmetric()
}
