//! Multiprecision reals on top of `astro-float`.
//!
//! Each [`Mp`] carries its own working precision; binary operations round to
//! the larger of the two operand precisions. Transcendentals live on
//! [`MpCtx`], which owns the constant cache.

use core::cmp::Ordering;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = core::mem::size_of::<Word>() * 8;

#[derive(Clone, Debug)]
pub struct Mp {
    v: BigFloat,
    p: usize,
}

impl Mp {
    pub fn zero(p: usize) -> Self {
        Mp { v: BigFloat::new(p), p }
    }

    pub fn from_f64(x: f64, p: usize) -> Self {
        Mp { v: BigFloat::from_f64(x, p), p }
    }

    pub fn from_i64(x: i64, p: usize) -> Self {
        Mp { v: BigFloat::from_i64(x, p), p }
    }

    pub fn from_u64(x: u64, p: usize) -> Self {
        Mp { v: BigFloat::from_u64(x, p), p }
    }

    /// Exact when `p` covers the integer's bit length, correctly rounded otherwise.
    pub fn from_bigint(n: &BigInt, p: usize) -> Self {
        let (sign, digits) = n.to_u64_digits();
        let wp = p.max(digits.len() * 64 + 64);
        let base = BigFloat::from_u128(1u128 << 64, wp);
        let mut acc = BigFloat::new(wp);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, wp, RM).add(&BigFloat::from_u64(*d, wp), wp, RM);
        }
        if sign == BigSign::Minus {
            acc = BigFloat::neg(&acc);
        }
        let mut out = Mp { v: acc, p: wp };
        out.set_precision(p);
        out
    }

    pub fn from_ratio(r: &BigRational, p: usize) -> Self {
        let wp = p + 64;
        let num = Mp::from_bigint(r.numer(), wp);
        let den = Mp::from_bigint(r.denom(), wp);
        let mut q = &num / &den;
        q.set_precision(p);
        q
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn set_precision(&mut self, p: usize) {
        // Only fails on invalid precision, which callers never pass.
        let _ = self.v.set_precision(p, RM);
        self.p = p;
    }

    pub fn with_precision(mut self, p: usize) -> Self {
        self.set_precision(p);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative()
    }

    pub fn abs(&self) -> Self {
        Mp { v: self.v.abs(), p: self.p }
    }

    /// Binary exponent `e` with `|x| ∈ [2^(e-1), 2^e)`; `None` for zero.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() {
            None
        } else {
            self.v.exponent().map(i64::from)
        }
    }

    pub fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Mp::from_i64(1, self.p);
        }
        Mp { v: self.v.powi(n as usize, self.p, RM), p: self.p }
    }

    pub fn recip(&self) -> Self {
        Mp { v: self.v.reciprocal(self.p, RM), p: self.p }
    }

    pub fn sqrt(&self) -> Self {
        Mp { v: self.v.sqrt(self.p, RM), p: self.p }
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        self * &Mp::from_i64(k, self.p)
    }

    pub fn div_i64(&self, k: i64) -> Self {
        self / &Mp::from_i64(k, self.p)
    }

    /// Round to the nearest f64 (ties on the truncated 64-bit head are
    /// irrelevant at the accuracies this crate targets).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let Some((m, _, sign, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        let mag = libm::ldexp(head_bits(m) as f64, e - 64);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    pub fn partial_cmp_mp(&self, other: &Mp) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

/// Top 64 bits of a normalized mantissa (least significant word first).
fn head_bits(m: &[Word]) -> u64 {
    let mut acc: u64 = 0;
    let mut filled = 0usize;
    for w in m.iter().rev() {
        if filled >= 64 {
            break;
        }
        // Words are u32 on 32-bit targets.
        #[allow(clippy::useless_conversion)]
        let w = u64::from(*w);
        if WORD_BITS >= 64 {
            acc = w;
        } else {
            acc |= w << (64 - WORD_BITS - filled);
        }
        filled += WORD_BITS;
    }
    acc
}

impl PartialEq for Mp {
    fn eq(&self, other: &Self) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Mp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.partial_cmp_mp(other)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $m:ident) => {
        impl<'a> $tr<&'a Mp> for &'a Mp {
            type Output = Mp;
            fn $f(self, rhs: &'a Mp) -> Mp {
                let p = self.p.max(rhs.p);
                Mp { v: self.v.$m(&rhs.v, p, RM), p }
            }
        }
        impl $tr<Mp> for Mp {
            type Output = Mp;
            fn $f(self, rhs: Mp) -> Mp {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            fn $f(self, rhs: &'a Mp) -> Mp {
                (&self).$f(rhs)
            }
        }
        impl<'a> $tr<Mp> for &'a Mp {
            type Output = Mp;
            fn $f(self, rhs: Mp) -> Mp {
                self.$f(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);
binop!(Div, div, div);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp { v: BigFloat::neg(&self.v), p: self.p }
    }
}

impl Neg for &Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp { v: BigFloat::neg(&self.v), p: self.p }
    }
}

impl AddAssign<&Mp> for Mp {
    fn add_assign(&mut self, rhs: &Mp) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Mp> for Mp {
    fn add_assign(&mut self, rhs: Mp) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Mp> for Mp {
    fn sub_assign(&mut self, rhs: &Mp) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Mp> for Mp {
    fn sub_assign(&mut self, rhs: Mp) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Mp> for Mp {
    fn mul_assign(&mut self, rhs: &Mp) {
        *self = &*self * rhs;
    }
}

/// Precision context: constant cache plus the transcendental functions.
pub struct MpCtx {
    p: usize,
    cc: Consts,
    gamma: Option<Mp>,
}

impl core::fmt::Debug for MpCtx {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("MpCtx").field("p", &self.p).finish()
    }
}

impl MpCtx {
    pub fn new(p: usize) -> Self {
        let cc = Consts::new().expect("astro-float constant cache allocation");
        MpCtx { p, cc, gamma: None }
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn num(&self, x: f64) -> Mp {
        Mp::from_f64(x, self.p)
    }

    pub fn int(&self, x: i64) -> Mp {
        Mp::from_i64(x, self.p)
    }

    pub fn exp(&mut self, x: &Mp) -> Mp {
        let p = x.p.max(self.p);
        Mp { v: x.v.exp(p, RM, &mut self.cc), p }
    }

    pub fn ln(&mut self, x: &Mp) -> Mp {
        let p = x.p.max(self.p);
        Mp { v: x.v.ln(p, RM, &mut self.cc), p }
    }

    pub fn ln2(&mut self) -> Mp {
        let two = self.int(2);
        self.ln(&two)
    }

    /// Euler's constant at the context precision.
    pub fn euler_gamma(&mut self) -> Mp {
        let p = self.p;
        self.euler_gamma_at(p)
    }

    /// Euler's constant by the Brent–McMillan B1 iteration; the highest
    /// precision computed so far is cached.
    fn euler_gamma_at(&mut self, p: usize) -> Mp {
        if let Some(g) = &self.gamma {
            if g.p >= p {
                return g.clone().with_precision(p);
            }
        }
        let wp = p + 64;
        // Truncation error is below pi * e^(-4n).
        let n = ((wp as f64) * core::f64::consts::LN_2 / 4.0) as i64 + 2;
        let n_mp = Mp::from_i64(n, wp);
        let n2 = Mp::from_i64(n * n, wp);
        let mut a = -self.ln(&n_mp).with_precision(wp);
        let mut b = Mp::from_i64(1, wp);
        let mut u = a.clone();
        let mut v = b.clone();
        let mut k: i64 = 1;
        loop {
            let kk = Mp::from_i64(k, wp);
            b = &(&b * &n2) / &(&kk * &kk);
            a = &(&(&(&a * &n2) / &kk) + &b) / &kk;
            u += &a;
            v += &b;
            if k > n {
                let lim = v.exponent().unwrap_or(0) - wp as i64;
                let small = |x: &Mp| x.exponent().map_or(true, |e| e < lim);
                if small(&a) && small(&b) {
                    break;
                }
            }
            k += 1;
        }
        let g = (&u / &v).with_precision(p);
        self.gamma = Some(g.clone());
        g
    }

    /// `E1(x)` for `x > 0`.
    pub fn e1(&mut self, x: &Mp) -> Mp {
        let xf = x.to_f64();
        if xf < E1_SERIES_LIMIT {
            self.e1_series(x)
        } else {
            let s = self.exp_e1_cf(x);
            let e = self.exp(&-x);
            &s * &e
        }
    }

    /// `e^x E1(x)` for `x > 0`, without forming `e^x` for large `x`.
    pub fn exp_e1(&mut self, x: &Mp) -> Mp {
        let xf = x.to_f64();
        if xf < E1_SERIES_LIMIT {
            let e1 = self.e1_series(x);
            let ex = self.exp(x);
            &e1 * &ex
        } else {
            self.exp_e1_cf(x)
        }
    }

    /// `-γ - ln x + Σ (-1)^(k+1) x^k / (k k!)`, with guard bits for the
    /// `~e^(2x)` cancellation.
    fn e1_series(&mut self, x: &Mp) -> Mp {
        let xf = x.to_f64();
        let wp = self.p + (2.9 * xf) as usize + 64;
        let x = x.clone().with_precision(wp);
        let gamma = self.euler_gamma_at(wp);
        let mut sum = Mp::zero(wp);
        let mut pw = Mp::from_i64(1, wp);
        let mut k: i64 = 1;
        loop {
            pw = &(&pw * &x) / &Mp::from_i64(k, wp);
            let term = pw.div_i64(k);
            if k % 2 == 1 {
                sum += &term;
            } else {
                sum -= &term;
            }
            let te = term.exponent().unwrap_or(i64::MIN);
            if te < -(wp as i64) && k as f64 > xf {
                break;
            }
            k += 1;
        }
        let lx = self.ln(&x);
        (&(&sum - &gamma) - &lx).with_precision(self.p)
    }

    /// Continued fraction `e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- ...)))`,
    /// evaluated by the modified Lentz method.
    fn exp_e1_cf(&mut self, x: &Mp) -> Mp {
        let wp = self.p + 32;
        let x = x.clone().with_precision(wp);
        let one = Mp::from_i64(1, wp);
        let tiny_exp = -(4 * wp as i64);
        let tiny = Mp::from_f64(libm::ldexp(1.0, -900), wp);
        let mut b = &x + &one;
        let mut c = Mp::from_f64(1e300, wp);
        let mut d = b.recip();
        let mut h = d.clone();
        let mut i: i64 = 1;
        loop {
            let an = Mp::from_i64(-(i * i), wp);
            b = &b + &Mp::from_i64(2, wp);
            d = &(&an * &d) + &b;
            if d.exponent().map_or(true, |e| e < tiny_exp) {
                d = tiny.clone();
            }
            c = &b + &(&an / &c);
            if c.exponent().map_or(true, |e| e < tiny_exp) {
                c = tiny.clone();
            }
            d = d.recip();
            let del = &c * &d;
            h = &h * &del;
            let diff = &del - &one;
            if diff.exponent().map_or(true, |e| e < -(wp as i64) + 4) {
                break;
            }
            i += 1;
            if i > 100_000 {
                break;
            }
        }
        h.with_precision(self.p)
    }
}

/// Below this argument the power series (with guard bits) is used.
const E1_SERIES_LIMIT: f64 = 40.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_f64() {
        for x in [1.0, -2.5, 1e-300, 3.0e250, core::f64::consts::PI, 0.1] {
            assert_eq!(Mp::from_f64(x, 200).to_f64(), x);
        }
    }

    #[test]
    fn bigint_conversion_is_exact() {
        let n: BigInt = (1..=40u64).map(BigInt::from).product();
        let m = Mp::from_bigint(&n, 256);
        let back = &m / &Mp::from_bigint(&(&n / BigInt::from(40)), 256);
        assert_eq!(back.to_f64(), 40.0);
        let r = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(Mp::from_ratio(&r, 128).to_f64(), -1.0 / 3.0);
    }

    #[test]
    fn gamma_digits() {
        let mut ctx = MpCtx::new(320);
        let g = ctx.euler_gamma();
        // 0.57721566490153286060651209008240243104215933593992...
        let reference = Mp::from_bigint(
            &"57721566490153286060651209008240243104215933593992"
                .parse::<BigInt>()
                .unwrap(),
            320,
        ) / Mp::from_bigint(&BigInt::from(10).pow(50), 320);
        let diff = (&g - &reference).abs();
        assert!(diff.exponent().unwrap() < -160);
    }

    #[test]
    fn e1_series_and_cf_meet() {
        let mut ctx = MpCtx::new(256);
        let x = Mp::from_f64(40.0, 256);
        let a = ctx.e1_series(&x);
        let b = &ctx.exp_e1_cf(&x) * &ctx.exp(&-&x);
        let rel = (&(&a - &b) / &a).abs();
        assert!(rel.exponent().map_or(true, |e| e < -240), "{:?}", rel.to_f64());
        let one = ctx.e1(&Mp::from_f64(1.0, 256)).to_f64();
        assert!((one - 0.219_383_934_395_520_27).abs() < 1e-16);
    }
}
