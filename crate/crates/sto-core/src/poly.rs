//! Dense univariate polynomials with exact rational coefficients.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::math::KahanSum;
use crate::mp::Mp;

/// `Σ c[e] z^e`; trailing zero coefficients are always trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    c: Vec<BigRational>,
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators/denominators: route through 256-bit floats.
        Mp::from_ratio(r, 256).to_f64()
    })
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::monomial(0, BigRational::one())
    }

    pub fn monomial(e: u32, coeff: BigRational) -> Self {
        let mut c = alloc::vec![BigRational::zero(); e as usize + 1];
        c[e as usize] = coeff;
        let mut p = Poly { c };
        p.trim();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, BigRational)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (e, v) in terms {
            p.add_term(e, &v);
        }
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|v| v.is_zero()) {
            self.c.pop();
        }
    }

    pub fn add_term(&mut self, e: u32, v: &BigRational) {
        let e = e as usize;
        if self.c.len() <= e {
            self.c.resize(e + 1, BigRational::zero());
        }
        self.c[e] += v;
        self.trim();
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.c.len().checked_sub(1).map(|d| d as u32)
    }

    pub fn coeff(&self, e: u32) -> BigRational {
        self.c.get(e as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &BigRational)> + '_ {
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(e, v)| (e as u32, v))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c.iter().map(|v| v * k).collect() }
    }

    /// Multiply by `z^e`.
    pub fn shift(&self, e: u32) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = alloc::vec![BigRational::zero(); e as usize];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn derivative(&self) -> Self {
        let mut p = Poly {
            c: self
                .c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(e, v)| v * BigRational::from_integer(BigInt::from(e)))
                .collect(),
        };
        p.trim();
        p
    }

    /// Exact `∫_{-1}^{1} p(x) dx`.
    pub fn integrate_symmetric(&self) -> BigRational {
        self.terms()
            .filter(|(e, _)| e % 2 == 0)
            .map(|(e, v)| v * BigRational::new(BigInt::from(2), BigInt::from(e + 1)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = KahanSum::new();
        let mut zp = 1.0;
        for (e, v) in self.c.iter().enumerate() {
            if e > 0 {
                zp *= z;
            }
            if !v.is_zero() {
                acc.add(rational_to_f64(v) * zp);
            }
        }
        acc.value()
    }

    pub fn eval_exact(&self, z: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for v in self.c.iter().rev() {
            acc = acc * z + v;
        }
        acc
    }

    pub fn eval_mp(&self, z: &Mp) -> Mp {
        let p = z.precision();
        let mut acc = Mp::zero(p);
        for v in self.c.iter().rev() {
            acc = &(&acc * z) + &Mp::from_ratio(v, p);
        }
        acc
    }

    pub fn max_abs_coeff(&self) -> BigRational {
        self.c.iter().map(|v| v.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = rhs.c.get(i).cloned().unwrap_or_else(BigRational::zero);
            c.push(a + b);
        }
        let mut p = Poly { c };
        p.trim();
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { c: self.c.iter().map(|v| -v).collect() }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut c = alloc::vec![BigRational::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        let mut p = Poly { c };
        p.trim();
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic() {
        let p = Poly::from_terms([(0, r(-1, 1)), (2, r(1, 1))]);
        let q = Poly::from_terms([(1, r(1, 2))]);
        let pq = &p * &q;
        assert_eq!(pq.coeff(3), r(1, 2));
        assert_eq!(pq.coeff(1), r(-1, 2));
        assert!((&p - &p).is_zero());
        assert_eq!(p.derivative(), Poly::monomial(1, r(2, 1)));
        assert_eq!(p.integrate_symmetric(), r(-4, 3));
        assert_eq!(p.eval(3.0), 8.0);
    }
}
