//! Index tuples of the closed form, with exact coefficients.
//!
//! Two families. Log tuples `(k, p)` pair with `D(k1, k2)`; polynomial
//! tuples `(k, n, κ|j)` pair with the incomplete-exponential tables at
//! `(k1°, f2)` and `(k2, f1)`. Coefficients exclude the family prefactor.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::specfun::{binom, fact, ratio, sign};

/// Derived orders of one tuple at derivative orders `(r1, r2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XiTermParams {
    pub k1: i64,
    pub k2: i64,
    pub k1o: i64,
    pub f1: i64,
    pub f2: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogTuple {
    pub k: u32,
    pub p: u32,
    /// `(-1)^{k+p} C(2μ-2k, μ-σ) C(μ,k) C(2μ-2p, μ-σ) C(μ,p)`.
    pub coeff: BigRational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFamily {
    /// From the `(z+1)^κ - (z-1)^κ` expansion; present only for `σ ≥ 1`.
    Kappa { kappa: u32, j: u32 },
    /// From the lower-order Legendre sum; present only for `μ-σ-1 ≥ 0`.
    Lower { j: u32 },
}

impl PolyFamily {
    pub fn j(&self) -> u32 {
        match *self {
            PolyFamily::Kappa { j, .. } | PolyFamily::Lower { j } => j,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyTuple {
    pub k: u32,
    pub n: u32,
    pub family: PolyFamily,
    /// `c_k` times the family coefficient.
    pub coeff: BigRational,
}

/// All tuples for one `(μ, σ)`, plus the grouped form the evaluator uses.
#[derive(Debug, Clone)]
pub struct XiTermSet {
    pub mu: u32,
    pub sigma: u32,
    /// `[(μ+σ)!/μ!]² / 2^{2μ+1}`.
    pub log_prefactor: BigRational,
    /// `(μ+σ)!/(2^{2μ} μ!)`.
    pub poly_prefactor: BigRational,
    pub log_terms: Vec<LogTuple>,
    pub poly_terms: Vec<PolyTuple>,
    /// `c_k = (-1)^k C(2μ-2k, μ-σ) C(μ,k)`, indexed by `k`.
    pub(crate) ck: Vec<BigRational>,
    /// Family coefficients summed per `f_base = μ+σ-2(n+j)-1`.
    pub(crate) w: Vec<(i64, BigRational)>,
}

impl XiTermSet {
    pub fn new(mu: u32, sigma: u32) -> Self {
        let (m, s) = (mu as i64, sigma as i64);
        let half = (m + s) / 2;
        let ck: Vec<BigRational> = (0..=half)
            .map(|k| BigRational::from_integer(binom(2 * m - 2 * k, m - s) * binom(m, k)) * sign(k))
            .collect();

        let mut log_terms = Vec::new();
        for k in 0..=half {
            for p in 0..=half {
                let c = &ck[k as usize] * &ck[p as usize];
                if !c.is_zero() {
                    log_terms.push(LogTuple { k: k as u32, p: p as u32, coeff: c });
                }
            }
        }

        // Family coefficients without c_k, keyed by (n, family).
        let mut family: Vec<(u32, PolyFamily, BigRational)> = Vec::new();
        for kappa in 1..=s {
            let head = ratio(fact(sigma), BigInt::from(kappa)) * sign(kappa) * BigRational::from_integer(binom(m + s - kappa, m));
            for j in 0..=((kappa - 1) / 2) {
                let hj = &head * BigRational::from_integer(binom(kappa, kappa - 2 * j - 1));
                for n in 0..=((m + s - kappa) / 2) {
                    let c = &hj * BigRational::from_integer(binom(2 * m - 2 * n, m - s + kappa) * binom(m, n)) * sign(n);
                    if !c.is_zero() {
                        family.push((n as u32, PolyFamily::Kappa { kappa: kappa as u32, j: j as u32 }, c));
                    }
                }
            }
        }
        if m - s > 0 {
            for j in 0..=((m - s - 1) / 2) {
                let cj = -ratio(
                    BigInt::from(2 * m - 4 * j - 1) * fact((m - 2 * j - 1 + s) as u32) * BigInt::from(2).pow(2 * j as u32 + 1),
                    BigInt::from((2 * j + 1) * (m - j)) * fact((m - 2 * j - 1) as u32),
                );
                for n in 0..=((m + s - 2 * j - 1) / 2) {
                    let c = &cj
                        * BigRational::from_integer(binom(2 * (m - 2 * j - 1 - n), m - 2 * j - 1 - s) * binom(m - 2 * j - 1, n))
                        * sign(n);
                    if !c.is_zero() {
                        family.push((n as u32, PolyFamily::Lower { j: j as u32 }, c));
                    }
                }
            }
        }

        let mut grouped: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (n, fam, c) in &family {
            let fb = m + s - 2 * (*n as i64 + fam.j() as i64) - 1;
            *grouped.entry(fb).or_insert_with(BigRational::zero) += c;
        }
        let w = grouped.into_iter().filter(|(_, c)| !c.is_zero()).collect();

        let mut poly_terms = Vec::new();
        for (k, c) in ck.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (n, fam, cf) in &family {
                poly_terms.push(PolyTuple { k: k as u32, n: *n, family: *fam, coeff: c * cf });
            }
        }

        let log_prefactor = ratio(
            fact(mu + sigma).pow(2),
            fact(mu).pow(2) * BigInt::from(2).pow(2 * mu + 1),
        );
        let poly_prefactor = ratio(fact(mu + sigma), BigInt::from(2).pow(2 * mu) * fact(mu));
        XiTermSet { mu, sigma, log_prefactor, poly_prefactor, log_terms, poly_terms, ck, w }
    }

    fn base(&self) -> i64 {
        (self.mu + self.sigma) as i64
    }

    pub fn log_params(&self, t: &LogTuple, r1: u32, r2: u32) -> XiTermParams {
        let b = self.base();
        XiTermParams {
            k1: b - 2 * t.p as i64 + r1 as i64,
            k2: b - 2 * t.k as i64 + r2 as i64,
            k1o: b - 2 * t.k as i64 + r1 as i64,
            f1: -1,
            f2: -1,
        }
    }

    pub fn poly_params(&self, t: &PolyTuple, r1: u32, r2: u32) -> XiTermParams {
        let b = self.base();
        let fb = b - 2 * (t.n as i64 + t.family.j() as i64) - 1;
        XiTermParams {
            k1: b - 2 * t.k as i64 + r1 as i64,
            k2: b - 2 * t.k as i64 + r2 as i64,
            k1o: b - 2 * t.k as i64 + r1 as i64,
            f1: fb + r1 as i64,
            f2: fb + r2 as i64,
        }
    }

    /// Largest table index any tuple touches at orders `(r1, r2)`.
    pub fn max_order(&self, r1: u32, r2: u32) -> usize {
        (self.base() + r1.max(r2) as i64) as usize
    }
}
