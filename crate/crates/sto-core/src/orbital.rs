//! Slater orbitals on a diatomic, prolate spheroidal geometry and the
//! two-center expansion of an orbital into monomials `ξ^x η^y` times
//! `((ξ²-1)(1-η²))^{|m|/2} e^{-δR(ξ±η)/2} e^{imφ}` (upper sign on A).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::math;
use crate::poly::rational_to_f64;
use crate::specfun::{binom, fact, fact_f64, legendre_p_cut, ratio, sign};

/// Largest supported principal quantum number.
pub const MAX_N: u32 = 5;
/// Largest supported angular momentum.
pub const MAX_L: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Center {
    A,
    B,
}

impl Center {
    /// `+1` on A, `-1` on B: the `±` of every two-center expansion.
    pub fn sign(self) -> i64 {
        match self {
            Center::A => 1,
            Center::B => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlaterOrbital {
    pub n: u32,
    pub l: u32,
    pub m: i32,
    pub delta: f64,
    pub center: Center,
}

impl SlaterOrbital {
    /// Validated constructor.
    pub fn new(n: u32, l: u32, m: i32, delta: f64, center: Center) -> Result<Self> {
        let orb = SlaterOrbital { n, l, m, delta, center };
        orb.validate()?;
        Ok(orb)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 || self.l >= self.n {
            return Err(Error::InvalidOrbital(format!("need 0 <= l < n, got n={} l={}", self.n, self.l)));
        }
        if self.m.unsigned_abs() > self.l {
            return Err(Error::InvalidOrbital(format!("need |m| <= l, got l={} m={}", self.l, self.m)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidOrbital(format!("need finite delta > 0, got {}", self.delta)));
        }
        if self.n > MAX_N || self.l > MAX_L {
            return Err(Error::Unsupported { n: self.n, l: self.l });
        }
        Ok(())
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }

    /// Same orbital with `m → -m` (bra conjugation up to phase bookkeeping).
    pub fn conjugate(&self) -> Self {
        SlaterOrbital { m: -self.m, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProlatePoint {
    pub xi: f64,
    pub eta: f64,
    pub phi: f64,
}

impl ProlatePoint {
    pub fn new(xi: f64, eta: f64, phi: f64) -> Result<Self> {
        if !(xi >= 1.0 && (-1.0..=1.0).contains(&eta) && phi.is_finite()) {
            return Err(Error::Domain(format!("invalid prolate point ({xi}, {eta}, {phi})")));
        }
        Ok(ProlatePoint { xi, eta, phi })
    }

    /// `(r_a, r_b)` for internuclear distance `r`.
    pub fn distances(&self, r: f64) -> (f64, f64) {
        (0.5 * r * (self.xi + self.eta), 0.5 * r * (self.xi - self.eta))
    }

    /// `cos θ_a = (ξη+1)/(ξ+η)`; `1` on the nucleus itself.
    pub fn cos_theta_a(&self) -> f64 {
        let d = self.xi + self.eta;
        if d == 0.0 {
            1.0
        } else {
            ((self.xi * self.eta + 1.0) / d).clamp(-1.0, 1.0)
        }
    }

    /// `cos θ_b = (ξη-1)/(ξ-η)`; `1` on the nucleus itself.
    pub fn cos_theta_b(&self) -> f64 {
        let d = self.xi - self.eta;
        if d == 0.0 {
            1.0
        } else {
            ((self.xi * self.eta - 1.0) / d).clamp(-1.0, 1.0)
        }
    }

    fn radius_and_cos(&self, center: Center, r: f64) -> (f64, f64) {
        let (ra, rb) = self.distances(r);
        match center {
            Center::A => (ra, self.cos_theta_a()),
            Center::B => (rb, self.cos_theta_b()),
        }
    }
}

/// `ξ = (r_a+r_b)/R`, `η = (r_a-r_b)/R`, `φ = 0`.
pub fn prolate_coordinates(ra: f64, rb: f64, r: f64) -> Result<ProlatePoint> {
    let slack = 1e-14 * (ra + rb + r);
    if !(r > 0.0 && ra >= 0.0 && rb >= 0.0) || (ra - rb).abs() > r + slack || r > ra + rb + slack {
        return Err(Error::Triangle { ra, rb, r });
    }
    Ok(ProlatePoint {
        xi: ((ra + rb) / r).max(1.0),
        eta: ((ra - rb) / r).clamp(-1.0, 1.0),
        phi: 0.0,
    })
}

/// Spherical-form normalization
/// `(2δ)^{n+1/2} [(2l+1)(l-|m|)!/(4π(2n)!(l+|m|)!)]^{1/2}`.
pub fn normalization(orb: &SlaterOrbital) -> f64 {
    let (l, am) = (orb.l, orb.abs_m());
    let bracket = (2 * l + 1) as f64 * fact_f64(l - am)
        / (4.0 * core::f64::consts::PI * fact_f64(2 * orb.n) * fact_f64(l + am));
    math::pow(2.0 * orb.delta, orb.n as f64 + 0.5) * math::sqrt(bracket)
}

/// Expanded-form normalization: `(l+|m|)!` moves into the numerator,
/// i.e. `normalization · (l+|m|)!`.
pub fn expanded_prefactor(orb: &SlaterOrbital) -> f64 {
    let (l, am) = (orb.l, orb.abs_m());
    let bracket = (2 * l + 1) as f64 * fact_f64(l - am) * fact_f64(l + am)
        / (4.0 * core::f64::consts::PI * fact_f64(2 * orb.n));
    math::pow(2.0 * orb.delta, orb.n as f64 + 0.5) * math::sqrt(bracket)
}

/// Spherical route: `(-1)^{(m-|m|)/2} N e^{imφ} r^{n-1} e^{-δr} P_l^{|m|}(cos θ)`.
pub fn evaluate(orb: &SlaterOrbital, p: &ProlatePoint, r: f64) -> Complex64 {
    let (rc, c) = p.radius_and_cos(orb.center, r);
    let radial = math::powi(rc, orb.n as i32 - 1) * math::exp(-orb.delta * rc);
    // l, |m| are validated, so the Legendre call cannot fail.
    let ang = legendre_p_cut(orb.l, orb.abs_m(), c).unwrap_or(0.0);
    let phase = if orb.m < 0 { math::sign_pow(orb.m as i64) } else { 1.0 };
    let v = phase * normalization(orb) * radial * ang;
    Complex64::from_polar(1.0, orb.m as f64 * p.phi) * v
}

/// One term of the two-center expansion, indices kept for the engine.
/// The monomial is `ξ^{2s-p+q+n-l-1-a} η^{p+q+a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionTerm {
    pub s: u32,
    pub p: u32,
    pub q: u32,
    pub a: u32,
    pub xi_pow: u32,
    pub eta_pow: u32,
    /// Exact: `(-1)^{s+(m+|m|)/2}/(2^l l!) C(2l-2s, l-|m|-2s) C(l,s)
    /// C(l-|m|-2s, q) C(2s, p) (±)^{l-|m|-q+p} C(n-l-1, a) (±)^a`.
    pub coeff: BigRational,
}

/// Aggregated monomial with a numeric coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonomialTerm {
    pub xi_pow: u32,
    pub eta_pow: u32,
    pub coeff: f64,
}

/// Orbital bound to a geometry and expanded around the bond midpoint.
#[derive(Debug, Clone)]
pub struct OrbitalExpansion {
    pub orbital: SlaterOrbital,
    pub r: f64,
    pub terms: Vec<ExpansionTerm>,
}

/// Exact index-level expansion (no normalization, no `(R/2)^{n-1}`).
pub fn expansion_terms(orb: &SlaterOrbital) -> Vec<ExpansionTerm> {
    let (n, l, am) = (orb.n as i64, orb.l as i64, orb.abs_m() as i64);
    let pm = orb.center.sign();
    let head = ratio(1.into(), num_bigint::BigInt::from(2).pow(orb.l) * fact(orb.l))
        * sign((orb.m as i64 + am) / 2);
    let mut out = Vec::new();
    for s in 0..=(l - am) / 2 {
        let cs = &head * sign(s) * BigRational::from_integer(binom(2 * l - 2 * s, l - am - 2 * s) * binom(l, s));
        let lq = l - am - 2 * s;
        for p in 0..=2 * s {
            for q in 0..=lq {
                let cpq = &cs
                    * BigRational::from_integer(binom(lq, q) * binom(2 * s, p))
                    * sign_pm(pm, l - am - q + p);
                for a in 0..=(n - l - 1) {
                    let c = &cpq * BigRational::from_integer(binom(n - l - 1, a)) * sign_pm(pm, a);
                    if c.is_zero() {
                        continue;
                    }
                    out.push(ExpansionTerm {
                        s: s as u32,
                        p: p as u32,
                        q: q as u32,
                        a: a as u32,
                        xi_pow: (2 * s - p + q + n - l - 1 - a) as u32,
                        eta_pow: (p + q + a) as u32,
                        coeff: c,
                    });
                }
            }
        }
    }
    out
}

fn sign_pm(pm: i64, e: i64) -> BigRational {
    if pm > 0 {
        BigRational::one()
    } else {
        sign(e)
    }
}

/// Binds `orb` to internuclear distance `r` and expands it.
pub fn two_center_expansion(orb: &SlaterOrbital, r: f64) -> Result<OrbitalExpansion> {
    orb.validate()?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("internuclear distance must be > 0, got {r}")));
    }
    Ok(OrbitalExpansion { orbital: *orb, r, terms: expansion_terms(orb) })
}

impl OrbitalExpansion {
    /// Exponential scale `δR/2`; the exponent is `-scale·(ξ ± η)`.
    pub fn scale(&self) -> f64 {
        0.5 * self.orbital.delta * self.r
    }

    /// Numeric factor in front of the monomial sum:
    /// expanded prefactor times `(R/2)^{n-1}`.
    pub fn prefactor(&self) -> f64 {
        expanded_prefactor(&self.orbital) * math::powi(0.5 * self.r, self.orbital.n as i32 - 1)
    }

    /// Like monomials merged, prefactor folded in.
    pub fn monomials(&self) -> Vec<MonomialTerm> {
        merge(self.terms.iter().map(|t| ((t.xi_pow, t.eta_pow), t.coeff.clone())), self.prefactor())
    }

    pub fn eval(&self, p: &ProlatePoint) -> Complex64 {
        let o = &self.orbital;
        let s = o.center.sign() as f64;
        let w = weight(p, o.abs_m());
        let e = math::exp(-self.scale() * (p.xi + s * p.eta));
        let v = eval_monomials(&self.monomials(), p) * w * e;
        Complex64::from_polar(1.0, o.m as f64 * p.phi) * v
    }
}

/// Product of two orbitals sharing one electron.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDistribution {
    /// Coefficient of `-ξ` in the exponent.
    pub alpha: f64,
    /// Coefficient of `-η` in the exponent.
    pub beta: f64,
    /// Azimuthal factor is `e^{i m_sum φ}`.
    pub m_sum: i32,
    /// Weight is `((ξ²-1)(1-η²))^{weight_power/2}`.
    pub weight_power: u32,
    pub terms: Vec<MonomialTerm>,
}

/// `Φ_I Φ_J` (unconjugated) as one exponential, one weight and a monomial list.
pub fn distribution(orb_i: &SlaterOrbital, orb_j: &SlaterOrbital, r: f64) -> Result<ChargeDistribution> {
    let ei = two_center_expansion(orb_i, r)?;
    let ej = two_center_expansion(orb_j, r)?;
    let half = 0.5 * r;
    let alpha = half * (orb_i.delta + orb_j.delta);
    let beta = half * (orb_i.center.sign() as f64 * orb_i.delta + orb_j.center.sign() as f64 * orb_j.delta);
    let products = ei.terms.iter().flat_map(|a| {
        ej.terms
            .iter()
            .map(move |b| ((a.xi_pow + b.xi_pow, a.eta_pow + b.eta_pow), &a.coeff * &b.coeff))
    });
    Ok(ChargeDistribution {
        alpha,
        beta,
        m_sum: orb_i.m + orb_j.m,
        weight_power: orb_i.abs_m() + orb_j.abs_m(),
        terms: merge(products, ei.prefactor() * ej.prefactor()),
    })
}

impl ChargeDistribution {
    pub fn eval(&self, p: &ProlatePoint) -> Complex64 {
        let w = weight(p, self.weight_power);
        let e = math::exp(-self.alpha * p.xi - self.beta * p.eta);
        let v = eval_monomials(&self.terms, p) * w * e;
        Complex64::from_polar(1.0, self.m_sum as f64 * p.phi) * v
    }
}

fn merge<I: Iterator<Item = ((u32, u32), BigRational)>>(it: I, scale: f64) -> Vec<MonomialTerm> {
    let mut acc: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
    for (k, c) in it {
        *acc.entry(k).or_insert_with(BigRational::zero) += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((x, y), c)| MonomialTerm { xi_pow: x, eta_pow: y, coeff: scale * rational_to_f64(&c) })
        .collect()
}

fn eval_monomials(terms: &[MonomialTerm], p: &ProlatePoint) -> f64 {
    let mut s = math::KahanSum::new();
    for t in terms {
        s.add(t.coeff * math::powi(p.xi, t.xi_pow as i32) * math::powi(p.eta, t.eta_pow as i32));
    }
    s.value()
}

/// `((ξ²-1)(1-η²))^{k/2}`.
fn weight(p: &ProlatePoint, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let base = ((p.xi * p.xi - 1.0) * (1.0 - p.eta * p.eta)).max(0.0);
    let half = math::sqrt(base);
    math::powi(half, k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn orb(n: u32, l: u32, m: i32, delta: f64, c: Center) -> SlaterOrbital {
        SlaterOrbital::new(n, l, m, delta, c).unwrap()
    }

    /// Relative error of [`evaluate`]: `sin θ` from `cos θ` loses `|m| ε / sin²θ`.
    fn direct_error(o: &SlaterOrbital, p: &ProlatePoint, r: f64) -> f64 {
        let (_, c) = p.radius_and_cos(o.center, r);
        1e-12 + 1e-15 * o.abs_m() as f64 / ((1.0 - c) * (1.0 + c)).max(1e-300)
    }

    /// `Σ |c ξ^a η^b|`: the monomial sums cancel, so errors scale with this.
    fn magnitude_sum(terms: &[MonomialTerm], p: &ProlatePoint) -> f64 {
        terms.iter().map(|t| (t.coeff * math::powi(p.xi, t.xi_pow as i32) * math::powi(p.eta, t.eta_pow as i32)).abs()).sum()
    }

    fn all_supported() -> Vec<(u32, u32, i32)> {
        let mut v = Vec::new();
        for n in 1..=MAX_N {
            for l in 0..n.min(MAX_L + 1) {
                for m in -(l as i32)..=(l as i32) {
                    v.push((n, l, m));
                }
            }
        }
        v
    }

    #[test]
    fn validation() {
        assert!(SlaterOrbital::new(1, 1, 0, 1.0, Center::A).is_err());
        assert!(SlaterOrbital::new(2, 1, 2, 1.0, Center::A).is_err());
        assert!(SlaterOrbital::new(1, 0, 0, 0.0, Center::A).is_err());
        assert!(matches!(SlaterOrbital::new(6, 0, 0, 1.0, Center::A), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn coordinates() {
        let p = prolate_coordinates(1.0, 1.0, 2.0).unwrap();
        assert_eq!((p.xi, p.eta), (1.0, 0.0));
        let p = prolate_coordinates(0.0, 2.0, 2.0).unwrap();
        assert_eq!((p.xi, p.eta), (1.0, -1.0));
        let p = prolate_coordinates(2.0, 1.0, 2.0).unwrap();
        assert_eq!((p.xi, p.eta), (1.5, 0.5));
        assert!(matches!(prolate_coordinates(0.2, 0.3, 2.0), Err(Error::Triangle { .. })));
    }

    #[test]
    fn normalization_examples() {
        let s = orb(1, 0, 0, 1.0, Center::A);
        assert_relative_eq!(normalization(&s), 1.0 / math::sqrt(core::f64::consts::PI), max_relative = 1e-15);
        let s2 = orb(1, 0, 0, 2.0, Center::A);
        assert_relative_eq!(normalization(&s2) / normalization(&s), math::pow(2.0, 1.5), max_relative = 1e-15);
        assert_relative_eq!(normalization(&orb(2, 1, 0, 1.0, Center::A)), 0.564_189_583_547_756_3, max_relative = 1e-12);
    }

    #[test]
    fn evaluate_examples() {
        let p = ProlatePoint::new(1.0, -1.0, 0.0).unwrap();
        let s = orb(1, 0, 0, 1.0, Center::A);
        assert_relative_eq!(evaluate(&s, &p, 2.0).re, 1.0 / math::sqrt(core::f64::consts::PI), max_relative = 1e-15);
        for (n, l, m) in all_supported().into_iter().filter(|t| t.2 != 0) {
            for c in [Center::A, Center::B] {
                for eta in [-1.0, 1.0] {
                    let p = ProlatePoint::new(1.7, eta, 0.3).unwrap();
                    assert_eq!(evaluate(&orb(n, l, m, 1.1, c), &p, 2.0).norm(), 0.0);
                }
            }
        }
        // 2p0 on A through r_a and cos θ_a by hand.
        let p = ProlatePoint::new(1.5, 0.5, 0.0).unwrap();
        let (ra, c) = (2.0, (1.5 * 0.5 + 1.0) / 2.0);
        let hand = normalization(&orb(2, 1, 0, 1.0, Center::A)) * ra * math::exp(-ra) * c;
        assert_relative_eq!(evaluate(&orb(2, 1, 0, 1.0, Center::A), &p, 2.0).re, hand, max_relative = 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let e = two_center_expansion(&orb(1, 0, 0, 1.0, Center::A), 2.0).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!((e.terms[0].xi_pow, e.terms[0].eta_pow), (0, 0));
        let e = two_center_expansion(&orb(2, 0, 0, 1.0, Center::A), 2.0).unwrap();
        let pows: Vec<_> = e.monomials().iter().map(|t| (t.xi_pow, t.eta_pow)).collect();
        assert_eq!(pows, [(0, 1), (1, 0)]);
    }

    #[test]
    fn expanded_prefactor_carries_l_plus_m_factorial() {
        for (n, l, m) in all_supported() {
            let o = orb(n, l, m, 0.8, Center::A);
            let k = fact_f64(l + m.unsigned_abs());
            assert_relative_eq!(expanded_prefactor(&o), normalization(&o) * k, max_relative = 1e-14);
        }
    }

    #[test]
    fn distribution_examples() {
        let a = orb(1, 0, 0, 1.0, Center::A);
        let b = orb(1, 0, 0, 1.0, Center::B);
        let d = distribution(&a, &b, 2.0).unwrap();
        assert_eq!((d.alpha, d.beta), (2.0, 0.0));
        let d = distribution(&a, &a, 2.0).unwrap();
        assert_eq!((d.alpha, d.beta), (2.0, 2.0));
        let d = distribution(&b, &b, 2.0).unwrap();
        assert_eq!((d.alpha, d.beta), (2.0, -2.0));
    }

    #[test]
    fn cos_theta_bounded_on_grid() {
        for i in 0..60 {
            for j in 0..=40 {
                let p = ProlatePoint { xi: 1.0 + 0.1 * i as f64 * i as f64, eta: -1.0 + 0.05 * j as f64, phi: 0.0 };
                let (ca, cb) = (p.cos_theta_a(), p.cos_theta_b());
                assert!((-1.0..=1.0).contains(&ca) && (-1.0..=1.0).contains(&cb));
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip(xi in 1.0f64..30.0, eta in -1.0f64..=1.0, r in 0.1f64..5.0) {
            let p = ProlatePoint::new(xi, eta, 0.0).unwrap();
            let (ra, rb) = p.distances(r);
            let q = prolate_coordinates(ra, rb, r).unwrap();
            prop_assert!((q.xi - xi).abs() <= 1e-14 * xi);
            prop_assert!((q.eta - eta).abs() <= 1e-14 * xi);
        }

        #[test]
        fn expansion_matches_evaluate(
            idx in 0usize..55, b in any::<bool>(),
            xi in 1.0f64..6.0, eta in -0.999f64..0.999, phi in 0.0f64..core::f64::consts::TAU, r in 0.5f64..3.0,
        ) {
            let (n, l, m) = all_supported()[idx % all_supported().len()];
            let o = orb(n, l, m, 0.9, if b { Center::B } else { Center::A });
            let p = ProlatePoint::new(xi, eta, phi).unwrap();
            let direct = evaluate(&o, &p, r);
            let ex = two_center_expansion(&o, r).unwrap();
            let expanded = ex.eval(&p);
            let sign = o.center.sign() as f64;
            let cond = magnitude_sum(&ex.monomials(), &p)
                * weight(&p, o.abs_m())
                * math::exp(-ex.scale() * (xi + sign * eta));
            prop_assert!((direct - expanded).norm() <= direct_error(&o, &p, r) * direct.norm() + 1e-14 * cond,
                "{:?}: {} vs {}", o, direct, expanded);
        }

        #[test]
        fn distribution_is_product(
            i in 0usize..55, j in 0usize..55, bi in any::<bool>(), bj in any::<bool>(),
            xi in 1.0f64..5.0, eta in -1.0f64..=1.0, phi in 0.0f64..core::f64::consts::TAU,
        ) {
            let list = all_supported();
            let (n1, l1, m1) = list[i % list.len()];
            let (n2, l2, m2) = list[j % list.len()];
            let c = |b: bool| if b { Center::B } else { Center::A };
            let o1 = orb(n1, l1, m1, 1.2, c(bi));
            let o2 = orb(n2, l2, m2, 0.7, c(bj));
            let p = ProlatePoint::new(xi, eta, phi).unwrap();
            let prod = evaluate(&o1, &p, 1.4) * evaluate(&o2, &p, 1.4);
            let dist = distribution(&o1, &o2, 1.4).unwrap();
            let d = dist.eval(&p);
            let cond = magnitude_sum(&dist.terms, &p)
                * weight(&p, dist.weight_power)
                * math::exp(-dist.alpha * xi - dist.beta * eta);
            let rel = 1e-11 + direct_error(&o1, &p, 1.4) + direct_error(&o2, &p, 1.4);
            prop_assert!((prod - d).norm() <= rel * prod.norm() + 1e-14 * cond);
        }
    }
}
