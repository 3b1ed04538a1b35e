//! Assembly of the two-electron integral
//! `∫∫ Φ1(1)Φ3(1) (1/r12) Φ2(2)Φ4(2) dτ1 dτ2` (orbitals unconjugated)
//! as a Neumann series in `μ`.
//!
//! Per electron, the orbital pair expands into monomials `ξ^r η^g` times
//! `((ξ²-1)(1-η²))^{σ/2}` and one exponential. Each Neumann term then
//! factorizes into two η integrals and one ξ double integral:
//!
//! `I = C Σ_μ (-1)^σ (2μ+1) [(μ-σ)!/(μ+σ)!]² Σ c1 c2 η(g1;β1) η(g2;β2) X(r1,r2;α1,α2)`
//!
//! with `C = W/2 · Π_i [(2l+1)(l-|m|)!(l+|m|)!/(2n)!]^{1/2}` and
//! `W = R^{Σn+1} Π δ^{n+1/2}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::time::Duration;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::eta::{eta_integral, EtaIntegralRequest};
use crate::math;
use crate::orbital::{expansion_terms, Center, ExpansionTerm, SlaterOrbital};
use crate::poly::rational_to_f64;
use crate::specfun::{binom, fact_f64, sign};
use crate::xi::{XiEvaluator, XiIntegralRequest};

/// Slots 1 and 3 belong to electron 1, slots 2 and 4 to electron 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    /// (A,B | A,B)
    Exchange,
    /// (A,A | A,B)
    Hybrid,
    /// (A,A | B,B)
    Coulomb,
}

impl IntegralKind {
    /// Required center per slot 1..4.
    pub fn centers(self) -> [Center; 4] {
        use Center::{A, B};
        match self {
            IntegralKind::Exchange => [A, A, B, B],
            IntegralKind::Hybrid => [A, A, A, B],
            IntegralKind::Coulomb => [A, B, A, B],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntegralKind::Exchange => "exchange",
            IntegralKind::Hybrid => "hybrid",
            IntegralKind::Coulomb => "coulomb",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exchange" => Some(IntegralKind::Exchange),
            "hybrid" => Some(IntegralKind::Hybrid),
            "coulomb" => Some(IntegralKind::Coulomb),
            _ => None,
        }
    }

    /// Checks every orbital and its center against the kind.
    pub fn check(self, orbs: &[SlaterOrbital; 4]) -> Result<()> {
        for (o, c) in orbs.iter().zip(self.centers()) {
            o.validate()?;
            if o.center != c {
                return Err(Error::CenterMismatch(self.name()));
            }
        }
        Ok(())
    }
}

/// `σ = |m2+m4|` when `Σm = 0`, otherwise `None` (the integral vanishes).
pub fn azimuthal_selection(m1: i32, m2: i32, m3: i32, m4: i32) -> Option<u32> {
    if m1 + m2 + m3 + m4 != 0 {
        None
    } else {
        Some((m2 + m4).unsigned_abs())
    }
}

/// One μ-independent index tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannTermIndex {
    /// Signed `m2 + m4`; only its magnitude enters the computation.
    pub sigma: i32,
    pub s: [u32; 4],
    pub p: [u32; 4],
    pub q: [u32; 4],
    /// Binomial index of `(ξ±η)^{n-l-1}` for slots 1 and 2.
    pub a: [u32; 2],
    /// Binomial index of `(ξ±η)^{n-l-1}` for slots 3 and 4.
    pub b: [u32; 2],
    /// `(1-η²)^h` split index per electron.
    pub c: [u32; 2],
    /// `(ξ²-1)^h` split index per electron.
    pub d: [u32; 2],
    /// η powers `g1, g2`.
    pub g: [u32; 2],
    /// ξ powers `r1, r2`, before the volume element.
    pub r: [u32; 2],
    pub coeff: BigRational,
}

/// Exact `(r, g) → coefficient` map for one electron, volume element included.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleTerms {
    pub alpha: f64,
    pub beta: f64,
    /// `(|m_I| + |m_J| - σ)/2`.
    pub h: u32,
    pub terms: BTreeMap<(u32, u32), BigRational>,
}

/// Everything μ-independent about one integral.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSet {
    pub sigma: u32,
    pub particles: [ParticleTerms; 2],
    /// Number of index tuples (before aggregation and the volume element).
    pub tuple_count: u64,
    /// `C` in the module docs.
    pub constant: f64,
}

/// Per-integral summary.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    pub mu_used: u32,
    pub tail_estimate: f64,
    pub term_count: u64,
    /// The partial-sum contributions, in ascending `μ` from `σ`.
    pub mu_terms: Vec<f64>,
    /// Filled by callers that have a clock.
    pub elapsed: Option<Duration>,
}

impl IntegralResult {
    fn zero() -> Self {
        IntegralResult { value: 0.0, mu_used: 0, tail_estimate: 0.0, term_count: 0, mu_terms: Vec::new(), elapsed: None }
    }
}

/// Truncation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub tol: f64,
    pub mu_max: u32,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { tol: 1e-10, mu_max: 40 }
    }
}

/// Electron pairs as slot indices.
const PAIRS: [(usize, usize); 2] = [(0, 2), (1, 3)];

fn pair_alpha_beta(oi: &SlaterOrbital, oj: &SlaterOrbital, r: f64) -> (f64, f64) {
    let half = 0.5 * r;
    let alpha = half * (oi.delta + oj.delta);
    let beta = half * (oi.center.sign() as f64 * oi.delta + oj.center.sign() as f64 * oj.delta);
    (alpha, beta)
}

/// η-split coefficient `(-1)^c C(h,c) · C(h,d) (-1)^{h-d}`.
fn split_coeff(h: u32, c: u32, d: u32) -> BigRational {
    let (h, c, d) = (h as i64, c as i64, d as i64);
    BigRational::from_integer(binom(h, c) * binom(h, d)) * sign(c + h - d)
}

/// Full tuple list. Grows as the product of the per-orbital expansion sizes;
/// meant for inspection and counting, the evaluation path aggregates per
/// electron instead.
pub fn enumerate_terms(orbs: &[SlaterOrbital; 4], kind: IntegralKind) -> Result<Vec<NeumannTermIndex>> {
    kind.check(orbs)?;
    let Some(_) = azimuthal_selection(orbs[0].m, orbs[1].m, orbs[2].m, orbs[3].m) else {
        return Ok(Vec::new());
    };
    let sigma_signed = orbs[1].m + orbs[3].m;
    let sigma = sigma_signed.unsigned_abs();
    let ex: Vec<Vec<ExpansionTerm>> = orbs.iter().map(expansion_terms).collect();
    let hs: Vec<u32> = PAIRS
        .iter()
        .map(|&(i, j)| (orbs[i].abs_m() + orbs[j].abs_m() - sigma) / 2)
        .collect();

    // Per-electron partial tuples: (term_I, term_J, c, d).
    let electron = |e: usize| -> Vec<(&ExpansionTerm, &ExpansionTerm, u32, u32)> {
        let (i, j) = PAIRS[e];
        let h = hs[e];
        let mut v = Vec::new();
        for ti in &ex[i] {
            for tj in &ex[j] {
                for c in 0..=h {
                    for d in 0..=h {
                        v.push((ti, tj, c, d));
                    }
                }
            }
        }
        v
    };
    let (e1, e2) = (electron(0), electron(1));
    let mut out = Vec::with_capacity(e1.len() * e2.len());
    for &(t1, t3, c1, d1) in &e1 {
        let c_e1 = &(&t1.coeff * &t3.coeff) * &split_coeff(hs[0], c1, d1);
        for &(t2, t4, c2, d2) in &e2 {
            let coeff = &(&(&t2.coeff * &t4.coeff) * &split_coeff(hs[1], c2, d2)) * &c_e1;
            out.push(NeumannTermIndex {
                sigma: sigma_signed,
                s: [t1.s, t2.s, t3.s, t4.s],
                p: [t1.p, t2.p, t3.p, t4.p],
                q: [t1.q, t2.q, t3.q, t4.q],
                a: [t1.a, t2.a],
                b: [t3.a, t4.a],
                c: [c1, c2],
                d: [d1, d2],
                g: [t1.eta_pow + t3.eta_pow + 2 * c1, t2.eta_pow + t4.eta_pow + 2 * c2],
                r: [t1.xi_pow + t3.xi_pow + 2 * d1, t2.xi_pow + t4.xi_pow + 2 * d2],
                coeff,
            });
        }
    }
    Ok(out)
}

/// Builds the aggregated per-electron term maps and the constant.
pub fn term_set(orbs: &[SlaterOrbital; 4], kind: IntegralKind, r: f64) -> Result<Option<TermSet>> {
    kind.check(orbs)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(alloc::format!("internuclear distance must be > 0, got {r}")));
    }
    let Some(sigma) = azimuthal_selection(orbs[0].m, orbs[1].m, orbs[2].m, orbs[3].m) else {
        return Ok(None);
    };
    let mut tuple_count: u64 = 1;
    let particles = PAIRS.map(|(i, j)| {
        let (oi, oj) = (&orbs[i], &orbs[j]);
        let h = (oi.abs_m() + oj.abs_m() - sigma) / 2;
        let (ti, tj) = (expansion_terms(oi), expansion_terms(oj));
        tuple_count *= (ti.len() * tj.len()) as u64 * ((h + 1) * (h + 1)) as u64;
        let mut terms: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        let mut add = |k: (u32, u32), v: BigRational| {
            *terms.entry(k).or_insert_with(BigRational::zero) += v;
        };
        for a in &ti {
            for b in &tj {
                let ab = &a.coeff * &b.coeff;
                for c in 0..=h {
                    for d in 0..=h {
                        let v = &ab * &split_coeff(h, c, d);
                        let (x, y) = (a.xi_pow + b.xi_pow + 2 * d, a.eta_pow + b.eta_pow + 2 * c);
                        // Volume element ξ² - η².
                        add((x + 2, y), v.clone());
                        add((x, y + 2), -v);
                    }
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        let (alpha, beta) = pair_alpha_beta(oi, oj, r);
        ParticleTerms { alpha, beta, h, terms }
    });
    let (w, _) = prefactor(orbs, kind, r)?;
    let mut s = 0.5 * w;
    for o in orbs {
        let (l, am) = (o.l, o.abs_m());
        s *= math::sqrt((2 * l + 1) as f64 * fact_f64(l - am) * fact_f64(l + am) / fact_f64(2 * o.n));
    }
    Ok(Some(TermSet { sigma, particles, tuple_count, constant: s }))
}

/// `W = R^{Σn+1} Π δ^{n+1/2}` and its `(α, β)` form
/// `(1/R) Π_electrons (α+β)^{n_I+1/2} (α-β)^{n_J+1/2}` for mixed-center pairs
/// (`(Rδ_I)^{n_I+1/2}(Rδ_J)^{n_J+1/2}` for same-center pairs). Errors if
/// the two disagree beyond `1e-12` relative.
pub fn prefactor(orbs: &[SlaterOrbital; 4], kind: IntegralKind, r: f64) -> Result<(f64, f64)> {
    kind.check(orbs)?;
    let sum_n: u32 = orbs.iter().map(|o| o.n).sum();
    let direct = orbs
        .iter()
        .fold(math::powi(r, sum_n as i32 + 1), |acc, o| acc * math::pow(o.delta, o.n as f64 + 0.5));
    let mut identity = 1.0 / r;
    for (i, j) in PAIRS {
        let (oi, oj) = (&orbs[i], &orbs[j]);
        let (ei, ej) = (oi.n as f64 + 0.5, oj.n as f64 + 0.5);
        if oi.center != oj.center {
            let (alpha, beta) = pair_alpha_beta(oi, oj, r);
            let s = oi.center.sign() as f64;
            identity *= math::pow(alpha + s * beta, ei) * math::pow(alpha - s * beta, ej);
        } else {
            identity *= math::pow(r * oi.delta, ei) * math::pow(r * oj.delta, ej);
        }
    }
    if (direct - identity).abs() > 1e-12 * direct.abs() {
        return Err(Error::PrefactorMismatch { direct, identity });
    }
    Ok((direct, identity))
}

/// Stateful evaluator: owns the ξ-table caches. One engine per thread.
#[derive(Debug, Default)]
pub struct Engine {
    xi: XiEvaluator,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    /// The `μ`-th Neumann contribution, constant included.
    pub fn mu_term(&mut self, set: &TermSet, mu: u32) -> Result<f64> {
        let sigma = set.sigma;
        if mu < sigma {
            return Ok(0.0);
        }
        // A_k[r] = Σ_g c_k(r, g) η(μ, σ, g; β_k).
        let mut eta_cache: BTreeMap<(u32, u64), f64> = BTreeMap::new();
        let mut reduce = |p: &ParticleTerms| -> Result<Vec<(u32, f64)>> {
            let mut by_r: BTreeMap<u32, math::KahanSum> = BTreeMap::new();
            for (&(r, g), c) in &p.terms {
                let key = (g, p.beta.to_bits());
                let e = match eta_cache.get(&key) {
                    Some(v) => *v,
                    None => {
                        let v = eta_integral(EtaIntegralRequest::new(mu, sigma, g, p.beta))?;
                        eta_cache.insert(key, v);
                        v
                    }
                };
                by_r.entry(r).or_default().add(rational_to_f64(c) * e);
            }
            Ok(by_r.into_iter().map(|(r, s)| (r, s.value())).filter(|(_, v)| *v != 0.0).collect())
        };
        let a1 = reduce(&set.particles[0])?;
        let a2 = reduce(&set.particles[1])?;
        let (al1, al2) = (set.particles[0].alpha, set.particles[1].alpha);
        let mut sum = math::KahanSum::new();
        for &(r1, v1) in &a1 {
            for &(r2, v2) in &a2 {
                let x = self.xi.evaluate(XiIntegralRequest::new(mu, sigma, r1, r2, al1, al2))?;
                sum.add(v1 * v2 * x);
            }
        }
        let ratio = fact_f64(mu - sigma) / fact_f64(mu + sigma);
        let head = math::sign_pow(sigma as i64) * (2 * mu + 1) as f64 * ratio * ratio;
        Ok(set.constant * head * sum.value())
    }

    pub fn integral(
        &mut self,
        orbs: &[SlaterOrbital; 4],
        kind: IntegralKind,
        r: f64,
        opts: SeriesOptions,
    ) -> Result<IntegralResult> {
        let Some(set) = term_set(orbs, kind, r)? else {
            return Ok(IntegralResult::zero());
        };
        self.sum_series(&set, opts)
    }

    /// Ascending-μ accumulation with the three-small-terms stopping rule.
    pub fn sum_series(&mut self, set: &TermSet, opts: SeriesOptions) -> Result<IntegralResult> {
        let mut partial = math::KahanSum::new();
        let mut terms = Vec::new();
        let mut small_run = 0;
        let mut mu = set.sigma;
        loop {
            if mu > opts.mu_max {
                let last = terms.last().copied().unwrap_or(0.0);
                return Err(Error::NonConvergence { mu_max: opts.mu_max, partial: partial.value(), last_term: last });
            }
            let t = self.mu_term(set, mu)?;
            partial.add(t);
            terms.push(t);
            if t.abs() <= opts.tol * partial.value().abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run == 3 {
                let tail = terms[terms.len() - 3..].iter().fold(0.0f64, |m, v| m.max(v.abs()));
                return Ok(IntegralResult {
                    value: partial.value(),
                    mu_used: mu,
                    tail_estimate: tail,
                    term_count: set.tuple_count,
                    mu_terms: terms,
                    elapsed: None,
                });
            }
            mu += 1;
        }
    }
}

/// One-shot evaluation with a fresh engine.
pub fn integral(orbs: &[SlaterOrbital; 4], kind: IntegralKind, r: f64, opts: SeriesOptions) -> Result<IntegralResult> {
    Engine::new().integral(orbs, kind, r, opts)
}

/// Product of the index range sizes, for cross-checking tuple counts.
pub fn bound_product(orbs: &[SlaterOrbital; 4]) -> u64 {
    let Some(sigma) = azimuthal_selection(orbs[0].m, orbs[1].m, orbs[2].m, orbs[3].m) else {
        return 0;
    };
    let per_orbital = |o: &SlaterOrbital| -> u64 {
        let (n, l, am) = (o.n as u64, o.l as u64, o.abs_m() as u64);
        let mut c = 0;
        for s in 0..=(l - am) / 2 {
            c += (2 * s + 1) * (l - am - 2 * s + 1) * (n - l);
        }
        c
    };
    let mut total = orbs.iter().map(per_orbital).product::<u64>();
    for (i, j) in PAIRS {
        let h = (orbs[i].abs_m() + orbs[j].abs_m() - sigma) as u64 / 2;
        total *= (h + 1) * (h + 1);
    }
    total
}
