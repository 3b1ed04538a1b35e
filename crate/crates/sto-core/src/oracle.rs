//! Quadrature of every analytic object, sharing nothing with the closed
//! forms beyond the Legendre-function recurrences.
//!
//! Refinement is by doubling: each routine compares two successive
//! resolutions and reports their difference as the error estimate. A result
//! whose estimate exceeds `rel_tol·|value| + abs_tol` after `max_depth`
//! doublings is an error, never a silently degraded value.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{azimuthal_selection, IntegralKind};
use crate::error::{Error, Result};
use crate::math::{self, KahanSum};
use crate::mp::{Mp, MpCtx};
use crate::orbital::{evaluate, ProlatePoint, SlaterOrbital};
use crate::specfun::{fact_f64, legendre_p_cut_row, weighted_p_row, weighted_q_row};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of resolution doublings.
    pub max_depth: u32,
    /// Upper ξ limit replacing ∞; derived from the exponents when `None`.
    pub xi_cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-11, abs_tol: 1e-16, max_depth: 3, xi_cutoff: None }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-13 && self.rel_tol.is_finite()) {
            return Err(Error::Domain(format!("oracle rel_tol must be >= 1e-13, got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain(format!("oracle abs_tol must be >= 0, got {}", self.abs_tol)));
        }
        Ok(())
    }

    /// Cutoff for an integrand decaying like `ξ^degree e^{-α_min ξ}`:
    /// the smallest `c` with `α_min (c-1) - degree·ln c ≥ max(40, ln(1e3/abs_tol))`.
    pub fn cutoff(&self, alpha_min: f64, degree: u32) -> Result<f64> {
        let floor = 1.0 + 40.0 / alpha_min;
        if let Some(c) = self.xi_cutoff {
            if !(c >= floor) {
                return Err(Error::Domain(format!("xi cutoff {c} below 1 + 40/alpha_min = {floor}")));
            }
            return Ok(c);
        }
        let target = if self.abs_tol > 0.0 { math::ln(1e3 / self.abs_tol).max(40.0) } else { 60.0 };
        let mut c = floor;
        for _ in 0..50 {
            c = 1.0 + (target + degree as f64 * math::ln(c)) / alpha_min;
        }
        Ok(c.max(floor))
    }

    fn accepts(&self, v: &OracleValue) -> bool {
        v.error <= self.rel_tol * v.value.abs() + self.abs_tol
    }
}

/// Quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub value: f64,
    pub error: f64,
}

fn check(spec: &QuadratureSpec, v: OracleValue) -> Result<OracleValue> {
    if spec.accepts(&v) {
        Ok(v)
    } else {
        Err(Error::Quadrature { value: v.value, error: v.error })
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    for i in 0..n.div_ceil(2) {
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    if n % 2 == 1 {
        out[n / 2].0 = 0.0;
    }
    out
}

/// Multiprecision Gauss–Legendre rule: f64 nodes polished by Newton at `p` bits.
pub fn gauss_legendre_mp(n: usize, p: usize) -> Vec<(Mp, Mp)> {
    let one = Mp::from_i64(1, p);
    let eval = |x: &Mp| -> (Mp, Mp) {
        let (mut p0, mut p1) = (one.clone(), x.clone());
        for k in 2..=n as i64 {
            let p2 = (&(x * &p1).mul_i64(2 * k - 1) - &p0.mul_i64(k - 1)).div_i64(k);
            p0 = p1;
            p1 = p2;
        }
        let dp = (&(x * &p1) - &p0).mul_i64(n as i64) / (&(x * x) - &one);
        (p1, dp)
    };
    let mut out = Vec::with_capacity(n);
    for (xf, _) in gauss_legendre(n) {
        if xf == 0.0 {
            let (_, dp) = eval(&Mp::zero(p));
            out.push((Mp::zero(p), Mp::from_i64(2, p) / &(&dp * &dp)));
            continue;
        }
        let mut x = Mp::from_f64(xf, p);
        // Quadratic convergence from 53 bits.
        let mut bits = 50;
        while bits < 2 * p {
            let (v, dp) = eval(&x);
            x -= &(&v / &dp);
            bits *= 2;
        }
        let (_, dp) = eval(&x);
        let w = Mp::from_i64(2, p) / &(&(&one - &(&x * &x)) * &(&dp * &dp));
        out.push((x, w));
    }
    out
}

/// η quadrature at 192 bits with cached rules.
#[derive(Debug)]
pub struct EtaOracle {
    p: usize,
    ctx: MpCtx,
    rules: BTreeMap<usize, Vec<(Mp, Mp)>>,
}

impl Default for EtaOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl EtaOracle {
    pub fn new() -> Self {
        let p = 192;
        EtaOracle { p, ctx: MpCtx::new(p), rules: BTreeMap::new() }
    }

    /// `∫_{-1}^{1} P_μ^σ(η)(1-η²)^{σ/2} η^g e^{-βη} dη`, on-cut `P` with the
    /// Condon–Shortley phase.
    pub fn eval(&mut self, mu: u32, sigma: u32, g: u32, beta: f64, spec: &QuadratureSpec) -> Result<OracleValue> {
        spec.validate()?;
        if !beta.is_finite() {
            return Err(Error::Domain(format!("eta oracle needs finite beta, got {beta}")));
        }
        if sigma > mu {
            return Ok(OracleValue { value: 0.0, error: 0.0 });
        }
        let mut n = 16;
        let mut prev = self.rule_value(n, mu, sigma, g, beta);
        for _ in 0..=spec.max_depth {
            n *= 2;
            let cur = self.rule_value(n, mu, sigma, g, beta);
            let v = OracleValue { value: cur.to_f64(), error: (&cur - &prev).abs().to_f64() };
            if spec.accepts(&v) {
                return Ok(v);
            }
            prev = cur;
        }
        check(spec, OracleValue { value: prev.to_f64(), error: f64::INFINITY })
    }

    fn rule_value(&mut self, n: usize, mu: u32, sigma: u32, g: u32, beta: f64) -> Mp {
        let p = self.p;
        let rule = self.rules.entry(n).or_insert_with(|| gauss_legendre_mp(n, p));
        let mb = Mp::from_f64(-beta, p);
        let one = Mp::from_i64(1, p);
        let mut sum = Mp::zero(p);
        for (x, w) in rule.iter() {
            // Weighted on-cut P by upward recurrence from
            // (-1)^σ (2σ-1)!! (1-x²)^σ.
            let c = &one - &(x * x);
            let mut start = one.clone();
            for i in 1..=sigma as i64 {
                start = (&start * &c).mul_i64(-(2 * i - 1));
            }
            let (mut lo, mut hi) = (Mp::zero(p), start);
            for l in sigma..mu {
                let next = (&(x * &hi).mul_i64((2 * l + 1) as i64) - &lo.mul_i64((l + sigma) as i64))
                    .div_i64((l - sigma + 1) as i64);
                lo = hi;
                hi = next;
            }
            let f = &(&hi * &x.powi(g)) * &self.ctx.exp(&(&mb * x));
            sum += &(w * &f);
        }
        sum
    }
}

/// One-shot η quadrature.
pub fn eta_oracle(mu: u32, sigma: u32, g: u32, beta: f64, spec: &QuadratureSpec) -> Result<OracleValue> {
    EtaOracle::new().eval(mu, sigma, g, beta, spec)
}

/// Points per panel.
const PANEL_NODES: usize = 12;

/// Composite nested rule for `∫_1^c dz f_out(z) ∫_1^z f_in(x) dx`.
///
/// Panels are graded geometrically toward `ξ = 1`, where the Q functions
/// carry a logarithmic singularity, and uniform beyond.
#[derive(Debug, Clone)]
struct NestedGrid {
    x: Vec<f64>,
    /// Per panel: outer node (point index, weight) list.
    panels: Vec<Vec<(usize, f64)>>,
    /// Per outer point (indexed like `x`): partial-panel rule on `[panel start, z]`.
    inner: BTreeMap<usize, Vec<(usize, f64)>>,
}

impl NestedGrid {
    fn new(cutoff: f64, width: f64, level: u32) -> Self {
        let mut edges = vec![1.0];
        let mut t = 1e-12;
        while 1.0 + t < 1.25 {
            edges.push(1.0 + t);
            t *= 4.0;
        }
        let mut z = 1.25;
        while z < cutoff {
            edges.push(z);
            z += width;
        }
        edges.push(cutoff);
        // Each doubling bisects every panel.
        for _ in 0..level {
            let mut e = Vec::with_capacity(2 * edges.len());
            for w in edges.windows(2) {
                e.push(w[0]);
                e.push(0.5 * (w[0] + w[1]));
            }
            e.push(*edges.last().unwrap());
            edges = e;
        }
        let rule = gauss_legendre(PANEL_NODES);
        let mut x = Vec::new();
        let mut panels = Vec::new();
        let mut inner = BTreeMap::new();
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (h, m) = (0.5 * (b - a), 0.5 * (a + b));
            let mut outer = Vec::with_capacity(PANEL_NODES);
            for &(t, wt) in &rule {
                let zo = m + h * t;
                let io = x.len();
                x.push(zo);
                outer.push((io, h * wt));
                let (hi, mi) = (0.5 * (zo - a), 0.5 * (zo + a));
                let mut part = Vec::with_capacity(PANEL_NODES);
                for &(s, ws) in &rule {
                    part.push((x.len(), hi * ws));
                    x.push(mi + hi * s);
                }
                inner.insert(io, part);
            }
            panels.push(outer);
        }
        NestedGrid { x, panels, inner }
    }

    /// `fin` must be valid at every point, `fout` at outer points.
    fn nested(&self, fin: &[f64], fout: &[f64]) -> f64 {
        let mut cum = 0.0;
        let mut total = KahanSum::new();
        for outer in &self.panels {
            let mut full = 0.0;
            for &(io, wo) in outer {
                let part: f64 = self.inner[&io].iter().map(|&(i, w)| w * fin[i]).sum();
                total.add(wo * fout[io] * (cum + part));
                full += wo * fin[io];
            }
            cum += full;
        }
        total.value()
    }
}

/// Uniform panel width: keeps `e^{α·width}` and the Legendre growth modest.
fn panel_width(alpha_max: f64, mu: u32) -> f64 {
    0.5 * (3.0 / alpha_max).min(1.0) * (8.0 / (mu as f64 + 8.0))
}

/// All `X(μ,σ,r1,r2,α1,α2)` for `r1, r2 ≤ r_max`, as `[r1][r2]`.
///
/// `T(α1,r1;α2,r2) = ∫_1^∞ dz Qw(z) z^{r2} e^{-α2 z} ∫_1^z Pw(x) x^{r1} e^{-α1 x} dx`
/// and `X = T(α1,r1;α2,r2) + T(α2,r2;α1,r1)`, with `Pw, Qw` the
/// `(z²-1)^{σ/2}`-weighted off-cut functions.
pub fn xi_oracle_batch(
    mu: u32,
    sigma: u32,
    r_max: u32,
    alpha1: f64,
    alpha2: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<Vec<OracleValue>>> {
    spec.validate()?;
    for a in [alpha1, alpha2] {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!("xi oracle needs finite alpha > 0, got {a}")));
        }
    }
    let n = r_max as usize + 1;
    if sigma > mu {
        return Ok(vec![vec![OracleValue { value: 0.0, error: 0.0 }; n]; n]);
    }
    let amin = alpha1.min(alpha2);
    let cutoff = spec.cutoff(amin, 2 * r_max + mu + 2)?;
    let width = panel_width(alpha1.max(alpha2), mu);
    let at_level = |level: u32| -> Vec<Vec<f64>> {
        let grid = NestedGrid::new(cutoff, width, level);
        let m = grid.x.len();
        let (mut pw, mut qw, mut e1, mut e2) = (vec![0.0; m], vec![0.0; m], vec![0.0; m], vec![0.0; m]);
        for (i, &z) in grid.x.iter().enumerate() {
            pw[i] = weighted_p_row(mu, sigma, z)[mu as usize];
            qw[i] = weighted_q_row(mu, sigma, z)[mu as usize];
            e1[i] = math::exp(-alpha1 * z);
            e2[i] = math::exp(-alpha2 * z);
        }
        let weighted = |base: &[f64], e: &[f64], r: u32| -> Vec<f64> {
            grid.x.iter().enumerate().map(|(i, &z)| base[i] * e[i] * math::powi(z, r as i32)).collect()
        };
        let p1: Vec<Vec<f64>> = (0..=r_max).map(|r| weighted(&pw, &e1, r)).collect();
        let p2: Vec<Vec<f64>> = (0..=r_max).map(|r| weighted(&pw, &e2, r)).collect();
        let q1: Vec<Vec<f64>> = (0..=r_max).map(|r| weighted(&qw, &e1, r)).collect();
        let q2: Vec<Vec<f64>> = (0..=r_max).map(|r| weighted(&qw, &e2, r)).collect();
        let mut out = vec![vec![0.0; n]; n];
        for r1 in 0..n {
            for r2 in 0..n {
                out[r1][r2] = grid.nested(&p1[r1], &q2[r2]) + grid.nested(&p2[r2], &q1[r1]);
            }
        }
        out
    };
    let mut prev = at_level(0);
    let mut last = Vec::new();
    for level in 1..=spec.max_depth.max(1) {
        let cur = at_level(level);
        last = (0..n)
            .map(|i| (0..n).map(|j| OracleValue { value: cur[i][j], error: (cur[i][j] - prev[i][j]).abs() }).collect::<Vec<_>>())
            .collect::<Vec<_>>();
        if last.iter().flatten().all(|v| spec.accepts(v)) {
            return Ok(last);
        }
        prev = cur;
    }
    let worst = last.into_iter().flatten().find(|v| !spec.accepts(v)).unwrap_or(OracleValue { value: f64::NAN, error: f64::INFINITY });
    Err(Error::Quadrature { value: worst.value, error: worst.error })
}

/// Single `X(μ,σ,r1,r2,α1,α2)` by nested quadrature.
pub fn xi_oracle(mu: u32, sigma: u32, r1: u32, r2: u32, alpha1: f64, alpha2: f64, spec: &QuadratureSpec) -> Result<OracleValue> {
    let rm = r1.max(r2);
    let table = xi_oracle_batch(mu, sigma, rm, alpha1, alpha2, spec)?;
    Ok(table[r1 as usize][r2 as usize])
}

/// `(-1)^σ (2μ+1) [(μ-σ)!/(μ+σ)!]²`: the Neumann coefficient, with
/// `1/r12 = (2/R) Σ_μ Σ_{|σ|≤μ} c(μ,|σ|) P(η1) P(η2) P(ξ<) Q(ξ>) e^{iσ(φ1-φ2)}`,
/// on-cut `P` in η and unweighted off-cut `P, Q` in ξ.
pub fn neumann_coefficient(mu: u32, sigma: u32) -> f64 {
    let r = fact_f64(mu - sigma) / fact_f64(mu + sigma);
    math::sign_pow(sigma as i64) * (2 * mu + 1) as f64 * r * r
}

/// Truncated Neumann expansion of `1/r12` between two prolate points.
pub fn neumann_kernel(p1: &ProlatePoint, p2: &ProlatePoint, r: f64, mu_max: u32) -> f64 {
    let (lo, hi) = if p1.xi <= p2.xi { (p1.xi, p2.xi) } else { (p2.xi, p1.xi) };
    let mut sum = KahanSum::new();
    for sigma in 0..=mu_max {
        let pe1 = legendre_p_cut_row(mu_max, sigma, p1.eta);
        let pe2 = legendre_p_cut_row(mu_max, sigma, p2.eta);
        let w = |z: f64| math::powi(math::sqrt((z - 1.0) * (z + 1.0)), sigma as i32);
        let (wl, wh) = (w(lo), w(hi));
        let pl = weighted_p_row(mu_max, sigma, lo);
        let qh = weighted_q_row(mu_max, sigma, hi);
        let az = if sigma == 0 { 1.0 } else { 2.0 * math::cos(sigma as f64 * (p1.phi - p2.phi)) };
        for mu in sigma..=mu_max {
            let m = mu as usize;
            sum.add(az * neumann_coefficient(mu, sigma) * pe1[m] * pe2[m] * (pl[m] / wl) * (qh[m] / wh));
        }
    }
    2.0 / r * sum.value()
}

/// Per-resolution precomputation for [`IntegralOracle`].
#[derive(Debug)]
struct OracleLevel {
    grid: NestedGrid,
    /// η rule.
    eta: Vec<(f64, f64)>,
    /// `A_k[pt·nη + j] = w_j (ξ²-η_j²) Φ_I Φ_J` at `φ = 0`, per electron.
    a: [Vec<f64>; 2],
    /// On-cut `P_μ^σ(η_j)`, `[j][μ]`.
    p_eta: Vec<Vec<f64>>,
    /// Unweighted off-cut `P, Q` at every grid point, `[pt][μ]`.
    p_xi: Vec<Vec<f64>>,
    q_xi: Vec<Vec<f64>>,
}

/// Full integral by quadrature over the exact orbital products, one Neumann
/// term at a time.
#[derive(Debug)]
pub struct IntegralOracle {
    sigma: Option<u32>,
    r: f64,
    mu_max: u32,
    levels: [Option<OracleLevel>; 2],
}

impl IntegralOracle {
    /// Precomputes two resolutions on the η × ξ grid.
    pub fn new(orbs: &[SlaterOrbital; 4], kind: IntegralKind, r: f64, mu_max: u32, spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        kind.check(orbs)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("internuclear distance must be > 0, got {r}")));
        }
        let sigma = azimuthal_selection(orbs[0].m, orbs[1].m, orbs[2].m, orbs[3].m);
        let Some(s) = sigma else {
            return Ok(IntegralOracle { sigma, r, mu_max, levels: [None, None] });
        };
        let alpha = |i: usize, j: usize| 0.5 * r * (orbs[i].delta + orbs[j].delta);
        let (a1, a2) = (alpha(0, 2), alpha(1, 3));
        let degree: u32 = orbs.iter().map(|o| o.n).sum::<u32>() + 4;
        let cutoff = spec.cutoff(a1.min(a2), degree)?;
        let width = panel_width(a1.max(a2), 8);
        let level = |lv: u32, n_eta: usize| OracleLevel::new(orbs, r, s, mu_max, cutoff, width, lv, n_eta);
        Ok(IntegralOracle { sigma, r, mu_max, levels: [Some(level(0, 48)), Some(level(1, 64))] })
    }

    /// `|m2+m4|`, or `None` when the azimuthal selection rule zeroes the integral.
    pub fn sigma(&self) -> Option<u32> {
        self.sigma
    }

    /// The `μ`-th Neumann contribution, error from the two resolutions.
    pub fn mu_term(&self, mu: u32) -> Result<OracleValue> {
        let Some(s) = self.sigma else {
            return Ok(OracleValue { value: 0.0, error: 0.0 });
        };
        if mu < s {
            return Ok(OracleValue { value: 0.0, error: 0.0 });
        }
        if mu > self.mu_max {
            return Err(Error::Domain(format!("oracle prepared for mu <= {}, asked for {mu}", self.mu_max)));
        }
        let [Some(coarse), Some(fine)] = &self.levels else {
            return Ok(OracleValue { value: 0.0, error: 0.0 });
        };
        let (tc, tf) = (coarse.t(mu), fine.t(mu));
        let h = 0.5 * self.r;
        let pre = math::powi(h, 6) * (2.0 / self.r) * 4.0 * core::f64::consts::PI * core::f64::consts::PI
            * neumann_coefficient(mu, s);
        Ok(OracleValue { value: pre * tf, error: (pre * (tf - tc)).abs() })
    }

    /// Sums terms in ascending `μ` until three consecutive ones are below
    /// `tol·|partial|`; returns the value and the number of the last `μ`.
    pub fn evaluate(&self, tol: f64, spec: &QuadratureSpec) -> Result<(OracleValue, u32)> {
        let Some(s) = self.sigma else {
            return Ok((OracleValue { value: 0.0, error: 0.0 }, 0));
        };
        let terms = (s..=self.mu_max).map(|mu| self.mu_term(mu));
        sum_terms(s, terms, tol, self.mu_max, spec)
    }
}

/// Shared truncation for serial and externally parallel term streams.
pub fn sum_terms(
    first_mu: u32,
    terms: impl IntoIterator<Item = Result<OracleValue>>,
    tol: f64,
    mu_max: u32,
    spec: &QuadratureSpec,
) -> Result<(OracleValue, u32)> {
    let mut sum = KahanSum::new();
    let mut err = 0.0;
    let mut small = 0;
    let mut last = 0.0;
    for (mu, t) in (first_mu..).zip(terms) {
        let t = t?;
        sum.add(t.value);
        err += t.error;
        last = t.value;
        small = if t.value.abs() <= tol * sum.value().abs() { small + 1 } else { 0 };
        if small == 3 {
            return check(spec, OracleValue { value: sum.value(), error: err }).map(|v| (v, mu));
        }
    }
    Err(Error::NonConvergence { mu_max, partial: sum.value(), last_term: last })
}

impl OracleLevel {
    #[allow(clippy::too_many_arguments)]
    fn new(orbs: &[SlaterOrbital; 4], r: f64, sigma: u32, mu_max: u32, cutoff: f64, width: f64, level: u32, n_eta: usize) -> Self {
        let grid = NestedGrid::new(cutoff, width, level);
        let eta = gauss_legendre(n_eta);
        let m = grid.x.len();
        let mut a = [vec![0.0; m * n_eta], vec![0.0; m * n_eta]];
        for (pt, &xi) in grid.x.iter().enumerate() {
            for (j, &(y, w)) in eta.iter().enumerate() {
                // Interior nodes only: never a nucleus or the boundary.
                let p = ProlatePoint { xi, eta: y, phi: 0.0 };
                let vals: Vec<f64> = orbs.iter().map(|o| evaluate(o, &p, r).re).collect();
                let vol = w * (xi * xi - y * y);
                a[0][pt * n_eta + j] = vol * vals[0] * vals[2];
                a[1][pt * n_eta + j] = vol * vals[1] * vals[3];
            }
        }
        let p_eta = eta.iter().map(|&(y, _)| legendre_p_cut_row(mu_max, sigma, y)).collect();
        let mut p_xi = Vec::with_capacity(m);
        let mut q_xi = Vec::with_capacity(m);
        for &z in &grid.x {
            let w = math::powi(math::sqrt((z - 1.0) * (z + 1.0)), sigma as i32);
            // Inner nodes next to the first edge can round to z = 1; their
            // weights are below 1e-15, so they are dropped.
            if z <= 1.0 {
                p_xi.push(vec![0.0; mu_max as usize + 1]);
                q_xi.push(vec![0.0; mu_max as usize + 1]);
                continue;
            }
            p_xi.push(weighted_p_row(mu_max, sigma, z).into_iter().map(|v| v / w).collect());
            q_xi.push(weighted_q_row(mu_max, sigma, z).into_iter().map(|v| v / w).collect());
        }
        OracleLevel { grid, eta, a, p_eta, p_xi, q_xi }
    }

    /// `∫∫ P(ξ<) Q(ξ>) E1(ξ1) E2(ξ2)` with `E_k(ξ) = ∫ (ξ²-η²) ρ_k P_μ^σ(η) dη`.
    fn t(&self, mu: u32) -> f64 {
        let ne = self.eta.len();
        let m = mu as usize;
        let pe: Vec<f64> = self.p_eta.iter().map(|row| row[m]).collect();
        let e = |k: usize| -> Vec<f64> {
            self.a[k].chunks_exact(ne).map(|row| row.iter().zip(&pe).map(|(a, p)| a * p).sum()).collect()
        };
        let (e1, e2) = (e(0), e(1));
        let pin = |e: &[f64]| -> Vec<f64> { e.iter().zip(&self.p_xi).map(|(v, p)| v * p[m]).collect() };
        let qout = |e: &[f64]| -> Vec<f64> { e.iter().zip(&self.q_xi).map(|(v, q)| v * q[m]).collect() };
        self.grid.nested(&pin(&e1), &qout(&e2)) + self.grid.nested(&pin(&e2), &qout(&e1))
    }
}

/// One-shot full-integral oracle; the series is truncated at `spec.rel_tol`.
pub fn integral_oracle(
    orbs: &[SlaterOrbital; 4],
    kind: IntegralKind,
    r: f64,
    mu_max: u32,
    spec: &QuadratureSpec,
) -> Result<OracleValue> {
    let o = IntegralOracle::new(orbs, kind, r, mu_max, spec)?;
    o.evaluate(spec.rel_tol, spec).map(|(v, _)| v)
}
