//! Per-`(α1, α2)` tables of the two kernels of the closed form.
//!
//! `D[i][j] = ∫_1^∞ [1/(z-1) - 1/(z+1)] ∫_1^z x^i e^{-α1 x} dx ∫_1^z y^j e^{-α2 y} dy dz`
//! and `Y(k, f; a_in, a_out) = ∫_1^∞ z^f e^{-a_out z} ∫_1^z x^k e^{-a_in x} dx dz`.
//! Every entry is computed by an operation sequence that does not depend on
//! the table size, so growing a table never changes existing values.

use alloc::vec::Vec;

use crate::mp::{Mp, MpCtx};

#[derive(Debug, Clone)]
pub(crate) struct XiTables {
    pub n: usize,
    d: Vec<Mp>,
    y1: Vec<Mp>,
    y2: Vec<Mp>,
}

impl XiTables {
    /// `D[i][j]`, `i, j ≤ n`.
    pub fn d(&self, i: usize, j: usize) -> &Mp {
        &self.d[i * (self.n + 1) + j]
    }

    /// `Y(k, f; α1, α2)`.
    pub fn y1(&self, k: usize, f: usize) -> &Mp {
        &self.y1[k * (self.n + 1) + f]
    }

    /// `Y(k, f; α2, α1)`.
    pub fn y2(&self, k: usize, f: usize) -> &Mp {
        &self.y2[k * (self.n + 1) + f]
    }

    pub fn build(a1: f64, a2: f64, n: usize, ctx: &mut MpCtx) -> Self {
        let p = ctx.precision();
        let one = Mp::from_i64(1, p);
        let a1m = ctx.num(a1);
        let a2m = ctx.num(a2);
        let u = &a1m + &a2m;
        let n2 = 2 * n + 1;

        // ff[i][k] = i!/(i-k)!
        let ff: Vec<Vec<Mp>> = (0..=n2)
            .map(|i| {
                let mut row = Vec::with_capacity(i + 1);
                row.push(one.clone());
                for k in 1..=i {
                    let next = row[k - 1].mul_i64((i - k + 1) as i64);
                    row.push(next);
                }
                row
            })
            .collect();
        let harmonic = {
            let mut v = Vec::with_capacity(n + 1);
            v.push(Mp::zero(p));
            for k in 1..=n {
                let next = &v[k - 1] + &one.div_i64(k as i64);
                v.push(next);
            }
            v
        };

        let m1 = moments(&a1m, n, ctx);
        let m2 = moments(&a2m, n, ctx);
        let mu_ = moments(&u, n2, ctx);
        let inv1 = inv_powers(&a1m, n + 1);
        let inv2 = inv_powers(&a2m, n + 1);

        let ul1 = log_moments(&a1m, n, &harmonic, ctx);
        let ul2 = log_moments(&a2m, n, &harmonic, ctx);
        let f1 = shifted_e1(&a1m, &m1, n, ctx);
        let f2 = shifted_e1(&a2m, &m2, n, ctx);
        let fu = shifted_e1(&u, &mu_, n2, ctx);
        let us1 = split_moments(&f1, &inv1, &ff, n);
        let us2 = split_moments(&f2, &inv2, &ff, n);

        // H_k(u) = e^{-u}(ln u - Σ_{t=1}^k C(k,t)(t-1)!/u^t) + F_k(u).
        let eu = ctx.exp(&-&u);
        let lnu = ctx.ln(&u);
        let invu = inv_powers(&u, n2);
        let h: Vec<Mp> = (0..=2 * n)
            .map(|k| {
                let mut s = lnu.clone();
                for t in 1..=k {
                    // C(k,t)(t-1)! = k!/((k-t)! t)
                    let c = ff[k][t].div_i64(t as i64);
                    s -= &(&c * &invu[t]);
                }
                &(&eu * &s) + &fu[k]
            })
            .collect();

        // A[i][a] = i!/(a! α^{i-a+1}).
        let amat = |inv: &[Mp]| -> Vec<Vec<Mp>> {
            (0..=n).map(|i| (0..=i).map(|a| &ff[i][i - a] * &inv[i - a + 1]).collect()).collect()
        };
        let (am1, am2) = (amat(&inv1), amat(&inv2));
        let w = n + 1;
        let mut t = Vec::with_capacity(w * w);
        for row in am1.iter().take(n + 1) {
            for b in 0..=n {
                let mut s = Mp::zero(p);
                for (a, ra) in row.iter().enumerate() {
                    s += &(ra * &h[a + b]);
                }
                t.push(s);
            }
        }
        let c0 = {
            let ln2 = ctx.ln2();
            &ln2 + &ctx.euler_gamma()
        };
        let mut d = Vec::with_capacity(w * w);
        for i in 0..=n {
            for j in 0..=n {
                let mut ns = Mp::zero(p);
                for b in 0..=j {
                    ns += &(&t[i * w + b] * &am2[j][b]);
                }
                let sep = &(&(&c0 * &m1[i]) * &m2[j])
                    + &(&(&(&ul1[i] * &m2[j]) + &(&m1[i] * &ul2[j]))
                        + &(&(&us1[i] * &m2[j]) + &(&m1[i] * &us2[j])));
                d.push(&sep - &ns);
            }
        }

        let y = |inv_out: &[Mp]| -> Vec<Mp> {
            let mut out = Vec::with_capacity(w * w);
            for k in 0..=n {
                for f in 0..=n {
                    let mut s = Mp::zero(p);
                    for j in 0..=f {
                        let c = &ff[f][j] * &inv_out[j + 1];
                        s += &(&c * &mu_[k + f - j]);
                    }
                    out.push(s);
                }
            }
            out
        };
        let y1 = y(&inv2);
        let y2 = y(&inv1);
        XiTables { n, d, y1, y2 }
    }
}

/// `1/α^k` for `k ≤ kmax`.
fn inv_powers(a: &Mp, kmax: usize) -> Vec<Mp> {
    let r = a.recip();
    let mut v = Vec::with_capacity(kmax + 1);
    v.push(Mp::from_i64(1, a.precision()));
    for k in 1..=kmax {
        let next = &v[k - 1] * &r;
        v.push(next);
    }
    v
}

/// `M_i(b) = ∫_1^∞ x^i e^{-bx} dx`, by the all-positive recurrence
/// `M_i = e^{-b}/b + (i/b) M_{i-1}`.
fn moments(b: &Mp, imax: usize, ctx: &mut MpCtx) -> Vec<Mp> {
    let e = &ctx.exp(&-b) / b;
    let mut v = Vec::with_capacity(imax + 1);
    v.push(e.clone());
    for i in 1..=imax {
        let next = &e + &(&v[i - 1].mul_i64(i as i64) / b);
        v.push(next);
    }
    v
}

/// `e^{-α} Σ_k i!/(i-k)! α^{-k-1} (ln α - H_k)`.
fn log_moments(a: &Mp, imax: usize, harmonic: &[Mp], ctx: &mut MpCtx) -> Vec<Mp> {
    let ea = ctx.exp(&-a);
    let la = ctx.ln(a);
    let r = a.recip();
    (0..=imax)
        .map(|i| {
            let mut term = r.clone();
            let mut s = Mp::zero(a.precision());
            for (k, hk) in harmonic.iter().enumerate().take(i + 1) {
                s += &(&term * &(&la - hk));
                term = &term.mul_i64((i - k) as i64) * &r;
            }
            &ea * &s
        })
        .collect()
}

/// `F_k(α) = (-∂/∂α)^k [e^{-α} e^{2α} E1(2α)]` by `F_k = U0_{k-1} - F_{k-1}`.
fn shifted_e1(a: &Mp, u0: &[Mp], kmax: usize, ctx: &mut MpCtx) -> Vec<Mp> {
    let two_a = a.mul_i64(2);
    let f0 = &ctx.exp(&-a) * &ctx.exp_e1(&two_a);
    let mut v = Vec::with_capacity(kmax + 1);
    v.push(f0);
    for k in 1..=kmax {
        let next = &u0[k - 1] - &v[k - 1];
        v.push(next);
    }
    v
}

/// `Σ_k i!/k! F_k / α^{i-k+1}`.
fn split_moments(f: &[Mp], inv: &[Mp], ff: &[Vec<Mp>], imax: usize) -> Vec<Mp> {
    (0..=imax)
        .map(|i| {
            let mut s = Mp::zero(f[0].precision());
            for k in 0..=i {
                s += &(&(&ff[i][i - k] * &f[k]) * &inv[i - k + 1]);
            }
            s
        })
        .collect()
}
