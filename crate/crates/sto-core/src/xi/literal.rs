//! The closed form evaluated block by block with explicit loops (log blocks
//! one to three and the polynomial block), plus the A/B/C route that
//! integrates the split `Q` expansion directly. Both are slow and exist to
//! pin the tables.

use alloc::vec::Vec;

use crate::mp::{Mp, MpCtx};
use crate::specfun::{binom, fact, weighted_p_offcut, weighted_q_offcut};

pub(crate) struct Lit<'a> {
    pub ctx: &'a mut MpCtx,
    pub a1: Mp,
    pub a2: Mp,
}

impl<'a> Lit<'a> {
    pub fn new(ctx: &'a mut MpCtx, a1: f64, a2: f64) -> Self {
        let (a1, a2) = (ctx.num(a1), ctx.num(a2));
        Lit { ctx, a1, a2 }
    }

    fn p(&self) -> usize {
        self.ctx.precision()
    }

    fn f(&self, n: i64) -> Mp {
        Mp::from_bigint(&fact(n as u32), self.p())
    }

    fn c(&self, n: i64, k: i64) -> Mp {
        Mp::from_bigint(&binom(n, k), self.p())
    }

    fn i(&self, n: i64) -> Mp {
        Mp::from_i64(n, self.p())
    }

    fn sg(&self, e: i64) -> Mp {
        self.i(if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    fn u(&self) -> Mp {
        &self.a1 + &self.a2
    }

    pub fn block1(&mut self, k1: i64, k2: i64) -> Mp {
        let (a1, a2, u) = (self.a1.clone(), self.a2.clone(), self.u());
        let two = self.i(2);
        let s1u = self.ctx.exp_e1(&(&two * &u));
        let s11 = self.ctx.exp_e1(&(&two * &a1));
        let s12 = self.ctx.exp_e1(&(&two * &a2));
        let lg = self.ctx.ln(&(&(&(&two * &a1) * &a2) / &u));
        let gamma = self.ctx.euler_gamma();
        let mut tot = Mp::zero(self.p());
        for n1 in 0..=k1 {
            for n2 in 0..=k2 {
                let c = &(&(&self.f(k1) / &self.f(k1 - n1)) / &a1.powi(n1 as u32 + 1))
                    * &(&(&self.f(k2) / &self.f(k2 - n2)) / &a2.powi(n2 as u32 + 1));
                let br = &(&(&(&lg + &(&self.sg(n1 + n2 + k1 + k2 + 1) * &s1u)) + &(&self.sg(k1 + n1) * &s11))
                    + &(&self.sg(k2 + n2) * &s12))
                    + &gamma;
                tot += &(&c * &br);
            }
        }
        tot
    }

    pub fn block2(&mut self, k1: i64, k2: i64) -> Mp {
        let (a1, a2, u) = (self.a1.clone(), self.a2.clone(), self.u());
        let pw = |x: &Mp, e: i64| x.powi(e as u32);
        let two = self.i(2);
        let mut tot = Mp::zero(self.p());
        for n2 in 1..=k2 {
            for j2 in 0..=(k2 - n2) {
                let pre = &(&self.f(k2) / &self.f(k2 - n2 - j2)) / &self.i(n2);
                for n1 in 0..=k1 {
                    let fk = &self.f(k1) / &self.f(k1 - n1);
                    let mut s = -&(&fk / &(&pw(&a1, n1 + 1) * &pw(&a2, n2 + j2 + 1)));
                    let mut t1 = Mp::zero(self.p());
                    for t in 0..n2 {
                        t1 += &(&pw(&two, n2 - t - 1) / &(&(&self.f(n2 - t - 1) * &pw(&a1, n1 + 1)) * &pw(&a2, j2 + t + 2)));
                    }
                    s += &(&(&fk * &self.sg(k2 + n2 + j2)) * &t1);
                    for j1 in 0..=n1 {
                        let mut inner = &self.c(k1 + n2 - n1 - 1, k1 - n1)
                            / &(&(&pw(&a2, j2 + 1) * &pw(&u, k1 + n2 - n1)) * &pw(&a1, j1 + 1));
                        for t in 0..n2 {
                            let num = &(&self.sg(k2 + n2 + j2 + 1) * &pw(&two, n2 - t - 1)) * &self.c(t + k1 - n1, t);
                            let den = &(&(&self.f(n2 - t - 1) * &pw(&a2, j2 + 1)) * &pw(&u, k1 + t + 1 - n1)) * &pw(&a1, j1 + 1);
                            inner += &(&num / &den);
                        }
                        s += &(&(&self.f(k1) / &self.f(n1 - j1)) * &inner);
                    }
                    tot += &(&pre * &s);
                }
            }
        }
        tot
    }

    pub fn block3(&mut self, k1: i64, k2: i64) -> Mp {
        let (a1, a2, u) = (self.a1.clone(), self.a2.clone(), self.u());
        let pw = |x: &Mp, e: i64| x.powi(e as u32);
        let two = self.i(2);
        let one = self.i(1);
        let mut tot = Mp::zero(self.p());
        for n2 in 0..=k2 {
            for n1 in 1..=k1 {
                for j1 in 0..=(k1 - n1) {
                    let pre = &(&(&(&self.f(k2) / &self.f(k2 - n2)) / &self.i(n1)) * &self.f(k1)) / &self.f(k1 - n1 - j1);
                    let mut s = &(&one / &(&(&pw(&a1, j1 + 1) * &pw(&a2, n2 + 1)) * &pw(&u, n1)))
                        - &(&one / &(&pw(&a1, n1 + j1 + 1) * &pw(&a2, n2 + 1)));
                    for t in 0..n1 {
                        let c = &(&self.sg(k1 + j1 + n1) * &pw(&two, n1 - 1 - t)) / &self.f(n1 - t - 1);
                        let x = &(&one / &(&pw(&a1, j1 + t + 2) * &pw(&a2, n2 + 1)))
                            + &(&self.sg(k2 + n2 + 1) / &(&(&pw(&u, t + 1) * &pw(&a1, j1 + 1)) * &pw(&a2, n2 + 1)));
                        s += &(&c * &x);
                    }
                    tot += &(&pre * &s);
                }
            }
        }
        tot
    }

    /// `e^{-(α1+α2)}` times the three log blocks.
    pub fn d(&mut self, k1: i64, k2: i64) -> Mp {
        let s = &(&self.block1(k1, k2) + &self.block2(k1, k2)) + &self.block3(k1, k2);
        let e = self.ctx.exp(&-&self.u());
        &e * &s
    }

    pub fn block4(&mut self, k1o: i64, f2: i64, k2: i64, f1: i64) -> Mp {
        let (a1, a2, u) = (self.a1.clone(), self.a2.clone(), self.u());
        let pw = |x: &Mp, e: i64| x.powi(e as u32);
        let mut s = Mp::zero(self.p());
        if f2 >= 0 {
            for n1 in 0..=k1o {
                for n2 in 0..=f2 {
                    for j2 in 0..=n2 {
                        let num = &(&(&self.f(k1o) / &self.f(k1o - n1)) * &self.c(n1 + f2 - n2, f2 - n2)) * &self.f(f2);
                        let den = &(&self.f(n2 - j2) * &pw(&a2, j2 + 1)) * &pw(&u, f2 + n1 - n2 + 1);
                        s += &(&num / &den);
                    }
                }
            }
        }
        if f1 >= 0 {
            for n2 in 0..=k2 {
                for n1 in 0..=f1 {
                    for j1 in 0..=n1 {
                        let num = &(&(&self.f(k2) / &self.f(k2 - n2)) * &self.c(n2 + f1 - n1, f1 - n1)) * &self.f(f1);
                        let den = &(&self.f(n1 - j1) * &pw(&a1, j1 + 1)) * &pw(&u, f1 + n2 - n1 + 1);
                        s += &(&num / &den);
                    }
                }
            }
        }
        s
    }

    /// The closed form as nested loops, no reordering.
    pub fn closed_form(&mut self, mu: i64, s: i64, r1: i64, r2: i64) -> Mp {
        let p = self.p();
        let mut a = Mp::zero(p);
        for k in 0..=((mu + s) / 2) {
            for q in 0..=((mu + s) / 2) {
                let c = &(&(&(&self.sg(k + q) * &self.c(2 * mu - 2 * k, mu - s)) * &self.c(mu, k)) * &self.c(2 * mu - 2 * q, mu - s))
                    * &self.c(mu, q);
                if c.is_zero() {
                    continue;
                }
                let (k1, k2) = (mu + s - 2 * q + r1, mu + s - 2 * k + r2);
                let d = self.d(k1, k2);
                a += &(&c * &d);
            }
        }
        let fr = &self.f(mu + s) / &self.f(mu);
        a = &(&a * &(&fr * &fr)) / &Mp::from_i64(2, p).powi(2 * mu as u32 + 1);

        let mut poly = Mp::zero(p);
        for k in 0..=((mu + s) / 2) {
            let ck = &(&self.sg(k) * &self.c(2 * mu - 2 * k, mu - s)) * &self.c(mu, k);
            if ck.is_zero() {
                continue;
            }
            let (k1o, k2) = (mu + s - 2 * k + r1, mu + s - 2 * k + r2);
            let mut tuples: Vec<(Mp, i64)> = Vec::new();
            for kap in 1..=s {
                for j in 0..=((kap - 1) / 2) {
                    for n in 0..=((mu + s - kap) / 2) {
                        let c = &(&(&(&(&(&self.sg(kap + n) * &self.f(s)) / &self.i(kap)) * &self.c(mu + s - kap, mu))
                            * &self.c(kap, kap - 2 * j - 1))
                            * &self.c(2 * mu - 2 * n, mu - s + kap))
                            * &self.c(mu, n);
                        tuples.push((c, n + j));
                    }
                }
            }
            if mu - s > 0 {
                for j in 0..=((mu - s - 1) / 2) {
                    let cj = -&(&(&(&self.i(2 * mu - 4 * j - 1) * &self.f(mu - 2 * j - 1 + s)) * &Mp::from_i64(2, p).powi(2 * j as u32 + 1))
                        / &(&self.i((2 * j + 1) * (mu - j)) * &self.f(mu - 2 * j - 1)));
                    for n in 0..=((mu + s - 2 * j - 1) / 2) {
                        let c = &(&(&cj * &self.sg(n)) * &self.c(2 * (mu - 2 * j - 1 - n), mu - 2 * j - 1 - s)) * &self.c(mu - 2 * j - 1, n);
                        tuples.push((c, n + j));
                    }
                }
            }
            for (c, nj) in tuples {
                let (f1, f2) = (mu + s - 2 * nj - 1 + r1, mu + s - 2 * nj - 1 + r2);
                let b = self.block4(k1o, f2, k2, f1);
                poly += &(&(&ck * &c) * &b);
            }
        }
        let e = self.ctx.exp(&-&self.u());
        poly = &(&(&poly * &e) * &self.f(mu + s)) / &(&Mp::from_i64(2, p).powi(2 * mu as u32) * &self.f(mu));
        &a + &poly
    }

    /// `∫_1^∞ z^k e^{-b z} ∫_1^z x^i e^{-a x} dx dz` through the complement
    /// `∫_1^z = ∫_1^∞ - ∫_z^∞`.
    fn z_inner(&mut self, k: i64, b: &Mp, i: i64, a: &Mp) -> Mp {
        let m = |ctx: &mut MpCtx, n: i64, x: &Mp| -> Mp {
            let e = ctx.exp(&-x);
            let mut s = Mp::zero(x.precision());
            let mut ff = Mp::from_i64(1, x.precision());
            for j in 0..=n {
                s += &(&ff / &x.powi(j as u32 + 1));
                ff = ff.mul_i64(n - j);
            }
            &e * &s
        };
        let ab = a + b;
        let mut out = &m(self.ctx, i, a) * &m(self.ctx, k, b);
        for j in 0..=i {
            let c = &(&self.f(i) / &self.f(i - j)) / &a.powi(j as u32 + 1);
            out -= &(&c * &m(self.ctx, k + i - j, &ab));
        }
        out
    }

    /// Integrates `½ Pw ln((z+1)/(z-1)) + W(z)` directly: the log part by
    /// parts onto the literal `D`, the polynomial part by the complement.
    pub fn abc_route(&mut self, mu: u32, s: u32, r1: u32, r2: u32) -> Mp {
        let pw = weighted_p_offcut(mu, s);
        let w = weighted_q_offcut(mu, s).polynomial_part();
        let p = self.p();
        let v1 = pw.poly().shift(r1);
        let v2 = pw.poly().shift(r2);
        let half = Mp::from_f64(0.5, p);
        let mut tot = Mp::zero(p);
        for (i, ci) in v1.terms() {
            for (j, cj) in v2.terms() {
                let d = self.d(i as i64, j as i64);
                let c = Mp::from_ratio(&(ci * cj), p);
                tot += &(&(&c * &d) * &half);
            }
        }
        let (a1, a2) = (self.a1.clone(), self.a2.clone());
        for (v, ain, rout, aout) in [(&v1, &a1, r2, &a2), (&v2, &a2, r1, &a1)] {
            for (k, ck) in w.shift(rout).terms() {
                for (i, ci) in v.terms() {
                    let c = Mp::from_ratio(&(ck * ci), p);
                    let z = self.z_inner(k as i64, aout, i as i64, ain);
                    tot += &(&c * &z);
                }
            }
        }
        tot
    }
}
