use approx::assert_relative_eq;
use sto_core::mp::{Mp, MpCtx};
use sto_core::specfun::{
    legendre_p_cut, legendre_p_cut_row, weighted_p_offcut, weighted_p_row, weighted_q_offcut, weighted_q_row,
};

#[test]
fn cut_recurrence_holds() {
    for m in 0..=4u32 {
        for l in m.max(1)..=8 {
            for x in [-0.93, -0.4, 0.0, 0.25, 0.77] {
                let p = |k: u32| legendre_p_cut(k, m, x).unwrap();
                let lhs = (l - m + 1) as f64 * p(l + 1);
                let rhs = (2 * l + 1) as f64 * x * p(l) - (l + m) as f64 * p(l - 1);
                let scale = lhs.abs().max(rhs.abs()).max((2 * l + 1) as f64 * p(l).abs());
                assert!((lhs - rhs).abs() <= 1e-12 * scale, "l={l} m={m} x={x}: {lhs} vs {rhs}");
            }
        }
    }
}

#[test]
fn offcut_recurrence_holds_after_removing_the_weight() {
    for sigma in 0..=4u32 {
        for z in [1.05f64, 2.0, 5.0] {
            let w = ((z - 1.0) * (z + 1.0)).powf(sigma as f64 / 2.0);
            let p: Vec<f64> = weighted_p_row(9, sigma, z).iter().map(|v| v / w).collect();
            let q: Vec<f64> = weighted_q_row(9, sigma, z).iter().map(|v| v / w).collect();
            for l in (sigma + 1)..=8 {
                let l_ = l as usize;
                for (row, name) in [(&p, "P"), (&q, "Q")] {
                    let lhs = (l - sigma + 1) as f64 * row[l_ + 1];
                    let rhs = (2 * l + 1) as f64 * z * row[l_] - (l + sigma) as f64 * row[l_ - 1];
                    let scale = lhs.abs().max((2 * l + 1) as f64 * z * row[l_].abs());
                    assert!((lhs - rhs).abs() <= 1e-12 * scale, "{name} l={l} s={sigma} z={z}");
                }
            }
        }
    }
}

#[test]
fn exact_polynomials_agree_with_the_rows() {
    for sigma in 0..=3u32 {
        let row = legendre_p_cut_row(8, sigma, 0.3);
        for mu in sigma..=8 {
            assert_relative_eq!(row[mu as usize], legendre_p_cut(mu, sigma, 0.3).unwrap(), max_relative = 1e-13);
            assert_relative_eq!(
                weighted_p_row(8, sigma, 2.0)[mu as usize],
                weighted_p_offcut(mu, sigma).eval(2.0),
                max_relative = 1e-13
            );
        }
    }
}

/// `P Q' - P' Q = -1/(z²-1)`, with `Q'` from the analytic structure
/// `Q = ½ P ln((z+1)/(z-1)) + poly`.
#[test]
fn wronskian_from_the_exact_expansion() {
    let bits = 256;
    let mut ctx = MpCtx::new(bits);
    for mu in 0..=8u32 {
        let p = weighted_p_offcut(mu, 0);
        let q = weighted_q_offcut(mu, 0);
        let dp = p.poly().derivative();
        let dpoly = q.polynomial_part().derivative();
        for z in [1.1, 2.0, 5.0] {
            let zm = Mp::from_f64(z, bits);
            let one = Mp::from_i64(1, bits);
            let half = Mp::from_f64(0.5, bits);
            let w = &(&zm * &zm) - &one;
            let log = ctx.ln(&(&(&zm + &one) / &(&zm - &one)));
            let pv = p.poly().eval_mp(&zm);
            let dpv = dp.eval_mp(&zm);
            let qv = q.eval_mp(&zm, &mut ctx);
            let dqv = &(&(&half * &dpv) * &log) - &(&pv / &w);
            let dqv = &dqv + &dpoly.eval_mp(&zm);
            let wr = &(&pv * &dqv) - &(&dpv * &qv);
            assert_relative_eq!((&wr * &w).to_f64(), -1.0, max_relative = 1e-10);
        }
    }
}

/// The same Wronskian from the f64 rows, `Q'` by Richardson-extrapolated
/// central differences.
#[test]
fn wronskian_from_the_numeric_rows() {
    for z in [1.1, 2.0, 5.0] {
        let d = |f: &dyn Fn(f64) -> f64| {
            let c = |h: f64| (f(z + h) - f(z - h)) / (2.0 * h);
            let h = 1e-3 * (z - 1.0);
            (4.0 * c(h / 2.0) - c(h)) / 3.0
        };
        for mu in 0..=8usize {
            let p = weighted_p_row(8, 0, z)[mu];
            let q = weighted_q_row(8, 0, z)[mu];
            let dp = d(&|x| weighted_p_row(8, 0, x)[mu]);
            let dq = d(&|x| weighted_q_row(8, 0, x)[mu]);
            assert_relative_eq!((p * dq - dp * q) * (z * z - 1.0), -1.0, max_relative = 1e-8);
        }
    }
}
