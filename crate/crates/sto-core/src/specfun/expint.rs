use crate::error::{Error, Result};
use crate::math;

/// Euler's constant γ.
pub fn euler_gamma() -> f64 {
    0.577_215_664_901_532_9
}

/// Below this point the power series is used, above it the continued fraction.
const SERIES_LIMIT: f64 = 1.5;

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(alloc::format!("E1 requires finite x > 0, got {x}")));
    }
    if x < SERIES_LIMIT {
        Ok(e1_series(x))
    } else {
        Ok(exp_e1_cf(x) * math::exp(-x))
    }
}

/// `e^x E1(x)` for `x > 0`; never forms `e^x` when `x` is large.
pub fn exp_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(alloc::format!("E1 requires finite x > 0, got {x}")));
    }
    if x < SERIES_LIMIT {
        Ok(e1_series(x) * math::exp(x))
    } else {
        Ok(exp_e1_cf(x))
    }
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = -term / k as f64;
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum - euler_gamma() - math::ln(x)
}

/// Modified Lentz evaluation of `1/(x+1- 1/(x+3- 4/(x+5- ...)))`.
fn exp_e1_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        // High-precision values of E1.
        for (x, v) in [
            (0.1, 1.822_923_958_419_390_7),
            (1.0, 0.219_383_934_395_520_27),
            (1.5, 0.100_019_582_406_632_6),
            (3.0, 0.013_048_381_094_197_037),
            (10.0, 4.156_968_929_685_324e-6),
        ] {
            assert_relative_eq!(exp_integral_e1(x).unwrap(), v, max_relative = 1e-14);
        }
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
    }

    #[test]
    fn limits() {
        let x = 1e6;
        assert_relative_eq!(exp_e1(x).unwrap() * x, 1.0, max_relative = 1e-5);
        let x = 1e-12;
        assert!((exp_integral_e1(x).unwrap() + math::ln(x) + euler_gamma()).abs() < 1e-10);
    }

    #[test]
    fn derivative_matches_integrand() {
        for x in [0.5, 1.0, 3.0] {
            let h = 1e-5 * x;
            let fd = (exp_integral_e1(x + h).unwrap() - exp_integral_e1(x - h).unwrap()) / (2.0 * h);
            assert_relative_eq!(fd, -math::exp(-x) / x, max_relative = 1e-8);
        }
    }

    #[test]
    fn switch_point_is_seamless() {
        let a = e1_series(SERIES_LIMIT);
        let b = exp_e1_cf(SERIES_LIMIT) * math::exp(-SERIES_LIMIT);
        assert_relative_eq!(a, b, max_relative = 1e-15);
    }
}
