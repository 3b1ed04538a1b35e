use crate::error::{Error, Result};
use crate::math;

/// Modified Bessel function `I_{μ+1/2}(β)` by its ascending series.
pub fn bessel_i_halfint(mu: u32, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::Domain(alloc::format!(
            "I_(mu+1/2) requires finite beta > 0, got {beta}"
        )));
    }
    // (β/2)^ν / Γ(ν+1) with ν = μ + 1/2, Γ(μ+3/2) = (2μ+1)!! √π / 2^(μ+1).
    let nu = mu as f64 + 0.5;
    let mut lead = math::sqrt(beta / 2.0) / math::sqrt(core::f64::consts::PI) * 2.0;
    for k in 1..=mu {
        lead *= beta / (2 * k + 1) as f64;
    }
    let q = beta * beta / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..2000 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term < 1e-17 * sum {
            return Ok(lead * sum);
        }
    }
    Err(Error::SeriesCap("I_(mu+1/2)"))
}
