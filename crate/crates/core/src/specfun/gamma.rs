use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Γ(z) for z > 0.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("gamma_fn", format!("argument must be > 0, got {z}")));
    }
    Ok(statrs::function::gamma::gamma(z))
}

/// ln Γ(z) for z > 0.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("ln_gamma", format!("argument must be > 0, got {z}")));
    }
    Ok(statrs::function::gamma::ln_gamma(z))
}

/// 1/Γ(x) on the whole real line, zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.round() {
        return 0.0;
    }
    if x < 0.5 {
        // reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
        return (PI * x).sin() * statrs::function::gamma::gamma(1.0 - x) / PI;
    }
    if x > 171.0 {
        return (-statrs::function::gamma::ln_gamma(x)).exp();
    }
    1.0 / statrs::function::gamma::gamma(x)
}

/// ψ(x), the logarithmic derivative of Γ.
pub fn digamma(x: f64) -> f64 {
    statrs::function::gamma::digamma(x)
}

/// Rising factorial (y)_l = y (y+1) ... (y+l-1), with (y)_0 = 1.
pub fn pochhammer(y: f64, l: u32) -> f64 {
    (0..l).fold(1.0, |acc, k| acc * (y + k as f64))
}

/// ln (y)_n = ln Γ(y+n) - ln Γ(y) for y > 0, n ≥ 0 (n may be fractional).
pub fn ln_pochhammer(y: f64, n: f64) -> Result<f64> {
    Ok(ln_gamma(y + n)? - ln_gamma(y)?)
}

/// Γ(a)/Γ(b) for positive arguments.
pub(crate) fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    if a < 150.0 && b < 150.0 {
        return Ok(gamma_fn(a)? / gamma_fn(b)?);
    }
    Ok((ln_gamma(a)? - ln_gamma(b)?).exp())
}
