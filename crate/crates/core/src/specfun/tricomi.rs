//! Tricomi's confluent hypergeometric function U(a, b, z).

use super::quad::gamma_average;
use super::PrecisionPolicy;
use crate::error::{Error, Result};

/// U(a, b, z) = (1/Γ(a)) ∫_0^∞ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt, for a > 0, z > 0.
pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<f64> {
    let scaled = tricomi_u_scaled(a, b, z, &PrecisionPolicy::default())?;
    Ok(scaled * z.powf(-a))
}

/// z^a U(a, b, z), which stays O(1) as z → 0 when b < a + 1 and avoids the
/// overflow of z^{-a} for large a.
///
/// Substituting s = z t gives z^a U = E[(1 + S/z)^{b-a-1}] with S ~ Gamma(a, 1).
pub fn tricomi_u_scaled(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("tricomi_u", format!("a must be > 0, got {a}")));
    }
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("tricomi_u", format!("z must be > 0, got {z}")));
    }
    if !b.is_finite() {
        return Err(Error::domain("tricomi_u", "b must be finite"));
    }
    let p = b - a - 1.0;
    if p == 0.0 {
        return Ok(1.0);
    }
    let r = gamma_average(a, policy, |s| Ok((p * (s / z).ln_1p()).exp()))?;
    Ok(r.value)
}
