//! Gauss hypergeometric function ₂F₁(a, b; c; x) for real x < 1.

use super::gamma::{digamma, recip_gamma};
use super::kummer::ln_kummer_1f1;
use super::quad::gamma_average;
use super::{PrecisionPolicy, STOP_RUN};
use crate::error::{Error, Result};

const FUNC: &str = "gauss_2f1";

/// Below this distance from an integer, c - a - b is treated as degenerate
/// for the 1 - x connection formula.
const NEAR_INTEGER: f64 = 1e-4;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn gamma_signed(x: f64) -> f64 {
    1.0 / recip_gamma(x)
}

/// ₂F₁(a, b; c; x) at the default precision policy.
pub fn gauss_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    gauss_2f1_with(a, b, c, x, &PrecisionPolicy::default())
}

pub(crate) fn gauss_2f1_with(a: f64, b: f64, c: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    validate(a, b, c, x)?;
    if x == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return Ok(terminating(a, b, c, x));
    }
    if x.abs() <= 0.5 {
        return gauss_2f1_series(a, b, c, x, policy);
    }
    if x < -0.5 {
        // Pfaff: (1-x)^{-a} ₂F₁(a, c-b; c; x/(x-1)), argument lands in (1/3, 1)
        let w = x / (x - 1.0);
        let inner = gauss_2f1_with(a, c - b, c, w, policy)?;
        return Ok((1.0 - x).powf(-a) * inner);
    }
    one_minus_x(a, b, c, x, policy)
}

fn validate(a: f64, b: f64, c: f64, x: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && x.is_finite()) {
        return Err(Error::domain(FUNC, "arguments must be finite"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(FUNC, format!("c must not be a non-positive integer, got {c}")));
    }
    if x >= 1.0 {
        return Err(Error::domain(FUNC, format!("x must be < 1, got {x}")));
    }
    Ok(())
}

fn terminating(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let n = if is_nonpositive_integer(a) { -a } else { -b };
    let n = n.round() as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
    }
    sum
}

/// The hypergeometric series Σ (a)_n (b)_n / ((c)_n n!) xⁿ, for |x| < 1.
pub fn gauss_2f1_series(a: f64, b: f64, c: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    validate(a, b, c, x)?;
    if x.abs() >= 1.0 {
        return Err(Error::domain(FUNC, format!("series needs |x| < 1, got {x}")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        term *= ratio;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= policy.rel_tol * sum.abs() && ratio.abs() < 1.0 {
            quiet += 1;
            if quiet >= STOP_RUN {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::precision(
        FUNC,
        format!("series did not converge in {} terms at x = {x}", policy.max_terms),
        sum,
    ))
}

/// Connection to argument 1 - x, for 0.5 < x < 1.
fn one_minus_x(a: f64, b: f64, c: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let s = c - a - b;
    let y = 1.0 - x;
    let nearest = s.round();
    let dist = (s - nearest).abs();
    if dist == 0.0 {
        if s >= 0.0 {
            return integer_gap(a, b, nearest as usize, y, policy);
        }
        // Euler: (1-x)^s ₂F₁(c-a, c-b; c; x), whose own gap is -s > 0
        let inner = gauss_2f1_with(c - a, c - b, c, x, policy)?;
        return Ok(y.powf(s) * inner);
    }
    if dist < NEAR_INTEGER {
        return near_integer_gap(a, b, c, x, policy);
    }
    let first = gamma_signed(c) * gamma_signed(s) * recip_gamma(c - a) * recip_gamma(c - b);
    let second = gamma_signed(c) * gamma_signed(-s) * recip_gamma(a) * recip_gamma(b);
    let mut value = 0.0;
    if first != 0.0 {
        value += first * gauss_2f1_with(a, b, 1.0 - s, y, policy)?;
    }
    if second != 0.0 {
        value += second * y.powf(s) * gauss_2f1_with(c - a, c - b, 1.0 + s, y, policy)?;
    }
    Ok(value)
}

/// c = a + b + m with integer m ≥ 0, evaluated at y = 1 - x:
///
/// F = Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n (b)_n / (n! (1-m)_n) yⁿ
///   - (-y)^m Γ(c)/(Γ(a)Γ(b)) Σ_n (a+m)_n (b+m)_n / (n! (n+m)!) yⁿ
///     · [ln y - ψ(n+1) - ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)]
fn integer_gap(a: f64, b: f64, m: usize, y: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let mf = m as f64;
    let c = a + b + mf;
    let gc = gamma_signed(c);

    let mut finite = 0.0;
    if m > 0 {
        let mut term = 1.0;
        for n in 0..m {
            finite += term;
            let nf = n as f64;
            term *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf)) * y;
        }
        let gm: f64 = (1..m).map(|k| k as f64).product();
        finite *= gm * gc * recip_gamma(a + mf) * recip_gamma(b + mf);
    }

    let pref = -(-y).powi(m as i32) * gc * recip_gamma(a) * recip_gamma(b);
    if pref == 0.0 {
        return Ok(finite);
    }
    let ln_y = y.ln();
    let mut psi_1 = digamma(1.0); // ψ(n+1)
    let mut psi_m = digamma(mf + 1.0); // ψ(n+m+1)
    let mut psi_a = digamma(a + mf); // ψ(a+n+m)
    let mut psi_b = digamma(b + mf); // ψ(b+n+m)
    let mut coeff = 1.0 / (1..=m).map(|k| k as f64).product::<f64>(); // 1/m!
    let mut sum = 0.0;
    let mut quiet = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let term = coeff * (ln_y - psi_1 - psi_m + psi_a + psi_b);
        sum += term;
        if term.abs() <= policy.rel_tol * sum.abs() {
            quiet += 1;
            if quiet >= STOP_RUN {
                return Ok(finite + pref * sum);
            }
        } else {
            quiet = 0;
        }
        coeff *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * y;
        psi_1 += 1.0 / (nf + 1.0);
        psi_m += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
        if coeff == 0.0 {
            return Ok(finite + pref * sum);
        }
    }
    Err(Error::precision(
        FUNC,
        "logarithmic connection series did not converge",
        finite + pref * sum,
    ))
}

/// c - a - b within `NEAR_INTEGER` of an integer: both connection terms blow
/// up with opposite signs, so sum the direct series instead, first applying
/// Euler's transformation if it makes the terms decay faster.
fn near_integer_gap(a: f64, b: f64, c: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    let s = c - a - b;
    if s < 0.0 {
        let inner = gauss_2f1_series(c - a, c - b, c, x, policy)?;
        return Ok((1.0 - x).powf(s) * inner);
    }
    gauss_2f1_series(a, b, c, x, policy)
}

/// ₂F₁(a, b; c; x) = (1/Γ(a)) ∫_0^∞ e^{-t} t^{a-1} ₁F₁(b; c; x t) dt, for a > 0.
///
/// This shares nothing with [`gauss_2f1`] beyond ₁F₁ and Γ and serves as its
/// cross-check.
pub fn gauss_2f1_integral(a: f64, b: f64, c: f64, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    validate(a, b, c, x)?;
    if !(a > 0.0) {
        return Err(Error::domain(FUNC, format!("integral route needs a > 0, got {a}")));
    }
    // s = (1 - x⁺) t absorbs the e^{x t} growth of ₁F₁ for positive x
    let rate = 1.0 - x.max(0.0);
    let damp = x.max(0.0) / rate;
    let r = gamma_average(a, policy, |s| {
        let (ln_m, sign) = ln_kummer_1f1(b, c, x * s / rate, policy)?;
        Ok(sign * (ln_m - damp * s).exp())
    })?;
    Ok(r.value * rate.powf(-a))
}
