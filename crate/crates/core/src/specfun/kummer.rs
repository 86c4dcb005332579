//! Kummer's confluent hypergeometric function ₁F₁(a; b; z).

use super::gamma::{ln_gamma, recip_gamma};
use super::{PrecisionPolicy, STOP_RUN};
use crate::error::{Error, Result};

const RESCALE: f64 = 1e280;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// ₁F₁(a; b; z) at the default precision policy.
///
/// Negative arguments go through Kummer's transformation
/// ₁F₁(a; b; z) = e^z ₁F₁(b-a; b; -z) so the summed series never alternates
/// in its tail; large positive arguments use the asymptotic expansion.
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    let (ln_abs, sign) = ln_kummer_1f1(a, b, z, &PrecisionPolicy::default())?;
    Ok(sign * ln_abs.exp())
}

/// The plain Maclaurin series of ₁F₁ with no transformation, summed until
/// [`STOP_RUN`] consecutive terms are negligible.
pub fn kummer_1f1_series(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(Error::domain(
            "kummer_1f1",
            format!("b must not be a non-positive integer, got {b}"),
        ));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut quiet = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) / (b + nf) * z / (nf + 1.0);
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
        "kummer_1f1",
        format!("series did not converge in {} terms", policy.max_terms),
        sum,
    ))
}

/// (ln|₁F₁(a; b; z)|, sign).
pub(crate) fn ln_kummer_1f1(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    if is_nonpositive_integer(b) {
        return Err(Error::domain(
            "kummer_1f1",
            format!("b must not be a non-positive integer, got {b}"),
        ));
    }
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::domain("kummer_1f1", "arguments must be finite"));
    }
    if z == 0.0 || a == 0.0 {
        return Ok((0.0, 1.0));
    }
    if is_nonpositive_integer(a) {
        return Ok(to_ln(polynomial(a, b, z)));
    }
    if z < 0.0 {
        let c = b - a;
        if is_nonpositive_integer(c) {
            let p = polynomial(c, b, -z);
            let (l, s) = to_ln(p);
            return Ok((l + z, s));
        }
        let (l, s) = ln_positive(c, b, -z, policy)?;
        return Ok((l + z, s));
    }
    ln_positive(a, b, z, policy)
}

fn to_ln(v: f64) -> (f64, f64) {
    (v.abs().ln(), if v < 0.0 { -1.0 } else { 1.0 })
}

/// Terminating series for a non-positive integer `a`.
fn polynomial(a: f64, b: f64, z: f64) -> f64 {
    let n = (-a).round() as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
    }
    sum
}

fn ln_positive(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    if z >= 25.0 {
        if let Some(r) = asymptotic(a, b, z, policy) {
            return Ok(r);
        }
    }
    scaled_series(a, b, z, policy)
}

/// Series summed with periodic rescaling, for z > 0.
fn scaled_series(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut ln_scale = 0.0;
    let mut quiet = 0;
    for n in 0..policy.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) / (b + nf) * z / (nf + 1.0);
        term *= ratio;
        sum += term;
        if sum.abs() > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        if term.abs() <= policy.rel_tol * sum.abs() && ratio.abs() < 1.0 {
            quiet += 1;
            if quiet >= STOP_RUN {
                let (l, s) = to_ln(sum);
                return Ok((l + ln_scale, s));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::precision(
        "kummer_1f1",
        format!("series did not converge in {} terms at z = {z}", policy.max_terms),
        sum * ln_scale.exp(),
    ))
}

/// Dominant asymptotic expansion for large positive z:
/// ₁F₁ ~ Γ(b)/Γ(a) e^z z^{a-b} Σ (b-a)_s (1-a)_s / (s! z^s).
/// Returns `None` when the expansion cannot deliver `rel_tol`.
fn asymptotic(a: f64, b: f64, z: f64, policy: &PrecisionPolicy) -> Option<(f64, f64)> {
    // Γ(b)/Γ(a) with signs; b may be negative non-integer, a may be negative.
    let rg_a = recip_gamma(a);
    if rg_a == 0.0 {
        return None;
    }
    let (ln_gb, sign_gb) = ln_abs_gamma(b);
    let ln_prefactor = ln_gb + rg_a.abs().ln() + z + (a - b) * z.ln();
    let sign_pref = sign_gb * rg_a.signum();

    // The recessive branch is ~ Γ(b)/Γ(b-a) z^{-a}; it must be negligible.
    let rg_ba = recip_gamma(b - a);
    if rg_ba != 0.0 {
        let ln_recessive = ln_gb + rg_ba.abs().ln() - a * z.ln();
        if ln_recessive - ln_prefactor > (0.01 * policy.rel_tol).ln() {
            return None;
        }
    }

    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut last = f64::INFINITY;
    for s in 1..200 {
        let sf = s as f64;
        term *= (b - a + sf - 1.0) * (sf - a) / (sf * z);
        if term == 0.0 {
            break;
        }
        if term.abs() > last {
            return None;
        }
        last = term.abs();
        sum += term;
        if term.abs() < 0.1 * policy.rel_tol * sum.abs() {
            let (l, sg) = to_ln(sum);
            return Some((l + ln_prefactor, sg * sign_pref));
        }
    }
    if term == 0.0 {
        let (l, sg) = to_ln(sum);
        return Some((l + ln_prefactor, sg * sign_pref));
    }
    None
}

/// (ln|Γ(x)|, sign Γ(x)) for any real x that is not a pole.
fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x > 0.0 {
        return (ln_gamma(x).expect("positive"), 1.0);
    }
    let r = recip_gamma(x);
    (-(r.abs().ln()), r.signum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trivial_values() {
        assert_eq!(kummer_1f1(1.3, 2.1, 0.0).unwrap(), 1.0);
        assert_relative_eq!(kummer_1f1(1.0, 1.0, 1.0).unwrap(), 1f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(
            kummer_1f1(1.0, 1.0, 1.0).unwrap(),
            std::f64::consts::E,
            max_relative = 1e-10
        );
        assert_relative_eq!(kummer_1f1(1.0, 1.0, -7.0).unwrap(), (-7f64).exp(), max_relative = 1e-13);
    }

    #[test]
    fn half_one_minus_five_against_extended_precision() {
        // 1F1(1/2; 1; -5) = e^{-5/2} I_0(5/2); value produced by a 300-term
        // series in 50-digit arithmetic (mpmath, mp.dps = 50).
        let oracle = 0.270_046_441_612_202_74;
        assert_relative_eq!(kummer_1f1(0.5, 1.0, -5.0).unwrap(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn polynomial_case() {
        // 1F1(-2; b; z) = 1 - 2z/b + z^2/(b(b+1))
        let (b, z) = (1.5, 3.0);
        let exact = 1.0 - 2.0 * z / b + z * z / (b * (b + 1.0));
        assert_relative_eq!(kummer_1f1(-2.0, b, z).unwrap(), exact, max_relative = 1e-14);
    }

    #[test]
    fn rejects_pole_b() {
        assert!(matches!(kummer_1f1(1.0, -2.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(kummer_1f1(1.0, 0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn series_cap_reports_partial() {
        let p = PrecisionPolicy {
            max_terms: 100,
            ..Default::default()
        };
        match kummer_1f1_series(1.0, 1.0, 400.0, &p) {
            Err(Error::Precision { partial, .. }) => assert!(partial > 0.0),
            other => panic!("expected precision error, got {other:?}"),
        }
    }

    #[test]
    fn asymptotic_matches_series_in_overlap() {
        let p = PrecisionPolicy::default();
        for &(a, b, z) in &[(0.5, 1.0, 40.0), (2.5, 2.0, 60.0), (1.5, 4.0, 80.0), (-0.5, 3.0, 50.0)] {
            let (la, sa) = asymptotic(a, b, z, &p).expect("asymptotic applicable");
            let (ls, ss) = scaled_series(a, b, z, &p).unwrap();
            assert_eq!(sa, ss);
            assert!((la - ls).abs() < 1e-10, "a={a} b={b} z={z}: {la} vs {ls}");
        }
    }

    #[test]
    fn large_negative_argument() {
        // 1F1(1/2; 1; -K) sqrt(1+K) -> 1/sqrt(pi) as K grows
        let k = 1e6;
        let v = kummer_1f1(0.5, 1.0, -k).unwrap() * (1.0 + k).sqrt();
        assert_relative_eq!(v, 1.0 / std::f64::consts::PI.sqrt(), max_relative = 1e-6);
    }

    #[test]
    fn no_overflow_for_huge_positive() {
        let (l, s) = ln_kummer_1f1(2.0, 1.5, 2000.0, &PrecisionPolicy::default()).unwrap();
        assert_eq!(s, 1.0);
        // leading behaviour Γ(b)/Γ(a) e^z z^{a-b}
        let lead = ln_gamma(1.5).unwrap() - ln_gamma(2.0).unwrap() + 2000.0 + 0.5 * 2000f64.ln();
        assert!((l - lead).abs() < 1e-3);
    }
}
