//! Unit-mean κ-μ shadowed fading power.
//!
//! A power g with parameters (κ, μ, m) has moment generating function
//! E[e^{sg}] = (1 - θ₁ s)^{m-μ} (1 - θ₂ s)^{-m}, with θ₁ = 1/(μ(1+κ)) and
//! θ₂ = (μκ+m)/(μ(1+κ)m). `m = ∞` is the κ-μ law and is carried as
//! `f64::INFINITY`, never as a large finite number.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};

use crate::error::{Error, Result};
use crate::specfun::quad::{integrate, integrate_to_infinity};
use crate::specfun::{ln_gamma, ln_kummer_1f1, phi2_scaled, PrecisionPolicy};

/// (κ, μ, m) of one κ-μ shadowed power with unit mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowedFadingParams {
    kappa: f64,
    mu: f64,
    m: f64,
}

impl ShadowedFadingParams {
    /// `kappa` may be `INFINITY` (only the dominant component survives) and
    /// `m` may be `INFINITY` (no shadowing).
    pub fn new(kappa: f64, mu: f64, m: f64) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(Error::InvalidParameter(format!("kappa must be >= 0, got {kappa}")));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be > 0 and finite, got {mu}")));
        }
        if !(m > 0.0) {
            return Err(Error::InvalidParameter(format!("m must be > 0, got {m}")));
        }
        Ok(Self { kappa, mu, m })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn theta1(&self) -> f64 {
        1.0 / (self.mu * (1.0 + self.kappa))
    }

    pub fn theta2(&self) -> f64 {
        if self.m.is_infinite() {
            return self.theta1();
        }
        (self.mu * self.kappa + self.m) / (self.mu * (1.0 + self.kappa) * self.m)
    }

    /// The closest named special case.
    pub fn classify(&self) -> SpecialCaseTag {
        if self.kappa.is_infinite() {
            return if self.m.is_infinite() {
                SpecialCaseTag::NoFading
            } else {
                SpecialCaseTag::Nakagami(self.m)
            };
        }
        if self.kappa == 0.0 {
            return if self.mu == 1.0 {
                SpecialCaseTag::Rayleigh
            } else {
                SpecialCaseTag::Nakagami(self.mu)
            };
        }
        if self.m.is_infinite() {
            return if self.mu == 1.0 {
                SpecialCaseTag::Rician(self.kappa)
            } else {
                SpecialCaseTag::KappaMu { kappa: self.kappa, mu: self.mu }
            };
        }
        SpecialCaseTag::KappaMuShadowed {
            kappa: self.kappa,
            mu: self.mu,
            m: self.m,
        }
    }

    /// The same law written with finite exponents: (a, b, μ', m') with
    /// E[e^{sg}] = (1 - s/a)^{m'-μ'} (1 - s/b)^{-m'}.
    ///
    /// κ = 0 makes m irrelevant and is mapped to m' = μ. A κ-μ law with κ > 0
    /// has no such form and gives `None`, as does κ = ∞.
    pub(crate) fn rational_mgf(&self) -> Option<(f64, f64, f64, f64)> {
        if self.kappa.is_infinite() {
            return None;
        }
        if self.kappa == 0.0 {
            return Some((self.mu, self.mu, self.mu, self.mu));
        }
        if self.m.is_infinite() {
            return None;
        }
        Some((1.0 / self.theta1(), 1.0 / self.theta2(), self.mu, self.m))
    }
}

/// Named special cases of the κ-μ shadowed law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpecialCaseTag {
    KappaMuShadowed { kappa: f64, mu: f64, m: f64 },
    KappaMu { kappa: f64, mu: f64 },
    Rician(f64),
    Nakagami(f64),
    Rayleigh,
    /// Rician with K → ∞: the power is identically 1.
    NoFading,
}

/// Parameter triple of a named special case.
pub fn special_case_params(tag: SpecialCaseTag) -> ShadowedFadingParams {
    let (kappa, mu, m) = match tag {
        SpecialCaseTag::KappaMuShadowed { kappa, mu, m } => (kappa, mu, m),
        SpecialCaseTag::KappaMu { kappa, mu } => (kappa, mu, f64::INFINITY),
        SpecialCaseTag::Rician(k) => (k, 1.0, f64::INFINITY),
        SpecialCaseTag::Nakagami(m) => (0.0, m, f64::INFINITY),
        SpecialCaseTag::Rayleigh => (0.0, 1.0, f64::INFINITY),
        SpecialCaseTag::NoFading => (f64::INFINITY, 1.0, f64::INFINITY),
    };
    ShadowedFadingParams { kappa, mu, m }
}

/// Fading parameters of the L interferers.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererProfile {
    entries: Vec<ShadowedFadingParams>,
}

impl InterfererProfile {
    pub fn new(entries: Vec<ShadowedFadingParams>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("at least one interferer is required".into()));
        }
        Ok(Self { entries })
    }

    pub fn iid(params: ShadowedFadingParams, count: usize) -> Result<Self> {
        Self::new(vec![params; count])
    }

    pub fn entries(&self) -> &[ShadowedFadingParams] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_iid(&self) -> bool {
        self.entries.iter().all(|e| *e == self.entries[0])
    }
}

/// Density of the unit-mean κ-μ shadowed power at x.
pub fn power_pdf(p: &ShadowedFadingParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("power_pdf", format!("x must be >= 0, got {x}")));
    }
    if p.kappa.is_infinite() {
        if p.m.is_infinite() {
            return Err(Error::Unsupported("the no-fading power is a point mass and has no density".into()));
        }
        return Ok(gamma_pdf(p.m, 1.0 / p.m, x));
    }
    if p.kappa == 0.0 {
        return Ok(gamma_pdf(p.mu, 1.0 / p.mu, x));
    }
    let (mu, th1) = (p.mu, p.theta1());
    if x == 0.0 {
        return Ok(origin_value(mu, 0.0));
    }
    let policy = PrecisionPolicy::default();
    let ln = if p.m.is_infinite() {
        // e^{-μκ} x^{μ-1} e^{-x/θ₁} / (θ₁^μ Γ(μ)) · ₀F₁(; μ; μκx/θ₁)
        -mu * p.kappa + (mu - 1.0) * x.ln() - x / th1 - mu * th1.ln() - ln_gamma(mu)?
            + ln_hyp0f1(mu, mu * p.kappa * x / th1)
    } else {
        let (m, th2) = (p.m, p.theta2());
        let (ln_m, _) = ln_kummer_1f1(m, mu, (th2 - th1) * x / (th1 * th2), &policy)?;
        (m - mu) * th1.ln() - m * th2.ln() + (mu - 1.0) * x.ln() - ln_gamma(mu)? - x / th1 + ln_m
    };
    Ok(ln.exp())
}

fn gamma_pdf(shape: f64, scale: f64, x: f64) -> f64 {
    if x == 0.0 {
        return origin_value(shape, -shape * scale.ln() - statrs::function::gamma::ln_gamma(shape));
    }
    let ln = (shape - 1.0) * x.ln() - x / scale - shape * scale.ln() - statrs::function::gamma::ln_gamma(shape);
    ln.exp()
}

/// Density at 0 when it behaves like C x^{μ-1}; `ln_c` is only used for μ = 1.
fn origin_value(mu: f64, ln_c: f64) -> f64 {
    if mu > 1.0 {
        0.0
    } else if mu < 1.0 {
        f64::INFINITY
    } else {
        ln_c.exp()
    }
}

/// ln ₀F₁(; b; w) for b > 0, w ≥ 0.
fn ln_hyp0f1(b: f64, w: f64) -> f64 {
    const RESCALE: f64 = 1e280;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut ln_scale = 0.0;
    let mut n = 0.0;
    loop {
        term *= w / ((b + n) * (n + 1.0));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        n += 1.0;
        if n * n > w && term <= 1e-17 * sum {
            return sum.ln() + ln_scale;
        }
    }
}

/// Density of the sum of independent interferer powers at x.
///
/// The sum of L powers with rational MGFs has density
/// x^{Σμ-1}/Γ(Σμ) Π a_l^{μ_l-m_l} b_l^{m_l} · Φ₂(μ_l-m_l…, m_l…; Σμ; -a_l x…, -b_l x…).
/// κ-μ entries with κ > 0 and m = ∞ have no such form and are rejected.
pub fn sum_power_pdf(profile: &InterfererProfile, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("sum_power_pdf", format!("x must be >= 0, got {x}")));
    }
    if profile.len() == 1 {
        return power_pdf(&profile.entries[0], x);
    }
    let forms = profile
        .entries
        .iter()
        .map(|e| {
            e.rational_mgf().ok_or_else(|| {
                Error::Unsupported(format!(
                    "sum density needs finite m or kappa = 0, got (kappa, mu, m) = ({}, {}, {})",
                    e.kappa, e.mu, e.m
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let total_mu: f64 = forms.iter().map(|f| f.2).sum();
    if x == 0.0 {
        let ln_c = forms
            .iter()
            .map(|&(a, b, mu, m)| (mu - m) * a.ln() + m * b.ln())
            .sum::<f64>()
            - ln_gamma(total_mu)?;
        return Ok(origin_value(total_mu, ln_c));
    }
    let mut params = Vec::with_capacity(2 * forms.len());
    let mut args = Vec::with_capacity(2 * forms.len());
    let mut ln_pref = (total_mu - 1.0) * x.ln() - ln_gamma(total_mu)?;
    for &(a, _, mu, m) in &forms {
        params.push(mu - m);
        args.push(-a * x);
        ln_pref += (mu - m) * a.ln();
    }
    for &(_, b, _, m) in &forms {
        params.push(m);
        args.push(-b * x);
        ln_pref += m * b.ln();
    }
    let (mant, ln_s) = phi2_scaled(&params, total_mu, &args, policy)?;
    Ok(mant * (ln_s + ln_pref).exp())
}

/// ∫_0^∞ h(x) f(x) dx for the power density f, by adaptive quadrature.
pub fn power_expectation<H>(p: &ShadowedFadingParams, mut h: H, policy: &PrecisionPolicy) -> Result<f64>
where
    H: FnMut(f64) -> f64,
{
    let head = power_head_integral(p, 1.0, &mut h, policy)?;
    let scale = tail_scale(p);
    let tail = integrate_to_infinity(|x| Ok(h(x) * power_pdf(p, x)?), 1.0, scale, policy)?;
    Ok(head + tail.value)
}

/// P(g ≤ x), by adaptive quadrature of the density.
pub fn power_cdf(p: &ShadowedFadingParams, x: f64, policy: &PrecisionPolicy) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain("power_cdf", format!("x must be >= 0, got {x}")));
    }
    if p.kappa.is_infinite() && p.m.is_infinite() {
        return Ok(if x >= 1.0 { 1.0 } else { 0.0 });
    }
    if x.is_infinite() {
        return power_expectation(p, |_| 1.0, policy);
    }
    let head = power_head_integral(p, x.min(1.0), &mut |_| 1.0, policy)?;
    if x <= 1.0 {
        return Ok(head);
    }
    let rest = integrate(|t| power_pdf(p, t), 1.0, x, 1e-3 * policy.rel_tol, policy)?;
    Ok(head + rest.value)
}

/// ∫_0^upper h f with x = u^{1/μ}, which removes the x^{μ-1} endpoint behaviour.
fn power_head_integral<H>(p: &ShadowedFadingParams, upper: f64, h: &mut H, policy: &PrecisionPolicy) -> Result<f64>
where
    H: FnMut(f64) -> f64,
{
    let shape = if p.kappa.is_infinite() { p.m } else { p.mu };
    let inv = 1.0 / shape;
    let r = integrate(
        |u: f64| {
            let x = u.powf(inv);
            if x == 0.0 {
                return Ok(0.0);
            }
            Ok(h(x) * power_pdf(p, x)? * inv * x / u)
        },
        0.0,
        upper.powf(shape),
        1e-3 * policy.rel_tol,
        policy,
    )?;
    Ok(r.value)
}

/// Decay length of the density's tail.
fn tail_scale(p: &ShadowedFadingParams) -> f64 {
    if p.kappa.is_infinite() {
        return 1.0;
    }
    let shape = if p.m.is_finite() { p.m.max(p.mu) } else { p.mu * (1.0 + p.kappa) };
    (p.theta2() * shape).max(p.theta1()).clamp(0.05, 1.0)
}

/// One draw of the power by the gamma mixture: w ~ Gamma(m, 1/m) shadows the
/// dominant power, N ~ Poisson(wκμ) counts dominant quanta, and
/// g = θ₁ · Gamma(μ + N, 1). Valid for every μ > 0.
pub fn sample_power<R: Rng + ?Sized>(p: &ShadowedFadingParams, rng: &mut R) -> f64 {
    if p.kappa.is_infinite() {
        return if p.m.is_infinite() { 1.0 } else { draw_gamma(p.m, 1.0 / p.m, rng) };
    }
    let w = if p.m.is_infinite() { 1.0 } else { draw_gamma(p.m, 1.0 / p.m, rng) };
    let rate = w * p.kappa * p.mu;
    let n = if rate > 0.0 {
        Poisson::new(rate).expect("positive finite rate").sample(rng)
    } else {
        0.0
    };
    p.theta1() * draw_gamma(p.mu + n, 1.0, rng)
}

/// One draw by the cluster construction: μ clusters of complex Gaussian
/// scattering plus a dominant component scaled by a Nakagami-m amplitude.
/// Needs an integer μ.
pub fn sample_power_physical<R: Rng + ?Sized>(p: &ShadowedFadingParams, rng: &mut R) -> Result<f64> {
    if p.mu != p.mu.round() {
        return Err(Error::Unsupported(format!(
            "cluster construction needs an integer mu, got {}",
            p.mu
        )));
    }
    if p.kappa.is_infinite() {
        return Ok(sample_power(p, rng));
    }
    let clusters = p.mu as usize;
    let w = if p.m.is_infinite() { 1.0 } else { draw_gamma(p.m, 1.0 / p.m, rng) };
    let xi = w.sqrt();
    let sigma = (p.theta1() / 2.0).sqrt();
    let dominant = (p.kappa / ((1.0 + p.kappa) * p.mu)).sqrt();
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let mut power = 0.0;
    for _ in 0..clusters {
        let re = normal.sample(rng) + xi * dominant;
        let im = normal.sample(rng);
        power += re * re + im * im;
    }
    Ok(power)
}

fn draw_gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    Gamma::new(shape, scale).expect("positive shape").sample(rng)
}
