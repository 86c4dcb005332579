//! Closed-form EVM.
//!
//! With unit symbol energy and equalisation by the desired channel, the EVM
//! of a long block is √((g_I + σ²)/g_d), so its mean over the fading factors
//! into
//!
//!   EVM = E[√(g_I + σ²)] · E[g_d^{-1/2}] = J · D.
//!
//! Each formula below evaluates one published closed form for D·J. The
//! desired-link factor D is finite only when the desired cluster parameter
//! exceeds 1/2.

use std::fmt;

use crate::error::{Error, Result};
use crate::fading::{InterfererProfile, ShadowedFadingParams, SpecialCaseTag};
use crate::specfun::gamma_ratio;
use crate::specfun::{
    gauss_2f1, kummer_1f1, lauricella_fd, ln_gamma, tricomi_u_scaled, FdArguments, PrecisionPolicy,
};

/// Desired link, interferers and noise variance. Symbol energy is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct EvmScenario {
    pub desired: ShadowedFadingParams,
    pub interferers: InterfererProfile,
    /// σ²; zero means interference-limited.
    pub noise_variance: f64,
}

impl EvmScenario {
    pub fn new(desired: ShadowedFadingParams, interferers: InterfererProfile, noise_variance: f64) -> Result<Self> {
        if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be finite and >= 0, got {noise_variance}"
            )));
        }
        Ok(Self {
            desired,
            interferers,
            noise_variance,
        })
    }

    pub fn interference_limited(desired: ShadowedFadingParams, interferers: InterfererProfile) -> Self {
        Self {
            desired,
            interferers,
            noise_variance: 0.0,
        }
    }
}

/// The closed form that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    InidShadowed,
    IidShadowed,
    IidKappaMu,
    IidRician,
    IidNakagami,
    RayleighInterferenceLimited,
    NoFading,
    NoiseShadowed,
    NoiseKappaMu,
    NoiseRician,
    NoiseNakagami,
    NoiseRayleigh,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::InidShadowed => "inid_shadowed",
            Formula::IidShadowed => "iid_shadowed",
            Formula::IidKappaMu => "iid_kappa_mu",
            Formula::IidRician => "iid_rician",
            Formula::IidNakagami => "iid_nakagami",
            Formula::RayleighInterferenceLimited => "rayleigh_interference_limited",
            Formula::NoFading => "no_fading",
            Formula::NoiseShadowed => "noise_shadowed",
            Formula::NoiseKappaMu => "noise_kappa_mu",
            Formula::NoiseRician => "noise_rician",
            Formula::NoiseNakagami => "noise_nakagami",
            Formula::NoiseRayleigh => "noise_rayleigh",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvmResult {
    pub value: f64,
    pub formula_used: Formula,
    pub diagnostics: Vec<String>,
}

impl EvmResult {
    fn new(value: f64, formula_used: Formula) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::precision(
                "evm",
                format!("{formula_used} produced a non-finite or non-positive value"),
                value,
            ));
        }
        Ok(Self {
            value,
            formula_used,
            diagnostics: Vec::new(),
        })
    }

    fn note(mut self, msg: impl Into<String>) -> Self {
        self.diagnostics.push(msg.into());
        self
    }
}

/// Picks the most specific closed form for the scenario and evaluates it.
pub fn evaluate(s: &EvmScenario, policy: &PrecisionPolicy) -> Result<EvmResult> {
    policy.validate()?;
    if s.noise_variance > 0.0 {
        return evaluate_with_noise(s, policy);
    }
    let prof = &s.interferers;
    let l = prof.len();
    if !prof.is_iid() {
        return evm_inid_shadowed(s, policy);
    }
    let d = s.desired.classify();
    let i = prof.entries()[0].classify();
    use SpecialCaseTag as T;
    match (d, i) {
        (T::NoFading, T::NoFading) => EvmResult::new(evm_no_fading_limit(l), Formula::NoFading),
        (T::Rayleigh, T::Rayleigh) => EvmResult::new(evm_rayleigh(l), Formula::RayleighInterferenceLimited),
        (T::Rayleigh | T::Nakagami(_), T::Rayleigh | T::Nakagami(_)) => {
            evm_iid_nakagami(nakagami_shape(d), nakagami_shape(i), l)
        }
        (T::Rayleigh | T::Rician(_) | T::NoFading, T::Rayleigh | T::Rician(_) | T::NoFading) => {
            evm_iid_rician(rician_k(d), rician_k(i), l)
        }
        _ if s.desired.m().is_infinite() && prof.entries()[0].m().is_infinite() => evm_iid_kappamu(s),
        _ => evm_iid_shadowed(s, policy),
    }
}

fn evaluate_with_noise(s: &EvmScenario, policy: &PrecisionPolicy) -> Result<EvmResult> {
    let m_i = noise_interferer_shape(&s.interferers)?;
    let l = s.interferers.len();
    let sigma2 = s.noise_variance;
    let v = match s.desired.classify() {
        SpecialCaseTag::Rayleigh if m_i == 1.0 => {
            EvmResult::new(evm_noise_rayleigh(l, sigma2)?, Formula::NoiseRayleigh)
        }
        SpecialCaseTag::Rayleigh => EvmResult::new(evm_noise_nakagami(1.0, m_i, l, sigma2)?, Formula::NoiseNakagami),
        SpecialCaseTag::Nakagami(m) => EvmResult::new(evm_noise_nakagami(m, m_i, l, sigma2)?, Formula::NoiseNakagami),
        SpecialCaseTag::Rician(k) => EvmResult::new(evm_noise_rician(k, m_i, l, sigma2)?, Formula::NoiseRician),
        SpecialCaseTag::KappaMu { .. } => evm_noise_kappamu(s, policy),
        SpecialCaseTag::KappaMuShadowed { .. } => evm_noise_shadowed(s, policy),
        SpecialCaseTag::NoFading => Err(Error::Unsupported(
            "no closed form for an unfaded desired link with noise".into(),
        )),
    }?;
    Ok(v)
}

fn nakagami_shape(t: SpecialCaseTag) -> f64 {
    match t {
        SpecialCaseTag::Nakagami(m) => m,
        _ => 1.0,
    }
}

fn rician_k(t: SpecialCaseTag) -> f64 {
    match t {
        SpecialCaseTag::Rician(k) => k,
        SpecialCaseTag::NoFading => f64::INFINITY,
        _ => 0.0,
    }
}

/// Shape m_I of i.i.d. Nakagami interferers, as the noise formulas require.
fn noise_interferer_shape(prof: &InterfererProfile) -> Result<f64> {
    let unsupported = || {
        Error::Unsupported(
            "with noise, a closed form exists only for i.i.d. Nakagami-m interferers; use Monte Carlo".into(),
        )
    };
    if !prof.is_iid() {
        return Err(unsupported());
    }
    match prof.entries()[0].classify() {
        SpecialCaseTag::Rayleigh => Ok(1.0),
        SpecialCaseTag::Nakagami(m) => Ok(m),
        _ => Err(unsupported()),
    }
}

fn require_interference_limited(s: &EvmScenario, what: &str) -> Result<()> {
    if s.noise_variance != 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{what} is an interference-limited formula but the noise variance is {}",
            s.noise_variance
        )));
    }
    Ok(())
}

fn require_noise(sigma2: f64) -> Result<()> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise formulas need a positive noise variance, got {sigma2}; use the interference-limited path"
        )));
    }
    Ok(())
}

fn require_convergent(mu: f64) -> Result<()> {
    if !(mu > 0.5) {
        return Err(Error::Divergence { mu });
    }
    Ok(())
}

fn require_count(l: usize) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidParameter("at least one interferer is required".into()));
    }
    Ok(())
}

fn gamma_ratio_half(x: f64) -> Result<f64> {
    // Γ(x + 1/2)/Γ(x)
    gamma_ratio(x + 0.5, x)
}

fn gamma_ratio_minus_half(x: f64) -> Result<f64> {
    // Γ(x - 1/2)/Γ(x)
    gamma_ratio(x - 0.5, x)
}

/// D for a κ-μ shadowed desired link:
/// √(μ(1+κ)) Γ(μ-½)/Γ(μ) (m/(μκ+m))^m ₂F₁(μ-½, m; μ; μκ/(μκ+m)).
fn desired_shadowed(p: &ShadowedFadingParams) -> Result<f64> {
    let (k, mu, m) = shadowed_triple(p);
    require_convergent(mu)?;
    if k.is_infinite() || m.is_infinite() {
        return Err(Error::InvalidParameter("shadowed formula needs finite kappa and m".into()));
    }
    let z = mu * k / (mu * k + m);
    let f = if z == 0.0 { 1.0 } else { gauss_2f1(mu - 0.5, m, mu, z)? };
    Ok((mu * (1.0 + k)).sqrt() * gamma_ratio_minus_half(mu)? * (m * (-z).ln_1p()).exp() * f)
}

/// (κ, μ, m) with the Nakagami-equivalent laws (κ = 0, or κ = ∞ with m
/// finite) rewritten as κ = 0, μ = m.
fn shadowed_triple(p: &ShadowedFadingParams) -> (f64, f64, f64) {
    match (p.kappa(), p.m()) {
        (k, m) if k.is_infinite() && m.is_finite() => (0.0, m, m),
        (0.0, _) => (0.0, p.mu(), p.mu()),
        (k, m) => (k, p.mu(), m),
    }
}

/// D for a κ-μ desired link: √(μ(1+κ)) Γ(μ-½)/Γ(μ) ₁F₁(½; μ; -κμ).
fn desired_kappamu(kappa: f64, mu: f64) -> Result<f64> {
    require_convergent(mu)?;
    if kappa.is_infinite() {
        return Ok(1.0);
    }
    Ok((mu * (1.0 + kappa)).sqrt() * gamma_ratio_minus_half(mu)? * kummer_1f1(0.5, mu, -kappa * mu)?)
}

/// J for i.n.i.d. κ-μ shadowed interferers.
///
/// With a_l = 1/θ_{1l}, b_l = 1/θ_{2l} and anchor a₁ = min a_l,
/// J = Π a_l^{μ_l-m_l} b_l^{m_l} Γ(Σμ+½) / (Γ(Σμ) a₁^{Σμ+½})
///     · F_D(Σμ+½; μ_2-m_2…μ_L-m_L, m_1…m_L; Σμ; 1-a_2/a₁…, 1-b_1/a₁…).
fn interferer_inid(prof: &InterfererProfile, policy: &PrecisionPolicy) -> Result<(f64, usize)> {
    let mut forms = Vec::with_capacity(prof.len());
    for e in prof.entries() {
        let f = e.rational_mgf().ok_or_else(|| {
            Error::Unsupported(format!(
                "no Lauricella form for interferer (kappa, mu, m) = ({}, {}, {}): \
                 kappa-mu interferers with kappa > 0 need m finite",
                e.kappa(),
                e.mu(),
                e.m()
            ))
        })?;
        forms.push(f);
    }
    // anchor on the largest θ₁, i.e. the smallest a, so every a-argument is ≤ 0
    forms.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let a1 = forms[0].0;
    let total_mu: f64 = forms.iter().map(|f| f.2).sum();
    let mut ln_pref = ln_gamma(total_mu + 0.5)? - ln_gamma(total_mu)? - (total_mu + 0.5) * a1.ln();
    for &(a, b, mu, m) in &forms {
        ln_pref += (mu - m) * a.ln() + m * b.ln();
    }
    // (β, x) pairs; zero β or zero x contribute nothing and equal x merge exactly
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let mut push = |beta: f64, x: f64| {
        if beta == 0.0 || x == 0.0 {
            return;
        }
        if let Some(p) = pairs.iter_mut().find(|p| p.1 == x) {
            p.0 += beta;
        } else {
            pairs.push((beta, x));
        }
    };
    for &(a, _, mu, m) in &forms[1..] {
        push(mu - m, 1.0 - a / a1);
    }
    for &(_, b, _, m) in &forms {
        push(m, 1.0 - b / a1);
    }
    pairs.retain(|p| p.0 != 0.0);
    let dim = pairs.len();
    let fd = if dim == 0 {
        1.0
    } else {
        let args = FdArguments::new(
            total_mu + 0.5,
            pairs.iter().map(|p| p.0).collect(),
            total_mu,
            pairs.iter().map(|p| p.1).collect(),
        )?;
        lauricella_fd(&args, policy)?
    };
    Ok((ln_pref.exp() * fd, dim))
}

/// J for L i.i.d. κ-μ shadowed interferers:
/// √θ_{1I} Γ(Lμ_I+½)/Γ(Lμ_I) (θ_{1I}/θ_{2I})^{Lm_I} ₂F₁(Lμ_I+½, Lm_I; Lμ_I; μ_Iκ_I/(μ_Iκ_I+m_I)).
fn interferer_iid_shadowed(p: &ShadowedFadingParams, l: usize) -> Result<f64> {
    let (k, mu, m) = shadowed_triple(p);
    if k.is_infinite() || m.is_infinite() {
        return Err(Error::InvalidParameter("shadowed formula needs finite kappa and m".into()));
    }
    let lf = l as f64;
    let z = mu * k / (mu * k + m);
    let f = if z == 0.0 { 1.0 } else { gauss_2f1(lf * mu + 0.5, lf * m, lf * mu, z)? };
    Ok((1.0 / (mu * (1.0 + k))).sqrt() * gamma_ratio_half(lf * mu)? * (lf * m * (-z).ln_1p()).exp() * f)
}

/// J for L i.i.d. κ-μ interferers: Γ(Lμ_I+½)/Γ(Lμ_I) ₁F₁(-½; Lμ_I; -Lκ_Iμ_I)/√(μ_I(1+κ_I)).
fn interferer_kappamu(kappa: f64, mu: f64, l: usize) -> Result<f64> {
    let lf = l as f64;
    if kappa.is_infinite() {
        return Ok(lf.sqrt());
    }
    Ok(gamma_ratio_half(lf * mu)? * kummer_1f1(-0.5, lf * mu, -lf * kappa * mu)? / (mu * (1.0 + kappa)).sqrt())
}

/// J with noise and L i.i.d. Nakagami-m_I interferers:
/// (σ²)^{m_I L+½} m_I^{m_I L} U(m_I L, m_I L + 3/2, σ² m_I).
fn interferer_noise(m_i: f64, l: usize, sigma2: f64, policy: &PrecisionPolicy) -> Result<f64> {
    require_noise(sigma2)?;
    if !(m_i > 0.0) {
        return Err(Error::InvalidParameter(format!("m_I must be > 0, got {m_i}")));
    }
    let a = m_i * l as f64;
    Ok(sigma2.sqrt() * tricomi_u_scaled(a, a + 1.5, sigma2 * m_i, policy)?)
}

/// Interference-limited EVM for i.n.i.d. κ-μ shadowed interferers and a
/// κ-μ shadowed desired link, through the Lauricella F_D.
///
/// Interferers are sorted by decreasing θ₁ before anchoring, so the value
/// does not depend on their order. κ = 0 entries are exact with m = μ.
pub fn evm_inid_shadowed(s: &EvmScenario, policy: &PrecisionPolicy) -> Result<EvmResult> {
    require_interference_limited(s, "evm_inid_shadowed")?;
    let d = desired_any(&s.desired)?;
    let (j, dim) = interferer_inid(&s.interferers, policy)?;
    Ok(EvmResult::new(d * j, Formula::InidShadowed)?.note(format!("F_D dimension {dim}")))
}

/// D for any desired law with a finite closed form.
fn desired_any(p: &ShadowedFadingParams) -> Result<f64> {
    match p.classify() {
        SpecialCaseTag::NoFading => Ok(1.0),
        SpecialCaseTag::Nakagami(m) if p.kappa().is_infinite() => {
            require_convergent(m)?;
            Ok(m.sqrt() * gamma_ratio_minus_half(m)?)
        }
        _ if p.kappa() == 0.0 => {
            require_convergent(p.mu())?;
            Ok(p.mu().sqrt() * gamma_ratio_minus_half(p.mu())?)
        }
        _ if p.m().is_infinite() => desired_kappamu(p.kappa(), p.mu()),
        _ => desired_shadowed(p),
    }
}

/// Interference-limited EVM, i.i.d. κ-μ shadowed interferers.
pub fn evm_iid_shadowed(s: &EvmScenario, _policy: &PrecisionPolicy) -> Result<EvmResult> {
    require_interference_limited(s, "evm_iid_shadowed")?;
    if !s.interferers.is_iid() {
        return Err(Error::InvalidParameter("evm_iid_shadowed needs identical interferers".into()));
    }
    let i = &s.interferers.entries()[0];
    let d = desired_any(&s.desired)?;
    let j = interferer_iid_shadowed(i, s.interferers.len())?;
    EvmResult::new(d * j, Formula::IidShadowed)
}

/// Interference-limited EVM, κ-μ desired link and i.i.d. κ-μ interferers:
/// Γ(μ-½)Γ(Lμ_I+½)/(Γ(μ)Γ(Lμ_I)) ₁F₁(½; μ; -κμ) ₁F₁(-½; Lμ_I; -Lκ_Iμ_I) √(μ(1+κ)/(μ_I(1+κ_I))).
pub fn evm_iid_kappamu(s: &EvmScenario) -> Result<EvmResult> {
    require_interference_limited(s, "evm_iid_kappamu")?;
    if !s.interferers.is_iid() {
        return Err(Error::InvalidParameter("evm_iid_kappamu needs identical interferers".into()));
    }
    let i = &s.interferers.entries()[0];
    if s.desired.m().is_finite() || i.m().is_finite() {
        return Err(Error::InvalidParameter("evm_iid_kappamu needs m = m_I = inf".into()));
    }
    let d = desired_kappamu(s.desired.kappa(), s.desired.mu())?;
    let j = interferer_kappamu(i.kappa(), i.mu(), s.interferers.len())?;
    EvmResult::new(d * j, Formula::IidKappaMu)
}

/// Interference-limited EVM with Rician desired link (K) and L i.i.d.
/// Rician interferers (K_I):
/// √π Γ(L+½)/Γ(L) ₁F₁(½; 1; -K) ₁F₁(-½; L; -LK_I) √((1+K)/(1+K_I)).
/// Infinite K or K_I are the no-fading limits.
pub fn evm_iid_rician(k: f64, k_i: f64, l: usize) -> Result<EvmResult> {
    require_count(l)?;
    if !(k >= 0.0 && k_i >= 0.0) {
        return Err(Error::InvalidParameter(format!("K and K_I must be >= 0, got {k}, {k_i}")));
    }
    let d = desired_kappamu(k, 1.0)?;
    let j = interferer_kappamu(k_i, 1.0, l)?;
    EvmResult::new(d * j, Formula::IidRician)
}

/// Interference-limited EVM, Nakagami-m desired link and L i.i.d.
/// Nakagami-m_I interferers: Γ(m-½)Γ(Lm_I+½)/(Γ(m)Γ(Lm_I)) √(m/m_I).
pub fn evm_iid_nakagami(m: f64, m_i: f64, l: usize) -> Result<EvmResult> {
    require_count(l)?;
    require_convergent(m)?;
    if !(m_i > 0.0 && m_i.is_finite()) {
        return Err(Error::InvalidParameter(format!("m_I must be > 0, got {m_i}")));
    }
    let lm = l as f64 * m_i;
    let v = (ln_gamma(m - 0.5)? + ln_gamma(lm + 0.5)? - ln_gamma(m)? - ln_gamma(lm)?).exp() * (m / m_i).sqrt();
    EvmResult::new(v, Formula::IidNakagami)
}

/// EVM with no fading on any link: √L.
pub fn evm_no_fading_limit(l: usize) -> f64 {
    (l as f64).sqrt()
}

/// Interference-limited Rayleigh/Rayleigh EVM: √π Γ(L+½)/Γ(L).
pub fn evm_rayleigh(l: usize) -> f64 {
    let lf = l as f64;
    std::f64::consts::PI.sqrt() * (statrs::function::gamma::ln_gamma(lf + 0.5) - statrs::function::gamma::ln_gamma(lf)).exp()
}

/// Large-L form of the Rayleigh/Rayleigh EVM: √(πL) (1 - 1/(8L)).
pub fn evm_rayleigh_large_l(l: usize) -> f64 {
    let lf = l as f64;
    (std::f64::consts::PI * lf).sqrt() * (1.0 - 1.0 / (8.0 * lf))
}

/// Large-m form of the Nakagami EVM: (1 + 3/(8m)) √L (1 - 1/(8 L m_I)).
pub fn evm_nakagami_large_m(m: f64, m_i: f64, l: usize) -> f64 {
    let lf = l as f64;
    (1.0 + 3.0 / (8.0 * m)) * lf.sqrt() * (1.0 - 1.0 / (8.0 * lf * m_i))
}

/// EVM with noise, κ-μ shadowed desired link and i.i.d. Nakagami-m_I interferers:
/// (σ²)^{m_I L+½} U(m_I L, 3/2+m_I L, σ² m_I) √(μ(1+κ)) m_I^{m_I L}
///   (m/(μκ+m))^m Γ(μ-½)/Γ(μ) ₂F₁(μ-½, m; μ; μκ/(m+μκ)).
pub fn evm_noise_shadowed(s: &EvmScenario, policy: &PrecisionPolicy) -> Result<EvmResult> {
    require_noise(s.noise_variance)?;
    let m_i = noise_interferer_shape(&s.interferers)?;
    let d = desired_shadowed(&s.desired)?;
    let j = interferer_noise(m_i, s.interferers.len(), s.noise_variance, policy)?;
    EvmResult::new(d * j, Formula::NoiseShadowed)
}

/// EVM with noise, κ-μ desired link and i.i.d. Nakagami-m_I interferers:
/// (σ²)^{m_I L+½} U(m_I L, 3/2+m_I L, σ² m_I) √(μ(1+κ)) Γ(μ-½)/Γ(μ) ₁F₁(½; μ; -κμ) m_I^{m_I L}.
pub fn evm_noise_kappamu(s: &EvmScenario, policy: &PrecisionPolicy) -> Result<EvmResult> {
    require_noise(s.noise_variance)?;
    if s.desired.m().is_finite() {
        return Err(Error::InvalidParameter("evm_noise_kappamu needs m = inf".into()));
    }
    let m_i = noise_interferer_shape(&s.interferers)?;
    let d = desired_kappamu(s.desired.kappa(), s.desired.mu())?;
    let j = interferer_noise(m_i, s.interferers.len(), s.noise_variance, policy)?;
    EvmResult::new(d * j, Formula::NoiseKappaMu)
}

/// EVM with noise, Rician desired link and i.i.d. Nakagami-m_I interferers:
/// (σ²)^{m_I L+½} U(m_I L, 3/2+m_I L, σ² m_I) √(π(1+K)) ₁F₁(½; 1; -K) m_I^{m_I L}.
pub fn evm_noise_rician(k: f64, m_i: f64, l: usize, sigma2: f64) -> Result<f64> {
    require_count(l)?;
    let d = desired_kappamu(k, 1.0)?;
    Ok(d * interferer_noise(m_i, l, sigma2, &PrecisionPolicy::default())?)
}

/// EVM with noise, Nakagami-m desired link and i.i.d. Nakagami-m_I interferers:
/// (σ² m_I)^{m_I L} U(m_I L, 3/2+m_I L, σ² m_I) (mσ²)^{½} Γ(m-½)/Γ(m).
pub fn evm_noise_nakagami(m: f64, m_i: f64, l: usize, sigma2: f64) -> Result<f64> {
    require_count(l)?;
    require_convergent(m)?;
    let d = m.sqrt() * gamma_ratio_minus_half(m)?;
    Ok(d * interferer_noise(m_i, l, sigma2, &PrecisionPolicy::default())?)
}

/// EVM with noise, Rayleigh on every link: (σ²)^{L+½} U(L, 3/2+L, σ²) √π.
pub fn evm_noise_rayleigh(l: usize, sigma2: f64) -> Result<f64> {
    require_count(l)?;
    require_noise(sigma2)?;
    let a = l as f64;
    Ok(std::f64::consts::PI.sqrt()
        * sigma2.sqrt()
        * tricomi_u_scaled(a, a + 1.5, sigma2, &PrecisionPolicy::default())?)
}
