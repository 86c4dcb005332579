//! Confluent Lauricella Φ₂⁽ᴺ⁾ and Lauricella F_D⁽ᴺ⁾.
//!
//! Both are sums over multi-indices k ∈ ℕᴺ. Grouping the multi-indices by
//! total degree K turns them into one-dimensional series,
//!
//!   Φ₂(b; c; x) = Σ_K e_K(x) / (c)_K,
//!   F_D(a; b; c; x) = Σ_K (a)_K e_K(x) / (c)_K,
//!
//! where e_K = Σ_{|k|=K} Π (b_i)_{k_i} x_i^{k_i} / k_i! is the coefficient of
//! s^K in Π (1 - x_i s)^{-b_i}. The e_K satisfy a short linear recurrence,
//! so the cost is linear in the truncation degree instead of exponential in N.

use super::quad::gamma_average;
use super::{PrecisionPolicy, STOP_RUN};
use crate::error::{Error, Result};

/// Φ₂ arguments more negative than this are removed with the exponential
/// shift before summing.
const SHIFT_THRESHOLD: f64 = 1.0;

/// Stored e_K are divided down once they exceed this.
const E_RESCALE: f64 = 1e200;

/// Parameters of Φ₂⁽ᴺ⁾(b₁…b_N; c; x₁…x_N).
#[derive(Debug, Clone, PartialEq)]
pub struct Phi2Arguments {
    pub b: Vec<f64>,
    pub c: f64,
    pub x: Vec<f64>,
}

impl Phi2Arguments {
    pub fn new(b: Vec<f64>, c: f64, x: Vec<f64>) -> Result<Self> {
        let args = Self { b, c, x };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.len() != self.x.len() {
            return Err(Error::domain(
                "phi2_n",
                format!("{} parameters for {} arguments", self.b.len(), self.x.len()),
            ));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::domain("phi2_n", format!("c must be > 0, got {}", self.c)));
        }
        if self.b.iter().chain(&self.x).any(|v| !v.is_finite()) {
            return Err(Error::domain("phi2_n", "parameters and arguments must be finite"));
        }
        Ok(())
    }
}

/// Parameters of F_D⁽ᴺ⁾(a; b₁…b_N; c; x₁…x_N).
#[derive(Debug, Clone, PartialEq)]
pub struct FdArguments {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
    pub x: Vec<f64>,
}

impl FdArguments {
    pub fn new(a: f64, b: Vec<f64>, c: f64, x: Vec<f64>) -> Result<Self> {
        let args = Self { a, b, c, x };
        args.validate()?;
        Ok(args)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.len() != self.x.len() {
            return Err(Error::domain(
                "lauricella_fd",
                format!("{} parameters for {} arguments", self.b.len(), self.x.len()),
            ));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::domain("lauricella_fd", format!("a must be > 0, got {}", self.a)));
        }
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::domain("lauricella_fd", format!("c must be > 0, got {}", self.c)));
        }
        if self.b.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("lauricella_fd", "parameters must be finite"));
        }
        if let Some(bad) = self.x.iter().find(|v| !(**v < 1.0) || v.is_nan()) {
            return Err(Error::domain("lauricella_fd", format!("every x_i must be < 1, got {bad}")));
        }
        if self.x.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("lauricella_fd", "arguments must be finite"));
        }
        Ok(())
    }
}

/// Generates e_0, e_1, … for P(s) = Π (1 - y_i s)^{-b_i}. Values are
/// returned with the log of a common scale factor that grows when the stored
/// window is divided down.
///
/// With Q = Π (1 - y_i s) and R = Σ_i b_i y_i Π_{j≠i} (1 - y_j s), P solves
/// Q P' = R P, which gives an (N+1)-term recurrence and O(N) work per degree.
struct DegreeCoefficients {
    q: Vec<f64>,
    r: Vec<f64>,
    /// e_{K}, e_{K-1}, …, e_{K-N}; most recent first
    window: Vec<f64>,
    k: usize,
    ln_scale: f64,
    work: usize,
}

impl DegreeCoefficients {
    fn new(b: &[f64], y: &[f64]) -> Self {
        let n = y.len();
        let mut q = vec![1.0];
        for &yi in y {
            q = poly_mul_linear(&q, yi);
        }
        let mut r = vec![0.0; n.max(1)];
        for (i, (&bi, &yi)) in b.iter().zip(y).enumerate() {
            let mut part = vec![bi * yi];
            for (j, &yj) in y.iter().enumerate() {
                if j != i {
                    part = poly_mul_linear(&part, yj);
                }
            }
            for (dst, v) in r.iter_mut().zip(part) {
                *dst += v;
            }
        }
        Self {
            q,
            r,
            window: vec![0.0; n + 1],
            k: 0,
            ln_scale: 0.0,
            work: 0,
        }
    }

    /// Next e_K (scaled by e^{-ln_scale}) and the current ln_scale.
    fn next(&mut self) -> (f64, f64) {
        if self.k == 0 {
            self.window[0] = 1.0;
            self.k = 1;
            return (1.0, 0.0);
        }
        // computing e_{k} from e_{k-1} (window[0]) downwards
        let k = self.k;
        let mut acc = 0.0;
        for (n, &rn) in self.r.iter().enumerate() {
            if n < k {
                acc += rn * self.window[n];
            }
        }
        for (n, &qn) in self.q.iter().enumerate().skip(1) {
            if n <= k {
                acc -= qn * (k - n) as f64 * self.window[n - 1];
            }
        }
        let ek = acc / k as f64;
        self.window.rotate_right(1);
        self.window[0] = ek;
        self.work += self.q.len() + self.r.len();
        self.k += 1;
        if ek.abs() > E_RESCALE {
            for v in &mut self.window {
                *v /= E_RESCALE;
            }
            self.ln_scale += E_RESCALE.ln();
        }
        (self.window[0], self.ln_scale)
    }
}

/// p(s)·(1 - y s)
fn poly_mul_linear(p: &[f64], y: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= y * c;
    }
    out
}

/// Running sum of terms given as (sign·mantissa, ln scale).
struct LogSum {
    sum: f64,
    ln_scale: f64,
}

impl LogSum {
    fn new() -> Self {
        Self { sum: 0.0, ln_scale: f64::NEG_INFINITY }
    }

    /// Adds v·e^{ln_v}; returns the added term in the sum's own scale.
    fn add(&mut self, v: f64, ln_v: f64) -> f64 {
        if v == 0.0 {
            return 0.0;
        }
        if ln_v > self.ln_scale + 300.0 || self.ln_scale == f64::NEG_INFINITY {
            self.sum *= (self.ln_scale - ln_v).exp();
            if !self.sum.is_finite() {
                self.sum = 0.0;
            }
            self.ln_scale = ln_v;
        }
        let t = v * (ln_v - self.ln_scale).exp();
        self.sum += t;
        t
    }
}

/// Σ_K w_K e_K(x) with ln w_K = ln_weight(K), summed in log-scaled form.
/// `peak` is the degree after which the weights are known to decay.
fn degree_series<W>(
    b: &[f64],
    x: &[f64],
    mut ln_weight: W,
    peak: f64,
    func: &'static str,
    policy: &PrecisionPolicy,
) -> Result<(f64, f64)>
where
    W: FnMut(usize) -> f64,
{
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if big == 0.0 {
        return Ok((1.0, 0.0));
    }
    let y: Vec<f64> = x.iter().map(|v| v / big).collect();
    let ln_big = big.ln();
    let mut gen = DegreeCoefficients::new(b, &y);
    let mut acc = LogSum::new();
    let mut quiet = 0;
    for k in 0..policy.max_terms {
        let (ek, ln_e) = gen.next();
        let ln_w = ln_weight(k) + k as f64 * ln_big + ln_e;
        let t = acc.add(ek, ln_w);
        let negligible = t.abs() <= policy.rel_tol * acc.sum.abs();
        if negligible && k as f64 > peak {
            quiet += 1;
            if quiet >= STOP_RUN {
                return Ok((acc.sum, acc.ln_scale));
            }
        } else {
            quiet = 0;
        }
        if gen.work > policy.max_multi_terms {
            break;
        }
    }
    Err(Error::precision(
        func,
        format!("degree series did not settle within the term budget (|x|max = {big})"),
        acc.sum * acc.ln_scale.exp(),
    ))
}

/// Φ₂ by its series with no transformation; (mantissa, ln scale).
fn phi2_series(b: &[f64], c: f64, x: &[f64], policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut ln_poch = 0.0;
    degree_series(
        b,
        x,
        |k| {
            if k > 0 {
                ln_poch += (c + k as f64 - 1.0).ln();
            }
            -ln_poch
        },
        big + b.iter().map(|v| v.abs()).sum::<f64>(),
        "phi2_n",
        policy,
    )
}

/// Φ₂(b; c; x) as (mantissa, ln scale), i.e. Φ₂ = mantissa·e^{ln scale}.
///
/// When some x_j < -`SHIFT_THRESHOLD`, the most negative argument is moved
/// out with Φ₂(b; c; x) = e^{x_j} Φ₂(b'; c; x'), where x'_i = x_i - x_j for
/// i ≠ j, x'_j = -x_j and b'_j = c - Σb. Every x' is then non-negative.
pub(crate) fn phi2_scaled(b: &[f64], c: f64, x: &[f64], policy: &PrecisionPolicy) -> Result<(f64, f64)> {
    let (j, xmin) = x
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
    if x.is_empty() || xmin >= -SHIFT_THRESHOLD {
        return phi2_series(b, c, x, policy);
    }
    let (bs, xs) = shifted(b, c, x, j);
    let (m, ls) = phi2_series(&bs, c, &xs, policy)?;
    Ok((m, ls + xmin))
}

fn shifted(b: &[f64], c: f64, x: &[f64], j: usize) -> (Vec<f64>, Vec<f64>) {
    let total: f64 = b.iter().sum();
    let mut bs = b.to_vec();
    bs[j] = c - total;
    let xs = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if i == j { -x[j] } else { v - x[j] })
        .collect();
    (bs, xs)
}

/// Φ₂⁽ᴺ⁾(b; c; x) = Σ_k Π (b_i)_{k_i} x_i^{k_i} / k_i! / (c)_{|k|}.
pub fn phi2_n(args: &Phi2Arguments, policy: &PrecisionPolicy) -> Result<f64> {
    args.validate()?;
    let (m, ls) = phi2_scaled(&args.b, args.c, &args.x, policy)?;
    let v = m * ls.exp();
    if !v.is_finite() {
        return Err(Error::precision("phi2_n", "value overflows f64", v));
    }
    Ok(v)
}

/// F_D⁽ᴺ⁾(a; b; c; x).
///
/// The value comes from [`lauricella_fd_integral`]. When every |x_i| < 0.5
/// the series is also summed and the two must agree within 10·rel_tol.
pub fn lauricella_fd(args: &FdArguments, policy: &PrecisionPolicy) -> Result<f64> {
    args.validate()?;
    if args.x.iter().all(|&v| v == 0.0) {
        return Ok(1.0);
    }
    let primary = lauricella_fd_integral(args, policy)?;
    if args.x.iter().all(|v| v.abs() < 0.5) {
        let check = lauricella_fd_series(args, policy)?;
        let diff = (primary - check).abs();
        if diff > 10.0 * policy.rel_tol * check.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::precision(
                "lauricella_fd",
                format!("integral {primary} and series {check} disagree"),
                primary,
            ));
        }
    }
    Ok(primary)
}

/// F_D = (1/Γ(a)) ∫_0^∞ e^{-t} t^{a-1} Φ₂(b; c; x t) dt.
///
/// With r = 1 - max(0, max x_i) and s = r t the integrand is
/// Φ₂(b; c; x s/r) e^{-max(0, x) s/r}, which stays bounded as s grows.
pub fn lauricella_fd_integral(args: &FdArguments, policy: &PrecisionPolicy) -> Result<f64> {
    args.validate()?;
    let xmax = args.x.iter().copied().fold(0.0f64, f64::max);
    let rate = 1.0 - xmax;
    let mut xt = vec![0.0; args.x.len()];
    let r = gamma_average(args.a, policy, |s| {
        let t = s / rate;
        for (dst, &v) in xt.iter_mut().zip(&args.x) {
            *dst = v * t;
        }
        let (m, ls) = phi2_scaled(&args.b, args.c, &xt, policy)?;
        Ok(m * (ls - xmax * t).exp())
    })?;
    Ok(r.value * rate.powf(-args.a))
}

/// F_D by its power series; needs every |x_i| < 1.
pub fn lauricella_fd_series(args: &FdArguments, policy: &PrecisionPolicy) -> Result<f64> {
    args.validate()?;
    if let Some(bad) = args.x.iter().find(|v| v.abs() >= 1.0) {
        return Err(Error::domain(
            "lauricella_fd",
            format!("series needs every |x_i| < 1, got {bad}"),
        ));
    }
    let (a, c) = (args.a, args.c);
    let mut ln_ratio = 0.0;
    let big = args.x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    // (a)_K/(c)_K decays once K exceeds this
    let peak = ((a - c) / (1.0 - big)).max(0.0);
    let (m, ls) = degree_series(
        &args.b,
        &args.x,
        |k| {
            if k > 0 {
                let kf = k as f64 - 1.0;
                ln_ratio += (a + kf).ln() - (c + kf).ln();
            }
            ln_ratio
        },
        peak,
        "lauricella_fd",
        policy,
    )?;
    let v = m * ls.exp();
    if !v.is_finite() {
        return Err(Error::precision("lauricella_fd", "series overflows f64", v));
    }
    Ok(v)
}
