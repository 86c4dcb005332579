//! Globally adaptive 21-point Gauss–Kronrod quadrature, plus a panel scheme
//! for semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::PrecisionPolicy;
use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Integral {
    pub value: f64,
    pub abs_err: f64,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        return Err(Error::precision(
            "quadrature",
            format!("non-finite integrand on [{a}, {b}]"),
            value,
        ));
    }
    Ok(Panel { a, b, value, err })
}

/// ∫_a^b f, refined by bisecting the panel with the largest error estimate
/// until the total error is below `max(abs_tol, rel_tol·|I|)`.
pub(crate) fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    policy: &PrecisionPolicy,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    adaptive(&mut f, a, b, abs_tol, policy)
}

fn adaptive<F>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    policy: &PrecisionPolicy,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    let first = gk21(f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut panels = 1;
    while total_err > abs_tol.max(policy.rel_tol * total.abs()) {
        if panels >= policy.quad_nodes {
            return Err(Error::precision(
                "quadrature",
                format!("{panels} panels exhausted, error estimate {total_err:e}"),
                total,
            ));
        }
        let worst = heap.pop().expect("heap never empties");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = gk21(f, worst.a, mid)?;
        let right = gk21(f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        panels += 1;
    }
    // re-sum to shed the drift of incremental updates
    let value = heap.iter().map(|p| p.value).sum();
    let abs_err = heap.iter().map(|p| p.err).sum();
    Ok(Integral { value, abs_err })
}

/// ∫_a^∞ f over panels of doubling width starting at `scale`. Stops once two
/// consecutive panels past `a + 4·scale` contribute less than a tenth of the
/// tolerance, or at `policy.quad_upper_cutoff` (in units of `scale`).
pub(crate) fn integrate_to_infinity<F>(
    mut f: F,
    a: f64,
    scale: f64,
    policy: &PrecisionPolicy,
) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    const MAX_PANELS: usize = 200;
    let end = policy.quad_upper_cutoff.map(|c| a + c * scale);
    let mut lo = a;
    let mut width = scale;
    let mut value = 0.0f64;
    let mut abs_err = 0.0;
    let mut quiet = 0;
    for k in 0..MAX_PANELS {
        let mut hi = lo + width;
        if let Some(e) = end {
            hi = hi.min(e);
        }
        let tol = 0.25 * policy.rel_tol * value.abs();
        let piece = adaptive(&mut f, lo, hi, tol, policy)?;
        value += piece.value;
        abs_err += piece.abs_err;
        if end.is_some_and(|e| hi >= e) {
            return Ok(Integral { value, abs_err });
        }
        if hi >= a + 4.0 * scale && piece.value.abs() <= 0.1 * policy.rel_tol * value.abs() {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Integral { value, abs_err });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        if k >= 1 {
            width *= 2.0;
        }
    }
    Err(Error::precision(
        "quadrature",
        "semi-infinite tail did not decay",
        value,
    ))
}

/// E[h(S)] for S ~ Gamma(alpha, 1), i.e. (1/Γ(α)) ∫_0^∞ e^{-s} s^{α-1} h(s) ds.
///
/// For α < 1 the endpoint singularity is removed with s = u^{1/α}. `h` is
/// not evaluated where the Gamma weight is below `rel_tol·e^{-60}`; this
/// assumes h grows at most polynomially.
pub(crate) fn gamma_average<H>(alpha: f64, policy: &PrecisionPolicy, mut h: H) -> Result<Integral>
where
    H: FnMut(f64) -> Result<f64>,
{
    let ln_floor = policy.rel_tol.ln() - 60.0;
    if !(alpha > 0.0) {
        return Err(Error::domain("gamma_average", format!("shape must be > 0, got {alpha}")));
    }
    if alpha < 1.0 {
        let ln_norm = statrs::function::gamma::ln_gamma(alpha + 1.0);
        let inv = 1.0 / alpha;
        return integrate_to_infinity(
            |u: f64| {
                if u == 0.0 {
                    return Ok((-ln_norm).exp() * h(0.0)?);
                }
                let s = u.powf(inv);
                let ln_w = -s - ln_norm;
                let w = ln_w.exp();
                if ln_w < ln_floor {
                    return Ok(0.0);
                }
                Ok(w * h(s)?)
            },
            0.0,
            1.0,
            policy,
        );
    }
    let ln_norm = statrs::function::gamma::ln_gamma(alpha);
    integrate_to_infinity(
        |s: f64| {
            if s == 0.0 {
                return Ok(if alpha == 1.0 { h(0.0)? } else { 0.0 });
            }
            let ln_w = -s + (alpha - 1.0) * s.ln() - ln_norm;
            let w = ln_w.exp();
            if ln_w < ln_floor {
                return Ok(0.0);
            }
            Ok(w * h(s)?)
        },
        0.0,
        alpha.max(1.0),
        policy,
    )
}
