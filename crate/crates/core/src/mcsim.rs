//! Monte Carlo channel simulator and data-aided EVM estimator.
//!
//! Each block draws one fading realization (constant over the block), sends
//! N desired symbols through
//!
//!   y(i) = h D(i) + Σ_l h_l I_l(i) + n(i),
//!
//! equalizes by h and reports √((1/N) Σ |y(i)/h - D(i)|²).
//!
//! Two block samplers produce that statistic. The literal one walks every
//! symbol. The default one uses the fact that the error is
//! (Σ_l h_l I_l(i) + n(i))/h, which depends on the symbols only through how
//! many of the N slots carry each interferer symbol pattern. It draws those
//! pattern counts with nested binomial splits, then draws the noise through
//! its per-pattern mean and a pooled chi-square residual. Both have the same
//! distribution; the fast one costs O(M^L) per block instead of O(N L).
//!
//! Block b always uses ChaCha8 stream b of the configured seed, and partial
//! sums are reduced in a fixed chunk order, so the estimate does not depend
//! on the worker count.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::evm::EvmScenario;
use crate::fading::sample_power;

const CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Constellation {
    #[default]
    Bpsk,
    Qpsk,
}

impl Constellation {
    /// Equiprobable, zero-mean points with unit average energy.
    pub fn points(self) -> &'static [Complex64] {
        const H: f64 = std::f64::consts::FRAC_1_SQRT_2;
        const BPSK: [Complex64; 2] = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        const QPSK: [Complex64; 4] = [
            Complex64::new(H, H),
            Complex64::new(-H, H),
            Complex64::new(-H, -H),
            Complex64::new(H, -H),
        ];
        match self {
            Constellation::Bpsk => &BPSK,
            Constellation::Qpsk => &QPSK,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constellation::Bpsk => "bpsk",
            Constellation::Qpsk => "qpsk",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockSampler {
    /// Pattern counts plus noise sufficient statistics.
    #[default]
    Aggregated,
    /// Every symbol, interferer symbol and noise sample.
    Literal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    /// Symbols per block, N.
    pub block_length: u64,
    pub num_blocks: u64,
    pub constellation: Constellation,
    pub seed: u64,
    pub workers: usize,
    pub sampler: BlockSampler,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            block_length: 10_000,
            num_blocks: 1_000_000,
            constellation: Constellation::Bpsk,
            seed: 0,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            sampler: BlockSampler::Aggregated,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_length == 0 {
            return Err(Error::InvalidParameter("block_length must be >= 1".into()));
        }
        if self.num_blocks == 0 {
            return Err(Error::InvalidParameter("num_blocks must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidParameter("workers must be >= 1".into()));
        }
        Ok(())
    }
}

/// Channel state held constant over one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRealization {
    pub h: Complex64,
    pub h_l: Vec<Complex64>,
    /// Total noise variance; σ²/2 per quadrature.
    pub noise_variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub num_blocks: u64,
    /// Desired-gain draws that underflowed to exactly zero and were redrawn.
    pub redraws: u64,
}

fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Draws h and h_l with powers from the scenario's laws and uniform phases.
/// Returns the realization and the number of zero-gain redraws.
pub fn draw_realization<R: Rng + ?Sized>(s: &EvmScenario, rng: &mut R) -> (BlockRealization, u64) {
    let mut redraws = 0;
    let g = loop {
        let g = sample_power(&s.desired, rng);
        if g > 0.0 {
            break g;
        }
        redraws += 1;
    };
    let h = g.sqrt() * random_phase(rng);
    let h_l = s
        .interferers
        .entries()
        .iter()
        .map(|p| sample_power(p, rng).sqrt() * random_phase(rng))
        .collect();
    let r = BlockRealization {
        h,
        h_l,
        noise_variance: s.noise_variance,
    };
    (r, redraws)
}

/// Block EVM for a fixed realization, walking every symbol.
pub fn block_evm_literal<R: Rng + ?Sized>(
    r: &BlockRealization,
    n: u64,
    constellation: Constellation,
    rng: &mut R,
) -> f64 {
    let pts = constellation.points();
    let mut acc = 0.0;
    for _ in 0..n {
        let d = pts[rng.random_range(0..pts.len())];
        let mut y = r.h * d;
        for &hl in &r.h_l {
            y += hl * pts[rng.random_range(0..pts.len())];
        }
        if r.noise_variance > 0.0 {
            y += complex_normal(rng, r.noise_variance);
        }
        acc += (y / r.h - d).norm_sqr();
    }
    (acc / n as f64).sqrt()
}

/// Block EVM for a fixed realization from pattern counts and noise
/// sufficient statistics; same distribution as [`block_evm_literal`].
pub fn block_evm_aggregated<R: Rng + ?Sized>(
    r: &BlockRealization,
    n: u64,
    constellation: Constellation,
    rng: &mut R,
) -> f64 {
    let mut st = Aggregate {
        pts: constellation.points(),
        h_l: &r.h_l,
        sigma2: r.noise_variance,
        total: 0.0,
        leaves: 0,
    };
    st.split(rng, 0, n, Complex64::new(0.0, 0.0));
    let mut total = st.total;
    if st.sigma2 > 0.0 && n > st.leaves {
        // Σ|n_k - n̄|² over all patterns: σ² Gamma(N - P, 1)
        let g = Gamma::new((n - st.leaves) as f64, 1.0).expect("positive shape");
        total += st.sigma2 * g.sample(rng);
    }
    (total / n as f64).sqrt() / r.h.norm()
}

struct Aggregate<'a> {
    pts: &'a [Complex64],
    h_l: &'a [Complex64],
    sigma2: f64,
    total: f64,
    leaves: u64,
}

impl Aggregate<'_> {
    fn split<R: Rng + ?Sized>(&mut self, rng: &mut R, level: usize, count: u64, u: Complex64) {
        if level == self.h_l.len() {
            // c copies of u + n_k: c|u + n̄|² plus a residual pooled by the caller
            let c = count as f64;
            let v = if self.sigma2 > 0.0 {
                u + complex_normal(rng, self.sigma2 / c)
            } else {
                u
            };
            self.total += c * v.norm_sqr();
            self.leaves += 1;
            return;
        }
        let m = self.pts.len();
        let depth = (self.h_l.len() - level) as i32;
        if (count as f64) < (m as f64).powi(depth) {
            // fewer symbols than patterns left: finish each symbol on its own
            for _ in 0..count {
                let mut v = u;
                for &hl in &self.h_l[level..] {
                    v += hl * self.pts[rng.random_range(0..m)];
                }
                self.split(rng, self.h_l.len(), 1, v);
            }
            return;
        }
        let mut remaining = count;
        for k in 0..m {
            if remaining == 0 {
                break;
            }
            let c = if k == m - 1 {
                remaining
            } else {
                Binomial::new(remaining, 1.0 / (m - k) as f64)
                    .expect("valid probability")
                    .sample(rng)
            };
            if c > 0 {
                self.split(rng, level + 1, c, u + self.h_l[level] * self.pts[k]);
            }
            remaining -= c;
        }
    }
}

fn block_rng(seed: &<ChaCha8Rng as SeedableRng>::Seed, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*seed);
    rng.set_stream(block);
    rng
}

fn expand_seed(seed: u64) -> <ChaCha8Rng as SeedableRng>::Seed {
    ChaCha8Rng::seed_from_u64(seed).get_seed()
}

/// One block: draws a realization from stream `block` and returns its EVM
/// with the zero-gain redraw count.
pub fn simulate_block(s: &EvmScenario, cfg: &McConfig, block: u64) -> (f64, u64) {
    let mut rng = block_rng(&expand_seed(cfg.seed), block);
    simulate_with(s, cfg, &mut rng)
}

fn simulate_with<R: Rng + ?Sized>(s: &EvmScenario, cfg: &McConfig, rng: &mut R) -> (f64, u64) {
    let (r, redraws) = draw_realization(s, rng);
    let v = match cfg.sampler {
        BlockSampler::Aggregated => block_evm_aggregated(&r, cfg.block_length, cfg.constellation, rng),
        BlockSampler::Literal => block_evm_literal(&r, cfg.block_length, cfg.constellation, rng),
    };
    (v, redraws)
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: f64,
    sum_sq: f64,
    redraws: u64,
}

/// Mean block EVM over `num_blocks` fading realizations and its standard
/// error. Bit-identical for a fixed seed and block count at any worker count.
pub fn empirical_evm(s: &EvmScenario, cfg: &McConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let seed = expand_seed(cfg.seed);
    let chunks = cfg.num_blocks.div_ceil(CHUNK);
    let run_chunk = |c: u64| {
        let mut p = Partial::default();
        let end = ((c + 1) * CHUNK).min(cfg.num_blocks);
        for b in c * CHUNK..end {
            let mut rng = block_rng(&seed, b);
            let (v, r) = simulate_with(s, cfg, &mut rng);
            p.sum += v;
            p.sum_sq += v * v;
            p.redraws += r;
        }
        p
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let partials: Vec<Partial> = pool.install(|| (0..chunks).into_par_iter().map(run_chunk).collect());
    let mut tot = Partial::default();
    for p in &partials {
        tot.sum += p.sum;
        tot.sum_sq += p.sum_sq;
        tot.redraws += p.redraws;
    }
    let n = cfg.num_blocks as f64;
    let mean = tot.sum / n;
    let var = if cfg.num_blocks > 1 {
        ((tot.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(McEstimate {
        mean,
        stderr: (var / n).sqrt(),
        num_blocks: cfg.num_blocks,
        redraws: tot.redraws,
    })
}

/// Empirical symbol averages behind the large-N reduction of the EVM.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub block_length: u64,
    pub realization: BlockRealization,
    /// (l, j, |(1/N) Σ I_l* h_l* I_j h_j|) for l < j; should vanish.
    pub interferer_cross: Vec<(usize, usize, f64)>,
    /// (l, (1/N) Σ |h_l I_l|², |h_l|²).
    pub interferer_power: Vec<(usize, f64, f64)>,
    /// (l, |(1/N) Σ I_l* h_l* n|); should vanish.
    pub noise_cross: Vec<(usize, f64)>,
    /// ((1/N) Σ |n|², σ²).
    pub noise_power: (f64, f64),
}

impl ReductionReport {
    /// Largest term that should vanish.
    pub fn max_cross(&self) -> f64 {
        self.interferer_cross
            .iter()
            .map(|t| t.2)
            .chain(self.noise_cross.iter().map(|t| t.1))
            .fold(0.0, f64::max)
    }

    /// Largest relative deviation of a power term from its limit.
    pub fn max_power_deviation(&self) -> f64 {
        let rel = |emp: f64, want: f64| if want > 0.0 { (emp / want - 1.0).abs() } else { emp.abs() };
        self.interferer_power
            .iter()
            .map(|t| rel(t.1, t.2))
            .chain(std::iter::once(rel(self.noise_power.0, self.noise_power.1)))
            .fold(0.0, f64::max)
    }
}

/// Draws the realization of block 0 and measures the symbol-level cross
/// terms over N literal symbols.
pub fn reduction_check(s: &EvmScenario, cfg: &McConfig) -> Result<ReductionReport> {
    cfg.validate()?;
    let mut rng = block_rng(&expand_seed(cfg.seed), 0);
    let (r, _) = draw_realization(s, &mut rng);
    let pts = cfg.constellation.points();
    let l = r.h_l.len();
    let n = cfg.block_length;
    let mut cross = vec![Complex64::new(0.0, 0.0); l * l];
    let mut ncross = vec![Complex64::new(0.0, 0.0); l];
    let mut npow = 0.0;
    let mut terms = vec![Complex64::new(0.0, 0.0); l];
    for _ in 0..n {
        for (t, &hl) in terms.iter_mut().zip(&r.h_l) {
            *t = hl * pts[rng.random_range(0..pts.len())];
        }
        let noise = if r.noise_variance > 0.0 {
            complex_normal(&mut rng, r.noise_variance)
        } else {
            Complex64::new(0.0, 0.0)
        };
        for a in 0..l {
            for b in a..l {
                cross[a * l + b] += terms[a].conj() * terms[b];
            }
            ncross[a] += terms[a].conj() * noise;
        }
        npow += noise.norm_sqr();
    }
    let nf = n as f64;
    let mut interferer_cross = Vec::new();
    let mut interferer_power = Vec::new();
    for a in 0..l {
        interferer_power.push((a, cross[a * l + a].re / nf, r.h_l[a].norm_sqr()));
        for b in a + 1..l {
            interferer_cross.push((a, b, cross[a * l + b].norm() / nf));
        }
    }
    Ok(ReductionReport {
        block_length: n,
        noise_cross: ncross.iter().enumerate().map(|(a, c)| (a, c.norm() / nf)).collect(),
        noise_power: (npow / nf, r.noise_variance),
        interferer_cross,
        interferer_power,
        realization: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::{special_case_params, InterfererProfile, ShadowedFadingParams, SpecialCaseTag};

    fn scenario(d: ShadowedFadingParams, i: Vec<ShadowedFadingParams>, s2: f64) -> EvmScenario {
        EvmScenario::new(d, InterfererProfile::new(i).unwrap(), s2).unwrap()
    }

    fn cfg(n: u64, blocks: u64) -> McConfig {
        McConfig {
            block_length: n,
            num_blocks: blocks,
            seed: 7,
            workers: 2,
            ..McConfig::default()
        }
    }

    fn ks(a: &mut [f64], b: &mut [f64]) -> f64 {
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0, 0, 0.0f64);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn constellations_are_unit_energy() {
        for c in [Constellation::Bpsk, Constellation::Qpsk] {
            let p = c.points();
            let mean: Complex64 = p.iter().sum::<Complex64>() / p.len() as f64;
            let es = p.iter().map(|z| z.norm_sqr()).sum::<f64>() / p.len() as f64;
            assert!(mean.norm() < 1e-15);
            assert!((es - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unfaded_single_interferer() {
        let nf = special_case_params(SpecialCaseTag::NoFading);
        let s = scenario(nf, vec![nf], 0.0);
        let (v, _) = simulate_block(&s, &cfg(10_000, 1), 3);
        assert!((v - 1.0).abs() < 1e-12);
        let mut c = cfg(10_000, 1);
        c.sampler = BlockSampler::Literal;
        let (v, _) = simulate_block(&s, &c, 3);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noise_only_level() {
        // a unit interferer plus noise σ² gives block EVM ≈ √(1 + σ²) with BPSK
        let nf = special_case_params(SpecialCaseTag::NoFading);
        let s = scenario(nf, vec![nf], 0.25);
        for sampler in [BlockSampler::Aggregated, BlockSampler::Literal] {
            let c = McConfig { sampler, ..cfg(200_000, 1) };
            let (v, _) = simulate_block(&s, &c, 0);
            assert!((v - 1.25f64.sqrt()).abs() < 0.01, "{v}");
        }
    }

    #[test]
    fn samplers_agree_in_distribution() {
        let r = BlockRealization {
            h: Complex64::new(0.7, -0.4),
            h_l: vec![Complex64::new(0.5, 0.9), Complex64::new(-1.1, 0.2), Complex64::new(0.3, 0.3)],
            noise_variance: 0.6,
        };
        for c in [Constellation::Bpsk, Constellation::Qpsk] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let n = 40_000;
            let mut a: Vec<f64> = (0..n).map(|_| block_evm_literal(&r, 6, c, &mut rng)).collect();
            let mut b: Vec<f64> = (0..n).map(|_| block_evm_aggregated(&r, 6, c, &mut rng)).collect();
            let d = ks(&mut a, &mut b);
            assert!(d < 0.015, "{c:?}: KS {d}");
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let s = scenario(
            ShadowedFadingParams::new(2.0, 1.5, 3.0).unwrap(),
            vec![ShadowedFadingParams::new(1.0, 1.0, 2.0).unwrap(); 2],
            0.1,
        );
        let mut c = cfg(64, 10_000);
        let runs: Vec<McEstimate> = [1, 3, 4]
            .iter()
            .map(|&w| {
                c.workers = w;
                empirical_evm(&s, &c).unwrap()
            })
            .collect();
        assert_eq!(runs[0].mean.to_bits(), runs[1].mean.to_bits());
        assert_eq!(runs[0].mean.to_bits(), runs[2].mean.to_bits());
        assert_eq!(runs[0].stderr.to_bits(), runs[2].stderr.to_bits());
        c.seed = 8;
        assert_ne!(empirical_evm(&s, &c).unwrap().mean, runs[0].mean);
    }

    #[test]
    fn rayleigh_mean_near_closed_form() {
        let ray = special_case_params(SpecialCaseTag::Rayleigh);
        let s = scenario(ray, vec![ray], 0.0);
        let e = empirical_evm(&s, &cfg(1_000, 200_000)).unwrap();
        let want = std::f64::consts::FRAC_PI_2;
        assert!((e.mean - want).abs() < 0.03 * want, "{e:?}");
    }

    #[test]
    fn stderr_scales_with_blocks() {
        let s = scenario(
            ShadowedFadingParams::new(0.0, 2.0, f64::INFINITY).unwrap(),
            vec![ShadowedFadingParams::new(0.0, 1.0, f64::INFINITY).unwrap()],
            0.0,
        );
        let a = empirical_evm(&s, &cfg(100, 10_000)).unwrap();
        let b = empirical_evm(&s, &cfg(100, 100_000)).unwrap();
        let ratio = a.stderr / b.stderr;
        assert!((ratio / 10f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn phase_rotation_invariance() {
        let r = BlockRealization {
            h: Complex64::new(0.3, 1.2),
            h_l: vec![Complex64::new(0.5, -0.9), Complex64::new(1.1, 0.4)],
            noise_variance: 0.0,
        };
        let rot = Complex64::from_polar(1.0, 2.1);
        let q = BlockRealization {
            h: r.h * rot,
            h_l: r.h_l.iter().map(|z| z * rot).collect(),
            noise_variance: 0.0,
        };
        for c in [Constellation::Bpsk, Constellation::Qpsk] {
            let a = block_evm_literal(&r, 500, c, &mut ChaCha8Rng::seed_from_u64(1));
            let b = block_evm_literal(&q, 500, c, &mut ChaCha8Rng::seed_from_u64(1));
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn reduction_terms() {
        let ray = special_case_params(SpecialCaseTag::Rayleigh);
        let s = scenario(ray, vec![ray, ray], 1.0);
        let c = cfg(1_000_000, 1);
        let rep = reduction_check(&s, &c).unwrap();
        let bound = 5.0 / (c.block_length as f64).sqrt();
        let scale: f64 = rep.realization.h_l.iter().map(|h| h.norm_sqr()).fold(1.0, f64::max);
        assert!(rep.max_cross() < bound * scale, "{rep:?}");
        assert!(rep.max_power_deviation() < 0.01, "{rep:?}");
        // BPSK interferer power is exact for every symbol
        for t in &rep.interferer_power {
            assert!((t.1 - t.2).abs() < 1e-9 * t.2.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_config() {
        let ray = special_case_params(SpecialCaseTag::Rayleigh);
        let s = scenario(ray, vec![ray], 0.0);
        for c in [cfg(0, 1), cfg(1, 0), McConfig { workers: 0, ..cfg(1, 1) }] {
            assert!(empirical_evm(&s, &c).is_err());
        }
    }
}
