//! Acceptance checks, one PASS/FAIL line each. Exits non-zero on any FAIL.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use evm_core::evm::{
    evm_iid_kappamu, evm_iid_nakagami, evm_iid_rician, evm_iid_shadowed, evm_inid_shadowed, evm_nakagami_large_m,
    evm_noise_nakagami, evm_noise_rayleigh, evm_rayleigh, evm_rayleigh_large_l,
};
use evm_core::fading::{power_cdf, power_expectation, power_pdf, sample_power, sample_power_physical, sum_power_pdf};
use evm_core::specfun::{
    gauss_2f1, gauss_2f1_integral, gauss_2f1_series, kummer_1f1_series, lauricella_fd, phi2_n, tricomi_u,
    FdArguments, Phi2Arguments,
};
use evm_core::{
    empirical_evm, evaluate, Constellation, EvmScenario, InterfererProfile, McConfig, PrecisionPolicy,
    ShadowedFadingParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INF: f64 = f64::INFINITY;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn p(k: f64, mu: f64, m: f64) -> ShadowedFadingParams {
    ShadowedFadingParams::new(k, mu, m).unwrap()
}

fn scen(d: ShadowedFadingParams, i: Vec<ShadowedFadingParams>, s2: f64) -> EvmScenario {
    EvmScenario::new(d, InterfererProfile::new(i).unwrap(), s2).unwrap()
}

fn within_time(t: Duration, limit: Duration) -> bool {
    t <= limit
}

fn exact_closed_forms() -> Outcome {
    let pol = PrecisionPolicy::default();
    let ray = p(0.0, 1.0, INF);
    let mut worst = 0.0f64;
    let reps = 1000;
    let t = Instant::now();
    for _ in 0..reps {
        for (l, want) in [(1usize, PI / 2.0), (4, 1.09375 * PI)] {
            let s = scen(ray, vec![ray; l], 0.0);
            let r = evaluate(&s, &pol).unwrap();
            worst = worst.max(rel(r.value, want));
        }
    }
    let per_point = t.elapsed() / (2 * reps);
    Outcome {
        pass: worst <= 1e-10 && per_point < Duration::from_millis(1),
        detail: format!("max rel err {worst:.1e} (tol 1e-10), {per_point:?} per point (limit 1 ms)"),
    }
}

fn sqrt_l_law() -> Outcome {
    let t = Instant::now();
    let mut worst = 0.0f64;
    for l in [1usize, 2, 4, 9] {
        let v = evm_iid_rician(1e6, 1e6, l).unwrap().value;
        worst = worst.max(rel(v, (l as f64).sqrt()));
    }
    let el = t.elapsed();
    Outcome {
        pass: worst <= 1e-3 && within_time(el, Duration::from_millis(10)),
        detail: format!("max rel dev from sqrt(L) {worst:.2e} (tol 1e-3), {el:?} total (limit 10 ms)"),
    }
}

fn reduction_chain() -> Outcome {
    let pol = PrecisionPolicy::default();
    let t = Instant::now();
    let mut worst = [0.0f64; 4];
    // general to i.i.d.
    for (d, i, l) in [
        (p(2.0, 1.5, 3.0), p(1.0, 1.2, 2.0), 3usize),
        (p(0.5, 2.5, 1.5), p(4.0, 0.8, 0.9), 2),
        (p(1.0, 1.0, 1.0), p(0.3, 2.0, 5.0), 5),
    ] {
        let s = scen(d, vec![i; l], 0.0);
        let a = evm_inid_shadowed(&s, &pol).unwrap().value;
        let b = evm_iid_shadowed(&s, &pol).unwrap().value;
        worst[0] = worst[0].max(rel(a, b));
    }
    // shadowed at m = m_I = 10⁷ to κ-μ
    for (dk, dmu, ik, imu, l) in [(3.0, 2.0, 1.0, 1.5, 2usize), (0.5, 1.2, 2.0, 0.7, 4)] {
        let a = evm_iid_shadowed(&scen(p(dk, dmu, 1e7), vec![p(ik, imu, 1e7); l], 0.0), &pol)
            .unwrap()
            .value;
        let b = evm_iid_kappamu(&scen(p(dk, dmu, INF), vec![p(ik, imu, INF); l], 0.0)).unwrap().value;
        worst[1] = worst[1].max(rel(a, b));
    }
    // κ-μ at κ → 0 to Nakagami
    for (mu, mu_i, l) in [(2.5, 1.5, 3usize), (0.75, 4.0, 1), (6.0, 0.6, 7)] {
        let a = evm_iid_kappamu(&scen(p(0.0, mu, INF), vec![p(0.0, mu_i, INF); l], 0.0)).unwrap().value;
        let b = evm_iid_nakagami(mu, mu_i, l).unwrap().value;
        worst[2] = worst[2].max(rel(a, b));
    }
    // noise Nakagami at m = m_I = 1 to noise Rayleigh
    for (l, s2) in [(1usize, 1.0), (3, 0.1), (5, 10.0)] {
        let a = evm_noise_nakagami(1.0, 1.0, l, s2).unwrap();
        let b = evm_noise_rayleigh(l, s2).unwrap();
        worst[3] = worst[3].max(rel(a, b));
    }
    let el = t.elapsed();
    let pass = worst[0] <= 1e-9
        && worst[1] <= 1e-4
        && worst[2] <= 1e-9
        && worst[3] <= 4.0 * f64::EPSILON
        && within_time(el, Duration::from_secs(10));
    Outcome {
        pass,
        detail: format!(
            "inid->iid {:.1e} (1e-9), m=1e7->kappa-mu {:.1e} (1e-4), kappa->0 {:.1e} (1e-9), \
             noise m=1->Rayleigh {:.1e} (rounding), {el:?} (limit 10 s)",
            worst[0], worst[1], worst[2], worst[3]
        ),
    }
}

fn identity_suite() -> Outcome {
    let pol = PrecisionPolicy::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let t = Instant::now();
    let mut worst = [0.0f64; 5];
    for _ in 0..50 {
        let a = rng.random_range(0.2..3.0);
        let b = rng.random_range(0.2..3.0);
        let c = rng.random_range(0.5..4.0);
        let x = rng.random_range(-0.9..0.9);
        let s = gauss_2f1_series(a, b, c, x, &pol).unwrap();
        let i = gauss_2f1_integral(a, b, c, x, &pol).unwrap();
        worst[0] = worst[0].max(rel(i, s));
    }
    for _ in 0..20 {
        let n = rng.random_range(1..=5usize);
        let a = rng.random_range(0.3..3.0);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let c = rng.random_range(0.5..4.0);
        let x = rng.random_range(-0.9..0.9);
        let fd = lauricella_fd(&FdArguments::new(a, b.clone(), c, vec![x; n]).unwrap(), &pol).unwrap();
        let f = gauss_2f1(a, b.iter().sum(), c, x).unwrap();
        worst[1] = worst[1].max(rel(fd, f));
    }
    for _ in 0..20 {
        let n = rng.random_range(2..=4usize);
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
        let c = rng.random_range(0.5..4.0);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-0.45..0.45)).collect();
        let j = rng.random_range(0..n);
        let lhs = phi2_n(&Phi2Arguments::new(b.clone(), c, x.clone()).unwrap(), &pol).unwrap();
        let mut bs = b.clone();
        bs[j] = c - b.iter().sum::<f64>();
        let xs: Vec<f64> = (0..n).map(|i| if i == j { -x[j] } else { x[i] - x[j] }).collect();
        let rhs = x[j].exp() * phi2_n(&Phi2Arguments::new(bs, c, xs).unwrap(), &pol).unwrap();
        worst[2] = worst[2].max(rel(lhs, rhs));
    }
    for _ in 0..20 {
        let a = rng.random_range(0.1..6.0);
        let z = rng.random_range(0.05..20.0);
        worst[3] = worst[3].max(rel(tricomi_u(a, a + 1.0, z).unwrap(), z.powf(-a)));
    }
    for _ in 0..20 {
        let a = rng.random_range(-2.0..3.0);
        let b = rng.random_range(0.3..4.0);
        let z = rng.random_range(-8.0..8.0);
        let lhs = kummer_1f1_series(a, b, z, &pol).unwrap();
        let rhs = z.exp() * kummer_1f1_series(b - a, b, -z, &pol).unwrap();
        worst[4] = worst[4].max((lhs - rhs).abs() / lhs.abs().max(1e-300));
    }
    let el = t.elapsed();
    let pass = worst[0] <= 1e-8
        && worst[1] <= 1e-8
        && worst[2] <= 1e-8
        && worst[3] <= 1e-10
        && worst[4] <= 1e-10
        && within_time(el, Duration::from_secs(60));
    Outcome {
        pass,
        detail: format!(
            "2F1 series/integral {:.1e}, FD collapse {:.1e}, Phi2 shift {:.1e}, U(a,a+1,z) {:.1e}, \
             Kummer transform {:.1e}, {el:?} (limit 60 s)",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    }
}

fn monte_carlo() -> Outcome {
    let pol = PrecisionPolicy::default();
    let nak = |m: f64| p(0.0, m, INF);
    let cases: Vec<(&str, EvmScenario, Constellation)> = vec![
        (
            "inid L=2",
            scen(p(2.0, 1.5, 3.0), vec![p(1.0, 1.0, 2.0), p(3.0, 2.0, 1.0)], 0.0),
            Constellation::Bpsk,
        ),
        (
            "inid L=3",
            scen(p(1.0, 2.0, 2.0), vec![p(0.5, 1.5, 3.0), p(2.0, 1.0, 1.5), nak(2.0)], 0.0),
            Constellation::Qpsk,
        ),
        ("iid shadowed", scen(p(3.0, 1.5, 2.0), vec![p(1.0, 1.0, 2.0); 3], 0.0), Constellation::Bpsk),
        ("iid kappa-mu", scen(p(2.0, 1.5, INF), vec![p(1.0, 2.0, INF); 2], 0.0), Constellation::Bpsk),
        ("iid rician", scen(p(5.0, 1.0, INF), vec![p(3.0, 1.0, INF); 2], 0.0), Constellation::Bpsk),
        ("iid nakagami", scen(nak(2.0), vec![nak(1.5); 3], 0.0), Constellation::Bpsk),
        ("rayleigh", scen(nak(1.0), vec![nak(1.0); 2], 0.0), Constellation::Bpsk),
        ("noise shadowed", scen(p(2.0, 1.5, 3.0), vec![nak(2.0); 2], 0.5), Constellation::Bpsk),
        ("noise kappa-mu", scen(p(1.5, 2.0, INF), vec![nak(1.0)], 1.0), Constellation::Qpsk),
        ("noise rician", scen(p(4.0, 1.0, INF), vec![nak(2.0)], 0.25), Constellation::Bpsk),
        ("noise nakagami", scen(nak(2.0), vec![nak(1.0)], 1.0), Constellation::Bpsk),
        ("noise rayleigh", scen(nak(1.0), vec![nak(1.0); 2], 0.5), Constellation::Bpsk),
    ];
    let t = Instant::now();
    let mut fails = Vec::new();
    let mut worst_ratio = 0.0f64;
    for (i, (name, s, c)) in cases.iter().enumerate() {
        let a = evaluate(s, &pol).unwrap();
        let cfg = McConfig {
            block_length: 10_000,
            num_blocks: 1_000_000,
            constellation: *c,
            seed: 1000 + i as u64,
            ..McConfig::default()
        };
        let e = empirical_evm(s, &cfg).unwrap();
        let band = (0.01 * a.value).max(3.0 * e.stderr);
        let diff = (a.value - e.mean).abs();
        worst_ratio = worst_ratio.max(diff / band);
        println!(
            "    {name:<15} {:<30} analytic {:.6} mc {:.6} stderr {:.1e} |diff| {:.1e} band {:.1e}",
            a.formula_used.name(),
            a.value,
            e.mean,
            e.stderr,
            diff,
            band
        );
        if diff > band {
            fails.push(*name);
        }
    }
    let el = t.elapsed();
    // determinism across worker counts
    let s = &cases[0].1;
    let cfg = |w| McConfig {
        block_length: 1_000,
        num_blocks: 20_000,
        seed: 5,
        workers: w,
        ..McConfig::default()
    };
    let r1 = empirical_evm(s, &cfg(1)).unwrap();
    let r4 = empirical_evm(s, &cfg(4)).unwrap();
    let deterministic = r1.mean.to_bits() == r4.mean.to_bits() && r1.stderr.to_bits() == r4.stderr.to_bits();
    Outcome {
        pass: fails.is_empty() && deterministic && within_time(el, Duration::from_secs(600)),
        detail: format!(
            "{} scenarios, worst |diff|/band {worst_ratio:.2}, failures {fails:?}, \
             workers 1 vs 4 bit-identical: {deterministic}, {el:?} (limit 10 min)",
            cases.len()
        ),
    }
}

/// Upper bound on the one-sample KS distance, from the CDF on a grid of
/// order statistics: between grid points both CDFs are monotone.
fn ks_upper_bound(sample: &mut [f64], cdf: impl Fn(f64) -> f64, stride: usize) -> f64 {
    sample.sort_by(f64::total_cmp);
    let n = sample.len() as f64;
    let idx: Vec<usize> = (0..sample.len()).step_by(stride).chain([sample.len() - 1]).collect();
    let f: Vec<f64> = idx.iter().map(|&i| cdf(sample[i])).collect();
    let mut d = (f[0] - 0.0).max(idx[0] as f64 / n);
    for w in 0..idx.len() - 1 {
        let (i0, i1) = (idx[w], idx[w + 1]);
        // empirical CDF just after sample[i0] is (i0+1)/n, just before sample[i1] is i1/n
        d = d.max((i1 as f64 / n - f[w]).abs()).max(((i0 + 1) as f64 / n - f[w + 1]).abs());
        d = d.max(((i0 + 1) as f64 / n - f[w]).abs());
    }
    d.max((1.0 - f[f.len() - 1]).abs())
}

fn distribution_checks() -> Outcome {
    let pol = PrecisionPolicy::default();
    let mut worst_norm = 0.0f64;
    let mut worst_mean = 0.0f64;
    for &k in &[0.5, 2.0, 6.0] {
        for &mu in &[0.6, 1.5, 3.0] {
            for &m in &[0.8, 2.5, 10.0] {
                let q = p(k, mu, m);
                worst_norm = worst_norm.max((power_expectation(&q, |_| 1.0, &pol).unwrap() - 1.0).abs());
                worst_mean = worst_mean.max((power_expectation(&q, |x| x, &pol).unwrap() - 1.0).abs());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut ks = [0.0f64; 2];
    for (slot, q, physical) in [(0usize, p(2.0, 1.5, 3.0), false), (1, p(1.0, 2.0, 1.5), true)] {
        let mut xs: Vec<f64> = (0..1_000_000)
            .map(|_| {
                if physical {
                    sample_power_physical(&q, &mut rng).unwrap()
                } else {
                    sample_power(&q, &mut rng)
                }
            })
            .collect();
        ks[slot] = ks_upper_bound(&mut xs, |x| power_cdf(&q, x, &pol).unwrap(), 250);
    }
    // three-fold convolution on a grid, trapezoid rule
    let parts = [p(1.0, 2.0, 2.0), p(0.5, 2.5, 3.0), p(2.0, 3.0, 1.5)];
    let h = 0.002;
    let n = 7_500;
    let dens: Vec<Vec<f64>> = parts
        .iter()
        .map(|q| (0..n).map(|i| power_pdf(q, i as f64 * h).unwrap()).collect())
        .collect();
    let conv = |f: &[f64], g: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut s = 0.5 * (f[0] * g[i] + f[i] * g[0]);
                for j in 1..i {
                    s += f[j] * g[i - j];
                }
                if i == 0 {
                    0.0
                } else {
                    s * h
                }
            })
            .collect()
    };
    let f3 = conv(&conv(&dens[0], &dens[1]), &dens[2]);
    let profile = InterfererProfile::new(parts.to_vec()).unwrap();
    let mut sup = 0.0f64;
    for i in (50..n).step_by(50) {
        let x = i as f64 * h;
        sup = sup.max((sum_power_pdf(&profile, x, &pol).unwrap() - f3[i]).abs());
    }
    let pass = worst_norm <= 1e-8 && worst_mean <= 1e-8 && ks[0] < 0.002 && ks[1] < 0.002 && sup < 1e-4;
    Outcome {
        pass,
        detail: format!(
            "27-point grid: normalization {worst_norm:.1e}, mean {worst_mean:.1e} (1e-8); KS bound at 1e6 draws \
             mixture {:.2e}, physical {:.2e} (0.002); L=3 sum density sup err {sup:.1e} (1e-4)",
            ks[0], ks[1]
        ),
    }
}

fn qualitative_claims() -> Outcome {
    let pol = PrecisionPolicy::default();
    let mut ok = true;
    let mut notes = Vec::new();
    // increasing in L
    for (k, k_i) in [(0.0, 0.0), (5.0, 15.0), (15.0, 5.0)] {
        let v: Vec<f64> = (1..=10).map(|l| evm_iid_rician(k, k_i, l).unwrap().value).collect();
        ok &= v.windows(2).all(|w| w[1] > w[0]);
    }
    notes.push("L");
    // decreasing in desired K and m
    for l in [1usize, 4, 10] {
        let v: Vec<f64> = [0.0, 2.0, 5.0, 10.0, 15.0, 30.0]
            .iter()
            .map(|&k| evm_iid_rician(k, 15.0, l).unwrap().value)
            .collect();
        ok &= v.windows(2).all(|w| w[1] < w[0]);
        let v: Vec<f64> = [0.75, 1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|&m| evm_iid_nakagami(m, 1.0, l).unwrap().value)
            .collect();
        ok &= v.windows(2).all(|w| w[1] < w[0]);
    }
    notes.push("desired K, m");
    // increasing in interferer K_I
    for l in [1usize, 4] {
        let v: Vec<f64> = [0.0, 1.0, 5.0, 15.0, 50.0]
            .iter()
            .map(|&k_i| evm_iid_rician(5.0, k_i, l).unwrap().value)
            .collect();
        ok &= v.windows(2).all(|w| w[1] > w[0]);
    }
    notes.push("K_I");
    // noise curve approaches the interference-limited one with a shrinking gap
    for (m, m_i) in [(1.0, 1.0), (2.0, 1.0), (3.0, 2.0)] {
        let limit = evm_iid_nakagami(m, m_i, 1).unwrap().value;
        let gaps: Vec<f64> = (0..=40)
            .map(|db| {
                let s2 = 10f64.powf(-(db as f64) / 10.0);
                evm_noise_nakagami(m, m_i, 1, s2).unwrap() - limit
            })
            .collect();
        ok &= gaps.iter().all(|&g| g > 0.0);
        ok &= gaps.windows(2).all(|w| w[1] < w[0]);
        ok &= gaps[gaps.len() - 1] / limit < 1e-3;
    }
    notes.push("noise gap");
    let _ = &pol;
    Outcome {
        pass: ok,
        detail: format!("monotone checks over {}", notes.join(", ")),
    }
}

fn asymptotics() -> Outcome {
    let r = rel(evm_rayleigh_large_l(100), evm_rayleigh(100));
    let exact = evm_iid_nakagami(50.0, 50.0, 1).unwrap().value;
    let approx = evm_nakagami_large_m(50.0, 50.0, 1);
    let resid = rel(approx, exact);
    // O(m⁻²) with an order-one constant
    let bound = 1.0 / (50.0 * 50.0);
    Outcome {
        pass: r <= 1e-4 && resid <= bound,
        detail: format!(
            "large-L at L=100 rel err {r:.1e} (1e-4); large-m at m=m_I=50 rel residual {resid:.1e} (1/m^2 = {bound:.1e})"
        ),
    }
}

type Check = (&'static str, fn() -> Outcome);

fn main() {
    let checks: [Check; 8] = [
        ("exact closed forms", exact_closed_forms),
        ("sqrt(L) law", sqrt_l_law),
        ("reduction chain", reduction_chain),
        ("identity suite", identity_suite),
        ("Monte Carlo agreement", monte_carlo),
        ("distribution checks", distribution_checks),
        ("qualitative claims", qualitative_claims),
        ("asymptotic expansions", asymptotics),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let o = f();
        println!("{} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
