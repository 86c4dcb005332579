//! Datasets behind the published EVM figures.
//!
//! Each figure is a set of curves; every curve maps an x value to a
//! scenario. SNR axes use SNR = 1/σ² (unit symbol energy and unit-mean
//! desired power). Curve parameters the captions leave open are chosen here
//! and recorded in the manifest.

use std::path::Path;

use evm_core::{
    empirical_evm, evaluate, EvmScenario, InterfererProfile, McConfig, PrecisionPolicy, ShadowedFadingParams,
};
use serde::Serialize;
use serde_json::json;

use crate::commands::fmt_opt;
use crate::error::CliError;

pub const FIGURE_IDS: [u32; 6] = [1, 2, 3, 4, 5, 6];

const INF: f64 = f64::INFINITY;

#[derive(Debug, Clone, Serialize)]
pub struct Point {
    pub x: f64,
    pub analytic_evm: f64,
    pub mc_evm: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub formula_used: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Curve {
    pub label: String,
    pub parameters: serde_json::Value,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure {
    pub schema: u32,
    pub id: u32,
    pub title: String,
    pub x_axis: String,
    pub y_axis: String,
    pub conventions: Vec<String>,
    pub curves: Vec<Curve>,
}

struct CurveSpec {
    label: String,
    parameters: serde_json::Value,
    xs: Vec<f64>,
    build: Box<dyn Fn(f64) -> EvmScenario>,
}

fn p(k: f64, mu: f64, m: f64) -> ShadowedFadingParams {
    ShadowedFadingParams::new(k, mu, m).expect("figure parameters are valid")
}

fn scen(d: ShadowedFadingParams, i: ShadowedFadingParams, l: usize, s2: f64) -> EvmScenario {
    EvmScenario::new(d, InterfererProfile::iid(i, l).expect("L >= 1"), s2).expect("valid noise")
}

fn fmt_param(v: f64) -> serde_json::Value {
    if v.is_infinite() {
        json!("inf")
    } else {
        json!(v)
    }
}

fn triple(q: ShadowedFadingParams) -> serde_json::Value {
    json!({"kappa": fmt_param(q.kappa()), "mu": q.mu(), "m": fmt_param(q.m())})
}

fn l_axis() -> Vec<f64> {
    (1..=10).map(f64::from).collect()
}

fn snr_axis(max_db: u32) -> Vec<f64> {
    (0..=max_db).step_by(2).map(f64::from).collect()
}

fn sigma2_of(db: f64) -> f64 {
    10f64.powf(-db / 10.0)
}

fn specs(id: u32) -> Result<(String, String, Vec<CurveSpec>), CliError> {
    let mut curves = Vec::new();
    let (title, x_axis) = match id {
        1 => {
            for &k_i in &[0.0, 5.0, 15.0] {
                for &k in &[0.0, 5.0, 10.0, 15.0] {
                    curves.push(CurveSpec {
                        label: format!("K={k}, K_I={k_i}"),
                        parameters: json!({"K": k, "K_I": k_i}),
                        xs: l_axis(),
                        build: Box::new(move |l| scen(p(k, 1.0, INF), p(k_i, 1.0, INF), l as usize, 0.0)),
                    });
                }
            }
            curves.push(CurveSpec {
                label: "K=K_I=inf".into(),
                parameters: json!({"K": "inf", "K_I": "inf"}),
                xs: l_axis(),
                build: Box::new(|l| scen(p(INF, 1.0, INF), p(INF, 1.0, INF), l as usize, 0.0)),
            });
            ("Interference-limited EVM, Rician desired link and Rician interferers", "L")
        }
        2 => {
            for (k, mu, m) in [(1.0, 1.5, 1.0), (3.0, 1.5, 1.0), (1.0, 3.0, 1.0), (1.0, 1.5, 5.0), (3.0, 3.0, 5.0)] {
                let d = p(k, mu, m);
                curves.push(CurveSpec {
                    label: format!("kappa={k}, mu={mu}, m={m}"),
                    parameters: json!({"desired": triple(d), "m_I": 1.0, "L": 1}),
                    xs: snr_axis(30),
                    build: Box::new(move |db| scen(d, p(0.0, 1.0, INF), 1, sigma2_of(db))),
                });
            }
            ("EVM with interference and noise, kappa-mu shadowed desired link, m_I = 1, L = 1", "SNR (dB)")
        }
        3 => {
            let cases = [
                ("Rayleigh", p(0.0, 1.0, INF), p(0.0, 1.0, INF)),
                ("Rician K=5, K_I=1", p(5.0, 1.0, INF), p(1.0, 1.0, INF)),
                ("Nakagami m=2, m_I=1.5", p(0.0, 2.0, INF), p(0.0, 1.5, INF)),
                ("kappa-mu (2,1.5) / (1,1)", p(2.0, 1.5, INF), p(1.0, 1.0, INF)),
                ("kappa-mu shadowed (2,1.5,3) / (1,1,2)", p(2.0, 1.5, 3.0), p(1.0, 1.0, 2.0)),
            ];
            for (label, d, i) in cases {
                curves.push(CurveSpec {
                    label: label.into(),
                    parameters: json!({"desired": triple(d), "interferer": triple(i)}),
                    xs: l_axis(),
                    build: Box::new(move |l| scen(d, i, l as usize, 0.0)),
                });
            }
            ("Interference-limited EVM for different fading laws, i.i.d. interferers", "L")
        }
        4 => {
            for (m, m_i) in [(2.0, 1.0), (4.0, 2.0)] {
                let d = p(0.0, m, INF);
                let i = p(0.0, m_i, INF);
                curves.push(CurveSpec {
                    label: format!("interference + noise, m={m}, m_I={m_i}"),
                    parameters: json!({"m": m, "m_I": m_i, "L": 1, "noise": true}),
                    xs: snr_axis(40),
                    build: Box::new(move |db| scen(d, i, 1, sigma2_of(db))),
                });
                curves.push(CurveSpec {
                    label: format!("interference limited, m={m}, m_I={m_i}"),
                    parameters: json!({"m": m, "m_I": m_i, "L": 1, "noise": false}),
                    xs: snr_axis(40),
                    build: Box::new(move |_| scen(d, i, 1, 0.0)),
                });
            }
            ("Nakagami EVM with and without noise, L = 1", "SNR (dB)")
        }
        5 => {
            let ms = vec![0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0];
            for &l in &[1usize, 2, 4, 8] {
                curves.push(CurveSpec {
                    label: format!("L={l}"),
                    parameters: json!({"m_I": 5.0, "L": l}),
                    xs: ms.clone(),
                    build: Box::new(move |m| scen(p(0.0, m, INF), p(0.0, 5.0, INF), l, 0.0)),
                });
            }
            ("Interference-limited Nakagami EVM versus desired m, m_I = 5", "m")
        }
        6 => {
            let cases = [
                ("Rician K=5", p(5.0, 1.0, INF)),
                ("Nakagami m=2", p(0.0, 2.0, INF)),
                ("Rayleigh", p(0.0, 1.0, INF)),
            ];
            for (label, d) in cases {
                curves.push(CurveSpec {
                    label: label.into(),
                    parameters: json!({"desired": triple(d), "m_I": 2.0, "L": 2}),
                    xs: snr_axis(30),
                    build: Box::new(move |db| scen(d, p(0.0, 2.0, INF), 2, sigma2_of(db))),
                });
            }
            ("EVM with interference and noise for different desired-link fading, Nakagami interferers", "SNR (dB)")
        }
        _ => {
            return Err(CliError::Validation(format!(
                "unknown figure id {id}; expected one of {FIGURE_IDS:?}"
            )))
        }
    };
    Ok((title.to_string(), x_axis.to_string(), curves))
}

/// Builds a figure dataset; with `mc`, each point also carries a simulated value.
pub fn build(id: u32, mc: Option<&McConfig>) -> Result<Figure, CliError> {
    let (title, x_axis, specs) = specs(id)?;
    let policy = PrecisionPolicy::default();
    let mut curves = Vec::with_capacity(specs.len());
    for spec in specs {
        let mut points = Vec::with_capacity(spec.xs.len());
        for &x in &spec.xs {
            let s = (spec.build)(x);
            let r = evaluate(&s, &policy)?;
            let (mc_evm, mc_stderr) = match mc {
                Some(cfg) => {
                    let e = empirical_evm(&s, cfg)?;
                    (Some(e.mean), Some(e.stderr))
                }
                None => (None, None),
            };
            points.push(Point {
                x,
                analytic_evm: r.value,
                mc_evm,
                mc_stderr,
                formula_used: r.formula_used.name().to_string(),
            });
        }
        curves.push(Curve {
            label: spec.label,
            parameters: spec.parameters,
            points,
        });
    }
    let mut conventions = vec![
        "unit symbol energy and unit-mean fading powers".to_string(),
        "EVM is the mean block RMS error after equalization, as a ratio (not dB)".to_string(),
    ];
    if x_axis.starts_with("SNR") {
        conventions.push("SNR = 1/sigma^2, in dB".to_string());
    }
    if let Some(cfg) = mc {
        conventions.push(format!(
            "Monte Carlo: {} blocks of {} {} symbols, seed {}",
            cfg.num_blocks,
            cfg.block_length,
            cfg.constellation.name(),
            cfg.seed
        ));
    }
    Ok(Figure {
        schema: 1,
        id,
        title,
        x_axis,
        y_axis: "EVM".into(),
        conventions,
        curves,
    })
}

/// Writes `figure<id>.csv` and `figure<id>.json` into `dir`.
pub fn write(fig: &Figure, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let csv_path = dir.join(format!("figure{}.csv", fig.id));
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| CliError::Io(format!("{}: {e}", csv_path.display())))?;
    w.write_record(["curve", "x", "analytic_evm", "mc_evm", "mc_stderr", "formula_used"])?;
    for c in &fig.curves {
        for pt in &c.points {
            w.write_record([
                c.label.clone(),
                pt.x.to_string(),
                pt.analytic_evm.to_string(),
                fmt_opt(pt.mc_evm),
                fmt_opt(pt.mc_stderr),
                pt.formula_used.clone(),
            ])?;
        }
    }
    w.flush()?;
    let manifest = json!({
        "schema": fig.schema,
        "id": fig.id,
        "title": fig.title,
        "data": format!("figure{}.csv", fig.id),
        "x_axis": fig.x_axis,
        "y_axis": fig.y_axis,
        "conventions": fig.conventions,
        "curves": fig.curves.iter().map(|c| json!({"label": c.label, "parameters": c.parameters})).collect::<Vec<_>>(),
    });
    let json_path = dir.join(format!("figure{}.json", fig.id));
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(&json_path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(fig: &Figure, curve: usize) -> Vec<f64> {
        fig.curves[curve].points.iter().map(|p| p.analytic_evm).collect()
    }

    #[test]
    fn every_figure_builds() {
        for id in FIGURE_IDS {
            let f = build(id, None).unwrap();
            assert!(!f.curves.is_empty());
            assert!(f.curves.iter().all(|c| c.points.iter().all(|p| p.analytic_evm > 0.0)));
        }
        assert!(build(7, None).is_err());
    }

    #[test]
    fn rician_grid_trends() {
        let f = build(1, None).unwrap();
        for c in 0..f.curves.len() {
            assert!(values(&f, c).windows(2).all(|w| w[1] > w[0]));
        }
        // K_I = 15 block: decreasing in K at every L
        let block: Vec<Vec<f64>> = (8..12).map(|c| values(&f, c)).collect();
        for l in 0..10 {
            assert!(block.windows(2).all(|w| w[1][l] < w[0][l]));
        }
        let limit = values(&f, 12);
        assert!((limit[3] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn noise_gap_shrinks_with_snr() {
        let f = build(4, None).unwrap();
        for pair in [(0, 1), (2, 3)] {
            let noisy = values(&f, pair.0);
            let limited = values(&f, pair.1);
            let gap: Vec<f64> = noisy.iter().zip(&limited).map(|(a, b)| a - b).collect();
            assert!(gap.iter().all(|&g| g > 0.0));
            assert!(gap.windows(2).all(|w| w[1] < w[0]));
        }
    }
}
