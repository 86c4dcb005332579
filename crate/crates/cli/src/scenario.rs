//! Scenario documents: JSON in, [`EvmScenario`] per sweep point out.

use std::path::Path;

use evm_core::{Constellation, EvmScenario, InterfererProfile, McConfig, ShadowedFadingParams};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Parameters that may be written as a number or as "inf".
mod inf_f64 {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Word(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            Repr::Word("inf".into()).serialize(s)
        } else {
            Repr::Num(*v).serialize(s)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Word(w) if w.eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {w:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSpec {
    #[serde(with = "inf_f64")]
    pub kappa: f64,
    pub mu: f64,
    #[serde(with = "inf_f64")]
    pub m: f64,
}

impl FadingSpec {
    fn params(&self, what: &str) -> Result<ShadowedFadingParams, CliError> {
        ShadowedFadingParams::new(self.kappa, self.mu, self.m)
            .map_err(|e| CliError::Validation(format!("{what}: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IidSpec {
    pub iid: FadingSpec,
    #[serde(rename = "L")]
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InterferersSpec {
    List(Vec<FadingSpec>),
    Iid(IidSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub block_length: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constellation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub desired: FadingSpec,
    pub interferers: InterferersSpec,
    #[serde(default)]
    pub sigma2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc: Option<McSpec>,
}

/// Scalar fields a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Sigma2,
    /// 10 log10(1/σ²)
    SnrDb,
    Count,
    Desired(Field),
    Iid(Field),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Kappa,
    Mu,
    M,
}

impl SweepVariable {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        let field = |f: &str| match f {
            "kappa" => Some(Field::Kappa),
            "mu" => Some(Field::Mu),
            "m" => Some(Field::M),
            _ => None,
        };
        let v = match name {
            "sigma2" => Some(SweepVariable::Sigma2),
            "snr_db" => Some(SweepVariable::SnrDb),
            "L" => Some(SweepVariable::Count),
            _ => match name.split_once('.') {
                Some(("desired", f)) => field(f).map(SweepVariable::Desired),
                Some(("iid", f)) => field(f).map(SweepVariable::Iid),
                _ => None,
            },
        };
        v.ok_or_else(|| {
            CliError::Validation(format!(
                "unknown sweep variable {name:?}; expected sigma2, snr_db, L, desired.kappa|mu|m or iid.kappa|mu|m"
            ))
        })
    }
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: ScenarioFile =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("scenario file: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(sw) = &self.sweep {
            let var = SweepVariable::parse(&sw.variable)?;
            if sw.values.is_empty() {
                return Err(CliError::Validation("sweep.values is empty".into()));
            }
            let iid = matches!(self.interferers, InterferersSpec::Iid(_));
            if matches!(var, SweepVariable::Count | SweepVariable::Iid(_)) && !iid {
                return Err(CliError::Validation(format!(
                    "sweep variable {:?} needs the {{\"iid\": …, \"L\": …}} interferer form",
                    sw.variable
                )));
            }
        }
        for v in self.sweep_points() {
            self.scenario_at(v)?;
        }
        if let Some(mc) = &self.mc {
            if let Some(c) = &mc.constellation {
                parse_constellation(c)?;
            }
        }
        Ok(())
    }

    /// Sweep values, or a single unnamed point.
    pub fn sweep_points(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(sw) => sw.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }

    pub fn scenario_at(&self, value: Option<f64>) -> Result<EvmScenario, CliError> {
        let mut desired = self.desired;
        let mut interferers = self.interferers.clone();
        let mut sigma2 = self.sigma2;
        if let (Some(sw), Some(v)) = (&self.sweep, value) {
            let set = |f: &mut FadingSpec, field: Field| match field {
                Field::Kappa => f.kappa = v,
                Field::Mu => f.mu = v,
                Field::M => f.m = v,
            };
            match SweepVariable::parse(&sw.variable)? {
                SweepVariable::Sigma2 => sigma2 = v,
                SweepVariable::SnrDb => sigma2 = 10f64.powf(-v / 10.0),
                SweepVariable::Desired(f) => set(&mut desired, f),
                SweepVariable::Count => {
                    if let InterferersSpec::Iid(spec) = &mut interferers {
                        if v < 1.0 || v.fract() != 0.0 {
                            return Err(CliError::Validation(format!("L must be a positive integer, got {v}")));
                        }
                        spec.count = v as usize;
                    }
                }
                SweepVariable::Iid(f) => {
                    if let InterferersSpec::Iid(spec) = &mut interferers {
                        set(&mut spec.iid, f);
                    }
                }
            }
        }
        let d = desired.params("desired")?;
        let entries = match &interferers {
            InterferersSpec::List(list) => list
                .iter()
                .enumerate()
                .map(|(i, f)| f.params(&format!("interferers[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
            InterferersSpec::Iid(spec) => vec![spec.iid.params("interferers.iid")?; spec.count],
        };
        let profile = InterfererProfile::new(entries).map_err(|e| CliError::Validation(format!("interferers: {e}")))?;
        EvmScenario::new(d, profile, sigma2).map_err(|e| CliError::Validation(format!("sigma2: {e}")))
    }

    /// MC settings from the document with command-line overrides applied.
    pub fn mc_config(&self, seed: Option<u64>, blocks: Option<u64>, workers: Option<usize>) -> Result<McConfig, CliError> {
        let spec = self.mc.clone().unwrap_or(McSpec {
            block_length: None,
            blocks: None,
            seed: None,
            workers: None,
            constellation: None,
        });
        let mut cfg = McConfig::default();
        if let Some(n) = spec.block_length {
            cfg.block_length = n;
        }
        if let Some(b) = blocks.or(spec.blocks) {
            cfg.num_blocks = b;
        }
        if let Some(s) = seed.or(spec.seed) {
            cfg.seed = s;
        }
        if let Some(w) = workers.or(spec.workers) {
            cfg.workers = w;
        }
        if let Some(c) = &spec.constellation {
            cfg.constellation = parse_constellation(c)?;
        }
        cfg.validate().map_err(|e| CliError::Validation(format!("mc: {e}")))?;
        Ok(cfg)
    }
}

pub fn parse_constellation(name: &str) -> Result<Constellation, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "bpsk" => Ok(Constellation::Bpsk),
        "qpsk" => Ok(Constellation::Qpsk),
        _ => Err(CliError::Validation(format!("unknown constellation {name:?}; expected bpsk or qpsk"))),
    }
}
