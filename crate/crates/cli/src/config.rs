//! Flat `key=value` run configuration.
//!
//! Keys: `scheme` (required), `h`, `tau`, `n_x`, `n_t` (required), `c`
//! (default 1), `k` (default pi), `startup` (default `exact-seed`),
//! `output_path`, `emit_svg` (default false). `#` starts a comment.

use std::f64::consts::PI;
use std::str::FromStr;

use drp_core::sylvester::tune_scheme_with;
use drp_core::{Discretization, Preset, SchemeCoefficients, Startup, TuneVariant};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeSelector {
    Preset(Preset),
    Tuned(TuneVariant),
}

impl SchemeSelector {
    pub fn label(self) -> &'static str {
        match self {
            SchemeSelector::Preset(p) => p.label(),
            SchemeSelector::Tuned(TuneVariant::Paper) => "tuned",
            SchemeSelector::Tuned(TuneVariant::Oracle) => "tuned-oracle",
        }
    }
}

impl FromStr for SchemeSelector {
    type Err = drp_core::Error;

    fn from_str(s: &str) -> drp_core::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tuned" => Ok(SchemeSelector::Tuned(TuneVariant::Paper)),
            "tuned-oracle" | "tuned_oracle" => Ok(SchemeSelector::Tuned(TuneVariant::Oracle)),
            _ => s.parse().map(SchemeSelector::Preset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: SchemeSelector,
    pub h: f64,
    pub tau: f64,
    pub c: f64,
    pub k: f64,
    pub n_x: usize,
    pub n_t: usize,
    pub startup: Startup,
    pub output_path: Option<String>,
    pub emit_svg: bool,
}

impl RunConfig {
    pub fn discretization(&self) -> CliResult<Discretization> {
        Ok(Discretization::new(
            self.h, self.tau, self.n_x, self.n_t, self.c,
        )?)
    }

    pub fn coefficients(&self) -> CliResult<SchemeCoefficients> {
        let s = match self.scheme {
            SchemeSelector::Preset(p) => {
                SchemeCoefficients::preset_for_speed(p, self.h, self.tau, self.c)?
            }
            SchemeSelector::Tuned(v) => tune_scheme_with(self.h, self.tau, v)?,
        };
        Ok(s)
    }

    pub fn sigma(&self) -> f64 {
        drp_core::courant_number(self.c, self.h, self.tau)
    }
}

pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let mut scheme = None;
    let (mut h, mut tau, mut n_x, mut n_t) = (None, None, None, None);
    let mut c = 1.0;
    let mut k = PI;
    let mut startup = Startup::ExactSeed;
    let mut output_path = None;
    let mut emit_svg = false;
    let mut seen: Vec<String> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Parse { line, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected key=value, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if seen.iter().any(|s| s == key) {
            return Err(err(format!("duplicate key `{key}`")));
        }
        seen.push(key.to_string());
        let real = |v: &str| -> CliResult<f64> {
            v.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(format!("`{key}` expects a finite number, got `{v}`")))
        };
        let count = |v: &str| -> CliResult<usize> {
            v.parse::<usize>()
                .map_err(|_| err(format!("`{key}` expects a nonnegative integer, got `{v}`")))
        };
        match key {
            "scheme" => {
                scheme = Some(
                    value
                        .parse::<SchemeSelector>()
                        .map_err(|e| err(e.to_string()))?,
                )
            }
            "h" => h = Some(real(value)?),
            "tau" => tau = Some(real(value)?),
            "c" => c = real(value)?,
            "k" => k = real(value)?,
            "n_x" => n_x = Some(count(value)?),
            "n_t" => n_t = Some(count(value)?),
            "startup" => {
                startup = value
                    .parse()
                    .map_err(|e: drp_core::Error| err(e.to_string()))?
            }
            "output_path" => output_path = Some(value.to_string()),
            "emit_svg" => {
                emit_svg = match value.to_ascii_lowercase().as_str() {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => {
                        return Err(err(format!(
                            "`emit_svg` expects true or false, got `{value}`"
                        )))
                    }
                }
            }
            _ => return Err(err(format!("unknown key `{key}`"))),
        }
    }

    let cfg = RunConfig {
        scheme: scheme.ok_or(CliError::MissingKey("scheme"))?,
        h: h.ok_or(CliError::MissingKey("h"))?,
        tau: tau.ok_or(CliError::MissingKey("tau"))?,
        c,
        k,
        n_x: n_x.ok_or(CliError::MissingKey("n_x"))?,
        n_t: n_t.ok_or(CliError::MissingKey("n_t"))?,
        startup,
        output_path,
        emit_svg,
    };
    cfg.discretization()?;
    Ok(cfg)
}
