//! Run configuration read from TOML.
//!
//! ```toml
//! preset = "fig7"            # optional; every other key overrides it
//! variant = "cavity"         # single | two | cavity | general
//! occupations = [[1, 1, 1]]  # [n_g, n_e] or [n_g, n_e, n_c]
//! seed = 1                   # first oracle seed
//! seeds = 100                # number of oracle draws
//!
//! [scaled]                   # or [physical], never both
//! u = 250.0                  # u_g = u_e; or u_g / u_e separately
//! u_eg = 15.0                # both scalings; or u_eg_g / u_eg_e
//! f = 25.0
//! eps_c = 100.0              # both scalings; or eps_c_g / eps_c_e
//! eps_g = 0.0
//! eps_e = 100.0
//!
//! [physical]                 # energies in absolute units, requires --physical
//! j_g = 1.0
//! j_e = 1.0
//! u_g = 250.0
//! u_e = 250.0
//! u_eg = 15.0
//! f_sq = 25.0
//! eps_c = 100.0
//! eps_g = 0.0                # optional
//! eps_e = 100.0              # optional
//! z = 1
//!
//! [axis]                     # horizontal axis, always in scaled units
//! name = "u"                 # u | u_eg | eps_c | F | n_c
//! min = 0.0
//! max = 500.0
//! samples = 401              # or: values = [200.0, 250.0]
//!
//! [mu]                       # vertical axis of figure grids
//! min = 0.0
//! max = 600.0
//! samples = 400
//!
//! [output]
//! dir = "out"
//! format = "csv"             # csv | json
//! ```
//!
//! Unknown keys are errors. Scaled keys that are not given default to zero.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cavity::SweepAxis;
use crate::diagram::DEFAULT_RESOLUTION;
use crate::error::PhaseError;
use crate::params::{Occupation, PhysicalParams, ScaledParams};
use crate::presets::{figure_preset, AxisRange, FigureId, Variant};

const DEFAULT_SAMPLES: usize = 101;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Phase(#[from] PhaseError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<String>,
    pub variant: Option<String>,
    pub occupations: Option<Vec<Vec<f64>>>,
    pub seed: Option<u64>,
    pub seeds: Option<u64>,
    pub scaled: Option<RawScaled>,
    pub physical: Option<RawPhysical>,
    pub axis: Option<RawAxis>,
    pub mu: Option<RawRange>,
    pub output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScaled {
    pub u: Option<f64>,
    pub u_g: Option<f64>,
    pub u_e: Option<f64>,
    pub u_eg: Option<f64>,
    pub u_eg_g: Option<f64>,
    pub u_eg_e: Option<f64>,
    pub f: Option<f64>,
    pub eps_c: Option<f64>,
    pub eps_c_g: Option<f64>,
    pub eps_c_e: Option<f64>,
    pub eps_g: Option<f64>,
    pub eps_e: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPhysical {
    pub j_g: f64,
    pub j_e: f64,
    pub u_g: f64,
    pub u_e: f64,
    pub u_eg: f64,
    pub f_sq: f64,
    pub eps_c: f64,
    #[serde(default)]
    pub eps_g: f64,
    #[serde(default)]
    pub eps_e: f64,
    pub z: u32,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawAxis {
    pub name: Option<String>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub samples: Option<usize>,
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRange {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOutput {
    pub dir: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Fully resolved and validated run settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub variant: Option<Variant>,
    pub preset: Option<FigureId>,
    pub params: ScaledParams,
    pub physical: Option<PhysicalParams>,
    pub occupations: Vec<Occupation>,
    pub axis: SweepAxis,
    pub axis_values: Vec<f64>,
    pub x_range: Option<AxisRange>,
    pub mu_range: AxisRange,
    pub resolution: (usize, usize),
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub seeds: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            variant: None,
            preset: None,
            params: ScaledParams::default(),
            physical: None,
            occupations: Vec::new(),
            axis: SweepAxis::U,
            axis_values: vec![0.0],
            x_range: None,
            mu_range: AxisRange::new(0.0, 100.0),
            resolution: DEFAULT_RESOLUTION,
            output_dir: None,
            format: Format::Csv,
            seed: 0,
            seeds: 100,
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parse TOML into the raw key structure; syntax errors carry a line number.
pub fn parse_raw(text: &str) -> Result<RawConfig, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.span().map_or(1, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })
}

/// Parse and validate a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    parse_raw(text)?.resolve(None, false)
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

fn pick(
    name: &str,
    both: Option<f64>,
    one: Option<f64>,
    other: Option<f64>,
    base: (f64, f64),
) -> Result<(f64, f64), ConfigError> {
    match both {
        Some(_) if one.is_some() || other.is_some() => Err(invalid(format!(
            "[scaled] `{name}` cannot be combined with its per-species keys"
        ))),
        Some(v) => Ok((v, v)),
        None => Ok((one.unwrap_or(base.0), other.unwrap_or(base.1))),
    }
}

impl RawScaled {
    fn apply(&self, base: ScaledParams) -> Result<ScaledParams, ConfigError> {
        let (u_g, u_e) = pick("u", self.u, self.u_g, self.u_e, (base.u_g, base.u_e))?;
        let (u_eg_g, u_eg_e) = pick("u_eg", self.u_eg, self.u_eg_g, self.u_eg_e, (base.u_eg_g, base.u_eg_e))?;
        let (eps_c_g, eps_c_e) = pick("eps_c", self.eps_c, self.eps_c_g, self.eps_c_e, (base.eps_c_g, base.eps_c_e))?;
        Ok(ScaledParams {
            u_g,
            u_e,
            u_eg_g,
            u_eg_e,
            f: self.f.unwrap_or(base.f),
            eps_c_g,
            eps_c_e,
            eps_g: self.eps_g.unwrap_or(base.eps_g),
            eps_e: self.eps_e.unwrap_or(base.eps_e),
        })
    }
}

fn occupation(v: &[f64]) -> Result<Occupation, ConfigError> {
    let count = |x: f64, name: &str| {
        if x >= 0.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) {
            Ok(x as u32)
        } else {
            Err(invalid(format!("occupation {name} = {x} must be a non-negative integer")))
        }
    };
    match v {
        [g, e] => Ok(Occupation::fock(count(*g, "n_g")?, count(*e, "n_e")?, 0)),
        [g, e, c] => Ok(Occupation::new(count(*g, "n_g")?, count(*e, "n_e")?, *c)?),
        _ => Err(invalid("each occupation is [n_g, n_e] or [n_g, n_e, n_c]")),
    }
}

fn range(min: Option<f64>, max: Option<f64>, base: Option<AxisRange>, name: &'static str) -> Result<AxisRange, ConfigError> {
    let r = match (min, max, base) {
        (Some(a), Some(b), _) => AxisRange::new(a, b),
        (a, b, Some(base)) => AxisRange::new(a.unwrap_or(base.min), b.unwrap_or(base.max)),
        _ => return Err(invalid(format!("[{name}] needs both `min` and `max`"))),
    };
    if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
        return Err(PhaseError::EmptyAxis(name).into());
    }
    Ok(r)
}

impl RawConfig {
    /// Expand the preset (or `figure`, when given by the caller) and apply every
    /// explicit key on top. `physical` says whether the physical block is enabled.
    pub fn resolve(self, figure: Option<FigureId>, physical: bool) -> Result<RunConfig, ConfigError> {
        let named = self.preset.as_deref().map(str::parse::<FigureId>).transpose()?;
        let preset_id = match (named, figure) {
            (Some(a), Some(b)) if a != b => {
                return Err(invalid(format!("config preset `{a}` conflicts with requested figure `{b}`")))
            }
            (a, b) => a.or(b),
        };

        let mut cfg = RunConfig::default();
        if let Some(id) = preset_id {
            let p = figure_preset(id);
            cfg.preset = Some(id);
            cfg.variant = Some(p.variant);
            cfg.params = p.params;
            cfg.occupations = p.occupations;
            cfg.axis = p.x_axis;
            cfg.x_range = Some(p.x_range);
            cfg.axis_values = p.x_range.nodes(cfg.resolution.0);
            cfg.mu_range = p.mu_range;
        }

        if let Some(v) = &self.variant {
            cfg.variant = Some(v.parse()?);
        }

        match (&self.scaled, &self.physical) {
            (Some(_), Some(_)) => return Err(invalid("exactly one of [scaled] and [physical] may be given")),
            (Some(_), None) if physical => return Err(invalid("--physical needs a [physical] block, not [scaled]")),
            (None, Some(_)) if !physical => return Err(invalid("[physical] block given without --physical")),
            (Some(s), None) => cfg.params = s.apply(cfg.params)?,
            (None, Some(p)) => {
                let p = PhysicalParams {
                    j_g: p.j_g,
                    j_e: p.j_e,
                    u_g: p.u_g,
                    u_e: p.u_e,
                    u_eg: p.u_eg,
                    f_sq: p.f_sq,
                    eps_g: p.eps_g,
                    eps_e: p.eps_e,
                    eps_c: p.eps_c,
                    z: p.z,
                };
                cfg.params = p.scale()?;
                cfg.physical = Some(p);
            }
            (None, None) if physical => return Err(invalid("--physical needs a [physical] block")),
            (None, None) if preset_id.is_none() => {
                return Err(invalid("a [scaled] or [physical] block (or a preset) is required"))
            }
            (None, None) => {}
        }
        cfg.params.validate()?;

        if let Some(occs) = &self.occupations {
            cfg.occupations = occs.iter().map(|o| occupation(o)).collect::<Result<_, _>>()?;
        }
        if cfg.occupations.is_empty() {
            return Err(invalid("occupation list must not be empty"));
        }

        if let Some(axis) = &self.axis {
            if let Some(name) = &axis.name {
                cfg.axis = SweepAxis::parse(name).ok_or_else(|| invalid(format!("unknown axis `{name}`")))?;
            }
            match (&axis.values, axis.min, axis.max) {
                (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                    return Err(invalid("[axis] takes either `values` or `min`/`max`, not both"))
                }
                (Some(v), None, None) => {
                    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                        return Err(PhaseError::EmptyAxis("axis").into());
                    }
                    cfg.axis_values = v.clone();
                    cfg.x_range = None;
                }
                (None, min, max) => {
                    let samples = axis.samples.unwrap_or(if cfg.preset.is_some() { cfg.resolution.0 } else { DEFAULT_SAMPLES });
                    if samples < 1 {
                        return Err(invalid("[axis] samples must be >= 1"));
                    }
                    if min.is_some() || max.is_some() || cfg.x_range.is_none() {
                        let r = range(min, max, cfg.x_range, "axis")?;
                        cfg.x_range = Some(r);
                    }
                    cfg.resolution.0 = samples;
                    cfg.axis_values = cfg.x_range.map_or_else(Vec::new, |r| r.nodes(samples));
                }
            }
        } else if cfg.preset.is_none() {
            cfg.axis_values = vec![cfg.params.u_g];
        }

        if let Some(mu) = &self.mu {
            cfg.mu_range = range(mu.min, mu.max, Some(cfg.mu_range), "mu")?;
            if let Some(n) = mu.samples {
                cfg.resolution.1 = n;
            }
        }
        if cfg.resolution.0 < 1 || cfg.resolution.1 < 2 {
            return Err(invalid("grid resolution must be at least 2 x 2"));
        }

        if let Some(out) = self.output {
            cfg.output_dir = out.dir;
            cfg.format = out.format.unwrap_or_default();
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(n) = self.seeds {
            cfg.seeds = n;
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_single() {
        let c = parse_config(
            "variant = \"single\"\noccupations = [[1, 0]]\n[scaled]\nu = 20\n[axis]\nname = \"u\"\nmin = 0\nmax = 30\nsamples = 31\n",
        )
        .unwrap();
        assert_eq!(c.variant, Some(Variant::Single));
        assert_eq!(c.params.u_g, 20.0);
        assert_eq!(c.axis_values.len(), 31);
        assert_eq!(c.axis_values[30], 30.0);
    }

    #[test]
    fn both_blocks_rejected() {
        let text = "occupations = [[1,1,1]]\n[scaled]\nu = 1\n[physical]\nj_g=1\nj_e=1\nu_g=1\nu_e=1\nu_eg=0\nf_sq=0\neps_c=1\nz=1\n";
        let err = parse_raw(text).unwrap().resolve(None, true).unwrap_err();
        assert!(err.to_string().contains("exactly one"), "{err}");
    }

    #[test]
    fn preset_expands_caption() {
        let c = parse_config("preset = \"fig7\"\n").unwrap();
        assert_eq!(c.params, ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0));
        assert_eq!(c.occupations, vec![Occupation::fock(1, 1, 1)]);
        assert_eq!(c.variant, Some(Variant::Cavity));
    }

    #[test]
    fn preset_keys_can_be_overridden() {
        let c = parse_config("preset = \"fig7\"\n[scaled]\nu_eg = 30\n").unwrap();
        assert_eq!((c.params.u_eg_g, c.params.f), (30.0, 25.0));
    }

    #[test]
    fn unknown_key_reports_line() {
        match parse_config("preset = \"fig7\"\n\n[scaled]\nbogus = 1\n") {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn physical_needs_flag() {
        let text = "occupations = [[1,1,1]]\n[physical]\nj_g=1\nj_e=2\nu_g=10\nu_e=10\nu_eg=1\nf_sq=4\neps_c=5\nz=2\n";
        assert!(parse_config(text).is_err());
        let c = parse_raw(text).unwrap().resolve(None, true).unwrap();
        assert_eq!(c.params.u_g, 5.0);
        assert_eq!(c.params.u_e, 2.5);
        assert_eq!(c.params.f, 4.0 / 8.0);
    }

    #[test]
    fn conflicting_shorthand() {
        assert!(parse_config("occupations=[[1,1]]\n[scaled]\nu = 1\nu_g = 2\n").is_err());
    }

    #[test]
    fn empty_occupations_and_axis() {
        assert!(parse_config("occupations = []\n[scaled]\nu = 1\n").is_err());
        assert!(matches!(
            parse_config("occupations=[[1,1]]\n[scaled]\nu=1\n[axis]\nmin=3\nmax=3\n"),
            Err(ConfigError::Phase(PhaseError::EmptyAxis("axis")))
        ));
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(
            parse_config("preset = \"fig99\"\n"),
            Err(ConfigError::Phase(PhaseError::UnknownFigure(_)))
        ));
    }
}
