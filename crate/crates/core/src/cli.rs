//! `phases` command line.
//!
//! Exit codes: 0 success, 1 invalid input or configuration, 2 numerical
//! failure (pole, singular interaction), 3 oracle verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cavity::{mott_existence_in_f, mott_existence_in_u, SweepAxis};
use crate::config::{parse_raw, ConfigError, Format, RawConfig, RunConfig};
use crate::diagram::{scan_grid, sector_crossings, species_window, window_at, PhaseGrid, PhaseLabel};
use crate::error::PhaseError;
use crate::oracle::{verify_random, OracleReport};
use crate::output::{
    boundaries_csv, grid_csv, json_document, occupation_key, windows_csv, windows_json, write_atomic, Header,
    WindowRow,
};
use crate::params::{Occupation, Species};
use crate::presets::{FigureId, FigurePreset, Variant};
use crate::roots::ParameterSet;

#[derive(Debug, Parser)]
#[command(name = "phases", version, about = "Superfluid / Mott-insulator phase boundaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Number of random oracle draws.
    #[arg(long, global = true)]
    pub seeds: Option<u64>,
    /// First oracle seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Read parameters from the [physical] block instead of [scaled].
    #[arg(long, global = true)]
    pub physical: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-component lobes.
    Single {
        /// Atoms per site (comma separated).
        #[arg(long, value_delimiter = ',')]
        n: Vec<u32>,
        /// Interaction values u = U/zJ (comma separated).
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
    },
    /// Two-component windows without the cavity.
    Two {
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
    },
    /// Cavity-limit windows.
    Cavity {
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
    },
    /// Windows from the full boundary condition.
    General {
        #[arg(long, value_delimiter = ',')]
        u: Vec<f64>,
    },
    /// Compare the closed-form coefficients against brute-force state sums.
    Oracle,
    /// Phase grid and boundary lines of a figure preset.
    Figure {
        /// fig1, fig3, fig4, fig5, fig7 ... fig18
        id: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("oracle verification failed for {failed} of {total} draws")]
    Oracle { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Phase(e) | CliError::Config(ConfigError::Phase(e)) if e.is_numerical() => 2,
            CliError::Oracle { .. } => 3,
            _ => 1,
        }
    }
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load(cli: &Cli, figure: Option<FigureId>) -> Result<Option<RunConfig>, CliError> {
    let raw = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            parse_raw(&text)?
        }
        None if cli.physical => return Err(CliError::Usage("--physical needs --config".into())),
        None if figure.is_none() => return Ok(None),
        None => RawConfig::default(),
    };
    let mut cfg = raw.resolve(figure, cli.physical)?;
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = Some(o.clone());
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(n) = cli.seeds {
        cfg.seeds = n;
    }
    Ok(Some(cfg))
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Single { n, u } => {
            let mut cfg = load(cli, None)?.unwrap_or_default();
            if cli.config.is_none() {
                cfg.format = cli.format.unwrap_or_default();
                cfg.output_dir = cli.out.clone();
            }
            if !n.is_empty() {
                cfg.occupations = n.iter().map(|&n| Occupation::fock(n, 0, 0)).collect();
            }
            if cfg.occupations.is_empty() {
                return Err(CliError::Usage("single needs --n or occupations in --config".into()));
            }
            override_u(&mut cfg, u, cli.config.is_none())?;
            windows_command(Variant::Single, &cfg, stdout)
        }
        Command::Two { u } | Command::Cavity { u } | Command::General { u } => {
            let variant = match cli.command {
                Command::Two { .. } => Variant::Two,
                Command::Cavity { .. } => Variant::Cavity,
                _ => Variant::General,
            };
            let mut cfg = load(cli, None)?
                .ok_or_else(|| CliError::Usage(format!("{variant} needs --config")))?;
            override_u(&mut cfg, u, false)?;
            windows_command(variant, &cfg, stdout)
        }
        Command::Oracle => {
            let cfg = match load(cli, None)? {
                Some(c) => c,
                None => RunConfig {
                    seed: cli.seed.unwrap_or(0),
                    seeds: cli.seeds.unwrap_or(100),
                    format: cli.format.unwrap_or_default(),
                    output_dir: cli.out.clone(),
                    ..RunConfig::default()
                },
            };
            oracle_command(&cfg, stdout)
        }
        Command::Figure { id } => {
            let id: FigureId = id.parse()?;
            let cfg = load(cli, Some(id))?.expect("figure always resolves a config");
            figure_command(id, &cfg, stdout)
        }
    }
}

fn override_u(cfg: &mut RunConfig, u: &[f64], required: bool) -> Result<(), CliError> {
    if !u.is_empty() {
        if u.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Usage("--u values must be finite".into()));
        }
        cfg.axis = SweepAxis::U;
        cfg.axis_values = u.to_vec();
        cfg.x_range = None;
    } else if required {
        return Err(CliError::Usage("single needs --u or an [axis] in --config".into()));
    }
    Ok(())
}

fn drawn_species(variant: Variant, occ: &Occupation) -> Vec<Species> {
    if variant == Variant::Single {
        return vec![Species::Ground];
    }
    Species::BOTH.into_iter().filter(|s| occ.count(*s) > 0).collect()
}

fn window_rows(variant: Variant, cfg: &RunConfig) -> Result<Vec<WindowRow>, PhaseError> {
    let mut rows = Vec::new();
    for occ in &cfg.occupations {
        for species in drawn_species(variant, occ) {
            for &x in &cfg.axis_values {
                let (sp, o) = cfg.axis.apply(&cfg.params, occ, x)?;
                rows.push(WindowRow {
                    variant: variant.as_str().to_string(),
                    species,
                    occupation: *occ,
                    axis_name: cfg.axis.name().to_string(),
                    axis_value: x,
                    window: species_window(variant, species, &o, &sp)?,
                });
            }
        }
    }
    Ok(rows)
}

fn header_for(kind: &str, variant: Option<Variant>, cfg: &RunConfig) -> Header {
    let mut h = Header::new(kind);
    if let Some(v) = variant {
        h.push("variant", v.as_str());
    }
    if let Some(id) = cfg.preset {
        h.push("preset", id.as_str());
    }
    h.scaled(&cfg.params);
    if let Some(p) = &cfg.physical {
        for (k, v) in [
            ("j_g", p.j_g),
            ("j_e", p.j_e),
            ("u_g", p.u_g),
            ("u_e", p.u_e),
            ("u_eg", p.u_eg),
            ("f_sq", p.f_sq),
            ("eps_g", p.eps_g),
            ("eps_e", p.eps_e),
            ("eps_c", p.eps_c),
        ] {
            h.push_num(format!("physical.{k}"), v);
        }
        h.push("physical.z", p.z.to_string());
    }
    h.occupations(&cfg.occupations);
    h.push("axis", cfg.axis.name());
    if cfg.axis == SweepAxis::EpsC {
        // the photon energy moves alone; atomic level offsets stay at their configured values
        h.push("held_fixed", "eps_g,eps_e");
    }
    h
}

fn parameter_set_json(s: &ParameterSet) -> Value {
    json!({
        "roots": s.roots,
        "intervals": s.intervals.iter().map(|i| {
            json!([i.lo, if i.hi.is_finite() { json!(i.hi) } else { json!("inf") }])
        }).collect::<Vec<_>>(),
    })
}

fn existence_json(cfg: &RunConfig) -> Value {
    let mut out = Vec::new();
    for occ in &cfg.occupations {
        for species in drawn_species(Variant::Cavity, occ) {
            out.push(json!({
                "occupation": occupation_key(occ),
                "species": species,
                "in_u_at_F": parameter_set_json(&mott_existence_in_u(species, occ, cfg.params.f)),
                "in_F_at_u": parameter_set_json(&mott_existence_in_f(species, occ, cfg.params.u(species))),
            }));
        }
    }
    Value::Array(out)
}

fn emit(cfg: &RunConfig, name: &str, contents: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cfg.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_atomic(&dir.join(name), contents)?;
        }
        None => stdout.write_all(contents.as_bytes())?,
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    write_atomic(&dir.join(name), contents)?;
    Ok(())
}

fn windows_command(variant: Variant, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let rows = window_rows(variant, cfg)?;
    let header = header_for("windows", Some(variant), cfg);
    let summary = (variant == Variant::Cavity).then(|| json!({ "existence": existence_json(cfg) }));
    match cfg.format {
        Format::Csv => {
            emit(cfg, "windows.csv", &windows_csv(&header, &rows), stdout)?;
            if let (Some(dir), Some(s)) = (&cfg.output_dir, &summary) {
                write_file(dir, "summary.json", &json_document(&header, s.clone()))?;
            }
        }
        Format::Json => emit(cfg, "windows.json", &windows_json(&header, &rows, summary), stdout)?,
    }
    Ok(())
}

fn oracle_command(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let results = verify_random(cfg.seed, cfg.seeds);
    let total = results.len();
    let mut reports: Vec<OracleReport> = Vec::with_capacity(total);
    let mut failed = 0;
    let mut text = format!("# schema_version={}\n# kind=oracle\n# seed={}\n# seeds={}\n", crate::output::SCHEMA_VERSION, cfg.seed, cfg.seeds);
    for r in results {
        match r {
            Ok(rep) => {
                if !rep.pass {
                    failed += 1;
                }
                text.push_str(&rep.to_string());
                reports.push(rep);
            }
            Err(e) => {
                failed += 1;
                text.push_str(&format!("oracle error: {e}\n"));
            }
        }
    }
    text.push_str(&format!("oracle: {}/{} passed\n", total - failed, total));
    match cfg.format {
        Format::Csv => emit(cfg, "oracle.txt", &text, stdout)?,
        Format::Json => {
            let mut h = Header::new("oracle");
            h.push("seed", cfg.seed.to_string()).push("seeds", cfg.seeds.to_string());
            let body = json!({
                "passed": total - failed,
                "total": total,
                "reports": serde_json::to_value(&reports).expect("reports serialize"),
            });
            emit(cfg, "oracle.json", &json_document(&h, body), stdout)?;
        }
    }
    if failed > 0 {
        return Err(CliError::Oracle { failed, total });
    }
    Ok(())
}

fn figure_summary(preset: &FigurePreset, grid: &PhaseGrid) -> Value {
    let layers: Vec<Value> = grid
        .layers
        .iter()
        .map(|l| {
            let counts: serde_json::Map<String, Value> =
                PhaseLabel::ALL.iter().map(|lab| (lab.as_str().to_string(), json!(l.count(*lab)))).collect();
            json!({ "occupation": occupation_key(&l.occupation), "label_counts": counts })
        })
        .collect();
    let polylines: Vec<Value> = grid
        .boundaries
        .iter()
        .map(|p| {
            json!({
                "occupation": occupation_key(&p.occupation),
                "species": p.species,
                "branch": p.branch,
                "points": p.points.len(),
                "x_first": p.points.first().map(|q| q.0),
                "x_last": p.points.last().map(|q| q.0),
            })
        })
        .collect();
    let reference = preset.reference.map(|x| {
        let windows: Vec<Value> = preset
            .occupations
            .iter()
            .flat_map(|occ| drawn_species(preset.variant, occ).into_iter().map(move |s| (occ, s)))
            .map(|(occ, s)| {
                let w = window_at(preset, occ, s, x);
                json!({
                    "occupation": occupation_key(occ),
                    "species": s,
                    "mu_minus": w.as_ref().ok().and_then(|w| w.lower()),
                    "mu_plus": w.as_ref().ok().and_then(|w| w.upper()),
                    "present": w.as_ref().is_ok_and(|w| w.is_present()),
                })
            })
            .collect();
        json!({ "axis_value": x, "windows": windows })
    });
    let crossings: Vec<Value> = sector_crossings(preset, 2001)
        .into_iter()
        .map(|c| {
            json!({
                "a": occupation_key(&c.a),
                "b": occupation_key(&c.b),
                "species": c.crossing.species,
                "branch": c.crossing.branch,
                "u": c.crossing.u,
                "mu": c.crossing.mu,
            })
        })
        .collect();
    json!({
        "figure": preset.id.map(|i| i.as_str()),
        "variant": preset.variant,
        "x_axis": preset.x_axis.name(),
        "x_range": [preset.x_range.min, preset.x_range.max],
        "mu_range": [preset.mu_range.min, preset.mu_range.max],
        "resolution": [grid.x.len(), grid.mu.len()],
        "layers": layers,
        "polylines": polylines,
        "reference": reference,
        "crossings": crossings,
    })
}

fn figure_command(id: FigureId, cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let base = crate::presets::figure_preset(id);
    let x_range = cfg
        .x_range
        .ok_or_else(|| CliError::Usage("figure grids need an [axis] range, not a value list".into()))?;
    let preset = FigurePreset {
        id: Some(id),
        variant: cfg.variant.unwrap_or(base.variant),
        params: cfg.params,
        occupations: cfg.occupations.clone(),
        x_axis: cfg.axis,
        x_range,
        mu_range: cfg.mu_range,
        reference: base.reference,
    };
    let grid = scan_grid(&preset, cfg.resolution)?;
    let mut header = header_for("figure", Some(preset.variant), cfg);
    header
        .push_num("x_min", x_range.min)
        .push_num("x_max", x_range.max)
        .push_num("mu_min", preset.mu_range.min)
        .push_num("mu_max", preset.mu_range.max)
        .push("resolution", format!("{}x{}", grid.x.len(), grid.mu.len()));
    let summary = json_document(&header, figure_summary(&preset, &grid));

    let Some(dir) = &cfg.output_dir else {
        stdout.write_all(summary.as_bytes())?;
        return Ok(());
    };
    fs::create_dir_all(dir)?;
    let rows: Vec<WindowRow> = preset
        .occupations
        .iter()
        .flat_map(|occ| drawn_species(preset.variant, occ).into_iter().map(move |s| (occ, s)))
        .flat_map(|(occ, s)| {
            let preset = &preset;
            grid.x.iter().map(move |&x| WindowRow {
                variant: preset.variant.as_str().to_string(),
                species: s,
                occupation: *occ,
                axis_name: preset.x_axis.name().to_string(),
                axis_value: x,
                window: window_at(preset, occ, s, x).unwrap_or(crate::window::MottWindow::Absent),
            })
        })
        .collect();
    match cfg.format {
        Format::Csv => {
            for (k, layer) in grid.layers.iter().enumerate() {
                let name = format!("{id}_grid_{}.csv", occupation_key(&layer.occupation));
                write_file(dir, &name, &grid_csv(&header, &grid, k))?;
            }
            write_file(dir, &format!("{id}_boundaries.csv"), &boundaries_csv(&header, &grid))?;
            write_file(dir, &format!("{id}_windows.csv"), &windows_csv(&header, &rows))?;
        }
        Format::Json => {
            let body = json!({
                "x": grid.x,
                "mu": grid.mu,
                "layers": grid.layers.iter().map(|l| json!({
                    "occupation": occupation_key(&l.occupation),
                    "labels": l.labels.iter().map(|x| x.as_str()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "boundaries": grid.boundaries.iter().map(|p| json!({
                    "occupation": occupation_key(&p.occupation),
                    "species": p.species,
                    "branch": p.branch,
                    "points": p.points.iter().map(|&(x, m)| [x, m]).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            write_file(dir, &format!("{id}_grid.json"), &json_document(&header, body))?;
            write_file(dir, &format!("{id}_windows.json"), &windows_json(&header, &rows, None))?;
        }
    }
    write_file(dir, &format!("{id}_summary.json"), &summary)?;
    Ok(())
}
