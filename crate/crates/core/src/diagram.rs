//! Phase labels on a grid of (axis value, chemical potential) and the
//! boundary lines between them.
//!
//! Both species share the vertical axis: a node at height `mu` means
//! `mu_g = mu_e = mu` in their own scalings (barred). Each occupation sector
//! gets its own label layer; sectors are never merged.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cavity::{cavity_mu_bounds, find_crossings, Crossing, SweepAxis};
use crate::error::{PhaseError, Result};
use crate::hubbard::{single_mott_window, two_mott_window_barred};
use crate::landau::{self, SolveOptions};
use crate::params::{ChemicalPotentials, Occupation, ScaledParams, Species};
use crate::presets::{AxisRange, FigurePreset, Variant};
use crate::window::{Branch, MottWindow};

/// Boundary points are refined until their bracket is this narrow (axis units).
pub const BOUNDARY_TOL: f64 = 1e-7;

pub const DEFAULT_RESOLUTION: (usize, usize) = (400, 400);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseLabel {
    /// Both species superfluid.
    SF,
    /// Both species Mott.
    MI,
    /// Excited Mott, ground superfluid.
    SM,
    /// Ground Mott, excited superfluid.
    MS,
}

impl PhaseLabel {
    pub const ALL: [PhaseLabel; 4] = [PhaseLabel::SF, PhaseLabel::MI, PhaseLabel::SM, PhaseLabel::MS];

    pub fn from_membership(ground_mott: bool, excited_mott: bool) -> Self {
        match (ground_mott, excited_mott) {
            (true, true) => PhaseLabel::MI,
            (false, true) => PhaseLabel::SM,
            (true, false) => PhaseLabel::MS,
            (false, false) => PhaseLabel::SF,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::SF => "SF",
            PhaseLabel::MI => "MI",
            PhaseLabel::SM => "SM",
            PhaseLabel::MS => "MS",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Barred Mott window of one species for the hopping-only and cavity-only variants.
/// In the single-component variant both species report the one lobe of `n_g`.
pub fn species_window(
    variant: Variant,
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
) -> Result<MottWindow> {
    match variant {
        Variant::Single => Ok(single_mott_window(occ.n_g, sp.u_g)?.shifted(sp.eps_g)),
        Variant::Two => two_mott_window_barred(species, occ, sp),
        Variant::Cavity => cavity_mu_bounds(species, occ, sp),
        Variant::General => {
            sp.check_invertible()?;
            let mu = sp.mu_stationary(occ);
            let w = landau::mott_window(species, occ, sp, Some(mu.get(species.other())), &SolveOptions::default())?;
            Ok(w.shifted(sp.eps(species)))
        }
    }
}

/// Per-species membership test at fixed parameters.
enum Membership {
    Windows([Result<MottWindow>; 2]),
    General,
}

struct Column {
    variant: Variant,
    sp: ScaledParams,
    occ: Occupation,
    membership: Membership,
}

impl Column {
    fn new(variant: Variant, sp: ScaledParams, occ: Occupation) -> Self {
        let membership = match variant {
            Variant::General => Membership::General,
            _ => Membership::Windows(Species::BOTH.map(|s| species_window(variant, s, &occ, &sp))),
        };
        Column { variant, sp, occ, membership }
    }

    fn is_mott(&self, species: Species, mu: (f64, f64)) -> Result<bool> {
        let barred = ChemicalPotentials::new(mu.0, mu.1);
        match &self.membership {
            Membership::Windows(w) => {
                let idx = species as usize;
                match &w[idx] {
                    Ok(w) => Ok(w.contains(barred.get(species))),
                    Err(e) => Err(e.clone()),
                }
            }
            Membership::General => {
                let unbarred = ChemicalPotentials::new(mu.0 - self.sp.eps_g, mu.1 - self.sp.eps_e);
                landau::is_mott(species, &self.occ, &self.sp, unbarred, &SolveOptions::default())
            }
        }
    }

    fn mott_or_false(&self, species: Species, mu: (f64, f64)) -> bool {
        self.is_mott(species, mu).unwrap_or(false)
    }

    fn classify(&self, mu: (f64, f64)) -> Classification {
        let mut diagnostics = Vec::new();
        let mut test = |species: Species| match self.is_mott(species, mu) {
            Ok(m) => m,
            Err(e) => {
                diagnostics.push(format!("{species}: {e}"));
                false
            }
        };
        let label = if self.variant == Variant::Single {
            if test(Species::Ground) {
                PhaseLabel::MI
            } else {
                PhaseLabel::SF
            }
        } else {
            let g = test(Species::Ground);
            let e = test(Species::Excited);
            PhaseLabel::from_membership(g, e)
        };
        Classification { label, diagnostics }
    }

    /// Species whose boundaries are drawn for this column.
    fn drawn_species(&self) -> Vec<Species> {
        if self.variant == Variant::Single {
            return vec![Species::Ground];
        }
        Species::BOTH.into_iter().filter(|s| self.occ.count(*s) > 0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub label: PhaseLabel,
    /// One entry per species whose window could not be computed; that species counts as superfluid.
    pub diagnostics: Vec<String>,
}

/// Label of the point `(mu_g, mu_e)` (barred) at interactions `(u_g, u_e)`.
pub fn classify_point(
    u_pair: (f64, f64),
    mu_pair: (f64, f64),
    occ: &Occupation,
    sp: &ScaledParams,
    variant: Variant,
) -> Classification {
    let sp = ScaledParams {
        u_g: u_pair.0,
        u_e: u_pair.1,
        ..*sp
    };
    Column::new(variant, sp, *occ).classify(mu_pair)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelLayer {
    pub occupation: Occupation,
    /// Column-major: the label at `(x[i], mu[j])` is `labels[i * mu.len() + j]`.
    pub labels: Vec<PhaseLabel>,
}

impl LabelLayer {
    pub fn count(&self, label: PhaseLabel) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }
}

/// Connected run of boundary points of one species' window edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyline {
    pub occupation: Occupation,
    pub species: Species,
    pub branch: Branch,
    /// `(x, mu)` pairs with strictly increasing `x`.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseGrid {
    pub x_axis: SweepAxis,
    pub x: Vec<f64>,
    pub mu: Vec<f64>,
    pub layers: Vec<LabelLayer>,
    pub boundaries: Vec<Polyline>,
}

impl PhaseGrid {
    pub fn label(&self, layer: usize, i: usize, j: usize) -> PhaseLabel {
        self.layers[layer].labels[i * self.mu.len() + j]
    }

    pub fn polylines_for(&self, occ: &Occupation, species: Species) -> impl Iterator<Item = &Polyline> + '_ {
        let occ = *occ;
        self.boundaries
            .iter()
            .filter(move |p| p.occupation == occ && p.species == species)
    }
}

struct BoundaryPoint {
    species: Species,
    branch: Branch,
    mu: f64,
}

fn refine(column: &Column, species: Species, mut lo: f64, mut hi: f64, inside_lo: bool) -> f64 {
    while hi - lo > BOUNDARY_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if column.mott_or_false(species, (mid, mid)) == inside_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn scan_column(column: &Column, mus: &[f64]) -> (Vec<PhaseLabel>, Vec<BoundaryPoint>) {
    let labels = mus.iter().map(|&m| column.classify((m, m)).label).collect();
    let mut points = Vec::new();
    for species in column.drawn_species() {
        let inside: Vec<bool> = mus.iter().map(|&m| column.mott_or_false(species, (m, m))).collect();
        for j in 0..mus.len().saturating_sub(1) {
            if inside[j] != inside[j + 1] {
                points.push(BoundaryPoint {
                    species,
                    branch: if inside[j + 1] { Branch::Lower } else { Branch::Upper },
                    mu: refine(column, species, mus[j], mus[j + 1], inside[j]),
                });
            }
        }
    }
    (labels, points)
}

/// Join per-column boundary points into polylines. The k-th point of a given
/// species and branch in one column continues the k-th of the previous
/// column; a column without it ends the line.
fn assemble(occ: Occupation, xs: &[f64], columns: &[Vec<BoundaryPoint>]) -> Vec<Polyline> {
    let mut out = Vec::new();
    for species in Species::BOTH {
        for branch in Branch::BOTH {
            let per_column: Vec<Vec<f64>> = columns
                .iter()
                .map(|pts| {
                    pts.iter()
                        .filter(|p| p.species == species && p.branch == branch)
                        .map(|p| p.mu)
                        .collect()
                })
                .collect();
            let depth = per_column.iter().map(Vec::len).max().unwrap_or(0);
            for k in 0..depth {
                let mut current: Vec<(f64, f64)> = Vec::new();
                for (i, mus) in per_column.iter().enumerate() {
                    match mus.get(k) {
                        Some(&mu) => current.push((xs[i], mu)),
                        None if !current.is_empty() => {
                            out.push(Polyline { occupation: occ, species, branch, points: std::mem::take(&mut current) });
                        }
                        None => {}
                    }
                }
                if !current.is_empty() {
                    out.push(Polyline { occupation: occ, species, branch, points: current });
                }
            }
        }
    }
    out
}

fn check_range(name: &'static str, r: &AxisRange) -> Result<()> {
    if !(r.min.is_finite() && r.max.is_finite() && r.min < r.max) {
        return Err(PhaseError::EmptyAxis(name));
    }
    Ok(())
}

/// Parameters and occupation at horizontal-axis value `x`.
pub fn column_params(preset: &FigurePreset, occ: &Occupation, x: f64) -> Result<(ScaledParams, Occupation)> {
    preset.x_axis.apply(&preset.params, occ, x)
}

/// Label every node of the preset's axes and trace the window edges.
pub fn scan_grid(preset: &FigurePreset, resolution: (usize, usize)) -> Result<PhaseGrid> {
    let (nx, nmu) = resolution;
    if nx < 2 || nmu < 2 {
        return Err(PhaseError::invalid("resolution", "needs at least 2 x 2 nodes"));
    }
    check_range("x", &preset.x_range)?;
    check_range("mu", &preset.mu_range)?;
    if preset.occupations.is_empty() {
        return Err(PhaseError::invalid("occupations", "at least one occupation is required"));
    }
    preset.params.validate()?;

    let xs = preset.x_range.nodes(nx);
    let mus = preset.mu_range.nodes(nmu);
    let mut layers = Vec::with_capacity(preset.occupations.len());
    let mut boundaries = Vec::new();
    for occ in &preset.occupations {
        let columns: Vec<(Vec<PhaseLabel>, Vec<BoundaryPoint>)> = xs
            .par_iter()
            .map(|&x| match column_params(preset, occ, x) {
                Ok((sp, occ)) => scan_column(&Column::new(preset.variant, sp, occ), &mus),
                Err(_) => (vec![PhaseLabel::SF; mus.len()], Vec::new()),
            })
            .collect();
        let mut labels = Vec::with_capacity(nx * nmu);
        let mut points = Vec::with_capacity(nx);
        for (l, p) in columns {
            labels.extend(l);
            points.push(p);
        }
        boundaries.extend(assemble(*occ, &xs, &points));
        layers.push(LabelLayer { occupation: *occ, labels });
    }
    Ok(PhaseGrid {
        x_axis: preset.x_axis,
        x: xs,
        mu: mus,
        layers,
        boundaries,
    })
}

/// Window of one sector and species at horizontal-axis value `x`.
pub fn window_at(preset: &FigurePreset, occ: &Occupation, species: Species, x: f64) -> Result<MottWindow> {
    let (sp, occ) = column_params(preset, occ, x)?;
    species_window(preset.variant, species, &occ, &sp)
}

/// Whether the windows of two sectors overlap, sampled along the horizontal axis.
pub fn overlap_profile(
    preset: &FigurePreset,
    a: &Occupation,
    b: &Occupation,
    species: Species,
    xs: &[f64],
) -> Vec<(f64, bool)> {
    xs.iter()
        .map(|&x| {
            let wa = window_at(preset, a, species, x).unwrap_or(MottWindow::Absent);
            let wb = window_at(preset, b, species, x).unwrap_or(MottWindow::Absent);
            (x, wa.overlaps(&wb))
        })
        .collect()
}

/// Crossing between the lines of two sectors of a cavity-limit `u` diagram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SectorCrossing {
    pub a: Occupation,
    pub b: Occupation,
    pub crossing: Crossing,
}

/// All pairwise crossings between sectors of a cavity-limit preset with `u` on the horizontal axis.
pub fn sector_crossings(preset: &FigurePreset, samples: usize) -> Vec<SectorCrossing> {
    if preset.variant != Variant::Cavity || preset.x_axis != SweepAxis::U {
        return Vec::new();
    }
    let xs = preset.x_range.nodes(samples);
    let occs = &preset.occupations;
    let mut out = Vec::new();
    for i in 0..occs.len() {
        for j in i + 1..occs.len() {
            for crossing in find_crossings(&preset.params, &occs[i], &occs[j], &xs, 1e-9) {
                out.push(SectorCrossing { a: occs[i], b: occs[j], crossing });
            }
        }
    }
    out
}
