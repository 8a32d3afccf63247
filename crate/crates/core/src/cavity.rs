//! Mott windows in the cavity-dominated limit (`zJ << |f|^2`).
//!
//! Dropping the hopping brackets leaves, for each species, a boundary
//! condition whose cleared-denominator form is a quadratic in the chemical
//! potential. Its roots are
//!
//! ```text
//! ground:   mu = (eps_g + eps_c) + L_g +/- sqrt(G_g^2 - 4 K_g) / 2
//! excited:  mu = (eps_e - eps_c) + L_e +/- sqrt(G_e^2 - 4 K_e) / 2
//! ```
//!
//! with `L`, `G`, `K` from [`cavity_coefficients`]. The ground line comes from
//! the `phi_e^2` coefficient (its photon-assisted denominators involve `mu_g`)
//! and the excited line from the `phi_g^2` coefficient; the labels follow the
//! species whose chemical potential is solved for.
//!
//! Every quantity here is scaled: ground-species energies by `zJ_g`, excited by
//! `zJ_e`, and `F = |f|^2 / (z^2 J_g J_e)`. Chemical potentials returned by
//! [`cavity_mu_bounds`] are barred (on-site energies included).

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PhaseError, Result};
use crate::params::{Occupation, ScaledParams, Species};
use crate::roots::{bisect, sqrt_discriminant, ParameterSet};
use crate::window::{Branch, MottWindow};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CavityLineCoefficients {
    pub l: f64,
    pub g: f64,
    pub k: f64,
}

impl CavityLineCoefficients {
    pub fn discriminant(&self) -> f64 {
        self.g * self.g - 4.0 * self.k
    }
}

/// Occupancy factors `(m, q)` with `G = u + F m` and `K = F u q`.
fn occupancy_factors(species: Species, occ: &Occupation) -> (f64, f64) {
    let n_c = occ.n_c();
    match species {
        Species::Ground => {
            let n = f64::from(occ.n_g);
            (n + n_c + 1.0, (n + 1.0) * (n_c + 1.0))
        }
        Species::Excited => {
            let n = f64::from(occ.n_e);
            (n_c - n, (n + 1.0) * n_c)
        }
    }
}

pub fn cavity_coefficients(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
) -> CavityLineCoefficients {
    let u = sp.u(species);
    let n = f64::from(occ.count(species));
    let n_other = f64::from(occ.count(species.other()));
    let (m, q) = occupancy_factors(species, occ);
    CavityLineCoefficients {
        l: u * (n - 0.5) + sp.u_eg(species) * n_other - 0.5 * sp.f * m,
        g: u + sp.f * m,
        k: sp.f * u * q,
    }
}

/// Constant part of the window center: `eps_g + eps_c` (ground) or
/// `eps_e - eps_c` (excited).
fn offset(species: Species, sp: &ScaledParams) -> f64 {
    match species {
        Species::Ground => sp.eps_g + sp.eps_c_g,
        Species::Excited => sp.eps_e - sp.eps_c_e,
    }
}

/// Barred Mott window in the cavity limit; present iff `G^2 >= 4K`.
///
/// The species must hold at least one atom: with zero atoms one of the two
/// denominators drops out and the quadratic acquires a root sitting on a pole.
pub fn cavity_mu_bounds(species: Species, occ: &Occupation, sp: &ScaledParams) -> Result<MottWindow> {
    sp.validate()?;
    if occ.count(species) == 0 {
        return Err(PhaseError::EmptySpecies { species });
    }
    let c = cavity_coefficients(species, occ, sp);
    let scale = c.g * c.g + 4.0 * c.k.abs();
    let Some(sq) = sqrt_discriminant(c.discriminant(), scale) else {
        return Ok(MottWindow::Absent);
    };
    let center = offset(species, sp) + c.l;
    Ok(MottWindow::present(center - 0.5 * sq, center + 0.5 * sq))
}

/// Left-hand side of the cavity-limit boundary condition whose unknown is
/// `species`' (barred) chemical potential. Zero on the window ends.
pub fn cavity_residual(species: Species, occ: &Occupation, sp: &ScaledParams, mu_barred: f64) -> f64 {
    let n = f64::from(occ.count(species));
    let u = sp.u(species);
    let n_c = occ.n_c();
    let shift = sp.u_eg(species) * f64::from(occ.count(species.other()));
    let mu = mu_barred - sp.eps(species);
    match species {
        Species::Ground => {
            // y = mu_g - eps_c - u_eg n_e
            let y = mu - sp.eps_c_g - shift;
            let mut r = 1.0 + sp.f * (n + 1.0) * (n_c + 1.0) / (y - u * n);
            if n * n_c != 0.0 {
                r += sp.f * n * n_c / (-y + u * (n - 1.0));
            }
            r
        }
        Species::Excited => {
            // y = mu_e + eps_c - u_eg n_g
            let y = mu + sp.eps_c_e - shift;
            let mut r = 1.0;
            if n_c != 0.0 {
                r += sp.f * (n + 1.0) * n_c / (y - u * n);
            }
            if n != 0.0 {
                r += sp.f * n * (n_c + 1.0) / (-y + u * (n - 1.0));
            }
            r
        }
    }
}

/// Interaction strengths `u` at which the window exists (`G^2 >= 4K`), for `u > 0`.
/// The roots solve `u^2 + u(2Fm - 4Fq) + F^2 m^2 = 0`.
pub fn mott_existence_in_u(species: Species, occ: &Occupation, f: f64) -> ParameterSet {
    let (m, q) = occupancy_factors(species, occ);
    ParameterSet::of_quadratic(1.0, 2.0 * f * m - 4.0 * f * q, f * f * m * m, 0.0, false)
}

/// Couplings `F >= 0` at which the window exists for fixed `u`.
pub fn mott_existence_in_f(species: Species, occ: &Occupation, u: f64) -> ParameterSet {
    let (m, q) = occupancy_factors(species, occ);
    ParameterSet::of_quadratic(m * m, 2.0 * u * m - 4.0 * u * q, u * u, 0.0, true)
}

/// Parameter varied along a sweep or along the horizontal axis of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// `u_g = u_e`
    U,
    /// `u_eg_g = u_eg_e`
    UEg,
    /// `eps_c` in both scalings; `eps_e` stays put
    EpsC,
    F,
    NC,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::U => "u",
            SweepAxis::UEg => "u_eg",
            SweepAxis::EpsC => "eps_c",
            SweepAxis::F => "F",
            SweepAxis::NC => "n_c",
        }
    }

    pub fn parse(s: &str) -> Option<SweepAxis> {
        Some(match s {
            "u" | "U" => SweepAxis::U,
            "u_eg" | "U_eg" => SweepAxis::UEg,
            "eps_c" => SweepAxis::EpsC,
            "F" | "f" => SweepAxis::F,
            "n_c" => SweepAxis::NC,
            _ => return None,
        })
    }

    /// Parameters and occupation at `value` along this axis.
    pub fn apply(self, sp: &ScaledParams, occ: &Occupation, value: f64) -> Result<(ScaledParams, Occupation)> {
        let mut sp = *sp;
        let mut occ = *occ;
        match self {
            SweepAxis::U => sp = sp.with_u(value),
            SweepAxis::UEg => sp = sp.with_u_eg(value),
            SweepAxis::EpsC => sp = sp.with_eps_c(value),
            SweepAxis::F => sp = sp.with_f(value),
            SweepAxis::NC => occ = occ.with_n_c(value)?,
        }
        Ok((sp, occ))
    }
}

/// A window together with the reason it could not be computed, if any.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowOutcome {
    pub window: MottWindow,
    pub error: Option<PhaseError>,
}

impl WindowOutcome {
    pub(crate) fn from_result(r: Result<MottWindow>) -> Self {
        match r {
            Ok(window) => WindowOutcome { window, error: None },
            Err(e) => WindowOutcome {
                window: MottWindow::Absent,
                error: Some(e),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub ground: WindowOutcome,
    pub excited: WindowOutcome,
}

impl SweepRow {
    pub fn get(&self, species: Species) -> &WindowOutcome {
        match species {
            Species::Ground => &self.ground,
            Species::Excited => &self.excited,
        }
    }
}

/// Cavity-limit windows of both species along `axis`. Failing rows become
/// absent windows carrying their error; rows keep the order of `values`.
pub fn sweep(axis: SweepAxis, values: &[f64], sp: &ScaledParams, occ: &Occupation) -> Vec<SweepRow> {
    values
        .par_iter()
        .map(|&value| {
            let at = axis.apply(sp, occ, value);
            let eval = |species| {
                WindowOutcome::from_result(
                    at.clone()
                        .and_then(|(sp, occ)| cavity_mu_bounds(species, &occ, &sp)),
                )
            };
            SweepRow {
                value,
                ground: eval(Species::Ground),
                excited: eval(Species::Excited),
            }
        })
        .collect()
}

/// Windows of one occupation along the interaction axis; species without atoms are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationLines {
    pub occupation: Occupation,
    pub species: Vec<Species>,
    pub rows: Vec<SweepRow>,
}

pub fn multi_occupancy_lines(occs: &[Occupation], sp: &ScaledParams, u_values: &[f64]) -> Vec<OccupationLines> {
    occs.iter()
        .map(|occ| OccupationLines {
            occupation: *occ,
            species: Species::BOTH
                .into_iter()
                .filter(|s| occ.count(*s) > 0)
                .collect(),
            rows: sweep(SweepAxis::U, u_values, sp, occ),
        })
        .collect()
}

/// Point where same-species, same-branch lines of two occupations intersect.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub species: Species,
    pub branch: Branch,
    pub u: f64,
    pub mu: f64,
}

/// Sign changes of `branch(a) - branch(b)` between adjacent grid samples where
/// both windows exist, refined by bisection in `u` to `tol`.
pub fn find_crossings(
    sp: &ScaledParams,
    a: &Occupation,
    b: &Occupation,
    u_values: &[f64],
    tol: f64,
) -> Vec<Crossing> {
    let mut out = Vec::new();
    for species in Species::BOTH {
        if a.count(species) == 0 || b.count(species) == 0 {
            continue;
        }
        for branch in Branch::BOTH {
            let diff = |u: f64| -> Option<f64> {
                let sp = sp.with_u(u);
                let wa = cavity_mu_bounds(species, a, &sp).ok()?;
                let wb = cavity_mu_bounds(species, b, &sp).ok()?;
                Some(branch.pick(&wa)? - branch.pick(&wb)?)
            };
            let samples: Vec<Option<f64>> = u_values.iter().map(|&u| diff(u)).collect();
            for i in 0..u_values.len().saturating_sub(1) {
                let (Some(d0), Some(d1)) = (samples[i], samples[i + 1]) else {
                    continue;
                };
                let (u0, u1) = (u_values[i], u_values[i + 1]);
                let u = if d0 == 0.0 {
                    // a touching zero is not a crossing
                    let before = i.checked_sub(1).and_then(|k| samples[k]);
                    match before {
                        Some(b) if b != 0.0 && d1 != 0.0 && (b < 0.0) != (d1 < 0.0) => u0,
                        _ => continue,
                    }
                } else if d1 != 0.0 && (d0 < 0.0) != (d1 < 0.0) {
                    bisect(|u| diff(u).unwrap_or(f64::NAN), u0, u1, tol)
                } else {
                    continue;
                };
                let mu = branch
                    .pick(&cavity_mu_bounds(species, a, &sp.with_u(u)).unwrap_or(MottWindow::Absent))
                    .unwrap_or(f64::NAN);
                out.push(Crossing { species, branch, u, mu });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig7() -> ScaledParams {
        ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0)
    }

    const ONE: Occupation = Occupation::fock(1, 1, 1);

    #[test]
    fn coefficients_at_fig7() {
        let c = cavity_coefficients(Species::Ground, &ONE, &fig7());
        assert_eq!((c.l, c.g, c.k), (102.5, 325.0, 25000.0));
        let c = cavity_coefficients(Species::Excited, &ONE, &fig7());
        assert_eq!((c.l, c.g, c.k), (140.0, 250.0, 12500.0));
    }

    #[test]
    fn coefficients_without_coupling() {
        let sp = fig7().with_f(0.0);
        let occ = Occupation::fock(2, 1, 1);
        for s in Species::BOTH {
            let c = cavity_coefficients(s, &occ, &sp);
            let n = f64::from(occ.count(s));
            assert_eq!(c.g, 250.0);
            assert_eq!(c.k, 0.0);
            assert_eq!(c.l, 250.0 * (n - 0.5) + 15.0 * f64::from(occ.count(s.other())));
        }
    }

    #[test]
    fn windows_at_fig7() {
        let g = cavity_mu_bounds(Species::Ground, &ONE, &fig7()).unwrap();
        assert_eq!(g.bounds(), Some((165.0, 240.0)));
        let (lo, hi) = cavity_mu_bounds(Species::Excited, &ONE, &fig7())
            .unwrap()
            .bounds()
            .unwrap();
        let h = 0.5 * 12500f64.sqrt();
        assert!((lo - (140.0 - h)).abs() < 1e-12 && (hi - (140.0 + h)).abs() < 1e-12);
        assert!((lo - 84.0983).abs() < 1e-4 && (hi - 195.9017).abs() < 1e-4);
    }

    #[test]
    fn ground_window_absent_below_threshold() {
        let sp = fig7().with_u(100.0);
        let c = cavity_coefficients(Species::Ground, &ONE, &sp);
        assert_eq!(c.g, 175.0);
        assert!(c.discriminant() < 0.0);
        assert_eq!(cavity_mu_bounds(Species::Ground, &ONE, &sp).unwrap(), MottWindow::Absent);
    }

    #[test]
    fn empty_species_is_an_error() {
        let occ = Occupation::fock(2, 0, 1);
        assert!(cavity_mu_bounds(Species::Excited, &occ, &fig7()).is_err());
        assert!(cavity_mu_bounds(Species::Ground, &occ, &fig7()).is_ok());
    }

    #[test]
    fn existence_in_u() {
        let g = mott_existence_in_u(Species::Ground, &ONE, 25.0);
        assert_eq!(g.roots, vec![25.0, 225.0]);
        assert!(g.contains(10.0) && g.contains(25.0) && !g.contains(100.0) && g.contains(300.0));
        let e = mott_existence_in_u(Species::Excited, &ONE, 25.0);
        assert_eq!(e.roots, vec![0.0, 200.0]);
        assert!(!e.contains(100.0) && e.contains(200.0) && e.contains(1e4));
        let free = mott_existence_in_u(Species::Ground, &ONE, 0.0);
        assert!(free.contains(1e-6) && free.contains(1e6));
    }

    #[test]
    fn existence_in_f() {
        let g = mott_existence_in_f(Species::Ground, &ONE, 250.0);
        assert_eq!(g.roots.len(), 2);
        assert!((g.roots[0] - 250.0 / 9.0).abs() < 1e-10);
        assert!((g.roots[1] - 250.0).abs() < 1e-10);
        assert!(g.contains(0.0) && !g.contains(100.0) && g.contains(300.0));
        let e = mott_existence_in_f(Species::Excited, &ONE, 250.0);
        assert_eq!(e.intervals.len(), 1);
        assert_eq!((e.intervals[0].lo, e.intervals[0].hi), (0.0, 31.25));
    }

    #[test]
    fn photon_number_sweep() {
        let rows = sweep(SweepAxis::NC, &[0.0, 1.0, 2.0], &fig7(), &Occupation::fock(1, 1, 0));
        let discs: Vec<f64> = [0.0, 1.0, 2.0]
            .iter()
            .map(|&n_c| {
                cavity_coefficients(Species::Ground, &Occupation::new(1, 1, n_c).unwrap(), &fig7())
                    .discriminant()
            })
            .collect();
        assert_eq!(discs, vec![40000.0, 5625.0, -27500.0]);
        let present: Vec<bool> = rows.iter().map(|r| r.ground.window.is_present()).collect();
        assert_eq!(present, vec![true, true, false]);
        // K_e vanishes with the photons
        assert!(rows[0].excited.window.is_present());
    }

    #[test]
    fn sweep_keeps_order_and_tags_errors() {
        let values: Vec<f64> = (0..50).map(|i| 50.0 - f64::from(i)).collect();
        let rows = sweep(SweepAxis::UEg, &values, &fig7(), &ONE);
        assert!(rows.iter().zip(&values).all(|(r, v)| r.value == *v));
        let bad = sweep(SweepAxis::NC, &[-1.0], &fig7(), &ONE);
        assert!(bad[0].ground.error.is_some());
        assert_eq!(bad[0].ground.window, MottWindow::Absent);
    }

    #[test]
    fn u_eg_sweep_reproduces_fig7_point() {
        let rows = sweep(SweepAxis::UEg, &[15.0], &fig7().with_u_eg(0.0), &ONE);
        assert_eq!(rows[0].ground.window.bounds(), Some((165.0, 240.0)));
    }

    #[test]
    fn residual_vanishes_on_window_ends() {
        for species in Species::BOTH {
            let (lo, hi) = cavity_mu_bounds(species, &ONE, &fig7()).unwrap().bounds().unwrap();
            assert!(cavity_residual(species, &ONE, &fig7(), lo).abs() < 1e-9);
            assert!(cavity_residual(species, &ONE, &fig7(), hi).abs() < 1e-9);
        }
    }

    #[test]
    fn eps_c_moves_species_oppositely() {
        let base = fig7();
        let moved = ScaledParams { eps_c_g: 130.0, eps_c_e: 130.0, ..base };
        let g0 = cavity_mu_bounds(Species::Ground, &ONE, &base).unwrap();
        let g1 = cavity_mu_bounds(Species::Ground, &ONE, &moved).unwrap();
        let e0 = cavity_mu_bounds(Species::Excited, &ONE, &base).unwrap();
        let e1 = cavity_mu_bounds(Species::Excited, &ONE, &moved).unwrap();
        assert!((g1.lower().unwrap() - g0.lower().unwrap() - 30.0).abs() < 1e-12);
        assert!((e1.upper().unwrap() - e0.upper().unwrap() + 30.0).abs() < 1e-12);
    }

    #[test]
    fn touching_lines_are_not_crossings() {
        // at u = 0 both upper edges sit at eps_c = 200
        let sp = ScaledParams::equal_hopping(0.0, 250.0, 25.0, 200.0);
        let (a, b) = (Occupation::fock(1, 0, 1), Occupation::fock(2, 0, 1));
        let us: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.5).collect();
        let c = find_crossings(&sp, &a, &b, &us, 1e-10);
        assert!(c.iter().all(|c| c.u > 0.0), "{c:?}");
        for c in &c {
            let sp = sp.with_u(c.u);
            let wa = cavity_mu_bounds(Species::Ground, &a, &sp).unwrap();
            let wb = cavity_mu_bounds(Species::Ground, &b, &sp).unwrap();
            assert!((c.branch.pick(&wa).unwrap() - c.branch.pick(&wb).unwrap()).abs() < 1e-6);
        }
    }
}
