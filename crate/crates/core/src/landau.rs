//! Full mean-field boundary conditions with hopping and cavity terms together.
//!
//! The quadratic coefficients of the second-order energy in `phi_g^2` and
//! `phi_e^2`, divided by `zJ_g phi_g^2` and `zJ_e phi_e^2`, are
//!
//! ```text
//! c_g = 1 + [(n_g+1)/D1 + n_g/D2] + F [(n_e+1) n_c/D8 + n_e (n_c+1)/D9]
//! c_e = 1 + [(n_e+1)/D3 + n_e/D4] + F [n_g n_c/D10 + (n_g+1)(n_c+1)/D7]
//! ```
//!
//! where `Dk = E0 - Ek` is the energy difference to intermediate state `|k>`
//! (numbered as in the perturbative enumeration of [`crate::oracle`]).
//! A species is superfluid where its coefficient is negative; the phase
//! boundary is where it vanishes. Chemical potentials here are unbarred and
//! scaled per species.
//!
//! Each line contains both chemical potentials. [`boundary_solve`] holds the
//! other species' potential fixed (by default at its zero-order stationary
//! value) and solves one line for one unknown.

use serde::Serialize;

use crate::error::{PhaseError, Result};
use crate::params::{ChemicalPotentials, Occupation, ScaledParams, Species};
use crate::roots::bisect;
use crate::window::MottWindow;

/// Magnitude below which an energy denominator counts as a pole.
pub const POLE_EPS: f64 = 1e-12;

/// Default number of scan points per pole-free sub-interval.
pub const DEFAULT_SCAN_POINTS: usize = 256;

/// Coefficient of `phi_g^2` (`c_g`) or `phi_e^2` (`c_e`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Line {
    PhiG,
    PhiE,
}

impl Line {
    /// The line a species' boundary is read from: its own line when hopping
    /// terms are present, otherwise the line whose photon-assisted
    /// denominators contain that species' chemical potential.
    pub fn default_for(species: Species, terms: Terms) -> Line {
        match (species, terms.hopping) {
            (Species::Ground, true) | (Species::Excited, false) => Line::PhiG,
            (Species::Excited, true) | (Species::Ground, false) => Line::PhiE,
        }
    }
}

/// Which brackets of the boundary condition are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Terms {
    pub hopping: bool,
    pub cavity: bool,
}

impl Terms {
    pub const FULL: Terms = Terms { hopping: true, cavity: true };
    pub const HOPPING_ONLY: Terms = Terms { hopping: true, cavity: false };
    pub const CAVITY_ONLY: Terms = Terms { hopping: false, cavity: true };
}

impl Default for Terms {
    fn default() -> Self {
        Terms::FULL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryResidual {
    pub c_g: f64,
    pub c_e: f64,
}

impl BoundaryResidual {
    pub fn get(&self, line: Line) -> f64 {
        match line {
            Line::PhiG => self.c_g,
            Line::PhiE => self.c_e,
        }
    }
}

/// `weight / (slope * mu_species + constant)`
#[derive(Debug, Clone, Copy)]
struct Term {
    state: u8,
    weight: f64,
    species: Species,
    slope: f64,
    constant: f64,
}

impl Term {
    fn denominator(&self, mu: &ChemicalPotentials) -> f64 {
        self.slope * mu.get(self.species) + self.constant
    }

    fn pole(&self) -> f64 {
        -self.constant / self.slope
    }
}

fn line_terms(line: Line, occ: &Occupation, sp: &ScaledParams, terms: Terms) -> Vec<Term> {
    let n_g = f64::from(occ.n_g);
    let n_e = f64::from(occ.n_e);
    let n_c = occ.n_c();
    let shift_g = sp.u_eg_g * n_e;
    let shift_e = sp.u_eg_e * n_g;
    let mut out = Vec::with_capacity(4);
    match line {
        Line::PhiG => {
            if terms.hopping {
                out.push(Term { state: 1, weight: n_g + 1.0, species: Species::Ground, slope: 1.0, constant: -sp.u_g * n_g - shift_g });
                out.push(Term { state: 2, weight: n_g, species: Species::Ground, slope: -1.0, constant: sp.u_g * (n_g - 1.0) + shift_g });
            }
            if terms.cavity {
                out.push(Term { state: 8, weight: sp.f * (n_e + 1.0) * n_c, species: Species::Excited, slope: 1.0, constant: sp.eps_c_e - sp.u_e * n_e - shift_e });
                out.push(Term { state: 9, weight: sp.f * n_e * (n_c + 1.0), species: Species::Excited, slope: -1.0, constant: -sp.eps_c_e + sp.u_e * (n_e - 1.0) + shift_e });
            }
        }
        Line::PhiE => {
            if terms.hopping {
                out.push(Term { state: 3, weight: n_e + 1.0, species: Species::Excited, slope: 1.0, constant: -sp.u_e * n_e - shift_e });
                out.push(Term { state: 4, weight: n_e, species: Species::Excited, slope: -1.0, constant: sp.u_e * (n_e - 1.0) + shift_e });
            }
            if terms.cavity {
                out.push(Term { state: 10, weight: sp.f * n_g * n_c, species: Species::Ground, slope: -1.0, constant: sp.eps_c_g + sp.u_g * (n_g - 1.0) + shift_g });
                out.push(Term { state: 7, weight: sp.f * (n_g + 1.0) * (n_c + 1.0), species: Species::Ground, slope: 1.0, constant: -sp.eps_c_g - sp.u_g * n_g - shift_g });
            }
        }
    }
    out
}

fn eval_terms(terms: &[Term], mu: &ChemicalPotentials) -> Result<f64> {
    let mut acc = 1.0;
    for t in terms {
        if t.weight == 0.0 {
            continue;
        }
        let d = t.denominator(mu);
        if d.abs() < POLE_EPS {
            return Err(PhaseError::Pole {
                state: t.state,
                at: mu.get(t.species),
            });
        }
        acc += t.weight / d;
    }
    Ok(acc)
}

/// Both boundary coefficients with all terms present.
pub fn residual(mu: ChemicalPotentials, occ: &Occupation, sp: &ScaledParams) -> Result<BoundaryResidual> {
    residual_with(mu, occ, sp, Terms::FULL)
}

pub fn residual_with(
    mu: ChemicalPotentials,
    occ: &Occupation,
    sp: &ScaledParams,
    terms: Terms,
) -> Result<BoundaryResidual> {
    Ok(BoundaryResidual {
        c_g: eval_terms(&line_terms(Line::PhiG, occ, sp, terms), &mu)?,
        c_e: eval_terms(&line_terms(Line::PhiE, occ, sp, terms), &mu)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub terms: Terms,
    /// Line to solve; `None` picks [`Line::default_for`].
    pub line: Option<Line>,
    /// Scan points per pole-free sub-interval (at least 64 are used).
    pub scan_points: usize,
    /// Bisection stops when the root bracket is narrower than this.
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            terms: Terms::FULL,
            line: None,
            scan_points: DEFAULT_SCAN_POINTS,
            tol: 1e-10,
        }
    }
}

impl SolveOptions {
    pub fn with_terms(terms: Terms) -> Self {
        SolveOptions { terms, ..Default::default() }
    }

    fn line_for(&self, species: Species) -> Line {
        self.line.unwrap_or_else(|| Line::default_for(species, self.terms))
    }
}

/// One line of the boundary condition as a function of one species' potential.
struct LineInUnknown {
    terms: Vec<Term>,
    unknown: Species,
    base: ChemicalPotentials,
}

impl LineInUnknown {
    fn new(
        species: Species,
        occ: &Occupation,
        sp: &ScaledParams,
        mu_other: Option<f64>,
        opts: &SolveOptions,
    ) -> Self {
        let mut base = sp.mu_stationary(occ);
        if let Some(m) = mu_other {
            base.set(species.other(), m);
        }
        LineInUnknown {
            terms: line_terms(opts.line_for(species), occ, sp, opts.terms),
            unknown: species,
            base,
        }
    }

    fn at(&self, mu: f64) -> ChemicalPotentials {
        let mut m = self.base;
        m.set(self.unknown, mu);
        m
    }

    fn eval(&self, mu: f64) -> Result<f64> {
        eval_terms(&self.terms, &self.at(mu))
    }

    /// Poles in the unknown, ascending, with the state they belong to.
    fn poles(&self) -> Vec<(f64, u8)> {
        let mut p: Vec<(f64, u8)> = self
            .terms
            .iter()
            .filter(|t| t.species == self.unknown && t.weight != 0.0)
            .map(|t| (t.pole(), t.state))
            .collect();
        p.sort_by(|a, b| a.0.total_cmp(&b.0));
        p
    }

    /// Interval between the zeros of the two denominators that depend on the
    /// unknown, whether or not their numerators vanish. `None` when the line
    /// does not depend on the unknown.
    fn zero_order_interval(&self) -> Option<(f64, f64)> {
        let poles: Vec<f64> = self
            .terms
            .iter()
            .filter(|t| t.species == self.unknown)
            .map(Term::pole)
            .collect();
        match poles.as_slice() {
            [a, b] => Some((a.min(*b), a.max(*b))),
            _ => None,
        }
    }

    /// Roots strictly inside `(a, b)`, which must contain no pole.
    fn roots_between(&self, a: f64, b: f64, points: usize, tol: f64) -> Vec<f64> {
        let points = points.max(64);
        let pad = 1e-12 * a.abs().max(b.abs()).max(1.0);
        let (lo, hi) = (a + pad, b - pad);
        if hi <= lo {
            return Vec::new();
        }
        let f = |x: f64| self.eval(x).unwrap_or(f64::NAN);
        let xs: Vec<f64> = (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect();
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let mut roots = Vec::new();
        for i in 0..points {
            if ys[i] == 0.0 {
                roots.push(xs[i]);
                continue;
            }
            if i + 1 < points && ys[i + 1] != 0.0 && (ys[i] < 0.0) != (ys[i + 1] < 0.0) {
                roots.push(bisect(f, xs[i], xs[i + 1], tol));
            }
        }
        roots
    }
}

/// Roots of the chosen line in `species`' unbarred chemical potential inside
/// `bracket`, sorted and pairwise distinct.
///
/// The bracket is split at the poles of the line and each pole-free piece is
/// scanned on `opts.scan_points` points; every sign change is refined by
/// bisection. Two roots closer together than the scan spacing can be missed.
pub fn boundary_solve(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
    mu_other: Option<f64>,
    bracket: (f64, f64),
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let (a, b) = bracket;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(PhaseError::invalid("bracket", "needs finite endpoints with lo < hi"));
    }
    let line = LineInUnknown::new(species, occ, sp, mu_other, opts);
    for end in [a, b] {
        if let Err(PhaseError::Pole { state, at }) = line.eval(end) {
            return Err(PhaseError::BracketContainsPole { state, at });
        }
    }

    let mut cuts = vec![a];
    cuts.extend(line.poles().into_iter().map(|p| p.0).filter(|&p| p > a && p < b));
    cuts.push(b);

    let mut roots: Vec<f64> = Vec::new();
    for w in cuts.windows(2) {
        roots.extend(line.roots_between(w[0], w[1], opts.scan_points, opts.tol));
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
    Ok(roots)
}

/// Region of the zero-order interval where the chosen line is positive,
/// reported as an unbarred window (its convex hull when it is split).
pub fn mott_window(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
    mu_other: Option<f64>,
    opts: &SolveOptions,
) -> Result<MottWindow> {
    if occ.count(species) == 0 {
        return Err(PhaseError::EmptySpecies { species });
    }
    let line = LineInUnknown::new(species, occ, sp, mu_other, opts);
    let Some((p_lo, p_hi)) = line.zero_order_interval() else {
        return Ok(MottWindow::Absent);
    };
    if p_hi <= p_lo {
        return Ok(MottWindow::Absent);
    }
    let mut cuts = vec![p_lo];
    cuts.extend(line.roots_between(p_lo, p_hi, opts.scan_points, opts.tol));
    cuts.push(p_hi);

    let mut lower = None;
    let mut upper = None;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        if line.eval(0.5 * (w[0] + w[1]))? > 0.0 {
            lower.get_or_insert(w[0]);
            upper = Some(w[1]);
        }
    }
    Ok(match (lower, upper) {
        (Some(lo), Some(hi)) => MottWindow::present(lo, hi),
        _ => MottWindow::Absent,
    })
}

/// Whether `species` is Mott at the (unbarred) point `mu`: its potential lies
/// strictly between the zeros of the line's two denominators in that
/// potential and the line is positive there.
pub fn is_mott(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
    mu: ChemicalPotentials,
    opts: &SolveOptions,
) -> Result<bool> {
    if occ.count(species) == 0 {
        return Err(PhaseError::EmptySpecies { species });
    }
    let line = LineInUnknown::new(species, occ, sp, Some(mu.get(species.other())), opts);
    let x = mu.get(species);
    match line.zero_order_interval() {
        Some((lo, hi)) if x > lo && x < hi => Ok(line.eval(x)? > 0.0),
        _ => Ok(false),
    }
}

/// Value of the chosen line at `mu` for `species`, other potential held as in [`boundary_solve`].
pub fn line_value(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
    mu_other: Option<f64>,
    mu: f64,
    opts: &SolveOptions,
) -> Result<f64> {
    LineInUnknown::new(species, occ, sp, mu_other, opts).eval(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::cavity_mu_bounds;
    use crate::hubbard::two_mott_window;

    fn fig7() -> ScaledParams {
        ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0)
    }

    const ONE: Occupation = Occupation::fock(1, 1, 1);

    #[test]
    fn residual_at_fig7_point() {
        let r = residual(ChemicalPotentials::new(150.0, 150.0), &ONE, &fig7()).unwrap();
        let want = 1.0 + (2.0 / -115.0 + 1.0 / -135.0) + 25.0 * (2.0 / -15.0 + 2.0 / -235.0);
        assert!((r.c_g - want).abs() < 1e-14);
        assert!((r.c_g - -2.570898).abs() < 1e-6);
    }

    #[test]
    fn hopping_limit_endpoint_is_a_root() {
        let sp = fig7().with_u(20.0).with_f(0.0);
        let w = two_mott_window(Species::Ground, &ONE, &sp).unwrap();
        let (lo, hi) = w.bounds().unwrap();
        for mu_g in [lo, hi] {
            let r = residual(ChemicalPotentials::new(mu_g, 12.3), &ONE, &sp).unwrap();
            assert!(r.c_g.abs() < 1e-9);
        }
    }

    #[test]
    fn pole_is_reported() {
        let sp = fig7();
        let mu_g = sp.u_g * 1.0 + sp.u_eg_g * 1.0;
        match residual(ChemicalPotentials::new(mu_g, 150.0), &ONE, &sp) {
            Err(PhaseError::Pole { state: 1, .. }) => {}
            other => panic!("expected pole of |1>, got {other:?}"),
        }
    }

    #[test]
    fn solve_in_hopping_limit() {
        let sp = ScaledParams::equal_hopping(20.0, 15.0, 1e-12, 100.0);
        let roots = boundary_solve(
            Species::Ground,
            &ONE,
            &sp,
            None,
            (15.0 + 1e-6, 35.0 - 1e-6),
            &SolveOptions::default(),
        )
        .unwrap();
        let w = two_mott_window(Species::Ground, &ONE, &sp.with_f(0.0)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - w.lower().unwrap()).abs() < 1e-8);
        assert!((roots[1] - w.upper().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn solve_in_cavity_limit() {
        let sp = fig7();
        let opts = SolveOptions::with_terms(Terms::CAVITY_ONLY);
        for species in Species::BOTH {
            let w = cavity_mu_bounds(species, &ONE, &sp).unwrap().shifted(-sp.eps(species));
            let (lo, hi) = w.bounds().unwrap();
            let roots =
                boundary_solve(species, &ONE, &sp, None, (lo - 20.0, hi + 20.0), &opts).unwrap();
            assert_eq!(roots.len(), 2, "{species}: {roots:?}");
            assert!((roots[0] - lo).abs() < 1e-8 && (roots[1] - hi).abs() < 1e-8);
        }
    }

    #[test]
    fn no_sign_change_gives_no_roots() {
        let sp = ScaledParams::equal_hopping(3.0, 0.0, 0.0, 1.0);
        let roots = boundary_solve(
            Species::Ground,
            &Occupation::fock(1, 0, 0),
            &sp,
            None,
            (0.01, 2.99),
            &SolveOptions::default(),
        )
        .unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn bracket_on_pole_is_rejected() {
        let sp = ScaledParams::equal_hopping(20.0, 0.0, 0.0, 1.0);
        let err = boundary_solve(
            Species::Ground,
            &Occupation::fock(1, 0, 0),
            &sp,
            None,
            (0.0, 20.0),
            &SolveOptions::default(),
        );
        assert!(matches!(err, Err(PhaseError::BracketContainsPole { .. })));
    }

    #[test]
    fn bracket_across_poles_is_split() {
        let sp = ScaledParams::equal_hopping(20.0, 0.0, 0.0, 1.0);
        let occ = Occupation::fock(1, 0, 0);
        let roots =
            boundary_solve(Species::Ground, &occ, &sp, None, (-7.0, 33.0), &SolveOptions::default())
                .unwrap();
        let w = two_mott_window(Species::Ground, &occ, &sp).unwrap();
        assert!(roots.iter().any(|r| (r - w.lower().unwrap()).abs() < 1e-8));
        assert!(roots.iter().any(|r| (r - w.upper().unwrap()).abs() < 1e-8));
        assert!(roots.windows(2).all(|p| p[1] - p[0] > 1e-9));
    }

    #[test]
    fn window_matches_closed_forms_in_limits() {
        let sp = ScaledParams::equal_hopping(40.0, 15.0, 0.0, 100.0);
        let occ = Occupation::fock(2, 1, 1);
        for species in Species::BOTH {
            let w = mott_window(species, &occ, &sp, None, &SolveOptions::default()).unwrap();
            let want = two_mott_window(species, &occ, &sp).unwrap();
            assert!((w.lower().unwrap() - want.lower().unwrap()).abs() < 1e-8);
            assert!((w.upper().unwrap() - want.upper().unwrap()).abs() < 1e-8);
        }
        let opts = SolveOptions::with_terms(Terms::CAVITY_ONLY);
        let w = mott_window(Species::Ground, &ONE, &fig7(), None, &opts).unwrap();
        assert!((w.lower().unwrap() - 165.0).abs() < 1e-8);
        assert!((w.upper().unwrap() - 240.0).abs() < 1e-8);
    }

    #[test]
    fn membership_agrees_with_window() {
        let sp = ScaledParams::equal_hopping(40.0, 15.0, 0.3, 100.0);
        let occ = Occupation::fock(1, 1, 1);
        let opts = SolveOptions::default();
        let base = sp.mu_stationary(&occ);
        let w = mott_window(Species::Ground, &occ, &sp, Some(base.mu_e), &opts).unwrap();
        let (lo, hi) = w.bounds().unwrap();
        for mu_g in [lo - 0.5, lo + 1e-3, 0.5 * (lo + hi), hi - 1e-3, hi + 0.5] {
            let m = ChemicalPotentials::new(mu_g, base.mu_e);
            assert_eq!(is_mott(Species::Ground, &occ, &sp, m, &opts).unwrap(), w.contains(mu_g));
        }
    }

    #[test]
    fn default_lines() {
        assert_eq!(Line::default_for(Species::Ground, Terms::FULL), Line::PhiG);
        assert_eq!(Line::default_for(Species::Ground, Terms::CAVITY_ONLY), Line::PhiE);
        assert_eq!(Line::default_for(Species::Excited, Terms::FULL), Line::PhiE);
        assert_eq!(Line::default_for(Species::Excited, Terms::CAVITY_ONLY), Line::PhiG);
    }
}
