//! Brute-force check of the second-order energy coefficients.
//!
//! Three independent evaluations of `E^(1) + E^(2)` for the per-site
//! interaction
//!
//! ```text
//! H_I = -zJ_g (b^+ + b) phi_g + zJ_g phi_g^2 - zJ_e (c^+ + c) phi_e + zJ_e phi_e^2
//!       + f a (b phi_e + c^+ phi_g - phi_g phi_e) + f^* a^+ (b^+ phi_e + c phi_g - phi_g phi_e)
//! ```
//!
//! are compared: the closed-form coefficients ([`e2_closed_form`]), a sum over
//! the ten enumerated intermediate states ([`appendix_sum`]), and a dense
//! matrix built from truncated ladder operators ([`e2_state_sum`]). Here `b`,
//! `c` and `a` annihilate a ground atom, an excited atom and a photon.
//! Everything is in physical units and `f` is taken real and positive.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{PhaseError, Result};
use crate::params::{onsite_energy, ChemicalPotentials, Occupation, PhysicalParams};

/// Residual threshold for every check, relative to `max(1, |expected|)`.
pub const ORACLE_TOL: f64 = 1e-10;

const POLE_TOL: f64 = 1e-12;

/// Operator whose matrix element `<0|op|k>` connects the reference state to an intermediate state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Channel {
    B,
    BDag,
    C,
    CDag,
    A,
    ADag,
    BA,
    CADag,
    ACDag,
    ADagBDag,
}

impl Channel {
    pub const ALL: [Channel; 10] = [
        Channel::B,
        Channel::BDag,
        Channel::C,
        Channel::CDag,
        Channel::A,
        Channel::ADag,
        Channel::BA,
        Channel::CADag,
        Channel::ACDag,
        Channel::ADagBDag,
    ];

    /// `(dn_g, dn_e, dn_c)` of the intermediate state relative to `|0>`.
    pub fn delta(self) -> (i32, i32, i32) {
        match self {
            Channel::B => (1, 0, 0),
            Channel::BDag => (-1, 0, 0),
            Channel::C => (0, 1, 0),
            Channel::CDag => (0, -1, 0),
            Channel::A => (0, 0, 1),
            Channel::ADag => (0, 0, -1),
            Channel::BA => (1, 0, 1),
            Channel::CADag => (0, 1, -1),
            Channel::ACDag => (0, -1, 1),
            Channel::ADagBDag => (-1, 0, -1),
        }
    }

    /// One-based index of the intermediate state.
    pub fn state_index(self) -> u8 {
        Channel::ALL.iter().position(|&c| c == self).unwrap() as u8 + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::B => "b",
            Channel::BDag => "b+",
            Channel::C => "c",
            Channel::CDag => "c+",
            Channel::A => "a",
            Channel::ADag => "a+",
            Channel::BA => "ba",
            Channel::CADag => "ca+",
            Channel::ACDag => "ac+",
            Channel::ADagBDag => "a+b+",
        }
    }

    /// Prefactor multiplying the operator in `H_I`.
    fn coupling(self, p: &PhysicalParams, phi_g: f64, phi_e: f64) -> f64 {
        let z = f64::from(p.z);
        let f = p.f_sq.sqrt();
        match self {
            Channel::B | Channel::BDag => -z * p.j_g * phi_g,
            Channel::C | Channel::CDag => -z * p.j_e * phi_e,
            Channel::A | Channel::ADag => -f * phi_g * phi_e,
            Channel::BA | Channel::ADagBDag => f * phi_e,
            Channel::CADag | Channel::ACDag => f * phi_g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntermediateState {
    pub delta: (i32, i32, i32),
    /// Matrix element of the bare operator, `<0|op|k>`.
    pub amplitude: f64,
    /// `E_0 - E_k` at zeroth order.
    pub denom: f64,
    pub channel: Channel,
}

fn integer_photons(occ: &Occupation) -> Result<u32> {
    let n_c = occ.n_c();
    if n_c.fract() != 0.0 || n_c > f64::from(u32::MAX) {
        return Err(PhaseError::NonIntegerPhotons(n_c));
    }
    Ok(n_c as u32)
}

/// The ten intermediate states reachable from `|n_g, n_e, n_c>`, in order
/// `|1>..|10>`. States with a vanishing amplitude are kept.
pub fn enumerate_states(occ: &Occupation, mu: ChemicalPotentials, p: &PhysicalParams) -> Vec<IntermediateState> {
    let g = f64::from(occ.n_g);
    let e = f64::from(occ.n_e);
    let c = occ.n_c();
    let (ug, ue, ueg, ec) = (p.u_g, p.u_e, p.u_eg, p.eps_c);
    let (mg, me) = (mu.mu_g, mu.mu_e);
    let rows = [
        ((g + 1.0).sqrt(), mg - ug * g - ueg * e),
        (g.sqrt(), -mg + ug * (g - 1.0) + ueg * e),
        ((e + 1.0).sqrt(), me - ue * e - ueg * g),
        (e.sqrt(), -me + ue * (e - 1.0) + ueg * g),
        ((c + 1.0).sqrt(), -ec),
        (c.sqrt(), ec),
        ((g + 1.0).sqrt() * (c + 1.0).sqrt(), mg - ec - ug * g - ueg * e),
        ((e + 1.0).sqrt() * c.sqrt(), me + ec - ue * e - ueg * g),
        (e.sqrt() * (c + 1.0).sqrt(), -me - ec + ue * (e - 1.0) + ueg * g),
        (g.sqrt() * c.sqrt(), -mg + ec + ug * (g - 1.0) + ueg * e),
    ];
    Channel::ALL
        .iter()
        .zip(rows)
        .map(|(&channel, (amplitude, denom))| IntermediateState {
            delta: channel.delta(),
            amplitude,
            denom,
            channel,
        })
        .collect()
}

/// Coefficients of `phi_g^2`, `phi_e^2` and `phi_g^2 phi_e^2` in `E^(1) + E^(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondOrderCoefficients {
    pub c_g: f64,
    pub c_e: f64,
    pub c_mix: f64,
}

fn ratio(num: f64, den: f64, state: u8, at: f64) -> Result<f64> {
    if num == 0.0 {
        return Ok(0.0);
    }
    if den.abs() < POLE_TOL {
        return Err(PhaseError::Pole { state, at });
    }
    Ok(num / den)
}

/// Closed-form coefficients, written out term by term.
pub fn e2_closed_form(occ: &Occupation, mu: ChemicalPotentials, p: &PhysicalParams) -> Result<SecondOrderCoefficients> {
    let g = f64::from(occ.n_g);
    let e = f64::from(occ.n_e);
    let c = occ.n_c();
    let z = f64::from(p.z);
    let (zjg, zje) = (z * p.j_g, z * p.j_e);
    let (ug, ue, ueg, ec, f2) = (p.u_g, p.u_e, p.u_eg, p.eps_c, p.f_sq);
    let (mg, me) = (mu.mu_g, mu.mu_e);

    let hop_g = ratio(g + 1.0, mg - ug * g - ueg * e, 1, mg)? + ratio(g, -mg + ug * (g - 1.0) + ueg * e, 2, mg)?;
    let hop_e = ratio(e + 1.0, me - ue * e - ueg * g, 3, me)? + ratio(e, -me + ue * (e - 1.0) + ueg * g, 4, me)?;
    let cav_g = ratio((e + 1.0) * c, me + ec - ue * e - ueg * g, 8, me)?
        + ratio(e * (c + 1.0), -me - ec + ue * (e - 1.0) + ueg * g, 9, me)?;
    let cav_e = ratio(g * c, -mg + ec + ug * (g - 1.0) + ueg * e, 10, mg)?
        + ratio((g + 1.0) * (c + 1.0), mg - ec - ug * g - ueg * e, 7, mg)?;

    Ok(SecondOrderCoefficients {
        c_g: zjg + zjg * zjg * hop_g + f2 * cav_g,
        c_e: zje + zje * zje * hop_e + f2 * cav_e,
        c_mix: f2 * (c / ec - (c + 1.0) / ec),
    })
}

/// `E^(1) + E^(2)` summed over the enumerated intermediate states.
pub fn appendix_sum(
    occ: &Occupation,
    mu: ChemicalPotentials,
    p: &PhysicalParams,
    phi_g: f64,
    phi_e: f64,
) -> Result<f64> {
    Ok(first_order(p, phi_g, phi_e) + appendix_second_order(occ, mu, p, phi_g, phi_e)?)
}

fn first_order(p: &PhysicalParams, phi_g: f64, phi_e: f64) -> f64 {
    let z = f64::from(p.z);
    z * p.j_g * phi_g * phi_g + z * p.j_e * phi_e * phi_e
}

fn appendix_second_order(
    occ: &Occupation,
    mu: ChemicalPotentials,
    p: &PhysicalParams,
    phi_g: f64,
    phi_e: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for s in enumerate_states(occ, mu, p) {
        let m = s.channel.coupling(p, phi_g, phi_e) * s.amplitude;
        acc += ratio(m * m, s.denom, s.channel.state_index(), mu.mu_g)?;
    }
    Ok(acc)
}

/// First- and second-order parts of the dense state sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateSum {
    /// `<0|H_I|0>`
    pub first_order: f64,
    /// `sum_{k != 0} |<0|H_I|k>|^2 / (E_0 - E_k)`
    pub second_order: f64,
    /// Largest `|<k|H_I|0>|` onto a basis state at the truncation edge.
    pub outer_shell: f64,
}

impl StateSum {
    pub fn total(&self) -> f64 {
        self.first_order + self.second_order
    }
}

fn ladder(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// `E^(1) + E^(2)` from `H_I` assembled as a dense matrix on the Fock basis
/// `0..=n+2` in each of `(n_g, n_e, n_c)`.
pub fn e2_state_sum(
    occ: &Occupation,
    mu: ChemicalPotentials,
    p: &PhysicalParams,
    phi_g: f64,
    phi_e: f64,
) -> Result<f64> {
    Ok(state_sum_parts(occ, mu, p, phi_g, phi_e)?.total())
}

pub fn state_sum_parts(
    occ: &Occupation,
    mu: ChemicalPotentials,
    p: &PhysicalParams,
    phi_g: f64,
    phi_e: f64,
) -> Result<StateSum> {
    let n_c = integer_photons(occ)?;
    let dims = [occ.n_g as usize + 3, occ.n_e as usize + 3, n_c as usize + 3];
    let total = dims[0] * dims[1] * dims[2];
    let eye = |d: usize| DMatrix::<f64>::identity(d, d);
    let b = ladder(dims[0]).kronecker(&eye(dims[1]).kronecker(&eye(dims[2])));
    let c = eye(dims[0]).kronecker(&ladder(dims[1]).kronecker(&eye(dims[2])));
    let a = eye(dims[0]).kronecker(&eye(dims[1]).kronecker(&ladder(dims[2])));

    let z = f64::from(p.z);
    let f = p.f_sq.sqrt();
    let (zjg, zje) = (z * p.j_g, z * p.j_e);

    let index = |g: usize, e: usize, k: usize| (g * dims[1] + e) * dims[2] + k;
    let reference = index(occ.n_g as usize, occ.n_e as usize, n_c as usize);
    let ket0 = DVector::from_fn(total, |i, _| if i == reference { 1.0 } else { 0.0 });
    // H_I |0>, operator by operator
    let (bt, ct, at) = (b.transpose(), c.transpose(), a.transpose());
    let pair = phi_g * phi_e;
    let column = (&bt * &ket0 + &b * &ket0) * (-zjg * phi_g)
        + &ket0 * (zjg * phi_g * phi_g)
        + (&ct * &ket0 + &c * &ket0) * (-zje * phi_e)
        + &ket0 * (zje * phi_e * phi_e)
        + &a * (&b * &ket0 * phi_e + &ct * &ket0 * phi_g - &ket0 * pair) * f
        + &at * (&bt * &ket0 * phi_e + &c * &ket0 * phi_g - &ket0 * pair) * f;

    let energy = |g: usize, e: usize, k: usize| {
        onsite_energy(g as f64, e as f64, k as f64, mu, p.u_g, p.u_e, p.u_eg, p.eps_c)
    };
    let e0 = energy(occ.n_g as usize, occ.n_e as usize, n_c as usize);

    let mut second = 0.0;
    let mut outer: f64 = 0.0;
    for g in 0..dims[0] {
        for e in 0..dims[1] {
            for k in 0..dims[2] {
                let i = index(g, e, k);
                if i == reference {
                    continue;
                }
                let m = column[i];
                if g + 1 == dims[0] || e + 1 == dims[1] || k + 1 == dims[2] {
                    outer = outer.max(m.abs());
                }
                if m == 0.0 {
                    continue;
                }
                let d = e0 - energy(g, e, k);
                if d.abs() < POLE_TOL {
                    let delta = (
                        g as i32 - occ.n_g as i32,
                        e as i32 - occ.n_e as i32,
                        k as i32 - n_c as i32,
                    );
                    let state = Channel::ALL
                        .iter()
                        .find(|ch| ch.delta() == delta)
                        .map_or(0, |ch| ch.state_index());
                    return Err(PhaseError::Pole { state, at: mu.mu_g });
                }
                second += m * m / d;
            }
        }
    }
    Ok(StateSum {
        first_order: column[reference],
        second_order: second,
        outer_shell: outer,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub pass: bool,
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub seed: Option<u64>,
    pub occupation: (u32, u32, f64),
    pub params: PhysicalParams,
    pub mu: ChemicalPotentials,
    pub coefficients: SecondOrderCoefficients,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (g, e, c) = self.occupation;
        let seed = self.seed.map_or_else(|| "-".to_string(), |s| s.to_string());
        writeln!(
            f,
            "oracle seed={seed} occ=({g},{e},{c}) {}",
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        writeln!(
            f,
            "  c_g={:.12e} c_e={:.12e} |c_mix|={:.12e}",
            self.coefficients.c_g,
            self.coefficients.c_e,
            self.coefficients.c_mix.abs()
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "  {:<20} residual={:.3e} {}",
                c.name,
                c.residual,
                if c.pass { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

/// Compare `coeffs` (usually from [`e2_closed_form`]) against the dense state sum,
/// and the enumeration against the dense state sum.
pub fn verify_against(
    occ: &Occupation,
    mu: ChemicalPotentials,
    p: &PhysicalParams,
    coeffs: SecondOrderCoefficients,
) -> Result<OracleReport> {
    let s10 = state_sum_parts(occ, mu, p, 1.0, 0.0)?;
    let s01 = state_sum_parts(occ, mu, p, 0.0, 1.0)?;
    let s11 = state_sum_parts(occ, mu, p, 1.0, 1.0)?;
    let enumerated = appendix_second_order(occ, mu, p, 1.0, 1.0)?;
    let z = f64::from(p.z);

    let e0 = p.zero_order_energy(occ, mu);
    let denom_err = enumerate_states(occ, mu, p)
        .iter()
        .filter_map(|s| {
            let g = occ.n_g as i64 + i64::from(s.delta.0);
            let e = occ.n_e as i64 + i64::from(s.delta.1);
            let k = occ.n_c() + f64::from(s.delta.2);
            if g < 0 || e < 0 || k < 0.0 {
                return None;
            }
            let ek = onsite_energy(g as f64, e as f64, k, mu, p.u_g, p.u_e, p.u_eg, p.eps_c);
            Some(rel(s.denom, e0 - ek))
        })
        .fold(0.0, f64::max);

    let raw = [
        ("c_g", rel(s10.total(), coeffs.c_g)),
        ("c_e", rel(s01.total(), coeffs.c_e)),
        ("c_g+c_e+c_mix", rel(s11.total(), coeffs.c_g + coeffs.c_e + coeffs.c_mix)),
        ("c_mix=-|f|^2/eps_c", rel(coeffs.c_mix, -p.f_sq / p.eps_c)),
        ("first_order", rel(s11.first_order, z * (p.j_g + p.j_e))),
        ("enumeration", rel(enumerated, s11.second_order)),
        ("denominators", denom_err),
        ("outer_shell", s10.outer_shell.max(s01.outer_shell).max(s11.outer_shell)),
    ];
    let checks: Vec<Check> = raw
        .into_iter()
        .map(|(name, residual)| Check {
            name,
            residual,
            pass: residual < ORACLE_TOL,
        })
        .collect();
    Ok(OracleReport {
        seed: None,
        occupation: (occ.n_g, occ.n_e, occ.n_c()),
        params: *p,
        mu,
        coefficients: coeffs,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

pub fn verify_equivalence(occ: &Occupation, mu: ChemicalPotentials, p: &PhysicalParams) -> Result<OracleReport> {
    verify_against(occ, mu, p, e2_closed_form(occ, mu, p)?)
}

/// A reproducible random stable parameter point for `seed`.
pub fn random_draw(seed: u64) -> (Occupation, ChemicalPotentials, PhysicalParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let u_g: f64 = rng.random_range(2.0..60.0);
        let u_e: f64 = rng.random_range(2.0..60.0);
        let u_eg = rng.random_range(0.0..0.95) * (u_g * u_e).sqrt();
        let p = PhysicalParams {
            j_g: rng.random_range(0.2..3.0),
            j_e: rng.random_range(0.2..3.0),
            u_g,
            u_e,
            u_eg,
            f_sq: rng.random_range(0.0..80.0),
            eps_g: rng.random_range(-5.0..5.0),
            eps_e: rng.random_range(0.0..50.0),
            eps_c: rng.random_range(1.0..120.0),
            z: rng.random_range(1..=8),
        };
        let occ = Occupation::fock(
            rng.random_range(0..=2),
            rng.random_range(0..=2),
            rng.random_range(0..=2),
        );
        let base = p.mu_stationary(&occ);
        let mu = ChemicalPotentials::new(
            base.mu_g + rng.random_range(-0.4..0.4) * u_g,
            base.mu_e + rng.random_range(-0.4..0.4) * u_e,
        );
        if !p.stability().is_stable() {
            continue;
        }
        // keep clear of accidental near-degeneracies
        let scale = u_g.max(u_e).max(p.eps_c);
        if enumerate_states(&occ, mu, &p).iter().all(|s| s.denom.abs() > 1e-3 * scale) {
            return (occ, mu, p);
        }
    }
}

/// [`verify_equivalence`] on `count` random draws seeded `seed, seed+1, ...`.
pub fn verify_random(seed: u64, count: u64) -> Vec<Result<OracleReport>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let (occ, mu, p) = random_draw(s);
            verify_equivalence(&occ, mu, &p).map(|mut r| {
                r.seed = Some(s);
                r
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig7_physical() -> PhysicalParams {
        PhysicalParams {
            j_g: 1.0,
            j_e: 1.0,
            u_g: 250.0,
            u_e: 250.0,
            u_eg: 15.0,
            f_sq: 25.0,
            eps_g: 0.0,
            eps_e: 100.0,
            eps_c: 100.0,
            z: 1,
        }
    }

    const ONE: Occupation = Occupation::fock(1, 1, 1);

    #[test]
    fn amplitudes_at_one_one_one() {
        let s = enumerate_states(&ONE, ChemicalPotentials::new(150.0, 150.0), &fig7_physical());
        let r2 = 2f64.sqrt();
        let want = [r2, 1.0, r2, 1.0, r2, 1.0, 2.0, r2, r2, 1.0];
        assert_eq!(s.len(), 10);
        for (st, w) in s.iter().zip(want) {
            assert!((st.amplitude - w).abs() < 1e-15, "{st:?}");
        }
        assert_eq!(s[6].denom, -215.0);
        assert_eq!(s[6].channel, Channel::BA);
    }

    #[test]
    fn vacuum_kills_lowering_channels() {
        let s = enumerate_states(&Occupation::fock(0, 0, 0), ChemicalPotentials::new(1.0, 1.0), &fig7_physical());
        for st in s {
            let zero = matches!(
                st.channel,
                Channel::BDag | Channel::CDag | Channel::ADag | Channel::CADag | Channel::ACDag | Channel::ADagBDag
            );
            assert_eq!(st.amplitude == 0.0, zero, "{:?}", st.channel);
        }
    }

    #[test]
    fn deltas_are_unit_steps() {
        for ch in Channel::ALL {
            let (a, b, c) = ch.delta();
            assert!([a, b, c].iter().all(|d| (-1..=1).contains(d)));
        }
    }

    #[test]
    fn closed_form_matches_scaled_residual() {
        let p = fig7_physical();
        let mu = ChemicalPotentials::new(150.0, 150.0);
        let c = e2_closed_form(&ONE, mu, &p).unwrap();
        assert!((c.c_g - -2.570898).abs() < 1e-6);
        assert!((c.c_mix - -0.25).abs() < 1e-15);
        let p0 = PhysicalParams { f_sq: 0.0, ..p };
        assert_eq!(e2_closed_form(&ONE, mu, &p0).unwrap().c_mix, 0.0);
    }

    #[test]
    fn state_sum_isolates_coefficients() {
        let p = fig7_physical();
        let mu = p.mu_stationary(&ONE);
        let c = e2_closed_form(&ONE, mu, &p).unwrap();
        assert!((e2_state_sum(&ONE, mu, &p, 1.0, 0.0).unwrap() - c.c_g).abs() < 1e-10);
        assert!((e2_state_sum(&ONE, mu, &p, 0.0, 1.0).unwrap() - c.c_e).abs() < 1e-10);
        assert_eq!(e2_state_sum(&ONE, mu, &p, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn fig7_point_passes() {
        let p = fig7_physical();
        let r = verify_equivalence(&ONE, p.mu_stationary(&ONE), &p).unwrap();
        assert!(r.pass, "{r}");
    }

    #[test]
    fn corrupted_denominator_fails() {
        let p = fig7_physical();
        let mu = p.mu_stationary(&ONE);
        let mut c = e2_closed_form(&ONE, mu, &p).unwrap();
        // state |7> denominator off by one unit
        let d7 = mu.mu_g - p.eps_c - p.u_g - p.u_eg;
        c.c_e += p.f_sq * 4.0 * (1.0 / (d7 + 1.0) - 1.0 / d7);
        let r = verify_against(&ONE, mu, &p, c).unwrap();
        assert!(!r.pass);
        let bad: Vec<_> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        assert_eq!(bad, vec!["c_e", "c_g+c_e+c_mix"]);
        assert!(r.checks[1].residual > 1e-6);
    }

    #[test]
    fn fractional_photons_rejected() {
        let p = fig7_physical();
        let occ = Occupation::new(1, 1, 0.5).unwrap();
        assert_eq!(
            e2_state_sum(&occ, p.mu_stationary(&occ), &p, 1.0, 1.0),
            Err(PhaseError::NonIntegerPhotons(0.5))
        );
    }

    #[test]
    fn pole_is_named() {
        let p = fig7_physical();
        let mu = ChemicalPotentials::new(265.0, 150.0);
        assert!(matches!(e2_closed_form(&ONE, mu, &p), Err(PhaseError::Pole { state: 1, .. })));
        assert!(matches!(
            e2_state_sum(&ONE, mu, &p, 1.0, 0.0),
            Err(PhaseError::Pole { state: 1, .. })
        ));
    }

    #[test]
    fn random_draws_are_reproducible_and_pass() {
        let a = verify_random(7, 20);
        let b = verify_random(7, 20);
        assert_eq!(a, b);
        for r in a {
            let r = r.unwrap();
            assert!(r.pass, "{r}");
        }
    }
}
