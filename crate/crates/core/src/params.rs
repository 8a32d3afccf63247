//! Model parameters, the zJ scaling convention and the zero-order
//! (on-site) ground state of the two-species model.
//!
//! Chemical potentials are unbarred throughout this module: `mu_g` is the
//! barred chemical potential minus the on-site energy `eps_g` (same for `e`).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PhaseError, Result};

/// Atomic species: atoms in the lower band (`Ground`) or the upper band (`Excited`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Ground,
    Excited,
}

impl Species {
    pub const BOTH: [Species; 2] = [Species::Ground, Species::Excited];

    pub fn other(self) -> Species {
        match self {
            Species::Ground => Species::Excited,
            Species::Excited => Species::Ground,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Species::Ground => "ground",
            Species::Excited => "excited",
        }
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Hamiltonian couplings in physical energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub j_g: f64,
    pub j_e: f64,
    pub u_g: f64,
    pub u_e: f64,
    pub u_eg: f64,
    /// |f|^2, the squared atom-photon coupling.
    pub f_sq: f64,
    pub eps_g: f64,
    pub eps_e: f64,
    pub eps_c: f64,
    /// Coordination number.
    pub z: u32,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("j_g", self.j_g),
            ("j_e", self.j_e),
            ("u_g", self.u_g),
            ("u_e", self.u_e),
            ("u_eg", self.u_eg),
            ("f_sq", self.f_sq),
            ("eps_g", self.eps_g),
            ("eps_e", self.eps_e),
            ("eps_c", self.eps_c),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(PhaseError::invalid(name, "must be finite"));
            }
        }
        if self.j_g <= 0.0 {
            return Err(PhaseError::invalid("j_g", "hopping must be positive"));
        }
        if self.j_e <= 0.0 {
            return Err(PhaseError::invalid("j_e", "hopping must be positive"));
        }
        if self.z < 1 {
            return Err(PhaseError::invalid("z", "coordination number must be >= 1"));
        }
        if self.f_sq < 0.0 {
            return Err(PhaseError::invalid("f_sq", "|f|^2 cannot be negative"));
        }
        if self.eps_c <= 0.0 {
            return Err(PhaseError::invalid("eps_c", "photon energy must be positive"));
        }
        Ok(())
    }

    /// Divide every energy by the hopping scale of the species it belongs to.
    pub fn scale(&self) -> Result<ScaledParams> {
        self.validate()?;
        let z = f64::from(self.z);
        let zj_g = z * self.j_g;
        let zj_e = z * self.j_e;
        Ok(ScaledParams {
            u_g: self.u_g / zj_g,
            u_e: self.u_e / zj_e,
            u_eg_g: self.u_eg / zj_g,
            u_eg_e: self.u_eg / zj_e,
            f: self.f_sq / (z * z * self.j_g * self.j_e),
            eps_c_g: self.eps_c / zj_g,
            eps_c_e: self.eps_c / zj_e,
            eps_g: self.eps_g / zj_g,
            eps_e: self.eps_e / zj_e,
        })
    }

    pub fn stability(&self) -> Stability {
        Stability::classify(self.u_g, self.u_e, self.u_eg)
    }

    /// Stationary occupations `dE0/dn_g = dE0/dn_e = 0` solved for given
    /// chemical potentials (real valued, not rounded).
    pub fn occupations_from_mu(&self, mu: ChemicalPotentials) -> Result<StationaryOccupations> {
        let det = self.u_e * self.u_g - self.u_eg * self.u_eg;
        let scale = (self.u_e * self.u_g).abs() + self.u_eg * self.u_eg;
        if det == 0.0 || det.abs() <= 1e-14 * scale {
            return Err(PhaseError::SingularInteraction);
        }
        let a_e = 2.0 * mu.mu_e + self.u_e;
        let a_g = 2.0 * mu.mu_g + self.u_g;
        Ok(StationaryOccupations {
            n_e: (self.u_g * a_e - self.u_eg * a_g) / (2.0 * det),
            n_g: (self.u_e * a_g - self.u_eg * a_e) / (2.0 * det),
        })
    }

    /// Chemical potentials at which `occ` is the stationary point of the
    /// on-site energy.
    pub fn mu_stationary(&self, occ: &Occupation) -> ChemicalPotentials {
        let (n_g, n_e) = (f64::from(occ.n_g), f64::from(occ.n_e));
        ChemicalPotentials {
            mu_g: self.u_g * (n_g - 0.5) + self.u_eg * n_e,
            mu_e: self.u_e * (n_e - 0.5) + self.u_eg * n_g,
        }
    }

    /// On-site energy of `|n_g, n_e, n_c>` at zero hopping and zero coupling.
    pub fn zero_order_energy(&self, occ: &Occupation, mu: ChemicalPotentials) -> f64 {
        onsite_energy(
            f64::from(occ.n_g),
            f64::from(occ.n_e),
            occ.n_c(),
            mu,
            self.u_g,
            self.u_e,
            self.u_eg,
            self.eps_c,
        )
    }
}

/// `E0 = -mu_g n_g - mu_e n_e + eps_c n_c + U_eg n_g n_e + U_g/2 n_g(n_g-1) + U_e/2 n_e(n_e-1)`,
/// extended polynomially to arbitrary real occupations.
#[allow(clippy::too_many_arguments)]
pub(crate) fn onsite_energy(
    n_g: f64,
    n_e: f64,
    n_c: f64,
    mu: ChemicalPotentials,
    u_g: f64,
    u_e: f64,
    u_eg: f64,
    eps_c: f64,
) -> f64 {
    -mu.mu_g * n_g - mu.mu_e * n_e
        + eps_c * n_c
        + u_eg * n_g * n_e
        + 0.5 * u_g * n_g * (n_g - 1.0)
        + 0.5 * u_e * n_e * (n_e - 1.0)
}

/// Dimensionless parameters: ground-species quantities are divided by `zJ_g`,
/// excited-species quantities by `zJ_e`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ScaledParams {
    pub u_g: f64,
    pub u_e: f64,
    /// `U_eg / zJ_g`
    pub u_eg_g: f64,
    /// `U_eg / zJ_e`
    pub u_eg_e: f64,
    /// `F = |f|^2 / (z^2 J_g J_e)`
    pub f: f64,
    pub eps_c_g: f64,
    pub eps_c_e: f64,
    pub eps_g: f64,
    pub eps_e: f64,
}

impl ScaledParams {
    /// Equal hoppings: one number per energy, shared by both scalings.
    /// The excited on-site energy is put in resonance with the cavity (`eps_e = eps_c`).
    pub fn equal_hopping(u: f64, u_eg: f64, f: f64, eps_c: f64) -> Self {
        ScaledParams {
            u_g: u,
            u_e: u,
            u_eg_g: u_eg,
            u_eg_e: u_eg,
            f,
            eps_c_g: eps_c,
            eps_c_e: eps_c,
            eps_g: 0.0,
            eps_e: eps_c,
        }
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u_g = u;
        self.u_e = u;
        self
    }

    pub fn with_u_eg(mut self, u_eg: f64) -> Self {
        self.u_eg_g = u_eg;
        self.u_eg_e = u_eg;
        self
    }

    pub fn with_eps_c(mut self, eps_c: f64) -> Self {
        self.eps_c_g = eps_c;
        self.eps_c_e = eps_c;
        self
    }

    pub fn with_f(mut self, f: f64) -> Self {
        self.f = f;
        self
    }

    pub fn u(&self, species: Species) -> f64 {
        match species {
            Species::Ground => self.u_g,
            Species::Excited => self.u_e,
        }
    }

    /// Inter-species repulsion in the scaling of `species`.
    pub fn u_eg(&self, species: Species) -> f64 {
        match species {
            Species::Ground => self.u_eg_g,
            Species::Excited => self.u_eg_e,
        }
    }

    pub fn eps_c(&self, species: Species) -> f64 {
        match species {
            Species::Ground => self.eps_c_g,
            Species::Excited => self.eps_c_e,
        }
    }

    pub fn eps(&self, species: Species) -> f64 {
        match species {
            Species::Ground => self.eps_g,
            Species::Excited => self.eps_e,
        }
    }

    /// Scaled, unbarred chemical potentials at which `occ` is stationary.
    pub fn mu_stationary(&self, occ: &Occupation) -> ChemicalPotentials {
        let (n_g, n_e) = (f64::from(occ.n_g), f64::from(occ.n_e));
        ChemicalPotentials {
            mu_g: self.u_g * (n_g - 0.5) + self.u_eg_g * n_e,
            mu_e: self.u_e * (n_e - 0.5) + self.u_eg_e * n_g,
        }
    }

    /// Fails when the on-site interaction matrix is singular, so that an
    /// occupation is not the unique stationary point of the on-site energy.
    pub fn check_invertible(&self) -> Result<()> {
        let det = self.u_g * self.u_e - self.u_eg_g * self.u_eg_e;
        let scale = (self.u_g * self.u_e).abs() + (self.u_eg_g * self.u_eg_e).abs();
        if det == 0.0 || det.abs() <= 1e-14 * scale {
            return Err(PhaseError::SingularInteraction);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("u_g", self.u_g),
            ("u_e", self.u_e),
            ("u_eg_g", self.u_eg_g),
            ("u_eg_e", self.u_eg_e),
            ("F", self.f),
            ("eps_c_g", self.eps_c_g),
            ("eps_c_e", self.eps_c_e),
            ("eps_g", self.eps_g),
            ("eps_e", self.eps_e),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(PhaseError::invalid(name, "must be finite"));
            }
        }
        if self.f < 0.0 {
            return Err(PhaseError::invalid("F", "coupling cannot be negative"));
        }
        Ok(())
    }
}

/// Integer atom numbers per site and the mean photon number per site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Occupation {
    pub n_g: u32,
    pub n_e: u32,
    n_c: f64,
}

impl Occupation {
    pub fn new(n_g: u32, n_e: u32, n_c: f64) -> Result<Self> {
        if !n_c.is_finite() || n_c < 0.0 {
            return Err(PhaseError::invalid("n_c", "photon number must be finite and >= 0"));
        }
        Ok(Occupation { n_g, n_e, n_c })
    }

    /// Occupation with an integer photon number.
    pub const fn fock(n_g: u32, n_e: u32, n_c: u32) -> Self {
        Occupation {
            n_g,
            n_e,
            n_c: n_c as f64,
        }
    }

    pub fn n_c(&self) -> f64 {
        self.n_c
    }

    pub fn with_n_c(self, n_c: f64) -> Result<Self> {
        Occupation::new(self.n_g, self.n_e, n_c)
    }

    pub fn count(&self, species: Species) -> u32 {
        match species {
            Species::Ground => self.n_g,
            Species::Excited => self.n_e,
        }
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_g, self.n_e, self.n_c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChemicalPotentials {
    pub mu_g: f64,
    pub mu_e: f64,
}

impl ChemicalPotentials {
    pub fn new(mu_g: f64, mu_e: f64) -> Self {
        ChemicalPotentials { mu_g, mu_e }
    }

    pub fn get(&self, species: Species) -> f64 {
        match species {
            Species::Ground => self.mu_g,
            Species::Excited => self.mu_e,
        }
    }

    pub fn set(&mut self, species: Species, value: f64) {
        match species {
            Species::Ground => self.mu_g = value,
            Species::Excited => self.mu_e = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryOccupations {
    pub n_g: f64,
    pub n_e: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instability {
    /// `U_g <= 0`
    GroundAttractive,
    /// `U_e <= 0`
    ExcitedAttractive,
    /// `U_e U_g <= U_eg^2`
    InterspeciesDominant,
}

/// Advisory classification; unstable parameters are still accepted everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable(Vec<Instability>),
}

impl Stability {
    pub fn classify(u_g: f64, u_e: f64, u_eg: f64) -> Self {
        let mut reasons = Vec::new();
        if u_g <= 0.0 {
            reasons.push(Instability::GroundAttractive);
        }
        if u_e <= 0.0 {
            reasons.push(Instability::ExcitedAttractive);
        }
        if u_e * u_g <= u_eg * u_eg {
            reasons.push(Instability::InterspeciesDominant);
        }
        if reasons.is_empty() {
            Stability::Stable
        } else {
            Stability::Unstable(reasons)
        }
    }

    pub fn is_stable(&self) -> bool {
        matches!(self, Stability::Stable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_scaled_interaction() {
        let sp = ScaledParams::equal_hopping(1.0, 1.0, 0.0, 1.0);
        assert_eq!(sp.check_invertible(), Err(PhaseError::SingularInteraction));
        assert!(sp.with_u_eg(0.5).check_invertible().is_ok());
    }

    fn base() -> PhysicalParams {
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

    #[test]
    fn scale_unit_divisors() {
        let s = base().scale().unwrap();
        assert_eq!(s.u_g, 250.0);
        assert_eq!(s.f, 25.0);
        assert_eq!(s.eps_c_g, 100.0);
    }

    #[test]
    fn scale_coupling_uses_both_hoppings() {
        let p = PhysicalParams {
            j_g: 2.0,
            j_e: 1.0,
            z: 3,
            f_sq: 36.0,
            ..base()
        };
        assert!((p.scale().unwrap().f - 2.0).abs() < 1e-15);
    }

    #[test]
    fn scale_interspecies_for_z6() {
        let p = PhysicalParams {
            z: 6,
            u_eg: 90.0,
            ..base()
        };
        let s = p.scale().unwrap();
        assert!((s.u_eg_g - 15.0).abs() < 1e-12);
        assert_eq!(s.u_eg_g, s.u_eg_e);
        assert_eq!(s.eps_c_g, s.eps_c_e);
    }

    #[test]
    fn scale_rejects_bad_hopping() {
        assert!(PhysicalParams { j_g: 0.0, ..base() }.scale().is_err());
        assert!(PhysicalParams { j_e: -1.0, ..base() }.scale().is_err());
        assert!(PhysicalParams { z: 0, ..base() }.scale().is_err());
    }

    #[test]
    fn zero_order_energy_examples() {
        let p = base();
        let any = ChemicalPotentials::new(3.0, -7.0);
        assert_eq!(p.zero_order_energy(&Occupation::fock(0, 0, 0), any), 0.0);
        let mu = ChemicalPotentials::new(5.0, 0.0);
        assert_eq!(p.zero_order_energy(&Occupation::fock(1, 0, 0), mu), -5.0);
        let mu = ChemicalPotentials::new(140.0, 140.0);
        assert_eq!(p.zero_order_energy(&Occupation::fock(1, 1, 1), mu), -165.0);
    }

    #[test]
    fn occupations_from_mu_examples() {
        let p = base();
        let n = p.occupations_from_mu(ChemicalPotentials::new(140.0, 140.0)).unwrap();
        assert!((n.n_e - 1.0).abs() < 1e-14);
        assert!((n.n_g - 1.0).abs() < 1e-14);

        let p = PhysicalParams { u_eg: 0.0, u_g: 4.0, ..base() };
        let n = p.occupations_from_mu(ChemicalPotentials::new(2.0, 0.0)).unwrap();
        assert!((n.n_g - 1.0).abs() < 1e-14);

        let p = PhysicalParams { u_g: 1.0, u_e: 1.0, u_eg: 1.0, ..base() };
        assert_eq!(
            p.occupations_from_mu(ChemicalPotentials::new(1.0, 1.0)),
            Err(PhaseError::SingularInteraction)
        );
    }

    #[test]
    fn mu_stationary_examples() {
        let p = base();
        let mu = p.mu_stationary(&Occupation::fock(1, 1, 0));
        assert_eq!((mu.mu_g, mu.mu_e), (140.0, 140.0));
        let p = PhysicalParams { u_eg: 0.0, u_g: 2.0, ..base() };
        assert_eq!(p.mu_stationary(&Occupation::fock(1, 0, 0)).mu_g, 1.0);
    }

    #[test]
    fn stability_examples() {
        assert!(base().stability().is_stable());
        let p = PhysicalParams { u_g: 1.0, u_e: 1.0, u_eg: 2.0, ..base() };
        assert_eq!(
            p.stability(),
            Stability::Unstable(vec![Instability::InterspeciesDominant])
        );
        let p = PhysicalParams { u_g: -1.0, ..base() };
        match p.stability() {
            Stability::Unstable(r) => assert!(r.contains(&Instability::GroundAttractive)),
            Stability::Stable => panic!("negative U_g must be flagged"),
        }
    }

    #[test]
    fn occupation_rejects_negative_photons() {
        assert!(Occupation::new(1, 1, -0.5).is_err());
        assert!(Occupation::new(1, 1, f64::NAN).is_err());
        assert_eq!(Occupation::new(1, 1, 0.5).unwrap().n_c(), 0.5);
    }
}
