use thiserror::Error;

use crate::Species;

/// Failures raised by the boundary computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhaseError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `U_e U_g = U_eg^2`: the stationary-point equations have no unique solution.
    #[error("interaction matrix is singular (U_e*U_g = U_eg^2)")]
    SingularInteraction,

    #[error("{species} occupancy is zero; no Mott window is defined for an empty species")]
    EmptySpecies { species: Species },

    /// An energy denominator vanished. `state` is the index (1..=10) of the
    /// intermediate state whose energy difference is zero.
    #[error("pole: energy denominator of intermediate state |{state}> vanishes at mu = {at}")]
    Pole { state: u8, at: f64 },

    #[error("bracket endpoint {at} sits on the pole of intermediate state |{state}>")]
    BracketContainsPole { state: u8, at: f64 },

    #[error("photon number {0} is not an integer; the Fock-space oracle needs integer n_c")]
    NonIntegerPhotons(f64),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error("empty axis range for `{0}`")]
    EmptyAxis(&'static str),
}

impl PhaseError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        PhaseError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by hitting a singular point of the equations
    /// rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            PhaseError::SingularInteraction
                | PhaseError::Pole { .. }
                | PhaseError::BracketContainsPole { .. }
        )
    }
}

pub type Result<T, E = PhaseError> = std::result::Result<T, E>;
