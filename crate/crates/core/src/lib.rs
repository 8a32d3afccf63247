//! Mean-field superfluid / Mott-insulator boundaries for the single-component
//! Bose-Hubbard model, its two-component extension, and the two-component
//! model whose species are coupled through a single cavity photon mode.
//!
//! Energies are scaled per species: ground quantities by `zJ_g`, excited
//! quantities by `zJ_e`, and the photon-assisted coupling by `F = |f|^2 / (z^2 J_g J_e)`.

pub mod cavity;
pub mod cli;
pub mod config;
pub mod diagram;
pub mod error;
pub mod hubbard;
pub mod landau;
pub mod oracle;
pub mod output;
pub mod params;
pub mod presets;
pub mod roots;
pub mod window;

pub use error::{PhaseError, Result};
pub use params::{
    ChemicalPotentials, Instability, Occupation, PhysicalParams, ScaledParams, Species, Stability,
    StationaryOccupations,
};
pub use window::{Branch, MottWindow};
