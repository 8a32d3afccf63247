//! Mott lobes in the hopping-dominated limit (no cavity coupling).
//!
//! In units of `zJ` the boundary of the lobe with `n` atoms per site solves
//! `1 + (n+1)/(mu - u n) + n/(-mu + u(n-1)) = 0`, a quadratic in `mu` with roots
//! `mu = [u(2n-1) - 1 +/- sqrt(u^2 - 2u(2n+1) + 1)] / 2`.
//! The two-species lines are the same lobes translated by `u_eg * n_other`.

use crate::error::{PhaseError, Result};
use crate::params::{Occupation, ScaledParams, Species};
use crate::roots::sqrt_discriminant;
use crate::window::MottWindow;

fn lobe_discriminant(n: f64, u: f64) -> (f64, f64) {
    let b = 2.0 * u * (2.0 * n + 1.0);
    (u * u - b + 1.0, u * u + b + 1.0)
}

/// Mott window of the single-component model for `n >= 1` atoms per site.
///
/// Roots outside the open interval `(u(n-1), u n)` between the energy
/// denominators' zeros are spurious and reported as `Absent`.
pub fn single_mott_window(n: u32, u: f64) -> Result<MottWindow> {
    if n == 0 {
        return Err(PhaseError::invalid("n", "lobes start at one atom per site"));
    }
    if !(u.is_finite() && u >= 0.0) {
        return Err(PhaseError::invalid("u", "interaction must be finite and >= 0"));
    }
    let nf = f64::from(n);
    let (disc, scale) = lobe_discriminant(nf, u);
    let Some(sq) = sqrt_discriminant(disc, scale) else {
        return Ok(MottWindow::Absent);
    };
    let center = u * (2.0 * nf - 1.0) - 1.0;
    let lower = 0.5 * (center - sq);
    let upper = 0.5 * (center + sq);
    if lower > u * (nf - 1.0) && upper < u * nf {
        Ok(MottWindow::present(lower, upper))
    } else {
        Ok(MottWindow::Absent)
    }
}

/// Lobe tip: the larger zero of the discriminant and the chemical potential there.
pub fn single_lobe_tip(n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(PhaseError::invalid("n", "lobes start at one atom per site"));
    }
    let nf = f64::from(n);
    let u_tip = (2.0 * nf + 1.0) + 2.0 * (nf * (nf + 1.0)).sqrt();
    let mu_tip = 0.5 * (u_tip * (2.0 * nf - 1.0) - 1.0);
    Ok((u_tip, mu_tip))
}

/// Two-component window for one species, unbarred (`eps` offsets not added).
pub fn two_mott_window(species: Species, occ: &Occupation, sp: &ScaledParams) -> Result<MottWindow> {
    let own = occ.count(species);
    if own == 0 {
        return Err(PhaseError::EmptySpecies { species });
    }
    let shift = sp.u_eg(species) * f64::from(occ.count(species.other()));
    Ok(single_mott_window(own, sp.u(species))?.shifted(shift))
}

/// Two-component window including the on-site energy offset of the species.
pub fn two_mott_window_barred(
    species: Species,
    occ: &Occupation,
    sp: &ScaledParams,
) -> Result<MottWindow> {
    Ok(two_mott_window(species, occ, sp)?.shifted(sp.eps(species)))
}

/// Left-hand side of the hopping-limit boundary condition for `species`
/// (zero on the lobe boundary, positive inside the lobe). `mu` is unbarred.
pub fn hopping_residual(species: Species, occ: &Occupation, sp: &ScaledParams, mu: f64) -> f64 {
    let n = f64::from(occ.count(species));
    let u = sp.u(species);
    let shift = sp.u_eg(species) * f64::from(occ.count(species.other()));
    let add = mu - u * n - shift;
    let remove = -mu + u * (n - 1.0) + shift;
    let mut r = 1.0 + (n + 1.0) / add;
    if n != 0.0 {
        r += n / remove;
    }
    r
}
