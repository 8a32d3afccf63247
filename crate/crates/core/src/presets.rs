//! Parameter sets of the published phase diagrams.
//!
//! Axis ranges are chosen to show every line of a diagram; the interaction
//! and coupling values are those of the corresponding figure.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cavity::SweepAxis;
use crate::error::PhaseError;
use crate::params::{Occupation, ScaledParams};

/// Which boundary condition a diagram is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// One species, hopping only.
    Single,
    /// Two species, hopping only.
    Two,
    /// Two species, cavity terms only.
    Cavity,
    /// Two species, hopping and cavity terms together.
    General,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Single => "single",
            Variant::Two => "two",
            Variant::Cavity => "cavity",
            Variant::General => "general",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = PhaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" => Ok(Variant::Single),
            "two" => Ok(Variant::Two),
            "cavity" => Ok(Variant::Cavity),
            "general" => Ok(Variant::General),
            _ => Err(PhaseError::invalid("variant", format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FigureId {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
    Fig11,
    Fig12,
    Fig13,
    Fig14,
    Fig15,
    Fig16,
    Fig17,
    Fig18,
}

impl FigureId {
    pub const ALL: [FigureId; 16] = [
        FigureId::Fig1,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
        FigureId::Fig11,
        FigureId::Fig12,
        FigureId::Fig13,
        FigureId::Fig14,
        FigureId::Fig15,
        FigureId::Fig16,
        FigureId::Fig17,
        FigureId::Fig18,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
            FigureId::Fig11 => "fig11",
            FigureId::Fig12 => "fig12",
            FigureId::Fig13 => "fig13",
            FigureId::Fig14 => "fig14",
            FigureId::Fig15 => "fig15",
            FigureId::Fig16 => "fig16",
            FigureId::Fig17 => "fig17",
            FigureId::Fig18 => "fig18",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = PhaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| PhaseError::UnknownFigure(s.to_string()))
    }
}

/// Closed range sampled along one diagram axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
}

impl AxisRange {
    pub const fn new(min: f64, max: f64) -> Self {
        AxisRange { min, max }
    }

    /// `n` evenly spaced nodes `min + (max - min) i / (n - 1)`.
    pub fn nodes(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.min],
            _ => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigurePreset {
    pub id: Option<FigureId>,
    pub variant: Variant,
    pub params: ScaledParams,
    pub occupations: Vec<Occupation>,
    pub x_axis: SweepAxis,
    pub x_range: AxisRange,
    pub mu_range: AxisRange,
    /// Value of the horizontal axis at which the summary reports windows.
    pub reference: Option<f64>,
}

/// Reference point of the fig7 preset: `u = 250`, `u_eg = 15`, `F = 25`, `eps_c = 100`, `n_c = 1`.
fn fig7_params() -> ScaledParams {
    ScaledParams::equal_hopping(250.0, 15.0, 25.0, 100.0)
}

fn two_species(u_eg_g: f64, u_eg_e: f64, eps_e: f64, mu_max: f64) -> FigurePreset {
    FigurePreset {
        id: None,
        variant: Variant::Two,
        params: ScaledParams {
            u_eg_g,
            u_eg_e,
            eps_e,
            ..ScaledParams::default()
        },
        occupations: vec![Occupation::fock(1, 1, 0)],
        x_axis: SweepAxis::U,
        x_range: AxisRange::new(0.0, 40.0),
        mu_range: AxisRange::new(0.0, mu_max),
        reference: None,
    }
}

fn fig7_sweep(axis: SweepAxis, x_max: f64, reference: f64) -> FigurePreset {
    FigurePreset {
        id: None,
        variant: Variant::Cavity,
        params: fig7_params(),
        occupations: vec![Occupation::fock(1, 1, 1)],
        x_axis: axis,
        x_range: AxisRange::new(0.0, x_max),
        mu_range: AxisRange::new(0.0, 400.0),
        reference: Some(reference),
    }
}

fn multi(eps_c: f64, u_eg: f64, occs: &[(u32, u32)]) -> FigurePreset {
    FigurePreset {
        id: None,
        variant: Variant::Cavity,
        params: ScaledParams::equal_hopping(0.0, u_eg, 25.0, eps_c),
        occupations: occs.iter().map(|&(g, e)| Occupation::fock(g, e, 1)).collect(),
        x_axis: SweepAxis::U,
        x_range: AxisRange::new(0.0, 1000.0),
        mu_range: AxisRange::new(0.0, 1000.0),
        reference: None,
    }
}

pub fn figure_preset(id: FigureId) -> FigurePreset {
    let mut p = match id {
        FigureId::Fig1 => FigurePreset {
            id: None,
            variant: Variant::Single,
            params: ScaledParams::default(),
            occupations: (1..=3).map(|n| Occupation::fock(n, 0, 0)).collect(),
            x_axis: SweepAxis::U,
            x_range: AxisRange::new(0.0, 30.0),
            mu_range: AxisRange::new(0.0, 90.0),
            reference: None,
        },
        FigureId::Fig3 => two_species(15.0, 15.0, 0.0, 60.0),
        FigureId::Fig4 => two_species(15.0, 20.0, 0.0, 70.0),
        FigureId::Fig5 => two_species(15.0, 15.0, 100.0, 160.0),
        FigureId::Fig7 => FigurePreset {
            id: None,
            variant: Variant::Cavity,
            params: fig7_params(),
            occupations: vec![Occupation::fock(1, 1, 1)],
            x_axis: SweepAxis::U,
            x_range: AxisRange::new(0.0, 500.0),
            mu_range: AxisRange::new(0.0, 600.0),
            reference: Some(250.0),
        },
        FigureId::Fig8 => fig7_sweep(SweepAxis::UEg, 100.0, 15.0),
        FigureId::Fig9 => FigurePreset {
            mu_range: AxisRange::new(-200.0, 500.0),
            ..fig7_sweep(SweepAxis::EpsC, 300.0, 100.0)
        },
        FigureId::Fig10 => fig7_sweep(SweepAxis::F, 50.0, 25.0),
        FigureId::Fig11 => fig7_sweep(SweepAxis::NC, 3.0, 1.0),
        FigureId::Fig12 => multi(200.0, 50.0, &[(1, 1), (2, 0)]),
        FigureId::Fig13 => multi(200.0, 500.0, &[(1, 1), (2, 0)]),
        FigureId::Fig14 => multi(200.0, 500.0, &[(1, 1), (1, 0)]),
        FigureId::Fig15 => multi(200.0, 50.0, &[(1, 1), (1, 0)]),
        FigureId::Fig16 => multi(200.0, 250.0, &[(1, 1), (1, 0), (2, 0)]),
        FigureId::Fig17 => multi(100.0, 30.0, &[(1, 1), (1, 0), (0, 1)]),
        FigureId::Fig18 => multi(100.0, 30.0, &[(1, 1), (2, 0), (0, 2)]),
    };
    p.id = Some(id);
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caption_values() {
        assert_eq!(figure_preset(FigureId::Fig7).params.u_eg_g, 15.0);
        assert_eq!(figure_preset(FigureId::Fig13).params.u_eg_g, 500.0);
        assert_eq!(
            figure_preset(FigureId::Fig17).occupations,
            vec![Occupation::fock(1, 1, 1), Occupation::fock(1, 0, 1), Occupation::fock(0, 1, 1)]
        );
        let f4 = figure_preset(FigureId::Fig4).params;
        assert_eq!((f4.u_eg_g, f4.u_eg_e), (15.0, 20.0));
        assert_eq!(figure_preset(FigureId::Fig5).params.eps_e, 100.0);
        let f12 = figure_preset(FigureId::Fig12).params;
        assert_eq!((f12.eps_c_g, f12.f, f12.u_eg_e), (200.0, 25.0, 50.0));
    }

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
            assert_eq!(figure_preset(id).id, Some(id));
        }
        assert_eq!("fig2".parse::<FigureId>(), Err(PhaseError::UnknownFigure("fig2".into())));
    }

    #[test]
    fn nodes_hit_both_ends() {
        let n = AxisRange::new(0.0, 500.0).nodes(401);
        assert_eq!(n[0], 0.0);
        assert_eq!(n[200], 250.0);
        assert_eq!(n[400], 500.0);
    }
}
