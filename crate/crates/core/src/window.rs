use serde::{Deserialize, Serialize};

/// Chemical-potential interval `(mu_minus, mu_plus)` inside which one species
/// is a Mott insulator at fixed interaction, or `Absent` when no such interval exists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "present", rename_all = "lowercase")]
pub enum MottWindow {
    Present { mu_minus: f64, mu_plus: f64 },
    Absent,
}

impl MottWindow {
    pub(crate) fn present(mu_minus: f64, mu_plus: f64) -> Self {
        debug_assert!(mu_plus >= mu_minus);
        MottWindow::Present { mu_minus, mu_plus }
    }

    pub fn is_present(&self) -> bool {
        matches!(self, MottWindow::Present { .. })
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        match *self {
            MottWindow::Present { mu_minus, mu_plus } => Some((mu_minus, mu_plus)),
            MottWindow::Absent => None,
        }
    }

    pub fn lower(&self) -> Option<f64> {
        self.bounds().map(|b| b.0)
    }

    pub fn upper(&self) -> Option<f64> {
        self.bounds().map(|b| b.1)
    }

    pub fn width(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| hi - lo)
    }

    /// Strict interior membership.
    pub fn contains(&self, mu: f64) -> bool {
        match *self {
            MottWindow::Present { mu_minus, mu_plus } => mu > mu_minus && mu < mu_plus,
            MottWindow::Absent => false,
        }
    }

    /// Rigid translation along the chemical-potential axis.
    pub fn shifted(self, delta: f64) -> Self {
        match self {
            MottWindow::Present { mu_minus, mu_plus } => MottWindow::Present {
                mu_minus: mu_minus + delta,
                mu_plus: mu_plus + delta,
            },
            MottWindow::Absent => MottWindow::Absent,
        }
    }

    /// True when both windows are present and their interiors intersect.
    pub fn overlaps(&self, other: &MottWindow) -> bool {
        match (self.bounds(), other.bounds()) {
            (Some((a0, a1)), Some((b0, b1))) => a0 < b1 && b0 < a1,
            _ => false,
        }
    }
}

/// Which end of a window a boundary point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Lower,
    Upper,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Lower, Branch::Upper];

    pub fn pick(self, window: &MottWindow) -> Option<f64> {
        match self {
            Branch::Lower => window.lower(),
            Branch::Upper => window.upper(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_is_strict() {
        let w = MottWindow::present(1.0, 2.0);
        assert!(w.contains(1.5));
        assert!(!w.contains(1.0));
        assert!(!w.contains(2.0));
        assert!(!MottWindow::Absent.contains(1.5));
    }

    #[test]
    fn overlap_needs_both_present() {
        let a = MottWindow::present(0.0, 2.0);
        assert!(a.overlaps(&MottWindow::present(1.0, 3.0)));
        assert!(!a.overlaps(&MottWindow::present(2.0, 3.0)));
        assert!(!a.overlaps(&MottWindow::Absent));
    }

    #[test]
    fn shift_moves_both_ends() {
        let w = MottWindow::present(1.0, 2.0).shifted(10.0);
        assert_eq!(w.bounds(), Some((11.0, 12.0)));
        assert_eq!(MottWindow::Absent.shifted(3.0), MottWindow::Absent);
    }
}
