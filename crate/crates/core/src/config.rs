use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical tolerances shared by every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative residual accepted for a polynomial root.
    pub root: f64,
    /// Roots closer than this are merged into one root of higher multiplicity.
    pub cluster: f64,
    /// Chordal distance under which two projective points are the same point.
    pub matching: f64,
    /// Relative residual |f(P)| / |f| under which P lies on the curve.
    pub on_curve: f64,
    /// Coefficient residual accepted by Hesse normalization.
    pub hesse: f64,
    /// Minimal gradient-system margin accepted along a tracking path.
    pub smoothness_margin: f64,
    /// Largest torsion order accepted by the division-polynomial solver.
    pub max_torsion_order: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            root: 1e-10,
            cluster: 1e-7,
            matching: 1e-6,
            on_curve: 1e-8,
            hesse: 1e-6,
            smoothness_margin: 1e-4,
            max_torsion_order: 12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.root,
            self.cluster,
            self.matching,
            self.on_curve,
            self.hesse,
            self.smoothness_margin,
        ];
        if all.iter().any(|t| !t.is_finite() || *t <= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.max_torsion_order == 0 {
            return Err(Error::InvalidArgument("max torsion order must be positive".into()));
        }
        Ok(())
    }
}
