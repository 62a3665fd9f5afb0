//! Central tolerance record. Every operation that classifies something
//! numerically takes one of these, so a caller can tighten or loosen a
//! single threshold without touching the rest.

use serde::{Deserialize, Serialize};

/// Environment variable that overrides [`Tolerances::general`].
pub const TOL_ENV: &str = "TQL_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// General residual tolerance (the CLI's `--tol`).
    pub general: f64,
    /// Relative radius under which two roots are treated as one cluster.
    pub root_cluster: f64,
    /// Relative bound on low-order derivatives at a cluster centroid.
    pub root_derivative: f64,
    /// Relative residual accepted by the two-double-roots criterion.
    pub double_root: f64,
    /// Multiplier on `root_cluster` defining the indeterminate band.
    pub guard_band: f64,
    /// Perfect-square residual for cover splitting.
    pub square_residual: f64,
    /// Relative singular-value threshold for the 8-point conic test.
    pub syzygy: f64,
    /// Angular distance under which two lines are the same line.
    pub line_dedup: f64,
    /// Half-width of the excluded neighbourhood of the tangency parameter.
    pub critical_guard: f64,
    /// Values above this count as divergent when tagging endpoint limits.
    pub tag_cap: f64,
    /// Values below this count as vanishing when tagging endpoint limits.
    pub tag_floor: f64,
    /// Target width of the b-threshold bisection.
    pub bisection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            general: 1e-8,
            root_cluster: 1e-6,
            root_derivative: 1e-9,
            double_root: 1e-7,
            guard_band: 10.0,
            square_residual: 1e-8,
            syzygy: 1e-7,
            line_dedup: 1e-6,
            critical_guard: 1e-6,
            tag_cap: 1e8,
            tag_floor: 1e-8,
            bisection: 1e-6,
        }
    }
}

impl Tolerances {
    /// Defaults, with `general` replaced by `TQL_TOL` when it parses as a
    /// positive finite number.
    pub fn from_env() -> Self {
        let mut t = Self::default();
        if let Some(v) = std::env::var(TOL_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
        {
            if v.is_finite() && v > 0.0 {
                t.general = v;
            }
        }
        t
    }

    pub fn with_general(mut self, tol: f64) -> Self {
        self.general = tol;
        self
    }
}
