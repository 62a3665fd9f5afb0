use super::{orbit_window, PlaneConic, TouchingConicDescriptor};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::surface::{condition_a_check, QuarticFamily};
use num_complex::Complex64 as C64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LimitTarget {
    /// One of −1, 0, a or ±∞, where the conics degenerate to a trope conic.
    Endpoint(f64),
    /// The double root λ₀ of D, where generic conics become double lines.
    TangencyPoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitStep {
    pub lambda: f64,
    /// Projective distance to the expected limit conic, when there is one.
    pub distance: Option<f64>,
    /// Singular values relative to the largest.
    pub singular_values: Vec<f64>,
    /// Width of the real-splitting α-window, for orbit conics.
    pub window_width: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConicLimitReport {
    pub target: LimitTarget,
    pub expected: Option<PlaneConic>,
    pub steps: Vec<LimitStep>,
    pub converged: bool,
}

fn with_lambda(d: &TouchingConicDescriptor, lambda: f64) -> TouchingConicDescriptor {
    match *d {
        TouchingConicDescriptor::Generic { theta, .. } => {
            TouchingConicDescriptor::Generic { lambda, theta }
        }
        TouchingConicDescriptor::Special { theta, .. } => {
            TouchingConicDescriptor::Special { lambda, theta }
        }
        TouchingConicDescriptor::Orbit { alpha, .. } => {
            TouchingConicDescriptor::Orbit { lambda, alpha }
        }
    }
}

/// The trope conic y₂y₃ + Q(e)·y₁² = 0; at infinity the first coordinate
/// is y₀ and the coefficient is the leading one of Q.
fn trope_conic(fam: &QuarticFamily, end: f64) -> PlaneConic {
    let q = if end.is_finite() {
        fam.q_at(end)
    } else {
        fam.b
    };
    let z = C64::default();
    PlaneConic::from_coefficients(C64::new(q, 0.0), z, z, z, z, C64::new(1.0, 0.0))
}

/// Rewrite a conic on H_λ in coordinates (y₀, y₂, y₃), using y₁ = y₀/λ.
fn to_y0_coordinates(c: &PlaneConic, lambda: f64) -> PlaneConic {
    let d = [1.0 / lambda, 1.0, 1.0];
    let mut m = c.matrix;
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v *= d[i] * d[j];
        }
    }
    PlaneConic { matrix: m }
}

/// Follow the family of `template` (its λ only fixes the side of approach)
/// along λ = target ± 10⁻ᵏ, or ±10ᵏ at infinity, for k in `decades`.
pub fn conic_limit(
    fam: &QuarticFamily,
    template: &TouchingConicDescriptor,
    target: LimitTarget,
    decades: std::ops::RangeInclusive<i32>,
    tol: &Tolerances,
) -> Result<ConicLimitReport> {
    let start = template.lambda();
    let end = match target {
        LimitTarget::Endpoint(e) => {
            let a = fam.a;
            if !(e.is_infinite() || e == -1.0 || e == 0.0 || e == a) {
                return Err(Error::Precondition(format!(
                    "{e} is not one of −1, 0, a, ±∞"
                )));
            }
            e
        }
        LimitTarget::TangencyPoint => condition_a_check(fam, tol)?.lambda0.ok_or_else(|| {
            Error::Precondition("no tangency point λ₀: Condition (A) fails".into())
        })?,
    };
    let side = if start > end { 1.0 } else { -1.0 };
    let orbit = matches!(template, TouchingConicDescriptor::Orbit { .. });
    let expected = match target {
        LimitTarget::Endpoint(e) if !orbit => Some(trope_conic(fam, e)),
        _ => None,
    };
    let mut steps = Vec::new();
    for k in decades {
        let lambda = if end.is_finite() {
            end + side * 10f64.powi(-k) * (1.0 + end.abs())
        } else {
            end.signum() * 10f64.powi(k)
        };
        let desc = with_lambda(template, lambda);
        let mut conic = desc.conic(fam)?;
        if end.is_infinite() {
            conic = to_y0_coordinates(&conic, lambda);
        }
        let window_width = if orbit {
            Some(orbit_window(fam, lambda).map_or(0.0, |(l, r)| r - l))
        } else {
            None
        };
        steps.push(LimitStep {
            lambda,
            distance: expected.as_ref().map(|e| conic.projective_distance(e)),
            singular_values: conic.relative_singular_values(),
            window_width,
        });
    }
    let last = steps
        .last()
        .ok_or_else(|| Error::Precondition("empty range of decades".into()))?;
    let converged = match (target, orbit) {
        (_, true) => last.window_width.is_some_and(|w| w < 1e-3),
        (LimitTarget::TangencyPoint, false) => last.singular_values[1] < 1e-3,
        (LimitTarget::Endpoint(_), false) => {
            let ds: Vec<f64> = steps.iter().filter_map(|s| s.distance).collect();
            ds.windows(2).all(|w| w[1] <= w[0] * 1.0001) && ds.last().is_some_and(|&d| d < 1e-3)
        }
    };
    Ok(ConicLimitReport {
        target,
        expected,
        steps,
        converged,
    })
}
