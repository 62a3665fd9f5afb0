//! Real touching conics on the C*-invariant planes H_λ = {y₀ = λ·y₁}, in
//! plane coordinates (y₁, y₂, y₃): the generic, special and orbit
//! families, tangency verification, splitting of the double cover over a
//! conic, series of the special branch at P_∞, and endpoint limits.

mod limits;
mod param;
mod series;
mod split;

pub use limits::{conic_limit, ConicLimitReport, LimitStep, LimitTarget};
pub use param::{restrict_to_curve, ConicParam};
pub(crate) use param::{square_root_poly, term_scale};
pub use series::{expand_special_component, Branch, SpecialSeries};
pub use split::{orbit_window, split_double_cover, CoverSplit};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::forms::Ternary;
use crate::numkit::{complex_roots, singular_values};
use crate::surface::{plane_section, PlaneChart, QuarticFamily};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TouchingConicDescriptor {
    Generic { lambda: f64, theta: f64 },
    Special { lambda: f64, theta: f64 },
    Orbit { lambda: f64, alpha: f64 },
}

impl TouchingConicDescriptor {
    pub fn lambda(&self) -> f64 {
        match *self {
            Self::Generic { lambda, .. }
            | Self::Special { lambda, .. }
            | Self::Orbit { lambda, .. } => lambda,
        }
    }

    pub fn conic(&self, fam: &QuarticFamily) -> Result<PlaneConic> {
        match *self {
            Self::Generic { lambda, theta } => generic_conic(fam, lambda, theta),
            Self::Special { lambda, theta } => special_conic(fam, lambda, theta),
            Self::Orbit { lambda, alpha } => Ok(orbit_conic(fam, lambda, alpha)?.0),
        }
    }
}

/// A conic y·M·y = 0 with M symmetric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneConic {
    pub matrix: [[C64; 3]; 3],
}

impl PlaneConic {
    /// From the coefficients of y₁², y₂², y₃², y₁y₂, y₁y₃, y₂y₃.
    pub fn from_coefficients(c11: C64, c22: C64, c33: C64, c12: C64, c13: C64, c23: C64) -> Self {
        let h = 0.5;
        Self {
            matrix: [
                [c11, c12 * h, c13 * h],
                [c12 * h, c22, c23 * h],
                [c13 * h, c23 * h, c33],
            ],
        }
    }

    pub fn eval(&self, y: &[C64; 3]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                s += y[i] * self.matrix[i][j] * y[j];
            }
        }
        s
    }

    pub fn bilinear(&self, x: &[C64; 3], y: &[C64; 3]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                s += x[i] * self.matrix[i][j] * y[j];
            }
        }
        s
    }

    pub fn determinant(&self) -> C64 {
        let m = &self.matrix;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn norm(&self) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Singular values divided by the largest one, descending.
    pub fn relative_singular_values(&self) -> Vec<f64> {
        let m = DMatrix::from_fn(3, 3, |i, j| self.matrix[i][j]);
        let s = singular_values(&m);
        let top = s[0];
        s.into_iter().map(|x| x / top).collect()
    }

    pub fn is_irreducible(&self, tol: f64) -> bool {
        self.relative_singular_values()[2] > tol
    }

    /// sin of the angle between the two matrices as vectors in C⁹.
    pub fn projective_distance(&self, other: &Self) -> f64 {
        let a: Vec<C64> = self.matrix.iter().flatten().copied().collect();
        let b: Vec<C64> = other.matrix.iter().flatten().copied().collect();
        let ip: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        let na: f64 = a.iter().map(|x| x.norm_sqr()).sum();
        let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum();
        (1.0 - ip.norm_sqr() / (na * nb)).max(0.0).sqrt()
    }
}

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// 2(Q²−f)y₁² + √f·e^{iθ}y₂² + 2Q·y₂y₃ + √f·e^{−iθ}y₃² = 0.
pub fn generic_conic(fam: &QuarticFamily, lambda: f64, theta: f64) -> Result<PlaneConic> {
    let f = fam.f_at(lambda);
    let q = fam.q_at(lambda);
    if !(f > 0.0) {
        return Err(Error::Precondition(format!(
            "generic type needs f(λ) > 0, got f({lambda}) = {f}"
        )));
    }
    if (q * q - f).abs() <= 1e-14 * (q * q).max(1.0) {
        return Err(Error::Precondition(format!(
            "no real generic-type touching conic at λ = {lambda}: Q² = f there (λ = λ₀)"
        )));
    }
    let sf = f.sqrt();
    Ok(PlaneConic::from_coefficients(
        r(2.0 * (q * q - f)),
        C64::from_polar(sf, theta),
        C64::from_polar(sf, -theta),
        r(0.0),
        r(0.0),
        r(2.0 * q),
    ))
}

/// √(Q²−f)·y₁² + B·e^{iθ}y₁y₂ + B·e^{−iθ}y₁y₃ + y₂y₃ = 0 with
/// B = ((√(Q²−f) − Q)/2)^{1/2}.
pub fn special_conic(fam: &QuarticFamily, lambda: f64, theta: f64) -> Result<PlaneConic> {
    let f = fam.f_at(lambda);
    if !(f < 0.0) {
        return Err(Error::Precondition(format!(
            "no real special-type touching conic when f(λ) ≥ 0, got f({lambda}) = {f}"
        )));
    }
    let q = fam.q_at(lambda);
    let s = (q * q - f).sqrt();
    let b = crate::resolutions::special_b(fam, lambda);
    Ok(PlaneConic::from_coefficients(
        r(s),
        r(0.0),
        r(0.0),
        C64::from_polar(b, theta),
        C64::from_polar(b, -theta),
        r(1.0),
    ))
}

/// y₂y₃ = α·y₁², with a flag telling whether it lies in B (α = −Q ± √f).
pub fn orbit_conic(fam: &QuarticFamily, lambda: f64, alpha: f64) -> Result<(PlaneConic, bool)> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::Precondition("orbit-type conics need α ≠ 0".into()));
    }
    let conic = PlaneConic::from_coefficients(r(-alpha), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0));
    let s = alpha + fam.q_at(lambda);
    let f = fam.f_at(lambda);
    let contained = (s * s - f).abs() <= 1e-10 * (1.0 + f.abs() + s * s);
    Ok((conic, contained))
}

/// Real points of y₂y₃ = α·y₁² exist iff α > 0.
pub fn orbit_has_real_points(alpha: f64) -> bool {
    alpha > 0.0
}

/// B ∩ H_λ in coordinates (y₁, y₂, y₃).
pub fn section_on_h_lambda(fam: &QuarticFamily, lambda: f64) -> Ternary {
    plane_section(fam, &PlaneChart::lambda_plane(lambda))
}

#[derive(Debug, Clone, Serialize)]
pub struct TangencyReport {
    /// Intersection points in plane coordinates with intersection multiplicity.
    pub points: Vec<([C64; 3], usize)>,
    pub touching: bool,
    pub contained: bool,
}

/// Intersect the conic with the quartic through a rational parametrization;
/// touching iff every intersection multiplicity is even. When the degree-8
/// restriction is numerically a square s², the points come from the simple
/// roots of s with doubled multiplicity, which stays well conditioned when
/// tangency points crowd together; otherwise its roots are clustered directly.
pub fn verify_touching(
    conic: &PlaneConic,
    section: &Ternary,
    tol: &Tolerances,
) -> Result<TangencyReport> {
    if !conic.is_irreducible(1e-10) {
        return Err(Error::Precondition("conic is reducible".into()));
    }
    let param = ConicParam::new(conic, Some(section))?;
    let c = param.polys();
    let restricted = restrict_to_curve(section, &c);
    let scale = term_scale(section, &c);
    if restricted.norm_inf() <= 1e-10 * scale {
        return Ok(TangencyReport {
            points: Vec::new(),
            touching: false,
            contained: true,
        });
    }
    let restricted = restricted.trimmed(1e-12);
    let square = square_root_poly(&restricted)
        .filter(|s| (&(s * s) - &restricted).norm_inf() <= tol.square_residual * scale);
    let (poly, factor) = match &square {
        Some(s) => (s.clone(), 2),
        None => (restricted.clone(), 1),
    };
    let deg = poly.degree().max(0) as usize;
    let mut points = Vec::new();
    if deg >= 1 {
        for (t, m) in complex_roots(&poly, tol)?.roots {
            points.push((param.point(t), m * factor));
        }
    }
    let at_infinity = 8 - deg * factor;
    if at_infinity > 0 {
        points.push((param.point_at_infinity(), at_infinity));
    }
    let touching = points.iter().all(|p| p.1 % 2 == 0);
    Ok(TangencyReport {
        points,
        touching,
        contained: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::to_quartic;

    fn r1() -> QuarticFamily {
        to_quartic(1.0, 2.0, 2.0).unwrap()
    }

    #[test]
    fn generic_determinant_at_three() {
        let fam = r1();
        let d = fam.d_at(3.0);
        let c = generic_conic(&fam, 3.0, 0.0).unwrap();
        assert!((c.determinant() - r(-2.0 * d * d)).norm() <= 1e-9 * 2.0 * d * d);
    }

    #[test]
    fn special_passes_p_infinity() {
        let c = special_conic(&r1(), 0.5, 0.3).unwrap();
        assert_eq!(c.eval(&[r(0.0), r(0.0), r(1.0)]), r(0.0));
        assert_eq!(c.eval(&[r(0.0), r(1.0), r(0.0)]), r(0.0));
    }

    #[test]
    fn rejections() {
        let fam = r1();
        assert!(generic_conic(&fam, 2.0, 0.0).is_err());
        assert!(generic_conic(&fam, 0.5, 0.0).is_err());
        assert!(special_conic(&fam, 3.0, 0.0).is_err());
        assert!(orbit_conic(&fam, 3.0, 0.0).is_err());
    }
}
