use super::condition::{classify_singularities, SingularityKind};
use super::family::{ProjPoint, QuarticFamily};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::forms::Ternary;
use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PlaneClass {
    SmoothSection,
    ThroughP0,
    ContainsLInfinity,
    /// One of y₀+y₁=0, y₁=0, y₀−a·y₁=0, y₀=0 (index 1..=4 in that order).
    TropePlane(u8),
}

/// A σ-invariant plane. Its equation is stored in real coordinates
/// (r₀, r₁, X, Y) with y₀ = r₀, y₁ = r₁, y₂ = X + iY, y₃ = X − iY, where
/// real planes are exactly the real linear forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealPlane {
    pub real_form: [f64; 4],
    pub class: PlaneClass,
}

/// Map real coordinates to y-coordinates.
pub fn real_to_y(r: &[f64; 4]) -> [C64; 4] {
    [
        C64::new(r[0], 0.0),
        C64::new(r[1], 0.0),
        C64::new(r[2], r[3]),
        C64::new(r[2], -r[3]),
    ]
}

/// Equation of a real plane as a linear form in y.
pub fn real_form_to_y(h: &[f64; 4]) -> [C64; 4] {
    // hX·X + hY·Y with X = (y₂+y₃)/2, Y = (y₂−y₃)/(2i)
    [
        C64::new(h[0], 0.0),
        C64::new(h[1], 0.0),
        C64::new(h[2] / 2.0, -h[3] / 2.0),
        C64::new(h[2] / 2.0, h[3] / 2.0),
    ]
}

/// Real coordinates of a y-form, if the form is real up to a common phase.
pub fn y_form_to_real(h: &[C64; 4], tol: f64) -> Result<[f64; 4]> {
    let raw = [h[0], h[1], h[2] + h[3], (h[2] - h[3]) * C64::new(0.0, 1.0)];
    let k = (0..4)
        .max_by(|&i, &j| raw[i].norm().total_cmp(&raw[j].norm()))
        .unwrap();
    if raw[k].norm() == 0.0 {
        return Err(Error::Precondition("zero plane equation".into()));
    }
    let phase = raw[k].conj() / raw[k].norm();
    let scaled = raw.map(|c| c * phase);
    let scale = raw[k].norm();
    if scaled.iter().any(|c| c.im.abs() > tol * scale) {
        return Err(Error::Precondition("plane is not σ-invariant".into()));
    }
    Ok(scaled.map(|c| c.re / scale))
}

fn plane_value(h: &[f64; 4], p: &ProjPoint) -> f64 {
    let hy = real_form_to_y(h);
    let v: C64 = (0..4).map(|i| hy[i] * p.0[i]).sum();
    let hn = hy.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let pn = p.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.norm() / (hn * pn)
}

fn proportional(u: &[f64; 4], v: &[f64; 4], tol: f64) -> bool {
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    1.0 - (dot / (nu * nv)).abs() <= tol
}

/// Trope plane equations in real coordinates, indexed 1..=4.
pub fn trope_forms(a: f64) -> [[f64; 4]; 4] {
    [
        [1.0, 1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [1.0, -a, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ]
}

/// Tag a real plane, with precedence TropePlane > ContainsLInfinity >
/// ThroughP0 > SmoothSection.
pub fn classify_plane(
    fam: &QuarticFamily,
    real_form: [f64; 4],
    tol: &Tolerances,
) -> Result<RealPlane> {
    if real_form.iter().all(|&x| x == 0.0) || real_form.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition(
            "plane equation must be nonzero and finite".into(),
        ));
    }
    let t = tol.general;
    for (i, tf) in trope_forms(fam.a).iter().enumerate() {
        if proportional(&real_form, tf, t * t) {
            return Ok(RealPlane {
                real_form,
                class: PlaneClass::TropePlane(i as u8 + 1),
            });
        }
    }
    let norm = real_form.iter().map(|x| x * x).sum::<f64>().sqrt();
    if real_form[2].abs() <= t * norm && real_form[3].abs() <= t * norm {
        return Ok(RealPlane {
            real_form,
            class: PlaneClass::ContainsLInfinity,
        });
    }
    let sing = classify_singularities(fam, tol)?;
    let through = sing
        .points
        .iter()
        .filter(|s| s.kind != SingularityKind::EllipticE7 && s.point.is_real(1e-9))
        .any(|s| plane_value(&real_form, &s.point) <= t);
    let class = if through {
        PlaneClass::ThroughP0
    } else {
        PlaneClass::SmoothSection
    };
    Ok(RealPlane { real_form, class })
}

/// Accept a plane given by its y-coordinate equation.
pub fn classify_plane_y(
    fam: &QuarticFamily,
    y_form: [C64; 4],
    tol: &Tolerances,
) -> Result<RealPlane> {
    classify_plane(fam, y_form_to_real(&y_form, 1e-12)?, tol)
}

/// A projective parametrisation y = M·s of a plane, with the real
/// structure written in plane coordinates as s ↦ P·s̄.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneChart {
    pub basis: [[C64; 3]; 4],
    pub real_map: [[C64; 3]; 3],
}

impl PlaneChart {
    fn from_basis(basis: [[C64; 3]; 4]) -> Self {
        // σ(y) = S·ȳ with S swapping y₂, y₃; P solves M·P = S·M̄
        let m = DMatrix::from_fn(4, 3, |i, j| basis[i][j]);
        let swap = [0usize, 1, 3, 2];
        let rhs = DMatrix::from_fn(4, 3, |i, j| basis[swap[i]][j].conj());
        let mh = m.adjoint();
        let p = (&mh * &m)
            .lu()
            .solve(&(&mh * rhs))
            .expect("plane basis has full rank");
        let mut real_map = [[C64::new(0.0, 0.0); 3]; 3];
        for (i, row) in real_map.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = p[(i, j)];
            }
        }
        Self { basis, real_map }
    }

    /// Basis of σ-real points spanning the plane, obtained by projecting a
    /// fixed frame onto the orthogonal complement of the equation. The frame
    /// is the standard basis minus the direction nearest the normal; callers
    /// moving along a path pass their own `reference` normal so that the
    /// basis varies continuously.
    pub fn real_frame(real_form: &[f64; 4], reference: Option<&[f64; 4]>) -> Self {
        let h = Vector4::from_column_slice(real_form);
        let hn = h.normalize();
        let r = reference
            .map(|r| Vector4::from_column_slice(r).normalize())
            .unwrap_or(hn);
        // frame: orthonormal complement of r
        let mut frame: Vec<Vector4<f64>> = Vec::new();
        let drop = (0..4)
            .max_by(|&i, &j| r[i].abs().total_cmp(&r[j].abs()))
            .unwrap();
        for k in 0..4 {
            if k == drop {
                continue;
            }
            let mut e = Vector4::zeros();
            e[k] = 1.0;
            e -= r * r.dot(&e);
            for f in &frame {
                e -= f * f.dot(&e);
            }
            frame.push(e.normalize());
        }
        let proj = Matrix4::identity() - hn * hn.transpose();
        let mut basis = [[C64::new(0.0, 0.0); 3]; 4];
        for (j, f) in frame.iter().enumerate() {
            let v = proj * f;
            let y = real_to_y(&[v[0], v[1], v[2], v[3]]);
            for i in 0..4 {
                basis[i][j] = y[i];
            }
        }
        Self::from_basis(basis)
    }

    /// The plane y₀ = λ·y₁ with plane coordinates (y₁, y₂, y₃).
    pub fn lambda_plane(lambda: f64) -> Self {
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self::from_basis([
            [C64::new(lambda, 0.0), z, z],
            [one, z, z],
            [z, one, z],
            [z, z, one],
        ])
    }

    /// The plane y₁ = 0 with plane coordinates (y₀, y₂, y₃).
    pub fn y1_zero() -> Self {
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self::from_basis([[one, z, z], [z, z, z], [z, one, z], [z, z, one]])
    }

    pub fn to_space(&self, s: &[C64; 3]) -> ProjPoint {
        ProjPoint(
            self.basis
                .map(|row| row[0] * s[0] + row[1] * s[1] + row[2] * s[2]),
        )
    }

    /// The real structure acting on plane coordinates.
    pub fn sigma(&self, s: &[C64; 3]) -> [C64; 3] {
        let c = s.map(|x| x.conj());
        self.real_map
            .map(|row| row[0] * c[0] + row[1] * c[1] + row[2] * c[2])
    }

    /// Equation, in plane coordinates, of the intersection with a plane
    /// given by its y-form.
    pub fn restrict_linear(&self, y_form: &[C64; 4]) -> [C64; 3] {
        let mut out = [C64::new(0.0, 0.0); 3];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|i| y_form[i] * self.basis[i][j]).sum();
        }
        out
    }
}

/// B ∩ H as a ternary quartic in the chart's plane coordinates.
pub fn plane_section(fam: &QuarticFamily, chart: &PlaneChart) -> Ternary {
    fam.form().substitute(&chart.basis)
}

const RANDOM_ATTEMPTS: usize = 1000;

/// A seeded random real plane whose section is smooth, with entries of the
/// real form uniform in (−1, 1).
pub fn random_smooth_plane(fam: &QuarticFamily, seed: u64, tol: &Tolerances) -> Result<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let h: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if classify_plane(fam, h, tol)?.class == PlaneClass::SmoothSection {
            return Ok(h);
        }
    }
    Err(Error::Indeterminate(
        "no smooth section among the random planes".into(),
    ))
}

/// A seeded random real plane through the real ordinary double point
/// (λ₀ : 1 : 0 : 0) or (1 : 0 : 0 : 0), avoiding l_∞.
pub fn random_nodal_plane(fam: &QuarticFamily, seed: u64, tol: &Tolerances) -> Result<[f64; 4]> {
    let sing = classify_singularities(fam, tol)?;
    let node = sing
        .points
        .iter()
        .find(|s| s.kind == SingularityKind::OrdinaryDoublePoint)
        .ok_or_else(|| Error::Precondition("the family has no ordinary double point".into()))?;
    let p = node.point.normalized().0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_ATTEMPTS {
        let t: f64 = rng.random_range(0.3..1.0);
        let (x, y) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        // (h₀, h₁) orthogonal to the node's (y₀, y₁)
        let (u0, u1) = (p[0].re, p[1].re);
        let n = (u0 * u0 + u1 * u1).sqrt();
        let h = [-t * u1 / n, t * u0 / n, x, y];
        if classify_plane(fam, h, tol)?.class == PlaneClass::ThroughP0 {
            return Ok(h);
        }
    }
    Err(Error::Indeterminate(
        "no plane through the node among the random planes".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam() -> QuarticFamily {
        let s6 = 6f64.sqrt();
        let c = 11.0 / (2.0 * s6) - 8.0;
        QuarticFamily::new(1.0, 2.0, c, s6 - 8.0 - 2.0 * c).unwrap()
    }

    #[test]
    fn y_form_round_trip() {
        let h = [0.3, -1.1, 0.7, 0.2];
        let back = y_form_to_real(&real_form_to_y(&h), 1e-12).unwrap();
        assert!(proportional(&h, &back, 1e-14));
        let bad = [
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ];
        assert!(y_form_to_real(&bad, 1e-12).is_err());
    }

    #[test]
    fn real_frame_section_has_real_coefficients() {
        let chart = PlaneChart::real_frame(&[1.0, 0.4, -0.3, 0.8], None);
        let sec = plane_section(&fam(), &chart);
        assert!(sec
            .terms()
            .all(|(_, c)| c.im.abs() <= 1e-12 * (1.0 + c.norm())));
        for row in chart.real_map.iter().enumerate() {
            for (j, v) in row.1.iter().enumerate() {
                let want = if row.0 == j { 1.0 } else { 0.0 };
                assert!((v - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_chart_swaps_last_two() {
        let chart = PlaneChart::lambda_plane(2.0);
        let s = [C64::new(1.0, 2.0), C64::new(3.0, -1.0), C64::new(0.5, 0.5)];
        let t = chart.sigma(&s);
        assert!((t[0] - s[0].conj()).norm() < 1e-12);
        assert!((t[1] - s[2].conj()).norm() < 1e-12);
        assert!((t[2] - s[1].conj()).norm() < 1e-12);
    }

    #[test]
    fn trope_y1_section_is_square() {
        let f = fam();
        let sec = plane_section(&f, &PlaneChart::y1_zero());
        let conic = &(&Ternary::var(1) * &Ternary::var(2))
            + &(&Ternary::var(0) * &Ternary::var(0)).scale(C64::new(f.b, 0.0));
        assert!(sec.max_diff(&(&conic * &conic)) < 1e-12);
    }
}
