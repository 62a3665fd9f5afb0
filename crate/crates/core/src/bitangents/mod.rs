//! Bitangents of plane quartic curves.
//!
//! Smooth curves are solved by elimination in random affine charts of the
//! dual plane; curves with one ordinary node or two tacnodes go to
//! dedicated handlers. On top of the catalog sit the real filter, the
//! syzygy test with the Steiner partition, and continuation along pencils
//! of planes.

mod singular;
mod solve;
mod steiner;
mod track;

pub use singular::{bitangents_through_node, singular_points, SingularKind, SingularPoint};
pub use steiner::{steiner_partition, syzygy_test, SteinerPartition};
pub use track::{track_bitangents, PlanePath, TrackRecord};

use crate::config::Tolerances;
use crate::conics::{restrict_to_curve, square_root_poly};
use crate::error::{Error, Result};
use crate::forms::Ternary;
use crate::numkit::{two_double_roots, Poly};
use crate::surface::{plane_section, real_form_to_y, trope_forms, PlaneChart, QuarticFamily};
use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::Serialize;

pub(crate) type Point = [C64; 3];

/// A ternary quartic, optionally with the real structure s ↦ P·s̄ it is
/// invariant under and a list of lines to flag as trivial.
#[derive(Debug, Clone)]
pub struct PlaneQuarticCurve {
    pub form: Ternary,
    pub real_map: Option<[[C64; 3]; 3]>,
    pub trivial_lines: Vec<[C64; 3]>,
}

impl PlaneQuarticCurve {
    pub fn new(form: Ternary) -> Result<Self> {
        if form.is_zero() {
            return Err(Error::Precondition("zero form".into()));
        }
        if form.terms().any(|(e, c)| {
            e.iter().map(|&x| x as usize).sum::<usize>() != 4
                || !c.re.is_finite()
                || !c.im.is_finite()
        }) {
            return Err(Error::Precondition(
                "not a finite homogeneous quartic".into(),
            ));
        }
        Ok(Self {
            form,
            real_map: None,
            trivial_lines: Vec::new(),
        })
    }

    /// Real curve for the standard conjugation.
    pub fn real(form: Ternary) -> Result<Self> {
        let mut q = Self::new(form)?;
        let one = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        q.real_map = Some([[one, z, z], [z, one, z], [z, z, one]]);
        Ok(q)
    }

    /// B ∩ H in the chart's coordinates, with the chart's real structure and
    /// the four lines H ∩ Hᵢ cut by the trope planes.
    pub fn from_section(fam: &QuarticFamily, chart: &PlaneChart) -> Result<Self> {
        let mut q = Self::new(plane_section(fam, chart))?;
        q.real_map = Some(chart.real_map);
        q.trivial_lines = trope_forms(fam.a)
            .iter()
            .map(|t| chart.restrict_linear(&real_form_to_y(t)))
            .filter(|l| l.iter().any(|c| c.norm() > 1e-12))
            .collect();
        Ok(q)
    }

    /// Classic quartic with 28 real bitangents:
    /// 144(x⁴+y⁴) − 225(x²+y²)z² + 350x²y² + 81z⁴.
    pub fn trott() -> Self {
        let mut f = Ternary::zero();
        for (e, c) in [
            ([4, 0, 0], 144.0),
            ([0, 4, 0], 144.0),
            ([2, 0, 2], -225.0),
            ([0, 2, 2], -225.0),
            ([2, 2, 0], 350.0),
            ([0, 0, 4], 81.0),
        ] {
            f.add_term(e, C64::new(c, 0.0));
        }
        Self::real(f).expect("fixed quartic")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveClass {
    Smooth,
    OneNode,
    TwoTacnodes,
}

impl CurveClass {
    pub fn expected_count(self) -> usize {
        match self {
            CurveClass::Smooth => 28,
            CurveClass::OneNode => 22,
            CurveClass::TwoTacnodes => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Bitangent {
    /// Coefficients u of the line u·s = 0, unit norm.
    pub line: [C64; 3],
    /// The two contact points; equal for a four-fold contact.
    pub tangency: [[C64; 3]; 2],
    pub real: bool,
    pub through_node: bool,
    pub trivial: bool,
    /// Relative distance of the restricted quartic from a perfect square.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BitangentCatalog {
    pub class: CurveClass,
    pub lines: Vec<Bitangent>,
    pub singular_points: Vec<SingularPoint>,
}

impl BitangentCatalog {
    pub fn real_count(&self) -> usize {
        self.lines.iter().filter(|b| b.real).count()
    }
}

/// Solve for all bitangents, dispatching on the singularities of `q`.
pub fn find_bitangents(q: &PlaneQuarticCurve, tol: &Tolerances) -> Result<BitangentCatalog> {
    let form = q.form.scale(C64::new(1.0 / q.form.norm_inf(), 0.0));
    if is_square(&form, tol) {
        return Err(Error::Precondition(
            "quartic is the square of a conic".into(),
        ));
    }
    let sing = singular_points(&form, tol)?;
    let (class, lines) = match sing.as_slice() {
        [] => {
            let found = solve::smooth_bitangents(&form, tol)?;
            if found.lines.len() != 28 {
                return Err(starvation(28, &found));
            }
            (CurveClass::Smooth, found.lines)
        }
        [p] if p.kind == SingularKind::Node => {
            let through = bitangents_through_node(&form, &p.point, tol)?;
            let found = solve::smooth_bitangents(&form, tol)?;
            let mut lines: Vec<Bitangent> = found
                .lines
                .iter()
                .filter(|b| !passes_through(&b.line, &p.point, tol.line_dedup))
                .cloned()
                .collect();
            if lines.len() != 16 {
                return Err(starvation(
                    16,
                    &solve::Found {
                        lines,
                        rejected: found.rejected,
                    },
                ));
            }
            lines.extend(through);
            (CurveClass::OneNode, lines)
        }
        [p, r] if p.kind == SingularKind::Tacnode && r.kind == SingularKind::Tacnode => (
            CurveClass::TwoTacnodes,
            singular::two_tacnode_bitangents(&form, p, r, tol)?,
        ),
        _ => {
            let kinds: Vec<String> = sing.iter().map(|s| format!("{:?}", s.kind)).collect();
            return Err(Error::Precondition(format!(
                "unsupported singularities: [{}]",
                kinds.join(", ")
            )));
        }
    };
    let lines = lines.into_iter().map(|b| flag(b, q, tol)).collect();
    Ok(BitangentCatalog {
        class,
        lines,
        singular_points: sing,
    })
}

fn starvation(expected: usize, found: &solve::Found) -> Error {
    let mut res: Vec<f64> = found.rejected.clone();
    res.sort_by(f64::total_cmp);
    res.truncate(8);
    let list: Vec<String> = res.iter().map(|r| format!("{r:.2e}")).collect();
    Error::Verification(format!(
        "{} verified bitangents, expected {expected}; smallest rejected residuals [{}]",
        found.lines.len(),
        list.join(", ")
    ))
}

fn flag(mut b: Bitangent, q: &PlaneQuarticCurve, tol: &Tolerances) -> Bitangent {
    if let Some(p) = &q.real_map {
        b.real = is_real_line(&b.line, p, tol);
    }
    b.trivial = q
        .trivial_lines
        .iter()
        .any(|t| line_distance(t, &b.line) <= tol.line_dedup);
    b
}

/// Lines of the catalog fixed by s ↦ P·s̄.
pub fn real_bitangents(
    catalog: &BitangentCatalog,
    real_map: &[[C64; 3]; 3],
    tol: &Tolerances,
) -> Vec<Bitangent> {
    catalog
        .lines
        .iter()
        .filter(|b| is_real_line(&b.line, real_map, tol))
        .map(|b| Bitangent {
            real: true,
            ..b.clone()
        })
        .collect()
}

/// σ maps the line u to (Pᵀ)⁻¹ū.
fn is_real_line(u: &[C64; 3], p: &[[C64; 3]; 3], tol: &Tolerances) -> bool {
    let pt = Matrix3::from_fn(|i, j| p[j][i]);
    let Some(inv) = pt.try_inverse() else {
        return false;
    };
    let ubar = nalgebra::Vector3::new(u[0].conj(), u[1].conj(), u[2].conj());
    let v = inv * ubar;
    line_distance(&[v[0], v[1], v[2]], u) <= tol.line_dedup
}

pub(crate) fn norm3(u: &[C64; 3]) -> f64 {
    u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn unit(u: &[C64; 3]) -> [C64; 3] {
    let n = norm3(u);
    let k = (0..3)
        .max_by(|&i, &j| u[i].norm().total_cmp(&u[j].norm()))
        .expect("three entries");
    let phase = u[k].conj() / u[k].norm();
    u.map(|c| c * phase / n)
}

/// sin of the angle between two projective points (or lines).
pub fn line_distance(u: &[C64; 3], v: &[C64; 3]) -> f64 {
    let ip: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu = norm3(u);
    let nv = norm3(v);
    (1.0 - ip.norm_sqr() / (nu * nu * nv * nv)).max(0.0).sqrt()
}

pub(crate) fn passes_through(u: &[C64; 3], p: &[C64; 3], tol: f64) -> bool {
    let v: C64 = (0..3).map(|i| u[i] * p[i]).sum();
    v.norm() <= tol * norm3(u) * norm3(p)
}

pub(crate) fn cross(a: &[C64; 3], b: &[C64; 3]) -> [C64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Orthonormal basis of the points on the line u·s = 0.
pub(crate) fn line_basis(u: &[C64; 3]) -> (Point, Point) {
    let n = unit(u).map(|c| c.conj());
    let drop = (0..3)
        .max_by(|&i, &j| n[i].norm().total_cmp(&n[j].norm()))
        .expect("three entries");
    let mut out: Vec<Point> = Vec::new();
    for k in (0..3).filter(|&k| k != drop) {
        let mut e = [C64::new(0.0, 0.0); 3];
        e[k] = C64::new(1.0, 0.0);
        for b in std::iter::once(&n).chain(out.iter()) {
            let ip: C64 = (0..3).map(|i| b[i].conj() * e[i]).sum();
            for i in 0..3 {
                e[i] -= b[i] * ip;
            }
        }
        let len = norm3(&e);
        out.push(e.map(|c| c / len));
    }
    (out[0], out[1])
}

fn combine(a: &Point, ca: C64, b: &Point, cb: C64) -> Point {
    [
        a[0] * ca + b[0] * cb,
        a[1] * ca + b[1] * cb,
        a[2] * ca + b[2] * cb,
    ]
}

/// Restriction of `form` to the line through `p0` and `p1`, as a
/// polynomial in t for the point p0 + t·p1.
pub(crate) fn restrict_to_segment(form: &Ternary, p0: &Point, p1: &Point) -> Poly {
    let c = [0, 1, 2].map(|i| Poly::new(vec![p0[i], p1[i]]));
    restrict_to_curve(form, &c)
}

/// Check that the restriction to the line has two double roots; returns
/// the contact points and the squareness residual, or the residual alone.
pub(crate) fn verify_line(
    form: &Ternary,
    u: &[C64; 3],
    tol: &Tolerances,
) -> std::result::Result<Bitangent, f64> {
    let (a, b) = line_basis(u);
    // rotate the basis so that neither t = 0 nor t = ∞ is near the curve;
    // roots crowding at the origin would leave only rounding noise in the
    // low coefficients
    let mut best: Option<(f64, Point, Point)> = None;
    for phi in [0.0f64, 0.4, 0.9, 1.3, 2.1, 2.7] {
        let (s, c) = phi.sin_cos();
        let p1 = combine(&a, C64::new(c, 0.0), &b, C64::new(s, 0.0));
        let p0 = combine(&a, C64::new(-s, 0.0), &b, C64::new(c, 0.0));
        let g = restrict_to_segment(form, &p0, &p1);
        let ratio = g.coeff(4).norm().min(g.coeff(0).norm()) / g.norm_inf().max(f64::MIN_POSITIVE);
        if best.as_ref().is_none_or(|x| ratio > x.0) {
            best = Some((ratio, p0, p1));
        }
    }
    let (ratio, p0, p1) = best.expect("angles tried");
    let g = restrict_to_segment(form, &p0, &p1);
    if ratio < 1e-8 || g.degree() != 4 {
        return Err(f64::INFINITY);
    }
    let g = g.monic();
    let residual = match square_root_poly(&g) {
        Some(s) => (&(&s * &s) - &g).norm_inf() / g.norm_inf(),
        None => f64::INFINITY,
    };
    match two_double_roots(&g, tol.double_root) {
        Ok(Some((t1, t2))) => {
            let pt = |t: C64| unit(&combine(&p0, C64::new(1.0, 0.0), &p1, t));
            Ok(Bitangent {
                line: unit(u),
                tangency: [pt(t1), pt(t2)],
                real: false,
                through_node: false,
                trivial: false,
                residual,
            })
        }
        _ => Err(residual),
    }
}

/// True when the restrictions to two fixed generic lines are both squares.
fn is_square(form: &Ternary, tol: &Tolerances) -> bool {
    let lines = [
        [
            C64::new(0.37, 0.21),
            C64::new(-0.82, 0.05),
            C64::new(0.44, -0.63),
        ],
        [
            C64::new(-0.15, 0.71),
            C64::new(0.52, -0.33),
            C64::new(0.91, 0.12),
        ],
    ];
    lines.iter().all(|u| verify_line(form, u, tol).is_ok())
}

/// Insert `b` unless a line within the dedup distance is already present.
pub(crate) fn push_unique(lines: &mut Vec<Bitangent>, b: Bitangent, tol: &Tolerances) -> bool {
    if lines
        .iter()
        .any(|x| line_distance(&x.line, &b.line) <= tol.line_dedup)
    {
        return false;
    }
    lines.push(b);
    true
}
