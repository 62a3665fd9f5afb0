//! Singular points of plane quartics and the bitangents of nodal and
//! two-tacnode curves.

use super::solve::random_unitary;
use super::{
    cross, line_basis, line_distance, norm3, passes_through, push_unique, restrict_to_segment,
    unit, verify_line, Bitangent, Point,
};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::forms::Ternary;
use crate::numkit::{aberth_roots, complex_roots, resultant, singular_values, BiPoly, Poly, Var};
use nalgebra::{DMatrix, Matrix2, Vector2};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const SEED: u64 = 0x51_a6_0d_e5;
/// Singular points closer than this are one point.
const CLUSTER: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularKind {
    /// Ordinary double point: the Hessian has rank 2.
    Node,
    /// Rank-1 Hessian and four-fold contact with the tangent line.
    Tacnode,
    /// Rank-1 Hessian and three-fold contact.
    Cusp,
    /// Vanishing Hessian.
    Higher,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularPoint {
    pub point: [C64; 3],
    pub kind: SingularKind,
    /// Tangent line for cuspidal and tacnodal points.
    pub tangent: Option<[C64; 3]>,
}

fn partial(form: &Ternary, var: usize) -> Ternary {
    let mut out = Ternary::zero();
    for (e, &c) in form.terms() {
        if e[var] > 0 {
            let mut f = *e;
            f[var] -= 1;
            out.add_term(f, c * e[var] as f64);
        }
    }
    out
}

/// Dehomogenize at z = 1: `c[i][j]` is the coefficient of xⁱyʲ.
fn affine(form: &Ternary) -> BiPoly {
    let mut c = vec![vec![C64::new(0.0, 0.0); 5]; 5];
    for (e, &v) in form.terms() {
        c[e[0] as usize][e[1] as usize] += v;
    }
    BiPoly::new(c)
}

fn y_polynomial(b: &BiPoly, x: C64) -> Poly {
    let ny = b.c.iter().map(|r| r.len()).max().unwrap_or(0);
    let coeffs = (0..ny)
        .map(|j| {
            b.c.iter().rev().fold(C64::new(0.0, 0.0), |acc, row| {
                acc * x + row.get(j).copied().unwrap_or_default()
            })
        })
        .collect();
    Poly::new(coeffs).trimmed(1e-13)
}

/// All singular points of a quartic, classified. Fails on curves with a
/// multiple component, where the singular locus is not finite.
pub fn singular_points(form: &Ternary, tol: &Tolerances) -> Result<Vec<SingularPoint>> {
    let form = form.scale(C64::new(1.0 / form.norm_inf(), 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let u = random_unitary(&mut rng);
    let f = form.substitute(&u);
    let fx = partial(&f, 0);
    let fy = partial(&f, 1);
    let (gx, gy) = (affine(&fx), affine(&fy));
    let res = resultant(&gx, &gy, Var::Y)?;
    if res.degree() < 1 || res.norm_inf() <= 1e-12 {
        return Err(Error::Precondition(
            "singular locus is not finite (multiple component)".into(),
        ));
    }
    let hx = [partial(&fx, 0), partial(&fx, 1)];
    let hy = [partial(&fy, 0), partial(&fy, 1)];
    // A singular point of Milnor number μ is a μ-fold root of the
    // resultant; the clustered, refined root is accurate where Newton on
    // the gradient stalls (at a tacnode ∇F ~ dist³ drowns in rounding).
    let xs: Vec<(C64, usize)> = match complex_roots(&res, tol) {
        Ok(rs) => rs.roots,
        Err(_) => aberth_roots(&res)?.into_iter().map(|x| (x, 1)).collect(),
    };
    let mut cands: Vec<Point> = Vec::new();
    for (x, mult) in xs {
        let (a, b) = (y_polynomial(&gx, x), y_polynomial(&gy, x));
        for p in [&b, &a] {
            if p.degree() < 1 {
                continue;
            }
            for mut y in aberth_roots(p)? {
                for _ in 0..20 {
                    let (v, dv) = p.eval_with_derivative(y);
                    if dv.norm() == 0.0 {
                        break;
                    }
                    y -= v / dv;
                }
                let mut z = Vector2::new(x, y);
                if mult == 1 {
                    for _ in 0..20 {
                        let pt = [z[0], z[1], C64::new(1.0, 0.0)];
                        let g = Vector2::new(fx.eval(&pt), fy.eval(&pt));
                        let j = Matrix2::new(
                            hx[0].eval(&pt),
                            hx[1].eval(&pt),
                            hy[0].eval(&pt),
                            hy[1].eval(&pt),
                        );
                        let Some(step) = j.lu().solve(&g) else { break };
                        z -= step;
                        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
                            break;
                        }
                    }
                }
                let local = [z[0], z[1], C64::new(1.0, 0.0)];
                let pt: Point = unit(&std::array::from_fn(|i| {
                    (0..3).map(|j| u[i][j] * local[j]).sum()
                }));
                if !pt.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
                    continue;
                }
                if norm3(&form.gradient(&pt)) <= tol.general && form.eval(&pt).norm() <= tol.general
                {
                    cands.push(pt);
                }
            }
        }
    }
    // candidates from both partials repeat the same points
    let mut used = vec![false; cands.len()];
    let mut out: Vec<SingularPoint> = Vec::new();
    for i in 0..cands.len() {
        if used[i] {
            continue;
        }
        let mut sum = [C64::new(0.0, 0.0); 3];
        let mut count = 0.0;
        for j in i..cands.len() {
            if !used[j] && line_distance(&cands[i], &cands[j]) <= CLUSTER {
                used[j] = true;
                let ip: C64 = (0..3).map(|k| cands[i][k].conj() * cands[j][k]).sum();
                let phase = ip.conj() / ip.norm();
                for k in 0..3 {
                    sum[k] += cands[j][k] * phase;
                }
                count += 1.0;
            }
        }
        out.push(classify(&form, unit(&sum.map(|c| c / count))));
    }
    Ok(out)
}

fn classify(form: &Ternary, pt: Point) -> SingularPoint {
    let h = form.hessian(&pt);
    let m = DMatrix::from_fn(3, 3, |i, j| h[i][j]);
    let sv = singular_values(&m);
    if sv[0] <= 1e-9 {
        return SingularPoint {
            point: pt,
            kind: SingularKind::Higher,
            tangent: None,
        };
    }
    if sv[1] > 1e-5 * sv[0] {
        return SingularPoint {
            point: pt,
            kind: SingularKind::Node,
            tangent: None,
        };
    }
    // H = w·wᵀ up to scale; the tangent line is w·s = 0
    let col = (0..3)
        .max_by(|&a, &b| norm3(&h[a]).total_cmp(&norm3(&h[b])))
        .expect("three rows");
    let w = unit(&h[col]);
    let (a, b) = line_basis(&w);
    let dir = if line_distance(&a, &pt) > line_distance(&b, &pt) {
        a
    } else {
        b
    };
    let g = restrict_to_segment(form, &pt, &dir);
    let scale = g
        .coeffs()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let kind = if g.coeff(3).norm() <= 1e-5 * scale {
        SingularKind::Tacnode
    } else {
        SingularKind::Cusp
    };
    SingularPoint {
        point: pt,
        kind,
        tangent: Some(w),
    }
}

/// The six bitangents through an ordinary node, from the pencil of lines
/// through it.
///
/// On the line through the node N and a point D, F(N + tD) = t²·(a₂ + a₃t +
/// a₄t²) with aⱼ homogeneous of degree j in D; the line is tangent elsewhere
/// iff a₃² − 4a₂a₄ = 0, a sextic in the pencil parameter.
pub fn bitangents_through_node(
    form: &Ternary,
    node: &[C64; 3],
    tol: &Tolerances,
) -> Result<Vec<Bitangent>> {
    let form = form.scale(C64::new(1.0 / form.norm_inf(), 0.0));
    let n = unit(node);
    let sing = singular_points(&form, tol)?;
    if sing.len() != 1 || line_distance(&sing[0].point, &n) > 1e-6 {
        return Err(Error::Precondition(format!(
            "expected the node to be the only singular point, found {}",
            sing.len()
        )));
    }
    if sing[0].kind != SingularKind::Node {
        return Err(Error::Precondition(format!(
            "singular point is not an ordinary node ({:?})",
            sing[0].kind
        )));
    }
    let n = sing[0].point;
    // mix the complement basis so the pencil end s = ∞ is not special
    let nbar = n.map(|c| c.conj());
    let (e0, e1) = line_basis(&nbar);
    let (ca, sa) = (C64::new(0.83, 0.11), C64::new(-0.37, 0.29));
    let d0: Point = std::array::from_fn(|i| e0[i] * ca + e1[i] * sa);
    let d1: Point = std::array::from_fn(|i| e1[i] * ca.conj() - e0[i] * sa.conj());
    let coeffs_at = |s: C64| -> [C64; 5] {
        let d: Point = std::array::from_fn(|i| d0[i] + d1[i] * s);
        let g = restrict_to_segment(&form, &n, &d);
        std::array::from_fn(|k| g.coeff(k))
    };
    let npts = 7;
    let tau = std::f64::consts::TAU;
    let samples: Vec<C64> = (0..npts)
        .map(|k| {
            let a = coeffs_at(C64::from_polar(1.0, tau * k as f64 / npts as f64));
            a[3] * a[3] - a[2] * a[4] * 4.0
        })
        .collect();
    let disc = Poly::new(
        (0..npts)
            .map(|l| {
                samples
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| v * C64::from_polar(1.0, -tau * (k * l) as f64 / npts as f64))
                    .sum::<C64>()
                    / npts as f64
            })
            .collect(),
    )
    .trimmed(1e-12);
    if disc.degree() != 6 {
        return Err(Error::Indeterminate(format!(
            "pencil discriminant has degree {}",
            disc.degree()
        )));
    }
    let mut lines: Vec<Bitangent> = Vec::new();
    for s in aberth_roots(&disc)? {
        let a = coeffs_at(s);
        let size = a.iter().map(|c| c.norm()).fold(0.0, f64::max);
        // a nodal tangent has a₂ = 0; it is not a bitangent
        if a[2].norm() <= 1e-8 * size {
            continue;
        }
        let d: Point = std::array::from_fn(|i| d0[i] + d1[i] * s);
        let line = unit(&cross(&n, &d));
        match verify_line(&form, &line, tol) {
            Ok(mut b) => {
                b.through_node = true;
                push_unique(&mut lines, b, tol);
            }
            Err(res) => {
                return Err(Error::Verification(format!(
                    "line through the node failed the square test ({res:.2e})"
                )))
            }
        }
    }
    if lines.len() != 6 {
        return Err(Error::Verification(format!(
            "{} bitangents through the node, expected 6",
            lines.len()
        )));
    }
    Ok(lines)
}

/// Three bitangents of a quartic with two tacnodes: the line through them
/// and the tangent line at each.
pub(crate) fn two_tacnode_bitangents(
    form: &Ternary,
    p: &SingularPoint,
    q: &SingularPoint,
    tol: &Tolerances,
) -> Result<Vec<Bitangent>> {
    let mut cands = vec![unit(&cross(&p.point, &q.point))];
    cands.extend(p.tangent);
    cands.extend(q.tangent);
    let mut lines = Vec::new();
    for line in cands {
        debug_assert!(
            passes_through(&line, &p.point, 1e-6) || passes_through(&line, &q.point, 1e-6)
        );
        match verify_line(form, &line, tol) {
            Ok(b) => {
                push_unique(&mut lines, b, tol);
            }
            Err(res) => {
                return Err(Error::Verification(format!(
                    "tacnode line failed the square test ({res:.2e})"
                )))
            }
        }
    }
    if lines.len() != 3 {
        return Err(Error::Verification(format!(
            "{} distinct tacnode lines, expected 3",
            lines.len()
        )));
    }
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(terms: &[([u8; 3], f64)]) -> Ternary {
        let mut f = Ternary::zero();
        for &(e, c) in terms {
            f.add_term(e, C64::new(c, 0.0));
        }
        f
    }

    #[test]
    fn fermat_is_smooth() {
        let f = form(&[([4, 0, 0], 1.0), ([0, 4, 0], 1.0), ([0, 0, 4], 1.0)]);
        assert!(singular_points(&f, &Tolerances::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_conics_tangent_twice() {
        // (yz − x²)(yz − 2x²): tacnodes at (0:1:0) and (0:0:1)
        let f = form(&[([0, 2, 2], 1.0), ([2, 1, 1], -3.0), ([4, 0, 0], 2.0)]);
        let s = singular_points(&f, &Tolerances::default()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|p| p.kind == SingularKind::Tacnode), "{s:?}");
    }
}
