//! Two-double-roots test for monic quartics x⁴ + a₁x³ + a₂x² + a₃x + a₄.

use super::poly::Poly;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Returns the two roots when the monic quartic `q` is the square of a
/// quadratic, i.e. has two double roots (possibly coincident).
///
/// With a₁ ≠ 0 the conditions are 4a₁a₂ = a₁³ + 8a₃ and a₁²a₄ = a₃², and the
/// roots are −a₁/4 ± √(a₁²/16 − a₃/a₁). With a₁ = 0 they are a₃ = 0 and
/// 4a₄ = a₂², with roots ±√(−a₂/2). Each residual is compared against the
/// natural size of its terms, weighted by the root scale, so `tol` is a
/// relative threshold.
pub fn two_double_roots(q: &Poly, tol: f64) -> Result<Option<(C64, C64)>> {
    if q.degree() != 4 {
        return Err(Error::Precondition(format!(
            "quartic expected, got degree {}",
            q.degree()
        )));
    }
    if (q.leading() - 1.0).norm() > 1e-12 {
        return Err(Error::Precondition("quartic must be monic".into()));
    }
    let a1 = q.coeff(3);
    let a2 = q.coeff(2);
    let a3 = q.coeff(1);
    let a4 = q.coeff(0);
    // root scale: a_k has weight k
    let r = [
        a1.norm(),
        a2.norm().sqrt(),
        a3.norm().cbrt(),
        a4.norm().powf(0.25),
    ]
    .into_iter()
    .fold(0.0, f64::max)
    .max(f64::MIN_POSITIVE);

    if a1.norm() <= tol * r {
        let ok3 = a3.norm() <= tol * r.powi(3);
        let lhs = a4 * 4.0 - a2 * a2;
        let ok4 = lhs.norm() <= tol * (4.0 * a4.norm() + a2.norm_sqr()).max(r.powi(4) * 1e-300);
        if ok3 && ok4 {
            let s = (-a2 / 2.0).sqrt();
            return Ok(Some((s, -s)));
        }
        return Ok(None);
    }
    let e1 = a1 * a2 * 4.0 - a1 * a1 * a1 - a3 * 8.0;
    let s1 = 4.0 * (a1 * a2).norm() + a1.norm().powi(3) + 8.0 * a3.norm();
    let e2 = a1 * a1 * a4 - a3 * a3;
    let s2 = a1.norm_sqr() * a4.norm() + a3.norm_sqr();
    if e1.norm() <= tol * s1 && e2.norm() <= tol * s2.max(tol * r.powi(6)) {
        let centre = -a1 / 4.0;
        let disc = (a1 * a1 / 16.0 - a3 / a1).sqrt();
        return Ok(Some((centre + disc, centre - disc)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_match(got: (C64, C64), want: (f64, f64)) -> bool {
        let (a, b) = (C64::new(want.0, 0.0), C64::new(want.1, 0.0));
        ((got.0 - a).norm() < 1e-9 && (got.1 - b).norm() < 1e-9)
            || ((got.0 - b).norm() < 1e-9 && (got.1 - a).norm() < 1e-9)
    }

    #[test]
    fn even_square() {
        let q = Poly::from_real(&[1.0, 0.0, -2.0, 0.0, 1.0]);
        assert!(roots_match(
            two_double_roots(&q, 1e-9).unwrap().unwrap(),
            (1.0, -1.0)
        ));
    }

    #[test]
    fn shifted_square() {
        let q = Poly::from_real(&[4.0, -12.0, 13.0, -6.0, 1.0]);
        assert!(roots_match(
            two_double_roots(&q, 1e-9).unwrap().unwrap(),
            (1.0, 2.0)
        ));
    }

    #[test]
    fn triple_root_is_not_two_doubles() {
        let q = Poly::from_real(&[0.0, 0.0, 0.0, 1.0, 1.0]);
        assert_eq!(two_double_roots(&q, 1e-9).unwrap(), None);
    }

    #[test]
    fn fourfold_root_counts_as_coincident_pair() {
        let q = Poly::from_real(&[0.0, 0.0, 0.0, 0.0, 1.0]);
        let (a, b) = two_double_roots(&q, 1e-9).unwrap().unwrap();
        assert!(a.norm() < 1e-12 && b.norm() < 1e-12);
    }

    #[test]
    fn rejects_non_monic() {
        assert!(two_double_roots(&Poly::from_real(&[1.0, 0.0, 0.0, 0.0, 2.0]), 1e-9).is_err());
    }
}
