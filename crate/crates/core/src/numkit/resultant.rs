use super::poly::Poly;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Dense bivariate polynomial: `c[i][j]` is the coefficient of xⁱyʲ.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    pub c: Vec<Vec<C64>>,
}

impl BiPoly {
    pub fn new(c: Vec<Vec<C64>>) -> Self {
        Self { c }
    }

    pub fn from_real(c: &[&[f64]]) -> Self {
        Self::new(
            c.iter()
                .map(|row| row.iter().map(|&v| C64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        self.c.iter().rev().fold(C64::new(0.0, 0.0), |acc, row| {
            acc * x + row.iter().rev().fold(C64::new(0.0, 0.0), |a, &v| a * y + v)
        })
    }

    /// Coefficients as a polynomial in `v`, each coefficient a polynomial in
    /// the other variable.
    fn slices(&self, v: Var) -> Vec<Poly> {
        match v {
            Var::X => self.c.iter().map(|row| Poly::new(row.clone())).collect(),
            Var::Y => {
                let ny = self.c.iter().map(|r| r.len()).max().unwrap_or(0);
                (0..ny)
                    .map(|j| {
                        Poly::new(
                            self.c
                                .iter()
                                .map(|r| r.get(j).copied().unwrap_or_default())
                                .collect(),
                        )
                    })
                    .collect()
            }
        }
    }
}

fn trim_identically_zero(mut s: Vec<Poly>) -> Vec<Poly> {
    while s.last().is_some_and(|p| p.is_zero()) {
        s.pop();
    }
    s
}

fn sylvester_det(p: &[C64], q: &[C64]) -> C64 {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    if size == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut s = DMatrix::<C64>::zeros(size, size);
    // rows hold descending coefficients
    for r in 0..n {
        for (k, &c) in p.iter().rev().enumerate() {
            s[(r, r + k)] = c;
        }
    }
    for r in 0..m {
        for (k, &c) in q.iter().rev().enumerate() {
            s[(n + r, r + k)] = c;
        }
    }
    s.determinant()
}

/// Resultant of `p` and `q` with respect to `eliminate`, as a polynomial in
/// the remaining variable.
///
/// The Sylvester determinant is sampled on roots of unity and interpolated
/// by an inverse DFT, which is perfectly conditioned on the unit circle. The
/// formal degrees in the eliminated variable are the largest ones present,
/// so a leading coefficient that vanishes at isolated values only adds the
/// usual projective factor; an identically vanishing one is trimmed first.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<Poly> {
    let ps = trim_identically_zero(p.slices(eliminate));
    let qs = trim_identically_zero(q.slices(eliminate));
    if ps.len() < 2 || qs.len() < 2 {
        return Err(Error::Precondition(
            "both polynomials must involve the eliminated variable".into(),
        ));
    }
    let m = ps.len() - 1;
    let n = qs.len() - 1;
    let dp = ps
        .iter()
        .map(|s| s.degree().max(0) as usize)
        .max()
        .unwrap_or(0);
    let dq = qs
        .iter()
        .map(|s| s.degree().max(0) as usize)
        .max()
        .unwrap_or(0);
    let bound = m * dq + n * dp;
    let npts = bound + 1;
    let tau = std::f64::consts::TAU;
    let samples: Vec<C64> = (0..npts)
        .map(|k| {
            let y = C64::from_polar(1.0, tau * k as f64 / npts as f64);
            let pv: Vec<C64> = ps.iter().map(|s| s.eval(y)).collect();
            let qv: Vec<C64> = qs.iter().map(|s| s.eval(y)).collect();
            sylvester_det(&pv, &qv)
        })
        .collect();
    let coeffs: Vec<C64> = (0..npts)
        .map(|l| {
            samples
                .iter()
                .enumerate()
                .map(|(k, &v)| v * C64::from_polar(1.0, -tau * (k * l) as f64 / npts as f64))
                .sum::<C64>()
                / npts as f64
        })
        .collect();
    Ok(Poly::new(coeffs).trimmed(1e-13))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_meet_at_origin() {
        // p = x + y, q = x - y
        let p = BiPoly::from_real(&[&[0.0, 1.0], &[1.0]]);
        let q = BiPoly::from_real(&[&[0.0, -1.0], &[1.0]]);
        let r = resultant(&p, &q, Var::X).unwrap();
        assert_eq!(r.degree(), 1);
        assert!(r.coeff(0).norm() < 1e-12);
    }

    #[test]
    fn circle_and_diagonal() {
        // p = x² + y² − 1, q = x − y
        let p = BiPoly::from_real(&[&[-1.0, 0.0, 1.0], &[], &[1.0]]);
        let q = BiPoly::from_real(&[&[0.0, -1.0], &[1.0]]);
        let r = resultant(&p, &q, Var::X).unwrap().monic();
        // multiple of 2y² − 1, monic form y² − 1/2
        assert_eq!(r.degree(), 2);
        assert!((r.coeff(0) + 0.5).norm() < 1e-12);
        assert!(r.coeff(1).norm() < 1e-12);
    }
}
