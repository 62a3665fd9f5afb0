//! Polynomial numerics: dense complex polynomials, Aberth roots with
//! multiplicity clustering, the two-double-roots test, resultants and
//! Maclaurin expansion of rational functions.

mod poly;
mod quartic;
mod resultant;
mod roots;
mod series;

pub use poly::Poly;
pub use quartic::two_double_roots;
pub use resultant::{resultant, BiPoly, Var};
pub use roots::{aberth_roots, complex_roots, RootSet};
pub use series::series_expand;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

/// Solve a square complex system; `None` when the LU factorisation is singular.
pub fn solve_linear(a: DMatrix<C64>, b: DVector<C64>) -> Option<DVector<C64>> {
    a.lu().solve(&b)
}

/// Singular values in descending order.
pub fn singular_values(a: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}
