use super::poly::Poly;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// First `order + 1` Maclaurin coefficients of `num / den`.
pub fn series_expand(num: &Poly, den: &Poly, order: usize) -> Result<Vec<C64>> {
    let d0 = den.coeff(0);
    if d0.norm() == 0.0 {
        return Err(Error::Precondition(
            "denominator vanishes at the origin".into(),
        ));
    }
    let mut out = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let mut acc = num.coeff(k);
        for j in 1..=k {
            acc -= den.coeff(j) * out[k - j];
        }
        out.push(acc / d0);
    }
    Ok(out)
}
