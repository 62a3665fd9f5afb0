use crate::error::{Error, Result};
use crate::numkit::{series_expand, Poly};
use crate::surface::QuarticFamily;
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Which of the two components of the preimage of the conic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

/// Local expansions in x₁ = y₁/y₃ at P_∞ (y₃ = 1) of one component over a
/// special-type conic. Entry k of each vector is the x₁ᵏ coefficient.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialSeries {
    pub branch: Branch,
    /// x₂ = y₂/y₃ along the conic.
    pub x2: Vec<C64>,
    /// z/y₃² along the component.
    pub z: Vec<C64>,
    /// ξ = z + i(x₂ + Q·x₁²).
    pub xi: Vec<C64>,
    /// η = z − i(x₂ + Q·x₁²).
    pub eta: Vec<C64>,
}

fn mul_trunc(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            (0..=k)
                .map(|j| {
                    a.get(j).copied().unwrap_or_default()
                        * b.get(k - j).copied().unwrap_or_default()
                })
                .sum()
        })
        .collect()
}

/// Square root of a power series with the constant term's root given.
fn sqrt_series(s: &[C64], r0: C64, n: usize) -> Vec<C64> {
    let mut r = vec![r0];
    for k in 1..n {
        let cross: C64 = (1..k).map(|j| r[j] * r[k - j]).sum();
        r.push((s.get(k).copied().unwrap_or_default() - cross) / (r0 * 2.0));
    }
    r
}

/// On the special conic the quartic z² + F = 0 restricted near P_∞ reads
/// x₂ = −g·x₁ with g = (B e^{−iθ} + S x₁)/(1 + B e^{iθ} x₁), S = √(Q²−f),
/// and z = k·x₁ with k² = (f−Q²)x₁² + 2Q·g·x₁ − g². The plus branch is the
/// one with k(0) = −iB e^{−iθ}, on which η vanishes to third order.
pub fn expand_special_component(
    fam: &QuarticFamily,
    lambda: f64,
    theta: f64,
    branch: Branch,
    order: usize,
) -> Result<SpecialSeries> {
    let f = fam.f_at(lambda);
    if !(f < 0.0) {
        return Err(Error::Precondition(format!(
            "special-type conics need f(λ) < 0, got f({lambda}) = {f}"
        )));
    }
    if order < 1 {
        return Err(Error::Precondition("order must be at least 1".into()));
    }
    let q = fam.q_at(lambda);
    let s = (q * q - f).sqrt();
    let b = crate::resolutions::special_b(fam, lambda);
    let e_minus = C64::from_polar(b, -theta);
    let e_plus = C64::from_polar(b, theta);
    let n = order + 1;
    let g = series_expand(
        &Poly::new(vec![e_minus, C64::new(s, 0.0)]),
        &Poly::new(vec![C64::new(1.0, 0.0), e_plus]),
        order,
    )?;
    let mut x2 = vec![C64::default(); n];
    for k in 1..n {
        x2[k] = -g[k - 1];
    }
    // k² series
    let g2 = mul_trunc(&g, &g, n);
    let mut ksq = vec![C64::default(); n];
    for k in 0..n {
        ksq[k] -= g2[k];
        if k >= 1 {
            ksq[k] += g[k - 1] * (2.0 * q);
        }
        if k == 2 {
            ksq[k] += f - q * q;
        }
    }
    let i = C64::new(0.0, 1.0);
    let k0 = match branch {
        Branch::Plus => -i * e_minus,
        Branch::Minus => i * e_minus,
    };
    let kser = sqrt_series(&ksq, k0, n);
    let mut z = vec![C64::default(); n];
    z[1..n].copy_from_slice(&kser[..n - 1]);
    let mut inner: Vec<C64> = x2.clone();
    if n > 2 {
        inner[2] += q;
    }
    let xi = z.iter().zip(&inner).map(|(z, w)| z + i * w).collect();
    let eta = z.iter().zip(&inner).map(|(z, w)| z - i * w).collect();
    Ok(SpecialSeries {
        branch,
        x2,
        z,
        xi,
        eta,
    })
}

impl SpecialSeries {
    pub fn eval(coeffs: &[C64], x1: C64) -> C64 {
        coeffs
            .iter()
            .rev()
            .fold(C64::default(), |acc, c| acc * x1 + c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::to_quartic;

    #[test]
    fn leading_terms() {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let (lambda, theta) = (0.5, 0.7);
        let s = expand_special_component(&fam, lambda, theta, Branch::Plus, 6).unwrap();
        let b = crate::resolutions::special_b(&fam, lambda);
        let f = fam.f_at(lambda);
        let i = C64::new(0.0, 1.0);
        let xi1 = -i * C64::from_polar(2.0 * b, -theta);
        assert!((s.xi[1] - xi1).norm() < 1e-12);
        assert!(s.eta[1].norm() < 1e-12 && s.eta[2].norm() < 1e-12);
        let eta3 = i * C64::from_polar(1.0, theta) * (f / (2.0 * b));
        assert!((s.eta[3] - eta3).norm() < 1e-10);
    }
}
