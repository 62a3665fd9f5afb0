use num_complex::Complex64 as C64;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense univariate polynomial with complex coefficients, ascending degree.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial is the empty coefficient vector and has degree −1.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == C64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// The monic polynomial with the given roots, repeated by multiplicity.
    pub fn from_roots(roots: &[C64]) -> Self {
        let mut p = Self::constant(C64::new(1.0, 0.0));
        for &r in roots {
            p = &p * &Self::new(vec![-r, C64::new(1.0, 0.0)]);
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs
            .iter()
            .rev()
            .fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, x: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// Σ |aₖ| |x|ᵏ, the natural size against which |p(x)| is judged.
    pub fn magnitude_at(&self, x: C64) -> f64 {
        let r = x.norm();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Taylor coefficient p⁽ᵏ⁾(x)/k! together with its magnitude scale
    /// Σⱼ |aⱼ| C(j,k) |x|^{j−k}.
    pub fn taylor_coeff(&self, x: C64, k: usize) -> (C64, f64) {
        let mut val = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        let r = x.norm();
        for (j, &c) in self.coeffs.iter().enumerate().skip(k) {
            let b = binomial(j, k);
            val += c * b * x.powu((j - k) as u32);
            mag += c.norm() * b * r.powi((j - k) as i32);
        }
        (val, mag)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        let lc = self.leading();
        if lc == C64::new(0.0, 0.0) {
            return self.clone();
        }
        self.scale(lc.inv())
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop trailing coefficients whose modulus is at most `rel` times the
    /// largest coefficient.
    pub fn trimmed(&self, rel: f64) -> Self {
        let cut = rel * self.norm_inf();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= cut) {
            c.pop();
        }
        Self::new(c)
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut out = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Composition p(q(x)).
    pub fn compose(&self, q: &Poly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| &(&acc * q) + &Poly::constant(c))
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(C64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_has_sentinel_degree() {
        assert_eq!(Poly::zero().degree(), -1);
        assert_eq!(Poly::from_real(&[0.0, 0.0]).degree(), -1);
    }

    #[test]
    fn eval_at_zero_is_constant_term() {
        let p = Poly::from_real(&[3.0, -1.0, 2.0]);
        assert_eq!(p.eval(C64::new(0.0, 0.0)), C64::new(3.0, 0.0));
    }

    #[test]
    fn from_roots_expands() {
        let p = Poly::from_roots(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert_eq!(p, Poly::from_real(&[-1.0, 0.0, 1.0]));
    }

    #[test]
    fn taylor_coefficients_of_cube() {
        // (x-2)^3 = x^3 - 6x^2 + 12x - 8, expanded at 2 has only the cubic term
        let p = Poly::from_real(&[-8.0, 12.0, -6.0, 1.0]);
        let x = C64::new(2.0, 0.0);
        for k in 0..3 {
            assert!(p.taylor_coeff(x, k).0.norm() < 1e-12);
        }
        assert!((p.taylor_coeff(x, 3).0 - 1.0).norm() < 1e-12);
    }

    #[test]
    fn compose_matches_pointwise() {
        let p = Poly::from_real(&[1.0, 2.0, 3.0]);
        let q = Poly::from_real(&[0.5, -1.0]);
        let x = C64::new(0.3, 0.7);
        assert!((p.compose(&q).eval(x) - p.eval(q.eval(x))).norm() < 1e-14);
    }
}
