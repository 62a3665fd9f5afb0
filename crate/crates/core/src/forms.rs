//! Sparse homogeneous polynomials in a fixed number of variables.
//!
//! `Form<3>` carries plane curves (sections, conics), `Form<4>` the surface
//! itself when it has to be transformed coefficient-wise.

use num_complex::Complex64 as C64;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Form<const N: usize> {
    terms: BTreeMap<[u8; N], C64>,
}

pub type Ternary = Form<3>;
pub type Quaternary = Form<4>;

impl<const N: usize> Form<N> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C64) -> Self {
        let mut f = Self::zero();
        f.add_term([0; N], c);
        f
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0u8; N];
        e[i] = 1;
        let mut f = Self::zero();
        f.add_term(e, C64::new(1.0, 0.0));
        f
    }

    /// Linear form Σ cᵢ xᵢ.
    pub fn linear(c: [C64; N]) -> Self {
        let mut f = Self::zero();
        for (i, &ci) in c.iter().enumerate() {
            let mut e = [0u8; N];
            e[i] = 1;
            f.add_term(e, ci);
        }
        f
    }

    pub fn add_term(&mut self, exps: [u8; N], c: C64) {
        if c == C64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(exps).or_insert(C64::new(0.0, 0.0));
        *entry += c;
        if *entry == C64::new(0.0, 0.0) {
            self.terms.remove(&exps);
        }
    }

    pub fn coeff(&self, exps: [u8; N]) -> C64 {
        self.terms.get(&exps).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8; N], &C64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the first term (forms built here are homogeneous).
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .next()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .unwrap_or(0)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut f = Self::zero();
        for (e, c) in &self.terms {
            f.add_term(*e, c * s);
        }
        f
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(C64::new(1.0, 0.0));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, x: &[C64; N]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = *c;
                for i in 0..N {
                    if e[i] > 0 {
                        t *= x[i].powu(e[i] as u32);
                    }
                }
                t
            })
            .sum()
    }

    pub fn gradient(&self, x: &[C64; N]) -> [C64; N] {
        let mut g = [C64::new(0.0, 0.0); N];
        for (e, c) in &self.terms {
            for (k, gk) in g.iter_mut().enumerate() {
                if e[k] == 0 {
                    continue;
                }
                let mut t = *c * e[k] as f64;
                for i in 0..N {
                    let p = if i == k { e[i] - 1 } else { e[i] };
                    if p > 0 {
                        t *= x[i].powu(p as u32);
                    }
                }
                *gk += t;
            }
        }
        g
    }

    pub fn hessian(&self, x: &[C64; N]) -> [[C64; N]; N] {
        let mut h = [[C64::new(0.0, 0.0); N]; N];
        for (e, c) in &self.terms {
            for a in 0..N {
                for b in 0..N {
                    let mut ex = *e;
                    let mut t = *c;
                    if ex[a] == 0 {
                        continue;
                    }
                    t *= ex[a] as f64;
                    ex[a] -= 1;
                    if ex[b] == 0 {
                        continue;
                    }
                    t *= ex[b] as f64;
                    ex[b] -= 1;
                    for i in 0..N {
                        if ex[i] > 0 {
                            t *= x[i].powu(ex[i] as u32);
                        }
                    }
                    h[a][b] += t;
                }
            }
        }
        h
    }

    /// Substitute xᵢ = Σⱼ m[i][j] sⱼ, giving a form in M variables.
    pub fn substitute<const M: usize>(&self, m: &[[C64; M]; N]) -> Form<M> {
        let lin: Vec<Form<M>> = m.iter().map(|row| Form::<M>::linear(*row)).collect();
        let mut cache: Vec<Vec<Form<M>>> = lin
            .iter()
            .map(|l| vec![Form::<M>::constant(C64::new(1.0, 0.0)), l.clone()])
            .collect();
        let mut out = Form::<M>::zero();
        for (e, c) in &self.terms {
            let mut t = Form::<M>::constant(*c);
            for i in 0..N {
                let p = e[i] as usize;
                while cache[i].len() <= p {
                    let next = &cache[i][cache[i].len() - 1] * &lin[i];
                    cache[i].push(next);
                }
                if p > 0 {
                    t = &t * &cache[i][p];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Largest coefficient modulus.
    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// max |self − other| over all coefficients.
    pub fn max_diff(&self, other: &Self) -> f64 {
        (self - other).norm_inf()
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        let mut f = Self::zero();
        for (e, c) in &self.terms {
            f.add_term(*e, c.conj());
        }
        f
    }

    /// Drop coefficients below `rel` times the largest one.
    pub fn cleaned(&self, rel: f64) -> Self {
        let cut = rel * self.norm_inf();
        let mut f = Self::zero();
        for (e, c) in &self.terms {
            if c.norm() > cut {
                f.add_term(*e, *c);
            }
        }
        f
    }
}

impl<'a, const N: usize> Add<&'a Form<N>> for &'a Form<N> {
    type Output = Form<N>;
    fn add(self, rhs: &Form<N>) -> Form<N> {
        let mut f = self.clone();
        for (e, c) in &rhs.terms {
            f.add_term(*e, *c);
        }
        f
    }
}

impl<'a, const N: usize> Sub<&'a Form<N>> for &'a Form<N> {
    type Output = Form<N>;
    fn sub(self, rhs: &Form<N>) -> Form<N> {
        let mut f = self.clone();
        for (e, c) in &rhs.terms {
            f.add_term(*e, -*c);
        }
        f
    }
}

impl<'a, const N: usize> Mul<&'a Form<N>> for &'a Form<N> {
    type Output = Form<N>;
    fn mul(self, rhs: &Form<N>) -> Form<N> {
        let mut f = Form::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0u8; N];
                for i in 0..N {
                    e[i] = ea[i] + eb[i];
                }
                f.add_term(e, ca * cb);
            }
        }
        f
    }
}

/// Monomial exponents of total degree `d` in three variables, in a fixed
/// order (x-power descending, then y-power descending).
pub fn ternary_monomials(d: u8) -> Vec<[u8; 3]> {
    let mut v = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=(d - i)).rev() {
            v.push([i, j, d - i - j]);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn substitution_matches_evaluation() {
        // f = x0^2 x1 + 3 x1 x2^2 - x2^3
        let f: Ternary = {
            let x0 = Ternary::var(0);
            let x1 = Ternary::var(1);
            let x2 = Ternary::var(2);
            let a = &(&x0 * &x0) * &x1;
            let b = (&(&x1 * &x2) * &x2).scale(c(3.0));
            let d = (&(&x2 * &x2) * &x2).scale(c(-1.0));
            &(&a + &b) + &d
        };
        let m = [
            [c(1.0), C64::new(0.0, 2.0), c(0.5)],
            [c(-1.0), c(1.0), c(0.0)],
            [c(0.3), c(0.0), C64::new(1.0, -1.0)],
        ];
        let g = f.substitute(&m);
        let s = [C64::new(0.2, 0.1), c(-0.7), C64::new(0.4, 0.9)];
        let x = [0, 1, 2].map(|i| m[i][0] * s[0] + m[i][1] * s[1] + m[i][2] * s[2]);
        assert!((g.eval(&s) - f.eval(&x)).norm() < 1e-12);
    }

    #[test]
    fn gradient_and_hessian_of_quadric() {
        // q = x0 x1 + x2^2
        let q = &(&Ternary::var(0) * &Ternary::var(1)) + &(&Ternary::var(2) * &Ternary::var(2));
        let p = [c(2.0), c(3.0), c(5.0)];
        assert_eq!(q.gradient(&p), [c(3.0), c(2.0), c(10.0)]);
        let h = q.hessian(&p);
        assert_eq!(h[0][1], c(1.0));
        assert_eq!(h[2][2], c(2.0));
        assert_eq!(h[0][0], c(0.0));
    }

    #[test]
    fn fifteen_quartic_monomials() {
        assert_eq!(ternary_monomials(4).len(), 15);
    }
}
