use crate::error::{Error, Result};
use crate::forms::Quaternary;
use crate::numkit::Poly;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

/// The surface (y₂y₃ + Q(y₀,y₁))² − y₀y₁(y₀+y₁)(y₀−a·y₁) = 0 with
/// Q = b·y₀² + c·y₀y₁ + d·y₁².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticFamily {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl QuarticFamily {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a > 0.0) || ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(Error::Precondition(format!(
                "need finite coefficients and a > 0, got a = {a}"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// Parse `{"a":..,"b":..,"c":..,"d":..}`.
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: QuarticFamily =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.a, raw.b, raw.c, raw.d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }

    /// Q(y₀, y₁).
    pub fn q<T>(&self, y0: T, y1: T) -> T
    where
        T: Copy
            + std::ops::Mul<f64, Output = T>
            + std::ops::Mul<Output = T>
            + std::ops::Add<Output = T>,
    {
        y0 * y0 * self.b + y0 * y1 * self.c + y1 * y1 * self.d
    }

    /// Q(λ, 1).
    pub fn q_at(&self, lambda: f64) -> f64 {
        (self.b * lambda + self.c) * lambda + self.d
    }

    /// f(λ) = λ(λ+1)(λ−a).
    pub fn f_at(&self, lambda: f64) -> f64 {
        lambda * (lambda + 1.0) * (lambda - self.a)
    }

    /// f′(λ).
    pub fn df_at(&self, lambda: f64) -> f64 {
        3.0 * lambda * lambda + 2.0 * (1.0 - self.a) * lambda - self.a
    }

    /// D(λ) = Q(λ,1)² − f(λ).
    pub fn d_at(&self, lambda: f64) -> f64 {
        let q = self.q_at(lambda);
        q * q - self.f_at(lambda)
    }

    /// D(y₀, y₁) = Q² − y₀y₁(y₀+y₁)(y₀−a·y₁); at (1,0) this is b².
    pub fn d_hom(&self, y0: f64, y1: f64) -> f64 {
        let q = self.q(y0, y1);
        q * q - y0 * y1 * (y0 + y1) * (y0 - self.a * y1)
    }

    pub fn q_poly(&self) -> Poly {
        Poly::from_real(&[self.d, self.c, self.b])
    }

    pub fn f_poly(&self) -> Poly {
        Poly::from_real(&[0.0, -self.a, 1.0 - self.a, 1.0])
    }

    /// D(λ, 1) as a polynomial in λ (degree 4 unless b = 0).
    pub fn d_poly(&self) -> Poly {
        let q = self.q_poly();
        &(&q * &q) - &self.f_poly()
    }

    pub fn evaluate(&self, p: &[C64; 4]) -> C64 {
        let [y0, y1, y2, y3] = *p;
        let t = y2 * y3 + self.q(y0, y1);
        t * t - y0 * y1 * (y0 + y1) * (y0 - y1 * self.a)
    }

    /// The defining quartic as a coefficient form in (y₀, y₁, y₂, y₃).
    pub fn form(&self) -> Quaternary {
        let y: Vec<Quaternary> = (0..4).map(Quaternary::var).collect();
        let r = |x: f64| C64::new(x, 0.0);
        let q = &(&(&y[0] * &y[0]).scale(r(self.b)) + &(&y[0] * &y[1]).scale(r(self.c)))
            + &(&y[1] * &y[1]).scale(r(self.d));
        let t = &(&y[2] * &y[3]) + &q;
        let f = &(&(&y[0] * &y[1]) * &(&y[0] + &y[1])) * &(&y[0] - &y[1].scale(r(self.a)));
        &(&t * &t) - &f
    }
}

/// A point of CP³ in homogeneous coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjPoint(pub [C64; 4]);

impl ProjPoint {
    pub fn real(y: [f64; 4]) -> Self {
        Self(y.map(|v| C64::new(v, 0.0)))
    }

    pub fn p_infinity() -> Self {
        Self::real([0.0, 0.0, 0.0, 1.0])
    }

    pub fn p_infinity_bar() -> Self {
        Self::real([0.0, 0.0, 1.0, 0.0])
    }

    /// Unit-norm representative whose largest coordinate is real positive.
    pub fn normalized(&self) -> Self {
        let n = self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let k = (0..4)
            .max_by(|&i, &j| self.0[i].norm().total_cmp(&self.0[j].norm()))
            .unwrap();
        let phase = self.0[k].conj() / self.0[k].norm();
        Self(self.0.map(|c| c * phase / n))
    }

    /// sin of the Fubini–Study angle between the two points.
    pub fn distance(&self, other: &Self) -> f64 {
        let na = self.0.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let nb = other.0.iter().map(|c| c.norm_sqr()).sum::<f64>();
        let ip: C64 = self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        (1.0 - ip.norm_sqr() / (na * nb)).max(0.0).sqrt()
    }

    pub fn sigma(&self) -> Self {
        let [y0, y1, y2, y3] = self.0;
        Self([y0.conj(), y1.conj(), y3.conj(), y2.conj()])
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.distance(&self.sigma()) <= tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symmetry {
    /// The real structure (y₀:y₁:y₂:y₃) ↦ (ȳ₀:ȳ₁:ȳ₃:ȳ₂).
    Sigma,
    /// The C*-action (y₀, y₁, t·y₂, t⁻¹·y₃).
    Rho(C64),
    /// The projective map (a·y₀+a·y₁, y₀−a·y₁, √(a(a+1))·y₂, √(a(a+1))·y₃).
    G { a: f64 },
}

pub fn apply_symmetry(kind: Symmetry, p: &ProjPoint) -> ProjPoint {
    let [y0, y1, y2, y3] = p.0;
    match kind {
        Symmetry::Sigma => p.sigma(),
        Symmetry::Rho(t) => ProjPoint([y0, y1, t * y2, y3 / t]),
        Symmetry::G { a } => {
            let s = (a * (a + 1.0)).sqrt();
            ProjPoint([(y0 + y1) * a, y0 - y1 * a, y2 * s, y3 * s])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r1() -> QuarticFamily {
        let s6 = 6f64.sqrt();
        let c = 11.0 / (2.0 * s6) - 8.0;
        let d = s6 - 8.0 - 2.0 * c;
        QuarticFamily::new(1.0, 2.0, c, d).unwrap()
    }

    #[test]
    fn p_infinity_on_surface() {
        assert_eq!(
            r1().evaluate(&ProjPoint::p_infinity().0),
            C64::new(0.0, 0.0)
        );
    }

    #[test]
    fn trope_point_value() {
        // (1:0:1:1): y2y3 + Q = 1 + b, product term vanishes
        let v = r1().evaluate(&ProjPoint::real([1.0, 0.0, 1.0, 1.0]).0);
        assert!((v - 9.0).norm() < 1e-12);
    }

    #[test]
    fn form_matches_direct_evaluation() {
        let fam = r1();
        let p = [
            C64::new(0.3, 0.1),
            C64::new(-1.2, 0.4),
            C64::new(0.5, -0.7),
            C64::new(2.0, 0.3),
        ];
        assert!((fam.form().eval(&p) - fam.evaluate(&p)).norm() < 1e-11);
    }

    #[test]
    fn d_at_infinity_is_b_squared() {
        assert!((r1().d_hom(1.0, 0.0) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let fam = r1();
        assert_eq!(QuarticFamily::from_json(&fam.to_json()).unwrap(), fam);
        assert!(QuarticFamily::from_json("{\"a\":-1,\"b\":0,\"c\":0,\"d\":0}").is_err());
    }
}
