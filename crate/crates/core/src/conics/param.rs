use super::PlaneConic;
use crate::error::{Error, Result};
use crate::forms::Ternary;
use crate::numkit::Poly;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x00c0_41c5;

/// F(c₁(t), c₂(t), c₃(t)) for polynomial coordinates.
pub fn restrict_to_curve(form: &Ternary, c: &[Poly; 3]) -> Poly {
    let d = form.degree();
    let pows: Vec<Vec<Poly>> = c
        .iter()
        .map(|p| {
            let mut v = vec![Poly::constant(C64::new(1.0, 0.0))];
            for k in 1..=d {
                v.push(&v[k - 1] * p);
            }
            v
        })
        .collect();
    let mut out = Poly::zero();
    for (e, &coef) in form.terms() {
        let term = &(&pows[0][e[0] as usize] * &pows[1][e[1] as usize]) * &pows[2][e[2] as usize];
        out = &out + &term.scale(coef);
    }
    out
}

/// s with s² = p, by coefficient matching from the top coefficient down
/// and from the constant term up; the candidate with the smaller residual
/// wins. `None` unless deg p is even.
pub(crate) fn square_root_poly(p: &Poly) -> Option<Poly> {
    let d = p.degree();
    if d < 0 || d % 2 != 0 {
        return None;
    }
    let m = (d / 2) as usize;
    let mut top = vec![C64::default(); m + 1];
    top[m] = p.leading().sqrt();
    for j in 1..=m {
        let cross: C64 = (1..j).map(|i| top[m - i] * top[m - j + i]).sum();
        top[m - j] = (p.coeff(2 * m - j) - cross) / (top[m] * 2.0);
    }
    let top = Poly::new(top);
    let residual = |s: &Poly| (&(s * s) - p).norm_inf();
    let low = (0..=2 * m).find(|&j| p.coeff(j).norm() > 0.0).unwrap_or(0);
    if low % 2 != 0 {
        return Some(top);
    }
    let v = low / 2;
    let mut bottom = vec![C64::default(); m + 1];
    bottom[v] = p.coeff(2 * v).sqrt();
    for k in (v + 1)..=m {
        let cross: C64 = ((v + 1)..k).map(|i| bottom[i] * bottom[k + v - i]).sum();
        bottom[k] = (p.coeff(k + v) - cross) / (bottom[v] * 2.0);
    }
    let bottom = Poly::new(bottom);
    Some(if residual(&bottom) < residual(&top) {
        bottom
    } else {
        top
    })
}

/// Σ|c|·Π‖cᵢ‖^{eᵢ}: the size of F∘c before cancellation.
pub(crate) fn term_scale(form: &Ternary, c: &[Poly; 3]) -> f64 {
    let n: Vec<f64> = c.iter().map(|p| p.norm_inf()).collect();
    form.terms()
        .map(|(e, k)| k.norm() * (0..3).map(|i| n[i].powi(e[i] as i32)).product::<f64>())
        .sum()
}

/// Lines through a base point p of the conic, indexed by where they meet
/// the reference line u + t·v; the second intersection is
/// c(t) = (qMq)·p − 2(pMq)·q with q = u + t·v.
#[derive(Debug, Clone)]
pub struct ConicParam {
    pub conic: PlaneConic,
    pub p: [C64; 3],
    pub u: [C64; 3],
    pub v: [C64; 3],
}

fn random_point(rng: &mut ChaCha8Rng) -> [C64; 3] {
    std::array::from_fn(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Σ |c|·|y^e|, the scale against which F(y) is small.
fn magnitude(f: &Ternary, y: &[C64; 3]) -> f64 {
    f.terms()
        .map(|(e, c)| {
            c.norm()
                * (0..3)
                    .map(|k| y[k].norm().powi(e[k] as i32))
                    .product::<f64>()
        })
        .sum()
}

/// Diagonal d with d·M·d having rows of comparable size.
fn equilibrate(conic: &PlaneConic) -> [f64; 3] {
    let mut d = [1.0f64; 3];
    for _ in 0..8 {
        for i in 0..3 {
            let row = (0..3)
                .map(|j| (conic.matrix[i][j] * d[i] * d[j]).norm())
                .fold(0.0, f64::max);
            if row > 0.0 {
                d[i] /= row.sqrt();
            }
        }
    }
    let top = d.iter().copied().fold(0.0, f64::max);
    d.map(|x| x / top)
}

fn det3(a: &[C64; 3], b: &[C64; 3], c: &[C64; 3]) -> C64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

impl ConicParam {
    /// The base point must not lie on `avoid` (a tangency point would break
    /// the multiplicity pattern); it is re-picked if it does.
    /// Points are drawn in coordinates where the conic is equilibrated, so
    /// that the intersection parameters stay well separated when the
    /// coefficients span many orders of magnitude.
    pub fn new(conic: &PlaneConic, avoid: Option<&Ternary>) -> Result<Self> {
        let d = equilibrate(conic);
        let scaled = |y: [C64; 3]| -> [C64; 3] { std::array::from_fn(|i| y[i] * d[i]) };
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for attempt in 0..32 {
            let a0 = scaled(random_point(&mut rng));
            let a1 = scaled(random_point(&mut rng));
            // (a0 + s·a1)M(a0 + s·a1) = 0
            let qa = conic.eval(&a1);
            let qb = conic.bilinear(&a0, &a1) * 2.0;
            let qc = conic.eval(&a0);
            let disc = (qb * qb - qa * qc * 4.0).sqrt();
            let s = if qa.norm() > 1e-300 {
                (-qb + disc) / (qa * 2.0)
            } else {
                -qc / qb
            };
            let p: [C64; 3] = std::array::from_fn(|i| a0[i] + a1[i] * s);
            let pn = p.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if !pn.is_finite() {
                continue;
            }
            let p = p.map(|x| x / pn);
            let pn = (0..3).map(|i| (p[i] / d[i]).norm_sqr()).sum::<f64>().sqrt();
            let p = p.map(|x| x / pn);
            // after half the attempts the quartic may simply contain the conic
            if let Some(f) = avoid.filter(|_| attempt < 16) {
                if f.eval(&p).norm() <= 1e-6 * magnitude(f, &p) {
                    continue;
                }
            }
            let u = scaled(random_point(&mut rng));
            let v = scaled(random_point(&mut rng));
            let unscaled = |y: &[C64; 3]| -> [C64; 3] { std::array::from_fn(|i| y[i] / d[i]) };
            if det3(&unscaled(&p), &unscaled(&u), &unscaled(&v)).norm() < 1e-3 {
                continue;
            }
            return Ok(Self {
                conic: *conic,
                p,
                u,
                v,
            });
        }
        Err(Error::Verification(
            "could not find a usable base point on the conic".into(),
        ))
    }

    /// Coordinates of c(t) as quadratic polynomials.
    pub fn polys(&self) -> [Poly; 3] {
        let m = &self.conic;
        let a = m.eval(&self.u);
        let b = m.bilinear(&self.u, &self.v);
        let c = m.eval(&self.v);
        let d = m.bilinear(&self.p, &self.u);
        let e = m.bilinear(&self.p, &self.v);
        std::array::from_fn(|i| {
            Poly::new(vec![
                a * self.p[i] - d * self.u[i] * 2.0,
                b * 2.0 * self.p[i] - (d * self.v[i] + e * self.u[i]) * 2.0,
                c * self.p[i] - e * self.v[i] * 2.0,
            ])
        })
    }

    pub fn point(&self, t: C64) -> [C64; 3] {
        let q: [C64; 3] = std::array::from_fn(|i| self.u[i] + self.v[i] * t);
        let qq = self.conic.eval(&q);
        let pq = self.conic.bilinear(&self.p, &q);
        std::array::from_fn(|i| self.p[i] * qq - q[i] * pq * 2.0)
    }

    pub fn point_at_infinity(&self) -> [C64; 3] {
        let vv = self.conic.eval(&self.v);
        let pv = self.conic.bilinear(&self.p, &self.v);
        std::array::from_fn(|i| self.p[i] * vv - self.v[i] * pv * 2.0)
    }

    /// The parameter of a conic point x ≠ p.
    pub fn parameter_of(&self, x: &[C64; 3]) -> C64 {
        -det3(&self.p, x, &self.u) / det3(&self.p, x, &self.v)
    }

    /// Typical coordinate size of c(t) for |t| ≲ 1.
    pub fn scale(&self) -> f64 {
        self.polys()
            .iter()
            .map(|p| p.norm_inf())
            .fold(0.0, f64::max)
    }
}
