//! The (a, λ₀, b) chart of the parameter space, the Condition (A)
//! threshold on b, the involution G and its fixed locus, the four
//! projective symmetries of {−1, 0, a, ∞}, and the disk chart near the
//! C*-fixed points.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::forms::Quaternary;
use crate::surface::{condition_a_check, QuarticFamily, Status};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub a: f64,
    pub lambda0: f64,
    pub b: f64,
}

impl ModuliPoint {
    pub fn new(a: f64, lambda0: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !(lambda0 > a) || !b.is_finite() {
            return Err(Error::Precondition(format!(
                "moduli chart needs a > 0 and λ₀ > a, got a = {a}, λ₀ = {lambda0}"
            )));
        }
        Ok(Self { a, lambda0, b })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: ModuliPoint = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(raw.a, raw.lambda0, raw.b)
    }

    pub fn family(&self) -> Result<QuarticFamily> {
        to_quartic(self.a, self.lambda0, self.b)
    }

    /// Valid iff the reconstructed family satisfies Condition (A).
    pub fn is_valid(&self, tol: &Tolerances) -> Result<bool> {
        Ok(condition_a_check(&self.family()?, tol)?.holds())
    }
}

/// Reconstruct Q from the tangency of Q(λ,1) with √f at λ₀:
/// c = f′(λ₀)/(2√f(λ₀)) − 2bλ₀ and d = √f(λ₀) − bλ₀² − cλ₀.
pub fn to_quartic(a: f64, lambda0: f64, b: f64) -> Result<QuarticFamily> {
    if !(a > 0.0) || !(lambda0 > a) {
        return Err(Error::Precondition(format!(
            "need a > 0 and λ₀ > a, got a = {a}, λ₀ = {lambda0}"
        )));
    }
    let f = lambda0 * (lambda0 + 1.0) * (lambda0 - a);
    let df = 3.0 * lambda0 * lambda0 + 2.0 * (1.0 - a) * lambda0 - a;
    let sf = f.sqrt();
    let c = df / (2.0 * sf) - 2.0 * b * lambda0;
    let d = sf - b * lambda0 * lambda0 - c * lambda0;
    QuarticFamily::new(a, b, c, d)
}

#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    pub b0: f64,
    /// Largest tested b that fails (b0 − width ≤ this < b0).
    pub below: f64,
    pub bracket: (f64, f64),
    /// Membership pattern on the bracket samples, checked monotone.
    pub samples: Vec<(f64, bool)>,
}

fn passes(a: f64, lambda0: f64, b: f64, tol: &Tolerances) -> Result<bool> {
    let rep = condition_a_check(&to_quartic(a, lambda0, b)?, tol)?;
    Ok(matches!(rep.status, Status::Holds))
}

/// Smallest b (to `tol.bisection`) such that (a, λ₀, b) satisfies
/// Condition (A). Membership is checked to be monotone on a sampled
/// bracket before bisecting; indeterminate points count as failing.
pub fn b_threshold(a: f64, lambda0: f64, tol: &Tolerances) -> Result<Threshold> {
    ModuliPoint::new(a, lambda0, 0.0)?;
    let mut hi = 1.0;
    while !passes(a, lambda0, hi, tol)? {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Verification("no passing b below 1e6".into()));
        }
    }
    let lo = 0.0;
    if passes(a, lambda0, lo, tol)? {
        return Err(Error::Verification("b = 0 unexpectedly passes".into()));
    }
    let n = 64;
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let b = lo + (hi - lo) * k as f64 / n as f64;
        samples.push((b, passes(a, lambda0, b, tol)?));
    }
    let flips = samples.windows(2).filter(|w| w[0].1 != w[1].1).count();
    if flips != 1 || samples[0].1 || !samples[n].1 {
        return Err(Error::Verification(format!(
            "membership is not monotone on [{lo}, {hi}]"
        )));
    }
    let k = samples
        .iter()
        .position(|s| s.1)
        .expect("last sample passes");
    let (mut l, mut h) = (samples[k - 1].0, samples[k].0);
    while h - l > tol.bisection {
        let m = 0.5 * (l + h);
        if passes(a, lambda0, m, tol)? {
            h = m;
        } else {
            l = m;
        }
    }
    Ok(Threshold {
        b0: h,
        below: l,
        bracket: (lo, hi),
        samples,
    })
}

/// Q′(z₀, z₁) = Q(a·z₀ + a·z₁, z₀ − a·z₁) / (a(a+1)), returned as (b′, c′, d′).
pub fn involution_on_q(a: f64, q: (f64, f64, f64)) -> (f64, f64, f64) {
    let (b, c, d) = q;
    let s = a * (a + 1.0);
    (
        (b * a * a + c * a + d) / s,
        (2.0 * b * a * a + c * a * (1.0 - a) - 2.0 * a * d) / s,
        (b * a * a - c * a * a + d * a * a) / s,
    )
}

/// The family with Q replaced by its image under the involution.
pub fn involution_on_family(fam: &QuarticFamily) -> Result<QuarticFamily> {
    let (b, c, d) = involution_on_q(fam.a, (fam.b, fam.c, fam.d));
    QuarticFamily::new(fam.a, b, c, d)
}

/// λ₀ ↦ (aλ₀ + a)/(λ₀ − a), b ↦ (ba² + ca + d)/(a(a+1)).
pub fn involution_g(p: &ModuliPoint) -> Result<ModuliPoint> {
    let fam = p.family()?;
    let l = (p.a * p.lambda0 + p.a) / (p.lambda0 - p.a);
    let (b, _, _) = involution_on_q(p.a, (fam.b, fam.c, fam.d));
    ModuliPoint::new(p.a, l, b)
}

/// λ₀ on the fixed locus of G.
pub fn fixed_lambda0(a: f64) -> f64 {
    a + (a * a + a).sqrt()
}

/// Coefficient-wise comparison of B(a,Q′)∘G with a²(a+1)²·B(a,Q); returns
/// the largest coefficient difference relative to the largest coefficient.
pub fn g_coefficient_mismatch(fam: &QuarticFamily) -> Result<f64> {
    let image = involution_on_family(fam)?;
    let a = fam.a;
    let s = (a * (a + 1.0)).sqrt();
    let r = |x: f64| C64::new(x, 0.0);
    let z = r(0.0);
    let g = [
        [r(a), r(a), z, z],
        [r(1.0), r(-a), z, z],
        [z, z, r(s), z],
        [z, z, z, r(s)],
    ];
    let pulled: Quaternary = image.form().substitute(&g);
    let target = fam.form().scale(r(a * a * (a + 1.0) * (a + 1.0)));
    Ok(pulled.max_diff(&target) / target.norm_inf())
}

/// A 2×2 real block acting on (y₀, y₁); the (y₂, y₃) block is diagonal
/// with positive real entry √|det|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectiveSymmetry {
    pub name: &'static str,
    pub block: [[f64; 2]; 2],
}

/// A point of ℝ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            (ExtReal::Finite(x), ExtReal::Finite(y)) => (x - y).abs() <= tol * (1.0 + x.abs()),
            (ExtReal::Finite(x), ExtReal::Infinity) | (ExtReal::Infinity, ExtReal::Finite(x)) => {
                x.abs() > 1.0 / tol
            }
        }
    }
}

impl ProjectiveSymmetry {
    /// Action on λ = y₀/y₁.
    pub fn act(&self, l: ExtReal) -> ExtReal {
        let [[p, q], [r, s]] = self.block;
        let (num, den) = match l {
            ExtReal::Finite(x) => (p * x + q, r * x + s),
            ExtReal::Infinity => (p, r),
        };
        if den == 0.0 {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(num / den)
        }
    }

    pub fn compose(&self, other: &Self) -> [[f64; 2]; 2] {
        let a = self.block;
        let b = other.block;
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }
}

/// {id, A⁽¹⁾, A⁽²⁾, A⁽³⁾}: the projective maps permuting {−1, 0, a, ∞}.
pub fn symmetry_group(a: f64) -> [ProjectiveSymmetry; 4] {
    [
        ProjectiveSymmetry {
            name: "id",
            block: [[1.0, 0.0], [0.0, 1.0]],
        },
        ProjectiveSymmetry {
            name: "A1",
            block: [[0.0, a], [-1.0, 0.0]],
        },
        ProjectiveSymmetry {
            name: "A2",
            block: [[a, a], [1.0, -a]],
        },
        ProjectiveSymmetry {
            name: "A3",
            block: [[1.0, -a], [-1.0, -1.0]],
        },
    ]
}

/// True when two 2×2 matrices agree up to a nonzero scalar.
pub fn projectively_equal(m: &[[f64; 2]; 2], n: &[[f64; 2]; 2], tol: f64) -> bool {
    let mv = [m[0][0], m[0][1], m[1][0], m[1][1]];
    let nv = [n[0][0], n[0][1], n[1][0], n[1][1]];
    let k = (0..4)
        .max_by(|&i, &j| nv[i].abs().total_cmp(&nv[j].abs()))
        .unwrap();
    if nv[k] == 0.0 {
        return false;
    }
    let s = mv[k] / nv[k];
    let scale = mv.iter().map(|x| x.abs()).fold(0.0, f64::max);
    (0..4).all(|i| (mv[i] - s * nv[i]).abs() <= tol * scale)
}

/// Cross-ratio (z₁,z₂;z₃,z₄) on ℝ ∪ {∞}.
pub fn cross_ratio(z: [ExtReal; 4]) -> f64 {
    // (z1−z3)(z2−z4) / ((z1−z4)(z2−z3)), with factors containing ∞ dropped
    let diff = |i: usize, j: usize| match (z[i], z[j]) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => Some(x - y),
        _ => None,
    };
    let num = [diff(0, 2), diff(1, 3)];
    let den = [diff(0, 3), diff(1, 2)];
    let prod = |v: [Option<f64>; 2]| v.iter().flatten().product::<f64>();
    prod(num) / prod(den)
}

/// ψ(r, θ) = −i·r·e^{−iθ} / (1 + √(1+r²)).
pub fn infinity_chart_psi(r: f64, theta: f64) -> Result<C64> {
    if !(r >= 0.0) {
        return Err(Error::Precondition("ψ needs r ≥ 0".into()));
    }
    Ok(C64::new(0.0, -1.0) * C64::from_polar(r, -theta) / (1.0 + (1.0 + r * r).sqrt()))
}

/// k(r) = r / (1 + √(1+r²)) = |ψ(r, θ)|.
pub fn k_radius(r: f64) -> f64 {
    r / (1.0 + (1.0 + r * r).sqrt())
}


#[cfg(test)]
mod threshold_tests {
    use super::*;

    // at b₀ the residual quadratic D/(λ−λ₀)² acquires a double root
    fn residual_discriminant(a: f64, l0: f64, b: f64) -> f64 {
        let fam = to_quartic(a, l0, b).unwrap();
        let d = fam.d_poly();
        let c: Vec<f64> = d.coeffs().iter().map(|z| z.re).collect();
        // divide by (λ−λ₀)² = λ² − 2λ₀λ + λ₀² from the top
        let q2 = c[4];
        let q1 = c[3] + 2.0 * l0 * q2;
        let q0 = c[2] + 2.0 * l0 * q1 - l0 * l0 * q2;
        q1 * q1 - 4.0 * q0 * q2
    }

    #[test]
    fn threshold_on_r1_fiber() {
        let tol = Tolerances::default();
        let t = b_threshold(1.0, 2.0, &tol).unwrap();
        assert!(t.b0 > 0.0 && t.b0 < 2.0);
        assert!(residual_discriminant(1.0, 2.0, t.b0).abs() < 1e-4);
        assert!(!passes(1.0, 2.0, t.b0 - 0.01, &tol).unwrap());
        assert!(passes(1.0, 2.0, t.b0 + 0.01, &tol).unwrap());
    }
}
