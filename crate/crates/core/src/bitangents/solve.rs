//! Elimination in an affine chart of the dual plane.
//!
//! In coordinates X = U·X′ a line is y′ = m·x′ + k, and the restriction
//! g(x) = F′(x, mx + k, 1) = Σ cₙ(m,k)xⁿ is a bitangent iff
//! g = c₄(x² + px + r)². Eliminating p and r from the x³ and x²
//! coefficients leaves
//!
//! ```text
//! E₁ = 8c₁c₄² − 4c₂c₃c₄ + c₃³,   E₂ = 64c₀c₄³ − (4c₂c₄ − c₃²)²,
//! ```
//!
//! whose resultant in k is a univariate polynomial in m. Spurious roots
//! (c₄ = c₃ = 0) are removed by Newton polishing on the full coefficient
//! system and the two-double-roots filter.

use super::{line_basis, push_unique, unit, verify_line, Bitangent, Point};
use crate::config::Tolerances;
use crate::error::Result;
use crate::forms::Ternary;
use crate::numkit::{aberth_roots, resultant, BiPoly, Poly, Var};
use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0xb17a_9e47;
const CHARTS: usize = 3;
const EXTRA_CHARTS: usize = 3;

type Dense = Vec<Vec<C64>>;

fn zeros(n: usize) -> Dense {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

fn dmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len() + b.len() - 1;
    let mut out = zeros(n);
    for (i, ra) in a.iter().enumerate() {
        for (j, &x) in ra.iter().enumerate() {
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for (k, rb) in b.iter().enumerate() {
                for (l, &y) in rb.iter().enumerate() {
                    out[i + k][j + l] += x * y;
                }
            }
        }
    }
    out
}

fn dlin(terms: &[(f64, &Dense)]) -> Dense {
    let n = terms.iter().map(|t| t.1.len()).max().unwrap_or(1);
    let mut out = zeros(n);
    for (s, d) in terms {
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out[i][j] += v * *s;
            }
        }
    }
    out
}

fn ddiff(a: &Dense, var: Var) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            match var {
                Var::X if i > 0 => out[i - 1][j] += v * i as f64,
                Var::Y if j > 0 => out[i][j - 1] += v * j as f64,
                _ => {}
            }
        }
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients of the restricted quartic as polynomials in (m, k), with
/// their partial derivatives, in a fixed chart.
pub(crate) struct ChartSystem {
    pub(crate) u: [[C64; 3]; 3],
    c: [Dense; 5],
    dm: [Dense; 5],
    dk: [Dense; 5],
}

impl ChartSystem {
    pub(crate) fn new(form: &Ternary, u: [[C64; 3]; 3]) -> Self {
        let f = form.substitute(&u);
        let mut c: [Dense; 5] = std::array::from_fn(|_| zeros(5));
        for (e, &coef) in f.terms() {
            let (i, j) = (e[0] as usize, e[1] as usize);
            for a in 0..=j {
                c[i + a][a][j - a] += coef * binomial(j, a);
            }
        }
        let dm = std::array::from_fn(|n| ddiff(&c[n], Var::X));
        let dk = std::array::from_fn(|n| ddiff(&c[n], Var::Y));
        Self { u, c, dm, dk }
    }

    /// Chart whose line y′ = 0 is `line`, with the point at x′ = ∞ chosen
    /// away from the curve.
    pub(crate) fn around(form: &Ternary, line: &[C64; 3]) -> Self {
        let (a, b) = line_basis(line);
        let n = unit(line).map(|c| c.conj());
        let mut best = (f64::NEG_INFINITY, a, b);
        for phi in [0.0f64, 0.5, 1.0, 1.6, 2.2, 2.7] {
            let (s, co) = phi.sin_cos();
            let a1: Point = std::array::from_fn(|i| a[i] * co + b[i] * s);
            let b1: Point = std::array::from_fn(|i| b[i] * co - a[i] * s);
            let v = form.eval(&a1).norm();
            if v > best.0 {
                best = (v, a1, b1);
            }
        }
        let (_, a1, b1) = best;
        let u = std::array::from_fn(|i| [a1[i], n[i], b1[i]]);
        Self::new(form, u)
    }

    fn eval(d: &Dense, m: C64, k: C64) -> C64 {
        d.iter().rev().fold(C64::new(0.0, 0.0), |acc, row| {
            acc * m + row.iter().rev().fold(C64::new(0.0, 0.0), |a, &v| a * k + v)
        })
    }

    pub(crate) fn coeffs(&self, m: C64, k: C64) -> [C64; 5] {
        std::array::from_fn(|n| Self::eval(&self.c[n], m, k))
    }

    /// (m, k) of a line given in original coordinates; `None` when the line
    /// is vertical in this chart.
    pub(crate) fn params_of(&self, line: &[C64; 3]) -> Option<(C64, C64)> {
        // u′ = Uᵀu
        let up: [C64; 3] = std::array::from_fn(|j| (0..3).map(|i| self.u[i][j] * line[i]).sum());
        (up[1].norm() > 1e-12 * super::norm3(&up)).then(|| (-up[0] / up[1], -up[2] / up[1]))
    }

    /// Line in original coordinates: u = Ū·(−m, 1, −k).
    pub(crate) fn line_of(&self, m: C64, k: C64) -> [C64; 3] {
        let up = [-m, C64::new(1.0, 0.0), -k];
        unit(&std::array::from_fn(|i| {
            (0..3).map(|j| self.u[i][j].conj() * up[j]).sum()
        }))
    }

    /// Initial (p, r) from the x³ and x² coefficients.
    pub(crate) fn square_params(&self, m: C64, k: C64) -> Option<(C64, C64)> {
        let c = self.coeffs(m, k);
        let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if c[4].norm() <= 1e-10 * scale {
            return None;
        }
        let p = c[3] / (c[4] * 2.0);
        Some((p, (c[2] / c[4] - p * p) / 2.0))
    }

    /// Newton on cₙ(m,k) − c₄(m,k)·sₙ(p,r) = 0 for n = 0..3, where
    /// (x² + px + r)² = x⁴ + s₃x³ + s₂x² + s₁x + s₀. `None` unless the steps
    /// shrink to rounding level, or stall near it with a rounding-level
    /// residual (ill-conditioned, nearly coincident solutions).
    pub(crate) fn polish(&self, z0: [C64; 4]) -> Option<[C64; 4]> {
        let mut z = Vector4::from(z0);
        for _ in 0..60 {
            let (m, k, p, r) = (z[0], z[1], z[2], z[3]);
            let c = self.coeffs(m, k);
            let cm: [C64; 5] = std::array::from_fn(|n| Self::eval(&self.dm[n], m, k));
            let ck: [C64; 5] = std::array::from_fn(|n| Self::eval(&self.dk[n], m, k));
            let two = C64::new(2.0, 0.0);
            let s = [r * r, two * p * r, p * p + two * r, two * p];
            let sp = [C64::new(0.0, 0.0), two * r, two * p, two];
            let sr = [two * r, two * p, two, C64::new(0.0, 0.0)];
            let e = Vector4::from_fn(|n, _| c[n] - c[4] * s[n]);
            let j = Matrix4::from_fn(|n, col| match col {
                0 => cm[n] - cm[4] * s[n],
                1 => ck[n] - ck[4] * s[n],
                2 => -c[4] * sp[n],
                _ => -c[4] * sr[n],
            });
            let step = j.lu().solve(&e)?;
            z -= step;
            if !z.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
                return None;
            }
            let size = 1.0 + z.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let step_norm = step.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max)
                * (1.0 + s.iter().map(|v| v.norm()).fold(0.0, f64::max));
            let stalled = step_norm <= 1e-9 * size && e.norm() <= 1e-13 * scale;
            if step_norm <= 1e-13 * size || stalled {
                return Some([z[0], z[1], z[2], z[3]]);
            }
        }
        None
    }

    fn residual_equations(&self) -> (BiPoly, BiPoly) {
        let c = &self.c;
        let c44 = dmul(&c[4], &c[4]);
        let c34 = dmul(&c[3], &c[4]);
        let e1 = dlin(&[
            (8.0, &dmul(&c[1], &c44)),
            (-4.0, &dmul(&c[2], &c34)),
            (1.0, &dmul(&c[3], &dmul(&c[3], &c[3]))),
        ]);
        let w = dlin(&[(4.0, &dmul(&c[2], &c[4])), (-1.0, &dmul(&c[3], &c[3]))]);
        let e2 = dlin(&[
            (64.0, &dmul(&c[0], &dmul(&c44, &c[4]))),
            (-1.0, &dmul(&w, &w)),
        ]);
        (BiPoly::new(e1), BiPoly::new(e2))
    }
}

pub(crate) fn random_unitary(rng: &mut ChaCha8Rng) -> [[C64; 3]; 3] {
    let g = DMatrix::from_fn(3, 3, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let q = g.qr().q();
    std::array::from_fn(|i| std::array::from_fn(|j| q[(i, j)]))
}

fn k_polynomial(e: &BiPoly, m: C64) -> Poly {
    let ny = e.c.iter().map(|r| r.len()).max().unwrap_or(0);
    let coeffs = (0..ny)
        .map(|j| {
            e.c.iter().rev().fold(C64::new(0.0, 0.0), |acc, row| {
                acc * m + row.get(j).copied().unwrap_or_default()
            })
        })
        .collect();
    Poly::new(coeffs).trimmed(1e-13)
}

pub(crate) struct Found {
    pub(crate) lines: Vec<Bitangent>,
    /// Squareness residuals of polished candidates that failed verification.
    pub(crate) rejected: Vec<f64>,
}

/// Bitangents with two distinct smooth contact points, as verified lines.
/// Runs three random charts and keeps the union; if fewer than 28 lines
/// are found, up to three more charts are tried.
pub(crate) fn smooth_bitangents(form: &Ternary, tol: &Tolerances) -> Result<Found> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut found = Found {
        lines: Vec::new(),
        rejected: Vec::new(),
    };
    for chart in 0..CHARTS + EXTRA_CHARTS {
        if chart >= CHARTS && found.lines.len() >= 28 {
            break;
        }
        let sys = ChartSystem::new(form, random_unitary(&mut rng));
        let (e1, e2) = sys.residual_equations();
        let Ok(r) = resultant(&e1, &e2, Var::Y) else {
            continue;
        };
        if r.degree() < 1 {
            continue;
        }
        let Ok(ms) = aberth_roots(&r) else { continue };
        for m in ms {
            let mut ks = Vec::new();
            for e in [&e1, &e2] {
                let kp = k_polynomial(e, m);
                if kp.degree() >= 1 {
                    ks.extend(aberth_roots(&kp).unwrap_or_default());
                }
            }
            for k in ks {
                let Some((p, r)) = sys.square_params(m, k) else {
                    continue;
                };
                let Some(z) = sys.polish([m, k, p, r]) else {
                    continue;
                };
                let line = sys.line_of(z[0], z[1]);
                if found
                    .lines
                    .iter()
                    .any(|b| super::line_distance(&b.line, &line) <= tol.line_dedup)
                {
                    continue;
                }
                match verify_line(form, &line, tol) {
                    Ok(b) => {
                        push_unique(&mut found.lines, b, tol);
                    }
                    Err(res) => found.rejected.push(res),
                }
            }
        }
    }
    Ok(found)
}
