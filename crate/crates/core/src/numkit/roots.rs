//! Simultaneous (Aberth) root finding and multiplicity clustering.

use super::poly::Poly;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const MAX_ITER: usize = 1500;
const RESTARTS: usize = 4;

/// Distinct roots with multiplicities.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet {
    pub roots: Vec<(C64, usize)>,
    /// Largest distance from each cluster's raw members to its centre;
    /// zero for simple roots.
    pub radii: Vec<f64>,
    /// Relative clustering radius that produced this set.
    pub tolerance: f64,
}

impl RootSet {
    /// Multiple roots that merged only through the derivative test: wider
    /// than the clustering radius, so not resolved as multiple.
    pub fn loose_clusters(&self) -> Vec<(C64, usize, f64)> {
        self.roots
            .iter()
            .zip(&self.radii)
            .filter(|((z, m), &r)| *m > 1 && r > self.tolerance * (1.0 + z.norm()))
            .map(|(&(z, m), &r)| (z, m, r))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.1).sum()
    }

    /// Roots whose imaginary part is within the clustering radius.
    pub fn real_roots(&self) -> Vec<(f64, usize)> {
        self.roots
            .iter()
            .filter(|(z, _)| z.im.abs() <= self.tolerance * (1.0 + z.norm()))
            .map(|(z, m)| (z.re, *m))
            .collect()
    }

    /// Expanded monic polynomial Π (x − rᵢ)^{mᵢ}.
    pub fn reconstruct(&self) -> Poly {
        let expanded: Vec<C64> = self
            .roots
            .iter()
            .flat_map(|&(z, m)| std::iter::repeat_n(z, m))
            .collect();
        Poly::from_roots(&expanded)
    }
}

/// p(z)/p'(z), evaluated through the reversed polynomial when |z| > 1 so
/// that large roots do not overflow.
fn newton_ratio(p: &Poly, z: C64) -> C64 {
    let n = p.degree() as f64;
    if z.norm() <= 1.0 {
        let (v, d) = p.eval_with_derivative(z);
        if d == C64::new(0.0, 0.0) {
            return if v == C64::new(0.0, 0.0) {
                v
            } else {
                C64::new(f64::INFINITY, 0.0)
            };
        }
        return v / d;
    }
    let y = z.inv();
    let mut r = C64::new(0.0, 0.0);
    let mut dr = C64::new(0.0, 0.0);
    for &c in p.coeffs().iter() {
        dr = dr * y + r;
        r = r * y + c;
    }
    // p(z) = z^n r(y), p'(z) = z^{n-1} (n r(y) - y r'(y))
    let denom = r * n - y * dr;
    if denom == C64::new(0.0, 0.0) {
        return C64::new(0.0, 0.0);
    }
    z * r / denom
}

fn relative_residual(p: &Poly, z: C64) -> f64 {
    let scale = p.magnitude_at(z);
    if scale == 0.0 {
        return 0.0;
    }
    if z.norm() <= 1.0 {
        p.eval(z).norm() / scale
    } else {
        let y = z.inv();
        let mut r = C64::new(0.0, 0.0);
        let mut m = 0.0;
        for &c in p.coeffs().iter() {
            r = r * y + c;
            m = m * y.norm() + c.norm();
        }
        if m == 0.0 {
            0.0
        } else {
            r.norm() / m
        }
    }
}

fn initial_guesses(p: &Poly, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let n = p.degree() as usize;
    let lc = p.leading().norm();
    // Cauchy-style radius: geometric mean of |a_0/a_n| and a crude upper bound.
    let gm = (p.coeff(0).norm() / lc).powf(1.0 / n as f64);
    let ub = 1.0
        + p.coeffs()[..n]
            .iter()
            .map(|c| c.norm() / lc)
            .fold(0.0, f64::max);
    let radius = if gm > 0.0 && gm.is_finite() {
        gm.min(ub)
    } else {
        1.0
    };
    let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    (0..n)
        .map(|k| {
            let t = phase + std::f64::consts::TAU * k as f64 / n as f64;
            let jitter = 1.0 + 0.1 * (rng.random::<f64>() - 0.5);
            C64::from_polar(radius * jitter, t)
        })
        .collect()
}

fn aberth_once(p: &Poly, mut z: Vec<C64>) -> (Vec<C64>, bool) {
    let n = z.len();
    let eps = f64::EPSILON;
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(p, z[i]);
            if !ratio.re.is_finite() || !ratio.im.is_finite() {
                // stationary point of p: nudge and retry
                let bump = C64::new(1e-3, 1e-3) * (1.0 + z[i].norm());
                z[i] += bump;
                all = false;
                continue;
            }
            let mut s = C64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d != C64::new(0.0, 0.0) {
                        s += d.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let w = if denom == C64::new(0.0, 0.0) {
                ratio
            } else {
                ratio / denom
            };
            z[i] -= w;
            let small_step = w.norm() <= 4.0 * eps * (1.0 + z[i].norm());
            let small_res = relative_residual(p, z[i]) <= 8.0 * eps * n as f64;
            if small_step || small_res {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return (z, true);
        }
    }
    (z, false)
}

/// All roots of `p` (with repetition), no clustering.
pub fn aberth_roots(p: &Poly) -> Result<Vec<C64>> {
    let deg = p.degree();
    if deg < 1 {
        return Err(Error::Precondition("root finding needs degree ≥ 1".into()));
    }
    // exact zero roots first
    let zeros = p
        .coeffs()
        .iter()
        .take_while(|c| **c == C64::new(0.0, 0.0))
        .count();
    let q = Poly::new(p.coeffs()[zeros..].to_vec());
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    match q.degree() {
        0 => return Ok(out),
        1 => {
            out.push(-q.coeff(0) / q.coeff(1));
            return Ok(out);
        }
        _ => {}
    }
    let q = q.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0fab);
    let mut best: Option<(Vec<C64>, f64)> = None;
    for _ in 0..RESTARTS {
        let (z, ok) = aberth_once(&q, initial_guesses(&q, &mut rng));
        let worst = z
            .iter()
            .map(|&r| relative_residual(&q, r))
            .fold(0.0, f64::max);
        if ok {
            out.extend(z);
            return Ok(out);
        }
        if best.as_ref().is_none_or(|b| worst < b.1) {
            best = Some((z, worst));
        }
    }
    let (z, worst) = best.expect("at least one restart ran");
    // slow convergence near clusters still leaves usable roots
    if worst <= 1e-6 {
        out.extend(z);
        return Ok(out);
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER * RESTARTS,
        residual: worst,
    })
}

/// Roots with multiplicities.
///
/// Roots closer than `tol.root_cluster·(1+|r|)` always merge. Wider groups
/// (a 4-fold root computed in double precision spreads to roughly 1e−4)
/// merge when the low-order Taylor coefficients vanish at the refined
/// centroid.
pub fn complex_roots(p: &Poly, tol: &Tolerances) -> Result<RootSet> {
    let raw = aberth_roots(p)?;
    let (clusters, radii): (Vec<_>, Vec<_>) = cluster_roots(p, &raw, tol)
        .into_iter()
        .map(|(z, m, r)| ((z, m), r))
        .unzip();
    for &(z, _) in &clusters {
        let res = relative_residual(p, z);
        if res > tol.general.max(1e-8) {
            return Err(Error::NoConvergence {
                iterations: MAX_ITER,
                residual: res,
            });
        }
    }
    Ok(RootSet {
        roots: clusters,
        radii,
        tolerance: tol.root_cluster,
    })
}

fn derivative_test(p: &Poly, c: C64, m: usize, eta: f64) -> bool {
    (0..m).all(|k| {
        let (v, mag) = p.taylor_coeff(c, k);
        v.norm() <= eta * mag.max(f64::MIN_POSITIVE)
    })
}

/// Newton on p^{(m−1)}, which has a simple root at an m-fold root of p.
fn refine_centroid(p: &Poly, c: C64, m: usize) -> C64 {
    let mut d = p.clone();
    for _ in 0..(m - 1) {
        d = d.derivative();
    }
    let mut z = c;
    for _ in 0..8 {
        let (v, dv) = d.eval_with_derivative(z);
        if dv == C64::new(0.0, 0.0) {
            break;
        }
        let step = v / dv;
        z -= step;
        if step.norm() <= 1e-15 * (1.0 + z.norm()) {
            break;
        }
    }
    // a refinement that wanders off the cluster is discarded
    if (z - c).norm() <= 1e-3 * (1.0 + c.norm()) {
        z
    } else {
        c
    }
}

/// Clusters as (centre, multiplicity, radius of the raw members).
pub(crate) fn cluster_roots(p: &Poly, raw: &[C64], tol: &Tolerances) -> Vec<(C64, usize, f64)> {
    let n = raw.len();
    let mut used = vec![false; n];
    let mut out: Vec<(C64, usize, f64)> = Vec::new();
    for i in 0..n {
        if used[i] {
            continue;
        }
        let gather = 0.05 * (1.0 + raw[i].norm());
        let mut cand: Vec<(f64, usize)> = (0..n)
            .filter(|&j| !used[j])
            .map(|j| ((raw[j] - raw[i]).norm(), j))
            .filter(|(d, _)| *d <= gather)
            .collect();
        cand.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut chosen = (raw[i], 1usize, vec![i]);
        for m in (2..=cand.len()).rev() {
            let members: Vec<usize> = cand[..m].iter().map(|c| c.1).collect();
            let c = members.iter().map(|&j| raw[j]).sum::<C64>() / m as f64;
            let diam = members
                .iter()
                .map(|&j| (raw[j] - c).norm())
                .fold(0.0, f64::max);
            let tight = diam <= tol.root_cluster * (1.0 + c.norm());
            let z = refine_centroid(p, c, m);
            if tight || derivative_test(p, z, m, tol.root_derivative) {
                chosen = (z, m, members);
                break;
            }
        }
        for &j in &chosen.2 {
            used[j] = true;
        }
        let radius = chosen
            .2
            .iter()
            .map(|&j| (raw[j] - chosen.0).norm())
            .fold(0.0, f64::max);
        out.push((chosen.0, chosen.1, if chosen.1 > 1 { radius } else { 0.0 }));
    }
    out
}
