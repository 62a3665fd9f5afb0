use super::family::{ProjPoint, QuarticFamily};
use crate::config::Tolerances;
use crate::error::Result;
use crate::numkit::complex_roots;
use num_complex::Complex64 as C64;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Status {
    Holds,
    Fails(String),
    Indeterminate(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionAReport {
    pub status: Status,
    pub lambda0: Option<f64>,
    /// Roots of D(λ,1) with multiplicities; a root at λ = ∞ is listed
    /// separately.
    pub roots: Vec<(C64, usize)>,
    pub infinity_multiplicity: usize,
    /// min over the scanned part of I₂ ∪ I₄ of Q(λ,1) − √f(λ), away from λ₀.
    pub min_margin: f64,
}

impl ConditionAReport {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Multiplicity of λ = ∞ as a root of the homogeneous D.
fn infinity_multiplicity(fam: &QuarticFamily) -> usize {
    let d = fam.d_poly();
    let deg = d.degree().max(0) as usize;
    4usize.saturating_sub(deg)
}

fn scan_margin(fam: &QuarticFamily, lambda0: Option<f64>, guard: f64) -> f64 {
    let mut min = f64::INFINITY;
    let mut probe = |l: f64| {
        if let Some(l0) = lambda0 {
            if (l - l0).abs() <= guard * (1.0 + l0.abs()) {
                return;
            }
        }
        let f = fam.f_at(l);
        if f >= 0.0 {
            min = min.min(fam.q_at(l) - f.sqrt());
        }
    };
    let n = 2000;
    for k in 0..=n {
        probe(-1.0 + k as f64 / n as f64);
    }
    // (a, ∞) through λ = a + tan(s)
    for k in 0..=n {
        let s = std::f64::consts::FRAC_PI_2 * k as f64 / (n + 1) as f64;
        probe(fam.a + s.tan());
    }
    min
}

/// Decide Condition (A): D ≥ 0 on ℝ ∪ {∞}, a unique real root λ₀ of
/// multiplicity exactly two lying in (a, ∞), and Q(λ,1) > √f(λ) wherever
/// f ≥ 0 except at λ₀.
pub fn condition_a_check(fam: &QuarticFamily, tol: &Tolerances) -> Result<ConditionAReport> {
    let inf_mult = infinity_multiplicity(fam);
    let d = fam.d_poly();
    let set = if d.degree() >= 1 {
        Some(complex_roots(&d, tol)?)
    } else {
        None
    };
    let roots = set.as_ref().map(|s| s.roots.clone()).unwrap_or_default();
    let mut report = ConditionAReport {
        status: Status::Holds,
        lambda0: None,
        roots: roots.clone(),
        infinity_multiplicity: inf_mult,
        min_margin: f64::NAN,
    };
    let rc = |z: C64| tol.root_cluster * (1.0 + z.norm());

    // guard band: multiple roots too wide to resolve, nearly-real roots and
    // nearly-merged clusters
    if let Some((z, m, r)) = set
        .as_ref()
        .and_then(|s| s.loose_clusters().first().copied())
    {
        report.status = Status::Indeterminate(format!(
            "root {z} of multiplicity {m} has cluster radius {r:e}"
        ));
        return Ok(report);
    }
    for &(z, _) in &roots {
        let im = z.im.abs();
        if im > rc(z) && im <= tol.guard_band * rc(z) {
            report.status = Status::Indeterminate(format!(
                "root {z} is within the guard band of the real axis"
            ));
            return Ok(report);
        }
    }
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let dist = (roots[i].0 - roots[j].0).norm();
            if dist <= 2.0 * tol.guard_band * rc(roots[i].0) {
                report.status = Status::Indeterminate(format!(
                    "roots {} and {} are within the guard band of merging",
                    roots[i].0, roots[j].0
                ));
                return Ok(report);
            }
        }
    }

    let mut real: Vec<(f64, usize)> = roots
        .iter()
        .filter(|(z, _)| z.im.abs() <= rc(*z))
        .map(|(z, m)| (z.re, *m))
        .collect();
    real.sort_by(|a, b| a.0.total_cmp(&b.0));
    if inf_mult > 0 {
        report.status = Status::Fails(format!("D vanishes at λ = ∞ with multiplicity {inf_mult}"));
        return Ok(report);
    }
    if real.len() != 1 {
        report.status = Status::Fails(format!(
            "D has {} distinct real roots, expected exactly one",
            real.len()
        ));
        return Ok(report);
    }
    let (l0, m0) = real[0];
    report.lambda0 = Some(l0);
    if m0 != 2 {
        report.status = Status::Fails(format!("real root {l0} has multiplicity {m0}, expected 2"));
        return Ok(report);
    }
    // a single real root of even order: the sign elsewhere is that of D off the root
    if fam.d_at(l0 + 1.0) < 0.0 || fam.b * fam.b < 0.0 {
        report.status = Status::Fails("D is negative away from its real root".into());
        return Ok(report);
    }
    if !(l0 > fam.a) {
        report.status = Status::Fails(format!("λ₀ = {l0} does not lie in (a, ∞)"));
        return Ok(report);
    }
    // With Q² > f off λ₀, Q keeps one sign on [−1, 0] and on [a, ∞]; it must be positive.
    let probes = [-1.0, -0.5, 0.0, fam.a, l0, l0 + 1.0];
    if let Some(&bad) = probes.iter().find(|&&l| fam.q_at(l) <= 0.0) {
        report.status = Status::Fails(format!("Q(λ,1) ≤ 0 at λ = {bad} where f ≥ 0"));
        report.min_margin = scan_margin(fam, Some(l0), tol.critical_guard);
        return Ok(report);
    }
    if fam.b <= 0.0 {
        report.status = Status::Fails("Q(1,0) = b ≤ 0 at λ = ∞".into());
        return Ok(report);
    }
    report.min_margin = scan_margin(fam, Some(l0), 1e-3);
    if report.min_margin < 0.0 {
        report.status = Status::Indeterminate(format!(
            "sign argument passed but the scan found Q − √f = {:e}",
            report.min_margin
        ));
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    OrdinaryDoublePoint,
    EllipticE7,
    NonODPDoublePoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct Singularity {
    pub point: ProjPoint,
    pub kind: SingularityKind,
    /// Multiplicity of the corresponding root of D (0 for the two Ẽ₇ points).
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SingularityReport {
    pub points: Vec<Singularity>,
}

impl SingularityReport {
    pub fn odps(&self) -> impl Iterator<Item = &Singularity> {
        self.points
            .iter()
            .filter(|s| s.kind == SingularityKind::OrdinaryDoublePoint)
    }
}

/// Singular points: P_∞, P̄_∞ always, plus one point (λ:1:0:0) (or
/// (1:0:0:0) at infinity) for every multiple root of D.
pub fn classify_singularities(fam: &QuarticFamily, tol: &Tolerances) -> Result<SingularityReport> {
    let mut points = vec![
        Singularity {
            point: ProjPoint::p_infinity(),
            kind: SingularityKind::EllipticE7,
            multiplicity: 0,
        },
        Singularity {
            point: ProjPoint::p_infinity_bar(),
            kind: SingularityKind::EllipticE7,
            multiplicity: 0,
        },
    ];
    let kind = |m: usize| {
        if m == 2 {
            SingularityKind::OrdinaryDoublePoint
        } else {
            SingularityKind::NonODPDoublePoint
        }
    };
    let d = fam.d_poly();
    if d.degree() >= 1 {
        for (z, m) in complex_roots(&d, tol)?.roots {
            if m >= 2 {
                let z = if z.im.abs() <= tol.root_cluster * (1.0 + z.norm()) {
                    C64::new(z.re, 0.0)
                } else {
                    z
                };
                points.push(Singularity {
                    point: ProjPoint([
                        z,
                        C64::new(1.0, 0.0),
                        C64::new(0.0, 0.0),
                        C64::new(0.0, 0.0),
                    ]),
                    kind: kind(m),
                    multiplicity: m,
                });
            }
        }
    }
    let inf = infinity_multiplicity(fam);
    if inf >= 2 {
        points.push(Singularity {
            point: ProjPoint::real([1.0, 0.0, 0.0, 0.0]),
            kind: kind(inf),
            multiplicity: inf,
        });
    }
    Ok(SingularityReport { points })
}
