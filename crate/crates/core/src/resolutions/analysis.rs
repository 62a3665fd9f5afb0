use super::{h_eval, HFunction, Interval};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::surface::{condition_a_check, QuarticFamily};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LimitTag {
    Zero,
    FinitePositive,
    Infinity,
}

impl LimitTag {
    /// lim h = (lim h′)⁻¹ at the level of tags.
    pub fn reciprocal_matches(self, other: LimitTag) -> bool {
        matches!(
            (self, other),
            (LimitTag::Zero, LimitTag::Infinity)
                | (LimitTag::Infinity, LimitTag::Zero)
                | (LimitTag::FinitePositive, LimitTag::FinitePositive)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalRow {
    pub interval: Interval,
    pub critical_points: Vec<f64>,
    pub left: LimitTag,
    pub right: LimitTag,
}

#[derive(Debug, Clone, Serialize)]
pub struct BehaviorTable {
    pub h: HFunction,
    pub rows: Vec<IntervalRow>,
}

impl BehaviorTable {
    pub fn row(&self, interval: Interval) -> &IntervalRow {
        self.rows
            .iter()
            .find(|r| r.interval == interval)
            .expect("table covers the domain of h")
    }
}

const BASE_GRID: usize = 3000;

fn log_h(fam: &QuarticFamily, h: &HFunction, lambda: f64) -> f64 {
    match h_eval(fam, h, lambda) {
        Ok(v) => v.ln(),
        Err(_) => f64::NAN,
    }
}

/// Grid on an open interval with the finite ends pulled in by `guard`,
/// denser towards both ends.
fn grid(l: f64, r: f64, n: usize, guard: f64) -> Vec<f64> {
    let scale = |x: f64| 1.0 + x.abs();
    let pi = std::f64::consts::PI;
    (1..n)
        .map(|k| {
            let t = k as f64 / n as f64;
            match (l.is_finite(), r.is_finite()) {
                (true, true) => {
                    let (l, r) = (l + guard * scale(l), r - guard * scale(r));
                    l + (r - l) * (1.0 - (pi * t).cos()) / 2.0
                }
                (true, false) => {
                    let l = l + guard * scale(l);
                    l + scale(l) * (pi * t / 2.0).tan()
                }
                (false, true) => {
                    let r = r - guard * scale(r);
                    r - scale(r) * (pi * (1.0 - t) / 2.0).tan()
                }
                (false, false) => unreachable!("no interval is unbounded on both sides"),
            }
        })
        .collect()
}

/// Extremum of a unimodal function on [lo, hi] by golden section.
fn golden(mut lo: f64, mut hi: f64, g: &dyn Fn(f64) -> f64, maximize: bool) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let sign = if maximize { -1.0 } else { 1.0 };
    for _ in 0..200 {
        if hi - lo <= 1e-13 * (1.0 + lo.abs()) {
            break;
        }
        let x1 = hi - r * (hi - lo);
        let x2 = lo + r * (hi - lo);
        if sign * g(x1) < sign * g(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of the discrete derivative of ln h, located by golden section.
fn critical_points(
    fam: &QuarticFamily,
    h: &HFunction,
    l: f64,
    r: f64,
    n: usize,
    guard: f64,
) -> Vec<f64> {
    let xs = grid(l, r, n, guard);
    let gs: Vec<f64> = xs.iter().map(|&x| log_h(fam, h, x)).collect();
    let mut signs: Vec<(usize, f64)> = Vec::new();
    for k in 1..xs.len() {
        let d = gs[k] - gs[k - 1];
        if !d.is_finite() {
            continue;
        }
        let noise = 1e-12 * gs[k].abs().max(1.0);
        if d.abs() > noise {
            signs.push((k, d.signum()));
        }
    }
    let g = |x: f64| log_h(fam, h, x);
    let mut out = Vec::new();
    for w in signs.windows(2) {
        let ((k0, s0), (k1, s1)) = (w[0], w[1]);
        if s0 != s1 {
            let lo = xs[k0 - 1];
            let hi = xs[k1];
            out.push(golden(lo, hi, &g, s0 > 0.0));
        }
    }
    out
}

fn slope_tag(
    fam: &QuarticFamily,
    h: &HFunction,
    end: f64,
    inward: f64,
    decades: (i32, i32),
    tol: &Tolerances,
) -> LimitTag {
    let at = |k: i32| {
        let eps = 10f64.powi(-k);
        let x = if end.is_finite() {
            end + inward * eps * (1.0 + end.abs())
        } else {
            end.signum() / eps
        };
        (eps.ln(), h_eval(fam, h, x))
    };
    let (e0, v0) = at(decades.0);
    let (e1, v1) = at(decades.1);
    match (v0, v1) {
        (_, Err(_)) => LimitTag::Infinity,
        (_, Ok(v)) if v == 0.0 => LimitTag::Zero,
        (Ok(v0), Ok(v1)) => {
            let s = (v1.ln() - v0.ln()) / (e1 - e0);
            if s > 0.1 {
                LimitTag::Zero
            } else if s < -0.1 || v1 > tol.tag_cap {
                LimitTag::Infinity
            } else if v1 < tol.tag_floor {
                LimitTag::Zero
            } else {
                LimitTag::FinitePositive
            }
        }
        (Err(_), Ok(_)) => LimitTag::Infinity,
    }
}

/// Endpoint tag from the log-log slope over the last decades of distance
/// to the end (distance 1/|λ| at infinity), checked against a coarser pair.
fn limit_tag(
    fam: &QuarticFamily,
    h: &HFunction,
    end: f64,
    inward: f64,
    tol: &Tolerances,
) -> Result<LimitTag> {
    let fine = slope_tag(fam, h, end, inward, (8, 10), tol);
    let coarse = slope_tag(fam, h, end, inward, (5, 7), tol);
    if fine != coarse {
        return Err(Error::Indeterminate(format!(
            "{h}: limit tag at {end} flips between {coarse:?} and {fine:?}"
        )));
    }
    Ok(fine)
}

fn rows(
    fam: &QuarticFamily,
    h: &HFunction,
    n: usize,
    lambda0: Option<f64>,
    tol: &Tolerances,
) -> Result<Vec<IntervalRow>> {
    let mut out = Vec::new();
    for interval in h.intervals() {
        let (l, r) = interval.bounds(fam.a);
        let mut crit = Vec::new();
        match lambda0 {
            Some(l0) if l0 > l && l0 < r => {
                crit.extend(critical_points(fam, h, l, l0, n, tol.critical_guard));
                crit.extend(critical_points(fam, h, l0, r, n, tol.critical_guard));
            }
            _ => crit.extend(critical_points(fam, h, l, r, n, 1e-12)),
        }
        out.push(IntervalRow {
            interval,
            critical_points: crit,
            left: limit_tag(fam, h, l, 1.0, tol)?,
            right: limit_tag(fam, h, r, -1.0, tol)?,
        });
    }
    Ok(out)
}

/// Critical points per interval and endpoint limit tags of h. Requires
/// Condition (A); λ₀ is cut out of I₄ for h₀. The critical counts are
/// recomputed on a grid twice as fine and must agree.
pub fn behavior_table(
    fam: &QuarticFamily,
    h: &HFunction,
    tol: &Tolerances,
) -> Result<BehaviorTable> {
    let report = condition_a_check(fam, tol)?;
    if !report.holds() {
        return Err(Error::Precondition(format!(
            "behavior tables need Condition (A): {:?}",
            report.status
        )));
    }
    let lambda0 = if *h == HFunction::H0 {
        report.lambda0
    } else {
        None
    };
    let coarse = rows(fam, h, BASE_GRID, lambda0, tol)?;
    let fine = rows(fam, h, 2 * BASE_GRID, lambda0, tol)?;
    for (c, f) in coarse.iter().zip(&fine) {
        if c.critical_points.len() != f.critical_points.len() {
            return Err(Error::Indeterminate(format!(
                "{h}: critical count on {} changes from {} to {} under refinement",
                c.interval,
                c.critical_points.len(),
                f.critical_points.len()
            )));
        }
    }
    Ok(BehaviorTable { h: *h, rows: fine })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HSample {
    pub lambda: f64,
    pub value: f64,
    pub interval: Interval,
}

/// `samples` abscissae split over the two domain intervals, clustered
/// double-exponentially towards the ends; unbounded ends are cut at a
/// display window. Points on top of −1, 0, a and points where h is not
/// finite are dropped; the number dropped is returned alongside.
pub fn sample_h(
    fam: &QuarticFamily,
    h: &HFunction,
    samples: usize,
) -> Result<(Vec<HSample>, usize)> {
    if samples < 2 {
        return Err(Error::Precondition("need at least two samples".into()));
    }
    let a = fam.a;
    let reach = 4.0 * (1.0 + a);
    let counts = [samples / 2, samples - samples / 2];
    let mut out = Vec::with_capacity(samples);
    let mut dropped = 0;
    let singular = [-1.0, 0.0, a];
    for (interval, n) in h.intervals().into_iter().zip(counts) {
        let (mut l, mut r) = interval.bounds(a);
        if !l.is_finite() {
            l = r - reach;
        }
        if !r.is_finite() {
            r = l + reach;
        }
        for k in 0..n {
            let u = if n == 1 {
                0.0
            } else {
                -3.0 + 6.0 * k as f64 / (n - 1) as f64
            };
            let s = (std::f64::consts::FRAC_PI_2 * u.sinh()).tanh();
            let lambda = l + (r - l) * (1.0 + s) / 2.0;
            let guarded = singular
                .iter()
                .any(|&p| (lambda - p).abs() <= 4.0 * f64::EPSILON * (1.0 + p.abs()));
            match (guarded, h_eval(fam, h, lambda)) {
                (false, Ok(value)) => out.push(HSample {
                    lambda,
                    value,
                    interval,
                }),
                _ => dropped += 1,
            }
        }
    }
    Ok((out, dropped))
}
