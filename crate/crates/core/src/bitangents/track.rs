use super::solve::ChartSystem;
use super::{find_bitangents, line_distance, norm3, verify_line, CurveClass, PlaneQuarticCurve};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::forms::Ternary;
use crate::surface::{classify_plane, plane_section, PlaneChart, PlaneClass, QuarticFamily};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Tracking stops this far before the singular end plane; the limit
/// lines are then matched by nearest neighbour.
const END_GAP: f64 = 1e-7;
/// Past this parameter, tracks that merge end the run instead of failing
/// it: merging is what the limit does.
const ENDGAME: f64 = 0.99;
const MIN_STEP: f64 = 1e-13;

/// The pencil of real planes H(s) = (1 − s)·H₀ + s·H₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanePath {
    pub start: [f64; 4],
    pub end: [f64; 4],
}

impl PlanePath {
    pub fn at(&self, s: f64) -> [f64; 4] {
        std::array::from_fn(|i| (1.0 - s) * self.start[i] + s * self.end[i])
    }

    /// Plane coordinates that vary continuously along the whole path.
    pub fn chart(&self, s: f64) -> PlaneChart {
        PlaneChart::real_frame(&self.at(s), Some(&self.start))
    }

    pub fn curve(&self, fam: &QuarticFamily, s: f64) -> Result<PlaneQuarticCurve> {
        PlaneQuarticCurve::from_section(fam, &self.chart(s))
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end,
            end: self.start,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrackRecord {
    /// Accepted path parameters, starting at 0.
    pub steps: Vec<f64>,
    /// Number of rejected steps that were halved.
    pub halvings: usize,
    pub final_lines: Vec<[C64; 3]>,
    pub limit_class: CurveClass,
    pub limits: Vec<[C64; 3]>,
    /// Index into `limits` for each track.
    pub assignment: Vec<usize>,
    /// Number of tracks ending on each limit line.
    pub cluster_sizes: Vec<usize>,
    /// Largest distance between a track's last line and its limit.
    pub max_limit_distance: f64,
    /// Smallest distance from a track's last line to a limit other than
    /// its own; the assignment is unambiguous when this exceeds
    /// `max_limit_distance`.
    pub min_other_distance: f64,
}

impl TrackRecord {
    /// Cluster sizes in descending order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut v = self.cluster_sizes.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

fn normalized(form: &Ternary) -> Ternary {
    form.scale(C64::new(1.0 / form.norm_inf(), 0.0))
}

/// `v` rescaled by a phase so that ⟨u, v⟩ is real and positive.
fn aligned(u: &[C64; 3], v: &[C64; 3]) -> [C64; 3] {
    let ip: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let phase = if ip.norm() > 0.0 {
        ip.conj() / ip.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    let n = norm3(v);
    v.map(|c| c * phase / n)
}

/// One corrector pass; `None` when some track fails to converge or to
/// verify.
fn advance(
    form: &Ternary,
    prev: &[[C64; 3]],
    older: Option<(&[[C64; 3]], f64)>,
    ratio: f64,
    tol: &Tolerances,
) -> Option<Vec<[C64; 3]>> {
    let mut out = Vec::with_capacity(prev.len());
    for (i, u) in prev.iter().enumerate() {
        let guess = match older {
            Some((o, _)) => {
                let o = aligned(u, &o[i]);
                let n = norm3(u);
                std::array::from_fn(|j| u[j] / n + (u[j] / n - o[j]) * ratio)
            }
            None => *u,
        };
        let sys = ChartSystem::around(form, u);
        let (m, k) = sys.params_of(&guess)?;
        let (p, r) = sys.square_params(m, k)?;
        let z = sys.polish([m, k, p, r])?;
        let line = sys.line_of(z[0], z[1]);
        verify_line(form, &line, tol).ok()?;
        out.push(line);
    }
    Some(out)
}

fn min_gap(lines: &[[C64; 3]]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..lines.len() {
        for j in (i + 1)..lines.len() {
            g = g.min(line_distance(&lines[i], &lines[j]));
        }
    }
    g
}

/// Follow the 28 bitangents of the smooth section H(0) towards the
/// singular section H(1), then match them to its bitangents.
///
/// The step starts at 1/`steps` and is halved until the largest per-step
/// displacement is below half the smallest gap between tracks. Whatever
/// clustering results is reported; the expected patterns are not imposed.
pub fn track_bitangents(
    fam: &QuarticFamily,
    path: &PlanePath,
    steps: usize,
    tol: &Tolerances,
) -> Result<TrackRecord> {
    if steps == 0 {
        return Err(Error::Precondition("at least one step".into()));
    }
    let start_class = classify_plane(fam, path.start, tol)?.class;
    if start_class != PlaneClass::SmoothSection {
        return Err(Error::Precondition(format!(
            "path must start on a smooth section, got {start_class:?}"
        )));
    }
    let end_class = classify_plane(fam, path.end, tol)?.class;
    if !matches!(
        end_class,
        PlaneClass::ContainsLInfinity | PlaneClass::ThroughP0
    ) {
        return Err(Error::Precondition(format!(
            "path must end on a degenerate section, got {end_class:?}"
        )));
    }
    let first = find_bitangents(&path.curve(fam, 0.0)?, tol)?;
    let mut lines: Vec<[C64; 3]> = first.lines.iter().map(|b| b.line).collect();
    let mut older: Option<(Vec<[C64; 3]>, f64)> = None;
    let mut s = 0.0;
    let mut ds = 1.0 / steps as f64;
    let stop = 1.0 - END_GAP;
    let mut record_steps = vec![0.0];
    let mut halvings = 0;
    while s < stop {
        let next = (s + ds).min(stop);
        let h = next - s;
        let form = normalized(&plane_section(fam, &path.chart(next)));
        let prediction = older.as_ref().map(|(o, hprev)| (o.as_slice(), *hprev));
        let ratio = prediction.map_or(0.0, |(_, hp)| h / hp);
        let accepted = advance(&form, &lines, prediction, ratio, tol).filter(|new| {
            let moved = lines
                .iter()
                .zip(new)
                .map(|(a, b)| line_distance(a, b))
                .fold(0.0, f64::max);
            moved < 0.5 * min_gap(new)
        });
        match accepted {
            Some(new) => {
                older = Some((std::mem::replace(&mut lines, new), h));
                s = next;
                record_steps.push(s);
                ds = h * 1.5;
            }
            None => {
                halvings += 1;
                ds = h / 2.0;
                if ds < MIN_STEP {
                    if s >= ENDGAME {
                        break;
                    }
                    return Err(Error::Verification(format!(
                        "bitangent tracks collide near s = {s}"
                    )));
                }
            }
        }
    }
    let limit = find_bitangents(&path.curve(fam, 1.0)?, tol)?;
    let limits: Vec<[C64; 3]> = limit.lines.iter().map(|b| b.line).collect();
    let mut assignment = Vec::with_capacity(lines.len());
    let mut max_limit_distance: f64 = 0.0;
    let mut min_other_distance = f64::INFINITY;
    for u in &lines {
        let mut d: Vec<(usize, f64)> = limits
            .iter()
            .enumerate()
            .map(|(j, l)| (j, line_distance(u, l)))
            .collect();
        d.sort_by(|a, b| a.1.total_cmp(&b.1));
        assignment.push(d[0].0);
        max_limit_distance = max_limit_distance.max(d[0].1);
        if let Some(second) = d.get(1) {
            min_other_distance = min_other_distance.min(second.1);
        }
    }
    let mut cluster_sizes = vec![0; limits.len()];
    for &j in &assignment {
        cluster_sizes[j] += 1;
    }
    Ok(TrackRecord {
        steps: record_steps,
        halvings,
        final_lines: lines,
        limit_class: limit.class,
        limits,
        assignment,
        cluster_sizes,
        max_limit_distance,
        min_other_distance,
    })
}
