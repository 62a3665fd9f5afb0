use super::{line_distance, unit, Bitangent};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkit::singular_values;
use nalgebra::DMatrix;
use serde::Serialize;

/// Whether the eight contact points of two pairs of bitangents lie on one
/// conic: the 8×6 matrix of quadratic monomials has rank ≤ 5.
///
/// Identical pairs are trivially syzygetic. Pairs sharing exactly one line
/// are rejected, and a pair with coincident contact points is
/// indeterminate.
pub fn syzygy_test(
    pair1: (&Bitangent, &Bitangent),
    pair2: (&Bitangent, &Bitangent),
    tol: &Tolerances,
) -> Result<bool> {
    let same = |a: &Bitangent, b: &Bitangent| line_distance(&a.line, &b.line) <= tol.line_dedup;
    let lines = [pair1.0, pair1.1, pair2.0, pair2.1];
    if same(lines[0], lines[1]) || same(lines[2], lines[3]) {
        return Err(Error::Precondition(
            "a pair must consist of two distinct lines".into(),
        ));
    }
    let shared = [(0, 2), (0, 3), (1, 2), (1, 3)]
        .iter()
        .filter(|&&(i, j)| same(lines[i], lines[j]))
        .count();
    match shared {
        0 => {}
        2 => return Ok(true),
        _ => return Err(Error::Precondition("pairs share exactly one line".into())),
    }
    if lines
        .iter()
        .any(|b| line_distance(&b.tangency[0], &b.tangency[1]) <= 1e-6)
    {
        return Err(Error::Indeterminate(
            "four-fold contact: coincident tangency points".into(),
        ));
    }
    Ok(conic_rank_defect(&lines, tol))
}

fn conic_rank_defect(lines: &[&Bitangent; 4], tol: &Tolerances) -> bool {
    let m = DMatrix::from_fn(8, 6, |row, col| {
        let p = unit(&lines[row / 2].tangency[row % 2]);
        let [i, j] = [[0, 0], [1, 1], [2, 2], [0, 1], [0, 2], [1, 2]][col];
        p[i] * p[j]
    });
    let sv = singular_values(&m);
    sv[5] <= tol.syzygy * sv[0]
}

/// The 378 pairs of a 28-line catalog grouped into Steiner complexes.
#[derive(Debug, Clone, Serialize)]
pub struct SteinerPartition {
    /// Each class lists pairs (i, j), i < j, of catalog indices.
    pub classes: Vec<Vec<(usize, usize)>>,
}

impl SteinerPartition {
    pub fn class_of(&self, pair: (usize, usize)) -> Option<usize> {
        let key = (pair.0.min(pair.1), pair.0.max(pair.1));
        self.classes.iter().position(|c| c.contains(&key))
    }
}

/// Partition the pairs by the syzygy relation and check that it is an
/// equivalence with 63 classes of 6.
pub fn steiner_partition(lines: &[Bitangent], tol: &Tolerances) -> Result<SteinerPartition> {
    if lines.len() != 28 {
        return Err(Error::Precondition(format!(
            "a smooth catalog has 28 lines, got {}",
            lines.len()
        )));
    }
    if lines
        .iter()
        .any(|b| line_distance(&b.tangency[0], &b.tangency[1]) <= 1e-6)
    {
        return Err(Error::Indeterminate(
            "catalog has a line with four-fold contact".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = (0..28)
        .flat_map(|i| ((i + 1)..28).map(move |j| (i, j)))
        .collect();
    let n = pairs.len();
    let mut related = vec![Vec::new(); n];
    for a in 0..n {
        for b in (a + 1)..n {
            let (p, q) = (pairs[a], pairs[b]);
            if p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1 {
                continue;
            }
            let four = [&lines[p.0], &lines[p.1], &lines[q.0], &lines[q.1]];
            if conic_rank_defect(&four, tol) {
                related[a].push(b);
                related[b].push(a);
            }
        }
    }
    let mut class_id = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if class_id[start] != usize::MAX {
            continue;
        }
        let mut members = vec![start];
        members.extend(&related[start]);
        members.sort_unstable();
        // transitivity: every member relates to every other
        for &x in &members {
            for &y in &members {
                if x != y && !related[x].contains(&y) {
                    return Err(Error::Verification(format!(
                        "syzygy is not transitive on pairs {:?}, {:?}, {:?}",
                        pairs[start], pairs[x], pairs[y]
                    )));
                }
            }
            if class_id[x] != usize::MAX {
                return Err(Error::Verification(format!(
                    "pair {:?} lies in two classes",
                    pairs[x]
                )));
            }
        }
        for &x in &members {
            class_id[x] = classes.len();
        }
        classes.push(members);
    }
    let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
    if classes.len() != 63 || sizes.iter().any(|&s| s != 6) {
        return Err(Error::Verification(format!(
            "{} classes with sizes {:?}",
            classes.len(),
            sizes
        )));
    }
    Ok(SteinerPartition {
        classes: classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| pairs[i]).collect())
            .collect(),
    })
}
