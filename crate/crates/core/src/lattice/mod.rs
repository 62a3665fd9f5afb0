//! Integer intersection lattices of the curve configurations that appear in
//! degenerate plane sections: the octagon over l_∞ and the trope fibers.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Self(v)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(i, _)| i)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveConfig {
    pub names: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    /// Real structure as a permutation of component indices.
    pub involution: Vec<usize>,
    pub anticanonical: Option<DivisorClass>,
}

impl CurveConfig {
    fn new(
        names: &[&str],
        edges: &[(usize, usize, i64)],
        selfs: &[i64],
        involution: Vec<usize>,
    ) -> Self {
        let n = names.len();
        let mut matrix = vec![vec![0; n]; n];
        for (i, &s) in selfs.iter().enumerate() {
            matrix[i][i] = s;
        }
        for &(i, j, m) in edges {
            matrix[i][j] = m;
            matrix[j][i] = m;
        }
        Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            matrix,
            involution,
            anticanonical: None,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn class(&self, terms: &[(&str, i64)]) -> DivisorClass {
        let mut v = vec![0; self.len()];
        for &(name, m) in terms {
            v[self
                .index(name)
                .unwrap_or_else(|| panic!("unknown component {name}"))] += m;
        }
        DivisorClass(v)
    }

    pub fn dot(&self, x: &DivisorClass, y: &DivisorClass) -> i64 {
        let n = self.len();
        let mut s = 0;
        for i in 0..n {
            if x.0[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += x.0[i] * self.matrix[i][j] * y.0[j];
            }
        }
        s
    }

    pub fn square(&self, x: &DivisorClass) -> i64 {
        self.dot(x, x)
    }

    pub fn apply_involution(&self, x: &DivisorClass) -> DivisorClass {
        let mut v = vec![0; self.len()];
        for (i, &m) in x.0.iter().enumerate() {
            v[self.involution[i]] += m;
        }
        DivisorClass(v)
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn involution_ok(&self) -> bool {
        let s = &self.involution;
        let n = self.len();
        s.len() == n
            && (0..n).all(|i| s[i] < n && s[s[i]] == i)
            && (0..n).all(|i| (0..n).all(|j| self.matrix[s[i]][s[j]] == self.matrix[i][j]))
    }

    /// Support connected in the graph of positive off-diagonal entries.
    pub fn is_connected(&self, x: &DivisorClass) -> bool {
        let supp: Vec<usize> = x.support().collect();
        let Some(&start) = supp.first() else {
            return false;
        };
        let mut seen = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in &supp {
                if !seen.contains(&j) && self.matrix[i][j] > 0 {
                    seen.push(j);
                    stack.push(j);
                }
            }
        }
        seen.len() == supp.len()
    }
}

const OCTAGON: [&str; 8] = ["Xi", "G1", "G2", "G3", "XiBar", "G1Bar", "G2Bar", "G3Bar"];

/// The cycle Ξ–Γ₁–Γ₂–Γ₃–Ξ̄–Γ̄₁–Γ̄₂–Γ̄₃–Ξ over l_∞.
pub fn octagon_config() -> CurveConfig {
    let edges: Vec<(usize, usize, i64)> = (0..8).map(|i| (i, (i + 1) % 8, 1)).collect();
    let selfs = [-1, -2, -2, -2, -1, -2, -2, -2];
    let mut c = CurveConfig::new(
        &OCTAGON,
        &edges,
        &selfs,
        (0..8).map(|i| (i + 4) % 8).collect(),
    );
    c.anticanonical = Some(DivisorClass(vec![1; 8]));
    c
}

/// The non-reduced fiber Ξ₂ + Ξ₂′ + Γ₁ + 2Γ₂ + Γ₃ over a trope line. The
/// two Ξ-type curves are taken disjoint, which is what a fiber square of 2
/// forces. The involution here is the identity; the real structure moves
/// the whole fiber to the conjugate one, see [`fifty_six_config`].
pub fn trope_fiber_config() -> CurveConfig {
    let names = ["Xi2", "Xi2p", "G1", "G2", "G3"];
    let edges = [(0, 3, 1), (1, 3, 1), (2, 3, 1), (3, 4, 1)];
    let selfs = [-1, -1, -2, -2, -2];
    let mut c = CurveConfig::new(&names, &edges, &selfs, (0..5).collect());
    c.anticanonical = Some(DivisorClass(vec![1, 1, 1, 2, 1]));
    c
}

#[derive(Debug, Clone, Default)]
pub struct Constraints {
    pub must_contain: Vec<usize>,
    pub must_exclude: Vec<usize>,
    pub connected: bool,
    /// Upper bounds per component; defaults to the anticanonical multiplicities.
    pub multiplicity_bounds: Option<Vec<i64>>,
}

/// Effective classes within the bounds with D² = −1 and (−K)·D = 1.
pub fn enumerate_minus_one(config: &CurveConfig, constraints: &Constraints) -> Vec<DivisorClass> {
    let n = config.len();
    let k = config
        .anticanonical
        .clone()
        .expect("enumeration needs an anticanonical class");
    let bounds = constraints
        .multiplicity_bounds
        .clone()
        .unwrap_or_else(|| k.0.clone());
    assert_eq!(bounds.len(), n);
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let d = DivisorClass(cur.clone());
        let ok = d.support().next().is_some()
            && constraints.must_contain.iter().all(|&i| cur[i] > 0)
            && constraints.must_exclude.iter().all(|&i| cur[i] == 0)
            && (!constraints.connected || config.is_connected(&d))
            && config.square(&d) == -1
            && config.dot(&k, &d) == 1;
        if ok {
            out.push(d);
        }
        // odometer
        let mut i = 0;
        while i < n && cur[i] == bounds[i] {
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        cur[i] += 1;
    }
    out
}

/// Octagon plus the Ξ-type curves of the two trope fibers. Fiber
/// components meet the octagon only through the shared Γ or Γ̄ curve.
pub fn fifty_six_config() -> CurveConfig {
    let mut names: Vec<&str> = OCTAGON.to_vec();
    names.extend(["Xi2", "Xi2p", "Xi3", "Xi3p"]);
    let mut edges: Vec<(usize, usize, i64)> = (0..8).map(|i| (i, (i + 1) % 8, 1)).collect();
    edges.extend([(8, 2, 1), (9, 2, 1), (10, 6, 1), (11, 6, 1)]);
    let selfs = [-1, -2, -2, -2, -1, -2, -2, -2, -1, -1, -1, -1];
    let mut inv: Vec<usize> = (0..8).map(|i| (i + 4) % 8).collect();
    inv.extend([10, 11, 8, 9]);
    CurveConfig::new(&names, &edges, &selfs, inv)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CatalogPart {
    OctagonXi,
    OctagonXiBar,
    FiberTwo,
    FiberThree,
}

#[derive(Debug, Clone, Serialize)]
pub struct Catalog {
    pub config: CurveConfig,
    pub classes: Vec<(CatalogPart, DivisorClass)>,
}

fn embed(
    sub: &CurveConfig,
    full: &CurveConfig,
    d: &DivisorClass,
    rename: &dyn Fn(&str) -> String,
) -> DivisorClass {
    let mut v = vec![0; full.len()];
    for (i, &m) in d.0.iter().enumerate() {
        let name = rename(&sub.names[i]);
        v[full
            .index(&name)
            .expect("component present in the full configuration")] += m;
    }
    DivisorClass(v)
}

/// The 56 (−1)-classes: 16 + 16 from the octagon and 6 + 6 from each of
/// the two trope fibers.
pub fn fifty_six_catalog() -> Catalog {
    let full = fifty_six_config();
    let oct = octagon_config();
    let mut classes = Vec::new();
    for (part, contain, exclude) in [
        (CatalogPart::OctagonXi, 0, 4),
        (CatalogPart::OctagonXiBar, 4, 0),
    ] {
        let c = Constraints {
            must_contain: vec![contain],
            must_exclude: vec![exclude],
            connected: true,
            multiplicity_bounds: None,
        };
        for d in enumerate_minus_one(&oct, &c) {
            classes.push((part, embed(&oct, &full, &d, &|s| s.to_string())));
        }
    }
    let fib = trope_fiber_config();
    let mut found = Vec::new();
    for (contain, exclude) in [(0, 1), (1, 0)] {
        let c = Constraints {
            must_contain: vec![contain],
            must_exclude: vec![exclude],
            connected: true,
            multiplicity_bounds: None,
        };
        found.extend(enumerate_minus_one(&fib, &c));
    }
    for d in &found {
        classes.push((
            CatalogPart::FiberTwo,
            embed(&fib, &full, d, &|s| s.to_string()),
        ));
    }
    let conj = |s: &str| match s {
        "Xi2" => "Xi3".to_string(),
        "Xi2p" => "Xi3p".to_string(),
        g => format!("{g}Bar"),
    };
    for d in &found {
        classes.push((CatalogPart::FiberThree, embed(&fib, &full, d, &conj)));
    }
    Catalog {
        config: full,
        classes,
    }
}

/// Pairs (E, σE) in the catalog with E·σE = 2, each unordered pair once.
pub fn real_pairs(catalog: &Catalog) -> Vec<(usize, usize)> {
    let cfg = &catalog.config;
    let mut out = Vec::new();
    for (i, (_, e)) in catalog.classes.iter().enumerate() {
        let se = cfg.apply_involution(e);
        if let Some(j) = catalog.classes.iter().position(|(_, d)| *d == se) {
            if i < j && cfg.dot(e, &se) == 2 {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_anticanonical_square() {
        let c = octagon_config();
        let k = c.anticanonical.clone().unwrap();
        assert_eq!(c.square(&k), 2);
        assert!(c.is_symmetric() && c.involution_ok());
        assert_eq!(c.matrix[0][2], 0);
    }

    #[test]
    fn trope_fiber_squares() {
        let c = trope_fiber_config();
        assert_eq!(c.square(c.anticanonical.as_ref().unwrap()), 2);
        assert_eq!(c.square(&c.class(&[("Xi2", 1), ("G2", 1)])), -1);
        assert_eq!(
            c.square(&c.class(&[("Xi2", 1), ("G2", 2), ("G1", 1), ("G3", 1)])),
            -1
        );
    }

    #[test]
    fn both_xi_curves_give_nothing() {
        let c = octagon_config();
        let cons = Constraints {
            must_contain: vec![0, 4],
            connected: true,
            ..Default::default()
        };
        assert!(enumerate_minus_one(&c, &cons).is_empty());
    }
}
