//! Small resolutions of the A₃-points over P_∞, the radius functions h₀–h₃
//! of the circles cut on exceptional curves, their critical points and
//! endpoint limits, and the elimination that leaves two admissible
//! resolutions.

mod analysis;
mod forms;

pub use analysis::{behavior_table, sample_h, BehaviorTable, HSample, IntervalRow, LimitTag};
pub use forms::{Interval, LinearForm, ResolutionChoice};

use crate::config::Tolerances;
use crate::conics::TouchingConicDescriptor;
use crate::error::{Error, Result};
use crate::surface::QuarticFamily;
use num_complex::Complex64 as C64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HFunction {
    /// Radius on l_∞ for generic-type conics, on I₂ ∪ I₄.
    H0,
    /// Radius on Γ₁, depends on ℓ₁ only; on I₁ ∪ I₃.
    H1 { l1: LinearForm },
    /// Radius on Γ₂, depends on {ℓ₁, ℓ₂}; on I₂ ∪ I₄.
    H2 { pair: [LinearForm; 2] },
    /// Radius on Γ₃, depends on {ℓ₁, ℓ₂, ℓ₃}; on I₁ ∪ I₃.
    H3 { triple: [LinearForm; 3] },
}

impl HFunction {
    pub fn for_resolution(index: u8, res: &ResolutionChoice) -> Result<Self> {
        match index {
            0 => Ok(HFunction::H0),
            1 => Ok(HFunction::H1 { l1: res.l1 }),
            2 => Ok(HFunction::H2 {
                pair: sorted2([res.l1, res.l2]),
            }),
            3 => Ok(HFunction::H3 {
                triple: sorted3([res.l1, res.l2, res.l3]),
            }),
            _ => Err(Error::Precondition(format!(
                "h-index must be 0..=3, got {index}"
            ))),
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            HFunction::H0 => 0,
            HFunction::H1 { .. } => 1,
            HFunction::H2 { .. } => 2,
            HFunction::H3 { .. } => 3,
        }
    }

    /// Where the function is defined: sign of f on the domain.
    pub fn on_positive_f(&self) -> bool {
        matches!(self, HFunction::H0 | HFunction::H2 { .. })
    }

    pub fn intervals(&self) -> [Interval; 2] {
        if self.on_positive_f() {
            [Interval::I2, Interval::I4]
        } else {
            [Interval::I1, Interval::I3]
        }
    }

    /// All 14 distinct functions: h₀, four h₁, six h₂, four h₃.
    pub fn catalog() -> Vec<HFunction> {
        let all = LinearForm::ALL;
        let mut out = vec![HFunction::H0];
        out.extend(all.iter().map(|&l1| HFunction::H1 { l1 }));
        for i in 0..4 {
            for j in (i + 1)..4 {
                out.push(HFunction::H2 {
                    pair: [all[i], all[j]],
                });
            }
        }
        for skip in (0..4).rev() {
            let t: Vec<LinearForm> = (0..4).filter(|&k| k != skip).map(|k| all[k]).collect();
            out.push(HFunction::H3 {
                triple: [t[0], t[1], t[2]],
            });
        }
        out
    }
}

impl std::fmt::Display for HFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HFunction::H0 => write!(f, "h0"),
            HFunction::H1 { l1 } => write!(f, "h1[{l1}]"),
            HFunction::H2 { pair } => write!(f, "h2[{},{}]", pair[0], pair[1]),
            HFunction::H3 { triple } => write!(f, "h3[{},{},{}]", triple[0], triple[1], triple[2]),
        }
    }
}

fn sorted2(mut v: [LinearForm; 2]) -> [LinearForm; 2] {
    v.sort();
    v
}

fn sorted3(mut v: [LinearForm; 3]) -> [LinearForm; 3] {
    v.sort();
    v
}

/// (B², B′) with B² = (√(Q²−f) − Q)/2 and B′ = (√(Q²−f) + Q)/2, each
/// computed without cancellation; B²·B′ = −f/4.
fn special_radii(q: f64, f: f64) -> (f64, f64) {
    let s = (q * q - f).max(0.0).sqrt();
    if q >= 0.0 {
        let bp = (s + q) / 2.0;
        (if bp > 0.0 { -f / (4.0 * bp) } else { 0.0 }, bp)
    } else {
        let b2 = (s - q) / 2.0;
        (b2, if b2 > 0.0 { -f / (4.0 * b2) } else { 0.0 })
    }
}

/// B = ((√(Q²−f) − Q)/2)^{1/2} at λ, for f(λ) ≤ 0.
pub fn special_b(fam: &QuarticFamily, lambda: f64) -> f64 {
    special_radii(fam.q_at(lambda), fam.f_at(lambda)).0.sqrt()
}

/// h(λ). The closed domain is allowed; a value that is not finite there is
/// reported as a domain error.
pub fn h_eval(fam: &QuarticFamily, h: &HFunction, lambda: f64) -> Result<f64> {
    let f = fam.f_at(lambda);
    let q = fam.q_at(lambda);
    let a = fam.a;
    let domain_ok = if h.on_positive_f() {
        f >= 0.0
    } else {
        f <= 0.0
    };
    if !domain_ok || !lambda.is_finite() {
        return Err(Error::Precondition(format!(
            "λ = {lambda} is outside the domain of {h}"
        )));
    }
    let v = match h {
        HFunction::H0 => {
            let s = (q * q - f).max(0.0).sqrt();
            let num = if q >= 0.0 { q + s } else { f / (s - q) };
            num / f.sqrt()
        }
        HFunction::H1 { l1 } => {
            let (b2, _) = special_radii(q, f);
            2.0 * b2.sqrt() / l1.eval(a, lambda).abs()
        }
        HFunction::H2 { pair } => {
            f.sqrt() / (pair[0].eval(a, lambda) * pair[1].eval(a, lambda)).abs()
        }
        HFunction::H3 { triple } => {
            let (b2, bp) = special_radii(q, f);
            let den: f64 = triple.iter().map(|l| l.eval(a, lambda)).product();
            2.0 * b2.sqrt() * bp / den.abs()
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Precondition(format!(
            "{h} is not finite at λ = {lambda}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Orientation {
    /// The components meeting Γ₁ are the candidates over I₁.
    PlusOverI1,
    /// The components meeting Γ₃ are the candidates over I₁.
    MinusOverI1,
}

#[derive(Debug, Clone, Serialize)]
pub struct Admissible {
    pub resolution: ResolutionChoice,
    pub orientation: Orientation,
}

/// Search the 24 orderings under both orientations. A choice survives when
/// the incoming branch has no critical point on I₁, the outgoing branch none
/// on I₃, h₂ none on I₂, and the limits at −1 and 0 match reciprocally.
pub fn admissible_resolutions(fam: &QuarticFamily, tol: &Tolerances) -> Result<Vec<Admissible>> {
    let mut tables = std::collections::HashMap::new();
    let mut table = |h: HFunction| -> Result<BehaviorTable> {
        if let Some(t) = tables.get(&h) {
            return Ok(BehaviorTable::clone(t));
        }
        let t = behavior_table(fam, &h, tol)?;
        tables.insert(h, t.clone());
        Ok(t)
    };
    let mut out = Vec::new();
    for res in ResolutionChoice::all() {
        let h1 = table(HFunction::for_resolution(1, &res)?)?;
        let h2 = table(HFunction::for_resolution(2, &res)?)?;
        let h3 = table(HFunction::for_resolution(3, &res)?)?;
        for orientation in [Orientation::PlusOverI1, Orientation::MinusOverI1] {
            let (h_in, h_out) = match orientation {
                Orientation::PlusOverI1 => (&h1, &h3),
                Orientation::MinusOverI1 => (&h3, &h1),
            };
            let i1 = h_in.row(Interval::I1);
            let i3 = h_out.row(Interval::I3);
            let i2 = h2.row(Interval::I2);
            let ok = i1.critical_points.is_empty()
                && i3.critical_points.is_empty()
                && i2.critical_points.is_empty()
                && i1.right.reciprocal_matches(i2.left)
                && i2.right.reciprocal_matches(i3.left);
            if ok {
                out.push(Admissible {
                    resolution: res,
                    orientation,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExceptionalComponent {
    Gamma1,
    Gamma2,
    Gamma3,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceptionalCoordinate {
    pub component: ExceptionalComponent,
    pub value: C64,
}

/// Intersection of the lifted components with the exceptional curves:
/// u on Γ₁ and w on Γ₃ for special-type conics, the two v-values on Γ₂
/// for orbit-type conics.
pub fn exceptional_intersection(
    fam: &QuarticFamily,
    res: &ResolutionChoice,
    descriptor: &TouchingConicDescriptor,
) -> Result<Vec<ExceptionalCoordinate>> {
    let a = fam.a;
    let i = C64::i();
    match *descriptor {
        TouchingConicDescriptor::Special { lambda, theta } => {
            let f = fam.f_at(lambda);
            if !(f < 0.0) {
                return Err(Error::Precondition(format!(
                    "special type needs f(λ) < 0, got {f}"
                )));
            }
            let (b2, bp) = special_radii(fam.q_at(lambda), f);
            let b = b2.sqrt();
            let l1 = res.l1.eval(a, lambda);
            let l123 = l1 * res.l2.eval(a, lambda) * res.l3.eval(a, lambda);
            let u = -2.0 * i * b * C64::from_polar(1.0, -theta) / l1;
            // −f/(2B) = 2B·B′
            let w = -i * C64::from_polar(1.0, theta) * (2.0 * b * bp) / l123;
            Ok(vec![
                ExceptionalCoordinate {
                    component: ExceptionalComponent::Gamma1,
                    value: u,
                },
                ExceptionalCoordinate {
                    component: ExceptionalComponent::Gamma3,
                    value: w,
                },
            ])
        }
        TouchingConicDescriptor::Orbit { lambda, alpha } => {
            let f = fam.f_at(lambda);
            let s = alpha + fam.q_at(lambda);
            let root = C64::new(f - s * s, 0.0).sqrt();
            let l12 = res.l1.eval(a, lambda) * res.l2.eval(a, lambda);
            Ok([root, -root]
                .into_iter()
                .map(|r| ExceptionalCoordinate {
                    component: ExceptionalComponent::Gamma2,
                    value: (r + i * s) / l12,
                })
                .collect())
        }
        TouchingConicDescriptor::Generic { .. } => Err(Error::Precondition(
            "generic-type conics do not meet Γ₁, Γ₂, Γ₃".into(),
        )),
    }
}

/// The μ ∈ I₂ on the other side of the critical point of h₀ with
/// h₀(μ) = h₀(λ).
pub fn breaking_partner(fam: &QuarticFamily, lambda: f64, tol: &Tolerances) -> Result<f64> {
    if !(lambda > -1.0 && lambda < 0.0) {
        return Err(Error::Precondition(format!("λ = {lambda} is not in I₂")));
    }
    let table = behavior_table(fam, &HFunction::H0, tol)?;
    let row = table.row(Interval::I2);
    let &[crit] = row.critical_points.as_slice() else {
        return Err(Error::Verification(format!(
            "h₀ has {} critical points on I₂, expected one",
            row.critical_points.len()
        )));
    };
    if (lambda - crit).abs() <= tol.critical_guard {
        return Err(Error::Precondition(format!(
            "λ = {lambda} is the critical point of h₀"
        )));
    }
    let target = h_eval(fam, &HFunction::H0, lambda)?;
    let (mut near, mut far) = if lambda < crit {
        (crit, 0.0)
    } else {
        (crit, -1.0)
    };
    // h₀ − target is negative at the critical point and blows up at the far end
    for _ in 0..200 {
        let mid = 0.5 * (near + far);
        if mid == near || mid == far {
            break;
        }
        if h_eval(fam, &HFunction::H0, mid)? < target {
            near = mid;
        } else {
            far = mid;
        }
    }
    Ok(0.5 * (near + far))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::to_quartic;

    #[test]
    fn h0_is_one_at_lambda0() {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        assert!((h_eval(&fam, &HFunction::H0, 2.0).unwrap() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn h2_closed_form() {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let h = HFunction::H2 {
            pair: [LinearForm::X0, LinearForm::X1],
        };
        assert!((h_eval(&fam, &h, 2.0).unwrap() - 1.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn h1_vanishes_at_minus_one() {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let h = HFunction::H1 { l1: LinearForm::X1 };
        assert_eq!(h_eval(&fam, &h, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn catalog_has_fifteen() {
        assert_eq!(HFunction::catalog().len(), 15);
    }
}
