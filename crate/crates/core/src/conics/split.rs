use super::param::{square_root_poly, term_scale};
use super::{restrict_to_curve, section_on_h_lambda, ConicParam, TouchingConicDescriptor};
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::numkit::Poly;
use crate::surface::{PlaneChart, QuarticFamily};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Preimage of a touching conic in the double cover z² + F = 0, written as
/// z = ±s(t) over a parametrization c(t) of the conic.
#[derive(Debug, Clone, Serialize)]
pub struct CoverSplit {
    pub descriptor: TouchingConicDescriptor,
    /// Coefficients of s, lowest degree first.
    pub s: Vec<C64>,
    /// ‖s² + F∘c‖ relative to the size of the terms of F∘c.
    pub square_residual: f64,
    /// ξ = s + i(c₂c₃ + Q·c₁²) and η = s − i(c₂c₃ + Q·c₁²) along the plus component.
    pub xi: Vec<C64>,
    pub eta: Vec<C64>,
    /// Both components are mapped to themselves by the real structure.
    pub components_real: bool,
    /// The real structure swaps the two components.
    pub exchanged: bool,
    /// For orbit type, the constant κ with s = κ·c₁²: κ² = f − (α + Q)².
    pub orbit_constant: Option<C64>,
    #[serde(skip)]
    pub param: Option<ConicParam>,
}

/// Orbit conics y₂y₃ = αy₁² whose preimage splits into two real curves
/// have α strictly inside this window; it exists only where f(λ) > 0.
pub fn orbit_window(fam: &QuarticFamily, lambda: f64) -> Option<(f64, f64)> {
    let f = fam.f_at(lambda);
    (f > 0.0).then(|| {
        let q = fam.q_at(lambda);
        (-q - f.sqrt(), -q + f.sqrt())
    })
}

pub fn split_double_cover(
    fam: &QuarticFamily,
    descriptor: &TouchingConicDescriptor,
    tol: &Tolerances,
) -> Result<CoverSplit> {
    let lambda = descriptor.lambda();
    let conic = descriptor.conic(fam)?;
    if let TouchingConicDescriptor::Orbit { alpha, .. } = *descriptor {
        if super::orbit_conic(fam, lambda, alpha)?.1 {
            return Err(Error::Precondition(format!(
                "the orbit conic with α = {alpha} lies in the branch curve"
            )));
        }
    }
    let section = section_on_h_lambda(fam, lambda);
    let param = ConicParam::new(&conic, Some(&section))?;
    let c = param.polys();
    let p = -&restrict_to_curve(&section, &c);
    let p = p.trimmed(1e-13);
    let s = square_root_poly(&p).ok_or_else(|| {
        Error::Verification(format!(
            "restriction has odd degree {}, not a square",
            p.degree()
        ))
    })?;
    let residual = (&(&s * &s) - &p).norm_inf() / term_scale(&section, &c);
    if !(residual <= tol.square_residual) {
        return Err(Error::Verification(format!(
            "restriction is not a perfect square (residual {residual:e})"
        )));
    }

    let i = C64::new(0.0, 1.0);
    let q = fam.q_at(lambda);
    let inner = &(&c[1] * &c[2]) + &(&c[0] * &c[0]).scale(C64::new(q, 0.0));
    let xi = &s + &inner.scale(i);
    let eta = &s - &inner.scale(i);

    let (components_real, exchanged) = reality(&param, &s, lambda)?;
    let orbit_constant = match *descriptor {
        TouchingConicDescriptor::Orbit { alpha, .. } => {
            let k2 = fam.f_at(lambda) - (alpha + q).powi(2);
            let k = C64::new(k2, 0.0).sqrt();
            let c1sq = &c[0] * &c[0];
            // fix the sign to the one realised by s
            let sign = if (&s - &c1sq.scale(k)).norm_inf() <= (&s + &c1sq.scale(k)).norm_inf() {
                1.0
            } else {
                -1.0
            };
            Some(k * sign)
        }
        _ => None,
    };
    Ok(CoverSplit {
        descriptor: *descriptor,
        s: s.coeffs().to_vec(),
        square_residual: residual,
        xi: xi.coeffs().to_vec(),
        eta: eta.coeffs().to_vec(),
        components_real,
        exchanged,
        orbit_constant,
        param: Some(param),
    })
}

/// The real structure sends (c(t), s(t)) to (σc(t), s̄(t)); with
/// σc(t) = μ·c(t′) this is the point z = s̄(t)/μ² over c(t′), which lies on
/// the plus component iff it equals s(t′). The two alternatives differ by
/// 2|s|, so a loose relative margin still separates them.
fn reality(param: &ConicParam, s: &Poly, lambda: f64) -> Result<(bool, bool)> {
    let chart = PlaneChart::lambda_plane(lambda);
    let probes = [
        C64::new(0.31, 0.17),
        C64::new(-0.62, 0.44),
        C64::new(0.13, -0.91),
        C64::new(1.37, 0.29),
        C64::new(-1.21, -0.58),
        C64::new(0.05, 0.66),
        C64::new(2.4, -1.3),
        C64::new(-0.27, -0.11),
    ];
    let mut same = 0;
    let mut swapped = 0;
    for t in probes {
        let x = param.point(t);
        let y = chart.sigma(&x);
        let t2 = param.parameter_of(&y);
        let x2 = param.point(t2);
        let j = (0..3)
            .max_by(|&a, &b| x2[a].norm().total_cmp(&x2[b].norm()))
            .expect("three coordinates");
        let mu = y[j] / x2[j];
        let image = s.eval(t).conj() / (mu * mu);
        let target = s.eval(t2);
        let scale = image.norm().max(target.norm());
        if scale == 0.0 {
            continue;
        }
        if (image - target).norm() <= 1e-3 * scale {
            same += 1;
        } else if (image + target).norm() <= 1e-3 * scale {
            swapped += 1;
        }
    }
    match (same, swapped) {
        (n, 0) if n > 0 => Ok((true, false)),
        (0, n) if n > 0 => Ok((false, true)),
        _ => Err(Error::Indeterminate(format!(
            "reality test inconclusive ({same} fixed, {swapped} swapped probes)"
        ))),
    }
}
