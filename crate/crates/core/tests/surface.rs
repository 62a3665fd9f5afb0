use tql_core::moduli::{b_threshold, to_quartic};
use tql_core::surface::*;
use tql_core::Tolerances;

fn r1() -> QuarticFamily {
    to_quartic(1.0, 2.0, 2.0).unwrap()
}

/// Independent oracle: D on a fine grid, written out from Q and f.
fn d_direct(fam: &QuarticFamily, l: f64) -> f64 {
    let q = fam.b * l * l + fam.c * l + fam.d;
    q * q - l * (l + 1.0) * (l - fam.a)
}

#[test]
fn r1_satisfies_condition_a_at_two() {
    let fam = r1();
    let rep = condition_a_check(&fam, &Tolerances::default()).unwrap();
    assert!(rep.holds(), "{rep:?}");
    let l0 = rep.lambda0.unwrap();
    assert!((l0 - 2.0).abs() <= 1e-9, "{l0}");
    // grid: D ≥ 0 everywhere and its minimum sits at λ₀
    let (mut best, mut at) = (f64::INFINITY, 0.0);
    for k in 0..=200_000 {
        let l = -20.0 + 40.0 * k as f64 / 200_000.0;
        let v = d_direct(&fam, l);
        assert!(v >= -1e-12, "D({l}) = {v}");
        if v < best {
            best = v;
            at = l;
        }
    }
    assert!((at - l0).abs() <= 1e-3 && best.abs() <= 1e-9);
}

#[test]
fn zero_q_fails() {
    let fam = QuarticFamily::new(1.0, 0.0, 0.0, 0.0).unwrap();
    let rep = condition_a_check(&fam, &Tolerances::default()).unwrap();
    assert!(matches!(rep.status, Status::Fails(_)), "{rep:?}");
}

#[test]
fn b_threshold_separates_failing_from_holding() {
    let tol = Tolerances::default();
    let t = b_threshold(1.0, 2.0, &tol).unwrap();
    let at = |b: f64| {
        condition_a_check(&to_quartic(1.0, 2.0, b).unwrap(), &tol)
            .unwrap()
            .status
    };
    assert!(matches!(at(t.b0 - 1e-4), Status::Fails(_)));
    assert_eq!(at(t.b0 + 1e-4), Status::Holds);
}

#[test]
fn the_boundary_is_reported_indeterminate_somewhere() {
    // Bisect on the verdict; a second double root appears at the
    // threshold, which no double-precision check can resolve.
    let tol = Tolerances::default();
    let at = |b: f64| {
        condition_a_check(&to_quartic(1.0, 2.0, b).unwrap(), &tol)
            .unwrap()
            .status
    };
    let (mut lo, mut hi) = (0.6, 0.62);
    let mut seen = false;
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        match at(m) {
            Status::Holds => hi = m,
            Status::Fails(_) => lo = m,
            Status::Indeterminate(_) => {
                seen = true;
                break;
            }
        }
    }
    assert!(
        seen,
        "bracket shrank to [{lo}, {hi}] without an indeterminate verdict"
    );
}

#[test]
fn r1_has_one_node_and_two_elliptic_points() {
    let rep = classify_singularities(&r1(), &Tolerances::default()).unwrap();
    assert_eq!(rep.points.len(), 3);
    let odps: Vec<_> = rep.odps().collect();
    assert_eq!(odps.len(), 1);
    assert!(
        odps[0]
            .point
            .distance(&ProjPoint::real([2.0, 1.0, 0.0, 0.0]))
            <= 1e-9
    );
    let e7: Vec<_> = rep
        .points
        .iter()
        .filter(|s| s.kind == SingularityKind::EllipticE7)
        .collect();
    assert_eq!(e7.len(), 2);
    assert!(e7
        .iter()
        .any(|s| s.point.distance(&ProjPoint::p_infinity()) <= 1e-12));
    assert!(e7
        .iter()
        .any(|s| s.point.distance(&ProjPoint::p_infinity_bar()) <= 1e-12));
}

#[test]
fn fourfold_root_of_d_is_not_an_odp() {
    // Q = (λ² + 6λ − 4)/√20 with a = 4/5 gives D = (λ − 2)⁴/20.
    let s = 20f64.sqrt();
    let fam = QuarticFamily::new(0.8, 1.0 / s, 6.0 / s, -4.0 / s).unwrap();
    for l in [-3.0, -0.5, 0.0, 1.0, 2.5, 7.0] {
        let want = (l - 2.0f64).powi(4) / 20.0;
        assert!((d_direct(&fam, l) - want).abs() <= 1e-12 * (1.0 + want));
    }
    let rep = classify_singularities(&fam, &Tolerances::default()).unwrap();
    let odd: Vec<_> = rep
        .points
        .iter()
        .filter(|s| s.kind == SingularityKind::NonODPDoublePoint)
        .collect();
    assert_eq!(odd.len(), 1, "{rep:?}");
    assert_eq!(odd[0].multiplicity, 4);
    assert!(
        odd[0]
            .point
            .distance(&ProjPoint::real([2.0, 1.0, 0.0, 0.0]))
            <= 1e-3
    );
    assert_eq!(rep.odps().count(), 0);
}
