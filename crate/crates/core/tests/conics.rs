use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tql_core::conics::*;
use tql_core::moduli::to_quartic;
use tql_core::surface::QuarticFamily;
use tql_core::Tolerances;

fn r1() -> QuarticFamily {
    to_quartic(1.0, 2.0, 2.0).unwrap()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn is_p_infinity(y: &[C64; 3], which: usize) -> bool {
    let n = y.iter().map(|v| v.norm()).fold(0.0, f64::max);
    (0..3).all(|k| k == which || y[k].norm() <= 1e-6 * n)
}

#[test]
fn generic_conic_touches_at_four_points() {
    let fam = r1();
    let conic = generic_conic(&fam, 3.0, 1.0).unwrap();
    let rep = verify_touching(
        &conic,
        &section_on_h_lambda(&fam, 3.0),
        &Tolerances::default(),
    )
    .unwrap();
    let mults: Vec<usize> = rep.points.iter().map(|p| p.1).collect();
    assert_eq!(mults, vec![2, 2, 2, 2], "{rep:?}");
    assert!(rep.touching);
    assert!(!rep
        .points
        .iter()
        .any(|(y, _)| is_p_infinity(y, 1) || is_p_infinity(y, 2)));
}

#[test]
fn special_conic_touches_twice_at_the_elliptic_points() {
    let fam = r1();
    let conic = special_conic(&fam, 0.5, 0.0).unwrap();
    let rep = verify_touching(
        &conic,
        &section_on_h_lambda(&fam, 0.5),
        &Tolerances::default(),
    )
    .unwrap();
    let mut mults: Vec<usize> = rep.points.iter().map(|p| p.1).collect();
    mults.sort();
    assert_eq!(mults, vec![2, 2, 2, 2], "{rep:?}");
    let at_p = rep
        .points
        .iter()
        .filter(|(y, _)| is_p_infinity(y, 2))
        .count();
    let at_pbar = rep
        .points
        .iter()
        .filter(|(y, _)| is_p_infinity(y, 1))
        .count();
    assert_eq!((at_p, at_pbar), (1, 1));
}

#[test]
fn orbit_conic_meets_only_at_the_elliptic_points() {
    let fam = r1();
    let (conic, contained) = orbit_conic(&fam, 3.0, 1.0).unwrap();
    assert!(!contained);
    let rep = verify_touching(
        &conic,
        &section_on_h_lambda(&fam, 3.0),
        &Tolerances::default(),
    )
    .unwrap();
    let mults: Vec<usize> = rep.points.iter().map(|p| p.1).collect();
    assert_eq!(mults, vec![4, 4], "{rep:?}");
    assert!(rep
        .points
        .iter()
        .all(|(y, _)| is_p_infinity(y, 1) || is_p_infinity(y, 2)));
}

#[test]
fn orbit_conic_inside_branch_curve() {
    let fam = r1();
    let alpha = -fam.q_at(3.0) + fam.f_at(3.0).sqrt();
    let (conic, contained) = orbit_conic(&fam, 3.0, alpha).unwrap();
    assert!(contained);
    let rep = verify_touching(
        &conic,
        &section_on_h_lambda(&fam, 3.0),
        &Tolerances::default(),
    )
    .unwrap();
    assert!(rep.contained);
    assert!(!orbit_has_real_points(-1.0));
    assert!(orbit_has_real_points(1.0));
}

#[test]
fn determinants_match_closed_forms() {
    let fam = r1();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let theta = rng.random_range(-10.0..10.0);
        let l4 = rng.random_range(1.05..9.0);
        if (l4 - 2.0f64).abs() < 1e-3 {
            continue;
        }
        let d = fam.d_at(l4);
        let det = generic_conic(&fam, l4, theta).unwrap().determinant();
        assert!((det - c(-2.0 * d * d)).norm() <= 1e-9 * 2.0 * d * d);

        let l3 = rng.random_range(0.01..0.99);
        let (q, f) = (fam.q_at(l3), fam.f_at(l3));
        let want = -(q + (q * q - f).sqrt()) / 8.0;
        let det = special_conic(&fam, l3, theta).unwrap().determinant();
        assert!((det - c(want)).norm() <= 1e-9 * want.abs());
    }
}

#[test]
fn theta_is_periodic_and_rotation_invariant() {
    let fam = r1();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let base = generic_conic(&fam, 3.0, 0.0).unwrap();
    for _ in 0..20 {
        let theta: f64 = rng.random_range(-6.0..6.0);
        let m = generic_conic(&fam, 3.0, theta).unwrap();
        let p = generic_conic(&fam, 3.0, theta + std::f64::consts::TAU).unwrap();
        assert!(m.projective_distance(&p) < 1e-12);
        // pulling back along (y₂, y₃) ↦ (t·y₂, t⁻¹·y₃) with t = e^{iθ/2}
        let t = C64::from_polar(1.0, theta / 2.0);
        let d = [c(1.0), t, t.inv()];
        let mut rotated = base;
        for i in 0..3 {
            for j in 0..3 {
                rotated.matrix[i][j] = base.matrix[i][j] * d[i] * d[j];
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                assert!((rotated.matrix[i][j] - m.matrix[i][j]).norm() < 1e-12);
            }
        }
    }
}

/// Grid over the real locus {y₁ ∈ ℝ, y₃ = ȳ₂}, normalised to unit length.
fn min_on_real_locus(conic: &PlaneConic) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=40 {
        let y1 = (i as f64 / 40.0) * std::f64::consts::FRAC_PI_2;
        for j in 0..72 {
            let phase = j as f64 * std::f64::consts::TAU / 72.0;
            let v = C64::from_polar(y1.sin() / 2f64.sqrt(), phase);
            let y = [c(y1.cos()), v, v.conj()];
            best = best.min(conic.eval(&y).norm() / conic.norm());
        }
    }
    best
}

#[test]
fn no_real_points_on_generic_or_special_conics() {
    let fam = r1();
    for &l in &[1.5, 3.0, 7.0] {
        assert!(min_on_real_locus(&generic_conic(&fam, l, 0.4).unwrap()) > 1e-3);
    }
    for &l in &[-3.0, -1.5, 0.3, 0.8] {
        assert!(min_on_real_locus(&special_conic(&fam, l, 1.1).unwrap()) > 1e-3);
    }
}

#[test]
fn orbit_split_at_window_centre() {
    let fam = r1();
    let desc = TouchingConicDescriptor::Orbit {
        lambda: 3.0,
        alpha: -fam.q_at(3.0),
    };
    let s = split_double_cover(&fam, &desc, &Tolerances::default()).unwrap();
    let k = s.orbit_constant.unwrap();
    assert!(
        (k.norm() - fam.f_at(3.0).sqrt()).abs() < 1e-10 && k.im.abs() < 1e-12,
        "{k}"
    );
    assert!(s.components_real && !s.exchanged);
}

#[test]
fn orbit_reality_flips_at_window_ends() {
    let fam = r1();
    let tol = Tolerances::default();
    for &l in &[-0.5, 3.0, 6.0] {
        let (lo, hi) = orbit_window(&fam, l).unwrap();
        let (q, f) = (fam.q_at(l), fam.f_at(l));
        assert!((lo - (-q - f.sqrt())).abs() < 1e-10 && (hi - (-q + f.sqrt())).abs() < 1e-10);
        for (alpha, inside) in [
            (lo - 1e-6, false),
            (lo + 1e-6, true),
            (hi - 1e-6, true),
            (hi + 1e-6, false),
        ] {
            if alpha == 0.0 {
                continue;
            }
            let s = split_double_cover(
                &fam,
                &TouchingConicDescriptor::Orbit { lambda: l, alpha },
                &tol,
            )
            .unwrap();
            assert_eq!(s.components_real, inside, "λ={l} α={alpha}");
            assert_eq!(s.exchanged, !inside);
        }
    }
    assert!(orbit_window(&fam, 0.5).is_none());
}

#[test]
fn generic_split_is_real() {
    let fam = r1();
    let s = split_double_cover(
        &fam,
        &TouchingConicDescriptor::Generic {
            lambda: 3.0,
            theta: 0.0,
        },
        &Tolerances::default(),
    )
    .unwrap();
    assert!(s.square_residual < 1e-8);
    assert!(s.components_real);
}

#[test]
fn xi_eta_product_is_f_times_y1_to_the_fourth() {
    let fam = r1();
    let tol = Tolerances::default();
    let descs = [
        TouchingConicDescriptor::Generic {
            lambda: 4.0,
            theta: 0.3,
        },
        TouchingConicDescriptor::Special {
            lambda: -2.0,
            theta: 1.0,
        },
        TouchingConicDescriptor::Orbit {
            lambda: 1.5,
            alpha: 0.7,
        },
    ];
    for d in descs {
        let s = split_double_cover(&fam, &d, &tol).unwrap();
        let p = s.param.as_ref().unwrap();
        let f = fam.f_at(d.lambda());
        for t in [c(0.2), C64::new(-0.4, 0.9), c(1.7)] {
            let x = p.point(t);
            let ev = |v: &[C64]| v.iter().rev().fold(C64::default(), |a, k| a * t + k);
            let lhs = ev(&s.xi) * ev(&s.eta);
            let rhs = x[0].powi(4) * f;
            assert!(
                (lhs - rhs).norm() <= 1e-9 * rhs.norm().max(lhs.norm()),
                "{d:?}"
            );
        }
    }
}

#[test]
fn split_random_descriptors() {
    let fam = r1();
    let tol = Tolerances::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 0..50 {
        let theta = rng.random_range(-3.0..3.0);
        let d = match k % 3 {
            0 => TouchingConicDescriptor::Generic {
                lambda: rng.random_range(2.2..8.0),
                theta,
            },
            1 => TouchingConicDescriptor::Special {
                lambda: rng.random_range(0.05..0.95),
                theta,
            },
            _ => TouchingConicDescriptor::Orbit {
                lambda: rng.random_range(-0.9..-0.1),
                alpha: rng.random_range(0.1..3.0),
            },
        };
        let s = split_double_cover(&fam, &d, &tol).unwrap();
        assert!(s.square_residual <= 1e-8, "{d:?}: {}", s.square_residual);
    }
}

#[test]
fn special_series_matches_direct_branch() {
    let fam = r1();
    let (lambda, theta) = (0.4, 0.9);
    let ser = expand_special_component(&fam, lambda, theta, Branch::Plus, 12).unwrap();
    let (q, f) = (fam.q_at(lambda), fam.f_at(lambda));
    let s = (q * q - f).sqrt();
    let b = ((s - q) / 2.0).sqrt();
    let e = C64::from_polar(1.0, theta);
    assert!((ser.x2[1] + b * e.conj()).norm() < 1e-12);
    assert!((ser.x2[2] + (s + q) / 2.0).norm() < 1e-12);

    // direct evaluation at x₁ = 1e−3
    let x1 = c(1e-3);
    let g = (e.conj() * b + x1 * s) / (c(1.0) + e * b * x1);
    let x2 = -g * x1;
    let k2 = x1 * x1 * (f - q * q) + g * x1 * (2.0 * q) - g * g;
    let k0 = -C64::new(0.0, 1.0) * e.conj() * b;
    let mut k = k2.sqrt();
    if (k - k0).norm() > (k + k0).norm() {
        k = -k;
    }
    let z = k * x1;
    let i = C64::new(0.0, 1.0);
    let xi = z + i * (x2 + x1 * x1 * q);
    let eta = z - i * (x2 + x1 * x1 * q);
    // the quartic vanishes on the direct branch
    let big_f = (x2 + x1 * x1 * q).powi(2) - x1.powi(4) * f;
    assert!((z * z + big_f).norm() < 1e-15);
    let rel = |a: C64, b: C64| (a - b).norm() / b.norm();
    assert!(rel(SpecialSeries::eval(&ser.x2, x1), x2) < 1e-6);
    assert!(rel(SpecialSeries::eval(&ser.xi, x1), xi) < 1e-6);
    assert!(rel(SpecialSeries::eval(&ser.eta, x1), eta) < 1e-6);

    let minus = expand_special_component(&fam, lambda, theta, Branch::Minus, 12).unwrap();
    for kk in 0..=12 {
        assert!((minus.xi[kk] + ser.eta[kk]).norm() < 1e-12);
        assert!((minus.eta[kk] + ser.xi[kk]).norm() < 1e-12);
    }
    assert!(expand_special_component(&fam, 3.0, 0.0, Branch::Plus, 4).is_err());
}

#[test]
fn generic_conics_tend_to_tropes() {
    let fam = r1();
    let tol = Tolerances::default();
    let d = TouchingConicDescriptor::Generic {
        lambda: 1.5,
        theta: 0.5,
    };
    let down = conic_limit(&fam, &d, LimitTarget::Endpoint(1.0), 2..=10, &tol).unwrap();
    assert!(down.converged, "{down:?}");
    let up = conic_limit(&fam, &d, LimitTarget::Endpoint(f64::INFINITY), 2..=10, &tol).unwrap();
    assert!(up.converged, "{up:?}");
}

#[test]
fn special_conics_tend_to_tropes() {
    let fam = r1();
    let tol = Tolerances::default();
    let cases = [
        (-2.0, -1.0),
        (-2.0, f64::NEG_INFINITY),
        (0.5, 0.0),
        (0.5, 1.0),
    ];
    for (start, end) in cases {
        let d = TouchingConicDescriptor::Special {
            lambda: start,
            theta: 0.2,
        };
        let rep = conic_limit(&fam, &d, LimitTarget::Endpoint(end), 2..=10, &tol).unwrap();
        assert!(rep.converged, "{end}: {rep:?}");
    }
}

#[test]
fn generic_conics_become_double_lines_at_the_tangency_point() {
    let fam = r1();
    let tol = Tolerances::default();
    for start in [1.5, 3.0] {
        let d = TouchingConicDescriptor::Generic {
            lambda: start,
            theta: 0.7,
        };
        let rep = conic_limit(&fam, &d, LimitTarget::TangencyPoint, 2..=6, &tol).unwrap();
        let tails: Vec<f64> = rep.steps.iter().map(|s| s.singular_values[1]).collect();
        assert!(tails.windows(2).all(|w| w[1] < w[0]), "{tails:?}");
        assert!(rep.converged);
    }
}

#[test]
fn orbit_window_closes_at_minus_one() {
    let fam = r1();
    let d = TouchingConicDescriptor::Orbit {
        lambda: -0.5,
        alpha: 1.0,
    };
    let rep = conic_limit(
        &fam,
        &d,
        LimitTarget::Endpoint(-1.0),
        2..=10,
        &Tolerances::default(),
    )
    .unwrap();
    assert!(rep.converged);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generic_conics_always_touch(l in 1.1f64..9.0, theta in -3.1f64..3.1) {
        prop_assume!((l - 2.0).abs() > 0.05);
        let fam = r1();
        let conic = generic_conic(&fam, l, theta).unwrap();
        let rep = verify_touching(&conic, &section_on_h_lambda(&fam, l), &Tolerances::default()).unwrap();
        prop_assert!(rep.touching);
        prop_assert_eq!(rep.points.iter().map(|p| p.1).sum::<usize>(), 8);
    }

    #[test]
    fn special_conics_always_touch(l in prop_oneof![-6.0f64..-1.05, 0.05f64..0.95], theta in -3.1f64..3.1) {
        let fam = r1();
        let conic = special_conic(&fam, l, theta).unwrap();
        let rep = verify_touching(&conic, &section_on_h_lambda(&fam, l), &Tolerances::default()).unwrap();
        prop_assert!(rep.touching);
    }
}
