use num_complex::Complex64 as C64;
use proptest::prelude::*;
use tql_core::conics::TouchingConicDescriptor;
use tql_core::moduli::to_quartic;
use tql_core::resolutions::*;
use tql_core::surface::{condition_a_check, QuarticFamily};
use tql_core::Tolerances;

use LimitTag::{Infinity as Inf, Zero};
use LinearForm::{X0MinusAX1 as Xa, X0PlusX1 as Xp, X0, X1};

fn families() -> Vec<QuarticFamily> {
    let tol = Tolerances::default();
    let out = vec![
        to_quartic(1.0, 2.0, 2.0).unwrap(),
        to_quartic(2.0, 4.0, 3.0).unwrap(),
        to_quartic(0.5, 1.5, 1.0).unwrap(),
    ];
    for fam in &out {
        assert!(condition_a_check(fam, &tol).unwrap().holds(), "{fam:?}");
    }
    out
}

fn h2(mut pair: [LinearForm; 2]) -> HFunction {
    pair.sort();
    HFunction::H2 { pair }
}

fn h3(mut triple: [LinearForm; 3]) -> HFunction {
    triple.sort();
    HFunction::H3 { triple }
}

#[derive(Clone, Copy)]
enum End {
    L,
    R,
}

struct Expect {
    h: HFunction,
    crit: [usize; 2],
    tags: Vec<(Interval, End, LimitTag)>,
}

fn expectations() -> Vec<Expect> {
    use End::*;
    use Interval::*;
    let e = |h, crit, tags| Expect { h, crit, tags };
    vec![
        e(HFunction::H0, [1, 0], vec![(I2, L, Inf), (I2, R, Inf)]),
        e(
            HFunction::H1 { l1: X1 },
            [0, 1],
            vec![(I1, L, Inf), (I1, R, Zero)],
        ),
        e(
            HFunction::H1 { l1: X0 },
            [1, 0],
            vec![(I3, L, Inf), (I3, R, Zero)],
        ),
        e(
            HFunction::H1 { l1: Xp },
            [0, 1],
            vec![(I1, L, Zero), (I1, R, Inf)],
        ),
        e(
            HFunction::H1 { l1: Xa },
            [1, 0],
            vec![(I3, L, Zero), (I3, R, Inf)],
        ),
        e(h3([X0, Xp, Xa]), [0, 1], vec![(I1, L, Zero), (I1, R, Inf)]),
        e(h3([X1, Xp, Xa]), [1, 0], vec![(I3, L, Zero), (I3, R, Inf)]),
        e(h3([X0, X1, Xa]), [0, 1], vec![(I1, L, Inf), (I1, R, Zero)]),
        e(h3([X0, X1, Xp]), [1, 0], vec![(I3, L, Inf), (I3, R, Zero)]),
        e(
            h2([X0, X1]),
            [0, 0],
            vec![(I2, L, Zero), (I2, R, Inf), (I4, L, Zero), (I4, R, Inf)],
        ),
        e(
            h2([Xp, Xa]),
            [0, 0],
            vec![(I2, L, Inf), (I2, R, Zero), (I4, L, Inf), (I4, R, Zero)],
        ),
        e(
            h2([X1, Xp]),
            [0, 0],
            vec![(I2, L, Inf), (I2, R, Zero), (I4, L, Zero), (I4, R, Inf)],
        ),
        e(
            h2([X0, Xa]),
            [0, 0],
            vec![(I2, L, Zero), (I2, R, Inf), (I4, L, Inf), (I4, R, Zero)],
        ),
        e(h2([X0, Xp]), [1, 1], vec![]),
        e(h2([X1, Xa]), [1, 1], vec![]),
    ]
}

#[test]
fn behavior_tables_match_on_three_families() {
    let tol = Tolerances::default();
    let expect = expectations();
    assert_eq!(expect.len(), HFunction::catalog().len());
    for fam in families() {
        for e in &expect {
            let t = behavior_table(&fam, &e.h, &tol).unwrap();
            let counts: Vec<usize> =
                e.h.intervals()
                    .iter()
                    .map(|&i| t.row(i).critical_points.len())
                    .collect();
            assert_eq!(counts, e.crit.to_vec(), "{} on a = {}", e.h, fam.a);
            for &(interval, end, tag) in &e.tags {
                let row = t.row(interval);
                let got = match end {
                    End::L => row.left,
                    End::R => row.right,
                };
                assert_eq!(got, tag, "{} {interval} on a = {}", e.h, fam.a);
            }
        }
    }
}

#[test]
fn admissible_resolutions_are_the_two_known_ones() {
    let tol = Tolerances::default();
    let first = ResolutionChoice::new(X1, Xp, X0).unwrap();
    let second = ResolutionChoice::new(Xa, X0, Xp).unwrap();
    for fam in families() {
        let found = admissible_resolutions(&fam, &tol).unwrap();
        let got: Vec<(ResolutionChoice, Orientation)> = found
            .iter()
            .map(|a| (a.resolution, a.orientation))
            .collect();
        assert_eq!(got.len(), 2, "{got:?}");
        assert!(got.contains(&(first, Orientation::PlusOverI1)), "{got:?}");
        assert!(got.contains(&(second, Orientation::MinusOverI1)), "{got:?}");
    }
}

#[test]
fn critical_points_of_h0_lie_inside_i2() {
    let tol = Tolerances::default();
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    let t = behavior_table(&fam, &HFunction::H0, &tol).unwrap();
    let c = t.row(Interval::I2).critical_points[0];
    assert!(c > -1.0 && c < 0.0);
    // a minimum: larger on both sides
    let v = h_eval(&fam, &HFunction::H0, c).unwrap();
    for d in [1e-3, 1e-2] {
        assert!(h_eval(&fam, &HFunction::H0, c - d).unwrap() > v);
        assert!(h_eval(&fam, &HFunction::H0, c + d).unwrap() > v);
    }
}

#[test]
fn exceptional_radii_match_h_values() {
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    for res in ResolutionChoice::all() {
        for &lambda in &[-3.0, -1.4, 0.2, 0.5, 0.9] {
            for &theta in &[0.0, 1.3, -2.2] {
                let desc = TouchingConicDescriptor::Special { lambda, theta };
                let pts = exceptional_intersection(&fam, &res, &desc).unwrap();
                let u = pts
                    .iter()
                    .find(|p| p.component == ExceptionalComponent::Gamma1)
                    .unwrap()
                    .value;
                let w = pts
                    .iter()
                    .find(|p| p.component == ExceptionalComponent::Gamma3)
                    .unwrap()
                    .value;
                let h1 =
                    h_eval(&fam, &HFunction::for_resolution(1, &res).unwrap(), lambda).unwrap();
                let h3 =
                    h_eval(&fam, &HFunction::for_resolution(3, &res).unwrap(), lambda).unwrap();
                assert!((u.norm() - h1).abs() <= 1e-10 * h1.max(1.0));
                assert!((w.norm() - h3).abs() <= 1e-10 * h3.max(1.0));
            }
        }
    }
}

#[test]
fn orbit_values_trace_the_h2_circle() {
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    let res = ResolutionChoice::new(X1, Xp, X0).unwrap();
    for &lambda in &[-0.6, 3.0] {
        let (q, f) = (fam.q_at(lambda), fam.f_at(lambda));
        let radius = h_eval(&fam, &HFunction::for_resolution(2, &res).unwrap(), lambda).unwrap();
        let l12 = res.l1.eval(fam.a, lambda) * res.l2.eval(fam.a, lambda);
        // centre of the window: purely real, ± the radius
        let v = exceptional_intersection(
            &fam,
            &res,
            &TouchingConicDescriptor::Orbit { lambda, alpha: -q },
        )
        .unwrap();
        for p in &v {
            assert!(p.value.im.abs() < 1e-12);
            assert!((p.value.norm() - radius).abs() < 1e-10 * radius);
        }
        assert!((v[0].value - v[1].value).norm() > 1e-3);
        // inside the window every value lies on the circle
        for k in 1..10 {
            let alpha = -q - f.sqrt() + 2.0 * f.sqrt() * k as f64 / 10.0;
            for p in exceptional_intersection(
                &fam,
                &res,
                &TouchingConicDescriptor::Orbit { lambda, alpha },
            )
            .unwrap()
            {
                assert!((p.value.norm() - radius).abs() < 1e-10 * radius);
            }
        }
        // the two values collide at the ends of the window
        for alpha in [-q - f.sqrt(), -q + f.sqrt()] {
            let v = exceptional_intersection(
                &fam,
                &res,
                &TouchingConicDescriptor::Orbit { lambda, alpha },
            )
            .unwrap();
            assert!(
                (v[0].value - v[1].value).norm() < 1e-6 * radius,
                "{:?}",
                l12
            );
        }
    }
    assert!(exceptional_intersection(
        &fam,
        &res,
        &TouchingConicDescriptor::Generic {
            lambda: 3.0,
            theta: 0.0
        }
    )
    .is_err());
}

#[test]
fn breaking_partners_pair_up() {
    let tol = Tolerances::default();
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    let near_minus_one = breaking_partner(&fam, -0.999, &tol).unwrap();
    assert!(near_minus_one > -0.1, "{near_minus_one}");
    for &l in &[-0.9, -0.7, -0.2, -0.05] {
        let mu = breaking_partner(&fam, l, &tol).unwrap();
        let h = |x| h_eval(&fam, &HFunction::H0, x).unwrap();
        assert!((h(mu) - h(l)).abs() <= 1e-10 * h(l));
        let back = breaking_partner(&fam, mu, &tol).unwrap();
        assert!((back - l).abs() < 1e-8, "{l} → {mu} → {back}");
    }
    let crit = behavior_table(&fam, &HFunction::H0, &tol)
        .unwrap()
        .row(Interval::I2)
        .critical_points[0];
    assert!(breaking_partner(&fam, crit, &tol).is_err());
    assert!(breaking_partner(&fam, 0.5, &tol).is_err());
}

#[test]
fn spot_values() {
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    assert!((h_eval(&fam, &h2([X0, X1]), 2.0).unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
    assert!(h_eval(&fam, &HFunction::H1 { l1: X1 }, 2.0).is_err());
    assert!(h_eval(&fam, &HFunction::H0, -2.0).is_err());
}

#[test]
fn samples_cover_both_intervals() {
    let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
    let (s, dropped) = sample_h(&fam, &HFunction::H0, 1000).unwrap();
    assert_eq!(s.len() + dropped, 1000);
    assert!(
        s.iter().any(|p| p.interval == Interval::I2)
            && s.iter().any(|p| p.interval == Interval::I4)
    );
    assert!(s.iter().all(|p| p.value > 0.0 && p.value.is_finite()));
    // the I₂ part falls and then rises
    let i2: Vec<f64> = s
        .iter()
        .filter(|p| p.interval == Interval::I2)
        .map(|p| p.value)
        .collect();
    let k = i2
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!(k > 0 && k + 1 < i2.len());
    assert!(i2[..=k].windows(2).all(|w| w[1] <= w[0]));
    assert!(i2[k..].windows(2).all(|w| w[1] >= w[0]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn h0_reciprocal_identity(l in 1.001f64..50.0) {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let (q, f) = (fam.q_at(l), fam.f_at(l));
        let h0 = h_eval(&fam, &HFunction::H0, l).unwrap();
        let other = (q - (q * q - f).max(0.0).sqrt()) / f.sqrt();
        prop_assert!((h0 * other - 1.0).abs() < 1e-9);
        prop_assert!(h0 >= 1.0 - 1e-12);
    }

    #[test]
    fn h_values_positive(l in -20.0f64..20.0, k in 0usize..15) {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let h = HFunction::catalog()[k];
        if let Ok(v) = h_eval(&fam, &h, l) {
            let interior = h.intervals().iter().any(|i| {
                let (a, b) = i.bounds(fam.a);
                l > a && l < b
            });
            if interior {
                prop_assert!(v > 0.0);
            }
        }
    }

    #[test]
    fn u_and_w_radii(l in 0.01f64..0.99, theta in -3.0f64..3.0) {
        let fam = to_quartic(1.0, 2.0, 2.0).unwrap();
        let res = ResolutionChoice::new(Xa, X0, Xp).unwrap();
        let pts = exceptional_intersection(&fam, &res, &TouchingConicDescriptor::Special { lambda: l, theta }).unwrap();
        let product: C64 = pts[0].value * pts[1].value;
        // |u·w| = h₁·h₃
        let h1 = h_eval(&fam, &HFunction::for_resolution(1, &res).unwrap(), l).unwrap();
        let h3 = h_eval(&fam, &HFunction::for_resolution(3, &res).unwrap(), l).unwrap();
        prop_assert!((product.norm() - h1 * h3).abs() <= 1e-10 * (h1 * h3).max(1.0));
    }
}
