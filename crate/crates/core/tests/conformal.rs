use std::f64::consts::{FRAC_PI_4, FRAC_PI_6, PI, TAU};

use num_complex::Complex64;
use privalov::circle_sets::{split_long_gaps, ArcSet};
use privalov::conformal::*;
use proptest::prelude::*;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn joukowski_fixes_i_and_maps_half_circle() {
    let m = JoukowskiMap::new(0.1).unwrap();
    assert!((m.forward(I).unwrap() - I).norm() < 1e-15);
    assert!((m.inverse(I).unwrap() - I).norm() < 1e-15);
    let right = m.forward(c(0.1, 0.0)).unwrap();
    assert!((right - c(0.2 / 0.99, 0.0)).norm() < 1e-15);
    assert!((right.re - 0.202_020_202_020_202).abs() < 1e-14);
    let corner = m.forward(Complex64::from_polar(0.1, FRAC_PI_4)).unwrap();
    assert!((corner.re - 0.2 * FRAC_PI_4.cos() / 0.99).abs() < 1e-15);
    assert!(corner.im.abs() < 1e-15);
    assert!((corner.re - 0.142_849_8).abs() < 1e-7);
}

#[test]
fn joukowski_rejects_bad_scale() {
    assert!(JoukowskiMap::new(0.0).is_err());
    assert!(JoukowskiMap::new(0.6).is_err());
}

#[test]
fn companion_root_is_reflected() {
    let m = JoukowskiMap::new(0.3).unwrap();
    let w = c(0.4, 0.7);
    let z = m.inverse(w).unwrap();
    assert!(z.norm() >= 0.3);
    let other = 0.09 / z;
    assert!(other.norm() <= 0.3 && other.im < 0.0);
    assert!((m.forward(other).unwrap() - w).norm() < 1e-14);
}

#[test]
fn cayley_examples() {
    assert!((cayley(c(0.0, 0.0)).unwrap() - I).norm() < 1e-16);
    assert!(cayley(c(1.0, 0.0)).unwrap().norm() < 1e-16);
    let z = c(0.3, 0.2);
    assert!((cayley_inverse(cayley(z).unwrap()).unwrap() - z).norm() < 1e-14);
}

#[test]
fn distortion_examples() {
    assert!((distortion_ratio(c(0.0, 0.0), c(1.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    let near = distortion_ratio(c(1.0 - 1e-9, 0.0), c(1.0 - 2e-9, 1e-9)).unwrap();
    // |ψ'(1)| = 1/2.
    assert!((near - 0.5).abs() < 1e-8, "{near}");
    // Direct difference quotient.
    let (z1, z2) = (c(0.2, 0.5), c(0.6, -0.3));
    let direct = (cayley(z1).unwrap() - cayley(z2).unwrap()).norm() / (z1 - z2).norm();
    assert!((distortion_ratio(z1, z2).unwrap() - direct).abs() < 1e-14);
}

#[test]
fn geodesic_for_symmetric_gap() {
    let g = geodesic_for_gap(-FRAC_PI_6, FRAC_PI_6).unwrap();
    assert!((g.center - c(2.0 / 3f64.sqrt(), 0.0)).norm() < 1e-15);
    assert!((g.radius - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!(g.orthogonality_defect() < 1e-12);
    let (p, q) = g.endpoints();
    for e in [p, q] {
        assert!(((e - g.center).norm() - g.radius).abs() < 1e-15);
        assert!((e.norm() - 1.0).abs() < 1e-15);
    }
}

#[test]
fn geodesic_shrinks_with_gap() {
    let mut last = f64::INFINITY;
    for k in 1..10 {
        let half = 0.5f64.powi(k);
        let g = geodesic_for_gap(-half, half).unwrap();
        assert!(g.radius < last);
        last = g.radius;
    }
    assert!(last < 3e-3);
}

#[test]
fn membership_examples() {
    let set = split_long_gaps(&ArcSet::from_gaps([(0.3, 0.4), (2.0, 2.9)]).unwrap(), 0.1).unwrap();
    let d = PrivalovDomain::new(set.clone()).unwrap();
    assert_eq!(d.membership(c(0.0, 0.0)), Membership::Inside);
    for (i, g) in d.geodesics().iter().enumerate() {
        let (a, b) = set.gaps()[i];
        let z = Complex64::from_polar(1.0 - 0.5 * g.radius, 0.5 * (a + b));
        assert_eq!(d.membership(z), Membership::InCap(i));
    }
    assert_eq!(d.membership(c(1.0, 0.0)), Membership::OutsideDisk);
    assert_eq!(d.membership(c(0.8, 0.9)), Membership::OutsideDisk);
}

#[test]
fn distance_examples() {
    let disk = PrivalovDomain::new(ArcSet::full_circle()).unwrap();
    assert!((disk.distance_to_boundary(c(0.5, 0.0)).unwrap() - 0.5).abs() < 1e-15);

    let d = PrivalovDomain::single_gap(-0.05, 0.05).unwrap();
    let g = d.geodesics()[0];
    let z = c(0.7, 0.0);
    let expected = (z - g.center).norm() - g.radius;
    assert!((d.distance_to_boundary(z).unwrap() - expected).abs() < 1e-15);

    // Just inside the disk near the endpoint e^{0.05i}, on the E side.
    let end = Complex64::from_polar(1.0, 0.05);
    let z = Complex64::from_polar(1.0 - 1e-4, 0.0502);
    let dist = d.distance_to_boundary(z).unwrap();
    let oracle = (1.0 - z.norm()).min((z - g.center).norm() - g.radius);
    assert!((dist - oracle).abs() < 1e-15, "{dist} vs {oracle}");
    assert!(dist <= (z - end).norm());
}

#[test]
fn classification_examples() {
    let d = PrivalovDomain::single_gap(-0.05, 0.05).unwrap();
    let eps = 1e-6;
    match d.classify_boundary_hit(Complex64::from_polar(1.0 - eps / 2.0, 1.0), eps).unwrap() {
        BoundaryHit::OnE { angle } => assert!((angle - 1.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    let g = d.geodesics()[0];
    let top = g.point(0.5);
    let z = top - (eps / 2.0) * top / top.norm();
    assert!(matches!(d.classify_boundary_hit(z, eps).unwrap(), BoundaryHit::OnGeodesic { gap: 0, .. }));
    let corner = Complex64::from_polar(1.0, 0.05);
    assert!(matches!(d.classify_boundary_hit(corner, eps).unwrap(), BoundaryHit::OnE { .. }));
}

#[test]
fn svg_renders() {
    let set = split_long_gaps(&ArcSet::from_gaps([(1.0, 1.4)]).unwrap(), 0.1).unwrap();
    let svg = PrivalovDomain::new(set).unwrap().to_svg(400);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let plain = PrivalovDomain::new(ArcSet::full_circle()).unwrap().to_svg(400);
    assert!(plain.contains("<circle"));
    let j = joukowski_svg(&JoukowskiMap::new(0.1).unwrap(), FRAC_PI_4, 400);
    assert!(j.starts_with("<svg"));
}

/// Nearest distance from `z` to `count` sampled points of each boundary piece.
fn sampled_distance(d: &PrivalovDomain, z: Complex64, count: usize) -> f64 {
    let mut best = f64::INFINITY;
    for (a, len) in d.set().arcs() {
        for k in 0..=count {
            let p = Complex64::from_polar(1.0, a + len * k as f64 / count as f64);
            best = best.min((z - p).norm());
        }
    }
    for g in d.geodesics() {
        for k in 0..=count {
            best = best.min((z - g.point(k as f64 / count as f64)).norm());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn joukowski_round_trip(l in prop::sample::select(vec![0.01, 0.05, 0.1, 0.3, 0.5]),
                            r in 1.0f64..20.0, t in 0.0f64..PI) {
        let m = JoukowskiMap::new(l).unwrap();
        let z = Complex64::from_polar(l * r, t);
        prop_assume!(m.contains(z));
        let w = m.forward(z).unwrap();
        prop_assert!(w.im > 0.0);
        let back = m.inverse(w).unwrap();
        prop_assert!((back - z).norm() <= 1e-10 * z.norm().max(1.0));
    }

    #[test]
    fn joukowski_image_is_upper_exactly_on_domain(l in 0.01f64..=0.5, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let m = JoukowskiMap::new(l).unwrap();
        let z = c(re, im);
        prop_assume!((z.norm() - l).abs() > 1e-9 && im.abs() > 1e-9);
        let w = m.forward(z).unwrap();
        // The upper half of the annulus and the lower half-disk both map up.
        let upper = im > 0.0 && z.norm() > l || im < 0.0 && z.norm() < l;
        prop_assert_eq!(w.im > 0.0, upper);
        if m.contains(z) {
            // Holomorphic, so the Jacobian is |φ'|² and positive when φ' ≠ 0.
            let dz = 1e-7 * z.norm();
            let jx = (m.forward(z + dz).unwrap() - w) / dz;
            prop_assert!(jx.norm() > 0.0);
        }
    }

    #[test]
    fn distortion_within_bounds(r1 in 0.0f64..=1.0, t1 in -PI / 2.0..=PI / 2.0,
                                r2 in 0.0f64..=1.0, t2 in -PI / 2.0..=PI / 2.0) {
        let (z1, z2) = (Complex64::from_polar(r1, t1), Complex64::from_polar(r2, t2));
        prop_assume!(z1 != z2 && z1.re >= 0.0 && z2.re >= 0.0);
        let q = distortion_ratio(z1, z2).unwrap();
        prop_assert!((0.5..=2.0).contains(&q), "{}", q);
    }

    #[test]
    fn geodesics_are_orthogonal_and_covariant(a in 0.0f64..TAU, len in 1e-6f64..3.0, phi in -PI..PI) {
        let g = geodesic_for_gap(a, a + len).unwrap();
        prop_assert!(g.orthogonality_defect() <= 1e-12);
        let r = geodesic_for_gap(a + phi, a + len + phi).unwrap();
        prop_assert!((r.center - g.center * Complex64::from_polar(1.0, phi)).norm() <= 1e-12 * g.center.norm());
        prop_assert!((r.radius - g.radius).abs() <= 1e-12 * g.radius.max(1.0));
    }

    #[test]
    fn gap_scale_is_comparable(a in 0.0f64..TAU, len in 1e-6f64..PI) {
        let l = gap_half_plane_scale(a, a + len).unwrap();
        prop_assert!(len / 2.0 <= 2.0 * l && 2.0 * l <= 2.0 * len);
        // The gap endpoints land on ±L after rotation and Cayley.
        let end = rotate_to_gap_midpoint(a, a + len, Complex64::from_polar(1.0, a + len));
        let w = cayley(end).unwrap();
        prop_assert!((w.re.abs() - l).abs() <= 1e-9 * l.max(1.0) && w.im.abs() <= 1e-9);
    }

    #[test]
    fn distance_never_exceeds_sampled_distance(
        gaps in prop::collection::vec((0.0f64..TAU, 0.01f64..0.1), 1..6),
        r in 0.0f64..0.999, t in 0.0f64..TAU,
    ) {
        let set = ArcSet::from_gaps(gaps.into_iter().map(|(a, l)| (a, a + l)));
        prop_assume!(set.is_ok());
        let d = PrivalovDomain::new(set.unwrap()).unwrap();
        let z = Complex64::from_polar(r, t);
        prop_assume!(d.membership(z) == Membership::Inside);
        let dist = d.distance_to_boundary(z).unwrap();
        prop_assert!(dist > 0.0);
        prop_assert!(dist <= sampled_distance(&d, z, 10_000) + 1e-15);
    }
}
