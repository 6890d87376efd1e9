use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

use num_complex::Complex64;
use privalov::circle_sets::{build_cantor_set, split_long_gaps, ArcSet};
use privalov::conformal::{BoundaryHit, PrivalovDomain};
use privalov::harmonic_measure::*;
use privalov::majorants::RegularMajorant;
use proptest::prelude::*;

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

fn cfg(samples: u64, seed: u64) -> WosConfig {
    WosConfig {
        samples,
        seed,
        ..WosConfig::default()
    }
}

// Reference values of (1/π)[arctan u − arctan(u cos t)], u = 2L/(1−L²),
// from a 30-digit evaluation of the integral.
const ARC_HALF_PI: f64 = 0.063_451_034_861_1;
const ARC_QUARTER_PI: f64 = 0.018_286_073_030_6;

#[test]
fn arc_measure_reference_values() {
    assert!((arc_measure_exact(0.1, FRAC_PI_2).unwrap() - ARC_HALF_PI).abs() < 1e-12);
    assert!((arc_measure_exact(0.1, FRAC_PI_4).unwrap() - ARC_QUARTER_PI).abs() < 1e-12);
    assert!((arc_measure_bound(0.1, FRAC_PI_2).unwrap() - 0.064_305_027_5).abs() < 1e-10);
    assert!((arc_measure_bound(0.1, FRAC_PI_4).unwrap() - 0.018_834_506_5).abs() < 1e-10);
    assert!(arc_measure_exact(0.1, 1e-9).unwrap() < 1e-18);
}

#[test]
fn arc_measure_matches_quadrature_of_the_density() {
    // ∫ (1/π)/(1+s²) ds over [u cos t, u] by composite Simpson.
    for &(l, t) in &[(0.1, FRAC_PI_4), (0.37, 1.2), (0.5, 0.05)] {
        let u: f64 = 2.0 * l / (1.0 - l * l);
        let (lo, hi) = (u * t.cos(), u);
        let n = 2000;
        let step = (hi - lo) / n as f64;
        let f = |s: f64| 1.0 / (PI * (1.0 + s * s));
        let mut acc = f(lo) + f(hi);
        for k in 1..n {
            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(lo + k as f64 * step);
        }
        let simpson = acc * step / 3.0;
        assert!((arc_measure_exact(l, t).unwrap() - simpson).abs() < 1e-13, "{l} {t}");
    }
}

#[test]
fn halfplane_examples() {
    assert_eq!(halfplane_measure(f64::NEG_INFINITY, f64::INFINITY).unwrap(), 1.0);
    assert!((halfplane_measure(0.0, 1.0).unwrap() - 0.25).abs() < 1e-16);
    assert_eq!(halfplane_measure(0.0, f64::INFINITY).unwrap(), 0.5);
}

#[test]
fn disk_halves_and_whole() {
    let disk = PrivalovDomain::new(ArcSet::full_circle()).unwrap();
    let est = wos_estimate(
        &disk,
        ORIGIN,
        2,
        |hit| usize::from(hit.point().im < 0.0),
        &cfg(20_000, 3),
    )
    .unwrap();
    for c in &est.components {
        assert!((c.value - 0.5).abs() <= 3.0 * c.stderr, "{c:?}");
    }
    let total: u64 = est.hits_by_component.iter().sum();
    assert_eq!(total + est.aborted, est.samples);
    let whole = wos_estimate(&disk, ORIGIN, 1, |_| 0, &cfg(1000, 0)).unwrap();
    assert_eq!(whole.components[0].value, 1.0);
}

#[test]
fn arc_measure_by_walks() {
    let est = arc_measure_wos(0.1, FRAC_PI_4, &cfg(100_000, 0)).unwrap();
    assert!((est.value - ARC_QUARTER_PI).abs() <= 3.0 * est.stderr, "{est:?}");
}

#[test]
fn walks_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| arc_measure_wos(0.2, 1.0, &cfg(20_000, 11)).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, arc_measure_wos(0.2, 1.0, &cfg(20_000, 11)).unwrap());
    assert_ne!(one, arc_measure_wos(0.2, 1.0, &cfg(20_000, 12)).unwrap());
}

#[test]
fn start_too_close_to_boundary_is_a_contract_error() {
    let disk = PrivalovDomain::new(ArcSet::full_circle()).unwrap();
    let z = Complex64::new(1.0 - 1e-7, 0.0);
    assert!(matches!(simulate_walks(&disk, z, &cfg(10, 0)), Err(privalov::Error::Contract(_))));
}

#[test]
fn e_component_is_dominated_by_normalized_length() {
    let set = split_long_gaps(&build_cantor_set(&RegularMajorant::sqrt(), PI, 3).unwrap(), 0.1).unwrap();
    let domain = PrivalovDomain::new(set.clone()).unwrap();
    let est = wos_estimate(
        &domain,
        ORIGIN,
        2,
        |hit| usize::from(!matches!(hit, BoundaryHit::OnE { .. })),
        &cfg(20_000, 5),
    )
    .unwrap();
    let on_e = est.components[0];
    assert!(on_e.value <= set.measure() / (2.0 * PI) + 3.0 * on_e.stderr, "{on_e:?}");
}

#[test]
fn subordination_cases() {
    let single = ArcSet::from_gaps([(1.0, 1.08)]).unwrap();
    let r = subordination_check(&single, 0, GeodesicPiece::full(), &cfg(20_000, 1)).unwrap();
    // Same domain and seed: identical estimates.
    assert_eq!(r.in_set_domain, r.in_single_gap_domain);
    assert!(r.passed);

    let set = split_long_gaps(&build_cantor_set(&RegularMajorant::sqrt(), PI, 4).unwrap(), 0.1).unwrap();
    let largest = (0..set.num_gaps())
        .max_by(|&a, &b| {
            let len = |i: usize| set.gaps()[i].1 - set.gaps()[i].0;
            len(a).total_cmp(&len(b))
        })
        .unwrap();
    let r = subordination_check(&set, largest, GeodesicPiece::full(), &cfg(100_000, 0)).unwrap();
    assert!(r.passed, "{r:?}");
    assert!(r.in_set_domain.value <= r.in_single_gap_domain.value);

    let empty = GeodesicPiece { from: 0.5, to: 0.5 };
    let r = subordination_check(&set, 0, empty, &cfg(1000, 0)).unwrap();
    assert_eq!(r.in_set_domain.value, 0.0);
    assert_eq!(r.in_single_gap_domain.value, 0.0);
    assert!(r.passed);
}

#[test]
fn integrability_single_gap() {
    let set = ArcSet::from_gaps([(2.0, 2.1)]).unwrap();
    let r = integrability_functional(&set, &RegularMajorant::sqrt(), &cfg(50_000, 2)).unwrap();
    let g = &r.per_gap[0];
    assert!((g.bound - 8.0 * PI * 0.1f64.sqrt()).abs() < 1e-12);
    assert!((g.bound - 7.947).abs() < 1e-3);
    assert!(g.passed && r.passed);
    assert!(g.hits > 0);
}

#[test]
fn integrability_of_zero_majorant_vanishes() {
    let set = split_long_gaps(&build_cantor_set(&RegularMajorant::sqrt(), PI, 3).unwrap(), 0.1).unwrap();
    let r = integrability_functional(&set, &RegularMajorant::zero(), &cfg(5_000, 0)).unwrap();
    assert_eq!(r.total, 0.0);
    assert!(r.passed);
}

#[test]
fn subharmonicity_examples() {
    let set = split_long_gaps(&build_cantor_set(&RegularMajorant::sqrt(), PI, 4).unwrap(), 0.1).unwrap();
    let one = Polynomial::constant(Complex64::new(1.0, 0.0));
    let r = subharmonicity_check(&one, &set, &cfg(2_000, 0)).unwrap();
    assert_eq!(r.log_abs_at_origin, 0.0);
    assert_eq!(r.boundary_mean.mean, 0.0);
    assert!(r.passed);

    let shifted = Polynomial::new(vec![Complex64::new(-2.0, 0.0), Complex64::new(1.0, 0.0)]);
    let r = subharmonicity_check(&shifted, &set, &cfg(50_000, 0)).unwrap();
    assert!((r.log_abs_at_origin - LN_2).abs() < 1e-15);
    assert!(r.passed, "{r:?}");

    // Mean value equality on the circle itself.
    let r = subharmonicity_check(&shifted, &ArcSet::full_circle(), &cfg(50_000, 0)).unwrap();
    assert!((r.boundary_mean.mean - LN_2).abs() <= 3.0 * r.boundary_mean.stderr, "{r:?}");
}

#[test]
fn zero_polynomial_is_rejected() {
    let zero = Polynomial::new(vec![Complex64::new(0.0, 0.0)]);
    assert!(subharmonicity_check(&zero, &ArcSet::full_circle(), &cfg(10, 0)).is_err());
}

#[test]
fn polynomial_with_root_at_origin_is_trivial() {
    let p = Polynomial::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    let r = subharmonicity_check(&p, &ArcSet::full_circle(), &cfg(100, 0)).unwrap();
    assert!(r.trivial && r.passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn exact_arc_measure_is_below_the_bound(l in 1e-4f64..=0.5, t in 1e-6f64..=FRAC_PI_2) {
        prop_assert!(arc_measure_exact(l, t).unwrap() <= arc_measure_bound(l, t).unwrap() + 1e-12);
    }

    #[test]
    fn exact_arc_measure_increases_in_t(l in 1e-3f64..=0.5, t in 1e-3f64..1.5, dt in 1e-3f64..0.07) {
        prop_assert!(arc_measure_exact(l, t + dt).unwrap() > arc_measure_exact(l, t).unwrap());
    }

    // Increasing in L while (2L/(1−L²))² cos t ≤ 1.
    #[test]
    fn exact_arc_measure_increases_in_l_below_unit_scale(l in 1e-3f64..0.4, dl in 1e-4f64..0.014, t in 1e-3f64..=FRAC_PI_2) {
        prop_assert!(arc_measure_exact(l + dl, t).unwrap() > arc_measure_exact(l, t).unwrap());
    }

    #[test]
    fn exact_arc_measure_decreases_in_l_beyond_unit_scale(l in 0.42f64..0.49, dl in 1e-4f64..0.01, t in 1e-3f64..0.3) {
        let u = |l: f64| 2.0 * l / (1.0 - l * l);
        prop_assume!(u(l).powi(2) * t.cos() > 1.0);
        prop_assert!(arc_measure_exact(l + dl, t).unwrap() < arc_measure_exact(l, t).unwrap());
    }
}
