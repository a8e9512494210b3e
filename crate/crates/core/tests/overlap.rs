use std::f64::consts::PI;

use abext_core::flux::decompose;
use abext_core::modes::make_schrodinger_mode;
use abext_core::overlap::{
    closed_form_cross, finite_part_estimate, fit_cancelling_exponent, fit_delta_coefficient,
    mode_overlap_finite_part, mode_overlap_finite_part_numeric, windowed_overlap, QuadratureConfig,
};
use abext_core::specfun::bessel_j;
use abext_core::Error;
use proptest::prelude::*;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (1..=n)
        .map(|i| {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Fixed-rule oracle: 30-point Gauss-Legendre on panels ten times denser than
/// the library's quasi-period grid.
fn oracle_window(nu: f64, mu: f64, p: f64, q: f64, length: f64) -> f64 {
    let rule = gauss_legendre(30);
    let h = PI / p.max(q) / 10.0;
    let panels = (length / h).ceil() as usize;
    let h = length / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let c = (k as f64 + 0.5) * h;
        for &(x, w) in &rule {
            let t = c + 0.5 * h * x;
            total += 0.5 * h * w * t * bessel_j(nu, p * t).unwrap() * bessel_j(mu, q * t).unwrap();
        }
    }
    total
}

#[test]
fn half_order_windows() {
    let cfg = QuadratureConfig::default();
    let w = windowed_overlap(0.5, 0.5, 1.0, 2.0, PI, &cfg).unwrap();
    assert!(w.value.abs() < 1e-9, "{}", w.value);
    let w = windowed_overlap(0.5, 0.5, 1.0, 2.0, 1.0, &cfg).unwrap();
    let exact = 2f64.sqrt() / PI * 0.5 * (1f64.sin() - 3f64.sin() / 3.0);
    assert!((w.value - exact).abs() < 1e-9);
}

#[test]
fn window_matches_fixed_rule_oracle() {
    let cfg = QuadratureConfig::default();
    let w = windowed_overlap(0.3, -0.3, 1.3, 0.7, 50.0, &cfg).unwrap();
    let oracle = oracle_window(0.3, -0.3, 1.3, 0.7, 50.0);
    assert!((w.value - oracle).abs() < 1e-9, "{} vs {}", w.value, oracle);
    assert!(w.abs_error <= 1e-9);
}

#[test]
fn finite_parts_match_closed_forms() {
    let cfg = QuadratureConfig::default();
    let est = finite_part_estimate(0.5, -0.5, 2.0, 1.0, &cfg).unwrap();
    let exact = closed_form_cross(0.5, 2.0, 1.0).unwrap().finite_part;
    assert!((est.value - exact).abs() <= 3e-4, "{est:?}");
    assert!(est.est_error <= 3e-4);

    let est = finite_part_estimate(0.5, 0.5, 1.0, 2.0, &cfg).unwrap();
    assert!(est.value.abs() <= 3e-4, "{est:?}");

    // J_0.3 carries 0.7
    let est = finite_part_estimate(0.3, -0.3, 0.7, 1.3, &cfg).unwrap();
    let exact = closed_form_cross(0.3, 0.7, 1.3).unwrap().finite_part;
    assert!(
        (est.value - exact).abs() <= 1e-3 * exact.abs().max(1.0),
        "{est:?} vs {exact}"
    );
}

#[test]
fn delta_coefficients() {
    let cfg = QuadratureConfig::default();
    let fit = fit_delta_coefficient(0.25, -0.25, 1.0, 2.0, &cfg).unwrap();
    assert!((fit.amplitude - (PI * 0.25).cos()).abs() < 1e-2, "{fit:?}");
    let fit = fit_delta_coefficient(0.7, 0.7, 2.0, 3.0, &cfg).unwrap();
    assert!((fit.amplitude - 1.0).abs() < 1e-2, "{fit:?}");
}

#[test]
fn close_momenta_are_rejected() {
    let cfg = QuadratureConfig::default();
    assert!(matches!(
        finite_part_estimate(0.5, -0.5, 1.0, 1.0005, &cfg),
        Err(Error::EqualMomenta { .. })
    ));
}

#[test]
fn mode_overlap_examples() {
    let flux = decompose(0.3).unwrap();
    let (p, q) = (1.3, 0.7);
    let a = make_schrodinger_mode(0, &flux, p, 1.0, p.powf(0.6)).unwrap();
    let b = make_schrodinger_mode(0, &flux, q, 1.0, q.powf(0.6)).unwrap();
    assert!(mode_overlap_finite_part(&a, &b).unwrap().abs() <= 1e-12);

    let a = make_schrodinger_mode(0, &flux, p, 1.0, 1.0).unwrap();
    let b = make_schrodinger_mode(0, &flux, q, 1.0, 1.0).unwrap();
    let expected = closed_form_cross(0.3, p, q).unwrap().finite_part
        + closed_form_cross(0.3, q, p).unwrap().finite_part;
    let value = mode_overlap_finite_part(&a, &b).unwrap();
    assert!((value - expected).abs() < 1e-15 && value.abs() > 1e-2);

    let numeric = mode_overlap_finite_part_numeric(&a, &b, &QuadratureConfig::default()).unwrap();
    assert!(
        (numeric.value - value).abs() <= 1e-3,
        "{numeric:?} vs {value}"
    );
}

#[test]
fn exponent_recovery() {
    let flux = decompose(0.3).unwrap();
    let momenta = [0.5, 1.0, 2.0, 4.0];
    let k = fit_cancelling_exponent(&flux, 0, &momenta).unwrap();
    assert!((k - 0.6).abs() < 1e-10, "{k}");
    let k = fit_cancelling_exponent(&flux, 1, &momenta).unwrap();
    assert!((k - 1.4).abs() < 1e-10, "{k}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sae_coefficients_cancel(delta in 0.05f64..0.95, alpha in -10.0f64..10.0, p in 0.1f64..5.0, q in 0.1f64..5.0) {
        prop_assume!((p - q).abs() > 1e-3 * p.max(q));
        let flux = decompose(2.0 + delta).unwrap();
        for (l, nu) in [(2, delta), (3, 1.0 - delta)] {
            let a = make_schrodinger_mode(l, &flux, p, 1.0, alpha * p.powf(2.0 * nu)).unwrap();
            let b = make_schrodinger_mode(l, &flux, q, 1.0, alpha * q.powf(2.0 * nu)).unwrap();
            let scale = (alpha * q.powf(2.0 * nu) * closed_form_cross(nu, p, q).unwrap().finite_part).abs();
            let value = mode_overlap_finite_part(&a, &b).unwrap();
            prop_assert!(value.abs() <= 1e-12 * scale.max(1.0), "{} vs scale {}", value, scale);
        }
    }

    #[test]
    fn cross_terms_are_opposite_under_sae(delta in 0.05f64..0.95, p in 0.1f64..5.0, q in 0.1f64..5.0) {
        prop_assume!((p - q).abs() > 1e-3 * p.max(q));
        // a = 1, b = p^(2 delta): the two cross terms cancel pairwise
        let first = q.powf(2.0 * delta) * closed_form_cross(delta, p, q).unwrap().finite_part;
        let second = p.powf(2.0 * delta) * closed_form_cross(delta, q, p).unwrap().finite_part;
        prop_assert!((first + second).abs() <= 1e-12 * first.abs().max(1e-300));
    }

    #[test]
    fn closed_form_cross_swap(delta in 0.05f64..0.95, p in 0.1f64..5.0, q in 0.1f64..5.0) {
        prop_assume!((p - q).abs() > 1e-6 * p.max(q));
        let forward = closed_form_cross(delta, p, q).unwrap().finite_part;
        let backward = closed_form_cross(delta, q, p).unwrap().finite_part;
        // relabelling p <-> p' flips the sign and inverts (p/p')^delta
        let expected = -forward * (q / p).powf(2.0 * delta);
        prop_assert!((backward - expected).abs() <= 1e-13 * backward.abs());
    }
}
