use abext_core::flux::decompose;
use abext_core::fluxshell::{
    g_from_alpha, limit_ratio, matching_ratio, piecewise_solution, resonance_defect, solve_g,
    FluxShellProblem,
};
use abext_core::sae::{ExtensionChannel, ExtensionParameter};
use abext_core::Error;
use proptest::prelude::*;

fn problem(l: i64, phi: f64, g: f64, rho0: f64, p: f64) -> FluxShellProblem {
    FluxShellProblem {
        rho0,
        g,
        l,
        flux: decompose(phi).unwrap(),
        p,
        mass: 1.0,
    }
}

/// One-sided derivative, second-order stencil with one Richardson step.
fn one_sided_derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

#[test]
fn continuity_at_the_shell() {
    let prob = problem(2, 1.3, 0.7, 0.8, 1.4);
    let sol = piecewise_solution(&prob, 1.0, -0.3).unwrap();
    let inside = sol.evaluate(0.8 * (1.0 - 1e-15)).unwrap();
    let outside = sol.evaluate(0.8).unwrap();
    assert!((inside - outside).abs() <= 1e-12 * outside.abs().max(1.0));
}

#[test]
fn free_limit_has_one_bessel_function() {
    // g = 0, b = 0, l = 0 and a tiny flux: both sides are J_0 up to a constant
    let prob = problem(0, 1e-9, 0.0, 1.0, 1.0);
    let sol = piecewise_solution(&prob, 1.0, 0.0).unwrap();
    assert!((sol.c - 1.0).abs() < 1e-8);
    for rho in [0.3, 0.9, 1.5, 4.0] {
        let j0 = abext_core::specfun::bessel_j(0.0, rho).unwrap();
        assert!((sol.evaluate(rho).unwrap() - j0).abs() < 1e-8);
    }
}

#[test]
fn matching_ratio_examples() {
    let exact = matching_ratio(&problem(1, 0.3, 0.0, 1e-2, 1.0)).unwrap();
    let limit = limit_ratio(&problem(1, 0.3, 0.0, 1e-2, 1.0)).unwrap();
    assert!((exact / limit - 1.0).abs() < 1e-2);
    let r = matching_ratio(&problem(0, 0.3, 0.0, 1e-2, 1.0)).unwrap();
    let scaled = r / 0.005f64.powf(0.6);
    assert!(r.abs() < 0.1 && (scaled - 1.4464).abs() < 1e-2, "{r}");
}

#[test]
fn limit_agreement_grid() {
    for delta in [0.3, 0.7] {
        for n in [-1i64, 0, 2] {
            let phi = n as f64 + delta;
            let flux = decompose(phi).unwrap();
            for l in [n - 1, n, n + 1, n + 2] {
                for g in [0.0, 0.5, -0.5] {
                    if resonance_defect(l, &flux, g).abs() < 0.1 {
                        continue;
                    }
                    let prob = problem(l, phi, g, 1e-3, 1.0);
                    let ratio = matching_ratio(&prob).unwrap() / limit_ratio(&prob).unwrap();
                    assert!(
                        (ratio - 1.0).abs() <= 0.01,
                        "l={l} g={g} phi={phi}: {ratio}"
                    );
                }
            }
        }
    }
}

#[test]
fn dictionary_round_trip() {
    for (channel, exponent_of) in [
        (
            ExtensionChannel::SchrodingerN,
            (|d: f64| 2.0 * d) as fn(f64) -> f64,
        ),
        (ExtensionChannel::SchrodingerNPlus1, |d: f64| {
            2.0 * (1.0 - d)
        }),
    ] {
        for phi in [0.3, 1.5, -1.6, 2.8] {
            let flux = decompose(phi).unwrap();
            for alpha in [0.1, 1.0, 10.0] {
                let ep = ExtensionParameter::finite(channel, alpha).unwrap();
                for k in 0..=12 {
                    let rho0 = 1e-4 * 1000f64.powf(k as f64 / 12.0);
                    let g = g_from_alpha(&ep, &flux, rho0, 1.0).unwrap();
                    let p = 0.7;
                    let prob = FluxShellProblem {
                        rho0,
                        g,
                        l: channel.angular_momentum(&flux),
                        flux,
                        p,
                        mass: 1.0,
                    };
                    let expected = alpha * p.powf(exponent_of(flux.delta()));
                    let got = limit_ratio(&prob).unwrap();
                    assert!(
                        (got / expected - 1.0).abs() < 1e-6,
                        "{channel:?} phi={phi} alpha={alpha}: {got} vs {expected}"
                    );
                }
            }
        }
    }
}

#[test]
fn resonance_emerges_as_the_shell_shrinks() {
    for n in [0, 1] {
        let flux = decompose(n as f64 + 0.5).unwrap();
        for alpha in [0.5, 1.0, 10.0] {
            let ep = ExtensionParameter::finite(ExtensionChannel::SchrodingerN, alpha).unwrap();
            let defect = |rho0: f64| {
                resonance_defect(n, &flux, g_from_alpha(&ep, &flux, rho0, 1.0).unwrap()).abs()
            };
            assert!(defect(1e-3) <= 1e-2);
            assert!(defect(1e-5) < defect(1e-3) && defect(1e-7) < defect(1e-5));
        }
    }
}

#[test]
fn hard_core_limit_for_free_particles() {
    for l in -3..=4 {
        let ratio = |rho0: f64| {
            matching_ratio(&problem(l, 1.3, 0.0, rho0, 1.0))
                .unwrap()
                .abs()
        };
        assert!(ratio(1e-6) < ratio(1e-3) && ratio(1e-6) < 1e-3, "l = {l}");
    }
}

#[test]
fn solve_g_finds_the_numerator_zero() {
    // the numerator vanishes at g phi = |l| - nu in the small-radius limit
    let template = problem(1, 0.3, 0.0, 1e-3, 1.0);
    let g = solve_g(&template, 0.0, -10.0, 10.0).unwrap();
    let expected = (1.0 - 0.7) / 0.3;
    assert!((g - expected).abs() < 1e-3, "{g}");
    assert!(matches!(
        solve_g(&template, 1e9, -1.0, 1.0),
        Err(Error::NoBracket { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn derivative_jump(l in -3i64..=3, phi in -2.9f64..2.9, g in -2.0f64..2.0, rho0 in 0.05f64..3.0, p in 0.2f64..3.0) {
        prop_assume!((phi - phi.round()).abs() > 1e-3);
        let prob = problem(l, phi, g, rho0, p);
        let ratio = matching_ratio(&prob);
        prop_assume!(ratio.is_ok());
        let sol = piecewise_solution(&prob, 1.0, ratio.unwrap());
        prop_assume!(sol.is_ok());
        let sol = sol.unwrap();
        let r = |x: f64| sol.evaluate(x).unwrap();
        let h = 1e-3 * rho0.min(1.0 / p);
        let outside = one_sided_derivative(r, rho0, h);
        let inside = -one_sided_derivative(|x| r(2.0 * rho0 - x), rho0 + 1e-300, h);
        let value = r(rho0);
        let expected = -g * phi * value / rho0;
        let scale = outside.abs() + inside.abs() + expected.abs() + value.abs() / rho0;
        prop_assert!((outside - inside - expected).abs() <= 1e-8 * scale,
            "jump {} expected {} scale {}", outside - inside, expected, scale);
    }

    #[test]
    fn solve_g_round_trip(l in -2i64..=3, phi in 0.1f64..2.9, g_star in -3.0f64..3.0, rho0 in 0.01f64..1.0) {
        prop_assume!((phi - phi.round()).abs() > 1e-3);
        let template = problem(l, phi, 0.0, rho0, 1.0);
        let target = matching_ratio(&FluxShellProblem { g: g_star, ..template });
        prop_assume!(target.is_ok());
        let g = solve_g(&template, target.unwrap(), -10.0, 10.0).unwrap();
        prop_assert!((g - g_star).abs() <= 1e-8 * g_star.abs().max(1.0), "{} vs {}", g, g_star);
    }
}
