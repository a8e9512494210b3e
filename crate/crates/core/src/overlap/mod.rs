//! Overlap integrals `∫ J_nu(p rho) J_mu(p' rho) rho d rho` of Bessel modes.
//!
//! Closed forms for the equal-order and the `(delta, -delta)` case, and a
//! numeric path (windowed quadrature, two-scale averaging, delta-coefficient
//! fit) that checks them independently.

mod quadrature;

use alloc::vec::Vec;
use core::f64::consts::PI;

use quadrature::PanelIntegrator;
pub use quadrature::{Quadrature, QuadratureConfig};

use crate::error::{Error, Result};
use crate::flux::{EquationKind, FluxParameter};
use crate::linalg::solve_in_place;
use crate::modes::{make_schrodinger_mode, ModeKind, RadialMode};
use crate::specfun::{bessel_j_unbounded, cos_pi, sin_pi, MAX_ORDER};

/// Minimum relative momentum separation for numeric finite parts.
pub const MIN_SEPARATION: f64 = 1e-3;

/// Distributional overlap `delta_coeff * δ(p-p')/sqrt(p p') + finite_part`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapResult {
    pub delta_coeff: f64,
    pub finite_part: f64,
    pub est_error: f64,
}

/// Numeric finite part with its spread-based error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinitePartEstimate {
    pub value: f64,
    pub est_error: f64,
    pub panels: usize,
}

/// Least-squares decomposition of the windowed overlap near a base window.
///
/// `W(L) ≈ constant + (amplitude sin(ΔL) + phase cos(ΔL)) / (πΔ sqrt(p p'))
/// + fast terms`, with `Δ = p - p'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFit {
    pub amplitude: f64,
    pub phase: f64,
    pub constant: f64,
    pub rms_residual: f64,
}

fn check_momentum(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain {
            what: "momenta must be positive and finite",
        });
    }
    Ok(())
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu > -1.0 && nu <= MAX_ORDER) {
        return Err(Error::Domain {
            what: "overlap orders must lie in (-1, 8]",
        });
    }
    Ok(())
}

fn check_separation(p: f64, p_prime: f64, floor: f64) -> Result<()> {
    if (p - p_prime).abs() <= floor * p.max(p_prime) {
        return Err(Error::EqualMomenta { p, p_prime });
    }
    Ok(())
}

/// Equal orders: `δ(p-p')/sqrt(p p')` with no finite part.
pub fn closed_form_same(nu: f64, p: f64, p_prime: f64) -> Result<OverlapResult> {
    check_order(nu)?;
    check_momentum(p)?;
    check_momentum(p_prime)?;
    Ok(OverlapResult {
        delta_coeff: 1.0,
        finite_part: 0.0,
        est_error: 0.0,
    })
}

/// `∫ J_delta(p rho) J_{-delta}(p' rho) rho d rho`
/// `= cos(π delta) δ(p-p')/sqrt(p p') + 2 sin(π delta) (p/p')^delta / (π (p² - p'²))`.
pub fn closed_form_cross(delta_order: f64, p: f64, p_prime: f64) -> Result<OverlapResult> {
    if !(delta_order > 0.0 && delta_order < 1.0) {
        return Err(Error::Domain {
            what: "cross overlap needs 0 < delta < 1",
        });
    }
    check_momentum(p)?;
    check_momentum(p_prime)?;
    check_separation(p, p_prime, 1e-12)?;
    // p² - p'² factored to avoid cancellation
    let denom = PI * (p - p_prime) * (p + p_prime);
    let finite = 2.0 * sin_pi(delta_order) * libm::pow(p / p_prime, delta_order) / denom;
    Ok(OverlapResult {
        delta_coeff: cos_pi(delta_order),
        finite_part: finite,
        est_error: 0.0,
    })
}

fn bessel_product(nu: f64, mu: f64, p: f64, p_prime: f64) -> impl Fn(f64) -> f64 {
    move |t: f64| t * bessel_j_unbounded(nu, p * t) * bessel_j_unbounded(mu, p_prime * t)
}

fn quasi_period(p: f64, p_prime: f64) -> f64 {
    PI / p.max(p_prime)
}

/// `∫_0^L J_nu(p rho) J_mu(p' rho) rho d rho` by panel quadrature.
pub fn windowed_overlap(
    nu: f64,
    mu: f64,
    p: f64,
    p_prime: f64,
    length: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature> {
    check_order(nu)?;
    check_order(mu)?;
    check_momentum(p)?;
    check_momentum(p_prime)?;
    cfg.validate()?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Domain {
            what: "window length must be positive",
        });
    }
    let f = bessel_product(nu, mu, p, p_prime);
    let mut q = PanelIntegrator::new(cfg, quasi_period(p, p_prime), length);
    q.integrate(&f, 0.0, length)
}

/// `P(U + V > s)` for independent `U ~ U[0, a]`, `V ~ U[0, b]`, `a >= b`.
fn survival(s: f64, a: f64, b: f64) -> f64 {
    let cdf = if s <= 0.0 {
        0.0
    } else if s <= b {
        s * s / (2.0 * a * b)
    } else if s <= a {
        (2.0 * s - b) / (2.0 * a)
    } else if s < a + b {
        let r = a + b - s;
        1.0 - r * r / (2.0 * a * b)
    } else {
        1.0
    };
    1.0 - cdf
}

/// Two-scale average of `W(L) = ∫_0^L f` over one slow and one fast period
/// at the base windows `{L0, 1.5 L0, 2 L0}`.
///
/// The double average `E[W(L + U + V)]` equals `W(L) + ∫ f(L+s) P(U+V > s) ds`.
fn two_scale_average<F: Fn(f64) -> f64>(
    f: &F,
    p: f64,
    p_prime: f64,
    cfg: &QuadratureConfig,
) -> Result<FinitePartEstimate> {
    cfg.validate()?;
    let slow = 2.0 * PI / (p - p_prime).abs();
    let fast = 2.0 * PI / (p + p_prime);
    let base = cfg.window_factor * slow;
    let bases = [base, 1.5 * base, 2.0 * base];
    let span = bases[2] + 3.0 * (slow + fast);
    let mut q = PanelIntegrator::new(cfg, quasi_period(p, p_prime), span);

    let mut averages = [0.0; 3];
    let mut quad_error = 0.0;
    let mut cumulative = 0.0;
    let mut left = 0.0;
    for (avg, &l0) in averages.iter_mut().zip(bases.iter()) {
        let w = q.integrate(f, left, l0)?;
        cumulative += w.value;
        quad_error += w.abs_error;
        left = l0;
        let weighted = |t: f64| f(t) * survival(t - l0, slow, fast);
        let mut tail = 0.0;
        for (lo, hi) in [(0.0, fast), (fast, slow), (slow, slow + fast)] {
            let piece = q.integrate(&weighted, l0 + lo, l0 + hi)?;
            tail += piece.value;
            quad_error += piece.abs_error;
        }
        *avg = cumulative + tail;
    }
    let value = (averages[0] + averages[1] + averages[2]) / 3.0;
    let hi = averages.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = averages.iter().copied().fold(f64::INFINITY, f64::min);
    let est_error = 0.5 * (hi - lo) + quad_error;
    if !(est_error <= 1e-3 * value.abs().max(1.0)) {
        return Err(Error::Convergence {
            what: "finite-part windows disagree",
        });
    }
    Ok(FinitePartEstimate {
        value,
        est_error,
        panels: q.panels(),
    })
}

/// Finite part of `∫ J_nu(p rho) J_mu(p' rho) rho d rho` from windowed
/// quadrature averaged over the slow and fast oscillation periods.
pub fn finite_part_estimate(
    nu: f64,
    mu: f64,
    p: f64,
    p_prime: f64,
    cfg: &QuadratureConfig,
) -> Result<FinitePartEstimate> {
    check_order(nu)?;
    check_order(mu)?;
    check_momentum(p)?;
    check_momentum(p_prime)?;
    check_separation(p, p_prime, MIN_SEPARATION)?;
    two_scale_average(&bessel_product(nu, mu, p, p_prime), p, p_prime, cfg)
}

/// Fits the slow oscillation of `W(L)` over two slow periods starting at the
/// base window; `amplitude` is the coefficient of `δ(p-p')/sqrt(p p')`.
pub fn fit_delta_coefficient(
    nu: f64,
    mu: f64,
    p: f64,
    p_prime: f64,
    cfg: &QuadratureConfig,
) -> Result<DeltaFit> {
    const SAMPLES: usize = 200;
    check_order(nu)?;
    check_order(mu)?;
    check_momentum(p)?;
    check_momentum(p_prime)?;
    check_separation(p, p_prime, MIN_SEPARATION)?;
    cfg.validate()?;
    let diff = p - p_prime;
    let sum = p + p_prime;
    let slow = 2.0 * PI / diff.abs();
    let start = cfg.window_factor * slow;
    let stop = start + 2.0 * slow;
    let f = bessel_product(nu, mu, p, p_prime);
    let mut q = PanelIntegrator::new(cfg, quasi_period(p, p_prime), stop);

    let norm = PI * diff * libm::sqrt(p * p_prime);
    let basis = |l: f64| {
        [
            libm::sin(diff * l) / norm,
            libm::cos(diff * l) / norm,
            1.0,
            libm::sin(sum * l),
            libm::cos(sum * l),
        ]
    };
    let mut normal = [0.0; 25];
    let mut rhs = [0.0; 5];
    let mut samples = Vec::with_capacity(SAMPLES + 1);
    let mut w = q.integrate(&f, 0.0, start)?.value;
    let mut left = start;
    for j in 0..=SAMPLES {
        let l = start + 2.0 * slow * j as f64 / SAMPLES as f64;
        w += q.integrate(&f, left, l)?.value;
        left = l;
        let row = basis(l);
        for r in 0..5 {
            for c in 0..5 {
                normal[5 * r + c] += row[r] * row[c];
            }
            rhs[r] += row[r] * w;
        }
        samples.push((l, w));
    }
    solve_in_place(&mut normal, &mut rhs, 5)?;
    let ss: f64 = samples
        .iter()
        .map(|&(l, w)| {
            let row = basis(l);
            let model: f64 = row.iter().zip(rhs.iter()).map(|(x, c)| x * c).sum();
            (w - model) * (w - model)
        })
        .sum();
    Ok(DeltaFit {
        amplitude: rhs[0],
        phase: rhs[1],
        constant: rhs[2],
        rms_residual: libm::sqrt(ss / samples.len() as f64),
    })
}

fn check_same_channel(mode_a: &RadialMode, mode_b: &RadialMode) -> Result<()> {
    if mode_a.kind != ModeKind::SchrodingerChannel || mode_b.kind != ModeKind::SchrodingerChannel {
        return Err(Error::ChannelMismatch {
            what: "overlap finite parts are defined for Schrödinger modes",
        });
    }
    if mode_a.l != mode_b.l {
        return Err(Error::ChannelMismatch {
            what: "modes live in different angular channels",
        });
    }
    if mode_a.flux.phi() != mode_b.flux.phi() {
        return Err(Error::ChannelMismatch {
            what: "modes carry different fluxes",
        });
    }
    Ok(())
}

/// Finite part of `∫ R_a(rho) R_b(rho) rho d rho` for two modes of one channel,
/// assembled from the two cross terms `a_a b_b` and `b_a a_b`.
pub fn mode_overlap_finite_part(mode_a: &RadialMode, mode_b: &RadialMode) -> Result<f64> {
    check_same_channel(mode_a, mode_b)?;
    check_separation(mode_a.p, mode_b.p, 1e-12)?;
    let first = mode_a.a * mode_b.b;
    let second = mode_a.b * mode_b.a;
    if first == 0.0 && second == 0.0 {
        return Ok(0.0);
    }
    let nu = mode_a.order;
    let mut total = 0.0;
    if first != 0.0 {
        // J_nu at p_a against J_-nu at p_b
        total += first * closed_form_cross(nu, mode_a.p, mode_b.p)?.finite_part;
    }
    if second != 0.0 {
        total += second * closed_form_cross(nu, mode_b.p, mode_a.p)?.finite_part;
    }
    Ok(total)
}

/// Same quantity as [`mode_overlap_finite_part`] from quadrature of the mode
/// product itself.
pub fn mode_overlap_finite_part_numeric(
    mode_a: &RadialMode,
    mode_b: &RadialMode,
    cfg: &QuadratureConfig,
) -> Result<FinitePartEstimate> {
    check_same_channel(mode_a, mode_b)?;
    check_separation(mode_a.p, mode_b.p, MIN_SEPARATION)?;
    let f = |t: f64| match (mode_a.evaluate(t), mode_b.evaluate(t)) {
        (Ok(x), Ok(y)) => t * x * y,
        _ => f64::NAN,
    };
    two_scale_average(&f, mode_a.p, mode_b.p, cfg)
}

/// Recovers the exponent `k` in `b/a ∝ p^k` that makes every pairwise finite
/// part vanish, by a least-squares fit of `log β` against `log p`.
pub fn fit_cancelling_exponent(flux: &FluxParameter, channel: i64, momenta: &[f64]) -> Result<f64> {
    if !flux.is_critical(channel, EquationKind::Schrodinger) {
        return Err(Error::NonCriticalChannel { l: channel });
    }
    let mut distinct: Vec<f64> = Vec::with_capacity(momenta.len());
    for &p in momenta {
        check_momentum(p)?;
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    if distinct.len() < 3 {
        return Err(Error::InsufficientSamples {
            got: distinct.len(),
        });
    }
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, &pi) in distinct.iter().enumerate() {
        for &pj in &distinct[i + 1..] {
            let reference = make_schrodinger_mode(channel, flux, pi, 1.0, 1.0)?;
            // the finite part is affine in the second mode's b coefficient
            let f0 = mode_overlap_finite_part(
                &reference,
                &make_schrodinger_mode(channel, flux, pj, 1.0, 0.0)?,
            )?;
            let f1 = mode_overlap_finite_part(
                &reference,
                &make_schrodinger_mode(channel, flux, pj, 1.0, 1.0)?,
            )?;
            let slope = f1 - f0;
            if slope == 0.0 || !slope.is_finite() {
                return Err(Error::SingularFit);
            }
            let ratio = -f0 / slope;
            if !(ratio > 0.0 && ratio.is_finite()) {
                return Err(Error::SingularFit);
            }
            let x = libm::log(pj / pi);
            sxy += libm::log(ratio) * x;
            sxx += x * x;
        }
    }
    if !(sxx > 0.0) {
        return Err(Error::SingularFit);
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::decompose;

    #[test]
    fn closed_form_examples() {
        let r = closed_form_same(0.5, 1.0, 2.0).unwrap();
        assert_eq!((r.delta_coeff, r.finite_part, r.est_error), (1.0, 0.0, 0.0));
        assert!(closed_form_same(0.3, 1.0, 1.0).is_ok());
        assert!(matches!(
            closed_form_same(-1.2, 1.0, 2.0),
            Err(Error::Domain { .. })
        ));

        let r = closed_form_cross(0.5, 2.0, 1.0).unwrap();
        assert_eq!(r.delta_coeff, 0.0);
        let exact = 2.0 * core::f64::consts::SQRT_2 / (3.0 * PI);
        assert!((r.finite_part - exact).abs() < 1e-15);
        let r = closed_form_cross(0.25, 1.0, 2.0).unwrap();
        assert!((r.delta_coeff - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((r.finite_part + 0.126_178).abs() < 1e-6);
        assert!(matches!(
            closed_form_cross(0.5, 1.0, 1.0),
            Err(Error::EqualMomenta { .. })
        ));
    }

    #[test]
    fn survival_is_a_tail_probability() {
        let (a, b) = (3.0, 1.0);
        assert_eq!(survival(0.0, a, b), 1.0);
        assert_eq!(survival(4.0, a, b), 0.0);
        // mean of U + V
        let n = 100_000;
        let h = (a + b) / n as f64;
        let mean: f64 = (0..n)
            .map(|k| survival((k as f64 + 0.5) * h, a, b) * h)
            .sum();
        assert!((mean - 0.5 * (a + b)).abs() < 1e-8);
    }

    #[test]
    fn no_cross_terms() {
        let flux = decompose(2.3).unwrap();
        let m1 = make_schrodinger_mode(2, &flux, 1.0, 1.0, 0.0).unwrap();
        let m2 = make_schrodinger_mode(2, &flux, 2.0, 1.0, 0.0).unwrap();
        assert_eq!(mode_overlap_finite_part(&m1, &m2).unwrap(), 0.0);
        let m3 = make_schrodinger_mode(3, &flux, 2.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            mode_overlap_finite_part(&m1, &m3),
            Err(Error::ChannelMismatch { .. })
        ));
    }

    #[test]
    fn exponent_fit_errors() {
        let flux = decompose(0.3).unwrap();
        assert_eq!(
            fit_cancelling_exponent(&flux, 0, &[1.0, 2.0]),
            Err(Error::InsufficientSamples { got: 2 })
        );
        assert_eq!(
            fit_cancelling_exponent(&flux, 0, &[1.0, 2.0, 2.0]),
            Err(Error::InsufficientSamples { got: 2 })
        );
        assert_eq!(
            fit_cancelling_exponent(&flux, 2, &[1.0, 2.0, 3.0]),
            Err(Error::NonCriticalChannel { l: 2 })
        );
    }
}
