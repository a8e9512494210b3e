//! Flux confined to a cylinder of radius `rho0` with a contact magnetic-moment
//! term of strength `g`: matching of interior and exterior solutions, the
//! small-radius limit of `b/a`, and the `g` values that reproduce a given
//! extension parameter.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::FluxParameter;
use crate::sae::{ExtensionChannel, ExtensionParameter, ExtensionValue};
use crate::specfun::dd::{two_prod, two_sum};
use crate::specfun::{bessel_j, bessel_j_prime, gamma};

/// Defects at or below this are treated as exact resonance.
pub const RESONANCE_THRESHOLD: f64 = 1e-12;

const SOLVE_SUBINTERVALS: usize = 64;
const SOLVE_MAX_ITER: usize = 200;

/// One angular channel of the shell model. Lengths in `1/M`, momenta in `M`
/// when `mass = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxShellProblem {
    pub rho0: f64,
    pub g: f64,
    pub l: i64,
    pub flux: FluxParameter,
    pub p: f64,
    pub mass: f64,
}

impl FluxShellProblem {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !(positive(self.rho0) && positive(self.p) && positive(self.mass)) {
            return Err(Error::Domain {
                what: "rho0, p and mass must be positive",
            });
        }
        if !self.g.is_finite() {
            return Err(Error::Domain {
                what: "g must be finite",
            });
        }
        Ok(())
    }

    fn with_g(&self, g: f64) -> Self {
        Self { g, ..*self }
    }

    /// Exterior Bessel order `|l - phi|`.
    pub fn nu(&self) -> f64 {
        self.flux.shifted(self.l).abs()
    }
}

/// `(|l| + |l-phi|, |l| - |l-phi|)`, each with a single rounding.
fn channel_sums(l: i64, flux: &FluxParameter) -> (f64, f64) {
    let phi = flux.phi();
    let two_l_minus_phi = (2 * l) as f64 - phi;
    match (l >= 0, flux.shifted(l) >= 0.0) {
        (true, true) => (two_l_minus_phi, phi),
        (true, false) => (phi, two_l_minus_phi),
        (false, true) => (-phi, -two_l_minus_phi),
        (false, false) => (-two_l_minus_phi, -phi),
    }
}

/// `a - g phi` with the product kept exact.
fn minus_g_phi(a: f64, g: f64, phi: f64) -> f64 {
    let (prod, prod_err) = two_prod(g, phi);
    let (diff, diff_err) = two_sum(a, -prod);
    diff + (diff_err - prod_err)
}

/// `|l - phi| + |l| - g phi`; zero marks a resonance of the channel.
pub fn resonance_defect(l: i64, flux: &FluxParameter, g: f64) -> f64 {
    minus_g_phi(channel_sums(l, flux).0, g, flux.phi())
}

/// Radial function with `c J_|l|` inside the shell and
/// `a J_nu + b J_-nu` outside, continuous at `rho0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseSolution {
    pub c: f64,
    pub a: f64,
    pub b: f64,
    problem: FluxShellProblem,
}

impl PiecewiseSolution {
    pub fn evaluate(&self, rho: f64) -> Result<f64> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain {
                what: "radius must be positive",
            });
        }
        let pr = &self.problem;
        let x = pr.p * rho;
        if rho < pr.rho0 {
            return Ok(self.c * bessel_j(pr.l.unsigned_abs() as f64, x)?);
        }
        let nu = pr.nu();
        let mut value = 0.0;
        if self.a != 0.0 {
            value += self.a * bessel_j(nu, x)?;
        }
        if self.b != 0.0 {
            value += self.b * bessel_j(-nu, x)?;
        }
        Ok(value)
    }
}

/// Fixes the interior amplitude by continuity at `rho0`.
pub fn piecewise_solution(prob: &FluxShellProblem, a: f64, b: f64) -> Result<PiecewiseSolution> {
    prob.validate()?;
    if !(a.is_finite() && b.is_finite()) || (a == 0.0 && b == 0.0) {
        return Err(Error::Domain {
            what: "exterior coefficients must be finite and not both zero",
        });
    }
    let x0 = prob.p * prob.rho0;
    let nu = prob.nu();
    let exterior_a = if a != 0.0 { a * bessel_j(nu, x0)? } else { 0.0 };
    let exterior_b = if b != 0.0 {
        b * bessel_j(-nu, x0)?
    } else {
        0.0
    };
    let interior = bessel_j(prob.l.unsigned_abs() as f64, x0)?;
    let scale = exterior_a.abs() + exterior_b.abs();
    if interior == 0.0 || interior.abs() <= 1e-14 * scale {
        return Err(Error::Degenerate {
            what: "interior Bessel function vanishes at the shell",
        });
    }
    Ok(PiecewiseSolution {
        c: (exterior_a + exterior_b) / interior,
        a,
        b,
        problem: *prob,
    })
}

/// Exact `b/a` imposed by continuity and the derivative jump
/// `rho0 (R'_out - R'_in) = -g phi R(rho0)`.
pub fn matching_ratio(prob: &FluxShellProblem) -> Result<f64> {
    prob.validate()?;
    let x0 = prob.p * prob.rho0;
    let nu = prob.nu();
    let order_l = prob.l.unsigned_abs() as f64;
    let jl = bessel_j(order_l, x0)?;
    let jl_prime = bessel_j_prime(order_l, x0)?;
    let shell = prob.g * prob.flux.phi() / x0 * jl;
    let bracket = jl_prime - shell;

    let jn = bessel_j(nu, x0)?;
    let jn_prime = bessel_j_prime(nu, x0)?;
    let jm = bessel_j(-nu, x0)?;
    let jm_prime = bessel_j_prime(-nu, x0)?;

    let numerator = jn_prime * jl - jn * bracket;
    let denominator = jm_prime * jl - jm * bracket;
    let scale = (jm_prime * jl).abs() + (jm * jl_prime).abs() + (jm * shell).abs();
    if !(denominator.abs() >= 1e-13 * scale) {
        return Err(Error::NumericalPole { denominator });
    }
    Ok(-numerator / denominator)
}

/// Leading small-`rho0` behaviour of [`matching_ratio`]:
/// `(nu - |l| + g phi)/(nu + |l| - g phi) * Γ(1-nu)/Γ(1+nu) * (p rho0/2)^(2 nu)`.
pub fn limit_ratio(prob: &FluxShellProblem) -> Result<f64> {
    prob.validate()?;
    let (plus, minus) = channel_sums(prob.l, &prob.flux);
    let phi = prob.flux.phi();
    let denominator = minus_g_phi(plus, prob.g, phi);
    if denominator.abs() <= RESONANCE_THRESHOLD {
        return Err(Error::Resonant {
            defect: denominator,
        });
    }
    let numerator = -minus_g_phi(minus, prob.g, phi);
    let nu = prob.nu();
    let x = 0.5 * prob.p * prob.rho0;
    let gammas = gamma(1.0 - nu)? / gamma(1.0 + nu)?;
    Ok(numerator / denominator * gammas * libm::pow(x, 2.0 * nu))
}

struct ChannelData {
    nu: f64,
    plus: f64,
    minus: f64,
    alpha: f64,
}

fn channel_data(ep: &ExtensionParameter, flux: &FluxParameter) -> Result<ChannelData> {
    if ep.channel == ExtensionChannel::DiracN {
        return Err(Error::ChannelMismatch {
            what: "the shell model is a Schrödinger model",
        });
    }
    let alpha = match ep.value {
        ExtensionValue::Finite(alpha) => alpha,
        ExtensionValue::Infinite => return Err(Error::InfiniteParameter),
    };
    let l = ep.channel.angular_momentum(flux);
    let (plus, minus) = channel_sums(l, flux);
    Ok(ChannelData {
        nu: flux.shifted(l).abs(),
        plus,
        minus,
        alpha,
    })
}

/// `K = Γ(1-nu)/Γ(1+nu)` times `(M rho0/2)^(2 nu)`.
fn shell_factor(nu: f64, rho0: f64, mass: f64) -> Result<f64> {
    if !(rho0 > 0.0 && rho0.is_finite() && mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain {
            what: "rho0 and mass must be positive",
        });
    }
    Ok(gamma(1.0 - nu)? / gamma(1.0 + nu)? * libm::pow(0.5 * mass * rho0, 2.0 * nu))
}

/// The `g` for which the small-radius limit of the shell model obeys the
/// extension condition `b/a = alpha (p/M)^(2 nu)` in the given channel.
///
/// Solves `limit_ratio = alpha (p/M)^(2 nu)` for `g`:
/// `g phi = (alpha (|l|+nu) + K (|l|-nu)) / (alpha + K)`.
pub fn g_from_alpha(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    rho0: f64,
    mass: f64,
) -> Result<f64> {
    let ch = channel_data(ep, flux)?;
    let k = shell_factor(ch.nu, rho0, mass)?;
    let phi = flux.phi();
    if ch.alpha == 0.0 {
        return Ok(ch.minus / phi);
    }
    let denominator = ch.alpha + k;
    if denominator.abs() <= 1e-14 * (ch.alpha.abs() + k.abs()) {
        return Err(Error::DegenerateDenominator);
    }
    Ok((ch.alpha * ch.plus + k * ch.minus) / (denominator * phi))
}

/// First-order small-radius form of `g` as printed in the literature:
/// channel `N`: `1 + (1/alpha) (N-delta)/(N+delta) Γ(-delta)/Γ(delta) (M rho0/2)^(2 delta)`,
/// channel `N+1`: `-1 - (1/alpha) (N+2-delta)/(N+delta) Γ(-1+delta)/Γ(1-delta) (M rho0/2)^(2(1-delta))`.
pub fn g_asymptotic(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    rho0: f64,
    mass: f64,
) -> Result<f64> {
    let ch = channel_data(ep, flux)?;
    if ch.alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    let e = printed_expansion(ep.channel, flux, ch.alpha)?;
    shell_factor(ch.nu, rho0, mass)?;
    Ok(e.0 + e.1 * libm::pow(0.5 * mass * rho0, 2.0 * ch.nu))
}

/// `(leading, coefficient)` of the printed first-order form.
fn printed_expansion(
    channel: ExtensionChannel,
    flux: &FluxParameter,
    alpha: f64,
) -> Result<(f64, f64)> {
    let n = flux.n() as f64;
    let delta = flux.delta();
    let phi = flux.phi();
    match channel {
        ExtensionChannel::SchrodingerN => Ok((
            1.0,
            (n - delta) / phi * gamma(-delta)? / gamma(delta)? / alpha,
        )),
        _ => Ok((
            -1.0,
            -(n + 2.0 - delta) / phi * gamma(-1.0 + delta)? / gamma(1.0 - delta)? / alpha,
        )),
    }
}

/// Expansion `g ≈ leading + coefficient (M rho0/2)^(2 nu)` of
/// [`g_from_alpha`] next to the printed first-order form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GExpansion {
    pub nu: f64,
    pub leading: f64,
    pub coefficient: f64,
    pub printed_leading: f64,
    pub printed_coefficient: f64,
}

pub fn g_expansion(ep: &ExtensionParameter, flux: &FluxParameter) -> Result<GExpansion> {
    let ch = channel_data(ep, flux)?;
    if ch.alpha == 0.0 {
        return Err(Error::ZeroAlpha);
    }
    let phi = flux.phi();
    let k0 = gamma(1.0 - ch.nu)? / gamma(1.0 + ch.nu)?;
    let (printed_leading, printed_coefficient) = printed_expansion(ep.channel, flux, ch.alpha)?;
    Ok(GExpansion {
        nu: ch.nu,
        leading: ch.plus / phi,
        // d(g phi)/dK at K = 0 is -(plus - minus)/alpha = -2 nu/alpha
        coefficient: -2.0 * ch.nu * k0 / (ch.alpha * phi),
        printed_leading,
        printed_coefficient,
    })
}

/// Finds `g` in `[lo, hi]` with `matching_ratio(g) = target`.
///
/// The interval is scanned on a fixed grid for sign changes; each bracket is
/// bisected and then polished by secant steps. Sign changes across the pole
/// of the ratio are recognised by a growing residual and skipped.
pub fn solve_g(template: &FluxShellProblem, target: f64, lo: f64, hi: f64) -> Result<f64> {
    template.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi && target.is_finite()) {
        return Err(Error::Domain {
            what: "solve_g needs a finite interval lo < hi and a finite target",
        });
    }
    let tol = 1e-10 * target.abs().max(1.0);
    let f = |g: f64| matching_ratio(&template.with_g(g)).map(|r| r - target);

    // grid points, plus points next to the pole of the ratio so that every
    // cell holds a monotone piece of the Möbius map g -> ratio
    let mut points: Vec<(f64, bool)> = (0..=SOLVE_SUBINTERVALS)
        .map(|k| {
            let g = if k == SOLVE_SUBINTERVALS {
                hi
            } else {
                lo + (hi - lo) * k as f64 / SOLVE_SUBINTERVALS as f64
            };
            (g, false)
        })
        .collect();
    if let Some(pole) = ratio_pole(template)? {
        let eps = 1e-6 * pole.abs().max(1.0);
        for g in [pole - eps, pole + eps] {
            if g > lo && g < hi {
                points.push((g, true));
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }

    let mut previous: Option<(f64, f64)> = None;
    for (right, inserted) in points {
        let f_right = if inserted {
            match pole_aware(f(right))? {
                Some(v) => v,
                None => continue,
            }
        } else {
            f(right)?
        };
        if f_right == 0.0 {
            return Ok(right);
        }
        if let Some((left, f_left)) = previous {
            if (f_left < 0.0) != (f_right < 0.0) {
                if let Some(g) = refine(&f, left, right, f_left, f_right, tol)? {
                    return Ok(g);
                }
            }
        }
        previous = Some((right, f_right));
    }
    Err(Error::NoBracket { lo, hi })
}

/// The `g` at which the denominator of [`matching_ratio`] vanishes; the
/// denominator is affine in `g`.
fn ratio_pole(prob: &FluxShellProblem) -> Result<Option<f64>> {
    let x0 = prob.p * prob.rho0;
    let nu = prob.nu();
    let order_l = prob.l.unsigned_abs() as f64;
    let jl = bessel_j(order_l, x0)?;
    let jl_prime = bessel_j_prime(order_l, x0)?;
    let jm = bessel_j(-nu, x0)?;
    let jm_prime = bessel_j_prime(-nu, x0)?;
    let slope = jm * prob.flux.phi() * jl / x0;
    let pole = -(jm_prime * jl - jm * jl_prime) / slope;
    Ok((slope != 0.0 && pole.is_finite()).then_some(pole))
}

/// A pole of the ratio met while refining a bracket ends that bracket.
fn pole_aware(value: Result<f64>) -> Result<Option<f64>> {
    match value {
        Ok(v) => Ok(Some(v)),
        Err(Error::NumericalPole { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn refine<F: Fn(f64) -> Result<f64>>(
    f: &F,
    mut a: f64,
    mut b: f64,
    mut fa: f64,
    mut fb: f64,
    tol: f64,
) -> Result<Option<f64>> {
    let initial = fa.abs().min(fb.abs());
    let resolution = |x: f64| 4.0 * f64::EPSILON * x.abs().max(1.0);
    let mut iter = 0;
    // bisection down to a narrow bracket
    while iter < SOLVE_MAX_ITER && b - a > 1e-6 * a.abs().max(b.abs()).max(1.0) {
        iter += 1;
        let mid = 0.5 * (a + b);
        let Some(fm) = pole_aware(f(mid))? else {
            return Ok(None);
        };
        if fm == 0.0 {
            return Ok(Some(mid));
        }
        if (fm < 0.0) == (fa < 0.0) {
            (a, fa) = (mid, fm);
        } else {
            (b, fb) = (mid, fm);
        }
    }
    // secant polish, kept inside the bracket
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    while iter < SOLVE_MAX_ITER {
        iter += 1;
        let mut x = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let Some(fx) = pole_aware(f(x))? else {
            return Ok(None);
        };
        if fx == 0.0 {
            return Ok(Some(x));
        }
        if (fx < 0.0) == (fa < 0.0) {
            (a, fa) = (x, fx);
        } else {
            (b, fb) = (x, fx);
        }
        let step = (x - x1).abs();
        (x0, f0, x1, f1) = (x1, f1, x, fx);
        if step <= resolution(x) || b - a <= resolution(x) {
            break;
        }
    }
    let (best, f_best) = if fa.abs() <= fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    if f_best.abs() <= tol {
        return Ok(Some(best));
    }
    if f_best.abs() > initial {
        // the residual grew towards the sign change: a pole
        return Ok(None);
    }
    Err(Error::Convergence {
        what: "g root not resolved to tolerance",
    })
}
