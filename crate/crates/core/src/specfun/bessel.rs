//! Bessel functions of the first kind for arbitrary real order.
//!
//! Two evaluation routes:
//! - ascending power series, summed in double-double arithmetic so that the
//!   cancellation between terms does not cost accuracy, for `x <= SERIES_LIMIT`;
//! - Hankel's large-argument expansion for `x > SERIES_LIMIT`.
//!
//! Negative orders go through the same two routes; no second-kind function
//! is involved anywhere.

use core::f64::consts::PI;

use super::dd::DoubleDouble;
use super::gamma::{cos_pi, gamma, sin_pi};
use crate::error::{Error, Result};

/// Crossover between the power series and the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 20.0;

/// Largest order magnitude accepted by [`bessel_j`].
pub const MAX_ORDER: f64 = 8.0;

const MIN_ASYMPTOTIC_TERMS: usize = 8;
const MAX_SERIES_TERMS: usize = 400;

/// A finite Bessel order, possibly negative and non-integer.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealOrder(f64);

impl RealOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > MAX_ORDER {
            return Err(Error::Domain {
                what: "Bessel order must be finite with |nu| <= 8",
            });
        }
        Ok(Self(nu))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn j(self, x: f64) -> Result<f64> {
        bessel_j(self.0, x)
    }

    pub fn j_prime(self, x: f64) -> Result<f64> {
        bessel_j_prime(self.0, x)
    }
}

fn is_integer(nu: f64) -> bool {
    nu == libm::round(nu)
}

/// `J_nu(x)` for real `nu` with `|nu| <= 8` and `x >= 0`.
///
/// At `x = 0` only non-negative orders are defined.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    RealOrder::new(nu)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain {
            what: "Bessel argument must be non-negative",
        });
    }
    if x == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::Domain {
                what: "negative-order Bessel function is singular at x = 0",
            })
        };
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    if nu < 0.0 && is_integer(nu) {
        // J_{-n} = (-1)^n J_n
        let n = -nu;
        let sign = if libm::fmod(n, 2.0) == 0.0 { 1.0 } else { -1.0 };
        return Ok(sign * eval(n, x));
    }
    Ok(eval(nu, x))
}

/// `dJ_nu/dx` via `(J_{nu-1} - J_{nu+1}) / 2`, for `x > 0`.
pub fn bessel_j_prime(nu: f64, x: f64) -> Result<f64> {
    RealOrder::new(nu)?;
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain {
            what: "Bessel derivative needs a positive argument",
        });
    }
    let lower = bessel_j_unbounded(nu - 1.0, x);
    let upper = bessel_j_unbounded(nu + 1.0, x);
    Ok(0.5 * (lower - upper))
}

// Same as bessel_j for x > 0 but without the order cap, for the neighbours
// used by the derivative.
pub(crate) fn bessel_j_unbounded(nu: f64, x: f64) -> f64 {
    if nu < 0.0 && is_integer(nu) {
        let n = -nu;
        let sign = if libm::fmod(n, 2.0) == 0.0 { 1.0 } else { -1.0 };
        return sign * eval(n, x);
    }
    eval(nu, x)
}

fn eval(nu: f64, x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        series(nu, x)
    } else {
        asymptotic(nu, x)
    }
}

/// Ascending series `sum_k (-1)^k (x/2)^(2k+nu) / (k! Γ(k+nu+1))`.
///
/// The common factor `(x/2)^nu / Γ(nu+1)` is pulled out and the remaining
/// hypergeometric sum is accumulated in double-double.
fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let y = DoubleDouble::from_prod(half, half);
    let mut term = DoubleDouble::ONE;
    let mut sum = DoubleDouble::ONE;
    let mut largest: f64 = 1.0;
    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        let den = DoubleDouble::from_sum(kf, nu).mul_f64(kf);
        term = -(term * y) / den;
        sum = sum + term;
        let size = term.hi.abs();
        largest = largest.max(size);
        if kf > y.hi && size <= 1e-33 * largest {
            break;
        }
    }
    // nu + 1 is never a non-positive integer here: negative integer orders
    // are mapped to positive ones by the caller.
    let prefactor = match gamma(nu + 1.0) {
        Ok(g) => libm::pow(half, nu) / g,
        Err(_) => 0.0,
    };
    prefactor * sum.to_f64()
}

/// Hankel expansion `sqrt(2/(πx)) (P cos ω - Q sin ω)`, `ω = x - (nu/2 + 1/4)π`.
fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let eight_x = 8.0 * x;
    let mut p: f64 = 1.0;
    let mut q = 0.0;
    let mut a = 1.0_f64;
    let mut prev = f64::INFINITY;
    for k in 1..200usize {
        let odd = (2 * k - 1) as f64;
        let next = a * (mu - odd * odd) / (k as f64 * eight_x);
        let size = next.abs();
        if size == 0.0 {
            break;
        }
        // stop at the smallest term of the divergent tail
        if k > MIN_ASYMPTOTIC_TERMS && (size > prev || size < 1e-17 * p.abs()) {
            break;
        }
        a = next;
        prev = size;
        let signed = if (k / 2) % 2 == 0 { a } else { -a };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
    }
    let phase = 0.5 * nu + 0.25;
    let (cp, sp) = (cos_pi(phase), sin_pi(phase));
    let (sx, cx) = (libm::sin(x), libm::cos(x));
    let cos_w = cx * cp + sx * sp;
    let sin_w = sx * cp - cx * sp;
    libm::sqrt(2.0 / (PI * x)) * (p * cos_w - q * sin_w)
}
