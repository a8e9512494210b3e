use core::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;

#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// sin(πx) with exact zeros at the integers.
pub(crate) fn sin_pi(x: f64) -> f64 {
    // reduce to r in [-1, 1] with sin(πx) = sin(πr)
    let r = x - 2.0 * libm::round(x * 0.5);
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    libm::sin(PI * r)
}

/// cos(πx) with exact zeros at the half-integers.
pub(crate) fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let sum = LANCZOS_COEFFS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEFFS[0], |acc, (i, &c)| acc + c / (z + i as f64));
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^(z+1/2) does not overflow before exp(-t) applies
    let half = libm::pow(t, 0.5 * (z + 0.5));
    SQRT_TWO_PI * half * (libm::exp(-t) * half) * sum
}

/// Gamma function for real arguments, including negative non-integers.
///
/// Lanczos approximation (g = 7, 9 terms) for x >= 1/2 and the reflection
/// formula below that.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma argument must be finite",
        });
    }
    if x <= 0.0 && x == libm::floor(x) {
        return Err(Error::Pole { x });
    }
    if x < 0.5 {
        Ok(PI / (sin_pi(x) * lanczos(1.0 - x)))
    } else {
        Ok(lanczos(x))
    }
}
