//! Panel quadrature for slowly decaying oscillatory integrands on `[0, L]`.
//!
//! The interval is cut at a fixed global grid `k * step` (a quasi-period of
//! the integrand); every piece is integrated with an adaptive 7/15-point
//! Gauss-Kronrod rule. A piece that starts at the origin is refined
//! geometrically and closed with a power-law tail, which covers integrable
//! endpoint singularities `t^s`, `s > -1`.
//!
//! Panel values are kept in ascending order and summed pairwise, so results
//! do not depend on anything but the inputs.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Tolerances and budgets for the numeric overlap routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Target absolute error of one windowed integral.
    pub abs_tol: f64,
    /// Maximum number of Gauss-Kronrod panels per call.
    pub panel_budget: usize,
    /// Base window of the finite-part average, in slow periods.
    pub window_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            panel_budget: 200_000,
            window_factor: 40.0,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::Domain {
                what: "quadrature tolerance must be positive",
            });
        }
        if self.panel_budget < 1_000 {
            return Err(Error::Domain {
                what: "panel budget must be at least 1000",
            });
        }
        if !(self.window_factor > 0.0 && self.window_factor.is_finite()) {
            return Err(Error::Domain {
                what: "window factor must be positive",
            });
        }
        Ok(())
    }
}

/// Value of a quadrature with its error estimate and panel count.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_DEPTH: u32 = 40;
const ORIGIN_LEVELS: u32 = 80;

/// One 15-point Kronrod panel: `(value, error estimate, sum of |f| weights)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut abs_sum = WGK[7] * fc.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * libm::pow(200.0 * err / asc, 1.5).min(1.0);
    }
    let resabs = abs_sum * half.abs();
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (kronrod * half, err, resabs)
}

/// Pairwise sum in slice order.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (lo, hi) = values.split_at(n / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Accumulates panels for one integration call against a shared budget.
pub(crate) struct PanelIntegrator {
    /// Allowed error per unit length.
    tol_density: f64,
    budget: usize,
    used: usize,
    step: f64,
}

impl PanelIntegrator {
    /// `step` is the quasi-period grid spacing, `span` the total length over
    /// which `abs_tol` is distributed.
    pub fn new(cfg: &QuadratureConfig, step: f64, span: f64) -> Self {
        Self {
            tol_density: cfg.abs_tol / span.max(step),
            budget: cfg.panel_budget,
            used: 0,
            step,
        }
    }

    pub fn panels(&self) -> usize {
        self.used
    }

    fn charge(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            return Err(Error::Convergence {
                what: "panel budget exhausted",
            });
        }
        Ok(())
    }

    fn adaptive<F: Fn(f64) -> f64>(
        &mut self,
        f: &F,
        a: f64,
        b: f64,
        depth: u32,
        out: &mut Vec<f64>,
        err_total: &mut f64,
    ) -> Result<()> {
        self.charge()?;
        let (value, err, resabs) = gk15(f, a, b);
        if !value.is_finite() {
            return Err(Error::Convergence {
                what: "non-finite integrand",
            });
        }
        let allowed = self.tol_density * (b - a);
        // the second test accepts panels whose error is at the roundoff floor
        if err <= allowed
            || err <= 64.0 * f64::EPSILON * resabs
            || depth >= MAX_DEPTH
            || (b - a) <= 1e-14 * a.abs().max(1e-300)
        {
            out.push(value);
            *err_total += err;
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        self.adaptive(f, a, mid, depth + 1, out, err_total)?;
        self.adaptive(f, mid, b, depth + 1, out, err_total)
    }

    /// Integral over `[0, b]` from geometric panels towards the origin plus a
    /// power-law tail estimate below the last panel.
    fn origin<F: Fn(f64) -> f64>(
        &mut self,
        f: &F,
        b: f64,
        out: &mut Vec<f64>,
        err_total: &mut f64,
    ) -> Result<()> {
        let mut pieces = Vec::new();
        let mut upper = b;
        let mut tail = None;
        for _ in 0..ORIGIN_LEVELS {
            let lower = 0.5 * upper;
            self.adaptive(f, lower, upper, 0, &mut pieces, err_total)?;
            upper = lower;
            let f_hi = f(upper);
            let f_lo = f(0.5 * upper);
            // local power law f ~ C t^s fitted through the two points; None
            // while mixed powers still make the fit meaningless
            tail = if f_hi == 0.0 && f_lo == 0.0 {
                Some(0.0)
            } else if f_hi == 0.0 || f_lo == 0.0 || (f_hi > 0.0) != (f_lo > 0.0) {
                None
            } else {
                let exponent = libm::log2(f_hi / f_lo);
                (exponent > -1.0).then(|| upper * f_hi / (exponent + 1.0))
            };
            if matches!(tail, Some(t) if libm::fabs(t) <= 1e-3 * self.tol_density * b) {
                break;
            }
        }
        let Some(tail) = tail else {
            return Err(Error::Convergence {
                what: "non-integrable endpoint singularity",
            });
        };
        *err_total += 1e-3 * tail.abs();
        // smallest contributions first
        out.push(tail);
        out.extend(pieces.into_iter().rev());
        Ok(())
    }

    /// Integral of `f` over `[a, b]`, `0 <= a <= b`.
    pub fn integrate<F: Fn(f64) -> f64>(&mut self, f: &F, a: f64, b: f64) -> Result<Quadrature> {
        let start = self.used;
        let mut values = Vec::new();
        let mut err = 0.0;
        if b > a {
            let mut k = libm::floor(a / self.step) as u64;
            let mut left = a;
            while left < b {
                let right = ((k + 1) as f64 * self.step).min(b);
                if right > left {
                    if left == 0.0 {
                        self.origin(f, right, &mut values, &mut err)?;
                    } else {
                        self.adaptive(f, left, right, 0, &mut values, &mut err)?;
                    }
                }
                left = right;
                k += 1;
            }
        }
        Ok(Quadrature {
            value: pairwise_sum(&values),
            abs_error: err,
            panels: self.used - start,
        })
    }
}
