//! Radial modes: two-term Bessel combinations at fixed radial momentum.
//!
//! A Schrödinger mode in channel `l` is `a J_{|l-phi|}(p rho) + b J_{-|l-phi|}(p rho)`.
//! The Dirac two-spinor components are
//!
//! ```text
//! R1 = a J_{l-phi}(p rho)   + b J_{-l+phi}(p rho)
//! R2 = a J_{l-phi+1}(p rho) - b J_{-l+phi-1}(p rho)
//! ```
//!
//! Coefficients are stored unnormalized.

use crate::error::{Error, Result};
use crate::flux::{radial_order, EquationKind, FluxParameter};
use crate::specfun::{bessel_j, gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    SchrodingerChannel,
    DiracComponent1,
    DiracComponent2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMode {
    pub kind: ModeKind,
    pub l: i64,
    pub flux: FluxParameter,
    /// Magnitude of the order pair `±order`.
    pub order: f64,
    /// Signed order of the Bessel function multiplying `a`.
    pub order_a: f64,
    /// Signed order of the Bessel function multiplying `b`.
    pub order_b: f64,
    pub a: f64,
    pub b: f64,
    /// Radial momentum in units of the mass.
    pub p: f64,
}

impl RadialMode {
    /// Sign with which the `b` term enters the mode.
    fn b_sign(&self) -> f64 {
        match self.kind {
            ModeKind::DiracComponent2 => -1.0,
            _ => 1.0,
        }
    }

    /// `R(rho)`; only terms with non-zero coefficient are evaluated.
    pub fn evaluate(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho <= 0.0 {
            return Err(Error::Domain {
                what: "radius must be positive",
            });
        }
        let x = self.p * rho;
        let mut value = 0.0;
        if self.a != 0.0 {
            value += self.a * bessel_j(self.order_a, x)?;
        }
        if self.b != 0.0 {
            value += self.b_sign() * self.b * bessel_j(self.order_b, x)?;
        }
        Ok(value)
    }
}

/// Relativistic kinematics of a Dirac mode, `E^2 = p_perp^2 + p3^2 + M^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracKinematics {
    mass: f64,
    energy: f64,
    p3: f64,
    p_perp: f64,
    spin: i8,
}

fn check_spin(spin: i8) -> Result<()> {
    if spin == 1 || spin == -1 {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "spin label must be +1 or -1",
        })
    }
}

impl DiracKinematics {
    pub fn new(mass: f64, p3: f64, p_perp: f64, spin: i8) -> Result<Self> {
        check_spin(spin)?;
        if !(mass > 0.0 && p_perp > 0.0 && mass.is_finite() && p_perp.is_finite() && p3.is_finite())
        {
            return Err(Error::Domain {
                what: "Dirac kinematics need M > 0, p_perp > 0 and finite p3",
            });
        }
        let energy = libm::sqrt(p_perp * p_perp + p3 * p3 + mass * mass);
        Ok(Self {
            mass,
            energy,
            p3,
            p_perp,
            spin,
        })
    }

    /// Kinematics from the energy; `p_perp = sqrt(E^2 - M^2 - p3^2)` must be positive.
    pub fn from_energy(mass: f64, energy: f64, p3: f64, spin: i8) -> Result<Self> {
        let perp2 = energy * energy - mass * mass - p3 * p3;
        if !(perp2 > 0.0) {
            return Err(Error::Domain {
                what: "energy too small for a positive radial momentum",
            });
        }
        let mut kin = Self::new(mass, p3, libm::sqrt(perp2), spin)?;
        kin.energy = energy;
        Ok(kin)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn p3(&self) -> f64 {
        self.p3
    }

    pub fn p_perp(&self) -> f64 {
        self.p_perp
    }

    pub fn spin(&self) -> i8 {
        self.spin
    }
}

fn check_common(p: f64, a: f64, b: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Domain {
            what: "momentum must be positive",
        });
    }
    if !(a.is_finite() && b.is_finite()) || (a == 0.0 && b == 0.0) {
        return Err(Error::Domain {
            what: "coefficients (a, b) must be finite and not both zero",
        });
    }
    Ok(())
}

/// Schrödinger radial mode in channel `l`; the irregular term is only
/// admitted in the critical channels `N` and `N+1`.
pub fn make_schrodinger_mode(
    l: i64,
    flux: &FluxParameter,
    p: f64,
    a: f64,
    b: f64,
) -> Result<RadialMode> {
    check_common(p, a, b)?;
    if b != 0.0 && !flux.is_critical(l, EquationKind::Schrodinger) {
        return Err(Error::IrregularForbidden { l });
    }
    let order = radial_order(l, flux);
    Ok(RadialMode {
        kind: ModeKind::SchrodingerChannel,
        l,
        flux: *flux,
        order,
        order_a: order,
        order_b: -order,
        a,
        b,
        p,
    })
}

/// The two radial components of a Dirac mode at radial momentum `p_perp`.
///
/// Outside the critical channel `l = N` every Bessel term of order below -1
/// must carry a zero coefficient: `b = 0` for `l > N`, `a = 0` for `l < N`.
pub fn make_dirac_mode(
    l: i64,
    flux: &FluxParameter,
    kin: &DiracKinematics,
    a: f64,
    b: f64,
) -> Result<(RadialMode, RadialMode)> {
    let p = kin.p_perp();
    check_common(p, a, b)?;
    let s = flux.shifted(l);
    let first_a = s;
    let first_b = -s;
    let second_a = s + 1.0;
    let second_b = -s - 1.0;
    let a_irregular = first_a < -1.0 || second_a < -1.0;
    let b_irregular = first_b < -1.0 || second_b < -1.0;
    if (a != 0.0 && a_irregular) || (b != 0.0 && b_irregular) {
        return Err(Error::IrregularForbidden { l });
    }
    let first = RadialMode {
        kind: ModeKind::DiracComponent1,
        l,
        flux: *flux,
        order: s.abs(),
        order_a: first_a,
        order_b: first_b,
        a,
        b,
        p,
    };
    let second = RadialMode {
        kind: ModeKind::DiracComponent2,
        order: second_a.abs(),
        order_a: second_a,
        order_b: second_b,
        ..first
    };
    Ok((first, second))
}

/// Leading small-radius behaviour `R ∝ (M rho)^nu - alpha_tilde (M rho)^(-nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallRhoSignature {
    pub nu: f64,
    pub alpha_tilde: f64,
}

/// Boundary-condition form of a critical-channel mode.
///
/// With `C±` the coefficients of `(M rho)^(±nu)` in the leading expansion,
/// `alpha_tilde = -C-/C+`. For a Schrödinger mode this is
/// `-(b/a) (p/2M)^(-2nu) Γ(1+nu)/Γ(1-nu)`.
pub fn small_rho_signature(mode: &RadialMode, mass: f64) -> Result<SmallRhoSignature> {
    if !(mass > 0.0) {
        return Err(Error::Domain {
            what: "mass must be positive",
        });
    }
    let nu = mode.order;
    if !(nu > 0.0 && nu < 1.0)
        || (mode.order_a.abs() - nu).abs() > 1e-15
        || (mode.order_b.abs() - nu).abs() > 1e-15
    {
        return Err(Error::Domain {
            what: "small-radius signature needs a critical-channel mode with 0 < nu < 1",
        });
    }
    let b = mode.b_sign() * mode.b;
    let (regular, irregular) = if mode.order_a > 0.0 {
        (mode.a, b)
    } else {
        (b, mode.a)
    };
    if regular == 0.0 {
        return Err(Error::Degenerate {
            what: "pure irregular mode, alpha_tilde is infinite",
        });
    }
    let scale = mode.p / (2.0 * mass);
    let c_plus = regular * libm::pow(scale, nu) / gamma(1.0 + nu)?;
    let c_minus = irregular * libm::pow(scale, -nu) / gamma(1.0 - nu)?;
    Ok(SmallRhoSignature {
        nu,
        alpha_tilde: -c_minus / c_plus,
    })
}
