//! Flux bookkeeping: `phi = N + delta`, critical channels and radial orders.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Fluxes closer than this to an integer are rejected.
pub const INTEGER_FLUX_TOLERANCE: f64 = 1e-12;

/// Dimensionless flux `phi = Phi / Phi_0` split into `N + delta`, `0 < delta < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxParameter {
    phi: f64,
    n: i64,
    delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EquationKind {
    Schrodinger,
    Dirac,
}

impl FluxParameter {
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Integer part `N`.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// Fractional part `delta`.
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Split `phi` into integer and fractional part.
pub fn decompose(phi: f64) -> Result<FluxParameter> {
    if !phi.is_finite() || phi.abs() > 1e15 {
        return Err(Error::Domain {
            what: "flux must be finite and below 1e15 in magnitude",
        });
    }
    if (phi - libm::round(phi)).abs() <= INTEGER_FLUX_TOLERANCE {
        return Err(Error::IntegerFlux { phi });
    }
    let n = libm::floor(phi);
    // exact for |phi| >= 1; otherwise within one ulp of 1
    let delta = phi - n;
    Ok(FluxParameter {
        phi,
        n: n as i64,
        delta,
    })
}

impl FluxParameter {
    /// Builds the flux from its parts; `delta` is kept exactly, `phi` is the
    /// rounded sum.
    pub fn from_parts(n: i64, delta: f64) -> Result<Self> {
        if !(delta > INTEGER_FLUX_TOLERANCE && delta < 1.0 - INTEGER_FLUX_TOLERANCE) {
            return Err(Error::Domain {
                what: "fractional flux must lie in (0, 1)",
            });
        }
        if n.unsigned_abs() > 1_000_000_000_000_000 {
            return Err(Error::Domain {
                what: "flux must be below 1e15 in magnitude",
            });
        }
        Ok(Self {
            phi: n as f64 + delta,
            n,
            delta,
        })
    }
}

/// Angular channels where the irregular Bessel solution is square integrable:
/// `[N, N+1]` for the Schrödinger equation, `[N]` for Dirac.
pub fn critical_channels(flux: &FluxParameter, kind: EquationKind) -> Vec<i64> {
    match kind {
        EquationKind::Schrodinger => vec![flux.n, flux.n + 1],
        EquationKind::Dirac => vec![flux.n],
    }
}

impl FluxParameter {
    pub fn is_critical(&self, l: i64, kind: EquationKind) -> bool {
        match kind {
            EquationKind::Schrodinger => l == self.n || l == self.n + 1,
            EquationKind::Dirac => l == self.n,
        }
    }

    /// Signed `l - phi`, computed as `(l - N) - delta`.
    pub fn shifted(&self, l: i64) -> f64 {
        (l - self.n) as f64 - self.delta
    }
}

/// Bessel order magnitude `|l - phi|` of channel `l`.
pub fn radial_order(l: i64, flux: &FluxParameter) -> f64 {
    flux.shifted(l).abs()
}
