//! Extension parameters of the critical channels and the coefficient ratios
//! `b/a` they impose on the radial modes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::flux::{EquationKind, FluxParameter};
use crate::modes::{make_dirac_mode, make_schrodinger_mode, DiracKinematics, RadialMode};
use crate::specfun::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtensionChannel {
    SchrodingerN,
    SchrodingerNPlus1,
    DiracN,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtensionValue {
    Finite(f64),
    /// Pure irregular solution, `a = 0`.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtensionParameter {
    pub channel: ExtensionChannel,
    pub value: ExtensionValue,
}

impl ExtensionParameter {
    pub fn finite(channel: ExtensionChannel, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::Domain {
                what: "finite extension parameter must be a finite number",
            });
        }
        Ok(Self {
            channel,
            value: ExtensionValue::Finite(alpha),
        })
    }

    pub fn infinite(channel: ExtensionChannel) -> Self {
        Self {
            channel,
            value: ExtensionValue::Infinite,
        }
    }

    fn alpha(&self) -> Result<f64> {
        match self.value {
            ExtensionValue::Finite(alpha) => Ok(alpha),
            ExtensionValue::Infinite => Err(Error::InfiniteParameter),
        }
    }
}

impl ExtensionChannel {
    /// Angular momentum of this channel for the given flux.
    pub fn angular_momentum(self, flux: &FluxParameter) -> i64 {
        match self {
            ExtensionChannel::SchrodingerN | ExtensionChannel::DiracN => flux.n(),
            ExtensionChannel::SchrodingerNPlus1 => flux.n() + 1,
        }
    }

    /// Exponent `2 nu` of the momentum dependence of `b/a`.
    fn exponent(self, flux: &FluxParameter) -> f64 {
        match self {
            ExtensionChannel::SchrodingerN | ExtensionChannel::DiracN => 2.0 * flux.delta(),
            ExtensionChannel::SchrodingerNPlus1 => 2.0 * (1.0 - flux.delta()),
        }
    }
}

fn check_scale(p: f64, mass: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite() && mass > 0.0 && mass.is_finite()) {
        return Err(Error::Domain {
            what: "momentum and mass must be positive",
        });
    }
    Ok(())
}

/// `b/a = alpha (p/M)^(2 delta)` in channel `N`, `alpha (p/M)^(2(1-delta))` in `N+1`.
pub fn schrodinger_ratio(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    p: f64,
    mass: f64,
) -> Result<f64> {
    if ep.channel == ExtensionChannel::DiracN {
        return Err(Error::ChannelMismatch {
            what: "Schrödinger ratio needs a Schrödinger channel",
        });
    }
    check_scale(p, mass)?;
    let alpha = ep.alpha()?;
    Ok(alpha * libm::pow(p / mass, ep.channel.exponent(flux)))
}

/// `b/a = alpha M/(E + sM) (p_perp/M)^(2 delta)` in the Dirac channel `N`.
pub fn dirac_ratio(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    kin: &DiracKinematics,
) -> Result<f64> {
    if ep.channel != ExtensionChannel::DiracN {
        return Err(Error::ChannelMismatch {
            what: "Dirac ratio needs the Dirac channel",
        });
    }
    let alpha = ep.alpha()?;
    let m = kin.mass();
    let s = f64::from(kin.spin());
    Ok(alpha * m / (kin.energy() + s * m) * libm::pow(kin.p_perp() / m, 2.0 * flux.delta()))
}

/// `alpha_tilde = 2^(2 nu) Γ(nu)/Γ(-nu) alpha`.
pub fn alpha_tilde_from_alpha(alpha: f64, nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::Domain {
            what: "alpha_tilde needs 0 < nu < 1",
        });
    }
    Ok(libm::pow(2.0, 2.0 * nu) * gamma(nu)? / gamma(-nu)? * alpha)
}

fn check_channel(ep: &ExtensionParameter, flux: &FluxParameter, l: i64) -> Result<()> {
    if ep.channel.angular_momentum(flux) != l {
        return Err(Error::ChannelMismatch {
            what: "angular momentum does not match the extension channel",
        });
    }
    Ok(())
}

/// Schrödinger mode obeying the extension condition: `a = 1, b = ratio`, or
/// `a = 0, b = 1` for an infinite parameter.
pub fn make_extended_mode(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    l: i64,
    p: f64,
    mass: f64,
) -> Result<RadialMode> {
    if ep.channel == ExtensionChannel::DiracN {
        return Err(Error::ChannelMismatch {
            what: "Dirac channel has two components, use make_extended_dirac_mode",
        });
    }
    check_channel(ep, flux, l)?;
    check_scale(p, mass)?;
    match ep.value {
        ExtensionValue::Finite(_) => {
            make_schrodinger_mode(l, flux, p, 1.0, schrodinger_ratio(ep, flux, p, mass)?)
        }
        ExtensionValue::Infinite => make_schrodinger_mode(l, flux, p, 0.0, 1.0),
    }
}

/// Both components of the Dirac mode in channel `N` obeying the extension
/// condition.
pub fn make_extended_dirac_mode(
    ep: &ExtensionParameter,
    flux: &FluxParameter,
    kin: &DiracKinematics,
) -> Result<(RadialMode, RadialMode)> {
    if ep.channel != ExtensionChannel::DiracN {
        return Err(Error::ChannelMismatch {
            what: "Dirac mode needs the Dirac channel",
        });
    }
    match ep.value {
        ExtensionValue::Finite(_) => {
            make_dirac_mode(flux.n(), flux, kin, 1.0, dirac_ratio(ep, flux, kin)?)
        }
        ExtensionValue::Infinite => make_dirac_mode(flux.n(), flux, kin, 0.0, 1.0),
    }
}

/// Extension parameters of a minimally coupled particle, one per critical
/// channel: zero for Schrödinger, and for Dirac zero when `s phi < 0`,
/// infinite when `s phi > 0`.
pub fn hagen_reference(
    kind: EquationKind,
    spin: i8,
    flux: &FluxParameter,
) -> Result<Vec<ExtensionParameter>> {
    match kind {
        EquationKind::Schrodinger => Ok(vec![
            ExtensionParameter::finite(ExtensionChannel::SchrodingerN, 0.0)?,
            ExtensionParameter::finite(ExtensionChannel::SchrodingerNPlus1, 0.0)?,
        ]),
        EquationKind::Dirac => {
            if spin != 1 && spin != -1 {
                return Err(Error::Domain {
                    what: "spin must be +1 or -1",
                });
            }
            let ep = if f64::from(spin) * flux.phi() > 0.0 {
                ExtensionParameter::infinite(ExtensionChannel::DiracN)
            } else {
                ExtensionParameter::finite(ExtensionChannel::DiracN, 0.0)?
            };
            Ok(vec![ep])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::decompose;

    fn finite(channel: ExtensionChannel, alpha: f64) -> ExtensionParameter {
        ExtensionParameter::finite(channel, alpha).unwrap()
    }

    #[test]
    fn schrodinger_ratio_examples() {
        let flux = decompose(2.3).unwrap();
        let n = ExtensionChannel::SchrodingerN;
        assert_eq!(
            schrodinger_ratio(&finite(n, 0.0), &flux, 3.7, 1.0).unwrap(),
            0.0
        );
        assert_eq!(
            schrodinger_ratio(&finite(n, 1.0), &flux, 2.0, 2.0).unwrap(),
            1.0
        );
        let half = decompose(0.5).unwrap();
        assert!(
            (schrodinger_ratio(&finite(n, 2.0), &half, 0.25, 1.0).unwrap() - 0.5).abs() < 1e-15
        );
        assert_eq!(
            schrodinger_ratio(&ExtensionParameter::infinite(n), &flux, 1.0, 1.0),
            Err(Error::InfiniteParameter)
        );
        let r = schrodinger_ratio(
            &finite(ExtensionChannel::SchrodingerNPlus1, 1.0),
            &flux,
            2.0,
            1.0,
        )
        .unwrap();
        assert!((r - libm::pow(2.0, 1.4)).abs() < 1e-14);
    }

    #[test]
    fn dirac_ratio_examples() {
        let flux = decompose(0.5).unwrap();
        let ep = finite(ExtensionChannel::DiracN, 1.0);
        let up = DiracKinematics::new(1.0, 0.0, 1.0, 1).unwrap();
        let down = DiracKinematics::new(1.0, 0.0, 1.0, -1).unwrap();
        let sqrt2 = core::f64::consts::SQRT_2;
        assert!((dirac_ratio(&ep, &flux, &up).unwrap() - 1.0 / (1.0 + sqrt2)).abs() < 1e-15);
        assert!((dirac_ratio(&ep, &flux, &down).unwrap() - 1.0 / (sqrt2 - 1.0)).abs() < 1e-14);
        let slow = DiracKinematics::new(1.0, 0.0, 1e-12, 1).unwrap();
        assert!(dirac_ratio(&ep, &flux, &slow).unwrap() < 1e-12);
    }

    #[test]
    fn alpha_tilde_examples() {
        assert!((alpha_tilde_from_alpha(3.0, 0.5).unwrap() + 3.0).abs() < 1e-14);
        assert_eq!(alpha_tilde_from_alpha(0.0, 0.3).unwrap(), 0.0);
        assert!((alpha_tilde_from_alpha(1.0, 0.3).unwrap() + 1.047_96).abs() < 1e-5);
        assert!(alpha_tilde_from_alpha(1.0, 1.0).is_err());
    }

    #[test]
    fn extended_modes() {
        let flux = decompose(2.3).unwrap();
        let n = ExtensionChannel::SchrodingerN;
        let m = make_extended_mode(&finite(n, 0.0), &flux, 2, 1.0, 1.0).unwrap();
        assert_eq!((m.a, m.b), (1.0, 0.0));
        let m = make_extended_mode(&ExtensionParameter::infinite(n), &flux, 2, 1.0, 1.0).unwrap();
        assert_eq!((m.a, m.b), (0.0, 1.0));
        let m = make_extended_mode(&finite(n, 1.0), &flux, 2, 2.0, 1.0).unwrap();
        assert!((m.b - libm::pow(2.0, 0.6)).abs() < 1e-14);
        assert!(matches!(
            make_extended_mode(&finite(n, 1.0), &flux, 3, 2.0, 1.0),
            Err(Error::ChannelMismatch { .. })
        ));
    }

    #[test]
    fn reference_values() {
        let flux = decompose(2.3).unwrap();
        let s = hagen_reference(EquationKind::Schrodinger, 1, &flux).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.iter().all(|ep| ep.value == ExtensionValue::Finite(0.0)));
        let d = hagen_reference(EquationKind::Dirac, 1, &flux).unwrap();
        assert_eq!(d[0].value, ExtensionValue::Infinite);
        let d = hagen_reference(EquationKind::Dirac, -1, &flux).unwrap();
        assert_eq!(d[0].value, ExtensionValue::Finite(0.0));
        let negative = decompose(-2.3).unwrap();
        let d = hagen_reference(EquationKind::Dirac, -1, &negative).unwrap();
        assert_eq!(d[0].value, ExtensionValue::Infinite);
    }
}
