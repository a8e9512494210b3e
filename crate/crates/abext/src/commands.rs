use abext_core::flux::{decompose, radial_order, EquationKind, FluxParameter};
use abext_core::fluxshell::{
    g_asymptotic, g_expansion, g_from_alpha, limit_ratio, matching_ratio, resonance_defect,
    solve_g, FluxShellProblem,
};
use abext_core::modes::{make_schrodinger_mode, DiracKinematics, RadialMode};
use abext_core::overlap::{
    closed_form_cross, closed_form_same, finite_part_estimate, fit_cancelling_exponent,
    fit_delta_coefficient, mode_overlap_finite_part, mode_overlap_finite_part_numeric,
    QuadratureConfig,
};
use abext_core::sae::{
    alpha_tilde_from_alpha, dirac_ratio, hagen_reference, make_extended_mode, schrodinger_ratio,
    ExtensionChannel, ExtensionParameter, ExtensionValue,
};
use abext_core::specfun::{bessel_j, bessel_j_prime};
use abext_core::Error;

use crate::args::{Alpha, Channel, Command, Equation, FluxArgs, OverlapKind};
use crate::report::{CliError, Report};

/// Physical inputs are dimensionless: momenta in units of M, lengths in 1/M.
const MASS: f64 = 1.0;

fn flux_from(args: &FluxArgs, report: &mut Report) -> Result<FluxParameter, CliError> {
    match (args.phi, args.enn, args.delta) {
        (Some(phi), _, _) => {
            report.input_f64("phi", phi)?;
            Ok(decompose(phi)?)
        }
        (None, Some(n), Some(delta)) => {
            report.input("enn", n);
            report.input_f64("delta", delta)?;
            Ok(FluxParameter::from_parts(n, delta)?)
        }
        _ => Err(CliError::Usage(
            "give --phi or both --enn and --delta".into(),
        )),
    }
}

fn schrodinger_channel(channel: Channel) -> ExtensionChannel {
    match channel {
        Channel::N => ExtensionChannel::SchrodingerN,
        Channel::N1 => ExtensionChannel::SchrodingerNPlus1,
    }
}

fn channel_name(channel: Channel) -> &'static str {
    match channel {
        Channel::N => "n",
        Channel::N1 => "n1",
    }
}

fn channel_of_l(l: i64, flux: &FluxParameter) -> Result<ExtensionChannel, CliError> {
    if l == flux.n() {
        Ok(ExtensionChannel::SchrodingerN)
    } else if l == flux.n() + 1 {
        Ok(ExtensionChannel::SchrodingerNPlus1)
    } else {
        Err(Error::NonCriticalChannel { l }.into())
    }
}

fn quadrature_diagnostics(
    report: &mut Report,
    est_error: f64,
    panels: usize,
) -> Result<(), CliError> {
    report.diagnostic_f64("est_error", est_error)?;
    report.diagnostic("panels", panels as u64);
    Ok(())
}

/// Runs one non-scan subcommand. Inputs are echoed before anything can fail,
/// so a failed report still identifies its parameters.
pub fn execute(
    command: &Command,
    cfg: &QuadratureConfig,
    report: &mut Report,
) -> Result<(), CliError> {
    match command {
        Command::Decompose { phi } => {
            report.input_f64("phi", *phi)?;
            let f = decompose(*phi)?;
            report.output_f64("phi", f.phi())?;
            report.output("n", f.n());
            report.output_f64("delta", f.delta())?;
        }

        Command::Bessel { nu, x } => {
            report.input_f64("nu", *nu)?;
            report.input_f64("x", *x)?;
            report.output_f64("value", bessel_j(*nu, *x)?)?;
            if *x > 0.0 {
                report.output_f64("derivative", bessel_j_prime(*nu, *x)?)?;
            }
        }

        Command::Overlap {
            delta,
            p,
            pprime,
            kind,
            verify,
        } => {
            report.input(
                "kind",
                match kind {
                    OverlapKind::Cross => "cross",
                    OverlapKind::Same => "same",
                },
            );
            report.input_f64("delta", *delta)?;
            report.input_f64("p", *p)?;
            report.input_f64("pprime", *pprime)?;
            report.input("verify", *verify);
            let (closed, mu) = match kind {
                OverlapKind::Cross => (closed_form_cross(*delta, *p, *pprime)?, -*delta),
                OverlapKind::Same => (closed_form_same(*delta, *p, *pprime)?, *delta),
            };
            report.output_f64("delta_coeff", closed.delta_coeff)?;
            report.output_f64("finite_closed", closed.finite_part)?;
            if *verify {
                let est = finite_part_estimate(*delta, mu, *p, *pprime, cfg)?;
                let fit = fit_delta_coefficient(*delta, mu, *p, *pprime, cfg)?;
                report.output_f64("finite_numeric", est.value)?;
                report.output_f64("abs_err", (est.value - closed.finite_part).abs())?;
                report.output_f64("delta_coeff_numeric", fit.amplitude)?;
                quadrature_diagnostics(report, est.est_error, est.panels)?;
                report.diagnostic_f64("delta_fit_rms", fit.rms_residual)?;
            }
        }

        Command::Cancel {
            flux,
            l,
            p,
            pprime,
            alpha,
            a,
            b,
            aprime,
            bprime,
            verify,
        } => {
            let flux = flux_from(flux, report)?;
            report.input("l", *l);
            report.input_f64("p", *p)?;
            report.input_f64("pprime", *pprime)?;
            let (first, second): (RadialMode, RadialMode) = if let Some(alpha) = alpha {
                report.input_f64("alpha", *alpha)?;
                report.input("verify", *verify);
                let ep = ExtensionParameter::finite(channel_of_l(*l, &flux)?, *alpha)?;
                (
                    make_extended_mode(&ep, &flux, *l, *p, MASS)?,
                    make_extended_mode(&ep, &flux, *l, *pprime, MASS)?,
                )
            } else {
                let (b, bprime) = (b.unwrap_or(0.0), bprime.unwrap_or(0.0));
                report.input_f64("a", *a)?;
                report.input_f64("b", b)?;
                report.input_f64("aprime", *aprime)?;
                report.input_f64("bprime", bprime)?;
                report.input("verify", *verify);
                (
                    make_schrodinger_mode(*l, &flux, *p, *a, b)?,
                    make_schrodinger_mode(*l, &flux, *pprime, *aprime, bprime)?,
                )
            };
            let finite = mode_overlap_finite_part(&first, &second)?;
            report.output_f64("finite_part", finite)?;
            report.output_f64("coeff_b", first.b)?;
            report.output_f64("coeff_bprime", second.b)?;
            if *verify {
                let est = mode_overlap_finite_part_numeric(&first, &second, cfg)?;
                report.output_f64("finite_numeric", est.value)?;
                report.output_f64("abs_err", (est.value - finite).abs())?;
                quadrature_diagnostics(report, est.est_error, est.panels)?;
            }
        }

        Command::ExponentFit { flux, l, momenta } => {
            let flux = flux_from(flux, report)?;
            report.input("l", *l);
            let list: Result<Vec<_>, _> = momenta
                .iter()
                .map(|&p| {
                    serde_json::Number::from_f64(p).ok_or(CliError::NonFinite("momenta".into()))
                })
                .collect();
            report.input("momenta", list?);
            let k = fit_cancelling_exponent(&flux, *l, momenta)?;
            report.output_f64("exponent", k)?;
            report.output_f64("expected", 2.0 * radial_order(*l, &flux))?;
        }

        Command::SaeRatio {
            equation,
            flux,
            channel,
            alpha,
            p,
            p3,
            spin,
        } => {
            let flux = flux_from(flux, report)?;
            report.input("channel", channel_name(*channel));
            match alpha {
                Alpha::Finite(a) => report.input_f64("alpha", *a)?,
                Alpha::Infinite => report.input("alpha", "inf"),
            }
            report.input_f64("p", *p)?;
            let ext_channel = match equation {
                Equation::Schrodinger => schrodinger_channel(*channel),
                Equation::Dirac if *channel == Channel::N => ExtensionChannel::DiracN,
                Equation::Dirac => {
                    return Err(Error::ChannelMismatch {
                        what: "the Dirac critical channel is l = N",
                    }
                    .into())
                }
            };
            let ep = match alpha {
                Alpha::Finite(a) => ExtensionParameter::finite(ext_channel, *a)?,
                Alpha::Infinite => ExtensionParameter::infinite(ext_channel),
            };
            let (kind, nu) = match equation {
                Equation::Schrodinger => {
                    report.input("equation", "schrodinger");
                    let l = ext_channel.angular_momentum(&flux);
                    (EquationKind::Schrodinger, radial_order(l, &flux))
                }
                Equation::Dirac => {
                    report.input("equation", "dirac");
                    report.input_f64("p3", *p3)?;
                    report.input("spin", *spin);
                    (EquationKind::Dirac, flux.delta())
                }
            };
            let kin = match equation {
                Equation::Schrodinger => None,
                Equation::Dirac => {
                    let kin = DiracKinematics::new(MASS, *p3, *p, *spin)?;
                    report.output_f64("energy", kin.energy())?;
                    Some(kin)
                }
            };
            match (ep.value, &kin) {
                // pure irregular solution: b/a is infinite
                (ExtensionValue::Infinite, _) => report.output("ratio", "inf"),
                (_, None) => {
                    report.output_f64("ratio", schrodinger_ratio(&ep, &flux, *p, MASS)?)?
                }
                (_, Some(kin)) => report.output_f64("ratio", dirac_ratio(&ep, &flux, kin)?)?,
            }
            report.output_f64("nu", nu)?;
            if let ExtensionValue::Finite(a) = ep.value {
                report.output_f64("alpha_tilde", alpha_tilde_from_alpha(a, nu)?)?;
            }
            let reference = hagen_reference(kind, *spin, &flux)?;
            let reference = reference
                .iter()
                .find(|r| r.channel == ext_channel)
                .map(|r| r.value);
            match reference {
                Some(ExtensionValue::Finite(v)) => report.output_f64("reference_alpha", v)?,
                Some(ExtensionValue::Infinite) => report.output("reference_alpha", "inf"),
                None => {}
            }
        }

        Command::Fluxshell {
            flux,
            l,
            g,
            rho0,
            p,
        } => {
            let flux = flux_from(flux, report)?;
            report.input("l", *l);
            report.input_f64("g", *g)?;
            report.input_f64("rho0", *rho0)?;
            report.input_f64("p", *p)?;
            let prob = FluxShellProblem {
                rho0: *rho0,
                g: *g,
                l: *l,
                flux,
                p: *p,
                mass: MASS,
            };
            report.output_f64("matching_ratio", matching_ratio(&prob)?)?;
            report.output_f64("limit_ratio", limit_ratio(&prob)?)?;
            report.output_f64("resonance_defect", resonance_defect(*l, &flux, *g))?;
            report.output_f64("nu", prob.nu())?;
        }

        Command::Gfactor {
            flux,
            channel,
            alpha,
            rho0,
        } => {
            report.input("channel", channel_name(*channel));
            report.input_f64("alpha", *alpha)?;
            let flux = flux_from(flux, report)?;
            report.input_f64("rho0", *rho0)?;
            let ep = ExtensionParameter::finite(schrodinger_channel(*channel), *alpha)?;
            report.output_f64("g", g_from_alpha(&ep, &flux, *rho0, MASS)?)?;
            if *alpha != 0.0 {
                report.output_f64("g_asymptotic", g_asymptotic(&ep, &flux, *rho0, MASS)?)?;
                let e = g_expansion(&ep, &flux)?;
                report.output_f64("expansion_leading", e.leading)?;
                report.output_f64("expansion_coefficient", e.coefficient)?;
                report.output_f64("printed_coefficient", e.printed_coefficient)?;
            }
        }

        Command::SolveG {
            flux,
            l,
            rho0,
            p,
            target,
            lo,
            hi,
        } => {
            let flux = flux_from(flux, report)?;
            report.input("l", *l);
            report.input_f64("rho0", *rho0)?;
            report.input_f64("p", *p)?;
            report.input_f64("target", *target)?;
            report.input_f64("lo", *lo)?;
            report.input_f64("hi", *hi)?;
            let template = FluxShellProblem {
                rho0: *rho0,
                g: 0.0,
                l: *l,
                flux,
                p: *p,
                mass: MASS,
            };
            let g = solve_g(&template, *target, *lo, *hi)?;
            let ratio = matching_ratio(&FluxShellProblem { g, ..template })?;
            report.output_f64("g", g)?;
            report.output_f64("matching_ratio", ratio)?;
            report.diagnostic_f64("residual", (ratio - target).abs())?;
        }

        Command::Scan { .. } => return Err(CliError::Usage("scan cannot be nested".into())),
    }
    Ok(())
}
