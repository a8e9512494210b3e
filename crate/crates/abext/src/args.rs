use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "abext",
    version,
    about = "Aharonov-Bohm radial modes, overlaps and extension parameters"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Subcommand parsed on its own, used for the rows of `scan`.
#[derive(Parser, Debug)]
#[command(name = "scan-row", no_binary_name = true)]
pub struct RowCli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Write the result here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Absolute error target of one windowed integral
    #[arg(long = "tol-quad", global = true, default_value_t = 1e-9)]
    pub tol_quad: f64,

    /// Maximum Gauss-Kronrod panels per numeric overlap
    #[arg(long, global = true, default_value_t = 200_000)]
    pub panel_budget: usize,

    /// Base window of the finite-part average, in slow periods
    #[arg(long, global = true, default_value_t = 40.0)]
    pub window_factor: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// l = N
    N,
    /// l = N + 1
    #[value(alias = "n+1")]
    N1,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapKind {
    /// J_delta(p rho) J_-delta(p' rho)
    Cross,
    /// J_nu(p rho) J_nu(p' rho)
    Same,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Schrodinger,
    Dirac,
}

/// Extension parameter: a real number or `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    Finite(f64),
    Infinite,
}

fn parse_alpha(s: &str) -> Result<Alpha, String> {
    match s {
        "inf" | "infinite" | "infinity" => Ok(Alpha::Infinite),
        _ => {
            let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
            if v.is_finite() {
                Ok(Alpha::Finite(v))
            } else {
                Err("use `inf` for the infinite parameter".into())
            }
        }
    }
}

fn parse_momenta(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|e| format!("{e}"))
}

/// Flux as `--phi`, or as integer and fractional part `--enn --delta`.
#[derive(Args, Debug, Clone)]
pub struct FluxArgs {
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["enn", "delta"], required_unless_present = "enn")]
    pub phi: Option<f64>,

    #[arg(long, allow_negative_numbers = true, requires = "delta")]
    pub enn: Option<i64>,

    #[arg(long, requires = "enn")]
    pub delta: Option<f64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Split a flux into integer part N and fractional part delta
    Decompose {
        #[arg(long, allow_negative_numbers = true)]
        phi: f64,
    },

    /// Bessel function J_nu(x) and its derivative
    Bessel {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        #[arg(long)]
        x: f64,
    },

    /// Overlap integral in closed form, optionally checked numerically
    Overlap {
        /// Order: delta for the cross overlap, nu for equal orders
        #[arg(long, allow_negative_numbers = true)]
        delta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        pprime: f64,
        #[arg(long, value_enum, default_value_t = OverlapKind::Cross)]
        kind: OverlapKind,
        /// Also compute the finite part and delta coefficient by quadrature
        #[arg(long)]
        verify: bool,
    },

    /// Finite part of the overlap of two modes of one channel
    Cancel {
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        pprime: f64,
        /// Build both modes from this extension parameter (mass 1)
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["b", "bprime"])]
        alpha: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        a: f64,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "alpha")]
        b: Option<f64>,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1.0)]
        aprime: f64,
        #[arg(long, allow_negative_numbers = true, required_unless_present = "alpha")]
        bprime: Option<f64>,
        #[arg(long)]
        verify: bool,
    },

    /// Exponent k of b/a ∝ p^k that cancels all pairwise finite parts
    ExponentFit {
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        /// Comma-separated momenta
        #[arg(long, value_delimiter = ',', value_parser = parse_momenta, required = true)]
        momenta: Vec<f64>,
    },

    /// Coefficient ratio b/a imposed by an extension parameter
    SaeRatio {
        #[arg(long, value_enum, default_value_t = Equation::Schrodinger)]
        equation: Equation,
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, value_enum, default_value_t = Channel::N)]
        channel: Channel,
        /// Real value or `inf`
        #[arg(long, allow_negative_numbers = true, value_parser = parse_alpha)]
        alpha: Alpha,
        /// Radial momentum (Schrödinger) or transverse momentum (Dirac)
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        p3: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 1)]
        spin: i8,
    },

    /// Exact and small-radius b/a of the flux-shell model
    Fluxshell {
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        #[arg(long, allow_negative_numbers = true)]
        g: f64,
        #[arg(long)]
        rho0: f64,
        #[arg(long)]
        p: f64,
    },

    /// g factor that reproduces an extension parameter, exact and first order
    Gfactor {
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, value_enum)]
        channel: Channel,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        rho0: f64,
    },

    /// Solve matching_ratio(g) = target for g
    SolveG {
        #[command(flatten)]
        flux: FluxArgs,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        #[arg(long)]
        rho0: f64,
        #[arg(long)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -10.0)]
        lo: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
        hi: f64,
    },

    /// Sweep another subcommand over one or two parameters
    Scan {
        /// `name=start:stop:count` or `name=start:stop:count:log`; at most two
        #[arg(long, required = true)]
        vary: Vec<String>,
        /// The subcommand and its fixed arguments, after `--`
        #[arg(trailing_var_arg = true, allow_hyphen_values = true, required = true)]
        command: Vec<String>,
    },
}
