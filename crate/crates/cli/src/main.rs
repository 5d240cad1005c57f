use clap::{Args, Parser, Subcommand};
use pricebench_cli::{execute, Command, FileConfig, Format, OutputSpec, Params, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

/// Price-inequality bounds, matrix coefficients, lattices and cusp forms on
/// rank-one hyperbolic spaces.
///
/// Every run is described by a command, a parameter map and an output spec.
/// A TOML file given with --config supplies any of them:
///
///   command = "ode"
///   [params]
///   group = "SO"
///   n = 5
///   t-end = 15.0
///   [output]
///   path = "traj.csv"
///   format = "csv"
///
/// Parameter keys in the file are the long flag names listed by
/// `pricebench <command> --help`. Flags override
/// the file. Exit codes: 0 ok, 2 configuration error, 3 numerical or
/// verification failure, 4 enumeration budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "pricebench", version, verbatim_doc_comment)]
struct Cli {
    #[command(subcommand)]
    command: Option<Sub>,
    /// Read command, parameters and output from a TOML file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Sphere shape operator, eigenvalue gap and ball volume over a radius sweep.
    Geometry(Flags),
    /// Betti-number bound with exact exponents (setting compact or cusped).
    Bounds(Flags),
    /// Matrix-coefficient ODE trajectory plus asymptotics report.
    Ode(Flags),
    /// Successive minima, dual lattice, point counts and the packing bound.
    Lattice(Flags),
    /// Solve one harmonic Fourier mode on a real cusp and check the Price identities.
    Cusp(Flags),
    /// Congruence exponent table and matrix-coefficient rate regressions.
    Report(Flags),
    /// Run verification suites; nonzero exit on any failure.
    Verify(Flags),
    /// Run whatever command the --config file names.
    Run(Flags),
}

#[derive(Args, Debug, Default)]
struct Flags {
    /// Space kind: R, C, H or O.
    #[arg(long)]
    space: Option<String>,
    /// Dimension parameter n.
    #[arg(long)]
    n: Option<u32>,
    /// Form degree k.
    #[arg(long)]
    k: Option<u32>,
    /// ODE tolerance.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// ODE end time.
    #[arg(long = "t-end", alias = "tEnd", allow_negative_numbers = true)]
    t_end: Option<f64>,
    /// Base random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Lattice enumeration node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Output file; secondary artifacts go beside it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Matrix-coefficient group: SO or SU.
    #[arg(long)]
    group: Option<String>,
    /// Verification suites, comma separated, or "all".
    #[arg(long)]
    suite: Option<String>,
    /// Random lattices in the transference suite.
    #[arg(long)]
    trials: Option<u64>,
    /// Monte-Carlo samples per dimension in the peaking suite.
    #[arg(long)]
    samples: Option<u64>,
    /// Smallest sweep radius.
    #[arg(long = "r-min", allow_negative_numbers = true)]
    r_min: Option<f64>,
    /// Largest sweep radius.
    #[arg(long = "r-max", allow_negative_numbers = true)]
    r_max: Option<f64>,
    /// Number of sweep intervals.
    #[arg(long)]
    steps: Option<usize>,
    /// Volume.
    #[arg(long, allow_negative_numbers = true)]
    vol: Option<f64>,
    /// Minimal injectivity-ball volume.
    #[arg(long = "v-min", allow_negative_numbers = true)]
    v_min: Option<f64>,
    /// Injectivity radius of the thick part.
    #[arg(long, allow_negative_numbers = true)]
    inj: Option<f64>,
    /// Cusp volumes, comma separated.
    #[arg(long = "cusp-vols", value_delimiter = ',', allow_negative_numbers = true)]
    cusp_vols: Option<Vec<f64>>,
    /// Minimal injectivity-ball volume over the cusp slabs.
    #[arg(long = "v-min-cusps", allow_negative_numbers = true)]
    v_min_cusps: Option<f64>,
    /// First dual minima of the cusp lattices, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    deltas: Option<Vec<f64>>,
    /// Cusp depth index for the packing bound.
    #[arg(long)]
    nu: Option<u32>,
    /// Ball radius for lattice counting.
    #[arg(long, allow_negative_numbers = true)]
    radius: Option<f64>,
    /// Lattice basis: a file path, or rows separated by ';' (e.g. "2 0; 1 3").
    #[arg(long)]
    basis: Option<String>,
    /// Dual lattice coordinates of a Fourier mode, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    v: Option<Vec<i64>>,
    /// Cusp heights for the balance and Price checks, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    heights: Option<Vec<f64>>,
    /// Largest n in the report.
    #[arg(long = "n-max")]
    n_max: Option<u32>,
    /// Bound setting: compact or cusped.
    #[arg(long)]
    setting: Option<String>,
}

impl Flags {
    fn split(self) -> (Params, OutputSpec) {
        let params = Params {
            space: self.space,
            n: self.n,
            k: self.k,
            tol: self.tol,
            t_end: self.t_end,
            seed: self.seed,
            budget: self.budget,
            group: self.group,
            suite: self.suite,
            trials: self.trials,
            samples: self.samples,
            r_min: self.r_min,
            r_max: self.r_max,
            steps: self.steps,
            vol: self.vol,
            v_min: self.v_min,
            inj: self.inj,
            cusp_vols: self.cusp_vols,
            v_min_cusps: self.v_min_cusps,
            deltas: self.deltas,
            nu: self.nu,
            radius: self.radius,
            basis: self.basis,
            v: self.v,
            heights: self.heights,
            n_max: self.n_max,
            setting: self.setting,
        };
        (params, OutputSpec { path: self.out, format: self.format })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match cli.command {
        Some(Sub::Geometry(f)) => (Some(Command::Geometry), f),
        Some(Sub::Bounds(f)) => (Some(Command::Bounds), f),
        Some(Sub::Ode(f)) => (Some(Command::Ode), f),
        Some(Sub::Lattice(f)) => (Some(Command::Lattice), f),
        Some(Sub::Cusp(f)) => (Some(Command::Cusp), f),
        Some(Sub::Report(f)) => (Some(Command::Report), f),
        Some(Sub::Verify(f)) => (Some(Command::Verify), f),
        Some(Sub::Run(f)) => (None, f),
        None => (None, Flags::default()),
    };
    let file = match cli.config.as_deref().map(FileConfig::load).transpose() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code as u8);
        }
    };
    let (params, output) = flags.split();
    let config = match RunConfig::merge(file, command, params, output) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code as u8);
        }
    };
    ExitCode::from(execute(&config) as u8)
}
