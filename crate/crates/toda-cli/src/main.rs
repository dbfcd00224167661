use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toda_cli::{emit_plot_data, run_suite, CliError, CliResult, PlotKind, PointSpec, RunConfig, Suite};
use toda_core::C64;

#[derive(Debug, Parser)]
#[command(name = "toda-stokes", version, about = "Numerical verification suites for the 2D Toda Frobenius manifold")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory receiving report.json, summary.txt and any CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of worker threads used to run independent suites.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for the random tangent vectors.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// `special:V,E`, `perturbed` or `file:PATH`.
    #[arg(long, global = true)]
    point: Option<PointSpec>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum of the multiplication by the Euler field and the key lemma.
    VerifySpectrum,
    /// Frobenius axioms and the diagonal metric in canonical coordinates.
    VerifyMetric,
    /// Formal solutions of the Dubrovin connection.
    Formal,
    /// Integral solutions, Bessel closed forms and truncation slopes.
    Integral,
    /// Borel resummation, lateral jumps and the completeness probe.
    Resurgence,
    /// Stokes matrices and kernels; prints them as JSON.
    Stokes(StokesArgs),
    /// Self-test of the special-function layer.
    SpecfunSelftest,
    /// Runs every configured suite and writes the full report.
    #[command(after_help = "CSV columns:\n  \
        asymptotic-slopes  log_abs_zeta, log_error_k2, log_error_k3\n  \
        sector-map         arg_zeta, dominant_index (0: e^{zeta u_p} dominates, 1: e^{zeta u_-p})\n  \
        p-grid             arg_p, then re_m, im_m for m = -3..3")]
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct StokesArgs {
    /// Value of e^u at the special point.
    #[arg(long = "e-u")]
    e_u: Option<C64>,
    /// Value of v at the special point.
    #[arg(long)]
    v: Option<C64>,
    #[arg(long)]
    p_arg: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    zeta_abs: Option<f64>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Series to export as CSV; written to `<out>/<name>.csv`, or to stdout without `--out`.
    #[arg(long, value_delimiter = ',')]
    plot: Vec<PlotKind>,
}

fn resolve(global: &GlobalArgs) -> CliResult<RunConfig> {
    let mut config = match &global.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &global.out {
        config.out = Some(out.clone());
    }
    if let Some(jobs) = global.jobs {
        config.jobs = jobs;
    }
    if let Some(seed) = global.seed {
        config.seed = seed;
    }
    if let Some(point) = &global.point {
        config.point = point.clone();
    }
    Ok(config)
}

fn apply_stokes(config: &mut RunConfig, args: &StokesArgs) {
    if args.e_u.is_some() || args.v.is_some() {
        let (v0, e0) = match config.point {
            PointSpec::Special { v, e_u } => (v, e_u),
            _ => (C64::new(0.0, 0.0), C64::new(0.5, 0.0)),
        };
        config.point = PointSpec::Special { v: args.v.unwrap_or(v0), e_u: args.e_u.unwrap_or(e0) };
    }
    let s = &mut config.stokes;
    s.p_arg = args.p_arg.unwrap_or(s.p_arg);
    s.theta = args.theta.unwrap_or(s.theta);
    s.epsilon = args.epsilon.unwrap_or(s.epsilon);
    s.zeta_abs = args.zeta_abs.unwrap_or(s.zeta_abs);
}

fn execute(cli: Cli) -> CliResult<bool> {
    let mut config = resolve(&cli.global)?;
    let single = |suite: Suite| Some(vec![suite]);
    let suites = match &cli.command {
        Command::VerifySpectrum => single(Suite::Spectrum),
        Command::VerifyMetric => single(Suite::Metric),
        Command::Formal => single(Suite::Formal),
        Command::Integral => single(Suite::Integral),
        Command::Resurgence => single(Suite::Resurgence),
        Command::Stokes(args) => {
            apply_stokes(&mut config, args);
            single(Suite::Stokes)
        }
        Command::SpecfunSelftest => single(Suite::SpecfunSelftest),
        Command::Report(_) => None,
    };
    if let Some(suites) = suites {
        config.suites = suites;
    }
    config.validate()?;

    let report = run_suite(&config)?;
    if let Some(dir) = &config.out {
        report.write_to(dir)?;
    }
    match &cli.command {
        Command::Stokes(_) => match &report.stokes {
            Some(summary) => println!("{}", serde_json::to_string_pretty(summary)?),
            None => eprint!("{}", report.summary_table()),
        },
        Command::Report(args) => {
            print!("{}", report.summary_table());
            for kind in &args.plot {
                let csv = emit_plot_data(&report, *kind)?;
                match &config.out {
                    Some(dir) => std::fs::write(dir.join(format!("{kind}.csv")), csv)?,
                    None => print!("{csv}"),
                }
            }
        }
        _ => print!("{}", report.summary_table()),
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::exit_code(&e))
        }
    }
}
