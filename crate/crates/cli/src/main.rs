// `!(x > y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
use std::path::PathBuf;
use std::process::ExitCode;

use briesz_cli::{emit, run, Experiment, ExperimentConfig, Method, OutputFormat, Overrides};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Bochner-Riesz experiments: kernels, convergence studies and norm bounds.
#[derive(Parser)]
#[command(name = "briesz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the kernel and its Lq norms.
    Kernel(Common),
    /// Apply the operator to a test function or an input file.
    Apply(Common),
    /// Lp norms and moduli of continuity.
    Norms(Common),
    /// Sharp Young inequality trials.
    Young(Common),
    /// Lp convergence as R grows.
    Converge(Common),
    /// Uniform convergence as R grows.
    Uconverge(Common),
    /// Grand Lebesgue norm transfer ratios.
    Gls(Common),
    /// Gaussian limit of the means with alpha = R^2/2.
    GaussLimit(Common),
    /// W coefficient and nu tables.
    Bounds(Common),
    /// Grid search for the lower bound on W.
    Lowerbound(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Full or partial experiment configuration (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    /// Multiplier radii, comma separated.
    #[arg(long = "R", value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Source exponents, comma separated; `inf` allowed.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Target exponents, comma separated; `inf` allowed.
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<f64>>,
    /// Kernel norm exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    /// power:m=2 | iwsb:a=1,b=3,alpha=1,beta=0 | point:r=2
    #[arg(long)]
    psi: Option<String>,
    #[arg(long)]
    half_extent: Option<f64>,
    /// Grid points per axis.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    /// Grid function file to use instead of the test function.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Where `apply` stores the output for the largest R.
    #[arg(long)]
    save_field: Option<PathBuf>,
    /// Use direct kernel quadrature instead of the spectral operator.
    #[arg(long)]
    direct: bool,
}

impl Common {
    fn overrides(self) -> (Option<PathBuf>, Overrides) {
        let o = Overrides {
            alpha: self.alpha,
            dim: self.dim,
            radii: self.radii,
            p: self.p,
            r: self.r,
            q: self.q,
            psi: self.psi,
            half_extent: self.half_extent,
            points: self.points,
            trials: self.trials,
            seed: self.seed,
            format: self.format.map(|f| match f {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            }),
            out: self.out,
            input: self.input,
            save_field: self.save_field,
            method: self.direct.then_some(Method::Direct),
        };
        (self.config, o)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, common) = match cli.command {
        Command::Kernel(c) => (Experiment::Kernel, c),
        Command::Apply(c) => (Experiment::Apply, c),
        Command::Norms(c) => (Experiment::Norms, c),
        Command::Young(c) => (Experiment::Young, c),
        Command::Converge(c) => (Experiment::Converge, c),
        Command::Uconverge(c) => (Experiment::Uconverge, c),
        Command::Gls(c) => (Experiment::Gls, c),
        Command::GaussLimit(c) => (Experiment::GaussLimit, c),
        Command::Bounds(c) => (Experiment::Bounds, c),
        Command::Lowerbound(c) => (Experiment::Lowerbound, c),
    };
    let (file, overrides) = common.overrides();
    let result = ExperimentConfig::build(experiment, file.as_deref(), &overrides).and_then(|cfg| {
        let report = run(&cfg)?;
        let text = emit(&cfg, &report)?;
        if cfg.out.is_none() {
            print!("{text}");
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("briesz: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
