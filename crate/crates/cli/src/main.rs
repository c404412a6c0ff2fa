use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use podles_cli::{render_csv, render_json, render_table, run_suite, CliError, Format, RunConfig, Suite};
use podles_core::special::QuadratureSpec;

#[derive(Parser)]
#[command(name = "podles", version, about = "Verification suites for the quantum Podles sphere")]
struct Cli {
    #[command(subcommand)]
    suite: SuiteCmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy)]
enum SuiteCmd {
    /// Groupoid convolution algebra laws
    Algebra,
    /// KMS states and modular theory
    Kms,
    /// Sphere relations and representations
    Podles,
    /// Symplectic groupoid structure
    Geometry,
    /// Bohr-Sommerfeld leaves and their groupoid
    BsLeaves,
    /// Section norms and weight pairs
    Norms,
    /// Large-n behaviour of r_n / l_n
    Asymptotics,
    /// Sections as a Hilbert algebra over the groupoid
    Bridge,
}

impl From<SuiteCmd> for Suite {
    fn from(s: SuiteCmd) -> Self {
        match s {
            SuiteCmd::Algebra => Suite::Algebra,
            SuiteCmd::Kms => Suite::Kms,
            SuiteCmd::Podles => Suite::Podles,
            SuiteCmd::Geometry => Suite::Geometry,
            SuiteCmd::BsLeaves => Suite::BsLeaves,
            SuiteCmd::Norms => Suite::Norms,
            SuiteCmd::Asymptotics => Suite::Asymptotics,
            SuiteCmd::Bridge => Suite::Bridge,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, env = "PODLES_HBAR", default_value_t = 0.5)]
    hbar: f64,
    #[arg(long, global = true, env = "PODLES_TRUNCATION", default_value_t = 64)]
    truncation: usize,
    #[arg(long, global = true, env = "PODLES_CUTOFF", default_value_t = 30)]
    cutoff: u64,
    #[arg(long, global = true, env = "PODLES_WINDOW", default_value_t = 30)]
    window: u64,
    #[arg(long, global = true, env = "PODLES_NMAX", default_value_t = 40)]
    nmax: u32,
    #[arg(long, global = true, env = "PODLES_QUAD_NODES")]
    quad_nodes: Option<usize>,
    #[arg(long, global = true, env = "PODLES_REL_TOL")]
    rel_tol: Option<f64>,
    #[arg(long, global = true, env = "PODLES_SEED", default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, env = "PODLES_FORMAT", value_enum, default_value = "csv")]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "PODLES_OUT")]
    out: Option<PathBuf>,
    /// Emit the suite's data table instead of the check report.
    #[arg(long, global = true)]
    table: bool,
}

impl Opts {
    fn config(&self) -> RunConfig {
        let mut quad = QuadratureSpec::default();
        if let Some(n) = self.quad_nodes {
            quad.nodes_per_panel = n;
        }
        if let Some(t) = self.rel_tol {
            quad.rel_tol = t;
        }
        RunConfig {
            hbar: self.hbar,
            truncation: self.truncation,
            cutoff: self.cutoff,
            window: self.window,
            nmax: self.nmax,
            quad,
            seed: self.seed,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let config = cli.opts.config();
    let report = run_suite(cli.suite.into(), &config)?;
    let format = match cli.opts.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    let text = if cli.opts.table {
        match &report.table {
            Some(t) => render_table(t, format)?,
            None => {
                return Err(CliError::InvalidConfig(format!(
                    "suite {} has no table",
                    report.suite
                )))
            }
        }
    } else {
        match format {
            Format::Csv => render_csv(&report)?,
            Format::Json => render_json(&report, &config),
        }
    };
    match &cli.opts.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => print!("{text}"),
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("podles: {e}");
            ExitCode::from(2)
        }
    }
}
