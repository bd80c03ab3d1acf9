//! Command-line driver for the verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use so41kit::discrete::LambdaParam;
use so41kit::report::VerificationReport;
use so41kit::suites;

#[derive(Parser, Debug)]
#[command(name = "so41kit", version, about = "Exact verification suites for SO_e(4,1) discrete series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(clap::Args, Debug)]
struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct Module {
    /// Harish-Chandra parameter as L1,L2 with λ1 ≥ λ2 ≥ 0.
    #[arg(long, allow_hyphen_values = true)]
    lambda: LambdaParam,
    /// Truncation level t.
    #[arg(long, default_value_t = 6)]
    level: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Commutator table, Jacobi identity and PBW suites.
    CheckStructure(Output),
    /// Clifford algebra, spin module and Dirac operator identities.
    CheckClifford(Output),
    /// Solve the module truncation, check it and optionally write it out.
    Build {
        #[command(flatten)]
        module: Module,
        /// Write the solved module record to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Dirac cohomology of the truncation.
    Cohomology {
        #[command(flatten)]
        module: Module,
        #[command(flatten)]
        output: Output,
    },
    /// Induced module and the action map into X ⊗ S.
    Induct {
        #[command(flatten)]
        module: Module,
        #[command(flatten)]
        output: Output,
    },
    /// Every suite in registry order.
    VerifyAll {
        #[command(flatten)]
        module: Module,
        #[command(flatten)]
        output: Output,
    },
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Tsv => report.to_tsv(),
    }
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cache = suites::cache_dir_from_env();
    let cache = cache.as_deref();
    let (report, format) = match cli.command {
        Command::CheckStructure(o) => (suites::check_structure_report(), o.format),
        Command::CheckClifford(o) => (suites::check_clifford_report(), o.format),
        Command::Build { module, out, output } => {
            let (report, mt) = suites::build_report(module.lambda, module.level, cache);
            if let (Some(path), Some(mt)) = (out, mt) {
                std::fs::write(&path, mt.to_json())
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            (report, output.format)
        }
        Command::Cohomology { module, output } => {
            (suites::cohomology_report(module.lambda, module.level, cache), output.format)
        }
        Command::Induct { module, output } => {
            (suites::induct_report(module.lambda, module.level, cache), output.format)
        }
        Command::VerifyAll { module, output } => {
            (suites::verify_all_report(module.lambda, module.level, cache), output.format)
        }
    };
    print!("{}", render(&report, format));
    for c in report.failures() {
        eprintln!("FAIL {}: expected {}, got {}", c.name, c.expected, c.actual);
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
