use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lightlike::catalog::CATALOG;
use lightlike::export::{self, ExportKind};
use lightlike::sweep::with_threads;
use lightlike::verify::run_verify;
use lightlike::{parse_config, run_sweep, AnalysisConfig, CliError, OUTPUT_DIR_ENV, THREADS_ENV};

/// Lightlike hypersurface analysis over parameter grids.
#[derive(Parser)]
#[command(name = "lightlike", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis and write the selected outputs.
    Analyze {
        config: PathBuf,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "lightlike-run")]
        out: PathBuf,
    },
    /// Run only the identity and residual suites.
    Verify {
        config: PathBuf,
        #[arg(long, env = OUTPUT_DIR_ENV, default_value = "lightlike-run")]
        out: PathBuf,
    },
    /// Regenerate artifacts from a run directory's report.json.
    Export {
        run_dir: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Destination (defaults to the run directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in geometry families.
    Catalog,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Report,
    Eigenfields,
    Mesh,
}

fn load(path: &Path) -> Result<AnalysisConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Validation(m) => CliError::Validation(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn analyze(config: &Path, out: &Path, threads: Option<usize>) -> Result<(), CliError> {
    let config = load(config)?;
    let report = with_threads(threads, || run_sweep(&config))??;
    let written = export::export_selected(&report, out)?;
    let s = &report.summary;
    println!(
        "{}: {} nodes, {} failed, {} ambiguous; labels {:?}",
        report.config.family, s.nodes, s.failed, s.ambiguous, s.label_sets
    );
    for p in written {
        println!("wrote {}", p.display());
    }
    if s.failure_fraction > report.config.tolerances.failure_fraction {
        return Err(CliError::Runtime(format!(
            "{} of {} nodes failed (threshold {})",
            s.failed, s.nodes, report.config.tolerances.failure_fraction
        )));
    }
    Ok(())
}

fn verify(config: &Path, out: &Path, threads: Option<usize>) -> Result<(), CliError> {
    let config = load(config)?;
    let report = with_threads(threads, || run_verify(&config))??;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let path = out.join("verify.json");
    std::fs::write(&path, export::to_json(&report)).map_err(|e| CliError::io(&path, e))?;
    for c in &report.checks {
        let verdict = if c.passed { "ok  " } else { "FAIL" };
        println!(
            "{verdict} {:<18} max {:.3e}  worst/bound {:.3}  ({} evaluated)",
            c.name, c.max, c.worst_ratio, c.evaluated
        );
    }
    if !report.passed {
        return Err(CliError::Runtime(format!("verification failed ({} failed nodes)", report.failed)));
    }
    Ok(())
}

fn export_cmd(run_dir: &Path, kind: Kind, out: Option<&Path>) -> Result<(), CliError> {
    let report = export::read_report(&run_dir.join("report.json"))?;
    let kind = match kind {
        Kind::Report => ExportKind::Report,
        Kind::Eigenfields => ExportKind::Eigenfields,
        Kind::Mesh => ExportKind::Mesh,
    };
    for p in export::export(&report, kind, out.unwrap_or(run_dir))? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn catalog() {
    for f in CATALOG {
        let dims = if f.n_min == f.n_max { format!("n={}", f.n_min) } else { format!("n={}..{}", f.n_min, f.n_max) };
        println!("{:<20} {:<9} {}", f.name, dims, f.summary);
        for p in f.params {
            println!("    {:<12} default {:<8} range [{}, {}]", p.name, p.default, p.min, p.max);
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Analyze { config, out } => analyze(config, out, cli.threads),
        Command::Verify { config, out } => verify(config, out, cli.threads),
        Command::Export { run_dir, kind, out } => export_cmd(run_dir, *kind, out.as_deref()),
        Command::Catalog => {
            catalog();
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lightlike: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
