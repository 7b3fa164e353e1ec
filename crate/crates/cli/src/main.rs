use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use symspec::commands::{cmd_compare, cmd_density, cmd_edge, cmd_overlap, cmd_sample, dump_matrices, RunConfig};
use symspec::ensembles::EnsembleKind;
use symspec::io::{emit_curves, emit_records, format_for_path, parse_records, read_text, write_text, Format};
use symspec::verify::{cmd_verify, emit_report, Mutation, Suite, VerificationReport, VerifyOptions};

#[derive(Parser, Debug)]
#[command(name = "symspec", version, about = "Eigenvalue density and eigenvector nonorthogonality of complex symmetric random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Matrix size N.
    #[arg(long, global = true, default_value_t = 10)]
    n: usize,

    #[arg(long, global = true, default_value = "ai-gaussian", value_parser = parse_ensemble)]
    ensemble: EnsembleKind,

    /// Number of sampled matrices.
    #[arg(long, global = true, default_value_t = 1000)]
    matrices: u64,

    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[arg(long, global = true, env = "SYMSPEC_WORKERS", default_value_t = 1)]
    workers: usize,

    /// Grid points for curve commands.
    #[arg(long, global = true, default_value_t = 201)]
    points: usize,

    #[arg(long, global = true, default_value_t = 0.0, allow_negative_numbers = true)]
    r_min: f64,

    #[arg(long, global = true, default_value_t = 2.0, allow_negative_numbers = true)]
    r_max: f64,

    /// Upper end of the t grid (overlap, default 20) or σ grid (edge, default 60).
    #[arg(long, global = true)]
    t_max: Option<f64>,

    #[arg(long, global = true, default_value_t = -6.0, allow_negative_numbers = true)]
    s_min: f64,

    #[arg(long, global = true, default_value_t = 6.0, allow_negative_numbers = true)]
    s_max: f64,

    /// Fixed radius for `overlap`.
    #[arg(long, global = true, default_value_t = 0.0)]
    r: f64,

    /// Annulus `lo:hi` for conditioned overlap statistics.
    #[arg(long, global = true, default_value = "0:0.2", value_parser = parse_annulus)]
    annulus: (f64, f64),

    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format; defaults to the extension of --out, else csv.
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<Format>,

    #[arg(long, global = true, default_value = "all", value_parser = parse_suite)]
    suite: Suite,

    /// Also write the sampled matrix entries to this path.
    #[arg(long, global = true)]
    dump_matrix: Option<PathBuf>,

    #[arg(long, global = true, hide = true)]
    inject_edge_sign_bug: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Radial density: exact, large-N and triangular.
    Density,
    /// Overlap density at fixed radius: exact, bulk and edge limits.
    Overlap,
    /// Edge profiles and edge overlap laws of AI† and both Ginibre ensembles.
    Edge,
    /// Sample matrices and emit one record per eigenvalue.
    Sample,
    /// Compare a record file with the exact laws.
    Compare {
        /// Record file written by `sample` (csv or json).
        input: PathBuf,
    },
    /// Run the acceptance suite.
    Verify,
}

fn parse_ensemble(s: &str) -> Result<EnsembleKind, String> {
    s.parse().map_err(|e: symspec::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: symspec::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: symspec::Error| e.to_string())
}

fn parse_annulus(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad annulus bound '{lo}'"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad annulus bound '{hi}'"))?;
    Ok((lo, hi))
}

impl Cli {
    fn config(&self) -> RunConfig {
        let t_max = self.t_max.unwrap_or(match self.command {
            Command::Edge => 60.0,
            _ => 20.0,
        });
        RunConfig {
            n: self.n,
            ensemble: self.ensemble,
            matrices: self.matrices,
            seed: self.seed,
            workers: self.workers,
            points: self.points,
            r_min: self.r_min,
            r_max: self.r_max,
            t_max,
            s_min: self.s_min,
            s_max: self.s_max,
            r: self.r,
            annulus: self.annulus,
            ..RunConfig::default()
        }
    }

    fn format(&self) -> Format {
        self.format
            .unwrap_or_else(|| self.out.as_deref().map_or(Format::Csv, format_for_path))
    }
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => write_text(p, text)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout")?,
    }
    Ok(())
}

fn print_report(report: &VerificationReport) {
    for c in &report.checks {
        eprintln!("{}", c.line());
    }
    eprintln!("overall: {}", if report.overall { "PASS" } else { "FAIL" });
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let cfg = cli.config();
    let format = cli.format();
    if cli.dump_matrix.is_some() && !matches!(cli.command, Command::Sample) {
        bail!("--dump-matrix applies to `sample` only");
    }
    match &cli.command {
        Command::Density => emit(cli.out.as_deref(), &emit_curves(&cmd_density(&cfg)?, format)?)?,
        Command::Overlap => emit(cli.out.as_deref(), &emit_curves(&cmd_overlap(&cfg)?, format)?)?,
        Command::Edge => emit(cli.out.as_deref(), &emit_curves(&cmd_edge(&cfg)?, format)?)?,
        Command::Sample => {
            let table = cmd_sample(&cfg)?;
            let failures = table.records.len() < cfg.n * cfg.matrices as usize;
            emit(cli.out.as_deref(), &emit_records(&table, format)?)?;
            if let Some(path) = &cli.dump_matrix {
                write_text(path, &emit_curves(&dump_matrices(&cfg)?, format_for_path(path))?)?;
            }
            if failures {
                eprintln!("warning: some matrices failed to diagonalize; see the footer");
            }
        }
        Command::Compare { input } => {
            let text = read_text(input)?;
            let table = parse_records(&text, format_for_path(input))
                .with_context(|| format!("reading {}", input.display()))?;
            let report = cmd_compare(&cfg, &table)?;
            print_report(&report);
            emit(cli.out.as_deref(), &emit_report(&report, format)?)?;
            return Ok(report.overall);
        }
        Command::Verify => {
            cfg.validate()?;
            let opts = VerifyOptions {
                suite: cli.suite,
                workers: cli.workers,
                mutation: cli.inject_edge_sign_bug.then_some(Mutation::EdgeProfileSign),
            };
            let report = cmd_verify(&opts);
            print_report(&report);
            emit(cli.out.as_deref(), &emit_report(&report, format)?)?;
            return Ok(report.overall);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
