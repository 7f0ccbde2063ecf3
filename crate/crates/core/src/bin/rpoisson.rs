use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rpoisson::input::{load_manifold, parse_sample_file, sample_rows, FoliationSpecFile, Manifold};
use rpoisson::report::Report;
use rpoisson::{pipeline, Error, Result};

/// Exact verification of Poisson bivectors with cotangent metrics.
#[derive(Parser)]
#[command(name = "rpoisson", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// JSON list of sample points replacing the spec's samples.
    #[arg(long, global = true, value_name = "PATH")]
    samples: Option<PathBuf>,
}

#[derive(Args)]
struct SpecArg {
    /// Manifold spec file.
    spec: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Run every verification on a manifold spec.
    Check(SpecArg),
    /// Print the full table of Christoffel symbols.
    Christoffel(SpecArg),
    /// Frames, leafwise symplectic form and invariance report.
    Foliation(SpecArg),
    /// Build a manifold spec from a foliation spec.
    Construct {
        /// Foliation spec file.
        spec: PathBuf,
        /// Run the check pipeline on the constructed spec.
        #[arg(long)]
        verify: bool,
    },
    /// Truncated Poisson cohomology on a polynomial window.
    Cohomology {
        spec: PathBuf,
        #[arg(long = "p", default_value_t = 1)]
        p: usize,
        /// Coefficient degree bound of the window.
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Compare with basic and leafwise cohomology.
        #[arg(long)]
        thm31: bool,
    },
    /// Check pipeline with the Christoffel table and Betti numbers, as JSON.
    Report(SpecArg),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load(path: &Path, samples: Option<&Path>) -> Result<(Manifold, String)> {
    let text = read(path)?;
    let mut m = load_manifold(&text)?;
    if let Some(s) = samples {
        m.samples = parse_sample_file(&read(s)?, m.chart())?;
    }
    Ok((m, text))
}

/// Writes to stdout. A closed pipe, as with `| head`, is not an error.
fn write_stdout(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(report: &Report, json: bool) -> u8 {
    if json {
        write_stdout(&(report.to_json() + "\n"));
    } else {
        write_stdout(&report.to_text());
    }
    report.exit_code() as u8
}

fn run(cli: &Cli) -> Result<u8> {
    let samples = cli.samples.as_deref();
    match &cli.command {
        Command::Check(a) | Command::Christoffel(a) | Command::Foliation(a) | Command::Report(a) => {
            let (m, text) = load(&a.spec, samples)?;
            let label = a.spec.display().to_string();
            let report = match &cli.command {
                Command::Check(_) => pipeline::check(&m, &label, text.as_bytes())?,
                Command::Christoffel(_) => pipeline::christoffel(&m, &label, text.as_bytes())?,
                Command::Foliation(_) => pipeline::foliation(&m, &label, text.as_bytes())?,
                _ => return Ok(emit(&pipeline::full_report(&m, &label, text.as_bytes())?, true)),
            };
            Ok(emit(&report, cli.json))
        }
        Command::Cohomology { spec, p, degree, thm31 } => {
            let (m, text) = load(spec, samples)?;
            let report = pipeline::cohomology(&m, &spec.display().to_string(), text.as_bytes(), *p, *degree, *thm31)?;
            Ok(emit(&report, cli.json))
        }
        Command::Construct { spec, verify } => {
            let text = read(spec)?;
            let mut file = FoliationSpecFile::from_json(&text)?;
            if let Some(s) = samples {
                let chart = rpoisson::symbolic::Chart::new(file.coordinates.iter().cloned())?;
                let points = parse_sample_file(&read(s)?, &chart)?;
                file.samples = sample_rows(&points);
            }
            let out = pipeline::construct(&file)?;
            let json = out.to_json();
            write_stdout(&format!("{json}\n"));
            if !verify {
                return Ok(0);
            }
            let m = load_manifold(&json)?;
            let report = pipeline::check(&m, &format!("{} (constructed)", spec.display()), json.as_bytes())?;
            eprint!("{}", if cli.json { report.to_json() + "\n" } else { report.to_text() });
            Ok(report.exit_code() as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
