use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use harmap_cli::config::load_map;
use harmap_cli::{
    emit_table, functional, report, run_suites, thread_pool, write_corpus, CliError, Format,
    FunctionalName, SuiteConfig, Summary,
};
use harmap_core::{FuzzSpec, Grid, QuadratureSpec};

#[derive(Parser)]
#[command(
    name = "harmap",
    version,
    about = "Functionals and inequality checks for planar harmonic maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one functional of a map and print it as JSON.
    Functional {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, value_enum)]
        name: FunctionalName,
        /// Radius; 1 selects the boundary value.
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        /// Hardy exponent; `inf` for the sup norm.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Also write a CSV table of area, length and right-hand-side curves.
        #[arg(long)]
        emit_table: Option<PathBuf>,
    },
    /// Run verification suites; exits 1 if any check fails.
    Verify {
        /// Suite config (JSON). Runs the default suite when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the config's output format.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Generate a random map corpus.
    Fuzz {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 8)]
        degree: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 0.3)]
        decay: f64,
        /// Enforce |b_n| <= |a_n|.
        #[arg(long)]
        dominance: bool,
        #[arg(long, default_value_t = 5.0)]
        target_k: f64,
        /// Rescale each map to S_f(1) = 1.
        #[arg(long)]
        normalize_area: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match thread_pool().and_then(|pool| pool.install(|| execute(cli.command))) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Functional {
            map,
            name,
            r,
            p,
            emit_table: table,
        } => {
            let f = load_map(&map)?;
            let q = QuadratureSpec::default();
            let value = functional(&f, name, r, p, &Grid::default(), &q)?;
            println!(
                "{}",
                serde_json::to_string(&value).map_err(|e| CliError::Io(e.to_string()))?
            );
            if let Some(path) = table {
                let mut out = BufWriter::new(File::create(&path)?);
                emit_table(&f, &q, &mut out)?;
                out.flush()?;
            }
            Ok(0)
        }
        Command::Verify {
            config,
            output,
            format,
        } => {
            let mut config = match config {
                Some(path) => SuiteConfig::load(&path)?,
                None => SuiteConfig::default_suite(),
            };
            if let Some(path) = output {
                config.output.path = Some(path);
            }
            if let Some(f) = format {
                config.output.format = match f {
                    FormatArg::Json => Format::Json,
                    FormatArg::Csv => Format::Csv,
                };
            }
            let rows = run_suites(&config)?;
            match &config.output.path {
                Some(path) => {
                    let mut out = BufWriter::new(File::create(path)?);
                    report::write_rows(&rows, config.output.format, &mut out)?;
                    out.flush()?;
                }
                None => {
                    let mut out = io::stdout().lock();
                    report::write_rows(&rows, config.output.format, &mut out)?;
                    out.flush()?;
                }
            }
            let s = Summary::of(&rows);
            eprintln!(
                "{} pass, {} fail, {} hypothesis-violated",
                s.pass, s.fail, s.hypothesis_violated
            );
            Ok(if s.fail > 0 { 1 } else { 0 })
        }
        Command::Fuzz {
            count,
            degree,
            seed,
            decay,
            dominance,
            target_k,
            normalize_area,
            out,
        } => {
            let spec = FuzzSpec {
                count,
                degree,
                seed,
                coeff_decay: decay,
                enforce_coeff_dominance: dominance,
                target_k,
                normalize_area,
            };
            let files = write_corpus(&spec, &Grid::default(), &out)?;
            eprintln!("wrote {} maps to {}", files.len(), out.display());
            Ok(0)
        }
    }
}
