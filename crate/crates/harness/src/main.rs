use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hypenergy::suites::DEFAULT_GRID;
use hypenergy::{run_suite, write_csv, write_json, HarnessError, SetSpec, SuiteConfig, SUITES};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Runs an experiment suite and writes one row per instance.
#[derive(Debug, Parser)]
#[command(name = "hypenergy", version)]
struct Cli {
    /// Suite to run.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: String,
    /// A prime, a comma-separated list of primes, or `grid`.
    #[arg(long, default_value = "grid")]
    prime: String,
    /// Set A, e.g. `interval:1..10`, `ap:5,1,20`, `random:30@7`.
    #[arg(long = "A")]
    a: Option<SetSpec>,
    /// Set B.
    #[arg(long = "B")]
    b: Option<SetSpec>,
    /// Set C.
    #[arg(long = "C")]
    c: Option<SetSpec>,
    /// Set D.
    #[arg(long = "D")]
    d: Option<SetSpec>,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    lambda: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Leading constant of the `C·log³p` envelopes.
    #[arg(long)]
    envelope: Option<f64>,
    /// Record wall-clock milliseconds per row (output is then not reproducible).
    #[arg(long)]
    timings: bool,
}

fn parse_primes(text: &str) -> Result<Vec<u64>, String> {
    if text == "grid" {
        return Ok(DEFAULT_GRID.to_vec());
    }
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad prime `{s}`: {e}"))
        })
        .collect()
}

fn run(cli: Cli) -> Result<bool, String> {
    let cfg = SuiteConfig {
        primes: parse_primes(&cli.prime)?,
        a: cli.a,
        b: cli.b,
        c: cli.c,
        d: cli.d,
        lambda: cli.lambda,
        seed: cli.seed,
        envelope: cli.envelope,
        timings: cli.timings,
    };
    let rows = run_suite(&cli.suite, &cfg).map_err(|e: HarnessError| e.to_string())?;

    let sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(File::create(path).map_err(|e| format!("{}: {e}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut sink = BufWriter::new(sink);
    match cli.format {
        Format::Csv => write_csv(&rows, &mut sink).map_err(|e| e.to_string())?,
        Format::Json => write_json(&rows, &mut sink).map_err(|e| e.to_string())?,
    }
    sink.flush().map_err(|e| e.to_string())?;

    let failures: Vec<_> = rows.iter().filter(|r| r.is_failure()).collect();
    for r in &failures {
        eprintln!(
            "FAIL {} p={} A={} B={} C={} D={} lambda={} lhs={} rhs={} ratio={}",
            r.suite, r.p, r.a, r.b, r.c, r.d, r.lambda, r.lhs, r.rhs, r.ratio
        );
    }
    log::info!("{} rows, {} failures", rows.len(), failures.len());
    Ok(failures.is_empty())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
