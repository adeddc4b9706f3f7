//! `verify`: recompute every audited claim and render the report.
//!
//! Exit status: 0 when no claim fails (mismatches may be waived), 1 when an
//! unwaived mismatch or an oracle disagreement remains, 2 on usage or input
//! errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, ValueEnum};
use einres_core::paper_data::suite::suite_of;
use einres_core::{verify, SuiteName, VerifyOptions, Waivers};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Interior,
    Traces,
    #[value(name = "boundary-d2d2")]
    BoundaryD2D2,
    #[value(name = "boundary-d1d3")]
    BoundaryD1D3,
    All,
}

impl SuiteArg {
    fn names(self) -> Vec<SuiteName> {
        match self {
            Self::Interior => vec![SuiteName::Interior],
            Self::Traces => vec![SuiteName::Traces],
            Self::BoundaryD2D2 => vec![SuiteName::BoundaryD2D2],
            Self::BoundaryD1D3 => vec![SuiteName::BoundaryD1D3],
            Self::All => SuiteName::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

/// Recompute the audited boundary and interior coefficients and compare
/// them with the expected records.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Args {
    #[arg(long, value_enum)]
    suite: SuiteArg,
    #[arg(long, value_enum, default_value = "md")]
    format: Format,
    /// Write per-case intermediate values of boundary suites into DIR.
    #[arg(long, value_name = "DIR")]
    emit_intermediates: Option<PathBuf>,
    /// Replace the expected data of the suite named inside FILE.
    #[arg(long, value_name = "FILE")]
    expected_override: Vec<PathBuf>,
    /// Write the report to FILE instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    output: Option<PathBuf>,
}

fn run(args: Args) -> anyhow::Result<i32> {
    let mut overrides = BTreeMap::new();
    for path in &args.expected_override {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let name = suite_of(&text).with_context(|| format!("parsing {}", path.display()))?;
        if overrides.insert(name, text).is_some() {
            bail!("more than one override for suite {name}");
        }
    }
    let opts = VerifyOptions {
        waivers: Waivers::from_env().context("loading waivers")?,
        overrides,
        emit_intermediates: args.emit_intermediates,
    };
    let report = verify(&args.suite.names(), &opts)?;
    let text = match args.format {
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    };
    match &args.output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("verify: {e:#}");
            ExitCode::from(2)
        }
    }
}
