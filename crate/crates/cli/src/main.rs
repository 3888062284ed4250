//! `respectra`: encode, shred, reassemble and decode strings under the four
//! reconstruction regimes, and tabulate counting bounds.

mod commands;
mod manifest;
mod regime;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{BoundsRequest, Channel, Failure, Io, LengthRange, LengthRule};
use regime::{CodeArgs, Regime};

#[derive(Parser)]
#[command(name = "respectra", version, about = "Reconstruction codes for substring spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode one message per line into codewords.
    Encode {
        regime: Regime,
        #[command(flatten)]
        code: CodeArgs,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Manifest path; defaults to `<output>.manifest`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Decode one codeword per line.
    Decode {
        regime: Regime,
        #[command(flatten)]
        code: CodeArgs,
        /// Manifest of the encode run, instead of code parameters.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Cut each codeword into reads through the deletion and flip channels.
    Shred {
        /// Read length.
        #[arg(long = "L")]
        read_len: usize,
        /// Maximum number of consecutive missing reads.
        #[arg(long = "G", default_value_t = 0)]
        max_gap: usize,
        /// Maximum flips per read.
        #[arg(long = "t", default_value_t = 0)]
        max_flips: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep only every (G+1)-th read instead of random gaps.
        #[arg(long)]
        adversarial: bool,
        /// Resample flips until every covered position has a correct majority.
        #[arg(long)]
        reliable: bool,
        /// Flip exactly t bits of every read.
        #[arg(long)]
        exact_flips: bool,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Read origins and flip offsets, per spectrum.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Manifest path; defaults to `<output>.manifest`.
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Rebuild codewords from spectrum blocks.
    Assemble {
        regime: Regime,
        #[command(flatten)]
        code: CodeArgs,
        /// Manifest of the encode run, instead of code parameters.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Tabulate bounds on the number of strings with distinct (L−1)-windows.
    Bounds {
        /// Code lengths, `a..b` (inclusive) or a single value.
        #[arg(long)]
        n: LengthRange,
        /// Fixed read length, overriding --L-rule.
        #[arg(long = "L")]
        read_len: Option<usize>,
        #[arg(long = "L-rule", value_enum, default_value = "2logn+2")]
        rule: LengthRule,
        /// Count exactly by exhaustive enumeration.
        #[arg(long)]
        enumerate: bool,
        /// Comma-separated rows `n,L,lower,upper,exact`.
        #[arg(long)]
        csv: bool,
    },
}

fn run(cli: Cli) -> Result<Vec<Failure>> {
    match cli.command {
        Command::Encode { regime, code, input, output, manifest } => {
            let codec = regime::Codec::build(regime, &code)?;
            commands::encode(&codec, &Io { input: &input, output: &output, manifest: manifest.as_deref() })
        }
        Command::Decode { regime, code, manifest, input, output } => {
            let codec = commands::codec_for(regime, manifest.as_deref(), &code)?;
            commands::decode(&codec, &Io { input: &input, output: &output, manifest: None })
        }
        Command::Shred {
            read_len,
            max_gap,
            max_flips,
            seed,
            adversarial,
            reliable,
            exact_flips,
            input,
            output,
            trace,
            manifest,
        } => {
            let channel = Channel { read_len, max_gap, max_flips, seed, adversarial, reliable, exact_flips };
            let io = Io { input: &input, output: &output, manifest: manifest.as_deref() };
            commands::shred(&channel, &io, trace.as_deref())
        }
        Command::Assemble { regime, code, manifest, input, output } => {
            let codec = commands::codec_for(regime, manifest.as_deref(), &code)?;
            commands::assemble(&codec, &input, &output)
        }
        Command::Bounds { n, read_len, rule, enumerate, csv } => {
            print!("{}", commands::bounds(&BoundsRequest { lengths: n, read_len, rule, enumerate, csv })?);
            Ok(Vec::new())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (unit, units) = match cli.command {
        Command::Assemble { .. } => ("spectrum", "spectra"),
        _ => ("line", "lines"),
    };
    match run(cli) {
        Ok(failed) if failed.is_empty() => ExitCode::SUCCESS,
        Ok(failed) => {
            eprint!("{}", commands::describe(&failed, unit));
            eprintln!("error: {} item(s) failed: {units} {}", failed.len(), commands::failed_numbers(&failed));
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
