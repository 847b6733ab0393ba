use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twcx::bundle::Bundle;
use twcx::generate::{generate, GenerateParams};
use twcx::linalg::BaseRing;
use twcx::report::VerificationReport;
use twcx::verify::{ho_invert_bundle, phi_bundle, selftest, sole_homotopy, validate_bundle};
use twcx::Error;

#[derive(Parser)]
#[command(
    name = "twcx",
    version,
    about = "Exact checks for twisted complexes and the transformations induced by homotopies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Append wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run every validator on a bundle.
    Validate {
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Build the transformation induced by a homotopy and verify it.
    Phi {
        #[arg(long)]
        bundle: PathBuf,
        /// Defaults to the bundle's only homotopy.
        #[arg(long)]
        homotopy: Option<String>,
        #[arg(long, default_value = "P")]
        probe: String,
        #[arg(long, default_value_t = 3)]
        max_level: usize,
        /// Where to write the components of Φ.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a seeded random bundle.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `q` or a prime `p` for GF(p).
        #[arg(long, default_value = "q")]
        ring: String,
        #[arg(long, default_value_t = 4)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        sets: usize,
        #[arg(long, default_value_t = 2)]
        source_sets: usize,
        #[arg(long, default_value_t = 3)]
        truncation: usize,
        #[arg(long, default_value_t = 2)]
        max_rank: usize,
        #[arg(long, default_value_t = 1)]
        amplitude: usize,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a homotopy inverse of a closed degree-0 morphism.
    HoInvert {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        morphism: String,
        /// Where to write the witness.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate instances and run every suite, including mutation checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_ring(s: &str) -> twcx::Result<BaseRing> {
    match s {
        "q" | "Q" => Ok(BaseRing::Rationals),
        _ => {
            let p: u64 = s
                .strip_prefix("GF(")
                .and_then(|t| t.strip_suffix(')'))
                .unwrap_or(s)
                .parse()
                .map_err(|_| Error::Structural(format!("unknown ring {s:?}")))?;
            BaseRing::prime_field(p)
        }
    }
}

fn write_json(path: &PathBuf, value: &impl Serialize) -> twcx::Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    std::fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Runs the command; `None` means the command wrote its own output.
fn run(cli: &Cli) -> twcx::Result<Option<VerificationReport>> {
    match &cli.command {
        Command::Validate { bundle } => Ok(Some(validate_bundle(&Bundle::read(bundle)?)?)),
        Command::Phi {
            bundle,
            homotopy,
            probe,
            max_level,
            out,
        } => {
            let b = Bundle::read(bundle)?;
            let name = match homotopy {
                Some(n) => n.clone(),
                None => sole_homotopy(&b)?.to_string(),
            };
            let (report, components) = phi_bundle(&b, &name, probe, *max_level)?;
            if let Some(out) = out {
                write_json(out, &components)?;
            }
            Ok(Some(report))
        }
        Command::Generate {
            seed,
            ring,
            points,
            sets,
            source_sets,
            truncation,
            max_rank,
            amplitude,
            out,
        } => {
            let params = GenerateParams {
                ring: parse_ring(ring)?,
                points: *points,
                sets: *sets,
                source_sets: *source_sets,
                truncation: *truncation,
                max_rank: *max_rank,
                amplitude: *amplitude,
            };
            let g = generate(*seed, &params)?;
            let json = g.bundle.to_json();
            match out {
                Some(path) => {
                    std::fs::write(path, json).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    let mut r = VerificationReport::new("generate", Some(*seed));
                    r.note(format!("cylinder orientation: {:?}", g.orientation));
                    r.note(format!("planted weak equivalence: {}", g.weak_equivalence));
                    r.note(format!("planted non-equivalence: {}", g.non_equivalence));
                    Ok(Some(r))
                }
                None => {
                    print!("{json}");
                    Ok(None)
                }
            }
        }
        Command::HoInvert { bundle, morphism, out } => {
            let b = Bundle::read(bundle)?;
            let (report, witness) = ho_invert_bundle(&b, morphism)?;
            if let (Some(out), Some(w)) = (out, &witness) {
                write_json(out, w)?;
            }
            Ok(Some(report))
        }
        Command::Selftest { seed } => Ok(Some(selftest(*seed)?)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok(Some(mut report)) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            match cli.format {
                Format::Json => print!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("twcx: {e}");
            ExitCode::from(if e.is_structural() { 2 } else { 1 })
        }
    }
}
