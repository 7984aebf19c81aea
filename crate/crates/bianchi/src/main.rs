//! Command-line driver for presentations of singly-cusped Bianchi groups.
//!
//! Exit codes: 0 success; 2 invalid input (unsupported ring, bad flag or
//! file); 3 covering-certificate failure; 4 relator verification failure;
//! internal assertion failures abort with the standard panic code (101).

use bianchi::algebra::abelianize;
use bianchi::coverage;
use bianchi::io;
use bianchi::pipeline::{
    self, check_cover_run, default_height, verify_presentation, HeightSpec, PipelineError,
    RunConfig,
};
use bianchi::ring::Rational;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_COVER_FAILED: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "bianchi",
    about = "Finite presentations of the singly-cusped Bianchi groups PSL2(O_d), \
             computed from horoball covering certificates in exact arithmetic",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RingArgs {
    /// Discriminant: one of -2, -7, -11, -19, -43, -67, -163
    #[arg(long = "d", allow_hyphen_values = true)]
    d: i64,
    /// Exact horoball height, e.g. "1/2", "3218/10000", or "0.3218";
    /// defaults to the packaged height for the ring
    #[arg(long, value_parser = parse_height, allow_hyphen_values = true)]
    height: Option<Rational>,
    /// Starting grid resolution for the covering certificate
    #[arg(long, default_value_t = 100)]
    grid: u32,
    /// Resolution cap for the doubling retries of the certificate
    #[arg(long, default_value_t = 3200)]
    grid_cap: u32,
    /// Worker threads (defaults to all cores)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: generators, covering certificate,
    /// relations, presentation, abelianization
    Compute {
        #[command(flatten)]
        ring: RingArgs,
        /// Descend heights (1/2, then x9/10) until the cover certifies,
        /// instead of using a fixed height
        #[arg(long, conflicts_with = "height")]
        auto_height: bool,
        /// Output directory for presentation files
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write the covering figure (SVG) to this path
        #[arg(long)]
        figure: Option<PathBuf>,
        /// Apply Tietze cleanup and write the cleaned presentation too
        #[arg(long)]
        cleanup: bool,
        /// Export the presentation as CAS group-constructor text
        #[arg(long)]
        export_cas: Option<PathBuf>,
    },
    /// Check the covering certificate only
    CheckCover {
        #[command(flatten)]
        ring: RingArgs,
        /// Write the covering figure (SVG) to this path
        #[arg(long)]
        figure: Option<PathBuf>,
    },
    /// Evaluate every relator of a presentation file as a matrix identity
    Verify {
        /// Presentation file (.bpres)
        file: PathBuf,
    },
    /// Abelianize a presentation file (Smith normal form)
    Abelianize {
        /// Presentation file (.bpres)
        file: PathBuf,
    },
    /// Convert a presentation file to CAS group-constructor text
    Export {
        /// Presentation file (.bpres)
        file: PathBuf,
        /// Output path for the CAS text
        #[arg(long)]
        cas: PathBuf,
    },
}

fn parse_height(text: &str) -> Result<Rational, String> {
    io::parse_rational(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match &err {
                PipelineError::CoverFailed { .. } => EXIT_COVER_FAILED,
                PipelineError::Ring(_) | PipelineError::BadHeight(_) => EXIT_INVALID_INPUT,
                PipelineError::Io(io::IoError::Parse(..))
                | PipelineError::Io(io::IoError::BadMatrix(..))
                | PipelineError::Io(io::IoError::Ring(_)) => EXIT_INVALID_INPUT,
                PipelineError::Io(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, PipelineError> {
    match cli.command {
        Command::Compute {
            ring,
            auto_height,
            out,
            figure,
            cleanup,
            export_cas,
        } => {
            let height = if auto_height {
                HeightSpec::Auto
            } else {
                match ring.height.clone() {
                    Some(h) => HeightSpec::Fixed(h),
                    None => match default_height(ring.d) {
                        Some(h) => HeightSpec::Fixed(h),
                        // let compute() produce the proper ring diagnostic
                        None => HeightSpec::Auto,
                    },
                }
            };
            let cfg = RunConfig {
                d: ring.d,
                height,
                grid_start: ring.grid,
                grid_cap: ring.grid_cap,
                cleanup,
                cleanup_budget: 10_000,
                workers: ring.workers,
            };
            let output = pipeline::compute(&cfg)?;
            print!("{}", output.report);
            let written = pipeline::write_outputs(
                &output,
                &out,
                export_cas.as_deref(),
                figure.as_deref(),
            )?;
            for path in written {
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckCover { ring, figure } => {
            let (gens, circles, cover) = check_cover_run(
                ring.d,
                ring.height.clone(),
                ring.grid,
                ring.grid_cap,
                ring.workers,
            )?;
            println!(
                "d = {}: {} generator discs ({} with translates), grid {} x {}",
                ring.d,
                gens.len(),
                circles.len(),
                cover.n(),
                cover.n()
            );
            if let Some(path) = figure {
                coverage::render_figure(gens.params(), &circles, &cover, &path)
                    .map_err(io::IoError::from)?;
                println!("wrote {}", path.display());
            }
            if cover.covered() {
                println!("covered: every cell certified");
                Ok(ExitCode::SUCCESS)
            } else {
                let cells = cover.uncovered_cells();
                println!("NOT covered: {} cells uncertified", cells.len());
                for cell in cells.iter().take(20) {
                    println!("  cell ({}, {}) of {}", cell.i, cell.j, cell.n);
                }
                if cells.len() > 20 {
                    println!("  ... and {} more", cells.len() - 20);
                }
                Ok(ExitCode::from(EXIT_COVER_FAILED))
            }
        }
        Command::Verify { file } => {
            let pres = io::load_presentation(&file)?;
            let report = verify_presentation(&pres);
            for warning in &report.warnings {
                println!("warning: {warning}");
            }
            let mut failures = 0usize;
            for (i, (word, ok)) in report.lines.iter().enumerate() {
                if *ok {
                    println!("ok   relator {:>3}: {}", i + 1, word);
                } else {
                    failures += 1;
                    println!("FAIL relator {:>3}: {}", i + 1, word);
                }
            }
            if failures == 0 {
                println!(
                    "all {} relators hold in PSL2(O_{})",
                    report.lines.len(),
                    pres.d
                );
                Ok(ExitCode::SUCCESS)
            } else {
                println!(
                    "{failures} of {} relators FAILED (suspect a typo in the source \
                     presentation or file)",
                    report.lines.len()
                );
                Ok(ExitCode::from(EXIT_VERIFY_FAILED))
            }
        }
        Command::Abelianize { file } => {
            let pres = io::load_presentation(&file)?;
            let inv = abelianize(&pres);
            println!(
                "d = {}: {} generators, {} relators",
                pres.d,
                pres.generators.len(),
                pres.relators.len()
            );
            println!("abelianization: {inv}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { file, cas } => {
            let pres = io::load_presentation(&file)?;
            io::save_cas(&pres, &cas)?;
            println!("wrote {}", cas.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
