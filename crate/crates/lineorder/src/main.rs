use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lineorder::core::oracle::Mode;
use lineorder::{Certificate, JobSpec, Overrides, Task};

#[derive(Parser)]
#[command(name = "lineorder", version, about = "Orderability certificates for groups and G-sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Right,
    Bi,
}

#[derive(Subcommand)]
enum Command {
    /// Run a job and write its certificate.
    Run {
        /// Job document, TOML or JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        task: Option<Task>,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Certificate path; printed to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot path ending in .csv or .svg.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        max_ball: Option<usize>,
        /// Place points in a shuffled order seeded with this value.
        #[arg(long)]
        seed_enumeration: Option<u64>,
        /// Worker threads for crossing checks.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-check a certificate.
    Verify { certificate: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            input,
            task,
            radius,
            mode,
            out,
            plot,
            max_ball,
            seed_enumeration,
            threads,
        } => {
            let overrides = Overrides {
                task,
                radius,
                mode: mode.map(|m| match m {
                    ModeArg::Right => Mode::Right,
                    ModeArg::Bi => Mode::Bi,
                }),
                out,
                plot,
                max_ball,
                seed_enumeration,
                threads,
            };
            run(&input, overrides)
        }
        Command::Verify { certificate } => verify(&certificate),
    };
    ExitCode::from(code)
}

fn run(input: &Path, overrides: Overrides) -> u8 {
    let mut job = match JobSpec::load(input) {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {}: {e}", input.display());
            return 1;
        }
    };
    let to_stdout = job.out.is_none() && overrides.out.is_none();
    overrides.apply(&mut job);
    let start = std::time::Instant::now();
    match lineorder::run(&job) {
        Ok((cert, code)) => {
            if to_stdout {
                print!("{}", cert.to_json());
            }
            eprintln!(
                "{} ({:.3}s)",
                serde_json::to_string(&cert.outcome).unwrap_or_default().trim_matches('"'),
                start.elapsed().as_secs_f64()
            );
            code as u8
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn verify(path: &PathBuf) -> u8 {
    let checked = std::fs::read_to_string(path)
        .map_err(|e| lineorder::Error::Io {
            path: path.clone(),
            source: e,
        })
        .and_then(|s| Certificate::from_json(&s))
        .and_then(|c| lineorder::verify::verify(&c));
    match checked {
        Ok(()) => {
            eprintln!("valid");
            0
        }
        Err(e) => {
            match e.check() {
                Some(check) => eprintln!("rejected by {check}: {e}"),
                None => eprintln!("rejected: {e}"),
            }
            1
        }
    }
}
