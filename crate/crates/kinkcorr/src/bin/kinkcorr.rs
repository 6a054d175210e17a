use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kinkcorr::cli::{parse_config, query_term, run_sweep, verify, TermKind, VerifyLevel};
use kinkcorr::corrections::SeriesOptions;

#[derive(Parser)]
#[command(
    name = "kinkcorr",
    version,
    about = "One-loop energy corrections of a Sine-Gordon kink in a finite rectangle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a parameter sweep and write it as CSV.
    Sweep {
        /// Flat `key = value` configuration file.
        #[arg(long)]
        config: PathBuf,
        /// CSV path; overrides the `output` key. Standard output when neither is set.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the cross-checks against identities and the oracle.
    Verify {
        /// Include the end-to-end oracle comparisons and the limit checks.
        #[arg(long)]
        full: bool,
    },
    /// Evaluate one Dirichlet correction term at dimensionless sizes.
    Term {
        #[arg(long)]
        which: TermKind,
        #[arg(long)]
        l1: f64,
        #[arg(long)]
        l2: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1e-3)]
        s_step: f64,
    },
}

const CONFIG_ERROR: u8 = 2;

fn sweep(config: PathBuf, out: Option<PathBuf>) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let mut spec = match parse_config(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", config.display());
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    if out.is_some() {
        spec.output.csv = out;
    }
    let table = match run_sweep(&spec) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(CONFIG_ERROR);
        }
    };
    let csv = match table.to_csv() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    match &spec.output.csv {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(CONFIG_ERROR);
            }
            if spec.output.plot_script {
                let gp = path.with_extension("gp");
                if let Err(e) = std::fs::write(&gp, table.plot_script(path)) {
                    eprintln!("cannot write {}: {e}", gp.display());
                    return ExitCode::from(CONFIG_ERROR);
                }
            }
        }
        None => {
            print!("{csv}");
            if spec.output.plot_script {
                eprintln!("plot_script needs a CSV path; no script written");
            }
        }
    }
    let s = table.summary();
    eprintln!(
        "{} rows, {} ok, {} with errors (excluded); total in [{:.6e}, {:.6e}], last total/(lambda1 lambda2) {:.6e}",
        s.rows, s.ok, s.errors, s.min_total, s.max_total, s.last_total_per_area
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Sweep { config, out } => sweep(config, out),
        Command::Verify { full } => {
            let report = verify(if full {
                VerifyLevel::Full
            } else {
                VerifyLevel::Fast
            });
            println!("{report}");
            ExitCode::from(report.exit_code() as u8)
        }
        Command::Term {
            which,
            l1,
            l2,
            tol,
            s_step,
        } => {
            let opts = SeriesOptions {
                tol,
                s_step,
                ..SeriesOptions::default()
            };
            match query_term(which, l1, l2, &opts) {
                Ok(v) => {
                    println!("term {which} lambda1 {l1:.16e} lambda2 {l2:.16e} value {:.16e} error {:.3e}", v.value, v.error);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(CONFIG_ERROR)
                }
            }
        }
    }
}
