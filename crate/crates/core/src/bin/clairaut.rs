use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use clairaut::cli::{self, RunOptions, EXIT_FAIL, EXIT_INPUT, EXIT_PASS};

#[derive(Parser)]
#[command(name = "clairaut", version, about = "Check submersion and Clairaut identities on scenario files")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(clap::Args)]
struct Common {
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of sample points.
    #[arg(long)]
    samples: Option<usize>,
    /// Multiply every tolerance by this factor.
    #[arg(long)]
    tolerance_scale: Option<f64>,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
}

impl Common {
    fn options(&self) -> RunOptions {
        RunOptions {
            seed: self.seed,
            samples: self.samples,
            tolerance_scale: self.tolerance_scale,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run every check of a scenario (file path or bundled name).
    Check {
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate one geodesic and write its trajectory as CSV.
    Geodesic {
        file: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        p0: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        v0: Vec<f64>,
        #[arg(long, default_value_t = 2.0)]
        length: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Trajectory CSV path; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// List built-in metrics, structures and maps.
    Presets,
}

fn emit(text: &str, report: Option<&PathBuf>) -> io::Result<()> {
    io::stdout().write_all(text.as_bytes())?;
    if let Some(path) = report {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn run(args: Args) -> Result<i32, String> {
    match args.command {
        Command::Presets => {
            print!("{}", cli::list_presets());
            Ok(EXIT_PASS)
        }
        Command::Check { file, common } => {
            let loaded = cli::load_scenario(&file, &common.options()).map_err(|e| e.to_string())?;
            let doc = cli::run_scenario(&loaded).map_err(|e| e.to_string())?;
            let text = match common.format {
                Format::Human => doc.to_human(),
                Format::Machine => doc.to_machine(),
            };
            emit(&text, common.report.as_ref()).map_err(|e| e.to_string())?;
            Ok(doc.exit_code())
        }
        Command::Geodesic {
            file,
            p0,
            v0,
            length,
            step,
            output,
            common,
        } => {
            let loaded = cli::load_scenario(&file, &common.options()).map_err(|e| e.to_string())?;
            let run = cli::integrate_geodesic(&loaded.scenario, &p0, &v0, length, step)
                .map_err(|e| e.to_string())?;
            let res = match &output {
                Some(path) => File::create(path)
                    .map_err(|e| e.to_string())
                    .and_then(|f| run.write_csv(f).map_err(|e| e.to_string())),
                None => run.write_csv(io::stdout()).map_err(|e| e.to_string()),
            };
            res?;
            let summary = match common.format {
                Format::Human => format!("{}\n", run.summary()),
                Format::Machine => format!(
                    "{}\n",
                    serde_json::json!({
                        "samples": run.trajectory.len(),
                        "energy_drift": run.trajectory.energy_drift,
                        "invariant_initial": run.invariant.initial,
                        "invariant_max_abs_drift": run.invariant.max_abs_drift,
                        "invariant_relative_drift": run.invariant.relative_drift,
                    })
                ),
            };
            if let Some(path) = &common.report {
                std::fs::write(path, &summary).map_err(|e| e.to_string())?;
            }
            eprint!("{summary}");
            let within = run.invariant.relative_drift
                <= loaded.scenario.tolerances.geodesic * length.max(1.0);
            Ok(if within { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT as u8)
        }
    }
}
