//! `sldi`: cycle-time analysis of switched linear-dual inequality systems
//! and P-time event graphs from JSON model files.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use maxplus_sldi::model_io::{
    cycle_time_set_to_json, to_matrix_form_json, trajectory_report_to_json,
};
use maxplus_sldi::scalar::Trop;
use maxplus_sldi::trajectory::{from_csv, prefix_labels, to_csv, unroll};
use maxplus_sldi::{load_model, Error, Model};

const EXIT_USAGE: u8 = 1;
const EXIT_MODEL: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sldi",
    version,
    about = "Cycle-time analysis for switched linear-dual inequality systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Method {
    Improved,
    Direct,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum BenchMethod {
    Improved,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the cycle-time set of a schedule.
    Analyze {
        model: PathBuf,
        /// Named schedule, comma-separated mode list, or string of
        /// single-letter modes.
        #[arg(long)]
        schedule: String,
        /// Repeat the schedule this many times before analyzing.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, value_enum, default_value = "both")]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Compute the cycle-time set of a single mode analyzed as a P-TEG.
    PtegAnalyze {
        model: PathBuf,
        #[arg(long)]
        mode: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build a periodic trajectory for a feasible cycle time (CSV on stdout).
    Synthesize {
        model: PathBuf,
        #[arg(long)]
        schedule: String,
        /// Cycle time; must lie in the schedule's cycle-time set.
        #[arg(long)]
        lambda: String,
        /// Number of schedule repetitions to unroll.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
    /// Check a trajectory (CSV, as produced by `synthesize`) against the
    /// model.
    Check {
        model: PathBuf,
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        trajectory: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Emit the model in matrix form (JSON on stdout).
    Export { model: PathBuf },
    /// Time both analysis methods over increasing schedule repetitions.
    Bench {
        model: PathBuf,
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value_t = 8)]
        max_reps: usize,
        /// Comma-separated list of methods to time.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "improved")]
        methods: Vec<BenchMethod>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE)
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InfeasibleLambda(_) => EXIT_INFEASIBLE,
                _ => EXIT_MODEL,
            };
            ExitCode::from(code)
        }
    }
}

fn repeated(base: &[usize], reps: usize) -> Vec<usize> {
    base.iter().copied().cycle().take(base.len() * reps).collect()
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Analyze {
            model,
            schedule,
            reps,
            method,
            format,
        } => {
            let model: Model<f64> = load_model(model)?;
            let names = model.resolve_schedule_spec(&schedule)?;
            let sched = repeated(&model.sldi.resolve_schedule(&names)?, reps.max(1));
            let improved = (method != Method::Direct)
                .then(|| model.sldi.cycle_times_improved(&sched))
                .transpose()?;
            let direct = (method != Method::Improved)
                .then(|| model.sldi.cycle_times_direct(&sched))
                .transpose()?;
            if let (Some(a), Some(b)) = (&improved, &direct) {
                if a != b {
                    eprintln!("error: methods disagree: improved = {a}, direct = {b}");
                    return Ok(ExitCode::from(EXIT_DISAGREEMENT));
                }
            }
            let set = improved.or(direct).expect("at least one method ran");
            match format {
                Format::Text => println!("cycle times: {set}"),
                Format::Json => println!("{}", cycle_time_set_to_json(&set)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::PtegAnalyze {
            model,
            mode,
            format,
        } => {
            let model: Model<f64> = load_model(model)?;
            let set = model.sldi.mode(&mode)?.cycle_time_set()?;
            match format {
                Format::Text => println!("cycle times: {set}"),
                Format::Json => println!("{}", cycle_time_set_to_json(&set)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Synthesize {
            model,
            schedule,
            lambda,
            reps,
        } => {
            let model: Model<f64> = load_model(model)?;
            let names = model.resolve_schedule_spec(&schedule)?;
            let sched = model.sldi.resolve_schedule(&names)?;
            let lambda = Trop::<f64>::parse(&lambda)?;
            let x0 = model.sldi.synthesize_v_periodic(&sched, lambda)?;
            let traj = unroll(&x0, model.sldi.n(), lambda, reps.max(1))?;
            let labels = prefix_labels(&names, traj.len());
            print!("{}", to_csv(&traj, &labels, &model.transitions));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check {
            model,
            schedule,
            trajectory,
            format,
        } => {
            let model: Model<f64> = load_model(model)?;
            let names = model.resolve_schedule_spec(&schedule)?;
            let sched = model.sldi.resolve_schedule(&names)?;
            let text = std::fs::read_to_string(trajectory)?;
            let (_, traj) = from_csv::<f64>(&text, &model.transitions)?;
            let report = model.sldi.check_trajectory(&sched, &traj)?;
            match format {
                Format::Text => match &report.violation {
                    None => println!("pass"),
                    Some(v) => println!(
                        "fail: step {} violates {} at row {} ({} > {})",
                        v.step, v.kind, v.row, v.lhs, v.rhs
                    ),
                },
                Format::Json => println!("{}", trajectory_report_to_json(&report)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Export { model } => {
            let model: Model<f64> = load_model(model)?;
            print!("{}", to_matrix_form_json(&model));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench {
            model,
            schedule,
            max_reps,
            methods,
        } => {
            let model: Model<f64> = load_model(model)?;
            let names = model.resolve_schedule_spec(&schedule)?;
            let base = model.sldi.resolve_schedule(&names)?;
            let run_improved = methods.contains(&BenchMethod::Improved);
            let run_direct = methods.contains(&BenchMethod::Direct);
            print!("reps\tlen");
            if run_improved {
                print!("\timproved_ms");
            }
            if run_direct {
                print!("\tdirect_ms");
            }
            println!();
            for reps in 1..=max_reps.max(1) {
                let sched = repeated(&base, reps);
                print!("{reps}\t{}", sched.len());
                if run_improved {
                    let ms = median_ms(|| {
                        model.sldi.cycle_times_improved(&sched).map(|_| ())
                    })?;
                    print!("\t{ms:.3}");
                }
                if run_direct {
                    let ms = median_ms(|| {
                        model.sldi.cycle_times_direct(&sched).map(|_| ())
                    })?;
                    print!("\t{ms:.3}");
                }
                println!();
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Median wall-clock time over five runs, in milliseconds.
fn median_ms(mut f: impl FnMut() -> Result<(), Error>) -> Result<f64, Error> {
    let mut samples = Vec::with_capacity(5);
    for _ in 0..5 {
        let start = Instant::now();
        f()?;
        samples.push(start.elapsed().as_secs_f64() * 1e3);
    }
    samples.sort_by(|a, b| a.total_cmp(b));
    Ok(samples[2])
}
