use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use evasion::bound::{
    bounding_area, inputs_from_split, optimal_nmax, optimal_nmax_unsimplified, sweep_argmax, upper_bound_sweep,
    upper_bound_time, BoundBreakdown, BoundInputs, SplitCapture,
};
use evasion::harness::{
    load_config, load_scenario, run_experiment_fig3, run_experiment_fig4, save_fig4_results, save_results,
    save_scenario,
};
use evasion::pursuit::{step_simulate, total_intercept_time};
use evasion::scenario::generate_random_scenario;
use evasion::search::{brute_force_extremes, grid_search, random_sampling, random_sampling_baseline, sample_count};
use evasion::strategy::{classify_labels, evader_table, greedy_assignment, seq_grec};
use evasion::{Error, PursuerPlacement, Rectangle, Result, SpeedAssignment, SpeedBounds};

#[derive(Parser)]
#[command(name = "evasion", version, about = "Manhattan pursuit of speed-bounded evaders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capture times for a given speed vector.
    Simulate {
        scenario: PathBuf,
        /// Comma-separated evader speeds in capture order.
        #[arg(long, value_delimiter = ',', required = true)]
        speeds: Vec<f64>,
        /// Use the time-stepped simulator with this step instead of the
        /// closed form.
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Two-pass greedy/cooperative speed assignment.
    SeqGrec {
        scenario: PathBuf,
        /// Print the per-evader table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Every evader maximizes its own leg.
    Greedy { scenario: PathBuf },
    /// Exhaustive search over `{u_min, u_max}^n`.
    BruteForce { scenario: PathBuf },
    /// Any of the search baselines.
    Search {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Extremes)]
        method: Method,
        /// Grid points per evader.
        #[arg(long, default_value_t = 11)]
        points: usize,
        /// Sample count; defaults to the count implied by `--delta`.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw speeds from the whole interval instead of its endpoints.
        #[arg(long)]
        continuous: bool,
    },
    /// Random-sampling baseline with `ceil(10 n ln(2/delta))` draws.
    Baseline {
        scenario: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        continuous: bool,
    },
    /// Upper bound on total capture time.
    Bound {
        /// JSON file with explicit bound inputs.
        #[arg(long, conflicts_with = "scenario", required_unless_present = "scenario")]
        inputs: Option<PathBuf>,
        /// Scenario file; requires `--fast`.
        #[arg(long, requires = "fast")]
        scenario: Option<PathBuf>,
        /// Comma-separated 1-based indices of the evaders moving at `u_max`.
        #[arg(long, value_delimiter = ',')]
        fast: Vec<usize>,
        /// Area of both groups when driven by a scenario; defaults to the
        /// bounding box of all evaders.
        #[arg(long)]
        area: Option<f64>,
        /// Write `n_max,total` for every split to this CSV file.
        #[arg(long)]
        sweep: Option<PathBuf>,
    },
    /// Strategy comparison over random scenarios.
    Fig3 {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Random split against the upper bound over random scenarios.
    Fig4 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a random scenario.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        #[arg(long, default_value_t = 1.0)]
        height: f64,
        #[arg(long, default_value_t = 0.2)]
        u_min: f64,
        #[arg(long, default_value_t = 0.8)]
        u_max: f64,
        /// Put the pursuer on the top edge.
        #[arg(long)]
        above: bool,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Extremes,
    Grid,
    Sampling,
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("value serializes"));
}

fn read_inputs(path: &Path) -> Result<BoundInputs> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

#[derive(Serialize)]
struct BoundReport {
    inputs: BoundInputs,
    breakdown: BoundBreakdown,
    n_max_star: usize,
    n_max_star_unsimplified: f64,
    sweep_argmax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    realized: Option<SplitCapture>,
}

fn bound(
    inputs: Option<PathBuf>,
    scenario: Option<PathBuf>,
    fast: Vec<usize>,
    area: Option<f64>,
    sweep_path: Option<PathBuf>,
) -> Result<()> {
    let (inputs, realized) = match (inputs, scenario) {
        (Some(path), _) => (read_inputs(&path)?, None),
        (None, Some(path)) => {
            let s = load_scenario(&path)?;
            let mut mask = vec![false; s.len()];
            for i in fast {
                if i == 0 || i > s.len() {
                    return Err(Error::InvalidArgument(format!(
                        "evader index {i} outside 1..={}",
                        s.len()
                    )));
                }
                mask[i - 1] = true;
            }
            let area = area.unwrap_or_else(|| bounding_area(&s.evaders));
            let (inputs, capture) = inputs_from_split(&s, &mask, area)?;
            (inputs, Some(capture))
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let breakdown = upper_bound_time(&inputs)?;
    let sweep = upper_bound_sweep(&inputs)?;
    if let Some(path) = sweep_path {
        write_sweep(&sweep, &path)?;
    }
    print_json(&BoundReport {
        inputs,
        breakdown,
        n_max_star: optimal_nmax(inputs.n, inputs.bounds)?,
        n_max_star_unsimplified: optimal_nmax_unsimplified(inputs.n, inputs.bounds, inputs.area_max, inputs.delta_x)?,
        sweep_argmax: sweep_argmax(&sweep).expect("n >= 2"),
        realized,
    });
    Ok(())
}

fn write_sweep(sweep: &[(usize, BoundBreakdown)], path: &Path) -> Result<()> {
    let err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(["n_max", "total"]).map_err(err)?;
    for (k, b) in sweep {
        w.write_record([k.to_string(), b.total.to_string()]).map_err(err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn output_path(flag: Option<PathBuf>, config: Option<&String>) -> Option<PathBuf> {
    flag.or_else(|| config.map(PathBuf::from))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { scenario, speeds, dt } => {
            let s = load_scenario(&scenario)?;
            s.validate()?;
            if speeds.len() != s.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} speeds given for {} evaders",
                    speeds.len(),
                    s.len()
                )));
            }
            let labels = classify_labels(&s, &speeds);
            let a = SpeedAssignment::new(speeds, labels)?;
            let trace = match dt {
                Some(dt) => step_simulate(&s, &a, dt)?,
                None => total_intercept_time(&s, &a)?,
            };
            print_json(&trace);
        }
        Command::SeqGrec { scenario, table } => {
            let s = load_scenario(&scenario)?;
            let r = seq_grec(&s)?;
            if table {
                println!(
                    "{:>5} {:>12} {:>6} {:>6} {:>11}",
                    "k", "y_threshold", "case", "speed", "label"
                );
                for row in evader_table(&s, &r) {
                    let case = row.case.map_or("-".to_string(), |c| format!("{c:?}"));
                    println!(
                        "{:>5} {:>12.6} {:>6} {:>6} {:>11}",
                        row.index,
                        row.y_threshold,
                        case,
                        row.speed,
                        format!("{:?}", row.label)
                    );
                }
                println!("total {}", r.trace.total_time);
            } else {
                print_json(&r);
            }
        }
        Command::Greedy { scenario } => print_json(&greedy_assignment(&load_scenario(&scenario)?)?),
        Command::BruteForce { scenario } => print_json(&brute_force_extremes(&load_scenario(&scenario)?)?),
        Command::Search {
            scenario,
            method,
            points,
            samples,
            delta,
            seed,
            continuous,
        } => {
            let s = load_scenario(&scenario)?;
            let report = match method {
                Method::Extremes => brute_force_extremes(&s)?,
                Method::Grid => grid_search(&s, points)?,
                Method::Sampling => {
                    let samples = match samples {
                        Some(m) => m,
                        None => sample_count(s.len(), delta)?,
                    };
                    random_sampling(&s, samples, seed, continuous)?
                }
            };
            print_json(&report);
        }
        Command::Baseline {
            scenario,
            delta,
            seed,
            continuous,
        } => {
            let s = load_scenario(&scenario)?;
            let report = if continuous {
                random_sampling(&s, sample_count(s.len(), delta)?, seed, true)?
            } else {
                random_sampling_baseline(&s, delta, seed)?
            };
            print_json(&report);
        }
        Command::Bound {
            inputs,
            scenario,
            fast,
            area,
            sweep,
        } => bound(inputs, scenario, fast, area, sweep)?,
        Command::Fig3 { config, output } => {
            let c = load_config(&config)?;
            let r = run_experiment_fig3(&c)?;
            if let Some(path) = output_path(output, c.output_path.as_ref()) {
                save_results(&r.rows, &path)?;
            }
            print_json(&r.summary);
        }
        Command::Fig4 { config, output } => {
            let c = load_config(&config)?;
            let r = run_experiment_fig4(&c)?;
            if let Some(path) = output_path(output, c.output_path.as_ref()) {
                save_fig4_results(&r.rows, &path)?;
            }
            print_json(&r.summary);
        }
        Command::Gen {
            n,
            seed,
            width,
            height,
            u_min,
            u_max,
            above,
            output,
        } => {
            let placement = if above {
                PursuerPlacement::AboveRect
            } else {
                PursuerPlacement::InRect
            };
            let rect = Rectangle::new(width, height)?;
            let s = generate_random_scenario(n, rect, placement, SpeedBounds::new(u_min, u_max)?, seed)?;
            match output {
                Some(path) => save_scenario(&s, &path)?,
                None => print_json(&s),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
