//! Scenario, config and result files.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use super::{ExperimentConfig, ExperimentRow, Fig4Row};
use crate::error::{Error, Result};
use crate::scenario::Scenario;

pub const RESULTS_HEADER: &str = "n,trial,seed,seq_grec,greedy,sampling,brute_force,wall_ms";
pub const FIG4_HEADER: &str = "n,trial,seed,n_max,realized,bound,heuristic";

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario> {
    read_json(path)
}

/// Writes pretty JSON; floats use the shortest representation that reads
/// back to the same value.
pub fn save_scenario(scenario: &Scenario, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    fs::write(path, text + "\n").map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = read_json(path)?;
    config.validate()?;
    Ok(config)
}

fn write_csv<R, F>(path: &Path, header: &str, rows: &[R], fields: F) -> Result<()>
where
    F: Fn(&R) -> Vec<String>,
{
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header.split(',')).map_err(csv_err)?;
    for r in rows {
        w.write_record(fields(r)).map_err(csv_err)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// One line per row under [`RESULTS_HEADER`]; an absent brute-force or
/// timing value is an empty field.
pub fn save_results(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    write_csv(path, RESULTS_HEADER, rows, |r| {
        vec![
            r.n.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.seq_grec.to_string(),
            r.greedy.to_string(),
            r.sampling.to_string(),
            opt(r.brute_force),
            opt(r.wall_ms),
        ]
    })
}

pub fn save_fig4_results(rows: &[Fig4Row], path: &Path) -> Result<()> {
    write_csv(path, FIG4_HEADER, rows, |r| {
        vec![
            r.n.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            r.n_max.to_string(),
            r.realized.to_string(),
            r.bound.to_string(),
            r.heuristic.to_string(),
        ]
    })
}
