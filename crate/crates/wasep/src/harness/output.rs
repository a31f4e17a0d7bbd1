//! CSV and JSON persistence of ensemble output.
//!
//! One CSV per observable with header `replica,seed,time,value`; floats are
//! written in shortest round-trip form so parsing a file back reproduces
//! the in-memory series exactly.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::config::ExperimentConfig;
use crate::harness::ensemble::EnsembleResult;
use crate::harness::stats::EstimateReport;

/// Rows of one observable file.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRows {
    pub rows: Vec<(u64, u64, f64, f64)>,
}

/// Paths written by [`write_ensemble`].
#[derive(Debug, Clone, Serialize)]
pub struct OutputFiles {
    pub current: Option<PathBuf>,
    pub tagged: Option<PathBuf>,
    pub fields: Vec<PathBuf>,
    pub summary: PathBuf,
}

fn write_csv(path: &Path, rows: &[(u64, u64, f64, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "replica,seed,time,value")?;
    for (replica, seed, time, value) in rows {
        writeln!(w, "{replica},{seed},{time},{value}")?;
    }
    w.flush()?;
    Ok(())
}

/// Parse an observable CSV back into rows.
pub fn read_csv(path: &Path) -> Result<ObservableRows> {
    let reader = BufReader::new(File::open(path)?);
    let mut rows = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if k == 0 {
            if line != "replica,seed,time,value" {
                return Err(Error::Config(format!("unexpected CSV header: {line}")));
            }
            continue;
        }
        let mut it = line.split(',');
        let parse_err = || Error::Config(format!("malformed CSV row: {line}"));
        let replica = it.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
        let seed = it.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
        let time = it.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
        let value = it.next().ok_or_else(parse_err)?.parse().map_err(|_| parse_err())?;
        rows.push((replica, seed, time, value));
    }
    Ok(ObservableRows { rows })
}

/// JSON summary next to the CSVs.
#[derive(Debug, Serialize)]
pub struct Summary<'a> {
    pub config: &'a ExperimentConfig,
    pub replicas_completed: usize,
    pub breach_count: usize,
    pub breached_replicas: &'a [u64],
    pub estimates: &'a [EstimateReport],
}

/// Write every enabled observable plus the JSON summary into `dir`.
pub fn write_ensemble(
    dir: &Path,
    config: &ExperimentConfig,
    result: &EnsembleResult,
    estimates: &[EstimateReport],
) -> Result<OutputFiles> {
    fs::create_dir_all(dir)?;
    let collect = |pick: &dyn Fn(&crate::process::ObservableSeries, usize) -> Option<f64>| {
        let mut rows = Vec::new();
        for s in &result.series {
            for (k, &t) in s.sample_times.iter().enumerate() {
                if let Some(v) = pick(s, k) {
                    rows.push((s.replica_id, s.seed, t, v));
                }
            }
        }
        rows
    };

    let mut files = OutputFiles {
        current: None,
        tagged: None,
        fields: Vec::new(),
        summary: dir.join("summary.json"),
    };
    if config.observables.current {
        let path = dir.join("current.csv");
        write_csv(&path, &collect(&|s, k| Some(s.centered_current[k])))?;
        files.current = Some(path);
    }
    if config.observables.tagged {
        let path = dir.join("tagged.csv");
        write_csv(
            &path,
            &collect(&|s, k| s.centered_tagged.as_ref().map(|ct| ct[k])),
        )?;
        files.tagged = Some(path);
    }
    if config.observables.field {
        for fi in 0..config.field_test_functions.len() {
            let path = dir.join(format!("field_{fi}.csv"));
            write_csv(&path, &collect(&|s, k| Some(s.field_values[fi][k])))?;
            files.fields.push(path);
        }
    }
    let summary = Summary {
        config,
        replicas_completed: result.series.len(),
        breach_count: result.breach_count(),
        breached_replicas: &result.breached,
        estimates,
    };
    let mut w = BufWriter::new(File::create(&files.summary)?);
    serde_json::to_writer_pretty(&mut w, &summary)?;
    w.flush()?;
    Ok(files)
}
