use std::fs;
use std::path::{Path, PathBuf};

use evosynth_core::{RunReport, Summary, TaskKind};
use serde::Serialize;

use crate::error::CliError;

pub const CSV_HEADER: [&str; 9] = [
    "task",
    "population",
    "run_index",
    "train_acc",
    "test_acc",
    "length",
    "height",
    "wall_ms",
    "origin_of_elite",
];

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.3}")).unwrap_or_else(|| "-".into())
}

pub fn run_row(task: TaskKind, population: usize, index: &str, r: &RunReport) -> [String; 9] {
    [
        task.name().to_string(),
        population.to_string(),
        index.to_string(),
        format!("{:.3}", r.train_accuracy),
        fmt_opt(r.test_accuracy),
        r.elite.length().to_string(),
        r.elite.height().to_string(),
        r.wall_ms.to_string(),
        r.elite.origin().name().to_string(),
    ]
}

/// Mean (std) cells; wall time is the mean over runs.
pub fn aggregate_row(task: TaskKind, population: usize, summary: &Summary, runs: &[RunReport]) -> [String; 9] {
    let [train, test, length, height] = summary.cells();
    let wall = runs.iter().map(|r| r.wall_ms).sum::<u64>() / runs.len().max(1) as u64;
    [
        task.name().to_string(),
        population.to_string(),
        "mean".into(),
        train,
        test,
        length,
        height,
        wall.to_string(),
        String::new(),
    ]
}

pub struct OutputDir {
    root: PathBuf,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root.join("elites")).map_err(|e| CliError::io(root, e))?;
        fs::create_dir_all(root.join("generations")).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn write_csv(&self, name: &str, rows: &[[String; 9]]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(CSV_HEADER)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Elite program text plus the per-generation trace of one run.
    pub fn write_run(&self, label: &str, report: &RunReport) -> Result<(), CliError> {
        self.write_text(&format!("elites/{label}.txt"), &format!("{}\n", report.elite_program))?;
        let path = self.path(&format!("generations/{label}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        for g in &report.generations {
            w.serialize(g)?;
        }
        w.flush().map_err(|e| CliError::io(&path, e))?;
        Ok(())
    }
}
