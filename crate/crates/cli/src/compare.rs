//! Bound-vs-empirical comparison across run summaries.
//!
//! Reads the `summary.json` files produced by simulation runs, groups them
//! by bound formula, and writes a wide comparison table plus a long-format
//! file with one `(source, metric, value)` row per number, ready for
//! plotting tools.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use crate::experiment::SimulationSummary;

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub source: String,
    pub formula: String,
    pub graphon: String,
    pub n_label: String,
    pub gamma: f64,
    pub sigma2: f64,
    pub trials: usize,
    pub empirical_mean: f64,
    pub empirical_stderr: f64,
    pub bound: f64,
    pub bound_valid: bool,
    pub margin: f64,
    pub satisfied: bool,
}

/// Reads and tabulates simulation summaries, sorted by formula tag, then
/// graphon, size, and gamma.
pub fn compare(paths: &[PathBuf]) -> Result<Vec<ComparisonRow>> {
    if paths.is_empty() {
        bail!("usage: at least one summary.json is required");
    }
    let mut rows = Vec::with_capacity(paths.len());
    for path in paths {
        rows.push(read_row(path)?);
    }
    rows.sort_by(|a, b| {
        (&a.formula, &a.graphon, &a.n_label)
            .cmp(&(&b.formula, &b.graphon, &b.n_label))
            .then(a.gamma.partial_cmp(&b.gamma).expect("finite gamma"))
    });
    Ok(rows)
}

fn read_row(path: &Path) -> Result<ComparisonRow> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read summary {}", path.display()))?;
    let summary: SimulationSummary = serde_json::from_str(&text).with_context(|| {
        format!(
            "{} is not a simulation summary (field mismatch)",
            path.display()
        )
    })?;
    let n_label = match (summary.n, summary.n_min, summary.n_max) {
        (Some(n), _, _) => format!("n={n}"),
        (None, Some(lo), Some(hi)) => format!("n={lo}..{hi}"),
        _ => "n=?".into(),
    };
    Ok(ComparisonRow {
        source: path.display().to_string(),
        formula: summary.bound.formula.to_string(),
        graphon: summary.graphon,
        n_label,
        gamma: summary.gamma,
        sigma2: summary.sigma2,
        trials: summary.trials,
        empirical_mean: summary.empirical.mean_v_after,
        empirical_stderr: summary.empirical.stderr,
        bound: summary.bound.value,
        bound_valid: summary.bound.valid,
        margin: summary.margin,
        satisfied: summary.bound_satisfied,
    })
}

/// Writes the wide table (`comparison.csv`) and the plot-ready long format
/// (`comparison_long.csv`) into `out_dir`.
pub fn write_comparison(rows: &[ComparisonRow], out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir)?;
    let wide = out_dir.join("comparison.csv");
    let mut writer = csv::Writer::from_path(&wide)
        .with_context(|| format!("cannot write {}", wide.display()))?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;

    let long = out_dir.join("comparison_long.csv");
    let mut writer = csv::Writer::from_path(&long)
        .with_context(|| format!("cannot write {}", long.display()))?;
    writer.write_record([
        "source", "formula", "graphon", "n_label", "gamma", "metric", "value",
    ])?;
    for row in rows {
        for (metric, value) in [("empirical", row.empirical_mean), ("bound", row.bound)] {
            writer.write_record([
                row.source.as_str(),
                row.formula.as_str(),
                row.graphon.as_str(),
                row.n_label.as_str(),
                &row.gamma.to_string(),
                metric,
                &value.to_string(),
            ])?;
        }
    }
    writer.flush()?;
    Ok((wide, long))
}
