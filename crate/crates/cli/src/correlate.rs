//! Squared Pearson correlation between columns of a directory of estimate panels.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Correlation {
    pub files: usize,
    pub columns: Vec<String>,
    /// `r_squared[a][b]`, `None` where a column is constant.
    pub r_squared: BTreeMap<String, BTreeMap<String, Option<f64>>>,
}

/// Numeric top-level fields of a panel.
fn numeric_fields(value: &Value) -> BTreeMap<String, f64> {
    value
        .as_object()
        .map(|map| {
            map.iter()
                .filter_map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)))
                .collect()
        })
        .unwrap_or_default()
}

pub fn r_squared(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    (sxx > 0.0 && syy > 0.0).then(|| sxy * sxy / (sxx * syy))
}

pub fn correlate_dir(dir: &Path, only: Option<&[String]>) -> Result<Correlation, CliError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".json") && !name.ends_with(".manifest.json")
        })
        .collect();
    paths.sort();
    if paths.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: need at least two JSON panels, found {}",
            dir.display(),
            paths.len()
        )));
    }
    let mut rows = Vec::new();
    for p in &paths {
        let text = std::fs::read_to_string(p)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        rows.push(numeric_fields(&value));
    }
    // Columns present in every panel.
    let mut columns: Vec<String> = rows[0]
        .keys()
        .filter(|k| rows.iter().all(|r| r.contains_key(*k)))
        .cloned()
        .collect();
    if let Some(only) = only {
        for c in only {
            if !columns.contains(c) {
                return Err(CliError::Input(format!(
                    "column `{c}` is missing from some panels"
                )));
            }
        }
        columns.retain(|c| only.contains(c));
    }
    let series: BTreeMap<&String, Vec<f64>> = columns
        .iter()
        .map(|c| (c, rows.iter().map(|r| r[c]).collect()))
        .collect();
    let r_squared = columns
        .iter()
        .map(|a| {
            let inner = columns
                .iter()
                .map(|b| (b.clone(), r_squared(&series[a], &series[b])))
                .collect();
            (a.clone(), inner)
        })
        .collect();
    Ok(Correlation {
        files: paths.len(),
        columns,
        r_squared,
    })
}
