//! Draws and summary files.
//!
//! Draws are written as CSV (`iteration,weight,<param>...`, constrained
//! space, `\n` line endings) or as a JSON array of records; the summary is
//! always JSON with per-parameter moments, quantiles and an
//! effective-sample-size estimate. Outputs are byte-identical across runs
//! with the same configuration and seed.

use serde_json::{json, Map, Value};
use std::path::Path;
use stocond::summary;

/// One output row: iteration, weight and constrained parameter values.
pub struct Row {
    pub iteration: u32,
    pub weight: f64,
    pub values: Vec<f64>,
}

pub struct RunResult {
    pub names: Vec<String>,
    pub rows: Vec<Row>,
    pub acceptance: Option<f64>,
    pub burn_in: u32,
    pub weighted: bool,
    pub extras: Map<String, Value>,
    pub stuck: bool,
}

pub fn draws_csv(result: &RunResult) -> String {
    let mut out = String::from("iteration,weight");
    for name in &result.names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!("{},{}", row.iteration, row.weight));
        for v in &row.values {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

pub fn draws_json(result: &RunResult) -> String {
    let rows: Vec<Value> = result
        .rows
        .iter()
        .map(|row| {
            let mut record = Map::new();
            record.insert("iteration".into(), json!(row.iteration));
            record.insert("weight".into(), json!(row.weight));
            for (name, v) in result.names.iter().zip(row.values.iter()) {
                record.insert(name.clone(), json!(v));
            }
            Value::Object(record)
        })
        .collect();
    serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable") + "\n"
}

/// Per-parameter summary statistics. Quantiles use linear interpolation on
/// the sorted draws ("type 7") for unweighted samples and the cumulative
/// weight rule for weighted ones.
pub fn summary_json(result: &RunResult, config_echo: Map<String, Value>) -> String {
    let mut params = Map::new();
    let levels = [0.025, 0.25, 0.5, 0.75, 0.975];
    let level_names = ["q2.5", "q25", "q50", "q75", "q97.5"];
    for (j, name) in result.names.iter().enumerate() {
        let xs: Vec<f64> = result.rows.iter().map(|r| r.values[j]).collect();
        let mut entry = Map::new();
        if result.weighted {
            let ws: Vec<f64> = result.rows.iter().map(|r| r.weight).collect();
            entry.insert("mean".into(), json!(summary::weighted_mean(&xs, &ws)));
            entry.insert("sd".into(), json!(summary::weighted_sd(&xs, &ws)));
            for (p, pname) in levels.iter().zip(level_names.iter()) {
                entry.insert(
                    (*pname).into(),
                    json!(summary::weighted_quantile(&xs, &ws, *p)),
                );
            }
            entry.insert("ess".into(), json!(summary::ess_weights(&ws)));
        } else {
            entry.insert("mean".into(), json!(summary::mean(&xs)));
            entry.insert("sd".into(), json!(summary::sd(&xs)));
            let qs = summary::quantiles_of(&xs, &levels);
            for (q, pname) in qs.iter().zip(level_names.iter()) {
                entry.insert((*pname).into(), json!(q));
            }
            entry.insert("ess".into(), json!(summary::ess(&xs)));
        }
        params.insert(name.clone(), Value::Object(entry));
    }
    let mut root = Map::new();
    root.insert("config".into(), Value::Object(config_echo));
    root.insert("burn_in".into(), json!(result.burn_in));
    root.insert("draws".into(), json!(result.rows.len()));
    if let Some(rate) = result.acceptance {
        root.insert("acceptance_rate".into(), json!(rate));
    }
    if result.stuck {
        root.insert("stuck_chain".into(), json!(true));
    }
    root.insert("parameters".into(), Value::Object(params));
    for (k, v) in &result.extras {
        root.insert(k.clone(), v.clone());
    }
    serde_json::to_string_pretty(&Value::Object(root)).expect("serializable") + "\n"
}

pub fn write_outputs(
    result: &RunResult,
    out_dir: &Path,
    format: crate::config::OutputFormat,
    config_echo: Map<String, Value>,
) -> Result<(std::path::PathBuf, std::path::PathBuf), String> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    let draws_path = match format {
        crate::config::OutputFormat::Csv => {
            let path = out_dir.join("draws.csv");
            std::fs::write(&path, draws_csv(result)).map_err(|e| e.to_string())?;
            path
        }
        crate::config::OutputFormat::Json => {
            let path = out_dir.join("draws.json");
            std::fs::write(&path, draws_json(result)).map_err(|e| e.to_string())?;
            path
        }
    };
    let summary_path = out_dir.join("summary.json");
    std::fs::write(&summary_path, summary_json(result, config_echo))
        .map_err(|e| e.to_string())?;
    Ok((draws_path, summary_path))
}
