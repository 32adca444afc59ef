//! Temperature sweep, one row per temperature.

use rayon::prelude::*;
use serde_json::Value;

use super::config::SweepConfig;
use super::render::{Cell, Table};
use crate::bell::random_frame_max;
use crate::error::{Error, Result};
use crate::report::{PointReport, RingAnalysis};

pub const COLUMNS: [&str; 19] = [
    "T",
    "log_z",
    "U",
    "U_per_site",
    "M",
    "G_xx",
    "G_yy",
    "G_zz",
    "u_plus",
    "u_minus",
    "z_re",
    "z_im",
    "C_wootters",
    "C_x_form",
    "C_correlation",
    "C_energy",
    "bell_measure",
    "bell_violates",
    "max_route_disagreement",
];

/// Only on request: largest `|⟨B⟩|` over seeded random frames.
pub const SAMPLED_COLUMN: &str = "chsh_sampled_max";
pub const SAMPLED_FRAMES: usize = 10_000;

fn cell(name: &str, r: &PointReport, sampled: Option<f64>) -> Cell {
    let c = &r.concurrence;
    match name {
        "T" => r.thermo.temperature.into(),
        "log_z" => r.thermo.log_z.into(),
        "U" => r.thermo.u.into(),
        "U_per_site" => r.thermo.u_per_site.into(),
        "M" => r.thermo.m.into(),
        "G_xx" => r.correlations.xx().into(),
        "G_yy" => r.correlations.yy().into(),
        "G_zz" => r.correlations.zz().into(),
        "u_plus" => r.rdm.u_plus.into(),
        "u_minus" => r.rdm.u_minus.into(),
        "z_re" => r.rdm.z.re.into(),
        "z_im" => r.rdm.z.im.into(),
        "C_wootters" => c.wootters.into(),
        "C_x_form" => c.x_form.into(),
        "C_correlation" => c.correlation_form.into(),
        "C_energy" => c.energy_form.into(),
        "bell_measure" => r.bell.measure.into(),
        "bell_violates" => r.bell.violates.into(),
        "max_route_disagreement" => c.max_disagreement.into(),
        SAMPLED_COLUMN => sampled.into(),
        _ => Cell::Empty,
    }
}

pub fn selected_columns(outputs: &[String]) -> Result<Vec<String>> {
    if outputs.is_empty() {
        return Ok(COLUMNS.iter().map(|s| s.to_string()).collect());
    }
    for o in outputs {
        if !COLUMNS.contains(&o.as_str()) && o != SAMPLED_COLUMN {
            return Err(Error::Config(format!("outputs: unknown column `{o}`")));
        }
    }
    let mut cols = vec!["T".to_string()];
    for name in COLUMNS.iter().skip(1).copied().chain([SAMPLED_COLUMN]) {
        if outputs.iter().any(|o| o == name) {
            cols.push(name.to_string());
        }
    }
    Ok(cols)
}

/// Sub-seed for row `k`, so rows draw independent frames.
fn row_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn sweep(cfg: &SweepConfig) -> Result<Table> {
    cfg.validate()?;
    let temps = cfg.temperature_points()?;
    let columns = selected_columns(&cfg.outputs)?;
    let want_sampled = columns.iter().any(|c| c == SAMPLED_COLUMN);
    let analysis = RingAnalysis::new(&cfg.model, cfg.pair)?;
    let rows = temps
        .par_iter()
        .enumerate()
        .map(|(k, &t)| {
            let r = analysis.at(t)?;
            let sampled = want_sampled
                .then(|| random_frame_max(&r.bell.t_matrix, row_seed(cfg.seed, k), SAMPLED_FRAMES));
            Ok(columns.iter().map(|c| cell(c, &r, sampled)).collect())
        })
        .collect::<Result<Vec<Vec<Cell>>>>()?;
    let mut table = Table::new(columns);
    table.rows = rows;
    table.meta.insert("seed".into(), Value::from(cfg.seed));
    table.meta.insert(
        "model".into(),
        serde_json::to_value(&cfg.model).unwrap_or(Value::Null),
    );
    table
        .meta
        .insert("pair".into(), Value::from(vec![cfg.pair.0, cfg.pair.1]));
    Ok(table)
}
