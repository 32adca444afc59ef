//! JSON run configuration. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelSpec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

/// Either an explicit list (`values`) or `count` points from `start` to
/// `stop`.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TemperatureGrid {
    #[serde(default)]
    pub start: Option<f64>,
    #[serde(default)]
    pub stop: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub spacing: Spacing,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

impl TemperatureGrid {
    pub fn range(start: f64, stop: f64, count: usize, spacing: Spacing) -> Self {
        Self {
            start: Some(start),
            stop: Some(stop),
            count: Some(count),
            spacing,
            values: None,
        }
    }

    pub fn list(values: Vec<f64>) -> Self {
        Self {
            values: Some(values),
            ..Self::default()
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => v.clone(),
            (Some(_), ..) => {
                return Err(Error::Config(
                    "temperatures: give either values or start/stop/count, not both".into(),
                ))
            }
            (None, Some(start), stop, Some(count)) => {
                if count == 0 {
                    return Err(Error::Config("temperatures.count must be at least 1".into()));
                }
                let stop = match (stop, count) {
                    (Some(s), _) => s,
                    (None, 1) => start,
                    (None, _) => return Err(Error::Config("temperatures.stop is required".into())),
                };
                if self.spacing == Spacing::Log && !(start > 0.0 && stop > 0.0) {
                    return Err(Error::Config(
                        "temperatures.start and stop must be positive for log spacing".into(),
                    ));
                }
                if count == 1 {
                    vec![start]
                } else {
                    let step = |k: usize| k as f64 / (count - 1) as f64;
                    (0..count)
                        .map(|k| match (k, self.spacing) {
                            (0, _) => start,
                            (k, _) if k == count - 1 => stop,
                            (k, Spacing::Linear) => start + (stop - start) * step(k),
                            (k, Spacing::Log) => (start.ln() + (stop.ln() - start.ln()) * step(k)).exp(),
                        })
                        .collect()
                }
            }
            (None, None, ..) => return Err(Error::Config("temperatures.start is required".into())),
            (None, Some(_), _, None) => {
                return Err(Error::Config("temperatures.count is required".into()))
            }
        };
        if pts.is_empty() {
            return Err(Error::Config("temperatures: empty grid".into()));
        }
        if let Some(t) = pts.iter().find(|t| !(**t >= 0.0)) {
            return Err(Error::Config(format!("temperatures: {t} is not a valid temperature")));
        }
        Ok(pts)
    }
}

fn default_pair() -> (usize, usize) {
    (1, 2)
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub temperatures: Option<TemperatureGrid>,
    #[serde(default = "default_pair")]
    pub pair: (usize, usize),
    /// Column names to emit; empty means all. `T` is always first.
    #[serde(default)]
    pub outputs: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
}

impl SweepConfig {
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            temperatures: None,
            pair: default_pair(),
            outputs: Vec::new(),
            seed: 0,
            format: Format::Csv,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config(format!("{path}: {}", e.inner()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.model
            .validate()
            .map_err(|e| Error::Config(format!("model: {e}")))?;
        let (i, j) = self.pair;
        let n = self.model.n_sites;
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Config(format!(
                "pair: ({i}, {j}) must be two distinct sites in 1..={n}"
            )));
        }
        if let Some(t) = &self.temperatures {
            t.points()?;
        }
        Ok(())
    }

    pub fn temperature_points(&self) -> Result<Vec<f64>> {
        match &self.temperatures {
            Some(t) => t.points(),
            None => Err(Error::Config("temperatures: required for this command".into())),
        }
    }
}
