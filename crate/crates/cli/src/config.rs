//! Experiment configuration: a single JSON file with command-line
//! overrides. All rationals enter as exact `p/q` strings; validation
//! happens on load and any violation maps to exit code 2.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use shadowlab_core::systems::{OdometerSystem, PointedOdometer};
use shadowlab_core::{Error, Rat};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Ladder,
    Odometer,
    Pointed,
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ladder" => Ok(SystemKind::Ladder),
            "odometer" => Ok(SystemKind::Odometer),
            "pointed" => Ok(SystemKind::Pointed),
            other => Err(Error::Parameter(format!("unknown system {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub system: SystemKind,
    /// Explicit periodic structure; the dyadic one of `depth` when absent.
    pub periodic_structure: Option<Vec<u64>>,
    pub depth: u32,
    /// Ladder sample range: rung indices with |n| <= range.
    pub range: u32,
    /// Cylinder level K for the pointed-odometer pipeline.
    pub k_level: usize,
    pub window: usize,
    pub eps: Rat,
    pub delta: Rat,
    pub deltas: Vec<Rat>,
    pub trials: u32,
    pub len: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            system: SystemKind::Ladder,
            periodic_structure: None,
            depth: 6,
            range: 16,
            k_level: 2,
            window: 128,
            eps: Rat::new(1, 4),
            delta: Rat::new(1, 4),
            deltas: vec![Rat::new(1, 4), Rat::new(1, 16), Rat::new(1, 64)],
            trials: 1000,
            len: 200,
            seed: 42,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parameter(format!("cannot read config {path:?}: {e}")))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Parameter(format!("invalid config {path:?}: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    /// Shared invariants; the odometer structure itself is validated by
    /// [`OdometerSystem::new`] when built.
    pub fn validate(&self) -> Result<(), Error> {
        self.odometer()?; // m_1 >= 2, strict increase, divisibility
        if self.k_level < 2 || self.k_level > self.depth_levels() {
            return Err(Error::Parameter(format!(
                "K = {} must satisfy 2 <= K <= depth = {}",
                self.k_level,
                self.depth_levels()
            )));
        }
        if self.window < 2 {
            return Err(Error::Parameter("window must be at least 2".into()));
        }
        if self.len < 2 {
            return Err(Error::Parameter("len must be at least 2".into()));
        }
        if self.eps <= Rat::zero() {
            return Err(Error::Parameter("eps must be positive".into()));
        }
        if self.deltas.is_empty() {
            return Err(Error::Parameter("deltas must be nonempty".into()));
        }
        Ok(())
    }

    fn depth_levels(&self) -> usize {
        match &self.periodic_structure {
            Some(levels) => levels.len(),
            None => self.depth as usize,
        }
    }

    pub fn odometer(&self) -> Result<OdometerSystem, Error> {
        match &self.periodic_structure {
            Some(levels) => OdometerSystem::new(levels.clone()),
            None => OdometerSystem::dyadic(self.depth),
        }
    }

    pub fn pointed(&self) -> Result<PointedOdometer, Error> {
        Ok(PointedOdometer::new(self.odometer()?))
    }
}

/// Parses a comma-separated list of exact rationals, e.g. `1/4,1/16,1/64`.
pub fn parse_delta_list(s: &str) -> Result<Vec<Rat>, Error> {
    s.split(',').map(|part| part.trim().parse()).collect()
}
