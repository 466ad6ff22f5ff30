//! Experiment runner library behind the `shadowlab` binary: configuration
//! loading and validation, the four batch experiments, and run-report
//! rendering with CI-friendly exit-code contracts.

pub mod config;
pub mod experiments;
pub mod run;

pub use config::{parse_delta_list, ExperimentConfig, SystemKind};
pub use experiments::{
    chains_export, cmd_chains, cmd_ex1, cmd_ex41, cmd_odometer, LimitPlan, OdometerPart,
};
pub use run::RunReport;
