//! Command-line front end: configuration, presets and result files.

pub mod config;
pub mod experiment;
pub mod output;

use std::path::PathBuf;

use clap::Parser;

use crate::error::Result;
use config::{load_config, RunConfig};
use experiment::{run_experiment, ExperimentSpec, Preset, RunReport, Selection};

#[derive(Debug, Parser)]
#[command(name = "ici", version, about = "Uplink intercell interference under channel-based scheduling")]
pub struct Args {
    /// Experiment to run.
    #[arg(long, value_enum, default_value_t = Preset::Custom)]
    pub preset: Preset,
    /// Flat JSON file of configuration overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Monte-Carlo trials.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed of the simulation.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated schedulers, e.g. `greedy,pf,grr:3,lrr`.
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<Selection>>,
    /// Skip the simulation.
    #[arg(long)]
    pub no_simulation: bool,
    /// Skip the analytic model.
    #[arg(long)]
    pub no_analytic: bool,
    /// Simulation worker threads.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl Args {
    pub fn spec(&self) -> Result<ExperimentSpec> {
        let mut config = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(s) = self.seed {
            config.seed = s;
        }
        config.validate()?;
        Ok(ExperimentSpec {
            preset: self.preset,
            config,
            out: self.out.clone(),
            analytic: !self.no_analytic,
            simulation: !self.no_simulation,
            workers: self.workers,
            schemes: self.schemes.clone(),
        })
    }
}

pub fn run(args: &Args) -> Result<RunReport> {
    run_experiment(&args.spec()?)
}
