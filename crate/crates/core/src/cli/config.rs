//! Flat JSON run configuration.

use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::geometry::{db_to_linear, dbm_to_watts, NetworkConfig};

/// Every tunable of a run. dB-valued fields keep their dB value here and are
/// converted when the network is built.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub radius: f64,
    pub beta: f64,
    pub kappa_db: f64,
    pub users: u32,
    pub c_db: f64,
    pub p_max: f64,
    pub sigma2_dbm: f64,
    /// When set, the noise power is the density above times this bandwidth.
    pub bandwidth_hz: Option<f64>,
    pub interferers: u32,
    pub bs_distance: f64,
    pub angular_bins: usize,
    pub segments: usize,
    #[serde(serialize_with = "as_text")]
    pub zeta: ChannelModel,
    #[serde(serialize_with = "as_text")]
    pub chi: ChannelModel,
    pub q_db: Vec<f64>,
    /// User counts swept by the capacity and outage presets.
    pub user_sweep: Option<Vec<u32>>,
    pub interferer_sweep: Vec<u32>,
    pub beta_sweep: Vec<f64>,
    pub grr_slots: Vec<usize>,
    pub omegas: Vec<f64>,
    pub interference_shapes: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

fn as_text<S: serde::Serializer>(m: &ChannelModel, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(m)
}

impl Default for RunConfig {
    fn default() -> Self {
        let gamma = ChannelModel::gamma(1.5, 2.0 / 3.0).expect("valid default channel");
        RunConfig {
            radius: 500.0,
            beta: 2.6,
            kappa_db: 2.0,
            users: 50,
            c_db: 60.0,
            p_max: 1.0,
            sigma2_dbm: -174.0,
            bandwidth_hz: None,
            interferers: 6,
            bs_distance: 1000.0,
            angular_bins: 180,
            segments: 20,
            zeta: gamma,
            chi: gamma,
            q_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            user_sweep: None,
            interferer_sweep: vec![1, 3, 6],
            beta_sweep: vec![2.2, 2.6, 3.0],
            grr_slots: vec![3, 6],
            omegas: vec![1.0, 3.0],
            interference_shapes: vec![0.5, 1.0, 1.5, 2.0, 3.0],
            trials: 100_000,
            seed: 1,
        }
    }
}

impl RunConfig {
    pub fn noise_watts(&self) -> f64 {
        let dbm = self.sigma2_dbm + self.bandwidth_hz.map_or(0.0, |b| 10.0 * b.log10());
        dbm_to_watts(dbm)
    }

    pub fn network(&self) -> Result<NetworkConfig> {
        NetworkConfig::new(
            self.p_max,
            db_to_linear(self.c_db),
            self.noise_watts(),
            self.beta,
            self.radius,
            self.users,
            self.interferers,
            self.bs_distance,
        )
    }

    /// Linear outage thresholds.
    pub fn thresholds(&self) -> Vec<f64> {
        self.q_db.iter().map(|&q| db_to_linear(q)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.network()?;
        if !(self.kappa_db > 0.0) {
            return Err(Error::config("kappa_db must be positive"));
        }
        if self.angular_bins == 0 || self.segments == 0 {
            return Err(Error::config("angular_bins and segments must be positive"));
        }
        if self.bandwidth_hz.is_some_and(|b| !(b > 0.0)) {
            return Err(Error::config("bandwidth_hz must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials must be positive"));
        }
        if self.grr_slots.contains(&0) {
            return Err(Error::config("grr_slots must be at least 1"));
        }
        let positive = self.omegas.iter().chain(&self.interference_shapes).chain(&self.beta_sweep);
        if positive.clone().any(|v| !(*v > 0.0)) {
            return Err(Error::config("omegas, interference_shapes and beta_sweep must be positive"));
        }
        if self.user_sweep.as_ref().is_some_and(|u| u.contains(&0)) {
            return Err(Error::config("user_sweep entries must be positive"));
        }
        Ok(())
    }

    /// Applies the keys of a flat JSON object on top of `self`.
    pub fn apply(&mut self, doc: &Map<String, Value>) -> Result<()> {
        for (key, v) in doc {
            match key.as_str() {
                "radius" => self.radius = float(key, v)?,
                "beta" => self.beta = float(key, v)?,
                "kappa_db" => self.kappa_db = float(key, v)?,
                "users" => self.users = count(key, v)?,
                "c_db" => self.c_db = float(key, v)?,
                "p_max" => self.p_max = float(key, v)?,
                "sigma2_dbm" => self.sigma2_dbm = float(key, v)?,
                "bandwidth_hz" => self.bandwidth_hz = if v.is_null() { None } else { Some(float(key, v)?) },
                "interferers" => self.interferers = count(key, v)?,
                "bs_distance" => self.bs_distance = float(key, v)?,
                "angular_bins" => self.angular_bins = count(key, v)?,
                "segments" => self.segments = count(key, v)?,
                "zeta" => self.zeta = channel(key, v)?,
                "chi" => self.chi = channel(key, v)?,
                "q_db" => self.q_db = list(key, v, float)?,
                "user_sweep" => self.user_sweep = Some(list(key, v, count)?),
                "interferer_sweep" => self.interferer_sweep = list(key, v, count)?,
                "beta_sweep" => self.beta_sweep = list(key, v, float)?,
                "grr_slots" => self.grr_slots = list(key, v, count)?,
                "omegas" => self.omegas = list(key, v, float)?,
                "interference_shapes" => self.interference_shapes = list(key, v, float)?,
                "trials" => self.trials = count(key, v)?,
                "seed" => self.seed = count(key, v)?,
                _ => return Err(parse_error(key, "unknown key")),
            }
        }
        Ok(())
    }
}

fn parse_error(key: &str, message: impl Into<String>) -> Error {
    Error::Parse { key: key.to_string(), message: message.into() }
}

fn float(key: &str, v: &Value) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_error(key, format!("expected a number, got {v}")))
}

fn count<T: TryFrom<u64>>(key: &str, v: &Value) -> Result<T> {
    v.as_u64()
        .and_then(|n| T::try_from(n).ok())
        .ok_or_else(|| parse_error(key, format!("expected a non-negative integer, got {v}")))
}

fn channel(key: &str, v: &Value) -> Result<ChannelModel> {
    let text = v.as_str().ok_or_else(|| parse_error(key, format!("expected a string, got {v}")))?;
    text.parse().map_err(|e: Error| parse_error(key, e.to_string()))
}

fn list<T>(key: &str, v: &Value, item: fn(&str, &Value) -> Result<T>) -> Result<Vec<T>> {
    v.as_array()
        .ok_or_else(|| parse_error(key, format!("expected a list, got {v}")))?
        .iter()
        .map(|x| item(key, x))
        .collect()
}

/// Reads a flat JSON object of overrides. An empty file gives the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if !text.trim().is_empty() {
        let doc: Value = serde_json::from_str(text)?;
        let map = doc.as_object().ok_or_else(|| parse_error("", "configuration must be a JSON object"))?;
        cfg.apply(map)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
