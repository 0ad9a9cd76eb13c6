//! Cell geometry: physical constants, ring discretization, angular bins and
//! interferer-distance segments.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Physical constants of the network.
///
/// All powers downstream are normalized by the noise power, so a received
/// power `X = k_bar * r^-beta * gain` is an SNR and the noise term in the
/// SINR is 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub p_max: f64,
    pub c_pl: f64,
    pub sigma2: f64,
    pub beta: f64,
    pub radius: f64,
    pub num_users: u32,
    pub num_interferers: u32,
    pub bs_distance: f64,
    pub k_bar: f64,
}

impl NetworkConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        p_max: f64,
        c_pl: f64,
        sigma2: f64,
        beta: f64,
        radius: f64,
        num_users: u32,
        num_interferers: u32,
        bs_distance: f64,
    ) -> Result<Self> {
        let positive = [
            ("p_max", p_max),
            ("c_pl", c_pl),
            ("sigma2", sigma2),
            ("beta", beta),
            ("radius", radius),
            ("bs_distance", bs_distance),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if num_users < 1 {
            return Err(Error::config("num_users must be at least 1"));
        }
        if bs_distance <= radius {
            return Err(Error::config(format!("bs_distance ({bs_distance}) must exceed the cell radius ({radius})")));
        }
        let k_bar = p_max * c_pl / sigma2;
        if !k_bar.is_finite() {
            return Err(Error::Overflow("link constant p_max * C / sigma2".into()));
        }
        Ok(NetworkConfig { p_max, c_pl, sigma2, beta, radius, num_users, num_interferers, bs_distance, k_bar })
    }

    /// Mean received SNR per unit channel gain at distance `r`.
    pub fn path_gain(&self, r: f64) -> f64 {
        self.k_bar * r.powf(-self.beta)
    }

    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        self.rebuild(|c| c.beta = beta)
    }

    pub fn with_users(&self, num_users: u32) -> Result<Self> {
        self.rebuild(|c| c.num_users = num_users)
    }

    pub fn with_interferers(&self, num_interferers: u32) -> Result<Self> {
        self.rebuild(|c| c.num_interferers = num_interferers)
    }

    fn rebuild(&self, edit: impl FnOnce(&mut Self)) -> Result<Self> {
        let mut c = *self;
        edit(&mut c);
        NetworkConfig::new(c.p_max, c.c_pl, c.sigma2, c.beta, c.radius, c.num_users, c.num_interferers, c.bs_distance)
    }
}

impl Default for NetworkConfig {
    /// R = 500 m, beta = 2.6, U = 50, C = 60 dB, P = 1 W,
    /// sigma2 = -174 dBm, L = 6, D = 2R.
    fn default() -> Self {
        NetworkConfig::new(1.0, db_to_linear(60.0), dbm_to_watts(-174.0), 2.6, 500.0, 50, 6, 1000.0)
            .expect("default configuration is valid")
    }
}

/// Annuli with a constant path-loss decay of `kappa` dB across each ring,
/// ordered from the center outwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingGrid {
    pub kappa: f64,
    /// Outer radius of each ring; the last equals the cell radius.
    pub radii: Vec<f64>,
    pub widths: Vec<f64>,
    pub users: Vec<u32>,
    /// Radius of the unpopulated disc inside the first ring.
    pub inner_radius: f64,
}

impl RingGrid {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// Total rounded user count, the normalizer for per-user proportions.
    pub fn u_eff(&self) -> u32 {
        self.users.iter().sum()
    }

    /// Inner edge of ring `k`.
    pub fn inner_edge(&self, k: usize) -> f64 {
        if k == 0 {
            self.inner_radius
        } else {
            self.radii[k - 1]
        }
    }

    /// Ring holding distance `r`, or `None` inside the inner disc.
    pub fn ring_of(&self, r: f64) -> Option<usize> {
        if r <= self.inner_radius {
            return None;
        }
        let k = self.radii.partition_point(|&edge| edge < r);
        Some(k.min(self.len() - 1))
    }

    /// Builds a grid directly from radii and counts, mainly for small test
    /// geometries.
    pub fn from_parts(radii: Vec<f64>, users: Vec<u32>, inner_radius: f64) -> Result<Self> {
        if radii.is_empty() || radii.len() != users.len() {
            return Err(Error::config("radii and users must be non-empty and of equal length"));
        }
        if !(inner_radius >= 0.0) {
            return Err(Error::config("inner radius must be non-negative"));
        }
        if users.contains(&0) {
            return Err(Error::config("every ring needs at least one user"));
        }
        let mut prev = inner_radius;
        let mut widths = Vec::with_capacity(radii.len());
        for &r in &radii {
            if !(r > prev) {
                return Err(Error::config("radii must be strictly increasing"));
            }
            widths.push(r - prev);
            prev = r;
        }
        Ok(RingGrid { kappa: f64::NAN, radii, widths, users, inner_radius })
    }
}

/// Generates rings inward from the cell edge with
/// `r_{k-1} = r_k * 10^(-kappa / (10 beta))`, stopping at the first ring
/// whose rounded user count is zero.
pub fn build_ring_grid(config: &NetworkConfig, kappa: f64) -> Result<RingGrid> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::config(format!("kappa must be positive, got {kappa}")));
    }
    let shrink = 10f64.powf(-kappa / (10.0 * config.beta));
    let r2 = config.radius * config.radius;
    let u = config.num_users as f64;
    let mut radii = Vec::new();
    let mut users = Vec::new();
    let mut outer = config.radius;
    loop {
        let inner = outer * shrink;
        let mean_users = u * (outer * outer - inner * inner) / r2;
        let rounded = (mean_users + 0.5).floor();
        if rounded < 1.0 {
            break;
        }
        radii.push(outer);
        users.push(rounded as u32);
        outer = inner;
    }
    if radii.is_empty() {
        return Err(Error::config(format!(
            "the outermost ring rounds to zero users (U = {}, kappa = {kappa})",
            config.num_users
        )));
    }
    radii.reverse();
    users.reverse();
    let inner_radius = outer;
    let mut widths = Vec::with_capacity(radii.len());
    let mut prev = inner_radius;
    for &r in &radii {
        widths.push(r - prev);
        prev = r;
    }
    Ok(RingGrid { kappa, radii, widths, users, inner_radius })
}

/// Uniform angular bins with midpoint angles `2 pi (i - 1/2) / I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularGrid {
    pub angles: Vec<f64>,
}

impl AngularGrid {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::config("angular grid needs at least one bin"));
        }
        let step = 2.0 * PI / count as f64;
        let angles = (0..count).map(|i| step * (i as f64 + 0.5)).collect();
        Ok(AngularGrid { angles })
    }

    pub fn count(&self) -> usize {
        self.angles.len()
    }
}

/// `M` equal-width segments covering `[D - R, D + R]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentGrid {
    pub lower: f64,
    pub width: f64,
    pub centers: Vec<f64>,
}

impl SegmentGrid {
    pub fn count(&self) -> usize {
        self.centers.len()
    }

    /// Segment containing distance `x`, keyed by `[c - w/2, c + w/2)`; the
    /// top edge is folded into the last segment.
    pub fn segment_of(&self, x: f64) -> usize {
        let idx = ((x - self.lower) / self.width).floor();
        if idx <= 0.0 {
            0
        } else {
            (idx as usize).min(self.count() - 1)
        }
    }
}

pub fn build_segment_grid(config: &NetworkConfig, m_segments: usize) -> Result<SegmentGrid> {
    if m_segments < 1 {
        return Err(Error::config("segment count must be at least 1"));
    }
    let width = 2.0 * config.radius / m_segments as f64;
    let lower = config.bs_distance - config.radius;
    let centers = (0..m_segments).map(|m| lower + (m as f64 + 0.5) * width).collect();
    Ok(SegmentGrid { lower, width, centers })
}

/// Distance from a user at `(r, theta)` in a neighbouring cell to the
/// serving base station at distance `d`, by the cosine law.
pub fn interferer_distance(r: f64, theta: f64, d: f64) -> f64 {
    (r * r + d * d - 2.0 * r * d * theta.cos()).max(0.0).sqrt()
}
