//! Distribution of the scheduled user's ring under each scheduler.
//!
//! Users in ring `k` see the path gain `c_k = k_bar * r_k^-beta` of the
//! ring's outer radius, so the best of the `u_k` users in that ring has SNR
//! `c_k * M_k`, with `M_k` the maximum of `u_k` i.i.d. channel gains. Every
//! opportunistic PMF is then a race between these per-ring maxima.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::geometry::{AngularGrid, NetworkConfig, RingGrid};
use crate::numerics::quadrature::{integrate, integrate_semi_infinite_scaled, LogGrid, Tolerance};

/// Probability mass left outside the integration range of each ring law.
const TAIL: f64 = 1e-14;

/// Default cap on the number of conditional integrals for greedy round robin.
pub const DEFAULT_GRR_BUDGET: u64 = 100_000;

/// Panel width (in log-SNR) and order of the shared race table.
const TABLE_PANEL: f64 = 0.05;
const TABLE_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scheme {
    Greedy,
    ProportionalFair,
    RoundRobin,
    LocationRoundRobin,
    GreedyRoundRobin,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Greedy,
        Scheme::ProportionalFair,
        Scheme::RoundRobin,
        Scheme::LocationRoundRobin,
        Scheme::GreedyRoundRobin,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Greedy => "greedy",
            Scheme::ProportionalFair => "pf",
            Scheme::RoundRobin => "rr",
            Scheme::LocationRoundRobin => "lrr",
            Scheme::GreedyRoundRobin => "grr",
        }
    }

    pub fn is_slot_based(&self) -> bool {
        matches!(self, Scheme::LocationRoundRobin | Scheme::GreedyRoundRobin)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "greedy" => Ok(Scheme::Greedy),
            "pf" | "proportional_fair" => Ok(Scheme::ProportionalFair),
            "rr" | "round_robin" => Ok(Scheme::RoundRobin),
            "lrr" | "location_rr" | "location_round_robin" => Ok(Scheme::LocationRoundRobin),
            "grr" | "greedy_rr" | "greedy_round_robin" => Ok(Scheme::GreedyRoundRobin),
            other => Err(Error::Parse { key: "schemes".into(), message: format!("unknown scheme `{other}`") }),
        }
    }
}

/// `P(r_sel = r_k)` over the rings of a grid, center first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocationPmf {
    pub scheme: Scheme,
    /// Time slot (1-based) for slot-dependent schemes.
    pub slot: Option<usize>,
    pub probabilities: Vec<f64>,
}

impl LocationPmf {
    /// Validates masses (non-negative, total within 1e-6 of one) and removes
    /// the residual normalization drift.
    pub fn new(scheme: Scheme, slot: Option<usize>, mut probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.iter().any(|p| !(p.is_finite() && *p >= -1e-12)) {
            return Err(Error::domain(format!("{scheme}: invalid ring masses {probabilities:?}")));
        }
        for p in probabilities.iter_mut() {
            *p = p.max(0.0);
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::NonConvergence {
                what: "location PMF normalization",
                estimate: total,
                error: (total - 1.0).abs(),
            });
        }
        for p in probabilities.iter_mut() {
            *p /= total;
        }
        Ok(LocationPmf { scheme, slot, probabilities })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn mean_radius(&self, grid: &RingGrid) -> f64 {
        self.probabilities.iter().zip(&grid.radii).map(|(p, r)| p * r).sum()
    }

    /// Arithmetic mean of per-slot PMFs.
    pub fn average(pmfs: &[LocationPmf]) -> Result<LocationPmf> {
        let first = pmfs.first().ok_or_else(|| Error::domain("no PMFs to average"))?;
        let n = pmfs.len() as f64;
        let mut acc = vec![0.0; first.len()];
        for p in pmfs {
            for (a, v) in acc.iter_mut().zip(&p.probabilities) {
                *a += v / n;
            }
        }
        LocationPmf::new(first.scheme, None, acc)
    }
}

pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// Law of the best SNR within one ring.
#[derive(Debug, Clone, Copy)]
pub struct RingSnrLaw {
    pub ring: usize,
    pub users: u32,
    /// Mean SNR per unit channel gain at the ring's outer radius.
    pub gain: f64,
    pub model: ChannelModel,
    /// `E[max of u_k gains]`, so the short-term mean SNR is `gain * max_mean`.
    pub max_mean: f64,
}

impl RingSnrLaw {
    pub fn mean(&self) -> f64 {
        self.gain * self.max_mean
    }

    pub fn ln_cdf(&self, g: f64) -> f64 {
        self.users as f64 * self.model.ln_cdf(g / self.gain)
    }

    pub fn cdf(&self, g: f64) -> f64 {
        self.ln_cdf(g).exp()
    }

    pub fn ln_pdf(&self, g: f64) -> f64 {
        let y = g / self.gain;
        let u = self.users as f64;
        let mut v = u.ln() + self.model.density(y).ln() - self.gain.ln();
        if self.users > 1 {
            v += (u - 1.0) * self.model.ln_cdf(y);
        }
        v
    }

    pub fn pdf(&self, g: f64) -> f64 {
        if !(g > 0.0) {
            return 0.0;
        }
        self.ln_pdf(g).exp()
    }

    /// CDF of the normalized SNR `gamma_k / mean`.
    pub fn normalized_cdf(&self, x: f64) -> f64 {
        self.cdf(x * self.mean())
    }

    /// SNR range holding all but `TAIL` of the law's mass on each side.
    fn support(&self) -> Result<(f64, f64)> {
        let u = self.users as f64;
        let lo = self.model.quantile(TAIL.powf(1.0 / u))?;
        let hi = self.model.upper_quantile(TAIL / u)?;
        Ok((self.gain * lo, self.gain * hi))
    }
}

/// `E[max(Z_1, .., Z_u)]` for i.i.d. gains.
pub fn expected_max(model: &ChannelModel, users: u32) -> Result<f64> {
    if users == 0 {
        return Err(Error::domain("expected maximum of zero users"));
    }
    if users == 1 {
        return Ok(model.mean());
    }
    let u = users as f64;
    integrate_semi_infinite_scaled(|x: f64| -(u * model.ln_cdf(x)).exp_m1(), model.mean(), Tolerance::new(0.0, 1e-12))
        .map(|q| q.value)
}

/// Law of the best SNR in ring `k` (0-based, center first).
pub fn ring_max_snr_law(grid: &RingGrid, k: usize, model: &ChannelModel, config: &NetworkConfig) -> Result<RingSnrLaw> {
    if k >= grid.len() {
        return Err(Error::domain(format!("ring {k} outside a grid of {}", grid.len())));
    }
    let users = grid.users[k];
    Ok(RingSnrLaw {
        ring: k,
        users,
        gain: config.path_gain(grid.radii[k]),
        model: *model,
        max_mean: expected_max(model, users)?,
    })
}

/// `P(s_k M_k > s_i M_i for all i != k)` where `M_i` is the maximum of
/// `counts[i]` i.i.d. gains.
fn race(model: &ChannelModel, counts: &[u32], scales: &[f64], k: usize) -> Result<f64> {
    let uk = counts[k] as f64;
    let lo = model.quantile(TAIL.powf(1.0 / uk))?;
    let hi = model.upper_quantile(TAIL / uk)?;
    let integrand = |v: f64| {
        let y = v.exp();
        let mut l = v + uk.ln() + model.density(y).ln();
        if counts[k] > 1 {
            l += (uk - 1.0) * model.ln_cdf(y);
        }
        for (i, (&ui, &si)) in counts.iter().zip(scales).enumerate() {
            if i != k {
                l += ui as f64 * model.ln_cdf(y * scales[k] / si);
            }
        }
        l.exp()
    };
    let q = integrate(integrand, lo.ln(), hi.ln(), Tolerance::new(1e-13, 1e-10))?;
    Ok(q.value)
}

pub fn greedy_pmf(grid: &RingGrid, model: &ChannelModel, config: &NetworkConfig) -> Result<LocationPmf> {
    let scales: Vec<f64> = grid.radii.iter().map(|&r| config.path_gain(r)).collect();
    let probs = (0..grid.len()).map(|k| race(model, &grid.users, &scales, k)).collect::<Result<Vec<_>>>()?;
    LocationPmf::new(Scheme::Greedy, None, probs)
}

/// Per-ring normalizers `E[max of u_k gains]`, shared across rings with the
/// same user count.
pub fn max_means(grid: &RingGrid, model: &ChannelModel) -> Result<Vec<f64>> {
    let mut cache: BTreeMap<u32, f64> = BTreeMap::new();
    grid.users
        .iter()
        .map(|&u| {
            if let Some(&m) = cache.get(&u) {
                return Ok(m);
            }
            let m = expected_max(model, u)?;
            cache.insert(u, m);
            Ok(m)
        })
        .collect()
}

/// Proportional fair: the winner maximizes `gamma_k / mean(gamma_k)`, which
/// removes the path loss and leaves a race between `M_k / E[M_k]`.
pub fn proportional_fair_pmf(grid: &RingGrid, model: &ChannelModel, _config: &NetworkConfig) -> Result<LocationPmf> {
    let scales: Vec<f64> = max_means(grid, model)?.iter().map(|m| 1.0 / m).collect();
    let probs = (0..grid.len()).map(|k| race(model, &grid.users, &scales, k)).collect::<Result<Vec<_>>>()?;
    LocationPmf::new(Scheme::ProportionalFair, None, probs)
}

pub fn round_robin_pmf(grid: &RingGrid) -> LocationPmf {
    let total = grid.u_eff() as f64;
    LocationPmf {
        scheme: Scheme::RoundRobin,
        slot: None,
        probabilities: grid.users.iter().map(|&u| u as f64 / total).collect(),
    }
}

/// Slot `w` (1-based) serves ring `w`.
pub fn location_rr_pmf(grid: &RingGrid, slot: usize) -> Result<LocationPmf> {
    if slot < 1 || slot > grid.len() {
        return Err(Error::domain(format!("slot {slot} outside 1..={}", grid.len())));
    }
    let mut probabilities = vec![0.0; grid.len()];
    probabilities[slot - 1] = 1.0;
    Ok(LocationPmf { scheme: Scheme::LocationRoundRobin, slot: Some(slot), probabilities })
}

/// All ring laws tabulated on one log-SNR rule, so every greedy race over a
/// subset of rings becomes a weighted sum.
#[derive(Debug, Clone)]
pub struct RaceTable {
    pub laws: Vec<RingSnrLaw>,
    pub nodes: LogGrid,
    ln_cdf: Vec<Vec<f64>>,
    ln_pdf: Vec<Vec<f64>>,
}

/// Win probabilities and winner density for one set of competing rings.
#[derive(Debug, Clone)]
pub struct RaceOutcome {
    pub wins: Vec<f64>,
    /// Density of the winning SNR at the table nodes.
    pub density: Vec<f64>,
}

impl RaceTable {
    pub fn new(grid: &RingGrid, model: &ChannelModel, config: &NetworkConfig) -> Result<Self> {
        if grid.len() > 63 {
            return Err(Error::domain("race tables support at most 63 rings"));
        }
        let maxima = max_means(grid, model)?;
        let laws: Vec<RingSnrLaw> = (0..grid.len())
            .map(|k| RingSnrLaw {
                ring: k,
                users: grid.users[k],
                gain: config.path_gain(grid.radii[k]),
                model: *model,
                max_mean: maxima[k],
            })
            .collect();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for law in &laws {
            let (a, b) = law.support()?;
            lo = lo.min(a);
            hi = hi.max(b);
        }
        let nodes = LogGrid::new(lo, hi, TABLE_PANEL, TABLE_ORDER)?;
        let ln_cdf = laws.iter().map(|l| nodes.x.iter().map(|&g| l.ln_cdf(g)).collect()).collect();
        let ln_pdf = laws.iter().map(|l| nodes.x.iter().map(|&g| l.ln_pdf(g)).collect()).collect();
        Ok(RaceTable { laws, nodes, ln_cdf, ln_pdf })
    }

    pub fn len(&self) -> usize {
        self.laws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laws.is_empty()
    }

    /// Greedy race among the rings not in the bitmask `excluded`.
    pub fn outcome(&self, excluded: u64) -> RaceOutcome {
        let k_count = self.len();
        let active: Vec<usize> = (0..k_count).filter(|&i| excluded & (1 << i) == 0).collect();
        let n = self.nodes.len();
        let mut wins = vec![0.0; k_count];
        let mut density = vec![0.0; n];
        #[allow(clippy::needless_range_loop)]
        for j in 0..n {
            let base: f64 = active.iter().map(|&i| self.ln_cdf[i][j]).sum();
            for &k in &active {
                let rest = if self.ln_cdf[k][j].is_finite() {
                    base - self.ln_cdf[k][j]
                } else {
                    active.iter().filter(|&&i| i != k).map(|&i| self.ln_cdf[i][j]).sum()
                };
                let term = (self.ln_pdf[k][j] + rest).exp();
                if term > 0.0 {
                    wins[k] += self.nodes.wx[j] * term;
                    density[j] += term;
                }
            }
        }
        RaceOutcome { wins, density }
    }
}

/// Number of conditional integrals for an exact greedy round robin sweep
/// over `slots` slots, after merging histories that serve the same rings.
pub fn greedy_rr_integral_count(rings: usize, slots: usize) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for j in 0..slots.min(rings) {
        total = total.saturating_add(binom.saturating_mul((rings - j) as u64));
        binom = binom.saturating_mul((rings - j) as u64) / (j as u64 + 1);
    }
    total
}

/// Exact greedy round robin over slots `1..=W`.
#[derive(Debug, Clone)]
pub struct GreedyRrSweep {
    pub pmfs: Vec<LocationPmf>,
    /// `histories[w - 1]` is the law of the set of rings (bitmask) served
    /// before slot `w`.
    pub histories: Vec<Vec<(u64, f64)>>,
}

impl GreedyRrSweep {
    pub fn slot(&self, w: usize) -> Option<&LocationPmf> {
        w.checked_sub(1).and_then(|i| self.pmfs.get(i))
    }
}

pub fn greedy_rr_sweep(table: &RaceTable, slots: usize, budget: u64) -> Result<GreedyRrSweep> {
    let k_count = table.len();
    if slots < 1 || slots > k_count {
        return Err(Error::domain(format!("slot count {slots} outside 1..={k_count}")));
    }
    let required = greedy_rr_integral_count(k_count, slots);
    if required > budget {
        return Err(Error::ComplexityBudget { required, budget });
    }
    let mut history: Vec<(u64, f64)> = vec![(0, 1.0)];
    let mut pmfs = Vec::with_capacity(slots);
    let mut histories = Vec::with_capacity(slots);
    for w in 1..=slots {
        let mut probs = vec![0.0; k_count];
        let mut next: BTreeMap<u64, f64> = BTreeMap::new();
        for &(served, p) in &history {
            let out = table.outcome(served);
            for (k, q) in out.wins.iter().enumerate() {
                if served & (1 << k) != 0 {
                    continue;
                }
                probs[k] += p * q;
                if w < slots {
                    *next.entry(served | (1 << k)).or_insert(0.0) += p * q;
                }
            }
        }
        pmfs.push(LocationPmf::new(Scheme::GreedyRoundRobin, Some(w), probs)?);
        histories.push(std::mem::take(&mut history));
        history = next.into_iter().collect();
    }
    Ok(GreedyRrSweep { pmfs, histories })
}

pub fn greedy_rr_pmf(
    grid: &RingGrid,
    model: &ChannelModel,
    config: &NetworkConfig,
    slot: usize,
) -> Result<LocationPmf> {
    let table = RaceTable::new(grid, model, config)?;
    let sweep = greedy_rr_sweep(&table, slot, DEFAULT_GRR_BUDGET)?;
    Ok(sweep.pmfs.into_iter().last().expect("at least one slot"))
}

/// `P(r_k, theta_i) = P(r_k) / I`, rows indexed by ring.
pub fn joint_pmf_with_angle(pmf: &LocationPmf, angular: &AngularGrid) -> Vec<Vec<f64>> {
    let share = 1.0 / angular.count() as f64;
    pmf.probabilities.iter().map(|p| vec![p * share; angular.count()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_ring_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Distribution;

    fn unit_config(beta: f64) -> NetworkConfig {
        NetworkConfig::new(1.0, 1.0, 1.0, beta, 2.0, 2, 1, 4.0).unwrap()
    }

    fn exp1() -> ChannelModel {
        ChannelModel::exponential(1.0).unwrap()
    }

    fn default_gamma() -> ChannelModel {
        ChannelModel::gamma(1.5, 2.0 / 3.0).unwrap()
    }

    #[test]
    fn ring_law_two_users_exponential() {
        let grid = RingGrid::from_parts(vec![1.0, 2.0], vec![1, 2], 0.0).unwrap();
        let cfg = unit_config(2.0);
        let law = ring_max_snr_law(&grid, 1, &exp1(), &cfg).unwrap();
        for g in [0.01, 0.1, 0.5, 2.0] {
            let want = (1.0 - (-g * 4.0f64).exp()).powi(2);
            assert!((law.cdf(g) - want).abs() < 1e-14);
        }
        let single = ring_max_snr_law(&grid, 0, &exp1(), &cfg).unwrap();
        assert!((single.cdf(0.7) - exp1().cdf(0.7)).abs() < 1e-15);
        assert!(ring_max_snr_law(&grid, 2, &exp1(), &cfg).is_err());
    }

    #[test]
    fn ring_law_median_grows_with_users() {
        let cfg = unit_config(2.0);
        let mut prev = 0.0;
        for u in [1, 2, 4] {
            let grid = RingGrid::from_parts(vec![1.0], vec![u], 0.0).unwrap();
            let law = ring_max_snr_law(&grid, 0, &default_gamma(), &cfg).unwrap();
            let (mut lo, mut hi) = (1e-6, 100.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if law.cdf(mid) < 0.5 {
                    lo = mid
                } else {
                    hi = mid
                }
            }
            assert!(lo > prev);
            prev = lo;
        }
    }

    #[test]
    fn expected_max_exponential_is_harmonic() {
        let h: f64 = (1..=5).map(|i| 1.0 / i as f64).sum();
        assert!((expected_max(&exp1(), 5).unwrap() - h).abs() < 1e-10);
    }

    #[test]
    fn symmetric_race_is_fair() {
        let p = race(&default_gamma(), &[3, 3], &[2.0, 2.0], 0).unwrap();
        assert!((p - 0.5).abs() < 1e-9);
    }

    #[test]
    fn greedy_two_ring_exact() {
        let grid = RingGrid::from_parts(vec![1.0, 2.0], vec![1, 1], 0.0).unwrap();
        let pmf = greedy_pmf(&grid, &exp1(), &unit_config(2.0)).unwrap();
        assert!((pmf.probabilities[0] - 0.8).abs() < 1e-9);
    }

    #[test]
    fn greedy_default_concentrates_inward_relative_to_rr() {
        let cfg = NetworkConfig::default();
        let grid = build_ring_grid(&cfg, 2.0).unwrap();
        let g = greedy_pmf(&grid, &default_gamma(), &cfg).unwrap();
        let rr = round_robin_pmf(&grid);
        assert!(g.mean_radius(&grid) < rr.mean_radius(&grid));
        assert!((g.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn greedy_mean_radius_shrinks_with_users() {
        let mut prev = f64::INFINITY;
        for u in [10, 50, 100] {
            let cfg = NetworkConfig::default().with_users(u).unwrap();
            let grid = build_ring_grid(&cfg, 2.0).unwrap();
            let m = greedy_pmf(&grid, &default_gamma(), &cfg).unwrap().mean_radius(&grid);
            assert!(m <= prev, "U = {u}");
            prev = m;
        }
    }

    #[test]
    fn pf_uniform_for_equal_counts() {
        let grid = RingGrid::from_parts(vec![1.0, 2.0, 3.0], vec![4, 4, 4], 0.0).unwrap();
        let pmf = proportional_fair_pmf(&grid, &default_gamma(), &unit_config(3.0)).unwrap();
        for p in pmf.probabilities {
            assert!((p - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn pf_flatter_than_greedy_on_default() {
        let cfg = NetworkConfig::default();
        let grid = build_ring_grid(&cfg, 2.0).unwrap();
        let g = greedy_pmf(&grid, &default_gamma(), &cfg).unwrap();
        let pf = proportional_fair_pmf(&grid, &default_gamma(), &cfg).unwrap();
        let max = |p: &LocationPmf| p.probabilities.iter().cloned().fold(0.0, f64::max);
        assert!(max(&pf) < max(&g));
    }

    #[test]
    fn pf_two_rings_against_simulation() {
        let grid = RingGrid::from_parts(vec![1.0, 2.0], vec![1, 3], 0.0).unwrap();
        let pmf = proportional_fair_pmf(&grid, &exp1(), &unit_config(2.0)).unwrap();
        let m = [1.0, 1.0 + 0.5 + 1.0 / 3.0];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = rand_distr::Exp::new(1.0).unwrap();
        let n = 1_000_000;
        let mut inner = 0usize;
        for _ in 0..n {
            let a: f64 = d.sample(&mut rng);
            let b = (0..3).map(|_| d.sample(&mut rng)).fold(0.0f64, f64::max);
            if a / m[0] > b / m[1] {
                inner += 1;
            }
        }
        let emp = inner as f64 / n as f64;
        assert!((pmf.probabilities[0] - emp).abs() < 0.005, "{} vs {emp}", pmf.probabilities[0]);
        assert!(pmf.probabilities[1] > pmf.probabilities[0]);
    }

    #[test]
    fn round_robin_examples() {
        let one = RingGrid::from_parts(vec![1.0], vec![7], 0.0).unwrap();
        assert_eq!(round_robin_pmf(&one).probabilities, vec![1.0]);
        let two = RingGrid::from_parts(vec![1.0, 2.0], vec![15, 35], 0.0).unwrap();
        assert_eq!(round_robin_pmf(&two).probabilities, vec![0.3, 0.7]);
        let cfg = NetworkConfig::default();
        let grid = build_ring_grid(&cfg, 2.0).unwrap();
        let rr = round_robin_pmf(&grid);
        let last = *rr.probabilities.last().unwrap();
        assert!(rr.probabilities.iter().all(|&p| p <= last));
    }

    #[test]
    fn location_rr_examples() {
        let grid = build_ring_grid(&NetworkConfig::default(), 2.0).unwrap();
        assert_eq!(location_rr_pmf(&grid, 1).unwrap().probabilities[0], 1.0);
        assert_eq!(location_rr_pmf(&grid, 10).unwrap().probabilities[9], 1.0);
        assert!(location_rr_pmf(&grid, 0).is_err());
        assert!(location_rr_pmf(&grid, 11).is_err());
        let slots: Vec<_> = (1..=10).map(|w| location_rr_pmf(&grid, w).unwrap()).collect();
        let avg = LocationPmf::average(&slots).unwrap();
        assert!(avg.probabilities.iter().all(|&p| (p - 0.1).abs() < 1e-15));
    }

    #[test]
    fn table_matches_adaptive_greedy() {
        let cfg = NetworkConfig::default();
        let grid = build_ring_grid(&cfg, 2.0).unwrap();
        let g = greedy_pmf(&grid, &default_gamma(), &cfg).unwrap();
        let grr = greedy_rr_pmf(&grid, &default_gamma(), &cfg, 1).unwrap();
        assert!(total_variation(&g.probabilities, &grr.probabilities) < 1e-8);
    }

    #[test]
    fn greedy_rr_two_rings() {
        let grid = RingGrid::from_parts(vec![1.0, 2.0], vec![1, 2], 0.0).unwrap();
        let cfg = unit_config(2.0);
        let table = RaceTable::new(&grid, &exp1(), &cfg).unwrap();
        let sweep = greedy_rr_sweep(&table, 2, DEFAULT_GRR_BUDGET).unwrap();
        let p1 = &sweep.slot(1).unwrap().probabilities;
        let p2 = &sweep.slot(2).unwrap().probabilities;
        assert!((p2[0] - p1[1]).abs() < 1e-12 && (p2[1] - p1[0]).abs() < 1e-12);
    }

    #[test]
    fn greedy_rr_three_rings_against_simulation() {
        let grid = RingGrid::from_parts(vec![1.0, 1.5, 2.0], vec![1, 2, 3], 0.0).unwrap();
        let cfg = unit_config(2.0);
        let pmf = greedy_rr_pmf(&grid, &exp1(), &cfg, 2).unwrap();
        let gains: Vec<f64> = grid.radii.iter().map(|&r| cfg.path_gain(r)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = rand_distr::Exp::new(1.0).unwrap();
        let n = 1_000_000;
        let mut counts = [0usize; 3];
        let best = |rng: &mut ChaCha8Rng| -> [f64; 3] {
            let mut s = [0.0; 3];
            for k in 0..3 {
                s[k] = (0..grid.users[k]).map(|_| d.sample(rng)).fold(0.0f64, f64::max) * gains[k];
            }
            s
        };
        for _ in 0..n {
            let first = best(&mut rng);
            let w1 = (0..3).max_by(|&a, &b| first[a].total_cmp(&first[b])).unwrap();
            let second = best(&mut rng);
            let w2 = (0..3).filter(|&k| k != w1).max_by(|&a, &b| second[a].total_cmp(&second[b])).unwrap();
            counts[w2] += 1;
        }
        for (k, &c) in counts.iter().enumerate() {
            let emp = c as f64 / n as f64;
            assert!((pmf.probabilities[k] - emp).abs() < 0.005, "ring {k}");
        }
    }

    #[test]
    fn greedy_rr_budget_guard() {
        assert_eq!(greedy_rr_integral_count(10, 6), 3820);
        assert_eq!(greedy_rr_integral_count(10, 1), 10);
        let cfg = NetworkConfig::default();
        let grid = build_ring_grid(&cfg, 2.0).unwrap();
        let table = RaceTable::new(&grid, &default_gamma(), &cfg).unwrap();
        assert!(matches!(
            greedy_rr_sweep(&table, 6, 1000),
            Err(Error::ComplexityBudget { required: 3820, budget: 1000 })
        ));
        assert!(greedy_rr_sweep(&table, 11, DEFAULT_GRR_BUDGET).is_err());
    }

    #[test]
    fn full_sweep_covers_every_ring_once() {
        let grid = RingGrid::from_parts(vec![1.0, 1.5, 2.0, 2.5], vec![1, 2, 2, 3], 0.0).unwrap();
        let table = RaceTable::new(&grid, &default_gamma(), &unit_config(2.6)).unwrap();
        let sweep = greedy_rr_sweep(&table, 4, DEFAULT_GRR_BUDGET).unwrap();
        for k in 0..4 {
            let total: f64 = sweep.pmfs.iter().map(|p| p.probabilities[k]).sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn joint_pmf_marginals() {
        let grid = build_ring_grid(&NetworkConfig::default(), 2.0).unwrap();
        let rr = round_robin_pmf(&grid);
        let ang = AngularGrid::new(180).unwrap();
        let joint = joint_pmf_with_angle(&rr, &ang);
        let total: f64 = joint.iter().flatten().sum();
        assert!((total - 1.0).abs() < 1e-12);
        for (row, p) in joint.iter().zip(&rr.probabilities) {
            assert!((row[0] - p / 180.0).abs() < 1e-18);
            assert!((row.iter().sum::<f64>() - p).abs() < 1e-14);
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert!("best".parse::<Scheme>().is_err());
    }
}
