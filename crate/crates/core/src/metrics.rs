//! Outage probability, ergodic capacity and average fairness.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::geometry::{NetworkConfig, RingGrid};
use crate::interference::InterferenceTransform;
use crate::numerics::inversion::{cf_to_cdf, DEFAULT_REL_TOL};
use crate::numerics::quadrature::{gauss_laguerre, gauss_legendre, LogGrid};
use crate::numerics::special::gamma_p;
use crate::scheduling::{greedy_rr_sweep, LocationPmf, RaceTable, Scheme, DEFAULT_GRR_BUDGET};

/// Default Laguerre order; the result is cross-checked at `order + 8`.
pub const DEFAULT_CAPACITY_ORDER: usize = 24;
const CAPACITY_CHECK_TOL: f64 = 1e-3;
/// Tabulated atoms lighter than this are dropped.
const ATOM_FLOOR: f64 = 1e-17;

/// Law of the serving user's received SNR `X0`.
#[derive(Debug, Clone)]
pub enum SignalLaw {
    /// `X0 = c_k * zeta` with probability `p_k`.
    Mixture { components: Vec<(f64, f64)>, model: ChannelModel },
    /// A smooth density on a log-SNR grid, held as weights `w_j` of narrow
    /// Gamma kernels with mean `x_j` and shape `shape`. The kernel width
    /// matches the grid spacing, so the transform decays like the density's
    /// rather than ringing like a sum of point masses.
    Tabulated { x: Vec<f64>, w: Vec<f64>, shape: f64 },
}

impl SignalLaw {
    pub fn mixture(pmf: &LocationPmf, grid: &RingGrid, model: &ChannelModel, config: &NetworkConfig) -> Self {
        let components = pmf
            .probabilities
            .iter()
            .zip(&grid.radii)
            .filter(|(&p, _)| p > 0.0)
            .map(|(&p, &r)| (p, config.path_gain(r)))
            .collect();
        SignalLaw::Mixture { components, model: *model }
    }

    /// Atoms from density values at the nodes of `nodes`.
    pub fn tabulated(nodes: &LogGrid, density: &[f64]) -> Result<Self> {
        let mut w: Vec<f64> = nodes.wx.iter().zip(density).map(|(a, d)| a * d).collect();
        let total: f64 = w.iter().sum();
        if !((total - 1.0).abs() < 1e-4) {
            return Err(Error::NonConvergence {
                what: "signal density normalization",
                estimate: total,
                error: (total - 1.0).abs(),
            });
        }
        let spacing = nodes.x.windows(2).map(|p| (p[1] / p[0]).ln()).fold(0.0, f64::max);
        let shape = if spacing > 0.0 { spacing.powi(-2) } else { f64::INFINITY };
        let (x, w): (Vec<f64>, Vec<f64>) =
            nodes.x.iter().zip(w.iter_mut()).map(|(&x, w)| (x, *w / total)).filter(|&(_, w)| w > ATOM_FLOOR).unzip();
        Ok(SignalLaw::Tabulated { x, w, shape })
    }

    pub fn mean(&self) -> f64 {
        match self {
            SignalLaw::Mixture { components, model } => {
                components.iter().map(|(p, c)| p * c).sum::<f64>() * model.mean()
            }
            SignalLaw::Tabulated { x, w, .. } => x.iter().zip(w).map(|(x, w)| x * w).sum(),
        }
    }

    pub fn cdf(&self, v: f64) -> f64 {
        match self {
            SignalLaw::Mixture { components, model } => components.iter().map(|&(p, c)| p * model.cdf(v / c)).sum(),
            SignalLaw::Tabulated { x, w, shape } => x
                .iter()
                .zip(w)
                .map(|(&x, &w)| match gamma_p(*shape, shape * v / x) {
                    Ok(p) if shape.is_finite() => w * p,
                    _ if x <= v => w,
                    _ => 0.0,
                })
                .sum(),
        }
    }

    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        match self {
            SignalLaw::Mixture { components, model } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for &(p, c) in components {
                    acc += p * model.laplace(s * c)?;
                }
                Ok(acc)
            }
            SignalLaw::Tabulated { x, w, shape } => Ok(x
                .iter()
                .zip(w)
                .map(
                    |(&x, &w)| {
                        if shape.is_finite() {
                            w * (-shape * ln_1p(s * x / shape)).exp()
                        } else {
                            w * (-s * x).exp()
                        }
                    },
                )
                .sum()),
        }
    }

    /// `E[e^{j w X0}]`.
    pub fn cf(&self, w: f64) -> Result<Complex64> {
        self.laplace(Complex64::new(0.0, -w))
    }

    /// `1 - E[e^{-t X0}]` without cancellation at small `t`.
    pub fn one_minus_laplace(&self, t: f64) -> Result<f64> {
        match self {
            SignalLaw::Mixture { components, model } => {
                let mut acc = 0.0;
                for &(p, c) in components {
                    let a = t * c;
                    acc += p * match *model {
                        ChannelModel::Exponential { rate } => a / (rate + a),
                        ChannelModel::Gamma { shape, scale } => -(-shape * (scale * a).ln_1p()).exp_m1(),
                        ChannelModel::GeneralizedK { .. } => 1.0 - model.laplace_real(a)?,
                    };
                }
                Ok(acc)
            }
            SignalLaw::Tabulated { x, w, shape } => Ok(x
                .iter()
                .zip(w)
                .map(|(&x, &w)| {
                    let e = if shape.is_finite() { -shape * (t * x / shape).ln_1p() } else { -t * x };
                    -w * e.exp_m1()
                })
                .sum()),
        }
    }
}

fn ln_1p(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        z * (1.0 - z * (0.5 - z * (1.0 / 3.0 - 0.25 * z)))
    } else {
        (1.0 + z).ln()
    }
}

/// Greedy winner SNR density at the table nodes.
pub fn greedy_signal(table: &RaceTable) -> Result<SignalLaw> {
    SignalLaw::tabulated(&table.nodes, &table.outcome(0).density)
}

/// Proportional-fair winner SNR: ring `k` wins at SNR `x` when every other
/// ring's normalized maximum stays below `x / mean(gamma_k)`.
pub fn pf_signal(table: &RaceTable) -> Result<SignalLaw> {
    let laws = &table.laws;
    let density: Vec<f64> = table
        .nodes
        .x
        .iter()
        .map(|&x| {
            laws.iter()
                .enumerate()
                .map(|(k, lk)| {
                    let t = x / lk.mean();
                    let rest: f64 =
                        laws.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, li)| li.ln_cdf(t * li.mean())).sum();
                    (lk.ln_pdf(x) + rest).exp()
                })
                .sum()
        })
        .collect();
    SignalLaw::tabulated(&table.nodes, &density)
}

/// Greedy round robin winner SNR at slot `w`, averaged over the served-ring
/// history.
pub fn grr_signal(table: &RaceTable, history: &[(u64, f64)]) -> Result<SignalLaw> {
    let mut density = vec![0.0; table.nodes.x.len()];
    for &(served, p) in history {
        let out = table.outcome(served);
        for (d, v) in density.iter_mut().zip(&out.density) {
            *d += p * v;
        }
    }
    SignalLaw::tabulated(&table.nodes, &density)
}

/// Signal law for a scheduler's PMF; builds the race table when needed.
pub fn signal_law(
    pmf: &LocationPmf,
    grid: &RingGrid,
    model: &ChannelModel,
    config: &NetworkConfig,
) -> Result<SignalLaw> {
    match pmf.scheme {
        Scheme::RoundRobin | Scheme::LocationRoundRobin => Ok(SignalLaw::mixture(pmf, grid, model, config)),
        Scheme::Greedy => greedy_signal(&RaceTable::new(grid, model, config)?),
        Scheme::ProportionalFair => pf_signal(&RaceTable::new(grid, model, config)?),
        Scheme::GreedyRoundRobin => {
            let slot = pmf.slot.unwrap_or(1);
            let table = RaceTable::new(grid, model, config)?;
            let sweep = greedy_rr_sweep(&table, slot, DEFAULT_GRR_BUDGET)?;
            grr_signal(&table, &sweep.histories[slot - 1])
        }
    }
}

/// `P(q Y - X0 >= 0)` from the characteristic function of `Z = q Y - X0`.
pub fn outage_probability(q: f64, signal: &SignalLaw, tr: &InterferenceTransform) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("outage threshold must be positive, got {q}")));
    }
    if tr.cells == 0 {
        return Ok(0.0);
    }
    let trunc = 8.0 / (signal.mean() + q * tr.mean());
    let cf = |w: f64| -> Complex64 {
        match (tr.cf(q * w), signal.cf(-w)) {
            (Ok(a), Ok(b)) => a * b,
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    let below = cf_to_cdf(cf, 0.0, trunc, DEFAULT_REL_TOL)?;
    Ok((1.0 - below).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityEstimate {
    /// Bits per second per hertz.
    pub bits: f64,
    /// Estimate at the higher check order.
    pub check: f64,
    pub rel_diff: f64,
}

/// `E[log2(1 + X0 / (Y + noise))]` from the transforms, via
/// `ln(1 + x / n) = int_0^inf (e^{-n t} - e^{-(x + n) t}) / t dt`.
///
/// The integral runs over `v = ln t`: Gauss-Laguerre handles the two
/// exponentially decaying tails and composite Gauss-Legendre the window in
/// between, where the transforms change.
pub fn ergodic_capacity(
    signal: &SignalLaw,
    tr: &InterferenceTransform,
    noise: f64,
    order: usize,
) -> Result<CapacityEstimate> {
    if !(noise >= 0.0) {
        return Err(Error::domain(format!("noise must be non-negative, got {noise}")));
    }
    let bits = capacity_nats(signal, tr, noise, order)? / std::f64::consts::LN_2;
    let check = capacity_nats(signal, tr, noise, order + 8)? / std::f64::consts::LN_2;
    let rel_diff = if check != 0.0 { ((bits - check) / check).abs() } else { (bits - check).abs() };
    if rel_diff > CAPACITY_CHECK_TOL {
        return Err(Error::NonConvergence { what: "capacity quadrature", estimate: bits, error: rel_diff });
    }
    Ok(CapacityEstimate { bits, check, rel_diff })
}

fn capacity_nats(signal: &SignalLaw, tr: &InterferenceTransform, noise: f64, order: usize) -> Result<f64> {
    let mean_y = tr.mean();
    if mean_y + noise <= 0.0 {
        return Err(Error::domain("capacity needs interference or noise"));
    }
    let h = |v: f64| -> Result<f64> {
        let t = v.exp();
        let ly = tr.cumulative_real(t)?;
        if ly == 0.0 {
            return Ok(0.0);
        }
        Ok(ly * signal.one_minus_laplace(t)? * (-noise * t).exp())
    };
    let v_a = -(signal.mean() + mean_y + noise).ln() - 2.0;
    let v_b = -(mean_y + noise).ln() + 2.0;
    // extend the window until the integrand is negligible: the noise factor
    // falls below e^-40, or the transform's power-law tail has decayed 30 e-folds
    let decay = tr.cells as f64 * tr.chi.min_shape();
    let noise_end = if noise > 0.0 { (40.0 / noise).ln() } else { f64::INFINITY };
    let power_end = if decay > 0.0 { v_b + 30.0 / decay } else { f64::INFINITY };
    let v_b = noise_end.min(power_end).max(v_b);
    let lag = gauss_laguerre(order)?;
    let mut left = 0.0;
    for (&xi, &a) in lag.nodes.iter().zip(&lag.weights) {
        left += a * xi.exp() * h(v_a - xi)?;
    }
    let (gx, gw) = gauss_legendre(order)?;
    let panels = (v_b - v_a).ceil().max(1.0) as usize;
    let width = (v_b - v_a) / panels as f64;
    let mut middle = 0.0;
    for p in 0..panels {
        let lo = v_a + p as f64 * width;
        for (&x, &w) in gx.iter().zip(&gw) {
            middle += 0.5 * width * w * h(lo + 0.5 * width * (x + 1.0))?;
        }
    }
    let rho = (0.5 * decay).clamp(0.25, 1.0);
    let mut right = 0.0;
    for (&xi, &a) in lag.nodes.iter().zip(&lag.weights) {
        right += a * xi.exp() * h(v_b + xi / rho)?;
    }
    Ok(left + middle + right / rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FairnessResult {
    pub value: f64,
    /// Access share of each single user of ring `k`, `P_k / u_k`.
    pub per_user: Vec<f64>,
}

/// Normalized entropy of the per-user access shares implied by a ring PMF.
pub fn average_fairness(pmf: &LocationPmf, grid: &RingGrid) -> Result<FairnessResult> {
    fairness_from_masses(&pmf.probabilities, &grid.users)
}

pub fn fairness_from_masses(masses: &[f64], users: &[u32]) -> Result<FairnessResult> {
    if masses.len() != users.len() {
        return Err(Error::domain("PMF and grid disagree in ring count"));
    }
    let per_user: Vec<f64> = masses.iter().zip(users).map(|(&p, &u)| p / u as f64).collect();
    let total: u32 = users.iter().sum();
    if total <= 1 {
        return Ok(FairnessResult { value: 1.0, per_user });
    }
    let entropy: f64 =
        masses.iter().zip(users).filter(|(&p, _)| p > 0.0).map(|(&p, &u)| -p * (p.log10() - (u as f64).log10())).sum();
    Ok(FairnessResult { value: entropy / (total as f64).log10(), per_user })
}

/// Arithmetic mean of per-slot metric values.
pub fn slot_averaged_metric(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("no slot values to average"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}
