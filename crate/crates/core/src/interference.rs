//! Interferer-distance law and the Laplace transform of the cumulative
//! intercell interference.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::geometry::{interferer_distance, AngularGrid, NetworkConfig, RingGrid, SegmentGrid};
use crate::numerics::inversion::{cf_to_cdf, DEFAULT_REL_TOL};
use crate::numerics::quadrature::{integrate_semi_infinite_scaled, Tolerance};
use crate::scheduling::{joint_pmf_with_angle, LocationPmf, Scheme};

/// `P(r~_sel = r~_m)` over the segments of a [`SegmentGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct InterfererDistancePmf {
    pub segments: SegmentGrid,
    pub masses: Vec<f64>,
    pub scheme: Option<Scheme>,
    pub slot: Option<usize>,
}

/// Bins joint `(r_k, theta_i)` masses by the distance of each point to the
/// serving base station at distance `d`.
pub fn interferer_pmf(
    joint: &[Vec<f64>],
    radii: &[f64],
    angular: &AngularGrid,
    segments: &SegmentGrid,
    d: f64,
) -> Result<InterfererDistancePmf> {
    if joint.len() != radii.len() {
        return Err(Error::domain("joint masses and radii disagree in length"));
    }
    let mut masses = vec![0.0; segments.count()];
    for (row, &r) in joint.iter().zip(radii) {
        if row.len() != angular.count() {
            return Err(Error::domain("joint masses and angular grid disagree in length"));
        }
        for (&p, &theta) in row.iter().zip(&angular.angles) {
            if p != 0.0 {
                masses[segments.segment_of(interferer_distance(r, theta, d))] += p;
            }
        }
    }
    Ok(InterfererDistancePmf { segments: segments.clone(), masses, scheme: None, slot: None })
}

/// [`interferer_pmf`] for a scheduler's location PMF.
pub fn interferer_pmf_for(
    pmf: &LocationPmf,
    grid: &RingGrid,
    angular: &AngularGrid,
    segments: &SegmentGrid,
    config: &NetworkConfig,
) -> Result<InterfererDistancePmf> {
    let joint = joint_pmf_with_angle(pmf, angular);
    let mut out = interferer_pmf(&joint, &grid.radii, angular, segments, config.bs_distance)?;
    out.scheme = Some(pmf.scheme);
    out.slot = pmf.slot;
    Ok(out)
}

/// Mean received interference per unit channel gain for each segment.
fn segment_gains(pmf: &InterfererDistancePmf, config: &NetworkConfig) -> Vec<f64> {
    pmf.segments.centers.iter().map(|&r| config.path_gain(r)).collect()
}

/// Density of the interference from one cell:
/// `sum_m P_m f_chi(x / c_m) / c_m` with `c_m = k_bar r~_m^-beta`.
pub fn per_cell_pdf(pmf: &InterfererDistancePmf, chi: &ChannelModel, config: &NetworkConfig, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("density needs x > 0, got {x}")));
    }
    Ok(segment_gains(pmf, config)
        .iter()
        .zip(&pmf.masses)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&c, &p)| p * chi.density(x / c) / c)
        .sum())
}

/// Which closed form evaluates the per-cell transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    RayleighClosed,
    GammaClosed,
    GkWhittaker,
}

/// `E[e^{-s X}]` for the interference `X` of one cell and its `L`-th power
/// for `L` i.i.d. cells.
#[derive(Debug, Clone)]
pub struct InterferenceTransform {
    /// `(P_m, c_m)` pairs with non-zero mass.
    pub components: Vec<(f64, f64)>,
    pub chi: ChannelModel,
    pub cells: u32,
    pub kind: TransformKind,
}

impl InterferenceTransform {
    pub fn per_cell(&self, s: Complex64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, c) in &self.components {
            acc += p * self.chi.laplace(s * c)?;
        }
        Ok(acc)
    }

    pub fn per_cell_real(&self, t: f64) -> Result<f64> {
        let mut acc = 0.0;
        for &(p, c) in &self.components {
            acc += p * self.chi.laplace_real(t * c)?;
        }
        Ok(acc)
    }

    pub fn cumulative(&self, s: Complex64) -> Result<Complex64> {
        if self.cells == 0 {
            return Ok(Complex64::new(1.0, 0.0));
        }
        Ok(self.per_cell(s)?.powu(self.cells))
    }

    pub fn cumulative_real(&self, t: f64) -> Result<f64> {
        if self.cells == 0 {
            return Ok(1.0);
        }
        Ok(self.per_cell_real(t)?.powi(self.cells as i32))
    }

    /// Characteristic function `E[e^{j w Y}]` of the cumulative interference.
    pub fn cf(&self, w: f64) -> Result<Complex64> {
        self.cumulative(Complex64::new(0.0, -w))
    }

    pub fn per_cell_mean(&self) -> f64 {
        self.components.iter().map(|(p, c)| p * c).sum::<f64>() * self.chi.mean()
    }

    pub fn mean(&self) -> f64 {
        self.cells as f64 * self.per_cell_mean()
    }

    /// Per-cell transform at real `t` by direct integration of
    /// `e^{-t x} f_X(x)` over the mixture density.
    pub fn per_cell_by_quadrature(&self, t: f64) -> Result<f64> {
        let density = |x: f64| -> f64 { self.components.iter().map(|&(p, c)| p * self.chi.density(x / c) / c).sum() };
        let q = integrate_semi_infinite_scaled(
            |x: f64| (-t * x).exp() * density(x),
            self.per_cell_mean(),
            Tolerance::new(0.0, 1e-10),
        )?;
        Ok(q.value)
    }
}

pub fn cumulative_transform(
    pmf: &InterfererDistancePmf,
    chi: &ChannelModel,
    config: &NetworkConfig,
) -> Result<InterferenceTransform> {
    let components = segment_gains(pmf, config)
        .into_iter()
        .zip(&pmf.masses)
        .filter(|(_, &p)| p > 0.0)
        .map(|(c, &p)| (p, c))
        .collect();
    let kind = match chi {
        ChannelModel::Exponential { .. } => TransformKind::RayleighClosed,
        ChannelModel::Gamma { .. } => TransformKind::GammaClosed,
        ChannelModel::GeneralizedK { .. } => TransformKind::GkWhittaker,
    };
    Ok(InterferenceTransform { components, chi: *chi, cells: config.num_interferers, kind })
}

/// CDF of the cumulative interference at each point of `xs`.
pub fn transform_to_cdf(tr: &InterferenceTransform, xs: &[f64]) -> Result<Vec<f64>> {
    if tr.cells == 0 {
        return Ok(xs.iter().map(|&x| if x >= 0.0 { 1.0 } else { 0.0 }).collect());
    }
    let trunc = 8.0 / tr.mean();
    let cf = |w: f64| tr.cf(w).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    xs.iter().map(|&x| cf_to_cdf(cf, x, trunc, DEFAULT_REL_TOL)).collect()
}
