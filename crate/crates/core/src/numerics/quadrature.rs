//! Adaptive Gauss-Kronrod integration and fixed Gauss rules.
//!
//! The adaptive driver bisects the interval with the largest error
//! estimate until the total error meets `max(abs, rel * |I|)` or the
//! interval budget runs out. Semi-infinite ranges are mapped onto (0, 1)
//! with `x = s * t / (1 - t)`, where `s` is a caller-supplied scale.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::special::ln_gamma;
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_059,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights for the odd-indexed Kronrod abscissas.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Default cap on the number of subintervals.
pub const DEFAULT_INTERVAL_LIMIT: usize = 4000;

/// Values the adaptive integrator can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel }
    }

    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

impl<T: QuadValue> Quadrature<T> {
    fn into_result(self, what: &'static str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence { what, estimate: self.value.magnitude(), error: self.error })
        }
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel with its embedded 10-point Gauss estimate.
fn kronrod21<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = T::zero();
    let mut abs_sum = fc.magnitude() * WGK[10];
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !err.is_finite() {
        err = f64::INFINITY;
    }
    (value, err)
}

/// Adaptive integration over a finite interval, returning the estimate even
/// when the tolerance was not met.
pub fn adaptive<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance, limit: usize) -> Quadrature<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if a == b {
        return Quadrature { value: T::zero(), error: 0.0, intervals: 0, converged: true };
    }
    let (value, error) = kronrod21(&mut f, a, b);
    let mut total = value;
    let mut total_err = error;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let target = |t: T| tol.abs.max(tol.rel * t.magnitude());
    while total_err > target(total) && heap.len() < limit {
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // interval is at machine resolution
            heap.push(worst);
            break;
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // re-sum to shed the drift of the running updates
    let mut value = T::zero();
    let mut error = 0.0;
    let intervals = heap.len();
    for s in heap.into_iter() {
        value = value + s.value;
        error += s.error;
    }
    let converged = error <= target(value) && error.is_finite();
    Quadrature { value, error, intervals, converged }
}

/// Integrates `f` over `[a, b]`; fails if the tolerance is not reached.
pub fn integrate<T, F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Quadrature<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    adaptive(f, a, b, tol, DEFAULT_INTERVAL_LIMIT).into_result("adaptive quadrature")
}

/// Integrates `f` over `(0, inf)` to relative tolerance `rel_tol`.
pub fn integrate_semi_infinite<F>(f: F, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_semi_infinite_scaled(f, 1.0, Tolerance::relative(rel_tol)).map(|q| q.value)
}

/// Semi-infinite integration with the mapping `x = scale * t / (1 - t)`.
///
/// `scale` should sit near the bulk of the integrand; the mapping is
/// otherwise scale-agnostic.
pub fn integrate_semi_infinite_scaled<T, F>(mut f: F, scale: f64, tol: Tolerance) -> Result<Quadrature<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::domain(format!("integration scale must be positive, got {scale}")));
    }
    if !(1e-14..=1e-1).contains(&tol.rel) && tol.abs <= 0.0 {
        return Err(Error::domain(format!("relative tolerance {} out of range", tol.rel)));
    }
    let mapped = |t: f64| {
        let one_minus = 1.0 - t;
        let x = scale * t / one_minus;
        let jac = scale / (one_minus * one_minus);
        let v = f(x);
        if v.magnitude() == 0.0 {
            T::zero()
        } else {
            v * jac
        }
    };
    adaptive(mapped, 0.0, 1.0, tol, DEFAULT_INTERVAL_LIMIT).into_result("semi-infinite quadrature")
}

/// Fixed rule for `int_0^inf e^{-x} g(x) dx ~ sum w_i g(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn apply<F: FnMut(f64) -> f64>(&self, mut g: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * g(x)).sum()
    }
}

pub const MAX_LAGUERRE_ORDER: usize = 64;

/// Gauss-Laguerre nodes and weights for the weight function `e^{-x}`.
pub fn gauss_laguerre(order: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_LAGUERRE_ORDER).contains(&order) {
        return Err(Error::domain(format!("Gauss-Laguerre order must be in 1..={MAX_LAGUERRE_ORDER}, got {order}")));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut z = 0.0_f64;
    for i in 0..n {
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
            }
        };
        let mut converged = false;
        let (mut p2, mut pp) = (0.0, 0.0);
        for _ in 0..100 {
            let mut p1 = 1.0;
            p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0 - z) * p2 - jf * p3) / (jf + 1.0);
            }
            pp = (nf * p1 - nf * p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 3e-14 * z.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "Gauss-Laguerre node search", estimate: z, error: f64::NAN });
        }
        nodes[i] = z;
        weights[i] = -1.0 / (pp * nf * p2);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::domain("Gauss-Legendre order must be positive"));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok((nodes, weights))
}

/// Composite Gauss-Legendre rule on a logarithmic axis: for `x` in
/// `[lo, hi]`, `int g(x) dx ~ sum_j wx[j] g(x[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGrid {
    pub x: Vec<f64>,
    pub wx: Vec<f64>,
}

impl LogGrid {
    /// Panels of width at most `panel` in `ln x`, `order` nodes each.
    pub fn new(lo: f64, hi: f64, panel: f64, order: usize) -> Result<Self> {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::domain(format!("log grid needs 0 < lo < hi, got [{lo}, {hi}]")));
        }
        let (gx, gw) = gauss_legendre(order)?;
        let (a, b) = (lo.ln(), hi.ln());
        let panels = ((b - a) / panel).ceil().max(1.0) as usize;
        let h = (b - a) / panels as f64;
        let mut x = Vec::with_capacity(panels * order);
        let mut wx = Vec::with_capacity(panels * order);
        for p in 0..panels {
            let left = a + p as f64 * h;
            for (t, w) in gx.iter().zip(&gw) {
                let v = left + 0.5 * h * (t + 1.0);
                let xv = v.exp();
                x.push(xv);
                wx.push(0.5 * h * w * xv);
            }
        }
        Ok(LogGrid { x, wx })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// `ln Gamma(n + a) - ln Gamma(n)`; kept here for generalized rules.
#[allow(dead_code)]
fn ln_gamma_ratio(n: f64, a: f64) -> Result<f64> {
    Ok(ln_gamma(n + a)? - ln_gamma(n)?)
}
