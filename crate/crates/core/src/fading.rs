//! Composite fading laws for the power gain of a link.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp, Gamma};

use crate::error::{Error, Result};
use crate::numerics::quadrature::{integrate_semi_infinite_scaled, Tolerance};
use crate::numerics::special::{bessel_k_scaled, confluent_u_scaled, gamma_p, gamma_q, ln_gamma};

/// Relative error above which the closed-form GK transform is replaced by
/// direct integration.
const GK_CLOSED_FORM_MAX_ERROR: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Rayleigh fading power, density `rate * e^{-rate x}`.
    Exponential { rate: f64 },
    /// Gamma law with `shape` (m_s) and `scale` (m_c).
    Gamma { shape: f64, scale: f64 },
    /// Product of a unit-mean Gamma(m_c) fading term and a Gamma(m_s)
    /// shadowing term with overall mean `omega`.
    GeneralizedK { m_c: f64, m_s: f64, omega: f64, b: f64 },
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ChannelModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive("rate", rate)?;
        Ok(ChannelModel::Exponential { rate })
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        check_positive("shape", shape)?;
        check_positive("scale", scale)?;
        Ok(ChannelModel::Gamma { shape, scale })
    }

    pub fn generalized_k(m_c: f64, m_s: f64, omega: f64) -> Result<Self> {
        check_positive("m_c", m_c)?;
        check_positive("m_s", m_s)?;
        check_positive("omega", omega)?;
        let b = 2.0 * (m_c * m_s / omega).sqrt();
        Ok(ChannelModel::GeneralizedK { m_c, m_s, omega, b })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            ChannelModel::Exponential { rate } => 1.0 / rate,
            ChannelModel::Gamma { shape, scale } => shape * scale,
            ChannelModel::GeneralizedK { omega, .. } => omega,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            ChannelModel::Exponential { rate } => 1.0 / (rate * rate),
            ChannelModel::Gamma { shape, scale } => shape * scale * scale,
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => {
                omega * omega * ((1.0 + 1.0 / m_c) * (1.0 + 1.0 / m_s) - 1.0)
            }
        }
    }

    /// Smallest shape parameter; governs how fast the transform decays
    /// along the imaginary axis.
    pub fn min_shape(&self) -> f64 {
        match *self {
            ChannelModel::Exponential { .. } => 1.0,
            ChannelModel::Gamma { shape, .. } => shape,
            ChannelModel::GeneralizedK { m_c, m_s, .. } => m_c.min(m_s),
        }
    }

    /// Density, validated: rejects `x <= 0`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("density needs x > 0, got {x}")));
        }
        Ok(self.density(x))
    }

    /// Density without argument validation; zero for `x <= 0`.
    pub fn density(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            ChannelModel::Exponential { rate } => rate * (-rate * x).exp(),
            ChannelModel::Gamma { shape, scale } => {
                let y = x / scale;
                ((shape - 1.0) * y.ln() - y - statrs::function::gamma::ln_gamma(shape)).exp() / scale
            }
            ChannelModel::GeneralizedK { m_c, m_s, b, .. } => gk_density(m_c, m_s, b, x),
        }
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 0.0;
        }
        match *self {
            ChannelModel::Exponential { rate } => -(-rate * x).exp_m1(),
            ChannelModel::Gamma { shape, scale } => gamma_p(shape, x / scale).unwrap_or(f64::NAN),
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => gk_cdf(m_c, m_s, omega, x, false),
        }
    }

    /// `P(X > x)`, accurate in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return 1.0;
        }
        match *self {
            ChannelModel::Exponential { rate } => (-rate * x).exp(),
            ChannelModel::Gamma { shape, scale } => gamma_q(shape, x / scale).unwrap_or(f64::NAN),
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => gk_cdf(m_c, m_s, omega, x, true),
        }
    }

    /// `ln P(X <= x)`, accurate both near zero and near one.
    pub fn ln_cdf(&self, x: f64) -> f64 {
        if !(x > 0.0) {
            return f64::NEG_INFINITY;
        }
        if let ChannelModel::Exponential { rate } = *self {
            return (-(-rate * x).exp_m1()).ln();
        }
        let f = self.cdf(x);
        if f > 0.5 {
            (-self.sf(x)).ln_1p()
        } else {
            f.ln()
        }
    }

    /// `x` with `P(X <= x) = p`, found by bisection in `ln x`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {p}")));
        }
        if p > 0.5 {
            self.solve_level(1.0 - p, true)
        } else {
            self.solve_level(p, false)
        }
    }

    /// `x` with `P(X > x) = q`; keeps precision for tiny `q`.
    pub fn upper_quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!("tail level must lie in (0, 1), got {q}")));
        }
        if q < 0.5 {
            self.solve_level(q, true)
        } else {
            self.solve_level(1.0 - q, false)
        }
    }

    fn solve_level(&self, target: f64, upper: bool) -> Result<f64> {
        // g(ln x) increases in x
        let g = |lx: f64| {
            let x = lx.exp();
            if upper {
                target - self.sf(x)
            } else {
                self.cdf(x) - target
            }
        };
        let m = self.mean().ln();
        let (mut lo, mut hi) = (m - 1.0, m + 1.0);
        while g(lo) > 0.0 {
            lo -= 2.0 * (hi - lo);
            if lo < -745.0 {
                return Ok(0.0);
            }
        }
        while g(hi) < 0.0 {
            hi += 2.0 * (hi - lo);
            if hi > 700.0 {
                return Err(Error::Overflow(format!("quantile at level {target} beyond f64 range")));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        Ok((0.5 * (lo + hi)).exp())
    }

    /// `E[e^{-s X}]` for complex `s` in the convergence strip.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        match *self {
            ChannelModel::Exponential { rate } => {
                if s.re <= -rate {
                    return Err(Error::domain(format!(
                        "Re(s) = {} outside the convergence strip Re(s) > {}",
                        s.re, -rate
                    )));
                }
                Ok(rate / (rate + s))
            }
            ChannelModel::Gamma { shape, scale } => {
                let base = 1.0 + scale * s;
                if base.re <= 0.0 {
                    return Err(Error::domain(format!(
                        "Re(s) = {} outside the convergence strip Re(s) > {}",
                        s.re,
                        -1.0 / scale
                    )));
                }
                Ok(base.powf(-shape))
            }
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => {
                if s.re < 0.0 {
                    return Err(Error::domain(format!("generalized-K transform needs Re(s) >= 0, got {}", s.re)));
                }
                if s.im == 0.0 {
                    return gk_laplace_real(m_c, m_s, omega, s.re).map(|v| Complex64::new(v, 0.0));
                }
                gk_laplace_conditional(m_c, m_s, omega, s)
            }
        }
    }

    /// Real-argument transform `E[e^{-t X}]`.
    pub fn laplace_real(&self, t: f64) -> Result<f64> {
        match *self {
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => {
                if t < 0.0 {
                    return Err(Error::domain(format!("generalized-K transform needs t >= 0, got {t}")));
                }
                gk_laplace_real(m_c, m_s, omega, t)
            }
            _ => self.laplace(Complex64::new(t, 0.0)).map(|v| v.re),
        }
    }

    /// Draws one gain.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }

    /// A reusable sampler holding the prepared distributions.
    pub fn sampler(&self) -> ChannelSampler {
        match *self {
            ChannelModel::Exponential { rate } => ChannelSampler::Exp(Exp::new(rate).expect("validated rate")),
            ChannelModel::Gamma { shape, scale } => {
                ChannelSampler::Gamma(Gamma::new(shape, scale).expect("validated parameters"))
            }
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => ChannelSampler::Product(
                Gamma::new(m_c, 1.0 / m_c).expect("validated parameters"),
                Gamma::new(m_s, omega / m_s).expect("validated parameters"),
            ),
        }
    }

    /// Gamma law with the same mean and variance as a generalized-K law.
    pub fn gamma_from_gk(&self) -> Result<ChannelModel> {
        match *self {
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => {
                let k = 1.0 / ((1.0 + 1.0 / m_c) * (1.0 + 1.0 / m_s) - 1.0);
                ChannelModel::gamma(k, omega / k)
            }
            _ => Err(Error::domain("moment matching applies to generalized-K laws only")),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum ChannelSampler {
    Exp(Exp<f64>),
    Gamma(Gamma<f64>),
    Product(Gamma<f64>, Gamma<f64>),
}

impl Distribution<f64> for ChannelSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ChannelSampler::Exp(d) => d.sample(rng),
            ChannelSampler::Gamma(d) => d.sample(rng),
            ChannelSampler::Product(a, b) => a.sample(rng) * b.sample(rng),
        }
    }
}

fn gk_density(m_c: f64, m_s: f64, b: f64, x: f64) -> f64 {
    let nu = m_s - m_c;
    let z = b * x.sqrt();
    let lg = statrs::function::gamma::ln_gamma(m_c) + statrs::function::gamma::ln_gamma(m_s);
    let ln_k = match bessel_k_scaled(nu, z) {
        Ok(k) => k.ln() - z,
        // small-argument asymptote
        Err(_) => statrs::function::gamma::ln_gamma(nu.abs()) - std::f64::consts::LN_2 - nu.abs() * (0.5 * z).ln(),
    };
    let ln_f = std::f64::consts::LN_2 + (m_c + m_s) * (0.5 * b).ln() + (0.5 * (m_c + m_s) - 1.0) * x.ln() + ln_k - lg;
    ln_f.exp()
}

/// `E_B[(1 + s omega B / m_c)^{-m_c}]` with `B ~ Gamma(m_s, 1/m_s)`.
fn gk_laplace_conditional(m_c: f64, m_s: f64, omega: f64, s: Complex64) -> Result<Complex64> {
    let c = s * (omega / (m_c * m_s));
    let tol = Tolerance::new(1e-14, 1e-10);
    let q = if m_s < 1.0 {
        let inv = 1.0 / m_s;
        let norm = (-ln_gamma(m_s + 1.0)?).exp();
        integrate_semi_infinite_scaled(
            |y: f64| {
                let w = y.powf(inv);
                (1.0 + c * w).powf(-m_c) * ((-w).exp() * norm)
            },
            1.0,
            tol,
        )?
    } else {
        let lg = ln_gamma(m_s)?;
        integrate_semi_infinite_scaled(
            |w: f64| {
                if w == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                (1.0 + c * w).powf(-m_c) * ((m_s - 1.0) * w.ln() - w - lg).exp()
            },
            m_s,
            tol,
        )?
    };
    Ok(q.value)
}

/// Real-axis GK transform `z^{m_c} U(m_c, 1 + m_c - m_s, z)` with
/// `z = m_c m_s / (omega t)`, i.e. the Whittaker form
/// `z^{(m_s+m_c-1)/2} e^{z/2} W_{(1-m_c-m_s)/2, (m_c-m_s)/2}(z)` with its
/// exponential factors cancelled.
fn gk_laplace_real(m_c: f64, m_s: f64, omega: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let z = m_c * m_s / (omega * t);
    match confluent_u_scaled(m_c, 1.0 + m_c - m_s, z) {
        Ok(e) if e.rel_error <= GK_CLOSED_FORM_MAX_ERROR => Ok(e.value),
        _ => gk_laplace_conditional(m_c, m_s, omega, Complex64::new(t, 0.0)).map(|v| v.re),
    }
}

/// GK CDF (or survival) by conditioning on the shadowing term:
/// `P(X <= x) = E_B[P(m_c, m_c x / (omega B))]`.
fn gk_cdf(m_c: f64, m_s: f64, omega: f64, x: f64, upper: bool) -> f64 {
    let inner = |w: f64| {
        // B = w / m_s
        let arg = m_c * m_s * x / (omega * w);
        if upper {
            gamma_q(m_c, arg).unwrap_or(f64::NAN)
        } else {
            gamma_p(m_c, arg).unwrap_or(f64::NAN)
        }
    };
    let tol = Tolerance::new(1e-15, 1e-10);
    let q = if m_s < 1.0 {
        let inv = 1.0 / m_s;
        let norm = (-statrs::function::gamma::ln_gamma(m_s + 1.0)).exp();
        integrate_semi_infinite_scaled(
            |y: f64| {
                let w = y.powf(inv);
                if w == 0.0 {
                    return if upper { 0.0 } else { norm };
                }
                inner(w) * (-w).exp() * norm
            },
            1.0,
            tol,
        )
    } else {
        let lg = statrs::function::gamma::ln_gamma(m_s);
        integrate_semi_infinite_scaled(
            |w: f64| {
                if w == 0.0 {
                    return 0.0;
                }
                inner(w) * ((m_s - 1.0) * w.ln() - w - lg).exp()
            },
            m_s,
            tol,
        )
    };
    q.map(|q| q.value.clamp(0.0, 1.0)).unwrap_or(f64::NAN)
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ChannelModel::Exponential { rate } => write!(f, "exp({rate})"),
            ChannelModel::Gamma { shape, scale } => write!(f, "gamma({shape},{scale})"),
            ChannelModel::GeneralizedK { m_c, m_s, omega, .. } => {
                write!(f, "gk({m_c},{m_s},{omega})")
            }
        }
    }
}

impl FromStr for ChannelModel {
    type Err = Error;

    /// Parses `exp(rate)`, `gamma(shape,scale)` or `gk(m_c,m_s,omega)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse { key: "fading".into(), message: msg };
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| bad(format!("expected name(args), got `{s}`")))?;
        if !s.ends_with(')') {
            return Err(bad(format!("missing closing parenthesis in `{s}`")));
        }
        let name = s[..open].trim().to_ascii_lowercase();
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| a.trim().parse::<f64>().map_err(|e| bad(format!("`{}`: {e}", a.trim()))))
            .collect::<Result<_>>()?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(bad(format!("`{name}` takes {n} arguments, got {}", args.len())))
            }
        };
        match name.as_str() {
            "exp" | "exponential" | "rayleigh" => {
                arity(1)?;
                ChannelModel::exponential(args[0])
            }
            "gamma" => {
                arity(2)?;
                ChannelModel::gamma(args[0], args[1])
            }
            "gk" | "generalized_k" => {
                arity(3)?;
                ChannelModel::generalized_k(args[0], args[1], args[2])
            }
            _ => Err(bad(format!("unknown fading law `{name}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::integrate_semi_infinite;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn default_gamma() -> ChannelModel {
        ChannelModel::gamma(1.5, 2.0 / 3.0).unwrap()
    }

    fn gk() -> ChannelModel {
        ChannelModel::generalized_k(2.0, 1.5, 3.0).unwrap()
    }

    #[test]
    fn densities() {
        let e = ChannelModel::exponential(1.0).unwrap();
        assert!((e.pdf(1e-12).unwrap() - 1.0).abs() < 1e-11);
        assert!(rel(default_gamma().pdf(1.0).unwrap(), 0.462_540_989_411_307_83) < 1e-12);
        assert!(e.pdf(0.0).is_err());
        let total = integrate_semi_infinite(|x| gk().density(x), 1e-10).unwrap();
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cdfs() {
        let e = ChannelModel::exponential(1.0).unwrap();
        assert_eq!(e.cdf(0.0), 0.0);
        assert_eq!(default_gamma().cdf(0.0), 0.0);
        assert_eq!(gk().cdf(0.0), 0.0);
        assert!(rel(e.cdf(1.0), 1.0 - (-1.0f64).exp()) < 1e-14);
        assert!(rel(default_gamma().cdf(1.0), 0.608_374_823_728_910_9) < 1e-12);
        assert!(rel(gk().cdf(2.0), 0.537_294_970_385_979_3) < 1e-8);
        assert!((gk().cdf(2.0) + gk().sf(2.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn transforms() {
        let e = ChannelModel::exponential(1.0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(e.laplace(Complex64::new(0.0, 0.0)).unwrap(), one);
        assert!((e.laplace(one).unwrap().re - 0.5).abs() < 1e-15);
        let g = default_gamma().laplace_real(1.5).unwrap();
        assert!(rel(g, 2f64.powf(-1.5)) < 1e-14);
        for (s, want) in
            [(0.1, 0.778_188_715_358_112_3), (0.7, 0.349_425_616_735_536_9), (5.0, 0.062_886_443_437_920_35)]
        {
            assert!(rel(gk().laplace_real(s).unwrap(), want) < 1e-8, "s = {s}");
            let c = gk().laplace(Complex64::new(s, 1e-300)).unwrap();
            assert!(rel(c.re, want) < 1e-8, "conditional form at s = {s}");
        }
        assert!(e.laplace(Complex64::new(-2.0, 0.0)).is_err());
        assert!(gk().laplace(Complex64::new(-0.1, 1.0)).is_err());
    }

    #[test]
    fn gk_transform_matches_direct_integration() {
        let m = gk();
        for s in [0.05, 0.3, 1.0, 4.0] {
            let direct = integrate_semi_infinite(|x| (-s * x).exp() * m.density(x), 1e-11).unwrap();
            assert!(rel(m.laplace_real(s).unwrap(), direct) < 1e-7);
        }
    }

    #[test]
    fn moment_matching() {
        let g = gk().gamma_from_gk().unwrap();
        assert!(rel(g.mean(), 3.0) < 1e-14);
        assert!(rel(g.variance(), gk().variance()) < 1e-12);
        let expected_var = 9.0 * ((1.5) * (1.0 + 1.0 / 1.5) - 1.0);
        assert!(rel(gk().variance(), expected_var) < 1e-14);
        assert!(default_gamma().gamma_from_gk().is_err());
    }

    #[test]
    fn sampling_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        for (m, tol) in [(ChannelModel::exponential(1.0).unwrap(), 0.005), (default_gamma(), 0.005), (gk(), 0.01)] {
            let s = m.sampler();
            let mean: f64 = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
            assert!(rel(mean, m.mean()) < tol, "{m}: {mean}");
        }
    }

    #[test]
    fn gk_sample_moments_match_gamma_fit() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = gk().sampler();
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| s.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let fit = gk().gamma_from_gk().unwrap();
        assert!(rel(mean, fit.mean()) < 0.01);
        assert!(rel(var, fit.variance()) < 0.03);
    }

    #[test]
    fn parse_and_display() {
        let m: ChannelModel = "gamma(1.5,0.6667)".parse().unwrap();
        assert_eq!(m, ChannelModel::gamma(1.5, 0.6667).unwrap());
        assert_eq!(m.to_string().parse::<ChannelModel>().unwrap(), m);
        assert_eq!("exp(1)".parse::<ChannelModel>().unwrap().mean(), 1.0);
        assert!(matches!(gk().to_string().parse::<ChannelModel>().unwrap(), ChannelModel::GeneralizedK { .. }));
        assert!("gamma(1)".parse::<ChannelModel>().is_err());
        assert!("weibull(1,2)".parse::<ChannelModel>().is_err());
        assert!("gamma(1,x)".parse::<ChannelModel>().is_err());
        assert!("gamma(-1,1)".parse::<ChannelModel>().is_err());
    }

    #[test]
    fn quantiles_invert_cdf() {
        for m in [ChannelModel::exponential(2.0).unwrap(), default_gamma(), gk()] {
            for p in [1e-9, 0.2, 0.5, 0.9, 1.0 - 1e-9] {
                let x = m.quantile(p).unwrap();
                let back = if p > 0.5 { 1.0 - m.sf(x) } else { m.cdf(x) };
                assert!((back - p).abs() < 1e-9 * p.max(1e-3) + 1e-12, "{m} p={p}");
            }
        }
    }

    fn models() -> impl Strategy<Value = ChannelModel> {
        prop_oneof![
            (0.2f64..5.0).prop_map(|r| ChannelModel::exponential(r).unwrap()),
            (0.3f64..5.0, 0.2f64..3.0).prop_map(|(a, b)| ChannelModel::gamma(a, b).unwrap()),
            (0.6f64..4.0, 0.6f64..4.0, 0.5f64..4.0).prop_map(|(a, b, c)| ChannelModel::generalized_k(a, b, c).unwrap()),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn transform_bounded_on_right_half_plane(m in models(), re in 0.0f64..5.0, im in -20.0f64..20.0) {
            let v = m.laplace(Complex64::new(re, im)).unwrap();
            prop_assert!(v.norm() <= 1.0 + 1e-9);
        }

        #[test]
        fn transform_slope_is_minus_mean(m in models()) {
            let h = 1e-6 / m.mean();
            let d = (m.laplace_real(h).unwrap() - 1.0) / h;
            prop_assert!(rel(-d, m.mean()) < 1e-4);
        }

        #[test]
        fn cdf_monotone_and_complete(m in models()) {
            let mut prev = 0.0;
            for i in 1..40 {
                let f = m.cdf(m.mean() * i as f64 / 10.0);
                prop_assert!(f >= prev - 1e-12);
                prev = f;
            }
            prop_assert!(m.cdf(50.0 * m.mean()) >= 0.999);
        }

        #[test]
        fn cdf_derivative_is_density(m in models(), u in 0.1f64..3.0) {
            let x = u * m.mean();
            let h = 1e-5 * x;
            let d = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
            prop_assert!(rel(d, m.density(x)) < 1e-3);
        }
    }
}
