//! Experiment presets and their result files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use super::config::RunConfig;
use super::output::{write_json, write_rows, CurveRow, TableRow};
use crate::analysis::Scenario;
use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::interference::transform_to_cdf;
use crate::metrics::{fairness_from_masses, slot_averaged_metric};
use crate::montecarlo::{
    ks_on_points, run_trials, sample_quantiles, Arm, ArmReport, SimulationOptions, SimulationReport,
};
use crate::scheduling::{total_variation, LocationPmf, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Custom,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
            Preset::Fig6 => "fig6",
            Preset::Fig7 => "fig7",
            Preset::Custom => "custom",
        };
        f.write_str(name)
    }
}

/// A scheduler as requested on the command line. Location round robin
/// without a slot means the average over a full sweep of the rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub scheme: Scheme,
    pub slot: Option<usize>,
}

impl Selection {
    pub const fn new(scheme: Scheme, slot: Option<usize>) -> Self {
        Selection { scheme, slot }
    }

    pub fn label(&self) -> String {
        match self.slot {
            Some(w) => format!("{}_w{w}", self.scheme),
            None => self.scheme.to_string(),
        }
    }

    fn arms(&self, rings: usize) -> Vec<Arm> {
        match (self.scheme, self.slot) {
            (Scheme::LocationRoundRobin, None) => {
                (1..=rings).map(|w| Arm { scheme: self.scheme, slot: Some(w) }).collect()
            }
            (s, slot) => vec![Arm { scheme: s, slot }],
        }
    }

    fn is_average(&self) -> bool {
        self.scheme == Scheme::LocationRoundRobin && self.slot.is_none()
    }
}

impl FromStr for Selection {
    type Err = Error;

    /// `name` or `name:slot`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, slot) = match s.split_once(':') {
            Some((n, w)) => {
                let w: usize = w
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse { key: "schemes".into(), message: format!("bad slot in `{s}`") })?;
                (n, Some(w))
            }
            None => (s, None),
        };
        let scheme: Scheme = name.trim().parse()?;
        match (scheme.is_slot_based(), slot) {
            (false, Some(_)) | (true, Some(0)) => {
                Err(Error::Parse { key: "schemes".into(), message: format!("`{s}` takes no slot or a zero slot") })
            }
            _ => Ok(Selection { scheme, slot }),
        }
    }
}

/// Expands bare greedy round robin into the configured slots.
fn expand(selections: &[Selection], cfg: &RunConfig) -> Vec<Selection> {
    let mut out = Vec::new();
    for s in selections {
        if s.scheme == Scheme::GreedyRoundRobin && s.slot.is_none() {
            out.extend(cfg.grr_slots.iter().map(|&w| Selection::new(Scheme::GreedyRoundRobin, Some(w))));
        } else {
            out.push(*s);
        }
    }
    out
}

const OPPORTUNISTIC: [Selection; 3] = [
    Selection::new(Scheme::Greedy, None),
    Selection::new(Scheme::ProportionalFair, None),
    Selection::new(Scheme::RoundRobin, None),
];

const EVERY: [Selection; 5] = [
    Selection::new(Scheme::Greedy, None),
    Selection::new(Scheme::ProportionalFair, None),
    Selection::new(Scheme::RoundRobin, None),
    Selection::new(Scheme::LocationRoundRobin, None),
    Selection::new(Scheme::GreedyRoundRobin, None),
];

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub config: RunConfig,
    pub out: PathBuf,
    pub analytic: bool,
    pub simulation: bool,
    pub workers: Option<usize>,
    pub schemes: Option<Vec<Selection>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub preset: Preset,
    pub seed: u64,
    pub trials: u64,
    pub analytic: bool,
    pub simulation: bool,
    pub config: RunConfig,
    pub files: Vec<String>,
    pub summary: Vec<TableRow>,
}

#[derive(Serialize)]
struct RunMeta {
    started_unix: f64,
    finished_unix: f64,
    elapsed_seconds: f64,
    workers: Option<usize>,
    version: &'static str,
}

struct Run<'a> {
    spec: &'a ExperimentSpec,
    files: Vec<String>,
    summary: Vec<TableRow>,
}

impl Run<'_> {
    fn cfg(&self) -> &RunConfig {
        &self.spec.config
    }

    fn emit<T: Serialize>(&mut self, name: String, rows: &[T]) -> Result<()> {
        write_rows(&self.spec.out.join(&name), self.cfg(), rows)?;
        self.files.push(name);
        Ok(())
    }

    fn note(&mut self, param: impl Into<String>, scheme: impl Into<String>, value: f64) {
        self.summary.push(TableRow::new(param, scheme, value));
    }

    fn selections(&self, default: &[Selection]) -> Vec<Selection> {
        expand(self.spec.schemes.as_deref().unwrap_or(default), self.cfg())
    }

    fn scenario(&self, cfg: &RunConfig) -> Result<Scenario> {
        Scenario::new(cfg.network()?, cfg.kappa_db, cfg.zeta, cfg.chi, cfg.angular_bins, cfg.segments)
    }

    fn simulate(
        &self,
        sc: &Scenario,
        cfg: &RunConfig,
        sels: &[Selection],
        keep: bool,
    ) -> Result<Option<SimulationReport>> {
        if !self.spec.simulation {
            return Ok(None);
        }
        let mut arms: Vec<Arm> = sels.iter().flat_map(|s| s.arms(sc.grid.len())).collect();
        arms.sort();
        arms.dedup();
        let opts = SimulationOptions {
            thresholds: cfg.thresholds(),
            segments: sc.segments.clone(),
            keep_samples: keep,
            workers: self.spec.workers,
        };
        run_trials(&sc.config, &sc.grid, &arms, &sc.chi, &sc.zeta, cfg.trials, cfg.seed, &opts).map(Some)
    }
}

fn arm_reports<'r>(rep: &'r SimulationReport, sel: &Selection, rings: usize) -> Result<Vec<&'r ArmReport>> {
    sel.arms(rings)
        .into_iter()
        .map(|a| rep.arm(a).ok_or_else(|| Error::domain(format!("{} was not simulated", a.label()))))
        .collect()
}

/// Serving-ring PMF, averaged over the sweep for location round robin.
fn analytic_pmf(sc: &Scenario, sel: &Selection) -> Result<LocationPmf> {
    let pmfs = sel.arms(sc.grid.len()).into_iter().map(|a| sc.location_pmf(a)).collect::<Result<Vec<_>>>()?;
    LocationPmf::average(&pmfs)
}

fn empirical_pmf(rep: &SimulationReport, sel: &Selection, rings: usize) -> Result<LocationPmf> {
    let pmfs = arm_reports(rep, sel, rings)?.into_iter().map(|a| a.location_pmf()).collect::<Result<Vec<_>>>()?;
    LocationPmf::average(&pmfs)
}

fn average_vectors(rows: Vec<Vec<f64>>) -> Vec<f64> {
    let n = rows.len() as f64;
    let mut out = vec![0.0; rows.first().map_or(0, Vec::len)];
    for r in rows {
        for (o, v) in out.iter_mut().zip(r) {
            *o += v / n;
        }
    }
    out
}

struct Metrics {
    capacity: f64,
    fairness: f64,
    outage: Vec<f64>,
}

fn analytic_metrics(sc: &Scenario, sel: &Selection, thresholds: &[f64]) -> Result<Metrics> {
    let arms = sel.arms(sc.grid.len());
    let capacity = slot_averaged_metric(&arms.iter().map(|&a| Ok(sc.capacity(a)?.bits)).collect::<Result<Vec<_>>>()?)?;
    let outage = average_vectors(arms.iter().map(|&a| sc.outage(a, thresholds)).collect::<Result<Vec<_>>>()?);
    let fairness = fairness_from_masses(&analytic_pmf(sc, sel)?.probabilities, &sc.grid.users)?.value;
    Ok(Metrics { capacity, fairness, outage })
}

fn empirical_metrics(rep: &SimulationReport, sc: &Scenario, sel: &Selection) -> Result<Metrics> {
    let reports = arm_reports(rep, sel, sc.grid.len())?;
    let capacity = slot_averaged_metric(&reports.iter().map(|a| a.mean_capacity()).collect::<Vec<_>>())?;
    let outage = average_vectors(reports.iter().map(|a| a.outage_rates()).collect());
    let pmf = empirical_pmf(rep, sel, sc.grid.len())?;
    let fairness = fairness_from_masses(&pmf.probabilities, &sc.grid.users)?.value;
    Ok(Metrics { capacity, fairness, outage })
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

fn fig2(run: &mut Run) -> Result<()> {
    let cfg = run.cfg().clone();
    let sc = run.scenario(&cfg)?;
    let sels = run.selections(&OPPORTUNISTIC);
    let rep = run.simulate(&sc, &cfg, &sels, false)?;
    for sel in &sels {
        let a = if run.spec.analytic { Some(analytic_pmf(&sc, sel)?) } else { None };
        let e = match &rep {
            Some(r) => Some(empirical_pmf(r, sel, sc.grid.len())?),
            None => None,
        };
        let rows: Vec<CurveRow> = (0..sc.grid.len())
            .map(|k| {
                CurveRow::new(
                    sc.grid.radii[k],
                    a.as_ref().map(|p| p.probabilities[k]),
                    e.as_ref().map(|p| p.probabilities[k]),
                )
            })
            .collect();
        run.emit(format!("fig2_location_{}.csv", sel.label()), &rows)?;
        if let (Some(a), Some(e)) = (&a, &e) {
            run.note("tv_location", sel.label(), total_variation(&a.probabilities, &e.probabilities));
        }
    }
    Ok(())
}

fn fig3(run: &mut Run) -> Result<()> {
    let cfg = run.cfg().clone();
    let sc = run.scenario(&cfg)?;
    let sels: Vec<Selection> = run.selections(&OPPORTUNISTIC);
    if sels.iter().any(Selection::is_average) {
        return Err(Error::domain("interferer distances need a single location round robin slot"));
    }
    let rep = run.simulate(&sc, &cfg, &sels, false)?;
    let quarter = sc.segments.count().div_ceil(4);
    for sel in &sels {
        let arm = sel.arms(sc.grid.len())[0];
        let a = if run.spec.analytic { Some(sc.interferer_pmf(arm)?.masses) } else { None };
        let e = match &rep {
            Some(r) => Some(arm_reports(r, sel, sc.grid.len())?[0].interferer_pmf(&sc.segments)?.masses),
            None => None,
        };
        let rows: Vec<CurveRow> = sc
            .segments
            .centers
            .iter()
            .enumerate()
            .map(|(m, &x)| CurveRow::new(x, a.as_ref().map(|p| p[m]), e.as_ref().map(|p| p[m])))
            .collect();
        run.emit(format!("fig3_interferer_{}.csv", sel.label()), &rows)?;
        if let Some(p) = a.as_ref().or(e.as_ref()) {
            run.note("near_quartile_mass", sel.label(), p[..quarter].iter().sum());
        }
        if let (Some(a), Some(e)) = (&a, &e) {
            run.note("tv_interferer", sel.label(), total_variation(a, e));
        }
    }
    Ok(())
}

fn fig4(run: &mut Run) -> Result<()> {
    let sels = run.selections(&[Selection::new(Scheme::Greedy, None)]);
    if sels.iter().any(Selection::is_average) {
        return Err(Error::domain("interference CDFs need a single location round robin slot"));
    }
    let base = run.cfg().clone();
    let probs: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    for &l in &base.interferer_sweep {
        for &beta in &base.beta_sweep {
            let mut cfg = base.clone();
            cfg.interferers = l;
            cfg.beta = beta;
            let sc = run.scenario(&cfg)?;
            let rep = run.simulate(&sc, &cfg, &sels, true)?;
            for sel in &sels {
                let arm = sel.arms(sc.grid.len())[0];
                let tr = sc.transform(arm)?;
                let samples = match &rep {
                    Some(r) => Some(&arm_reports(r, sel, sc.grid.len())?[0].ici),
                    None => None,
                };
                let xs = match samples {
                    Some(s) => sample_quantiles(s, &probs),
                    None => (1..=100).map(|i| tr.mean() * i as f64 / 25.0).collect(),
                };
                let a = if run.spec.analytic { Some(transform_to_cdf(&tr, &xs)?) } else { None };
                let e = match samples {
                    Some(s) => Some(crate::montecarlo::empirical_cdf(s, &xs)?),
                    None => None,
                };
                let rows: Vec<CurveRow> = xs
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| CurveRow::new(x, a.as_ref().map(|v| v[i]), e.as_ref().map(|v| v[i])))
                    .collect();
                let tag = format!("L={l};beta={}", fmt_num(beta));
                run.emit(format!("fig4_cdf_{}_L{l}_beta{}.csv", sel.label(), fmt_num(beta)), &rows)?;
                if run.spec.analytic {
                    run.note(format!("mean_ici:{tag}"), sel.label(), tr.mean());
                }
                if let (Some(a), Some(s)) = (&a, samples) {
                    run.note(format!("ks_ici:{tag}"), sel.label(), ks_on_points(s, &xs, a)?);
                }
            }
        }
    }
    Ok(())
}

fn capacity_tables(run: &mut Run, name: &str, points: Vec<(String, RunConfig)>, sels: &[Selection]) -> Result<()> {
    let mut analytic = Vec::new();
    let mut empirical = Vec::new();
    for (param, cfg) in points {
        let sc = run.scenario(&cfg)?;
        let rep = run.simulate(&sc, &cfg, sels, false)?;
        for sel in sels {
            let a = if run.spec.analytic { Some(analytic_metrics(&sc, sel, &[])?.capacity) } else { None };
            let e = match &rep {
                Some(r) => Some(empirical_metrics(r, &sc, sel)?.capacity),
                None => None,
            };
            if let Some(a) = a {
                analytic.push(TableRow::new(param.clone(), sel.label(), a));
            }
            if let Some(e) = e {
                empirical.push(TableRow::new(param.clone(), sel.label(), e));
            }
            if let (Some(a), Some(e)) = (a, e) {
                run.note(format!("capacity_rel_err:{param}"), sel.label(), (a - e) / e);
            }
        }
    }
    if run.spec.analytic {
        run.emit(format!("{name}_capacity_analytic.csv"), &analytic)?;
    }
    if run.spec.simulation {
        run.emit(format!("{name}_capacity_empirical.csv"), &empirical)?;
    }
    Ok(())
}

fn fig5(run: &mut Run) -> Result<()> {
    let base = run.cfg().clone();
    let users = base.user_sweep.clone().unwrap_or_else(|| vec![10, 50, 100]);
    let points = users
        .iter()
        .map(|&u| {
            let mut c = base.clone();
            c.users = u;
            (format!("U={u}"), c)
        })
        .collect();
    let sels = run.selections(&EVERY);
    capacity_tables(run, "fig5", points, &sels)
}

fn fig6(run: &mut Run) -> Result<()> {
    let base = run.cfg().clone();
    let users = base.user_sweep.clone().unwrap_or_else(|| vec![50, 100]);
    let outage_sels = run.selections(&OPPORTUNISTIC);
    let fair_sels = run.selections(&EVERY);
    let mut all = outage_sels.clone();
    all.extend(fair_sels.iter().filter(|s| !outage_sels.contains(s)));
    let mut fair_a = Vec::new();
    let mut fair_e = Vec::new();
    for &u in &users {
        let mut cfg = base.clone();
        cfg.users = u;
        let sc = run.scenario(&cfg)?;
        let rep = run.simulate(&sc, &cfg, &all, false)?;
        let qs = cfg.thresholds();
        for sel in &all {
            let a = if run.spec.analytic {
                let want_outage = outage_sels.contains(sel);
                Some(analytic_metrics(&sc, sel, if want_outage { &qs } else { &[] })?)
            } else {
                None
            };
            let e = match &rep {
                Some(r) => Some(empirical_metrics(r, &sc, sel)?),
                None => None,
            };
            if fair_sels.contains(sel) {
                if let Some(a) = &a {
                    fair_a.push(TableRow::new(format!("U={u}"), sel.label(), a.fairness));
                }
                if let Some(e) = &e {
                    fair_e.push(TableRow::new(format!("U={u}"), sel.label(), e.fairness));
                }
            }
            if outage_sels.contains(sel) {
                let rows: Vec<CurveRow> = cfg
                    .q_db
                    .iter()
                    .enumerate()
                    .map(|(i, &q)| CurveRow::new(q, a.as_ref().map(|m| m.outage[i]), e.as_ref().map(|m| m.outage[i])))
                    .collect();
                if let Some(worst) = rows.iter().filter_map(|r| r.abs_err).reduce(f64::max) {
                    run.note(format!("outage_max_abs_err:U={u}"), sel.label(), worst);
                }
                run.emit(format!("fig6_outage_{}_U{u}.csv", sel.label()), &rows)?;
            }
        }
    }
    if run.spec.analytic {
        run.emit("fig6_fairness_analytic.csv".into(), &fair_a)?;
    }
    if run.spec.simulation {
        run.emit("fig6_fairness_empirical.csv".into(), &fair_e)?;
    }
    Ok(())
}

fn fig7(run: &mut Run) -> Result<()> {
    let base = run.cfg().clone();
    let mut points = Vec::new();
    for &omega in &base.omegas {
        for &m_s in &base.interference_shapes {
            let mut c = base.clone();
            c.chi = ChannelModel::gamma(m_s, omega / m_s)?;
            points.push((format!("omega={};m_s={}", fmt_num(omega), fmt_num(m_s)), c));
        }
    }
    let sels = run.selections(&EVERY);
    capacity_tables(run, "fig7", points, &sels)
}

fn custom(run: &mut Run) -> Result<()> {
    let cfg = run.cfg().clone();
    let sc = run.scenario(&cfg)?;
    let sels = run.selections(&EVERY);
    let rep = run.simulate(&sc, &cfg, &sels, false)?;
    let qs = cfg.thresholds();
    let mut analytic = Vec::new();
    let mut empirical = Vec::new();
    for sel in &sels {
        let rows = |m: &Metrics| {
            let mut rows = vec![
                TableRow::new("capacity", sel.label(), m.capacity),
                TableRow::new("fairness", sel.label(), m.fairness),
            ];
            for (q, p) in cfg.q_db.iter().zip(&m.outage) {
                rows.push(TableRow::new(format!("outage:q_db={}", fmt_num(*q)), sel.label(), *p));
            }
            rows
        };
        if run.spec.analytic {
            analytic.extend(rows(&analytic_metrics(&sc, sel, &qs)?));
        }
        if let Some(r) = &rep {
            empirical.extend(rows(&empirical_metrics(r, &sc, sel)?));
        }
    }
    if run.spec.analytic {
        run.emit("custom_metrics_analytic.csv".into(), &analytic)?;
    }
    if run.spec.simulation {
        run.emit("custom_metrics_empirical.csv".into(), &empirical)?;
    }
    Ok(())
}

fn now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

/// Runs one preset, writing its CSVs, `summary.csv`, `manifest.json` and the
/// timestamped `run_meta.json` into the output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunReport> {
    if !spec.analytic && !spec.simulation {
        return Err(Error::config("both the analytic and the simulation side are disabled"));
    }
    spec.config.validate()?;
    std::fs::create_dir_all(&spec.out)?;
    let started = now();
    let mut run = Run { spec, files: Vec::new(), summary: Vec::new() };
    match spec.preset {
        Preset::Fig2 => fig2(&mut run)?,
        Preset::Fig3 => fig3(&mut run)?,
        Preset::Fig4 => fig4(&mut run)?,
        Preset::Fig5 => fig5(&mut run)?,
        Preset::Fig6 => fig6(&mut run)?,
        Preset::Fig7 => fig7(&mut run)?,
        Preset::Custom => custom(&mut run)?,
    }
    let summary = std::mem::take(&mut run.summary);
    run.emit("summary.csv".into(), &summary)?;
    let report = RunReport {
        preset: spec.preset,
        seed: spec.config.seed,
        trials: spec.config.trials,
        analytic: spec.analytic,
        simulation: spec.simulation,
        config: spec.config.clone(),
        files: run.files,
        summary,
    };
    write_json(&spec.out.join("manifest.json"), &report)?;
    let finished = now();
    let meta = RunMeta {
        started_unix: started,
        finished_unix: finished,
        elapsed_seconds: finished - started,
        workers: spec.workers,
        version: env!("CARGO_PKG_VERSION"),
    };
    write_json(&spec.out.join("run_meta.json"), &meta)?;
    Ok(report)
}

/// Machine-readable error record for the command line.
pub fn error_record(e: &Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::output::read_rows;
    use std::path::Path;

    fn spec(preset: Preset, dir: &Path) -> ExperimentSpec {
        let config = RunConfig { trials: 3000, ..RunConfig::default() };
        ExperimentSpec {
            preset,
            config,
            out: dir.to_path_buf(),
            analytic: true,
            simulation: true,
            workers: Some(1),
            schemes: None,
        }
    }

    #[test]
    fn selections_parse() {
        assert_eq!("grr:3".parse::<Selection>().unwrap(), Selection::new(Scheme::GreedyRoundRobin, Some(3)));
        assert_eq!("lrr".parse::<Selection>().unwrap().label(), "lrr");
        assert!("greedy:2".parse::<Selection>().is_err());
        assert!("grr:x".parse::<Selection>().is_err());
        let cfg = RunConfig::default();
        let e = expand(&[Selection::new(Scheme::GreedyRoundRobin, None)], &cfg);
        assert_eq!(e.iter().map(Selection::label).collect::<Vec<_>>(), vec!["grr_w3", "grr_w6"]);
    }

    #[test]
    fn fig2_writes_curves_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let rep = run_experiment(&spec(Preset::Fig2, dir.path())).unwrap();
        assert_eq!(rep.files.len(), 4);
        let rows: Vec<CurveRow> = read_rows(&dir.path().join("fig2_location_greedy.csv")).unwrap();
        assert_eq!(rows.len(), 10);
        let total: f64 = rows.iter().map(|r| r.analytic.unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(rep.summary.iter().filter(|r| r.param == "tv_location").count(), 3);
        assert!(dir.path().join("manifest.json").exists() && dir.path().join("run_meta.json").exists());
    }

    #[test]
    fn custom_without_interferers_is_the_noise_only_benchmark() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = spec(Preset::Custom, dir.path());
        s.config.interferers = 0;
        s.simulation = false;
        s.schemes = Some(vec![Selection::new(Scheme::RoundRobin, None)]);
        run_experiment(&s).unwrap();
        let rows: Vec<TableRow> = read_rows(&dir.path().join("custom_metrics_analytic.csv")).unwrap();
        let cap = rows.iter().find(|r| r.param == "capacity").unwrap().value;
        // E[log2(1 + X0)] over the round robin mixture by direct quadrature
        let sc = Scenario::new(s.config.network().unwrap(), 2.0, s.config.zeta, s.config.chi, 180, 20).unwrap();
        let pmf = sc.location_pmf(Arm { scheme: Scheme::RoundRobin, slot: None }).unwrap();
        let mut want = 0.0;
        for (k, &p) in pmf.probabilities.iter().enumerate() {
            let g = sc.config.path_gain(sc.grid.radii[k]);
            let f = |z: f64| (1.0 + g * z).log2() * s.config.zeta.density(z);
            let q = crate::numerics::quadrature::integrate_semi_infinite(f, 1e-10).unwrap();
            want += p * q;
        }
        assert!((cap - want).abs() < 1e-6 * want, "{cap} vs {want}");
        let out: Vec<&TableRow> = rows.iter().filter(|r| r.param.starts_with("outage")).collect();
        assert!(out.iter().all(|r| r.value == 0.0));
    }

    #[test]
    fn both_sides_disabled_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = spec(Preset::Fig2, dir.path());
        s.analytic = false;
        s.simulation = false;
        assert!(run_experiment(&s).is_err());
    }
}
