//! One network setup evaluated analytically, with the shared scheduling
//! tables built once.

use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fading::ChannelModel;
use crate::geometry::{build_ring_grid, build_segment_grid, AngularGrid, NetworkConfig, RingGrid, SegmentGrid};
use crate::interference::{cumulative_transform, interferer_pmf_for, InterferenceTransform, InterfererDistancePmf};
use crate::metrics::{
    average_fairness, ergodic_capacity, greedy_signal, grr_signal, outage_probability, pf_signal, CapacityEstimate,
    FairnessResult, SignalLaw, DEFAULT_CAPACITY_ORDER,
};
use crate::montecarlo::Arm;
use crate::scheduling::{
    greedy_rr_integral_count, greedy_rr_sweep, location_rr_pmf, proportional_fair_pmf, round_robin_pmf, GreedyRrSweep,
    LocationPmf, RaceTable, Scheme, DEFAULT_GRR_BUDGET,
};

pub struct Scenario {
    pub config: NetworkConfig,
    pub grid: RingGrid,
    pub zeta: ChannelModel,
    pub chi: ChannelModel,
    pub angular: AngularGrid,
    pub segments: SegmentGrid,
    pub grr_budget: u64,
    table: Mutex<Option<Arc<RaceTable>>>,
    sweep: Mutex<Option<Arc<GreedyRrSweep>>>,
}

impl Scenario {
    pub fn new(
        config: NetworkConfig,
        kappa_db: f64,
        zeta: ChannelModel,
        chi: ChannelModel,
        angular_bins: usize,
        segments: usize,
    ) -> Result<Self> {
        Ok(Scenario {
            grid: build_ring_grid(&config, kappa_db)?,
            angular: AngularGrid::new(angular_bins)?,
            segments: build_segment_grid(&config, segments)?,
            config,
            zeta,
            chi,
            grr_budget: DEFAULT_GRR_BUDGET,
            table: Mutex::new(None),
            sweep: Mutex::new(None),
        })
    }

    pub fn table(&self) -> Result<Arc<RaceTable>> {
        let mut slot = self.table.lock().expect("table lock");
        if let Some(t) = slot.as_ref() {
            return Ok(t.clone());
        }
        let t = Arc::new(RaceTable::new(&self.grid, &self.zeta, &self.config)?);
        *slot = Some(t.clone());
        Ok(t)
    }

    /// Greedy round robin sweep covering at least `slots` slots. The full
    /// sweep is cached when it fits the budget.
    pub fn sweep(&self, slots: usize) -> Result<Arc<GreedyRrSweep>> {
        let k = self.grid.len();
        if greedy_rr_integral_count(k, k) > self.grr_budget {
            return Ok(Arc::new(greedy_rr_sweep(&*self.table()?, slots, self.grr_budget)?));
        }
        let mut cached = self.sweep.lock().expect("sweep lock");
        if let Some(s) = cached.as_ref() {
            return Ok(s.clone());
        }
        let s = Arc::new(greedy_rr_sweep(&*self.table()?, k, self.grr_budget)?);
        *cached = Some(s.clone());
        Ok(s)
    }

    pub fn location_pmf(&self, arm: Arm) -> Result<LocationPmf> {
        match arm.scheme {
            Scheme::Greedy => {
                let wins = self.table()?.outcome(0).wins;
                LocationPmf::new(Scheme::Greedy, None, wins)
            }
            Scheme::ProportionalFair => proportional_fair_pmf(&self.grid, &self.zeta, &self.config),
            Scheme::RoundRobin => Ok(round_robin_pmf(&self.grid)),
            Scheme::LocationRoundRobin => location_rr_pmf(&self.grid, slot_of(arm)?),
            Scheme::GreedyRoundRobin => {
                let w = slot_of(arm)?;
                self.sweep(w)?.slot(w).cloned().ok_or_else(|| Error::domain(format!("slot {w} not swept")))
            }
        }
    }

    pub fn signal(&self, arm: Arm) -> Result<SignalLaw> {
        match arm.scheme {
            Scheme::Greedy => greedy_signal(&*self.table()?),
            Scheme::ProportionalFair => pf_signal(&*self.table()?),
            Scheme::RoundRobin | Scheme::LocationRoundRobin => {
                Ok(SignalLaw::mixture(&self.location_pmf(arm)?, &self.grid, &self.zeta, &self.config))
            }
            Scheme::GreedyRoundRobin => {
                let w = slot_of(arm)?;
                grr_signal(&*self.table()?, &self.sweep(w)?.histories[w - 1])
            }
        }
    }

    pub fn interferer_pmf(&self, arm: Arm) -> Result<InterfererDistancePmf> {
        interferer_pmf_for(&self.location_pmf(arm)?, &self.grid, &self.angular, &self.segments, &self.config)
    }

    pub fn transform(&self, arm: Arm) -> Result<InterferenceTransform> {
        cumulative_transform(&self.interferer_pmf(arm)?, &self.chi, &self.config)
    }

    pub fn outage(&self, arm: Arm, thresholds: &[f64]) -> Result<Vec<f64>> {
        let signal = self.signal(arm)?;
        let tr = self.transform(arm)?;
        thresholds.iter().map(|&q| outage_probability(q, &signal, &tr)).collect()
    }

    pub fn capacity(&self, arm: Arm) -> Result<CapacityEstimate> {
        ergodic_capacity(&self.signal(arm)?, &self.transform(arm)?, 1.0, DEFAULT_CAPACITY_ORDER)
    }

    pub fn fairness(&self, arm: Arm) -> Result<FairnessResult> {
        average_fairness(&self.location_pmf(arm)?, &self.grid)
    }

    /// Location round robin over a full sweep of all rings.
    pub fn location_rr_arms(&self) -> Vec<Arm> {
        (1..=self.grid.len()).map(|w| Arm { scheme: Scheme::LocationRoundRobin, slot: Some(w) }).collect()
    }
}

fn slot_of(arm: Arm) -> Result<usize> {
    arm.slot.filter(|&w| w >= 1).ok_or_else(|| Error::domain(format!("{} needs a slot", arm.scheme)))
}
