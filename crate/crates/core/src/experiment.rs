//! Vaccine-allocation scenarios and Monte Carlo ensembles.
//!
//! Run `i` of an ensemble draws its allocation from substream `2i` and its
//! simulation from substream `2i + 1` of the master seed. Both strategies
//! therefore see the same index cases in run `i`, and runs can execute in any
//! order or in parallel without changing the result.

use alloc::vec::Vec;
use rand::seq::index;
use rand::RngCore;

use crate::epidemic::{run_epidemic, EpidemicError, EpidemicParams, EpidemicRecord, Seeding};
use crate::graph::{AnnotatedGraph, Opinion};
use crate::stream_rng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Epidemic(#[from] EpidemicError),
    #[error("subpopulation {0:?} is empty")]
    EmptySubpopulation(Subpopulation),
    #[error("no infections in subpopulation {0:?}")]
    NoInfections(Subpopulation),
    #[error("an ensemble needs at least one run")]
    NoRuns,
    #[error("runs disagree on horizon or subpopulation sizes")]
    MismatchedRuns,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AllocationStrategy {
    /// Exactly the pro-vaccine nodes are vaccinated.
    Polarized,
    /// As many doses as pro-vaccine nodes, spread uniformly at random.
    Homogeneous,
}

impl AllocationStrategy {
    pub const BOTH: [AllocationStrategy; 2] = [AllocationStrategy::Polarized, AllocationStrategy::Homogeneous];

    pub fn as_str(self) -> &'static str {
        match self {
            AllocationStrategy::Polarized => "polarized",
            AllocationStrategy::Homogeneous => "homogeneous",
        }
    }
}

/// Per-node vaccination flags.
pub fn allocate_vaccines<R: RngCore>(g: &AnnotatedGraph, strategy: AllocationStrategy, rng: &mut R) -> Vec<bool> {
    match strategy {
        AllocationStrategy::Polarized => g.opinions().iter().map(|&o| o == Opinion::Pro).collect(),
        AllocationStrategy::Homogeneous => {
            let doses = g.count_opinion(Opinion::Pro);
            let mut flags = alloc::vec![false; g.n()];
            for i in index::sample(rng, g.n(), doses) {
                flags[i] = true;
            }
            flags
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subpopulation {
    Unvaccinated,
    Vaccinated,
    All,
}

impl Subpopulation {
    pub const ALL: [Subpopulation; 3] = [Subpopulation::Unvaccinated, Subpopulation::Vaccinated, Subpopulation::All];

    pub fn as_str(self) -> &'static str {
        match self {
            Subpopulation::Unvaccinated => "unvaccinated",
            Subpopulation::Vaccinated => "vaccinated",
            Subpopulation::All => "all",
        }
    }
}

/// Daily new-infection counts of one run, split by vaccination status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSummary {
    pub new_unvaccinated: Vec<u32>,
    pub new_vaccinated: Vec<u32>,
    pub n_unvaccinated: usize,
    pub n_vaccinated: usize,
}

impl RunSummary {
    pub fn from_record(rec: &EpidemicRecord) -> Self {
        let n_vaccinated = rec.vaccinated.iter().filter(|&&v| v).count();
        RunSummary {
            new_unvaccinated: rec.daily.iter().map(|d| d.unvaccinated).collect(),
            new_vaccinated: rec.daily.iter().map(|d| d.vaccinated).collect(),
            n_unvaccinated: rec.vaccinated.len() - n_vaccinated,
            n_vaccinated,
        }
    }

    /// Number of recorded days (horizon + 1).
    pub fn days(&self) -> usize {
        self.new_unvaccinated.len()
    }

    pub fn size(&self, subpop: Subpopulation) -> usize {
        match subpop {
            Subpopulation::Unvaccinated => self.n_unvaccinated,
            Subpopulation::Vaccinated => self.n_vaccinated,
            Subpopulation::All => self.n_unvaccinated + self.n_vaccinated,
        }
    }

    pub fn new_infections(&self, subpop: Subpopulation) -> Vec<u32> {
        match subpop {
            Subpopulation::Unvaccinated => self.new_unvaccinated.clone(),
            Subpopulation::Vaccinated => self.new_vaccinated.clone(),
            Subpopulation::All => {
                self.new_unvaccinated.iter().zip(&self.new_vaccinated).map(|(a, b)| a + b).collect()
            }
        }
    }

    pub fn total_infections(&self, subpop: Subpopulation) -> u64 {
        self.new_infections(subpop).iter().map(|&c| c as u64).sum()
    }

    /// Daily new infections divided by the subpopulation size.
    pub fn daily_fraction(&self, subpop: Subpopulation) -> Result<Vec<f64>, ExperimentError> {
        let size = self.size(subpop);
        if size == 0 {
            return Err(ExperimentError::EmptySubpopulation(subpop));
        }
        Ok(self.new_infections(subpop).iter().map(|&c| c as f64 / size as f64).collect())
    }

    pub fn cumulative_fraction(&self, subpop: Subpopulation) -> Result<Vec<f64>, ExperimentError> {
        let size = self.size(subpop);
        if size == 0 {
            return Err(ExperimentError::EmptySubpopulation(subpop));
        }
        let mut acc = 0u64;
        Ok(self
            .new_infections(subpop)
            .iter()
            .map(|&c| {
                acc += c as u64;
                acc as f64 / size as f64
            })
            .collect())
    }
}

/// Cumulative fraction of the subpopulation infected by the end of the run,
/// index cases included.
pub fn attack_rate(run: &RunSummary, subpop: Subpopulation) -> Result<f64, ExperimentError> {
    let size = run.size(subpop);
    if size == 0 {
        return Err(ExperimentError::EmptySubpopulation(subpop));
    }
    Ok(run.total_infections(subpop) as f64 / size as f64)
}

/// Day with the most new infections; the earliest one on ties.
pub fn time_to_peak(run: &RunSummary, subpop: Subpopulation) -> Result<u32, ExperimentError> {
    let counts = run.new_infections(subpop);
    argmax_earliest(&counts).map(|d| d as u32).ok_or(ExperimentError::NoInfections(subpop))
}

/// Index of the first maximum of a series, `None` when no entry is positive.
pub fn peak_day<T: PartialOrd + Default + Copy>(series: &[T]) -> Option<usize> {
    argmax_earliest(series)
}

fn argmax_earliest<T: PartialOrd + Default + Copy>(series: &[T]) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (d, &v) in series.iter().enumerate() {
        if v > T::default() && best.is_none_or(|(_, b)| v > b) {
            best = Some((d, v));
        }
    }
    best.map(|(d, _)| d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleConfig {
    pub n_runs: usize,
    pub seeding: Seeding,
    /// Draw a fresh homogeneous allocation for every run instead of one per
    /// ensemble.
    pub redraw_allocation: bool,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig { n_runs: 100, seeding: Seeding::default(), redraw_allocation: true }
    }
}

const FIXED_ALLOCATION_STREAM: u64 = u64::MAX;

/// The allocation shared by all runs when `redraw_allocation` is off.
pub fn fixed_allocation(g: &AnnotatedGraph, strategy: AllocationStrategy, master_seed: u64) -> Vec<bool> {
    allocate_vaccines(g, strategy, &mut stream_rng(master_seed, FIXED_ALLOCATION_STREAM))
}

/// Run `run_index` of an ensemble. `allocation` overrides the per-run draw.
pub fn run_single(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    strategy: AllocationStrategy,
    seeding: Seeding,
    master_seed: u64,
    run_index: u64,
    allocation: Option<&[bool]>,
) -> Result<RunSummary, ExperimentError> {
    let drawn;
    let vaccinated = match allocation {
        Some(a) => a,
        None => {
            drawn = allocate_vaccines(g, strategy, &mut stream_rng(master_seed, 2 * run_index));
            &drawn[..]
        }
    };
    let rec = run_epidemic(g, params, vaccinated, seeding, stream_rng(master_seed, 2 * run_index + 1))?;
    Ok(RunSummary::from_record(&rec))
}

/// Ensemble statistics of one subpopulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SubpopAggregate {
    pub subpop: Subpopulation,
    pub size: usize,
    /// Mean daily new-infection fraction.
    pub mean_daily: Vec<f64>,
    /// Pointwise 5% and 95% quantiles of the daily fraction.
    pub lower_daily: Vec<f64>,
    pub upper_daily: Vec<f64>,
    pub mean_cumulative: Vec<f64>,
    pub mean_attack_rate: Option<f64>,
    /// Mean peak day over the runs that had at least one infection.
    pub mean_t_peak: Option<f64>,
    pub peaked_runs: usize,
}

pub const BAND_LOWER: f64 = 0.05;
pub const BAND_UPPER: f64 = 0.95;

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

impl SubpopAggregate {
    fn from_runs(runs: &[RunSummary], subpop: Subpopulation) -> Self {
        let days = runs[0].days();
        let size = runs[0].size(subpop);
        let counts: Vec<Vec<u32>> = runs.iter().map(|r| r.new_infections(subpop)).collect();

        let mut peaks = 0u64;
        let mut peaked_runs = 0usize;
        for c in &counts {
            if let Some(d) = argmax_earliest(c) {
                peaks += d as u64;
                peaked_runs += 1;
            }
        }
        let mean_t_peak = (peaked_runs > 0).then(|| peaks as f64 / peaked_runs as f64);

        if size == 0 {
            let zeros = alloc::vec![0.0; days];
            return SubpopAggregate {
                subpop,
                size,
                mean_daily: zeros.clone(),
                lower_daily: zeros.clone(),
                upper_daily: zeros.clone(),
                mean_cumulative: zeros,
                mean_attack_rate: None,
                mean_t_peak,
                peaked_runs,
            };
        }

        // Integer sums keep the means independent of run order.
        let denom = (runs.len() * size) as f64;
        let mut mean_daily = Vec::with_capacity(days);
        let mut mean_cumulative = Vec::with_capacity(days);
        let mut lower_daily = Vec::with_capacity(days);
        let mut upper_daily = Vec::with_capacity(days);
        let mut running = 0u64;
        let mut column = Vec::with_capacity(runs.len());
        for d in 0..days {
            let day_sum: u64 = counts.iter().map(|c| c[d] as u64).sum();
            running += day_sum;
            mean_daily.push(day_sum as f64 / denom);
            mean_cumulative.push(running as f64 / denom);
            column.clear();
            column.extend(counts.iter().map(|c| c[d] as f64 / size as f64));
            column.sort_by(|a, b| a.partial_cmp(b).expect("finite fractions"));
            lower_daily.push(quantile_sorted(&column, BAND_LOWER));
            upper_daily.push(quantile_sorted(&column, BAND_UPPER));
        }
        SubpopAggregate {
            subpop,
            size,
            mean_daily,
            lower_daily,
            upper_daily,
            mean_attack_rate: Some(running as f64 / denom),
            mean_cumulative,
            mean_t_peak,
            peaked_runs,
        }
    }
}

/// All runs of one strategy plus their aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub strategy: AllocationStrategy,
    pub runs: Vec<RunSummary>,
    aggregates: Vec<SubpopAggregate>,
}

impl EnsembleSummary {
    pub fn from_runs(strategy: AllocationStrategy, runs: Vec<RunSummary>) -> Result<Self, ExperimentError> {
        let first = runs.first().ok_or(ExperimentError::NoRuns)?;
        let consistent = runs.iter().all(|r| {
            r.days() == first.days()
                && r.new_vaccinated.len() == first.days()
                && r.n_unvaccinated == first.n_unvaccinated
                && r.n_vaccinated == first.n_vaccinated
        });
        if !consistent {
            return Err(ExperimentError::MismatchedRuns);
        }
        let aggregates = Subpopulation::ALL.iter().map(|&s| SubpopAggregate::from_runs(&runs, s)).collect();
        Ok(EnsembleSummary { strategy, runs, aggregates })
    }

    pub fn aggregate(&self, subpop: Subpopulation) -> &SubpopAggregate {
        &self.aggregates[Subpopulation::ALL.iter().position(|&s| s == subpop).unwrap()]
    }

    pub fn mean_attack_rate(&self, subpop: Subpopulation) -> Option<f64> {
        self.aggregate(subpop).mean_attack_rate
    }

    pub fn mean_t_peak(&self, subpop: Subpopulation) -> Option<f64> {
        self.aggregate(subpop).mean_t_peak
    }
}

/// Sequential ensemble. See the `polarnet` crate for the parallel driver,
/// which produces identical results.
pub fn run_ensemble(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    strategy: AllocationStrategy,
    cfg: &EnsembleConfig,
    master_seed: u64,
) -> Result<EnsembleSummary, ExperimentError> {
    let fixed = (!cfg.redraw_allocation).then(|| fixed_allocation(g, strategy, master_seed));
    let runs = (0..cfg.n_runs as u64)
        .map(|i| run_single(g, params, strategy, cfg.seeding, master_seed, i, fixed.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    EnsembleSummary::from_runs(strategy, runs)
}

/// Polarized / homogeneous contrast for one subpopulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioRatio {
    pub subpop: Subpopulation,
    /// Polarized mean attack rate over homogeneous mean attack rate.
    pub attack_rate_ratio: Option<f64>,
    /// Polarized mean peak day minus homogeneous mean peak day.
    pub t_peak_difference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub polarized: EnsembleSummary,
    pub homogeneous: EnsembleSummary,
    pub ratios: Vec<ScenarioRatio>,
}

impl Comparison {
    pub fn from_ensembles(polarized: EnsembleSummary, homogeneous: EnsembleSummary) -> Self {
        let ratios = Subpopulation::ALL
            .iter()
            .map(|&subpop| {
                let ar = polarized.mean_attack_rate(subpop).zip(homogeneous.mean_attack_rate(subpop));
                let tp = polarized.mean_t_peak(subpop).zip(homogeneous.mean_t_peak(subpop));
                ScenarioRatio {
                    subpop,
                    attack_rate_ratio: ar.and_then(|(p, h)| (h > 0.0).then(|| p / h)),
                    t_peak_difference: tp.map(|(p, h)| p - h),
                }
            })
            .collect();
        Comparison { polarized, homogeneous, ratios }
    }

    pub fn ensemble(&self, strategy: AllocationStrategy) -> &EnsembleSummary {
        match strategy {
            AllocationStrategy::Polarized => &self.polarized,
            AllocationStrategy::Homogeneous => &self.homogeneous,
        }
    }

    pub fn ratio(&self, subpop: Subpopulation) -> &ScenarioRatio {
        self.ratios.iter().find(|r| r.subpop == subpop).expect("all subpopulations present")
    }
}

/// Both strategies on the same graph with the same seeds.
pub fn compare_scenarios(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    cfg: &EnsembleConfig,
    master_seed: u64,
) -> Result<Comparison, ExperimentError> {
    let polarized = run_ensemble(g, params, AllocationStrategy::Polarized, cfg, master_seed)?;
    let homogeneous = run_ensemble(g, params, AllocationStrategy::Homogeneous, cfg, master_seed)?;
    Ok(Comparison::from_ensembles(polarized, homogeneous))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epidemic::SeedPool;
    use crate::SimRng;
    use alloc::vec;
    use rand::SeedableRng;

    fn run(unvacc: Vec<u32>, vacc: Vec<u32>, n_u: usize, n_v: usize) -> RunSummary {
        RunSummary { new_unvaccinated: unvacc, new_vaccinated: vacc, n_unvaccinated: n_u, n_vaccinated: n_v }
    }

    #[test]
    fn peak_examples() {
        assert_eq!(peak_day(&[0, 1, 3, 2]), Some(2));
        assert_eq!(peak_day(&[0.0, 2.0, 2.0, 1.0]), Some(1));
        assert_eq!(peak_day::<u32>(&[0, 0]), None);
        let r = run(vec![0, 0, 0], vec![1, 0, 0], 5, 5);
        assert_eq!(time_to_peak(&r, Subpopulation::Unvaccinated), Err(ExperimentError::NoInfections(Subpopulation::Unvaccinated)));
        assert_eq!(time_to_peak(&r, Subpopulation::All), Ok(0));
    }

    #[test]
    fn attack_rate_and_series_agree() {
        let r = run(vec![2, 3, 1], vec![0, 1, 0], 10, 4);
        assert_eq!(attack_rate(&r, Subpopulation::Unvaccinated).unwrap(), 0.6);
        assert_eq!(attack_rate(&r, Subpopulation::Vaccinated).unwrap(), 0.25);
        let s: f64 = r.daily_fraction(Subpopulation::All).unwrap().iter().sum();
        assert!((s - attack_rate(&r, Subpopulation::All).unwrap()).abs() < 1e-12);
        let empty = run(vec![1], vec![0], 1, 0);
        assert_eq!(attack_rate(&empty, Subpopulation::Vaccinated), Err(ExperimentError::EmptySubpopulation(Subpopulation::Vaccinated)));
    }

    #[test]
    fn homogeneous_all_pro_vaccinates_everyone() {
        let g = AnnotatedGraph::from_edges(vec![Opinion::Pro; 7], [(0, 1)]).unwrap().0;
        let flags = allocate_vaccines(&g, AllocationStrategy::Homogeneous, &mut SimRng::seed_from_u64(0));
        assert!(flags.iter().all(|&f| f));
    }

    #[test]
    fn homogeneous_count_matches_pro() {
        let mut ops = vec![Opinion::Pro; 13];
        ops.extend(vec![Opinion::Anti; 29]);
        let g = AnnotatedGraph::from_edges(ops, []).unwrap().0;
        for seed in 0..20 {
            let flags = allocate_vaccines(&g, AllocationStrategy::Homogeneous, &mut SimRng::seed_from_u64(seed));
            assert_eq!(flags.iter().filter(|&&f| f).count(), 13);
        }
        let pol = allocate_vaccines(&g, AllocationStrategy::Polarized, &mut SimRng::seed_from_u64(0));
        assert!(pol[..13].iter().all(|&f| f) && pol[13..].iter().all(|&f| !f));
    }

    #[test]
    fn single_run_ensemble_equals_run() {
        let g = crate::generators::two_community(40, 40, 0.2, 0.01, 1).unwrap();
        let params = EpidemicParams { horizon: 40, ..Default::default() };
        let cfg = EnsembleConfig { n_runs: 1, seeding: Seeding { count: 2, pool: SeedPool::All }, redraw_allocation: true };
        let ens = run_ensemble(&g, &params, AllocationStrategy::Homogeneous, &cfg, 9).unwrap();
        let r = &ens.runs[0];
        for s in Subpopulation::ALL {
            let agg = ens.aggregate(s);
            assert_eq!(agg.mean_daily, r.daily_fraction(s).unwrap());
            assert_eq!(agg.lower_daily, agg.mean_daily);
            assert_eq!(agg.upper_daily, agg.mean_daily);
            assert_eq!(agg.mean_attack_rate, Some(attack_rate(r, s).unwrap()));
            assert_eq!(agg.mean_t_peak, time_to_peak(r, s).ok().map(|d| d as f64));
        }
    }

    #[test]
    fn fixed_allocation_is_shared() {
        let g = crate::generators::two_community(30, 30, 0.2, 0.01, 1).unwrap();
        let params = EpidemicParams { horizon: 30, ..Default::default() };
        let cfg = EnsembleConfig { n_runs: 5, seeding: Seeding { count: 1, pool: SeedPool::All }, redraw_allocation: false };
        let ens = run_ensemble(&g, &params, AllocationStrategy::Homogeneous, &cfg, 4).unwrap();
        assert_eq!(ens.runs.len(), 5);
        assert!(ens.runs.iter().all(|r| r.n_vaccinated == 30));
    }

    #[test]
    fn empty_ensemble_rejected() {
        assert_eq!(EnsembleSummary::from_runs(AllocationStrategy::Polarized, vec![]), Err(ExperimentError::NoRuns));
        let runs = vec![run(vec![1, 0], vec![0, 0], 3, 1), run(vec![1, 0], vec![0, 0], 2, 2)];
        assert_eq!(EnsembleSummary::from_runs(AllocationStrategy::Polarized, runs), Err(ExperimentError::MismatchedRuns));
    }

    #[test]
    fn quantiles() {
        let data = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile_sorted(&data, 0.0), 0.0);
        assert_eq!(quantile_sorted(&data, 0.5), 2.0);
        assert!((quantile_sorted(&data, 0.95) - 3.8).abs() < 1e-12);
    }
}
