//! Multi-threaded ensembles. Every run owns its random substreams and the
//! results are collected in run order, so the output equals the sequential
//! driver in `polarnet_core::experiment` for any thread count.

use polarnet_core::epidemic::EpidemicParams;
use polarnet_core::experiment::{
    fixed_allocation, run_single, AllocationStrategy, Comparison, EnsembleConfig, EnsembleSummary, ExperimentError,
};
use polarnet_core::AnnotatedGraph;
use rayon::prelude::*;

pub fn run_ensemble_par(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    strategy: AllocationStrategy,
    cfg: &EnsembleConfig,
    master_seed: u64,
) -> Result<EnsembleSummary, ExperimentError> {
    let fixed = (!cfg.redraw_allocation).then(|| fixed_allocation(g, strategy, master_seed));
    let runs = (0..cfg.n_runs as u64)
        .into_par_iter()
        .map(|i| run_single(g, params, strategy, cfg.seeding, master_seed, i, fixed.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    EnsembleSummary::from_runs(strategy, runs)
}

pub fn compare_scenarios_par(
    g: &AnnotatedGraph,
    params: &EpidemicParams,
    cfg: &EnsembleConfig,
    master_seed: u64,
) -> Result<Comparison, ExperimentError> {
    let (polarized, homogeneous) = rayon::join(
        || run_ensemble_par(g, params, AllocationStrategy::Polarized, cfg, master_seed),
        || run_ensemble_par(g, params, AllocationStrategy::Homogeneous, cfg, master_seed),
    );
    Ok(Comparison::from_ensembles(polarized?, homogeneous?))
}
