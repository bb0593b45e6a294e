//! Opinion-polarization metrics and an agent-based epidemic model for
//! annotated contact graphs.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! parallel ensemble execution live in the `polarnet` companion crate.
//!
//! Layout:
//!
//! * [`graph`]: the immutable [`AnnotatedGraph`] (simple, undirected, every
//!   node labelled pro or anti).
//! * [`metrics`]: density, degree distribution and power-law fit, clustering,
//!   mixing matrix and assortativity.
//! * [`generators`]: Erdős–Rényi, Watts–Strogatz, Barabási–Albert and a
//!   planted two-community model.
//! * [`epidemic`]: gamma infectiousness curve, per-contact transmission
//!   probability, vaccine rules and the daily update.
//! * [`experiment`]: vaccine allocation strategies, run summaries and
//!   Monte Carlo ensembles.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod epidemic;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod metrics;
mod special;

pub use epidemic::{EpidemicParams, SeedPool, Seeding, SimulationState, VetMode};
pub use experiment::{AllocationStrategy, Comparison, EnsembleSummary, RunSummary, Subpopulation};
pub use generators::{GeneratorKind, GeneratorSpec};
pub use graph::{AnnotatedGraph, NodeId, Opinion};
pub use metrics::{FitMethod, MetricsReport, MixingMatrix, PowerLawFit};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream used everywhere in the crate.
pub type SimRng = ChaCha8Rng;

/// Independent substream `stream` of the generator seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
