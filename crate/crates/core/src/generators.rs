//! Synthetic baseline networks and the planted two-community surrogate.
//!
//! Every generator is a pure function of its parameters and seed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use rand::Rng;

use crate::graph::{AnnotatedGraph, NodeId, Opinion};
use crate::SimRng;
use rand::SeedableRng;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeneratorError {
    #[error("invalid generator parameter `{param}`: {reason}")]
    InvalidParam { param: &'static str, reason: &'static str },
}

fn invalid(param: &'static str, reason: &'static str) -> GeneratorError {
    GeneratorError::InvalidParam { param, reason }
}

fn check_prob(param: &'static str, p: f64) -> Result<(), GeneratorError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid(param, "must lie in [0, 1]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    ErdosRenyi { n: usize, p: f64 },
    WattsStrogatz { n: usize, k_ring: usize, p_rewire: f64 },
    BarabasiAlbert { n: usize, m: usize },
    TwoCommunity { n_pro: usize, n_anti: usize, p_in: f64, p_out: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub seed: u64,
}

impl GeneratorKind {
    /// Parameter checks shared by all generators, without building anything.
    pub fn validate(&self) -> Result<(), GeneratorError> {
        match *self {
            GeneratorKind::ErdosRenyi { n, p } => {
                if n < 2 {
                    return Err(invalid("n", "must be at least 2"));
                }
                check_prob("p", p)
            }
            GeneratorKind::WattsStrogatz { n, k_ring, p_rewire } => {
                if k_ring == 0 || k_ring % 2 != 0 {
                    return Err(invalid("k_ring", "must be positive and even"));
                }
                if k_ring >= n {
                    return Err(invalid("k_ring", "must be smaller than n"));
                }
                check_prob("p_rewire", p_rewire)
            }
            GeneratorKind::BarabasiAlbert { n, m } => {
                if m == 0 {
                    return Err(invalid("m", "must be at least 1"));
                }
                if m >= n {
                    return Err(invalid("m", "must be smaller than n"));
                }
                Ok(())
            }
            GeneratorKind::TwoCommunity { n_pro, n_anti, p_in, p_out } => {
                check_prob("p_in", p_in)?;
                check_prob("p_out", p_out)?;
                if p_in < p_out {
                    return Err(invalid("p_in", "must not be smaller than p_out"));
                }
                if n_pro + n_anti < 2 {
                    return Err(invalid("n_pro", "n_pro + n_anti must be at least 2"));
                }
                Ok(())
            }
        }
    }
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<AnnotatedGraph, GeneratorError> {
        match self.kind {
            GeneratorKind::ErdosRenyi { n, p } => erdos_renyi(n, p, self.seed),
            GeneratorKind::WattsStrogatz { n, k_ring, p_rewire } => watts_strogatz(n, k_ring, p_rewire, self.seed),
            GeneratorKind::BarabasiAlbert { n, m } => barabasi_albert(n, m, self.seed),
            GeneratorKind::TwoCommunity { n_pro, n_anti, p_in, p_out } => {
                two_community(n_pro, n_anti, p_in, p_out, self.seed)
            }
        }
    }
}

fn assemble(opinions: Vec<Opinion>, edges: Vec<(NodeId, NodeId)>) -> AnnotatedGraph {
    AnnotatedGraph::from_edges(opinions, edges).expect("generator produced out-of-range node").0
}

/// G(n, p). All nodes are labelled [`Opinion::Pro`].
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<AnnotatedGraph, GeneratorError> {
    GeneratorKind::ErdosRenyi { n, p }.validate()?;
    let mut rng = SimRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Ok(assemble(alloc::vec![Opinion::Pro; n], edges))
}

/// Ring lattice where every node links to its `k_ring / 2` successors, then
/// each lattice edge `(i, i + j)` has its far endpoint rewired with
/// probability `p_rewire` to a uniform node that is neither `i` nor already
/// adjacent to `i`.
pub fn watts_strogatz(n: usize, k_ring: usize, p_rewire: f64, seed: u64) -> Result<AnnotatedGraph, GeneratorError> {
    GeneratorKind::WattsStrogatz { n, k_ring, p_rewire }.validate()?;
    let mut rng = SimRng::seed_from_u64(seed);
    let mut adj: Vec<BTreeSet<NodeId>> = alloc::vec![BTreeSet::new(); n];
    for i in 0..n {
        for j in 1..=k_ring / 2 {
            let t = (i + j) % n;
            adj[i].insert(t);
            adj[t].insert(i);
        }
    }
    for j in 1..=k_ring / 2 {
        for i in 0..n {
            let t = (i + j) % n;
            if !adj[i].contains(&t) || !rng.gen_bool(p_rewire) {
                continue;
            }
            if adj[i].len() >= n - 1 {
                continue;
            }
            let w = loop {
                let w = rng.gen_range(0..n);
                if w != i && !adj[i].contains(&w) {
                    break w;
                }
            };
            adj[i].remove(&t);
            adj[t].remove(&i);
            adj[i].insert(w);
            adj[w].insert(i);
        }
    }
    let edges = adj
        .iter()
        .enumerate()
        .flat_map(|(a, s)| s.iter().copied().filter(move |&b| b > a).map(move |b| (a, b)))
        .collect();
    Ok(assemble(alloc::vec![Opinion::Pro; n], edges))
}

/// Preferential attachment from an `m`-clique seed. Each new node links to
/// `m` distinct existing nodes chosen with probability proportional to degree
/// (duplicates are rejected and redrawn).
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<AnnotatedGraph, GeneratorError> {
    GeneratorKind::BarabasiAlbert { n, m }.validate()?;
    let mut rng = SimRng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * (m - 1) / 2 + m * (n - m));
    // One entry per edge endpoint: sampling uniformly from it is sampling
    // proportionally to degree.
    let mut endpoints: Vec<NodeId> = Vec::with_capacity(2 * edges.capacity());
    for a in 0..m {
        for b in a + 1..m {
            edges.push((a, b));
            endpoints.push(a);
            endpoints.push(b);
        }
    }
    let mut targets: Vec<NodeId> = Vec::with_capacity(m);
    for v in m..n {
        targets.clear();
        while targets.len() < m {
            let t = if endpoints.is_empty() {
                // m = 1 seed has no edges yet
                rng.gen_range(0..v)
            } else {
                endpoints[rng.gen_range(0..endpoints.len())]
            };
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.push(t);
            endpoints.push(v);
        }
    }
    Ok(assemble(alloc::vec![Opinion::Pro; n], edges))
}

/// Planted partition: nodes `0..n_pro` are Pro, the rest Anti. Same-opinion
/// pairs link with `p_in`, cross pairs with `p_out`.
pub fn two_community(
    n_pro: usize,
    n_anti: usize,
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<AnnotatedGraph, GeneratorError> {
    GeneratorKind::TwoCommunity { n_pro, n_anti, p_in, p_out }.validate()?;
    let n = n_pro + n_anti;
    let mut opinions = alloc::vec![Opinion::Pro; n_pro];
    opinions.extend(core::iter::repeat_n(Opinion::Anti, n_anti));
    let mut rng = SimRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let p = if opinions[a] == opinions[b] { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    Ok(assemble(opinions, edges))
}
