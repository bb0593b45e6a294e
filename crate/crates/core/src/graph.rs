//! Annotated undirected contact graphs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

/// Dense node index in `[0, n)`.
pub type NodeId = usize;

/// Stance of a node towards vaccination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Opinion {
    Pro,
    Anti,
}

impl Opinion {
    /// Case-insensitive `pro` / `anti`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("pro") {
            Some(Opinion::Pro)
        } else if s.eq_ignore_ascii_case("anti") {
            Some(Opinion::Anti)
        } else {
            None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Opinion::Pro => "pro",
            Opinion::Anti => "anti",
        }
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("node {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("{} node(s) have no opinion: {}", .labels.len(), LabelList(.labels))]
    MissingOpinion { labels: Vec<i64> },
    #[error("node {label} is annotated both pro and anti")]
    ConflictingOpinion { label: i64 },
    #[error("expected {expected} opinions, got {got}")]
    OpinionCountMismatch { expected: usize, got: usize },
    #[error("invalid graph structure: {0}")]
    Invalid(&'static str),
}

struct LabelList<'a>(&'a [i64]);

impl fmt::Display for LabelList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 20;
        for (i, l) in self.0.iter().take(SHOWN).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        if self.0.len() > SHOWN {
            write!(f, ", ... ({} more)", self.0.len() - SHOWN)?;
        }
        Ok(())
    }
}

/// What construction discarded from the raw edge list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub self_loops_dropped: usize,
    pub duplicate_edges_collapsed: usize,
}

/// Simple undirected graph with one [`Opinion`] per node.
///
/// Adjacency is stored in CSR form with every neighbor list sorted. The graph
/// is immutable once built, so it can be shared across simulation workers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedGraph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    opinions: Vec<Opinion>,
    labels: Vec<i64>,
    edge_count: usize,
}

impl AnnotatedGraph {
    /// Builds a graph on dense ids `0..opinions.len()`.
    ///
    /// Duplicate edges (in either orientation) collapse to one and self-loops
    /// are dropped; both are counted in the returned [`BuildStats`].
    pub fn from_edges<I>(opinions: Vec<Opinion>, edges: I) -> Result<(Self, BuildStats), GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let n = opinions.len();
        let labels = (0..n as i64).collect();
        Self::build(n, edges, opinions, labels)
    }

    /// Builds a graph from arbitrary integer labels.
    ///
    /// Dense ids follow ascending label order, so saving and reloading a graph
    /// reproduces it exactly. Labels that only appear in `annotations` become
    /// isolated nodes.
    pub fn from_labeled_edges(
        edges: &[(i64, i64)],
        annotations: &[(i64, Opinion)],
    ) -> Result<(Self, BuildStats), GraphError> {
        let mut opinion_of: BTreeMap<i64, Opinion> = BTreeMap::new();
        for &(label, o) in annotations {
            if let Some(prev) = opinion_of.insert(label, o) {
                if prev != o {
                    return Err(GraphError::ConflictingOpinion { label });
                }
            }
        }

        let mut ids: BTreeMap<i64, NodeId> = BTreeMap::new();
        for &(a, b) in edges {
            ids.insert(a, 0);
            ids.insert(b, 0);
        }
        let missing: Vec<i64> = ids.keys().copied().filter(|l| !opinion_of.contains_key(l)).collect();
        if !missing.is_empty() {
            return Err(GraphError::MissingOpinion { labels: missing });
        }
        for &label in opinion_of.keys() {
            ids.insert(label, 0);
        }

        let mut labels = Vec::with_capacity(ids.len());
        let mut opinions = Vec::with_capacity(ids.len());
        for (i, (label, id)) in ids.iter_mut().enumerate() {
            *id = i;
            labels.push(*label);
            opinions.push(opinion_of[label]);
        }
        let n = labels.len();
        Self::build(n, edges.iter().map(|(a, b)| (ids[a], ids[b])), opinions, labels)
    }

    fn build<I>(
        n: usize,
        edges: I,
        opinions: Vec<Opinion>,
        labels: Vec<i64>,
    ) -> Result<(Self, BuildStats), GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut stats = BuildStats::default();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::new();
        for (a, b) in edges {
            for id in [a, b] {
                if id >= n {
                    return Err(GraphError::NodeOutOfRange { id, n });
                }
            }
            if a == b {
                stats.self_loops_dropped += 1;
                continue;
            }
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort_unstable();
        let raw = pairs.len();
        pairs.dedup();
        stats.duplicate_edges_collapsed = raw - pairs.len();

        let mut degree = alloc::vec![0usize; n];
        for &(a, b) in &pairs {
            degree[a] += 1;
            degree[b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = alloc::vec![0; offsets[n]];
        // pairs are sorted by (a, b), so pushing b onto a keeps lists sorted;
        // the reverse direction is sorted afterwards.
        for &(a, b) in &pairs {
            targets[cursor[a]] = b;
            cursor[a] += 1;
            targets[cursor[b]] = a;
            cursor[b] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        let g = AnnotatedGraph { offsets, targets, opinions, labels, edge_count: pairs.len() };
        Ok((g, stats))
    }

    /// Same structure with a new opinion vector.
    pub fn with_opinions(mut self, opinions: Vec<Opinion>) -> Result<Self, GraphError> {
        if opinions.len() != self.n() {
            return Err(GraphError::OpinionCountMismatch { expected: self.n(), got: opinions.len() });
        }
        self.opinions = opinions;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.opinions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    /// Sorted neighbors of `i`. Panics when `i` is out of range.
    #[inline]
    pub fn neighbors(&self, i: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: NodeId) -> Result<usize, GraphError> {
        if i >= self.n() {
            return Err(GraphError::NodeOutOfRange { id: i, n: self.n() });
        }
        Ok(self.offsets[i + 1] - self.offsets[i])
    }

    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        a < self.n() && self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn opinion(&self, i: NodeId) -> Opinion {
        self.opinions[i]
    }

    pub fn opinions(&self) -> &[Opinion] {
        &self.opinions
    }

    /// External label of node `i`.
    pub fn label(&self, i: NodeId) -> i64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn count_opinion(&self, o: Opinion) -> usize {
        self.opinions.iter().filter(|&&x| x == o).count()
    }

    /// Every edge once, as `(a, b)` with `a < b`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |a| {
            self.neighbors(a).iter().copied().filter(move |&b| b > a).map(move |b| (a, b))
        })
    }

    /// Induced subgraph on the nodes holding opinion `o`.
    ///
    /// Node ids are re-densified in ascending order; external labels carry over.
    pub fn subgraph_by_opinion(&self, o: Opinion) -> AnnotatedGraph {
        let mut remap = alloc::vec![usize::MAX; self.n()];
        let mut opinions = Vec::new();
        let mut labels = Vec::new();
        for i in 0..self.n() {
            if self.opinions[i] == o {
                remap[i] = opinions.len();
                opinions.push(o);
                labels.push(self.labels[i]);
            }
        }
        let edges = self
            .edges()
            .filter(|&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|(a, b)| (remap[a], remap[b]));
        let n = opinions.len();
        // Input is already simple, so construction cannot fail.
        Self::build(n, edges, opinions, labels).expect("induced subgraph of a valid graph").0
    }

    /// Full structural scan: symmetric, sorted, no loops or duplicates,
    /// consistent edge count.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        if self.offsets.len() != n + 1 || self.labels.len() != n {
            return Err(GraphError::Invalid("inconsistent array lengths"));
        }
        for i in 0..n {
            let nb = self.neighbors(i);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::Invalid("neighbor list not strictly sorted"));
                }
            }
            for &j in nb {
                if j >= n {
                    return Err(GraphError::NodeOutOfRange { id: j, n });
                }
                if j == i {
                    return Err(GraphError::Invalid("self-loop"));
                }
                if !self.has_edge(j, i) {
                    return Err(GraphError::Invalid("asymmetric adjacency"));
                }
            }
        }
        if self.targets.len() != 2 * self.edge_count {
            return Err(GraphError::Invalid("edge count does not match adjacency"));
        }
        Ok(())
    }
}
