//! Structural and polarization metrics of annotated graphs.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use libm::log;

use crate::graph::{AnnotatedGraph, NodeId, Opinion};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("metric needs at least {needed} nodes, graph has {n}")]
    TooFewNodes { n: usize, needed: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("node {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: usize, n: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },
    #[error("power-law fit needs at least 3 distinct degrees >= {k_min}, found {found}")]
    InsufficientSupport { k_min: usize, found: usize },
    #[error("fitted degree distribution is not decreasing (slope {slope})")]
    NonPositiveExponent { slope: f64 },
    #[error("mixing matrix is degenerate: all edge endpoints fall in one group")]
    SingleGroup,
    #[error("no within-group edges")]
    ZeroWithinGroup,
}

/// `E / (n (n - 1) / 2)`.
pub fn density(g: &AnnotatedGraph) -> Result<f64, MetricsError> {
    let n = g.n();
    if n < 2 {
        return Err(MetricsError::TooFewNodes { n, needed: 2 });
    }
    let max_edges = n as f64 * (n as f64 - 1.0) / 2.0;
    Ok(g.edge_count() as f64 / max_edges)
}

/// `2E / n`.
pub fn mean_degree(g: &AnnotatedGraph) -> Result<f64, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::TooFewNodes { n: 0, needed: 1 });
    }
    Ok(2.0 * g.edge_count() as f64 / g.n() as f64)
}

/// Histogram of node degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeDistribution {
    counts: BTreeMap<usize, usize>,
    n: usize,
}

impl DegreeDistribution {
    /// Builds a distribution straight from `degree -> node count` pairs.
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(counts: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in counts {
            if c > 0 {
                *map.entry(k).or_insert(0) += c;
            }
        }
        let n = map.values().sum();
        DegreeDistribution { counts: map, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `P(k) = n_k / n`.
    pub fn probability(&self, k: usize) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.count(k) as f64 / self.n as f64
    }

    /// `(k, n_k)` in ascending degree order, only nonzero counts.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }
}

pub fn degree_distribution(g: &AnnotatedGraph) -> DegreeDistribution {
    let mut counts = BTreeMap::new();
    for i in 0..g.n() {
        *counts.entry(g.neighbors(i).len()).or_insert(0) += 1;
    }
    DegreeDistribution { counts, n: g.n() }
}

/// Result of a log–log least-squares power-law fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    /// `P(k) ~ k^-gamma`.
    pub gamma: f64,
    pub k_min: usize,
    /// Coefficient of determination of the log–log regression.
    pub r2: f64,
    /// Number of regression points (distinct degrees or nonempty bins).
    pub points: usize,
}

/// How the degree histogram is turned into regression points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitMethod {
    /// One point `(ln k, ln P(k))` per degree with `n_k > 0`.
    RawHistogram,
    /// Degrees grouped in bins whose edges grow by `ratio`; each bin
    /// contributes its mean density `P`. The abscissa of a bin is the degree
    /// `x` with `x^-γ` equal to the bin average of `k^-γ`, solved jointly with
    /// `γ` by fixed-point iteration, so exact power laws are recovered
    /// exactly.
    LogBinned { ratio: f64 },
}

/// Bin growth factor of the default fit.
pub const DEFAULT_BIN_RATIO: f64 = 1.25;

impl Default for FitMethod {
    fn default() -> Self {
        FitMethod::LogBinned { ratio: DEFAULT_BIN_RATIO }
    }
}

/// Least-squares power-law fit of the degree histogram over `k >= k_min`
/// (degree zero never included), using log-binning with
/// [`DEFAULT_BIN_RATIO`].
pub fn fit_power_law(d: &DegreeDistribution, k_min: usize) -> Result<PowerLawFit, MetricsError> {
    fit_power_law_with(d, k_min, FitMethod::default())
}

pub fn fit_power_law_with(
    d: &DegreeDistribution,
    k_min: usize,
    method: FitMethod,
) -> Result<PowerLawFit, MetricsError> {
    let lo = k_min.max(1);
    let support = d.iter().filter(|&(k, _)| k >= lo).count();
    if support < 3 {
        return Err(MetricsError::InsufficientSupport { k_min, found: support });
    }
    let n = d.n() as f64;
    match method {
        FitMethod::RawHistogram => {
            let points: Vec<(f64, f64)> =
                d.iter().filter(|&(k, _)| k >= lo).map(|(k, c)| (log(k as f64), log(c as f64 / n))).collect();
            finish_fit(&points, k_min)
        }
        FitMethod::LogBinned { ratio } => {
            let ratio = if ratio > 1.0 { ratio } else { DEFAULT_BIN_RATIO };
            let k_max = d.max_degree().expect("support checked above");
            // (first degree, one past last degree, ln density)
            let mut bins: Vec<(usize, usize, f64)> = Vec::new();
            let mut a = lo;
            while a <= k_max {
                let b = ((libm::ceil(a as f64 * ratio) as usize).max(a + 1)).min(k_max + 1);
                let c: usize = d.counts.range(a..b).map(|(_, &c)| c).sum();
                if c > 0 {
                    bins.push((a, b, log(c as f64 / (n * (b - a) as f64))));
                }
                a = b;
            }
            if bins.len() < 3 {
                return Err(MetricsError::InsufficientSupport { k_min, found: bins.len() });
            }
            let geometric = |a: usize, b: usize| 0.5 * (log(a as f64) + log((b - 1) as f64));
            let pts: Vec<(f64, f64)> = bins.iter().map(|&(a, b, y)| (geometric(a, b), y)).collect();
            let mut fit = finish_fit(&pts, k_min)?;
            for _ in 0..100 {
                let g = fit.gamma;
                let pts: Vec<(f64, f64)> = bins.iter().map(|&(a, b, y)| (bin_center(a, b, g), y)).collect();
                let next = finish_fit(&pts, k_min)?;
                let done = (next.gamma - g).abs() < 1e-12;
                fit = next;
                if done {
                    break;
                }
            }
            Ok(fit)
        }
    }
}

/// `ln x` where `x^-γ` is the mean of `k^-γ` over integer `k` in `[a, b)`.
fn bin_center(a: usize, b: usize, gamma: f64) -> f64 {
    if b - a == 1 {
        return log(a as f64);
    }
    let mean = (a..b).map(|k| libm::pow(k as f64, -gamma)).sum::<f64>() / (b - a) as f64;
    -log(mean) / gamma
}

fn finish_fit(points: &[(f64, f64)], k_min: usize) -> Result<PowerLawFit, MetricsError> {
    let m = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / m;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / m;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return Err(MetricsError::NonPositiveExponent { slope });
    }
    let r2 = if syy > 0.0 { (sxy * sxy) / (sxx * syy) } else { 1.0 };
    Ok(PowerLawFit { gamma: -slope, k_min, r2, points: points.len() })
}

/// Number of edges among the neighbors of `i`, for every node.
pub fn triangles_per_node(g: &AnnotatedGraph) -> Vec<usize> {
    let n = g.n();
    let mut mark = alloc::vec![false; n];
    let mut tri = alloc::vec![0usize; n];
    for i in 0..n {
        let nb = g.neighbors(i);
        if nb.len() < 2 {
            continue;
        }
        for &j in nb {
            mark[j] = true;
        }
        let mut twice = 0usize;
        for &j in nb {
            twice += g.neighbors(j).iter().filter(|&&k| mark[k]).count();
        }
        for &j in nb {
            mark[j] = false;
        }
        tri[i] = twice / 2;
    }
    tri
}

fn clustering_from(links: usize, k: usize) -> f64 {
    if k < 2 {
        0.0
    } else {
        (2 * links) as f64 / (k * (k - 1)) as f64
    }
}

/// Fraction of neighbor pairs of `i` that are themselves linked; 0 when
/// `degree(i) < 2`.
pub fn local_clustering(g: &AnnotatedGraph, i: NodeId) -> Result<f64, MetricsError> {
    if i >= g.n() {
        return Err(MetricsError::NodeOutOfRange { id: i, n: g.n() });
    }
    let nb = g.neighbors(i);
    let mut twice = 0usize;
    for &j in nb {
        twice += sorted_intersection_len(nb, g.neighbors(j));
    }
    Ok(clustering_from(twice / 2, nb.len()))
}

fn sorted_intersection_len(a: &[NodeId], b: &[NodeId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Mean of [`local_clustering`] over all nodes (low-degree nodes count as 0).
pub fn average_clustering(g: &AnnotatedGraph) -> Result<f64, MetricsError> {
    if g.is_empty() {
        return Err(MetricsError::TooFewNodes { n: 0, needed: 1 });
    }
    let tri = triangles_per_node(g);
    let sum: f64 = (0..g.n()).map(|i| clustering_from(tri[i], g.neighbors(i).len())).sum();
    Ok(sum / g.n() as f64)
}

/// 2×2 matrix of edge-endpoint label pairings. Index 0 is the
/// unvaccinated / anti group, 1 the vaccinated / pro group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrix {
    pub e: [[f64; 2]; 2],
}

impl MixingMatrix {
    pub fn total(&self) -> f64 {
        self.e[0][0] + self.e[0][1] + self.e[1][0] + self.e[1][1]
    }

    pub fn trace(&self) -> f64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Sum of all entries of `e · e`.
    pub fn squared_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    s += self.e[i][k] * self.e[k][j];
                }
            }
        }
        s
    }
}

/// Mixing matrix for a binary node attribute (`true` = group 1).
///
/// Each edge contributes once in each orientation, so the matrix is symmetric
/// and sums to 1.
pub fn mixing_matrix(g: &AnnotatedGraph, labels: &[bool]) -> Result<MixingMatrix, MetricsError> {
    if labels.len() != g.n() {
        return Err(MetricsError::LabelCountMismatch { expected: g.n(), got: labels.len() });
    }
    if g.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let mut counts = [[0usize; 2]; 2];
    for (a, b) in g.edges() {
        let (la, lb) = (labels[a] as usize, labels[b] as usize);
        counts[la][lb] += 1;
        counts[lb][la] += 1;
    }
    let denom = 2.0 * g.edge_count() as f64;
    let mut e = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            e[i][j] = counts[i][j] as f64 / denom;
        }
    }
    Ok(MixingMatrix { e })
}

/// Pro nodes map to group 1.
pub fn opinion_labels(g: &AnnotatedGraph) -> Vec<bool> {
    g.opinions().iter().map(|&o| o == Opinion::Pro).collect()
}

pub fn opinion_mixing_matrix(g: &AnnotatedGraph) -> Result<MixingMatrix, MetricsError> {
    mixing_matrix(g, &opinion_labels(g))
}

/// Newman's attribute assortativity `(Tr e - ||e²||) / (1 - ||e²||)`.
pub fn assortativity(m: &MixingMatrix) -> Result<f64, MetricsError> {
    let sq = m.squared_norm();
    let denom = 1.0 - sq;
    if denom.abs() < 1e-15 {
        return Err(MetricsError::SingleGroup);
    }
    Ok((m.trace() - sq) / denom)
}

/// `2 e[1][0] / (e[1][1] + e[0][0])`.
pub fn cross_connection_ratio(m: &MixingMatrix) -> Result<f64, MetricsError> {
    let within = m.trace();
    if within <= 0.0 {
        return Err(MetricsError::ZeroWithinGroup);
    }
    Ok(2.0 * m.e[1][0] / within)
}

/// All headline metrics of a graph or opinion subgraph.
///
/// Metrics that are undefined for the input (a single-group subgraph has no
/// assortativity, a tiny graph no power-law fit) are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub anti_fraction: f64,
    pub density: f64,
    pub mean_degree: f64,
    pub avg_clustering: f64,
    pub power_law: Option<PowerLawFit>,
    pub assortativity: Option<f64>,
    pub cross_connection: Option<f64>,
}

pub fn metrics_report(g: &AnnotatedGraph, k_min: usize) -> Result<MetricsReport, MetricsError> {
    let density = density(g)?;
    let mixing = opinion_mixing_matrix(g).ok();
    Ok(MetricsReport {
        nodes: g.n(),
        edges: g.edge_count(),
        anti_fraction: g.count_opinion(Opinion::Anti) as f64 / g.n() as f64,
        density,
        mean_degree: mean_degree(g)?,
        avg_clustering: average_clustering(g)?,
        power_law: fit_power_law(&degree_distribution(g), k_min).ok(),
        assortativity: mixing.as_ref().and_then(|m| assortativity(m).ok()),
        cross_connection: mixing.as_ref().and_then(|m| cross_connection_ratio(m).ok()),
    })
}
