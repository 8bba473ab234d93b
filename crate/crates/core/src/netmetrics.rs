//! Graph metric suite over [`AuthorGraph`]: four centralities, k-shell
//! decomposition, density, degree assortativity and reciprocity.
//!
//! Per-source computations (betweenness, closeness) parallelize over
//! sources and merge in source order, so results are bit-identical for
//! any worker count. Directed graphs use directed shortest paths; the
//! undirected variants apply to CRN/CON.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::categorizer::{AuthorCategory, CategoryMap};
use crate::ids::AuthorId;
use crate::netbuild::AuthorGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityKind {
    Degree,
    Betweenness,
    Closeness,
    Pagerank,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 4] = [
        CentralityKind::Degree,
        CentralityKind::Betweenness,
        CentralityKind::Closeness,
        CentralityKind::Pagerank,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::Betweenness => "betweenness",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Pagerank => "pagerank",
        }
    }
}

impl std::fmt::Display for CentralityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for CentralityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" => Ok(CentralityKind::Degree),
            "betweenness" => Ok(CentralityKind::Betweenness),
            "closeness" => Ok(CentralityKind::Closeness),
            "pagerank" => Ok(CentralityKind::Pagerank),
            other => Err(format!("unknown centrality `{other}`")),
        }
    }
}

/// Per-node scores plus a descriptor of the normalization applied.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub normalization: String,
    pub scores: BTreeMap<AuthorId, f64>,
}

impl CentralityScores {
    pub fn get(&self, author: &AuthorId) -> Option<f64> {
        self.scores.get(author).copied()
    }

    /// Mean score over the members of one category.
    pub fn category_mean(&self, labels: &CategoryMap, cat: AuthorCategory) -> Option<f64> {
        let members: Vec<f64> = self
            .scores
            .iter()
            .filter(|(a, _)| labels.get(a) == Some(cat))
            .map(|(_, &s)| s)
            .collect();
        if members.is_empty() {
            None
        } else {
            Some(members.iter().sum::<f64>() / members.len() as f64)
        }
    }
}

/// Core number per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellDecomposition {
    pub core: BTreeMap<AuthorId, u32>,
    pub max_k: u32,
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("graph has {got} nodes, need at least {needed}")]
    NotEnoughNodes { needed: usize, got: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("damping factor {0} outside (0, 1)")]
    InvalidDamping(f64),
    #[error("pagerank did not converge in {iterations} iterations (residual {residual:e})")]
    NonConvergence { residual: f64, iterations: usize },
    #[error("operation requires an undirected graph; symmetrize first")]
    DirectedNotSupported,
    #[error("operation requires a directed graph")]
    UndirectedRequired,
    #[error("graph has no edges")]
    NoEdges,
    #[error("degree assortativity is undefined: endpoint degrees have zero variance")]
    DegenerateDegrees,
    #[error("no edges within the requested scope")]
    NoEdgesInScope,
}

fn scores_map(graph: &AuthorGraph, values: Vec<f64>) -> BTreeMap<AuthorId, f64> {
    graph
        .nodes()
        .iter()
        .cloned()
        .zip(values)
        .collect()
}

/// Degree centrality `deg(v)/(n-1)`. Directed graphs use total degree
/// (in + out), so reciprocated pairs can push scores above 1.
pub fn degree_centrality(graph: &AuthorGraph) -> Result<CentralityScores, MetricsError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(MetricsError::NotEnoughNodes { needed: 2, got: n });
    }
    let denom = (n - 1) as f64;
    let values: Vec<f64> = (0..n).map(|v| graph.degree(v) as f64 / denom).collect();
    Ok(CentralityScores {
        kind: CentralityKind::Degree,
        normalization: if graph.directed() {
            "(in+out)/(n-1)".into()
        } else {
            "deg/(n-1)".into()
        },
        scores: scores_map(graph, values),
    })
}

/// One Brandes pass: dependency contributions of shortest paths from
/// `source` to all other nodes.
fn brandes_pass(graph: &AuthorGraph, source: usize) -> Vec<f64> {
    let n = graph.node_count();
    let mut stack = Vec::with_capacity(n);
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    sigma[source] = 1.0;
    dist[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in graph.neighbors_out(v) {
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                predecessors[w].push(v);
            }
        }
    }
    let mut delta = vec![0.0f64; n];
    let mut contribution = vec![0.0f64; n];
    while let Some(w) = stack.pop() {
        for &v in &predecessors[w] {
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        if w != source {
            contribution[w] = delta[w];
        }
    }
    contribution
}

/// Pair-normalized shortest-path betweenness (Brandes). Undirected
/// graphs count each pair once; graphs with fewer than 3 nodes score 0
/// everywhere.
pub fn betweenness_centrality(graph: &AuthorGraph) -> CentralityScores {
    let n = graph.node_count();
    let mut raw = vec![0.0f64; n];
    // Batched parallel accumulation in fixed source order keeps float
    // sums bit-identical for any worker count.
    const BATCH: usize = 64;
    let mut batch_start = 0;
    while batch_start < n {
        let end = (batch_start + BATCH).min(n);
        let passes: Vec<Vec<f64>> = (batch_start..end)
            .into_par_iter()
            .map(|s| brandes_pass(graph, s))
            .collect();
        for pass in passes {
            for (slot, v) in raw.iter_mut().zip(pass) {
                *slot += v;
            }
        }
        batch_start = end;
    }
    // Brandes accumulates ordered (s, t) pairs in both settings, so a
    // single divisor covers directed and undirected graphs.
    let scale = if n > 2 {
        1.0 / ((n - 1) as f64 * (n - 2) as f64)
    } else {
        0.0
    };
    let values: Vec<f64> = raw.into_iter().map(|v| v * scale).collect();
    CentralityScores {
        kind: CentralityKind::Betweenness,
        normalization: "pairs: 1/((n-1)(n-2))".into(),
        scores: scores_map(graph, values),
    }
}

/// Wasserman-Faust component-scaled closeness:
/// `(r/(n-1)) * (r / sum of distances)` with `r` the number of nodes
/// reachable from `v`. Unreachable-everything nodes score 0. Directed
/// graphs use outgoing distances.
pub fn closeness_centrality(graph: &AuthorGraph) -> CentralityScores {
    let n = graph.node_count();
    let values: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|source| {
            let mut dist = vec![-1i64; n];
            dist[source] = 0;
            let mut queue = VecDeque::new();
            queue.push_back(source);
            let mut reached = 0usize;
            let mut total = 0i64;
            while let Some(v) = queue.pop_front() {
                for &w in graph.neighbors_out(v) {
                    if dist[w] < 0 {
                        dist[w] = dist[v] + 1;
                        reached += 1;
                        total += dist[w];
                        queue.push_back(w);
                    }
                }
            }
            if reached == 0 || n < 2 {
                0.0
            } else {
                let r = reached as f64;
                (r / (n - 1) as f64) * (r / total as f64)
            }
        })
        .collect();
    CentralityScores {
        kind: CentralityKind::Closeness,
        normalization: "wasserman-faust".into(),
        scores: scores_map(graph, values),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PagerankOptions {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PagerankOptions {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// Power-iteration PageRank. Dangling mass is redistributed uniformly;
/// undirected graphs are treated as bidirected. Scores sum to 1.
pub fn pagerank(
    graph: &AuthorGraph,
    options: &PagerankOptions,
) -> Result<CentralityScores, MetricsError> {
    if !(options.damping > 0.0 && options.damping < 1.0) {
        return Err(MetricsError::InvalidDamping(options.damping));
    }
    let n = graph.node_count();
    if n == 0 {
        return Err(MetricsError::EmptyGraph);
    }
    let nf = n as f64;
    let d = options.damping;
    let out_degree: Vec<usize> = (0..n).map(|v| graph.neighbors_out(v).len()).collect();

    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0f64; n];
    for iteration in 1..=options.max_iter {
        let dangling: f64 = (0..n)
            .filter(|&v| out_degree[v] == 0)
            .map(|v| rank[v])
            .sum();
        for slot in next.iter_mut() {
            *slot = (1.0 - d) / nf + d * dangling / nf;
        }
        for v in 0..n {
            if out_degree[v] > 0 {
                let share = d * rank[v] / out_degree[v] as f64;
                for &w in graph.neighbors_out(v) {
                    next[w] += share;
                }
            }
        }
        let residual: f64 = rank
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < options.tol {
            return Ok(CentralityScores {
                kind: CentralityKind::Pagerank,
                normalization: format!("L1=1, damping={}", d),
                scores: scores_map(graph, rank),
            });
        }
        if iteration == options.max_iter {
            return Err(MetricsError::NonConvergence {
                residual,
                iterations: iteration,
            });
        }
    }
    unreachable!("loop either converges or errors")
}

/// k-shell decomposition by iterative minimum-degree peeling. Undirected
/// graphs only; symmetrize directed input first.
pub fn kshell(graph: &AuthorGraph) -> Result<ShellDecomposition, MetricsError> {
    if graph.directed() {
        return Err(MetricsError::DirectedNotSupported);
    }
    let n = graph.node_count();
    let mut degree: Vec<usize> = (0..n).map(|v| graph.neighbors_out(v).len()).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_degree + 1];
    for (v, &deg) in degree.iter().enumerate() {
        buckets[deg].push(v);
    }
    let mut core = vec![0u32; n];
    let mut removed = vec![false; n];
    let mut current = 0usize;
    let mut max_k = 0u32;
    for _ in 0..n {
        // The peeling level never drops below the current minimum.
        while current <= max_degree && buckets[current].is_empty() {
            current += 1;
        }
        if current > max_degree {
            break;
        }
        let v = buckets[current].pop().unwrap();
        if removed[v] {
            continue;
        }
        if degree[v] > current {
            // Stale bucket entry; the node will be drawn from its live
            // bucket later.
            buckets[degree[v]].push(v);
            continue;
        }
        removed[v] = true;
        core[v] = current as u32;
        max_k = max_k.max(core[v]);
        for &w in graph.neighbors_out(v) {
            if !removed[w] && degree[w] > current {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
            }
        }
        if current > 0 {
            current -= 1; // neighbors may now sit in a lower bucket
        }
    }
    Ok(ShellDecomposition {
        core: graph.nodes().iter().cloned().zip(core.iter().map(|&k| k)).collect(),
        max_k,
    })
}

/// Edge density: `2m/(n(n-1))` undirected, `m/(n(n-1))` directed.
pub fn density(graph: &AuthorGraph) -> Result<f64, MetricsError> {
    let n = graph.node_count();
    if n < 2 {
        return Err(MetricsError::NotEnoughNodes { needed: 2, got: n });
    }
    let m = graph.edge_count() as f64;
    let pairs = (n * (n - 1)) as f64;
    Ok(if graph.directed() {
        m / pairs
    } else {
        2.0 * m / pairs
    })
}

/// Degree assortativity: the Pearson correlation of endpoint degrees
/// over edges. Undirected edges contribute both orientations; directed
/// edges contribute once with total degrees at both ends.
pub fn assortativity(graph: &AuthorGraph) -> Result<f64, MetricsError> {
    if graph.edge_count() == 0 {
        return Err(MetricsError::NoEdges);
    }
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for (a, b, _) in graph.edges() {
        let da = graph.degree(a) as f64;
        let db = graph.degree(b) as f64;
        xs.push(da);
        ys.push(db);
        if !graph.directed() {
            xs.push(db);
            ys.push(da);
        }
    }
    let m = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / m;
    let mean_y = ys.iter().sum::<f64>() / m;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        cov += (x - mean_x) * (y - mean_y);
        var_x += (x - mean_x) * (x - mean_x);
        var_y += (y - mean_y) * (y - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(MetricsError::DegenerateDegrees);
    }
    Ok(cov / (var_x.sqrt() * var_y.sqrt()))
}

/// Node-set scope for [`reciprocity`].
#[derive(Debug, Clone, Copy)]
pub enum ReciprocityScope<'a> {
    /// All edges of the graph.
    Whole,
    /// Edges with both endpoints in the set.
    Within(&'a BTreeSet<AuthorId>),
    /// Edges with one endpoint in each (disjoint) set.
    Between(&'a BTreeSet<AuthorId>, &'a BTreeSet<AuthorId>),
}

/// Fraction of in-scope directed edges whose reverse edge also exists.
pub fn reciprocity(graph: &AuthorGraph, scope: ReciprocityScope) -> Result<f64, MetricsError> {
    if !graph.directed() {
        return Err(MetricsError::UndirectedRequired);
    }
    let in_scope = |a: usize, b: usize| -> bool {
        match scope {
            ReciprocityScope::Whole => true,
            ReciprocityScope::Within(set) => {
                set.contains(graph.author(a)) && set.contains(graph.author(b))
            }
            ReciprocityScope::Between(sa, sb) => {
                (sa.contains(graph.author(a)) && sb.contains(graph.author(b)))
                    || (sb.contains(graph.author(a)) && sa.contains(graph.author(b)))
            }
        }
    };
    let mut total = 0usize;
    let mut reciprocated = 0usize;
    for (a, b, _) in graph.edges() {
        if !in_scope(a, b) {
            continue;
        }
        total += 1;
        if graph.has_edge(b, a) {
            reciprocated += 1;
        }
    }
    if total == 0 {
        return Err(MetricsError::NoEdgesInScope);
    }
    Ok(reciprocated as f64 / total as f64)
}

/// Per-node reciprocity: the fraction of a node's outgoing edges that
/// are reciprocated; 0 for nodes without outgoing edges.
pub fn node_reciprocity(graph: &AuthorGraph, idx: usize) -> f64 {
    let out = graph.neighbors_out(idx);
    if out.is_empty() {
        return 0.0;
    }
    let reciprocated = out.iter().filter(|&&w| graph.has_edge(w, idx)).count();
    reciprocated as f64 / out.len() as f64
}

/// One row of the shell-occupancy report: author count and per-category
/// percentage shares for a shell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellOccupancy {
    pub shell: u32,
    pub authors: usize,
    /// Percent of the shell's authors in High/Mid/Low, indexed by
    /// `AuthorCategory::index`.
    pub share_pct: [f64; 3],
}

/// Occupancy of four representative shells: the innermost, two interior
/// shells at roughly one- and two-thirds through the realized shell
/// list, and the outermost realized shell. Named shells of any specific
/// corpus are corpus-dependent; this selection generalizes.
pub fn shell_occupancy_report(
    decomposition: &ShellDecomposition,
    labels: &CategoryMap,
) -> Vec<ShellOccupancy> {
    let realized: BTreeSet<u32> = decomposition.core.values().copied().collect();
    if realized.is_empty() {
        return Vec::new();
    }
    let ordered: Vec<u32> = realized.into_iter().collect();
    let pick = |frac: f64| -> u32 {
        let idx = ((ordered.len() - 1) as f64 * frac).round() as usize;
        ordered[idx]
    };
    let mut selected: Vec<u32> = vec![pick(1.0), pick(2.0 / 3.0), pick(1.0 / 3.0), ordered[0]];
    selected.sort_unstable_by(|a, b| b.cmp(a));
    selected.dedup();

    selected
        .into_iter()
        .map(|shell| {
            let members: Vec<&AuthorId> = decomposition
                .core
                .iter()
                .filter(|(_, &k)| k == shell)
                .map(|(a, _)| a)
                .collect();
            let mut counts = [0usize; 3];
            for author in &members {
                if let Some(cat) = labels.get(author) {
                    counts[cat.index()] += 1;
                }
            }
            let total = members.len();
            let share_pct = if total == 0 {
                [0.0; 3]
            } else {
                counts.map(|c| 100.0 * c as f64 / total as f64)
            };
            ShellOccupancy {
                shell,
                authors: total,
                share_pct,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests;
