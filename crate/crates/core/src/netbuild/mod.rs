//! Construction of the author networks: the co-reviewer network (CRN),
//! the collaboration network (CON), the co-citation network (CCN),
//! category-induced subgraphs, and the bipartite reviewer/editor
//! assignment graphs.
//!
//! Node sets always cover every author of the corpus, so isolated
//! authors are first-class. Edge multiplicities record incidence counts;
//! the metric suite runs on the unweighted simple view.

mod export;

pub use export::{write_dot, write_edges_csv, write_nodes_csv};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::categorizer::{AuthorCategory, CategoryMap};
use crate::corpus::Corpus;
use crate::ids::{AuthorId, PaperId};
use crate::textfeat::Role;

/// Which network a graph instance represents; drives export naming and
/// the directed flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetworkKind {
    Crn,
    Con,
    Ccn,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Crn => "crn",
            NetworkKind::Con => "con",
            NetworkKind::Ccn => "ccn",
        }
    }

    pub const ALL: [NetworkKind; 3] = [NetworkKind::Crn, NetworkKind::Con, NetworkKind::Ccn];
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "crn" => Ok(NetworkKind::Crn),
            "con" => Ok(NetworkKind::Con),
            "ccn" => Ok(NetworkKind::Ccn),
            other => Err(format!("unknown network `{other}`")),
        }
    }
}

/// A labeled author graph. Undirected edges are stored once under
/// canonical (low, high) index order; adjacency lists are sorted and
/// deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorGraph {
    directed: bool,
    nodes: Vec<AuthorId>,
    index: BTreeMap<AuthorId, usize>,
    labels: Vec<Option<AuthorCategory>>,
    /// Edge -> multiplicity. Keys are (src, dst) for directed graphs and
    /// canonical (min, max) otherwise. No self-loops.
    edges: BTreeMap<(usize, usize), u32>,
    adj_out: Vec<Vec<usize>>,
    adj_in: Vec<Vec<usize>>,
}

impl AuthorGraph {
    fn new(directed: bool, mut nodes: Vec<AuthorId>, labels: &CategoryMap) -> Self {
        nodes.sort();
        nodes.dedup();
        let index: BTreeMap<AuthorId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let node_labels = nodes.iter().map(|a| labels.get(a)).collect();
        let n = nodes.len();
        Self {
            directed,
            nodes,
            index,
            labels: node_labels,
            edges: BTreeMap::new(),
            adj_out: vec![Vec::new(); n],
            adj_in: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, a: usize, b: usize, weight: u32) {
        if a == b {
            return; // no self-loops in any of the three networks
        }
        let key = if self.directed || a < b { (a, b) } else { (b, a) };
        *self.edges.entry(key).or_insert(0) += weight;
    }

    fn finalize(mut self) -> Self {
        for &(a, b) in self.edges.keys() {
            self.adj_out[a].push(b);
            self.adj_in[b].push(a);
            if !self.directed {
                self.adj_out[b].push(a);
                self.adj_in[a].push(b);
            }
        }
        for list in self.adj_out.iter_mut().chain(self.adj_in.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        self
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Distinct edges (multiplicities ignored).
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[AuthorId] {
        &self.nodes
    }

    pub fn node_index(&self, author: &AuthorId) -> Option<usize> {
        self.index.get(author).copied()
    }

    pub fn author(&self, idx: usize) -> &AuthorId {
        &self.nodes[idx]
    }

    pub fn label(&self, idx: usize) -> Option<AuthorCategory> {
        self.labels[idx]
    }

    /// Edges in canonical order with multiplicities.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &w)| (a, b, w))
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if self.directed || a < b { (a, b) } else { (b, a) };
        self.edges.contains_key(&key)
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        let key = if self.directed || a < b { (a, b) } else { (b, a) };
        self.edges.get(&key).copied().unwrap_or(0)
    }

    /// Out-neighbors (all neighbors for undirected graphs), sorted.
    pub fn neighbors_out(&self, idx: usize) -> &[usize] {
        &self.adj_out[idx]
    }

    /// In-neighbors (all neighbors for undirected graphs), sorted.
    pub fn neighbors_in(&self, idx: usize) -> &[usize] {
        &self.adj_in[idx]
    }

    /// Simple-graph degree: neighbor count for undirected graphs,
    /// in-degree + out-degree for directed ones.
    pub fn degree(&self, idx: usize) -> usize {
        if self.directed {
            self.adj_out[idx].len() + self.adj_in[idx].len()
        } else {
            self.adj_out[idx].len()
        }
    }

    /// The subgraph on the nodes labeled `cat`, keeping edges with both
    /// endpoints inside and their multiplicities.
    pub fn induced_subgraph(&self, cat: AuthorCategory) -> AuthorGraph {
        let keep: Vec<usize> = (0..self.node_count())
            .filter(|&i| self.labels[i] == Some(cat))
            .collect();
        let old_to_new: BTreeMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let nodes: Vec<AuthorId> = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let n = nodes.len();
        let mut g = AuthorGraph {
            directed: self.directed,
            index: nodes
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), i))
                .collect(),
            labels: vec![Some(cat); n],
            nodes,
            edges: BTreeMap::new(),
            adj_out: vec![Vec::new(); n],
            adj_in: vec![Vec::new(); n],
        };
        for (&(a, b), &w) in &self.edges {
            if let (Some(&na), Some(&nb)) = (old_to_new.get(&a), old_to_new.get(&b)) {
                g.edges.insert((na, nb), w);
            }
        }
        g.finalize()
    }

    /// An undirected copy: every directed edge becomes an undirected one
    /// (multiplicities of reciprocal pairs merge).
    pub fn symmetrized(&self) -> AuthorGraph {
        if !self.directed {
            return self.clone();
        }
        let mut g = AuthorGraph {
            directed: false,
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            labels: self.labels.clone(),
            edges: BTreeMap::new(),
            adj_out: vec![Vec::new(); self.node_count()],
            adj_in: vec![Vec::new(); self.node_count()],
        };
        for (&(a, b), &w) in &self.edges {
            g.add_edge(a, b, w);
        }
        g.finalize()
    }
}

/// CRN edge policy for a reviewer shared through one single paper
/// (i.e. co-authors of a reviewed paper).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CrnMode {
    /// A shared paper counts: the reviewer reviewed a paper of each.
    #[default]
    AllowSharedPaper,
    /// The reviewer must have reviewed two distinct papers.
    RequireDistinctPapers,
}

/// Co-reviewer network: an undirected edge between two authors whenever
/// some reviewer reviewed at least one paper of each. Reviewer ids are
/// collected across all rounds and both decisions. Multiplicity counts
/// the distinct connecting reviewers.
pub fn build_crn(corpus: &Corpus, labels: &CategoryMap, mode: CrnMode) -> AuthorGraph {
    let mut g = AuthorGraph::new(false, corpus.authors().cloned().collect(), labels);

    // reviewer -> (author -> papers of that author the reviewer saw)
    let mut seen: BTreeMap<String, BTreeMap<usize, BTreeSet<PaperId>>> = BTreeMap::new();
    for paper in corpus.papers() {
        let mut reviewers: BTreeSet<&str> = BTreeSet::new();
        for round in &paper.review_rounds {
            reviewers.extend(round.reviewer_ids.iter().map(|r| r.as_str()));
        }
        for reviewer in reviewers {
            let per_author = seen.entry(reviewer.to_string()).or_default();
            for author in &paper.author_ids {
                let idx = g.index[author];
                per_author
                    .entry(idx)
                    .or_default()
                    .insert(paper.paper_id.clone());
            }
        }
    }

    for per_author in seen.values() {
        let authors: Vec<(&usize, &BTreeSet<PaperId>)> = per_author.iter().collect();
        for (i, (&a, papers_a)) in authors.iter().enumerate() {
            for (&b, papers_b) in authors.iter().skip(i + 1).map(|&(b, p)| (b, p)) {
                let connected = match mode {
                    CrnMode::AllowSharedPaper => true,
                    // Some pair of distinct papers must exist across the
                    // two sets.
                    CrnMode::RequireDistinctPapers => {
                        papers_a.union(papers_b).take(2).count() >= 2
                    }
                };
                if connected {
                    g.add_edge(a, *b, 1);
                }
            }
        }
    }
    g.finalize()
}

/// Collaboration network: an undirected edge for each co-authored paper;
/// multiplicity counts shared papers.
pub fn build_con(corpus: &Corpus, labels: &CategoryMap) -> AuthorGraph {
    let mut g = AuthorGraph::new(false, corpus.authors().cloned().collect(), labels);
    for paper in corpus.papers() {
        let idxs: Vec<usize> = paper.author_ids.iter().map(|a| g.index[a]).collect();
        for (i, &a) in idxs.iter().enumerate() {
            for &b in &idxs[i + 1..] {
                g.add_edge(a, b, 1);
            }
        }
    }
    g.finalize()
}

/// Co-citation network: a directed edge a -> b when a authored a paper
/// citing a paper authored by b. Author-level self-loops (self-citation)
/// are dropped; multiplicity counts citing (paper, cited-paper) pairs.
pub fn build_ccn(corpus: &Corpus, labels: &CategoryMap) -> AuthorGraph {
    let mut g = AuthorGraph::new(true, corpus.authors().cloned().collect(), labels);
    for paper in corpus.papers() {
        for cited_id in &paper.cited_paper_ids {
            let Some(cited) = corpus.paper(cited_id) else {
                continue; // unresolved target: contributes nothing
            };
            for citing_author in &paper.author_ids {
                for cited_author in &cited.author_ids {
                    g.add_edge(g.index[citing_author], g.index[cited_author], 1);
                }
            }
        }
    }
    g.finalize()
}

/// Directed bipartite graph from reviewers (or editors) to the authors
/// whose papers they handled.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteAssignmentGraph {
    pub role: Role,
    /// Left side: reviewer or editor ids, sorted.
    pub actors: Vec<String>,
    /// Right side: authors with at least one handled paper, sorted.
    pub authors: Vec<AuthorId>,
    pub author_labels: Vec<Option<AuthorCategory>>,
    /// Deduplicated (actor index, author index) pairs.
    pub edges: BTreeSet<(usize, usize)>,
}

/// Builds the assignment graph, optionally restricted to the `top_k`
/// authors by total citation count (ties broken by id). A `top_k`
/// exceeding the author count keeps everyone. Authors with no handled
/// papers are excluded rather than kept isolated.
pub fn build_assignment_graph(
    corpus: &Corpus,
    labels: &CategoryMap,
    role: Role,
    top_k: Option<usize>,
) -> BipartiteAssignmentGraph {
    let mut ranked: Vec<(&AuthorId, u64)> = corpus
        .authors()
        .map(|a| {
            let total = corpus
                .author_papers(a)
                .map(|papers| papers.iter().map(|p| p.citation_count).sum())
                .unwrap_or(0);
            (a, total)
        })
        .collect();
    ranked.sort_by(|(a, ca), (b, cb)| cb.cmp(ca).then_with(|| a.cmp(b)));
    let kept: BTreeSet<&AuthorId> = match top_k {
        Some(k) => ranked.iter().take(k).map(|(a, _)| *a).collect(),
        None => ranked.iter().map(|(a, _)| *a).collect(),
    };

    let mut pairs: BTreeSet<(String, AuthorId)> = BTreeSet::new();
    for paper in corpus.papers() {
        for round in &paper.review_rounds {
            let actor_ids: Vec<String> = match role {
                Role::Reviewer => round.reviewer_ids.iter().map(|r| r.to_string()).collect(),
                Role::Editor => vec![round.editor_id.to_string()],
            };
            for author in &paper.author_ids {
                if !kept.contains(author) {
                    continue;
                }
                for actor in &actor_ids {
                    pairs.insert((actor.clone(), author.clone()));
                }
            }
        }
    }

    let actors: Vec<String> = pairs.iter().map(|(a, _)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let authors: Vec<AuthorId> = pairs.iter().map(|(_, a)| a.clone()).collect::<BTreeSet<_>>().into_iter().collect();
    let actor_index: BTreeMap<&String, usize> =
        actors.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let author_index: BTreeMap<&AuthorId, usize> =
        authors.iter().enumerate().map(|(i, a)| (a, i)).collect();
    let edges = pairs
        .iter()
        .map(|(actor, author)| (actor_index[actor], author_index[author]))
        .collect();
    let author_labels = authors.iter().map(|a| labels.get(a)).collect();
    BipartiteAssignmentGraph {
        role,
        actors,
        authors,
        author_labels,
        edges,
    }
}
