//! Group Steiner trees over the quasi graph: the exact top-k grow/merge
//! solver, an exhaustive oracle for small graphs, and two graph baselines.

mod baselines;
mod export;
mod oracle;
mod solver;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, QuasiGraph};
use crate::scalar::{sum, Scalar};

pub use baselines::{bfs_baseline, shortest_paths_baseline, BaselineCandidate};
pub use export::{EdgeView, NodeView, TreeExport};
pub use oracle::{brute_force_gst, ORACLE_NODE_LIMIT};
pub use solver::solve_gst_k;

/// Largest number of terminal groups the solver accepts (group sets are bit
/// masks).
pub const MAX_GROUPS: usize = 20;

/// One set of cornerstone nodes per matched question term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerminalGroups {
    groups: Vec<Vec<NodeId>>,
    labels: Vec<String>,
}

impl TerminalGroups {
    /// Groups are stored sorted and deduplicated; labels default to the
    /// group index.
    pub fn new(groups: Vec<Vec<NodeId>>) -> Result<Self> {
        let labels = (0..groups.len()).map(|i| format!("group {i}")).collect();
        Self::with_labels(groups, labels)
    }

    pub fn with_labels(groups: Vec<Vec<NodeId>>, labels: Vec<String>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::NoCornerstones);
        }
        if groups.len() > MAX_GROUPS {
            return Err(Error::InvalidInput(format!(
                "{} terminal groups; at most {MAX_GROUPS} are supported",
                groups.len()
            )));
        }
        if labels.len() != groups.len() {
            return Err(Error::InvalidInput("one label per group is required".into()));
        }
        let groups: Vec<Vec<NodeId>> = groups
            .into_iter()
            .map(|g| g.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        if let Some(i) = groups.iter().position(Vec::is_empty) {
            return Err(Error::InvalidInput(format!("terminal group {i} is empty")));
        }
        Ok(TerminalGroups { groups, labels })
    }

    pub fn groups(&self) -> &[Vec<NodeId>] {
        &self.groups
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn full_mask(&self) -> u32 {
        if self.groups.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.groups.len()) - 1
        }
    }

    /// Groups containing `n`, as a bit mask.
    pub fn mask_of(&self, n: NodeId) -> u32 {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.binary_search(&n).is_ok())
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn is_terminal(&self, n: NodeId) -> bool {
        self.mask_of(n) != 0
    }

    /// All terminal nodes, sorted.
    pub fn terminals(&self) -> Vec<NodeId> {
        let set: BTreeSet<NodeId> = self.groups.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub(crate) fn check_nodes<S: Scalar>(&self, g: &QuasiGraph<S>) -> Result<()> {
        match self.groups.iter().flatten().find(|n| n.0 >= g.node_count()) {
            Some(n) => Err(Error::InvalidInput(format!("terminal {} is not a graph node", n.0))),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub k: usize,
    /// Fails with `ResourceExhausted` once the queue holds this many entries.
    pub max_queue: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: 50,
            max_queue: Some(10_000_000),
        }
    }
}

impl SolverConfig {
    pub fn with_k(k: usize) -> Self {
        SolverConfig {
            k,
            ..Default::default()
        }
    }
}

/// A tree of the quasi graph covering every terminal group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Deserialize<'de>"))]
pub struct SteinerTree<S = f64> {
    /// Sorted.
    pub nodes: Vec<NodeId>,
    /// Sorted.
    pub edges: Vec<EdgeId>,
    /// Sum of edge costs in edge-id order.
    pub cost: S,
    /// Indices of the groups with a node in the tree.
    pub covered: Vec<usize>,
    /// Documents contributing at least one edge.
    pub docs: Vec<String>,
    /// Neighbours of the tree's terminals added for candidate extraction,
    /// with the cheapest connecting edge cost. The tree cost ignores them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hops: Vec<(NodeId, S)>,
}

impl<S: Scalar> SteinerTree<S> {
    pub(crate) fn from_parts(
        g: &QuasiGraph<S>,
        groups: &TerminalGroups,
        mut nodes: Vec<NodeId>,
        mut edges: Vec<EdgeId>,
    ) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        edges.sort_unstable();
        edges.dedup();
        let mask = nodes.iter().fold(0, |m, &n| m | groups.mask_of(n));
        SteinerTree {
            cost: canonical_cost(g, &edges),
            covered: (0..groups.len()).filter(|i| mask & (1 << i) != 0).collect(),
            docs: g.documents_of(&edges),
            nodes,
            edges,
            hops: Vec::new(),
        }
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.nodes.binary_search(&n).is_ok()
    }

    /// Connected, acyclic, consistent with its edges, and touching every
    /// group.
    pub fn validate(&self, g: &QuasiGraph<S>, groups: &TerminalGroups) -> Result<()> {
        let bad = |m: String| Err(Error::InvariantViolation(m));
        if self.nodes.is_empty() {
            return bad("tree has no nodes".into());
        }
        if self.edges.len() + 1 != self.nodes.len() {
            return bad(format!(
                "{} edges on {} nodes is not a tree",
                self.edges.len(),
                self.nodes.len()
            ));
        }
        let node_set: BTreeSet<NodeId> = self.nodes.iter().copied().collect();
        if node_set.len() != self.nodes.len() {
            return bad("duplicate nodes".into());
        }
        let mut dsu = Dsu::new(g.node_count());
        for &e in &self.edges {
            let edge = g.edge(e);
            if !node_set.contains(&edge.a) || !node_set.contains(&edge.b) {
                return bad(format!("edge {} leaves the node set", e.0));
            }
            if !dsu.union(edge.a.0, edge.b.0) {
                return bad(format!("edge {} closes a cycle", e.0));
            }
        }
        for (i, grp) in groups.groups().iter().enumerate() {
            if !grp.iter().any(|n| node_set.contains(n)) {
                return bad(format!("group {i} is not covered"));
            }
        }
        let expected = canonical_cost(g, &self.edges);
        if expected.cmp_total(&self.cost) != std::cmp::Ordering::Equal {
            return bad(format!("stored cost {:?} differs from {:?}", self.cost, expected));
        }
        Ok(())
    }
}

/// Sum of edge costs in ascending edge-id order, so that the same edge set
/// always yields the same floating point total.
pub fn canonical_cost<S: Scalar>(g: &QuasiGraph<S>, sorted_edges: &[EdgeId]) -> S {
    sum(sorted_edges.iter().map(|&e| g.edge(e).cost))
}

/// Adds every neighbour of a tree terminal that is not already in the tree,
/// keyed by the cheapest connecting edge. Tree costs stay unchanged.
pub fn augment_one_hop<S: Scalar>(
    trees: &mut [SteinerTree<S>],
    g: &QuasiGraph<S>,
    groups: &TerminalGroups,
) {
    for tree in trees.iter_mut() {
        let mut best: std::collections::BTreeMap<NodeId, S> = std::collections::BTreeMap::new();
        for &t in tree.nodes.iter().filter(|&&n| groups.is_terminal(n)) {
            for &(nb, e) in g.neighbors(t) {
                if tree.contains(nb) {
                    continue;
                }
                let c = g.edge(e).cost;
                best.entry(nb)
                    .and_modify(|old| *old = old.min_of(c))
                    .or_insert(c);
            }
        }
        tree.hops = best.into_iter().collect();
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}
