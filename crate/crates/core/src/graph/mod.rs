//! The quasi knowledge graph: entity, relation and type nodes joined by triple,
//! type and alignment edges. Every edge carries a score in `[0, 1]` and the
//! cost `1 - score` the tree solver minimizes.

mod io;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::{Provenance, Triple, TypeAssertion};
use crate::scalar::{Real, Scalar};
use crate::similarity::{cosine, SimilarityModel};
use crate::text::{normalize, tokens};

pub use io::{read_graph_json, write_graph_json, DotStyle, GraphFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Entity,
    Relation,
    Type,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    TripleSP,
    TriplePO,
    TypeEdge,
    EntityAlign,
    RelationAlign,
}

impl EdgeKind {
    pub fn is_alignment(self) -> bool {
        matches!(self, EdgeKind::EntityAlign | EdgeKind::RelationAlign)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiNode {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    /// Similarity to the question term that made this node a cornerstone.
    pub weight: f64,
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiEdge<S = f64> {
    pub id: EdgeId,
    pub a: NodeId,
    pub b: NodeId,
    pub kind: EdgeKind,
    pub score: S,
    pub cost: S,
    pub provenance: Vec<Provenance>,
}

impl<S> QuasiEdge<S> {
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.a == n {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GraphConfig {
    pub alignment_threshold: f64,
}

impl Default for GraphConfig {
    fn default() -> Self {
        GraphConfig {
            alignment_threshold: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AblationFlags {
    pub drop_types: bool,
    pub drop_entity_align: bool,
    pub drop_relation_align: bool,
    pub degenerate_edge_weights: bool,
}

/// Undirected weighted multigraph; node and edge ids are dense indices.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiGraph<S = f64> {
    nodes: Vec<QuasiNode>,
    edges: Vec<QuasiEdge<S>>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    index: HashMap<(NodeKind, String), NodeId>,
    /// Thresholds the graph was built with.
    pub config: GraphConfig,
}

impl<S: Scalar> Default for QuasiGraph<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> QuasiGraph<S> {
    pub fn new() -> Self {
        QuasiGraph {
            nodes: Vec::new(),
            edges: Vec::new(),
            adjacency: Vec::new(),
            index: HashMap::new(),
            config: GraphConfig::default(),
        }
    }

    pub fn nodes(&self) -> &[QuasiNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[QuasiEdge<S>] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> &QuasiNode {
        &self.nodes[id.0]
    }

    pub fn edge(&self, id: EdgeId) -> &QuasiEdge<S> {
        &self.edges[id.0]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_nodes(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn count_edges(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn neighbors(&self, id: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[id.0]
    }

    /// Entity or type node with this normalized label. Relation nodes are
    /// never shared, so they cannot be looked up by label.
    pub fn find(&self, kind: NodeKind, label: &str) -> Option<NodeId> {
        self.index.get(&(kind, normalize(label))).copied()
    }

    pub fn find_all(&self, kind: NodeKind, label: &str) -> Vec<NodeId> {
        let key = normalize(label);
        self.nodes
            .iter()
            .filter(|n| n.kind == kind && normalize(&n.label) == key)
            .map(|n| n.id)
            .collect()
    }

    /// Creates a node. Entity and type nodes are shared per normalized label.
    pub fn add_node(&mut self, label: &str, kind: NodeKind) -> Result<NodeId> {
        let key = normalize(label);
        if key.is_empty() {
            return Err(Error::InvalidInput(format!("empty {kind:?} label {label:?}")));
        }
        if kind != NodeKind::Relation {
            if let Some(&id) = self.index.get(&(kind, key.clone())) {
                return Ok(id);
            }
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(QuasiNode {
            id,
            label: label.trim().to_string(),
            kind,
            weight: 0.0,
            provenance: Vec::new(),
        });
        self.adjacency.push(Vec::new());
        if kind != NodeKind::Relation {
            self.index.insert((kind, key), id);
        }
        Ok(id)
    }

    /// Adds an edge with `cost = 1 - score`.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId, kind: EdgeKind, score: S) -> Result<EdgeId> {
        if !score.in_unit_interval() {
            return Err(Error::InvariantViolation(format!(
                "edge score {score:?} outside [0, 1]"
            )));
        }
        self.add_edge_with_cost(a, b, kind, score, S::one() - score)
    }

    pub(crate) fn add_edge_with_cost(
        &mut self,
        a: NodeId,
        b: NodeId,
        kind: EdgeKind,
        score: S,
        cost: S,
    ) -> Result<EdgeId> {
        if a == b {
            return Err(Error::InvariantViolation(format!("self-loop on node {}", a.0)));
        }
        if a.0 >= self.nodes.len() || b.0 >= self.nodes.len() {
            return Err(Error::InvalidInput(format!("edge {}-{} names a missing node", a.0, b.0)));
        }
        let (ka, kb) = (self.nodes[a.0].kind, self.nodes[b.0].kind);
        let ok = match kind {
            EdgeKind::TripleSP | EdgeKind::TriplePO => {
                (ka == NodeKind::Relation) != (kb == NodeKind::Relation)
            }
            EdgeKind::TypeEdge => {
                matches!((ka, kb), (NodeKind::Entity, NodeKind::Type) | (NodeKind::Type, NodeKind::Entity))
            }
            EdgeKind::EntityAlign => ka == NodeKind::Entity && kb == NodeKind::Entity,
            EdgeKind::RelationAlign => ka == NodeKind::Relation && kb == NodeKind::Relation,
        };
        if !ok {
            return Err(Error::InvariantViolation(format!(
                "{kind:?} edge cannot join {ka:?} and {kb:?}"
            )));
        }
        let id = EdgeId(self.edges.len());
        self.edges.push(QuasiEdge {
            id,
            a,
            b,
            kind,
            score,
            cost,
            provenance: Vec::new(),
        });
        self.adjacency[a.0].push((b, id));
        self.adjacency[b.0].push((a, id));
        Ok(id)
    }

    pub fn set_node_weight(&mut self, id: NodeId, weight: f64) {
        self.nodes[id.0].weight = weight;
    }

    pub fn set_cost(&mut self, id: EdgeId, cost: S) {
        self.edges[id.0].cost = cost;
    }

    /// Recomputes `cost = 1 - score` for every edge.
    pub fn weights_to_costs(&mut self) -> Result<()> {
        if let Some(e) = self.edges.iter().find(|e| !e.score.in_unit_interval()) {
            return Err(Error::InvariantViolation(format!(
                "edge {} has score {:?} outside [0, 1]",
                e.id.0, e.score
            )));
        }
        for e in &mut self.edges {
            e.cost = S::one() - e.score;
        }
        Ok(())
    }

    /// A copy with the flagged parts removed; ids are renumbered densely in
    /// the original order. Degenerate weights give every edge score and cost
    /// one half.
    pub fn ablate(&self, flags: &AblationFlags) -> QuasiGraph<S> {
        let mut out = QuasiGraph::new();
        out.config = self.config;
        let mut remap: Vec<Option<NodeId>> = vec![None; self.nodes.len()];
        for n in &self.nodes {
            if flags.drop_types && n.kind == NodeKind::Type {
                continue;
            }
            let id = NodeId(out.nodes.len());
            remap[n.id.0] = Some(id);
            out.nodes.push(QuasiNode { id, ..n.clone() });
            out.adjacency.push(Vec::new());
            if n.kind != NodeKind::Relation {
                out.index.insert((n.kind, normalize(&n.label)), id);
            }
        }
        let half = S::one() / (S::one() + S::one());
        for e in &self.edges {
            let dropped = match e.kind {
                EdgeKind::TypeEdge => flags.drop_types,
                EdgeKind::EntityAlign => flags.drop_entity_align,
                EdgeKind::RelationAlign => flags.drop_relation_align,
                _ => false,
            };
            let (Some(a), Some(b)) = (remap[e.a.0], remap[e.b.0]) else {
                continue;
            };
            if dropped {
                continue;
            }
            let (score, cost) = if flags.degenerate_edge_weights {
                (half, half)
            } else {
                (e.score, e.cost)
            };
            let id = out
                .add_edge_with_cost(a, b, e.kind, score, cost)
                .expect("edge was valid in the source graph");
            out.edges[id.0].provenance = e.provenance.clone();
        }
        out
    }

    /// Sorted distinct document ids over the provenance of `edges`.
    pub fn documents_of(&self, edges: &[EdgeId]) -> Vec<String> {
        let docs: BTreeSet<&str> = edges
            .iter()
            .flat_map(|e| self.edges[e.0].provenance.iter().map(|p| p.doc_id.as_str()))
            .collect();
        docs.into_iter().map(str::to_string).collect()
    }

    /// Converts scores and costs to another scalar type.
    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(S) -> T) -> QuasiGraph<T> {
        QuasiGraph {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| QuasiEdge {
                    id: e.id,
                    a: e.a,
                    b: e.b,
                    kind: e.kind,
                    score: f(e.score),
                    cost: f(e.cost),
                    provenance: e.provenance.clone(),
                })
                .collect(),
            adjacency: self.adjacency.clone(),
            index: self.index.clone(),
            config: self.config,
        }
    }

    /// Checks the structural invariants: score and cost in `[0, 1]` and
    /// summing to one, endpoint kinds matching edge kinds, no self-loops.
    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            if !e.score.in_unit_interval() || !e.cost.in_unit_interval() {
                return Err(Error::InvariantViolation(format!("edge {} out of [0, 1]", e.id.0)));
            }
            let total = (e.score + e.cost).to_f64_lossy();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvariantViolation(format!(
                    "edge {} has score + cost = {total}",
                    e.id.0
                )));
            }
            if e.a == e.b {
                return Err(Error::InvariantViolation(format!("self-loop at edge {}", e.id.0)));
            }
        }
        Ok(())
    }
}

fn merge_provenance(into: &mut Vec<Provenance>, from: &[Provenance]) {
    for p in from {
        if !into.contains(p) {
            into.push(p.clone());
        }
    }
}

/// Builds the graph: for each triple its subject, a fresh relation node and
/// its object, then the type assertions, then alignment edges.
pub fn build_graph<S: Scalar, F: Real>(
    triples: &[Triple],
    types: &[TypeAssertion],
    sim: &SimilarityModel<F>,
    cfg: &GraphConfig,
) -> Result<QuasiGraph<S>> {
    if triples.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut g = QuasiGraph::<S>::new();
    g.config = *cfg;
    let score = |x: f64| S::from_f64_lossy(x.min(1.0));
    for t in triples {
        let s = g.add_node(&t.s, NodeKind::Entity)?;
        let p = g.add_node(&t.p, NodeKind::Relation)?;
        let o = g.add_node(&t.o, NodeKind::Entity)?;
        for n in [s, p, o] {
            merge_provenance(&mut g.nodes[n.0].provenance, &t.provenance);
        }
        let sp = g.add_edge(s, p, EdgeKind::TripleSP, score(t.sp_score))?;
        let po = g.add_edge(p, o, EdgeKind::TriplePO, score(t.po_score))?;
        g.edges[sp.0].provenance = t.provenance.clone();
        g.edges[po.0].provenance = t.provenance.clone();
    }
    let mut type_edges: HashMap<(NodeId, NodeId), EdgeId> = HashMap::new();
    for ta in types {
        let e = g.add_node(&ta.entity, NodeKind::Entity)?;
        let t = g.add_node(&ta.type_phrase, NodeKind::Type)?;
        if e == t {
            continue;
        }
        merge_provenance(&mut g.nodes[t.0].provenance, std::slice::from_ref(&ta.provenance));
        let id = match type_edges.get(&(e, t)) {
            Some(&id) => id,
            None => {
                let id = g.add_edge(e, t, EdgeKind::TypeEdge, S::one())?;
                type_edges.insert((e, t), id);
                id
            }
        };
        merge_provenance(&mut g.edges[id.0].provenance, std::slice::from_ref(&ta.provenance));
    }
    add_alignment_edges(&mut g, sim, cfg.alignment_threshold);
    Ok(g)
}

/// Entity pairs sharing a token or a dictionary entity; relation pairs all
/// against all. An edge is added when the similarity reaches `threshold` and
/// is positive. Returns the number of edges added.
pub fn add_alignment_edges<S: Scalar, F: Real>(
    g: &mut QuasiGraph<S>,
    sim: &SimilarityModel<F>,
    threshold: f64,
) -> usize {
    let entities: Vec<NodeId> = g
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Entity)
        .map(|n| n.id)
        .collect();
    let mut buckets: BTreeMap<String, Vec<NodeId>> = BTreeMap::new();
    for &id in &entities {
        let label = &g.nodes[id.0].label;
        for tok in tokens(label) {
            buckets.entry(format!("t:{tok}")).or_default().push(id);
        }
        if let Some(ents) = sim.mentions.entities(label) {
            for e in ents {
                buckets.entry(format!("e:{e}")).or_default().push(id);
            }
        }
    }
    let mut pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for members in buckets.values() {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if a != b {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
    }
    let mut new_edges: Vec<(NodeId, NodeId, EdgeKind, f64)> = pairs
        .into_iter()
        .filter_map(|(a, b)| {
            let s = sim.entity(&g.nodes[a.0].label, &g.nodes[b.0].label);
            (s >= threshold && s > 0.0).then_some((a, b, EdgeKind::EntityAlign, s))
        })
        .collect();

    let relations: Vec<(NodeId, String, Option<Vec<F>>)> = g
        .nodes
        .iter()
        .filter(|n| n.kind == NodeKind::Relation)
        .map(|n| (n.id, normalize(&n.label), sim.embeddings.phrase_vector(&n.label)))
        .collect();
    let relation_edges: Vec<Vec<(NodeId, NodeId, EdgeKind, f64)>> = (0..relations.len())
        .into_par_iter()
        .map(|i| {
            let (a, la, va) = &relations[i];
            relations[i + 1..]
                .iter()
                .filter_map(|(b, lb, vb)| {
                    let s = if la == lb {
                        1.0
                    } else {
                        match (va, vb) {
                            (Some(x), Some(y)) => cosine(x, y).to_f64_lossy().max(0.0),
                            _ => 0.0,
                        }
                    };
                    (s >= threshold && s > 0.0).then_some((*a, *b, EdgeKind::RelationAlign, s))
                })
                .collect()
        })
        .collect();
    new_edges.extend(relation_edges.into_iter().flatten());

    let added = new_edges.len();
    for (a, b, kind, s) in new_edges {
        g.add_edge(a, b, kind, S::from_f64_lossy(s.min(1.0)))
            .expect("alignment endpoints share a kind");
    }
    added
}
