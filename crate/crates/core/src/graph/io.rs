use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EdgeId, EdgeKind, GraphConfig, NodeId, NodeKind, QuasiGraph};
use crate::error::{Error, Result};
use crate::extraction::Provenance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub label: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub weight: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
    pub score: f64,
    /// Defaults to `1 - score`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub provenance: Vec<Provenance>,
}

/// On-disk graph. Node ids must be `0..n` in order; adjacency is rebuilt on
/// load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub config: GraphConfig,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl<S: Scalar> QuasiGraph<S> {
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    id: n.id.0,
                    label: n.label.clone(),
                    kind: n.kind,
                    weight: n.weight,
                    provenance: n.provenance.clone(),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    a: e.a.0,
                    b: e.b.0,
                    kind: e.kind,
                    score: e.score.to_f64_lossy(),
                    cost: Some(e.cost.to_f64_lossy()),
                    provenance: e.provenance.clone(),
                })
                .collect(),
            config: self.config,
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let mut g = QuasiGraph::new();
        g.config = file.config;
        for (i, n) in file.nodes.iter().enumerate() {
            if n.id != i {
                return Err(Error::InvalidInput(format!("node ids must be 0..n in order; found {} at {i}", n.id)));
            }
            let before = g.node_count();
            let id = g.add_node(&n.label, n.kind)?;
            if id.0 != before {
                return Err(Error::InvalidInput(format!(
                    "duplicate {:?} label {:?}",
                    n.kind, n.label
                )));
            }
            g.nodes[id.0].weight = n.weight;
            g.nodes[id.0].provenance = n.provenance.clone();
        }
        for e in &file.edges {
            let score = S::from_f64_lossy(e.score);
            if !score.in_unit_interval() {
                return Err(Error::InvariantViolation(format!("edge score {} outside [0, 1]", e.score)));
            }
            let cost = match e.cost {
                None => S::one() - score,
                Some(c) if (c + e.score - 1.0).abs() <= 1e-9 => S::one() - score,
                Some(c) => {
                    return Err(Error::InvariantViolation(format!(
                        "edge {}-{} has score {} and cost {c}",
                        e.a, e.b, e.score
                    )))
                }
            };
            let id = g.add_edge_with_cost(NodeId(e.a), NodeId(e.b), e.kind, score, cost)?;
            g.edges[id.0].provenance = e.provenance.clone();
        }
        Ok(g)
    }

    /// Graphviz rendering. Alignment edges are dashed; highlighted nodes get a
    /// thick border. With `style.edges` set, only those edges and their
    /// endpoints are drawn.
    pub fn to_dot(&self, style: &DotStyle) -> String {
        let mut out = String::from("graph quasikg {\n  node [fontname=\"Helvetica\"];\n");
        let edges: Vec<EdgeId> = match &style.edges {
            Some(set) => set.iter().copied().collect(),
            None => self.edges.iter().map(|e| e.id).collect(),
        };
        let nodes: BTreeSet<NodeId> = match &style.edges {
            Some(_) => edges
                .iter()
                .flat_map(|e| [self.edges[e.0].a, self.edges[e.0].b])
                .chain(style.extra_nodes.iter().copied())
                .collect(),
            None => self.nodes.iter().map(|n| n.id).collect(),
        };
        for id in nodes {
            let n = &self.nodes[id.0];
            let shape = match n.kind {
                NodeKind::Entity => "shape=box",
                NodeKind::Relation => "shape=box, style=rounded",
                NodeKind::Type => "shape=octagon",
            };
            let bold = if style.highlight.contains(&id) { ", penwidth=3" } else { "" };
            let _ = writeln!(out, "  n{} [label={}, {shape}{bold}];", id.0, quote(&n.label));
        }
        for id in edges {
            let e = &self.edges[id.0];
            let dashed = if e.kind.is_alignment() { ", style=dashed" } else { "" };
            let _ = writeln!(
                out,
                "  n{} -- n{} [label=\"{:.3}\"{dashed}];",
                e.a.0,
                e.b.0,
                e.cost.to_f64_lossy()
            );
        }
        out.push_str("}\n");
        out
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Debug, Clone, Default)]
pub struct DotStyle {
    /// Nodes drawn with a thick border (cornerstones).
    pub highlight: BTreeSet<NodeId>,
    /// Restrict the drawing to these edges.
    pub edges: Option<BTreeSet<EdgeId>>,
    /// Nodes drawn even without a selected edge, e.g. a single-node tree.
    pub extra_nodes: BTreeSet<NodeId>,
}

pub fn write_graph_json<S: Scalar>(g: &QuasiGraph<S>, path: &Path) -> Result<()> {
    let json = serde_json::to_string_pretty(&g.to_file()).expect("graph records serialize");
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn read_graph_json<S: Scalar>(path: &Path) -> Result<QuasiGraph<S>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| {
        Error::parse(
            path.display().to_string(),
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    QuasiGraph::from_file(&file)
}
