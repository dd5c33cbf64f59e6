use serde::{Deserialize, Serialize};

use super::{SteinerTree, TerminalGroups};
use crate::graph::{DotStyle, EdgeId, EdgeKind, NodeId, NodeKind, QuasiGraph};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeView {
    pub id: NodeId,
    pub label: String,
    pub kind: NodeKind,
    /// Label of the question term this node matched, if it is a cornerstone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cornerstone: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeView {
    pub id: EdgeId,
    pub a: NodeId,
    pub b: NodeId,
    pub kind: EdgeKind,
    pub cost: f64,
    pub docs: Vec<String>,
}

/// A tree with its node and edge details resolved against the graph. The
/// JSON form also deserializes as a plain [`SteinerTree`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "S: Deserialize<'de>"))]
pub struct TreeExport<S = f64> {
    #[serde(flatten)]
    pub tree: SteinerTree<S>,
    pub node_details: Vec<NodeView>,
    pub edge_details: Vec<EdgeView>,
}

impl<S: Scalar + Serialize> TreeExport<S> {
    pub fn new(tree: &SteinerTree<S>, g: &QuasiGraph<S>, groups: &TerminalGroups) -> Self {
        let cornerstone = |n: NodeId| {
            groups
                .groups()
                .iter()
                .position(|grp| grp.binary_search(&n).is_ok())
                .map(|i| groups.labels()[i].clone())
        };
        let node_details = tree
            .nodes
            .iter()
            .chain(tree.hops.iter().map(|(n, _)| n))
            .map(|&id| {
                let n = g.node(id);
                NodeView {
                    id,
                    label: n.label.clone(),
                    kind: n.kind,
                    cornerstone: cornerstone(id),
                }
            })
            .collect();
        let edge_details = tree
            .edges
            .iter()
            .map(|&id| {
                let e = g.edge(id);
                EdgeView {
                    id,
                    a: e.a,
                    b: e.b,
                    kind: e.kind,
                    cost: e.cost.to_f64_lossy(),
                    docs: g.documents_of(&[id]),
                }
            })
            .collect();
        TreeExport {
            tree: tree.clone(),
            node_details,
            edge_details,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree export serializes")
    }
}

impl<S: Scalar> SteinerTree<S> {
    /// Graphviz rendering of the tree with its cornerstones in bold.
    pub fn to_dot(&self, g: &QuasiGraph<S>, groups: &TerminalGroups) -> String {
        let style = DotStyle {
            highlight: self.nodes.iter().copied().filter(|&n| groups.is_terminal(n)).collect(),
            edges: Some(self.edges.iter().copied().collect()),
            extra_nodes: self.nodes.iter().copied().collect(),
        };
        g.to_dot(&style)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gst::{solve_gst_k, SolverConfig};

    fn fixture() -> (QuasiGraph<f64>, TerminalGroups) {
        let mut g = QuasiGraph::new();
        let a = g.add_node("Umtiti", NodeKind::Entity).unwrap();
        let r = g.add_node("played in", NodeKind::Relation).unwrap();
        let b = g.add_node("Final", NodeKind::Entity).unwrap();
        g.add_edge(a, r, EdgeKind::TripleSP, 0.5).unwrap();
        g.add_edge(r, b, EdgeKind::TriplePO, 0.25).unwrap();
        g.weights_to_costs().unwrap();
        let groups = TerminalGroups::with_labels(vec![vec![a], vec![b]], vec!["Umtiti".into(), "final".into()]).unwrap();
        (g, groups)
    }

    #[test]
    fn dot_marks_cornerstones() {
        let (g, groups) = fixture();
        let t = &solve_gst_k(&g, &groups, &SolverConfig::with_k(1)).unwrap()[0];
        let dot = t.to_dot(&g, &groups);
        assert!(dot.contains("\"played in\""));
        assert_eq!(dot.matches("penwidth=3").count(), 2);
        assert_eq!(dot.matches(" -- ").count(), 2);
    }

    #[test]
    fn json_reads_back_as_tree() {
        let (g, groups) = fixture();
        let t = &solve_gst_k(&g, &groups, &SolverConfig::with_k(1)).unwrap()[0];
        let json = TreeExport::new(t, &g, &groups).to_json();
        let back: SteinerTree<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, t);
        let full: TreeExport<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(full.node_details.iter().filter(|n| n.cornerstone.is_some()).count(), 2);
    }
}
