//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use quasikg::graph::{EdgeId, EdgeKind, NodeId, NodeKind, QuasiGraph};
use quasikg::gst::{SteinerTree, TerminalGroups};
use quasikg::scalar::Scalar;
use quasikg::Rational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Costs are drawn on a 2^-20 grid so that f64 sums of a few of them are
/// exact in any order.
pub const GRID: f64 = (1u64 << 20) as f64;

pub fn grid_score(rng: &mut impl Rng) -> f64 {
    rng.random_range(0..=(1u32 << 20)) as f64 / GRID
}

fn edge_kind(a: NodeKind, b: NodeKind) -> Option<EdgeKind> {
    use NodeKind::*;
    match (a, b) {
        (Entity, Entity) => Some(EdgeKind::EntityAlign),
        (Relation, Relation) => Some(EdgeKind::RelationAlign),
        (Entity, Relation) | (Relation, Entity) => Some(EdgeKind::TripleSP),
        (Entity, Type) | (Type, Entity) => Some(EdgeKind::TypeEdge),
        _ => None,
    }
}

/// A graph of `2..=max_nodes` nodes of mixed kinds with roughly `density`
/// of the admissible pairs joined, occasionally by parallel edges.
pub fn random_graph(rng: &mut ChaCha8Rng, max_nodes: usize, density: f64) -> QuasiGraph<f64> {
    let n = rng.random_range(2..=max_nodes);
    let mut g = QuasiGraph::new();
    for i in 0..n {
        let kind = match rng.random_range(0..10) {
            0..=5 => NodeKind::Entity,
            6..=8 => NodeKind::Relation,
            _ => NodeKind::Type,
        };
        g.add_node(&format!("n{i}"), kind).unwrap();
    }
    for a in 0..n {
        for b in a + 1..n {
            let Some(kind) = edge_kind(g.node(NodeId(a)).kind, g.node(NodeId(b)).kind) else {
                continue;
            };
            if rng.random_bool(density) {
                g.add_edge(NodeId(a), NodeId(b), kind, grid_score(rng)).unwrap();
                if rng.random_bool(0.05) {
                    g.add_edge(NodeId(b), NodeId(a), kind, grid_score(rng)).unwrap();
                }
            }
        }
    }
    g
}

/// Between two and `max_groups` disjoint groups (one if `max_groups` is one) of one or two random nodes each.
pub fn random_groups(rng: &mut ChaCha8Rng, n: usize, max_groups: usize) -> TerminalGroups {
    let mut pool: Vec<NodeId> = (0..n).map(NodeId).collect();
    pool.shuffle(rng);
    let most = max_groups.min(n);
    let count = rng.random_range(2.min(most)..=most);
    let mut groups = Vec::with_capacity(count);
    for i in 0..count {
        let left = pool.len() - (count - i - 1);
        let size = rng.random_range(1..=2.min(left));
        groups.push(pool.drain(..size).collect());
    }
    TerminalGroups::new(groups).unwrap()
}

pub fn instance(seed: u64, max_nodes: usize, max_groups: usize) -> (QuasiGraph<f64>, TerminalGroups) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = rng.random_range(0.2..0.7);
    let g = random_graph(&mut rng, max_nodes, density);
    let groups = random_groups(&mut rng, g.node_count(), max_groups);
    (g, groups)
}

/// Two distinct singleton groups.
pub fn two_terminal_instance(seed: u64, max_nodes: usize) -> (QuasiGraph<f64>, TerminalGroups) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = rng.random_range(0.2..0.7);
    let g = random_graph(&mut rng, max_nodes.max(2), density);
    let s = rng.random_range(0..g.node_count());
    let t = loop {
        let t = rng.random_range(0..g.node_count());
        if t != s {
            break t;
        }
    };
    (g, TerminalGroups::new(vec![vec![NodeId(s)], vec![NodeId(t)]]).unwrap())
}

/// The same graph with exact rational costs.
pub fn exact(g: &QuasiGraph<f64>) -> QuasiGraph<Rational> {
    g.map_scalar(|x| Rational::new((x * GRID) as i64, GRID as i64))
}

/// The identity used for top-k distinctness.
pub fn tree_key<S>(t: &SteinerTree<S>) -> (Vec<EdgeId>, Option<NodeId>) {
    if t.edges.is_empty() {
        (Vec::new(), t.nodes.first().copied())
    } else {
        (t.edges.clone(), None)
    }
}

/// Checks the top-k contract; returns a description of the first breach.
pub fn top_k_breach<S: Scalar>(g: &QuasiGraph<S>, groups: &TerminalGroups, trees: &[SteinerTree<S>]) -> Option<String> {
    for (i, t) in trees.iter().enumerate() {
        if let Err(e) = t.validate(g, groups) {
            return Some(format!("tree {}: {e}", i + 1));
        }
    }
    if let Some(i) = trees.windows(2).position(|w| w[0].cost.cmp_total(&w[1].cost).is_gt()) {
        return Some(format!("cost decreases after tree {}", i + 1));
    }
    let keys: BTreeSet<_> = trees.iter().map(tree_key).collect();
    if keys.len() != trees.len() {
        return Some("duplicate trees".into());
    }
    None
}
