use super::{canonical_cost, Dsu, SteinerTree, TerminalGroups};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, QuasiGraph};
use crate::scalar::Scalar;

pub const ORACLE_NODE_LIMIT: usize = 15;

/// Exhaustive minimum group Steiner tree: for every vertex subset touching
/// all groups, a minimum spanning tree of the induced subgraph if it is
/// connected. `None` when no subset qualifies. Ties go to the smaller edge-id
/// sequence.
pub fn brute_force_gst<S: Scalar>(
    g: &QuasiGraph<S>,
    groups: &TerminalGroups,
) -> Result<Option<SteinerTree<S>>> {
    let n = g.node_count();
    if n > ORACLE_NODE_LIMIT {
        return Err(Error::RefusedSize {
            nodes: n,
            limit: ORACLE_NODE_LIMIT,
        });
    }
    groups.check_nodes(g)?;
    let group_masks: Vec<u32> = groups
        .groups()
        .iter()
        .map(|grp| grp.iter().fold(0u32, |m, v| m | (1 << v.0)))
        .collect();

    let mut by_cost: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    by_cost.sort_by(|a, b| g.edge(*a).cost.cmp_total(&g.edge(*b).cost).then(a.cmp(b)));

    let mut best: Option<(S, Vec<EdgeId>, u32)> = None;
    for subset in 1u32..(1u32 << n) {
        if group_masks.iter().any(|m| m & subset == 0) {
            continue;
        }
        let size = subset.count_ones() as usize;
        let mut dsu = Dsu::new(n);
        let mut tree: Vec<EdgeId> = Vec::with_capacity(size.saturating_sub(1));
        for &e in &by_cost {
            let edge = g.edge(e);
            if subset & (1 << edge.a.0) == 0 || subset & (1 << edge.b.0) == 0 {
                continue;
            }
            if dsu.union(edge.a.0, edge.b.0) {
                tree.push(e);
                if tree.len() + 1 == size {
                    break;
                }
            }
        }
        if tree.len() + 1 != size {
            continue;
        }
        tree.sort_unstable();
        let cost = canonical_cost(g, &tree);
        let better = match &best {
            None => true,
            Some((c, edges, _)) => match cost.cmp_total(c) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => (tree.len(), &tree) < (edges.len(), edges),
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some((cost, tree, subset));
        }
    }
    Ok(best.map(|(_, edges, subset)| {
        let nodes = (0..n).filter(|i| subset & (1 << i) != 0).map(NodeId).collect();
        SteinerTree::from_parts(g, groups, nodes, edges)
    }))
}
