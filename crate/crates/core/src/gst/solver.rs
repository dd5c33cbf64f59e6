//! Best-first dynamic program over states `(root, covered groups)`.
//!
//! A state's entries are trees rooted at `root` that cover at least the
//! groups in its mask. Entries leave a priority queue in order of
//! `(bound, cost, edge count, edge ids, root, mask)`, where the bound adds to
//! the cost the largest distance from the root to a group not yet covered.
//! Everything added later hangs off the root, so the bound never
//! overestimates and never decreases along a grow or merge step; each state keeps up to `k`
//! distinct edge sets. A settled entry is grown along one edge of its root or
//! merged with a settled entry of the same root whose mask is disjoint and
//! whose nodes meet it only at the root. Settled full-mask entries are the
//! output trees.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::hash::{BuildHasherDefault, Hasher};

use super::{SolverConfig, SteinerTree, TerminalGroups};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId, QuasiGraph};
use crate::scalar::Scalar;

/// A rooted partial tree. `ids` holds the sorted edge ids followed by the
/// sorted node ids.
struct Entry<S> {
    bound: S,
    cost: S,
    root: u32,
    mask: u32,
    n_edges: u32,
    ids: Box<[u32]>,
}

impl<S: Scalar> Entry<S> {
    fn edges(&self) -> &[u32] {
        &self.ids[..self.n_edges as usize]
    }

    fn nodes(&self) -> &[u32] {
        &self.ids[self.n_edges as usize..]
    }

    fn key(&self) -> (u32, &[u32], u32, u32) {
        (self.n_edges, self.edges(), self.root, self.mask)
    }
}

impl<S: Scalar> PartialEq for Entry<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Entry<S> {}

impl<S: Scalar> PartialOrd for Entry<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Entry<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .cmp_total(&other.bound)
            .then_with(|| self.cost.cmp_total(&other.cost))
            .then_with(|| self.key().cmp(&other.key()))
    }
}

/// Sorted union of two sorted lists, appended to `out`.
fn merge_into(out: &mut Vec<u32>, a: &[u32], b: &[u32]) {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

fn build_ids(edges_a: &[u32], edges_b: &[u32], nodes_a: &[u32], nodes_b: &[u32]) -> (u32, Box<[u32]>) {
    let mut ids = Vec::with_capacity(edges_a.len() + edges_b.len() + nodes_a.len() + nodes_b.len());
    merge_into(&mut ids, edges_a, edges_b);
    let n_edges = ids.len() as u32;
    merge_into(&mut ids, nodes_a, nodes_b);
    (n_edges, ids.into_boxed_slice())
}

/// True when the sorted node lists share exactly `root` and nothing else.
fn meet_only_at(a: &[u32], b: &[u32], root: u32) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                if a[i] != root {
                    return false;
                }
                i += 1;
                j += 1;
            }
        }
    }
    true
}

/// Canonical cost of the union of two sorted edge lists, without building it.
fn union_cost<S: Scalar>(g: &QuasiGraph<S>, a: &[u32], b: &[u32]) -> S {
    let mut total = S::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                *x
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                *x
            }
            (Some(x), None) => {
                i += 1;
                *x
            }
            (_, Some(y)) => {
                j += 1;
                *y
            }
            (None, None) => unreachable!(),
        };
        total = total + g.edge(EdgeId(next as usize)).cost;
    }
    total
}

#[derive(PartialEq, Eq, Hash)]
enum TreeKey {
    Node(u32),
    Edges(Box<[u32]>),
}

/// Cost wrapper ordered by `cmp_total`.
struct Cost<S>(S);

impl<S: Scalar> PartialEq for Cost<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<S: Scalar> Eq for Cost<S> {}

impl<S: Scalar> PartialOrd for Cost<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for Cost<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp_total(&other.0)
    }
}

/// Multiplicative hasher for the small integer state keys.
#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(b as u64);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (self.0.rotate_left(5) ^ x).wrapping_mul(0x517c_c1b7_2722_0a95);
    }

    fn write_u32(&mut self, x: u32) {
        self.write_u64(x as u64);
    }
}

/// Distance from every node to the nearest node of each group, `None` when
/// unreachable. Indexed `[group][node]`.
fn group_distances<S: Scalar>(g: &QuasiGraph<S>, groups: &TerminalGroups) -> Vec<Vec<Option<S>>> {
    groups
        .groups()
        .iter()
        .map(|grp| {
            let mut dist: Vec<Option<S>> = vec![None; g.node_count()];
            let mut heap = BinaryHeap::new();
            for &t in grp {
                dist[t.0] = Some(S::zero());
                heap.push(Reverse((Cost(S::zero()), t.0)));
            }
            while let Some(Reverse((Cost(d), u))) = heap.pop() {
                if dist[u].is_some_and(|best| d.cmp_total(&best) == Ordering::Greater) {
                    continue;
                }
                for &(v, e) in g.neighbors(NodeId(u)) {
                    let nd = d + g.edge(e).cost;
                    if dist[v.0].is_none_or(|old| nd.cmp_total(&old) == Ordering::Less) {
                        dist[v.0] = Some(nd);
                        heap.push(Reverse((Cost(nd), v.0)));
                    }
                }
            }
            dist
        })
        .collect()
}

type StateMap<S> = HashMap<(u32, u32), State<S>, BuildHasherDefault<KeyHasher>>;

struct State<S> {
    /// Costs and arena indices of the settled entries.
    members: Vec<(S, u32)>,
    /// Costs of the `k` cheapest candidates queued so far (max on top).
    queued: BinaryHeap<Cost<S>>,
}

struct Search<'g, S> {
    graph: &'g QuasiGraph<S>,
    dist: Vec<Vec<Option<S>>>,
    k: usize,
    cap: Option<usize>,
    heap: BinaryHeap<Reverse<Entry<S>>>,
    settled: Vec<Entry<S>>,
    states: StateMap<S>,
    /// Settled non-full entries by root: (mask, arena indices in cost order).
    by_root: Vec<Vec<(u32, Vec<u32>)>>,
}

impl<S: Scalar> Search<'_, S> {
    /// Lower bound on the cost still needed to complete a tree rooted at
    /// `root`; `None` when some missing group is unreachable.
    fn remaining(&self, root: u32, mask: u32) -> Option<S> {
        let mut best = S::zero();
        for (i, d) in self.dist.iter().enumerate() {
            if mask & (1 << i) == 0 {
                best = best.max_of(d[root as usize]?);
            }
        }
        Some(best)
    }

    /// False when the state is settled or already has `k` cheaper candidates
    /// queued; a state never needs more than its `k` cheapest.
    fn admits(&self, root: u32, mask: u32, cost: S) -> bool {
        match self.states.get(&(root, mask)) {
            None => true,
            Some(st) => {
                st.members.len() < self.k
                    && (st.queued.len() < self.k
                        || st.queued.peek().is_some_and(|top| cost.cmp_total(&top.0) == Ordering::Less))
            }
        }
    }

    fn push(&mut self, cost: S, root: u32, mask: u32, n_edges: u32, ids: Box<[u32]>) -> Result<()> {
        let Some(rest) = self.remaining(root, mask) else {
            return Ok(());
        };
        let e = Entry {
            bound: cost + rest,
            cost,
            root,
            mask,
            n_edges,
            ids,
        };
        let k = self.k;
        let state = self.states.entry((e.root, e.mask)).or_insert_with(|| State {
            members: Vec::new(),
            queued: BinaryHeap::new(),
        });
        state.queued.push(Cost(e.cost));
        if state.queued.len() > k {
            state.queued.pop();
        }
        self.heap.push(Reverse(e));
        match self.cap {
            Some(cap) if self.heap.len() > cap => Err(Error::ResourceExhausted { cap }),
            _ => Ok(()),
        }
    }

    /// Records `e` as settled unless its state already has `k` entries or
    /// the same edge set. Returns the arena index.
    fn settle(&mut self, e: Entry<S>) -> Option<usize> {
        let state = self.states.get_mut(&(e.root, e.mask)).expect("queued entries have a state");
        if state.members.len() >= self.k {
            return None;
        }
        let arena = &self.settled;
        let duplicate = state.members.iter().any(|(c, j)| {
            c.cmp_total(&e.cost) == Ordering::Equal && arena[*j as usize].edges() == e.edges()
        });
        if duplicate {
            return None;
        }
        let idx = arena.len();
        state.members.push((e.cost, idx as u32));
        self.settled.push(e);
        Some(idx)
    }

    fn expand(&mut self, idx: usize, full: u32) -> Result<()> {
        let (root, mask) = (self.settled[idx].root, self.settled[idx].mask);
        let graph = self.graph;

        for &(nb, eid) in graph.neighbors(NodeId(root as usize)) {
            let (nb, eid) = (nb.0 as u32, eid.0 as u32);
            let cur = &self.settled[idx];
            if cur.nodes().binary_search(&nb).is_ok() {
                continue;
            }
            let cost = union_cost(graph, cur.edges(), &[eid]);
            if !self.admits(nb, mask, cost) {
                continue;
            }
            let (n_edges, ids) = build_ids(cur.edges(), &[eid], cur.nodes(), &[nb]);
            self.push(cost, nb, mask, n_edges, ids)?;
        }

        for p in 0..self.by_root[root as usize].len() {
            let other_mask = self.by_root[root as usize][p].0;
            if other_mask & mask != 0 {
                continue;
            }
            let union = other_mask | mask;
            let count = self.by_root[root as usize][p].1.len();
            for pos in 0..count {
                let j = self.by_root[root as usize][p].1[pos] as usize;
                let (cur, other) = (&self.settled[idx], &self.settled[j]);
                if !meet_only_at(cur.nodes(), other.nodes(), root) {
                    continue;
                }
                let cost = union_cost(graph, cur.edges(), other.edges());
                if !self.admits(root, union, cost) {
                    // partners are settled in cost order; later ones cost more
                    break;
                }
                let (n_edges, ids) = build_ids(cur.edges(), other.edges(), cur.nodes(), other.nodes());
                self.push(cost, root, union, n_edges, ids)?;
            }
        }

        if mask != full {
            let slots = &mut self.by_root[root as usize];
            match slots.iter_mut().find(|(m, _)| *m == mask) {
                Some((_, members)) => members.push(idx as u32),
                None => slots.push((mask, vec![idx as u32])),
            }
        }
        Ok(())
    }
}

/// Up to `cfg.k` distinct group Steiner trees in nondecreasing cost. The
/// first one has minimum cost. Trees are distinct as edge sets; a tree with
/// no edges is identified by its node. An empty result means no connected
/// component touches every group.
pub fn solve_gst_k<S: Scalar>(
    g: &QuasiGraph<S>,
    groups: &TerminalGroups,
    cfg: &SolverConfig,
) -> Result<Vec<SteinerTree<S>>> {
    if cfg.k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    groups.check_nodes(g)?;
    if g.node_count() > u32::MAX as usize || g.edge_count() > u32::MAX as usize {
        return Err(Error::InvalidInput("graph too large for the solver".into()));
    }
    if let Some(e) = g.edges().iter().find(|e| e.cost.partial_cmp(&S::zero()).is_none_or(|o| o.is_lt())) {
        return Err(Error::InvariantViolation(format!(
            "edge {} has negative or undefined cost {:?}",
            e.id.0, e.cost
        )));
    }
    let full = groups.full_mask();
    let mut search = Search {
        graph: g,
        dist: group_distances(g, groups),
        k: cfg.k,
        cap: cfg.max_queue,
        heap: BinaryHeap::new(),
        settled: Vec::new(),
        states: StateMap::default(),
        by_root: vec![Vec::new(); g.node_count()],
    };
    for (i, grp) in groups.groups().iter().enumerate() {
        for &t in grp {
            if search.admits(t.0 as u32, 1 << i, S::zero()) {
                search.push(S::zero(), t.0 as u32, 1 << i, 0, Box::new([t.0 as u32]))?;
            }
        }
    }

    let mut emitted: HashSet<TreeKey> = HashSet::new();
    let mut out: Vec<SteinerTree<S>> = Vec::new();
    while let Some(Reverse(entry)) = search.heap.pop() {
        let Some(idx) = search.settle(entry) else {
            continue;
        };
        let e = &search.settled[idx];
        if e.mask == full {
            let key = if e.n_edges == 0 {
                TreeKey::Node(e.root)
            } else {
                TreeKey::Edges(e.edges().into())
            };
            if emitted.insert(key) {
                let nodes = e.nodes().iter().map(|&n| NodeId(n as usize)).collect();
                let edges = e.edges().iter().map(|&x| EdgeId(x as usize)).collect();
                out.push(SteinerTree::from_parts(g, groups, nodes, edges));
                if out.len() == cfg.k {
                    break;
                }
            }
            continue;
        }
        search.expand(idx, full)?;
    }
    log::debug!(
        "gst: {} trees, {} settled entries, {} queued",
        out.len(),
        search.settled.len(),
        search.heap.len()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tests::{graph, groups};
    use super::*;
    use num_rational::Ratio;

    type Q = Ratio<i64>;

    fn q(n: i64, d: i64) -> Q {
        Ratio::new(n, d)
    }

    #[test]
    fn two_terminals_on_a_path() {
        let g = graph(3, &[(0, 1, q(3, 10)), (1, 2, q(4, 10))]);
        let trees = solve_gst_k(&g, &groups(&[&[0], &[2]]), &SolverConfig::default()).unwrap();
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].cost, q(7, 10));
        assert_eq!(trees[0].nodes, [NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn star_with_three_leaf_terminals() {
        let c = q(1, 5);
        let g = graph(4, &[(0, 1, c), (0, 2, c), (0, 3, c)]);
        let trees = solve_gst_k(&g, &groups(&[&[1], &[2], &[3]]), &SolverConfig::default()).unwrap();
        assert_eq!(trees[0].cost, q(3, 5));
        assert!(trees[0].contains(NodeId(0)));
    }

    #[test]
    fn single_node_group_gives_the_empty_tree() {
        let g = graph(2, &[(0, 1, q(1, 2))]);
        let trees = solve_gst_k(&g, &groups(&[&[1]]), &SolverConfig::default()).unwrap();
        assert_eq!(trees.len(), 1);
        assert!(trees[0].edges.is_empty());
        assert_eq!(trees[0].cost, q(0, 1));
    }

    #[test]
    fn disconnected_groups_give_nothing() {
        let g = graph(4, &[(0, 1, q(1, 2)), (2, 3, q(1, 2))]);
        let trees = solve_gst_k(&g, &groups(&[&[0], &[3]]), &SolverConfig::default()).unwrap();
        assert!(trees.is_empty());
    }

    #[test]
    fn top_k_on_a_cycle_enumerates_both_routes() {
        // 0-1-2 costs 1/10 + 1/10, 0-3-2 costs 1/2 + 1/2
        let g = graph(4, &[(0, 1, q(1, 10)), (1, 2, q(1, 10)), (0, 3, q(1, 2)), (3, 2, q(1, 2))]);
        let trees = solve_gst_k(&g, &groups(&[&[0], &[2]]), &SolverConfig::with_k(10)).unwrap();
        let costs: Vec<Q> = trees.iter().map(|t| t.cost).collect();
        assert_eq!(costs, [q(1, 5), q(1, 1)]);
    }

    #[test]
    fn zero_cost_edges_terminate() {
        let z = q(0, 1);
        let g = graph(4, &[(0, 1, z), (1, 2, z), (2, 0, z), (2, 3, z)]);
        let trees = solve_gst_k(&g, &groups(&[&[0], &[3]]), &SolverConfig::with_k(10)).unwrap();
        assert!(!trees.is_empty());
        assert!(trees.iter().all(|t| t.cost == z));
    }

    #[test]
    fn queue_cap_is_reported() {
        let c = q(1, 5);
        let g = graph(4, &[(0, 1, c), (0, 2, c), (0, 3, c), (1, 2, c), (2, 3, c)]);
        let cfg = SolverConfig { k: 50, max_queue: Some(3) };
        let r = solve_gst_k(&g, &groups(&[&[1], &[2], &[3]]), &cfg);
        assert!(matches!(r, Err(Error::ResourceExhausted { cap: 3 })));
    }
}
