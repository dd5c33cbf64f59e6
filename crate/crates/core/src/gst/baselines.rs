use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use super::TerminalGroups;
use crate::graph::{EdgeId, NodeId, QuasiGraph};
use crate::scalar::Scalar;

/// A non-terminal node proposed by a baseline, with the subgraph that
/// supports it.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineCandidate {
    pub node: NodeId,
    /// Higher is better.
    pub score: f64,
    /// Sum of edge costs on the supporting paths.
    pub path_cost: f64,
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
}

struct Iter {
    group: usize,
    queue: VecDeque<NodeId>,
    parent: BTreeMap<NodeId, Option<(NodeId, EdgeId)>>,
}

impl Iter {
    fn path(&self, mut n: NodeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        while let Some(Some((p, e))) = self.parent.get(&n) {
            out.push(*e);
            n = *p;
        }
        out
    }
}

/// One unweighted breadth-first iterator per terminal, advanced one node at a
/// time in round-robin order. A non-terminal node reached from every group is
/// a meeting node; its support is the union of the paths back to the first
/// terminal of each group that reached it. Candidates are ranked by
/// ascending total edge cost on those paths, then by meeting order.
pub fn bfs_baseline<S: Scalar>(g: &QuasiGraph<S>, groups: &TerminalGroups) -> Vec<BaselineCandidate> {
    let mut iters: Vec<Iter> = Vec::new();
    for (gi, grp) in groups.groups().iter().enumerate() {
        for &t in grp {
            iters.push(Iter {
                group: gi,
                queue: VecDeque::from([t]),
                parent: BTreeMap::from([(t, None)]),
            });
        }
    }
    let full = groups.full_mask();
    // first iterator of each group to reach a node
    let mut reached: BTreeMap<NodeId, BTreeMap<usize, usize>> = BTreeMap::new();
    for (i, it) in iters.iter().enumerate() {
        let t = *it.queue.front().expect("seeded");
        reached.entry(t).or_default().entry(it.group).or_insert(i);
    }
    let mut meetings: Vec<NodeId> = Vec::new();
    let mut met: BTreeSet<NodeId> = BTreeSet::new();
    let mut check = |n: NodeId, reached: &BTreeMap<NodeId, BTreeMap<usize, usize>>, met: &mut BTreeSet<NodeId>| {
        let mask = reached[&n].keys().fold(0u32, |m, &gi| m | (1 << gi));
        if mask == full && !groups.is_terminal(n) && met.insert(n) {
            meetings.push(n);
        }
    };

    loop {
        let mut progressed = false;
        for (i, it) in iters.iter_mut().enumerate() {
            let Some(cur) = it.queue.pop_front() else {
                continue;
            };
            progressed = true;
            for &(nb, e) in g.neighbors(cur) {
                if it.parent.contains_key(&nb) {
                    continue;
                }
                it.parent.insert(nb, Some((cur, e)));
                it.queue.push_back(nb);
                reached.entry(nb).or_default().entry(it.group).or_insert(i);
                check(nb, &reached, &mut met);
            }
        }
        if !progressed {
            break;
        }
    }

    let mut out: Vec<(usize, BaselineCandidate)> = meetings
        .into_iter()
        .enumerate()
        .map(|(order, n)| {
            let mut edges: BTreeSet<EdgeId> = BTreeSet::new();
            let mut path_cost = 0.0;
            for &i in reached[&n].values() {
                for e in iters[i].path(n) {
                    path_cost += g.edge(e).cost.to_f64_lossy();
                    edges.insert(e);
                }
            }
            let mut nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&e| [g.edge(e).a, g.edge(e).b]).collect();
            nodes.insert(n);
            (
                order,
                BaselineCandidate {
                    node: n,
                    score: 1.0 / (path_cost + 1e-6),
                    path_cost,
                    nodes: nodes.into_iter().collect(),
                    edges: edges.into_iter().collect(),
                },
            )
        })
        .collect();
    out.sort_by(|(oa, a), (ob, b)| a.path_cost.total_cmp(&b.path_cost).then(oa.cmp(ob)));
    out.into_iter().map(|(_, c)| c).collect()
}

const TOLERANCE: f64 = 1e-12;

struct Dist {
    dist: Vec<f64>,
    /// Number of distinct minimum-cost paths from the source.
    count: Vec<f64>,
}

fn dijkstra<S: Scalar>(g: &QuasiGraph<S>, source: NodeId) -> Dist {
    #[derive(PartialEq)]
    struct Item(f64, NodeId);
    impl Eq for Item {}
    impl PartialOrd for Item {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Item {
        fn cmp(&self, o: &Self) -> Ordering {
            o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
        }
    }

    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut count = vec![0.0; n];
    let mut done = vec![false; n];
    let mut order = Vec::new();
    dist[source.0] = 0.0;
    let mut heap = BinaryHeap::from([Item(0.0, source)]);
    while let Some(Item(d, u)) = heap.pop() {
        if done[u.0] || d > dist[u.0] {
            continue;
        }
        done[u.0] = true;
        order.push(u);
        for &(v, e) in g.neighbors(u) {
            let nd = d + g.edge(e).cost.to_f64_lossy();
            if nd < dist[v.0] - TOLERANCE {
                dist[v.0] = nd;
                heap.push(Item(nd, v));
            }
        }
    }
    // path counts in settling order, from already settled predecessors only
    count[source.0] = 1.0;
    let mut rank = vec![usize::MAX; n];
    for (i, u) in order.iter().enumerate() {
        rank[u.0] = i;
    }
    for &v in order.iter().skip(1) {
        let mut c = 0.0;
        for &(u, e) in g.neighbors(v) {
            if rank[u.0] < rank[v.0] && (dist[u.0] + g.edge(e).cost.to_f64_lossy() - dist[v.0]).abs() <= TOLERANCE {
                c += count[u.0];
            }
        }
        count[v.0] = c;
    }
    Dist { dist, count }
}

/// For every pair of terminals from different groups, counts the
/// minimum-cost paths between them through each non-terminal node. Equal-cost
/// alternatives all count. Candidates are ranked by descending count, then
/// node id.
pub fn shortest_paths_baseline<S: Scalar>(g: &QuasiGraph<S>, groups: &TerminalGroups) -> Vec<BaselineCandidate> {
    let terminals = groups.terminals();
    let tables: BTreeMap<NodeId, Dist> = terminals.iter().map(|&t| (t, dijkstra(g, t))).collect();
    let mut score: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut support: BTreeMap<NodeId, (f64, BTreeSet<(NodeId, NodeId)>)> = BTreeMap::new();

    let mut pairs: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for (i, gi) in groups.groups().iter().enumerate() {
        for gj in &groups.groups()[i + 1..] {
            for &s in gi {
                for &t in gj {
                    if s != t {
                        pairs.insert((s.min(t), s.max(t)));
                    }
                }
            }
        }
    }
    for (s, t) in pairs {
        let (ds, dt) = (&tables[&s], &tables[&t]);
        let total = ds.dist[t.0];
        if !total.is_finite() {
            continue;
        }
        for v in 0..g.node_count() {
            let node = NodeId(v);
            if groups.is_terminal(node) {
                continue;
            }
            if (ds.dist[v] + dt.dist[v] - total).abs() <= TOLERANCE {
                let through = ds.count[v] * dt.count[v];
                if through > 0.0 {
                    *score.entry(node).or_insert(0.0) += through;
                    let entry = support.entry(node).or_insert((f64::INFINITY, BTreeSet::new()));
                    entry.0 = entry.0.min(total);
                    entry.1.insert((s, t));
                }
            }
        }
    }

    let mut out: Vec<BaselineCandidate> = score
        .into_iter()
        .map(|(node, sc)| {
            let (path_cost, _) = &support[&node];
            BaselineCandidate {
                node,
                score: sc,
                path_cost: *path_cost,
                nodes: vec![node],
                edges: Vec::new(),
            }
        })
        .collect();
    out.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.node.cmp(&b.node)));
    out
}
