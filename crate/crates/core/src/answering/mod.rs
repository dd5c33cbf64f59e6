//! From question to ranked answers: cornerstone selection, candidate
//! extraction from the trees, answer type filtering, alias aggregation and
//! ranking.

mod rank;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::corpus::fallback_annotate;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, EdgeKind, NodeId, NodeKind, QuasiGraph};
use crate::gst::{SteinerTree, TerminalGroups, MAX_GROUPS};
use crate::scalar::{Real, Scalar};
use crate::similarity::SimilarityModel;
use crate::text::{is_auxiliary, is_question_word, is_stopword, is_subsequence, normalize, tokens};

pub use rank::{rank, rank_by, AnswerJson, RankedAnswers, RankingStrategy, EPSILON};

/// Longest question n-gram tried as a cornerstone term.
pub const MAX_NGRAM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub text: String,
    /// Runs of consecutive content words; stopwords and question words split
    /// runs and n-grams never cross a split.
    pub runs: Vec<Vec<String>>,
    pub expected_type: Option<String>,
}

impl Question {
    /// Splits the question into runs of content words. Stopwords, question
    /// words and punctuation end a run, and so does a switch between verbs
    /// and other words, so that a relation term never fuses with a noun
    /// phrase next to it.
    pub fn new(text: &str) -> Self {
        let doc = fallback_annotate(text);
        let mut runs: Vec<Vec<String>> = Vec::new();
        for sentence in &doc.sentences {
            let mut run: Vec<String> = Vec::new();
            let mut run_is_verbal = false;
            for tok in sentence {
                let lower = normalize(&tok.text);
                let word_like = tok.pos.starts_with(|c: char| c.is_ascii_alphabetic());
                if !word_like || lower.is_empty() || is_stopword(&lower) || is_question_word(&lower) {
                    if !run.is_empty() {
                        runs.push(std::mem::take(&mut run));
                    }
                    continue;
                }
                let verbal = tok.is_verb();
                if !run.is_empty() && verbal != run_is_verbal {
                    runs.push(std::mem::take(&mut run));
                }
                run_is_verbal = verbal;
                run.push(tok.text.clone());
            }
            if !run.is_empty() {
                runs.push(run);
            }
        }
        Question {
            text: text.to_string(),
            runs,
            expected_type: infer_answer_type(text),
        }
    }

    /// Content words in question order.
    pub fn content_tokens(&self) -> Vec<&str> {
        self.runs.iter().flatten().map(String::as_str).collect()
    }

    pub fn has_content(&self) -> bool {
        !self.runs.is_empty()
    }
}

/// Expected answer type from a fixed decision table: who/whom give
/// "person", where gives "place", when gives "date", and which/what followed
/// by a noun phrase give that phrase.
pub fn infer_answer_type(question: &str) -> Option<String> {
    let doc = fallback_annotate(question);
    let words: Vec<_> = doc.sentences.iter().flatten().collect();
    let trigger = words.iter().position(|t| is_question_word(&t.text.to_lowercase()))?;
    match words[trigger].text.to_lowercase().as_str() {
        "who" | "whom" => Some("person".into()),
        "where" => Some("place".into()),
        "when" => Some("date".into()),
        "which" | "what" => {
            let mut i = trigger + 1;
            while i < words.len()
                && (is_auxiliary(&words[i].text) || words[i].pos == "DT")
            {
                i += 1;
            }
            let start = i;
            while i < words.len()
                && (words[i].pos.starts_with("NN") || words[i].pos.starts_with("JJ") || words[i].pos == "CD")
                && !is_stopword(&words[i].text.to_lowercase())
            {
                i += 1;
            }
            // a noun phrase ends with its head noun
            while i > start && !words[i - 1].pos.starts_with("NN") {
                i -= 1;
            }
            (i > start).then(|| {
                words[start..i]
                    .iter()
                    .map(|t| t.text.as_str())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
        }
        _ => None,
    }
}

/// Minimum similarity for a node of each kind to match a question term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CornerstoneThresholds {
    pub entity: f64,
    pub relation: f64,
    pub type_: f64,
}

impl Default for CornerstoneThresholds {
    fn default() -> Self {
        CornerstoneThresholds::uniform(0.5)
    }
}

impl CornerstoneThresholds {
    pub fn uniform(t: f64) -> Self {
        CornerstoneThresholds {
            entity: t,
            relation: t,
            type_: t,
        }
    }

    fn of(&self, kind: NodeKind) -> f64 {
        match kind {
            NodeKind::Entity => self.entity,
            NodeKind::Relation => self.relation,
            NodeKind::Type => self.type_,
        }
    }
}

/// Terminal groups with the similarity of every matched node.
#[derive(Debug, Clone, PartialEq)]
pub struct Cornerstones {
    pub groups: TerminalGroups,
    /// Highest similarity over all groups a node joined.
    pub weights: BTreeMap<NodeId, f64>,
}

impl Cornerstones {
    /// Stores the similarity scores as node weights.
    pub fn apply_weights<S: Scalar>(&self, g: &mut QuasiGraph<S>) {
        for (&n, &w) in &self.weights {
            g.set_node_weight(n, w);
        }
    }
}

/// Matches question n-grams against graph nodes, longest first. A term that
/// matches at least one node forms a group and consumes its words, so shorter
/// n-grams inside it are not tried. Entity nodes are compared with entity
/// similarity; relation and type nodes with phrase similarity. A match needs
/// a positive similarity that reaches the threshold for the node's kind.
pub fn select_cornerstones<S: Scalar, F: Real>(
    g: &QuasiGraph<S>,
    question: &Question,
    sim: &SimilarityModel<F>,
    thresholds: &CornerstoneThresholds,
) -> Result<Cornerstones> {
    // (position of first word, term, matches)
    let mut found: Vec<(usize, String, Vec<(NodeId, f64)>)> = Vec::new();
    let mut consumed: Vec<Vec<bool>> = question.runs.iter().map(|r| vec![false; r.len()]).collect();
    let offsets: Vec<usize> = question
        .runs
        .iter()
        .scan(0, |acc, r| {
            let start = *acc;
            *acc += r.len();
            Some(start)
        })
        .collect();
    let longest = question.runs.iter().map(Vec::len).max().unwrap_or(0).min(MAX_NGRAM);
    for n in (1..=longest).rev() {
        for (ri, run) in question.runs.iter().enumerate() {
            if run.len() < n {
                continue;
            }
            for start in 0..=run.len() - n {
                if consumed[ri][start..start + n].iter().any(|&c| c) {
                    continue;
                }
                let term = run[start..start + n].join(" ");
                let matches = match_term(g, &term, sim, thresholds);
                if matches.is_empty() {
                    continue;
                }
                consumed[ri][start..start + n].iter_mut().for_each(|c| *c = true);
                found.push((offsets[ri] + start, term, matches));
            }
        }
    }
    if found.is_empty() {
        return Err(Error::NoCornerstones);
    }
    found.sort_by_key(|(pos, _, _)| *pos);
    if found.len() > MAX_GROUPS {
        log::warn!(
            "{} question terms matched; keeping the first {MAX_GROUPS}",
            found.len()
        );
        found.truncate(MAX_GROUPS);
    }
    let mut weights: BTreeMap<NodeId, f64> = BTreeMap::new();
    for (_, _, matches) in &found {
        for &(n, s) in matches {
            let w = weights.entry(n).or_insert(s);
            *w = w.max(s);
        }
    }
    let (labels, groups) = found
        .into_iter()
        .map(|(_, term, m)| (term, m.into_iter().map(|(n, _)| n).collect()))
        .unzip();
    Ok(Cornerstones {
        groups: TerminalGroups::with_labels(groups, labels)?,
        weights,
    })
}

fn match_term<S: Scalar, F: Real>(
    g: &QuasiGraph<S>,
    term: &str,
    sim: &SimilarityModel<F>,
    thresholds: &CornerstoneThresholds,
) -> Vec<(NodeId, f64)> {
    g.nodes()
        .iter()
        .filter_map(|node| {
            let s = match node.kind {
                NodeKind::Entity => sim.entity(term, &node.label),
                NodeKind::Relation | NodeKind::Type => sim.phrase(term, &node.label),
            };
            (s > 0.0 && s >= thresholds.of(node.kind)).then_some((node.id, s))
        })
        .collect()
}

/// One tree a candidate appears in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Support {
    /// 1-based rank of the tree.
    pub tree: usize,
    /// Tree cost, plus the connecting edge for a one-hop neighbour.
    pub cost: f64,
    /// Total node weight of the tree.
    pub node_weight: f64,
    /// Mean path cost from the candidate to the tree's terminals.
    pub distance: f64,
    /// Mean number of edges from the candidate to the tree's terminals.
    pub hop_distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub node: NodeId,
    pub label: String,
    /// Labels of attached type nodes, sorted.
    pub types: Vec<String>,
    /// Sorted by tree rank.
    pub supports: Vec<Support>,
    /// Documents behind the supporting trees.
    pub docs: Vec<String>,
}

/// Attached type labels of an entity node.
pub fn type_labels<S: Scalar>(g: &QuasiGraph<S>, n: NodeId) -> Vec<String> {
    let labels: BTreeSet<String> = g
        .neighbors(n)
        .iter()
        .filter(|(nb, e)| g.edge(*e).kind == EdgeKind::TypeEdge && g.node(*nb).kind == NodeKind::Type)
        .map(|(nb, _)| g.node(*nb).label.clone())
        .collect();
    labels.into_iter().collect()
}

/// Weighted and unweighted distances from `from` to every node of `tree`.
fn tree_distances<S: Scalar>(g: &QuasiGraph<S>, tree: &SteinerTree<S>, from: NodeId) -> BTreeMap<NodeId, (f64, usize)> {
    let mut adj: BTreeMap<NodeId, Vec<(NodeId, f64)>> = BTreeMap::new();
    for &e in &tree.edges {
        let edge = g.edge(e);
        let c = edge.cost.to_f64_lossy();
        adj.entry(edge.a).or_default().push((edge.b, c));
        adj.entry(edge.b).or_default().push((edge.a, c));
    }
    let mut dist = BTreeMap::from([(from, (0.0, 0))]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let (du, hu) = dist[&u];
        for &(v, c) in adj.get(&u).into_iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(v) {
                slot.insert((du + c, hu + 1));
                queue.push_back(v);
            }
        }
    }
    dist
}

fn mean_to_terminals(dist: &BTreeMap<NodeId, (f64, usize)>, terminals: &[NodeId], extra: (f64, usize)) -> (f64, f64) {
    if terminals.is_empty() {
        return (extra.0, extra.1 as f64);
    }
    let (mut w, mut h) = (0.0, 0.0);
    for t in terminals {
        let (dw, dh) = dist[t];
        w += dw + extra.0;
        h += (dh + extra.1) as f64;
    }
    let n = terminals.len() as f64;
    (w / n, h / n)
}

/// Non-terminal entity nodes of the trees, plus entity one-hop neighbours
/// recorded in `hops`. Relation and type nodes are never candidates, and a
/// cornerstone never is. Candidates come out in node order.
pub fn extract_candidates<S: Scalar>(
    trees: &[SteinerTree<S>],
    g: &QuasiGraph<S>,
    groups: &TerminalGroups,
) -> Vec<Candidate> {
    let mut found: BTreeMap<NodeId, (Vec<Support>, BTreeSet<String>)> = BTreeMap::new();
    for (i, tree) in trees.iter().enumerate() {
        let cost = tree.cost.to_f64_lossy();
        let node_weight: f64 = tree.nodes.iter().map(|&n| g.node(n).weight).sum();
        let terminals: Vec<NodeId> = tree.nodes.iter().copied().filter(|&n| groups.is_terminal(n)).collect();
        let eligible = |n: NodeId| g.node(n).kind == NodeKind::Entity && !groups.is_terminal(n);

        for &n in tree.nodes.iter().filter(|&&n| eligible(n)) {
            let dist = tree_distances(g, tree, n);
            let (distance, hop_distance) = mean_to_terminals(&dist, &terminals, (0.0, 0));
            let entry = found.entry(n).or_default();
            entry.0.push(Support {
                tree: i + 1,
                cost,
                node_weight,
                distance,
                hop_distance,
            });
            entry.1.extend(tree.docs.iter().cloned());
        }

        for &(n, hop_cost) in tree.hops.iter().filter(|(n, _)| eligible(*n)) {
            // attach through the cheapest edge to a terminal of the tree
            let Some((attach, edge)) = cheapest_link(g, n, &terminals) else {
                continue;
            };
            let dist = tree_distances(g, tree, attach);
            let c = hop_cost.to_f64_lossy();
            let (distance, hop_distance) = mean_to_terminals(&dist, &terminals, (c, 1));
            let entry = found.entry(n).or_default();
            entry.0.push(Support {
                tree: i + 1,
                cost: cost + c,
                node_weight: node_weight + g.node(n).weight,
                distance,
                hop_distance,
            });
            entry.1.extend(tree.docs.iter().cloned());
            entry.1.extend(g.documents_of(&[edge]));
        }
    }
    found
        .into_iter()
        .map(|(node, (supports, docs))| Candidate {
            node,
            label: g.node(node).label.clone(),
            types: type_labels(g, node),
            supports,
            docs: docs.into_iter().collect(),
        })
        .collect()
}

fn cheapest_link<S: Scalar>(g: &QuasiGraph<S>, n: NodeId, terminals: &[NodeId]) -> Option<(NodeId, EdgeId)> {
    g.neighbors(n)
        .iter()
        .filter(|(nb, _)| terminals.binary_search(nb).is_ok())
        .min_by(|(na, ea), (nb, eb)| {
            g.edge(*ea)
                .cost
                .cmp_total(&g.edge(*eb).cost)
                .then(na.cmp(nb))
                .then(ea.cmp(eb))
        })
        .copied()
}

/// Answer type filtering settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeFilter {
    pub threshold: f64,
    /// Also drop candidates without any type.
    pub strict: bool,
}

impl Default for TypeFilter {
    fn default() -> Self {
        TypeFilter {
            threshold: 0.5,
            strict: false,
        }
    }
}

/// Keeps candidates with a type label whose phrase similarity to `expected`
/// reaches the threshold. Untyped candidates stay unless the filter is
/// strict. Without an expected type the list is returned unchanged.
pub fn filter_by_type<F: Real>(
    candidates: Vec<Candidate>,
    expected: Option<&str>,
    sim: &SimilarityModel<F>,
    filter: &TypeFilter,
) -> Vec<Candidate> {
    let Some(expected) = expected else {
        return candidates;
    };
    candidates
        .into_iter()
        .filter(|c| {
            if c.types.is_empty() {
                return !filter.strict;
            }
            c.types
                .iter()
                .any(|t| sim.phrase(t, expected) >= filter.threshold)
        })
        .collect()
}

/// Candidates merged as aliases of one answer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerGroup {
    /// Longest member label; ties go to the lexicographically smaller label.
    pub label: String,
    /// Sorted.
    pub members: Vec<NodeId>,
    pub member_labels: Vec<String>,
    /// One per distinct tree rank, keeping the cheapest when members share a
    /// tree.
    pub supports: Vec<Support>,
    pub docs: Vec<String>,
    pub score: f64,
    /// 1-based; zero until ranked.
    pub rank: usize,
}

/// Union-find over candidates: two merge when one label's tokens are a
/// subsequence of the other's, or when an entity alignment edge joins them.
/// The result does not depend on the input order.
pub fn aggregate<S: Scalar>(candidates: &[Candidate], g: &QuasiGraph<S>) -> Vec<AnswerGroup> {
    let mut sorted: Vec<&Candidate> = candidates.iter().collect();
    sorted.sort_by_key(|c| c.node);
    sorted.dedup_by_key(|c| c.node);
    let toks: Vec<Vec<String>> = sorted.iter().map(|c| tokens(&c.label)).collect();
    let mut dsu = crate::gst::Dsu::new(sorted.len());
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (a, b) = (&toks[i], &toks[j]);
            let alias = !a.is_empty()
                && !b.is_empty()
                && (is_subsequence(a, b) || is_subsequence(b, a));
            let aligned = || {
                g.neighbors(sorted[i].node)
                    .iter()
                    .any(|&(nb, e)| nb == sorted[j].node && g.edge(e).kind == EdgeKind::EntityAlign)
            };
            if alias || aligned() {
                dsu.union(i, j);
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<&Candidate>> = BTreeMap::new();
    for (i, c) in sorted.iter().enumerate() {
        by_root.entry(dsu.find(i)).or_default().push(c);
    }
    let mut out: Vec<AnswerGroup> = by_root
        .into_values()
        .map(|members| {
            let label = members
                .iter()
                .map(|c| c.label.as_str())
                .min_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)))
                .expect("groups are nonempty")
                .to_string();
            let mut supports: BTreeMap<usize, Support> = BTreeMap::new();
            let mut docs: BTreeSet<String> = BTreeSet::new();
            for c in &members {
                for s in &c.supports {
                    supports
                        .entry(s.tree)
                        .and_modify(|old| {
                            if s.cost < old.cost {
                                *old = s.clone();
                            }
                        })
                        .or_insert_with(|| s.clone());
                }
                docs.extend(c.docs.iter().cloned());
            }
            AnswerGroup {
                label,
                members: members.iter().map(|c| c.node).collect(),
                member_labels: members.iter().map(|c| c.label.clone()).collect(),
                supports: supports.into_values().collect(),
                docs: docs.into_iter().collect(),
                score: 0.0,
                rank: 0,
            }
        })
        .collect();
    out.sort_by(|a, b| a.label.cmp(&b.label).then(a.members.cmp(&b.members)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gst::{augment_one_hop, solve_gst_k, SolverConfig};
    use crate::similarity::{EmbeddingStore, MentionDictionary};

    #[test]
    fn question_runs_split_on_stopwords() {
        let q = Question::new("Which footballers of African descent played in the FIFA 2018 final?");
        assert_eq!(
            q.runs,
            [
                vec!["footballers"],
                vec!["African", "descent"],
                vec!["played"],
                vec!["FIFA", "2018", "final"]
            ]
        );
        assert!(!Question::new("who is it?").has_content());
    }

    #[test]
    fn answer_type_table() {
        assert_eq!(infer_answer_type("who played in the final?").as_deref(), Some("person"));
        assert_eq!(infer_answer_type("Where was Pogba born?").as_deref(), Some("place"));
        assert_eq!(infer_answer_type("when did it open?").as_deref(), Some("date"));
        assert_eq!(
            infer_answer_type("which TV actress was engaged to John Stamos and was in a series with him?")
                .as_deref(),
            Some("TV actress")
        );
        assert_eq!(
            infer_answer_type("Which footballers of African descent played in the final?").as_deref(),
            Some("footballers")
        );
        assert_eq!(infer_answer_type("name the river flowing through Paris"), None);
        assert_eq!(infer_answer_type("What is the river flowing through Paris?").as_deref(), Some("river"));
    }

    fn relation_graph() -> QuasiGraph {
        let mut g = QuasiGraph::new();
        let fifa = g.add_node("2018 FIFA WC Final", NodeKind::Entity).unwrap();
        let russia = g.add_node("Russia 2018 Final", NodeKind::Entity).unwrap();
        let born = g.add_node("born", NodeKind::Relation).unwrap();
        let descent = g.add_node("Angolan descent", NodeKind::Relation).unwrap();
        let umtiti = g.add_node("Samuel Umtiti", NodeKind::Entity).unwrap();
        g.add_edge(umtiti, born, EdgeKind::TripleSP, 1.0).unwrap();
        g.add_edge(umtiti, descent, EdgeKind::TripleSP, 1.0).unwrap();
        g.add_edge(born, fifa, EdgeKind::TriplePO, 1.0).unwrap();
        g.add_edge(descent, russia, EdgeKind::TriplePO, 1.0).unwrap();
        g
    }

    fn descent_embeddings() -> SimilarityModel<f64> {
        let mut e = EmbeddingStore::new(3);
        e.insert("descent", vec![1.0, 0.0, 0.0]).unwrap();
        e.insert("born", vec![0.8, 0.6, 0.0]).unwrap();
        e.insert("angolan", vec![0.0, 1.0, 0.0]).unwrap();
        SimilarityModel::new(MentionDictionary::new(), e)
    }

    #[test]
    fn fifa_final_group_contains_both_finals() {
        let g = relation_graph();
        let q = Question::new("Who played in the FIFA 2018 final?");
        let cs = select_cornerstones(&g, &q, &descent_embeddings(), &CornerstoneThresholds::default()).unwrap();
        let fifa_group = cs.groups.labels().iter().position(|l| l == "FIFA 2018 final").unwrap();
        assert_eq!(cs.groups.groups()[fifa_group], [NodeId(0), NodeId(1)]);
        // jaccard 3/4 and 2/4
        assert_eq!(cs.weights[&NodeId(0)], 0.75);
        assert_eq!(cs.weights[&NodeId(1)], 0.5);
    }

    #[test]
    fn descent_matches_relations_by_embedding() {
        let g = relation_graph();
        let q = Question::new("footballers of descent");
        let cs = select_cornerstones(&g, &q, &descent_embeddings(), &CornerstoneThresholds::default()).unwrap();
        let i = cs.groups.labels().iter().position(|l| l == "descent").unwrap();
        // cos(descent, born) = 0.8; cos(descent, mean(angolan, descent)) = 1/sqrt(2)
        assert_eq!(cs.groups.groups()[i], [NodeId(2), NodeId(3)]);
    }

    #[test]
    fn stopword_question_has_no_cornerstones() {
        let g = relation_graph();
        let q = Question::new("who is the one that was there?");
        assert!(matches!(
            select_cornerstones(&g, &q, &descent_embeddings(), &CornerstoneThresholds::default()),
            Err(Error::NoCornerstones)
        ));
    }

    #[test]
    fn longer_match_consumes_its_words() {
        let mut g: QuasiGraph = QuasiGraph::new();
        g.add_node("Euro 2016 final", NodeKind::Entity).unwrap();
        g.add_node("final", NodeKind::Entity).unwrap();
        let q = Question::new("played in the Euro 2016 final");
        let cs = select_cornerstones(&g, &q, &SimilarityModel::<f64>::default(), &CornerstoneThresholds::default())
            .unwrap();
        assert_eq!(cs.groups.labels(), ["Euro 2016 final"]);
    }

    fn candidate(node: usize, label: &str, trees: &[(usize, f64)]) -> Candidate {
        Candidate {
            node: NodeId(node),
            label: label.into(),
            types: vec![],
            supports: trees
                .iter()
                .map(|&(tree, cost)| Support {
                    tree,
                    cost,
                    node_weight: 0.0,
                    distance: 0.0,
                    hop_distance: 0.0,
                })
                .collect(),
            docs: vec![],
        }
    }

    #[test]
    fn relation_interior_gives_no_candidates() {
        let mut g: QuasiGraph = QuasiGraph::new();
        let a = g.add_node("A", NodeKind::Entity).unwrap();
        let r = g.add_node("r", NodeKind::Relation).unwrap();
        let b = g.add_node("B", NodeKind::Entity).unwrap();
        g.add_edge(a, r, EdgeKind::TripleSP, 0.5).unwrap();
        g.add_edge(r, b, EdgeKind::TriplePO, 0.5).unwrap();
        let groups = TerminalGroups::new(vec![vec![a], vec![b]]).unwrap();
        let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(5)).unwrap();
        assert!(extract_candidates(&trees, &g, &groups).is_empty());
    }

    #[test]
    fn candidate_supports_list_only_trees_where_it_is_interior() {
        // two routes between the cornerstones 0 and 3: via 1 (cheap) and via 2
        let mut g: QuasiGraph = QuasiGraph::new();
        for l in ["t0", "x1", "x2", "t3"] {
            g.add_node(l, NodeKind::Entity).unwrap();
        }
        g.add_edge(NodeId(0), NodeId(1), EdgeKind::EntityAlign, 0.9).unwrap();
        g.add_edge(NodeId(1), NodeId(3), EdgeKind::EntityAlign, 0.9).unwrap();
        g.add_edge(NodeId(0), NodeId(2), EdgeKind::EntityAlign, 0.6).unwrap();
        g.add_edge(NodeId(2), NodeId(3), EdgeKind::EntityAlign, 0.6).unwrap();
        let groups = TerminalGroups::new(vec![vec![NodeId(0)], vec![NodeId(3)]]).unwrap();
        let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(2)).unwrap();
        let c = extract_candidates(&trees, &g, &groups);
        let got: Vec<(usize, Vec<usize>)> = c
            .iter()
            .map(|c| (c.node.0, c.supports.iter().map(|s| s.tree).collect()))
            .collect();
        assert_eq!(got, [(1, vec![1]), (2, vec![2])]);
        assert!(c.iter().all(|c| !groups.is_terminal(c.node)));
    }

    #[test]
    fn one_hop_neighbours_become_candidates() {
        let mut g: QuasiGraph = QuasiGraph::new();
        let pogba = g.add_node("Paul Pogba", NodeKind::Entity).unwrap();
        let born = g.add_node("born in", NodeKind::Relation).unwrap();
        let lagny = g.add_node("Lagny-sur-Marne", NodeKind::Entity).unwrap();
        let mu = g.add_node("Manchester United", NodeKind::Entity).unwrap();
        g.add_edge(pogba, born, EdgeKind::TripleSP, 1.0).unwrap();
        g.add_edge(born, lagny, EdgeKind::TriplePO, 1.0).unwrap();
        g.add_edge(pogba, mu, EdgeKind::EntityAlign, 0.75).unwrap();
        let groups = TerminalGroups::new(vec![vec![pogba]]).unwrap();
        let mut trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(3)).unwrap();
        augment_one_hop(&mut trees, &g, &groups);
        let c = extract_candidates(&trees, &g, &groups);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].label, "Manchester United");
        assert_eq!(c[0].supports[0].cost, 0.25);
        assert_eq!(c[0].supports[0].hop_distance, 1.0);
    }

    #[test]
    fn type_filter_behaviour() {
        let mut e = EmbeddingStore::new(3);
        e.insert("footballer", vec![1.0, 0.0, 0.0]).unwrap();
        e.insert("footballers", vec![1.0, 0.1, 0.0]).unwrap();
        e.insert("french", vec![0.0, 0.3, 0.0]).unwrap();
        e.insert("professional", vec![0.0, 0.0, 0.3]).unwrap();
        e.insert("stadium", vec![0.0, 1.0, 0.0]).unwrap();
        e.insert("person", vec![0.0, 0.0, 1.0]).unwrap();
        let sim = SimilarityModel::new(MentionDictionary::new(), e);
        let mut umtiti = candidate(0, "Samuel Umtiti", &[(1, 0.5)]);
        umtiti.types = vec!["French professional footballer".into()];
        let mut stade = candidate(1, "Stade de France", &[(1, 0.5)]);
        stade.types = vec!["stadium".into()];
        let untyped = candidate(2, "Lyon", &[(1, 0.5)]);
        let all = vec![umtiti, stade, untyped];

        let kept = filter_by_type(all.clone(), Some("footballers"), &sim, &TypeFilter::default());
        assert_eq!(kept.iter().map(|c| c.node.0).collect::<Vec<_>>(), [0, 2]);
        let strict = TypeFilter {
            strict: true,
            ..Default::default()
        };
        let kept = filter_by_type(all.clone(), Some("footballers"), &sim, &strict);
        assert_eq!(kept.iter().map(|c| c.node.0).collect::<Vec<_>>(), [0]);
        let kept = filter_by_type(all.clone(), Some("person"), &sim, &TypeFilter::default());
        assert!(kept.iter().all(|c| c.node.0 != 1));
        assert_eq!(filter_by_type(all.clone(), None, &sim, &strict), all);
    }

    #[test]
    fn aggregation_by_subsequence_and_alignment() {
        let mut g: QuasiGraph = QuasiGraph::new();
        for l in ["Paul Pogba", "Paul Labile Pogba", "Cristiano Ronaldo", "CR7", "Lyon"] {
            g.add_node(l, NodeKind::Entity).unwrap();
        }
        g.add_edge(NodeId(2), NodeId(3), EdgeKind::EntityAlign, 0.9).unwrap();
        let cands = vec![
            candidate(0, "Paul Pogba", &[(1, 0.5)]),
            candidate(1, "Paul Labile Pogba", &[(1, 0.5), (2, 0.7)]),
            candidate(2, "Cristiano Ronaldo", &[(3, 0.8)]),
            candidate(3, "CR7", &[(4, 0.9)]),
            candidate(4, "Lyon", &[(5, 0.9)]),
        ];
        let groups = aggregate(&cands, &g);
        let summary: Vec<(&str, Vec<usize>, Vec<usize>)> = groups
            .iter()
            .map(|a| {
                (
                    a.label.as_str(),
                    a.members.iter().map(|n| n.0).collect(),
                    a.supports.iter().map(|s| s.tree).collect(),
                )
            })
            .collect();
        assert_eq!(
            summary,
            [
                ("Cristiano Ronaldo", vec![2, 3], vec![3, 4]),
                ("Lyon", vec![4], vec![5]),
                ("Paul Labile Pogba", vec![0, 1], vec![1, 2]),
            ]
        );
        let mut reversed = cands.clone();
        reversed.reverse();
        assert_eq!(aggregate(&reversed, &g), groups);
    }
}
