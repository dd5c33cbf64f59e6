use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnswerGroup;
use crate::error::{Error, Result};

/// Guards `1 / cost` against zero-cost trees.
pub const EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankingStrategy {
    /// Sum over supporting trees of `1 / (cost + EPSILON)`.
    #[default]
    InvCostSum,
    /// Number of supporting trees.
    GstCount,
    /// Sum over supporting trees of the tree's total node weight.
    NodeWeightSum,
    /// Inverse of the smallest mean path cost to the tree terminals.
    WeightedDistance,
    /// Inverse of the smallest mean hop count to the tree terminals.
    UnweightedDistance,
}

impl RankingStrategy {
    pub const ALL: [RankingStrategy; 5] = [
        RankingStrategy::InvCostSum,
        RankingStrategy::GstCount,
        RankingStrategy::NodeWeightSum,
        RankingStrategy::WeightedDistance,
        RankingStrategy::UnweightedDistance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RankingStrategy::InvCostSum => "inv-cost-sum",
            RankingStrategy::GstCount => "gst-count",
            RankingStrategy::NodeWeightSum => "node-weight-sum",
            RankingStrategy::WeightedDistance => "weighted-distance",
            RankingStrategy::UnweightedDistance => "unweighted-distance",
        }
    }

    pub fn score(self, answer: &AnswerGroup) -> f64 {
        let s = &answer.supports;
        let min = |f: fn(&super::Support) -> f64| s.iter().map(f).fold(f64::INFINITY, f64::min);
        match self {
            RankingStrategy::InvCostSum => s.iter().map(|t| 1.0 / (t.cost + EPSILON)).sum(),
            RankingStrategy::GstCount => s.len() as f64,
            RankingStrategy::NodeWeightSum => s.iter().map(|t| t.node_weight).sum(),
            RankingStrategy::WeightedDistance if !s.is_empty() => 1.0 / (min(|t| t.distance) + EPSILON),
            RankingStrategy::UnweightedDistance if !s.is_empty() => 1.0 / (min(|t| t.hop_distance) + EPSILON),
            _ => 0.0,
        }
    }
}

impl fmt::Display for RankingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RankingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RankingStrategy::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown ranking strategy {s:?}; expected one of {}",
                    RankingStrategy::ALL.map(RankingStrategy::name).join(", ")
                ))
            })
    }
}

/// Scores every answer and sorts by descending score, then label.
pub fn rank(answers: Vec<AnswerGroup>, strategy: RankingStrategy) -> Vec<AnswerGroup> {
    rank_by(answers, |a| strategy.score(a))
}

/// Like [`rank`] with an arbitrary scoring function.
pub fn rank_by(mut answers: Vec<AnswerGroup>, score: impl Fn(&AnswerGroup) -> f64) -> Vec<AnswerGroup> {
    for a in &mut answers {
        a.score = score(a);
    }
    answers.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.label.cmp(&b.label))
            .then_with(|| a.members.cmp(&b.members))
    });
    for (i, a) in answers.iter_mut().enumerate() {
        a.rank = i + 1;
    }
    answers
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerJson {
    pub label: String,
    pub score: f64,
    pub rank: usize,
    pub trees: Vec<usize>,
    pub docs: Vec<String>,
}

/// The answer list written by the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedAnswers {
    pub question: String,
    pub answers: Vec<AnswerJson>,
}

impl RankedAnswers {
    pub fn new(question: &str, ranked: &[AnswerGroup]) -> Self {
        RankedAnswers {
            question: question.to_string(),
            answers: ranked
                .iter()
                .map(|a| AnswerJson {
                    label: a.label.clone(),
                    score: a.score,
                    rank: a.rank,
                    trees: a.supports.iter().map(|s| s.tree).collect(),
                    docs: a.docs.clone(),
                })
                .collect(),
        }
    }

    /// Labels in rank order.
    pub fn labels(&self) -> Vec<&str> {
        self.answers.iter().map(|a| a.label.as_str()).collect()
    }
}
