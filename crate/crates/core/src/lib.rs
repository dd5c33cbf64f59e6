//! Question answering over a quasi knowledge graph built on the fly from
//! Open IE triples, with answers read off the top-k group Steiner trees that
//! connect the question's cornerstone nodes.

pub mod answering;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod extraction;
pub mod graph;
pub mod gst;
pub mod pipeline;
pub mod scalar;
pub mod similarity;
pub mod text;

pub use error::{Error, Result};

/// Exact edge weights for tests and oracles.
pub type Rational = num_rational::Ratio<i64>;

pub type Graph = graph::QuasiGraph<f64>;
pub type ExactGraph = graph::QuasiGraph<Rational>;
pub type Tree = gst::SteinerTree<f64>;
pub type ExactTree = gst::SteinerTree<Rational>;
