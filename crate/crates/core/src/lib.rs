//! Twenty-questions search over finite distributions: optimal and
//! restricted-family decision trees, and tools for analysing them.

pub mod analysis;
pub mod dist;
pub mod error;
pub mod family;
pub mod huffman;
pub mod json;
pub mod strategy;
pub mod question;
pub mod sample;
pub mod set;
pub mod split;
pub mod stepper;
pub mod tree;

pub use dist::{binary_entropy, entropy_of, parse_rational, Distribution, DyadicMeasure};
pub use error::{Error, Result};
pub use family::{ComparisonEquality, ExplicitFamily, QuestionFamily};
pub use question::{Question, QuestionKind};
pub use set::{Element, ElementSet};
pub use tree::{DecisionTree, Node, NodeId, Transcript, TreeBuilder, ValidationReport, Violation};
pub use huffman::{brute_force_opt, huffman, huffman_depths, HuffmanResult};
