//! Certificate-producing solver for tree containment above minimum degree.

pub mod color_coding;
pub mod dense;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod generate;
pub mod graph;
pub mod hardness;
pub mod high_leaf;
pub mod io;
pub mod medium;
pub mod outcome;
pub mod pipeline;
pub mod preserving;
pub mod search;
pub mod seed;
pub mod small_diameter;
pub mod tree;

pub use embedding::{verify, verify_full, PartialEmbedding};
pub use error::{Error, Result};
pub use graph::{vertex_set, Graph, VertexSet};
pub use outcome::{Branch, ExactReason, NotFoundReason, SolveOutcome};
pub use pipeline::{brute_force_contains, solve, verify_certificate, Config, Mode, Thresholds};
pub use tree::Tree;
