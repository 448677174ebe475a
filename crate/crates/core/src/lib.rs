//! Maximum and minimum induced subgraphs of bounded treewidth satisfying a
//! regular property, computed by dynamic programming over minimal
//! separators and potential maximal cliques.
//!
//! The pipeline is: enumerate the minimal separators and potential maximal
//! cliques of a connected graph ([`triangulation`]), then run the
//! block-by-block dynamic program ([`engine`]) with a property automaton
//! ([`automata`]). [`problems`] packages common problems, and [`oracle`]
//! holds brute-force references used by the test suites.

pub mod automata;
pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod problems;
pub mod triangulation;
pub mod vset;

pub use error::{Error, Result};
pub use graph::{parse_graph, Graph, GraphFormat};
pub use vset::VertexSet;
