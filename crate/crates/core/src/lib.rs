//! Probabilistic tree embeddings and distance oracles built from dominance
//! sequences.
//!
//! The pipeline is: a weighted undirected [`graph::Graph`] and a random
//! [`graph::Permutation`] give dominance sequences ([`domseq`]), which are
//! compressed into partition sequences and inserted into a compressed trie
//! ([`frt`]). Several such trees form a [`oracle::DistanceOracle`].
//! [`bucket_sssp`] provides the approximate shortest-path engine used by the
//! approximate sequence builder, and [`ramsey`] estimates padding
//! probabilities of the same hierarchical partitions.

pub mod bucket_sssp;
pub mod csv;
pub mod domseq;
pub mod frt;
pub mod graph;
pub mod lca;
pub mod oracle;
pub mod par;
pub mod ramsey;
pub mod rng;

pub use graph::{Graph, Permutation, INF};
