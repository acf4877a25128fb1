//! Finite quasi-orders, chain covers and antichains, the auxiliary
//! "forced-apart" graph of a graph's optimal colorings, the dense-sequence
//! graphs `G0`, and well-founded trees with their Borel-style codes.

pub mod auxgraph;
pub mod budget;
pub mod coloring;
pub mod corpus;
pub mod dilworth;
pub mod error;
pub mod g0;
pub mod harness;
pub mod par;
pub mod procedures;
pub mod propositions;
pub mod relation;
pub mod tree;

pub use auxgraph::{aux_graph, aux_graph_bruteforce, witness_set, AuxGraph, AuxSummary};
pub use budget::Budget;
pub use coloring::{chromatic_number, ColoringCertificate};
pub use dilworth::{dichotomy, min_chain_cover, width, width_and_antichain, ChainCover, DichotomyResult};
pub use error::{Error, Result};
pub use g0::{dense_sequences, g0_level, hom_search, DenseSequences, G0Level};
pub use par::Exec;
pub use procedures::{independence_extend, paper_chain_cover, puncture_extend, reduced_relation, SetFamily};
pub use propositions::{verify_proposition, Instance, Proposition, PropositionReport, VerifyOptions};
pub use relation::{derive, quotient, Derived, FiniteRelation, Graph, QuasiOrder, QuotientPoset};
pub use tree::{eval_borel_code, pruning_derivative, pruning_rank, BorelCode, FiniteTree, PruningRank};
