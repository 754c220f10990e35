//! A desk-scale percolation laboratory.
//!
//! Everything here runs on lazily generated, possibly infinite graphs that are
//! presented by a root vertex and a pure neighbor function:
//!
//! * [`graphs`] — the graph contract, the instance zoo, ball materialization,
//!   local-girth and orbit diagnostics.
//! * [`percolation`] — Bernoulli bond percolation with counter-hashed edge
//!   states, crossing-probability estimation and `p_c` bracketing.
//! * [`saw`] — exact self-avoiding-walk enumeration, connective-constant
//!   bounds and the first-moment `p_c` lower bound.
//! * [`trees`] — growth rates, branching-number brackets via the min-cutset
//!   recursion, and subperiodicity witnesses.
//! * [`cover`] — the universal cover as the non-backtracking-path tree, with
//!   machine-checked covering-map properties.
//! * [`fixtures`] — finite graphs and deliberately corrupted covers used by
//!   tests and negative controls.

pub mod cover;
pub mod fixtures;
pub mod graphs;
pub mod percolation;
pub mod saw;
pub mod trees;

pub use graphs::{Ball, GraphModel, SymmetryDecl, VertexRef};
