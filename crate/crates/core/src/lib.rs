//! Exact workbench for nonstandard digraphs.
//!
//! A nonstandard digraph `*D = {*A, *V}` is the ultrapower of a sequence of
//! standard digraphs `⟨D_n⟩` modulo a fixed nonprincipal ultrafilter. This
//! crate restricts every index set to ultimately periodic subsets of ℕ and
//! every internal sequence to eventually quasi-polynomial selectors, which
//! keeps each "for almost all n" question decidable and exact.

pub mod error;
pub mod cli;
pub mod connectivity;
pub mod digraph;
pub mod filter;
pub mod galaxies;
pub mod ns_connectivity;
pub mod numbers;
pub mod ultrapower;

pub use error::{Error, ErrorClass, Result};
pub use filter::{FilterOracle, Finiteness, IndexSet, SetOp};
pub use numbers::{HyperNat, NatOp, Poly, QuasiPoly, Rational, Relation};
