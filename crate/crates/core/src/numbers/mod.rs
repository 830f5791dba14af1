//! Hypernatural numbers as eventually quasi-polynomial sequences.

mod hypernat;
mod poly;
mod quasi;

pub use hypernat::{HyperNat, NatOp};
pub use poly::{Poly, Rational};
pub use quasi::{QuasiPoly, Relation};
