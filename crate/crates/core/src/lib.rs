//! Adem relations and hom-duals in the Dyer-Lashof algebra `R[n]` mod p.
//!
//! Two independent routes to the admissible form of a composite operation:
//! classical rewriting with the Adem relations ([`opalgebra`]), and
//! coefficient extraction in the Borel invariants `B[n] = F_p[h_1, ..., h_n]`
//! of Dickson monomials ([`invariants`], [`correspondence`]).

pub mod arith;
pub mod correspondence;
pub mod error;
pub mod invariants;
pub mod opalgebra;
pub mod sequences;
pub mod syntax;
pub mod verify;

pub use arith::{Context, Fp, Nat};
pub use error::{Error, Result};
pub use sequences::{HalfInt, OpSeq, UpperSeq};
