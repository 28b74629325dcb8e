//! Folded Reed–Solomon list decoding with side information, and folded
//! Lagrange coded computing (FLCC) built on top of it.
//!
//! The layers, bottom up: prime-field arithmetic ([`field`]), polynomials and
//! Lagrange interpolation ([`poly`]), dense linear algebra ([`linalg`]), the
//! FRS code and its list decoder ([`frs`]), pruning a candidate subspace to a
//! single polynomial ([`prune`]), the coded-computing protocol ([`flcc`]) and
//! seeded experiments ([`sim`]).

pub mod config;
pub mod field;
pub mod flcc;
pub mod frs;
pub mod linalg;
pub mod poly;
pub mod prune;
pub mod sim;

pub use field::{Fe, FieldError, PrimeField};
pub use flcc::{FlccDims, FlccError, FlccParams};
pub use frs::{FrsCodeword, FrsError, FrsParams};
pub use linalg::{AffineSolution, MatFq};
pub use poly::Poly;
