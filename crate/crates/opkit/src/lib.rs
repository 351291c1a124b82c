//! Operadic structures on classical probabilities, quantum states, tree
//! quantum channels, finite loops, little squares, and almost-symplectic
//! quantum codes.
//!
//! Every construction is exposed as an executable operation together with
//! verification suites for the algebraic laws it satisfies (composition
//! associativity, equivariance, unit behaviour, majorization and entropy
//! inequalities, strictness closure, commutation gates). The suites are
//! seeded and deterministic; see [`suites`] for the registry and the
//! `opkit-cli` crate for the command-line runner.

pub mod channels;
pub mod cmatrix;
pub mod codes;
pub mod density;
pub mod fixtures;
pub mod json;
pub mod loops;
pub mod measurement;
pub mod perm;
pub mod prob;
pub mod qstate;
pub mod squares;
pub mod suites;
pub mod symplectic;
pub mod trees;

mod error;

pub use error::{Error, Result};
