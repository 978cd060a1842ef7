//! Exact computations on affine SL(2,q)-unitals.
//!
//! The crate builds the coset geometry of SL(2,q), the affine unitals
//! `U_{S,D}` defined on it, parallelisms of their short blocks and the unitals
//! obtained by closing them. Around that it provides the group machinery
//! needed to classify the results: the semilinear-times-right-translation
//! group acting on SL(2,q), a permutation-group toolkit, an exact cover
//! solver and a partition-refinement isomorphism engine for designs.
//!
//! Points are dense `u32` indices into the sorted element list of SL(2,q);
//! every set-valued output is sorted so that results are reproducible.

pub mod ar;
pub mod classify;
pub mod closure;
pub mod design;
pub mod exact_cover;
pub mod format;
pub mod gf;
pub mod grp;
pub mod iso;
pub mod para;
pub mod perm;
pub mod structure;
pub mod trans;
pub mod unital;

pub use ar::{ArElem, ArGroup, Semilinear};
pub use closure::{close, verify_design};
pub use design::{Design, DesignReport};
pub use gf::{FieldElem, FieldSpec};
pub use grp::{GroupElem, GroupTable, ShortBlock, ShortBlocks, Side, Subgroup};
pub use para::{Parallelism, ParallelismKind};
pub use perm::Perm;
pub use structure::Fingerprint;
pub use unital::AffineUnital;

/// Dense index of an element of SL(2,q).
pub type Point = u32;

/// Index of a short block in the sorted universe of short blocks.
pub type BlockId = u32;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime (power)")]
    NotPrime(u32),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field of order {0} has no subfield of index 2")]
    NotSquareOrder(u32),
    #[error("operation requires odd order, got {0}")]
    EvenOrder(u32),
    #[error("block size {got}, expected {expected}")]
    BadBlockSize { expected: usize, got: usize },
    #[error("invalid mode: {0}")]
    BadMode(String),
    #[error("axiom {axiom} violated: {witness}")]
    AxiomViolation { axiom: &'static str, witness: String },
    #[error("invalid parallelism: {0}")]
    InvalidParallelism(String),
    #[error("search budget of {budget} nodes exhausted after {found} solutions")]
    Timeout { budget: u64, found: usize },
    #[error("unexpected result: {0}")]
    Unexpected(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
