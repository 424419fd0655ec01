//! Exact-arithmetic calculus for idempotent correspondences.
//!
//! Everything runs over arbitrary-precision rationals with zero tolerance:
//! non-commutative Gram-Schmidt orthonormalization of idempotent families,
//! triangular splitting and component extraction, idempotent factorization
//! through smaller carriers, graded decomposition ledgers with their
//! filtration and vanishing checkers, and constructive invertibility
//! certificates for Lefschetz-type correspondences.
//!
//! The `kunneth` binary exposes the file-level workflow: `check`,
//! `orthonormalize`, `product` and `generate` on a versioned text fixture
//! format (see [`fixture`]).

pub mod algebra;
pub mod ledger;
pub mod matrix;
pub mod rational;
pub mod report;
pub mod splitter;

pub use algebra::{Element, IdempotentFamily, InvolutiveContext};
pub use ledger::{ChowRealization, GradedHomology, KunnethLedger};
pub use matrix::{RatMatrix, Subspace};
pub use rational::Rational;
pub use report::CheckReport;
