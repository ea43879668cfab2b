//! Exact finite-field linear algebra, matroids as rank oracles, multi-linear
//! representations, Dowling and Reid constructions, and derivation matroids of
//! polynomial assignments.

pub mod constructions;
pub mod derivation;
pub mod field;
pub mod matrix;
pub mod matroid;
pub mod multilinear;
mod text;
pub mod verify;

pub use field::{FieldElement, FieldError, FieldSpec};
pub use matrix::{MatrixError, MatrixF};
pub use matroid::{direct_sum, GroundSet, Matroid, MatroidError};
pub use multilinear::{KLinearRep, MultilinearError};
pub use text::{ParseError, ParseErrorKind};
pub use verify::{verify_paper, VerificationReport, VerifyOptions};
