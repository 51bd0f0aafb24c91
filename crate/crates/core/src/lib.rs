//! Positive definite integral ternary quadratic forms: reduction and
//! equivalence, local Jordan data, Watson transformations, spinor genera
//! and regularity classification.

pub mod arith;
pub mod forms;
pub mod localdata;
pub mod matrix;
pub mod regularity;
pub mod spinor;
pub mod watson;

pub use forms::{FormError, GramMatrix, RepresentedSet, TernaryForm, UnimodularTransform};
