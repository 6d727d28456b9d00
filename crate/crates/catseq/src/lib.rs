//! Exact calculus for categorical sequences: the sequence algebra itself,
//! product-length sequences of graded-commutative algebras over Q or F_p,
//! realization of formal sequences by wedges of products of spheres, and a
//! bound-propagation engine that brackets sigma_X from user-asserted facts
//! and emits a replayable derivation trace.

pub mod algebra;
pub mod cli;
pub mod field;
pub mod infer;
pub mod jsonio;
pub mod linalg;
pub mod realize;
pub mod seq;
