//! Exact computations with finitely presented N-graded Lie algebras.

pub mod corpus;
pub mod envelope;
pub mod expr;
pub mod freelie;
pub mod graphalg;
pub mod homology;
pub mod linalg;
pub mod onerelator;
pub mod presented;
pub mod raag;
pub mod scalars;
pub mod selftest;
pub mod subalgebra_example;
