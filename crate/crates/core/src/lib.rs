//! Exact Lie-algebraic and symbolic machinery for Klein-Gordon-Fock
//! equations on groups with invariant metrics and electromagnetic fields.

pub mod cohomology;
pub mod e2r;
pub mod kgf;
pub mod lie;
pub mod linalg;
pub mod par;
pub mod rational;
pub mod symb;

pub use lie::{DualVector, LieAlgebra, LieError};
pub use linalg::QMatrix;
pub use par::Execution;
pub use rational::{GaussRational, Rational};
