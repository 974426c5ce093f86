//! Spectral graph matching.
//!
//! The crate builds the GRAMPA similarity matrix and the solution of the
//! row-sum-constrained quadratic relaxation from the eigendecompositions of
//! two weighted adjacency matrices, rounds similarity matrices to vertex
//! correspondences, and generates correlated Erdős–Rényi and Gaussian Wigner
//! pairs with a planted permutation. Contour-integral and dense KKT routes to
//! the same matrices are provided as independent cross-checks, together with
//! resolvent diagnostics against the semicircle law.

// `!(x > y)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod dump;
pub mod error;
pub mod matrix;
pub mod models;
pub mod rounding;
pub mod similarity;
pub mod spectral;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, Matrix, SymMatrix};

pub use models::{CorrelatedPair, ModelKind, Permutation, TruthMode};
pub use rounding::Matching;
pub use similarity::{ContourSpec, Method, SimilarityMatrix};
pub use spectral::EigenDecomp;
