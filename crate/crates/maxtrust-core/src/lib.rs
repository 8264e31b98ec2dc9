//! Trust computation over agent networks in two algebras.
//!
//! The conventional side implements Eigentrust: local trust scores are
//! row-normalized into a stochastic matrix and the global trust vector is the
//! dominant eigenvector of its transpose, found by power iteration. That
//! construction needs the matrix to be irreducible; on reducible networks the
//! iteration collapses onto a handful of agents or fails to converge at all.
//!
//! The max-plus side replaces (+, *) with (max, +) over R ∪ {-inf}. Trust
//! matrices keep a distinguished epsilon entry for "no information", which is
//! different from an explicit trust score of zero. Reducible matrices are
//! brought to block upper triangular normal form, each irreducible diagonal
//! block gets its max-plus eigenvalue, and the per-block growth rates combine
//! into a trust trajectory t(k) = v ⊗ ξ^{⊗k} that stays informative where
//! power iteration degenerates.
//!
//! Layout:
//! - [`tropical`]: max-plus scalars, vectors and dense matrices
//! - [`real`]: minimal dense matrix for the conventional algebra
//! - [`graph`]: precedence graphs, strong connectivity, normal form
//! - [`spectral`]: eigenproblems in both algebras
//! - [`trust`]: interaction ledgers, Eigentrust, MaxTrust, growth rates
//! - [`reference`]: brute-force reference implementations used by tests
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the network
//! simulator live in the companion `maxtrust` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod graph;
pub mod real;
pub mod reference;
pub mod spectral;
pub mod tropical;
pub mod trust;

pub use graph::{normal_form, NormalForm, PrecedenceGraph};
pub use real::RealMatrix;
pub use spectral::{
    classify_matrix, dominant_eigenpair_conventional, eigenvalue_by_traces, max_cycle_mean,
    max_power, ConventionalEigenPair, MatrixClass, MaxPlusEigenPair, PowerIterationConfig,
    SpectralError,
};
pub use tropical::{ShapeError, TropicalMatrix, TropicalScalar, TropicalVector};
pub use trust::{
    eigentrust, growth_rates, maxtrust, normalize_local_trust, recurrence_oracle, AssemblyMode,
    EigentrustConfig, EigentrustResult, InteractionLedger, MaxTrustConfig, MaxTrustSolution,
    TrustError, TrustMatrix, TrustVector,
};
