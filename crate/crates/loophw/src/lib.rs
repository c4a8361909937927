//! Exact-arithmetic engine for finite-dimensional highest weight
//! representations of the sl2 loop algebra.
//!
//! The crate builds concrete modules (evaluation modules, fused Weyl modules,
//! tensor products and quotients), extracts highest weight polynomials and
//! parameters, decides irreducibility, and enumerates the dimensions of all
//! reducible highest weight modules with a given highest weight via a
//! submodule network.
//!
//! All arithmetic is exact. The core is generic over [`Scalar`], an exact
//! ordered field; [`Rat`] (arbitrary-precision rationals) is the concrete
//! type used by the CLI and the test suites.
//!
//! ```
//! use loophw::{analysis, HwParams, ModuleRep, Rat};
//!
//! // two parameters, one with multiplicity two: â = (2, 2, 3)
//! let params = HwParams::<Rat>::parse_spec("2:2,3:1")?;
//!
//! // the universal highest weight module is reducible...
//! let weyl = ModuleRep::weyl(&params, 1 << 12)?;
//! let report = analysis::analyze(&weyl, &weyl.omega()?, &params)?;
//! assert_eq!(weyl.dim(), 8);
//! assert!(!report.criterion_holds);
//! assert!(!report.oracle_irreducible);
//!
//! // ...while the evaluation tensor of the same weight is irreducible
//! let packed = ModuleRep::packed(&params, 1 << 12)?;
//! let report = analysis::analyze(&packed, &packed.omega()?, &params)?;
//! assert_eq!(report.actual_dim, 6);
//! assert!(report.criterion_holds);
//! # Ok::<(), loophw::Error>(())
//! ```

pub mod analysis;
mod fusion;
pub mod linalg;
pub mod loop_ops;
pub mod network;
pub mod rep;
pub mod scalars;
pub mod verify;

pub use analysis::HwReport;
pub use linalg::{Matrix, Subspace};
pub use loop_ops::{GenKind, GenSymbol, LoopCombo, ParamSeq};
pub use network::{NetLabel, NetworkGraph};
pub use rep::ModuleRep;
pub use scalars::{HwParams, HwPoly, Scalar};

/// Arbitrary-precision rational scalar, the default instantiation.
pub type Rat = num_rational::BigRational;

/// Machine-word rational scalar, usable for small hand computations.
/// Overflows silently on large intermediate values; prefer [`Rat`].
pub type Rat64 = num_rational::Rational64;

/// Default cap on constructed module dimensions (matrix row count).
pub const DEFAULT_DIM_CAP: usize = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("parameters must be pairwise distinct")]
    DegenerateDenominator,
    #[error("sub-multiset is not contained in the parameter multiset: {0}")]
    NotContained(String),
    #[error("dimension cap exceeded: {dim} > {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("vector is not highest weight: {0}")]
    NotHighestWeight(String),
    #[error("highest weight parameter mismatch: measured {measured}, expected {expected}")]
    ParameterMismatch { measured: String, expected: String },
    #[error("subspace is not invariant under the module action")]
    NotInvariant,
    #[error("vector does not generate the whole module")]
    NotCyclic,
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("mathematical discrepancy: {0}")]
    Discrepancy(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
