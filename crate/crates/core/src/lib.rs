//! Minimal free resolutions of monomial ideals with linear quotients,
//! built as iterated mapping cones, together with DG-algebra structures on
//! Koszul, Taylor and Nagata-star complexes.
//!
//! All arithmetic is exact over the rationals. Indices are 0-based in the
//! Rust API and 1-based in text and JSON.

pub mod corpus;
pub mod decomposition;
pub mod dg;
pub mod error;
pub mod export;
pub mod format;
pub mod ideal;
pub mod linalg;
pub mod resolution;
pub mod ring;

pub use decomposition::{Decomposer, Decomposition, RegularityReport, RegularityWitness};
pub use error::{Error, Result};
pub use ideal::{ClassReport, IdealClass, OrderStrategy, OrderedIdeal, VarSet};
pub use resolution::{BasisLabel, BettiTable, ComplexMap, FreeComplex, SparseMatrix, VerifyReport};
pub use ring::{Coeff, Monomial, Polynomial};
