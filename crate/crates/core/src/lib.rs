//! Transfinite Cantor–Bendixson derivatives of operator spectra and
//! g^α-invertibility decompositions over exact rational models.

pub mod analysis;
pub mod diagonal;
pub mod fixtures;
pub mod num;
pub mod opmodel;
pub mod ordinal;
pub mod specset;

pub use num::{ComplexRational, Rational};
pub use ordinal::{Ordinal, OrdinalError, OrdinalKind};
pub use specset::{Block, Direction, GapRule, PointRank, RankDescriptor, Shape, SpecSet, SpecSetError, Tower};
pub use opmodel::{ModelError, OperatorModel, SpectralProfile, SpectrumKind, Violation};
pub use analysis::{AnalysisError, Decomposition, Degree, SpectralCut};
pub use diagonal::{DiagonalError, DiagonalOperator, IdentityReport};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;
