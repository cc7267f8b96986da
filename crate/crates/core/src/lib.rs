//! Imprecise-probability inferential models on finite and continuous frames.
//!
//! The finite-frame machinery ([`mass`], [`credal`], [`im_table`], [`audit`])
//! is generic over [`Scalar`]; use `f64` for production work and
//! [`Rational`] for exact arithmetic. The continuous location-model IM in
//! [`randomset`] and the betting simulator in [`underworld`] use `f64`.

pub mod audit;
pub mod credal;
pub mod discrete;
pub mod error;
pub mod frame;
pub mod im_table;
pub mod io;
pub mod mass;
pub mod normal;
pub mod randomset;
pub mod rng;
pub mod scalar;
pub mod underworld;

pub use audit::{AuditConfig, AuditReport, Property, Witness};
pub use credal::{CredalModel, GeneralizedBayes, JointGamble, Likelihood, PriorVertex};
pub use error::{Error, Result};
pub use discrete::{consonant_vacuous_im, dempster_im};
pub use frame::{Frame, Gamble, Subset};
pub use im_table::IMTable;
pub use io::{parse_im_table, parse_model, serialize_im_table, serialize_model, ModelBundle, ParseError, ParseErrorKind};
pub use mass::{dempster_combine, Combination, MassFunction};
pub use randomset::{CdfBounds, CurveRow, CombinedIm, FocalInterval, Interval, IntervalPrior, IntervalSet, McConfig, McEstimate};
pub use rng::SeedStreams;
pub use scalar::{Rational, Scalar};
pub use underworld::{BetPolicy, CapitalTrajectory, DieBox, SideBetGameConfig, SideBetOutcome, Strategy};

/// Exact-arithmetic variants of the finite-frame types.
pub type ExactMassFunction = MassFunction<Rational>;
pub type ExactGamble = Gamble<Rational>;
pub type ExactLikelihood = Likelihood<Rational>;
pub type ExactCredalModel = CredalModel<Rational>;
pub type ExactIMTable = IMTable<Rational>;
