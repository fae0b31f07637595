//! Exhaustive, bounded checks of the numerical statements behind the
//! classification, with replayable certificates.

mod bounds;
mod enumerate;
mod hunt;
mod identity;
mod pairs;
mod report;
mod table;

use thiserror::Error;

use crate::classifier::ClassifyError;
use crate::lattice::LatticeError;

pub use bounds::{
    derive_bounds_v0, SearchBounds, DEFAULT_HUNT_MASS_BOUND, DEFAULT_HUNT_MAX_D,
    DEFAULT_HUNT_MAX_N, DEFAULT_HUNT_MAX_POINTS, DEFAULT_PAIR_MASS_BOUND, DEFAULT_PAIR_MAX_N,
    DEFAULT_PAIR_MAX_POINTS,
};
pub use enumerate::{
    alignments, enumerate_v0_classes, enumerate_v0_classes_counted, v0_classes_within,
    NumericalClass,
};
pub use hunt::{hunt_counterexamples, hunt_counterexamples_with, specs_within};
pub use identity::{verify_addition_identity, DEFAULT_SAMPLES, DEFAULT_SEED};
pub use pairs::{
    verify_pair_inequality, verify_pair_inequality_with, AlignmentMode, PairInequality,
};
pub use report::{
    Certificate, CertificateKind, Measured, Operand, Quantity, ReplayError, VerificationReport,
};
pub use table::{expected_table, verify_lemma_table, verify_lemma_table_with, TABLE_WINDOW};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("empty self-intersection range {lo}..{hi}")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("invalid search bounds: {0}")]
    InvalidBounds(String),
    #[error(transparent)]
    Lattice(LatticeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}
