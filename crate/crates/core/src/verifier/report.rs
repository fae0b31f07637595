use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Serialize, Serializer};

use super::bounds::SearchBounds;
use crate::lattice::{DivisorClass, LatticeError};

/// Which class a recorded quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Operand {
    A,
    B,
    Sum,
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::A => write!(f, "A"),
            Operand::B => write!(f, "B"),
            Operand::Sum => write!(f, "A+B"),
        }
    }
}

/// A lattice invariant recorded in a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    VirtualDimension(Operand),
    EulerCharacteristic(Operand),
    SelfIntersection(Operand),
    CanonicalDegree(Operand),
    H2(Operand),
    Genus(Operand),
    /// `A.B`.
    Intersection,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::VirtualDimension(o) => write!(f, "v({o})"),
            Quantity::EulerCharacteristic(o) => write!(f, "chi({o})"),
            Quantity::SelfIntersection(o) => write!(f, "({o})^2"),
            Quantity::CanonicalDegree(o) => write!(f, "({o}).K"),
            Quantity::H2(o) => write!(f, "h2({o})"),
            Quantity::Genus(o) => write!(f, "p_a({o})"),
            Quantity::Intersection => write!(f, "A.B"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// A class found by the table enumeration.
    TableEntry,
    TableMissing,
    TableUnexpected,
    /// A class found outside the self-intersection window of the table.
    OutsideTableScope,
    /// The `h^2 > 0` case `C = E_i`.
    ExceptionalCurve,
    PairException,
    PairViolation,
    AdditionFailure,
    /// Something that would falsify the conjecture rather than the code.
    CounterexampleCandidate,
    /// The classifier contradicts itself.
    CoherenceViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub quantity: Quantity,
    pub value: i64,
}

/// Inputs and intermediate integers of one check. Every entry of `values` is
/// recomputable from `classes` with lattice operations alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    /// `A` and optionally `B`, positionally aligned.
    pub classes: Vec<DivisorClass>,
    pub values: Vec<Measured>,
    /// Derived integers that are not lattice invariants (inequality sides and
    /// the like).
    pub details: BTreeMap<String, i64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayError {
    Lattice(LatticeError),
    MissingOperand(Quantity),
    Mismatch {
        quantity: Quantity,
        recorded: i64,
        recomputed: i64,
    },
}

impl fmt::Display for ReplayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReplayError::Lattice(e) => write!(f, "{e}"),
            ReplayError::MissingOperand(q) => write!(f, "no class to evaluate {q}"),
            ReplayError::Mismatch {
                quantity,
                recorded,
                recomputed,
            } => {
                write!(
                    f,
                    "{quantity}: recorded {recorded}, recomputed {recomputed}"
                )
            }
        }
    }
}

impl From<LatticeError> for ReplayError {
    fn from(e: LatticeError) -> Self {
        ReplayError::Lattice(e)
    }
}

impl Certificate {
    pub fn new(kind: CertificateKind, classes: Vec<DivisorClass>, note: impl Into<String>) -> Self {
        Self {
            kind,
            classes,
            values: Vec::new(),
            details: BTreeMap::new(),
            note: note.into(),
        }
    }

    /// Records the quantities, evaluated on `classes`.
    pub fn measure(mut self, quantities: &[Quantity]) -> Result<Self, LatticeError> {
        for &quantity in quantities {
            let value = match evaluate(quantity, &self.classes) {
                Ok(v) => v,
                Err(ReplayError::Lattice(e)) => return Err(e),
                Err(_) => continue,
            };
            self.values.push(Measured { quantity, value });
        }
        Ok(self)
    }

    pub fn detail(mut self, key: &str, value: i64) -> Self {
        self.details.insert(key.to_owned(), value);
        self
    }

    pub fn value(&self, quantity: Quantity) -> Option<i64> {
        self.values
            .iter()
            .find(|m| m.quantity == quantity)
            .map(|m| m.value)
    }

    /// Recomputes every recorded quantity from the stored classes.
    pub fn replay(&self) -> Result<(), ReplayError> {
        for m in &self.values {
            let recomputed = evaluate(m.quantity, &self.classes)?;
            if recomputed != m.value {
                return Err(ReplayError::Mismatch {
                    quantity: m.quantity,
                    recorded: m.value,
                    recomputed,
                });
            }
        }
        Ok(())
    }
}

fn operand(o: Operand, classes: &[DivisorClass]) -> Result<DivisorClass, ReplayError> {
    let missing = || ReplayError::MissingOperand(Quantity::VirtualDimension(o));
    Ok(match o {
        Operand::A => classes.first().ok_or_else(missing)?.clone(),
        Operand::B => classes.get(1).ok_or_else(missing)?.clone(),
        Operand::Sum => {
            let (a, b) = (classes.first(), classes.get(1));
            a.ok_or_else(missing)?.add(b.ok_or_else(missing)?)?
        }
    })
}

fn evaluate(q: Quantity, classes: &[DivisorClass]) -> Result<i64, ReplayError> {
    let value = match q {
        Quantity::VirtualDimension(o) => operand(o, classes)?.virtual_dimension()?,
        Quantity::EulerCharacteristic(o) => operand(o, classes)?.euler_characteristic()?,
        Quantity::SelfIntersection(o) => operand(o, classes)?.self_intersection()?,
        Quantity::CanonicalDegree(o) => operand(o, classes)?.dot_canonical()?,
        Quantity::H2(o) => operand(o, classes)?.h2()?,
        Quantity::Genus(o) => operand(o, classes)?.arithmetic_genus()?,
        Quantity::Intersection => {
            operand(Operand::A, classes)?.intersect(&operand(Operand::B, classes)?)?
        }
    };
    Ok(value)
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

/// Outcome of one exhaustive or sampled check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    pub checked_count: u64,
    pub violations: Vec<Certificate>,
    pub expected_exceptions_found: Vec<Certificate>,
    /// Informational certificates: classes found, out-of-scope classes.
    pub findings: Vec<Certificate>,
    pub bounds: Option<SearchBounds>,
    pub seed: Option<u64>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(check: &str) -> Self {
        Self {
            check: check.to_owned(),
            passed: true,
            checked_count: 0,
            violations: Vec::new(),
            expected_exceptions_found: Vec::new(),
            findings: Vec::new(),
            bounds: None,
            seed: None,
            elapsed: Duration::ZERO,
        }
    }

    pub(crate) fn finish(mut self, elapsed: Duration) -> Self {
        self.passed = self.violations.is_empty();
        self.elapsed = elapsed;
        self
    }

    /// The report with timing stripped, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed: Duration::ZERO,
            ..self.clone()
        }
    }

    /// Replays every certificate in the report.
    pub fn replay_all(&self) -> Result<(), ReplayError> {
        self.violations
            .iter()
            .chain(&self.expected_exceptions_found)
            .chain(&self.findings)
            .try_for_each(Certificate::replay)
    }
}
