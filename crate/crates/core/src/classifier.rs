//! Classification of fat-point systems `L^n(d; m_1, ..., m_r)` on a generic K3
//! surface.
//!
//! Every verdict here is conditional: it is what the Segre-type conjecture
//! (non-empty reduced systems are non-special) predicts, in its equivalent
//! explicit form. Nothing in this module computes cohomology unconditionally.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{DivisorClass, LatticeError, SurfaceParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("invalid n: {0}")]
    Surface(LatticeError),
    #[error("degree d must be non-negative, got {0}")]
    NegativeDegree(i64),
    #[error("multiplicity #{index} must be non-negative, got {value}")]
    NegativeMultiplicity { index: usize, value: i64 },
    #[error("the system is empty")]
    EmptySystem,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, ClassifyError>;

/// A fat-point system in canonical form: no zero multiplicities, sorted
/// non-increasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearSystemSpec {
    pub surface: SurfaceParams,
    pub d: i64,
    pub mults: Vec<i64>,
    /// Whether the raw input was already canonical.
    #[serde(skip)]
    pub was_canonical: bool,
}

impl PartialEq for LinearSystemSpec {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.d == other.d && self.mults == other.mults
    }
}

impl Eq for LinearSystemSpec {}

impl PartialOrd for LinearSystemSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearSystemSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.surface, self.d, &self.mults).cmp(&(other.surface, other.d, &other.mults))
    }
}

/// Drops zero multiplicities and sorts the rest non-increasing.
pub fn normalize(n: i64, d: i64, raw_mults: &[i64]) -> Result<LinearSystemSpec> {
    let surface = SurfaceParams::new(n).map_err(ClassifyError::Surface)?;
    if d < 0 {
        return Err(ClassifyError::NegativeDegree(d));
    }
    if let Some((index, &value)) = raw_mults.iter().enumerate().find(|(_, &m)| m < 0) {
        return Err(ClassifyError::NegativeMultiplicity {
            index: index + 1,
            value,
        });
    }
    let mut mults: Vec<i64> = raw_mults.iter().copied().filter(|&m| m > 0).collect();
    mults.sort_unstable_by(|a, b| b.cmp(a));
    let was_canonical = mults.as_slice() == raw_mults;
    Ok(LinearSystemSpec {
        surface,
        d,
        mults,
        was_canonical,
    })
}

impl LinearSystemSpec {
    pub fn n(&self) -> i64 {
        self.surface.n()
    }

    pub fn num_points(&self) -> usize {
        self.mults.len()
    }

    /// The class `dH - sum m_i E_i` with points in canonical order.
    pub fn class(&self) -> DivisorClass {
        DivisorClass::new(self.surface, self.d, self.mults.clone())
    }

    pub fn virtual_dimension(&self) -> Result<i64> {
        Ok(self.class().virtual_dimension()?)
    }

    pub fn expected_dimension(&self) -> Result<i64> {
        Ok(self.class().expected_dimension()?)
    }

    fn is(&self, n: i64, d: i64, mults: &[i64]) -> bool {
        self.n() == n && self.d == d && self.mults == mults
    }
}

/// Runs at least this long are written `m^r`; shorter runs are listed.
pub const RUN_COMPRESSION_MIN: usize = 3;

/// Multiplicities as a literal fragment: `2^4,1`, `1,1`.
pub fn mults_literal(mults: &[i64]) -> String {
    let mut out = String::new();
    let mut rest = mults;
    while let Some(&m) = rest.first() {
        let run = rest.iter().take_while(|&&x| x == m).count();
        if !out.is_empty() {
            out.push(',');
        }
        if run >= RUN_COMPRESSION_MIN {
            out.push_str(&format!("{m}^{run}"));
        } else {
            out.push_str(&vec![m.to_string(); run].join(","));
        }
        rest = &rest[run..];
    }
    out
}

impl fmt::Display for LinearSystemSpec {
    /// Canonical literal: `L2(3;2^4,1)`, or `L2(3)` without points.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mults.is_empty() {
            write!(f, "L{}({})", self.n(), self.d)
        } else {
            write!(
                f,
                "L{}({};{})",
                self.n(),
                self.d,
                mults_literal(&self.mults)
            )
        }
    }
}

/// The two special families: `d` times a rigid curve of self-intersection 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialFamily {
    /// `L4(d;2d) = d * L4(1;2)`.
    Quartic,
    /// `L2(d;d,d) = d * L2(1;1,1)`.
    DoublePlane,
}

impl SpecialFamily {
    /// The reduced curve `C` with `L = dC`.
    pub fn base_curve(self) -> LinearSystemSpec {
        match self {
            SpecialFamily::Quartic => canonical(4, 1, &[2]),
            SpecialFamily::DoublePlane => canonical(2, 1, &[1, 1]),
        }
    }
}

impl fmt::Display for SpecialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecialFamily::Quartic => write!(f, "L4(d;2d)"),
            SpecialFamily::DoublePlane => write!(f, "L2(d;d,d)"),
        }
    }
}

fn canonical(n: i64, d: i64, mults: &[i64]) -> LinearSystemSpec {
    normalize(n, d, mults).expect("hard-coded system is valid")
}

/// Returns the special family the system belongs to, if any.
pub fn is_special(spec: &LinearSystemSpec) -> Option<SpecialFamily> {
    let d = spec.d;
    if d < 2 {
        return None;
    }
    if spec.n() == 4 && spec.mults == [2 * d] {
        Some(SpecialFamily::Quartic)
    } else if spec.n() == 2 && spec.mults == [d, d] {
        Some(SpecialFamily::DoublePlane)
    } else {
        None
    }
}

/// Conjectural dimension of the system (`-1` when empty).
pub fn dimension(spec: &LinearSystemSpec) -> Result<i64> {
    if spec.d == 0 {
        return Ok(if spec.mults.is_empty() { 0 } else { -1 });
    }
    if is_special(spec).is_some() {
        return Ok(0);
    }
    Ok(spec.virtual_dimension()?.max(-1))
}

/// `h^1` of the system, or `None` when the system is empty with `v < -1`;
/// see [`h1_lower_bound`] for that case.
pub fn h1(spec: &LinearSystemSpec) -> Result<Option<i64>> {
    let dim = dimension(spec)?;
    let v = spec.virtual_dimension()?;
    Ok(if dim >= 0 {
        Some(dim - v)
    } else if v < -1 {
        None
    } else {
        Some(0)
    })
}

/// `max(0, -1 - v)` for empty systems with `v < -1`.
pub fn h1_lower_bound(spec: &LinearSystemSpec) -> Result<Option<i64>> {
    match h1(spec)? {
        Some(_) => Ok(None),
        None => Ok(Some((-1 - spec.virtual_dimension()?).max(0))),
    }
}

/// The general member's multiplicities at the assigned points: always the
/// imposed ones.
pub fn general_member_multiplicities(spec: &LinearSystemSpec) -> Result<Vec<i64>> {
    if dimension(spec)? < 0 {
        return Err(ClassifyError::EmptySystem);
    }
    Ok(spec.mults.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MemberKind {
    Empty,
    Rigid,
    Irreducible,
    CompositeWithPencil,
    FixedPlusPencil,
}

impl MemberKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MemberKind::Empty => "EMPTY",
            MemberKind::Rigid => "RIGID",
            MemberKind::Irreducible => "IRREDUCIBLE",
            MemberKind::CompositeWithPencil => "COMPOSITE_WITH_PENCIL",
            MemberKind::FixedPlusPencil => "FIXED_PLUS_PENCIL",
        }
    }
}

impl fmt::Display for MemberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The decomposition rules, one per shape of system. Exactly one applies to
/// every canonical system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `L4(d;2d)`, `d >= 2`.
    SpecialQuartic,
    /// `L2(d;d,d)`, `d >= 2`.
    SpecialDoublePlane,
    /// `L2(m+1;m+1,m)`, `m >= 1`.
    FixedPlusPencil,
    /// `2C` for a table curve with `C^2 = 1`.
    DoubleTableCurve,
    /// `v = 0`: the unique member is the system itself.
    RigidCurve,
    /// `L2(2;2)`.
    CompositeWithPencil,
    Empty,
    Irreducible,
    /// `d = 0` and no points.
    TrivialClass,
}

/// The three curves with `v = 0` and `C^2 = 1` whose doubles have `v = 0`.
pub fn double_table_curves() -> [LinearSystemSpec; 3] {
    [
        canonical(4, 1, &[1, 1, 1]),
        canonical(6, 1, &[2, 1]),
        canonical(10, 1, &[3]),
    ]
}

/// Evaluates every branch guard independently.
pub fn matching_branches(spec: &LinearSystemSpec) -> Result<Vec<Branch>> {
    let (n, d, r) = (spec.n(), spec.d, spec.num_points());
    let v = spec.virtual_dimension()?;
    let family = is_special(spec);
    let double_table = double_table_curves().iter().any(|c| {
        spec.is(
            c.n(),
            2 * c.d,
            &c.mults.iter().map(|m| 2 * m).collect::<Vec<_>>(),
        )
    });
    let fixed_plus_pencil = n == 2 && d >= 2 && spec.mults == [d, d - 1];
    let composite = spec.is(2, 2, &[2]);

    let guards = [
        (
            Branch::SpecialQuartic,
            family == Some(SpecialFamily::Quartic),
        ),
        (
            Branch::SpecialDoublePlane,
            family == Some(SpecialFamily::DoublePlane),
        ),
        (Branch::FixedPlusPencil, fixed_plus_pencil),
        (Branch::DoubleTableCurve, double_table),
        (Branch::RigidCurve, d >= 1 && v == 0 && !double_table),
        (Branch::CompositeWithPencil, composite),
        (
            Branch::Empty,
            (d == 0 && r > 0) || (d >= 1 && v < 0 && family.is_none()),
        ),
        (
            Branch::Irreducible,
            d >= 1 && v > 0 && !fixed_plus_pencil && !composite,
        ),
        (Branch::TrivialClass, d == 0 && r == 0),
    ];
    Ok(guards
        .into_iter()
        .filter_map(|(b, hit)| hit.then_some(b))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedComponent {
    pub multiplicity: u32,
    pub component: LinearSystemSpec,
}

impl fmt::Display for FixedComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\u{d7}{}", self.multiplicity, self.component)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub spec: LinearSystemSpec,
    pub branch: Branch,
    pub special: bool,
    pub family: Option<SpecialFamily>,
    pub virtual_dimension: i64,
    pub expected_dimension: i64,
    pub dimension: i64,
    pub h1: Option<i64>,
    pub h1_lower_bound: Option<i64>,
    pub fixed_part: Vec<FixedComponent>,
    pub free_part: Option<LinearSystemSpec>,
    pub member_kind: MemberKind,
    /// Always true: the verdict assumes the conjecture.
    pub conjectural: bool,
}

impl Decomposition {
    /// Sum of the fixed and free parts in the lattice, or `None` when neither
    /// is present.
    pub fn reconstruct(&self) -> Result<Option<DivisorClass>> {
        if self.fixed_part.is_empty() && self.free_part.is_none() {
            return Ok(None);
        }
        let mut total = DivisorClass::zero(self.spec.surface);
        for fc in &self.fixed_part {
            total = total.add(&fc.component.class().scale(fc.multiplicity)?)?;
        }
        if let Some(free) = &self.free_part {
            total = total.add(&free.class())?;
        }
        Ok(Some(total))
    }
}

fn fixed(multiplicity: i64, component: LinearSystemSpec) -> Vec<FixedComponent> {
    let multiplicity = u32::try_from(multiplicity).expect("fixed multiplicity fits in u32");
    vec![FixedComponent {
        multiplicity,
        component,
    }]
}

/// Decomposes the system into fixed part, free part and general-member kind.
pub fn decompose(spec: &LinearSystemSpec) -> Result<Decomposition> {
    let branches = matching_branches(spec)?;
    debug_assert_eq!(
        branches.len(),
        1,
        "branch guards overlap for {spec}: {branches:?}"
    );
    let branch = branches[0];
    let v = spec.virtual_dimension()?;
    let d = spec.d;

    let (fixed_part, free_part, member_kind) = match branch {
        Branch::SpecialQuartic | Branch::SpecialDoublePlane => {
            let family = is_special(spec).expect("guard checked the family");
            (fixed(d, family.base_curve()), None, MemberKind::Rigid)
        }
        Branch::FixedPlusPencil => (
            fixed(d - 1, canonical(2, 1, &[1, 1])),
            Some(canonical(2, 1, &[1])),
            MemberKind::FixedPlusPencil,
        ),
        Branch::DoubleTableCurve => {
            let half = LinearSystemSpec {
                d: d / 2,
                mults: spec.mults.iter().map(|m| m / 2).collect(),
                ..spec.clone()
            };
            (fixed(2, half), None, MemberKind::Rigid)
        }
        Branch::RigidCurve => (fixed(1, spec.clone()), None, MemberKind::Rigid),
        Branch::CompositeWithPencil => (Vec::new(), None, MemberKind::CompositeWithPencil),
        Branch::Empty => (Vec::new(), None, MemberKind::Empty),
        Branch::Irreducible => (Vec::new(), None, MemberKind::Irreducible),
        Branch::TrivialClass => (Vec::new(), None, MemberKind::Rigid),
    };

    let family = is_special(spec);
    Ok(Decomposition {
        spec: spec.clone(),
        branch,
        special: family.is_some(),
        family,
        virtual_dimension: v,
        expected_dimension: v.max(-1),
        dimension: dimension(spec)?,
        h1: h1(spec)?,
        h1_lower_bound: h1_lower_bound(spec)?,
        fixed_part,
        free_part,
        member_kind,
        conjectural: true,
    })
}
