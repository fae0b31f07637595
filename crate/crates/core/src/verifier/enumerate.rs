use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::bounds::{derive_bounds_v0, exact_sqrt, SearchBounds};
use super::VerifyError;
use crate::classifier::{normalize, LinearSystemSpec};
use crate::lattice::{DivisorClass, LatticeError, SurfaceParams};

/// A candidate class with its invariants, as found by an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalClass {
    pub n: i64,
    pub t: i64,
    pub mults: Vec<i64>,
    pub v: i64,
    pub self_intersection: i64,
}

impl NumericalClass {
    pub fn new(n: i64, t: i64, mults: Vec<i64>) -> Result<Self, VerifyError> {
        let surface = SurfaceParams::new(n)?;
        let class = DivisorClass::new(surface, t, mults);
        Ok(Self {
            v: class.virtual_dimension()?,
            self_intersection: class.self_intersection()?,
            n,
            t,
            mults: class.l,
        })
    }

    pub fn class(&self) -> DivisorClass {
        let surface = SurfaceParams::new(self.n).expect("validated on construction");
        DivisorClass::new(surface, self.t, self.mults.clone())
    }

    pub fn spec(&self) -> LinearSystemSpec {
        normalize(self.n, self.t, &self.mults).expect("enumerated classes are valid systems")
    }

    fn key(&self) -> (i64, i64, i64, &[i64]) {
        (self.self_intersection, self.n, self.t, &self.mults)
    }
}

impl PartialOrd for NumericalClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NumericalClass {
    /// Lexicographic on `(C^2, n, t, mults)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Non-increasing sequences of positive integers with at most `max_points`
/// entries and total `weight` at most `budget`, the empty sequence included.
pub(crate) fn multisets(
    max_points: usize,
    budget: i64,
    weight: impl Fn(i64) -> i64 + Copy,
) -> Vec<Vec<i64>> {
    fn rec(
        cur: &mut Vec<i64>,
        max_part: i64,
        left: i64,
        max_points: usize,
        weight: impl Fn(i64) -> i64 + Copy,
        out: &mut Vec<Vec<i64>>,
    ) {
        out.push(cur.clone());
        if cur.len() == max_points {
            return;
        }
        let mut m = 1;
        while m <= max_part && weight(m) <= left {
            cur.push(m);
            rec(cur, m, left - weight(m), max_points, weight, out);
            cur.pop();
            m += 1;
        }
    }
    let mut out = Vec::new();
    if budget >= 0 {
        rec(
            &mut Vec::new(),
            i64::MAX,
            budget,
            max_points,
            weight,
            &mut out,
        );
    }
    out
}

pub(crate) fn point_mass(mults: &[i64]) -> i64 {
    mults.iter().map(|m| m * (m + 1)).sum()
}

/// Classes with `t >= 1`, `h^2 = 0`, `v = 0` and `C^2` in the window, sorted by
/// `(C^2, n, t, mults)`, together with the number of candidates examined.
pub fn enumerate_v0_classes_counted(
    self_int_range: RangeInclusive<i64>,
) -> Result<(Vec<NumericalClass>, u64), VerifyError> {
    let bounds = derive_bounds_v0(self_int_range.clone())?;
    let degree_bound = bounds.canonical_degree_bound.unwrap_or(0);
    let nt2_bound = bounds.nt2_bound.unwrap_or(0);
    let lowest_degree = (*self_int_range.start() + 2).max(0);

    let mut found = Vec::new();
    let mut checked = 0u64;
    for mults in multisets(bounds.max_points, degree_bound, |m| m) {
        let degree: i64 = mults.iter().sum();
        if degree < lowest_degree {
            continue;
        }
        for n in bounds.even_n() {
            for t in bounds.t_range.clone() {
                if n * t * t > nt2_bound {
                    break;
                }
                checked += 1;
                let class = DivisorClass::new(SurfaceParams::new(n)?, t, mults.clone());
                let c2 = class.self_intersection()?;
                if !self_int_range.contains(&c2) || class.h2()? != 0 {
                    continue;
                }
                if class.virtual_dimension()? == 0 && class.dot_canonical()? == c2 + 2 {
                    found.push(NumericalClass::new(n, t, mults.clone())?);
                }
            }
        }
    }
    found.sort();
    found.dedup();
    Ok((found, checked))
}

/// All classes with `t >= 1`, `v = 0` and `C^2` in the window.
pub fn enumerate_v0_classes(
    self_int_range: RangeInclusive<i64>,
) -> Result<Vec<NumericalClass>, VerifyError> {
    Ok(enumerate_v0_classes_counted(self_int_range)?.0)
}

/// `v = 0` classes with `t >= 1` inside mass/point/`n`/`t` bounds, sorted.
pub fn v0_classes_within(bounds: &SearchBounds) -> Result<Vec<NumericalClass>, VerifyError> {
    let mut found = Vec::new();
    for mults in multisets(bounds.max_points, bounds.mass_bound, |m| m * (m + 1)) {
        // v = 0 and t >= 1 means n t^2 = sum m(m+1) - 2
        let nt2 = point_mass(&mults) - 2;
        if nt2 <= 0 {
            continue;
        }
        for n in bounds.even_n() {
            if nt2 % n != 0 {
                continue;
            }
            let Some(t) = exact_sqrt(nt2 / n) else {
                continue;
            };
            if !bounds.t_range.contains(&t) {
                continue;
            }
            let c = NumericalClass::new(n, t, mults.clone())?;
            debug_assert_eq!(c.v, 0);
            if c.v == 0 {
                found.push(c);
            }
        }
    }
    found.sort();
    Ok(found)
}

/// Every way to place two multiplicity multisets on a common set of general
/// points, up to relabelling the points. Each alignment is returned as two
/// equal-length vectors, zero-padded where a point belongs to one side only.
pub fn alignments(a: &[i64], b: &[i64]) -> Vec<(Vec<i64>, Vec<i64>)> {
    fn rec(
        a: &[i64],
        b_left: &mut Vec<i64>,
        pairs: &mut Vec<(i64, i64)>,
        seen: &mut BTreeSet<Vec<(i64, i64)>>,
    ) {
        let Some((&head, tail)) = a.split_first() else {
            let mut full = pairs.clone();
            full.extend(b_left.iter().map(|&m| (0, m)));
            full.sort_unstable_by(|x, y| y.cmp(x));
            seen.insert(full);
            return;
        };
        pairs.push((head, 0));
        rec(tail, b_left, pairs, seen);
        pairs.pop();

        let mut tried = BTreeSet::new();
        for j in 0..b_left.len() {
            let m = b_left[j];
            if !tried.insert(m) {
                continue;
            }
            b_left.remove(j);
            pairs.push((head, m));
            rec(tail, b_left, pairs, seen);
            pairs.pop();
            b_left.insert(j, m);
        }
    }

    let mut seen = BTreeSet::new();
    rec(a, &mut b.to_vec(), &mut Vec::new(), &mut seen);
    seen.into_iter()
        .map(|pairs| pairs.into_iter().unzip())
        .collect()
}

impl From<LatticeError> for VerifyError {
    fn from(e: LatticeError) -> Self {
        VerifyError::Lattice(e)
    }
}
