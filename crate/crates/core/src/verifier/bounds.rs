use std::ops::RangeInclusive;

use serde::Serialize;

use super::VerifyError;

/// Finite search windows for the exhaustive checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Window for `C^2`, when the search is driven by self-intersection.
    pub self_int_range: Option<RangeInclusive<i64>>,
    /// Upper bound on `sum m_i(m_i+1)`.
    pub mass_bound: i64,
    pub max_points: usize,
    /// Polarization degrees; only even values are visited.
    pub n_range: RangeInclusive<i64>,
    /// Degrees `t` of `H`.
    pub t_range: RangeInclusive<i64>,
    /// Upper bound on `sum m_i = C.K`, for self-intersection driven searches.
    pub canonical_degree_bound: Option<i64>,
    /// Upper bound on `n t^2`, for self-intersection driven searches.
    pub nt2_bound: Option<i64>,
}

pub const DEFAULT_PAIR_MASS_BOUND: i64 = 200;
pub const DEFAULT_PAIR_MAX_POINTS: usize = 6;
pub const DEFAULT_PAIR_MAX_N: i64 = 40;

pub const DEFAULT_HUNT_MAX_N: i64 = 10;
pub const DEFAULT_HUNT_MAX_D: i64 = 6;
pub const DEFAULT_HUNT_MASS_BOUND: i64 = 60;
pub const DEFAULT_HUNT_MAX_POINTS: usize = 6;

fn isqrt(x: i64) -> i64 {
    if x <= 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Exact integer square root when `x` is a perfect square.
pub(crate) fn exact_sqrt(x: i64) -> Option<i64> {
    let r = isqrt(x);
    (r * r == x).then_some(r)
}

fn check_max_n(max_n: i64) -> Result<(), VerifyError> {
    if max_n < 2 {
        return Err(VerifyError::InvalidBounds(format!(
            "max n must be at least 2, got {max_n}"
        )));
    }
    Ok(())
}

impl SearchBounds {
    /// Even values of `n` inside `n_range`.
    pub fn even_n(&self) -> impl Iterator<Item = i64> {
        let start = (*self.n_range.start()).max(2);
        let start = start + start % 2;
        (start..=*self.n_range.end()).step_by(2)
    }

    /// Bounds for the pair scan over `v = 0` classes.
    pub fn pairs(mass_bound: i64, max_points: usize, max_n: i64) -> Result<Self, VerifyError> {
        check_max_n(max_n)?;
        if mass_bound < 0 {
            return Err(VerifyError::InvalidBounds(format!(
                "mass bound must be non-negative, got {mass_bound}"
            )));
        }
        // v = 0 with t >= 1 means n t^2 = sum m(m+1) - 2, and n >= 2
        let t_max = isqrt((mass_bound - 2) / 2).max(1);
        Ok(Self {
            self_int_range: None,
            mass_bound,
            max_points,
            n_range: 2..=max_n,
            t_range: 1..=t_max,
            canonical_degree_bound: None,
            nt2_bound: None,
        })
    }

    /// Bounds for the classifier coherence scan.
    pub fn hunt(
        max_n: i64,
        max_d: i64,
        mass_bound: i64,
        max_points: usize,
    ) -> Result<Self, VerifyError> {
        check_max_n(max_n)?;
        if max_d < 0 || mass_bound < 0 {
            return Err(VerifyError::InvalidBounds(format!(
                "degree and mass bounds must be non-negative, got d <= {max_d}, mass <= {mass_bound}"
            )));
        }
        Ok(Self {
            self_int_range: None,
            mass_bound,
            max_points,
            n_range: 2..=max_n,
            t_range: 0..=max_d,
            canonical_degree_bound: None,
            nt2_bound: None,
        })
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self::pairs(
            DEFAULT_PAIR_MASS_BOUND,
            DEFAULT_PAIR_MAX_POINTS,
            DEFAULT_PAIR_MAX_N,
        )
        .expect("default bounds are valid")
    }
}

/// Finite windows for irreducible classes with `v = 0`, `t >= 1` and `C^2` in
/// `self_int_range`.
///
/// Such a class has `h^2 = 0`, so `v = 0` forces `C.K = C^2 + 2`. Since
/// `C.K = sum m_i` with every `m_i >= 1`, there are at most `C^2 + 2` points,
/// and `n t^2 = C^2 + sum m_i^2 <= C^2 + (C^2 + 2)^2`.
pub fn derive_bounds_v0(self_int_range: RangeInclusive<i64>) -> Result<SearchBounds, VerifyError> {
    let (lo, hi) = (*self_int_range.start(), *self_int_range.end());
    if lo > hi {
        return Err(VerifyError::EmptyRange { lo, hi });
    }
    let degree_bound = (hi + 2).max(0);
    let nt2_bound = (hi + degree_bound * degree_bound).max(0);
    let max_n = nt2_bound - nt2_bound % 2;
    Ok(SearchBounds {
        self_int_range: Some(self_int_range),
        mass_bound: nt2_bound + 2,
        max_points: degree_bound as usize,
        n_range: 2..=max_n,
        t_range: 1..=isqrt(nt2_bound / 2),
        canonical_degree_bound: Some(degree_bound),
        nt2_bound: Some(nt2_bound),
    })
}
