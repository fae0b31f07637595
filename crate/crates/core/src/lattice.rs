//! Divisor classes on the blow-up `S'` of a generic K3 surface at `r` general
//! points.
//!
//! `Pic(S')` is the lattice spanned by the pullback `H` of the polarization and
//! the exceptional curves `E_1, ..., E_r`, with `H^2 = n`, `E_i^2 = -1` and all
//! other products zero. A class is stored as `(t; l_1, ..., l_r)` and stands for
//! `tH - sum l_i E_i`, so a fat point of multiplicity `m` reads directly as
//! `l_i = m` while `E_i` itself is `l_i = -1`.
//!
//! All arithmetic is exact and checked; overflow is reported as an error.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("n must be even (n = 2g-2), got {0}")]
    OddPolarization(i64),
    #[error("n must be at least 2, got {0}")]
    PolarizationTooSmall(i64),
    #[error("classes live on different surfaces (n = {left} vs n = {right})")]
    SurfaceMismatch { left: i64, right: i64 },
    #[error("cohomological invariants need t >= 0, got t = {0}")]
    OutsideSupportedCone(i64),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// The polarization degree `n = H^2 = 2g - 2` of a generic K3 surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct SurfaceParams {
    n: i64,
}

impl SurfaceParams {
    pub fn new(n: i64) -> Result<Self> {
        if n < 2 {
            return Err(LatticeError::PolarizationTooSmall(n));
        }
        if n % 2 != 0 {
            return Err(LatticeError::OddPolarization(n));
        }
        Ok(Self { n })
    }

    /// `H^2`.
    pub fn n(self) -> i64 {
        self.n
    }

    /// Genus of a curve in `|H|`; `h^0(H) = g + 1`.
    pub fn genus(self) -> i64 {
        self.n / 2 + 1
    }
}

impl TryFrom<i64> for SurfaceParams {
    type Error = LatticeError;

    fn try_from(n: i64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<SurfaceParams> for i64 {
    fn from(s: SurfaceParams) -> i64 {
        s.n
    }
}

/// `tH - sum l_i E_i` in `Pic(S')`.
///
/// Sequences of different lengths are compared positionally and padded with
/// zeros, so trailing zeros never change any invariant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DivisorClass {
    pub surface: SurfaceParams,
    pub t: i64,
    pub l: Vec<i64>,
}

impl PartialEq for DivisorClass {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface && self.t == other.t && self.trimmed() == other.trimmed()
    }
}

impl Eq for DivisorClass {}

fn overflow(what: &'static str) -> LatticeError {
    LatticeError::Overflow(what)
}

fn checked_sum<I: IntoIterator<Item = Option<i64>>>(items: I, what: &'static str) -> Result<i64> {
    items
        .into_iter()
        .try_fold(0i64, |acc, x| x.and_then(|x| acc.checked_add(x)))
        .ok_or(overflow(what))
}

impl DivisorClass {
    pub fn new(surface: SurfaceParams, t: i64, l: Vec<i64>) -> Self {
        Self { surface, t, l }
    }

    /// The zero class.
    pub fn zero(surface: SurfaceParams) -> Self {
        Self::new(surface, 0, Vec::new())
    }

    /// The pullback of the polarization.
    pub fn hyperplane(surface: SurfaceParams) -> Self {
        Self::new(surface, 1, Vec::new())
    }

    /// `E_i` for a zero-based point index.
    pub fn exceptional(surface: SurfaceParams, index: usize) -> Self {
        let mut l = vec![0; index + 1];
        l[index] = -1;
        Self::new(surface, 0, l)
    }

    /// `K_{S'} = sum E_i` on the blow-up at `r` points.
    pub fn canonical(surface: SurfaceParams, r: usize) -> Self {
        Self::new(surface, 0, vec![-1; r])
    }

    pub fn num_points(&self) -> usize {
        self.l.len()
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> &[i64] {
        let end = self.l.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
        &self.l[..end]
    }

    fn same_surface(&self, other: &Self) -> Result<()> {
        if self.surface != other.surface {
            return Err(LatticeError::SurfaceMismatch {
                left: self.surface.n(),
                right: other.surface.n(),
            });
        }
        Ok(())
    }

    /// The intersection number `A.B = n t_A t_B - sum a_i b_i`.
    pub fn intersect(&self, other: &Self) -> Result<i64> {
        self.same_surface(other)?;
        let hh = self
            .surface
            .n()
            .checked_mul(self.t)
            .and_then(|x| x.checked_mul(other.t))
            .ok_or(overflow("intersection"))?;
        let ee = checked_sum(
            self.l.iter().zip(&other.l).map(|(a, b)| a.checked_mul(*b)),
            "intersection",
        )?;
        hh.checked_sub(ee).ok_or(overflow("intersection"))
    }

    pub fn self_intersection(&self) -> Result<i64> {
        self.intersect(self)
    }

    /// `D.K_{S'}`, which is `sum l_i`.
    pub fn dot_canonical(&self) -> Result<i64> {
        checked_sum(self.l.iter().map(|&x| Some(x)), "canonical degree")
    }

    /// `chi(D) = (D^2 - D.K)/2 + 2`.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let d2 = self.self_intersection()?;
        let dk = self.dot_canonical()?;
        let diff = d2.checked_sub(dk).ok_or(overflow("euler characteristic"))?;
        debug_assert_eq!(diff % 2, 0, "D^2 - D.K is even on this lattice");
        (diff / 2)
            .checked_add(2)
            .ok_or(overflow("euler characteristic"))
    }

    /// `h^2(D)`, defined on the cone `t >= 0`. It is 1 exactly when `D` is a
    /// sum of distinct exceptional curves (the empty sum included).
    pub fn h2(&self) -> Result<i64> {
        if self.t < 0 {
            return Err(LatticeError::OutsideSupportedCone(self.t));
        }
        let exceptional_sum = self.t == 0 && self.l.iter().all(|&x| x == 0 || x == -1);
        Ok(i64::from(exceptional_sum))
    }

    /// `v(D) = chi(D) - h^2(D) - 1`.
    pub fn virtual_dimension(&self) -> Result<i64> {
        let h2 = self.h2()?;
        let chi = self.euler_characteristic()?;
        chi.checked_sub(h2 + 1).ok_or(overflow("virtual dimension"))
    }

    /// `max(v, -1)`.
    pub fn expected_dimension(&self) -> Result<i64> {
        Ok(self.virtual_dimension()?.max(-1))
    }

    /// `p_a(D) = (D^2 + D.K)/2 + 1`.
    pub fn arithmetic_genus(&self) -> Result<i64> {
        let d2 = self.self_intersection()?;
        let dk = self.dot_canonical()?;
        let sum = d2.checked_add(dk).ok_or(overflow("arithmetic genus"))?;
        (sum / 2).checked_add(1).ok_or(overflow("arithmetic genus"))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_surface(other)?;
        let len = self.l.len().max(other.l.len());
        let get = |v: &[i64], i: usize| v.get(i).copied().unwrap_or(0);
        let l = (0..len)
            .map(|i| get(&self.l, i).checked_add(get(&other.l, i)))
            .collect::<Option<Vec<_>>>()
            .ok_or(overflow("sum of classes"))?;
        let t = self
            .t
            .checked_add(other.t)
            .ok_or(overflow("sum of classes"))?;
        Ok(Self::new(self.surface, t, l))
    }

    pub fn scale(&self, k: u32) -> Result<Self> {
        let k = i64::from(k);
        let l = self
            .l
            .iter()
            .map(|x| x.checked_mul(k))
            .collect::<Option<Vec<_>>>()
            .ok_or(overflow("scalar multiple"))?;
        let t = self.t.checked_mul(k).ok_or(overflow("scalar multiple"))?;
        Ok(Self::new(self.surface, t, l))
    }

    pub fn negate(&self) -> Result<Self> {
        let l = self
            .l
            .iter()
            .map(|x| x.checked_neg())
            .collect::<Option<Vec<_>>>()
            .ok_or(overflow("negation"))?;
        let t = self.t.checked_neg().ok_or(overflow("negation"))?;
        Ok(Self::new(self.surface, t, l))
    }

    /// Closed form `n t^2/2 + 1 - sum l_i(l_i+1)/2` of the virtual dimension,
    /// valid for `t > 0`.
    pub fn virtual_dimension_closed_form(&self) -> Result<i64> {
        let nt2 = self
            .surface
            .n()
            .checked_mul(self.t)
            .and_then(|x| x.checked_mul(self.t))
            .ok_or(overflow("virtual dimension"))?;
        let conditions = checked_sum(
            self.l.iter().map(|&m| m.checked_mul(m + 1).map(|x| x / 2)),
            "virtual dimension",
        )?;
        (nt2 / 2 + 1)
            .checked_sub(conditions)
            .ok_or(overflow("virtual dimension"))
    }
}

impl fmt::Display for DivisorClass {
    /// `tH - sum l_i E_i` written as `L<n>(t; l_1, ..., l_r)` over raw positions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}({}", self.surface.n(), self.t)?;
        let l = self.trimmed();
        if !l.is_empty() {
            write!(f, ";")?;
            for (i, x) in l.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> SurfaceParams {
        SurfaceParams::new(n).unwrap()
    }

    fn class(n: i64, t: i64, l: &[i64]) -> DivisorClass {
        DivisorClass::new(s(n), t, l.to_vec())
    }

    #[test]
    fn surface_params_validation() {
        assert_eq!(SurfaceParams::new(3), Err(LatticeError::OddPolarization(3)));
        assert_eq!(
            SurfaceParams::new(0),
            Err(LatticeError::PolarizationTooSmall(0))
        );
        assert_eq!(
            SurfaceParams::new(-4),
            Err(LatticeError::PolarizationTooSmall(-4))
        );
        assert_eq!(s(2).genus(), 2);
        assert_eq!(s(4).genus(), 3);
        assert_eq!(s(10).genus(), 6);
    }

    #[test]
    fn basis_products() {
        let e1 = DivisorClass::exceptional(s(2), 0);
        let e2 = DivisorClass::exceptional(s(2), 1);
        assert_eq!(e1.intersect(&e2).unwrap(), 0);
        assert_eq!(e1.intersect(&e1).unwrap(), -1);
        let h = DivisorClass::hyperplane(s(4));
        assert_eq!(h.intersect(&h).unwrap(), 4);
        assert_eq!(h.intersect(&DivisorClass::exceptional(s(4), 3)).unwrap(), 0);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(
            class(2, 1, &[1, 1])
                .intersect(&class(2, 1, &[1, 0]))
                .unwrap(),
            1
        );
        assert_eq!(
            class(2, 1, &[1, 1]).intersect(&class(2, 1, &[1])).unwrap(),
            1
        );
        let c = class(4, 1, &[2]);
        assert_eq!(c.intersect(&c).unwrap(), 0);
    }

    #[test]
    fn mismatched_surfaces_rejected() {
        let err = class(2, 1, &[]).intersect(&class(4, 1, &[])).unwrap_err();
        assert_eq!(err, LatticeError::SurfaceMismatch { left: 2, right: 4 });
        assert!(class(2, 1, &[]).add(&class(4, 1, &[])).is_err());
    }

    #[test]
    fn canonical_class_identities() {
        for r in 0..6 {
            let k = DivisorClass::canonical(s(6), r);
            assert_eq!(k.self_intersection().unwrap(), -(r as i64));
            assert_eq!(k.intersect(&DivisorClass::hyperplane(s(6))).unwrap(), 0);
            for i in 0..r {
                assert_eq!(
                    k.intersect(&DivisorClass::exceptional(s(6), i)).unwrap(),
                    -1
                );
            }
        }
    }

    #[test]
    fn euler_characteristic_examples() {
        assert_eq!(DivisorClass::zero(s(2)).euler_characteristic().unwrap(), 2);
        assert_eq!(
            DivisorClass::hyperplane(s(2))
                .euler_characteristic()
                .unwrap(),
            3
        );
        assert_eq!(
            DivisorClass::exceptional(s(2), 0)
                .euler_characteristic()
                .unwrap(),
            2
        );
    }

    #[test]
    fn h2_rule() {
        let e12 = DivisorClass::exceptional(s(2), 0)
            .add(&DivisorClass::exceptional(s(2), 1))
            .unwrap();
        assert_eq!(e12.h2().unwrap(), 1);
        assert_eq!(DivisorClass::hyperplane(s(8)).h2().unwrap(), 0);
        assert_eq!(DivisorClass::zero(s(2)).h2().unwrap(), 1);
        // 2E_1 is not a sum of distinct exceptional curves
        assert_eq!(class(2, 0, &[-2]).h2().unwrap(), 0);
        assert_eq!(
            class(2, -1, &[]).h2(),
            Err(LatticeError::OutsideSupportedCone(-1))
        );
        assert!(class(2, -1, &[]).virtual_dimension().is_err());
    }

    #[test]
    fn virtual_dimension_examples() {
        assert_eq!(class(2, 1, &[1, 1]).virtual_dimension().unwrap(), 0);
        assert_eq!(class(10, 1, &[3]).virtual_dimension().unwrap(), 0);
        for d in 1..30 {
            assert_eq!(class(4, d, &[2 * d]).virtual_dimension().unwrap(), 1 - d);
        }
        assert_eq!(
            DivisorClass::exceptional(s(2), 0)
                .virtual_dimension()
                .unwrap(),
            0
        );
    }

    #[test]
    fn expected_dimension_examples() {
        assert_eq!(class(4, 3, &[6]).expected_dimension().unwrap(), -1);
        assert_eq!(class(2, 1, &[1, 1]).expected_dimension().unwrap(), 0);
        assert_eq!(class(2, 2, &[2]).expected_dimension().unwrap(), 2);
    }

    #[test]
    fn arithmetic_genus_examples() {
        assert_eq!(class(2, 1, &[1]).arithmetic_genus().unwrap(), 2);
        assert_eq!(
            DivisorClass::exceptional(s(2), 0)
                .arithmetic_genus()
                .unwrap(),
            0
        );
        assert_eq!(class(6, 1, &[2, 1]).arithmetic_genus().unwrap(), 3);
    }

    #[test]
    fn add_and_scale_examples() {
        let c = class(2, 1, &[1, 1]);
        assert_eq!(c.scale(2).unwrap(), class(2, 2, &[2, 2]));
        assert_eq!(c.add(&class(2, 1, &[1, 0])).unwrap(), class(2, 2, &[2, 1]));
        assert_eq!(c.scale(0).unwrap(), DivisorClass::zero(s(2)));
    }

    #[test]
    fn overflow_is_reported() {
        let big = class(2, i64::MAX / 2, &[]);
        assert_eq!(
            big.self_intersection(),
            Err(LatticeError::Overflow("intersection"))
        );
        assert!(class(2, i64::MAX, &[]).add(&class(2, 1, &[])).is_err());
        assert!(class(2, 1, &[i64::MIN]).negate().is_err());
    }

    #[test]
    fn equality_ignores_trailing_zeros() {
        assert_eq!(class(2, 1, &[1, 0, 0]), class(2, 1, &[1]));
        assert_ne!(class(2, 1, &[0, 1]), class(2, 1, &[1]));
        assert_eq!(class(2, 1, &[1, 0]).to_string(), "L2(1;1)");
    }
}
