use k3sys::lattice::{DivisorClass, SurfaceParams};
use proptest::prelude::*;

fn surface() -> impl Strategy<Value = SurfaceParams> {
    (1i64..=20).prop_map(|g| SurfaceParams::new(2 * g).unwrap())
}

fn class_on(
    s: SurfaceParams,
    t: std::ops::RangeInclusive<i64>,
) -> impl Strategy<Value = DivisorClass> {
    (t, prop::collection::vec(-6i64..=12, 0..7)).prop_map(move |(t, l)| DivisorClass::new(s, t, l))
}

fn triple() -> impl Strategy<Value = (DivisorClass, DivisorClass, DivisorClass)> {
    surface().prop_flat_map(|s| {
        (
            class_on(s, -20..=20),
            class_on(s, -20..=20),
            class_on(s, -20..=20),
        )
    })
}

fn positive_pair() -> impl Strategy<Value = (DivisorClass, DivisorClass)> {
    surface().prop_flat_map(|s| (class_on(s, 1..=25), class_on(s, 1..=25)))
}

fn lin(x: u32, a: &DivisorClass, y: u32, b: &DivisorClass) -> DivisorClass {
    a.scale(x).unwrap().add(&b.scale(y).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn pairing_is_symmetric_and_bilinear((a, b, c) in triple(), x in 0u32..6, y in 0u32..6) {
        prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
        let lhs = lin(x, &a, y, &b).intersect(&c).unwrap();
        let rhs = i64::from(x) * a.intersect(&c).unwrap() + i64::from(y) * b.intersect(&c).unwrap();
        prop_assert_eq!(lhs, rhs);
        let neg = a.negate().unwrap();
        prop_assert_eq!(neg.intersect(&c).unwrap(), -a.intersect(&c).unwrap());
    }

    #[test]
    fn euler_characteristic_is_additive((a, b, _) in triple()) {
        let sum = a.add(&b).unwrap();
        let gap = sum.euler_characteristic().unwrap()
            - a.euler_characteristic().unwrap()
            - b.euler_characteristic().unwrap()
            - a.intersect(&b).unwrap();
        prop_assert_eq!(gap, -2);
    }

    #[test]
    fn virtual_dimension_is_additive_off_exceptional_sums((a, b) in positive_pair()) {
        let sum = a.add(&b).unwrap();
        prop_assert_eq!(a.h2().unwrap() + b.h2().unwrap() + sum.h2().unwrap(), 0);
        prop_assert_eq!(
            sum.virtual_dimension().unwrap(),
            a.virtual_dimension().unwrap() + b.virtual_dimension().unwrap() + a.intersect(&b).unwrap() - 1
        );
    }

    #[test]
    fn closed_form_agrees_for_positive_degree((a, _) in positive_pair()) {
        prop_assert_eq!(a.virtual_dimension().unwrap(), a.virtual_dimension_closed_form().unwrap());
        let by_hand = a.surface.n() * a.t * a.t / 2 + 1
            - a.l.iter().map(|m| m * (m + 1) / 2).sum::<i64>();
        prop_assert_eq!(a.virtual_dimension().unwrap(), by_hand);
    }

    #[test]
    fn canonical_identities((a, _, _) in triple()) {
        let k = DivisorClass::canonical(a.surface, a.num_points());
        prop_assert_eq!(a.intersect(&k).unwrap(), a.l.iter().sum::<i64>());
        prop_assert_eq!(a.dot_canonical().unwrap(), a.l.iter().sum::<i64>());
        prop_assert_eq!(k.self_intersection().unwrap(), -(a.num_points() as i64));
    }

    #[test]
    fn genus_numerator_is_even((a, _, _) in triple()) {
        let d2 = a.self_intersection().unwrap();
        let dk = a.dot_canonical().unwrap();
        prop_assert_eq!((d2 + dk).rem_euclid(2), 0);
        prop_assert_eq!((d2 - dk).rem_euclid(2), 0);
        prop_assert_eq!(a.arithmetic_genus().unwrap(), (d2 + dk) / 2 + 1);
    }

    #[test]
    fn zero_padding_changes_nothing((a, b, _) in triple(), pad in 0usize..4) {
        let mut l = a.l.clone();
        l.extend(std::iter::repeat_n(0, pad));
        let padded = DivisorClass::new(a.surface, a.t, l);
        prop_assert_eq!(&padded, &a);
        prop_assert_eq!(padded.intersect(&b).unwrap(), a.intersect(&b).unwrap());
        prop_assert_eq!(padded.euler_characteristic().unwrap(), a.euler_characteristic().unwrap());
        prop_assert_eq!(padded.arithmetic_genus().unwrap(), a.arithmetic_genus().unwrap());
        if a.t >= 0 {
            prop_assert_eq!(padded.virtual_dimension().unwrap(), a.virtual_dimension().unwrap());
            prop_assert_eq!(padded.h2().unwrap(), a.h2().unwrap());
        }
    }
}

#[test]
fn exceptional_curves_have_genus_zero() {
    for n in [2, 4, 10] {
        for i in 0..5 {
            let e = DivisorClass::exceptional(SurfaceParams::new(n).unwrap(), i);
            assert_eq!(e.arithmetic_genus().unwrap(), 0);
            assert_eq!(e.virtual_dimension().unwrap(), 0);
        }
    }
}
