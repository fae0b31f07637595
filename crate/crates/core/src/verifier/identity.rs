use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{Certificate, CertificateKind, Operand, Quantity, VerificationReport};
use super::VerifyError;
use crate::lattice::{DivisorClass, SurfaceParams};

pub const DEFAULT_SEED: u64 = 0x4b33;
pub const DEFAULT_SAMPLES: u64 = 10_000;

const IDENTITY_QUANTITIES: [Quantity; 7] = [
    Quantity::VirtualDimension(Operand::A),
    Quantity::VirtualDimension(Operand::B),
    Quantity::VirtualDimension(Operand::Sum),
    Quantity::EulerCharacteristic(Operand::A),
    Quantity::EulerCharacteristic(Operand::B),
    Quantity::EulerCharacteristic(Operand::Sum),
    Quantity::Intersection,
];

fn random_class(rng: &mut ChaCha8Rng, surface: SurfaceParams) -> DivisorClass {
    let r = rng.random_range(0..=8);
    let l = (0..r).map(|_| rng.random_range(-4..=15)).collect();
    DivisorClass::new(surface, rng.random_range(1..=30), l)
}

/// Samples pairs of classes with `t >= 1` and checks
/// `v(A+B) = v(A) + v(B) + A.B - 1` and `chi(A+B) = chi(A) + chi(B) + A.B - 2`.
pub fn verify_addition_identity(
    samples: u64,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerificationReport::new("identity");
    report.seed = Some(seed);

    for _ in 0..samples {
        let surface = SurfaceParams::new(2 * rng.random_range(1..=20))?;
        let a = random_class(&mut rng, surface);
        let b = random_class(&mut rng, surface);
        let sum = a.add(&b)?;
        let dot = a.intersect(&b)?;

        let v_gap =
            sum.virtual_dimension()? - (a.virtual_dimension()? + b.virtual_dimension()? + dot - 1);
        let chi_gap = sum.euler_characteristic()?
            - (a.euler_characteristic()? + b.euler_characteristic()? + dot - 2);
        report.checked_count += 1;

        if v_gap != 0 || chi_gap != 0 {
            report.violations.push(
                Certificate::new(
                    CertificateKind::AdditionFailure,
                    vec![a, b],
                    "additivity fails",
                )
                .measure(&IDENTITY_QUANTITIES)?
                .detail("v_gap", v_gap)
                .detail("chi_gap", chi_gap),
            );
        }
    }
    Ok(report.finish(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        let s2 = SurfaceParams::new(2).unwrap();
        let a = DivisorClass::new(s2, 1, vec![1, 1]);
        let b = DivisorClass::new(s2, 1, vec![1]);
        assert_eq!(a.virtual_dimension().unwrap(), 0);
        assert_eq!(b.virtual_dimension().unwrap(), 1);
        assert_eq!(a.intersect(&b).unwrap(), 1);
        assert_eq!(a.add(&b).unwrap().virtual_dimension().unwrap(), 1);

        let s4 = SurfaceParams::new(4).unwrap();
        let c = DivisorClass::new(s4, 1, vec![2]);
        assert_eq!(c.add(&c).unwrap().virtual_dimension().unwrap(), -1);
    }

    #[test]
    fn seeded_run_passes_and_is_reproducible() {
        let first = verify_addition_identity(500, 7).unwrap();
        let second = verify_addition_identity(500, 7).unwrap();
        assert!(first.passed);
        assert_eq!(first.checked_count, 500);
        assert_eq!(first.without_timing(), second.without_timing());
    }
}
