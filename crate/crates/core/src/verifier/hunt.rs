//! Bounded scan for classifier incoherence and for numerical configurations
//! that would contradict the conjecture.
//!
//! Coherence violations are bugs in this crate. Counterexample candidates
//! would falsify the conjecture itself and carry their own certificate kind.

use std::time::Instant;

use rayon::prelude::*;

use super::bounds::SearchBounds;
use super::enumerate::{alignments, multisets};
use super::report::{Certificate, CertificateKind, Operand, Quantity, VerificationReport};
use super::VerifyError;
use crate::classifier::{
    decompose, dimension, matching_branches, normalize, Branch, ClassifyError, LinearSystemSpec,
    MemberKind,
};
use crate::lattice::DivisorClass;

const SPEC_QUANTITIES: [Quantity; 3] = [
    Quantity::VirtualDimension(Operand::A),
    Quantity::SelfIntersection(Operand::A),
    Quantity::CanonicalDegree(Operand::A),
];

const PAIR_QUANTITIES: [Quantity; 4] = [
    Quantity::VirtualDimension(Operand::A),
    Quantity::VirtualDimension(Operand::B),
    Quantity::VirtualDimension(Operand::Sum),
    Quantity::Intersection,
];

/// Canonical systems inside the bounds, in `(n, d, mults)` order.
pub fn specs_within(bounds: &SearchBounds) -> Result<Vec<LinearSystemSpec>, VerifyError> {
    let shapes = multisets(bounds.max_points, bounds.mass_bound, |m| m * (m + 1));
    let mut specs = Vec::new();
    for n in bounds.even_n() {
        for d in bounds.t_range.clone() {
            for mults in &shapes {
                specs.push(normalize(n, d, mults)?);
            }
        }
    }
    specs.sort();
    Ok(specs)
}

fn spec_certificate(
    kind: CertificateKind,
    spec: &LinearSystemSpec,
    note: String,
) -> Result<Certificate, VerifyError> {
    Ok(
        Certificate::new(kind, vec![spec.class()], format!("{spec}: {note}"))
            .measure(&SPEC_QUANTITIES)?,
    )
}

fn check_spec<G>(spec: &LinearSystemSpec, guards: &G) -> Result<Vec<Certificate>, VerifyError>
where
    G: Fn(&LinearSystemSpec) -> Result<Vec<Branch>, ClassifyError>,
{
    use CertificateKind::{CoherenceViolation as Bug, CounterexampleCandidate as Candidate};

    let mut out = Vec::new();
    let mut flag = |kind, note: String| -> Result<(), VerifyError> {
        out.push(spec_certificate(kind, spec, note)?);
        Ok(())
    };

    let branches = guards(spec)?;
    if branches.len() != 1 {
        flag(
            Bug,
            format!(
                "{} decomposition branches fire: {branches:?}",
                branches.len()
            ),
        )?;
        return Ok(out);
    }
    let dec = decompose(spec)?;
    if dec.branch != branches[0] {
        flag(
            Bug,
            format!(
                "decompose took {:?}, guards select {:?}",
                dec.branch, branches[0]
            ),
        )?;
    }

    let v = dec.virtual_dimension;
    if v < 0 && dec.member_kind != MemberKind::Empty && dec.family.is_none() {
        flag(
            Candidate,
            format!("v = {v} but neither empty nor a special family"),
        )?;
    }
    if dimension(spec)? != dec.dimension {
        flag(Bug, "dimension disagrees with decomposition".into())?;
    }
    if (dec.dimension == -1) != (dec.member_kind == MemberKind::Empty) {
        flag(
            Bug,
            "dimension -1 must coincide with an empty verdict".into(),
        )?;
    }
    if dec.dimension >= 0 {
        let h1_positive = dec.h1.is_some_and(|h| h > 0);
        if dec.special != (dec.dimension > dec.expected_dimension) || dec.special != h1_positive {
            flag(Bug, "speciality, dimension and h1 disagree".into())?;
        }
    }
    if let Some(sum) = dec.reconstruct()? {
        if sum != spec.class() {
            flag(Bug, format!("fixed and free parts sum to {sum}"))?;
        }
    }
    if dec.special && dec.fixed_part.iter().all(|fc| fc.multiplicity < 2) {
        flag(Candidate, "special system with a reduced fixed part".into())?;
    }
    if dec.member_kind == MemberKind::FixedPlusPencil {
        let free = dec.free_part.as_ref().map(LinearSystemSpec::class);
        let meets_once = match (free, dec.fixed_part.first()) {
            (Some(f), Some(fc)) => f.intersect(&fc.component.class())? == 1,
            _ => false,
        };
        if !meets_once {
            flag(Bug, "free pencil must meet the fixed curve once".into())?;
        }
    }
    Ok(out)
}

/// For `v = 0` curves, `v(C + C') = 0` forces `C.C' = 1`.
fn check_rigid_pair(
    c: &DivisorClass,
    c2: &DivisorClass,
) -> Result<(u64, Vec<Certificate>), VerifyError> {
    let mut out = Vec::new();
    let mut checked = 0;
    for (la, lb) in alignments(&c.l, &c2.l) {
        checked += 1;
        let a = DivisorClass::new(c.surface, c.t, la);
        let b = DivisorClass::new(c2.surface, c2.t, lb);
        if a.add(&b)?.virtual_dimension()? == 0 && a.intersect(&b)? != 1 {
            out.push(
                Certificate::new(
                    CertificateKind::CounterexampleCandidate,
                    vec![a, b],
                    "v(C) = v(C') = v(C+C') = 0 but C.C' != 1",
                )
                .measure(&PAIR_QUANTITIES)?,
            );
        }
    }
    Ok((checked, out))
}

pub fn hunt_counterexamples(bounds: &SearchBounds) -> Result<VerificationReport, VerifyError> {
    hunt_counterexamples_with(bounds, matching_branches)
}

/// As [`hunt_counterexamples`], with the branch guards supplied by the caller.
pub fn hunt_counterexamples_with<G>(
    bounds: &SearchBounds,
    guards: G,
) -> Result<VerificationReport, VerifyError>
where
    G: Fn(&LinearSystemSpec) -> Result<Vec<Branch>, ClassifyError> + Sync,
{
    let start = Instant::now();
    let specs = specs_within(bounds)?;

    let per_spec = specs
        .par_iter()
        .map(|s| check_spec(s, &guards))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rigid: Vec<DivisorClass> = Vec::new();
    for s in &specs {
        if s.d >= 1 && s.virtual_dimension()? == 0 {
            rigid.push(s.class());
        }
    }
    let mut jobs = Vec::new();
    for (i, c) in rigid.iter().enumerate() {
        for c2 in &rigid[i..] {
            if c.surface == c2.surface {
                jobs.push((c, c2));
            }
        }
    }
    let per_pair = jobs
        .par_iter()
        .map(|(c, c2)| check_rigid_pair(c, c2))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = VerificationReport::new("hunt");
    report.bounds = Some(bounds.clone());
    report.checked_count = specs.len() as u64;
    for certs in per_spec {
        report.violations.extend(certs);
    }
    for (checked, certs) in per_pair {
        report.checked_count += checked;
        report.violations.extend(certs);
    }
    Ok(report.finish(start.elapsed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SearchBounds {
        SearchBounds::hunt(6, 4, 24, 4).unwrap()
    }

    #[test]
    fn clean_scan() {
        let report = hunt_counterexamples(&small()).unwrap();
        assert!(report.passed, "{:#?}", report.violations);
        assert!(report.checked_count > 100);
    }

    #[test]
    fn broken_guards_are_caught() {
        let broken = |s: &LinearSystemSpec| {
            let mut b = matching_branches(s)?;
            if s.d >= 1 && s.virtual_dimension()? > 0 {
                b.push(Branch::RigidCurve);
            }
            Ok(b)
        };
        let report = hunt_counterexamples_with(&small(), broken).unwrap();
        assert!(!report.passed);
        assert!(report
            .violations
            .iter()
            .all(|c| c.kind == CertificateKind::CoherenceViolation));
        report.replay_all().unwrap();
    }

    #[test]
    fn swapped_guards_are_caught() {
        let swapped = |s: &LinearSystemSpec| {
            Ok(matching_branches(s)?
                .into_iter()
                .map(|b| {
                    if b == Branch::Irreducible {
                        Branch::Empty
                    } else {
                        b
                    }
                })
                .collect())
        };
        let report = hunt_counterexamples_with(&small(), swapped).unwrap();
        assert!(!report.passed);
    }

    #[test]
    fn rigid_pair_meeting_once() {
        let s2 = crate::lattice::SurfaceParams::new(2).unwrap();
        // two copies of L2(1;1,1) sharing one point: L2(2;2,1,1) has v = 0
        let a = DivisorClass::new(s2, 1, vec![1, 1, 0]);
        let b = DivisorClass::new(s2, 1, vec![1, 0, 1]);
        assert_eq!(a.add(&b).unwrap().virtual_dimension().unwrap(), 0);
        assert_eq!(a.intersect(&b).unwrap(), 1);

        let c = DivisorClass::new(s2, 1, vec![1, 1]);
        let (checked, certs) = check_rigid_pair(&c, &c).unwrap();
        assert_eq!(checked, 3);
        assert!(certs.is_empty());
    }
}
