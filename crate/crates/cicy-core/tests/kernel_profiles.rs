//! Kernel-dimension profiles of the incidence Jacobian at the structured
//! witnesses, pinned against values computed once with an independent exact
//! symbolic oracle and frozen here.
//!
//! The profile lists `dim ker` of the stacked Jacobian as hypersurfaces are
//! added one at a time; entry 0 is the ambient coefficient-space dimension
//! `(n+1)(d+1)`. A family is certified at the witness when the final entry
//! is 4 — the reparametrization orbit and nothing else.
//!
//! Two of the quadric-based families and the doubled-quadric family carry
//! structural extra kernel vectors at these witnesses (final entries
//! `2d + 3` and `2d + 4`); the profiles record that honestly. The quartic-
//! and quintic-based families close at exactly 4.

use cicy_core::ci::{CicyType, MarkedPointSet, PointSharing};
use cicy_core::incidence::{
    build_jacobian, certify_full_rank, kernel_dimension_profile, orbit_report,
};
use cicy_core::primes::DEFAULT_PRIME;
use cicy_core::rng::SeededRng;
use cicy_core::scalar::ScalarCtx;
use cicy_core::witness::{build_witness, WitnessMode};

fn profile_for(
    ctx: ScalarCtx,
    ty: CicyType,
    d: usize,
    seed: u64,
) -> Vec<usize> {
    let mut rng = SeededRng::new(seed);
    let w = build_witness(&mut rng, ctx, ty, d, WitnessMode::Pattern).unwrap();
    let pts = MarkedPointSet::draw(&mut rng, ctx, ty, d, PointSharing::Independent);
    kernel_dimension_profile(&w.ci, &w.curve, &pts).unwrap()
}

#[test]
fn quadrics_2222_degree_one_profile() {
    for ctx in [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)] {
        for seed in [11, 12] {
            assert_eq!(profile_for(ctx, CicyType::Quadrics2222, 1, seed), [16, 13, 10, 7, 6]);
        }
    }
}

#[test]
fn quadrics_2222_degree_two_final_kernel_is_stable() {
    let p = profile_for(ScalarCtx::Rational, CicyType::Quadrics2222, 2, 13);
    assert_eq!(p[0], 24);
    assert_eq!(*p.last().unwrap(), 8); // 2d + 4
}

#[test]
fn cubics_33_profiles() {
    for ctx in [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)] {
        assert_eq!(profile_for(ctx, CicyType::Cubics33, 1, 21), [12, 8, 5]);
    }
    assert_eq!(profile_for(ScalarCtx::Rational, CicyType::Cubics33, 2, 22), [18, 11, 7]);
}

#[test]
fn cubic_322_degree_one_profile() {
    for ctx in [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)] {
        assert_eq!(profile_for(ctx, CicyType::Cubic322, 1, 31), [14, 10, 7, 5]);
    }
}

#[test]
fn quintic_profiles_close_at_the_orbit() {
    for ctx in [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)] {
        assert_eq!(profile_for(ctx, CicyType::Quintic5, 1, 41), [10, 4]);
    }
    let p = profile_for(ScalarCtx::Rational, CicyType::Quintic5, 2, 42);
    assert_eq!(p, [15, 4]);
}

#[test]
fn quartic_42_profiles_close_at_the_orbit() {
    for ctx in [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)] {
        assert_eq!(profile_for(ctx, CicyType::Quartic42, 1, 51), [12, 7, 4]);
    }
    assert_eq!(profile_for(ScalarCtx::Rational, CicyType::Quartic42, 2, 52), [18, 9, 4]);
}

#[test]
fn sound_families_certify_full_row_rank() {
    let ctx = ScalarCtx::Rational;
    for (ty, d) in [(CicyType::Quintic5, 1), (CicyType::Quintic5, 2), (CicyType::Quartic42, 1), (CicyType::Quartic42, 2)] {
        let mut rng = SeededRng::new(61);
        let w = build_witness(&mut rng, ctx, ty, d, WitnessMode::Pattern).unwrap();
        let pts = MarkedPointSet::draw(&mut rng, ctx, ty, d, PointSharing::Independent);
        let cert = certify_full_rank(&w.ci, &w.curve, &pts).unwrap();
        assert!(cert.full_row_rank, "{:?} d={d}: rank {} of {} rows", ty, cert.rank, cert.rows);
        assert_eq!(cert.kernel_dim, 4);
    }
}

#[test]
fn orbit_vectors_lie_in_every_witness_kernel() {
    let ctx = ScalarCtx::Rational;
    for ty in CicyType::ALL {
        let mut rng = SeededRng::new(71);
        let w = build_witness(&mut rng, ctx, ty, 1, WitnessMode::Pattern).unwrap();
        let pts = MarkedPointSet::draw(&mut rng, ctx, ty, 1, PointSharing::Independent);
        let jac = build_jacobian(&w.ci, &w.curve, &pts).unwrap();
        let report = orbit_report(&jac, &w.curve).unwrap();
        assert_eq!(report.in_kernel, [true; 4], "{:?}", ty);
        assert_eq!(report.orbit_rank, 4, "{:?}", ty);
        let sound = matches!(ty, CicyType::Quintic5 | CicyType::Quartic42);
        assert_eq!(report.orbit_spans_kernel, sound, "{:?}", ty);
    }
}
