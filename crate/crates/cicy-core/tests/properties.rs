//! Randomized cross-checks tying independent layers of the engine together.
//!
//! Each property pits two routes to the same quantity against each other:
//! symbolic derivatives against finite first-order expansions, elimination
//! ranks against permutation/transpose/field changes, kernels against direct
//! matrix action, Vandermonde elimination against the closed-form product.
//! All arithmetic is exact, so every assertion is equality, never tolerance.

use proptest::prelude::*;

use cicy_core::curve::RationalCurve;
use cicy_core::incidence::jacobian_row;
use cicy_core::matrix::ExactMatrix;
use cicy_core::primes::DEFAULT_PRIME;
use cicy_core::rng::SeededRng;
use cicy_core::scalar::{Scalar, ScalarCtx};
use cicy_core::unipoly::UniPoly;
use cicy_core::vandermonde::{order_one_det_closed_form, vandermonde_type, Order, VandermondeSpec};

fn both_contexts() -> [ScalarCtx; 2] {
    [ScalarCtx::Rational, ScalarCtx::prime(DEFAULT_PRIME)]
}

/// Random curve with every component drawn dense up to the degree bound.
fn dense_curve(rng: &mut SeededRng, ctx: ScalarCtx, ncomp: usize, d: usize) -> RationalCurve {
    let comps = (0..ncomp).map(|_| rng.poly_up_to_degree(ctx, d, 6)).collect();
    RationalCurve::new(d, comps).expect("component count is positive")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `sum_j z_j * dg/dz_j = (deg g) * g`, evaluated at a random point.
    #[test]
    fn euler_identity(seed in any::<u64>(), nvars in 2usize..=5, degree in 1u32..=4) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let g = rng.homform_dense(ctx, nvars, degree, 8);
            let point: Vec<Scalar> =
                (0..nvars).map(|_| ctx.from_i64(rng.int_in(-9, 9))).collect();
            let mut lhs = ctx.zero();
            for (j, z) in point.iter().enumerate() {
                let dg = g.partial_derivative(j).unwrap();
                lhs = lhs.add(&z.mul(&dg.eval(&point).unwrap()));
            }
            let rhs = ctx.from_i64(i64::from(degree)).mul(&g.eval(&point).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// `d/dz_j (f * g) = f * dg/dz_j + g * df/dz_j` as an identity of forms.
    #[test]
    fn partial_derivative_product_rule(
        seed in any::<u64>(),
        nvars in 2usize..=4,
        df in 1u32..=3,
        dg in 1u32..=3,
        j in 0usize..4,
    ) {
        prop_assume!(j < nvars);
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let f = rng.homform_dense(ctx, nvars, df, 6);
            let g = rng.homform_dense(ctx, nvars, dg, 6);
            let lhs = f.mul(&g).partial_derivative(j).unwrap();
            let rhs = f
                .mul(&g.partial_derivative(j).unwrap())
                .add(&g.mul(&f.partial_derivative(j).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// Chain rule through restriction: `(g o c)' = sum_j (dg/dz_j o c) * c_j'`.
    #[test]
    fn chain_rule_through_restriction(
        seed in any::<u64>(),
        nvars in 2usize..=4,
        degree in 1u32..=3,
        d in 1usize..=3,
    ) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let g = rng.homform_dense(ctx, nvars, degree, 6);
            let c = dense_curve(&mut rng, ctx, nvars, d);
            let lhs = g.compose_with_curve(&c).unwrap().derivative();
            let derivs = c.derivative();
            let mut rhs = UniPoly::zero(ctx);
            for j in 0..nvars {
                let factor = g.partial_derivative(j).unwrap().compose_with_curve(&c).unwrap();
                rhs = rhs.add(&factor.mul(&derivs[j]));
            }
            prop_assert_eq!(lhs, rhs);
        }
    }

    /// A Jacobian row is the exact directional derivative: pairing the row at
    /// `t` with the coefficient vector of a perturbation curve `delta` gives
    /// `sum_j (dg/dz_j)(c(t)) * delta_j(t)`, and pairing it with the curve's
    /// own coefficients recovers `(deg g) * g(c(t))` by homogeneity.
    #[test]
    fn jacobian_row_is_a_directional_derivative(
        seed in any::<u64>(),
        nvars in 2usize..=4,
        degree in 1u32..=3,
        d in 1usize..=3,
    ) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let g = rng.homform_dense(ctx, nvars, degree, 6);
            let c = dense_curve(&mut rng, ctx, nvars, d);
            let delta = dense_curve(&mut rng, ctx, nvars, d);
            let t = ctx.from_i64(rng.int_in(-9, 9));
            let row = jacobian_row(&g, &c, &t).unwrap();

            let pair = |coeffs: &[Scalar]| -> Scalar {
                let mut acc = ctx.zero();
                for (a, b) in row.iter().zip(coeffs) {
                    acc = acc.add(&a.mul(b));
                }
                acc
            };

            let mut directional = ctx.zero();
            for j in 0..nvars {
                let dg_at_c = g.partial_derivative(j).unwrap().eval(&c.eval(&t)).unwrap();
                directional = directional.add(&dg_at_c.mul(&delta.components()[j].eval(&t)));
            }
            prop_assert_eq!(pair(&delta.coefficient_vector()), directional);

            let euler = ctx
                .from_i64(i64::from(degree))
                .mul(&g.compose_with_curve(&c).unwrap().eval(&t));
            prop_assert_eq!(pair(&c.coefficient_vector()), euler);
        }
    }

    /// Rank survives transposition, row permutation, and nonzero row scaling.
    #[test]
    fn rank_is_invariant_under_rewrites(
        seed in any::<u64>(),
        rows in 1usize..=6,
        cols in 1usize..=6,
    ) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let m = rng.matrix(ctx, rows, cols, 9);
            let r = m.rank();
            prop_assert_eq!(m.transpose().rank(), r);

            let mut perm: Vec<usize> = (0..rows).collect();
            for i in (1..rows).rev() {
                perm.swap(i, rng.below(i as u64 + 1) as usize);
            }
            let mut shuffled = Vec::with_capacity(rows);
            for &i in &perm {
                let scale = rng.nonzero_scalar(ctx, 9);
                shuffled.push(m.row(i).iter().map(|v| v.mul(&scale)).collect::<Vec<_>>());
            }
            prop_assert_eq!(ExactMatrix::from_rows(ctx, shuffled).unwrap().rank(), r);
        }
    }

    /// For integer matrices up to 6x6 with entries bounded by 50, every
    /// nonzero minor is far below the default modulus (Hadamard bound
    /// ~3.4e12 against a prime near 2.3e18), so the rational rank and the
    /// rank modulo the default prime must agree exactly.
    #[test]
    fn small_integer_ranks_agree_across_fields(
        seed in any::<u64>(),
        rows in 1usize..=6,
        cols in 1usize..=6,
    ) {
        let mut rng = SeededRng::new(seed);
        let entries: Vec<Vec<i64>> =
            (0..rows).map(|_| (0..cols).map(|_| rng.int_in(-50, 50)).collect()).collect();
        let build = |ctx: ScalarCtx| {
            let rows_s: Vec<Vec<Scalar>> = entries
                .iter()
                .map(|r| r.iter().map(|&v| ctx.from_i64(v)).collect())
                .collect();
            ExactMatrix::from_rows(ctx, rows_s).unwrap()
        };
        prop_assert_eq!(
            build(ScalarCtx::Rational).rank(),
            build(ScalarCtx::prime(DEFAULT_PRIME)).rank()
        );
    }

    /// Kernel basis vectors annihilate the matrix, there are exactly
    /// `cols - rank` of them, and they are linearly independent.
    #[test]
    fn kernel_basis_annihilates_and_is_independent(
        seed in any::<u64>(),
        rows in 1usize..=6,
        cols in 1usize..=6,
    ) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let m = rng.matrix(ctx, rows, cols, 9);
            let (rank, basis) = m.rank_and_kernel();
            prop_assert_eq!(basis.len(), cols - rank);
            for v in &basis {
                for value in m.apply(v).unwrap() {
                    prop_assert!(value.is_zero());
                }
            }
            if !basis.is_empty() {
                let stacked = ExactMatrix::from_rows(ctx, basis.clone()).unwrap();
                prop_assert_eq!(stacked.rank(), basis.len());
            }
        }
    }

    /// The scaled power-block determinant equals the closed-form product
    /// `(-1)^(m(m+1)/2) * prod h(t_i) * prod_{i<j} (t_j - t_i)`.
    #[test]
    fn scaled_power_block_det_matches_closed_form(
        seed in any::<u64>(),
        m in 1usize..=5,
        hdeg in 0usize..=3,
    ) {
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let h = rng.poly_up_to_degree(ctx, hdeg, 8);
            let points = rng.distinct_points(ctx, m + 1);
            let spec = VandermondeSpec::new(h.clone(), points.clone(), m, Order::One);
            let det = vandermonde_type(&spec).unwrap().det().unwrap();
            prop_assert_eq!(det, order_one_det_closed_form(&h, &points));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Fixed-point elimination agrees with exact rational elimination on
    /// nonsingular integer systems: the truncating solver must land within
    /// 2^-100 of the true solution at 128-bit precision.
    #[test]
    fn fixed_point_solver_tracks_exact_solution(
        seed in any::<u64>(),
        n in 1usize..=4,
    ) {
        use cicy_core::bigfloat::{solve_square, BigFloat, DEFAULT_PRECISION};
        use num_rational::BigRational;

        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(seed);
        let m = rng.matrix(ctx, n, n, 9);
        prop_assume!(m.rank() == n);
        let rhs: Vec<Scalar> = (0..n).map(|_| ctx.from_i64(rng.int_in(-9, 9))).collect();

        let inv = m.inverse().unwrap();
        let exact = inv.apply(&rhs).unwrap();

        let p = DEFAULT_PRECISION;
        let mf: Vec<Vec<BigFloat>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigFloat::from_rational(m.get(i, j).as_rational().unwrap(), p))
                    .collect()
            })
            .collect();
        let rf: Vec<BigFloat> =
            rhs.iter().map(|v| BigFloat::from_rational(v.as_rational().unwrap(), p)).collect();
        let floor = BigFloat::pow2(-((p / 2) as i64), p);
        let (sol, _) = solve_square(&mf, &rf, &floor).unwrap();

        let tol = BigFloat::pow2(-100, p);
        for (approx, truth) in sol.iter().zip(&exact) {
            let truth_r: &BigRational = truth.as_rational().unwrap();
            let err = approx.sub(&BigFloat::from_rational(truth_r, p)).abs();
            prop_assert!(err.lt(&tol), "error {} exceeds 2^-100", err.to_decimal_string(40));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// The public band-instance samplers emit violation-free instances whose
    /// conclusion (nondegeneracy of the glued matrix) holds.
    #[test]
    fn band_samplers_emit_clean_passing_instances(seed in any::<u64>(), d in 1usize..=3) {
        use cicy_core::banded::{
            check_three_band, check_two_band, random_three_band_spec, random_two_band_spec,
        };
        for ctx in both_contexts() {
            let mut rng = SeededRng::new(seed);
            let two = check_two_band(&random_two_band_spec(&mut rng, ctx, d)).unwrap();
            prop_assert!(two.violations.is_empty());
            prop_assert!(two.conclusion_holds);
            let three = check_three_band(&random_three_band_spec(&mut rng, ctx, d)).unwrap();
            prop_assert!(three.violations.is_empty(), "{:?}", three.violations);
            prop_assert!(three.conclusion_holds);
        }
    }
}
