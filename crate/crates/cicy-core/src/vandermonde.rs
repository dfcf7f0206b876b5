//! Scaled Vandermonde blocks, the building material of every structured
//! matrix in this crate.
//!
//! A block is `diag(h(t_1), ..., h(t_u))` times a power matrix in descending
//! powers: order 0 uses columns `(t^m, ..., t)` (no constant column, width m),
//! order 1 uses `(t^m, ..., 1)` (width m+1). Incidence Jacobian rows, the
//! two- and three-polynomial interpolation matrices, and the glued grids are
//! all stitched out of these.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::matrix::ExactMatrix;
use crate::scalar::{product, Scalar};
use crate::unipoly::UniPoly;

/// Whether the block keeps the constant column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Columns `(t^m, ..., t)`: width `m`.
    Zero,
    /// Columns `(t^m, ..., 1)`: width `m + 1`.
    One,
}

#[derive(Clone, Debug)]
pub struct VandermondeSpec {
    pub h: UniPoly,
    pub points: Vec<Scalar>,
    /// Top power `m >= 1`.
    pub width_param: usize,
    pub order: Order,
}

impl VandermondeSpec {
    pub fn new(h: UniPoly, points: Vec<Scalar>, width_param: usize, order: Order) -> Self {
        VandermondeSpec { h, points, width_param, order }
    }

    pub fn ncols(&self) -> usize {
        match self.order {
            Order::Zero => self.width_param,
            Order::One => self.width_param + 1,
        }
    }
}

/// Assemble the scaled power-block matrix `diag(h(t_i)) * [t_i^m ... ]`.
pub fn vandermonde_type(spec: &VandermondeSpec) -> Result<ExactMatrix, CoreError> {
    for (i, p) in spec.points.iter().enumerate() {
        if spec.points[..i].contains(p) {
            return Err(CoreError::RepeatedPoints);
        }
    }
    vandermonde_rows(spec)
}

/// Assembly without the distinct-points requirement. Determinant identities
/// are polynomial identities and must also hold (both sides zero) when
/// points coincide, so identity checks evaluate through this entry point.
pub fn vandermonde_rows(spec: &VandermondeSpec) -> Result<ExactMatrix, CoreError> {
    if spec.width_param < 1 {
        return Err(CoreError::ParameterOutOfRange("width parameter must be at least 1".to_string()));
    }
    let ctx = spec.h.ctx();
    let lowest = match spec.order {
        Order::Zero => 1,
        Order::One => 0,
    };
    let rows = spec
        .points
        .iter()
        .map(|t| {
            let scale = spec.h.eval(t);
            (lowest..=spec.width_param)
                .rev()
                .map(|k| scale.mul(&t.pow(k as u64)))
                .collect::<Vec<_>>()
        })
        .collect();
    ExactMatrix::from_rows(ctx, rows)
}

/// Closed-form determinant of the square order-1 block on `m + 1` points:
///
/// `(-1)^{m(m+1)/2} * prod_i h(t_i) * prod_{i<j} (t_j - t_i)`.
///
/// The sign is the descending-column reversal of the classical Vandermonde
/// determinant; the elimination path must reproduce it exactly.
pub fn order_one_det_closed_form(h: &UniPoly, points: &[Scalar]) -> Scalar {
    let ctx = h.ctx();
    let m = points.len() - 1;
    let scale_values: Vec<Scalar> = points.iter().map(|t| h.eval(t)).collect();
    let mut acc = product(ctx, scale_values.iter());
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            acc = acc.mul(&points[j].sub(&points[i]));
        }
    }
    if (m * (m + 1) / 2) % 2 == 1 {
        acc = acc.neg();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::DEFAULT_PRIME;
    use crate::rng::SeededRng;
    use crate::scalar::ScalarCtx;

    fn q() -> ScalarCtx {
        ScalarCtx::Rational
    }

    #[test]
    fn classical_two_by_two() {
        // h = 1, points (1, 2), m = 1, order 1 -> [[1,1],[2,1]], det -1.
        let spec = VandermondeSpec::new(
            UniPoly::one(q()),
            alloc::vec![q().from_i64(1), q().from_i64(2)],
            1,
            Order::One,
        );
        let m = vandermonde_type(&spec).unwrap();
        assert_eq!(m, ExactMatrix::from_i64_rows(q(), &[&[1, 1], &[2, 1]]));
        assert_eq!(m.det().unwrap(), q().from_i64(-1));
        assert_eq!(order_one_det_closed_form(&spec.h, &spec.points), q().from_i64(-1));
    }

    #[test]
    fn scaled_order_zero() {
        // h = t, points (2, 3), m = 2, order 0 -> [[8, 4], [27, 9]].
        let spec = VandermondeSpec::new(
            UniPoly::t(q()),
            alloc::vec![q().from_i64(2), q().from_i64(3)],
            2,
            Order::Zero,
        );
        let m = vandermonde_type(&spec).unwrap();
        assert_eq!(m, ExactMatrix::from_i64_rows(q(), &[&[8, 4], &[27, 9]]));
    }

    #[test]
    fn zero_of_h_zeroes_the_row() {
        let h = UniPoly::from_i64(q(), &[-2, 1]); // t - 2
        let spec = VandermondeSpec::new(
            h,
            alloc::vec![q().from_i64(2), q().from_i64(3)],
            2,
            Order::One,
        );
        let m = vandermonde_type(&spec).unwrap();
        for c in 0..m.cols() {
            assert!(m.get(0, c).is_zero());
        }
        assert!(!m.get(1, 0).is_zero());
    }

    #[test]
    fn repeated_points_rejected_and_width_validated() {
        let spec = VandermondeSpec::new(
            UniPoly::one(q()),
            alloc::vec![q().from_i64(1), q().from_i64(1)],
            2,
            Order::One,
        );
        assert!(matches!(vandermonde_type(&spec), Err(CoreError::RepeatedPoints)));
        let bad_width = VandermondeSpec::new(UniPoly::one(q()), alloc::vec![q().one()], 0, Order::One);
        assert!(vandermonde_type(&bad_width).is_err());
    }

    #[test]
    fn closed_form_det_matches_elimination_up_to_size_five() {
        // Exact check of the determinant formula, both contexts, m+1 <= 5.
        for ctx in [q(), ScalarCtx::prime(DEFAULT_PRIME)] {
            let mut rng = SeededRng::new(314);
            for m in 1..=4usize {
                for _ in 0..10 {
                    let h = rng.poly_exact_degree(ctx, m.min(3), 9);
                    let points = rng.distinct_points(ctx, m + 1);
                    let spec = VandermondeSpec::new(h.clone(), points.clone(), m, Order::One);
                    let mat = vandermonde_type(&spec).unwrap();
                    assert_eq!(
                        mat.det().unwrap(),
                        order_one_det_closed_form(&h, &points),
                        "mismatch at m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn overdetermined_order_zero_has_full_column_rank() {
        // u > m rows with all h(t_i) != 0: rank m.
        let mut rng = SeededRng::new(2718);
        for m in 1..=4usize {
            let (h, roots) = rng.squarefree_from_roots(q(), 2);
            let points = rng.distinct_points_avoiding(q(), m + 3, &roots);
            let spec = VandermondeSpec::new(h, points, m, Order::Zero);
            let mat = vandermonde_type(&spec).unwrap();
            assert_eq!(mat.rank(), m);
        }
    }

    #[test]
    fn order_zero_is_degenerate_at_the_origin() {
        // The order-0 block has no constant column, so t = 0 gives a zero row
        // even when h(0) != 0 — the reason marked points avoid the origin.
        let spec = VandermondeSpec::new(
            UniPoly::one(q()),
            alloc::vec![q().zero(), q().one()],
            2,
            Order::Zero,
        );
        let m = vandermonde_type(&spec).unwrap();
        assert!(m.get(0, 0).is_zero() && m.get(0, 1).is_zero());
    }
}
