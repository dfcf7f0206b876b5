//! Glued block-grid layouts and their full-rank criteria.
//!
//! When a curve lies on several hypersurfaces at once, its incidence
//! Jacobian decomposes into a sparse grid of scaled power blocks, with some
//! blocks shared between rows (the gluing). Three layouts cover the cases
//! this crate certifies:
//!
//! * a two-row, six-column grid with one shared block pair,
//! * a three-row, seven-column grid with a shared triple,
//! * a four-row, four-column grid of square invertible blocks closed by a
//!   Schur-complement condition.
//!
//! Each validator checks the layout's hypotheses one by one, measures the
//! rank of the assembled grid exactly, and reports which hypotheses held
//! alongside the conclusion, so a failed implication is visible as data
//! rather than as a panic.

use alloc::vec::Vec;

use crate::error::CoreError;
use crate::matrix::ExactMatrix;
use crate::rng::SeededRng;
use crate::scalar::{Scalar, ScalarCtx};

/// Column-span containment `cols(inner) within span(cols(outer))`, decided
/// exactly by comparing ranks of `outer` against `[outer | inner]`.
fn columns_spanned_by(inner: &ExactMatrix, outer: &ExactMatrix) -> Result<bool, CoreError> {
    let joint = outer.hstack(inner)?;
    Ok(outer.rank() == joint.rank())
}

fn full_row_rank(m: &ExactMatrix) -> bool {
    m.rank() == m.rows()
}

// ---------------------------------------------------------------------
// Two rows, six columns
// ---------------------------------------------------------------------

/// Blocks of the two-row grid. All blocks are `(3d+1) x (d+1)`. The
/// assembled matrix is
///
/// ```text
/// [ B11  B12  B13  B14   0   B16 ]
/// [  0   B22  B23  B24  B25  B26 ]
/// ```
///
/// of shape `(6d+2) x (6d+6)`.
#[derive(Clone, Debug)]
pub struct Grid2x6 {
    pub d: usize,
    pub b11: ExactMatrix,
    pub b12: ExactMatrix,
    pub b13: ExactMatrix,
    pub b14: ExactMatrix,
    pub b16: ExactMatrix,
    pub b22: ExactMatrix,
    pub b23: ExactMatrix,
    pub b24: ExactMatrix,
    pub b25: ExactMatrix,
    pub b26: ExactMatrix,
}

#[derive(Clone, Debug)]
pub struct Grid2x6Report {
    /// `B13 = B23` and `B14 = B24`: the two rows see the same glued pair.
    pub overlap_blocks_equal: bool,
    /// `[B13 B14 B16]` has full row rank.
    pub right_triple_full_rank: bool,
    /// `[B11, B12 - B22, B25]` has full row rank.
    pub left_triple_full_rank: bool,
    /// Columns of `[B11 B12]` lie in the column span of `[B13 B14]`.
    pub left_pair_spanned_by_overlap: bool,
    pub hypotheses_hold: bool,
    pub rank: usize,
    pub expected_rank: usize,
    /// Full row rank of the assembled grid — what the hypotheses promise.
    pub conclusion_holds: bool,
}

impl Grid2x6 {
    fn block_shape_ok(&self) -> Result<(), CoreError> {
        let (r, c) = (3 * self.d + 1, self.d + 1);
        for b in [
            &self.b11, &self.b12, &self.b13, &self.b14, &self.b16, &self.b22, &self.b23,
            &self.b24, &self.b25, &self.b26,
        ] {
            if b.rows() != r || b.cols() != c {
                return Err(CoreError::DimensionMismatch(alloc::format!(
                    "grid block must be {r} x {c}, got {} x {}",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(())
    }

    pub fn assemble(&self) -> Result<ExactMatrix, CoreError> {
        self.block_shape_ok()?;
        let zero = ExactMatrix::zero(self.b11.ctx(), 3 * self.d + 1, self.d + 1);
        ExactMatrix::from_blocks(&[
            alloc::vec![&self.b11, &self.b12, &self.b13, &self.b14, &zero, &self.b16],
            alloc::vec![&zero, &self.b22, &self.b23, &self.b24, &self.b25, &self.b26],
        ])
    }
}

pub fn check_grid_2x6(grid: &Grid2x6) -> Result<Grid2x6Report, CoreError> {
    grid.block_shape_ok()?;
    let overlap_blocks_equal = grid.b13 == grid.b23 && grid.b14 == grid.b24;
    let right_triple_full_rank =
        full_row_rank(&grid.b13.hstack(&grid.b14)?.hstack(&grid.b16)?);
    let left_triple_full_rank = full_row_rank(
        &grid
            .b11
            .hstack(&grid.b12.sub(&grid.b22)?)?
            .hstack(&grid.b25)?,
    );
    let left_pair = grid.b11.hstack(&grid.b12)?;
    let overlap_pair = grid.b13.hstack(&grid.b14)?;
    let left_pair_spanned_by_overlap = columns_spanned_by(&left_pair, &overlap_pair)?;

    let assembled = grid.assemble()?;
    let rank = assembled.rank();
    let expected_rank = 6 * grid.d + 2;
    let hypotheses_hold = overlap_blocks_equal
        && right_triple_full_rank
        && left_triple_full_rank
        && left_pair_spanned_by_overlap;
    Ok(Grid2x6Report {
        overlap_blocks_equal,
        right_triple_full_rank,
        left_triple_full_rank,
        left_pair_spanned_by_overlap,
        hypotheses_hold,
        rank,
        expected_rank,
        conclusion_holds: rank == expected_rank,
    })
}

/// Draw a hypothesis-satisfying instance: the glued pair is shared verbatim,
/// the left pair is forced into its column span, and the two full-rank
/// triples are redrawn until generic.
pub fn synthesize_grid_2x6(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    d: usize,
) -> Result<Grid2x6, CoreError> {
    let (r, c) = (3 * d + 1, d + 1);
    let bound = 9;
    for _ in 0..crate::rng::DEFAULT_RESAMPLE_BUDGET {
        let b13 = rng.matrix(ctx, r, c, bound);
        let b14 = rng.matrix(ctx, r, c, bound);
        let b16 = rng.matrix(ctx, r, c, bound);
        if !full_row_rank(&b13.hstack(&b14)?.hstack(&b16)?) {
            continue;
        }
        // Left pair inside the span of the glued pair.
        let mixer = rng.matrix(ctx, 2 * c, 2 * c, bound);
        let left_pair = b13.hstack(&b14)?.mul(&mixer)?;
        let b11 = left_pair.select_columns(&(0..c).collect::<Vec<_>>())?;
        let b12 = left_pair.select_columns(&(c..2 * c).collect::<Vec<_>>())?;
        let b25 = rng.matrix(ctx, r, c, bound);
        let delta = rng.matrix(ctx, r, c, bound);
        if !full_row_rank(&b11.hstack(&delta)?.hstack(&b25)?) {
            continue;
        }
        let b22 = b12.sub(&delta)?;
        let grid = Grid2x6 {
            d,
            b23: b13.clone(),
            b24: b14.clone(),
            b11,
            b12,
            b13,
            b14,
            b16,
            b22,
            b25,
            b26: rng.matrix(ctx, r, c, bound),
        };
        return Ok(grid);
    }
    Err(CoreError::ResamplingExhausted {
        what: alloc::string::String::from("two-row grid with generic full-rank triples"),
        seed: rng.seed(),
        budget: crate::rng::DEFAULT_RESAMPLE_BUDGET,
    })
}

// ---------------------------------------------------------------------
// Three rows, seven columns
// ---------------------------------------------------------------------

/// Blocks of the three-row grid. First-row blocks are `(3d+1) x (d+1)`;
/// second- and third-row blocks are `(2d+1) x (d+1)`. The assembled matrix is
///
/// ```text
/// [ B11  B12  B13  B14  B15   0    0  ]
/// [  0    0   B23  B24  B25  B26   0  ]
/// [  0    0    0   B34  B35  B36  B37 ]
/// ```
///
/// of shape `(7d+3) x (7d+7)`.
#[derive(Clone, Debug)]
pub struct Grid3x7 {
    pub d: usize,
    pub b11: ExactMatrix,
    pub b12: ExactMatrix,
    pub b13: ExactMatrix,
    pub b14: ExactMatrix,
    pub b15: ExactMatrix,
    pub b23: ExactMatrix,
    pub b24: ExactMatrix,
    pub b25: ExactMatrix,
    pub b26: ExactMatrix,
    pub b34: ExactMatrix,
    pub b35: ExactMatrix,
    pub b36: ExactMatrix,
    pub b37: ExactMatrix,
}

#[derive(Clone, Debug)]
pub struct Grid3x7Report {
    /// `B24 = B34`, `B25 = B35`, `B26 = B36`: rows two and three see the
    /// same glued triple.
    pub overlap_blocks_equal: bool,
    /// `[B11 B12 B15]` has full row rank.
    pub row1_triple_full_rank: bool,
    /// `[B23, -B37]` has full row rank.
    pub row2_pair_full_rank: bool,
    /// `[B34 B36]` has full row rank.
    pub row3_pair_full_rank: bool,
    /// Columns of `[B13 B14]` lie in the column span of `[B11 B12]` — note
    /// the containment runs the opposite way from the two-row grid.
    pub middle_pair_spanned_by_left: bool,
    pub hypotheses_hold: bool,
    pub rank: usize,
    pub expected_rank: usize,
    pub conclusion_holds: bool,
}

impl Grid3x7 {
    fn block_shape_ok(&self) -> Result<(), CoreError> {
        let c = self.d + 1;
        let tall = 3 * self.d + 1;
        let short = 2 * self.d + 1;
        for b in [&self.b11, &self.b12, &self.b13, &self.b14, &self.b15] {
            if b.rows() != tall || b.cols() != c {
                return Err(CoreError::DimensionMismatch(
                    "first-row grid block has the wrong shape".into(),
                ));
            }
        }
        for b in [
            &self.b23, &self.b24, &self.b25, &self.b26, &self.b34, &self.b35, &self.b36,
            &self.b37,
        ] {
            if b.rows() != short || b.cols() != c {
                return Err(CoreError::DimensionMismatch(
                    "lower-row grid block has the wrong shape".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn assemble(&self) -> Result<ExactMatrix, CoreError> {
        self.block_shape_ok()?;
        let ctx = self.b11.ctx();
        let ztall = ExactMatrix::zero(ctx, 3 * self.d + 1, self.d + 1);
        let zshort = ExactMatrix::zero(ctx, 2 * self.d + 1, self.d + 1);
        ExactMatrix::from_blocks(&[
            alloc::vec![
                &self.b11, &self.b12, &self.b13, &self.b14, &self.b15, &ztall, &ztall
            ],
            alloc::vec![
                &zshort, &zshort, &self.b23, &self.b24, &self.b25, &self.b26, &zshort
            ],
            alloc::vec![
                &zshort, &zshort, &zshort, &self.b34, &self.b35, &self.b36, &self.b37
            ],
        ])
    }
}

pub fn check_grid_3x7(grid: &Grid3x7) -> Result<Grid3x7Report, CoreError> {
    grid.block_shape_ok()?;
    let overlap_blocks_equal =
        grid.b24 == grid.b34 && grid.b25 == grid.b35 && grid.b26 == grid.b36;
    let row1_triple_full_rank =
        full_row_rank(&grid.b11.hstack(&grid.b12)?.hstack(&grid.b15)?);
    let row2_pair_full_rank = full_row_rank(&grid.b23.hstack(&grid.b37.neg())?);
    let row3_pair_full_rank = full_row_rank(&grid.b34.hstack(&grid.b36)?);
    let left_pair = grid.b11.hstack(&grid.b12)?;
    let middle_pair = grid.b13.hstack(&grid.b14)?;
    let middle_pair_spanned_by_left = columns_spanned_by(&middle_pair, &left_pair)?;

    let assembled = grid.assemble()?;
    let rank = assembled.rank();
    let expected_rank = 7 * grid.d + 3;
    let hypotheses_hold = overlap_blocks_equal
        && row1_triple_full_rank
        && row2_pair_full_rank
        && row3_pair_full_rank
        && middle_pair_spanned_by_left;
    Ok(Grid3x7Report {
        overlap_blocks_equal,
        row1_triple_full_rank,
        row2_pair_full_rank,
        row3_pair_full_rank,
        middle_pair_spanned_by_left,
        hypotheses_hold,
        rank,
        expected_rank,
        conclusion_holds: rank == expected_rank,
    })
}

/// Draw a hypothesis-satisfying three-row instance.
pub fn synthesize_grid_3x7(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    d: usize,
) -> Result<Grid3x7, CoreError> {
    let c = d + 1;
    let tall = 3 * d + 1;
    let short = 2 * d + 1;
    let bound = 9;
    for _ in 0..crate::rng::DEFAULT_RESAMPLE_BUDGET {
        let b11 = rng.matrix(ctx, tall, c, bound);
        let b12 = rng.matrix(ctx, tall, c, bound);
        let b15 = rng.matrix(ctx, tall, c, bound);
        if !full_row_rank(&b11.hstack(&b12)?.hstack(&b15)?) {
            continue;
        }
        // Middle pair inside the span of the left pair.
        let mixer = rng.matrix(ctx, 2 * c, 2 * c, bound);
        let middle = b11.hstack(&b12)?.mul(&mixer)?;
        let b13 = middle.select_columns(&(0..c).collect::<Vec<_>>())?;
        let b14 = middle.select_columns(&(c..2 * c).collect::<Vec<_>>())?;
        let b23 = rng.matrix(ctx, short, c, bound);
        let b37 = rng.matrix(ctx, short, c, bound);
        if !full_row_rank(&b23.hstack(&b37.neg())?) {
            continue;
        }
        let b34 = rng.matrix(ctx, short, c, bound);
        let b36 = rng.matrix(ctx, short, c, bound);
        if !full_row_rank(&b34.hstack(&b36)?) {
            continue;
        }
        let b35 = rng.matrix(ctx, short, c, bound);
        return Ok(Grid3x7 {
            d,
            b24: b34.clone(),
            b25: b35.clone(),
            b26: b36.clone(),
            b11,
            b12,
            b13,
            b14,
            b15,
            b23,
            b34,
            b35,
            b36,
            b37,
        });
    }
    Err(CoreError::ResamplingExhausted {
        what: alloc::string::String::from("three-row grid with generic full-rank rows"),
        seed: rng.seed(),
        budget: crate::rng::DEFAULT_RESAMPLE_BUDGET,
    })
}

// ---------------------------------------------------------------------
// Four rows, four columns of square blocks
// ---------------------------------------------------------------------

/// Square-block cyclic grid. All named blocks are `k x k`:
///
/// ```text
/// [ B11  B12   0    0  ]
/// [  0   B22  B23   0  ]
/// [  0    0   B33  B34 ]
/// [  0   B42   0   B44 ]
/// ```
///
/// The closing condition is a Schur-style complement in the second and
/// fourth block columns. Two orderings of the product are in circulation
/// for its top-left entry; they differ when the blocks do not commute, so
/// the report carries both:
///
/// * stated form:  `M  = [[-B22 B23^-1 B33, B34], [B42, B44]]`
/// * derived form: `M' = [[-B33 B23^-1 B22, B34], [B42, B44]]`
///
/// Eliminating `B12` with block column one, `B22` with block column three,
/// and then `B33` with block row two turns the grid into a column-disjoint
/// shape whose determinant is exactly
///
/// `det J = (-1)^(k^2) * det(B11) * det(B23) * det(M')`
///
/// so the derived form is equivalent to nondegeneracy whenever `B11` and
/// `B23` are invertible, while the stated form can disagree for
/// noncommuting blocks. The validator measures all three verdicts.
#[derive(Clone, Debug)]
pub struct Grid4x4 {
    pub k: usize,
    pub b11: ExactMatrix,
    pub b12: ExactMatrix,
    pub b22: ExactMatrix,
    pub b23: ExactMatrix,
    pub b33: ExactMatrix,
    pub b34: ExactMatrix,
    pub b42: ExactMatrix,
    pub b44: ExactMatrix,
}

#[derive(Clone, Debug)]
pub struct Grid4x4Report {
    /// All eight named blocks are invertible.
    pub blocks_nondegenerate: bool,
    /// The stated complement `M` is invertible.
    pub stated_complement_nondegenerate: bool,
    /// The derived complement `M'` is invertible.
    pub derived_complement_nondegenerate: bool,
    /// The assembled grid is invertible.
    pub conclusion_nondegenerate: bool,
    pub determinant: Scalar,
    /// Exact check of
    /// `det J = (-1)^(k^2) * det(B11) * det(B23) * det(M')`;
    /// only evaluated when `B23` is invertible, else `None`.
    pub determinant_identity_holds: Option<bool>,
}

impl Grid4x4 {
    fn block_shape_ok(&self) -> Result<(), CoreError> {
        let k = self.k;
        for b in [
            &self.b11, &self.b12, &self.b22, &self.b23, &self.b33, &self.b34, &self.b42,
            &self.b44,
        ] {
            if b.rows() != k || b.cols() != k {
                return Err(CoreError::DimensionMismatch(
                    "square-grid block has the wrong shape".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn assemble(&self) -> Result<ExactMatrix, CoreError> {
        self.block_shape_ok()?;
        let zero = ExactMatrix::zero(self.b11.ctx(), self.k, self.k);
        ExactMatrix::from_blocks(&[
            alloc::vec![&self.b11, &self.b12, &zero, &zero],
            alloc::vec![&zero, &self.b22, &self.b23, &zero],
            alloc::vec![&zero, &zero, &self.b33, &self.b34],
            alloc::vec![&zero, &self.b42, &zero, &self.b44],
        ])
    }

    fn complement(&self, top_left: ExactMatrix) -> Result<ExactMatrix, CoreError> {
        ExactMatrix::from_blocks(&[
            alloc::vec![&top_left, &self.b34],
            alloc::vec![&self.b42, &self.b44],
        ])
    }
}

pub fn check_grid_4x4(grid: &Grid4x4) -> Result<Grid4x4Report, CoreError> {
    grid.block_shape_ok()?;
    let k = grid.k;
    let blocks_nondegenerate = [
        &grid.b11, &grid.b12, &grid.b22, &grid.b23, &grid.b33, &grid.b34, &grid.b42,
        &grid.b44,
    ]
    .iter()
    .all(|b| b.rank() == k);

    let assembled = grid.assemble()?;
    let determinant = assembled.det()?;
    let conclusion_nondegenerate = !determinant.is_zero();

    let (stated, derived, identity) = match grid.b23.inverse() {
        None => (false, false, None),
        Some(b23_inv) => {
            let stated_tl = grid.b22.mul(&b23_inv)?.mul(&grid.b33)?.neg();
            let derived_tl = grid.b33.mul(&b23_inv)?.mul(&grid.b22)?.neg();
            let stated_m = grid.complement(stated_tl)?;
            let derived_m = grid.complement(derived_tl)?;
            let derived_det = derived_m.det()?;
            let mut rhs = grid.b11.det()?.mul(&grid.b23.det()?).mul(&derived_det);
            if (k * k) % 2 == 1 {
                rhs = rhs.neg();
            }
            (
                stated_m.rank() == 2 * k,
                !derived_det.is_zero(),
                Some(determinant == rhs),
            )
        }
    };

    Ok(Grid4x4Report {
        blocks_nondegenerate,
        stated_complement_nondegenerate: stated,
        derived_complement_nondegenerate: derived,
        conclusion_nondegenerate,
        determinant,
        determinant_identity_holds: identity,
    })
}

/// Draw an all-blocks-invertible instance whose complements are both
/// nondegenerate.
pub fn synthesize_grid_4x4(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    k: usize,
) -> Result<Grid4x4, CoreError> {
    for _ in 0..crate::rng::DEFAULT_RESAMPLE_BUDGET {
        let grid = Grid4x4 {
            k,
            b11: rng.invertible_square(ctx, k)?,
            b12: rng.invertible_square(ctx, k)?,
            b22: rng.invertible_square(ctx, k)?,
            b23: rng.invertible_square(ctx, k)?,
            b33: rng.invertible_square(ctx, k)?,
            b34: rng.invertible_square(ctx, k)?,
            b42: rng.invertible_square(ctx, k)?,
            b44: rng.invertible_square(ctx, k)?,
        };
        let report = check_grid_4x4(&grid)?;
        if report.stated_complement_nondegenerate && report.derived_complement_nondegenerate {
            return Ok(grid);
        }
    }
    Err(CoreError::ResamplingExhausted {
        what: alloc::string::String::from("square-block grid with nondegenerate complements"),
        seed: rng.seed(),
        budget: crate::rng::DEFAULT_RESAMPLE_BUDGET,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::DEFAULT_PRIME;

    fn q() -> ScalarCtx {
        ScalarCtx::Rational
    }

    #[test]
    fn synthetic_2x6_instances_conclude_full_rank() {
        for ctx in [q(), ScalarCtx::prime(DEFAULT_PRIME)] {
            let mut rng = SeededRng::new(11);
            for d in 1..=2usize {
                let grid = synthesize_grid_2x6(&mut rng, ctx, d).unwrap();
                let report = check_grid_2x6(&grid).unwrap();
                assert!(report.hypotheses_hold, "{report:?}");
                assert!(report.conclusion_holds, "{report:?}");
                assert_eq!(report.expected_rank, 6 * d + 2);
            }
        }
    }

    #[test]
    fn grid_2x6_detects_broken_gluing() {
        let mut rng = SeededRng::new(12);
        let mut grid = synthesize_grid_2x6(&mut rng, q(), 1).unwrap();
        // Perturb one entry of the supposedly shared block.
        let bumped = grid.b23.get(0, 0).add(&q().from_i64(1));
        grid.b23.set(0, 0, bumped);
        let report = check_grid_2x6(&grid).unwrap();
        assert!(!report.overlap_blocks_equal);
        assert!(!report.hypotheses_hold);
    }

    #[test]
    fn grid_2x6_span_condition_fails_for_generic_left_pair() {
        // Without forcing the left pair into the overlap's span, a random
        // (3d+1) x 2(d+1) pair almost surely escapes a 2(d+1)-dimensional
        // span; the validator must notice. Needs d >= 2: at d = 1 the
        // overlap pair is square and generically spans everything.
        let mut rng = SeededRng::new(13);
        let mut grid = synthesize_grid_2x6(&mut rng, q(), 2).unwrap();
        grid.b11 = rng.matrix(q(), 7, 3, 9);
        grid.b12 = rng.matrix(q(), 7, 3, 9);
        let report = check_grid_2x6(&grid).unwrap();
        assert!(!report.left_pair_spanned_by_overlap);
    }

    #[test]
    fn synthetic_3x7_instances_conclude_full_rank() {
        for ctx in [q(), ScalarCtx::prime(DEFAULT_PRIME)] {
            let mut rng = SeededRng::new(21);
            for d in 1..=2usize {
                let grid = synthesize_grid_3x7(&mut rng, ctx, d).unwrap();
                let report = check_grid_3x7(&grid).unwrap();
                assert!(report.hypotheses_hold, "{report:?}");
                assert!(report.conclusion_holds, "{report:?}");
                assert_eq!(report.expected_rank, 7 * d + 3);
            }
        }
    }

    #[test]
    fn grid_3x7_shape_validation() {
        let mut rng = SeededRng::new(22);
        let mut grid = synthesize_grid_3x7(&mut rng, q(), 1).unwrap();
        grid.b23 = rng.matrix(q(), 4, 2, 9); // wrong height for a lower row
        assert!(matches!(
            check_grid_3x7(&grid),
            Err(CoreError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn grid_3x7_detects_broken_gluing() {
        let mut rng = SeededRng::new(23);
        let mut grid = synthesize_grid_3x7(&mut rng, q(), 1).unwrap();
        let bumped = grid.b35.get(1, 1).add(&q().from_i64(1));
        grid.b35.set(1, 1, bumped);
        let report = check_grid_3x7(&grid).unwrap();
        assert!(!report.overlap_blocks_equal);
    }

    #[test]
    fn scalar_grid_4x4_determinant_identity() {
        // k = 1: det J = -b11 * b23 * det(M), all products commute.
        let grid = Grid4x4 {
            k: 1,
            b11: ExactMatrix::from_i64_rows(q(), &[&[2]]),
            b12: ExactMatrix::from_i64_rows(q(), &[&[3]]),
            b22: ExactMatrix::from_i64_rows(q(), &[&[5]]),
            b23: ExactMatrix::from_i64_rows(q(), &[&[7]]),
            b33: ExactMatrix::from_i64_rows(q(), &[&[11]]),
            b34: ExactMatrix::from_i64_rows(q(), &[&[13]]),
            b42: ExactMatrix::from_i64_rows(q(), &[&[17]]),
            b44: ExactMatrix::from_i64_rows(q(), &[&[19]]),
        };
        let report = check_grid_4x4(&grid).unwrap();
        // det J = b11 (b22 b33 b44 + b23 b34 b42) = 2 * (5*11*19 + 7*13*17)
        assert_eq!(report.determinant, q().from_i64(2 * (5 * 11 * 19 + 7 * 13 * 17)));
        assert_eq!(report.determinant_identity_holds, Some(true));
        assert!(report.blocks_nondegenerate);
        assert!(report.stated_complement_nondegenerate);
        assert!(report.conclusion_nondegenerate);
    }

    #[test]
    fn synthetic_4x4_instances_conclude_nondegenerate() {
        for ctx in [q(), ScalarCtx::prime(DEFAULT_PRIME)] {
            let mut rng = SeededRng::new(31);
            for k in [1usize, 2, 3] {
                let grid = synthesize_grid_4x4(&mut rng, ctx, k).unwrap();
                let report = check_grid_4x4(&grid).unwrap();
                assert!(report.blocks_nondegenerate);
                assert!(report.conclusion_nondegenerate, "{report:?}");
                assert_eq!(report.determinant_identity_holds, Some(true));
            }
        }
    }

    #[test]
    fn stated_and_derived_complements_disagree_for_noncommuting_blocks() {
        // Engineered k = 2 instance: every named block invertible, the
        // stated complement invertible, but the derived one singular — and
        // the grid is then singular too. The derived form tracks the
        // conclusion exactly; the stated one does not.
        let b22 = ExactMatrix::from_i64_rows(q(), &[&[1, 1], &[0, 1]]);
        let b23 = ExactMatrix::identity(q(), 2);
        let b33 = ExactMatrix::from_i64_rows(q(), &[&[1, 0], &[1, 1]]);
        // M' top-left is -B33 B22 = -[[1,1],[1,2]]; choose B34 so that
        // B34 = -B33 B22 - N with N singular, keeping B34 invertible and
        // the stated complement's pivot block -B22 B33 - B34 = I.
        let minus_b33_b22 = b33.mul(&b22).unwrap().neg();
        let n = ExactMatrix::from_i64_rows(q(), &[&[2, 0], &[0, 0]]);
        let b34 = minus_b33_b22.sub(&n).unwrap();
        let grid = Grid4x4 {
            k: 2,
            b11: ExactMatrix::identity(q(), 2),
            b12: ExactMatrix::identity(q(), 2),
            b42: ExactMatrix::identity(q(), 2),
            b44: ExactMatrix::identity(q(), 2),
            b22,
            b23,
            b33,
            b34,
        };
        let report = check_grid_4x4(&grid).unwrap();
        assert!(report.blocks_nondegenerate, "{report:?}");
        assert!(report.stated_complement_nondegenerate, "{report:?}");
        assert!(!report.derived_complement_nondegenerate, "{report:?}");
        assert!(!report.conclusion_nondegenerate, "{report:?}");
        assert_eq!(report.determinant_identity_holds, Some(true));
    }
}
