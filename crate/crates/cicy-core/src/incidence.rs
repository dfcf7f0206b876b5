//! The incidence Jacobian: rows are first-order conditions "the curve stays
//! on hypersurface i at marked point t", columns are the coefficients of
//! the curve's components.
//!
//! For a family with hypersurface degrees `h_1 >= ... >= h_r` in `P^n` and a
//! degree-`d` curve, form `i` contributes `h_i * d + 1` rows (one per marked
//! point — enough to pin the composed polynomial of degree `h_i * d`), and
//! the column block of component `j` holds its `d + 1` coefficients, so the
//! full matrix is `(sum_i h_i d + 1) x (n+1)(d+1)`. The entry in row
//! `(i, t)` and column `(j, k)` is `dg_i/dz_j (c(t)) * t^k`; columns are
//! ordered `j * (d+1) + k` with `k` ascending.
//!
//! Full row rank here is the whole game: it makes the incidence scheme
//! smooth of expected dimension over the space of intersections, which is
//! what existence and deformation arguments lean on. The kernel always
//! contains a four-dimensional tautological subspace (reparametrization and
//! scaling of the curve), so "full row rank" is equivalent to "kernel
//! dimension exactly `(n+1)(d+1) - rows`", equal to 4 precisely at the top
//! level for these families.

use alloc::vec::Vec;

use crate::ci::{CompleteIntersection, MarkedPointSet};
use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::homform::HomForm;
use crate::matrix::ExactMatrix;
use crate::scalar::Scalar;
use crate::unipoly::UniPoly;

/// One row of the incidence Jacobian: all `(n+1)(d+1)` partial derivatives
/// of `form(c(t))` with respect to the curve coefficients, at one marked
/// parameter value.
pub fn jacobian_row(
    form: &HomForm,
    curve: &RationalCurve,
    t: &Scalar,
) -> Result<Vec<Scalar>, CoreError> {
    let d = curve.degree_bound();
    let ncomp = curve.len();
    if form.nvars() != ncomp {
        return Err(CoreError::VariableCountMismatch {
            form_vars: form.nvars(),
            curve_components: ncomp,
        });
    }
    let point: Vec<Scalar> = curve.components().iter().map(|c| c.eval(t)).collect();
    let mut row = Vec::with_capacity(ncomp * (d + 1));
    for j in 0..ncomp {
        let partial_value = form.partial_derivative(j)?.eval(&point)?;
        let mut power = t.ctx().one();
        for _ in 0..=d {
            row.push(partial_value.mul(&power));
            power = power.mul(t);
        }
    }
    Ok(row)
}

/// Rows of the first `level` forms, form-major and point-minor. `level`
/// ranges over `0..=r`; the full Jacobian is `level = r`.
pub fn build_jacobian_level(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    points: &MarkedPointSet,
    level: usize,
) -> Result<ExactMatrix, CoreError> {
    if level > ci.forms().len() {
        return Err(CoreError::IndexOutOfRange { index: level, len: ci.forms().len() });
    }
    let d = curve.degree_bound();
    let ncols = curve.len() * (d + 1);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (i, form) in ci.forms().iter().enumerate().take(level) {
        for t in points.group(i) {
            rows.push(jacobian_row(form, curve, t)?);
        }
    }
    if rows.is_empty() {
        return Ok(ExactMatrix::zero(ci.ctx(), 0, ncols));
    }
    ExactMatrix::from_rows(ci.ctx(), rows)
}

pub fn build_jacobian(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    points: &MarkedPointSet,
) -> Result<ExactMatrix, CoreError> {
    build_jacobian_level(ci, curve, points, ci.forms().len())
}

/// Verdict of one exact elimination over the full Jacobian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub full_row_rank: bool,
}

pub fn certify_full_rank(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    points: &MarkedPointSet,
) -> Result<RankCertificate, CoreError> {
    let jac = build_jacobian(ci, curve, points)?;
    Ok(certificate_for(&jac))
}

pub fn certificate_for(jac: &ExactMatrix) -> RankCertificate {
    let rank = jac.rank();
    RankCertificate {
        rows: jac.rows(),
        cols: jac.cols(),
        rank,
        kernel_dim: jac.cols() - rank,
        full_row_rank: rank == jac.rows(),
    }
}

/// Kernel dimension at every level `0..=r`. Level 0 is the whole coefficient
/// space, `(n+1)(d+1)`; when every level has full row rank, level `l+1`
/// drops by exactly `h_{l+1} d + 1` from level `l`, ending at 4.
pub fn kernel_dimension_profile(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    points: &MarkedPointSet,
) -> Result<Vec<usize>, CoreError> {
    let r = ci.forms().len();
    let mut profile = Vec::with_capacity(r + 1);
    for level in 0..=r {
        let jac = build_jacobian_level(ci, curve, points, level)?;
        profile.push(jac.cols() - jac.rank());
    }
    Ok(profile)
}

/// A maximal independent set of columns, found greedily left to right (the
/// elimination pivots). When the matrix has full row rank these columns cut
/// out a square invertible block; the complementary columns are then free
/// coordinates for the implicit-function step.
pub fn select_independent_coordinates(jac: &ExactMatrix) -> Vec<usize> {
    jac.eliminate().pivot_columns
}

/// Does a proposed column set carry the whole rank? True exactly when the
/// selected columns form a maximal nondegenerate block.
pub fn partition_is_independent(jac: &ExactMatrix, columns: &[usize]) -> Result<bool, CoreError> {
    let selected = jac.select_columns(columns)?;
    Ok(selected.rank() == columns.len() && columns.len() == jac.rank())
}

/// The column partition that drops the constant coefficient of every
/// even-indexed component: the candidate independent set for the doubled
/// four-quadric pattern, where even components carry the
/// vanishing-at-zero hyperplane and odd components stay full.
pub fn even_constant_dropped_partition(ncomps: usize, d: usize) -> Vec<usize> {
    let mut cols = Vec::new();
    for j in 0..ncomps {
        let start = if j % 2 == 0 { 1 } else { 0 };
        for k in start..=d {
            cols.push(j * (d + 1) + k);
        }
    }
    cols
}

/// The four tautological kernel vectors, as coefficient vectors in the
/// column convention: the infinitesimal actions
///
/// * `c'`            (parameter translation)
/// * `2 t c' - d c`  (parameter dilation, degree-balanced)
/// * `d t c - t^2 c'` (translation at infinity; top coefficients cancel)
/// * `c`             (global scaling)
///
/// Each is annihilated by any incidence Jacobian of any hypersurface the
/// curve lies on: the first three because the composed polynomial vanishes
/// identically, the last by homogeneity.
pub fn orbit_kernel_vectors(curve: &RationalCurve) -> Result<Vec<Vec<Scalar>>, CoreError> {
    let ctx = curve.ctx();
    let d = curve.degree_bound();
    let d_scalar = ctx.from_i64(d as i64);
    let two = ctx.from_i64(2);
    let mut vectors: Vec<Vec<Scalar>> = alloc::vec![Vec::new(); 4];
    for comp in curve.components() {
        let deriv = comp.derivative();
        let fields: [UniPoly; 4] = [
            deriv.clone(),
            deriv.shift_up(1).scale(&two).sub(&comp.scale(&d_scalar)),
            comp.shift_up(1).scale(&d_scalar).sub(&deriv.shift_up(2)),
            comp.clone(),
        ];
        for (v, field) in vectors.iter_mut().zip(fields.iter()) {
            if field.degree().map_or(false, |deg| deg > d) {
                return Err(CoreError::InvalidConstruction(
                    "tautological field exceeds the coefficient degree bound".into(),
                ));
            }
            for k in 0..=d {
                v.push(field.coeff(k));
            }
        }
    }
    Ok(vectors)
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    /// Whether each tautological vector is annihilated by the Jacobian.
    pub in_kernel: [bool; 4],
    /// Rank of the 4-vector family (4 unless the curve is degenerate).
    pub orbit_rank: usize,
    pub kernel_dim: usize,
    /// True when the tautological family spans the whole kernel — the
    /// "nothing unexpected" verdict.
    pub orbit_spans_kernel: bool,
}

pub fn orbit_report(jac: &ExactMatrix, curve: &RationalCurve) -> Result<OrbitReport, CoreError> {
    let vectors = orbit_kernel_vectors(curve)?;
    let ctx = curve.ctx();
    let mut in_kernel = [false; 4];
    for (idx, v) in vectors.iter().enumerate() {
        let col = ExactMatrix::from_rows(ctx, v.iter().map(|s| alloc::vec![s.clone()]).collect())?;
        let image = jac.mul(&col)?;
        in_kernel[idx] = (0..image.rows()).all(|r| image.get(r, 0).is_zero());
    }
    let orbit_matrix = ExactMatrix::from_rows(ctx, vectors)?;
    let orbit_rank = orbit_matrix.rank();
    let kernel_dim = jac.cols() - jac.rank();
    Ok(OrbitReport {
        in_kernel,
        orbit_rank,
        kernel_dim,
        orbit_spans_kernel: in_kernel.iter().all(|&b| b) && orbit_rank == kernel_dim,
    })
}
