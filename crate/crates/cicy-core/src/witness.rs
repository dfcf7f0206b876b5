//! Witness construction: explicit curves lying on explicit complete
//! intersections, built so that the incidence Jacobian can be certified at
//! them.
//!
//! Two modes. Pattern mode reproduces the structured witnesses whose block
//! shape matches the banded and grid layouts: everything starts from a
//! degree-`d` curve on a quadric surface (via the doubly-ruled
//! parametrization) or on a quartic surface (via a linear solve for a
//! quartic through a random curve), then gets extended coordinate by
//! coordinate. Random mode draws a random curve and solves for a random
//! complete intersection through it; that is the right regime for rigidity
//! statements about generic members.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ci::{CicyType, CompleteIntersection};
use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::homform::{monomial_basis, HomForm};
use crate::incidence::jacobian_row;
use crate::matrix::ExactMatrix;
use crate::rng::{SeededRng, DEFAULT_RESAMPLE_BUDGET};
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessMode {
    /// The structured construction tied to the banded/grid block shapes.
    Pattern,
    /// A random curve with a random complete intersection through it.
    Random,
}

/// A curve on a complete intersection, with provenance.
#[derive(Clone, Debug)]
pub struct Witness {
    pub ci: CompleteIntersection,
    pub curve: RationalCurve,
    pub mode: WitnessMode,
    /// The low-dimensional stage curve the pattern was extended from
    /// (pattern mode only).
    pub base_curve: Option<RationalCurve>,
    /// Verdict of the intermediate surface-stage rank check (pattern mode,
    /// quartic-based families only).
    pub surface_stage_full_rank: Option<bool>,
}

/// Degree-`d` smooth rational curve on a quadric surface in `P^3`, with the
/// quadric. Built from the doubly-ruled parametrization: component products
/// `(p0 q0, p0 q1, p1 q0, p1 q1)` of coprime pairs with degrees `(d-1, 1)`
/// (degree `(1, 0)` when `d = 1`), then a random invertible change of
/// coordinates so nothing stays axis-aligned. The degree-1 factor makes the
/// parametrization injective and unramified by construction.
pub fn segre_quadric_curve(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    d: usize,
) -> Result<(RationalCurve, HomForm), CoreError> {
    if d < 1 {
        return Err(CoreError::ParameterOutOfRange("curve degree must be positive".into()));
    }
    let (deg_p, deg_q) = if d == 1 { (1, 0) } else { (d - 1, 1) };
    for _ in 0..DEFAULT_RESAMPLE_BUDGET {
        let (p0, p1) = rng.coprime_pair(ctx, deg_p, deg_p, 7)?;
        let (q0, q1) = if deg_q == 0 {
            (UniPoly::one(ctx), UniPoly::constant(rng.nonzero_scalar(ctx, 7)))
        } else {
            rng.coprime_pair(ctx, deg_q, deg_q, 7)?
        };
        let products = alloc::vec![
            p0.mul(&q0),
            p0.mul(&q1),
            p1.mul(&q0),
            p1.mul(&q1),
        ];
        if products.iter().all(|c| c.degree() != Some(d)) {
            continue; // leading terms cancelled; degree dropped
        }
        let standard = RationalCurve::new(d, products)?;
        if !standard.is_gcd_free() {
            continue;
        }
        // z0 z3 - z1 z2 vanishes on the standard form.
        let mut quadric = HomForm::zero(ctx, 4, 2);
        quadric.add_term(&[1, 0, 0, 1], ctx.one());
        quadric.add_term(&[0, 1, 1, 0], ctx.from_i64(-1));

        // Random change of coordinates: curve by L, quadric by L^-1.
        let l_rows = rng.invertible_matrix(ctx, 4, 5)?;
        let l = ExactMatrix::from_rows(ctx, l_rows.clone()).expect("rectangular");
        let l_inv = l.inverse().expect("invertible by construction");
        let curve = standard.linear_transform(&l_rows)?;
        let sub: Vec<Vec<Scalar>> = (0..4)
            .map(|j| (0..4).map(|k| l_inv.get(j, k).clone()).collect())
            .collect();
        let rotated_quadric = quadric.substitute_linear(&sub);
        if !rotated_quadric.compose_with_curve(&curve)?.is_zero() {
            return Err(CoreError::InvalidConstruction(
                "rotated quadric fails to contain the rotated curve".into(),
            ));
        }
        return Ok((curve, rotated_quadric));
    }
    Err(CoreError::ResamplingExhausted {
        what: String::from("curve on a quadric surface"),
        seed: rng.seed(),
        budget: DEFAULT_RESAMPLE_BUDGET,
    })
}

/// All forms of the given degree through the curve: kernel of the linear
/// map sending form coefficients to the coefficients of the composed
/// univariate polynomial. Returns a seeded random kernel combination.
pub fn random_form_through_curve(
    rng: &mut SeededRng,
    curve: &RationalCurve,
    nvars: usize,
    degree: u32,
) -> Result<HomForm, CoreError> {
    let ctx = curve.ctx();
    let d = curve.degree_bound();
    let basis = monomial_basis(nvars, degree);
    let composed_degree = degree as usize * d;
    // Condition matrix: one row per coefficient of the composed polynomial,
    // one column per monomial.
    let mut rows: Vec<Vec<Scalar>> = alloc::vec![Vec::new(); composed_degree + 1];
    for exps in &basis {
        let monomial = HomForm::monomial(nvars, degree, exps, ctx.one());
        let composed = monomial.compose_with_curve(curve)?;
        for (k, row) in rows.iter_mut().enumerate() {
            row.push(composed.coeff(k));
        }
    }
    let conditions = ExactMatrix::from_rows(ctx, rows)?;
    let kernel = conditions.kernel_basis();
    if kernel.is_empty() {
        return Err(CoreError::InvalidConstruction(alloc::format!(
            "no degree-{degree} form through a degree-{d} curve in {nvars} variables"
        )));
    }
    for _ in 0..DEFAULT_RESAMPLE_BUDGET {
        let mut coeffs = alloc::vec![ctx.zero(); basis.len()];
        for v in &kernel {
            let weight = ctx.from_i64(rng.int_in(-7, 7));
            for (c, entry) in coeffs.iter_mut().zip(v) {
                *c = c.add(&weight.mul(entry));
            }
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut form = HomForm::zero(ctx, nvars, degree);
        for (exps, c) in basis.iter().zip(coeffs) {
            if !c.is_zero() {
                form.add_term(exps, c);
            }
        }
        debug_assert!(form.compose_with_curve(curve)?.is_zero());
        return Ok(form);
    }
    Err(CoreError::ResamplingExhausted {
        what: String::from("nonzero form through the curve"),
        seed: rng.seed(),
        budget: DEFAULT_RESAMPLE_BUDGET,
    })
}

/// Degree-`d` curve in `P^3` together with a quartic surface through it,
/// resampled until the surface-stage Jacobian — the `4d x 4(d+1)` matrix of
/// incidence rows at `4d` generic parameters — has full row rank. The row
/// count is one less than the usual `4d + 1`; that slack is particular to
/// quartics in `P^3` and is what the later one-variable extension spends.
///
/// Needs `4d + 1 < 35` independent conditions on quartic coefficients, so
/// `d <= 8`.
pub fn quartic_surface_curve(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    d: usize,
    require_first_pair_coprime: bool,
) -> Result<(RationalCurve, HomForm, bool), CoreError> {
    if d < 1 || d > 8 {
        return Err(CoreError::Unsupported(alloc::format!(
            "quartic surface stage supports degrees 1..=8, got {d}"
        )));
    }
    for _ in 0..DEFAULT_RESAMPLE_BUDGET {
        let curve = match random_curve(rng, ctx, 3, d) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if require_first_pair_coprime
            && !curve.components()[0].is_coprime_with(&curve.components()[1])
        {
            continue;
        }
        let quartic = match random_form_through_curve(rng, &curve, 4, 4) {
            Ok(f) => f,
            Err(_) => continue,
        };
        let points = rng.distinct_points(ctx, 4 * d);
        let mut rows = Vec::with_capacity(4 * d);
        for t in &points {
            rows.push(jacobian_row(&quartic, &curve, t)?);
        }
        let stage = ExactMatrix::from_rows(ctx, rows)?;
        let full = stage.rank() == 4 * d;
        if full {
            return Ok((curve, quartic, true));
        }
    }
    Err(CoreError::ResamplingExhausted {
        what: String::from("quartic surface with full surface-stage rank"),
        seed: rng.seed(),
        budget: DEFAULT_RESAMPLE_BUDGET,
    })
}

/// Random degree-`d` rational curve in `P^n`: dense random components,
/// resampled until no common factor and the top degree is attained.
pub fn random_curve(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    n: usize,
    d: usize,
) -> Result<RationalCurve, CoreError> {
    for _ in 0..DEFAULT_RESAMPLE_BUDGET {
        let comps: Vec<UniPoly> =
            (0..=n).map(|_| rng.poly_up_to_degree(ctx, d, 7)).collect();
        if comps.iter().all(|c| c.degree() != Some(d)) {
            continue;
        }
        let curve = match RationalCurve::new(d, comps) {
            Ok(c) => c,
            Err(_) => continue,
        };
        if curve.is_gcd_free() {
            return Ok(curve);
        }
    }
    Err(CoreError::ResamplingExhausted {
        what: String::from("random curve with coprime components"),
        seed: rng.seed(),
        budget: DEFAULT_RESAMPLE_BUDGET,
    })
}

/// Random complete intersection of the family through the given curve,
/// resampled until it is transverse along the curve.
pub fn random_ci_through_curve(
    rng: &mut SeededRng,
    ty: CicyType,
    curve: &RationalCurve,
) -> Result<CompleteIntersection, CoreError> {
    let ctx = curve.ctx();
    let nvars = ty.ambient_dim() + 1;
    if curve.len() != nvars {
        return Err(CoreError::VariableCountMismatch {
            form_vars: nvars,
            curve_components: curve.len(),
        });
    }
    let samples: Vec<Scalar> = (1..=(2 * curve.degree_bound() as i64 + 3))
        .map(|v| ctx.from_i64(v))
        .collect();
    for _ in 0..DEFAULT_RESAMPLE_BUDGET {
        let mut forms = Vec::with_capacity(ty.num_forms());
        for &h in ty.degrees() {
            forms.push(random_form_through_curve(rng, curve, nvars, h as u32)?);
        }
        let ci = CompleteIntersection::new(ty, forms)?;
        if ci.smooth_along_curve(curve, &samples)? {
            return Ok(ci);
        }
    }
    Err(CoreError::ResamplingExhausted {
        what: String::from("transverse complete intersection through the curve"),
        seed: rng.seed(),
        budget: DEFAULT_RESAMPLE_BUDGET,
    })
}

fn var(ctx: ScalarCtx, nvars: usize, j: usize) -> HomForm {
    HomForm::var(ctx, nvars, j)
}

/// The structured witness for each family. See the module docs; the shapes
/// are chosen so each hypersurface touches only the component blocks its
/// grid row is allowed to touch.
fn pattern_witness(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    ty: CicyType,
    d: usize,
) -> Result<Witness, CoreError> {
    match ty {
        CicyType::Quadrics2222 => {
            let (c, g) = segre_quadric_curve(rng, ctx, d)?;
            let comps = c.components();
            let doubled: Vec<UniPoly> = comps
                .iter()
                .chain(comps.iter())
                .cloned()
                .collect();
            let curve = RationalCurve::new(d, doubled)?;
            let g1 = g.embed_variables(8, &[0, 1, 2, 3]);
            let g2 = g.embed_variables(8, &[4, 5, 2, 3]);
            let g3 = g.embed_variables(8, &[0, 1, 6, 7]);
            let mut g4 = HomForm::zero(ctx, 8, 2);
            g4.add_term(&[0, 0, 0, 0, 0, 0, 2, 0], ctx.one());
            g4.add_term(&[0, 0, 0, 0, 0, 0, 0, 2], ctx.one());
            g4.add_term(&[0, 0, 2, 0, 0, 0, 0, 0], ctx.from_i64(-1));
            g4.add_term(&[0, 0, 0, 2, 0, 0, 0, 0], ctx.from_i64(-1));
            let ci = CompleteIntersection::new(ty, alloc::vec![g1, g2, g3, g4])?;
            finish_pattern(ci, curve, Some(c), None)
        }
        CicyType::Cubic322 => {
            let (c, g) = segre_quadric_curve(rng, ctx, d)?;
            let alpha = rng.homform_dense(ctx, 4, 2, 7);
            let comps = c.components();
            let extended: Vec<UniPoly> = comps
                .iter()
                .chain(comps.iter().take(3))
                .cloned()
                .collect();
            let curve = RationalCurve::new(d, extended)?;
            let ge = g.embed_variables(7, &[0, 1, 2, 3]);
            let ae = alpha.embed_variables(7, &[0, 1, 2, 3]);
            let g1 = var(ctx, 7, 0)
                .mul(&ge)
                .add(&var(ctx, 7, 0).sub(&var(ctx, 7, 4)).mul(&ae));
            let g2 = g.embed_variables(7, &[4, 5, 2, 3]);
            let g3 = g.embed_variables(7, &[4, 5, 6, 3]);
            let ci = CompleteIntersection::new(ty, alloc::vec![g1, g2, g3])?;
            finish_pattern(ci, curve, Some(c), None)
        }
        CicyType::Cubics33 => {
            let (c, g) = segre_quadric_curve(rng, ctx, d)?;
            let alpha = rng.homform_dense(ctx, 4, 2, 7);
            let comps = c.components();
            let extended = alloc::vec![
                comps[0].clone(),
                comps[1].clone(),
                comps[2].clone(),
                comps[3].clone(),
                comps[1].clone(),
                comps[0].clone(),
            ];
            let curve = RationalCurve::new(d, extended)?;
            let ae = alpha.embed_variables(6, &[0, 1, 2, 3]);
            let g1 = var(ctx, 6, 0)
                .mul(&g.embed_variables(6, &[0, 1, 2, 3]))
                .add(&var(ctx, 6, 0).sub(&var(ctx, 6, 5)).mul(&ae));
            let g2 = var(ctx, 6, 0)
                .mul(&g.embed_variables(6, &[5, 4, 2, 3]))
                .add(&var(ctx, 6, 1).sub(&var(ctx, 6, 4)).mul(&ae));
            let ci = CompleteIntersection::new(ty, alloc::vec![g1, g2])?;
            finish_pattern(ci, curve, Some(c), None)
        }
        CicyType::Quartic42 => {
            let (c_s, g, stage_full) = quartic_surface_curve(rng, ctx, d, true)?;
            let curve = c_s.extend_with_zeros(2);
            let mut g1 = g.embed_variables(6, &[0, 1, 2, 3]);
            g1.add_term(&[3, 0, 0, 0, 1, 0], ctx.one()); // + z0^3 z4
            let mut g2 = HomForm::zero(ctx, 6, 2);
            g2.add_term(&[1, 0, 0, 0, 1, 0], ctx.one()); // z0 z4
            g2.add_term(&[0, 1, 0, 0, 0, 1], ctx.one()); // z1 z5
            let ci = CompleteIntersection::new(ty, alloc::vec![g1, g2])?;
            finish_pattern(ci, curve, Some(c_s), Some(stage_full))
        }
        CicyType::Quintic5 => {
            let (c_s, g, stage_full) = quartic_surface_curve(rng, ctx, d, false)?;
            let curve = c_s.extend_with_zeros(1);
            let l = rng.homform_dense(ctx, 5, 1, 7);
            let q = rng.homform_dense(ctx, 5, 4, 7);
            let g1 = l
                .mul(&g.embed_variables(5, &[0, 1, 2, 3]))
                .add(&q.mul(&var(ctx, 5, 4)));
            let ci = CompleteIntersection::new(ty, alloc::vec![g1])?;
            finish_pattern(ci, curve, Some(c_s), Some(stage_full))
        }
    }
}

fn finish_pattern(
    ci: CompleteIntersection,
    curve: RationalCurve,
    base: Option<RationalCurve>,
    stage: Option<bool>,
) -> Result<Witness, CoreError> {
    if !ci.contains_curve(&curve)? {
        return Err(CoreError::InvalidConstruction(
            "pattern witness curve escaped its intersection".into(),
        ));
    }
    Ok(Witness {
        ci,
        curve,
        mode: WitnessMode::Pattern,
        base_curve: base,
        surface_stage_full_rank: stage,
    })
}

/// Entry point: a witness for the family at the given degree, in the given
/// mode, driven entirely by the seeded generator.
pub fn build_witness(
    rng: &mut SeededRng,
    ctx: ScalarCtx,
    ty: CicyType,
    d: usize,
    mode: WitnessMode,
) -> Result<Witness, CoreError> {
    if d < 1 {
        return Err(CoreError::ParameterOutOfRange("curve degree must be positive".into()));
    }
    match mode {
        WitnessMode::Pattern => pattern_witness(rng, ctx, ty, d),
        WitnessMode::Random => {
            let curve = random_curve(rng, ctx, ty.ambient_dim(), d)?;
            let ci = random_ci_through_curve(rng, ty, &curve)?;
            Ok(Witness {
                ci,
                curve,
                mode,
                base_curve: None,
                surface_stage_full_rank: None,
            })
        }
    }
}
