//! Splitting behaviour of the restricted tangent bundle along a rational
//! curve, recovered purely from exact dimension counts.
//!
//! Everything here reduces to kernels of explicit integer matrices. A
//! section of the pulled-back tangent bundle (of the ambient space, or of
//! the partial intersection cut out by the first `level` hypersurfaces) is
//! represented through the Euler presentation as an `(n+1)`-tuple of
//! univariate polynomials, modulo multiples of the curve itself. Twisting
//! up raises the tuple degree; twisting down imposes proportionality to the
//! curve at auxiliary points. Left-exactness of global sections makes each
//! count exact — no genericity, no tolerance.
//!
//! From the function `k -> h^0(E(k))` the splitting multiset of `E` on the
//! projective line is uniquely determined; the decoder reconstructs it and
//! refuses to guess when the measured dimensions are inconsistent with a
//! bundle of the expected rank and degree.

use alloc::string::String;
use alloc::vec::Vec;

use crate::ci::CompleteIntersection;
use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::matrix::ExactMatrix;
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

/// One incidence-derivative row for tuples of component degree `deg_bound`:
/// the value of each partial of `form` on the curve at `t`, spread over the
/// power basis `t^0..t^deg_bound` of its coordinate block.
fn euler_row(
    form: &crate::homform::HomForm,
    curve: &RationalCurve,
    t: &Scalar,
    deg_bound: usize,
) -> Result<Vec<Scalar>, CoreError> {
    let point = curve.eval(t);
    let mut row = Vec::with_capacity(curve.len() * (deg_bound + 1));
    for j in 0..curve.len() {
        let pv = form.partial_derivative(j)?.eval(&point)?;
        let mut power = pv.ctx().one();
        for _ in 0..=deg_bound {
            row.push(pv.mul(&power));
            power = power.mul(t);
        }
    }
    Ok(row)
}

/// `h^0` of the twisted pulled-back tangent bundle of the partial
/// intersection cut out by the first `level` hypersurfaces (level 0 is the
/// ambient projective space).
///
/// For `twist >= 0` the sections are tuples of degree `d + twist`
/// annihilated by the derivative rows of each form, modulo the
/// `(twist+1)`-dimensional space of polynomial multiples of the curve. For
/// `twist = -m < 0` they are degree-`d` tuples annihilated by the same rows
/// and proportional to the curve at `m` auxiliary parameters, modulo
/// constant multiples of the curve; proportionality is encoded with one
/// extra unknown per auxiliary point. Both counts are exact.
pub fn twisted_section_dim(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    level: usize,
    twist: i64,
) -> Result<usize, CoreError> {
    let forms = ci.forms();
    if level > forms.len() {
        return Err(CoreError::IndexOutOfRange { index: level, len: forms.len() });
    }
    let ctx = curve.ctx();
    let n1 = curve.len();
    if n1 != ci.ty().ambient_dim() + 1 {
        return Err(CoreError::VariableCountMismatch {
            form_vars: ci.ty().ambient_dim() + 1,
            curve_components: n1,
        });
    }
    if !curve.is_gcd_free() {
        return Err(CoreError::InvalidConstruction(
            "twisted section counts need gcd-free curve components".into(),
        ));
    }
    for (i, form) in forms.iter().take(level).enumerate() {
        if !form.compose_with_curve(curve)?.is_zero() {
            return Err(CoreError::InvalidConstruction(alloc::format!(
                "curve does not lie on hypersurface {i}; its twisted tangent \
                 sections are undefined"
            )));
        }
    }
    let d = curve.degree_bound();
    let degrees = ci.ty().degrees();

    if twist >= 0 {
        let k = twist as usize;
        let deg_bound = d + k;
        let unknowns = n1 * (deg_bound + 1);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (i, form) in forms.iter().take(level).enumerate() {
            // The composed constraint polynomial has degree h_i d + k; that
            // many point evaluations plus one force it to vanish
            // identically. Any distinct parameters do.
            for v in 1..=(degrees[i] * d + k + 1) as i64 {
                rows.push(euler_row(form, curve, &ctx.from_i64(v), deg_bound)?);
            }
        }
        let kernel = if rows.is_empty() {
            unknowns
        } else {
            let m = ExactMatrix::from_rows(ctx, rows)?;
            unknowns - m.rank()
        };
        Ok(kernel - (k + 1))
    } else {
        let m = (-twist) as usize;
        if m > 2 * d + 2 {
            return Err(CoreError::ParameterOutOfRange(alloc::format!(
                "twist {twist} below the search floor -(2d+2) = -{}",
                2 * d + 2
            )));
        }
        let unknowns = n1 * (d + 1) + m;
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (i, form) in forms.iter().take(level).enumerate() {
            for v in 1..=(degrees[i] * d + 1) as i64 {
                let mut row = euler_row(form, curve, &ctx.from_i64(v), d)?;
                row.extend(core::iter::repeat(ctx.zero()).take(m));
                rows.push(row);
            }
        }
        // Auxiliary points on the negative axis, disjoint from the
        // constraint parameters above: at each, the tuple must be a scalar
        // multiple of the curve value, with the scalar an extra unknown.
        for (i, v) in (1..=m as i64).map(|v| -v).enumerate() {
            let p = ctx.from_i64(v);
            let value = curve.eval(&p);
            for (j, cj) in value.iter().enumerate() {
                let mut row = alloc::vec![ctx.zero(); unknowns];
                let mut power = ctx.one();
                for idx in 0..=d {
                    row[j * (d + 1) + idx] = power.clone();
                    power = power.mul(&p);
                }
                row[n1 * (d + 1) + i] = cj.neg();
                rows.push(row);
            }
        }
        let matrix = ExactMatrix::from_rows(ctx, rows)?;
        let kernel = unknowns - matrix.rank();
        if kernel == 0 {
            // The curve multiples alone always solve the system.
            return Err(CoreError::InvalidConstruction(
                "auxiliary-point system lost the tautological solution".into(),
            ));
        }
        Ok(kernel - 1)
    }
}

/// Splitting multiset of a vector bundle on the projective line, parts in
/// weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingType {
    parts: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { parts }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// `h^0` of the twisted bundle, straight from the split form.
    pub fn h0_at_twist(&self, k: i64) -> usize {
        self.parts.iter().map(|&a| (a + k + 1).max(0) as usize).sum()
    }

    /// Globally generated: every part nonnegative.
    pub fn is_free(&self) -> bool {
        self.parts.iter().all(|&a| a >= 0)
    }

    /// No obstruction space: every part at least `-1`.
    pub fn is_unobstructed(&self) -> bool {
        self.parts.iter().all(|&a| a >= -1)
    }
}

impl core::fmt::Display for SplittingType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// Reconstructs the splitting of the pulled-back tangent bundle at the
/// given level from measured twisted-section dimensions.
///
/// Walks the twist upward from the search floor, reading off one part of
/// size `-k` whenever the first difference of `h^0` increments, until the
/// expected rank (ambient dimension minus level) is accounted for. The
/// result must then satisfy the degree constraint `d·(n+1 − Σ h_i)` and
/// reproduce every measured dimension; any violation is reported as
/// [`CoreError::SplittingUndetermined`] rather than patched over.
pub fn splitting_type(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
    level: usize,
) -> Result<SplittingType, CoreError> {
    let forms = ci.forms();
    if level > forms.len() {
        return Err(CoreError::IndexOutOfRange { index: level, len: forms.len() });
    }
    let n = ci.ty().ambient_dim();
    let d = curve.degree_bound() as i64;
    let rank = n - level;
    let used_degree_sum: usize = ci.ty().degrees().iter().take(level).sum();
    let expected_degree = d * ((n + 1) as i64 - used_degree_sum as i64);

    let floor = -(2 * d + 2);
    let cap = 2 * d + 4 + rank as i64 * (2 * d + 2) + expected_degree.abs();

    let mut measured: Vec<(i64, usize)> = Vec::new();
    let h = |k: i64, measured: &mut Vec<(i64, usize)>| -> Result<usize, CoreError> {
        let v = twisted_section_dim(ci, curve, level, k)?;
        measured.push((k, v));
        Ok(v)
    };

    if h(floor, &mut measured)? != 0 {
        return Err(CoreError::SplittingUndetermined(alloc::format!(
            "sections persist at twist {floor}: a part exceeds 2d+1, or the \
             pullback carries torsion"
        )));
    }
    let mut parts: Vec<i64> = Vec::new();
    let mut prev_h = 0usize;
    let mut prev_delta = 0usize;
    let mut k = floor;
    while parts.len() < rank {
        k += 1;
        if k > cap {
            return Err(CoreError::SplittingUndetermined(alloc::format!(
                "only {} of {rank} parts found by twist {cap}",
                parts.len()
            )));
        }
        let hk = h(k, &mut measured)?;
        if hk < prev_h {
            return Err(CoreError::SplittingUndetermined(String::from(
                "twisted dimensions decreased with the twist",
            )));
        }
        let delta = hk - prev_h;
        if delta < prev_delta || delta > rank {
            return Err(CoreError::SplittingUndetermined(alloc::format!(
                "first differences not monotone within rank {rank} at twist {k}"
            )));
        }
        for _ in 0..(delta - prev_delta) {
            parts.push(-k);
        }
        prev_h = hk;
        prev_delta = delta;
    }
    let splitting = SplittingType::new(parts);
    if splitting.degree() != expected_degree {
        return Err(CoreError::SplittingUndetermined(alloc::format!(
            "decoded degree {} where {expected_degree} is forced; the level \
             is likely not transverse along the curve",
            splitting.degree()
        )));
    }
    for &(kk, hv) in &measured {
        if splitting.h0_at_twist(kk) != hv {
            return Err(CoreError::SplittingUndetermined(alloc::format!(
                "reconstruction mismatch at twist {kk}: bundle formula {} vs \
                 measured {hv}",
                splitting.h0_at_twist(kk)
            )));
        }
    }
    Ok(splitting)
}

/// Where and how badly the parametrization fails to be an immersion.
///
/// The derivative drops rank exactly at the common zeros of the 2x2
/// Wronskian minors `c_i c_j' - c_j c_i'`; the affine part of the defect is
/// the degree of their gcd, and the part at the parameter at infinity is
/// the common excess `2e-2 - max deg` in the reversed chart (`e` the true
/// curve degree). Rational zeros of the gcd are split off with their
/// multiplicities; whatever lives in field extensions stays in
/// `unresolved_degree`.
#[derive(Clone, Debug)]
pub struct ImmersionDefect {
    /// Degree of the gcd of all Wronskian minors.
    pub gcd_degree: usize,
    /// Vanishing order shared by all minors in the chart at infinity.
    pub defect_at_infinity: usize,
    /// Total defect; zero iff the parametrization is an immersion.
    pub total: usize,
    /// The minor gcd itself.
    pub gcd: UniPoly,
    /// Rational zeros of the gcd with multiplicities.
    pub support: Vec<(Scalar, usize)>,
    /// Gcd degree not accounted for by rational zeros.
    pub unresolved_degree: usize,
}

impl ImmersionDefect {
    pub fn is_immersion(&self) -> bool {
        self.total == 0
    }
}

/// Divides out all roots `p/q` with small numerator and denominator,
/// returning them with multiplicities. Exact for everything it reports; a
/// nonzero remainder degree means zeros in an extension field (or beyond
/// the scan bound) and is returned alongside.
fn small_rational_roots(poly: &UniPoly) -> (Vec<(Scalar, usize)>, usize) {
    let ctx = poly.ctx();
    let mut rest = poly.clone();
    let mut found: Vec<(Scalar, usize)> = Vec::new();
    'outer: while rest.degree().map_or(false, |deg| deg > 0) {
        for p in -12i64..=12 {
            for q in 1i64..=12 {
                let factor = UniPoly::from_i64(ctx, &[-p, q]);
                let (quot, rem) = rest.divrem(&factor);
                if rem.is_zero() {
                    let root = ctx.from_i64(p).div(&ctx.from_i64(q));
                    let mut mult = 1usize;
                    rest = quot;
                    loop {
                        let (q2, r2) = rest.divrem(&factor);
                        if r2.is_zero() {
                            mult += 1;
                            rest = q2;
                        } else {
                            break;
                        }
                    }
                    found.push((root, mult));
                    continue 'outer;
                }
            }
        }
        break;
    }
    let unresolved = rest.degree().unwrap_or(0);
    (found, unresolved)
}

/// Exact immersion defect of a gcd-free parametrization; see
/// [`ImmersionDefect`].
pub fn immersion_defect(curve: &RationalCurve) -> Result<ImmersionDefect, CoreError> {
    let ctx = curve.ctx();
    let comps = curve.components();
    let derivs = curve.derivative();
    let e = comps
        .iter()
        .filter_map(|c| c.degree())
        .max()
        .ok_or_else(|| CoreError::InvalidConstruction("zero curve".into()))?;
    let mut gcd: Option<UniPoly> = None;
    let mut max_minor_degree: Option<usize> = None;
    for i in 0..comps.len() {
        for j in (i + 1)..comps.len() {
            let w = comps[i].mul(&derivs[j]).sub(&comps[j].mul(&derivs[i]));
            if w.is_zero() {
                continue;
            }
            max_minor_degree =
                Some(max_minor_degree.map_or(w.degree().unwrap(), |m| m.max(w.degree().unwrap())));
            gcd = Some(match gcd {
                None => w,
                Some(g) => g.gcd(&w),
            });
        }
    }
    let gcd = gcd.ok_or_else(|| {
        CoreError::InvalidConstruction(
            "derivative parallel to the curve everywhere: the image is a point".into(),
        )
    })?;
    let gcd_degree = gcd.degree().unwrap_or(0);
    let defect_at_infinity = if e == 0 {
        0
    } else {
        (2 * e - 2) - max_minor_degree.expect("nonzero minor exists")
    };
    let (support, unresolved_degree) = if matches!(ctx, ScalarCtx::Rational) || gcd_degree > 0 {
        small_rational_roots(&gcd)
    } else {
        (Vec::new(), 0)
    };
    Ok(ImmersionDefect {
        gcd_degree,
        defect_at_infinity,
        total: gcd_degree + defect_at_infinity,
        gcd,
        support,
        unresolved_degree,
    })
}

/// Verdict on the normal bundle of an immersed curve inside the full
/// intersection.
#[derive(Clone, Debug)]
pub struct NormalBundleReport {
    /// Splitting of the pulled-back tangent bundle of the threefold.
    pub tangent_splitting: SplittingType,
    /// Splitting of the normal bundle: the tangent splitting with one
    /// degree-2 part (the curve's own tangent) removed.
    pub normal_splitting: SplittingType,
    /// Sum of the normal parts; `-2` is forced by the trivial canonical
    /// class together with the degree-2 tangent part.
    pub degree_sum: i64,
    /// True exactly when the normal splitting is `{-1, -1}` — the rigid,
    /// balanced case.
    pub rigid_pair: bool,
}

/// Splits the curve's tangent line off the restricted tangent bundle.
///
/// Valid only for an immersion whose tangent splitting tops out at 2: the
/// tangent inclusion is then a direct summand (no nonzero maps into lower
/// parts exist, and among equal parts a basis change absorbs it), so the
/// normal bundle is the remaining multiset. Ramified parametrizations and
/// splittings with a part above 2 are reported, not guessed.
pub fn normal_bundle_type(
    ci: &CompleteIntersection,
    curve: &RationalCurve,
) -> Result<NormalBundleReport, CoreError> {
    let defect = immersion_defect(curve)?;
    if !defect.is_immersion() {
        return Err(CoreError::SplittingUndetermined(alloc::format!(
            "parametrization ramifies (defect {}): the normal sheaf is not \
             the naive bundle quotient",
            defect.total
        )));
    }
    let tangent = splitting_type(ci, curve, ci.forms().len())?;
    match tangent.parts().first() {
        Some(&2) => {}
        Some(&top) => {
            return Err(CoreError::SplittingUndetermined(alloc::format!(
                "tangent splitting tops out at {top}, not 2: the tangent \
                 line is not a visible summand"
            )));
        }
        None => {
            return Err(CoreError::SplittingUndetermined(String::from(
                "empty tangent splitting",
            )));
        }
    }
    let mut normal_parts: Vec<i64> = tangent.parts().to_vec();
    normal_parts.remove(0);
    let normal = SplittingType::new(normal_parts);
    let degree_sum = normal.degree();
    if degree_sum != -2 {
        return Err(CoreError::SplittingUndetermined(alloc::format!(
            "normal degree {degree_sum} where -2 is forced by the trivial \
             canonical class"
        )));
    }
    let rigid_pair = normal.parts() == [-1, -1];
    Ok(NormalBundleReport {
        tangent_splitting: tangent,
        normal_splitting: normal,
        degree_sum,
        rigid_pair,
    })
}
