//! The five certified families of threefold-dimensional complete
//! intersections, and the data that ties a concrete intersection to a curve:
//! hypersurface forms and per-form marked points.

use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::homform::HomForm;
use crate::matrix::ExactMatrix;
use crate::rng::SeededRng;
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

/// The five multidegree families. Each is a transverse intersection of
/// hypersurfaces in projective space whose degrees sum to the number of
/// homogeneous coordinates, leaving a threefold with trivial canonical
/// class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CicyType {
    /// Four quadrics in P^7.
    Quadrics2222,
    /// A cubic and two quadrics in P^6.
    Cubic322,
    /// Two cubics in P^5.
    Cubics33,
    /// A quartic and a quadric in P^5.
    Quartic42,
    /// A single quintic in P^4.
    Quintic5,
}

impl CicyType {
    pub const ALL: [CicyType; 5] = [
        CicyType::Quadrics2222,
        CicyType::Cubic322,
        CicyType::Cubics33,
        CicyType::Quartic42,
        CicyType::Quintic5,
    ];

    /// Hypersurface degrees, largest first.
    pub fn degrees(self) -> &'static [usize] {
        match self {
            CicyType::Quadrics2222 => &[2, 2, 2, 2],
            CicyType::Cubic322 => &[3, 2, 2],
            CicyType::Cubics33 => &[3, 3],
            CicyType::Quartic42 => &[4, 2],
            CicyType::Quintic5 => &[5],
        }
    }

    /// Dimension `n` of the ambient projective space.
    pub fn ambient_dim(self) -> usize {
        self.degrees().iter().sum::<usize>() - 1
    }

    /// Number of defining hypersurfaces, always `n - 3`.
    pub fn num_forms(self) -> usize {
        self.degrees().len()
    }

    /// Canonical label, e.g. `"3,2,2"`.
    pub fn label(self) -> String {
        let mut s = String::new();
        for (i, d) in self.degrees().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(itoa_small(*d));
        }
        s
    }

    pub fn parse(label: &str) -> Option<CicyType> {
        let compact: String = label.chars().filter(|c| !c.is_whitespace()).collect();
        CicyType::ALL.iter().copied().find(|t| t.label() == compact)
    }
}

fn itoa_small(v: usize) -> &'static str {
    match v {
        2 => "2",
        3 => "3",
        4 => "4",
        5 => "5",
        _ => unreachable!("degrees are 2..=5"),
    }
}

/// A concrete complete intersection: `n - 3` forms in `n + 1` variables with
/// the right degrees. Construction validates the family invariants so that
/// everything downstream can rely on them.
#[derive(Clone, Debug)]
pub struct CompleteIntersection {
    ty: CicyType,
    forms: Vec<HomForm>,
}

impl CompleteIntersection {
    pub fn new(ty: CicyType, forms: Vec<HomForm>) -> Result<Self, CoreError> {
        let degrees = ty.degrees();
        if forms.len() != degrees.len() {
            return Err(CoreError::InvalidConstruction(alloc::format!(
                "{} forms given, type {} needs {}",
                forms.len(),
                ty.label(),
                degrees.len()
            )));
        }
        let nvars = ty.ambient_dim() + 1;
        for (form, &deg) in forms.iter().zip(degrees) {
            if form.nvars() != nvars {
                return Err(CoreError::VariableCountMismatch {
                    form_vars: form.nvars(),
                    curve_components: nvars,
                });
            }
            if form.degree() as usize != deg {
                return Err(CoreError::InvalidConstruction(alloc::format!(
                    "form degree {} where {} expected",
                    form.degree(),
                    deg
                )));
            }
        }
        Ok(CompleteIntersection { ty, forms })
    }

    pub fn ty(&self) -> CicyType {
        self.ty
    }

    pub fn forms(&self) -> &[HomForm] {
        &self.forms
    }

    pub fn ctx(&self) -> ScalarCtx {
        self.forms[0].ctx()
    }

    /// Does the curve lie on every hypersurface? Exact: the composed
    /// univariate polynomial must vanish identically, not just at samples.
    pub fn contains_curve(&self, curve: &RationalCurve) -> Result<bool, CoreError> {
        for form in &self.forms {
            if !form.compose_with_curve(curve)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Transversality of the intersection along the curve: at each sample
    /// parameter the matrix of first partials of the forms, evaluated on the
    /// curve, must reach full row rank. A failure means the intersection is
    /// singular somewhere along the curve (special-pattern intersections
    /// routinely are; the verdict is data, not an error).
    pub fn smooth_along_curve(
        &self,
        curve: &RationalCurve,
        sample_params: &[Scalar],
    ) -> Result<bool, CoreError> {
        let ctx = self.ctx();
        let n1 = self.ty.ambient_dim() + 1;
        for t in sample_params {
            let point: Vec<Scalar> = (0..curve.len())
                .map(|j| curve.components()[j].eval(t))
                .collect();
            let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.forms.len());
            for form in &self.forms {
                let mut row = Vec::with_capacity(n1);
                for j in 0..n1 {
                    row.push(form.partial_derivative(j)?.eval(&point)?);
                }
                rows.push(row);
            }
            let m = ExactMatrix::from_rows(ctx, rows)?;
            if m.rank() < self.forms.len() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact transversality along the whole curve, closure points included:
    /// delegates to [`forms_transverse_along_curve`] with every form.
    pub fn transverse_along_curve(&self, curve: &RationalCurve) -> Result<bool, CoreError> {
        forms_transverse_along_curve(&self.forms, curve)
    }
}

/// Determinant of a square matrix of univariate polynomials by cofactor
/// expansion. Sizes here are at most the number of hypersurfaces (≤ 4), so
/// the factorial cost is irrelevant.
fn poly_det(m: &[Vec<UniPoly>], ctx: ScalarCtx) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(ctx);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = UniPoly::zero(ctx);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<UniPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let cofactor = entry.mul(&poly_det(&minor, ctx));
        acc = if j % 2 == 0 { acc.add(&cofactor) } else { acc.sub(&cofactor) };
    }
    acc
}

/// Exact transversality of `forms` along the whole curve. The partials of
/// each form composed with the curve fill an `s x (n+1)` matrix of
/// univariate polynomials; the rank is full at every parameter — every
/// point of the algebraic closure, not just samples — iff the maximal
/// minors have a constant nonzero gcd. The point at infinity is handled in
/// the reversed chart, where the curve value is its top-coefficient vector.
pub fn forms_transverse_along_curve(
    forms: &[HomForm],
    curve: &RationalCurve,
) -> Result<bool, CoreError> {
    let s = forms.len();
    if s == 0 {
        return Ok(true);
    }
    let ctx = curve.ctx();
    let n1 = curve.len();
    if s > n1 {
        return Err(CoreError::DimensionMismatch(
            "more forms than ambient coordinates".into(),
        ));
    }
    let mut partials: Vec<Vec<UniPoly>> = Vec::with_capacity(s);
    for form in forms {
        let mut row = Vec::with_capacity(n1);
        for j in 0..n1 {
            row.push(form.partial_derivative(j)?.compose_with_curve(curve)?);
        }
        partials.push(row);
    }

    // Gcd over all maximal minors; early exit once it reaches a constant.
    let mut g: Option<UniPoly> = None;
    let mut cols = alloc::vec![0usize; s];
    for (i, c) in cols.iter_mut().enumerate() {
        *c = i;
    }
    loop {
        let minor: Vec<Vec<UniPoly>> = partials
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let det = poly_det(&minor, ctx);
        if !det.is_zero() {
            let next = match &g {
                None => det,
                Some(prev) => prev.gcd(&det),
            };
            let constant = next.degree() == Some(0);
            g = Some(next);
            if constant {
                break;
            }
        }
        // Advance the column combination lexicographically.
        let mut i = s;
        loop {
            if i == 0 {
                cols.clear();
                break;
            }
            i -= 1;
            if cols[i] < n1 - (s - i) {
                cols[i] += 1;
                for j in i + 1..s {
                    cols[j] = cols[j - 1] + 1;
                }
                break;
            }
        }
        if cols.is_empty() {
            break;
        }
    }
    match g {
        None => return Ok(false), // every maximal minor vanishes identically
        Some(p) if p.degree() != Some(0) => return Ok(false),
        Some(_) => {}
    }

    // Rank at the parameter at infinity: evaluate the partials at the
    // top-coefficient vector of the curve, taken at its true degree.
    let e = curve
        .components()
        .iter()
        .filter_map(|c| c.degree())
        .max()
        .ok_or_else(|| CoreError::InvalidConstruction("zero curve".into()))?;
    let at_infinity: Vec<Scalar> =
        curve.components().iter().map(|c| c.coeff(e)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(s);
    for form in forms {
        let mut row = Vec::with_capacity(n1);
        for j in 0..n1 {
            row.push(form.partial_derivative(j)?.eval(&at_infinity)?);
        }
        rows.push(row);
    }
    Ok(ExactMatrix::from_rows(ctx, rows)?.rank() == s)
}

/// How marked points are drawn across forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointSharing {
    /// Every form gets its own independent group (the default).
    Independent,
    /// Forms that the family's gluing pattern pairs up reuse one group.
    /// Only forms with equal group sizes can share; for the two-cubic
    /// family both forms share, for the cubic-and-two-quadrics family the
    /// two quadrics share.
    Glued,
}

/// One group of marked parameters per hypersurface. Group `i` has
/// `degrees[i] * d + 1` pairwise distinct nonzero values; distinctness
/// across groups is deliberately not required.
#[derive(Clone, Debug)]
pub struct MarkedPointSet {
    groups: Vec<Vec<Scalar>>,
}

impl MarkedPointSet {
    pub fn new(ty: CicyType, d: usize, groups: Vec<Vec<Scalar>>) -> Result<Self, CoreError> {
        let degrees = ty.degrees();
        if groups.len() != degrees.len() {
            return Err(CoreError::DimensionMismatch(
                "one point group per hypersurface".into(),
            ));
        }
        for (group, &h) in groups.iter().zip(degrees) {
            if group.len() != h * d + 1 {
                return Err(CoreError::DimensionMismatch(alloc::format!(
                    "group of {} points where {} expected",
                    group.len(),
                    h * d + 1
                )));
            }
            for (i, p) in group.iter().enumerate() {
                if group[..i].contains(p) {
                    return Err(CoreError::RepeatedPoints);
                }
            }
        }
        Ok(MarkedPointSet { groups })
    }

    /// Draw groups for the given family and degree.
    pub fn draw(
        rng: &mut SeededRng,
        ctx: ScalarCtx,
        ty: CicyType,
        d: usize,
        sharing: PointSharing,
    ) -> MarkedPointSet {
        let degrees = ty.degrees();
        let mut groups: Vec<Vec<Scalar>> = degrees
            .iter()
            .map(|&h| rng.distinct_points(ctx, h * d + 1))
            .collect();
        if sharing == PointSharing::Glued {
            for (a, b) in ty_glued_pairs(ty) {
                groups[b] = groups[a].clone();
            }
        }
        MarkedPointSet { groups }
    }

    pub fn groups(&self) -> &[Vec<Scalar>] {
        &self.groups
    }

    pub fn group(&self, i: usize) -> &[Scalar] {
        &self.groups[i]
    }
}

/// Which form pairs reuse one point group in glued mode: the pairs whose
/// blocks must literally coincide for the grid-gluing hypotheses to hold.
fn ty_glued_pairs(ty: CicyType) -> Vec<(usize, usize)> {
    match ty {
        CicyType::Cubics33 => alloc::vec![(0, 1)],
        CicyType::Cubic322 => alloc::vec![(1, 2)],
        _ => Vec::new(),
    }
}
