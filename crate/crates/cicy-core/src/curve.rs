//! Rational curves: tuples of bounded-degree univariate polynomials.
//!
//! A degree-`d` rational curve in P^n is a point of the parameter space
//! `(H^0(O_{P^1}(d)))^{n+1}`, i.e. `n+1` polynomials of degree at most `d`,
//! not all zero. The coefficient coordinates of this space are exactly the
//! columns of the incidence Jacobian: component `j`, power `k` maps to column
//! `j*(d+1) + k`. Curves with a common component factor are excluded by the
//! well-formedness check `is_gcd_free` wherever a base-point-free
//! parametrization is required.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::CoreError;
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve {
    /// Degree bound d (components may have smaller degree).
    degree_bound: usize,
    components: Vec<UniPoly>,
}

impl RationalCurve {
    /// Build from components, checking the degree bound and that the curve is
    /// not identically zero.
    pub fn new(degree_bound: usize, components: Vec<UniPoly>) -> Result<Self, CoreError> {
        if components.is_empty() {
            return Err(CoreError::InvalidConstruction("curve needs at least one component".to_string()));
        }
        if components.iter().all(UniPoly::is_zero) {
            return Err(CoreError::InvalidConstruction("all curve components are zero".to_string()));
        }
        for (j, comp) in components.iter().enumerate() {
            if let Some(deg) = comp.degree() {
                if deg > degree_bound {
                    return Err(CoreError::InvalidConstruction(alloc::format!(
                        "component {j} has degree {deg} above the bound {degree_bound}"
                    )));
                }
            }
        }
        Ok(RationalCurve { degree_bound, components })
    }

    pub fn ctx(&self) -> ScalarCtx {
        self.components[0].ctx()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn components(&self) -> &[UniPoly] {
        &self.components
    }

    /// Number of components, i.e. n+1 for a curve in P^n.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a constructed curve always has components
    }

    /// Componentwise derivative (degree bound drops by one, kept as d for
    /// coefficient-space alignment).
    pub fn derivative(&self) -> Vec<UniPoly> {
        self.components.iter().map(UniPoly::derivative).collect()
    }

    /// Evaluate all components at a parameter value.
    pub fn eval(&self, t: &Scalar) -> Vec<Scalar> {
        self.components.iter().map(|c| c.eval(t)).collect()
    }

    /// Monic gcd of all components.
    pub fn component_gcd(&self) -> UniPoly {
        let mut acc = UniPoly::zero(self.ctx());
        for c in &self.components {
            acc = acc.gcd(c);
            if acc.degree() == Some(0) {
                break;
            }
        }
        acc
    }

    /// True when the components share no nonconstant factor, so the
    /// parametrization has no base point after clearing denominators.
    pub fn is_gcd_free(&self) -> bool {
        self.component_gcd().degree() == Some(0)
    }

    /// The curve with only the listed components kept, in order. Used to
    /// restrict an extended witness curve back to its P^3 core.
    pub fn select_components(&self, indices: &[usize]) -> Result<RationalCurve, CoreError> {
        let mut comps = Vec::with_capacity(indices.len());
        for &i in indices {
            let c = self
                .components
                .get(i)
                .ok_or(CoreError::IndexOutOfRange { index: i, len: self.components.len() })?;
            comps.push(c.clone());
        }
        RationalCurve::new(self.degree_bound, comps)
    }

    /// Extend with extra zero components (embedding P^n into a larger P^m
    /// as a coordinate subspace).
    pub fn extend_with_zeros(&self, extra: usize) -> RationalCurve {
        let mut comps = self.components.clone();
        comps.extend((0..extra).map(|_| UniPoly::zero(self.ctx())));
        RationalCurve { degree_bound: self.degree_bound, components: comps }
    }

    /// Apply an invertible linear change of coordinates: row `j` of `m` gives
    /// the coefficients of the new component `j` as a combination of the old.
    pub fn linear_transform(&self, m: &[Vec<Scalar>]) -> Result<RationalCurve, CoreError> {
        if m.iter().any(|row| row.len() != self.components.len()) {
            return Err(CoreError::DimensionMismatch("transform width differs from component count".to_string()));
        }
        let ctx = self.ctx();
        let comps: Vec<UniPoly> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(self.components.iter())
                    .fold(UniPoly::zero(ctx), |acc, (a, c)| acc.add(&c.scale(a)))
            })
            .collect();
        RationalCurve::new(self.degree_bound, comps)
    }

    /// Coefficient vector in the moduli coordinates: length `(n+1)(d+1)`,
    /// entry `j*(d+1) + k` = coefficient of `t^k` in component `j`.
    pub fn coefficient_vector(&self) -> Vec<Scalar> {
        let d = self.degree_bound;
        let mut out = Vec::with_capacity(self.components.len() * (d + 1));
        for c in &self.components {
            for k in 0..=d {
                out.push(c.coeff(k));
            }
        }
        out
    }

    /// Inverse of [`RationalCurve::coefficient_vector`].
    pub fn from_coefficient_vector(
        ctx: ScalarCtx,
        n_plus_1: usize,
        degree_bound: usize,
        coeffs: &[Scalar],
    ) -> Result<RationalCurve, CoreError> {
        if coeffs.len() != n_plus_1 * (degree_bound + 1) {
            return Err(CoreError::DimensionMismatch(alloc::format!(
                "coefficient vector length {} != {}*{}",
                coeffs.len(),
                n_plus_1,
                degree_bound + 1
            )));
        }
        let comps = coeffs
            .chunks(degree_bound + 1)
            .map(|chunk| UniPoly::from_coeffs(ctx, chunk.to_vec()))
            .collect();
        RationalCurve::new(degree_bound, comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> ScalarCtx {
        ScalarCtx::Rational
    }

    fn curve(d: usize, comps: &[&[i64]]) -> RationalCurve {
        RationalCurve::new(d, comps.iter().map(|c| UniPoly::from_i64(q(), c)).collect()).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(RationalCurve::new(1, alloc::vec![UniPoly::zero(q()), UniPoly::zero(q())]).is_err());
        // degree above bound rejected
        assert!(RationalCurve::new(1, alloc::vec![UniPoly::from_i64(q(), &[0, 0, 1])]).is_err());
        // zero components allowed as long as one is nonzero
        let c = curve(2, &[&[0], &[1, 0, 3]]);
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn gcd_freeness() {
        // [t, t^2] share t; [1, t] share nothing.
        assert!(!curve(2, &[&[0, 1], &[0, 0, 1]]).is_gcd_free());
        assert!(curve(1, &[&[1], &[0, 1]]).is_gcd_free());
        // zero components do not spoil the gcd of the rest
        assert!(curve(1, &[&[0], &[1], &[0, 1]]).is_gcd_free());
    }

    #[test]
    fn coefficient_vector_round_trip() {
        let c = curve(2, &[&[1, 2, 3], &[0, -1], &[5]]);
        let v = c.coefficient_vector();
        assert_eq!(v.len(), 9);
        // component 1, power 1 sits at column 1*(d+1)+1 = 4
        assert_eq!(v[4], q().from_i64(-1));
        let back = RationalCurve::from_coefficient_vector(q(), 3, 2, &v).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn selection_and_extension() {
        let c = curve(1, &[&[1], &[0, 1], &[2], &[3, 3]]);
        let first_two = c.select_components(&[0, 1]).unwrap();
        assert_eq!(first_two.len(), 2);
        let ext = first_two.extend_with_zeros(2);
        assert_eq!(ext.len(), 4);
        assert!(ext.components()[3].is_zero());
    }

    #[test]
    fn linear_transform_mixes_components() {
        let c = curve(1, &[&[1, 0], &[0, 1]]);
        // new_0 = old_0 + old_1, new_1 = old_1
        let m = alloc::vec![
            alloc::vec![q().one(), q().one()],
            alloc::vec![q().zero(), q().one()],
        ];
        let t = c.linear_transform(&m).unwrap();
        assert_eq!(t.components()[0], UniPoly::from_i64(q(), &[1, 1]));
        assert_eq!(t.components()[1], UniPoly::from_i64(q(), &[0, 1]));
    }

    #[test]
    fn eval_and_derivative() {
        let c = curve(2, &[&[1, 1], &[0, 0, 2]]);
        let vals = c.eval(&q().from_i64(3));
        assert_eq!(vals, alloc::vec![q().from_i64(4), q().from_i64(18)]);
        let d = c.derivative();
        assert_eq!(d[0], UniPoly::one(q()));
        assert_eq!(d[1], UniPoly::from_i64(q(), &[0, 4]));
    }
}
