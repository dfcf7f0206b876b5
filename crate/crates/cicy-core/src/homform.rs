//! Sparse homogeneous forms in `n+1` projective variables.
//!
//! Witness hypersurfaces are very sparse (a handful of monomials), while their
//! compositions with a curve are dense univariates — hence a sparse exponent
//! map here and the dense representation in [`crate::unipoly`]. Exponent
//! vectors are stored in a `BTreeMap` so all iteration is deterministic, which
//! keeps every downstream matrix, certificate, and serialized report
//! reproducible run to run.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use smallvec::SmallVec;

use crate::curve::RationalCurve;
use crate::error::CoreError;
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

/// Exponent vector of one monomial; ambient dimension stays at most 8 (P^7).
pub type Exponents = SmallVec<[u8; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomForm {
    ctx: ScalarCtx,
    nvars: usize,
    degree: u32,
    /// Monomial -> coefficient; zero coefficients are never stored.
    terms: BTreeMap<Exponents, Scalar>,
}

impl HomForm {
    pub fn zero(ctx: ScalarCtx, nvars: usize, degree: u32) -> Self {
        HomForm { ctx, nvars, degree, terms: BTreeMap::new() }
    }

    /// Single monomial `coeff * prod z_j^{exps[j]}`; panics unless the
    /// exponents sum to `degree` (homogeneity is a structural invariant).
    pub fn monomial(nvars: usize, degree: u32, exps: &[u8], coeff: Scalar) -> Self {
        let mut f = HomForm::zero(coeff.ctx(), nvars, degree);
        f.add_term(exps, coeff);
        f
    }

    /// The coordinate linear form `z_j`.
    pub fn var(ctx: ScalarCtx, nvars: usize, j: usize) -> Self {
        assert!(j < nvars, "variable index {j} out of range for {nvars} variables");
        let mut exps = alloc::vec![0u8; nvars];
        exps[j] = 1;
        HomForm::monomial(nvars, 1, &exps, ctx.one())
    }

    /// Add `coeff * z^exps` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, exps: &[u8], coeff: Scalar) {
        assert!(exps.len() == self.nvars, "exponent vector length mismatch");
        assert!(coeff.ctx() == self.ctx, "coefficient context mismatch");
        let total: u32 = exps.iter().map(|&e| e as u32).sum();
        assert!(total == self.degree, "monomial degree {total} differs from form degree {}", self.degree);
        if coeff.is_zero() {
            return;
        }
        let key: Exponents = SmallVec::from_slice(exps);
        let updated = match self.terms.remove(&key) {
            None => coeff,
            Some(old) => old.add(&coeff),
        };
        if !updated.is_zero() {
            self.terms.insert(key, updated);
        }
    }

    pub fn ctx(&self) -> ScalarCtx {
        self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Deterministic (lexicographic) iteration over stored terms.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u8]) -> Scalar {
        let key: Exponents = SmallVec::from_slice(exps);
        self.terms.get(&key).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn add(&self, other: &HomForm) -> HomForm {
        assert!(self.compatible(other), "form shape mismatch in add");
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HomForm) -> HomForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HomForm {
        let mut out = HomForm::zero(self.ctx, self.nvars, self.degree);
        for (e, c) in self.terms() {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> HomForm {
        let mut out = HomForm::zero(self.ctx, self.nvars, self.degree);
        if s.is_zero() {
            return out;
        }
        for (e, c) in self.terms() {
            out.terms.insert(e.clone(), c.mul(s));
        }
        out
    }

    /// Product of two forms (degrees add).
    pub fn mul(&self, other: &HomForm) -> HomForm {
        assert!(self.nvars == other.nvars, "variable count mismatch in mul");
        let mut out = HomForm::zero(self.ctx, self.nvars, self.degree + other.degree);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Exponents = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                out.add_term(&exps, ca.mul(cb));
            }
        }
        out
    }

    fn compatible(&self, other: &HomForm) -> bool {
        self.ctx == other.ctx && self.nvars == other.nvars && self.degree == other.degree
    }

    /// Partial derivative with respect to `z_j`, homogeneous of degree h-1.
    pub fn partial_derivative(&self, j: usize) -> Result<HomForm, CoreError> {
        if j >= self.nvars {
            return Err(CoreError::IndexOutOfRange { index: j, len: self.nvars });
        }
        let degree = self.degree.checked_sub(1).unwrap_or(0);
        let mut out = HomForm::zero(self.ctx, self.nvars, degree);
        if self.degree == 0 {
            return Ok(out); // derivative of a constant form
        }
        for (e, c) in self.terms() {
            if e[j] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[j] -= 1;
            out.add_term(&exps, c.mul(&self.ctx.from_i64(e[j] as i64)));
        }
        Ok(out)
    }

    /// Substitute curve components for the variables: `g(c_0(t), ..., c_n(t))`,
    /// a univariate of degree at most `h * d`. Zero exactly when the curve lies
    /// on the hypersurface `g = 0`.
    pub fn compose_with_curve(&self, c: &RationalCurve) -> Result<UniPoly, CoreError> {
        if self.nvars != c.components().len() {
            return Err(CoreError::VariableCountMismatch {
                form_vars: self.nvars,
                curve_components: c.components().len(),
            });
        }
        let mut acc = UniPoly::zero(self.ctx);
        for (e, coeff) in self.terms() {
            let mut term = UniPoly::constant(coeff.clone());
            for (j, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&c.components()[j]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Evaluate at a point of affine (n+1)-space.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar, CoreError> {
        if self.nvars != point.len() {
            return Err(CoreError::VariableCountMismatch {
                form_vars: self.nvars,
                curve_components: point.len(),
            });
        }
        let mut acc = self.ctx.zero();
        for (e, coeff) in self.terms() {
            let mut term = coeff.clone();
            for (j, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&point[j].pow(exp as u64));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitute linear forms for the variables: `g(L_0(z), ..., L_{n-1}(z))`
    /// where row `j` of `sub` lists the coefficients of the form replacing
    /// `z_j`. Used for coordinate rotations of witness quadrics.
    pub fn substitute_linear(&self, sub: &[Vec<Scalar>]) -> HomForm {
        assert!(sub.len() == self.nvars, "substitution row count mismatch");
        let out_vars = sub[0].len();
        let linear: Vec<HomForm> = sub
            .iter()
            .map(|row| {
                assert!(row.len() == out_vars, "ragged substitution");
                let mut l = HomForm::zero(self.ctx, out_vars, 1);
                for (k, c) in row.iter().enumerate() {
                    let mut exps = alloc::vec![0u8; out_vars];
                    exps[k] = 1;
                    l.add_term(&exps, c.clone());
                }
                l
            })
            .collect();
        let mut acc = HomForm::zero(self.ctx, out_vars, self.degree);
        for (e, coeff) in self.terms() {
            let mut term = HomForm::monomial(out_vars, 0, &alloc::vec![0u8; out_vars], coeff.clone());
            for (j, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    term = term.mul(&linear[j]);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Rename variables: variable `j` of `self` becomes variable `mapping[j]`
    /// of a form in `new_nvars` variables. Used to place a P^3 quadric into
    /// higher-dimensional slot patterns.
    pub fn embed_variables(&self, new_nvars: usize, mapping: &[usize]) -> HomForm {
        assert!(mapping.len() == self.nvars, "mapping length mismatch");
        assert!(mapping.iter().all(|&m| m < new_nvars), "mapping target out of range");
        let mut out = HomForm::zero(self.ctx, new_nvars, self.degree);
        for (e, c) in self.terms() {
            let mut exps = alloc::vec![0u8; new_nvars];
            for (j, &exp) in e.iter().enumerate() {
                exps[mapping[j]] += exp;
            }
            out.add_term(&exps, c.clone());
        }
        out
    }
}

/// All exponent vectors of total degree `degree` in `nvars` variables, in
/// lexicographic order. This fixed enumeration is the column convention for
/// every "forms through a curve" linear system.
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    let mut current: Exponents = SmallVec::from_slice(&alloc::vec![0u8; nvars]);
    fill(&mut out, &mut current, 0, degree, nvars);
    fn fill(out: &mut Vec<Exponents>, current: &mut Exponents, pos: usize, remaining: u32, nvars: usize) {
        if pos == nvars - 1 {
            current[pos] = remaining as u8;
            out.push(current.clone());
            current[pos] = 0;
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e as u8;
            fill(out, current, pos + 1, remaining - e, nvars);
            current[pos] = 0;
        }
    }
    out
}

/// Binomial coefficient as usize (small arguments only).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
