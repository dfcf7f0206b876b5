//! Dense univariate polynomials over an exact field.
//!
//! These are the working objects of the whole pipeline: curve components,
//! composed incidence conditions, scaling polynomials of structured matrix
//! rows. Coefficients are stored in ascending order (index = power of `t`);
//! the representation is kept trimmed, so `degree()` is `None` exactly for
//! the zero polynomial.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{Scalar, ScalarCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    ctx: ScalarCtx,
    /// Ascending coefficients; invariant: last entry (if any) is nonzero.
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero(ctx: ScalarCtx) -> Self {
        UniPoly { ctx, coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let ctx = c.ctx();
        let mut p = UniPoly { ctx, coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn one(ctx: ScalarCtx) -> Self {
        UniPoly::constant(ctx.one())
    }

    /// The monomial `t`.
    pub fn t(ctx: ScalarCtx) -> Self {
        UniPoly::from_coeffs(ctx, vec![ctx.zero(), ctx.one()])
    }

    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(ctx: ScalarCtx, coeffs: Vec<Scalar>) -> Self {
        for c in &coeffs {
            assert!(c.ctx() == ctx, "coefficient context differs from polynomial context");
        }
        let mut p = UniPoly { ctx, coeffs };
        p.trim();
        p
    }

    /// Build from ascending machine-integer coefficients.
    pub fn from_i64(ctx: ScalarCtx, coeffs: &[i64]) -> Self {
        UniPoly::from_coeffs(ctx, coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    /// Monic polynomial with the given roots: `prod (t - r)`.
    pub fn monic_from_roots(ctx: ScalarCtx, roots: &[Scalar]) -> Self {
        let mut acc = UniPoly::one(ctx);
        for r in roots {
            let factor = UniPoly::from_coeffs(ctx, vec![r.neg(), ctx.one()]);
            acc = acc.mul(&factor);
        }
        acc
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> ScalarCtx {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `t^k` (zero of the context if beyond the stored length).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Scalar) -> Scalar {
        // Horner, highest power first.
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        assert!(self.ctx == other.ctx, "polynomial context mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        UniPoly::from_coeffs(self.ctx, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly { ctx: self.ctx, coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        let coeffs = self.coeffs.iter().map(|c| c.mul(s)).collect();
        UniPoly::from_coeffs(self.ctx, coeffs)
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        assert!(self.ctx == other.ctx, "polynomial context mismatch");
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.ctx);
        }
        let mut coeffs = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        UniPoly::from_coeffs(self.ctx, coeffs)
    }

    /// Multiply by `t^k`.
    pub fn shift_up(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { ctx: self.ctx, coeffs }
    }

    pub fn derivative(&self) -> UniPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.mul(&self.ctx.from_i64(k as i64)))
            .collect();
        UniPoly::from_coeffs(self.ctx, coeffs)
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = q * divisor + r` and `deg r < deg divisor`. Panics on zero divisor.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(self.ctx == divisor.ctx, "polynomial context mismatch");
        let ddeg = divisor.degree().expect("division by the zero polynomial");
        let dlead_inv = divisor.leading_coeff().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (UniPoly::zero(self.ctx), self.clone());
        }
        let qlen = rem.len() - ddeg;
        let mut quo = vec![self.ctx.zero(); qlen];
        for k in (0..qlen).rev() {
            let factor = rem[k + ddeg].mul(&dlead_inv);
            if factor.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&factor.mul(dc));
            }
            quo[k] = factor;
        }
        (UniPoly::from_coeffs(self.ctx, quo), UniPoly::from_coeffs(self.ctx, rem))
    }

    /// Monic greatest common divisor via the Euclidean algorithm
    /// (the zero polynomial is absorbing: gcd(p, 0) = monic p).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        match a.leading_coeff() {
            None => a,
            Some(lead) => {
                let li = lead.inv().unwrap();
                a.scale(&li)
            }
        }
    }

    /// Whether gcd with `other` is a nonzero constant.
    pub fn is_coprime_with(&self, other: &UniPoly) -> bool {
        self.gcd(other).degree() == Some(0)
    }

    /// Squarefree test: coprime with its own derivative.
    ///
    /// Over our fields (Q, or F_p with p far above every degree in play) this
    /// is the classical criterion; constants count as squarefree.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None | Some(0) => true,
            Some(_) => self.is_coprime_with(&self.derivative()),
        }
    }
}
