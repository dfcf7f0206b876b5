//! Seeded, reproducible randomness for witnesses, marked points, and fuzzing.
//!
//! Genericity hypotheses ("generic points", "generic quadric with respect to
//! g") are realized as uniform draws from a ChaCha20 stream: the conditions
//! are Zariski-open, so random choices over a huge field succeed with
//! overwhelming probability, and any failure is handled by counted
//! resampling. Every certificate records the seed, making each run exactly
//! replayable; all draw helpers consume the stream in a deterministic order.

use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::CoreError;
use crate::homform::{monomial_basis, HomForm};
use crate::scalar::{Scalar, ScalarCtx};
use crate::unipoly::UniPoly;

/// Default number of redraws before a generic-position search gives up.
pub const DEFAULT_RESAMPLE_BUDGET: u32 = 64;

pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { seed, inner: ChaCha20Rng::seed_from_u64(seed) }
    }

    /// The seed this stream started from (recorded in certificates).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// An independent child stream; used so sibling computations cannot
    /// perturb each other's draws.
    pub fn fork(&mut self) -> SeededRng {
        SeededRng::new(self.inner.next_u64())
    }

    /// Uniform draw in `[0, bound)` by rejection (no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty draw range");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.inner.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform integer in the inclusive range `[lo, hi]`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty integer range");
        let width = (hi - lo) as u64 + 1;
        lo + self.below(width) as i64
    }

    /// Nonzero integer in `[-bound, bound]`.
    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        assert!(bound >= 1);
        loop {
            let v = self.int_in(-bound, bound);
            if v != 0 {
                return v;
            }
        }
    }

    /// Small nonzero field element (integer image in `[-bound, bound]`).
    pub fn nonzero_scalar(&mut self, ctx: ScalarCtx, bound: i64) -> Scalar {
        ctx.from_i64(self.nonzero_int(bound))
    }

    /// `count` pairwise-distinct nonzero field elements drawn from a small
    /// positive integer window. Distinctness over the integers implies
    /// distinctness in F_p because the window is far below every modulus.
    pub fn distinct_points(&mut self, ctx: ScalarCtx, count: usize) -> Vec<Scalar> {
        let window = (4 * count as i64).max(64);
        let mut chosen: Vec<i64> = Vec::with_capacity(count);
        while chosen.len() < count {
            let v = self.int_in(1, window);
            if !chosen.contains(&v) {
                chosen.push(v);
            }
        }
        chosen.into_iter().map(|v| ctx.from_i64(v)).collect()
    }

    /// Like [`SeededRng::distinct_points`], but also avoiding the given values.
    pub fn distinct_points_avoiding(
        &mut self,
        ctx: ScalarCtx,
        count: usize,
        avoid: &[Scalar],
    ) -> Vec<Scalar> {
        let window = (4 * (count + avoid.len()) as i64).max(64);
        let mut chosen: Vec<Scalar> = Vec::with_capacity(count);
        while chosen.len() < count {
            let v = ctx.from_i64(self.int_in(1, window));
            if !chosen.contains(&v) && !avoid.contains(&v) {
                chosen.push(v);
            }
        }
        chosen
    }

    /// Polynomial of degree exactly `deg` with small integer coefficients.
    pub fn poly_exact_degree(&mut self, ctx: ScalarCtx, deg: usize, bound: i64) -> UniPoly {
        let mut coeffs: Vec<Scalar> = (0..deg).map(|_| ctx.from_i64(self.int_in(-bound, bound))).collect();
        coeffs.push(self.nonzero_scalar(ctx, bound)); // leading coefficient nonzero
        UniPoly::from_coeffs(ctx, coeffs)
    }

    /// Polynomial of degree at most `deg`.
    pub fn poly_up_to_degree(&mut self, ctx: ScalarCtx, deg: usize, bound: i64) -> UniPoly {
        let coeffs: Vec<Scalar> = (0..=deg).map(|_| ctx.from_i64(self.int_in(-bound, bound))).collect();
        UniPoly::from_coeffs(ctx, coeffs)
    }

    /// Monic squarefree polynomial with `deg` distinct nonzero roots,
    /// returned together with its roots.
    pub fn squarefree_from_roots(&mut self, ctx: ScalarCtx, deg: usize) -> (UniPoly, Vec<Scalar>) {
        let roots = self.distinct_points(ctx, deg);
        (UniPoly::monic_from_roots(ctx, &roots), roots)
    }

    /// A coprime pair of polynomials of degrees exactly `deg_a`, `deg_b`.
    pub fn coprime_pair(
        &mut self,
        ctx: ScalarCtx,
        deg_a: usize,
        deg_b: usize,
        bound: i64,
    ) -> Result<(UniPoly, UniPoly), CoreError> {
        for _ in 0..DEFAULT_RESAMPLE_BUDGET {
            let a = self.poly_exact_degree(ctx, deg_a, bound);
            let b = self.poly_exact_degree(ctx, deg_b, bound);
            if a.is_coprime_with(&b) {
                return Ok((a, b));
            }
        }
        Err(CoreError::ResamplingExhausted {
            what: String::from("coprime polynomial pair"),
            seed: self.seed,
            budget: DEFAULT_RESAMPLE_BUDGET,
        })
    }

    /// Dense random homogeneous form: every monomial of the given degree gets
    /// a coefficient in `[-bound, bound]` (possibly zero).
    pub fn homform_dense(&mut self, ctx: ScalarCtx, nvars: usize, degree: u32, bound: i64) -> HomForm {
        let mut f = HomForm::zero(ctx, nvars, degree);
        for exps in monomial_basis(nvars, degree) {
            let c = ctx.from_i64(self.int_in(-bound, bound));
            f.add_term(&exps, c);
        }
        f
    }

    /// Dense random matrix with entries in `[-bound, bound]`.
    pub fn matrix(
        &mut self,
        ctx: ScalarCtx,
        rows: usize,
        cols: usize,
        bound: i64,
    ) -> crate::matrix::ExactMatrix {
        let entries: Vec<Vec<Scalar>> = (0..rows)
            .map(|_| (0..cols).map(|_| ctx.from_i64(self.int_in(-bound, bound))).collect())
            .collect();
        crate::matrix::ExactMatrix::from_rows(ctx, entries)
            .expect("rectangular by construction")
    }

    /// Random invertible square matrix with small integer entries.
    pub fn invertible_square(
        &mut self,
        ctx: ScalarCtx,
        n: usize,
    ) -> Result<crate::matrix::ExactMatrix, CoreError> {
        let rows = self.invertible_matrix(ctx, n, 9)?;
        Ok(crate::matrix::ExactMatrix::from_rows(ctx, rows).expect("rectangular"))
    }

    /// Random invertible (n x n) matrix with small integer entries, returned
    /// as rows of scalars (resampled until the determinant is nonzero).
    pub fn invertible_matrix(
        &mut self,
        ctx: ScalarCtx,
        n: usize,
        bound: i64,
    ) -> Result<Vec<Vec<Scalar>>, CoreError> {
        use crate::matrix::ExactMatrix;
        for _ in 0..DEFAULT_RESAMPLE_BUDGET {
            let rows: Vec<Vec<Scalar>> = (0..n)
                .map(|_| (0..n).map(|_| ctx.from_i64(self.int_in(-bound, bound))).collect())
                .collect();
            let m = ExactMatrix::from_rows(ctx, rows.clone()).expect("rectangular by construction");
            if !m.det().expect("square").is_zero() {
                return Ok(rows);
            }
        }
        Err(CoreError::ResamplingExhausted {
            what: String::from("invertible coordinate change"),
            seed: self.seed,
            budget: DEFAULT_RESAMPLE_BUDGET,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = SeededRng::new(42);
        let mut b = SeededRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.int_in(-1000, 1000), b.int_in(-1000, 1000));
        }
        let mut c = SeededRng::new(43);
        let first_hundred: Vec<i64> = (0..100).map(|_| a.int_in(-1000, 1000)).collect();
        let other: Vec<i64> = (0..100).map(|_| c.int_in(-1000, 1000)).collect();
        assert_ne!(first_hundred, other);
    }

    #[test]
    fn draws_respect_their_contracts() {
        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(7);
        for _ in 0..20 {
            let v = rng.int_in(-5, 5);
            assert!((-5..=5).contains(&v));
            assert_ne!(rng.nonzero_int(3), 0);
        }
        let pts = rng.distinct_points(ctx, 12);
        for (i, p) in pts.iter().enumerate() {
            assert!(!p.is_zero());
            for q in &pts[..i] {
                assert_ne!(p, q);
            }
        }
        let avoid = pts.clone();
        let more = rng.distinct_points_avoiding(ctx, 8, &avoid);
        for m in &more {
            assert!(!avoid.contains(m));
        }
    }

    #[test]
    fn exact_degree_and_coprimality() {
        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(11);
        for deg in 1..5 {
            assert_eq!(rng.poly_exact_degree(ctx, deg, 9).degree(), Some(deg));
        }
        let (a, b) = rng.coprime_pair(ctx, 3, 2, 9).unwrap();
        assert!(a.is_coprime_with(&b));
        let (sf, roots) = rng.squarefree_from_roots(ctx, 4);
        assert!(sf.is_squarefree());
        for r in &roots {
            assert!(sf.eval(r).is_zero());
            assert!(!r.is_zero());
        }
    }

    #[test]
    fn invertible_matrix_is_invertible() {
        use crate::matrix::ExactMatrix;
        let ctx = ScalarCtx::Rational;
        let mut rng = SeededRng::new(5);
        let rows = rng.invertible_matrix(ctx, 4, 9).unwrap();
        let m = ExactMatrix::from_rows(ctx, rows).unwrap();
        assert!(!m.det().unwrap().is_zero());
    }

    #[test]
    fn forks_are_independent_of_later_parent_use() {
        let mut a = SeededRng::new(99);
        let mut fork_then_draw = a.fork();
        let seq1: Vec<i64> = (0..10).map(|_| fork_then_draw.int_in(0, 1000)).collect();

        let mut b = SeededRng::new(99);
        let mut fork = b.fork();
        let _ = b.int_in(0, 1000); // parent keeps drawing
        let seq2: Vec<i64> = (0..10).map(|_| fork.int_in(0, 1000)).collect();
        assert_eq!(seq1, seq2);
    }
}
