//! Fixed-point big-number arithmetic for the one corner of the engine that
//! cannot stay exact: Newton correction toward generic coefficient values.
//!
//! A [`BigFloat`] is an integer mantissa scaled by a fixed power of two,
//! `value = mantissa / 2^precision`. Addition and subtraction are exact;
//! products and quotients truncate to the shared precision. Every operation
//! is deterministic — no hidden state, no platform-dependent rounding — so
//! iteration traces reproduce bit for bit across runs and machines.
//!
//! The precision is a property of each value and mixing precisions is a
//! programming error (panic), mirroring how the exact layer treats mixed
//! scalar contexts.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::CoreError;

/// Default mantissa precision (fraction bits) for continuation runs.
pub const DEFAULT_PRECISION: u32 = 128;

/// Fixed-point number: `mantissa / 2^precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    precision: u32,
}

impl BigFloat {
    pub fn zero(precision: u32) -> Self {
        BigFloat { mantissa: BigInt::zero(), precision }
    }

    pub fn from_i64(v: i64, precision: u32) -> Self {
        BigFloat { mantissa: BigInt::from(v) << precision, precision }
    }

    /// Truncating conversion; exact whenever the denominator is a power of
    /// two dividing `2^precision`.
    pub fn from_rational(r: &BigRational, precision: u32) -> Self {
        BigFloat { mantissa: (r.numer() << precision) / r.denom(), precision }
    }

    /// `2^exponent` at the given precision (zero if it underflows).
    pub fn pow2(exponent: i64, precision: u32) -> Self {
        let shift = exponent + precision as i64;
        if shift < 0 {
            return Self::zero(precision);
        }
        BigFloat { mantissa: BigInt::from(1) << (shift as u64), precision }
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    fn check(&self, other: &BigFloat) {
        assert_eq!(
            self.precision, other.precision,
            "mixed fixed-point precisions"
        );
    }

    pub fn add(&self, other: &BigFloat) -> BigFloat {
        self.check(other);
        BigFloat { mantissa: &self.mantissa + &other.mantissa, precision: self.precision }
    }

    pub fn sub(&self, other: &BigFloat) -> BigFloat {
        self.check(other);
        BigFloat { mantissa: &self.mantissa - &other.mantissa, precision: self.precision }
    }

    pub fn neg(&self) -> BigFloat {
        BigFloat { mantissa: -&self.mantissa, precision: self.precision }
    }

    pub fn mul(&self, other: &BigFloat) -> BigFloat {
        self.check(other);
        BigFloat {
            mantissa: (&self.mantissa * &other.mantissa) >> self.precision,
            precision: self.precision,
        }
    }

    /// Truncating division; panics on division by exact zero (callers
    /// guard pivots before dividing).
    pub fn div(&self, other: &BigFloat) -> BigFloat {
        self.check(other);
        assert!(!other.mantissa.is_zero(), "fixed-point division by zero");
        BigFloat {
            mantissa: (&self.mantissa << self.precision) / &other.mantissa,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> BigFloat {
        BigFloat { mantissa: self.mantissa.abs(), precision: self.precision }
    }

    pub fn cmp_abs(&self, other: &BigFloat) -> core::cmp::Ordering {
        self.check(other);
        self.mantissa.abs().cmp(&other.mantissa.abs())
    }

    pub fn lt(&self, other: &BigFloat) -> bool {
        self.check(other);
        self.mantissa < other.mantissa
    }

    /// Lossy view for human-facing logs; never used in decisions.
    pub fn to_f64(&self) -> f64 {
        let mut v = match self.mantissa.to_f64() {
            Some(m) => m,
            None => return f64::NAN,
        };
        let mut p = self.precision;
        while p >= 32 {
            v /= 4294967296.0;
            p -= 32;
        }
        v / (1u64 << p) as f64
    }

    /// Deterministic decimal rendering with the given number of fractional
    /// digits, truncated toward zero.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let negative = self.mantissa.is_negative();
        let scaled: BigInt =
            (self.mantissa.abs() * BigInt::from(10u32).pow(digits)) >> self.precision;
        let s = scaled.to_string();
        let (int_part, frac_part) = if s.len() > digits as usize {
            let split = s.len() - digits as usize;
            (String::from(&s[..split]), String::from(&s[split..]))
        } else {
            let mut frac = String::new();
            for _ in 0..(digits as usize - s.len()) {
                frac.push('0');
            }
            frac += &s;
            (String::from("0"), frac)
        };
        let sign = if negative && (int_part != "0" || frac_part.bytes().any(|b| b != b'0')) {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            alloc::format!("{sign}{int_part}")
        } else {
            alloc::format!("{sign}{int_part}.{frac_part}")
        }
    }
}

/// Solves the square system `m x = rhs` by Gaussian elimination with
/// partial pivoting (largest magnitude). Returns the solution together
/// with the smallest pivot magnitude met along the way — the caller's
/// evidence for how far from singular the matrix was. A pivot at or below
/// `pivot_floor` aborts with the offending column reported.
pub fn solve_square(
    m: &[Vec<BigFloat>],
    rhs: &[BigFloat],
    pivot_floor: &BigFloat,
) -> Result<(Vec<BigFloat>, BigFloat), CoreError> {
    let n = m.len();
    if n == 0 || rhs.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(CoreError::DimensionMismatch(
            "square system solve needs an n x n matrix and an n-vector".into(),
        ));
    }
    let precision = rhs[0].precision();
    let mut a: Vec<Vec<BigFloat>> = m.to_vec();
    let mut b: Vec<BigFloat> = rhs.to_vec();
    let mut min_pivot: Option<BigFloat> = None;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| a[r1][col].cmp_abs(&a[r2][col]))
            .expect("nonempty range");
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col][col].clone();
        if pivot.abs().cmp_abs(pivot_floor) != core::cmp::Ordering::Greater {
            return Err(CoreError::InvalidConstruction(alloc::format!(
                "numerically singular system: pivot magnitude {} in column {col} \
                 at or below the floor {}",
                pivot.abs().to_decimal_string(24),
                pivot_floor.to_decimal_string(24)
            )));
        }
        min_pivot = Some(match min_pivot {
            None => pivot.abs(),
            Some(p) => {
                if pivot.abs().cmp_abs(&p) == core::cmp::Ordering::Less {
                    pivot.abs()
                } else {
                    p
                }
            }
        });
        for row in (col + 1)..n {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].div(&pivot);
            for k in col..n {
                let t = factor.mul(&a[col][k]);
                a[row][k] = a[row][k].sub(&t);
            }
            let t = factor.mul(&b[col]);
            b[row] = b[row].sub(&t);
        }
    }
    let mut x = alloc::vec![BigFloat::zero(precision); n];
    for col in (0..n).rev() {
        let mut acc = b[col].clone();
        for k in (col + 1)..n {
            let t = a[col][k].mul(&x[k]);
            acc = acc.sub(&t);
        }
        x[col] = acc.div(&a[col][col]);
    }
    Ok((x, min_pivot.expect("n >= 1")))
}

/// Numerical row-rank evidence for a rectangular matrix: eliminates with
/// full row pivoting and reports the smallest leading pivot magnitude over
/// the first `rows` steps, or `None` if some step found no pivot above the
/// floor. Used to confirm that a Jacobian stays far from rank-deficient
/// after a numeric deformation.
pub fn min_row_pivot(
    m: &[Vec<BigFloat>],
    pivot_floor: &BigFloat,
) -> Option<BigFloat> {
    let rows = m.len();
    if rows == 0 {
        return None;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigFloat>> = m.to_vec();
    let mut min_pivot: Option<BigFloat> = None;
    let mut next_row = 0usize;
    for col in 0..cols {
        if next_row == rows {
            break;
        }
        let pivot_row = (next_row..rows)
            .max_by(|&r1, &r2| a[r1][col].cmp_abs(&a[r2][col]))
            .expect("nonempty range");
        if a[pivot_row][col].abs().cmp_abs(pivot_floor) != core::cmp::Ordering::Greater {
            continue;
        }
        a.swap(next_row, pivot_row);
        let pivot = a[next_row][col].clone();
        min_pivot = Some(match min_pivot {
            None => pivot.abs(),
            Some(p) => {
                if pivot.abs().cmp_abs(&p) == core::cmp::Ordering::Less {
                    pivot.abs()
                } else {
                    p
                }
            }
        });
        for row in (next_row + 1)..rows {
            if a[row][col].is_zero() {
                continue;
            }
            let factor = a[row][col].div(&pivot);
            for k in col..cols {
                let t = factor.mul(&a[next_row][k]);
                a[row][k] = a[row][k].sub(&t);
            }
        }
        next_row += 1;
    }
    if next_row == rows {
        min_pivot
    } else {
        None
    }
}
