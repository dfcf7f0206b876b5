//! Exact field scalars: arbitrary-precision rationals and prime-field residues.
//!
//! Every computation outside the continuation module happens over one of two
//! exact fields, chosen per run and recorded in its certificate:
//!
//! * `Q` — arbitrary-precision rationals (reference path, slower);
//! * `F_p` — residues modulo a fixed large prime (fast path; full rank over
//!   `F_p` of an integer matrix implies full rank over `Q`).
//!
//! A [`ScalarCtx`] pins the field for a whole computation. Mixing contexts in
//! one arithmetic expression is a programming error and panics, exactly like
//! an out-of-bounds index: silently coercing between fields would invalidate
//! every exactness claim downstream.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::primes::is_prime_u64;

/// The arithmetic context of a computation: which exact field is in force.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarCtx {
    /// Arbitrary-precision rational numbers.
    Rational,
    /// Prime field with the given modulus (must be prime and below 2^62 so
    /// that sums of two residues stay inside `u64` and products inside `u128`).
    Prime(u64),
}

impl ScalarCtx {
    /// Prime-field context; panics unless `p` is a prime below 2^62.
    pub fn prime(p: u64) -> Self {
        assert!(p < 1 << 62, "modulus {p} too large: must be below 2^62");
        assert!(is_prime_u64(p), "modulus {p} is not prime");
        ScalarCtx::Prime(p)
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    /// Embed a machine integer into the field.
    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            ScalarCtx::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            ScalarCtx::Prime(p) => {
                let value = if v >= 0 {
                    (v as u64) % p
                } else {
                    let m = ((-(v as i128)) as u64) % p;
                    if m == 0 { 0 } else { p - m }
                };
                Scalar::Prime { value, modulus: p }
            }
        }
    }

    /// Embed a big integer into the field.
    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            ScalarCtx::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            ScalarCtx::Prime(p) => {
                let m = BigInt::from(p);
                let mut r = v % &m;
                if r.sign() == Sign::Minus {
                    r += &m;
                }
                let (_, digits) = r.to_u64_digits();
                let value = digits.first().copied().unwrap_or(0);
                Scalar::Prime { value, modulus: p }
            }
        }
    }

    /// Embed a rational `num/den`; in a prime field this is `num * den^{-1}`
    /// and panics if `den` reduces to zero mod p (the embedding does not exist).
    pub fn from_ratio_i64(self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        n.div(&d)
    }
}

/// An exact field element tagged with its context.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn ctx(&self) -> ScalarCtx {
        match self {
            Scalar::Rational(_) => ScalarCtx::Rational,
            Scalar::Prime { modulus, .. } => ScalarCtx::Prime(*modulus),
        }
    }

    fn check_same_ctx(&self, other: &Scalar) {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => {}
            (Scalar::Prime { modulus: a, .. }, Scalar::Prime { modulus: b, .. }) => {
                assert!(a == b, "mixed prime moduli {a} and {b} in one expression");
            }
            _ => panic!("mixed rational and prime-field scalars in one expression"),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, .. } => *value == 1,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.check_same_ctx(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                let mut s = a + b; // safe: both < 2^62
                if s >= *p {
                    s -= p;
                }
                Scalar::Prime { value: s, modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.check_same_ctx(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, .. }) => {
                Scalar::Prime { value: mulmod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                // Fermat: a^(p-2) = a^{-1} for prime p.
                value: powmod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Division; panics on zero divisor (callers check, as with slice indexing).
    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv().expect("division by zero"))
    }

    pub fn pow(&self, mut exp: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.ctx().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// The underlying rational, if this is a rational-context scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Prime { .. } => None,
        }
    }

    /// The underlying residue, if this is a prime-field scalar.
    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Prime { value, .. } => Some(*value),
        }
    }

    /// Decimal rendering: `a/b` (reduced, positive denominator) or the residue.
    pub fn to_decimal_string(&self) -> String {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    let mut s = r.numer().to_string();
                    s.push('/');
                    s += &r.denom().to_string();
                    s
                }
            }
            Scalar::Prime { value, .. } => value.to_string(),
        }
    }

    /// Parse the output of [`Scalar::to_decimal_string`] back into `ctx`.
    pub fn parse_decimal(ctx: ScalarCtx, s: &str) -> Option<Scalar> {
        let parse_int = |txt: &str| -> Option<BigInt> { txt.parse::<BigInt>().ok() };
        match s.split_once('/') {
            None => parse_int(s).map(|n| ctx.from_bigint(&n)),
            Some((num, den)) => {
                let n = parse_int(num)?;
                let d = parse_int(den)?;
                if d.is_zero() {
                    return None;
                }
                let nn = ctx.from_bigint(&n);
                let dd = ctx.from_bigint(&d);
                if dd.is_zero() {
                    return None; // denominator collapsed mod p: not embeddable
                }
                Some(nn.div(&dd))
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Prime { value, modulus } => write!(f, "{value} (mod {modulus})"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sum of a slice of scalars (zero of `ctx` if empty).
pub fn sum(ctx: ScalarCtx, items: &[Scalar]) -> Scalar {
    items.iter().fold(ctx.zero(), |acc, x| acc.add(x))
}

/// Product over an iterator of scalars.
pub fn product<'a>(ctx: ScalarCtx, items: impl Iterator<Item = &'a Scalar>) -> Scalar {
    items.fold(ctx.one(), |acc, x| acc.mul(x))
}

/// Convert a vector of machine integers into field elements.
pub fn from_i64_slice(ctx: ScalarCtx, vs: &[i64]) -> Vec<Scalar> {
    vs.iter().map(|&v| ctx.from_i64(v)).collect()
}
