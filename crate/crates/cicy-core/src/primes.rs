//! Deterministic primality testing for 64-bit moduli.
//!
//! Rank certification runs over `F_p` for large primes `p`: full rank of an
//! integer matrix modulo any single prime already implies full rank over the
//! rationals, and 62-bit moduli keep every intermediate product inside `u128`.
//! The Miller-Rabin witness set {2, 3, 5, 7, ..., 37} is known to be exact for
//! all inputs below 3.3 * 10^24, so for `u64` arguments the test is a proof.

/// Default certification modulus: the least prime above 2^61.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_967;

/// A small stock of distinct 62-bit primes for cross-checking a rank result
/// against more than one modulus (an "unlucky prime" can only lower the rank,
/// never raise it, so agreement across primes is strong evidence and a single
/// full-rank result is already conclusive).
pub const CERTIFICATION_PRIMES: [u64; 6] = [
    2_305_843_009_213_693_967,
    2_305_843_009_213_693_973,
    2_305_843_009_213_694_009,
    2_305_843_009_213_694_017,
    2_305_843_009_213_694_087,
    2_305_843_009_213_694_149,
];

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

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

/// Deterministic primality test for `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd.
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in MR_WITNESSES.iter() {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `n` (panics on overflow past `u64::MAX`,
/// which no caller approaches: certification moduli stay near 2^61).
pub fn next_prime_above(n: u64) -> u64 {
    let mut candidate = n.checked_add(1).expect("prime search overflowed u64");
    if candidate <= 2 {
        return 2;
    }
    if candidate % 2 == 0 {
        candidate += 1;
    }
    while !is_prime_u64(candidate) {
        candidate = candidate.checked_add(2).expect("prime search overflowed u64");
    }
    candidate
}
