//! Integer and rational helpers: primality, orders, valuations and
//! congruences in the l-local integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, f)` with `q = p^f` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut f = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        f += 1;
    }
    (rest == 1).then_some((p, f))
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Multiplicative order of `a` modulo `m`; `None` if `gcd(a, m) != 1`.
pub fn mult_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * a as u128) % m as u128) as u64;
        k += 1;
    }
    Some(k)
}

/// `ord_p(n)` for a nonzero integer.
pub fn ord_int(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "ord of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut k = 0;
    loop {
        let (quo, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return k;
        }
        n = quo;
        k += 1;
    }
}

pub fn ord_u64(n: u64, p: u64) -> u32 {
    ord_int(&BigInt::from(n), p)
}

/// `ord_p` of a nonzero rational.
pub fn ord_rat(x: &Rational, p: u64) -> i64 {
    ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64
}

/// Whether a rational lies in the localization `Z_(p)`.
pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

/// `x ≡ y (mod modulus)` in `Z_(p)`, where `modulus` is a power of `p`.
pub fn congruent_mod(x: &Rational, y: &Rational, modulus: u64, p: u64) -> bool {
    let diff = x - y;
    if diff.is_zero() {
        return true;
    }
    is_p_integral(x, p)
        && is_p_integral(y, p)
        && ord_rat(&diff, p) >= ord_u64(modulus, p) as i64
}

/// Reduces a p-integral rational to its residue in `Z/p^k`.
pub fn residue_mod(x: &Rational, modulus: u64) -> Option<u64> {
    let m = BigInt::from(modulus);
    let den = x.denom().mod_floor(&m);
    let inv = mod_inverse_big(&den, &m)?;
    let v = (x.numer().mod_floor(&m) * inv).mod_floor(&m);
    v.to_u64()
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    mod_inverse_big(&BigInt::from(a), &BigInt::from(m)).and_then(|v| v.to_u64())
}

pub fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Euler's totient of `p^k`.
pub fn phi_prime_power(p: u64, k: u32) -> u64 {
    if k == 0 {
        1
    } else {
        (p - 1) * p.pow(k - 1)
    }
}

pub fn euler_phi(n: u64) -> u64 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64
}

pub fn big_pow(base: u64, exp: u64) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}
