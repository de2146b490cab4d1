//! Validated parameter tuples `(q, ell, n, d, w, r)`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{big_pow, is_prime, mult_order, ord_int, prime_power};
use crate::error::{Error, Result};

/// Parameters of a cuspidal, non-supercuspidal block of `GL_n(F_q)` in
/// characteristic `ell`.
///
/// `d` is the degree of the cuspidal; `w` the order of `q` modulo `ell`;
/// `r = ord_ell(q^w - 1)`. A set with `d = 1` is called reduced, and then
/// `n = w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterSet {
    pub q: u64,
    pub ell: u64,
    pub n: u64,
    pub d: u64,
    pub w: u64,
    pub r: u32,
}

impl ParameterSet {
    /// Characteristic `p` and exponent `f` with `q = p^f`.
    pub fn char_and_exponent(&self) -> (u64, u32) {
        prime_power(self.q).expect("validated q is a prime power")
    }

    /// `ell^r`, the order of the l-Sylow subgroup of `F_{q^n}^x` in the
    /// reduced setting.
    pub fn ell_r(&self) -> u64 {
        self.ell.pow(self.r)
    }

    pub fn is_reduced(&self) -> bool {
        self.d == 1
    }

    /// `q^d`, the parameter the invariants are taken under.
    pub fn effective_q(&self) -> u64 {
        self.q.pow(self.d as u32)
    }
}

/// Checks the hypotheses of the main computation and derives `w` and `r`.
pub fn validate_parameters(q: u64, ell: u64, n: u64, d: u64) -> Result<ParameterSet> {
    if prime_power(q).is_none() {
        return Err(Error::InvalidPrime(format!("q = {q} is not a prime power")));
    }
    if !is_prime(ell) {
        return Err(Error::InvalidPrime(format!("ell = {ell} is not prime")));
    }
    if q.is_multiple_of(ell) {
        return Err(Error::InvalidPrime(format!("ell = {ell} divides q = {q}")));
    }
    if n == 0 || d == 0 {
        return Err(Error::DegenerateBlock("n and d must be positive".into()));
    }
    if d == n {
        return Err(Error::SupercuspidalCase(n));
    }
    if d > n || !n.is_multiple_of(d) {
        return Err(Error::DegenerateBlock(format!("d = {d} does not divide n = {n}")));
    }
    let qd = q
        .checked_pow(d as u32)
        .ok_or_else(|| Error::ScaleLimit(format!("q^d = {q}^{d} overflows")))?;
    let ord_qd = mult_order(qd, ell).expect("ell does not divide q");
    if ord_qd != n / d {
        return Err(Error::DegenerateBlock(format!(
            "order of {qd} modulo {ell} is {ord_qd}, expected n/d = {}",
            n / d
        )));
    }
    if n < 2 || n >= ell {
        return Err(Error::DegenerateBlock(format!(
            "need 2 <= n < ell, got n = {n}, ell = {ell}"
        )));
    }
    let w = mult_order(q, ell).expect("ell does not divide q");
    let r = ord_int(&(big_pow(q, w) - BigInt::one()), ell);
    debug_assert!(r >= 1);
    Ok(ParameterSet { q, ell, n, d, w, r })
}

/// Passes to the equivalent degree-one block: `q <- q^d`, `n <- n/d`.
pub fn reduce_parameters(ps: &ParameterSet) -> ParameterSet {
    if ps.is_reduced() {
        return *ps;
    }
    let q = ps.effective_q();
    let n = ps.n / ps.d;
    let w = mult_order(q, ps.ell).expect("validated");
    let r = ord_int(&(big_pow(q, w) - BigInt::one()), ps.ell);
    debug_assert_eq!(r, ps.r);
    ParameterSet { q, ell: ps.ell, n, d: 1, w, r }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_smallest_case() {
        let ps = validate_parameters(2, 3, 2, 1).unwrap();
        assert_eq!((ps.w, ps.r), (2, 1));
    }

    #[test]
    fn unreduced_case_reduces() {
        let ps = validate_parameters(2, 5, 4, 2).unwrap();
        assert_eq!((ps.w, ps.r), (4, 1));
        let red = reduce_parameters(&ps);
        assert_eq!((red.q, red.n, red.d, red.ell, red.w, red.r), (4, 2, 1, 5, 2, 1));
    }

    #[test]
    fn reduction_is_idempotent() {
        for (q, ell, n) in [(2, 3, 2), (3, 5, 4)] {
            let ps = validate_parameters(q, ell, n, 1).unwrap();
            assert_eq!(reduce_parameters(&ps), ps);
        }
        let ps = validate_parameters(2, 5, 4, 2).unwrap();
        let red = reduce_parameters(&ps);
        assert_eq!(reduce_parameters(&red), red);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(validate_parameters(2, 3, 3, 1), Err(Error::DegenerateBlock(_))));
        assert!(matches!(validate_parameters(6, 5, 4, 1), Err(Error::InvalidPrime(_))));
        assert!(matches!(validate_parameters(2, 9, 2, 1), Err(Error::InvalidPrime(_))));
        assert!(matches!(validate_parameters(9, 3, 2, 1), Err(Error::InvalidPrime(_))));
        assert!(matches!(validate_parameters(2, 5, 4, 4), Err(Error::SupercuspidalCase(4))));
        assert!(matches!(validate_parameters(2, 5, 4, 3), Err(Error::DegenerateBlock(_))));
        // ord_5(2) = 4, so n = 2 with d = 1 is not a valid block
        assert!(matches!(validate_parameters(2, 5, 2, 1), Err(Error::DegenerateBlock(_))));
    }

    #[test]
    fn r_can_exceed_one() {
        let ps = validate_parameters(8, 3, 2, 1).unwrap();
        assert_eq!((ps.w, ps.r, ps.ell_r()), (2, 2, 9));
    }
}
