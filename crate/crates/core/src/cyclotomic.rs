//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`, stored in the power
//! basis `1, zeta, ..., zeta^(phi(N)-1)` and always reduced modulo `Phi_N`.
//!
//! The fields that matter here are `Q(zeta_{ell^i})`; the conductor is kept
//! general so the classical `GL_2` table can be evaluated in `Q(zeta_{q^2-1})`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{euler_phi, is_integer, is_p_integral, ord_rat, Rational};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;

/// Integer coefficients of the `N`-th cyclotomic polynomial, low to high.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // X^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = int_exact_div(&num, &cyclotomic_poly(d));
    }
    num
}

fn int_exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "monic divisor");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Power-basis images of `zeta^e` for `0 <= e < N`.
struct PowerTable {
    phi: usize,
    powers: Vec<Vec<i64>>,
}

impl PowerTable {
    fn build(n: u64) -> Self {
        let phi_poly = cyclotomic_poly(n);
        let phi = phi_poly.len() - 1;
        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            powers.push(cur.clone());
            // multiply by zeta and reduce with zeta^phi = -sum_{k<phi} c_k zeta^k
            let top = cur[phi - 1];
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1] - top * phi_poly[k];
            }
            cur[0] = -top * phi_poly[0];
        }
        PowerTable { phi, powers }
    }
}

fn power_table(n: u64) -> Arc<PowerTable> {
    static TABLES: OnceLock<RwLock<HashMap<u64, Arc<PowerTable>>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = tables.read().unwrap().get(&n) {
        return Arc::clone(t);
    }
    let built = Arc::new(PowerTable::build(n));
    let mut guard = tables.write().unwrap();
    Arc::clone(guard.entry(n).or_insert(built))
}

/// Element of `Q(zeta_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn zero(conductor: u64) -> Self {
        let phi = euler_phi(conductor) as usize;
        CyclotomicNumber { conductor, coeffs: vec![Rational::zero(); phi] }
    }

    pub fn from_rational(conductor: u64, value: Rational) -> Self {
        let mut z = Self::zero(conductor);
        z.coeffs[0] = value;
        z
    }

    pub fn from_int(conductor: u64, value: i64) -> Self {
        Self::from_rational(conductor, Rational::from_integer(BigInt::from(value)))
    }

    /// `zeta_N^e` for any integer exponent.
    pub fn zeta_pow(conductor: u64, e: i64) -> Self {
        let table = power_table(conductor);
        let idx = e.rem_euclid(conductor as i64) as usize;
        CyclotomicNumber {
            conductor,
            coeffs: table.powers[idx].iter().map(|&c| Rational::from_integer(c.into())).collect(),
        }
    }

    /// `sum_{e} c_e zeta_N^e` from sparse integer exponent data.
    pub fn from_exponent_sum<'a>(conductor: u64, terms: impl IntoIterator<Item = (i64, &'a Rational)>) -> Self {
        let table = power_table(conductor);
        let mut coeffs = vec![Rational::zero(); table.phi];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let row = &table.powers[e.rem_euclid(conductor as i64) as usize];
            for (k, &v) in row.iter().enumerate() {
                if v != 0 {
                    coeffs[k] += c * Rational::from_integer(v.into());
                }
            }
        }
        CyclotomicNumber { conductor, coeffs }
    }

    /// The element at `Q(zeta_{ell^level})`.
    pub fn at_level(ell: u64, level: u32, value: Rational) -> Self {
        Self::from_rational(ell.pow(level), value)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// `i` such that the conductor is `ell^i`.
    pub fn level(&self, ell: u64) -> Option<u32> {
        let mut c = self.conductor;
        let mut i = 0;
        while c.is_multiple_of(ell) {
            c /= ell;
            i += 1;
        }
        (c == 1).then_some(i)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_rational_integer(&self) -> bool {
        self.as_rational().is_some_and(|r| is_integer(&r))
    }

    /// All power-basis coordinates lie in `Z_(p)`, i.e. the element is in
    /// `Z_(p)[zeta_N]`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    /// Image under the embedding `Q(zeta_N) -> Q(zeta_M)` with `N | M`.
    pub fn embed(&self, conductor: u64) -> Self {
        if conductor == self.conductor {
            return self.clone();
        }
        assert_eq!(conductor % self.conductor, 0, "embedding needs N | M");
        let step = (conductor / self.conductor) as i64;
        Self::from_exponent_sum(
            conductor,
            self.coeffs.iter().enumerate().map(|(k, c)| (k as i64 * step, c)),
        )
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let lcm = num_integer::lcm(self.conductor, other.conductor);
        (self.embed(lcm), other.embed(lcm))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Galois action `zeta -> zeta^k` for `k` prime to the conductor.
    pub fn galois(&self, k: i64) -> Self {
        Self::from_exponent_sum(
            self.conductor,
            self.coeffs.iter().enumerate().map(|(j, c)| (j as i64 * k, c)),
        )
    }

    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::from_int(self.conductor, 1), |acc, _| &acc * self)
    }

    /// Matrix of multiplication by `self` on the power basis.
    fn multiplication_matrix(&self) -> RatMatrix {
        let phi = self.coeffs.len();
        let mut m = RatMatrix::zeros(phi, phi);
        for j in 0..phi {
            let col = self * &Self::zeta_pow(self.conductor, j as i64);
            for i in 0..phi {
                m[(i, j)] = col.coeffs[i].clone();
            }
        }
        m
    }

    /// Absolute norm `N_{Q(zeta_N)/Q}`.
    pub fn norm(&self) -> Rational {
        self.multiplication_matrix().determinant()
    }

    /// Valuation normalized so that `zeta_{ell^i} - 1` has valuation 1 in
    /// `Q(zeta_{ell^i})`. Because that extension of `Q_ell` is totally
    /// ramified, this is `ord_ell` of the absolute norm. Rational elements
    /// at conductor 1 get the plain `ord_ell`.
    pub fn ell_valuation(&self, ell: u64) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        assert!(self.level(ell).is_some(), "conductor is not a power of ell");
        Ok(ord_rat(&self.norm(), ell))
    }

    /// Coefficients as decimal strings (for reports).
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(other);
        CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(other);
        CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, other: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(other);
        let phi = a.coeffs.len();
        let mut conv = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        CyclotomicNumber::from_exponent_sum(
            a.conductor,
            conv.iter().enumerate().map(|(e, c)| (e as i64, c)),
        )
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            if k == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "z{}", self.conductor)?,
                _ => write!(f, "z{}^{k}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(9), vec![1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta3_squared() {
        let z = CyclotomicNumber::zeta_pow(3, 1);
        let sq = &z * &z;
        assert_eq!(sq.coeffs(), &[rat(-1), rat(-1)]);
        let s = &z + &CyclotomicNumber::zeta_pow(3, 2);
        assert_eq!(s.as_rational(), Some(rat(-1)));
    }

    #[test]
    fn zeta7_product() {
        let one = CyclotomicNumber::from_int(7, 1);
        let a = &one + &CyclotomicNumber::zeta_pow(7, 1);
        let b = &one + &CyclotomicNumber::zeta_pow(7, 6);
        let expected = &(&CyclotomicNumber::from_int(7, 2) + &CyclotomicNumber::zeta_pow(7, 1))
            + &CyclotomicNumber::zeta_pow(7, 6);
        // zeta^6 = -(1 + zeta + ... + zeta^5)
        assert_eq!(expected.coeffs(), &[rat(1), rat(0), rat(-1), rat(-1), rat(-1), rat(-1)]);
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn valuations() {
        let z3 = CyclotomicNumber::zeta_pow(3, 1);
        let one3 = CyclotomicNumber::from_int(3, 1);
        assert_eq!((&z3 - &one3).ell_valuation(3).unwrap(), 1);
        assert_eq!(CyclotomicNumber::from_int(3, -3).ell_valuation(3).unwrap(), 2);
        let z9 = CyclotomicNumber::zeta_pow(9, 1);
        assert_eq!((&z9 - &CyclotomicNumber::from_int(9, 1)).ell_valuation(3).unwrap(), 1);
        assert_eq!(CyclotomicNumber::from_int(1, 12).ell_valuation(3).unwrap(), 1);
        assert_eq!(CyclotomicNumber::zero(9).ell_valuation(3), Err(Error::ZeroArgument));
    }

    #[test]
    fn conductor_one_and_two() {
        let z1 = CyclotomicNumber::zeta_pow(1, 5);
        assert_eq!(z1.as_rational(), Some(rat(1)));
        let z2 = CyclotomicNumber::zeta_pow(2, 1);
        assert_eq!(z2.as_rational(), Some(rat(-1)));
        assert_eq!(CyclotomicNumber::zeta_pow(2, 2).as_rational(), Some(rat(1)));
    }

    #[test]
    fn embedding_identifies_roots() {
        let z3 = CyclotomicNumber::zeta_pow(3, 1);
        assert_eq!(z3.embed(9), CyclotomicNumber::zeta_pow(9, 3));
        assert_eq!(z3.embed(63), CyclotomicNumber::zeta_pow(63, 21));
    }
}
