//! Dense univariate polynomials over `Q`, low-to-high coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{is_integer, is_p_integral, rat, residue_mod, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `Y - c`.
    pub fn linear_root(c: Rational) -> Self {
        Self::new(vec![-c, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(is_integer)
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Horner evaluation in any ring that can absorb rational scalars.
    pub fn eval_with<T, Lift, MulF, AddF>(&self, x: &T, lift: Lift, mul: MulF, add: AddF) -> T
    where
        Lift: Fn(&Rational) -> T,
        MulF: Fn(&T, &T) -> T,
        AddF: Fn(&T, &T) -> T,
    {
        let mut acc = lift(&Rational::zero());
        for c in self.coeffs.iter().rev() {
            acc = add(&mul(&acc, x), &lift(c));
        }
        acc
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.eval_with(x, Clone::clone, |a, b| a * b, |a, b| a + b)
    }

    /// Euclidean division by a nonzero polynomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Coefficients reduced into `Z/modulus` (requires p-integrality).
    pub fn residues_mod(&self, modulus: u64) -> Option<Vec<u64>> {
        let mut out: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| residue_mod(c, modulus))
            .collect::<Option<_>>()?;
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }

    /// Coefficients as strings, low to high, for reports.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "Y")?,
                _ => write!(f, "Y^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_division_roundtrip() {
        let a = Polynomial::from_ints(&[-3, 1]);
        let b = Polynomial::from_ints(&[2, 1, 1]);
        let prod = &a * &b;
        assert_eq!(prod, Polynomial::from_ints(&[-6, -1, -2, 1]));
        let (quo, rem) = prod.div_rem(&a);
        assert_eq!(quo, b);
        assert!(rem.is_zero());
    }

    #[test]
    fn display() {
        assert_eq!(Polynomial::from_ints(&[-2, -1, 1]).to_string(), "Y^2 - Y - 2");
        assert_eq!(Polynomial::from_ints(&[12, -1, -1]).to_string(), "-Y^2 - Y + 12");
    }

    #[test]
    fn residues() {
        let p = Polynomial::new(vec![rat_half(), rat(3)]);
        assert_eq!(p.residues_mod(3), Some(vec![2]));
    }

    fn rat_half() -> Rational {
        crate::arith::rat_frac(1, 2)
    }
}
