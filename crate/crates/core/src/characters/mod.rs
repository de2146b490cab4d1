//! Character values of the characteristic-zero members of the block: the
//! cuspidal characters `pi_i` attached to `eps^i` and the Steinberg
//! character, evaluated exactly on class types.

pub mod gl2;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{big_pow, ord_int, rat, Rational};
use crate::classes::ClassType;
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::finite_field::SylowData;
use crate::params::{reduce_parameters, ParameterSet};

/// Which member of the block a character belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CharacterFamily {
    /// `pi_i`, lifting the cuspidal through `eps^i` (`i` not divisible by `l^r`).
    Cuspidal(u64),
    Steinberg,
}

/// `(q^{n-1} - 1)(q^{n-2} - 1)...(q - 1)`.
pub fn cuspidal_dimension(q: u64, n: u64) -> BigInt {
    (1..n).map(|k| big_pow(q, k) - BigInt::one()).product()
}

/// `q^{n(n-1)/2}`.
pub fn steinberg_dimension(q: u64, n: u64) -> BigInt {
    big_pow(q, n * (n - 1) / 2)
}

/// Character evaluator for one reduced block. Holds `F_{q^n}` and the
/// generator `eps` of its l-Sylow subgroup; `theta(eps) = zeta_{l^r}`.
#[derive(Debug, Clone)]
pub struct BlockCharacters {
    pub params: ParameterSet,
    pub sylow: SylowData,
}

impl BlockCharacters {
    pub fn new(ps: &ParameterSet) -> Result<Self> {
        let params = reduce_parameters(ps);
        let sylow = SylowData::new(&params)?;
        Ok(BlockCharacters { params, sylow })
    }

    /// `l^r`, the conductor all values live in.
    pub fn conductor(&self) -> u64 {
        self.params.ell_r()
    }

    pub fn dimension(&self, family: CharacterFamily) -> BigInt {
        let (q, n) = (self.params.q, self.params.n);
        match family {
            CharacterFamily::Cuspidal(_) => cuspidal_dimension(q, n),
            CharacterFamily::Steinberg => steinberg_dimension(q, n),
        }
    }

    /// A root in `F_{q^n}` of the polynomial of a primary class.
    pub fn eigenvalue(&self, ct: &ClassType) -> Option<u32> {
        if !ct.is_primary() {
            return None;
        }
        self.sylow.tower.find_root(&ct.factors[0].poly)
    }

    /// `theta^i(t) + theta^i(t^q) + ... + theta^i(t^{q^{a-1}})` over the
    /// Frobenius orbit of `t`.
    pub fn theta_orbit_sum(&self, i: u64, t: u32) -> Result<CyclotomicNumber> {
        let conductor = self.conductor();
        let mut acc = CyclotomicNumber::zero(conductor);
        for s in self.sylow.tower.frobenius_orbit(t) {
            let j = self.sylow.ell_part_and_dlog(s)?.j;
            let e = (i as u128 * j as u128 % conductor as u128) as i64;
            acc = &acc + &CyclotomicNumber::zeta_pow(conductor, e);
        }
        Ok(acc)
    }

    /// Zero off primary classes; on a primary class with eigenvalue `t` of
    /// degree `a` and `x` Jordan blocks:
    /// `(-1)^{n-x} (q^a - 1)(q^{2a} - 1)...(q^{(x-1)a} - 1) * theta-orbit-sum`.
    pub fn cuspidal_value(&self, i: u64, ct: &ClassType) -> Result<CyclotomicNumber> {
        let conductor = self.conductor();
        if i.is_multiple_of(conductor) {
            return Err(Error::assertion("cuspidal-index", format!("i = {i} is divisible by l^r")));
        }
        if !ct.is_primary() {
            return Ok(CyclotomicNumber::zero(conductor));
        }
        let t = self.eigenvalue(ct).ok_or_else(|| {
            Error::assertion("eigenvalue", format!("class {ct} has no eigenvalue in F_{{q^n}}"))
        })?;
        let a = ct.eigenvalue_degree().unwrap() as u64;
        let x = ct.jordan_blocks().unwrap() as u64;
        let q = self.params.q;
        let mut scalar: BigInt = (1..x).map(|k| big_pow(q, k * a) - BigInt::one()).product();
        if (self.params.n - x) % 2 == 1 {
            scalar = -scalar;
        }
        Ok(self.theta_orbit_sum(i, t)?.scale(&Rational::from_integer(scalar)))
    }

    /// Zero off semisimple classes; otherwise
    /// `(-1)^{n - sum_j b_j}` times the p-part of the centralizer order.
    pub fn steinberg_value(&self, ct: &ClassType) -> CyclotomicNumber {
        CyclotomicNumber::from_rational(self.conductor(), steinberg_value_rational(ct))
    }

    pub fn value(&self, family: CharacterFamily, ct: &ClassType) -> Result<CyclotomicNumber> {
        match family {
            CharacterFamily::Cuspidal(i) => self.cuspidal_value(i, ct),
            CharacterFamily::Steinberg => Ok(self.steinberg_value(ct)),
        }
    }
}

/// Steinberg value as a rational, for any `GL_n(F_q)` class type.
pub fn steinberg_value_rational(ct: &ClassType) -> Rational {
    if !ct.is_semisimple() {
        return Rational::zero();
    }
    let p = crate::arith::prime_power(ct.q).expect("prime power").0;
    let p_part = big_pow(p, ord_int(&ct.centralizer_order, p) as u64);
    let sign = if (ct.n - ct.centralizer_rank() as u64).is_multiple_of(2) { 1 } else { -1 };
    Rational::from_integer(p_part) * rat(sign)
}

/// `(1/|G|) sum_C |C| chi(C) conj(psi(C))`, with values indexed like `classes`.
pub fn inner_product(
    classes: &[ClassType],
    chi: &[CyclotomicNumber],
    psi: &[CyclotomicNumber],
    group_order: &BigInt,
) -> CyclotomicNumber {
    let conductor = chi.first().map_or(1, CyclotomicNumber::conductor);
    let mut acc = CyclotomicNumber::zero(conductor);
    for ((ct, a), b) in classes.iter().zip(chi).zip(psi) {
        let term = (a * &b.conj()).scale(&Rational::from_integer(ct.class_size.clone()));
        acc = &acc + &term;
    }
    acc.scale(&Rational::new(BigInt::one(), group_order.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{enumerate_classes, gl_order};
    use crate::params::validate_parameters;

    fn setup(q: u64, ell: u64, n: u64) -> (BlockCharacters, Vec<ClassType>) {
        let ps = validate_parameters(q, ell, n, 1).unwrap();
        (BlockCharacters::new(&ps).unwrap(), enumerate_classes(q, n, 1 << 20).unwrap())
    }

    #[test]
    fn gl2_f2_values() {
        let (bc, classes) = setup(2, 3, 2);
        let unip = classes.iter().find(|c| c.is_regular_unipotent()).unwrap();
        assert_eq!(bc.cuspidal_value(1, unip).unwrap().as_rational(), Some(rat(-1)));
        assert_eq!(bc.steinberg_value(unip).as_rational(), Some(rat(0)));
        let ell = classes.iter().find(|c| c.eigenvalue_degree() == Some(2)).unwrap();
        assert_eq!(bc.cuspidal_value(1, ell).unwrap().as_rational(), Some(rat(1)));
        assert_eq!(bc.steinberg_value(ell).as_rational(), Some(rat(-1)));
        let id = classes.iter().find(|c| c.is_diagonalizable() && c.eigenvalue_degree() == Some(1)).unwrap();
        assert_eq!(bc.steinberg_value(id).as_rational(), Some(rat(2)));
        assert_eq!(bc.cuspidal_value(1, id).unwrap().as_rational(), Some(rat(1)));
    }

    #[test]
    fn non_primary_vanishes() {
        let (bc, classes) = setup(2, 7, 3);
        for ct in classes.iter().filter(|c| !c.is_primary()) {
            for i in [1, 3] {
                assert!(bc.cuspidal_value(i, ct).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn dimensions_are_ell_units() {
        for (q, ell, n) in [(2, 3, 2), (2, 7, 3), (8, 3, 2), (4, 5, 2), (3, 5, 4)] {
            assert_ne!(cuspidal_dimension(q, n) % ell, BigInt::zero());
            assert_ne!(steinberg_dimension(q, n) % ell, BigInt::zero());
        }
    }

    /// Orthonormality of the block characters is an independent check of the
    /// cuspidal formula and Steinberg sign for `n >= 3`, where no classical
    /// table is used.
    #[test]
    fn block_characters_are_orthonormal() {
        for (q, ell, n) in [(2, 3, 2), (2, 7, 3), (8, 3, 2), (4, 5, 2), (3, 5, 4)] {
            let (bc, classes) = setup(q, ell, n);
            let order = gl_order(q, n);
            let reps: Vec<u64> = crate::invariants::OrbitStructure::new(bc.conductor(), q).reps();
            let mut rows: Vec<Vec<CyclotomicNumber>> =
                vec![classes.iter().map(|c| bc.steinberg_value(c)).collect()];
            for &i in reps.iter().skip(1) {
                rows.push(classes.iter().map(|c| bc.cuspidal_value(i, c).unwrap()).collect());
            }
            for (a, ra) in rows.iter().enumerate() {
                for (b, rb) in rows.iter().enumerate() {
                    let ip = inner_product(&classes, ra, rb, &order);
                    let expected = if a == b { rat(1) } else { rat(0) };
                    assert_eq!(ip.as_rational(), Some(expected), "q={q} ell={ell} rows {a},{b}");
                }
            }
            for (row, fam) in rows.iter().zip(std::iter::once(CharacterFamily::Steinberg).chain(reps.iter().skip(1).map(|&i| CharacterFamily::Cuspidal(i)))) {
                let id = classes.iter().position(|c| c.is_diagonalizable() && c.factors.len() == 1 && c.factors[0].degree() == 1 && c.factors[0].poly[0] == (crate::arith::prime_power(q).unwrap().0 - 1) as u32).unwrap();
                assert_eq!(row[id].as_rational(), Some(Rational::from_integer(bc.dimension(fam))));
            }
        }
    }

    #[test]
    fn ell_regular_values_independent_of_i() {
        for (q, ell, n) in [(2, 7, 3), (8, 3, 2), (3, 5, 4)] {
            let (bc, classes) = setup(q, ell, n);
            let reps: Vec<u64> = crate::invariants::OrbitStructure::new(bc.conductor(), q).reps();
            for ct in classes.iter().filter(|c| c.is_primary()) {
                let t = bc.eigenvalue(ct).unwrap();
                if bc.sylow.ell_part_and_dlog(t).unwrap().j != 0 {
                    continue;
                }
                let v1 = bc.cuspidal_value(reps[1], ct).unwrap();
                assert!(v1.is_rational_integer());
                for &i in &reps[2..] {
                    assert_eq!(bc.cuspidal_value(i, ct).unwrap(), v1);
                }
            }
        }
    }
}
