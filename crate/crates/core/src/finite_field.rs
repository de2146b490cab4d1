//! Finite fields `F_{p^e}` with a fixed deterministic modulus, polynomials
//! over `F_q`, and the l-part / discrete-log decomposition used to
//! evaluate the character `theta`.
//!
//! Elements are encoded as integers `sum c_i p^i` where `c_i` are the
//! coefficients of the representative polynomial modulo the field's
//! modulus. Multiplication goes through exp/log tables built from the
//! smallest primitive element, so field sizes are kept at desk scale.

use crate::arith::{is_prime, mod_inverse, prime_power};
use crate::error::{Error, Result};
use crate::params::ParameterSet;

/// Largest field (number of elements) this module will tabulate.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

// ---- polynomials over the prime field F_p (used to find moduli) ----

fn fp_poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let inv_lead = mod_inverse(b[db], p).expect("nonzero leading coefficient");
    while rem.len() > db {
        let top = rem.len() - 1;
        let c = rem[top] * inv_lead % p;
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                let idx = top - db + j;
                rem[idx] = (rem[idx] + p * p - c * bc % p) % p;
            }
        }
        rem.pop();
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem
}

fn decode_digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn fp_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut g = decode_digits(low, p, d);
            g.push(1);
            if fp_poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `e` over `F_p`, ordering
/// candidates by the integer `sum_{i<e} c_i p^i` of their lower coefficients.
pub fn smallest_irreducible_modulus(p: u64, e: u32) -> Vec<u64> {
    for low in 0..p.pow(e) {
        let mut f = decode_digits(low, p, e as usize);
        f.push(1);
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// `F_{p^e}` with tabulated multiplication.
#[derive(Debug, Clone)]
pub struct GaloisField {
    p: u64,
    e: u32,
    size: u64,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) || e == 0 {
            return Err(Error::InvalidPrime(format!("F_{{{p}^{e}}} is not a field")));
        }
        let size = p
            .checked_pow(e)
            .filter(|&s| s <= MAX_FIELD_SIZE)
            .ok_or_else(|| Error::ScaleLimit(format!("field of size {p}^{e} exceeds {MAX_FIELD_SIZE}")))?;
        let modulus = smallest_irreducible_modulus(p, e);
        let mut field = GaloisField {
            p,
            e,
            size,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables();
        Ok(field)
    }

    /// `F_q` for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidPrime(format!("{q} is not a prime power")))?;
        Self::new(p, e)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let da = decode_digits(a as u64, p, self.e as usize);
        let db = decode_digits(b as u64, p, self.e as usize);
        let mut prod = vec![0u64; 2 * self.e as usize];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        while prod.last() == Some(&0) {
            prod.pop();
        }
        self.encode(&fp_poly_rem(&prod, &self.modulus, p))
    }

    fn slow_pow(&self, a: u32, mut k: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            k >>= 1;
        }
        acc
    }

    fn build_tables(&mut self) {
        let order = self.size - 1;
        let prime_factors: Vec<u64> = (2..=order).filter(|&s| order.is_multiple_of(s) && is_prime(s)).collect();
        let generator = (1..self.size as u32)
            .find(|&g| prime_factors.iter().all(|&s| self.slow_pow(g, order / s) != 1))
            .expect("multiplicative group is cyclic");
        self.generator = generator;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.size as usize];
        let mut cur = 1u32;
        for k in 0..order {
            exp.push(cur);
            log[cur as usize] = k as u32;
            cur = self.slow_mul(cur, generator);
        }
        self.exp = exp;
        self.log = log;
    }

    fn encode(&self, coeffs: &[u64]) -> u32 {
        coeffs.iter().rev().fold(0u64, |acc, &c| acc * self.p + c) as u32
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Modulus coefficients over `F_p`, low to high (monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// The smallest primitive element.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Coefficients over `F_p` of the representative of `a`.
    pub fn coeffs(&self, a: u32) -> Vec<u64> {
        decode_digits(a as u64, self.p, self.e as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> u32 {
        assert!(coeffs.len() <= self.e as usize && coeffs.iter().all(|&c| c < self.p));
        self.encode(coeffs)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (da, db) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u64> = self.coeffs(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.size - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.size - 1;
        let k = (order - self.log[a as usize] as u64) % order;
        Some(self.exp[k as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.size - 1;
        let idx = (self.log[a as usize] as u128 * k as u128 % order as u128) as usize;
        self.exp[idx]
    }

    /// Discrete log to the base of [`Self::generator`].
    pub fn log(&self, a: u32) -> Option<u64> {
        (a != 0).then(|| self.log[a as usize] as u64)
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.size - 1)) as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        let order = self.size - 1;
        let l = self.log[a as usize] as u64;
        order / num_integer::gcd(l, order)
    }

    /// The prime-field element `c mod p`.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }
}

/// Polynomial over a [`GaloisField`], coefficients low to high.
pub type FieldPoly = Vec<u32>;

fn trim(mut a: FieldPoly) -> FieldPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` by a nonzero `b` over `field`.
pub fn poly_rem(field: &GaloisField, a: &[u32], b: &[u32]) -> FieldPoly {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv_lead = field.inv(b[db]).expect("nonzero divisor");
    let mut rem = trim(a.to_vec());
    while rem.len() > db {
        let top = rem.len() - 1;
        let c = field.mul(rem[top], inv_lead);
        for (j, &bc) in b.iter().enumerate() {
            let idx = top - db + j;
            rem[idx] = field.sub(rem[idx], field.mul(c, bc));
        }
        rem = trim(rem);
    }
    rem
}

pub fn poly_mul(field: &GaloisField, a: &[u32], b: &[u32]) -> FieldPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    trim(out)
}

pub fn poly_eval(field: &GaloisField, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

/// `X^e mod modulus` over `field`.
pub fn x_pow_mod(field: &GaloisField, mut e: u64, modulus: &[u32]) -> FieldPoly {
    let mut acc: FieldPoly = poly_rem(field, &[1], modulus);
    let mut base: FieldPoly = poly_rem(field, &[0, 1], modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(field, &poly_mul(field, &acc, &base), modulus);
        }
        base = poly_rem(field, &poly_mul(field, &base, &base), modulus);
        e >>= 1;
    }
    acc
}

fn monic_from_index(q: u64, degree: usize, index: u64) -> FieldPoly {
    let mut coeffs: Vec<u32> = decode_digits(index, q, degree).into_iter().map(|c| c as u32).collect();
    coeffs.push(1);
    coeffs
}

/// Every monic irreducible polynomial of degree `a` over `field`, ordered by
/// the integer `sum_{i<a} c_i q^i` of their lower coefficients.
pub fn irreducible_polys(field: &GaloisField, a: u32, bound: u64) -> Result<Vec<FieldPoly>> {
    let q = field.size();
    let count = q
        .checked_pow(a)
        .filter(|&c| c <= bound)
        .ok_or_else(|| Error::ScaleLimit(format!("q^a = {q}^{a} exceeds bound {bound}")))?;
    let mut smaller: Vec<FieldPoly> = Vec::new();
    for d in 1..=a / 2 {
        smaller.extend(irreducible_polys(field, d, bound)?);
    }
    Ok((0..count)
        .map(|idx| monic_from_index(q, a as usize, idx))
        .filter(|f| smaller.iter().all(|g| !poly_rem(field, f, g).is_empty()))
        .collect())
}

/// `F_q` together with `F_{q^n}` and a fixed embedding of the former into
/// the latter.
#[derive(Debug, Clone)]
pub struct FieldTower {
    pub base: GaloisField,
    pub ext: GaloisField,
    embedding: Vec<u32>,
    restriction: Vec<Option<u32>>,
}

impl FieldTower {
    pub fn new(q: u64, n: u32) -> Result<Self> {
        let base = GaloisField::of_order(q)?;
        let ext = GaloisField::new(base.characteristic(), base.degree() * n)?;
        // smallest root in ext of the base modulus
        let base_mod: Vec<u32> = base.modulus().iter().map(|&c| c as u32).collect();
        let root = ext
            .elements()
            .find(|&y| poly_eval(&ext, &base_mod, y) == 0)
            .expect("F_q embeds in F_{q^n}");
        let embedding: Vec<u32> = base
            .elements()
            .map(|x| {
                base.coeffs(x)
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| ext.add(ext.mul(acc, root), c as u32))
            })
            .collect();
        let mut restriction = vec![None; ext.size() as usize];
        for (x, &y) in embedding.iter().enumerate() {
            restriction[y as usize] = Some(x as u32);
        }
        Ok(FieldTower { base, ext, embedding, restriction })
    }

    pub fn q(&self) -> u64 {
        self.base.size()
    }

    pub fn embed(&self, x: u32) -> u32 {
        self.embedding[x as usize]
    }

    /// Preimage of an element of the subfield `F_q`.
    pub fn restrict(&self, y: u32) -> Option<u32> {
        self.restriction[y as usize]
    }

    pub fn frobenius(&self, y: u32) -> u32 {
        self.ext.pow(y, self.q())
    }

    /// The Galois orbit `y, y^q, y^{q^2}, ...` (its length is the degree of `y`).
    pub fn frobenius_orbit(&self, y: u32) -> Vec<u32> {
        let mut orbit = vec![y];
        let mut cur = self.frobenius(y);
        while cur != y {
            orbit.push(cur);
            cur = self.frobenius(cur);
        }
        orbit
    }

    /// Minimal polynomial over `F_q` of an element of `F_{q^n}`.
    pub fn min_poly(&self, y: u32) -> FieldPoly {
        let mut prod: FieldPoly = vec![1];
        for root in self.frobenius_orbit(y) {
            prod = poly_mul(&self.ext, &prod, &[self.ext.neg(root), 1]);
        }
        prod.iter()
            .map(|&c| self.restrict(c).expect("coefficients lie in F_q"))
            .collect()
    }

    /// Smallest-encoded root in `F_{q^n}` of a polynomial over `F_q`.
    pub fn find_root(&self, poly: &[u32]) -> Option<u32> {
        let lifted: Vec<u32> = poly.iter().map(|&c| self.embed(c)).collect();
        self.ext.elements().find(|&y| poly_eval(&self.ext, &lifted, y) == 0)
    }
}

/// `t = t_ell * t_reg` with `t_ell = eps^j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllDecomposition {
    pub j: u64,
    pub ell_part: u32,
    pub regular_part: u32,
}

/// The field `F_{q^n}` of a reduced block together with the fixed generator
/// `eps` of its l-Sylow subgroup.
#[derive(Debug, Clone)]
pub struct SylowData {
    pub tower: FieldTower,
    pub ell: u64,
    pub ell_r: u64,
    pub epsilon: u32,
    cofactor: u64,
}

impl SylowData {
    pub fn new(ps: &ParameterSet) -> Result<Self> {
        assert!(ps.is_reduced(), "l-Sylow data is built for reduced parameters");
        let tower = FieldTower::new(ps.q, ps.n as u32)?;
        let group_order = tower.ext.size() - 1;
        let ell_r = ps.ell_r();
        let cofactor = group_order / ell_r;
        debug_assert!(group_order % ell_r == 0 && !cofactor.is_multiple_of(ps.ell));
        let epsilon = tower.ext.pow(tower.ext.generator(), cofactor);
        Ok(SylowData { tower, ell: ps.ell, ell_r, epsilon, cofactor })
    }

    /// Splits `t` into its l-part and l-regular part and returns the
    /// exponent `j` with `eps^j = t_ell`, found by scanning the Sylow group.
    pub fn ell_part_and_dlog(&self, t: u32) -> Result<EllDecomposition> {
        if t == 0 {
            return Err(Error::ZeroElement);
        }
        let f = &self.tower.ext;
        let m = self.cofactor;
        // t_ell = t^(m * (m^{-1} mod ell^r)), t_reg = t^(ell^r * (ell^{-r} mod m))
        let m_inv = mod_inverse(m % self.ell_r, self.ell_r).unwrap_or(0);
        let ell_part = f.pow(t, m * m_inv);
        let regular_part = f.mul(t, f.inv(ell_part).expect("nonzero"));
        let mut cur = 1u32;
        for j in 0..self.ell_r {
            if cur == ell_part {
                return Ok(EllDecomposition { j, ell_part, regular_part });
            }
            cur = f.mul(cur, self.epsilon);
        }
        unreachable!("the l-part lies in the group generated by eps")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::mobius;
    use crate::params::validate_parameters;

    #[test]
    fn moduli_are_smallest() {
        assert_eq!(smallest_irreducible_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(smallest_irreducible_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible_modulus(5, 1), vec![0, 1]);
    }

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2, 2), (2, 3), (3, 2), (5, 1), (2, 6)] {
            let f = GaloisField::new(p, e).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                }
            }
        }
    }

    #[test]
    fn irreducible_counts() {
        let f2 = GaloisField::of_order(2).unwrap();
        assert_eq!(irreducible_polys(&f2, 1, 1 << 20).unwrap(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(irreducible_polys(&f2, 2, 1 << 20).unwrap(), vec![vec![1, 1, 1]]);
        assert_eq!(irreducible_polys(&f2, 3, 1 << 20).unwrap().len(), 2);
        for q in [2u64, 3, 4, 5, 8] {
            let f = GaloisField::of_order(q).unwrap();
            for a in 1..=3u32 {
                let expected: i64 = (1..=a as u64)
                    .filter(|b| (a as u64).is_multiple_of(*b))
                    .map(|b| mobius(a as u64 / b) * q.pow(b as u32) as i64)
                    .sum::<i64>()
                    / a as i64;
                assert_eq!(irreducible_polys(&f, a, 1 << 20).unwrap().len() as i64, expected, "q={q} a={a}");
            }
        }
        assert!(matches!(irreducible_polys(&f2, 30, 1 << 20), Err(Error::ScaleLimit(_))));
    }

    #[test]
    fn tower_min_polys() {
        let t = FieldTower::new(4, 2).unwrap();
        for y in t.ext.elements().skip(1) {
            let mp = t.min_poly(y);
            let lifted: Vec<u32> = mp.iter().map(|&c| t.embed(c)).collect();
            assert_eq!(poly_eval(&t.ext, &lifted, y), 0);
            assert_eq!(mp.len() - 1, t.frobenius_orbit(y).len());
        }
    }

    #[test]
    fn dlog_in_f4() {
        let ps = validate_parameters(2, 3, 2, 1).unwrap();
        let s = SylowData::new(&ps).unwrap();
        let g = s.tower.ext.generator();
        assert_eq!(s.epsilon, g);
        assert_eq!(s.ell_part_and_dlog(1).unwrap().j, 0);
        assert_eq!(s.ell_part_and_dlog(s.epsilon).unwrap().j, 1);
        assert_eq!(s.ell_part_and_dlog(s.tower.ext.mul(g, g)).unwrap().j, 2);
        assert_eq!(s.ell_part_and_dlog(0), Err(Error::ZeroElement));
    }

    #[test]
    fn decomposition_is_exhaustively_consistent() {
        for (q, ell, n) in [(2, 3, 2), (2, 7, 3), (8, 3, 2), (4, 5, 2), (3, 5, 4)] {
            let ps = validate_parameters(q, ell, n, 1).unwrap();
            let s = SylowData::new(&ps).unwrap();
            let f = &s.tower.ext;
            for t in f.elements().skip(1) {
                let dec = s.ell_part_and_dlog(t).unwrap();
                assert_eq!(f.mul(f.pow(s.epsilon, dec.j), dec.regular_part), t);
                assert_ne!(f.order(dec.regular_part) % ell, 0);
                if !f.order(t).is_multiple_of(ell) {
                    assert_eq!(dec.j, 0);
                }
            }
        }
    }
}
