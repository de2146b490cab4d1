//! Conjugacy classes of `GL_n(F_q)` by rational canonical type.
//!
//! A class is a multiset of pairs `(P, lambda)` with `P` a monic irreducible
//! polynomial over `F_q` other than `X` and `lambda` a partition, subject to
//! `sum deg(P) |lambda| = n`. Polynomial coefficients are `F_q` elements in
//! the encoding of [`GaloisField`].

pub mod oracle;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::arith::{big_pow, ord_int};
use crate::error::{Error, Result};
use crate::finite_field::{irreducible_polys, x_pow_mod, FieldPoly, GaloisField};
use crate::params::ParameterSet;

/// Default bound on `q^n` for type enumeration.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 20;

/// Partitions of `k` as nonincreasing part lists, in decreasing lex order.
pub fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

/// `n(lambda) = sum_i (i - 1) lambda_i`.
fn partition_n(lambda: &[u32]) -> u64 {
    lambda.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
}

fn part_multiplicities(lambda: &[u32]) -> Vec<u64> {
    let max = lambda.iter().copied().max().unwrap_or(0) as usize;
    let mut m = vec![0u64; max + 1];
    for &p in lambda {
        m[p as usize] += 1;
    }
    m
}

/// Green's centralizer order
/// `z(Q, lambda) = Q^{|lambda| + 2n(lambda)} prod_i prod_{k<=m_i} (1 - Q^{-k})`,
/// computed as an exact integer.
pub fn green_z(big_q: u64, lambda: &[u32]) -> BigInt {
    let size: u64 = lambda.iter().map(|&p| p as u64).sum();
    let mults = part_multiplicities(lambda);
    let shift: u64 = mults.iter().map(|&m| m * (m + 1) / 2).sum();
    let mut z = big_pow(big_q, size + 2 * partition_n(lambda) - shift);
    for &m in &mults {
        for k in 1..=m {
            z *= big_pow(big_q, k) - BigInt::one();
        }
    }
    z
}

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn gl_order(q: u64, n: u64) -> BigInt {
    (0..n).map(|i| big_pow(q, n) - big_pow(q, i)).product()
}

/// One `(P, lambda)` component of a class type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassFactor {
    /// Monic irreducible polynomial over `F_q`, low to high.
    pub poly: FieldPoly,
    /// Nonincreasing partition.
    pub partition: Vec<u32>,
}

impl ClassFactor {
    pub fn degree(&self) -> u32 {
        (self.poly.len() - 1) as u32
    }

    /// `|lambda|`.
    pub fn weight(&self) -> u32 {
        self.partition.iter().sum()
    }
}

/// A conjugacy class of `GL_n(F_q)` with its size and centralizer order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassType {
    pub q: u64,
    pub n: u64,
    /// Sorted by `(degree, polynomial)`.
    pub factors: Vec<ClassFactor>,
    pub centralizer_order: BigInt,
    pub class_size: BigInt,
}

impl ClassType {
    /// Builds a class from its factors, computing the derived orders.
    pub fn new(q: u64, n: u64, mut factors: Vec<ClassFactor>) -> Self {
        factors.sort_by(|a, b| (a.degree(), &a.poly).cmp(&(b.degree(), &b.poly)));
        let ct = ClassType {
            q,
            n,
            factors,
            centralizer_order: BigInt::one(),
            class_size: BigInt::one(),
        };
        let centralizer_order = centralizer_order(&ct);
        let class_size = gl_order(q, n) / &centralizer_order;
        ClassType { centralizer_order, class_size, ..ct }
    }

    pub fn is_primary(&self) -> bool {
        self.factors.len() == 1
    }

    /// Every partition is `(1, ..., 1)`.
    pub fn is_diagonalizable(&self) -> bool {
        self.factors.iter().all(|f| f.partition.iter().all(|&p| p == 1))
    }

    /// Same condition as [`Self::is_diagonalizable`]: semisimple over `F_q`
    /// means diagonalizable over the algebraic closure.
    pub fn is_semisimple(&self) -> bool {
        self.is_diagonalizable()
    }

    /// Number of parts of the partition, for primary classes.
    pub fn jordan_blocks(&self) -> Option<u32> {
        self.is_primary().then(|| self.factors[0].partition.len() as u32)
    }

    /// Degree over `F_q` of the eigenvalues, for primary classes.
    pub fn eigenvalue_degree(&self) -> Option<u32> {
        self.is_primary().then(|| self.factors[0].degree())
    }

    /// `sum_j |lambda^(j)|`: the `F_q`-rank of the centralizer of the
    /// semisimple part.
    pub fn centralizer_rank(&self) -> u32 {
        self.factors.iter().map(ClassFactor::weight).sum()
    }

    /// The regular unipotent class: `(X - 1)` with a single block of size `n`.
    pub fn is_regular_unipotent(&self) -> bool {
        self.is_primary()
            && self.factors[0].poly == unit_root_poly(self.q)
            && self.factors[0].partition == [self.n as u32]
    }

    /// Canonical sort key: degree profile, then polynomials, then partitions.
    pub fn sort_key(&self) -> (Vec<(u32, u32)>, Vec<ClassFactor>) {
        let profile = self.factors.iter().map(|f| (f.degree(), f.weight())).collect();
        (profile, self.factors.clone())
    }
}

fn unit_root_poly(q: u64) -> FieldPoly {
    // X - 1 = X + (p - 1); in the field encoding -1 is p - 1
    let p = crate::arith::prime_power(q).expect("prime power").0;
    vec![(p - 1) as u32, 1]
}

fn format_poly(poly: &[u32]) -> String {
    let mut terms = Vec::new();
    for (k, &c) in poly.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{k}"),
        };
        terms.push(match (c, k) {
            (_, 0) => c.to_string(),
            (1, _) => mono,
            _ => format!("{c}{mono}"),
        });
    }
    terms.join("+")
}

impl fmt::Display for ClassType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                let lam: Vec<String> = fac.partition.iter().map(ToString::to_string).collect();
                format!("({})^[{}]", format_poly(&fac.poly), lam.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `prod_j z(q^{a_j}, lambda^(j))`.
pub fn centralizer_order(ct: &ClassType) -> BigInt {
    ct.factors
        .iter()
        .map(|f| green_z(ct.q.pow(f.degree()), &f.partition))
        .product()
}

/// All class types of `GL_n(F_q)` in canonical order.
pub fn enumerate_classes(q: u64, n: u64, bound: u64) -> Result<Vec<ClassType>> {
    let within = q.checked_pow(n as u32).is_some_and(|s| s <= bound);
    if !within {
        return Err(Error::ScaleLimit(format!("q^n = {q}^{n} exceeds enumeration bound {bound}")));
    }
    let field = GaloisField::of_order(q)?;
    let mut polys: Vec<FieldPoly> = Vec::new();
    for a in 1..=n as u32 {
        polys.extend(irreducible_polys(&field, a, bound)?.into_iter().filter(|p| p != &vec![0, 1]));
    }
    let partitions_by_size: Vec<Vec<Vec<u32>>> = (0..=n as u32).map(partitions).collect();

    fn rec(
        polys: &[FieldPoly],
        parts: &[Vec<Vec<u32>>],
        idx: usize,
        remaining: u32,
        cur: &mut Vec<ClassFactor>,
        out: &mut Vec<Vec<ClassFactor>>,
    ) {
        if remaining == 0 {
            out.push(cur.clone());
            return;
        }
        if idx == polys.len() {
            return;
        }
        let deg = (polys[idx].len() - 1) as u32;
        if deg > remaining {
            // polys are sorted by degree
            return;
        }
        rec(polys, parts, idx + 1, remaining, cur, out);
        for k in 1..=remaining / deg {
            for lambda in &parts[k as usize] {
                cur.push(ClassFactor { poly: polys[idx].clone(), partition: lambda.clone() });
                rec(polys, parts, idx + 1, remaining - deg * k, cur, out);
                cur.pop();
            }
        }
    }

    let mut raw = Vec::new();
    rec(&polys, &partitions_by_size, 0, n as u32, &mut Vec::new(), &mut raw);
    let mut classes: Vec<ClassType> = raw.into_iter().map(|f| ClassType::new(q, n, f)).collect();
    classes.sort_by_key(ClassType::sort_key);
    Ok(classes)
}

/// Flags consumed by the case analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPredicates {
    pub primary: bool,
    pub diagonalizable: bool,
    /// Elements of the class have order prime to `l`.
    pub ell_regular: bool,
    pub ord_ell_of_size: u32,
}

/// Whether the roots of an irreducible `P` over `F_q` have order prime to `l`:
/// `X^{m} = 1 mod P` where `m` is the l-free part of `q^{deg P} - 1`.
pub fn roots_are_ell_regular(field: &GaloisField, poly: &[u32], ell: u64) -> bool {
    let a = (poly.len() - 1) as u32;
    let mut m = field.size().pow(a) - 1;
    while m.is_multiple_of(ell) {
        m /= ell;
    }
    x_pow_mod(field, m, poly) == vec![1]
}

/// Computes the predicates and checks that a class which is not both
/// primary and diagonalizable has `ord_l |C| = r`.
pub fn class_predicates(ct: &ClassType, ps: &ParameterSet) -> Result<ClassPredicates> {
    let field = GaloisField::of_order(ct.q)?;
    let preds = ClassPredicates {
        primary: ct.is_primary(),
        diagonalizable: ct.is_diagonalizable(),
        ell_regular: ct.factors.iter().all(|f| roots_are_ell_regular(&field, &f.poly, ps.ell)),
        ord_ell_of_size: ord_int(&ct.class_size, ps.ell),
    };
    if !(preds.primary && preds.diagonalizable) && preds.ord_ell_of_size != ps.r {
        return Err(Error::assertion(
            "centralizer-order",
            format!("class {ct}: ord_l |C| = {}, expected r = {}", preds.ord_ell_of_size, ps.r),
        ));
    }
    Ok(preds)
}

/// `ord_l |GL_n(F_q)|`.
pub fn ord_ell_group_order(q: u64, n: u64, ell: u64) -> u32 {
    ord_int(&gl_order(q, n), ell)
}

/// Converts a class size to `u64` when it fits (for reports and tests).
pub fn size_u64(ct: &ClassType) -> Option<u64> {
    ct.class_size.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_parameters;

    fn find(classes: &[ClassType], f: impl Fn(&ClassType) -> bool) -> &ClassType {
        classes.iter().find(|c| f(c)).expect("class present")
    }

    #[test]
    fn partitions_small() {
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn green_formula_small_cases() {
        assert_eq!(green_z(2, &[1]), BigInt::from(1));
        assert_eq!(green_z(5, &[1, 1]), gl_order(5, 2));
        assert_eq!(green_z(2, &[2]), BigInt::from(2));
        assert_eq!(green_z(2, &[3]), BigInt::from(4));
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_classes(2, 2, 1 << 20).unwrap().len(), 3);
        assert_eq!(enumerate_classes(3, 2, 1 << 20).unwrap().len(), 8);
        assert_eq!(enumerate_classes(4, 2, 1 << 20).unwrap().len(), 15);
        assert_eq!(enumerate_classes(2, 3, 1 << 20).unwrap().len(), 6);
        assert_eq!(enumerate_classes(8, 2, 1 << 20).unwrap().len(), 63);
        // q^4 - q for GL_4(F_q)
        assert_eq!(enumerate_classes(3, 4, 1 << 20).unwrap().len(), 78);
        assert!(matches!(enumerate_classes(16, 6, 1 << 20), Err(Error::ScaleLimit(_))));
    }

    #[test]
    fn sizes_partition_the_group() {
        for (q, n) in [(2, 2), (3, 2), (4, 2), (2, 3), (8, 2), (3, 4), (2, 4)] {
            let total: BigInt = enumerate_classes(q, n, 1 << 20).unwrap().iter().map(|c| c.class_size.clone()).sum();
            assert_eq!(total, gl_order(q, n), "GL_{n}(F_{q})");
        }
    }

    #[test]
    fn gl2_f2_examples() {
        let classes = enumerate_classes(2, 2, 1 << 20).unwrap();
        let unip = find(&classes, ClassType::is_regular_unipotent);
        assert_eq!(unip.centralizer_order, BigInt::from(2));
        assert_eq!(unip.class_size, BigInt::from(3));
        let ell = find(&classes, |c| c.eigenvalue_degree() == Some(2));
        assert_eq!(ell.centralizer_order, BigInt::from(3));
        assert_eq!(ell.class_size, BigInt::from(2));
        let gl3 = enumerate_classes(2, 3, 1 << 20).unwrap();
        assert_eq!(find(&gl3, ClassType::is_regular_unipotent).class_size, BigInt::from(42));
    }

    #[test]
    fn predicates_and_centralizer_lemma() {
        let ps = validate_parameters(2, 3, 2, 1).unwrap();
        let classes = enumerate_classes(2, 2, 1 << 20).unwrap();
        let unip = find(&classes, ClassType::is_regular_unipotent);
        let p = class_predicates(unip, &ps).unwrap();
        assert!(p.primary && !p.diagonalizable && p.ord_ell_of_size == 1);
        let ell = find(&classes, |c| c.eigenvalue_degree() == Some(2));
        let p = class_predicates(ell, &ps).unwrap();
        assert!(p.primary && p.diagonalizable && !p.ell_regular && p.ord_ell_of_size == 0);

        let ps = validate_parameters(2, 7, 3, 1).unwrap();
        let gl3 = enumerate_classes(2, 3, 1 << 20).unwrap();
        let mixed = find(&gl3, |c| c.factors.len() == 2);
        assert_eq!(mixed.class_size, BigInt::from(56));
        let p = class_predicates(mixed, &ps).unwrap();
        assert!(!p.primary && p.ord_ell_of_size == 1);
    }

    #[test]
    fn centralizer_lemma_all_cases() {
        for (q, ell, n) in [(2, 3, 2), (2, 7, 3), (8, 3, 2), (4, 5, 2), (3, 5, 4)] {
            let ps = validate_parameters(q, ell, n, 1).unwrap();
            assert_eq!(ord_ell_group_order(q, n, ell), ps.r);
            for ct in enumerate_classes(q, n, 1 << 20).unwrap() {
                class_predicates(&ct, &ps).unwrap();
            }
        }
    }
}
