//! The classical character table of `GL_2(F_q)`, built independently of the
//! class-type machinery and used as an oracle for the block characters.
//!
//! Fix a generator `g` of `F_{q^2}^x` and put `N = q^2 - 1`. Every value is
//! an integer combination of powers of `zeta_N`, stored sparsely as
//! exponent/coefficient pairs in `Z[Z/N]` and reduced only on demand.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::{mod_inverse, rat, Rational};
use crate::classes::{gl_order, ClassFactor, ClassType};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::finite_field::FieldTower;

/// Sparse element of `Z[Z/N]`: exponent mod `N` to coefficient.
pub type GroupRingValue = BTreeMap<u64, i64>;

/// Column of the table, given by discrete logs to base `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2Class {
    /// `a I` with `a = g^e`.
    Central(u64),
    /// `a` times a nontrivial unipotent.
    CentralUnipotent(u64),
    /// `diag(g^e1, g^e2)` with `e1 < e2`.
    Split(u64, u64),
    /// Elliptic element with eigenvalues `g^e`, `g^{eq}`; `e` is the smaller.
    Elliptic(u64),
}

/// Row of the table. Characters of `F_q^x` are `g^e -> zeta_N^{u e}` with
/// `u` taken mod `q - 1`; characters of `F_{q^2}^x` are `g^e -> zeta_N^{k e}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2Character {
    /// `alpha_u o det`.
    Linear(u64),
    /// `St (x) alpha_u o det`.
    Steinberg(u64),
    /// Induced from `(alpha_u, alpha_v)`, `u < v`.
    PrincipalSeries(u64, u64),
    /// Attached to `theta_k` with `(q + 1)` not dividing `k`; `k` is the
    /// smaller of `k`, `kq mod N`.
    Cuspidal(u64),
}

#[derive(Debug, Clone)]
pub struct Gl2Table {
    pub q: u64,
    pub conductor: u64,
    pub group_order: BigInt,
    pub classes: Vec<Gl2Class>,
    pub class_sizes: Vec<u64>,
    pub characters: Vec<Gl2Character>,
    /// `values[char][class]`.
    pub values: Vec<Vec<GroupRingValue>>,
    tower: FieldTower,
}

fn term(e: u64, c: i64) -> GroupRingValue {
    let mut v = GroupRingValue::new();
    if c != 0 {
        v.insert(e, c);
    }
    v
}

fn add_into(acc: &mut GroupRingValue, other: &GroupRingValue, n: u64) {
    for (&e, &c) in other {
        let slot = acc.entry(e % n).or_insert(0);
        *slot += c;
        if *slot == 0 {
            acc.remove(&(e % n));
        }
    }
}

/// `a * conj(b) * weight` in `Z[Z/N]`.
fn mul_conj(a: &GroupRingValue, b: &GroupRingValue, weight: i64, n: u64, acc: &mut GroupRingValue) {
    for (&ea, &ca) in a {
        for (&eb, &cb) in b {
            let e = (ea + n - eb) % n;
            add_into(acc, &term(e, ca * cb * weight), n);
        }
    }
}

/// Reduces a group-ring value into `Q(zeta_N)`.
pub fn reduce(value: &GroupRingValue, conductor: u64) -> CyclotomicNumber {
    let coeffs: Vec<(i64, Rational)> = value.iter().map(|(&e, &c)| (e as i64, rat(c))).collect();
    CyclotomicNumber::from_exponent_sum(conductor, coeffs.iter().map(|(e, c)| (*e, c)))
}

/// Builds the full table for `GL_2(F_q)`.
pub fn gl2_table_oracle(q: u64, max_group_order: u64) -> Result<Gl2Table> {
    let group_order = gl_order(q, 2);
    if group_order > BigInt::from(max_group_order) {
        return Err(Error::ScaleLimit(format!(
            "|GL_2(F_{q})| = {group_order} exceeds the bound {max_group_order}"
        )));
    }
    let tower = FieldTower::new(q, 2)?;
    let n = q * q - 1;
    let step = q + 1; // F_q^x = <g^(q+1)>
    let base_exps: Vec<u64> = (0..q - 1).map(|s| s * step).collect();

    let mut classes = Vec::new();
    let mut class_sizes = Vec::new();
    for &e in &base_exps {
        classes.push(Gl2Class::Central(e));
        class_sizes.push(1);
    }
    for &e in &base_exps {
        classes.push(Gl2Class::CentralUnipotent(e));
        class_sizes.push(n);
    }
    for (i, &e1) in base_exps.iter().enumerate() {
        for &e2 in &base_exps[i + 1..] {
            classes.push(Gl2Class::Split(e1, e2));
            class_sizes.push(q * (q + 1));
        }
    }
    for e in 0..n {
        if e % step != 0 && e < (e * q) % n {
            classes.push(Gl2Class::Elliptic(e));
            class_sizes.push(q * (q - 1));
        }
    }

    let mut characters = Vec::new();
    for u in 0..q - 1 {
        characters.push(Gl2Character::Linear(u));
    }
    for u in 0..q - 1 {
        characters.push(Gl2Character::Steinberg(u));
    }
    for u in 0..q - 1 {
        for v in u + 1..q - 1 {
            characters.push(Gl2Character::PrincipalSeries(u, v));
        }
    }
    for k in 0..n {
        if k % step != 0 && k < (k * q) % n {
            characters.push(Gl2Character::Cuspidal(k));
        }
    }

    let qi = q as i64;
    let value = |chi: Gl2Character, cls: Gl2Class| -> GroupRingValue {
        use Gl2Character as C;
        use Gl2Class as K;
        let alpha = |u: u64, e: u64| (u * e) % n;
        match (chi, cls) {
            (C::Linear(u), K::Central(e) | K::CentralUnipotent(e)) => term(alpha(u, 2 * e), 1),
            (C::Linear(u), K::Split(e1, e2)) => term(alpha(u, e1 + e2), 1),
            (C::Linear(u), K::Elliptic(e)) => term(alpha(u, e * (q + 1)), 1),
            (C::Steinberg(u), K::Central(e)) => term(alpha(u, 2 * e), qi),
            (C::Steinberg(_), K::CentralUnipotent(_)) => GroupRingValue::new(),
            (C::Steinberg(u), K::Split(e1, e2)) => term(alpha(u, e1 + e2), 1),
            (C::Steinberg(u), K::Elliptic(e)) => term(alpha(u, e * (q + 1)), -1),
            (C::PrincipalSeries(u, v), K::Central(e)) => term(alpha(u + v, e), qi + 1),
            (C::PrincipalSeries(u, v), K::CentralUnipotent(e)) => term(alpha(u + v, e), 1),
            (C::PrincipalSeries(u, v), K::Split(e1, e2)) => {
                let mut acc = term((alpha(u, e1) + alpha(v, e2)) % n, 1);
                add_into(&mut acc, &term((alpha(u, e2) + alpha(v, e1)) % n, 1), n);
                acc
            }
            (C::PrincipalSeries(..), K::Elliptic(_)) => GroupRingValue::new(),
            (C::Cuspidal(k), K::Central(e)) => term(alpha(k, e), qi - 1),
            (C::Cuspidal(k), K::CentralUnipotent(e)) => term(alpha(k, e), -1),
            (C::Cuspidal(_), K::Split(..)) => GroupRingValue::new(),
            (C::Cuspidal(k), K::Elliptic(e)) => {
                let mut acc = term(alpha(k, e), -1);
                add_into(&mut acc, &term(alpha(k, e * q), -1), n);
                acc
            }
        }
    };

    let values: Vec<Vec<GroupRingValue>> = characters
        .iter()
        .map(|&chi| classes.iter().map(|&cls| value(chi, cls)).collect())
        .collect();

    let table = Gl2Table { q, conductor: n, group_order, classes, class_sizes, characters, values, tower };
    table.check_orthogonality()?;
    Ok(table)
}

impl Gl2Table {
    pub fn value(&self, chi: usize, class: usize) -> CyclotomicNumber {
        reduce(&self.values[chi][class], self.conductor)
    }

    pub fn dimension(&self, chi: usize) -> i64 {
        // column 0 is the identity
        self.values[chi][0].get(&0).copied().unwrap_or(0)
    }

    /// Row and column orthogonality and `sum dim^2 = |G|`, all exact.
    pub fn check_orthogonality(&self) -> Result<()> {
        let n = self.conductor;
        let order = self.group_order.to_i64().expect("oracle-scale group");
        let dims: i64 = (0..self.characters.len()).map(|c| self.dimension(c).pow(2)).sum();
        if dims != order {
            return Err(Error::assertion("gl2-dimensions", format!("sum dim^2 = {dims}, |G| = {order}")));
        }
        if self.characters.len() != self.classes.len() {
            return Err(Error::assertion("gl2-square", "table is not square"));
        }
        for a in 0..self.characters.len() {
            for b in a..self.characters.len() {
                let mut acc = GroupRingValue::new();
                for (c, &size) in self.class_sizes.iter().enumerate() {
                    mul_conj(&self.values[a][c], &self.values[b][c], size as i64, n, &mut acc);
                }
                let expected = if a == b { order } else { 0 };
                if reduce(&acc, n).as_rational() != Some(rat(expected)) {
                    return Err(Error::assertion("gl2-row-orthogonality", format!("rows {a}, {b}")));
                }
            }
        }
        for c1 in 0..self.classes.len() {
            for c2 in c1..self.classes.len() {
                let mut acc = GroupRingValue::new();
                for row in &self.values {
                    mul_conj(&row[c1], &row[c2], 1, n, &mut acc);
                }
                let expected = if c1 == c2 { order / self.class_sizes[c1] as i64 } else { 0 };
                if reduce(&acc, n).as_rational() != Some(rat(expected)) {
                    return Err(Error::assertion("gl2-column-orthogonality", format!("columns {c1}, {c2}")));
                }
            }
        }
        Ok(())
    }

    /// The class type of a column.
    pub fn class_type(&self, class: usize) -> ClassType {
        let base = &self.tower.base;
        let ext = &self.tower.ext;
        let to_base = |e: u64| self.tower.restrict(ext.exp(e)).expect("element of F_q");
        let linear = |e: u64| vec![base.neg(to_base(e)), 1];
        let factors = match self.classes[class] {
            Gl2Class::Central(e) => vec![ClassFactor { poly: linear(e), partition: vec![1, 1] }],
            Gl2Class::CentralUnipotent(e) => vec![ClassFactor { poly: linear(e), partition: vec![2] }],
            Gl2Class::Split(e1, e2) => vec![
                ClassFactor { poly: linear(e1), partition: vec![1] },
                ClassFactor { poly: linear(e2), partition: vec![1] },
            ],
            Gl2Class::Elliptic(e) => {
                vec![ClassFactor { poly: self.tower.min_poly(ext.exp(e)), partition: vec![1] }]
            }
        };
        ClassType::new(self.q, 2, factors)
    }

    /// Column index of a class type.
    pub fn column_of(&self, ct: &ClassType) -> Option<usize> {
        (0..self.classes.len()).find(|&c| &self.class_type(c) == ct)
    }

    pub fn steinberg_row(&self) -> usize {
        self.characters.iter().position(|&c| c == Gl2Character::Steinberg(0)).expect("present")
    }

    /// Row of the cuspidal character whose `theta` is trivial on the
    /// l-regular part of `F_{q^2}^x` and sends `eps = g^{N / l^r}` to
    /// `zeta_{l^r}^i`.
    pub fn block_cuspidal_row(&self, ell_r: u64, i: u64) -> Option<usize> {
        let n = self.conductor;
        if !n.is_multiple_of(ell_r) {
            return None;
        }
        let m = n / ell_r;
        let k = m * (i % ell_r * mod_inverse(m % ell_r, ell_r)? % ell_r);
        let k = k.min(k * self.q % n);
        self.characters.iter().position(|&c| c == Gl2Character::Cuspidal(k))
    }

    /// Number of classes (equivalently of characters).
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::BlockCharacters;
    use crate::classes::enumerate_classes;
    use crate::params::validate_parameters;

    #[test]
    fn q2_is_the_s3_table() {
        let t = gl2_table_oracle(2, 100_000).unwrap();
        assert_eq!(t.len(), 3);
        let mut dims: Vec<i64> = (0..3).map(|c| t.dimension(c)).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        let mut sizes = t.class_sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        // sign character: -1 on transpositions (the unipotent class)
        let sign = t.steinberg_row();
        let unip = t.classes.iter().position(|c| matches!(c, Gl2Class::CentralUnipotent(_))).unwrap();
        let ell = t.classes.iter().position(|c| matches!(c, Gl2Class::Elliptic(_))).unwrap();
        assert_eq!(t.value(sign, unip).as_rational(), Some(rat(0)));
        assert_eq!(t.value(sign, ell).as_rational(), Some(rat(-1)));
    }

    #[test]
    fn columns_match_class_enumeration() {
        for q in [2, 3, 4, 5, 8] {
            let t = gl2_table_oracle(q, 100_000).unwrap();
            let mut from_table: Vec<ClassType> = (0..t.len()).map(|c| t.class_type(c)).collect();
            let mut enumerated = enumerate_classes(q, 2, 1 << 20).unwrap();
            let key = |c: &ClassType| c.sort_key();
            from_table.sort_by_key(key);
            enumerated.sort_by_key(key);
            assert_eq!(from_table, enumerated, "q = {q}");
            for (c, &size) in t.class_sizes.iter().enumerate() {
                assert_eq!(t.class_type(c).class_size, BigInt::from(size));
            }
        }
    }

    #[test]
    fn block_rows_agree_with_formulas() {
        for (q, ell) in [(2, 3), (4, 5), (8, 3), (5, 3), (9, 5)] {
            let ps = validate_parameters(q, ell, 2, 1).unwrap();
            let bc = BlockCharacters::new(&ps).unwrap();
            let t = gl2_table_oracle(q, 100_000).unwrap();
            let st = t.steinberg_row();
            for ct in enumerate_classes(q, 2, 1 << 20).unwrap() {
                let col = t.column_of(&ct).unwrap();
                assert_eq!(bc.steinberg_value(&ct).embed(t.conductor), t.value(st, col));
                for i in 1..bc.conductor() {
                    if i % ell == 0 {
                        continue;
                    }
                    let row = t.block_cuspidal_row(bc.conductor(), i).unwrap();
                    assert_eq!(
                        bc.cuspidal_value(i, &ct).unwrap().embed(t.conductor),
                        t.value(row, col),
                        "q={q} ell={ell} i={i} class {ct}"
                    );
                }
            }
        }
    }

    #[test]
    fn scale_limit() {
        assert!(matches!(gl2_table_oracle(64, 100_000), Err(Error::ScaleLimit(_))));
    }
}
