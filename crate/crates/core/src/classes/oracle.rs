//! Brute-force conjugacy census of small `GL_n(F_q)`, independent of the
//! type-based enumeration. Also recovers the rational canonical type of a
//! matrix from kernel dimensions of `P(g)^k`.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite_field::{irreducible_polys, FieldPoly, GaloisField};

use super::{gl_order, ClassFactor, ClassType};

/// Default bound on `|GL_n(F_q)|` for matrix enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 100_000;

/// Square matrix over a [`GaloisField`], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FfMatrix {
    pub n: usize,
    pub entries: Vec<u32>,
}

impl FfMatrix {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        FfMatrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self, f: &GaloisField) -> Self {
        let n = self.n;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = f.add(entries[i * n + j], f.mul(a, other.get(k, j)));
                }
            }
        }
        FfMatrix { n, entries }
    }

    pub fn add(&self, other: &Self, f: &GaloisField) -> Self {
        FfMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: u32, f: &GaloisField) -> Self {
        FfMatrix { n: self.n, entries: self.entries.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn rank(&self, f: &GaloisField) -> usize {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| m[r * n + col] != 0) else {
                continue;
            };
            for c in 0..n {
                m.swap(p * n + c, rank * n + c);
            }
            let inv = f.inv(m[rank * n + col]).unwrap();
            for r in 0..n {
                if r != rank && m[r * n + col] != 0 {
                    let factor = f.mul(m[r * n + col], inv);
                    for c in 0..n {
                        m[r * n + c] = f.sub(m[r * n + c], f.mul(factor, m[rank * n + c]));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn inverse(&self, f: &GaloisField) -> Option<Self> {
        let n = self.n;
        let w = 2 * n;
        let mut m = vec![0u32; n * w];
        for i in 0..n {
            for j in 0..n {
                m[i * w + j] = self.get(i, j);
            }
            m[i * w + n + i] = 1;
        }
        for col in 0..n {
            let p = (col..n).find(|&r| m[r * w + col] != 0)?;
            for c in 0..w {
                m.swap(p * w + c, col * w + c);
            }
            let inv = f.inv(m[col * w + col]).unwrap();
            for c in 0..w {
                m[col * w + c] = f.mul(m[col * w + c], inv);
            }
            for r in 0..n {
                if r != col && m[r * w + col] != 0 {
                    let factor = m[r * w + col];
                    for c in 0..w {
                        m[r * w + c] = f.sub(m[r * w + c], f.mul(factor, m[col * w + c]));
                    }
                }
            }
        }
        let entries = (0..n).flat_map(|i| m[i * w + n..i * w + w].to_vec()).collect();
        Some(FfMatrix { n, entries })
    }

    /// `P(self)` for a polynomial over the same field.
    pub fn eval_poly(&self, poly: &[u32], f: &GaloisField) -> Self {
        let mut acc = FfMatrix { n: self.n, entries: vec![0; self.n * self.n] };
        for &c in poly.iter().rev() {
            acc = acc.mul(self, f).add(&FfMatrix::identity(self.n).scale(c, f), f);
        }
        acc
    }
}

/// Companion matrix of a monic polynomial (ones on the subdiagonal, last
/// column `-c_0, ..., -c_{d-1}`).
pub fn companion(poly: &[u32], f: &GaloisField) -> FfMatrix {
    let d = poly.len() - 1;
    let mut entries = vec![0; d * d];
    for i in 1..d {
        entries[i * d + i - 1] = 1;
    }
    for i in 0..d {
        entries[i * d + d - 1] = f.neg(poly[i]);
    }
    FfMatrix { n: d, entries }
}

/// Block-diagonal representative: one companion block of `P^{lambda_k}`
/// per part.
pub fn representative_matrix(ct: &ClassType, f: &GaloisField) -> FfMatrix {
    let n = ct.n as usize;
    let mut entries = vec![0; n * n];
    let mut offset = 0;
    for factor in &ct.factors {
        for &part in &factor.partition {
            let mut power: FieldPoly = vec![1];
            for _ in 0..part {
                power = crate::finite_field::poly_mul(f, &power, &factor.poly);
            }
            let block = companion(&power, f);
            for i in 0..block.n {
                for j in 0..block.n {
                    entries[(offset + i) * n + offset + j] = block.get(i, j);
                }
            }
            offset += block.n;
        }
    }
    FfMatrix { n, entries }
}

/// Rational canonical type of an invertible matrix, from the nullities of
/// `P(g)^k` for every irreducible `P` of degree `<= n`.
pub fn class_type_of(g: &FfMatrix, f: &GaloisField, polys: &[FieldPoly]) -> Vec<ClassFactor> {
    let n = g.n;
    let mut factors = Vec::new();
    for poly in polys {
        let a = poly.len() - 1;
        let pg = g.eval_poly(poly, f);
        let mut power = FfMatrix::identity(n);
        let mut nullities = vec![0usize];
        for _ in 0..n / a {
            power = power.mul(&pg, f);
            nullities.push(n - power.rank(f));
        }
        if nullities[1] == 0 {
            continue;
        }
        // number of parts >= k is (null_k - null_{k-1}) / a
        let at_least: Vec<usize> = (1..nullities.len()).map(|k| (nullities[k] - nullities[k - 1]) / a).collect();
        let mut partition = Vec::new();
        for (k, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(k + 1).copied().unwrap_or(0);
            for _ in 0..cnt - next {
                partition.push(k as u32 + 1);
            }
        }
        partition.sort_unstable_by(|a, b| b.cmp(a));
        factors.push(ClassFactor { poly: poly.clone(), partition });
    }
    factors
}

/// One conjugacy class found by brute force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusEntry {
    pub class: ClassType,
    pub size: u64,
    /// Counted directly as the number of elements commuting with the
    /// representative.
    pub centralizer: u64,
}

/// Result of the brute-force census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixCensus {
    pub q: u64,
    pub n: u64,
    pub group_order: u64,
    pub classes: Vec<CensusEntry>,
}

fn all_invertible(q: u64, n: usize, f: &GaloisField) -> Vec<FfMatrix> {
    let total = q.pow((n * n) as u32);
    (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let entries: Vec<u32> = (0..n * n)
                .map(|_| {
                    let c = (code % q) as u32;
                    code /= q;
                    c
                })
                .collect();
            let m = FfMatrix { n, entries };
            (m.rank(f) == n).then_some(m)
        })
        .collect()
}

/// Conjugacy classes of `GL_n(F_q)` by explicit conjugation.
pub fn matrix_oracle(q: u64, n: u64, max_group_order: u64) -> Result<MatrixCensus> {
    let order = gl_order(q, n);
    if order > BigInt::from(max_group_order) {
        return Err(Error::ScaleLimit(format!(
            "|GL_{n}(F_{q})| = {order} exceeds the matrix-oracle bound {max_group_order}"
        )));
    }
    let f = GaloisField::of_order(q)?;
    let nn = n as usize;
    let group = all_invertible(q, nn, &f);
    let inverses: Vec<FfMatrix> = group.par_iter().map(|h| h.inverse(&f).unwrap()).collect();
    let index: HashMap<&FfMatrix, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut polys = Vec::new();
    for a in 1..=n as u32 {
        polys.extend(irreducible_polys(&f, a, u64::MAX)?.into_iter().filter(|p| p != &vec![0, 1]));
    }

    let mut class_of = vec![usize::MAX; group.len()];
    let mut reps = Vec::new();
    for (gi, g) in group.iter().enumerate() {
        if class_of[gi] != usize::MAX {
            continue;
        }
        let cid = reps.len();
        let conjugates: Vec<usize> = group
            .par_iter()
            .zip(&inverses)
            .map(|(h, hinv)| index[&h.mul(g, &f).mul(hinv, &f)])
            .collect();
        for c in conjugates {
            class_of[c] = cid;
        }
        reps.push(gi);
    }
    let mut sizes = vec![0u64; reps.len()];
    for &c in &class_of {
        sizes[c] += 1;
    }
    let mut classes: Vec<CensusEntry> = reps
        .par_iter()
        .zip(&sizes)
        .map(|(&gi, &size)| {
            let g = &group[gi];
            let centralizer = group.iter().filter(|h| h.mul(g, &f) == g.mul(h, &f)).count() as u64;
            let factors = class_type_of(g, &f, &polys);
            CensusEntry { class: ClassType::new(q, n, factors), size, centralizer }
        })
        .collect();
    classes.sort_by_key(|e| e.class.sort_key());
    Ok(MatrixCensus { q, n, group_order: group.len() as u64, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::enumerate_classes;

    #[test]
    fn census_matches_types() {
        for (q, n, count) in [(2, 2, 3), (3, 2, 8), (4, 2, 15), (2, 3, 6)] {
            let census = matrix_oracle(q, n, DEFAULT_MAX_GROUP_ORDER).unwrap();
            assert_eq!(census.classes.len(), count);
            let types = enumerate_classes(q, n, 1 << 20).unwrap();
            assert_eq!(types.len(), count);
            for (entry, ct) in census.classes.iter().zip(&types) {
                assert_eq!(&entry.class, ct);
                assert_eq!(BigInt::from(entry.size), ct.class_size);
                assert_eq!(BigInt::from(entry.centralizer), ct.centralizer_order);
            }
        }
    }

    #[test]
    fn gl3_f2_sizes() {
        let census = matrix_oracle(2, 3, DEFAULT_MAX_GROUP_ORDER).unwrap();
        let mut sizes: Vec<u64> = census.classes.iter().map(|e| e.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 21, 24, 24, 42, 56]);
        assert_eq!(census.group_order, 168);
    }

    #[test]
    fn representatives_have_their_type() {
        for (q, n) in [(2, 3), (3, 2), (4, 2), (2, 4), (3, 3)] {
            let f = GaloisField::of_order(q).unwrap();
            let mut polys = Vec::new();
            for a in 1..=n as u32 {
                polys.extend(irreducible_polys(&f, a, u64::MAX).unwrap().into_iter().filter(|p| p != &vec![0, 1]));
            }
            for ct in enumerate_classes(q, n, 1 << 20).unwrap() {
                let g = representative_matrix(&ct, &f);
                assert!(g.inverse(&f).is_some());
                let ty = ClassType::new(q, n, class_type_of(&g, &f, &polys));
                assert_eq!(ty, ct);
            }
        }
    }

    #[test]
    fn scale_limit() {
        assert!(matches!(matrix_oracle(16, 3, DEFAULT_MAX_GROUP_ORDER), Err(Error::ScaleLimit(_))));
    }
}
