//! Points of `R_{q,n} = W(k)[Fr, Psi]/(Fr Psi Fr^-1 = Psi^q)` over
//! `Q(zeta_{l^r})` and the relations satisfied by `Y = Tr Psi` and the
//! characteristic-polynomial coefficients `T_i` of `Fr`.

use std::fmt;

use rayon::prelude::*;

use crate::arith::{pow_mod, rat, Rational};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::invariants::{integer_poly_from_roots, InvariantRingData};
use crate::params::{reduce_parameters, ParameterSet};
use crate::poly::Polynomial;

/// Free entries of `Fr` are drawn from this set.
pub const UNIT_SAMPLES: [i64; 3] = [1, -1, 2];

/// Square matrix over `Q(zeta_N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycMatrix {
    pub n: usize,
    pub entries: Vec<CyclotomicNumber>,
}

impl CycMatrix {
    pub fn zero(n: usize, conductor: u64) -> Self {
        CycMatrix { n, entries: vec![CyclotomicNumber::zero(conductor); n * n] }
    }

    pub fn identity(n: usize, conductor: u64) -> Self {
        let mut m = Self::zero(n, conductor);
        for i in 0..n {
            m.set(i, i, CyclotomicNumber::from_int(conductor, 1));
        }
        m
    }

    pub fn diagonal(diag: Vec<CyclotomicNumber>) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n, diag[0].conductor());
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &CyclotomicNumber {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CyclotomicNumber) {
        self.entries[i * self.n + j] = v;
    }

    fn conductor(&self) -> u64 {
        self.entries[0].conductor()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n, self.conductor());
        for i in 0..n {
            for j in 0..n {
                let mut acc = CyclotomicNumber::zero(self.conductor());
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut result = Self::identity(self.n, self.conductor());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        result
    }

    pub fn trace(&self) -> CyclotomicNumber {
        (0..self.n).fold(CyclotomicNumber::zero(self.conductor()), |acc, i| &acc + self.get(i, i))
    }

    /// `[T_1, ..., T_n]` with `det(X - M) = X^n + T_1 X^{n-1} + ... + T_n`,
    /// by Faddeev-LeVerrier.
    pub fn char_poly_coeffs(&self) -> Vec<CyclotomicNumber> {
        let n = self.n;
        let c = self.conductor();
        let mut coeffs = Vec::with_capacity(n);
        let mut mk = Self::zero(n, c);
        let mut prev = CyclotomicNumber::from_int(c, 1);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{k-1} I
            let mut next = self.mul(&mk);
            for i in 0..n {
                let d = next.get(i, i) + &prev;
                next.set(i, i, d);
            }
            mk = next;
            let ck = self.mul(&mk).trace().scale(&Rational::new((-1).into(), (k as i64).into()));
            coeffs.push(ck.clone());
            prev = ck;
        }
        coeffs
    }

    pub fn determinant(&self) -> CyclotomicNumber {
        let t_n = self.char_poly_coeffs().pop().expect("n >= 1");
        if self.n.is_multiple_of(2) {
            t_n
        } else {
            -&t_n
        }
    }
}

/// Which shape of `Fr` a point uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrShape {
    /// Entries on the superdiagonal and in the bottom-left corner.
    CyclicShift,
    /// Only possible when `Psi = I`.
    Diagonal,
    /// Diagonal plus ones on the subdiagonal; only when `Psi = I`.
    LowerBidiagonal,
}

/// An `Omega`-point `(Fr, Psi)`.
#[derive(Debug, Clone)]
pub struct DeformationPoint {
    pub a: u64,
    pub shape: FrShape,
    pub entries: Vec<i64>,
    pub psi: CycMatrix,
    pub fr: CycMatrix,
}

/// `Psi = diag(zeta^a, zeta^{aq}, ..., zeta^{aq^{n-1}})` with `Fr` of the
/// given shape; the relation `Fr Psi = Psi^q Fr` and `det Fr != 0` are checked.
pub fn make_point(ps: &ParameterSet, a: u64, shape: FrShape, entries: &[i64]) -> Result<DeformationPoint> {
    let ps = reduce_parameters(ps);
    let (q, n, conductor) = (ps.q, ps.n as usize, ps.ell_r());
    let a = a % conductor;
    if entries.len() != n {
        return Err(Error::DegreeMismatch { expected: n, found: entries.len() });
    }
    if a != 0 && shape != FrShape::CyclicShift {
        return Err(Error::RelationFailure(format!("shape {shape:?} needs Psi = I, got a = {a}")));
    }
    let diag = (0..n as u64)
        .map(|k| CyclotomicNumber::zeta_pow(conductor, (a * pow_mod(q, k, conductor) % conductor) as i64))
        .collect();
    let psi = CycMatrix::diagonal(diag);
    let unit = |c: i64| CyclotomicNumber::from_int(conductor, c);
    let mut fr = CycMatrix::zero(n, conductor);
    match shape {
        FrShape::CyclicShift => {
            for k in 0..n - 1 {
                fr.set(k, k + 1, unit(entries[k]));
            }
            fr.set(n - 1, 0, unit(entries[n - 1]));
        }
        FrShape::Diagonal => {
            for k in 0..n {
                fr.set(k, k, unit(entries[k]));
            }
        }
        FrShape::LowerBidiagonal => {
            for k in 0..n {
                fr.set(k, k, unit(entries[k]));
                if k > 0 {
                    fr.set(k, k - 1, unit(1));
                }
            }
        }
    }
    if fr.determinant().is_zero() {
        return Err(Error::RelationFailure("Fr is singular".into()));
    }
    if fr.mul(&psi) != psi.pow(q).mul(&fr) {
        return Err(Error::RelationFailure(format!("Fr Psi Fr^-1 != Psi^q at a = {a}")));
    }
    Ok(DeformationPoint { a, shape, entries: entries.to_vec(), psi, fr })
}

/// A relation generator of one of the two presentations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relation {
    /// `p(Y)`.
    Poly(Polynomial),
    /// `p(Y) T_k`.
    TimesT(Polynomial, usize),
}

impl Relation {
    /// Value at `Y = y`, `T_k = t[k-1]`.
    pub fn eval(&self, y: &CyclotomicNumber, t: &[CyclotomicNumber]) -> CyclotomicNumber {
        let c = y.conductor();
        let py = |p: &Polynomial| {
            p.eval_with(y, |r| CyclotomicNumber::from_rational(c, r.clone()), |a, b| a * b, |a, b| a + b)
        };
        match self {
            Relation::Poly(p) => py(p),
            Relation::TimesT(p, k) => &py(p) * &t[k - 1],
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Poly(p) => write!(f, "{p}"),
            Relation::TimesT(p, k) => write!(f, "({p}) T_{k}"),
        }
    }
}

/// `W(k)[Y, T_1, ..., T_{c-1}, T_c^{+-1}] / (relations)`.
#[derive(Debug, Clone)]
pub struct APiPresentation {
    pub params: ParameterSet,
    pub t_count: usize,
    pub m: Polynomial,
    /// Generator of `I_0`, `Y - n/d`.
    pub i0: Polynomial,
    /// `<m(Y)> + <Y - n><T_1, ..., T_{c-1}>`, from the points.
    pub lemma_relations: Vec<Relation>,
    /// `<m(Y)> + I_0 <T_1, ..., T_{c-1}>`.
    pub helm_relations: Vec<Relation>,
}

impl APiPresentation {
    pub fn generators(&self) -> Vec<String> {
        let mut g = vec!["Y".to_string()];
        g.extend((1..self.t_count).map(|k| format!("T_{k}")));
        g.push(format!("T_{}^(+-1)", self.t_count));
        g
    }

    pub fn display(&self) -> String {
        let ts: Vec<String> = (1..self.t_count).map(|k| format!("T_{k}")).collect();
        let mut s = format!("W(k)[{}]/(<{}>", self.generators().join(", "), self.m);
        if !ts.is_empty() {
            s.push_str(&format!(" + <{}><{}>", self.i0, ts.join(", ")));
        }
        s.push(')');
        s
    }
}

/// Values of `Y`, the `T_i` and every relation generator at one point.
#[derive(Debug, Clone)]
pub struct PointReport {
    pub a: u64,
    pub shape: FrShape,
    pub entries: Vec<i64>,
    pub trace: CyclotomicNumber,
    pub t: Vec<CyclotomicNumber>,
}

/// Checks the relations at one point.
pub fn check_relations(pt: &DeformationPoint, ring: &InvariantRingData) -> Result<PointReport> {
    let ps = &ring.params;
    let n = ps.n as usize;
    let trace = pt.psi.trace();
    let t = pt.fr.char_poly_coeffs();
    let c = trace.conductor();
    let m_y = ring.m.eval_with(&trace, |r| CyclotomicNumber::from_rational(c, r.clone()), |a, b| a * b, |a, b| a + b);
    let fail = |check: &str, detail: String| Error::assertion(check, format!("a = {}: {detail}", pt.a));
    if !m_y.is_zero() {
        return Err(fail("m(Tr Psi)=0", format!("m({trace}) = {m_y}")));
    }
    if t[n - 1].is_zero() {
        return Err(fail("T_n-unit", "T_n vanishes".into()));
    }
    if pt.a == 0 {
        if trace != CyclotomicNumber::from_int(c, ps.n as i64) {
            return Err(fail("Tr Psi = n", format!("Tr Psi = {trace}")));
        }
    } else if let Some(k) = (0..n - 1).find(|&k| !t[k].is_zero()) {
        return Err(fail("T_i=0", format!("T_{} = {}", k + 1, t[k])));
    }
    for rel in lemma_relations(ring, n) {
        if !rel.eval(&trace, &t).is_zero() {
            return Err(fail("lemma-ideal", format!("generator {rel} does not vanish")));
        }
    }
    Ok(PointReport { a: pt.a, shape: pt.shape, entries: pt.entries.clone(), trace, t })
}

fn lemma_relations(ring: &InvariantRingData, t_count: usize) -> Vec<Relation> {
    let y_minus_n = Polynomial::linear_root(rat(ring.params.n as i64));
    let mut rels = vec![Relation::Poly(ring.m.clone())];
    rels.extend((1..t_count).map(|k| Relation::TimesT(y_minus_n.clone(), k)));
    rels
}

/// Every sampled point: all `a` in `Z/l^r`, every entry tuple from
/// [`UNIT_SAMPLES`], and for `a = 0` the extra shapes.
pub fn sample_points(ps: &ParameterSet) -> Result<Vec<DeformationPoint>> {
    let ps = reduce_parameters(ps);
    let n = ps.n as usize;
    let mut tuples: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..n {
        tuples = tuples
            .into_iter()
            .flat_map(|t| UNIT_SAMPLES.iter().map(move |&u| [t.clone(), vec![u]].concat()))
            .collect();
    }
    let mut specs = Vec::new();
    for a in 0..ps.ell_r() {
        let shapes: &[FrShape] = if a == 0 {
            &[FrShape::CyclicShift, FrShape::Diagonal, FrShape::LowerBidiagonal]
        } else {
            &[FrShape::CyclicShift]
        };
        for &shape in shapes {
            for t in &tuples {
                specs.push((a, shape, t.clone()));
            }
        }
    }
    specs.par_iter().map(|(a, shape, t)| make_point(&ps, *a, *shape, t)).collect()
}

/// Result of the deformation-side checks.
#[derive(Debug, Clone)]
pub struct DeformationReport {
    pub presentation: APiPresentation,
    pub points: Vec<PointReport>,
    /// `prod (Y - Tr Psi)` over one point per orbit of `a`.
    pub f_from_points: Polynomial,
    /// Distinct values of `Tr Psi` over all points.
    pub trace_values: Vec<CyclotomicNumber>,
}

/// Builds the presentation and checks it on every sampled point.
/// `t_count` defaults to `n`.
pub fn emit_a_pi_presentation(ps: &ParameterSet, ring: &InvariantRingData, t_count: Option<usize>) -> Result<DeformationReport> {
    let reduced = reduce_parameters(ps);
    let n = reduced.n as usize;
    let t_count = t_count.unwrap_or(n);
    if t_count == 0 || t_count > n {
        return Err(Error::DegenerateBlock(format!("T-count {t_count} must lie in 1..={n}")));
    }
    // I_0 = <Y - n/d>; n/d of the input is the reduced n
    let i0 = Polynomial::linear_root(rat((ps.n / ps.d) as i64));
    let mut helm_relations = vec![Relation::Poly(ring.m.clone())];
    helm_relations.extend((1..t_count).map(|k| Relation::TimesT(i0.clone(), k)));
    let presentation = APiPresentation {
        params: reduced,
        t_count,
        m: ring.m.clone(),
        i0,
        lemma_relations: lemma_relations(ring, t_count),
        helm_relations,
    };

    let points = sample_points(&reduced)?;
    let reports = points.par_iter().map(|pt| check_relations(pt, ring)).collect::<Result<Vec<_>>>()?;
    for r in &reports {
        for rel in &presentation.helm_relations {
            if !rel.eval(&r.trace, &r.t).is_zero() {
                return Err(Error::assertion("helm-ideal", format!("a = {}: {rel} does not vanish", r.a)));
            }
        }
    }

    // f rebuilt from traces at one point per orbit representative
    let orbits = crate::invariants::OrbitStructure::new(reduced.ell_r(), reduced.q);
    let rep_traces: Vec<CyclotomicNumber> = orbits
        .reps()
        .iter()
        .map(|&a| reports.iter().find(|r| r.a == a).expect("sampled").trace.clone())
        .collect();
    let f_from_points = integer_poly_from_roots(&rep_traces, "f from traces")?;
    if f_from_points != ring.m {
        return Err(Error::assertion("f=m", format!("f = {f_from_points}, m = {}", ring.m)));
    }
    let mut trace_values: Vec<CyclotomicNumber> = Vec::new();
    for r in &reports {
        if !trace_values.contains(&r.trace) {
            trace_values.push(r.trace.clone());
        }
    }
    if trace_values.len() != rep_traces.len() || rep_traces.iter().any(|t| !trace_values.contains(t)) {
        return Err(Error::assertion("root-set", "traces over all points differ from the roots of m"));
    }
    Ok(DeformationReport { presentation, points: reports, f_from_points, trace_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::invariant_ring;
    use crate::params::validate_parameters;

    fn ps(q: u64, ell: u64, n: u64) -> ParameterSet {
        validate_parameters(q, ell, n, 1).unwrap()
    }

    #[test]
    fn p1_point() {
        let p = ps(2, 3, 2);
        let pt = make_point(&p, 1, FrShape::CyclicShift, &[1, 2]).unwrap();
        let ring = invariant_ring(&p).unwrap();
        let r = check_relations(&pt, &ring).unwrap();
        assert_eq!(r.trace.as_rational(), Some(rat(-1)));
        assert!(r.t[0].is_zero());
        assert_eq!(r.t[1].as_rational(), Some(rat(-2)));
    }

    #[test]
    fn bad_fr_rejected() {
        let p = ps(2, 3, 2);
        assert!(matches!(make_point(&p, 1, FrShape::Diagonal, &[1, 2]), Err(Error::RelationFailure(_))));
    }

    #[test]
    fn p2_three_cycle() {
        let p = ps(2, 7, 3);
        let ring = invariant_ring(&p).unwrap();
        let pt = make_point(&p, 3, FrShape::CyclicShift, &[1, 1, 1]).unwrap();
        let r = check_relations(&pt, &ring).unwrap();
        assert!(r.t[0].is_zero() && r.t[1].is_zero());
        assert_eq!(r.t[2].as_rational(), Some(rat(-1)));
    }

    #[test]
    fn char_poly_of_companion() {
        // [[0, -2], [1, 3]] has char poly X^2 - 3X + 2
        let mut m = CycMatrix::zero(2, 1);
        m.set(0, 1, CyclotomicNumber::from_int(1, -2));
        m.set(1, 0, CyclotomicNumber::from_int(1, 1));
        m.set(1, 1, CyclotomicNumber::from_int(1, 3));
        let t: Vec<_> = m.char_poly_coeffs().iter().map(|c| c.as_rational().unwrap()).collect();
        assert_eq!(t, vec![rat(-3), rat(2)]);
        assert_eq!(m.determinant().as_rational(), Some(rat(2)));
    }

    #[test]
    fn presentations() {
        for p in [ps(2, 3, 2), ps(2, 7, 3), ps(8, 3, 2)] {
            let ring = invariant_ring(&p).unwrap();
            let rep = emit_a_pi_presentation(&p, &ring, None).unwrap();
            assert_eq!(rep.f_from_points, ring.m);
        }
        let p1 = ps(2, 3, 2);
        let ring = invariant_ring(&p1).unwrap();
        let rep = emit_a_pi_presentation(&p1, &ring, None).unwrap();
        assert_eq!(rep.presentation.display(), "W(k)[Y, T_1, T_2^(+-1)]/(<Y^2 - Y - 2> + <Y - 2><T_1>)");
    }

    #[test]
    fn unit_t_n_relation_fails() {
        // (Y - n) T_n does not vanish at a nontrivial point
        let p = ps(2, 3, 2);
        let ring = invariant_ring(&p).unwrap();
        let pt = make_point(&p, 1, FrShape::CyclicShift, &[1, 1]).unwrap();
        let r = check_relations(&pt, &ring).unwrap();
        let rel = Relation::TimesT(Polynomial::linear_root(rat(2)), 2);
        assert!(!rel.eval(&r.trace, &r.t).is_zero());
    }
}
