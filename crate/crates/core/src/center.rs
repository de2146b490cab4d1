//! The central-character map `delta: Z(W(k)[G]) -> prod_{i in I} L`.
//!
//! Slot `0` is the Steinberg character; slot `i` for a nonzero orbit
//! representative `i` is the cuspidal `pi_i`. The image of `delta` is shown
//! to equal `W(k)[gamma]` by two inclusions: every class sum is written as an
//! l-integral polynomial in `gamma`, and `gamma` together with `(l^r, 0)` is
//! reconstructed from explicit class sums.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{big_pow, congruent_mod, divisors, is_p_integral, ord_rat, rat, Rational};
use crate::characters::gl2::Gl2Table;
use crate::characters::{BlockCharacters, CharacterFamily};
use crate::classes::{class_predicates, enumerate_classes, ClassFactor, ClassType, DEFAULT_ENUMERATION_BOUND};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::invariants::{invariant_ring, orbit_root_sum, InvariantRingData, OrbitStructure};
use crate::linalg::RatMatrix;
use crate::params::{reduce_parameters, ParameterSet};
use crate::poly::Polynomial;

/// An element of `prod_{i in I} Q(zeta_{l^r})`, one entry per orbit
/// representative in increasing order (`0` first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVector {
    pub reps: Vec<u64>,
    pub entries: Vec<CyclotomicNumber>,
}

impl BlockVector {
    pub fn new(reps: Vec<u64>, entries: Vec<CyclotomicNumber>) -> Self {
        assert_eq!(reps.len(), entries.len());
        BlockVector { reps, entries }
    }

    /// `(x, 0, ..., 0)`.
    pub fn steinberg_only(reps: &[u64], conductor: u64, x: Rational) -> Self {
        let mut entries = vec![CyclotomicNumber::zero(conductor); reps.len()];
        entries[0] = CyclotomicNumber::from_rational(conductor, x);
        BlockVector::new(reps.to_vec(), entries)
    }

    pub fn constant(reps: &[u64], conductor: u64, x: Rational) -> Self {
        let entries = vec![CyclotomicNumber::from_rational(conductor, x); reps.len()];
        BlockVector::new(reps.to_vec(), entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn conductor(&self) -> u64 {
        self.entries[0].conductor()
    }

    /// Entry 0 as a rational.
    pub fn steinberg_entry(&self) -> Rational {
        self.entries[0].as_rational().expect("Steinberg entry is rational")
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.entries.iter().all(|e| e.is_p_integral(p))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CyclotomicNumber, &CyclotomicNumber) -> CyclotomicNumber) -> Self {
        assert_eq!(self.reps, other.reps);
        BlockVector::new(
            self.reps.clone(),
            self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BlockVector::new(self.reps.clone(), self.entries.iter().map(|e| e.scale(c)).collect())
    }

    /// `h` applied coordinatewise.
    pub fn eval_poly(&self, h: &Polynomial) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|x| {
                let conductor = x.conductor();
                h.eval_with(x, |c| CyclotomicNumber::from_rational(conductor, c.clone()), |a, b| a * b, |a, b| a + b)
            })
            .collect();
        BlockVector::new(self.reps.clone(), entries)
    }

    pub fn pow(&self, k: u32) -> Self {
        BlockVector::new(self.reps.clone(), self.entries.iter().map(|e| e.pow(k)).collect())
    }
}

impl fmt::Display for BlockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Whether `v` lies in `S = W(k)[(l^r, 0)]`: every entry `i != 0` equals the
/// same l-integral rational `y`, and `y` is congruent to entry 0 mod `l^r`.
pub fn s_membership(v: &BlockVector, ps: &ParameterSet) -> bool {
    let Some(x) = v.entries[0].as_rational() else { return false };
    let rest = &v.entries[1..];
    let Some(y) = rest.first().map_or(Some(x.clone()), CyclotomicNumber::as_rational) else {
        return false;
    };
    rest.iter().all(|e| e.as_rational().as_ref() == Some(&y))
        && is_p_integral(&x, ps.ell)
        && is_p_integral(&y, ps.ell)
        && congruent_mod(&x, &y, ps.ell_r(), ps.ell)
}

/// Where a class lands in the case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bucket {
    NonPrimary,
    PrimarySmallDegreeNonDiagonalizable,
    PrimarySmallDegreeDiagonalizable,
    DegreeN,
    /// The regular unipotent class, which yields `(l^r, 0)`.
    RealizedWitness,
}

impl Bucket {
    pub fn name(self) -> &'static str {
        match self {
            Bucket::NonPrimary => "non-primary",
            Bucket::PrimarySmallDegreeNonDiagonalizable => "primary-small-degree-nondiagonalizable",
            Bucket::PrimarySmallDegreeDiagonalizable => "primary-small-degree-diagonalizable",
            Bucket::DegreeN => "degree-n",
            Bucket::RealizedWitness => "realized-witness",
        }
    }

    /// Buckets whose classes must map into `S`.
    pub fn requires_s(self) -> bool {
        matches!(
            self,
            Bucket::NonPrimary
                | Bucket::PrimarySmallDegreeNonDiagonalizable
                | Bucket::PrimarySmallDegreeDiagonalizable
        )
    }
}

pub fn bucket_of(ct: &ClassType) -> Bucket {
    if ct.is_regular_unipotent() {
        Bucket::RealizedWitness
    } else if !ct.is_primary() {
        Bucket::NonPrimary
    } else if ct.eigenvalue_degree() == Some(ct.n as u32) {
        Bucket::DegreeN
    } else if ct.is_diagonalizable() {
        Bucket::PrimarySmallDegreeDiagonalizable
    } else {
        Bucket::PrimarySmallDegreeNonDiagonalizable
    }
}

/// One instance of `(q^d - 1)(q^{2d} - 1)...(q^{(v-1)d} - 1) / v = q^{n(v-1)/2}` mod `l^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignsCheck {
    pub v: u64,
    pub d: u64,
    pub lhs: Rational,
    pub rhs: BigInt,
    pub holds: bool,
}

/// Checks the congruence for every factorization `v d = n`.
pub fn lemma_signs(ps: &ParameterSet) -> Result<Vec<SignsCheck>> {
    let ps = reduce_parameters(ps);
    let (q, n) = (ps.q, ps.n);
    let mut out = Vec::new();
    for v in divisors(n) {
        let d = n / v;
        let prod: BigInt = (1..v).map(|k| big_pow(q, k * d) - BigInt::one()).product();
        let lhs = Rational::new(prod, BigInt::from(v));
        let rhs = big_pow(q, n * (v - 1) / 2);
        let holds = congruent_mod(&lhs, &Rational::from_integer(rhs.clone()), ps.ell_r(), ps.ell);
        if !holds {
            return Err(Error::assertion("lemma-signs", format!("v = {v}, d = {d}: {lhs} vs {rhs} mod {}", ps.ell_r())));
        }
        out.push(SignsCheck { v, d, lhs, rhs, holds });
    }
    Ok(out)
}

/// Per-class record of the case analysis.
#[derive(Debug, Clone)]
pub struct ClassAnalysis {
    pub class: ClassType,
    pub bucket: Bucket,
    pub ell_regular: bool,
    pub delta: BlockVector,
    pub in_s: bool,
}

/// Classes partitioned into buckets, with the congruences used along the way.
#[derive(Debug, Clone)]
pub struct CaseAnalysis {
    pub classes: Vec<ClassAnalysis>,
    pub signs: Vec<SignsCheck>,
}

impl CaseAnalysis {
    pub fn bucket_counts(&self) -> Vec<(Bucket, usize)> {
        let mut counts: std::collections::BTreeMap<Bucket, usize> = Default::default();
        for c in &self.classes {
            *counts.entry(c.bucket).or_default() += 1;
        }
        counts.into_iter().collect()
    }
}

/// `(l^r, 0)` recovered from the regular unipotent class.
#[derive(Debug, Clone)]
pub struct IdempotentCertificate {
    pub class: ClassType,
    pub delta: BlockVector,
    /// The l-unit `u` with `delta = (0, u l^r)`.
    pub unit: Rational,
    pub result: BlockVector,
}

/// `gamma` recovered from the class of `eps`.
#[derive(Debug, Clone)]
pub struct GammaCertificate {
    pub class: ClassType,
    pub delta: BlockVector,
    /// `|C| (-1)^{n-1} / prod_{j<n}(q^j - 1)`.
    pub unit: Rational,
    pub normalized: BlockVector,
    /// Multiple of `(l^r, 0)` added to the Steinberg slot.
    pub correction: Rational,
    pub result: BlockVector,
}

/// `g(gamma) = (a, 0, ..., 0)` with `ord_l(a) = r`.
#[derive(Debug, Clone)]
pub struct GOfGamma {
    pub g: Polynomial,
    pub value: BlockVector,
    pub a: Rational,
    pub valuation: i64,
}

/// Certificate that `delta(beta_C) = h_C(gamma)` with `h_C` l-integral.
#[derive(Debug, Clone)]
pub struct ClassCertificate {
    pub class: ClassType,
    pub bucket: Bucket,
    pub delta: BlockVector,
    pub in_s: bool,
    pub h: Polynomial,
}

/// How `Y` acts on each member of the block.
#[derive(Debug, Clone)]
pub struct ActionEntry {
    pub slot: u64,
    pub family: CharacterFamily,
    pub value: CyclotomicNumber,
}

/// Outcome of the full verification.
#[derive(Debug, Clone)]
pub struct EndoRingResult {
    pub input: ParameterSet,
    pub params: ParameterSet,
    pub m: Polynomial,
    pub gamma: BlockVector,
    pub signs: Vec<SignsCheck>,
    pub certificates: Vec<ClassCertificate>,
    pub idempotent: IdempotentCertificate,
    pub idempotent_in_gamma: Polynomial,
    pub gamma_chain: GammaCertificate,
    pub g_of_gamma: GOfGamma,
    pub action_table: Vec<ActionEntry>,
}

/// Everything needed to evaluate `delta` on one reduced block.
#[derive(Debug, Clone)]
pub struct CenterContext {
    pub params: ParameterSet,
    pub characters: BlockCharacters,
    pub orbits: OrbitStructure,
    pub reps: Vec<u64>,
}

impl CenterContext {
    pub fn new(ps: &ParameterSet) -> Result<Self> {
        let params = reduce_parameters(ps);
        let characters = BlockCharacters::new(&params)?;
        let orbits = OrbitStructure::new(params.ell_r(), params.q);
        let reps = orbits.reps();
        Ok(CenterContext { params, characters, orbits, reps })
    }

    pub fn conductor(&self) -> u64 {
        self.params.ell_r()
    }

    pub fn family(&self, slot: u64) -> CharacterFamily {
        if slot == 0 {
            CharacterFamily::Steinberg
        } else {
            CharacterFamily::Cuspidal(slot)
        }
    }

    /// All classes of `GL_n(F_q)` for the reduced parameters.
    pub fn classes(&self) -> Result<Vec<ClassType>> {
        enumerate_classes(self.params.q, self.params.n, DEFAULT_ENUMERATION_BOUND)
    }

    /// `delta_i(beta_C) = |C| chi_i(C) / dim chi_i`, checked l-integral.
    pub fn delta_class(&self, ct: &ClassType) -> Result<BlockVector> {
        let size = Rational::from_integer(ct.class_size.clone());
        let mut entries = Vec::with_capacity(self.reps.len());
        for &slot in &self.reps {
            let family = self.family(slot);
            let value = self.characters.value(family, ct)?;
            let dim = Rational::from_integer(self.characters.dimension(family));
            entries.push(value.scale(&(&size / dim)));
        }
        let v = BlockVector::new(self.reps.clone(), entries);
        if !v.is_p_integral(self.params.ell) {
            return Err(Error::IntegralityFailure(format!("delta of class {ct} is not l-integral: {v}")));
        }
        Ok(v)
    }

    /// `gamma = (n, sum_j zeta^{i q^j})`.
    pub fn gamma(&self) -> BlockVector {
        let (q, n, conductor) = (self.params.q, self.params.n, self.conductor());
        let entries = self.reps.iter().map(|&i| orbit_root_sum(conductor, i, q, n)).collect();
        BlockVector::new(self.reps.clone(), entries)
    }

    /// `gamma`, checked against `m`: `m(gamma) = 0` and the entries are
    /// pairwise distinct, so no proper divisor of the squarefree `m`
    /// annihilates it.
    pub fn checked_gamma(&self, ring: &InvariantRingData) -> Result<BlockVector> {
        let gamma = self.gamma();
        if gamma.eval_poly(&ring.m).entries.iter().any(|e| !e.is_zero()) {
            return Err(Error::assertion("m(gamma)=0", format!("m = {} does not annihilate {gamma}", ring.m)));
        }
        for a in 0..gamma.len() {
            for b in a + 1..gamma.len() {
                if gamma.entries[a] == gamma.entries[b] {
                    return Err(Error::assertion(
                        "gamma-minimal-polynomial",
                        format!("slots {} and {} of gamma coincide", gamma.reps[a], gamma.reps[b]),
                    ));
                }
            }
        }
        Ok(gamma)
    }

    fn analyse_class(&self, ct: &ClassType) -> Result<ClassAnalysis> {
        let ps = &self.params;
        let preds = class_predicates(ct, ps)?;
        let delta = self.delta_class(ct)?;
        let bucket = bucket_of(ct);
        let in_s = s_membership(&delta, ps);
        if bucket.requires_s() && !in_s {
            return Err(Error::assertion(
                "s-membership",
                format!("class {ct} in bucket {}: delta = {delta} is not in S", bucket.name()),
            ));
        }
        if preds.ell_regular && delta.entries[1..].windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::assertion(
                "ell-regular-independence",
                format!("class {ct}: cuspidal entries of {delta} depend on i"),
            ));
        }
        // every member reduces into the same block: delta_i = delta_0 mod the maximal ideal
        for e in &delta.entries[1..] {
            let diff = e - &delta.entries[0];
            if !diff.is_zero() && diff.ell_valuation(ps.ell)? <= 0 {
                return Err(Error::assertion(
                    "block-congruence",
                    format!("class {ct}: entries of {delta} differ modulo l"),
                ));
            }
        }
        Ok(ClassAnalysis { class: ct.clone(), bucket, ell_regular: preds.ell_regular, delta, in_s })
    }

    /// Buckets every class and asserts the `S`-membership results.
    pub fn case_analysis(&self, classes: &[ClassType]) -> Result<CaseAnalysis> {
        let signs = lemma_signs(&self.params)?;
        let classes = classes.par_iter().map(|ct| self.analyse_class(ct)).collect::<Result<Vec<_>>>()?;
        Ok(CaseAnalysis { classes, signs })
    }

    fn regular_unipotent(&self) -> ClassType {
        let p = self.characters.sylow.tower.base.characteristic();
        let poly = vec![(p - 1) as u32, 1];
        ClassType::new(self.params.q, self.params.n, vec![ClassFactor { poly, partition: vec![self.params.n as u32] }])
    }

    /// From `delta(regular unipotent) = (0, u l^r)`, returns `l^r - v / u = (l^r, 0)`.
    pub fn reconstruct_scaled_idempotent(&self) -> Result<IdempotentCertificate> {
        let ps = &self.params;
        let ell_r = rat(ps.ell_r() as i64);
        let class = self.regular_unipotent();
        let delta = self.delta_class(&class)?;
        let fail = |detail: String| Error::assertion("realized", detail);
        if !delta.entries[0].is_zero() {
            return Err(fail(format!("Steinberg entry of {delta} is nonzero")));
        }
        let y = delta.entries[1]
            .as_rational()
            .ok_or_else(|| fail(format!("cuspidal entry of {delta} is irrational")))?;
        if delta.entries[1..].iter().any(|e| e.as_rational().as_ref() != Some(&y)) {
            return Err(fail(format!("cuspidal entries of {delta} depend on i")));
        }
        let unit = &y / &ell_r;
        if y.is_zero() || ord_rat(&unit, ps.ell) != 0 {
            return Err(fail(format!("{y} is not an l-unit times l^r")));
        }
        let result = BlockVector::constant(&self.reps, self.conductor(), ell_r.clone()).sub(&delta.scale(&unit.recip()));
        if result != BlockVector::steinberg_only(&self.reps, self.conductor(), ell_r) {
            return Err(fail(format!("reconstruction gave {result}")));
        }
        Ok(IdempotentCertificate { class, delta, unit, result })
    }

    /// Normalizes `delta` of the class of `eps` by an l-unit and corrects the
    /// Steinberg slot by a multiple of `(l^r, 0)`; the result must be `gamma`.
    pub fn reconstruct_gamma(&self) -> Result<GammaCertificate> {
        let ps = &self.params;
        let (q, n) = (ps.q, ps.n);
        let sylow = &self.characters.sylow;
        let poly = sylow.tower.min_poly(sylow.epsilon);
        if poly.len() as u64 != n + 1 {
            return Err(Error::assertion("gamma-chain", format!("eps has degree {} < n", poly.len() - 1)));
        }
        let class = ClassType::new(q, n, vec![ClassFactor { poly, partition: vec![1] }]);
        let delta = self.delta_class(&class)?;
        let prod: BigInt = (1..n).map(|j| big_pow(q, j) - BigInt::one()).product();
        let sign = if n % 2 == 1 { 1 } else { -1 };
        let unit = Rational::new(class.class_size.clone() * sign, prod);
        if ord_rat(&unit, ps.ell) != 0 {
            return Err(Error::assertion("gamma-chain", format!("{unit} is not an l-unit")));
        }
        let normalized = delta.scale(&unit.recip());
        let x0 = normalized.steinberg_entry();
        let ell_r = rat(ps.ell_r() as i64);
        let correction = (rat(n as i64) - &x0) / &ell_r;
        if !is_p_integral(&correction, ps.ell) {
            return Err(Error::assertion(
                "gamma-chain",
                format!("Steinberg slot {x0} is not congruent to n mod l^r"),
            ));
        }
        let shift = BlockVector::steinberg_only(&self.reps, self.conductor(), &correction * &ell_r);
        let result = normalized.add(&shift);
        let gamma = self.gamma();
        if result != gamma {
            return Err(Error::assertion("gamma-chain", format!("reconstructed {result}, expected {gamma}")));
        }
        Ok(GammaCertificate { class, delta, unit, normalized, correction, result })
    }

    /// Delta of a `GL_2` class computed from the classical table, in `Q(zeta_{q^2-1})`.
    pub fn delta_from_gl2_table(&self, table: &Gl2Table, ct: &ClassType) -> Result<Vec<CyclotomicNumber>> {
        let col = table
            .column_of(ct)
            .ok_or_else(|| Error::assertion("gl2-oracle", format!("class {ct} has no column")))?;
        let size = Rational::from_integer(ct.class_size.clone());
        self.reps
            .iter()
            .map(|&slot| {
                let row = if slot == 0 {
                    table.steinberg_row()
                } else {
                    table.block_cuspidal_row(self.conductor(), slot).ok_or_else(|| {
                        Error::assertion("gl2-oracle", format!("no table row for slot {slot}"))
                    })?
                };
                let dim = rat(table.dimension(row));
                Ok(table.value(row, col).scale(&(&size / dim)))
            })
            .collect()
    }
}

/// Solves `sum_j h_j gamma^j = v` exactly over `Q` with `deg h < D`.
pub fn express_in_gamma(v: &BlockVector, ring: &InvariantRingData) -> Result<Polynomial> {
    let ctx_reps = ring.orbits.reps();
    let ps = &ring.params;
    let conductor = ps.ell_r();
    let gamma = BlockVector::new(
        ctx_reps.clone(),
        ctx_reps.iter().map(|&i| orbit_root_sum(conductor, i, ps.q, ps.n)).collect(),
    );
    if v.reps != ctx_reps {
        return Err(Error::assertion("express-in-gamma", "slot labels differ from the ring's orbits"));
    }
    let d = ring.degree();
    let powers: Vec<BlockVector> = (0..d as u32).map(|j| gamma.pow(j)).collect();
    let phi = CyclotomicNumber::zero(conductor).coeffs().len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for s in 0..v.len() {
        let target = v.entries[s].embed(conductor);
        for c in 0..phi {
            rows.push(powers.iter().map(|p| p.entries[s].coeffs()[c].clone()).collect());
            rhs.push(target.coeffs()[c].clone());
        }
    }
    let h = RatMatrix::from_rows(rows)
        .solve_unique(&rhs)
        .map(Polynomial::new)
        .ok_or_else(|| Error::NoSolution(format!("{v} is not in Q[gamma]")))?;
    if !h.is_p_integral(ps.ell) {
        return Err(Error::IntegralityFailure(format!("{v} = h(gamma) with h = {h} not l-integral")));
    }
    Ok(h)
}

/// `g = m / (Y - n)` evaluated at `gamma`.
pub fn g_of_gamma(ring: &InvariantRingData, gamma: &BlockVector) -> Result<GOfGamma> {
    let ps = &ring.params;
    let (g, rem) = ring.m.div_rem(&Polynomial::linear_root(rat(ps.n as i64)));
    if !rem.is_zero() {
        return Err(Error::assertion("g(gamma)", "Y - n does not divide m"));
    }
    let value = gamma.eval_poly(&g);
    let a = value.steinberg_entry();
    if value.entries[1..].iter().any(|e| !e.is_zero()) || a.is_zero() {
        return Err(Error::assertion("g(gamma)", format!("g(gamma) = {value} is not (a, 0)")));
    }
    let valuation = ord_rat(&a, ps.ell);
    if valuation != ps.r as i64 {
        return Err(Error::assertion("g(gamma)", format!("ord_l({a}) = {valuation}, expected r = {}", ps.r)));
    }
    Ok(GOfGamma { g, value, a, valuation })
}

/// Names of the pipeline steps reported to an observer, in order.
pub const PIPELINE_STEPS: [&str; 7] = [
    "invariant-ring",
    "gamma",
    "case-analysis",
    "certificates",
    "realized",
    "gamma-chain",
    "g-of-gamma",
];

/// Runs both inclusions and emits `W(k)[Y]/(m(Y))` with `Y -> gamma`.
pub fn verify_endo_ring(ps: &ParameterSet) -> Result<EndoRingResult> {
    verify_endo_ring_with(ps, None, &mut |_, _| {})
}

/// [`verify_endo_ring`] with optional precomputed classes of the reduced
/// group. `observer` is called once per completed or failed step.
pub fn verify_endo_ring_with(
    ps: &ParameterSet,
    classes: Option<Vec<ClassType>>,
    observer: &mut dyn FnMut(&'static str, std::result::Result<(), &Error>),
) -> Result<EndoRingResult> {
    macro_rules! step {
        ($name:expr, $e:expr $(,)?) => {{
            let r = $e;
            observer($name, r.as_ref().map(|_| ()));
            r
        }};
    }
    let ctx = CenterContext::new(ps)?;
    let ring = step!("invariant-ring", invariant_ring(&ctx.params))?;
    let gamma = step!("gamma", ctx.checked_gamma(&ring))?;
    let classes = match classes {
        Some(c) => c,
        None => ctx.classes()?,
    };
    let analysis = step!("case-analysis", ctx.case_analysis(&classes))?;

    // image(delta) is contained in W(k)[gamma]
    let certificates = step!(
        "certificates",
        analysis
            .classes
            .into_par_iter()
            .map(|c| {
                let h = express_in_gamma(&c.delta, &ring)?;
                if gamma.eval_poly(&h) != c.delta {
                    return Err(Error::assertion("certificate-closure", format!("h_C(gamma) != delta for {}", c.class)));
                }
                Ok(ClassCertificate { class: c.class, bucket: c.bucket, delta: c.delta, in_s: c.in_s, h })
            })
            .collect::<Result<Vec<_>>>(),
    )?;

    // W(k)[gamma] is contained in image(delta)
    let (idempotent, idempotent_in_gamma) = step!(
        "realized",
        ctx.reconstruct_scaled_idempotent().and_then(|c| {
            let h = express_in_gamma(&c.result, &ring)?;
            Ok((c, h))
        }),
    )?;
    let gamma_chain = step!("gamma-chain", ctx.reconstruct_gamma())?;
    let g = step!("g-of-gamma", g_of_gamma(&ring, &gamma))?;

    let action_table = ctx
        .reps
        .iter()
        .zip(&gamma.entries)
        .map(|(&slot, value)| ActionEntry { slot, family: ctx.family(slot), value: value.clone() })
        .collect();
    Ok(EndoRingResult {
        input: *ps,
        params: ctx.params,
        m: ring.m.clone(),
        gamma,
        signs: analysis.signs,
        certificates,
        idempotent,
        idempotent_in_gamma,
        gamma_chain,
        g_of_gamma: g,
        action_table,
    })
}

/// Largest absolute numerator or denominator among the certificate coefficients.
pub fn max_certificate_height(result: &EndoRingResult) -> BigInt {
    result
        .certificates
        .iter()
        .flat_map(|c| c.h.coeffs().iter())
        .map(|x| x.numer().abs().max(x.denom().abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}
