//! The ring `R = W(k)[X]/(X^{l^r} - 1)`, its `X -> X^q` invariants, and the
//! generator `f(X) = X + X^q + ... + X^{q^{n-1}}`.
//!
//! The invariant module is free on orbit sums. The theorem that the
//! invariants are generated by `f` is checked constructively: the powers
//! `f^0, ..., f^{D-1}` are written in the orbit-sum basis and the resulting
//! `D x D` matrix must be invertible over `Z_(l)`.

use num_traits::{One, Zero};

use crate::arith::{is_p_integral, phi_prime_power, pow_mod, rat, Rational};
use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::params::{reduce_parameters, ParameterSet};
use crate::poly::Polynomial;

/// Element of `Q[X]/(X^N - 1)` in the monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycGroupRingElement {
    coeffs: Vec<Rational>,
}

impl CycGroupRingElement {
    pub fn zero(modulus: u64) -> Self {
        CycGroupRingElement { coeffs: vec![Rational::zero(); modulus as usize] }
    }

    pub fn one(modulus: u64) -> Self {
        Self::monomial(modulus, 0)
    }

    /// `X^b` with `b` taken modulo `N`.
    pub fn monomial(modulus: u64, b: u64) -> Self {
        let mut x = Self::zero(modulus);
        x.coeffs[(b % modulus) as usize] = Rational::one();
        x
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        CycGroupRingElement { coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.coeffs.len() as u64
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_p_integral(&self, p: u64) -> bool {
        self.coeffs.iter().all(|c| is_p_integral(c, p))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_coeffs(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out[(i + j) % n] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Substitutes an element into a polynomial.
    pub fn eval_poly(poly: &Polynomial, x: &Self) -> Self {
        let n = x.modulus();
        poly.eval_with(
            x,
            |c| Self::one(n).scale(c),
            |a, b| a.mul(b),
            |a, b| a.add(b),
        )
    }
}

/// The endomorphism `h(X) -> h(X^a)`: the coefficient of `X^b` moves to
/// `X^{ab mod N}`, accumulating on collisions.
pub fn frobenius_map(x: &CycGroupRingElement, a: u64) -> CycGroupRingElement {
    let n = x.modulus();
    let mut out = CycGroupRingElement::zero(n);
    for (b, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out.coeffs[((b as u64 % n) * (a % n) % n) as usize] += c;
        }
    }
    out
}

/// Orbits of multiplication by `q` on `Z/l^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitStructure {
    pub modulus: u64,
    /// Orbits in increasing order of their smallest member; each orbit is
    /// listed as `a, aq, aq^2, ...` starting from that member.
    pub orbits: Vec<Vec<u64>>,
    orbit_index: Vec<usize>,
}

impl OrbitStructure {
    pub fn new(modulus: u64, q: u64) -> Self {
        let mut orbit_index = vec![usize::MAX; modulus as usize];
        let mut orbits = Vec::new();
        for a in 0..modulus {
            if orbit_index[a as usize] != usize::MAX {
                continue;
            }
            let mut orbit = vec![a];
            let mut cur = a * (q % modulus) % modulus;
            while cur != a {
                orbit.push(cur);
                cur = cur * (q % modulus) % modulus;
            }
            for &b in &orbit {
                orbit_index[b as usize] = orbits.len();
            }
            orbits.push(orbit);
        }
        OrbitStructure { modulus, orbits, orbit_index }
    }

    /// Representatives (smallest members), `0` first.
    pub fn reps(&self) -> Vec<u64> {
        self.orbits.iter().map(|o| o[0]).collect()
    }

    pub fn orbit_of(&self, a: u64) -> usize {
        self.orbit_index[(a % self.modulus) as usize]
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// `sum_{b in orbit} X^b`.
    pub fn orbit_sum(&self, index: usize) -> CycGroupRingElement {
        let mut x = CycGroupRingElement::zero(self.modulus);
        for &b in &self.orbits[index] {
            x.coeffs[b as usize] += Rational::one();
        }
        x
    }

    /// Coordinates of `x` in the orbit-sum basis, or `None` if `x` is not
    /// constant on some orbit (i.e. not `q`-invariant).
    pub fn invariant_coordinates(&self, x: &CycGroupRingElement) -> Option<Vec<Rational>> {
        self.orbits
            .iter()
            .map(|orbit| {
                let c = &x.coeffs[orbit[0] as usize];
                orbit.iter().all(|&b| &x.coeffs[b as usize] == c).then(|| c.clone())
            })
            .collect()
    }
}

/// Orbit structure of a block, with the check that every nonzero orbit has
/// exactly `n` elements (an orbit of size `< n` consists of multiples of
/// `l^r`, hence only `0`).
pub fn orbit_structure(ps: &ParameterSet) -> Result<OrbitStructure> {
    let ps = reduce_parameters(ps);
    let os = OrbitStructure::new(ps.ell_r(), ps.q);
    for orbit in &os.orbits {
        let size = orbit.len() as u64;
        if size < ps.n && orbit.iter().any(|&a| a % ps.ell_r() != 0) {
            return Err(Error::assertion(
                "orbit-order",
                format!("orbit of {} has size {size} < n = {}", orbit[0], ps.n),
            ));
        }
        if orbit[0] != 0 && size != ps.n {
            return Err(Error::assertion(
                "orbit-order",
                format!("orbit of {} has size {size}, expected {}", orbit[0], ps.n),
            ));
        }
    }
    let expected = 1 + (ps.ell_r() - 1) / ps.n;
    if os.len() as u64 != expected {
        return Err(Error::DegreeMismatch { expected: expected as usize, found: os.len() });
    }
    Ok(os)
}

/// `sum_{j<n} zeta_N^{a q^j}` in `Q(zeta_N)`.
pub fn orbit_root_sum(conductor: u64, a: u64, q: u64, n: u64) -> CyclotomicNumber {
    let terms: Vec<(i64, Rational)> = (0..n)
        .map(|j| ((a as u128 * pow_mod(q, j, conductor) as u128 % conductor as u128) as i64, rat(1)))
        .collect();
    CyclotomicNumber::from_exponent_sum(conductor, terms.iter().map(|(e, c)| (*e, c)))
}

/// `prod (Y - root)` over cyclotomic roots; errors unless every coefficient
/// is a rational integer.
pub fn integer_poly_from_roots(roots: &[CyclotomicNumber], context: &str) -> Result<Polynomial> {
    let conductor = roots.first().map_or(1, CyclotomicNumber::conductor);
    let mut coeffs = vec![CyclotomicNumber::from_int(conductor, 1)];
    for root in roots {
        let mut next = vec![CyclotomicNumber::zero(conductor); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * root);
        }
        coeffs = next;
    }
    let rational: Vec<Rational> = coeffs
        .iter()
        .map(|c| c.as_rational().filter(crate::arith::is_integer))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::IntegralityFailure(format!("{context}: coefficients are not rational integers")))?;
    Ok(Polynomial::new(rational))
}

/// `omega_i = zeta_i + zeta_i^q + ... + zeta_i^{q^{n-1}}` and its minimal
/// polynomial `m_i`, the product over cosets of `<q>` in `(Z/l^i)^x`.
pub fn omega_and_min_poly(ps: &ParameterSet, i: u32) -> Result<(CyclotomicNumber, Polynomial)> {
    let ps = reduce_parameters(ps);
    assert!(i >= 1 && i <= ps.r, "level out of range");
    let conductor = ps.ell.pow(i);
    let cosets = OrbitStructure::new(conductor, ps.q);
    let roots: Vec<CyclotomicNumber> = cosets
        .reps()
        .into_iter()
        .filter(|a| a % ps.ell != 0)
        .map(|a| orbit_root_sum(conductor, a, ps.q, ps.n))
        .collect();
    let expected_degree = phi_prime_power(ps.ell, i) / ps.n;
    if roots.len() as u64 != expected_degree {
        return Err(Error::DegreeMismatch { expected: expected_degree as usize, found: roots.len() });
    }
    let omega = orbit_root_sum(conductor, 1, ps.q, ps.n);
    let m_i = integer_poly_from_roots(&roots, &format!("m_{i}"))?;
    let at_omega = m_i.eval_with(
        &omega,
        |c| CyclotomicNumber::from_rational(conductor, c.clone()),
        |a, b| a * b,
        |a, b| a + b,
    );
    if !at_omega.is_zero() {
        return Err(Error::assertion("min-poly", format!("m_{i}(omega_{i}) != 0")));
    }
    Ok((omega, m_i))
}

/// Valuations at level `i` of `omega_i - n` and of the norm element
/// `N(zeta_i) = prod_j (zeta_i^{q^j} - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformizerReport {
    pub level: u32,
    pub valuation: i64,
    pub norm_element_valuation: i64,
    pub expected: i64,
}

/// Checks that `omega_i - n` is a uniformizer of the fixed field of `<q>`,
/// i.e. has valuation `n` in `Q(zeta_{l^i})`.
pub fn uniformizer_check(ps: &ParameterSet, i: u32) -> Result<UniformizerReport> {
    let ps = reduce_parameters(ps);
    let (omega, _) = omega_and_min_poly(&ps, i)?;
    let conductor = ps.ell.pow(i);
    let shifted = &omega - &CyclotomicNumber::from_int(conductor, ps.n as i64);
    let valuation = shifted.ell_valuation(ps.ell)?;
    let one = CyclotomicNumber::from_int(conductor, 1);
    let norm_element = (0..ps.n).fold(one.clone(), |acc, j| {
        let z = CyclotomicNumber::zeta_pow(conductor, pow_mod(ps.q, j, conductor) as i64);
        &acc * &(&z - &one)
    });
    let norm_element_valuation = norm_element.ell_valuation(ps.ell)?;
    let report = UniformizerReport {
        level: i,
        valuation,
        norm_element_valuation,
        expected: ps.n as i64,
    };
    if valuation != report.expected || norm_element_valuation != report.expected {
        return Err(Error::assertion(
            "uniformizer",
            format!(
                "level {i}: nu(omega - n) = {valuation}, nu(N(zeta)) = {norm_element_valuation}, expected {}",
                report.expected
            ),
        ));
    }
    Ok(report)
}

fn binom_mod_prime(mut n: u64, mut k: u64, p: u64) -> u64 {
    // Lucas
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for t in 0..ki {
            c = c * ((ni - t) % p) % p;
            c = c * crate::arith::mod_inverse(t + 1, p).unwrap() % p;
        }
        acc = acc * c % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Multiplicity of the root `1` of `g(X) = X + X^q + ... + X^{q^{n-1}} - n`
/// over `F_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackReport {
    pub multiplicity: u64,
    pub expected: u64,
}

/// The Taylor coefficient of `(X-1)^k` in `g` is `sum_j C(q^j, k) - n[k=0]`;
/// the multiplicity is the first `k` where it is nonzero mod `l`.
pub fn pullback_mod_ell_check(ps: &ParameterSet) -> Result<PullbackReport> {
    let ps = reduce_parameters(ps);
    let ell = ps.ell;
    let exps: Vec<u64> = (0..ps.n).map(|j| ps.q.pow(j as u32)).collect();
    let max_k = exps.iter().copied().max().unwrap_or(1) + 1;
    let multiplicity = (0..=max_k)
        .find(|&k| {
            let mut c: u64 = exps.iter().map(|&e| binom_mod_prime(e, k, ell)).sum::<u64>() % ell;
            if k == 0 {
                c = (c + ell - ps.n % ell) % ell;
            }
            c != 0
        })
        .expect("g is not identically zero mod l");
    let report = PullbackReport { multiplicity, expected: ps.n };
    if multiplicity != ps.n {
        return Err(Error::assertion(
            "pullback-mod-l",
            format!("(X-1) divides g with multiplicity {multiplicity}, expected {}", ps.n),
        ));
    }
    Ok(report)
}

/// Everything computed about the invariant ring of a block.
#[derive(Debug, Clone)]
pub struct InvariantRingData {
    pub params: ParameterSet,
    pub orbits: OrbitStructure,
    /// `f = X + X^q + ... + X^{q^{n-1}}`.
    pub f: CycGroupRingElement,
    /// `m = (Y - n) prod_i m_i`, of degree `D`.
    pub m: Polynomial,
    /// `m_1, ..., m_r`.
    pub m_i: Vec<Polynomial>,
    /// `omega_1, ..., omega_r`, `omega_i` in `Q(zeta_{l^i})`.
    pub omega: Vec<CyclotomicNumber>,
    /// Row `k` holds `f^k` in the orbit-sum basis.
    pub change_of_basis: RatMatrix,
    /// Inverse of `change_of_basis`; row `o` expresses orbit sum `o` in powers of `f`.
    pub inverse: RatMatrix,
}

impl InvariantRingData {
    pub fn degree(&self) -> usize {
        self.orbits.len()
    }

    /// `m(Y) mod l` compared with `(Y - n)^D mod l`.
    pub fn min_poly_is_power_mod_ell(&self) -> bool {
        let ps = &self.params;
        let lhs = self.m.residues_mod(ps.ell);
        let power = Polynomial::linear_root(rat(ps.n as i64)).pow(self.degree() as u32);
        lhs.is_some() && lhs == power.residues_mod(ps.ell)
    }
}

/// Builds the invariant ring and verifies that `f` generates it over `Z_(l)`.
pub fn invariant_ring(ps: &ParameterSet) -> Result<InvariantRingData> {
    let ps = reduce_parameters(ps);
    let orbits = orbit_structure(&ps)?;
    let modulus = ps.ell_r();
    let d = orbits.len();

    let mut m_i = Vec::new();
    let mut omega = Vec::new();
    let mut m = Polynomial::linear_root(rat(ps.n as i64));
    for i in 1..=ps.r {
        let (w, mi) = omega_and_min_poly(&ps, i)?;
        m = &m * &mi;
        omega.push(w);
        m_i.push(mi);
    }
    if m.degree() != Some(d) {
        return Err(Error::DegreeMismatch { expected: d, found: m.degree().unwrap_or(0) });
    }
    if !m.has_integer_coeffs() {
        return Err(Error::IntegralityFailure("m(Y) has non-integer coefficients".into()));
    }

    let f = orbits.orbit_sum(orbits.orbit_of(1));
    if frobenius_map(&f, ps.q) != f {
        return Err(Error::assertion("f-invariant", "f is not fixed by X -> X^q"));
    }
    let mut rows = Vec::with_capacity(d);
    let mut power = CycGroupRingElement::one(modulus);
    for k in 0..d {
        let coords = orbits.invariant_coordinates(&power).ok_or_else(|| {
            Error::assertion("f-invariant", format!("f^{k} is not constant on orbits"))
        })?;
        rows.push(coords);
        power = power.mul(&f);
    }
    let change_of_basis = RatMatrix::from_rows(rows);
    let inverse = change_of_basis
        .inverse()
        .ok_or_else(|| Error::IntegralityFailure("powers of f are linearly dependent".into()))?;
    if let Some(bad) = inverse.entries().find(|c| !is_p_integral(c, ps.ell)) {
        return Err(Error::IntegralityFailure(format!(
            "orbit sums need the non-l-integral coefficient {bad} in powers of f"
        )));
    }
    if !CycGroupRingElement::eval_poly(&m, &f).is_zero() {
        return Err(Error::assertion("m(f)=0", "m(f) is nonzero in R"));
    }
    let data = InvariantRingData { params: ps, orbits, f, m, m_i, omega, change_of_basis, inverse };
    if !data.min_poly_is_power_mod_ell() {
        return Err(Error::assertion("m-mod-l", "m(Y) is not (Y - n)^D modulo l"));
    }
    Ok(data)
}

/// The polynomial `h` of degree `< D` with `sum_{b in orbit(a)} X^b = h(f)`.
pub fn express_orbit_sum(data: &InvariantRingData, a: u64) -> Result<Polynomial> {
    let index = data.orbits.orbit_of(a);
    let h = Polynomial::new(data.inverse.row(index).to_vec());
    if !h.is_p_integral(data.params.ell) {
        return Err(Error::IntegralityFailure(format!("orbit sum of {a} is not in Z_(l)[f]")));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_parameters;

    fn ps(q: u64, ell: u64, n: u64) -> ParameterSet {
        validate_parameters(q, ell, n, 1).unwrap()
    }

    #[test]
    fn frobenius_examples() {
        let x = CycGroupRingElement::monomial(7, 1);
        assert_eq!(frobenius_map(&x, 2), CycGroupRingElement::monomial(7, 2));
        assert_eq!(frobenius_map(&x, 1), x);
        let f = CycGroupRingElement::monomial(3, 1).add(&CycGroupRingElement::monomial(3, 2));
        assert_eq!(frobenius_map(&f, 2), f);
        // collision: X^0 + X^3 under a = 3 in Z/9 both land on 0 and 0
        let y = CycGroupRingElement::monomial(9, 3).add(&CycGroupRingElement::one(9));
        assert_eq!(frobenius_map(&y, 3), CycGroupRingElement::one(9).scale(&rat(2)));
    }

    #[test]
    fn orbit_examples() {
        let os = orbit_structure(&ps(2, 3, 2)).unwrap();
        assert_eq!(os.orbits, vec![vec![0], vec![1, 2]]);
        let os = orbit_structure(&ps(2, 7, 3)).unwrap();
        assert_eq!(os.orbits, vec![vec![0], vec![1, 2, 4], vec![3, 6, 5]]);
        assert_eq!(os.reps(), vec![0, 1, 3]);
        let os = orbit_structure(&ps(8, 3, 2)).unwrap();
        assert_eq!(os.len(), 5);
        assert!(os.orbits[1..].iter().all(|o| o.len() == 2));
    }

    #[test]
    fn min_poly_examples() {
        let (w, m1) = omega_and_min_poly(&ps(2, 3, 2), 1).unwrap();
        assert_eq!(w.as_rational(), Some(rat(-1)));
        assert_eq!(m1, Polynomial::from_ints(&[1, 1]));
        let (_, m1) = omega_and_min_poly(&ps(2, 7, 3), 1).unwrap();
        assert_eq!(m1, Polynomial::from_ints(&[2, 1, 1]));
        let (_, m2) = omega_and_min_poly(&ps(8, 3, 2), 2).unwrap();
        assert_eq!(m2.degree(), Some(3));
    }

    #[test]
    fn uniformizers() {
        assert_eq!(uniformizer_check(&ps(2, 3, 2), 1).unwrap().valuation, 2);
        assert_eq!(uniformizer_check(&ps(2, 7, 3), 1).unwrap().valuation, 3);
        assert_eq!(uniformizer_check(&ps(8, 3, 2), 2).unwrap().valuation, 2);
        assert_eq!(uniformizer_check(&ps(8, 3, 2), 1).unwrap().valuation, 2);
    }

    #[test]
    fn pullback_multiplicities() {
        assert_eq!(pullback_mod_ell_check(&ps(2, 3, 2)).unwrap().multiplicity, 2);
        assert_eq!(pullback_mod_ell_check(&ps(2, 7, 3)).unwrap().multiplicity, 3);
        assert_eq!(pullback_mod_ell_check(&ps(4, 5, 2)).unwrap().multiplicity, 2);
        assert_eq!(pullback_mod_ell_check(&ps(3, 5, 4)).unwrap().multiplicity, 4);
    }

    #[test]
    fn invariant_ring_p1() {
        let data = invariant_ring(&ps(2, 3, 2)).unwrap();
        assert_eq!(data.m, Polynomial::from_ints(&[-2, -1, 1]));
        // f^2 = f + 2 in R
        let f2 = data.f.mul(&data.f);
        let expected = data.f.add(&CycGroupRingElement::one(3).scale(&rat(2)));
        assert_eq!(f2, expected);
    }

    #[test]
    fn invariant_ring_p2_p3() {
        let data = invariant_ring(&ps(2, 7, 3)).unwrap();
        let expected = &Polynomial::from_ints(&[-3, 1]) * &Polynomial::from_ints(&[2, 1, 1]);
        assert_eq!(data.m, expected);
        let data = invariant_ring(&ps(8, 3, 2)).unwrap();
        assert_eq!(data.degree(), 5);
        assert_eq!(data.m.residues_mod(3), Polynomial::from_ints(&[-2, 1]).pow(5).residues_mod(3));
    }

    #[test]
    fn orbit_sum_expressions() {
        let data = invariant_ring(&ps(8, 3, 2)).unwrap();
        assert_eq!(express_orbit_sum(&data, 1).unwrap(), Polynomial::from_ints(&[0, 1]));
        assert_eq!(express_orbit_sum(&data, 0).unwrap(), Polynomial::one());
        for a in data.orbits.reps() {
            let h = express_orbit_sum(&data, a).unwrap();
            assert!(h.degree().unwrap_or(0) < data.degree());
            let orbit_sum = data.orbits.orbit_sum(data.orbits.orbit_of(a));
            assert_eq!(CycGroupRingElement::eval_poly(&h, &data.f), orbit_sum);
        }
    }
}
