//! Exact JSON encodings. Rationals are `{"num", "den"}` string pairs and
//! cyclotomic numbers are power-basis coefficient arrays with their level.

use cuspcenter_core::arith::Rational;
use cuspcenter_core::center::BlockVector;
use cuspcenter_core::classes::ClassType;
use cuspcenter_core::{CyclotomicNumber, ParameterSet, Polynomial};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(x: &Rational) -> Self {
        RationalJson { num: x.numer().to_string(), den: x.denom().to_string() }
    }
}

/// Element of `Q(zeta_N)` in the power basis `1, zeta_N, ..., zeta_N^{phi(N)-1}`.
/// `level` is `k` when `N = ell^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicJson {
    pub conductor: u64,
    pub level: Option<u32>,
    pub coeffs: Vec<RationalJson>,
}

pub fn cyclotomic(x: &CyclotomicNumber, ell: u64) -> CyclotomicJson {
    CyclotomicJson {
        conductor: x.conductor(),
        level: x.level(ell),
        coeffs: x.coeffs().iter().map(RationalJson::from).collect(),
    }
}

/// Polynomial with coefficients from low to high degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub coeffs: Vec<RationalJson>,
    pub display: String,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        PolynomialJson { coeffs: p.coeffs().iter().map(RationalJson::from).collect(), display: p.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    /// Coefficients in `F_q` (field encoding), low to high.
    pub poly: Vec<u32>,
    pub partition: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassJson {
    pub label: String,
    pub factors: Vec<FactorJson>,
    pub size: String,
    pub centralizer_order: String,
}

impl From<&ClassType> for ClassJson {
    fn from(ct: &ClassType) -> Self {
        ClassJson {
            label: ct.to_string(),
            factors: ct
                .factors
                .iter()
                .map(|f| FactorJson { poly: f.poly.clone(), partition: f.partition.clone() })
                .collect(),
            size: ct.class_size.to_string(),
            centralizer_order: ct.centralizer_order.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockVectorJson {
    /// Orbit representatives; `0` is the Steinberg slot.
    pub slots: Vec<u64>,
    pub entries: Vec<CyclotomicJson>,
}

pub fn block_vector(v: &BlockVector, ell: u64) -> BlockVectorJson {
    BlockVectorJson { slots: v.reps.clone(), entries: v.entries.iter().map(|e| cyclotomic(e, ell)).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub q: u64,
    pub ell: u64,
    pub n: u64,
    pub d: u64,
    pub w: u64,
    pub r: u32,
    pub ell_r: u64,
}

impl From<&ParameterSet> for ParamsJson {
    fn from(ps: &ParameterSet) -> Self {
        ParamsJson { q: ps.q, ell: ps.ell, n: ps.n, d: ps.d, w: ps.w, r: ps.r, ell_r: ps.ell_r() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cuspcenter_core::arith::rat_frac;

    #[test]
    fn rationals_are_reduced_strings() {
        let r = RationalJson::from(&rat_frac(4, -6));
        assert_eq!((r.num.as_str(), r.den.as_str()), ("-2", "3"));
    }

    #[test]
    fn cyclotomic_carries_level() {
        let z = CyclotomicNumber::zeta_pow(9, 1);
        let j = cyclotomic(&z, 3);
        assert_eq!((j.conductor, j.level, j.coeffs.len()), (9, Some(2), 6));
    }
}
