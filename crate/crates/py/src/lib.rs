//! Python bindings: parameter sets, the invariant ring, class censuses,
//! the endomorphism-ring verification and the deformation check.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cuspcenter_cli::{run, Command, RunConfig};
use cuspcenter_core::arith::Rational;
use cuspcenter_core::center::{bucket_of, verify_endo_ring, BlockVector};
use cuspcenter_core::classes::{enumerate_classes, ClassType as CoreClass, DEFAULT_ENUMERATION_BOUND};
use cuspcenter_core::deformation::emit_a_pi_presentation;
use cuspcenter_core::invariants::invariant_ring as core_invariant_ring;
use cuspcenter_core::{reduce_parameters, validate_parameters, CyclotomicNumber, Error, Polynomial};
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(cuspcenter, VerificationError, PyException);

/// Input problems become `ValueError`; failed checks become `VerificationError`.
pub fn to_py_err(e: Error) -> PyErr {
    if e.is_input_error() {
        PyValueError::new_err(e.to_string())
    } else {
        VerificationError::new_err(e.to_string())
    }
}

/// `(numerator, denominator)`.
pub type Fraction = (BigInt, BigInt);

pub fn fraction(x: &Rational) -> Fraction {
    (x.numer().clone(), x.denom().clone())
}

pub fn poly_coeffs(p: &Polynomial) -> Vec<Fraction> {
    p.coeffs().iter().map(fraction).collect()
}

pub fn cyc_coeffs(x: &CyclotomicNumber) -> Vec<Fraction> {
    x.coeffs().iter().map(fraction).collect()
}

fn block_coeffs(v: &BlockVector) -> Vec<Vec<Fraction>> {
    v.entries.iter().map(cyc_coeffs).collect()
}

#[pyclass(frozen, from_py_object, module = "cuspcenter")]
#[derive(Clone)]
pub struct ParameterSet {
    pub inner: cuspcenter_core::ParameterSet,
}

#[pymethods]
impl ParameterSet {
    #[new]
    #[pyo3(signature = (q, ell, n, d = 1))]
    fn new(q: u64, ell: u64, n: u64, d: u64) -> PyResult<Self> {
        validate_parameters(q, ell, n, d).map(|inner| ParameterSet { inner }).map_err(to_py_err)
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q
    }
    #[getter]
    fn ell(&self) -> u64 {
        self.inner.ell
    }
    #[getter]
    fn n(&self) -> u64 {
        self.inner.n
    }
    #[getter]
    fn d(&self) -> u64 {
        self.inner.d
    }
    #[getter]
    fn w(&self) -> u64 {
        self.inner.w
    }
    #[getter]
    fn r(&self) -> u32 {
        self.inner.r
    }
    #[getter]
    fn ell_r(&self) -> u64 {
        self.inner.ell_r()
    }

    fn reduced(&self) -> ParameterSet {
        ParameterSet { inner: reduce_parameters(&self.inner) }
    }

    fn __eq__(&self, other: &ParameterSet) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!("ParameterSet(q={}, ell={}, n={}, d={}, w={}, r={})", p.q, p.ell, p.n, p.d, p.w, p.r)
    }
}

#[pyclass(frozen, module = "cuspcenter")]
pub struct InvariantRing {
    #[pyo3(get)]
    degree: usize,
    /// Coefficients of `m`, low degree first.
    #[pyo3(get)]
    m: Vec<Fraction>,
    #[pyo3(get)]
    m_display: String,
    #[pyo3(get)]
    orbits: Vec<Vec<u64>>,
    #[pyo3(get)]
    m_is_power_mod_ell: bool,
}

#[pyfunction]
fn invariant_ring(ps: &ParameterSet) -> PyResult<InvariantRing> {
    let ring = core_invariant_ring(&ps.inner).map_err(to_py_err)?;
    Ok(InvariantRing {
        degree: ring.degree(),
        m: poly_coeffs(&ring.m),
        m_display: ring.m.to_string(),
        orbits: ring.orbits.orbits.clone(),
        m_is_power_mod_ell: ring.min_poly_is_power_mod_ell(),
    })
}

#[pyclass(frozen, module = "cuspcenter")]
pub struct ClassType {
    #[pyo3(get)]
    label: String,
    #[pyo3(get)]
    size: BigInt,
    #[pyo3(get)]
    centralizer_order: BigInt,
    #[pyo3(get)]
    is_primary: bool,
    #[pyo3(get)]
    is_semisimple: bool,
    #[pyo3(get)]
    bucket: &'static str,
}

impl From<&CoreClass> for ClassType {
    fn from(ct: &CoreClass) -> Self {
        ClassType {
            label: ct.to_string(),
            size: ct.class_size.clone(),
            centralizer_order: ct.centralizer_order.clone(),
            is_primary: ct.is_primary(),
            is_semisimple: ct.is_semisimple(),
            bucket: bucket_of(ct).name(),
        }
    }
}

#[pymethods]
impl ClassType {
    fn __repr__(&self) -> String {
        format!("ClassType({}, size={})", self.label, self.size)
    }
}

#[pyfunction]
fn class_types(q: u64, n: u64) -> PyResult<Vec<ClassType>> {
    let classes = enumerate_classes(q, n, DEFAULT_ENUMERATION_BOUND).map_err(to_py_err)?;
    Ok(classes.iter().map(ClassType::from).collect())
}

#[pyclass(frozen, module = "cuspcenter")]
pub struct EndoRing {
    #[pyo3(get)]
    params: ParameterSet,
    #[pyo3(get)]
    m: Vec<Fraction>,
    #[pyo3(get)]
    m_display: String,
    /// Image of `Y`: one coefficient vector per block member, Steinberg first.
    #[pyo3(get)]
    gamma: Vec<Vec<Fraction>>,
    #[pyo3(get)]
    slots: Vec<u64>,
    #[pyo3(get)]
    bucket_counts: BTreeMap<&'static str, usize>,
    #[pyo3(get)]
    certificate_count: usize,
    /// `a` in `g(gamma) = (a, 0, ..., 0)`.
    #[pyo3(get)]
    g_of_gamma_constant: Fraction,
    #[pyo3(get)]
    g_of_gamma_valuation: i64,
}

#[pyfunction]
fn verify_endo_ring_py(ps: &ParameterSet) -> PyResult<EndoRing> {
    let res = verify_endo_ring(&ps.inner).map_err(to_py_err)?;
    let mut bucket_counts = BTreeMap::new();
    for c in &res.certificates {
        *bucket_counts.entry(c.bucket.name()).or_default() += 1;
    }
    Ok(EndoRing {
        params: ParameterSet { inner: res.params },
        m: poly_coeffs(&res.m),
        m_display: res.m.to_string(),
        gamma: block_coeffs(&res.gamma),
        slots: res.gamma.reps.clone(),
        bucket_counts,
        certificate_count: res.certificates.len(),
        g_of_gamma_constant: fraction(&res.g_of_gamma.a),
        g_of_gamma_valuation: res.g_of_gamma.valuation,
    })
}

#[pyclass(frozen, module = "cuspcenter")]
pub struct Deformation {
    #[pyo3(get)]
    presentation: String,
    #[pyo3(get)]
    point_count: usize,
    #[pyo3(get)]
    sampled_a: Vec<u64>,
}

#[pyfunction]
#[pyo3(signature = (ps, t_count = None))]
fn deformation_check(ps: &ParameterSet, t_count: Option<usize>) -> PyResult<Deformation> {
    let ring = core_invariant_ring(&ps.inner).map_err(to_py_err)?;
    let rep = emit_a_pi_presentation(&ps.inner, &ring, t_count).map_err(to_py_err)?;
    let mut sampled_a: Vec<u64> = rep.points.iter().map(|p| p.a).collect();
    sampled_a.dedup();
    Ok(Deformation { presentation: rep.presentation.display(), point_count: rep.points.len(), sampled_a })
}

fn parse_command(name: &str) -> PyResult<Command> {
    Ok(match name {
        "invariants" => Command::Invariants,
        "endo-ring" => Command::EndoRing,
        "classes" => Command::Classes,
        "oracle" => Command::Oracle,
        "deformation" => Command::Deformation,
        other => return Err(PyValueError::new_err(format!("unknown command {other:?}"))),
    })
}

/// Runs a CLI command; returns `(exit_code, json_report)`.
#[pyfunction]
#[pyo3(signature = (command, q, ell = None, n = None, d = 1, cache_dir = None))]
fn run_command(
    command: &str,
    q: u64,
    ell: Option<u64>,
    n: Option<u64>,
    d: u64,
    cache_dir: Option<PathBuf>,
) -> PyResult<(i32, String)> {
    let mut cfg = RunConfig::new(parse_command(command)?, q, ell, n, d);
    cfg.cache_dir = cache_dir;
    let report = run(&cfg);
    Ok((report.exit_code(), report.to_json()))
}

#[pymodule]
fn cuspcenter(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("VerificationError", m.py().get_type::<VerificationError>())?;
    m.add_class::<ParameterSet>()?;
    m.add_class::<InvariantRing>()?;
    m.add_class::<ClassType>()?;
    m.add_class::<EndoRing>()?;
    m.add_class::<Deformation>()?;
    m.add_function(wrap_pyfunction!(invariant_ring, m)?)?;
    m.add_function(wrap_pyfunction!(class_types, m)?)?;
    m.add("verify_endo_ring", wrap_pyfunction!(verify_endo_ring_py, m)?)?;
    m.add_function(wrap_pyfunction!(deformation_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_command, m)?)?;
    Ok(())
}
