//! The five subcommands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cuspcenter_core::arith::mult_order;
use cuspcenter_core::center::{
    bucket_of, verify_endo_ring_with, CenterContext, EndoRingResult,
};
use cuspcenter_core::characters::gl2::gl2_table_oracle;
use cuspcenter_core::classes::oracle::matrix_oracle;
use cuspcenter_core::classes::{class_predicates, gl_order, ClassType};
use cuspcenter_core::deformation::{emit_a_pi_presentation, DeformationReport};
use cuspcenter_core::invariants::{invariant_ring, orbit_structure, pullback_mod_ell_check, uniformizer_check};
use cuspcenter_core::{reduce_parameters, validate_parameters, Error, ParameterSet, Result};
use num_bigint::BigInt;
use serde::Serialize;

use crate::cache::{load_or_enumerate, ClassCache};
use crate::json::{block_vector, cyclotomic, BlockVectorJson, ClassJson, CyclotomicJson, PolynomialJson, RationalJson};
use crate::report::{Report, Request};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Invariants,
    EndoRing,
    Classes,
    Oracle,
    Deformation,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::EndoRing => "endo-ring",
            Command::Classes => "classes",
            Command::Oracle => "oracle",
            Command::Deformation => "deformation",
        }
    }
}

/// A fully specified run. Identical configurations give identical reports.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub q: u64,
    pub ell: Option<u64>,
    pub n: Option<u64>,
    pub d: u64,
    pub cache_dir: Option<PathBuf>,
    pub max_group_order: u64,
    /// Number of `T_i` in the deformation presentation; defaults to `n`.
    pub t_count: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command, q: u64, ell: Option<u64>, n: Option<u64>, d: u64) -> Self {
        RunConfig {
            command,
            q,
            ell,
            n,
            d,
            cache_dir: None,
            max_group_order: cuspcenter_core::classes::oracle::DEFAULT_MAX_GROUP_ORDER,
            t_count: None,
        }
    }

    fn cache(&self) -> Option<ClassCache> {
        self.cache_dir.as_ref().map(ClassCache::new)
    }

    /// Validated parameters; `n` defaults to `d` times the order of `q^d` mod `ell`.
    pub fn parameters(&self) -> Result<ParameterSet> {
        let ell = self.ell.ok_or_else(|| Error::InvalidPrime("--ell is required".into()))?;
        let n = match self.n {
            Some(n) => n,
            None => self
                .q
                .checked_pow(self.d as u32)
                .and_then(|qd| mult_order(qd, ell))
                .map_or(0, |o| o * self.d),
        };
        validate_parameters(self.q, ell, n, self.d)
    }

    fn group_n(&self) -> Result<u64> {
        self.n.ok_or_else(|| Error::DegenerateBlock("--n is required".into()))
    }
}

/// Runs a command and returns its report.
pub fn run(cfg: &RunConfig) -> Report {
    let request = Request { q: cfg.q, ell: cfg.ell, n: cfg.n, d: cfg.d };
    let mut report = Report::new(cfg.command.name(), request);
    let r = match cfg.command {
        Command::Invariants => invariants(cfg, &mut report),
        Command::EndoRing => endo_ring(cfg, &mut report),
        Command::Classes => classes(cfg, &mut report),
        Command::Oracle => oracle(cfg, &mut report),
        Command::Deformation => deformation(cfg, &mut report),
    };
    report.finish(r);
    report
}

fn set_params(report: &mut Report, ps: &ParameterSet) -> ParameterSet {
    let reduced = reduce_parameters(ps);
    report.envelope.parameter_set = Some(ps.into());
    report.envelope.reduced = Some((&reduced).into());
    reduced
}

#[derive(Serialize)]
struct UniformizerJson {
    level: u32,
    valuation: i64,
    norm_element_valuation: i64,
}

fn invariants(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let ps = cfg.parameters()?;
    let red = set_params(report, &ps);
    let orbits = report.check("orbit-order", orbit_structure(&ps))?;
    let expected_degree = 1 + (red.ell_r() - 1) / red.n;
    report.expect("degree", orbits.len() as u64 == expected_degree, || {
        format!("{} orbits, expected {expected_degree}", orbits.len())
    });
    let mut uniformizers = Vec::new();
    for i in 1..=red.r {
        let u = report.check(&format!("uniformizer-level-{i}"), uniformizer_check(&ps, i))?;
        uniformizers.push(UniformizerJson {
            level: u.level,
            valuation: u.valuation,
            norm_element_valuation: u.norm_element_valuation,
        });
    }
    let pull = report.check("pullback-mod-l", pullback_mod_ell_check(&ps))?;
    let ring = report.check("invariant-ring", invariant_ring(&ps))?;
    report.expect("m-is-power-mod-l", ring.min_poly_is_power_mod_ell(), || format!("m = {}", ring.m));

    report.artifact("degree", &ring.degree());
    report.artifact("orbit_representatives", &orbits.reps());
    report.artifact("orbits", &orbits.orbits);
    report.artifact("m", &PolynomialJson::from(&ring.m));
    report.artifact("m_factors", &ring.m_i.iter().map(PolynomialJson::from).collect::<Vec<_>>());
    report.artifact("omega", &ring.omega.iter().map(|w| cyclotomic(w, red.ell)).collect::<Vec<_>>());
    report.artifact("uniformizers", &uniformizers);
    report.artifact("pullback_multiplicity", &pull.multiplicity);
    report.artifact("m_mod_ell", &ring.m.residues_mod(red.ell));
    let orbit_sums_in_f: Vec<Vec<RationalJson>> =
        (0..ring.degree()).map(|o| ring.inverse.row(o).iter().map(RationalJson::from).collect()).collect();
    report.artifact("orbit_sums_in_powers_of_f", &orbit_sums_in_f);
    report.summary.push(format!("invariant ring: W(k)[Y]/({})", ring.m));
    report.summary.push(format!("degree D = {}", ring.degree()));
    Ok(())
}

#[derive(Serialize)]
struct CertificateJson {
    class: ClassJson,
    bucket: &'static str,
    delta: BlockVectorJson,
    in_s: bool,
    h: PolynomialJson,
}

#[derive(Serialize)]
struct ActionJson {
    slot: u64,
    member: String,
    value: CyclotomicJson,
}

#[derive(Serialize)]
struct SignsJson {
    v: u64,
    d: u64,
    lhs: RationalJson,
    rhs: String,
}

#[derive(Serialize)]
struct RealizedJson {
    class: ClassJson,
    delta: BlockVectorJson,
    unit: RationalJson,
    result: BlockVectorJson,
    in_gamma: PolynomialJson,
}

#[derive(Serialize)]
struct GammaChainJson {
    class: ClassJson,
    delta: BlockVectorJson,
    unit: RationalJson,
    normalized: BlockVectorJson,
    correction: RationalJson,
    result: BlockVectorJson,
}

#[derive(Serialize)]
struct GOfGammaJson {
    g: PolynomialJson,
    value: BlockVectorJson,
    a: RationalJson,
    valuation: i64,
}

fn endo_ring_artifacts(report: &mut Report, res: &EndoRingResult) {
    let ell = res.params.ell;
    report.artifact("m", &PolynomialJson::from(&res.m));
    report.artifact("presentation", &format!("W(k)[Y]/({})", res.m));
    report.artifact("gamma", &block_vector(&res.gamma, ell));
    let action: Vec<ActionJson> = res
        .action_table
        .iter()
        .map(|a| ActionJson {
            slot: a.slot,
            member: if a.slot == 0 { "steinberg".into() } else { format!("cuspidal-{}", a.slot) },
            value: cyclotomic(&a.value, ell),
        })
        .collect();
    report.artifact("action_table", &action);
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    for c in &res.certificates {
        *counts.entry(c.bucket.name()).or_default() += 1;
    }
    report.artifact("bucket_counts", &counts);
    let signs: Vec<SignsJson> = res
        .signs
        .iter()
        .map(|s| SignsJson { v: s.v, d: s.d, lhs: (&s.lhs).into(), rhs: s.rhs.to_string() })
        .collect();
    report.artifact("lemma_signs", &signs);
    let certs: Vec<CertificateJson> = res
        .certificates
        .iter()
        .map(|c| CertificateJson {
            class: (&c.class).into(),
            bucket: c.bucket.name(),
            delta: block_vector(&c.delta, ell),
            in_s: c.in_s,
            h: (&c.h).into(),
        })
        .collect();
    report.artifact("certificates", &certs);
    let i = &res.idempotent;
    report.artifact(
        "realized",
        &RealizedJson {
            class: (&i.class).into(),
            delta: block_vector(&i.delta, ell),
            unit: (&i.unit).into(),
            result: block_vector(&i.result, ell),
            in_gamma: (&res.idempotent_in_gamma).into(),
        },
    );
    let g = &res.gamma_chain;
    report.artifact(
        "gamma_chain",
        &GammaChainJson {
            class: (&g.class).into(),
            delta: block_vector(&g.delta, ell),
            unit: (&g.unit).into(),
            normalized: block_vector(&g.normalized, ell),
            correction: (&g.correction).into(),
            result: block_vector(&g.result, ell),
        },
    );
    let gg = &res.g_of_gamma;
    report.artifact(
        "g_of_gamma",
        &GOfGammaJson {
            g: (&gg.g).into(),
            value: block_vector(&gg.value, ell),
            a: (&gg.a).into(),
            valuation: gg.valuation,
        },
    );
    report.summary.push(format!("End(P) = W(k)[Y]/({})", res.m));
    report.summary.push(format!("Y -> gamma = {}", res.gamma));
    for (name, count) in counts {
        report.summary.push(format!("  {name}: {count} classes"));
    }
}

fn endo_ring(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let ps = cfg.parameters()?;
    let red = set_params(report, &ps);
    let classes = load_or_enumerate(cfg.cache().as_ref(), red.q, red.n)?;
    let mut steps: Vec<(&'static str, Option<String>)> = Vec::new();
    let res = verify_endo_ring_with(&ps, Some(classes), &mut |name, outcome| {
        steps.push((name, outcome.err().map(ToString::to_string)));
    });
    for (name, failure) in steps {
        match failure {
            None => report.pass(name),
            Some(w) => report.fail(name, w),
        }
    }
    let res = res?;
    endo_ring_artifacts(report, &res);
    Ok(())
}

#[derive(Serialize)]
struct ClassRowJson {
    class: ClassJson,
    primary: bool,
    semisimple: bool,
    ell_regular: Option<bool>,
    bucket: Option<&'static str>,
}

fn classes(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let (q, n, ps) = match cfg.ell {
        Some(_) => {
            let ps = cfg.parameters()?;
            let red = set_params(report, &ps);
            (red.q, red.n, Some(red))
        }
        None => (cfg.q, cfg.group_n()?, None),
    };
    let classes = load_or_enumerate(cfg.cache().as_ref(), q, n)?;
    let order = gl_order(q, n);
    let sum: BigInt = classes.iter().map(|c| &c.class_size).sum();
    report.expect("class-equation", sum == order, || format!("sum of sizes {sum} != |G| = {order}"));
    let mut rows = Vec::with_capacity(classes.len());
    let mut centralizer_failure = None;
    for ct in &classes {
        let (ell_regular, bucket) = match &ps {
            Some(ps) => match class_predicates(ct, ps) {
                Ok(p) => (Some(p.ell_regular), Some(bucket_of(ct).name())),
                Err(e) => {
                    centralizer_failure.get_or_insert(e.to_string());
                    (None, Some(bucket_of(ct).name()))
                }
            },
            None => (None, None),
        };
        rows.push(ClassRowJson {
            class: ct.into(),
            primary: ct.is_primary(),
            semisimple: ct.is_semisimple(),
            ell_regular,
            bucket,
        });
    }
    if ps.is_some() {
        report.expect("centralizer-order", centralizer_failure.is_none(), || centralizer_failure.clone().unwrap_or_default());
    }
    report.artifact("group_order", &order.to_string());
    report.artifact("class_count", &classes.len());
    report.artifact("classes", &rows);
    report.summary.push(format!("GL_{n}(F_{q}): {} classes, order {order}", classes.len()));
    Ok(())
}

fn sorted_sizes(classes: &[ClassType]) -> Vec<String> {
    let mut sizes: Vec<_> = classes.iter().map(|c| c.class_size.clone()).collect();
    sizes.sort();
    sizes.iter().map(ToString::to_string).collect()
}

fn oracle(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let n = cfg.group_n()?;
    let q = cfg.q;
    let ps = match cfg.ell {
        Some(_) => {
            let ps = cfg.parameters()?;
            set_params(report, &ps);
            Some(ps)
        }
        None => None,
    };
    let census = matrix_oracle(q, n, cfg.max_group_order)?;
    let types = load_or_enumerate(cfg.cache().as_ref(), q, n)?;
    let mut from_matrices: Vec<(ClassType, String)> =
        census.classes.iter().map(|e| (e.class.clone(), e.size.to_string())).collect();
    let mut from_types: Vec<(ClassType, String)> =
        types.iter().map(|c| (c.clone(), c.class_size.to_string())).collect();
    from_matrices.sort_by_key(|(c, _)| c.sort_key());
    from_types.sort_by_key(|(c, _)| c.sort_key());
    report.expect("matrix-census", from_matrices == from_types, || {
        format!("{} classes by conjugation, {} by type", from_matrices.len(), from_types.len())
    });
    let centralizers_ok = census.classes.iter().all(|e| e.class.centralizer_order == BigInt::from(e.centralizer));
    report.expect("centralizer-orders", centralizers_ok, || "counted centralizer differs from formula".into());
    report.artifact("group_order", &census.group_order.to_string());
    report.artifact("class_count", &census.classes.len());
    report.artifact("class_sizes", &sorted_sizes(&types));
    report.summary.push(format!("GL_{n}(F_{q}): {} classes by brute force", census.classes.len()));

    if n == 2 {
        let table = report.check("gl2-table", gl2_table_oracle(q, cfg.max_group_order))?;
        report.artifact("gl2_characters", &table.characters.len());
        if let Some(ps) = ps {
            if ps.is_reduced() {
                let ctx = CenterContext::new(&ps)?;
                let mut delta_mismatch = None;
                let mut sign_mismatch = None;
                let mut compared = 0usize;
                for ct in &types {
                    let ours = ctx.delta_class(ct)?;
                    let theirs = ctx.delta_from_gl2_table(&table, ct)?;
                    compared += 1;
                    if ours.entries.iter().zip(&theirs).any(|(a, b)| &a.embed(table.conductor) != b) {
                        delta_mismatch.get_or_insert_with(|| ct.to_string());
                    }
                    if ct.is_semisimple() {
                        let col = table.column_of(ct).expect("column exists");
                        let st = ctx.characters.steinberg_value(ct).embed(table.conductor);
                        if st != table.value(table.steinberg_row(), col) {
                            sign_mismatch.get_or_insert_with(|| ct.to_string());
                        }
                    }
                }
                report.expect("delta-table-vs-formulas", delta_mismatch.is_none(), || {
                    format!("class {}", delta_mismatch.clone().unwrap_or_default())
                });
                report.expect("steinberg-sign", sign_mismatch.is_none(), || {
                    format!("class {}", sign_mismatch.clone().unwrap_or_default())
                });
                report.artifact("delta_classes_compared", &compared);
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct PointRowJson {
    a: u64,
    samples: usize,
    branch: &'static str,
    trace: CyclotomicJson,
    t_first_sample: Vec<CyclotomicJson>,
}

#[derive(Serialize)]
struct PresentationJson {
    display: String,
    generators: Vec<String>,
    t_count: usize,
    m: PolynomialJson,
    i0: PolynomialJson,
    lemma_relations: Vec<String>,
    helm_relations: Vec<String>,
}

fn deformation_artifacts(report: &mut Report, rep: &DeformationReport, ell: u64) {
    let p = &rep.presentation;
    report.artifact(
        "presentation",
        &PresentationJson {
            display: p.display(),
            generators: p.generators(),
            t_count: p.t_count,
            m: (&p.m).into(),
            i0: (&p.i0).into(),
            lemma_relations: p.lemma_relations.iter().map(ToString::to_string).collect(),
            helm_relations: p.helm_relations.iter().map(ToString::to_string).collect(),
        },
    );
    let mut rows: Vec<PointRowJson> = Vec::new();
    for pt in &rep.points {
        match rows.last_mut() {
            Some(row) if row.a == pt.a => row.samples += 1,
            _ => rows.push(PointRowJson {
                a: pt.a,
                samples: 1,
                branch: if pt.a == 0 { "Y-n" } else { "T_i=0" },
                trace: cyclotomic(&pt.trace, ell),
                t_first_sample: pt.t.iter().map(|t| cyclotomic(t, ell)).collect(),
            }),
        }
    }
    report.artifact("point_count", &rep.points.len());
    report.artifact("points", &rows);
    report.artifact("f_from_points", &PolynomialJson::from(&rep.f_from_points));
    report.artifact("trace_values", &rep.trace_values.iter().map(|t| cyclotomic(t, ell)).collect::<Vec<_>>());
    report.summary.push(format!("A = {}", p.display()));
    report.summary.push(format!("{} points checked over {} values of a", rep.points.len(), rows.len()));
}

/// Checks established by a successful [`emit_a_pi_presentation`].
const DEFORMATION_CHECKS: [&str; 7] =
    ["commutation", "m(Tr Psi)=0", "T_i=0", "Tr Psi = n", "lemma-ideal", "helm-ideal", "root-set"];

fn deformation(cfg: &RunConfig, report: &mut Report) -> Result<()> {
    let ps = cfg.parameters()?;
    let red = set_params(report, &ps);
    let ring = report.check("invariant-ring", invariant_ring(&ps))?;
    let rep = emit_a_pi_presentation(&ps, &ring, cfg.t_count)?;
    for name in DEFORMATION_CHECKS {
        report.pass(name);
    }
    report.expect("f=m", rep.f_from_points == ring.m, || format!("f = {}", rep.f_from_points));
    deformation_artifacts(report, &rep, red.ell);
    Ok(())
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_defaults_to_d_times_order() {
        let cfg = RunConfig::new(Command::Invariants, 2, Some(5), None, 2);
        assert_eq!(cfg.parameters().unwrap().n, 4);
        let cfg = RunConfig::new(Command::Invariants, 2, Some(7), None, 1);
        assert_eq!(cfg.parameters().unwrap().n, 3);
    }

    #[test]
    fn missing_ell_is_input_error() {
        let cfg = RunConfig::new(Command::EndoRing, 2, None, Some(2), 1);
        assert!(cfg.parameters().unwrap_err().is_input_error());
        assert_eq!(run(&cfg).exit_code(), 2);
    }
}
