//! Builds the objects described by a configuration and runs its tasks.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use pertinency::algebra::{AbelianGroup, AlgebraElement, GradingAssignment, Monomial, SkewPolyRing};
use pertinency::coeff::{Cyclotomic, Field, FieldMaps, PrimeField, Rationals};
use pertinency::group::{
    cyclic_permutation_group, group_closure, hdet, invariant_dimension_direct, molien_series,
    odd_cycle_oracle, quasi_bireflections, quasi_reflections, reflection_profile, trace_function, trace_series,
    FiniteGroup, MonomialAutomorphism, DEFAULT_GROUP_CAP,
};
use pertinency::smash::{
    corner_dimension, fourier_suite, ideal_ladder, ideal_membership, integral_idempotent, pertinency_report,
    FourierSuite, HopfPart, PertinencyReport, ReportOptions, SmashAlgebra, SmashElement, SmashError,
};
use serde::{Deserialize, Serialize};

use crate::config::{
    parse_scalar, ConfigError, ExperimentConfig, FieldSpec, GroupKind, NamedQ, QSpec, SmashKindSpec, Task,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Highest degree of the direct invariant and corner cross-checks in the
/// molien task; the series itself goes to `max_degree`.
pub const MOLIEN_CHECK_DEGREE: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    /// Seeds the choice of certificate primes.
    pub seed: u64,
    /// Record wall-clock timings. Off by default so that reports are
    /// byte-identical across runs.
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub results: Results,
    pub timings_ms: BTreeMap<String, u64>,
    pub version: String,
}

impl Report {
    /// Task errors and failed self-checks, as `(task, message)`.
    pub fn failures(&self) -> Vec<(&'static str, String)> {
        let r = &self.results;
        let mut out: Vec<_> = r.errors().into_iter().map(|(t, m)| (t, m.to_string())).collect();
        if r.reflection.as_ref().and_then(Outcome::ok).is_some_and(|x| x.odd_cycle_check == Some(false)) {
            out.push(("reflection", "pole orders disagree with the odd cycle count".into()));
        }
        if r.molien.as_ref().and_then(Outcome::ok).is_some_and(|m| !m.consistent) {
            out.push(("molien", "series disagrees with the direct invariant dimensions".into()));
        }
        if let Some(m) = r.membership.as_ref().and_then(Outcome::ok) {
            for c in m.checks.iter().filter(|c| c.expected.is_some_and(|e| e != c.in_ideal)) {
                out.push(("membership", format!("{}: expected in_ideal = {}", c.element, !c.in_ideal)));
            }
        }
        if r.verify_lemma53.as_ref().and_then(Outcome::ok).is_some_and(|l| !l.passed) {
            out.push(("verify_lemma53", "an identity of the Fourier suite failed".into()));
        }
        out
    }

    pub fn succeeded(&self) -> bool {
        self.failures().is_empty()
    }

    /// `0` on success, `1` when a task failed; configuration errors (`2`)
    /// never produce a report.
    pub fn exit_code(&self) -> u8 {
        if self.succeeded() {
            0
        } else {
            1
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome<T> {
    Ok { result: T },
    Error { message: String },
}

impl<T> Outcome<T> {
    fn from_result<E: std::fmt::Display>(r: Result<T, E>) -> Self {
        match r {
            Ok(result) => Outcome::Ok { result },
            Err(e) => Outcome::Error { message: e.to_string() },
        }
    }

    pub fn ok(&self) -> Option<&T> {
        match self {
            Outcome::Ok { result } => Some(result),
            Outcome::Error { .. } => None,
        }
    }

    fn error(&self) -> Option<&str> {
        match self {
            Outcome::Ok { .. } => None,
            Outcome::Error { message } => Some(message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Results {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Outcome<TraceResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hdet: Option<Outcome<HdetResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflection: Option<Outcome<ReflectionResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub molien: Option<Outcome<MolienResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pertinency: Option<Outcome<PertinencyReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<Outcome<MembershipResult>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify_lemma53: Option<Outcome<Lemma53Result>>,
}

impl Results {
    /// `(task, message)` for every failed task.
    pub fn errors(&self) -> Vec<(&'static str, &str)> {
        let r = self;
        [
            ("trace", r.trace.as_ref().and_then(Outcome::error)),
            ("hdet", r.hdet.as_ref().and_then(Outcome::error)),
            ("reflection", r.reflection.as_ref().and_then(Outcome::error)),
            ("molien", r.molien.as_ref().and_then(Outcome::error)),
            ("pertinency", r.pertinency.as_ref().and_then(Outcome::error)),
            ("membership", r.membership.as_ref().and_then(Outcome::error)),
            ("verify_lemma53", r.verify_lemma53.as_ref().and_then(Outcome::error)),
        ]
        .into_iter()
        .filter_map(|(name, m)| m.map(|m| (name, m)))
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementTrace {
    pub element: String,
    /// `Tr(g, t)` as a reduced rational function.
    pub trace: String,
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    pub elements: Vec<ElementTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementValue {
    pub element: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdetResult {
    pub elements: Vec<ElementValue>,
    /// `hdet(g) = 1` for every `g`.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionResult {
    /// `r(g)` in group order; the identity comes first.
    pub numbers: Vec<usize>,
    pub elements: Vec<String>,
    /// `min r(g)` over non-identity `g`.
    pub group: Option<usize>,
    pub quasi_reflections: Vec<usize>,
    pub quasi_bireflections: Vec<usize>,
    /// Pole orders agree with odd cycle counts; absent when the oracle
    /// does not apply.
    pub odd_cycle_check: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MolienResult {
    pub coefficients: Vec<String>,
    /// `dim (R^G)_d` from the Reynolds operator, up to `checked_through`.
    pub invariant_dims: Vec<usize>,
    /// `dim e B_d e` (group smash only), up to `checked_through`.
    pub corner_dims: Option<Vec<usize>>,
    pub checked_through: u32,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipCheck {
    pub element: String,
    pub in_ideal: bool,
    /// What theory predicts, when it predicts anything.
    pub expected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipResult {
    pub checks: Vec<MembershipCheck>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma53Result {
    #[serde(flatten)]
    pub suite: FourierSuite,
    pub passed: bool,
}

struct Prepared<F: Field> {
    ring: Arc<SkewPolyRing<F>>,
    group: Arc<FiniteGroup<F>>,
    smash: Arc<SmashAlgebra<F>>,
}

fn prepare<F: Field>(field: F, cfg: &ExperimentConfig) -> Result<Prepared<F>, Vec<String>> {
    let n = cfg.ring.n;
    let mut errs = Vec::new();
    let ring = match &cfg.ring.q {
        QSpec::Named(NamedQ::MinusOne) => SkewPolyRing::minus_one(field.clone(), n),
        QSpec::Named(NamedQ::Commutative) => SkewPolyRing::commutative(field.clone(), n),
        QSpec::Matrix(rows) => {
            let parsed: Result<Vec<Vec<F::Elem>>, String> =
                rows.iter().map(|r| r.iter().map(|s| parse_scalar(&field, s)).collect()).collect();
            match parsed.and_then(|q| SkewPolyRing::new(field.clone(), q).map_err(|e| e.to_string())) {
                Ok(r) => r,
                Err(e) => return Err(vec![format!("ring.q: {e}")]),
            }
        }
    };
    let group = match cfg.group.kind {
        GroupKind::CyclicPermutation => cyclic_permutation_group(&ring).map_err(|e| e.to_string()),
        GroupKind::Explicit => {
            let mut gens = Vec::new();
            for (k, g) in cfg.group.generators.iter().enumerate() {
                let scalars = match &g.scalars {
                    None => Ok(vec![field.one(); n]),
                    Some(s) => s.iter().map(|c| parse_scalar(&field, c)).collect(),
                };
                match scalars.and_then(|s| MonomialAutomorphism::new(&field, g.perm.clone(), s).map_err(|e| e.to_string())) {
                    Ok(a) => gens.push(a),
                    Err(e) => errs.push(format!("group.generators[{k}]: {e}")),
                }
            }
            group_closure(&ring, &gens, DEFAULT_GROUP_CAP).map_err(|e| e.to_string())
        }
    };
    let group = match group {
        Ok(g) if errs.is_empty() => g,
        Ok(_) => return Err(errs),
        Err(e) => {
            errs.push(format!("group: {e}"));
            return Err(errs);
        }
    };
    if !field.is_unit_integer(group.order() as u64) {
        errs.push(format!("group order {} is not invertible in {}", group.order(), field.kind()));
    }
    let ring = Arc::new(ring);
    let group = Arc::new(group);
    let smash = match cfg.smash.kind {
        SmashKindSpec::Group => SmashAlgebra::group(ring.clone(), group.clone()).map_err(|e| e.to_string()),
        SmashKindSpec::Dual => dual_smash(&ring, &group, cfg.grading.as_deref().unwrap_or_default()),
    };
    match smash {
        Ok(s) if errs.is_empty() => Ok(Prepared { ring, group, smash: Arc::new(s) }),
        Ok(_) => Err(errs),
        Err(e) => {
            errs.push(e);
            Err(errs)
        }
    }
}

fn dual_smash<F: Field>(ring: &Arc<SkewPolyRing<F>>, group: &FiniteGroup<F>, labels: &[usize]) -> Result<SmashAlgebra<F>, String> {
    let (orders, coords) = group
        .abelian_decomposition()
        .ok_or_else(|| format!("dual smash requires an abelian group (order {} is not)", group.order()))?;
    if let Some(bad) = labels.iter().find(|&&l| l >= group.order()) {
        return Err(format!("grading label {bad} is out of range for a group of order {}", group.order()));
    }
    let degrees = labels.iter().map(|&l| coords[l].clone()).collect();
    let grading = GradingAssignment::new(AbelianGroup::new(orders), degrees).map_err(|e| e.to_string())?;
    SmashAlgebra::dual(ring.clone(), grading).map_err(|e| e.to_string())
}

/// Checks that need the field and the group.
pub fn prepare_violations(cfg: &ExperimentConfig) -> Vec<String> {
    fn go<F: Field>(field: F, cfg: &ExperimentConfig) -> Vec<String> {
        prepare(field, cfg).err().unwrap_or_default()
    }
    let mut out = match cfg.field {
        FieldSpec::Rational => go(Rationals, cfg),
        FieldSpec::Cyclotomic { n } => match Cyclotomic::new(n) {
            Ok(f) => go(f, cfg),
            Err(e) => vec![format!("field: {e}")],
        },
        FieldSpec::Prime { p } => match PrimeField::new(p) {
            Ok(f) => go(f, cfg),
            Err(e) => vec![format!("field: {e}")],
        },
    };
    if cfg.tasks.contains(&Task::VerifyLemma53) {
        if cfg.ring.q != QSpec::Named(NamedQ::MinusOne) || cfg.group.kind != GroupKind::CyclicPermutation {
            out.push("verify_lemma53 needs ring.q = \"minus_one\" and group.kind = \"cyclic_permutation\"".into());
        }
        if cfg.ring.n < 2 {
            out.push("verify_lemma53 needs n >= 2".into());
        }
    }
    out
}

/// Validates `cfg` completely and runs every requested task.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Report, ConfigError> {
    let mut violations = cfg.violations();
    if violations.is_empty() {
        violations = prepare_violations(cfg);
    }
    if !violations.is_empty() {
        return Err(ConfigError::Invalid(violations));
    }
    let (results, timings) = match cfg.field {
        FieldSpec::Rational => run_in(Rationals, cfg, opts),
        FieldSpec::Cyclotomic { n } => run_in(Cyclotomic::new(n).expect("validated"), cfg, opts),
        FieldSpec::Prime { p } => run_in(PrimeField::new(p).expect("validated"), cfg, opts),
    };
    Ok(Report {
        config: cfg.clone(),
        results,
        timings_ms: if opts.timings { timings } else { BTreeMap::new() },
        version: VERSION.to_string(),
    })
}

fn run_in<F: FieldMaps>(field: F, cfg: &ExperimentConfig, opts: &RunOptions) -> (Results, BTreeMap<String, u64>) {
    let prep = prepare(field, cfg).unwrap_or_else(|e| panic!("validated configuration failed to build: {e:?}"));
    let mut results = Results::default();
    let mut timings = BTreeMap::new();
    for task in cfg.ordered_tasks() {
        let t = Instant::now();
        match task {
            Task::Trace => results.trace = Some(Outcome::from_result(trace_task(&prep, cfg))),
            Task::Hdet => results.hdet = Some(Outcome::from_result(hdet_task(&prep))),
            Task::Reflection => results.reflection = Some(Outcome::from_result(reflection_task(&prep))),
            Task::Molien => results.molien = Some(Outcome::from_result(molien_task(&prep, cfg))),
            Task::Pertinency => {
                let ro = ReportOptions::new(cfg.max_degree()).policy(cfg.field_policy).seed(opts.seed);
                results.pertinency = Some(Outcome::from_result(pertinency_report(&prep.smash, &ro)));
            }
            Task::Membership => results.membership = Some(Outcome::from_result(membership_task(&prep, cfg))),
            Task::VerifyLemma53 => {
                let r = fourier_suite(cfg.ring.n).map(|suite| Lemma53Result { passed: suite.all_hold(), suite });
                results.verify_lemma53 = Some(Outcome::from_result(r));
            }
        }
        timings.insert(task.name().to_string(), t.elapsed().as_millis() as u64);
    }
    (results, timings)
}

fn trace_task<F: Field>(p: &Prepared<F>, cfg: &ExperimentConfig) -> Result<TraceResult, String> {
    let field = p.ring.field();
    let elements = p
        .group
        .elements()
        .iter()
        .map(|g| {
            let f = trace_function(&p.ring, g).map_err(|e| e.to_string())?;
            let s = trace_series(&p.ring, g, cfg.max_degree());
            Ok(ElementTrace {
                element: g.render(field),
                trace: f.render(field),
                coefficients: s.coeffs().iter().map(|c| field.render(c)).collect(),
            })
        })
        .collect::<Result<_, String>>()?;
    Ok(TraceResult { elements })
}

fn hdet_task<F: Field>(p: &Prepared<F>) -> Result<HdetResult, String> {
    let field = p.ring.field();
    let mut trivial = true;
    let mut elements = Vec::new();
    for g in p.group.elements() {
        let h = hdet(&p.ring, g).map_err(|e| e.to_string())?;
        trivial &= field.is_one(&h);
        elements.push(ElementValue { element: g.render(field), value: field.render(&h) });
    }
    Ok(HdetResult { elements, trivial })
}

fn reflection_task<F: Field>(p: &Prepared<F>) -> Result<ReflectionResult, String> {
    let field = p.ring.field();
    let n = p.ring.nvars();
    let numbers = reflection_profile(&p.ring, &p.group).map_err(|e| e.to_string())?;
    let oracle: Result<Vec<usize>, _> = p.group.elements().iter().map(|g| odd_cycle_oracle(&p.ring, g)).collect();
    let odd_cycle_check = oracle.ok().map(|odd| odd.iter().zip(&numbers).all(|(o, r)| n - r == *o));
    Ok(ReflectionResult {
        group: numbers.iter().skip(1).min().copied(),
        elements: p.group.elements().iter().map(|g| g.render(field)).collect(),
        quasi_reflections: quasi_reflections(&p.ring, &p.group).map_err(|e| e.to_string())?,
        quasi_bireflections: quasi_bireflections(&p.ring, &p.group).map_err(|e| e.to_string())?,
        numbers,
        odd_cycle_check,
    })
}

fn molien_task<F: Field>(p: &Prepared<F>, cfg: &ExperimentConfig) -> Result<MolienResult, String> {
    let field = p.ring.field();
    let d_max = cfg.max_degree();
    let series = molien_series(&p.ring, &p.group, d_max).map_err(|e| e.to_string())?;
    let through = d_max.min(MOLIEN_CHECK_DEGREE);
    let invariant_dims = (0..=through)
        .map(|d| invariant_dimension_direct(&p.ring, &p.group, d))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let corner_dims = match p.smash.hopf() {
        HopfPart::Group(_) => Some(
            (0..=through)
                .map(|d| corner_dimension(&p.smash, d))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?,
        ),
        HopfPart::Dual(_) => None,
    };
    let consistent = invariant_dims.iter().enumerate().all(|(d, &k)| {
        series.coeff(d) == &field.from_i64(k as i64) && corner_dims.as_ref().is_none_or(|c| c[d] == k)
    });
    Ok(MolienResult {
        coefficients: series.coeffs().iter().map(|c| field.render(c)).collect(),
        invariant_dims,
        corner_dims,
        checked_through: through,
        consistent,
    })
}

fn membership_task<F: Field>(p: &Prepared<F>, cfg: &ExperimentConfig) -> Result<MembershipResult, SmashError> {
    let b = &p.smash;
    let field = b.field();
    let n = p.ring.nvars();
    let mut items: Vec<(String, SmashElement<F>, Option<bool>)> = Vec::new();
    items.push(("e".into(), integral_idempotent(b)?, Some(true)));
    if let HopfPart::Dual(gr) = b.hopf() {
        // A generator whose degree generates G: the suffix degrees of x_i^|G| cover G.
        let order = gr.group().order();
        for i in 0..n {
            let single = GradingAssignment::new(gr.group().clone(), vec![gr.degrees()[i].clone()]);
            if single.is_ok_and(|s| s.generates_group()) {
                let m = Monomial::generator(n, i);
                let f = AlgebraElement::generator(&p.ring, i)?.pow(order as u32);
                items.push((format!("({m})^{order}#1"), SmashElement::from_ring(b, &f), Some(true)));
            }
        }
    }
    for a in &cfg.membership {
        let m = Monomial::new(a.clone());
        let f = AlgebraElement::monomial(&p.ring, m.clone(), field.one());
        items.push((format!("{m}#1"), SmashElement::from_ring(b, &f), None));
    }
    let top = items.iter().filter_map(|(_, f, _)| f.homogeneous_degree()).max().unwrap_or(0);
    let ladder = ideal_ladder(b, top)?;
    let mut checks = Vec::new();
    for (element, f, expected) in items {
        let in_ideal = ideal_membership(&f, &ladder)?;
        checks.push(MembershipCheck { element, in_ideal, expected });
    }
    let passed = checks.iter().all(|c| c.expected.is_none_or(|e| e == c.in_ideal));
    Ok(MembershipResult { checks, passed })
}
