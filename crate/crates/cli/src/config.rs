//! Experiment configuration: JSON schema, scalar syntax and validation.

use std::fmt;

use pertinency::coeff::{is_prime, parse_rational, Field};
use pertinency::smash::FieldPolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("malformed configuration: {0}")]
    Syntax(String),
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ring: RingSpec,
    pub field: FieldSpec,
    pub group: GroupSpec,
    #[serde(default)]
    pub smash: SmashSpec,
    /// Dual smash only: for each variable, the index of its degree in the
    /// group's element list.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Vec<usize>>,
    /// Defaults to `4 n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default)]
    pub field_policy: FieldPolicy,
    pub tasks: Vec<Task>,
    /// Exponent vectors `a` for which `x^a # 1 ∈ I` is tested by the
    /// membership task, in addition to the built-in checks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub membership: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub n: usize,
    pub q: QSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QSpec {
    Named(NamedQ),
    Matrix(Vec<Vec<ScalarText>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedQ {
    MinusOne,
    Commutative,
}

/// A scalar written as an integer or a string such as `"-3/4"`, `"zeta4"`
/// or `"-zeta6^5"` (`zetaM` is the chosen primitive `M`-th root of unity).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl fmt::Display for ScalarText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarText::Int(v) => write!(f, "{v}"),
            ScalarText::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Rational,
    Cyclotomic { n: u32 },
    Prime { p: u64 },
}

impl FieldSpec {
    /// Parses the command-line form `rational`, `cyclotomic:N` or `prime:P`.
    pub fn parse_flag(s: &str) -> Result<Self, String> {
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (s, None),
        };
        let num = |a: Option<&str>| -> Result<u64, String> {
            a.ok_or_else(|| format!("{kind} needs a parameter, as in {kind}:N"))?
                .parse::<u64>()
                .map_err(|e| format!("bad parameter in {s:?}: {e}"))
        };
        match kind {
            "rational" if arg.is_none() => Ok(FieldSpec::Rational),
            "cyclotomic" => Ok(FieldSpec::Cyclotomic { n: num(arg)? as u32 }),
            "prime" => Ok(FieldSpec::Prime { p: num(arg)? }),
            _ => Err(format!("unknown field {s:?}; expected rational, cyclotomic:N or prime:P")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    CyclicPermutation,
    Explicit,
}

/// `x_i -> scalars[i] * x_{perm[i]}`, zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub perm: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Vec<ScalarText>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmashSpec {
    pub kind: SmashKindSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmashKindSpec {
    #[default]
    Group,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Pertinency,
    Reflection,
    Molien,
    Trace,
    Hdet,
    Membership,
    #[serde(rename = "verify_lemma53")]
    VerifyLemma53,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Pertinency => "pertinency",
            Task::Reflection => "reflection",
            Task::Molien => "molien",
            Task::Trace => "trace",
            Task::Hdet => "hdet",
            Task::Membership => "membership",
            Task::VerifyLemma53 => "verify_lemma53",
        }
    }

    /// Execution order: series first so later tasks reuse them.
    pub fn rank(self) -> usize {
        match self {
            Task::Trace => 0,
            Task::Hdet => 1,
            Task::Reflection => 2,
            Task::Molien => 3,
            Task::Pertinency => 4,
            Task::Membership => 5,
            Task::VerifyLemma53 => 6,
        }
    }
}

impl ExperimentConfig {
    pub fn max_degree(&self) -> u32 {
        self.max_degree.unwrap_or(4 * self.ring.n as u32)
    }

    /// Requested tasks, deduplicated, in execution order.
    pub fn ordered_tasks(&self) -> Vec<Task> {
        let mut tasks = self.tasks.clone();
        tasks.sort_by_key(|t| t.rank());
        tasks.dedup();
        tasks
    }

    /// Every structural violation; checks that need the field and group
    /// happen when the experiment is prepared.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let n = self.ring.n;
        if n == 0 {
            out.push("ring.n must be at least 1".into());
        }
        if let QSpec::Matrix(m) = &self.ring.q {
            if m.len() != n || m.iter().any(|row| row.len() != n) {
                out.push(format!("ring.q must be an {n}x{n} matrix"));
            }
        }
        match self.field {
            FieldSpec::Prime { p } => {
                if !is_prime(p) {
                    out.push(format!("field.p = {p} is not prime"));
                } else if (2 * n as u64) % p == 0 {
                    out.push(format!("field.p = {p} divides 2n = {}", 2 * n));
                }
                if p >= 1 << 32 {
                    out.push(format!("field.p = {p} must be below 2^32"));
                }
            }
            FieldSpec::Cyclotomic { n: 0 } => out.push("field.n must be at least 1".into()),
            _ => {}
        }
        match self.group.kind {
            GroupKind::CyclicPermutation => {
                if !self.group.generators.is_empty() {
                    out.push("group.generators only apply to kind \"explicit\"".into());
                }
            }
            GroupKind::Explicit => {
                for (k, g) in self.group.generators.iter().enumerate() {
                    let mut seen = vec![false; n];
                    let is_perm = g.perm.len() == n && g.perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true));
                    if !is_perm {
                        out.push(format!("group.generators[{k}].perm is not a permutation of 0..{n}"));
                    }
                    if let Some(s) = &g.scalars {
                        if s.len() != n {
                            out.push(format!("group.generators[{k}].scalars must have length {n}"));
                        }
                    }
                }
            }
        }
        match (self.smash.kind, &self.grading) {
            (SmashKindSpec::Dual, None) => out.push("dual smash requires a grading".into()),
            (SmashKindSpec::Dual, Some(g)) if g.len() != n => {
                out.push(format!("grading must list one label per variable ({n})"))
            }
            (SmashKindSpec::Group, Some(_)) => out.push("grading only applies to the dual smash".into()),
            _ => {}
        }
        if self.tasks.is_empty() {
            out.push("tasks must not be empty".into());
        }
        if self.tasks.contains(&Task::Pertinency) && self.max_degree() < 2 {
            out.push("max_degree must be at least 2 for the pertinency task".into());
        }
        for (k, a) in self.membership.iter().enumerate() {
            if a.len() != n {
                out.push(format!("membership[{k}] must have {n} exponents"));
            }
        }
        out
    }
}

/// Parses and structurally validates a configuration.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let v = cfg.violations();
    if v.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigError::Invalid(v))
    }
}

/// Reads a scalar in `field`.
pub fn parse_scalar<F: Field>(field: &F, s: &ScalarText) -> Result<F::Elem, String> {
    let text = match s {
        ScalarText::Int(v) => return Ok(field.from_i64(*v)),
        ScalarText::Text(t) => t.trim(),
    };
    let (negate, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, text),
    };
    let value = if let Some(root) = body.strip_prefix("zeta") {
        let (order, power) = match root.split_once('^') {
            Some((o, k)) => (o, k.trim().parse::<i64>().map_err(|e| format!("bad exponent in {text:?}: {e}"))?),
            None => (root, 1),
        };
        let order: u64 = order.trim().parse().map_err(|_| format!("expected zetaM in {text:?}"))?;
        let z = field
            .primitive_root_of_unity(order)
            .ok_or_else(|| format!("{} has no primitive {order}-th root of unity", field.kind()))?;
        field.pow_signed(&z, power).expect("roots of unity are nonzero")
    } else {
        let r = parse_rational(body).ok_or_else(|| format!("cannot parse scalar {text:?}"))?;
        field.from_rational(&r).map_err(|e| e.to_string())?
    };
    Ok(if negate { field.neg(&value) } else { value })
}
