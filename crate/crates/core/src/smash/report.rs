//! Pertinency reports under the three field policies.
//!
//! Modular runs reduce the whole configuration to `GF(p)`. With `e` scaled
//! by `|G|` every spanning vector of `I_d` has integral coefficients, so the
//! rank can only drop modulo `p` and `h_p(d) >= h(d)`. A vanishing `h_p(d)`
//! is therefore a certificate for `h(d) = 0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channels::isotypic_split_available;
use super::{quotient_hilbert, HopfPart, SmashAlgebra, SmashError};
use crate::coeff::{euler_phi, is_prime, Cyclotomic, CoeffError, Field, FieldMaps, PrimeField};
use crate::series::{gk_growth_estimate, Growth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldPolicy {
    #[default]
    Exact,
    /// Find the vanishing degree modulo a prime, then recompute exactly up
    /// to it.
    ModularThenExact,
    /// Report modular values, which bound the exact ones from above.
    ModularOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportOptions {
    pub max_degree: u32,
    pub policy: FieldPolicy,
    /// Trailing window for the finite-difference growth estimate.
    pub window: usize,
    /// Seeds the choice of certificate primes.
    pub seed: u64,
}

impl ReportOptions {
    pub fn new(max_degree: u32) -> Self {
        ReportOptions { max_degree, policy: FieldPolicy::Exact, window: 4, seed: 0 }
    }

    pub fn policy(mut self, policy: FieldPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Pertinency {
    /// `n - 0`, backed by a vanishing Hilbert value.
    Exact { value: u32 },
    Estimate { value: u32, provenance: String },
    Unknown { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PertinencyReport {
    pub n: usize,
    pub max_degree: u32,
    pub degree_reached: u32,
    pub policy: FieldPolicy,
    /// Field the reported values were computed over.
    pub field: String,
    pub method: String,
    pub certificate_primes: Vec<u64>,
    pub dims_b: Vec<u64>,
    pub dims_i: Vec<u64>,
    pub hilbert_quotient: Vec<u64>,
    pub classification: Growth,
    pub gkdim_quotient: Option<u32>,
    pub pertinency: Pertinency,
    /// Known bounds for the configuration; not computed.
    pub annotations: Vec<String>,
}

/// `count` distinct primes in `[2^30, 2^31)` with `p ≡ 1 (mod modulus)`.
pub fn certificate_primes(count: usize, modulus: u64, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo = 1u64 << 30;
    let hi = 1u64 << 31;
    let k_lo = (lo - 1).div_ceil(modulus);
    let k_hi = (hi - 2) / modulus;
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let p = 1 + modulus * rng.gen_range(k_lo..=k_hi);
        if is_prime(p) && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Least common multiple of the root-of-unity orders needed over `GF(p)`.
fn modulus_for<F: FieldMaps>(b: &SmashAlgebra<F>) -> u64 {
    let mut m = b.field().root_order();
    if let HopfPart::Group(g) = b.hopf() {
        m = num_integer::lcm(m, g.exponent() as u64);
    }
    m
}

/// `h` over `GF(p)`, with the field generator sent to a primitive root of
/// unity of the same order. Requires `p ≡ 1` modulo that order.
pub fn modular_hilbert<F: FieldMaps>(b: &SmashAlgebra<F>, p: u64, max_degree: u32) -> Result<Vec<u64>, SmashError> {
    let gf = PrimeField::new(p)?;
    let field = b.field();
    let order = field.root_order();
    let root = gf
        .primitive_root_of_unity(order)
        .ok_or(CoeffError::NoRootOfUnity { order, field: gf.kind() })?;
    let reduced = b.map_field(gf, |a| field.reduce(a, &gf, root))?;
    quotient_hilbert(&reduced, max_degree)
}

/// Exact `h` and a description of how it was obtained.
///
/// Cyclic group actions over fields without enough roots of unity are
/// computed in a cyclotomic extension; ranks do not change under field
/// extension.
fn exact_hilbert<F: FieldMaps>(b: &SmashAlgebra<F>, max_degree: u32) -> Result<(Vec<u64>, String, String), SmashError> {
    let field = b.field();
    if isotypic_split_available(b) {
        return Ok((quotient_hilbert(b, max_degree)?, field.kind().to_string(), "isotypic split".into()));
    }
    if let HopfPart::Group(g) = b.hopf() {
        if g.cyclic_generator().is_some() && field.characteristic() == 0 {
            let order = num_integer::lcm(field.root_order(), g.order() as u64);
            let ext = Cyclotomic::new(order as u32)?;
            let lifted = b.map_field(ext.clone(), |a| {
                field.embed(a, &ext).ok_or(CoeffError::MixedFields(field.kind(), ext.kind()))
            })?;
            return Ok((
                quotient_hilbert(&lifted, max_degree)?,
                ext.kind().to_string(),
                "isotypic split".into(),
            ));
        }
    }
    Ok((quotient_hilbert(b, max_degree)?, field.kind().to_string(), "ideal ladder".into()))
}

fn annotations<F: Field>(b: &SmashAlgebra<F>) -> Vec<String> {
    let n = b.ring().nvars();
    let mut out = Vec::new();
    match b.hopf() {
        HopfPart::Dual(gr) => {
            if gr.generates_group() {
                out.push("floor p(R,H) >= 1 (dual group action on a domain of finite GK-dimension)".into());
            }
        }
        HopfPart::Group(g) => {
            let field = b.field();
            let sigma = crate::group::MonomialAutomorphism::cyclic_shift(field, n);
            let is_w = n >= 2 && g.order() == n && g.index_of(&sigma).is_some();
            if b.ring().is_minus_one() && is_w {
                let n64 = n as u64;
                if n.is_power_of_two() {
                    out.push(format!("n = 2^d: p(R,W) = n = {n}"));
                }
                let phi = euler_phi(n64);
                if n64 % 4 == 0 {
                    out.push(format!("floor φ({n})/2={} (p(R,W) >= φ(n)/2 when 4 | n)", phi / 2));
                } else {
                    out.push(format!("floor φ({n})={phi} (p(R,W) >= φ(n) when 4 ∤ n)"));
                }
                let factors = crate::coeff::distinct_prime_factors(n64);
                if factors.len() == 1 && factors[0] > 2 {
                    let p = factors[0];
                    out.push(format!("n = {p}^k: p(R,W) >= r(R,W) = {}", n64 - n64 / p));
                }
            }
        }
    }
    out
}

/// Hilbert function of `B/(e)`, its growth class, and the resulting
/// pertinency `n - GKdim(B/(e))`.
pub fn pertinency_report<F: FieldMaps>(b: &SmashAlgebra<F>, opts: &ReportOptions) -> Result<PertinencyReport, SmashError> {
    let d_max = opts.max_degree;
    let n = b.ring().nvars();
    let mut primes = Vec::new();
    let (h, field, method) = match opts.policy {
        FieldPolicy::Exact => exact_hilbert(b, d_max)?,
        FieldPolicy::ModularOnly | FieldPolicy::ModularThenExact => {
            let p = certificate_primes(1, modulus_for(b), opts.seed)[0];
            primes.push(p);
            let hp = modular_hilbert(b, p, d_max)?;
            let vanishing = hp.iter().position(|&v| v == 0);
            match (opts.policy, vanishing) {
                (FieldPolicy::ModularThenExact, Some(d0)) => {
                    let (mut h, field, method) = exact_hilbert(b, d0 as u32)?;
                    if h[d0] != 0 {
                        return Err(SmashError::Inconsistent(format!(
                            "h vanishes modulo {p} at degree {d0} but not over {field}"
                        )));
                    }
                    h.resize(d_max as usize + 1, 0);
                    (h, field, format!("{method}, vanishing degree from GF({p})"))
                }
                _ => (hp, PrimeField::new(p)?.kind().to_string(), "isotypic split".into()),
            }
        }
    };
    let dims_b: Vec<u64> = (0..=d_max).map(|d| b.dim(d)).collect();
    let dims_i = dims_b.iter().zip(&h).map(|(x, y)| x - y).collect();
    let window = opts.window.min(h.len());
    let classification = gk_growth_estimate(&h, window)?;
    let (gkdim_quotient, pertinency) = match classification {
        Growth::CertifiedZero { .. } => (Some(0), Pertinency::Exact { value: n as u32 }),
        Growth::Polynomial { m } => match (n as u32).checked_sub(m) {
            Some(value) => (
                Some(m),
                Pertinency::Estimate {
                    value,
                    provenance: format!(
                        "finite differences of h over degrees {}..={d_max} computed over {field}",
                        d_max as usize + 1 - window
                    ),
                },
            ),
            None => (Some(m), Pertinency::Unknown { reason: format!("growth estimate {m} exceeds n = {n}") }),
        },
        Growth::Inconclusive => (
            None,
            Pertinency::Unknown { reason: format!("no vanishing and no stable finite difference up to degree {d_max}") },
        ),
    };
    Ok(PertinencyReport {
        n,
        max_degree: d_max,
        degree_reached: d_max,
        policy: opts.policy,
        field,
        method,
        certificate_primes: primes,
        dims_b,
        dims_i,
        hilbert_quotient: h,
        classification,
        gkdim_quotient,
        pertinency,
        annotations: annotations(b),
    })
}
