//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use pertinency::algebra::{AlgebraElement, GradingAssignment, SkewPolyRing};
use pertinency::coeff::{euler_phi, Field, Rational, Rationals};
use pertinency::group::{
    cyclic_permutation_group, group_closure, hdet, invariant_dimension_direct, molien_series, odd_cycle_oracle,
    reflection_number, reflection_number_group, FiniteGroup, MonomialAutomorphism,
};
use pertinency::series::Growth;
use pertinency::smash::{
    certificate_primes, corner_dimension, fourier_suite, ideal_ladder, ideal_membership, modular_hilbert,
    pertinency_report, FieldPolicy, Pertinency, ReportOptions, SmashAlgebra, SmashElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Failure = Box<dyn std::error::Error>;
type Check = Result<String, Failure>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(msg.into().into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), Failure> {
    ensure(elapsed < limit, format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn ring(n: usize, minus_one: bool) -> SkewPolyRing<Rationals> {
    if minus_one {
        SkewPolyRing::minus_one(Rationals, n)
    } else {
        SkewPolyRing::commutative(Rationals, n)
    }
}

fn cyclic_smash(n: usize, minus_one: bool) -> SmashAlgebra<Rationals> {
    let r = ring(n, minus_one);
    let g = cyclic_permutation_group(&r).unwrap();
    SmashAlgebra::group(Arc::new(r), Arc::new(g)).unwrap()
}

fn smallest_odd_prime(n: usize) -> Option<usize> {
    (3..=n).step_by(2).find(|p| n % p == 0 && (2..*p).all(|q| p % q != 0))
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let r = pertinency_report(&cyclic_smash(2, true), &ReportOptions::new(8))?;
    within(t.elapsed(), Duration::from_secs(5), "n=2")?;
    ensure(r.pertinency == Pertinency::Exact { value: 2 }, format!("n=2 gave {:?}", r.pertinency))?;
    ensure(r.hilbert_quotient.contains(&0), "n=2 quotient never vanished")?;
    ensure(r.field == "Q", format!("n=2 computed over {}", r.field))?;
    let t = Instant::now();
    let opts = ReportOptions::new(16).policy(FieldPolicy::ModularThenExact);
    let r4 = pertinency_report(&cyclic_smash(4, true), &opts)?;
    within(t.elapsed(), Duration::from_secs(600), "n=4")?;
    ensure(r4.pertinency == Pertinency::Exact { value: 4 }, format!("n=4 gave {:?}", r4.pertinency))?;
    Ok(format!(
        "n=2 h={:?}; n=4 h={:?} over {} in {:.2?}",
        &r.hilbert_quotient[..4],
        &r4.hilbert_quotient[..7],
        r4.field,
        t.elapsed()
    ))
}

fn criterion_2() -> Check {
    let r = pertinency_report(&cyclic_smash(2, false), &ReportOptions::new(12))?;
    let h = &r.hilbert_quotient;
    let tail = &h[h.len() - 4..];
    ensure(tail.iter().all(|&v| v == tail[0] && v > 0), format!("h not eventually constant: {h:?}"))?;
    ensure(r.classification == Growth::Polynomial { m: 1 }, format!("classification {:?}", r.classification))?;
    match &r.pertinency {
        Pertinency::Estimate { value: 1, .. } => Ok(format!("h={h:?}, pertinency 1")),
        other => Err(format!("pertinency {other:?}").into()),
    }
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let mut values = Vec::new();
    for n in 2..=8usize {
        let r = ring(n, true);
        let g = cyclic_permutation_group(&r)?;
        for elem in g.elements() {
            let pole = n - reflection_number(&r, elem)?;
            let odd = odd_cycle_oracle(&r, elem)?;
            ensure(pole == odd, format!("n={n}: pole order {pole} vs {odd} odd cycles"))?;
        }
        let got = reflection_number_group(&r, &g)?.ok_or("trivial group")?;
        let expected = match smallest_odd_prime(n) {
            None => n,
            Some(p) => n - n / p,
        };
        ensure(got == expected, format!("n={n}: r={got}, formula {expected}"))?;
        values.push(got);
    }
    within(t.elapsed(), Duration::from_secs(30), "reflection numbers")?;
    Ok(format!("r(R,W) for n=2..8: {values:?}"))
}

fn criterion_4() -> Check {
    for n in 2..=6usize {
        let r = ring(n, true);
        let sigma = MonomialAutomorphism::cyclic_shift(&Rationals, n);
        for i in 0..n {
            let h = hdet(&r, &sigma.power(&Rationals, i))?;
            ensure(h == Rational::from_integer(1.into()), format!("hdet(σ^{i}) = {h} for n={n}"))?;
        }
    }
    Ok("hdet(σ^i) = 1 for n=2..6".into())
}

fn criterion_5() -> Check {
    let mut notes = Vec::new();
    for n in [3usize, 5, 6] {
        let d = 4 * n as u32;
        let opts = ReportOptions::new(d).policy(FieldPolicy::ModularThenExact).window(4);
        let r = pertinency_report(&cyclic_smash(n, true), &opts)?;
        let phi = euler_phi(n as u64) as u32;
        let floor = if n % 4 == 0 { phi / 2 } else { phi };
        let m = match r.classification {
            Growth::CertifiedZero { .. } => 0,
            Growth::Polynomial { m } => m,
            Growth::Inconclusive => return Err(format!("n={n}: inconclusive growth, h={:?}", r.hilbert_quotient).into()),
        };
        ensure(m <= n as u32 - floor, format!("n={n}: estimate {m} exceeds n - floor = {}", n as u32 - floor))?;
        let tag = format!("floor φ({n})={floor}");
        ensure(r.annotations.iter().any(|a| a.starts_with(&tag)), format!("n={n}: missing annotation {tag}"))?;
        notes.push(format!("n={n} m={m}≤{}", n as u32 - floor));
    }
    Ok(notes.join(", "))
}

fn criterion_6() -> Check {
    let t = Instant::now();
    let suite = fourier_suite(4)?;
    within(t.elapsed(), Duration::from_secs(120), "Fourier suite")?;
    ensure(suite.anticommutators, "anticommutator identity fails")?;
    ensure(suite.pair_powers.iter().flatten().all(|&b| b), format!("(y_s y_(s-1))^4 # 1: {:?}", suite.pair_powers))?;
    ensure(suite.square_powers.iter().flatten().all(|&b| b), format!("y_s^6 # 1: {:?}", suite.square_powers))?;
    Ok(format!("n=4 over Q(zeta_4) in {:.2?}", t.elapsed()))
}

fn molien_configs() -> Vec<(String, SkewPolyRing<Rationals>, FiniteGroup<Rationals>)> {
    let mut out = Vec::new();
    for n in 2..=4usize {
        for minus_one in [true, false] {
            let r = ring(n, minus_one);
            let g = cyclic_permutation_group(&r).unwrap();
            out.push((format!("n={n} {} cyclic", if minus_one { "skew" } else { "comm" }), r, g));
        }
    }
    let r = ring(2, true);
    let q = |v: i64| Rational::from_integer(v.into());
    let gens = [
        MonomialAutomorphism::diagonal(&Rationals, vec![q(-1), q(1)]).unwrap(),
        MonomialAutomorphism::permutation(&Rationals, vec![1, 0]).unwrap(),
    ];
    let g = group_closure(&r, &gens, 100).unwrap();
    out.push(("n=2 skew dihedral".into(), r, g));
    out
}

fn criterion_7() -> Check {
    let d_max = 12;
    let mut count = 0;
    for (name, r, g) in molien_configs() {
        let series = molien_series(&r, &g, d_max)?;
        let b = Arc::new(SmashAlgebra::group(Arc::new(r.clone()), Arc::new(g.clone()))?);
        for d in 0..=d_max {
            let molien = series.coeff(d as usize);
            let direct = invariant_dimension_direct(&r, &g, d)?;
            let corner = corner_dimension(&b, d)?;
            let direct_q = Rationals.from_i64(direct as i64);
            ensure(
                *molien == direct_q && direct == corner,
                format!("{name} d={d}: molien {molien}, direct {direct}, corner {corner}"),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} (configuration, degree) pairs agree"))
}

fn criterion_8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 200 {
        attempts += 1;
        ensure(attempts < 100_000, "could not sample enough covering sequences")?;
        let m = rng.gen_range(2..=4u32);
        let nvars = rng.gen_range(2..=4usize);
        let labels: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..m)).collect();
        let len = rng.gen_range(m as usize..=6);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..nvars)).collect();
        let mut suffixes = BTreeSet::new();
        let mut acc = 0;
        for &i in word.iter().rev() {
            acc = (acc + labels[i]) % m;
            suffixes.insert(acc);
        }
        if suffixes.len() != m as usize {
            continue;
        }
        let r = Arc::new(SkewPolyRing::minus_one(Rationals, nvars));
        let b = Arc::new(SmashAlgebra::dual(r.clone(), GradingAssignment::cyclic(m, &labels))?);
        let f = word.iter().try_fold(AlgebraElement::one(&r), |p, &i| p.mul(&AlgebraElement::generator(&r, i)?))?;
        let ladder = ideal_ladder(&b, len as u32)?;
        ensure(
            ideal_membership(&SmashElement::from_ring(&b, &f), &ladder)?,
            format!("Z_{m} labels {labels:?} word {word:?} not in I"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} covering sequences in I ({attempts} sampled)"))
}

fn criterion_9() -> Check {
    let mut notes = Vec::new();
    for (n, minus_one, d) in [(2usize, true, 8u32), (4, true, 12), (2, false, 12)] {
        let b = cyclic_smash(n, minus_one);
        let exact = pertinency_report(&b, &ReportOptions::new(d))?.hilbert_quotient;
        let mut any_equal = false;
        for p in certificate_primes(3, n as u64, 2024) {
            let hp = modular_hilbert(&b, p, d)?;
            ensure(
                hp.iter().zip(&exact).all(|(a, b)| a >= b),
                format!("n={n}: h mod {p} = {hp:?} below exact {exact:?}"),
            )?;
            any_equal |= hp == exact;
        }
        ensure(any_equal, format!("n={n}: no prime reproduces {exact:?}"))?;
        notes.push(format!("n={n}{}", if minus_one { "" } else { " comm" }));
    }
    Ok(format!("sound and sharp for {}", notes.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("pertinency of powers of two", criterion_1),
        ("commutative contrast", criterion_2),
        ("reflection numbers", criterion_3),
        ("homological determinant", criterion_4),
        ("totient floors", criterion_5),
        ("Fourier identities and memberships", criterion_6),
        ("Molien cross-checks", criterion_7),
        ("suffix-degree cover membership", criterion_8),
        ("modular soundness", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}").into())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{:.2?}]", i + 1, t.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
