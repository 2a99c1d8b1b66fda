//! Truncated power series and exact rational generating functions.
//!
//! Trace series and Hilbert functions are produced as finitely many exact
//! coefficients. [`pade_reconstruct`] recovers a closed form `P/Q` whose
//! expansion matches every known coefficient, and refuses to answer unless
//! the same closed form is already determined by a shorter prefix.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coeff::Field;
use crate::linalg::{rref_rank, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("no rational function with numerator degree <= {max_num} and denominator degree <= {max_den} matches the series")]
    NoSolution { max_num: usize, max_den: usize },
    #[error("reconstruction is unstable at truncation {truncation}; more coefficients are needed")]
    Unstable { truncation: usize },
    #[error("need at least {needed} coefficients, have {have}")]
    InsufficientData { needed: usize, have: usize },
    #[error("the zero function has no leading term")]
    ZeroFunction,
    #[error("denominator vanishes at t = 0")]
    PoleAtZero,
    #[error("window {window} exceeds the {len} available values")]
    WindowTooLarge { window: usize, len: usize },
}

/// Coefficients `c_0, ..., c_D` of a power series known up to `t^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> TruncatedSeries<E> {
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least one coefficient");
        TruncatedSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    /// Highest known degree `D`.
    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &E {
        &self.coeffs[d]
    }

    pub fn truncate(&self, d: usize) -> Self {
        TruncatedSeries { coeffs: self.coeffs[..=d.min(self.truncation())].to_vec() }
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        let d = self.truncation().min(other.truncation());
        TruncatedSeries {
            coeffs: (0..=d).map(|k| field.add(&self.coeffs[k], &other.coeffs[k])).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, c: &E) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| field.mul(x, c)).collect() }
    }
}

/// Dense univariate polynomials, constant term first, no trailing zeros.
pub mod poly {
    use crate::coeff::Field;

    pub fn trim<F: Field>(field: &F, p: &mut Vec<F::Elem>) {
        while p.last().is_some_and(|x| field.is_zero(x)) {
            p.pop();
        }
    }

    /// Degree, `None` for the zero polynomial. Assumes `p` is trimmed.
    pub fn degree<E>(p: &[E]) -> Option<usize> {
        p.len().checked_sub(1)
    }

    pub fn mul<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if field.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = field.add(&out[i + j], &field.mul(x, y));
            }
        }
        trim(field, &mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero and trimmed.
    pub fn divmod<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let mut rem = a.to_vec();
        trim(field, &mut rem);
        let db = b.len() - 1;
        let lead_inv = field.inv(&b[db]).expect("divisor is trimmed and nonzero");
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let mut quot = vec![field.zero(); rem.len() - db];
        while rem.len() >= b.len() {
            let k = rem.len() - 1 - db;
            let c = field.mul(rem.last().unwrap(), &lead_inv);
            for (j, bj) in b.iter().enumerate() {
                field.sub_mul_assign(&mut rem[k + j], &c, bj);
            }
            quot[k] = c;
            rem.pop();
            trim(field, &mut rem);
        }
        trim(field, &mut quot);
        (quot, rem)
    }

    /// Monic greatest common divisor; zero if both inputs are zero.
    pub fn gcd<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(field, &mut x);
        trim(field, &mut y);
        while !y.is_empty() {
            let (_, r) = divmod(field, &x, &y);
            x = std::mem::replace(&mut y, r);
        }
        if let Some(lead) = x.last().cloned() {
            let inv = field.inv(&lead).unwrap();
            for c in &mut x {
                *c = field.mul(c, &inv);
            }
        }
        x
    }

    pub fn eval<F: Field>(field: &F, p: &[F::Elem], t: &F::Elem) -> F::Elem {
        p.iter().rev().fold(field.zero(), |acc, c| field.add(&field.mul(&acc, t), c))
    }

    /// Multiplicity of `t = 1` as a root; zero for the zero polynomial.
    pub fn multiplicity_at_one<F: Field>(field: &F, p: &[F::Elem]) -> usize {
        let mut cur = p.to_vec();
        trim(field, &mut cur);
        if cur.is_empty() {
            return 0;
        }
        let root = [field.neg(&field.one()), field.one()];
        let mut k = 0;
        while cur.len() > 1 && field.is_zero(&eval(field, &cur, &field.one())) {
            cur = divmod(field, &cur, &root).0;
            k += 1;
        }
        k
    }
}

/// A rational function `num / den` in lowest terms with `den(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction<E> {
    num: Vec<E>,
    den: Vec<E>,
}

impl<E: Clone> RationalFunction<E> {
    /// Reduces and normalizes `num / den`.
    pub fn new<F: Field<Elem = E>>(field: &F, num: Vec<E>, den: Vec<E>) -> Result<Self, SeriesError> {
        let mut num = num;
        let mut den = den;
        poly::trim(field, &mut num);
        poly::trim(field, &mut den);
        if den.is_empty() {
            return Err(SeriesError::ZeroFunction);
        }
        if num.is_empty() {
            return Ok(RationalFunction { num, den: vec![field.one()] });
        }
        let g = poly::gcd(field, &num, &den);
        if g.len() > 1 {
            num = poly::divmod(field, &num, &g).0;
            den = poly::divmod(field, &den, &g).0;
        }
        let d0 = den[0].clone();
        let inv = field.inv(&d0).ok_or(SeriesError::PoleAtZero)?;
        for c in num.iter_mut().chain(den.iter_mut()) {
            *c = field.mul(c, &inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn numerator(&self) -> &[E] {
        &self.num
    }

    pub fn denominator(&self) -> &[E] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Power series coefficients up to `t^d`.
    pub fn expand<F: Field<Elem = E>>(&self, field: &F, d: usize) -> TruncatedSeries<E> {
        let mut out: Vec<E> = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let mut c = self.num.get(k).cloned().unwrap_or_else(|| field.zero());
            for j in 1..self.den.len().min(k + 1) {
                field.sub_mul_assign(&mut c, &self.den[j], &out[k - j]);
            }
            out.push(c);
        }
        TruncatedSeries::new(out)
    }

    pub fn render<F: Field<Elem = E>>(&self, field: &F) -> String {
        let k = poly::multiplicity_at_one(field, &self.den);
        let mut rest = self.den.clone();
        let one_minus_t = [field.one(), field.neg(&field.one())];
        for _ in 0..k {
            rest = poly::divmod(field, &rest, &one_minus_t).0;
        }
        // (1 - t)^k * rest with rest(0) = 1 since den(0) = 1.
        let mut den_parts = Vec::new();
        match k {
            0 => {}
            1 => den_parts.push("(1 - t)".to_string()),
            _ => den_parts.push(format!("(1 - t)^{k}")),
        }
        if rest.len() > 1 {
            den_parts.push(format!("({})", render_poly(field, &rest)));
        }
        let num = render_poly(field, &self.num);
        if den_parts.is_empty() {
            return num;
        }
        let num = if self.num.iter().filter(|c| !field.is_zero(c)).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        match den_parts.as_slice() {
            [one] => format!("{num} / {one}"),
            parts => format!("{num} / ({})", parts.join(" * ")),
        }
    }
}

/// Renders a polynomial in `t`, lowest degree first.
pub fn render_poly<F: Field>(field: &F, p: &[F::Elem]) -> String {
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (k, c) in p.iter().enumerate() {
        if field.is_zero(c) {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        let neg_c = field.neg(c);
        let (negative, mag) = {
            let s = field.render(c);
            if s.starts_with('-') && !s[1..].contains([' ', '+']) {
                (true, field.render(&neg_c))
            } else {
                (false, s)
            }
        };
        let mag = if mag.contains(' ') { format!("({mag})") } else { mag };
        let body = if mono.is_empty() {
            mag
        } else if field.is_one(c) || field.is_one(&neg_c) {
            mono
        } else {
            format!("{mag}*{mono}")
        };
        terms.push((negative, body));
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

/// Fits `P/Q` with `deg P <= max_num`, `deg Q <= max_den`, `Q(0) = 1` to all
/// coefficients of `coeffs`, preferring the smallest denominator degree.
fn fit_rational<F: Field>(
    field: &F,
    coeffs: &[F::Elem],
    max_num: usize,
    max_den: usize,
) -> Option<RationalFunction<F::Elem>> {
    let d = coeffs.len() - 1;
    let s = |k: isize| -> F::Elem {
        if k < 0 {
            field.zero()
        } else {
            coeffs[k as usize].clone()
        }
    };
    for b in 0..=max_den {
        // Unknowns q_1..q_b; equations for coefficients max_num+1..=d of Q*s.
        let eq_rows: Vec<usize> = (max_num + 1..=d).collect();
        let mut q = vec![field.one()];
        if !eq_rows.is_empty() {
            let cols = b + 1;
            let mut entries = Vec::with_capacity(eq_rows.len() * cols);
            for &k in &eq_rows {
                for j in 1..=b {
                    entries.push(s(k as isize - j as isize));
                }
                entries.push(field.neg(&s(k as isize)));
            }
            let m = Matrix::new(eq_rows.len(), cols, entries).expect("shape is consistent");
            let (r, rank) = rref_rank(field, &m);
            // Inconsistent iff some pivot lands in the augmented column.
            let inconsistent = (0..rank).any(|row| {
                (0..cols).find(|&c| !field.is_zero(r.get(row, c))) == Some(b)
            });
            if inconsistent {
                continue;
            }
            q.resize(b + 1, field.zero());
            for row in 0..rank {
                let pivot = (0..cols).find(|&c| !field.is_zero(r.get(row, c))).unwrap();
                // Free variables are set to zero.
                q[pivot + 1] = r.get(row, b).clone();
            }
        } else {
            q.resize(b + 1, field.zero());
        }
        let mut p = Vec::with_capacity(max_num + 1);
        for k in 0..=max_num.min(d) {
            let mut acc = field.zero();
            for (j, qj) in q.iter().enumerate().take(k + 1) {
                acc = field.add(&acc, &field.mul(qj, &s(k as isize - j as isize)));
            }
            p.push(acc);
        }
        return RationalFunction::new(field, p, q).ok();
    }
    None
}

/// Exact rational reconstruction with a stability check.
///
/// Requires `max_num + max_den + 1 <= D`. The fit is computed from all
/// `D + 1` coefficients and again from the first `D - 1`; both must exist and
/// agree, otherwise the caller should supply more coefficients.
pub fn pade_reconstruct<F: Field>(
    field: &F,
    s: &TruncatedSeries<F::Elem>,
    max_num: usize,
    max_den: usize,
) -> Result<RationalFunction<F::Elem>, SeriesError> {
    let d = s.truncation();
    let needed = (max_num + max_den + 2).max(3);
    if d + 1 < needed {
        return Err(SeriesError::InsufficientData { needed, have: d + 1 });
    }
    let full = fit_rational(field, s.coeffs(), max_num, max_den)
        .ok_or(SeriesError::NoSolution { max_num, max_den })?;
    let short = fit_rational(field, &s.coeffs()[..d - 1], max_num, max_den);
    match short {
        Some(f) if f == full => Ok(full),
        _ => Err(SeriesError::Unstable { truncation: d }),
    }
}

/// Order of the pole at `t = 1`, floored at zero.
pub fn pole_order_at_one<F: Field>(field: &F, f: &RationalFunction<F::Elem>) -> usize {
    let den = poly::multiplicity_at_one(field, &f.den);
    let num = poly::multiplicity_at_one(field, &f.num);
    den.saturating_sub(num)
}

/// `(m, c)` with `f(t) = c * t^m * (1 + O(1/t))` as `t -> infinity`.
pub fn leading_term_at_infinity<F: Field>(
    field: &F,
    f: &RationalFunction<F::Elem>,
) -> Result<(i64, F::Elem), SeriesError> {
    let (Some(dn), Some(dd)) = (poly::degree(&f.num), poly::degree(&f.den)) else {
        return Err(SeriesError::ZeroFunction);
    };
    let c = field.div(&f.num[dn], &f.den[dd]).expect("denominator is nonzero");
    Ok((dn as i64 - dd as i64, c))
}

/// Growth class of a Hilbert function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Growth {
    /// `h(degree) = 0`, hence the algebra is finite dimensional.
    CertifiedZero { degree: usize },
    /// The `m`-th finite difference vanishes on the trailing window and the
    /// `(m - 1)`-th does not: GK-dimension estimate `m`.
    Polynomial { m: u32 },
    Inconclusive,
}

/// Classifies a Hilbert function of an algebra generated in degrees `<= 1`.
///
/// A single zero value is a proof of finite dimensionality, since every
/// later graded piece is spanned by products through the vanishing one.
pub fn gk_growth_estimate(h: &[u64], window: usize) -> Result<Growth, SeriesError> {
    if window == 0 || window > h.len() {
        return Err(SeriesError::WindowTooLarge { window, len: h.len() });
    }
    if let Some(d) = h.iter().position(|&v| v == 0) {
        return Ok(Growth::CertifiedZero { degree: d });
    }
    let mut diffs: Vec<i128> = h.iter().map(|&v| v as i128).collect();
    let tail_zero = |v: &[i128]| v[v.len() - window..].iter().all(|&x| x == 0);
    let mut m = 0u32;
    loop {
        if diffs.len() < window + 1 {
            return Ok(Growth::Inconclusive);
        }
        let next: Vec<i128> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        m += 1;
        if tail_zero(&next) {
            return Ok(if tail_zero(&diffs) {
                Growth::Inconclusive
            } else {
                Growth::Polynomial { m }
            });
        }
        diffs = next;
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::CertifiedZero { degree } => write!(f, "certified_finite at degree {degree}"),
            Growth::Polynomial { m } => write!(f, "polynomial({m})"),
            Growth::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Cyclotomic, Rational, Rationals};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn inv_one_minus_t_pow(k: usize) -> RationalFunction<Rational> {
        let mut den = vec![q(1)];
        for _ in 0..k {
            den = poly::mul(&Rationals, &den, &[q(1), q(-1)]);
        }
        RationalFunction::new(&Rationals, vec![q(1)], den).unwrap()
    }

    #[test]
    fn reconstructs_inverse_square() {
        let s = TruncatedSeries::new((1..=12).map(q).collect());
        let f = pade_reconstruct(&Rationals, &s, 3, 3).unwrap();
        assert_eq!(f.numerator(), &qs(&[1]));
        assert_eq!(f.denominator(), &qs(&[1, -2, 1]));
    }

    #[test]
    fn reconstructs_alternating_squares() {
        let s = TruncatedSeries::new(qs(&[1, 0, -1, 0, 1, 0, -1, 0, 1, 0, -1, 0]));
        let f = pade_reconstruct(&Rationals, &s, 3, 3).unwrap();
        assert_eq!(f.numerator(), &qs(&[1]));
        assert_eq!(f.denominator(), &qs(&[1, 0, 1]));
    }

    #[test]
    fn constant_series_needs_a_denominator() {
        let s = TruncatedSeries::new(qs(&[1; 10]));
        assert_eq!(
            pade_reconstruct(&Rationals, &s, 2, 0),
            Err(SeriesError::NoSolution { max_num: 2, max_den: 0 })
        );
    }

    #[test]
    fn short_series_is_rejected() {
        let s = TruncatedSeries::new(qs(&[1; 4]));
        assert!(matches!(
            pade_reconstruct(&Rationals, &s, 2, 2),
            Err(SeriesError::InsufficientData { .. })
        ));
    }

    #[test]
    fn prefix_disagreement_is_unstable() {
        // Five ones fit 1/(1 - t); the first three alone fit 1 + t + t^2.
        let s = TruncatedSeries::new(qs(&[1; 5]));
        assert_eq!(pade_reconstruct(&Rationals, &s, 2, 1), Err(SeriesError::Unstable { truncation: 4 }));
        let longer = TruncatedSeries::new(qs(&[1; 7]));
        assert!(pade_reconstruct(&Rationals, &longer, 2, 1).is_ok());
    }

    #[test]
    fn pole_orders() {
        assert_eq!(pole_order_at_one(&Rationals, &inv_one_minus_t_pow(3)), 3);
        let f = RationalFunction::new(&Rationals, qs(&[1]), qs(&[1, 0, 1])).unwrap();
        assert_eq!(pole_order_at_one(&Rationals, &f), 0);
        let g = RationalFunction::new(&Rationals, qs(&[1, -1]), qs(&[1, -2, 1])).unwrap();
        assert_eq!(g.denominator(), &qs(&[1, -1]));
        assert_eq!(pole_order_at_one(&Rationals, &g), 1);
        for k in 0..=10 {
            assert_eq!(pole_order_at_one(&Rationals, &inv_one_minus_t_pow(k)), k);
        }
    }

    #[test]
    fn leading_terms_at_infinity() {
        assert_eq!(leading_term_at_infinity(&Rationals, &inv_one_minus_t_pow(2)).unwrap(), (-2, q(1)));
        let f = RationalFunction::new(&Rationals, qs(&[1]), qs(&[1, 0, 1])).unwrap();
        assert_eq!(leading_term_at_infinity(&Rationals, &f).unwrap(), (-2, q(1)));
        let g = RationalFunction::new(&Rationals, qs(&[1, 2]), qs(&[1, -1])).unwrap();
        assert_eq!(leading_term_at_infinity(&Rationals, &g).unwrap(), (0, q(-2)));
        let z = RationalFunction::new(&Rationals, vec![], qs(&[1])).unwrap();
        assert_eq!(leading_term_at_infinity(&Rationals, &z), Err(SeriesError::ZeroFunction));
    }

    #[test]
    fn growth_classes() {
        assert_eq!(gk_growth_estimate(&[1, 1, 0, 0, 0], 3).unwrap(), Growth::CertifiedZero { degree: 2 });
        let lin: Vec<u64> = (1..=12).collect();
        assert_eq!(gk_growth_estimate(&lin, 4).unwrap(), Growth::Polynomial { m: 2 });
        assert_eq!(gk_growth_estimate(&[1; 12], 4).unwrap(), Growth::Polynomial { m: 1 });
        let quad: Vec<u64> = (0..12).map(|d| (d + 1) * (d + 2) / 2).collect();
        assert_eq!(gk_growth_estimate(&quad, 4).unwrap(), Growth::Polynomial { m: 3 });
        let exp: Vec<u64> = (0..8).map(|d| 1 << d).collect();
        assert_eq!(gk_growth_estimate(&exp, 4).unwrap(), Growth::Inconclusive);
        assert!(gk_growth_estimate(&[1, 2], 4).is_err());
    }

    #[test]
    fn eventually_constant_after_transient() {
        let h = [2, 5, 3, 3, 3, 3, 3, 3];
        assert_eq!(gk_growth_estimate(&h, 4).unwrap(), Growth::Polynomial { m: 1 });
    }

    #[test]
    fn cyclotomic_coefficients() {
        let f = Cyclotomic::new(4).unwrap();
        let i = f.generator();
        // 1/(1 - i t): coefficients i^k.
        let coeffs: Vec<_> = (0..12).map(|k| f.pow(&i, k)).collect();
        let s = TruncatedSeries::new(coeffs);
        let r = pade_reconstruct(&f, &s, 2, 2).unwrap();
        assert_eq!(r.denominator(), &[f.one(), f.neg(&i)]);
        assert_eq!(pole_order_at_one(&f, &r), 0);
    }

    #[test]
    fn rendering() {
        assert_eq!(inv_one_minus_t_pow(2).render(&Rationals), "1 / (1 - t)^2");
        let f = RationalFunction::new(&Rationals, qs(&[1]), qs(&[1, 0, 1])).unwrap();
        assert_eq!(f.render(&Rationals), "1 / (1 + t^2)");
        let g = RationalFunction::new(&Rationals, qs(&[1, 2]), qs(&[1, -1])).unwrap();
        assert_eq!(g.render(&Rationals), "(1 + 2*t) / (1 - t)");
        let h = RationalFunction::new(&Rationals, qs(&[1]), qs(&[1, 0, 0, -1])).unwrap();
        assert_eq!(h.render(&Rationals), "1 / ((1 - t) * (1 + t + t^2))");
    }

    fn rational_function() -> impl Strategy<Value = RationalFunction<Rational>> {
        (
            proptest::collection::vec(-3i64..4, 1..4),
            proptest::collection::vec(-2i64..3, 0..3),
        )
            .prop_map(|(num, den_tail)| {
                let mut den = vec![q(1)];
                den.extend(den_tail.into_iter().map(q));
                RationalFunction::new(&Rationals, qs(&num), den).unwrap()
            })
    }

    proptest! {
        #[test]
        fn reconstruction_reproduces_coefficients(f in rational_function()) {
            let s = f.expand(&Rationals, 14);
            let r = pade_reconstruct(&Rationals, &s, 4, 4).unwrap();
            prop_assert_eq!(&r.expand(&Rationals, 14), &s);
            prop_assert_eq!(r, f);
        }
    }
}
