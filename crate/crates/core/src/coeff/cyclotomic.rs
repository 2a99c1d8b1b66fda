use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{CoeffError, Field, FieldKind, Rational, Scalar};

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut m = n;
    let mut phi = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// The `n`-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Computed by dividing `z^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<BigInt>, CoeffError> {
    if n == 0 {
        return Err(CoeffError::ZeroOrder);
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d)?;
            num = exact_monic_div(&num, &phi_d);
        }
    }
    Ok(num)
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An element of `Q(ξ_n)`, stored as the reduced residue of a polynomial in
/// `ξ` modulo `Φ_n`. The coefficient vector always has length `φ(n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CyclotomicNumber {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The rational value, when the number lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if *c == -Rational::one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "{out}")
    }
}

/// The cyclotomic field `Q(ξ_n)`; the generator `z` is a primitive `n`-th
/// root of unity.
#[derive(Debug, Clone)]
pub struct Cyclotomic {
    order: u32,
    // Φ_n, constant term first, monic.
    modulus: Arc<Vec<Rational>>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Cyclotomic {
    pub fn new(order: u32) -> Result<Self, CoeffError> {
        let phi = cyclotomic_polynomial(order)?;
        Ok(Cyclotomic {
            order,
            modulus: Arc::new(phi.into_iter().map(Rational::from_integer).collect()),
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// The class of `z`.
    pub fn generator(&self) -> CyclotomicNumber {
        self.from_poly(vec![Rational::zero(), Rational::one()])
    }

    /// `ξ^k` for any integer `k`.
    pub fn root_power(&self, k: i64) -> CyclotomicNumber {
        let e = k.rem_euclid(self.order as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        self.from_poly(p)
    }

    /// Reduces an arbitrary polynomial in `z` modulo `Φ_n`.
    pub fn from_poly(&self, poly: Vec<Rational>) -> CyclotomicNumber {
        let deg = self.degree();
        let mut rem = poly;
        let m = &self.modulus;
        while rem.len() > deg {
            let top = rem.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = rem.len() - deg;
            for j in 0..deg {
                rem[shift + j] -= &top * &m[j];
            }
        }
        rem.resize(deg, Rational::zero());
        CyclotomicNumber { order: self.order, coeffs: rem }
    }

    fn constant(&self, r: Rational) -> CyclotomicNumber {
        let mut coeffs = vec![Rational::zero(); self.degree()];
        coeffs[0] = r;
        CyclotomicNumber { order: self.order, coeffs }
    }
}

fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Quotient and remainder of `a` by nonzero trimmed `b`.
fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let k = rem.len() - 1 - db;
        let c = rem.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
        rem.pop();
        trim(&mut rem);
    }
    (quot, rem)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let x = a.get(k).cloned().unwrap_or_else(Rational::zero);
        let y = b.get(k).cloned().unwrap_or_else(Rational::zero);
        out.push(x - y);
    }
    trim(&mut out);
    out
}

impl Field for Cyclotomic {
    type Elem = CyclotomicNumber;

    fn zero(&self) -> CyclotomicNumber {
        self.constant(Rational::zero())
    }

    fn one(&self) -> CyclotomicNumber {
        self.constant(Rational::one())
    }

    fn is_zero(&self, a: &CyclotomicNumber) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    fn sub(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    fn mul(&self, a: &CyclotomicNumber, b: &CyclotomicNumber) -> CyclotomicNumber {
        self.from_poly(poly_mul(&a.coeffs, &b.coeffs))
    }

    fn neg(&self, a: &CyclotomicNumber) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: a.coeffs.iter().map(|x| -x).collect(),
        }
    }

    /// Extended Euclid on `(a, Φ_n)`.
    fn inv(&self, a: &CyclotomicNumber) -> Option<CyclotomicNumber> {
        if a.is_zero() {
            return None;
        }
        let mut r0: Vec<Rational> = self.modulus.to_vec();
        let mut r1 = a.coeffs.clone();
        trim(&mut r1);
        let mut s0: Vec<Rational> = Vec::new();
        let mut s1 = vec![Rational::one()];
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r1 is a nonzero constant since Φ_n is irreducible.
        let c = r1[0].recip();
        let inv: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Some(self.from_poly(inv))
    }

    fn from_i64(&self, v: i64) -> CyclotomicNumber {
        self.constant(Rational::from_integer(v.into()))
    }

    fn from_rational(&self, r: &Rational) -> Result<CyclotomicNumber, CoeffError> {
        Ok(self.constant(r.clone()))
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn primitive_root_of_unity(&self, k: u64) -> Option<CyclotomicNumber> {
        let n = self.order as u64;
        if k == 0 {
            return None;
        }
        if n % k == 0 {
            return Some(self.root_power((n / k) as i64));
        }
        // -ξ_n is a primitive 2n-th root of unity when n is odd.
        if n % 2 == 1 && (2 * n) % k == 0 {
            let zeta_2n = self.neg(&self.root_power(((n + 1) / 2) as i64));
            return Some(self.pow(&zeta_2n, 2 * n / k));
        }
        None
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Cyclotomic(self.order)
    }

    fn render(&self, a: &CyclotomicNumber) -> String {
        a.to_string()
    }

    fn to_scalar(&self, a: &CyclotomicNumber) -> Scalar {
        Scalar::Cyclotomic(a.clone())
    }

    fn is_one(&self, a: &CyclotomicNumber) -> bool {
        a.coeffs[0].is_one() && a.coeffs[1..].iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1).unwrap(), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2).unwrap(), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4).unwrap(), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6).unwrap(), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(8).unwrap(), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic_polynomial(0), Err(CoeffError::ZeroOrder));
    }

    #[test]
    fn degree_is_totient() {
        for n in 1..40u32 {
            let phi = cyclotomic_polynomial(n).unwrap();
            assert_eq!(phi.len() as u64 - 1, euler_phi(n as u64), "n = {n}");
        }
    }

    #[test]
    fn generator_is_root_of_modulus() {
        for n in 1..25u32 {
            let f = Cyclotomic::new(n).unwrap();
            let z = f.generator();
            let phi = cyclotomic_polynomial(n).unwrap();
            let mut acc = f.zero();
            for (k, c) in phi.iter().enumerate() {
                let term = f.mul(&f.from_rational(&Rational::from_integer(c.clone())).unwrap(), &f.pow(&z, k as u64));
                acc = f.add(&acc, &term);
            }
            assert!(acc.is_zero(), "Φ_{n}(z) != 0");
            assert!(f.is_one(&f.pow(&z, n as u64)));
        }
    }

    #[test]
    fn inverse_of_z_in_gaussian_field() {
        let f = Cyclotomic::new(4).unwrap();
        let z = f.generator();
        assert_eq!(f.inv(&z).unwrap(), f.neg(&z));
        assert!(f.is_one(&f.div(&z, &z).unwrap()));
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn roots_of_unity() {
        let f = Cyclotomic::new(6).unwrap();
        let w = f.primitive_root_of_unity(3).unwrap();
        assert!(f.is_one(&f.pow(&w, 3)));
        assert!(!f.is_one(&w));
        let f3 = Cyclotomic::new(3).unwrap();
        let w6 = f3.primitive_root_of_unity(6).unwrap();
        assert!(f3.is_one(&f3.pow(&w6, 6)));
        assert!(!f3.is_one(&f3.pow(&w6, 3)));
        assert!(!f3.is_one(&f3.pow(&w6, 2)));
        assert!(f3.primitive_root_of_unity(4).is_none());
    }

    #[test]
    fn display_forms() {
        let f = Cyclotomic::new(4).unwrap();
        assert_eq!(f.generator().to_string(), "z");
        assert_eq!(f.sub(&f.one(), &f.generator()).to_string(), "1 - z");
        assert_eq!(f.zero().to_string(), "0");
    }
}
