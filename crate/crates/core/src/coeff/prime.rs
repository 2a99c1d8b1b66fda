use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{CoeffError, Field, FieldKind, Rational, Scalar};

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `GF(p)` for a prime `p < 2^32`, so that products fit in a `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, CoeffError> {
        if p >= 1 << 32 {
            return Err(CoeffError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(self.pow(a, self.p - 2))
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, r: &Rational) -> Result<u64, CoeffError> {
        let den = self.reduce_bigint(r.denom());
        if den == 0 {
            return Err(CoeffError::DenominatorDivisible {
                den: r.denom().clone(),
                p: self.p,
            });
        }
        let num = self.reduce_bigint(r.numer());
        Ok(self.mul(&num, &self.inv(&den).unwrap()))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }

    /// Exists exactly when `k | p - 1`.
    fn primitive_root_of_unity(&self, k: u64) -> Option<u64> {
        if k == 0 || (self.p - 1) % k != 0 {
            return None;
        }
        let prime_factors = distinct_prime_factors(k);
        let cofactor = (self.p - 1) / k;
        (2..self.p).find_map(|a| {
            let w = self.pow(&a, cofactor);
            let primitive = prime_factors.iter().all(|&q| self.pow(&w, k / q) != 1);
            primitive.then_some(w)
        })
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Prime(PrimeFieldElement::new(*a, self.p))
    }
    #[inline]
    fn sub_mul_assign(&self, acc: &mut u64, c: &u64, b: &u64) {
        let prod = (c * b) % self.p;
        *acc = if *acc >= prod { *acc - prod } else { *acc + self.p - prod };
    }
}

pub fn distinct_prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            out.push(p);
            while k % p == 0 {
                k /= p;
            }
        }
        p += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// A residue class modulo a prime, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeFieldElement {
    value: u64,
    modulus: u64,
}

impl PrimeFieldElement {
    pub fn new(value: u64, modulus: u64) -> Self {
        PrimeFieldElement { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Image of a rational number in `GF(p)`.
pub fn reduce_mod_p(x: &Rational, p: u64) -> Result<PrimeFieldElement, CoeffError> {
    let field = PrimeField::new(p)?;
    if x.is_zero() {
        return Ok(PrimeFieldElement::new(0, p));
    }
    let v = field.from_rational(x)?;
    Ok(PrimeFieldElement::new(v, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(2_147_483_649));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn division_in_gf7() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.div(&3, &5), Some(2));
        assert_eq!(f.div(&3, &0), None);
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_mod_p(&q(1, 2), 5).unwrap().value(), 3);
        assert_eq!(reduce_mod_p(&q(0, 1), 13).unwrap().value(), 0);
        assert_eq!(reduce_mod_p(&q(-1, 3), 7).unwrap().value(), 2);
        assert!(matches!(
            reduce_mod_p(&q(1, 5), 5),
            Err(CoeffError::DenominatorDivisible { .. })
        ));
        assert_eq!(reduce_mod_p(&q(1, 2), 4), Err(CoeffError::NotPrime(4)));
    }

    #[test]
    fn roots_of_unity_exist_when_order_divides() {
        let f = PrimeField::new(13).unwrap();
        let w = f.primitive_root_of_unity(4).unwrap();
        assert_eq!(f.pow(&w, 4), 1);
        assert_ne!(f.pow(&w, 2), 1);
        assert!(f.primitive_root_of_unity(5).is_none());
        assert_eq!(f.primitive_root_of_unity(12).map(|w| f.pow(&w, 6)), Some(12));
    }
}
