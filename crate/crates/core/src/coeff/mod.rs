//! Exact coefficient fields.
//!
//! Every computation in the crate is generic over [`Field`], a small trait
//! with an explicit context object. Three implementations are provided:
//!
//! - [`Rationals`]: arbitrary precision fractions, always in lowest terms.
//! - [`Cyclotomic`]: `Q(ξ_n)` with elements stored as residues modulo `Φ_n`.
//! - [`PrimeField`]: `GF(p)` for word-sized primes, used for fast modular
//!   rank certificates.
//!
//! The context-object style keeps elements small (a `u64` for `GF(p)`),
//! which matters for sparse elimination. For callers that need dynamically
//! typed values there is [`Scalar`], which carries its field with it and
//! reports mixed-field operations as errors.

mod cyclotomic;
mod prime;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, euler_phi, Cyclotomic, CyclotomicNumber};
pub use prime::{distinct_prime_factors, is_prime, reduce_mod_p, PrimeField, PrimeFieldElement};

/// Arbitrary precision rational number in canonical form.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields ({0} and {1})")]
    MixedFields(FieldKind, FieldKind),
    #[error("denominator {den} is divisible by the characteristic {p}")]
    DenominatorDivisible { den: BigInt, p: u64 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("no primitive {order}-th root of unity in {field}")]
    NoRootOfUnity { order: u64, field: FieldKind },
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "param", rename_all = "snake_case")]
pub enum FieldKind {
    Rational,
    Cyclotomic(u32),
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Cyclotomic(n) => write!(f, "Q(zeta_{n})"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// A field with an explicit context value.
///
/// Elements carry no reference to their field; all arithmetic goes through
/// the context so that `GF(p)` elements stay plain integers.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Result<Self::Elem, CoeffError>;
    /// Zero for characteristic zero.
    fn characteristic(&self) -> u64;
    /// A primitive `k`-th root of unity, if the field contains one.
    fn primitive_root_of_unity(&self, k: u64) -> Option<Self::Elem>;
    fn kind(&self) -> FieldKind;
    fn render(&self, a: &Self::Elem) -> String;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// `acc -= c * b`, the inner step of elimination.
    fn sub_mul_assign(&self, acc: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(c, b));
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `a^e` for possibly negative exponents; `None` when `a = 0` and `e < 0`.
    fn pow_signed(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|ai| self.pow(&ai, e.unsigned_abs()))
        }
    }

    /// Whether the integer `m` is invertible in the field.
    fn is_unit_integer(&self, m: u64) -> bool {
        let p = self.characteristic();
        p == 0 || m % p != 0
    }
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, r: &Rational) -> Result<Rational, CoeffError> {
        Ok(r.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn primitive_root_of_unity(&self, k: u64) -> Option<Rational> {
        match k {
            1 => Some(Rational::one()),
            2 => Some(-Rational::one()),
            _ => None,
        }
    }
    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn render(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn to_scalar(&self, a: &Rational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn sub_mul_assign(&self, acc: &mut Rational, c: &Rational, b: &Rational) {
        *acc -= c * b;
    }
}

/// Parses `"3"`, `"-3/4"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// A field element tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rational),
    Cyclotomic(CyclotomicNumber),
    Prime(PrimeFieldElement),
}

impl Scalar {
    pub fn field_kind(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Cyclotomic(c) => FieldKind::Cyclotomic(c.order()),
            Scalar::Prime(p) => FieldKind::Prime(p.modulus()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Cyclotomic(c) => c.is_zero(),
            Scalar::Prime(p) => p.value() == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Cyclotomic(c) => write!(f, "{c}"),
            Scalar::Prime(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn apply<F: Field>(field: &F, a: &F::Elem, b: &F::Elem, op: ArithOp) -> Result<F::Elem, CoeffError> {
    Ok(match op {
        ArithOp::Add => field.add(a, b),
        ArithOp::Sub => field.sub(a, b),
        ArithOp::Mul => field.mul(a, b),
        ArithOp::Div => field.div(a, b).ok_or(CoeffError::DivisionByZero)?,
    })
}

/// Dynamically typed field arithmetic; both operands must share a field.
pub fn field_arithmetic(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, CoeffError> {
    let mixed = || CoeffError::MixedFields(a.field_kind(), b.field_kind());
    match (a, b) {
        (Scalar::Rational(x), Scalar::Rational(y)) => {
            apply(&Rationals, x, y, op).map(Scalar::Rational)
        }
        (Scalar::Cyclotomic(x), Scalar::Cyclotomic(y)) => {
            if x.order() != y.order() {
                return Err(mixed());
            }
            let field = Cyclotomic::new(x.order())?;
            apply(&field, x, y, op).map(Scalar::Cyclotomic)
        }
        (Scalar::Prime(x), Scalar::Prime(y)) => {
            if x.modulus() != y.modulus() {
                return Err(mixed());
            }
            let field = PrimeField::new(x.modulus())?;
            apply(&field, &x.value(), &y.value(), op)
                .map(|v| Scalar::Prime(PrimeFieldElement::new(v, x.modulus())))
        }
        _ => Err(mixed()),
    }
}

/// Ring maps out of a field: reduction modulo a prime and embedding into a
/// larger cyclotomic field.
pub trait FieldMaps: Field {
    /// Order of the root of unity generating the field over its prime
    /// field; 1 when there is none.
    fn root_order(&self) -> u64;

    /// Image in `target` under the map sending the generator to `root`, a
    /// primitive `root_order()`-th root of unity there.
    fn reduce(&self, a: &Self::Elem, target: &PrimeField, root: u64) -> Result<u64, CoeffError>;

    /// Image in `Q(ξ_L)`; `None` unless `root_order()` divides `L`.
    fn embed(&self, a: &Self::Elem, target: &Cyclotomic) -> Option<CyclotomicNumber>;
}

impl FieldMaps for Rationals {
    fn root_order(&self) -> u64 {
        1
    }

    fn reduce(&self, a: &Rational, target: &PrimeField, _root: u64) -> Result<u64, CoeffError> {
        target.from_rational(a)
    }

    fn embed(&self, a: &Rational, target: &Cyclotomic) -> Option<CyclotomicNumber> {
        target.from_rational(a).ok()
    }
}

impl FieldMaps for Cyclotomic {
    fn root_order(&self) -> u64 {
        self.order() as u64
    }

    fn reduce(&self, a: &CyclotomicNumber, target: &PrimeField, root: u64) -> Result<u64, CoeffError> {
        let mut acc = 0;
        for c in a.coeffs().iter().rev() {
            acc = target.add(&target.mul(&acc, &root), &target.from_rational(c)?);
        }
        Ok(acc)
    }

    fn embed(&self, a: &CyclotomicNumber, target: &Cyclotomic) -> Option<CyclotomicNumber> {
        if target.order() % self.order() != 0 {
            return None;
        }
        let step = (target.order() / self.order()) as i64;
        let mut acc = target.zero();
        for (k, c) in a.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let term = target.mul(&target.root_power(k as i64 * step), &target.from_rational(c).ok()?);
                acc = target.add(&acc, &term);
            }
        }
        Some(acc)
    }
}

impl FieldMaps for PrimeField {
    fn root_order(&self) -> u64 {
        1
    }

    fn reduce(&self, a: &u64, target: &PrimeField, _root: u64) -> Result<u64, CoeffError> {
        if target.modulus() == self.modulus() {
            Ok(*a)
        } else {
            Err(CoeffError::MixedFields(self.kind(), target.kind()))
        }
    }

    fn embed(&self, _a: &u64, _target: &Cyclotomic) -> Option<CyclotomicNumber> {
        None
    }
}

/// Least common multiple of the denominators, as a positive integer.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| {
        num_integer::Integer::lcm(&acc, r.denom())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rationals_are_canonical() {
        let r = q(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(q(0, 5), Rational::zero());
        assert_eq!(Rational::zero().denom(), &BigInt::one());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("-3/4"), Some(q(-3, 4)));
        assert_eq!(parse_rational(" 7 "), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn scalar_division() {
        let c4 = Cyclotomic::new(4).unwrap();
        let z = Scalar::Cyclotomic(c4.generator());
        let one = Scalar::Cyclotomic(c4.one());
        assert_eq!(field_arithmetic(&z, &z, ArithOp::Div).unwrap(), one);
        let minus_z = Scalar::Cyclotomic(c4.neg(&c4.generator()));
        assert_eq!(field_arithmetic(&one, &z, ArithOp::Div).unwrap(), minus_z);

        let a = Scalar::Prime(PrimeFieldElement::new(3, 7));
        let b = Scalar::Prime(PrimeFieldElement::new(5, 7));
        assert_eq!(
            field_arithmetic(&a, &b, ArithOp::Div).unwrap(),
            Scalar::Prime(PrimeFieldElement::new(2, 7))
        );
    }

    #[test]
    fn scalar_errors() {
        let zero = Scalar::Rational(Rational::zero());
        let one = Scalar::Rational(Rational::one());
        assert_eq!(
            field_arithmetic(&one, &zero, ArithOp::Div),
            Err(CoeffError::DivisionByZero)
        );
        let p = Scalar::Prime(PrimeFieldElement::new(1, 7));
        assert!(matches!(
            field_arithmetic(&one, &p, ArithOp::Add),
            Err(CoeffError::MixedFields(..))
        ));
        let p11 = Scalar::Prime(PrimeFieldElement::new(1, 11));
        assert!(matches!(
            field_arithmetic(&p11, &p, ArithOp::Mul),
            Err(CoeffError::MixedFields(..))
        ));
    }

    #[test]
    fn field_maps_are_ring_maps() {
        let q4 = Cyclotomic::new(4).unwrap();
        let gf = PrimeField::new(13).unwrap();
        let w = gf.primitive_root_of_unity(4).unwrap();
        let a = q4.from_poly(vec![q(1, 2), q(3, 1)]);
        let b = q4.from_poly(vec![q(-2, 1), q(1, 5)]);
        let red = |x: &CyclotomicNumber| q4.reduce(x, &gf, w).unwrap();
        assert_eq!(red(&q4.mul(&a, &b)), gf.mul(&red(&a), &red(&b)));
        assert_eq!(red(&q4.generator()), w);
        let q12 = Cyclotomic::new(12).unwrap();
        let i12 = q4.embed(&q4.generator(), &q12).unwrap();
        assert_eq!(q12.mul(&i12, &i12), q12.from_i64(-1));
        assert_eq!(q4.embed(&a, &Cyclotomic::new(6).unwrap()), None);
        assert_eq!(Rationals.embed(&q(2, 3), &q12), Some(q12.from_rational(&q(2, 3)).unwrap()));
        assert!(gf.reduce(&3, &PrimeField::new(7).unwrap(), 1).is_err());
    }

    #[test]
    fn pow_signed_inverts() {
        let f = Rationals;
        assert_eq!(f.pow_signed(&q(2, 3), -2), Some(q(9, 4)));
        assert_eq!(f.pow_signed(&Rational::zero(), -1), None);
        assert_eq!(f.pow(&q(-1, 1), 7), q(-1, 1));
    }

    mod axioms {
        use super::*;
        use proptest::prelude::*;

        fn rat() -> impl Strategy<Value = Rational> {
            (-20i64..20, 1i64..9).prop_map(|(n, d)| q(n, d))
        }

        fn cyclo(order: u32) -> impl Strategy<Value = CyclotomicNumber> {
            let field = Cyclotomic::new(order).unwrap();
            let deg = field.degree();
            proptest::collection::vec(rat(), deg).prop_map(move |c| field.from_poly(c))
        }

        fn check_axioms<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, c: &F::Elem) {
            assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
            assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
            assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
            assert_eq!(f.mul(a, b), f.mul(b, a));
            if !f.is_zero(a) {
                assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
            }
            assert!(f.is_zero(&f.add(a, &f.neg(a))));
        }

        proptest! {
            #[test]
            fn rational_axioms(a in rat(), b in rat(), c in rat()) {
                check_axioms(&Rationals, &a, &b, &c);
            }

            #[test]
            fn cyclotomic_axioms(a in cyclo(12), b in cyclo(12), c in cyclo(12)) {
                check_axioms(&Cyclotomic::new(12).unwrap(), &a, &b, &c);
            }

            #[test]
            fn cyclotomic_axioms_prime_order(a in cyclo(5), b in cyclo(5), c in cyclo(5)) {
                check_axioms(&Cyclotomic::new(5).unwrap(), &a, &b, &c);
            }

            #[test]
            fn prime_axioms(a in 0u64..1_000_003, b in 0u64..1_000_003, c in 0u64..1_000_003) {
                check_axioms(&PrimeField::new(1_000_003).unwrap(), &a, &b, &c);
            }

            #[test]
            fn reduction_is_homomorphism(a in rat(), b in rat(), pi in 0usize..3) {
                let p = [11u64, 13, 17][pi];
                let f = PrimeField::new(p).unwrap();
                let (ra, rb) = (reduce_mod_p(&a, p).unwrap().value(), reduce_mod_p(&b, p).unwrap().value());
                prop_assert_eq!(reduce_mod_p(&(&a + &b), p).unwrap().value(), f.add(&ra, &rb));
                prop_assert_eq!(reduce_mod_p(&(&a * &b), p).unwrap().value(), f.mul(&ra, &rb));
            }
        }
    }
}
