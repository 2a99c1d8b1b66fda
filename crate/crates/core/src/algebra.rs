//! q-skew polynomial rings `k_q[x_1, ..., x_n]`.
//!
//! The ring is presented by `x_j x_i = q_ij x_i x_j` for `i < j`. Sorted
//! monomials `x_1^a_1 ... x_n^a_n` form a basis, so every product has a
//! closed-form normal form: sort the word and multiply in one `q_ij` per
//! transposition of distinct letters.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::Field;
use crate::group::MonomialAutomorphism;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("q matrix must be {n}x{n}")]
    BadShape { n: usize },
    #[error("q[{i}][{i}] must be 1")]
    DiagonalNotOne { i: usize },
    #[error("q[{i}][{j}] * q[{j}][{i}] must be 1")]
    NotInverse { i: usize, j: usize },
    #[error("generator index {index} out of range for {n} generators")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("automorphism does not preserve the relations of the ring")]
    IncompatibleAutomorphism,
    #[error("grading assigns {got} degrees to {n} generators")]
    GradingLength { n: usize, got: usize },
    #[error("grading degree {0:?} is not an element of the group")]
    GradingDegree(Vec<u32>),
}

/// Exponent vector of a sorted monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    /// The generator `x_i` (zero-based).
    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul_exponents(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                _ => parts.push(format!("x{}^{e}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// The exponent vectors of total degree `d` in `n` variables, in
/// lexicographically decreasing order (`x_1^d` first).
pub fn degree_basis(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == n - 1 {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=left).rev() {
            prefix.push(a);
            rec(n, left - a, prefix, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `C(a, b)` as u64, zero when `b > a`.
pub fn binomial(a: u64, b: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u64, |acc, i| acc * (a - i) / (i + 1))
}

/// `dim R_d = C(d + n - 1, n - 1)`.
pub fn graded_dimension(n: usize, d: u32) -> u64 {
    if n == 0 {
        return u64::from(d == 0);
    }
    binomial(d as u64 + n as u64 - 1, n as u64 - 1)
}

/// Position of a monomial inside [`degree_basis`] without materializing it.
#[derive(Debug, Clone)]
pub struct MonomialIndexer {
    n: usize,
    // table[k][r] = number of monomials in k variables of degree r.
    table: Vec<Vec<u64>>,
}

impl MonomialIndexer {
    pub fn new(n: usize, max_degree: u32) -> Self {
        let table = (0..=n)
            .map(|k| (0..=max_degree).map(|r| graded_dimension(k, r)).collect())
            .collect();
        MonomialIndexer { n, table }
    }

    /// Rank of `m` among monomials of the same degree.
    pub fn index(&self, m: &[u32]) -> usize {
        let mut left: u32 = m.iter().sum();
        let mut idx = 0u64;
        for (pos, &a) in m.iter().enumerate().take(self.n.saturating_sub(1)) {
            // Monomials with a larger exponent at `pos` come first.
            let rest_vars = self.n - pos - 1;
            for bigger in a + 1..=left {
                idx += self.table[rest_vars][(left - bigger) as usize];
            }
            left -= a;
        }
        idx as usize
    }
}

/// A q-skew polynomial ring over `field`.
#[derive(Debug, Clone)]
pub struct SkewPolyRing<F: Field> {
    field: F,
    n: usize,
    q: Vec<F::Elem>,
}

impl<F: Field> SkewPolyRing<F> {
    /// Validates `q_ii = 1` and `q_ij q_ji = 1`.
    pub fn new(field: F, q: Vec<Vec<F::Elem>>) -> Result<Self, AlgebraError> {
        let n = q.len();
        if q.iter().any(|row| row.len() != n) {
            return Err(AlgebraError::BadShape { n });
        }
        for i in 0..n {
            if !field.is_one(&q[i][i]) {
                return Err(AlgebraError::DiagonalNotOne { i });
            }
            for j in i + 1..n {
                if !field.is_one(&field.mul(&q[i][j], &q[j][i])) {
                    return Err(AlgebraError::NotInverse { i, j });
                }
            }
        }
        Ok(SkewPolyRing { field, n, q: q.into_iter().flatten().collect() })
    }

    /// `x_i x_j = -x_j x_i` for all `i != j`.
    pub fn minus_one(field: F, n: usize) -> Self {
        let m1 = field.neg(&field.one());
        let q = (0..n)
            .map(|i| (0..n).map(|j| if i == j { field.one() } else { m1.clone() }).collect())
            .collect();
        Self::new(field, q).expect("-1 matrix is valid")
    }

    pub fn commutative(field: F, n: usize) -> Self {
        let q = vec![vec![field.one(); n]; n];
        Self::new(field, q).expect("all-ones matrix is valid")
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// The same presentation over another field, through a ring map on
    /// coefficients.
    pub fn map_field<T: Field, E>(
        &self,
        target: T,
        f: impl Fn(&F::Elem) -> Result<T::Elem, E>,
    ) -> Result<SkewPolyRing<T>, E> {
        let q = self.q.iter().map(&f).collect::<Result<Vec<_>, E>>()?;
        Ok(SkewPolyRing { field: target, n: self.n, q })
    }

    /// `q_ij`, zero-based.
    pub fn q(&self, i: usize, j: usize) -> &F::Elem {
        &self.q[i * self.n + j]
    }

    pub fn same_relations(&self, other: &Self) -> bool {
        self.n == other.n && self.q == other.q
    }

    /// Whether every off-diagonal `q_ij` equals `-1`.
    pub fn is_minus_one(&self) -> bool {
        let m1 = self.field.neg(&self.field.one());
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || *self.q(i, j) == m1))
    }

    pub fn is_commutative(&self) -> bool {
        self.q.iter().all(|x| self.field.is_one(x))
    }

    /// Sorts a word of zero-based generator indices into normal form.
    pub fn word_normal_form(&self, word: &[usize]) -> Result<(Monomial, F::Elem), AlgebraError> {
        let mut exps = vec![0u32; self.n];
        // counts of letters seen so far, for inversion counting
        let mut coeff = self.field.one();
        for &a in word {
            if a >= self.n {
                return Err(AlgebraError::IndexOutOfRange { index: a, n: self.n });
            }
            // Every earlier letter b > a forms an inversion contributing q_ab.
            for (b, &cnt) in exps.iter().enumerate().skip(a + 1) {
                if cnt > 0 {
                    coeff = self.field.mul(&coeff, &self.field.pow(self.q(a, b), cnt as u64));
                }
            }
            exps[a] += 1;
        }
        Ok((Monomial(exps), coeff))
    }

    /// `x^a x^b = c x^(a+b)` with `c = prod_{i > j} q_ji^(a_i b_j)`.
    pub fn monomial_product(&self, a: &Monomial, b: &Monomial) -> (Monomial, F::Elem) {
        let mut coeff = self.field.one();
        for i in 0..self.n {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..i {
                let e = a.0[i] as u64 * b.0[j] as u64;
                if e > 0 {
                    coeff = self.field.mul(&coeff, &self.field.pow(self.q(j, i), e));
                }
            }
        }
        (a.mul_exponents(b), coeff)
    }

    /// Coefficient of `x_i * x^m` relative to the sorted monomial.
    pub fn left_generator_coeff(&self, i: usize, m: &[u32]) -> F::Elem {
        let mut coeff = self.field.one();
        for (j, &e) in m.iter().enumerate().take(i) {
            if e > 0 {
                coeff = self.field.mul(&coeff, &self.field.pow(self.q(j, i), e as u64));
            }
        }
        coeff
    }

    /// Whether `q_{π(i)π(j)} = q_ij` for all `i, j`.
    pub fn preserves_relations(&self, perm: &[usize]) -> bool {
        perm.len() == self.n
            && (0..self.n).all(|i| (0..self.n).all(|j| self.q(perm[i], perm[j]) == self.q(i, j)))
    }

    /// `g(x^m)` as a coefficient times a sorted monomial.
    pub fn monomial_image(&self, g: &MonomialAutomorphism<F>, m: &Monomial) -> (Monomial, F::Elem) {
        let perm = g.perm();
        let mut coeff = self.field.one();
        let mut exps = vec![0u32; self.n];
        for i in 0..self.n {
            let a = m.0[i];
            if a == 0 {
                continue;
            }
            coeff = self.field.mul(&coeff, &self.field.pow(&g.scalars()[i], a as u64));
            exps[perm[i]] += a;
            // Blocks of letter π(i) that come later in the word with a smaller
            // letter π(j) < π(i) form inversions.
            for j in i + 1..self.n {
                let b = m.0[j];
                if b > 0 && perm[j] < perm[i] {
                    let e = a as u64 * b as u64;
                    coeff = self.field.mul(&coeff, &self.field.pow(self.q(perm[j], perm[i]), e));
                }
            }
        }
        (Monomial(exps), coeff)
    }

    /// `dim R_d` for `d = 0..=max_degree`.
    pub fn hilbert_series(&self, max_degree: u32) -> Vec<u64> {
        (0..=max_degree).map(|d| graded_dimension(self.n, d)).collect()
    }
}

/// Sparse element of a q-skew polynomial ring.
#[derive(Debug, Clone)]
pub struct AlgebraElement<F: Field> {
    ring: Arc<SkewPolyRing<F>>,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for AlgebraElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_relations(&other.ring) && self.terms == other.terms
    }
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero(ring: &Arc<SkewPolyRing<F>>) -> Self {
        AlgebraElement { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<SkewPolyRing<F>>) -> Self {
        Self::monomial(ring, Monomial::one(ring.n), ring.field.one())
    }

    pub fn monomial(ring: &Arc<SkewPolyRing<F>>, m: Monomial, c: F::Elem) -> Self {
        let mut e = Self::zero(ring);
        e.add_term(m, c);
        e
    }

    /// The generator `x_i` (zero-based).
    pub fn generator(ring: &Arc<SkewPolyRing<F>>, i: usize) -> Result<Self, AlgebraError> {
        if i >= ring.n {
            return Err(AlgebraError::IndexOutOfRange { index: i, n: ring.n });
        }
        Ok(Self::monomial(ring, Monomial::generator(ring.n, i), ring.field.one()))
    }

    /// `sum_i c_i x_i`.
    pub fn linear(ring: &Arc<SkewPolyRing<F>>, coeffs: &[F::Elem]) -> Self {
        let mut e = Self::zero(ring);
        for (i, c) in coeffs.iter().enumerate().take(ring.n) {
            e.add_term(Monomial::generator(ring.n, i), c.clone());
        }
        e
    }

    pub fn ring(&self) -> &Arc<SkewPolyRing<F>> {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: F::Elem) {
        let field = &self.ring.field;
        if field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = field.add(v, &c);
                if field.is_zero(v) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_relations(&other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), self.ring.field.mul(x, c));
        }
        out
    }

    /// Bilinear product through monomial normal forms.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let field = &self.ring.field;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let (m, c) = self.ring.monomial_product(ma, mb);
                out.add_term(m, field.mul(&field.mul(ca, cb), &c));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Degree of a homogeneous element; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let field = &self.ring.field;
        self.terms
            .iter()
            .map(|(m, c)| {
                if field.is_one(c) {
                    m.to_string()
                } else {
                    let s = field.render(c);
                    let s = if s.contains(' ') { format!("({s})") } else { s };
                    if m.degree() == 0 {
                        s
                    } else {
                        format!("{s}*{m}")
                    }
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Substitutes `x_i -> c_i x_{π(i)}` in every term.
pub fn apply_automorphism<F: Field>(
    g: &MonomialAutomorphism<F>,
    a: &AlgebraElement<F>,
) -> Result<AlgebraElement<F>, AlgebraError> {
    let ring = &a.ring;
    if !ring.preserves_relations(g.perm()) {
        return Err(AlgebraError::IncompatibleAutomorphism);
    }
    let mut out = AlgebraElement::zero(ring);
    for (m, c) in &a.terms {
        let (img, k) = ring.monomial_image(g, m);
        out.add_term(img, ring.field.mul(c, &k));
    }
    Ok(out)
}

/// A finite abelian group `Z_{m_1} x ... x Z_{m_k}`, elements as residue vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    orders: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u32>) -> Self {
        assert!(orders.iter().all(|&m| m >= 1), "cyclic factor orders must be positive");
        AbelianGroup { orders }
    }

    pub fn cyclic(m: u32) -> Self {
        Self::new(vec![m])
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&m| m as usize).product()
    }

    pub fn identity(&self) -> Vec<u32> {
        vec![0; self.orders.len()]
    }

    pub fn contains(&self, a: &[u32]) -> bool {
        a.len() == self.orders.len() && a.iter().zip(&self.orders).all(|(x, m)| x < m)
    }

    pub fn op(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn inverse(&self, a: &[u32]) -> Vec<u32> {
        a.iter().zip(&self.orders).map(|(x, m)| (m - x) % m).collect()
    }

    /// Mixed-radix position of an element, in `0..order()`.
    pub fn index_of(&self, a: &[u32]) -> usize {
        a.iter().zip(&self.orders).fold(0, |acc, (x, m)| acc * *m as usize + *x as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            let m = self.orders[k] as usize;
            out[k] = (idx % m) as u32;
            idx /= m;
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }
}

/// Assigns an element of an abelian group to every generator.
///
/// Relations `x_j x_i = q_ij x_i x_j` are homogeneous for any assignment
/// since both sides carry the same multidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingAssignment {
    group: AbelianGroup,
    degrees: Vec<Vec<u32>>,
}

impl GradingAssignment {
    pub fn new(group: AbelianGroup, degrees: Vec<Vec<u32>>) -> Result<Self, AlgebraError> {
        if let Some(bad) = degrees.iter().find(|d| !group.contains(d)) {
            return Err(AlgebraError::GradingDegree(bad.clone()));
        }
        Ok(GradingAssignment { group, degrees })
    }

    /// Cyclic grading with `deg x_i = labels[i] mod m`.
    pub fn cyclic(m: u32, labels: &[u32]) -> Self {
        let group = AbelianGroup::cyclic(m);
        let degrees = labels.iter().map(|&l| vec![l % m]).collect();
        GradingAssignment { group, degrees }
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn degrees(&self) -> &[Vec<u32>] {
        &self.degrees
    }

    /// Whether the degrees generate the whole group, i.e. the dual action is
    /// inner faithful.
    pub fn generates_group(&self) -> bool {
        let mut reached = vec![false; self.group.order()];
        let mut stack = vec![self.group.identity()];
        reached[0] = true;
        while let Some(a) = stack.pop() {
            for d in &self.degrees {
                let b = self.group.op(&a, d);
                let i = self.group.index_of(&b);
                if !reached[i] {
                    reached[i] = true;
                    stack.push(b);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }

    pub fn check_ring<F: Field>(&self, ring: &SkewPolyRing<F>) -> Result<(), AlgebraError> {
        if self.degrees.len() != ring.nvars() {
            return Err(AlgebraError::GradingLength { n: ring.nvars(), got: self.degrees.len() });
        }
        Ok(())
    }

    pub fn monomial_degree(&self, m: &[u32]) -> Vec<u32> {
        let mut acc = self.group.identity();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e % self.group.order() as u32 {
                acc = self.group.op(&acc, &self.degrees[i]);
            }
        }
        acc
    }

    /// The group degree of a homogeneous element; `None` if mixed or zero.
    pub fn element_degree<F: Field>(&self, a: &AlgebraElement<F>) -> Option<Vec<u32>> {
        let mut degs = a.terms().keys().map(|m| self.monomial_degree(m.exponents()));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Splits an element into its homogeneous components.
    pub fn decompose<F: Field>(&self, a: &AlgebraElement<F>) -> BTreeMap<Vec<u32>, AlgebraElement<F>> {
        let mut out: BTreeMap<Vec<u32>, AlgebraElement<F>> = BTreeMap::new();
        for (m, c) in a.terms() {
            let deg = self.monomial_degree(m.exponents());
            out.entry(deg)
                .or_insert_with(|| AlgebraElement::zero(a.ring()))
                .add_term(m.clone(), c.clone());
        }
        out
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

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn word_normal_forms() {
        let r = SkewPolyRing::minus_one(Rationals, 2);
        assert_eq!(r.word_normal_form(&[1, 0]).unwrap(), (mono(&[1, 1]), q(-1)));
        assert_eq!(r.word_normal_form(&[0, 0]).unwrap(), (mono(&[2, 0]), q(1)));
        assert_eq!(r.word_normal_form(&[1, 1, 0, 0]).unwrap(), (mono(&[2, 2]), q(1)));
        assert_eq!(
            r.word_normal_form(&[2]),
            Err(AlgebraError::IndexOutOfRange { index: 2, n: 2 })
        );
    }

    #[test]
    fn ring_validation() {
        let bad = vec![vec![q(1), q(2)], vec![q(2), q(1)]];
        assert_eq!(SkewPolyRing::new(Rationals, bad).unwrap_err(), AlgebraError::NotInverse { i: 0, j: 1 });
        let diag = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        assert_eq!(SkewPolyRing::new(Rationals, diag).unwrap_err(), AlgebraError::DiagonalNotOne { i: 0 });
    }

    #[test]
    fn degree_bases() {
        assert_eq!(degree_basis(2, 2), vec![mono(&[2, 0]), mono(&[1, 1]), mono(&[0, 2])]);
        assert_eq!(degree_basis(4, 0), vec![mono(&[0, 0, 0, 0])]);
        assert_eq!(degree_basis(3, 2).len(), 6);
        let r = SkewPolyRing::minus_one(Rationals, 4);
        assert_eq!(r.hilbert_series(3)[3], 20);
        assert_eq!(SkewPolyRing::minus_one(Rationals, 2).hilbert_series(4), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn indexer_matches_basis_order() {
        for n in 1..5 {
            let idx = MonomialIndexer::new(n, 6);
            for d in 0..=6 {
                for (k, m) in degree_basis(n, d).iter().enumerate() {
                    assert_eq!(idx.index(m.exponents()), k, "n={n} d={d} m={m}");
                }
            }
        }
    }

    #[test]
    fn cross_terms_cancel_in_minus_one_plane() {
        let ring = Arc::new(SkewPolyRing::minus_one(Rationals, 2));
        let s = AlgebraElement::linear(&ring, &[q(1), q(1)]);
        let sq = s.mul(&s).unwrap();
        let expected = AlgebraElement::linear(&ring, &[])
            .add(&AlgebraElement::monomial(&ring, mono(&[2, 0]), q(1)))
            .unwrap()
            .add(&AlgebraElement::monomial(&ring, mono(&[0, 2]), q(1)))
            .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(s.mul(&AlgebraElement::one(&ring)).unwrap(), s);
    }

    #[test]
    fn fourier_generators_anticommute_to_squares() {
        // n = 4 over Q(ξ_4): y_i y_j + y_j y_i = 2 Y_{i+j}.
        let field = Cyclotomic::new(4).unwrap();
        let n = 4;
        let ring = Arc::new(SkewPolyRing::minus_one(field.clone(), n));
        let y = |j: i64| {
            let c: Vec<_> = (1..=n as i64).map(|i| field.root_power(i * j)).collect();
            AlgebraElement::linear(&ring, &c)
        };
        let big_y = |j: i64| {
            let mut e = AlgebraElement::zero(&ring);
            for i in 1..=n as i64 {
                let mut ex = vec![0; n];
                ex[(i - 1) as usize] = 2;
                e.add_term(Monomial::new(ex), field.root_power(i * j));
            }
            e
        };
        for i in 0..4 {
            for j in 0..4 {
                let lhs = y(i).mul(&y(j)).unwrap().add(&y(j).mul(&y(i)).unwrap()).unwrap();
                assert_eq!(lhs, big_y((i + j) % 4).scale(&field.from_i64(2)), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn automorphism_application() {
        use crate::group::MonomialAutomorphism;
        let ring3 = Arc::new(SkewPolyRing::minus_one(Rationals, 3));
        let sigma = MonomialAutomorphism::cyclic_shift(&Rationals, 3);
        let x1x2 = AlgebraElement::monomial(&ring3, mono(&[1, 1, 0]), q(1));
        assert_eq!(
            apply_automorphism(&sigma, &x1x2).unwrap(),
            AlgebraElement::monomial(&ring3, mono(&[0, 1, 1]), q(1))
        );
        let ring2 = Arc::new(SkewPolyRing::minus_one(Rationals, 2));
        let swap = MonomialAutomorphism::cyclic_shift(&Rationals, 2);
        let x = AlgebraElement::monomial(&ring2, mono(&[1, 1]), q(1));
        assert_eq!(apply_automorphism(&swap, &x).unwrap(), x.scale(&q(-1)));
        let id = MonomialAutomorphism::identity(&Rationals, 2);
        assert_eq!(apply_automorphism(&id, &x).unwrap(), x);
    }

    #[test]
    fn incompatible_automorphism_is_rejected() {
        use crate::group::MonomialAutomorphism;
        let q3 = vec![
            vec![q(1), q(2), q(1)],
            vec![Rational::new(1.into(), 2.into()), q(1), q(3)],
            vec![q(1), Rational::new(1.into(), 3.into()), q(1)],
        ];
        let ring = Arc::new(SkewPolyRing::new(Rationals, q3).unwrap());
        let swap = MonomialAutomorphism::permutation(&Rationals, vec![1, 0, 2]).unwrap();
        let x = AlgebraElement::generator(&ring, 0).unwrap();
        assert_eq!(apply_automorphism(&swap, &x), Err(AlgebraError::IncompatibleAutomorphism));
    }

    fn ring_with_q(n: usize, qs: &[i64]) -> SkewPolyRing<Rationals> {
        // Upper-triangular entries drawn from {±1, ±2}; lower ones are inverses.
        let mut m = vec![vec![q(1); n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                let v = q(qs[k % qs.len()]);
                m[j][i] = v.recip();
                m[i][j] = v;
                k += 1;
            }
        }
        SkewPolyRing::new(Rationals, m).unwrap()
    }

    fn homogeneous(ring: &Arc<SkewPolyRing<Rationals>>, d: u32, coeffs: &[i64]) -> AlgebraElement<Rationals> {
        let mut e = AlgebraElement::zero(ring);
        for (m, c) in degree_basis(ring.nvars(), d).into_iter().zip(coeffs.iter().cycle()) {
            e.add_term(m, q(*c));
        }
        e
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(
            n in 2usize..5,
            qs in proptest::collection::vec(prop_oneof![Just(-1i64), Just(2), Just(-2), Just(1)], 6),
            degs in (0u32..4, 0u32..4, 0u32..4),
            cs in proptest::collection::vec(-2i64..3, 1..5),
        ) {
            let ring = Arc::new(ring_with_q(n, &qs));
            let a = homogeneous(&ring, degs.0, &cs);
            let b = homogeneous(&ring, degs.1, &cs[1..].iter().chain(&cs[..1]).copied().collect::<Vec<_>>());
            let c = homogeneous(&ring, degs.2, &cs.iter().rev().copied().collect::<Vec<_>>());
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(&left, &right);
            let ab = a.mul(&b).unwrap();
            if !ab.is_zero() {
                prop_assert_eq!(ab.homogeneous_degree(), Some(degs.0 + degs.1));
            }
        }

        #[test]
        fn defining_relations_hold(n in 2usize..5, qs in proptest::collection::vec(prop_oneof![Just(-1i64), Just(2), Just(3)], 6)) {
            let ring = Arc::new(ring_with_q(n, &qs));
            for i in 0..n {
                for j in i + 1..n {
                    let xi = AlgebraElement::generator(&ring, i).unwrap();
                    let xj = AlgebraElement::generator(&ring, j).unwrap();
                    prop_assert_eq!(xj.mul(&xi).unwrap(), xi.mul(&xj).unwrap().scale(ring.q(i, j)));
                }
            }
        }

        #[test]
        fn graded_products_stay_homogeneous(
            labels in proptest::collection::vec(0u32..6, 3),
            e1 in proptest::collection::vec(0u32..3, 3),
            e2 in proptest::collection::vec(0u32..3, 3),
        ) {
            let ring = Arc::new(SkewPolyRing::minus_one(Rationals, 3));
            let grading = GradingAssignment::cyclic(6, &labels);
            let a = AlgebraElement::monomial(&ring, Monomial::new(e1.clone()), q(1));
            let b = AlgebraElement::monomial(&ring, Monomial::new(e2.clone()), q(2));
            let ab = a.mul(&b).unwrap();
            let expected = grading.group().op(&grading.monomial_degree(&e1), &grading.monomial_degree(&e2));
            prop_assert_eq!(grading.element_degree(&ab), Some(expected));
        }
    }
}
