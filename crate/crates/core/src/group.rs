//! Finite groups of monomial graded automorphisms and their trace series.
//!
//! A monomial automorphism `x_i -> c_i x_{π(i)}` sends every sorted monomial
//! to a multiple of a sorted monomial. Its trace on `R_d` therefore only
//! sees the monomials fixed by `π`, which are the exponent vectors constant
//! on the cycles of `π`.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{degree_basis, Monomial, MonomialIndexer, SkewPolyRing};
use crate::coeff::{CoeffError, Field};
use crate::linalg::{RowSpace, SparseVector};
use crate::series::{
    leading_term_at_infinity, pade_reconstruct, pole_order_at_one, RationalFunction, SeriesError,
    TruncatedSeries,
};

pub const DEFAULT_GROUP_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("{0:?} is not a permutation of 0..{1}")]
    NotPermutation(Vec<usize>, usize),
    #[error("{scalars} scalars for a permutation of {n} points")]
    LengthMismatch { n: usize, scalars: usize },
    #[error("scalar {index} is zero")]
    ZeroScalar { index: usize },
    #[error("automorphism does not preserve the relations of the ring")]
    Incompatible,
    #[error("group closure exceeded {cap} elements")]
    CapExceeded { cap: usize },
    #[error("group order {0} is not invertible in the field")]
    OrderNotInvertible(usize),
    #[error("trace series leading exponent at infinity is {exponent}, expected {expected}")]
    HdetAnomaly { exponent: i64, expected: i64 },
    #[error("odd-cycle count needs unit scalars on a skew or commutative ring")]
    OracleOutOfScope,
    #[error("group elements collide after changing fields")]
    NotFaithful,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// `g(x_i) = c_i x_{π(i)}`, zero-based.
#[derive(Debug, Clone)]
pub struct MonomialAutomorphism<F: Field> {
    perm: Vec<usize>,
    scalars: Vec<F::Elem>,
}

impl<F: Field> PartialEq for MonomialAutomorphism<F> {
    fn eq(&self, other: &Self) -> bool {
        self.perm == other.perm && self.scalars == other.scalars
    }
}

impl<F: Field> MonomialAutomorphism<F> {
    pub fn new(field: &F, perm: Vec<usize>, scalars: Vec<F::Elem>) -> Result<Self, GroupError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(GroupError::NotPermutation(perm, n));
            }
            seen[p] = true;
        }
        if scalars.len() != n {
            return Err(GroupError::LengthMismatch { n, scalars: scalars.len() });
        }
        if let Some(index) = scalars.iter().position(|c| field.is_zero(c)) {
            return Err(GroupError::ZeroScalar { index });
        }
        Ok(MonomialAutomorphism { perm, scalars })
    }

    pub fn identity(field: &F, n: usize) -> Self {
        MonomialAutomorphism { perm: (0..n).collect(), scalars: vec![field.one(); n] }
    }

    /// `σ(x_i) = x_{i+1}` with indices mod `n`.
    pub fn cyclic_shift(field: &F, n: usize) -> Self {
        MonomialAutomorphism { perm: (0..n).map(|i| (i + 1) % n).collect(), scalars: vec![field.one(); n] }
    }

    /// A permutation with unit scalars.
    pub fn permutation(field: &F, perm: Vec<usize>) -> Result<Self, GroupError> {
        let n = perm.len();
        Self::new(field, perm, vec![field.one(); n])
    }

    pub fn diagonal(field: &F, scalars: Vec<F::Elem>) -> Result<Self, GroupError> {
        Self::new(field, (0..scalars.len()).collect(), scalars)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// The same substitution with scalars mapped into another field.
    pub fn map_field<T: Field, E>(
        &self,
        f: impl Fn(&F::Elem) -> Result<T::Elem, E>,
    ) -> Result<MonomialAutomorphism<T>, E> {
        let scalars = self.scalars.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(MonomialAutomorphism { perm: self.perm.clone(), scalars })
    }

    pub fn scalars(&self) -> &[F::Elem] {
        &self.scalars
    }

    pub fn nvars(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self, field: &F) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.scalars.iter().all(|c| field.is_one(c))
    }

    pub fn is_pure_permutation(&self, field: &F) -> bool {
        self.scalars.iter().all(|c| field.is_one(c))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, field: &F, other: &Self) -> Self {
        let perm = other.perm.iter().map(|&j| self.perm[j]).collect();
        let scalars = other
            .scalars
            .iter()
            .zip(&other.perm)
            .map(|(c, &j)| field.mul(c, &self.scalars[j]))
            .collect();
        MonomialAutomorphism { perm, scalars }
    }

    pub fn inverse(&self, field: &F) -> Self {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut scalars = vec![field.one(); n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            scalars[self.perm[i]] = field.inv(&self.scalars[i]).expect("scalars are nonzero");
        }
        MonomialAutomorphism { perm, scalars }
    }

    pub fn power(&self, field: &F, k: usize) -> Self {
        (0..k).fold(Self::identity(field, self.nvars()), |acc, _| acc.compose(field, self))
    }

    /// Cycles of `π` as lists of points, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.perm.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.perm[i];
            }
            out.push(cycle);
        }
        out
    }

    fn key(&self, field: &F) -> (Vec<usize>, Vec<String>) {
        (self.perm.clone(), self.scalars.iter().map(|c| field.render(c)).collect())
    }

    pub fn render(&self, field: &F) -> String {
        let images: Vec<String> = self
            .perm
            .iter()
            .zip(&self.scalars)
            .enumerate()
            .map(|(i, (&p, c))| {
                if field.is_one(c) {
                    format!("x{} -> x{}", i + 1, p + 1)
                } else {
                    format!("x{} -> ({})*x{}", i + 1, field.render(c), p + 1)
                }
            })
            .collect();
        images.join(", ")
    }
}

/// Whether `q_{π(i)π(j)} = q_ij` for all `i, j`.
pub fn check_automorphism<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>) -> bool {
    ring.preserves_relations(g.perm())
}

/// A finite group of monomial automorphisms with its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup<F: Field> {
    field: F,
    elements: Vec<MonomialAutomorphism<F>>,
    // table[i][j] = index of elements[i] ∘ elements[j]
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

impl<F: Field> FiniteGroup<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn nvars(&self) -> usize {
        self.elements[0].nvars()
    }

    /// Element 0 is the identity.
    pub fn elements(&self) -> &[MonomialAutomorphism<F>] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &MonomialAutomorphism<F> {
        &self.elements[i]
    }

    pub fn product(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|i| (0..i).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Element order of `elements[i]`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut cur = i;
        while cur != 0 {
            cur = self.table[cur][i];
            k += 1;
        }
        k
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).fold(1, |acc, i| num_integer::lcm(acc, self.element_order(i)))
    }

    pub fn index_of(&self, g: &MonomialAutomorphism<F>) -> Option<usize> {
        self.elements.iter().position(|h| h == g)
    }

    /// Index of an element generating the whole group, if it is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.order()).find(|&i| self.element_order(i) == self.order())
    }

    /// Orders `o_1, ..., o_r` of cyclic subgroups with `G = <g_1> × ... × <g_r>`,
    /// and the coordinates `(k_1, ..., k_r)` of every element, so that
    /// `elements[i] = Π g_j^{k_j}`. `None` for nonabelian groups.
    pub fn abelian_decomposition(&self) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
        if !self.is_abelian() {
            return None;
        }
        let mut by_order: Vec<usize> = (1..self.order()).collect();
        by_order.sort_by_key(|&i| std::cmp::Reverse(self.element_order(i)));
        let mut coords: Vec<Option<Vec<u32>>> = vec![None; self.order()];
        coords[0] = Some(Vec::new());
        let mut orders = Vec::new();
        self.extend_decomposition(&by_order, &mut orders, &mut coords)
            .then(|| (orders, coords.into_iter().map(|c| c.expect("every element is covered")).collect()))
    }

    fn extend_decomposition(&self, candidates: &[usize], orders: &mut Vec<u32>, coords: &mut Vec<Option<Vec<u32>>>) -> bool {
        let covered: Vec<usize> = (0..self.order()).filter(|&i| coords[i].is_some()).collect();
        if covered.len() == self.order() {
            return true;
        }
        for &g in candidates {
            let o = self.element_order(g);
            let mut powers = vec![0usize];
            for _ in 1..o {
                powers.push(self.table[*powers.last().unwrap()][g]);
            }
            if powers[1..].iter().any(|&p| coords[p].is_some()) {
                continue;
            }
            let saved = coords.clone();
            for &h in &covered {
                let base = saved[h].clone().unwrap();
                for (k, &p) in powers.iter().enumerate() {
                    let mut c = base.clone();
                    c.push(k as u32);
                    coords[self.table[h][p]] = Some(c);
                }
            }
            orders.push(o as u32);
            if self.extend_decomposition(candidates, orders, coords) {
                return true;
            }
            orders.pop();
            *coords = saved;
        }
        false
    }

    /// The same group over another field; the multiplication table carries
    /// over because coefficient maps are ring maps.
    pub fn map_field<T: Field, E>(
        &self,
        ring: &SkewPolyRing<T>,
        f: impl Fn(&F::Elem) -> Result<T::Elem, E> + Copy,
    ) -> Result<FiniteGroup<T>, GroupError>
    where
        GroupError: From<E>,
    {
        let target = ring.field();
        let elements = self
            .elements
            .iter()
            .map(|g| g.map_field::<T, E>(f))
            .collect::<Result<Vec<_>, E>>()?;
        let mut keys = std::collections::HashSet::new();
        if !elements.iter().all(|g| keys.insert(g.key(target))) {
            return Err(GroupError::NotFaithful);
        }
        Ok(FiniteGroup { field: target.clone(), elements, table: self.table.clone(), inverses: self.inverses.clone() })
    }

    /// `|G|^{-1}` in the field, if it exists.
    pub fn inverse_order(&self) -> Result<F::Elem, GroupError> {
        self.field
            .inv(&self.field.from_i64(self.order() as i64))
            .ok_or(GroupError::OrderNotInvertible(self.order()))
    }
}

/// Closes `generators` under composition, failing once more than `cap`
/// elements appear.
pub fn group_closure<F: Field>(
    ring: &SkewPolyRing<F>,
    generators: &[MonomialAutomorphism<F>],
    cap: usize,
) -> Result<FiniteGroup<F>, GroupError> {
    let field = ring.field();
    let n = ring.nvars();
    for g in generators {
        if g.nvars() != n {
            return Err(GroupError::LengthMismatch { n, scalars: g.nvars() });
        }
        if !check_automorphism(ring, g) {
            return Err(GroupError::Incompatible);
        }
    }
    let mut elements = vec![MonomialAutomorphism::identity(field, n)];
    let mut lookup = HashMap::new();
    lookup.insert(elements[0].key(field), 0usize);
    let mut next = 0;
    while next < elements.len() {
        for s in generators {
            let h = elements[next].compose(field, s);
            let key = h.key(field);
            if !lookup.contains_key(&key) {
                if elements.len() >= cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                lookup.insert(key, elements.len());
                elements.push(h);
            }
        }
        next += 1;
    }
    let table: Vec<Vec<usize>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| lookup[&a.compose(field, b).key(field)]).collect())
        .collect();
    let inverses = table
        .iter()
        .map(|row| row.iter().position(|&k| k == 0).expect("finite monoid of bijections is a group"))
        .collect();
    Ok(FiniteGroup { field: field.clone(), elements, table, inverses })
}

/// `<σ>` for the cyclic shift on `n` variables.
pub fn cyclic_permutation_group<F: Field>(ring: &SkewPolyRing<F>) -> Result<FiniteGroup<F>, GroupError> {
    let sigma = MonomialAutomorphism::cyclic_shift(ring.field(), ring.nvars());
    group_closure(ring, &[sigma], DEFAULT_GROUP_CAP)
}

/// `λ_C` with `g(m_C) = λ_C m_C`, where `m_C` is the product of the variables
/// on the cycle `C`, paired with the cycle length.
///
/// A fixed monomial is `x^α` with `α` constant on cycles, and the
/// coefficient of `g(x^α)` is `Π_C λ_C^{a_C}`. Summing over fixed monomials
/// therefore gives `Tr(g, t) = Π_C 1 / (1 - λ_C t^{|C|})`.
pub fn cycle_eigenvalues<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>) -> Vec<(usize, F::Elem)> {
    g.cycles()
        .into_iter()
        .map(|c| {
            let mut e = vec![0; ring.nvars()];
            for &i in &c {
                e[i] = 1;
            }
            (c.len(), ring.monomial_image(g, &Monomial::new(e)).1)
        })
        .collect()
}

/// `Tr(g|R_d)` for `d = 0..=max_degree`.
pub fn trace_series<F: Field>(
    ring: &SkewPolyRing<F>,
    g: &MonomialAutomorphism<F>,
    max_degree: u32,
) -> TruncatedSeries<F::Elem> {
    let field = ring.field();
    let d = max_degree as usize;
    let mut coeffs = vec![field.zero(); d + 1];
    coeffs[0] = field.one();
    for (len, lambda) in cycle_eigenvalues(ring, g) {
        for k in len..=d {
            let add = field.mul(&coeffs[k - len], &lambda);
            coeffs[k] = field.add(&coeffs[k], &add);
        }
    }
    TruncatedSeries::new(coeffs)
}

/// Trace of `g` on `R_d`: the signed sum over fixed monomials.
pub fn trace_on_degree<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>, d: u32) -> F::Elem {
    trace_series(ring, g, d).coeff(d as usize).clone()
}

/// Number of trace coefficients fed to reconstruction for `n` variables.
pub fn trace_fit_degree(n: usize) -> u32 {
    2 * (n as u32 + 2) + 4
}

/// Closed form of `Tr(g, t)` recovered from its expansion.
///
/// Both degree bounds are `n + 2`, which covers the true form (numerator 1,
/// denominator of degree `n`) with room for the stability check.
pub fn trace_function<F: Field>(
    ring: &SkewPolyRing<F>,
    g: &MonomialAutomorphism<F>,
) -> Result<RationalFunction<F::Elem>, GroupError> {
    let n = ring.nvars();
    let s = trace_series(ring, g, trace_fit_degree(n));
    Ok(pade_reconstruct(ring.field(), &s, n + 2, n + 2)?)
}

/// `r(g) = n - (pole order of Tr(g, t) at t = 1)`.
pub fn reflection_number<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>) -> Result<usize, GroupError> {
    let f = trace_function(ring, g)?;
    Ok(ring.nvars().saturating_sub(pole_order_at_one(ring.field(), &f)))
}

/// `r(g)` for every element, in group order (identity gives 0).
pub fn reflection_profile<F: Field>(ring: &SkewPolyRing<F>, group: &FiniteGroup<F>) -> Result<Vec<usize>, GroupError> {
    group.elements().par_iter().map(|g| reflection_number(ring, g)).collect()
}

/// `r(R, G) = min { r(g) : g != 1 }`; `None` for the trivial group.
pub fn reflection_number_group<F: Field>(
    ring: &SkewPolyRing<F>,
    group: &FiniteGroup<F>,
) -> Result<Option<usize>, GroupError> {
    let profile = reflection_profile(ring, group)?;
    Ok(profile.into_iter().skip(1).min())
}

/// Indices of the elements with `r(g) = 1`.
pub fn quasi_reflections<F: Field>(ring: &SkewPolyRing<F>, group: &FiniteGroup<F>) -> Result<Vec<usize>, GroupError> {
    elements_with_reflection_number(ring, group, 1)
}

/// Indices of the elements with `r(g) = 2`.
pub fn quasi_bireflections<F: Field>(ring: &SkewPolyRing<F>, group: &FiniteGroup<F>) -> Result<Vec<usize>, GroupError> {
    elements_with_reflection_number(ring, group, 2)
}

fn elements_with_reflection_number<F: Field>(
    ring: &SkewPolyRing<F>,
    group: &FiniteGroup<F>,
    r: usize,
) -> Result<Vec<usize>, GroupError> {
    let profile = reflection_profile(ring, group)?;
    Ok((1..group.order()).filter(|&i| profile[i] == r).collect())
}

/// Number of odd-length cycles of a pure permutation on `k_{-1}[x]` or `k[x]`.
pub fn odd_cycle_oracle<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>) -> Result<usize, GroupError> {
    let field = ring.field();
    if !g.is_pure_permutation(field) || !(ring.is_minus_one() || ring.is_commutative()) {
        return Err(GroupError::OracleOutOfScope);
    }
    Ok(g.cycles().iter().filter(|c| c.len() % 2 == 1).count())
}

/// `hdet(g) = (-1)^n / c` where `Tr(g, t) = c t^{-n} (1 + O(1/t))`.
pub fn hdet<F: Field>(ring: &SkewPolyRing<F>, g: &MonomialAutomorphism<F>) -> Result<F::Elem, GroupError> {
    let field = ring.field();
    let n = ring.nvars() as i64;
    let f = trace_function(ring, g)?;
    let (exponent, c) = leading_term_at_infinity(field, &f)?;
    if exponent != -n {
        return Err(GroupError::HdetAnomaly { exponent, expected: -n });
    }
    let sign = if n % 2 == 0 { field.one() } else { field.neg(&field.one()) };
    Ok(field.div(&sign, &c).expect("leading coefficient is nonzero"))
}

/// `|G|^{-1} Σ_g Tr(g, t)`, truncated at `max_degree`.
pub fn molien_series<F: Field>(
    ring: &SkewPolyRing<F>,
    group: &FiniteGroup<F>,
    max_degree: u32,
) -> Result<TruncatedSeries<F::Elem>, GroupError> {
    let field = ring.field();
    let inv = group.inverse_order()?;
    let traces: Vec<_> = group.elements().par_iter().map(|g| trace_series(ring, g, max_degree)).collect();
    let mut acc = TruncatedSeries::new(vec![field.zero(); max_degree as usize + 1]);
    for t in &traces {
        acc = acc.add(field, t);
    }
    Ok(acc.scale(field, &inv))
}

/// `dim (R^G)_d` as the rank of the Reynolds operator on `R_d`.
pub fn invariant_dimension_direct<F: Field>(
    ring: &SkewPolyRing<F>,
    group: &FiniteGroup<F>,
    d: u32,
) -> Result<usize, GroupError> {
    group.inverse_order()?;
    let field = ring.field();
    let n = ring.nvars();
    let basis = degree_basis(n, d);
    let indexer = MonomialIndexer::new(n, d);
    let mut space = RowSpace::new(field.clone(), basis.len());
    for m in &basis {
        let entries = group.elements().iter().map(|g| {
            let (img, c) = ring.monomial_image(g, m);
            (indexer.index(img.exponents()) as u32, c)
        });
        let v = SparseVector::from_entries(field, entries);
        space.insert(&v).expect("vector lives in R_d");
        if space.is_full() {
            break;
        }
    }
    Ok(space.dim())
}
