//! Smash products `R # kG` and `R # (kG)°` and the ideal generated by the
//! integral idempotent.
//!
//! Coordinates of `B_d` are pairs `(m, h)` with `m` a monomial of degree `d`
//! and `h` an index into the Hopf part: a group element for `kG`, an
//! idempotent `p_a` for `(kG)°`. The pair `(m, h)` sits at position
//! `index(m) * |G| + h`.
//!
//! The ideal `I = (e)` is computed degree by degree. Since `B` is generated
//! by `R_1 # 1` over `B_0` and `e` absorbs `1 # H` on both sides,
//! `I = (R # 1) e B`, and therefore `I_d = (R_1 # 1) I_{d-1} + e B_d`.

mod channels;
mod fourier;
mod report;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{degree_basis, AlgebraError, graded_dimension, AlgebraElement, GradingAssignment, Monomial, MonomialIndexer, SkewPolyRing};
use crate::coeff::{CoeffError, Field};
use crate::group::{FiniteGroup, GroupError};
use crate::linalg::{LinalgError, RowSpace, SparseVector};

pub use channels::{channel_count, isotypic_split_available, quotient_hilbert_split};
pub use fourier::{fourier_suite, FourierBasis, FourierSuite};
pub use report::{
    certificate_primes, modular_hilbert, pertinency_report, FieldPolicy, Pertinency, PertinencyReport, ReportOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmashError {
    #[error("elements belong to different smash products")]
    ParentMismatch,
    #[error("ring has {ring} generators but the Hopf part acts on {hopf}")]
    SizeMismatch { ring: usize, hopf: usize },
    #[error("group order {0} is not invertible in the field")]
    OrderNotInvertible(usize),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("degree {degree} exceeds the ladder bound {max}")]
    DegreeExceedsLadder { degree: usize, max: usize },
    #[error("no certificate prime found: {0}")]
    NoPrime(String),
    #[error("isotypic split is not available over this field")]
    SplitUnavailable,
    #[error("modular and exact computations disagree: {0}")]
    Inconsistent(String),
    #[error("growth estimate failed: {0}")]
    Series(#[from] crate::series::SeriesError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The Hopf algebra acting on `R`.
#[derive(Debug, Clone)]
pub enum HopfPart<F: Field> {
    /// `kG` acting by automorphisms.
    Group(Arc<FiniteGroup<F>>),
    /// `(kG)°` for abelian `G`, acting through a `G`-grading of `R`.
    Dual(GradingAssignment),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmashKind {
    Group,
    Dual,
}

/// `R # H` for `H = kG` or `H = (kG)°`.
#[derive(Debug, Clone)]
pub struct SmashAlgebra<F: Field> {
    ring: Arc<SkewPolyRing<F>>,
    hopf: HopfPart<F>,
}

impl<F: Field> SmashAlgebra<F> {
    pub fn group(ring: Arc<SkewPolyRing<F>>, group: Arc<FiniteGroup<F>>) -> Result<Self, SmashError> {
        if group.nvars() != ring.nvars() {
            return Err(SmashError::SizeMismatch { ring: ring.nvars(), hopf: group.nvars() });
        }
        Ok(SmashAlgebra { ring, hopf: HopfPart::Group(group) })
    }

    pub fn dual(ring: Arc<SkewPolyRing<F>>, grading: GradingAssignment) -> Result<Self, SmashError> {
        if grading.degrees().len() != ring.nvars() {
            return Err(SmashError::SizeMismatch { ring: ring.nvars(), hopf: grading.degrees().len() });
        }
        Ok(SmashAlgebra { ring, hopf: HopfPart::Dual(grading) })
    }

    pub fn ring(&self) -> &Arc<SkewPolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn hopf(&self) -> &HopfPart<F> {
        &self.hopf
    }

    pub fn kind(&self) -> SmashKind {
        match self.hopf {
            HopfPart::Group(_) => SmashKind::Group,
            HopfPart::Dual(_) => SmashKind::Dual,
        }
    }

    /// `dim H = |G|`.
    pub fn hopf_dim(&self) -> usize {
        match &self.hopf {
            HopfPart::Group(g) => g.order(),
            HopfPart::Dual(gr) => gr.group().order(),
        }
    }

    /// `dim B_d = |G| dim R_d`.
    pub fn dim(&self, d: u32) -> u64 {
        self.hopf_dim() as u64 * graded_dimension(self.ring.nvars(), d)
    }

    /// Position of `(m, h)` in the coordinates of `B_deg(m)`.
    pub fn coordinate(&self, indexer: &MonomialIndexer, m: &Monomial, h: usize) -> u32 {
        (indexer.index(m.exponents()) * self.hopf_dim() + h) as u32
    }

    /// `(x^a # h1)(x^b # h2)` as a single term, or `None` when it vanishes.
    pub fn basis_product(&self, a: &Monomial, h1: usize, b: &Monomial, h2: usize) -> Option<(Monomial, usize, F::Elem)> {
        let field = self.field();
        match &self.hopf {
            HopfPart::Group(g) => {
                let (img, c1) = self.ring.monomial_image(g.element(h1), b);
                let (m, c2) = self.ring.monomial_product(a, &img);
                Some((m, g.product(h1, h2), field.mul(&c1, &c2)))
            }
            HopfPart::Dual(gr) => {
                // (r # p_a)(r' # p_b) = δ_{c^{-1} a, b} r r' # p_b with c = deg r'.
                let group = gr.group();
                let c = gr.monomial_degree(b.exponents());
                let shifted = group.op(&group.inverse(&c), &group.element_at(h1));
                if group.index_of(&shifted) != h2 {
                    return None;
                }
                let (m, coeff) = self.ring.monomial_product(a, b);
                Some((m, h2, coeff))
            }
        }
    }

    /// Index of the unit of `H` (`1` in `kG`) or of the integral `p_1`.
    fn identity_index(&self) -> usize {
        0
    }

    pub fn hopf_label(&self, h: usize) -> String {
        match &self.hopf {
            HopfPart::Group(_) => {
                if h == 0 {
                    "1".to_string()
                } else {
                    format!("g{h}")
                }
            }
            HopfPart::Dual(gr) => {
                let a = gr.group().element_at(h);
                let parts: Vec<String> = a.iter().map(u32::to_string).collect();
                format!("p({})", parts.join(","))
            }
        }
    }

    /// The same smash product over another field. Fails when the group does
    /// not map injectively.
    pub fn map_field<T: Field>(
        &self,
        target: T,
        f: impl Fn(&F::Elem) -> Result<T::Elem, CoeffError> + Copy,
    ) -> Result<SmashAlgebra<T>, SmashError> {
        let ring = Arc::new(self.ring.map_field(target, f)?);
        let hopf = match &self.hopf {
            HopfPart::Group(g) => HopfPart::Group(Arc::new(g.map_field(&ring, f)?)),
            HopfPart::Dual(gr) => HopfPart::Dual(gr.clone()),
        };
        Ok(SmashAlgebra { ring, hopf })
    }

    /// Spanning vectors of `e B_d`, with `e` scaled by `|G|` in the group case.
    pub(crate) fn integral_times_basis(&self, basis: &[Monomial], indexer: &MonomialIndexer) -> Vec<SparseVector<F::Elem>> {
        let field = self.field();
        let hd = self.hopf_dim();
        match &self.hopf {
            HopfPart::Group(g) => {
                // |G| e (m # h) = Σ_k g_k(m) # g_k h.
                let mut out = Vec::with_capacity(basis.len() * hd);
                for m in basis {
                    for h in 0..hd {
                        let entries = (0..g.order()).map(|k| {
                            let (img, c) = self.ring.monomial_image(g.element(k), m);
                            (self.coordinate(indexer, &img, g.product(k, h)), c)
                        });
                        out.push(SparseVector::from_entries(field, entries));
                    }
                }
                out
            }
            HopfPart::Dual(gr) => {
                // e (m # p_b) = m # p_b when b = deg(m)^{-1}, else 0.
                let group = gr.group();
                basis
                    .iter()
                    .map(|m| {
                        let b = group.inverse(&gr.monomial_degree(m.exponents()));
                        let h = group.index_of(&b);
                        SparseVector::from_entries(field, [(self.coordinate(indexer, m, h), field.one())])
                    })
                    .collect()
            }
        }
    }
}

/// Sparse element of a smash product.
#[derive(Debug, Clone)]
pub struct SmashElement<F: Field> {
    parent: Arc<SmashAlgebra<F>>,
    terms: BTreeMap<(Monomial, usize), F::Elem>,
}

impl<F: Field> PartialEq for SmashElement<F> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.terms == other.terms
    }
}

impl<F: Field> SmashElement<F> {
    pub fn zero(parent: &Arc<SmashAlgebra<F>>) -> Self {
        SmashElement { parent: parent.clone(), terms: BTreeMap::new() }
    }

    /// `c x^m # h`.
    pub fn basis(parent: &Arc<SmashAlgebra<F>>, m: Monomial, h: usize, c: F::Elem) -> Self {
        let mut e = Self::zero(parent);
        e.add_term(m, h, c);
        e
    }

    /// `f # 1`. In the dual case `1 = Σ_a p_a`.
    pub fn from_ring(parent: &Arc<SmashAlgebra<F>>, f: &AlgebraElement<F>) -> Self {
        let mut e = Self::zero(parent);
        let hs: Vec<usize> = match parent.kind() {
            SmashKind::Group => vec![parent.identity_index()],
            SmashKind::Dual => (0..parent.hopf_dim()).collect(),
        };
        for (m, c) in f.terms() {
            for &h in &hs {
                e.add_term(m.clone(), h, c.clone());
            }
        }
        e
    }

    /// `1 # h`.
    pub fn hopf_basis(parent: &Arc<SmashAlgebra<F>>, h: usize) -> Self {
        let n = parent.ring.nvars();
        Self::basis(parent, Monomial::one(n), h, parent.field().one())
    }

    pub fn parent(&self) -> &Arc<SmashAlgebra<F>> {
        &self.parent
    }

    pub fn terms(&self) -> &BTreeMap<(Monomial, usize), F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, h: usize, c: F::Elem) {
        let field = self.parent.field();
        if field.is_zero(&c) {
            return;
        }
        let key = (m, h);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = field.add(v, &c);
                if field.is_zero(v) {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SmashError> {
        if !Arc::ptr_eq(&self.parent, &other.parent) {
            return Err(SmashError::ParentMismatch);
        }
        let mut out = self.clone();
        for ((m, h), c) in &other.terms {
            out.add_term(m.clone(), *h, c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.parent.field();
        let mut out = Self::zero(&self.parent);
        for ((m, h), x) in &self.terms {
            out.add_term(m.clone(), *h, field.mul(x, c));
        }
        out
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|(m, _)| m.degree());
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Coordinates in `B_d` for a homogeneous element of degree `d`.
    pub fn to_vector(&self, indexer: &MonomialIndexer) -> SparseVector<F::Elem> {
        let field = self.parent.field();
        SparseVector::from_entries(
            field,
            self.terms.iter().map(|((m, h), c)| (self.parent.coordinate(indexer, m, *h), c.clone())),
        )
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let field = self.parent.field();
        self.terms
            .iter()
            .map(|((m, h), c)| {
                let body = format!("{m}#{}", self.parent.hopf_label(*h));
                if field.is_one(c) {
                    body
                } else {
                    let s = field.render(c);
                    let s = if s.contains(' ') { format!("({s})") } else { s };
                    format!("{s}*{body}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<F: Field> fmt::Display for SmashElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Bilinear extension of [`SmashAlgebra::basis_product`].
pub fn smash_multiply<F: Field>(a: &SmashElement<F>, b: &SmashElement<F>) -> Result<SmashElement<F>, SmashError> {
    if !Arc::ptr_eq(&a.parent, &b.parent) {
        return Err(SmashError::ParentMismatch);
    }
    let parent = &a.parent;
    let field = parent.field();
    let mut out = SmashElement::zero(parent);
    for ((ma, ha), ca) in &a.terms {
        for ((mb, hb), cb) in &b.terms {
            if let Some((m, h, c)) = parent.basis_product(ma, *ha, mb, *hb) {
                out.add_term(m, h, field.mul(&field.mul(ca, cb), &c));
            }
        }
    }
    Ok(out)
}

/// `e = 1 # ∫` with `ε(∫) = 1`: `|G|^{-1} Σ_g 1 # g`, or `1 # p_1`.
pub fn integral_idempotent<F: Field>(parent: &Arc<SmashAlgebra<F>>) -> Result<SmashElement<F>, SmashError> {
    let field = parent.field();
    match &parent.hopf {
        HopfPart::Group(g) => {
            let inv = field
                .inv(&field.from_i64(g.order() as i64))
                .ok_or(SmashError::OrderNotInvertible(g.order()))?;
            let mut e = SmashElement::zero(parent);
            for h in 0..g.order() {
                e.add_term(Monomial::one(parent.ring.nvars()), h, inv.clone());
            }
            Ok(e)
        }
        HopfPart::Dual(_) => Ok(SmashElement::hopf_basis(parent, parent.identity_index())),
    }
}

/// Degree slices `I_0, ..., I_D` of the ideal generated by `e`.
#[derive(Debug, Clone)]
pub struct IdealLadder<F: Field> {
    slices: Vec<RowSpace<F>>,
    indexers: MonomialIndexer,
}

impl<F: Field> IdealLadder<F> {
    pub fn max_degree(&self) -> usize {
        self.slices.len() - 1
    }

    pub fn slice(&self, d: usize) -> &RowSpace<F> {
        &self.slices[d]
    }

    pub fn dims(&self) -> Vec<u64> {
        self.slices.iter().map(|s| s.dim() as u64).collect()
    }

    pub fn indexer(&self) -> &MonomialIndexer {
        &self.indexers
    }
}

/// Builds `I_d = (R_1 # 1) I_{d-1} + e B_d` for `d = 0..=max_degree`.
///
/// Once a slice is all of `B_d`, every later slice is full as well.
pub fn ideal_ladder<F: Field>(b: &SmashAlgebra<F>, max_degree: u32) -> Result<IdealLadder<F>, SmashError> {
    if let HopfPart::Group(g) = &b.hopf {
        g.inverse_order().map_err(|_| SmashError::OrderNotInvertible(g.order()))?;
    }
    let field = b.field();
    let n = b.ring.nvars();
    let hd = b.hopf_dim();
    let indexer = MonomialIndexer::new(n, max_degree);
    let mut slices: Vec<RowSpace<F>> = Vec::with_capacity(max_degree as usize + 1);
    let mut prev_basis: Vec<Monomial> = Vec::new();
    for d in 0..=max_degree {
        let amb = b.dim(d) as usize;
        let basis = degree_basis(n, d);
        if d > 0 && slices[d as usize - 1].is_full() {
            slices.push(RowSpace::full(field.clone(), amb));
            prev_basis = basis;
            continue;
        }
        let mut space = RowSpace::new(field.clone(), amb);
        for v in b.integral_times_basis(&basis, &indexer) {
            space.insert(&v)?;
            if space.is_full() {
                break;
            }
        }
        if d > 0 && !space.is_full() {
            let prev = &slices[d as usize - 1];
            'outer: for row in prev.basis() {
                for i in 0..n {
                    let entries = row.entries().iter().map(|(col, x)| {
                        let (mi, h) = (*col as usize / hd, *col as usize % hd);
                        let src = &prev_basis[mi];
                        let mut e = src.exponents().to_vec();
                        e[i] += 1;
                        let c = b.ring.left_generator_coeff(i, src.exponents());
                        ((indexer.index(&e) * hd + h) as u32, field.mul(x, &c))
                    });
                    space.insert(&SparseVector::from_entries(field, entries))?;
                    if space.is_full() {
                        break 'outer;
                    }
                }
            }
        }
        space.release_scratch();
        slices.push(space);
        prev_basis = basis;
    }
    Ok(IdealLadder { slices, indexers: indexer })
}

/// `h(d) = dim B_d - dim I_d` from a computed ladder.
pub fn quotient_hilbert_from_ladder<F: Field>(b: &SmashAlgebra<F>, ladder: &IdealLadder<F>) -> Vec<u64> {
    ladder
        .dims()
        .iter()
        .enumerate()
        .map(|(d, &i)| b.dim(d as u32) - i)
        .collect()
}

/// `h(d)` for `d = 0..=max_degree`, through the isotypic split when the
/// field allows it and through the full ladder otherwise.
pub fn quotient_hilbert<F: Field>(b: &SmashAlgebra<F>, max_degree: u32) -> Result<Vec<u64>, SmashError> {
    if isotypic_split_available(b) {
        return quotient_hilbert_split(b, max_degree);
    }
    let ladder = ideal_ladder(b, max_degree)?;
    Ok(quotient_hilbert_from_ladder(b, &ladder))
}

/// Whether a homogeneous `f` lies in `I`.
pub fn ideal_membership<F: Field>(f: &SmashElement<F>, ladder: &IdealLadder<F>) -> Result<bool, SmashError> {
    if f.is_zero() {
        return Ok(true);
    }
    let d = f.homogeneous_degree().ok_or(SmashError::NotHomogeneous)? as usize;
    if d > ladder.max_degree() {
        return Err(SmashError::DegreeExceedsLadder { degree: d, max: ladder.max_degree() });
    }
    Ok(ladder.slice(d).contains(&f.to_vector(ladder.indexer()))?)
}

/// `dim e B_d e`, computed from products in `B`.
pub fn corner_dimension<F: Field>(parent: &Arc<SmashAlgebra<F>>, d: u32) -> Result<usize, SmashError> {
    let e = integral_idempotent(parent)?;
    let n = parent.ring.nvars();
    let indexer = MonomialIndexer::new(n, d);
    let mut space = RowSpace::new(parent.field().clone(), parent.dim(d) as usize);
    for m in degree_basis(n, d) {
        for h in 0..parent.hopf_dim() {
            let x = SmashElement::basis(parent, m.clone(), h, parent.field().one());
            let exe = smash_multiply(&smash_multiply(&e, &x)?, &e)?;
            space.insert(&exe.to_vector(&indexer))?;
        }
    }
    Ok(space.dim())
}
