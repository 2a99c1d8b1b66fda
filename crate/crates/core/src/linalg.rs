//! Exact linear algebra over any [`Field`].
//!
//! [`Matrix`] is a plain dense matrix with a deterministic row reduction.
//! [`RowSpace`] is the workhorse of the ideal computations: an incrementally
//! grown subspace stored as sparse echelon rows, supporting insertion with
//! growth detection and membership tests.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use thiserror::Error;

use crate::coeff::Field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    entries: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn new(rows: usize, cols: usize, entries: Vec<E>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinalgError::DimensionMismatch { expected: cols, got: r.len() });
            }
            entries.extend(r);
        }
        Ok(Matrix { rows: n, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }
}

/// Reduced row echelon form and rank.
///
/// Pivots are chosen deterministically: for each column from the left, the
/// topmost remaining row with a nonzero entry.
pub fn rref_rank<F: Field>(field: &F, m: &Matrix<F::Elem>) -> (Matrix<F::Elem>, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !field.is_zero(a.get(r, col))) else {
            continue;
        };
        for c in 0..cols {
            a.entries.swap(p * cols + c, rank * cols + c);
        }
        let inv = field.inv(a.get(rank, col)).expect("pivot is nonzero");
        for c in 0..cols {
            let idx = rank * cols + c;
            a.entries[idx] = field.mul(&a.entries[idx], &inv);
        }
        for r in 0..rows {
            if r == rank || field.is_zero(a.get(r, col)) {
                continue;
            }
            let factor = a.get(r, col).clone();
            for c in 0..cols {
                let pivot_val = a.entries[rank * cols + c].clone();
                field.sub_mul_assign(&mut a.entries[r * cols + c], &factor, &pivot_val);
            }
        }
        rank += 1;
    }
    (a, rank)
}

/// Sparse vector with strictly increasing column indices and no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<E> {
    entries: Vec<(u32, E)>,
}

impl<E> Default for SparseVector<E> {
    fn default() -> Self {
        SparseVector { entries: Vec::new() }
    }
}

impl<E: Clone> SparseVector<E> {
    /// Builds a vector from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries<F: Field<Elem = E>>(field: &F, entries: impl IntoIterator<Item = (u32, E)>) -> Self {
        let mut map: BTreeMap<u32, E> = BTreeMap::new();
        for (c, x) in entries {
            match map.get_mut(&c) {
                Some(v) => *v = field.add(v, &x),
                None => {
                    map.insert(c, x);
                }
            }
        }
        SparseVector {
            entries: map.into_iter().filter(|(_, x)| !field.is_zero(x)).collect(),
        }
    }

    /// Wraps entries that are already sorted, distinct and nonzero.
    pub fn from_sorted_unchecked(entries: Vec<(u32, E)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector { entries }
    }

    pub fn from_dense<F: Field<Elem = E>>(field: &F, dense: &[E]) -> Self {
        SparseVector {
            entries: dense
                .iter()
                .enumerate()
                .filter(|(_, x)| !field.is_zero(x))
                .map(|(i, x)| (i as u32, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, field: &F, len: usize) -> Vec<E> {
        let mut out = vec![field.zero(); len];
        for (c, x) in &self.entries {
            out[*c as usize] = x.clone();
        }
        out
    }

    pub fn entries(&self) -> &[(u32, E)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<u32> {
        self.entries.first().map(|(c, _)| *c)
    }

    pub fn scale<F: Field<Elem = E>>(&mut self, field: &F, c: &E) {
        for (_, x) in &mut self.entries {
            *x = field.mul(x, c);
        }
    }

    fn max_col(&self) -> Option<u32> {
        self.entries.last().map(|(c, _)| *c)
    }
}

const NO_PIVOT: u32 = u32::MAX;

/// Reusable dense accumulator for sparse elimination.
#[derive(Debug, Clone, Default)]
struct Scratch<E> {
    acc: Vec<E>,
    queued: Vec<bool>,
    heap: BinaryHeap<Reverse<u32>>,
}

/// Subspace of `F^ambient_dim` kept as echelon rows.
///
/// Each stored row starts with its pivot entry, normalized to one, and is
/// reduced against every pivot present when it was inserted. Pivot columns
/// are distinct; [`RowSpace::reduced_basis`] returns the fully reduced form.
#[derive(Debug, Clone)]
pub struct RowSpace<F: Field> {
    field: F,
    ambient_dim: usize,
    rows: Vec<SparseVector<F::Elem>>,
    pivot_row: Vec<u32>,
    full: bool,
    scratch: Scratch<F::Elem>,
}

impl<F: Field> RowSpace<F> {
    pub fn new(field: F, ambient_dim: usize) -> Self {
        RowSpace {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivot_row: vec![NO_PIVOT; ambient_dim],
            full: ambient_dim == 0,
            scratch: Scratch { acc: Vec::new(), queued: Vec::new(), heap: BinaryHeap::new() },
        }
    }

    /// The whole ambient space, without materialized rows.
    pub fn full(field: F, ambient_dim: usize) -> Self {
        RowSpace {
            field,
            ambient_dim,
            rows: Vec::new(),
            pivot_row: Vec::new(),
            full: true,
            scratch: Scratch { acc: Vec::new(), queued: Vec::new(), heap: BinaryHeap::new() },
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        if self.full {
            self.ambient_dim
        } else {
            self.rows.len()
        }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Echelon rows; empty for a space built with [`RowSpace::full`].
    pub fn basis(&self) -> &[SparseVector<F::Elem>] {
        &self.rows
    }

    /// Pivot columns in increasing order.
    pub fn pivots(&self) -> Vec<usize> {
        if self.full {
            return (0..self.ambient_dim).collect();
        }
        let mut p: Vec<usize> = self.rows.iter().map(|r| r.leading().unwrap() as usize).collect();
        p.sort_unstable();
        p
    }

    fn check(&self, v: &SparseVector<F::Elem>) -> Result<(), LinalgError> {
        match v.max_col() {
            Some(c) if c as usize >= self.ambient_dim => Err(LinalgError::DimensionMismatch {
                expected: self.ambient_dim,
                got: c as usize + 1,
            }),
            _ => Ok(()),
        }
    }

    /// Adds `v` to the spanning set. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseVector<F::Elem>) -> Result<bool, LinalgError> {
        self.check(v)?;
        if self.full || v.is_empty() {
            return Ok(false);
        }
        let mut reduced = self.reduce_with_scratch(v);
        if reduced.is_empty() {
            return Ok(false);
        }
        let inv = self.field.inv(&reduced.entries[0].1).expect("leading entry is nonzero");
        reduced.scale(&self.field, &inv);
        let lead = reduced.entries[0].0;
        self.pivot_row[lead as usize] = self.rows.len() as u32;
        self.rows.push(reduced);
        if self.rows.len() == self.ambient_dim {
            self.mark_full();
        }
        Ok(true)
    }

    /// Dense-vector convenience wrapper around [`RowSpace::insert`].
    pub fn insert_dense(&mut self, v: &[F::Elem]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        let sv = SparseVector::from_dense(&self.field, v);
        self.insert(&sv)
    }

    fn mark_full(&mut self) {
        self.full = true;
        self.rows = Vec::new();
        self.pivot_row = Vec::new();
        self.release_scratch();
    }

    /// Frees the dense accumulator; it is reallocated on the next insertion.
    pub fn release_scratch(&mut self) {
        self.scratch = Scratch { acc: Vec::new(), queued: Vec::new(), heap: BinaryHeap::new() };
    }

    fn reduce_with_scratch(&mut self, v: &SparseVector<F::Elem>) -> SparseVector<F::Elem> {
        let field = &self.field;
        let s = &mut self.scratch;
        if s.acc.len() != self.ambient_dim {
            s.acc = vec![field.zero(); self.ambient_dim];
            s.queued = vec![false; self.ambient_dim];
        }
        for (c, x) in &v.entries {
            let ci = *c as usize;
            s.acc[ci] = field.add(&s.acc[ci], x);
            if !s.queued[ci] {
                s.queued[ci] = true;
                s.heap.push(Reverse(*c));
            }
        }
        let mut out = Vec::new();
        while let Some(Reverse(c)) = s.heap.pop() {
            let ci = c as usize;
            s.queued[ci] = false;
            let x = std::mem::replace(&mut s.acc[ci], field.zero());
            if field.is_zero(&x) {
                continue;
            }
            let r = self.pivot_row[ci];
            if r == NO_PIVOT {
                out.push((c, x));
                continue;
            }
            for (c2, y) in &self.rows[r as usize].entries[1..] {
                let c2i = *c2 as usize;
                field.sub_mul_assign(&mut s.acc[c2i], &x, y);
                if !s.queued[c2i] {
                    s.queued[c2i] = true;
                    s.heap.push(Reverse(*c2));
                }
            }
        }
        SparseVector { entries: out }
    }

    /// Remainder of `v` after reduction against the echelon rows.
    pub fn reduce(&self, v: &SparseVector<F::Elem>) -> Result<SparseVector<F::Elem>, LinalgError> {
        self.check(v)?;
        if self.full {
            return Ok(SparseVector::default());
        }
        let field = &self.field;
        let mut acc: BTreeMap<u32, F::Elem> = v.entries.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((c, x)) = acc.pop_first() {
            if field.is_zero(&x) {
                continue;
            }
            let r = self.pivot_row[c as usize];
            if r == NO_PIVOT {
                out.push((c, x));
                continue;
            }
            for (c2, y) in &self.rows[r as usize].entries[1..] {
                let slot = acc.entry(*c2).or_insert_with(|| field.zero());
                field.sub_mul_assign(slot, &x, y);
            }
        }
        Ok(SparseVector { entries: out })
    }

    /// Whether `v` lies in the space.
    pub fn contains(&self, v: &SparseVector<F::Elem>) -> Result<bool, LinalgError> {
        self.check(v)?;
        if self.full {
            return Ok(true);
        }
        let field = &self.field;
        let mut acc: BTreeMap<u32, F::Elem> = v.entries.iter().cloned().collect();
        while let Some((c, x)) = acc.pop_first() {
            if field.is_zero(&x) {
                continue;
            }
            let r = self.pivot_row[c as usize];
            if r == NO_PIVOT {
                return Ok(false);
            }
            for (c2, y) in &self.rows[r as usize].entries[1..] {
                let slot = acc.entry(*c2).or_insert_with(|| field.zero());
                field.sub_mul_assign(slot, &x, y);
            }
        }
        Ok(true)
    }

    pub fn contains_dense(&self, v: &[F::Elem]) -> Result<bool, LinalgError> {
        if v.len() != self.ambient_dim {
            return Err(LinalgError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        self.contains(&SparseVector::from_dense(&self.field, v))
    }

    /// Basis in reduced row echelon form, sorted by pivot.
    pub fn reduced_basis(&self) -> Vec<SparseVector<F::Elem>> {
        if self.full {
            return (0..self.ambient_dim)
                .map(|i| SparseVector { entries: vec![(i as u32, self.field.one())] })
                .collect();
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| Reverse(self.rows[r].leading().unwrap()));
        // Rows with larger pivots are reduced first, so each later row only
        // needs one pass against already reduced rows.
        let mut reduced: Vec<Option<SparseVector<F::Elem>>> = vec![None; self.rows.len()];
        for &r in &order {
            let row = &self.rows[r];
            let mut acc: BTreeMap<u32, F::Elem> = row.entries[1..].iter().cloned().collect();
            let mut out = vec![row.entries[0].clone()];
            while let Some((c, x)) = acc.pop_first() {
                if self.field.is_zero(&x) {
                    continue;
                }
                let pr = self.pivot_row[c as usize];
                if pr == NO_PIVOT {
                    out.push((c, x));
                    continue;
                }
                let other = reduced[pr as usize].as_ref().expect("larger pivots reduced first");
                for (c2, y) in &other.entries[1..] {
                    let slot = acc.entry(*c2).or_insert_with(|| self.field.zero());
                    self.field.sub_mul_assign(slot, &x, y);
                }
            }
            reduced[r] = Some(SparseVector { entries: out });
        }
        let mut rows: Vec<_> = reduced.into_iter().map(Option::unwrap).collect();
        rows.sort_by_key(|r| r.leading().unwrap());
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{PrimeField, Rational, Rationals};
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn qmat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows[0].len();
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_examples() {
        let id = qmat(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(rref_rank(&Rationals, &id).1, 3);
        let m = qmat(&[&[1, 0, 0, 1], &[0, 1, 1, 0], &[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let (r, rank) = rref_rank(&Rationals, &m);
        assert_eq!(rank, 3);
        assert!(r.row(3).iter().all(|x| *x == q(0)));
        let z = qmat(&[&[0, 0], &[0, 0]]);
        assert_eq!(rref_rank(&Rationals, &z).1, 0);
    }

    #[test]
    fn rref_shape() {
        let m = qmat(&[&[2, 4, 1], &[1, 2, 0]]);
        let (r, rank) = rref_rank(&Rationals, &m);
        assert_eq!(rank, 2);
        assert_eq!(r.row(0), &[q(1), q(2), q(0)]);
        assert_eq!(r.row(1), &[q(0), q(0), q(1)]);
    }

    #[test]
    fn rowspace_examples() {
        let mut s = RowSpace::new(Rationals, 4);
        assert!(s.insert_dense(&[q(1), q(0), q(0), q(0)]).unwrap());
        assert_eq!(s.dim(), 1);
        assert!(!s.insert_dense(&[q(3), q(0), q(0), q(0)]).unwrap());
        assert!(!s.contains_dense(&[q(0), q(1), q(0), q(0)]).unwrap());

        let mut t = RowSpace::new(Rationals, 2);
        assert!(t.insert_dense(&[q(1), q(1)]).unwrap());
        assert!(t.contains_dense(&[q(2), q(2)]).unwrap());
        assert!(t.insert_dense(&[q(1), q(-1)]).unwrap());
        assert_eq!(t.dim(), 2);
        assert!(t.is_full());
        assert!(t.contains_dense(&[q(5), q(-7)]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let mut s = RowSpace::new(Rationals, 3);
        assert_eq!(
            s.insert_dense(&[q(1)]),
            Err(LinalgError::DimensionMismatch { expected: 3, got: 1 })
        );
        let v = SparseVector::from_entries(&Rationals, [(5, q(1))]);
        assert!(s.insert(&v).is_err());
        assert!(s.contains(&v).is_err());
    }

    #[test]
    fn reduced_basis_is_rref() {
        let mut s = RowSpace::new(Rationals, 4);
        s.insert_dense(&[q(0), q(1), q(1), q(1)]).unwrap();
        s.insert_dense(&[q(0), q(0), q(1), q(2)]).unwrap();
        s.insert_dense(&[q(1), q(1), q(0), q(0)]).unwrap();
        let b = s.reduced_basis();
        let pivots: Vec<u32> = b.iter().map(|r| r.leading().unwrap()).collect();
        assert_eq!(pivots, vec![0, 1, 2]);
        for row in &b {
            for (c, x) in row.entries() {
                if pivots.contains(c) && *c != row.leading().unwrap() {
                    panic!("pivot column {c} not cleared: {x}");
                }
            }
        }
    }

    fn small_matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            (Just(c), proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
        })
    }

    proptest! {
        #[test]
        fn rowspace_rank_matches_dense((cols, rows) in small_matrix()) {
            let m = Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap();
            let (_, rank) = rref_rank(&Rationals, &m);
            let mut s = RowSpace::new(Rationals, cols);
            for r in 0..m.rows() {
                s.insert_dense(m.row(r)).unwrap();
            }
            prop_assert_eq!(s.dim(), rank);
            for r in 0..m.rows() {
                prop_assert!(s.contains_dense(m.row(r)).unwrap());
            }
        }

        #[test]
        fn rank_is_permutation_invariant((cols, mut rows) in small_matrix()) {
            let to_m = |rows: &Vec<Vec<i64>>| Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap();
            let r1 = rref_rank(&Rationals, &to_m(&rows)).1;
            rows.reverse();
            let r2 = rref_rank(&Rationals, &to_m(&rows)).1;
            prop_assert_eq!(r1, r2);
            let mut s = RowSpace::new(Rationals, cols);
            for r in &rows {
                s.insert_dense(&r.iter().map(|&x| q(x)).collect::<Vec<_>>()).unwrap();
            }
            prop_assert_eq!(s.dim(), r1);
        }

        #[test]
        fn modular_rank_never_exceeds_rational((cols, rows) in small_matrix(), pi in 0usize..4) {
            let p = [2u64, 3, 5, 7][pi];
            let gf = PrimeField::new(p).unwrap();
            let mq = Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap();
            let mp = Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| gf.from_i64(x)).collect()).collect()).unwrap();
            prop_assert!(rref_rank(&gf, &mp).1 <= rref_rank(&Rationals, &mq).1);
        }
    }
}
