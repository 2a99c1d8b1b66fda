//! Isotypic split of the ideal `(e)` into left ideals of `R`.
//!
//! For `H = kG` with `G` cyclic of order `N`, `N` invertible and a primitive
//! `N`-th root of unity `ω` in the field, the idempotents `ε_j` of `kG` split
//! `B = ⊕_j B ε_j` with `B ε_j ≅ R` and `I ε_j ≅ R · π_j(R)`, where
//! `π_j(r) = Σ_k ω^{jk} s^k(r)`. For `H = (kG)°` the idempotents `p_b` give
//! `I (1 # p_b) ≅ R · R_{b^{-1}}`. Either way `h(d) = Σ_j codim (J_j)_d`, and
//! each `J_j` lives in `R_d` instead of `B_d`.

use rayon::prelude::*;

use super::{HopfPart, SmashAlgebra, SmashError};
use crate::algebra::{degree_basis, graded_dimension, Monomial, MonomialIndexer, SkewPolyRing};
use crate::coeff::Field;
use crate::linalg::{RowSpace, SparseVector};

const NONE: u32 = u32::MAX;

/// Whether [`quotient_hilbert_split`] applies over the algebra's field.
pub fn isotypic_split_available<F: Field>(b: &SmashAlgebra<F>) -> bool {
    match b.hopf() {
        HopfPart::Dual(_) => true,
        HopfPart::Group(g) => {
            let field = b.field();
            g.cyclic_generator().is_some()
                && g.inverse_order().is_ok()
                && field.primitive_root_of_unity(g.order() as u64).is_some()
        }
    }
}

/// Number of left ideals the quotient splits into.
pub fn channel_count<F: Field>(b: &SmashAlgebra<F>) -> usize {
    b.hopf_dim()
}

/// Generators of `J_channel` in degree `d`.
enum Generators<E> {
    /// Orbit representatives: `(index, coefficient)` of `s^k(m)` for each `k`.
    Orbits { omega: E, orbits: Vec<Vec<(u32, E)>> },
    /// Monomials by `G`-degree class.
    Classes(Vec<Vec<u32>>),
}

fn degree_generators<F: Field>(b: &SmashAlgebra<F>, basis: &[Monomial], indexer: &MonomialIndexer) -> Generators<F::Elem> {
    let field = b.field();
    match b.hopf() {
        HopfPart::Group(g) => {
            let s = g.cyclic_generator().expect("split requires a cyclic group");
            let big_n = g.order();
            let powers: Vec<usize> = std::iter::successors(Some(0usize), |&k| Some(g.product(k, s)))
                .take(big_n)
                .collect();
            let omega = field.primitive_root_of_unity(big_n as u64).expect("split requires roots of unity");
            let mut orbits = Vec::new();
            for (idx, m) in basis.iter().enumerate() {
                let images: Vec<(u32, F::Elem)> = powers
                    .iter()
                    .map(|&k| {
                        let (img, c) = b.ring().monomial_image(g.element(k), m);
                        (indexer.index(img.exponents()) as u32, c)
                    })
                    .collect();
                if images.iter().all(|(i, _)| *i as usize >= idx) {
                    orbits.push(images);
                }
            }
            Generators::Orbits { omega, orbits }
        }
        HopfPart::Dual(gr) => {
            let group = gr.group();
            let mut classes = vec![Vec::new(); group.order()];
            for (idx, m) in basis.iter().enumerate() {
                // m # p_b lies in e B exactly when deg(m) = b^{-1}.
                let b_idx = group.index_of(&group.inverse(&gr.monomial_degree(m.exponents())));
                classes[b_idx].push(idx as u32);
            }
            Generators::Classes(classes)
        }
    }
}

fn channel_vectors<F: Field>(field: &F, gens: &Generators<F::Elem>, j: usize) -> Vec<SparseVector<F::Elem>> {
    match gens {
        Generators::Orbits { omega, orbits } => {
            let weights: Vec<F::Elem> = {
                let step = field.pow(omega, j as u64);
                let n = orbits.first().map_or(0, Vec::len);
                std::iter::successors(Some(field.one()), |w| Some(field.mul(w, &step))).take(n).collect()
            };
            orbits
                .iter()
                .map(|images| {
                    SparseVector::from_entries(
                        field,
                        images.iter().zip(&weights).map(|((i, c), w)| (*i, field.mul(c, w))),
                    )
                })
                .collect()
        }
        Generators::Classes(classes) => classes[j]
            .iter()
            .map(|&i| SparseVector::from_sorted_unchecked(vec![(i, field.one())]))
            .collect(),
    }
}

/// Degree slice of a left ideal, in reduced row echelon form.
///
/// Each row starts with its pivot (coefficient 1) and has its remaining
/// entries at non-pivot columns, all after the pivot.
struct Slice<E> {
    full: bool,
    rows: Vec<Vec<(u32, E)>>,
}

impl<E> Slice<E> {
    fn empty() -> Self {
        Slice { full: false, rows: Vec::new() }
    }
}

/// `x_i * row`, sorted by column.
fn left_multiply<F: Field>(
    ring: &SkewPolyRing<F>,
    i: usize,
    row: &[(u32, F::Elem)],
    basis_prev: &[Monomial],
    indexer: &MonomialIndexer,
    exps: &mut Vec<u32>,
) -> Vec<(u32, F::Elem)> {
    let field = ring.field();
    row.iter()
        .map(|(c, x)| {
            let src = basis_prev[*c as usize].exponents();
            exps.clear();
            exps.extend_from_slice(src);
            exps[i] += 1;
            let coeff = ring.left_generator_coeff(i, src);
            (indexer.index(exps) as u32, field.mul(x, &coeff))
        })
        .collect()
}

/// Sparse accumulator over a fixed number of columns.
struct Accumulator<E> {
    acc: Vec<E>,
    touched: Vec<u32>,
    mark: Vec<bool>,
}

impl<E: Clone> Accumulator<E> {
    fn new<F: Field<Elem = E>>(field: &F, len: usize) -> Self {
        Accumulator { acc: vec![field.zero(); len], touched: Vec::new(), mark: vec![false; len] }
    }

    fn add<F: Field<Elem = E>>(&mut self, field: &F, c: u32, x: &E) {
        let ci = c as usize;
        self.acc[ci] = field.add(&self.acc[ci], x);
        self.touch(c);
    }

    fn sub_mul<F: Field<Elem = E>>(&mut self, field: &F, c: u32, x: &E, y: &E) {
        field.sub_mul_assign(&mut self.acc[c as usize], x, y);
        self.touch(c);
    }

    fn touch(&mut self, c: u32) {
        if !self.mark[c as usize] {
            self.mark[c as usize] = true;
            self.touched.push(c);
        }
    }

    /// Nonzero entries in column order; resets the accumulator.
    fn drain<F: Field<Elem = E>>(&mut self, field: &F) -> Vec<(u32, E)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            let ci = c as usize;
            self.mark[ci] = false;
            let x = std::mem::replace(&mut self.acc[ci], field.zero());
            if !field.is_zero(&x) {
                out.push((c, x));
            }
        }
        self.touched.clear();
        out
    }
}

/// `(J_d)` from `J_{d-1}` and the degree-`d` generators.
fn next_slice<F: Field>(
    ring: &SkewPolyRing<F>,
    prev: &Slice<F::Elem>,
    basis_prev: &[Monomial],
    indexer: &MonomialIndexer,
    amb: usize,
    gens: Vec<SparseVector<F::Elem>>,
) -> Slice<F::Elem> {
    if prev.full || amb == 0 {
        return Slice { full: true, rows: Vec::new() };
    }
    let field = ring.field();
    let n = ring.nvars();
    let mut exps = Vec::with_capacity(n);

    // Products x_i * row have leading column pivot(row) + e_i. One product per
    // leading column becomes a pivot row; the others are reduced later.
    let mut chosen = vec![NONE; amb];
    let mut extras: Vec<(u32, u8)> = Vec::new();
    for (r, row) in prev.rows.iter().enumerate() {
        let p = basis_prev[row[0].0 as usize].exponents();
        for i in 0..n {
            exps.clear();
            exps.extend_from_slice(p);
            exps[i] += 1;
            let mu = indexer.index(&exps);
            if chosen[mu] == NONE {
                chosen[mu] = (r * n + i) as u32;
            } else {
                extras.push((r as u32, i as u8));
            }
        }
    }

    // Inserting pivot rows from the last column backwards keeps every row
    // reduced: a new pivot precedes all columns of the rows already present.
    let mut rows: Vec<Vec<(u32, F::Elem)>> = Vec::new();
    let mut pivot_row = vec![NONE; amb];
    let mut acc = Accumulator::new(field, amb);
    for mu in (0..amb).rev() {
        let code = chosen[mu];
        if code == NONE {
            continue;
        }
        let (r, i) = (code as usize / n, code as usize % n);
        let v = left_multiply(ring, i, &prev.rows[r], basis_prev, indexer, &mut exps);
        debug_assert_eq!(v[0].0 as usize, mu);
        let lead_inv = field.inv(&v[0].1).expect("leading coefficient is nonzero");
        for (c, x) in &v[1..] {
            let x = field.mul(x, &lead_inv);
            let pr = pivot_row[*c as usize];
            if pr == NONE {
                acc.add(field, *c, &x);
            } else {
                for (c2, y) in &rows[pr as usize][1..] {
                    acc.sub_mul(field, *c2, &x, y);
                }
            }
        }
        let mut row = vec![(mu as u32, field.one())];
        row.extend(acc.drain(field));
        pivot_row[mu] = rows.len() as u32;
        rows.push(row);
    }

    // Remaining candidates only matter modulo the pivot rows, that is, in the
    // coordinates of the non-pivot columns.
    let free: Vec<u32> = (0..amb as u32).filter(|&c| pivot_row[c as usize] == NONE).collect();
    if free.is_empty() {
        return Slice { full: true, rows: Vec::new() };
    }
    let mut free_pos = vec![NONE; amb];
    for (k, &c) in free.iter().enumerate() {
        free_pos[c as usize] = k as u32;
    }
    let mut small = RowSpace::new(field.clone(), free.len());
    let mut small_acc = Accumulator::new(field, free.len());
    let project = |v: &[(u32, F::Elem)], small_acc: &mut Accumulator<F::Elem>| {
        for (c, x) in v {
            let pr = pivot_row[*c as usize];
            if pr == NONE {
                small_acc.add(field, free_pos[*c as usize], x);
            } else {
                for (c2, y) in &rows[pr as usize][1..] {
                    small_acc.sub_mul(field, free_pos[*c2 as usize], x, y);
                }
            }
        }
        SparseVector::from_sorted_unchecked(small_acc.drain(field))
    };
    for g in &gens {
        let res = project(g.entries(), &mut small_acc);
        small.insert(&res).expect("projection has the right length");
        if small.is_full() {
            return Slice { full: true, rows: Vec::new() };
        }
    }
    for &(r, i) in &extras {
        let v = left_multiply(ring, i as usize, &prev.rows[r as usize], basis_prev, indexer, &mut exps);
        let res = project(&v, &mut small_acc);
        small.insert(&res).expect("projection has the right length");
        if small.is_full() {
            return Slice { full: true, rows: Vec::new() };
        }
    }
    if small.dim() == 0 {
        return Slice { full: false, rows };
    }

    // New pivots among the free columns: clear them from the existing rows.
    let reduced = small.reduced_basis();
    let mut new_row_of = vec![NONE; free.len()];
    for (k, r) in reduced.iter().enumerate() {
        new_row_of[r.leading().unwrap() as usize] = k as u32;
    }
    let new_rows: Vec<Vec<(u32, F::Elem)>> = reduced
        .iter()
        .map(|r| r.entries().iter().map(|(k, x)| (free[*k as usize], x.clone())).collect())
        .collect();
    for row in rows.iter_mut() {
        if !row[1..].iter().any(|(c, _)| new_row_of[free_pos[*c as usize] as usize] != NONE) {
            continue;
        }
        for (c, x) in &row[1..] {
            let k = new_row_of[free_pos[*c as usize] as usize];
            if k == NONE {
                acc.add(field, *c, x);
            } else {
                for (c2, y) in &new_rows[k as usize][1..] {
                    acc.sub_mul(field, *c2, x, y);
                }
            }
        }
        let lead = row[0].clone();
        *row = std::iter::once(lead).chain(acc.drain(field)).collect();
    }
    rows.extend(new_rows);
    Slice { full: rows.len() == amb, rows }
}

/// `codim (J_j)_d` for `d = 0..=max_degree`.
fn channel_codims<F: Field>(b: &SmashAlgebra<F>, j: usize, max_degree: u32, indexer: &MonomialIndexer) -> Vec<u64> {
    let ring = b.ring();
    let n = ring.nvars();
    let mut out = Vec::with_capacity(max_degree as usize + 1);
    let mut prev = Slice::empty();
    let mut basis_prev: Vec<Monomial> = Vec::new();
    for d in 0..=max_degree {
        let amb = graded_dimension(n, d) as usize;
        if prev.full {
            out.push(0);
            continue;
        }
        let basis = degree_basis(n, d);
        let gens = channel_vectors(b.field(), &degree_generators(b, &basis, indexer), j);
        let slice = next_slice(ring, &prev, &basis_prev, indexer, amb, gens);
        out.push(if slice.full { 0 } else { (amb - slice.rows.len()) as u64 });
        prev = slice;
        basis_prev = basis;
    }
    out
}

/// `h(d) = Σ_j codim (J_j)_d`, channels computed in parallel.
pub fn quotient_hilbert_split<F: Field>(b: &SmashAlgebra<F>, max_degree: u32) -> Result<Vec<u64>, SmashError> {
    if !isotypic_split_available(b) {
        if let HopfPart::Group(g) = b.hopf() {
            g.inverse_order().map_err(|_| SmashError::OrderNotInvertible(g.order()))?;
        }
        return Err(SmashError::SplitUnavailable);
    }
    let indexer = MonomialIndexer::new(b.ring().nvars(), max_degree);
    let per_channel: Vec<Vec<u64>> = (0..channel_count(b))
        .into_par_iter()
        .map(|j| channel_codims(b, j, max_degree, &indexer))
        .collect();
    Ok((0..=max_degree as usize).map(|d| per_channel.iter().map(|c| c[d]).sum()).collect())
}
