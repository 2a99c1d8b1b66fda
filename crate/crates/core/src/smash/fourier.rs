//! The eigenbasis `y_j = Σ_i ξ^{ij} x_i` of the cyclic shift on
//! `k_{-1}[x_1, ..., x_n]` over `Q(ξ_n)`, and the identities it satisfies in
//! `R # kW` modulo the ideal `(e)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ideal_ladder, ideal_membership, SmashAlgebra, SmashElement, SmashError};
use crate::algebra::{AlgebraElement, Monomial, SkewPolyRing};
use crate::coeff::{Cyclotomic, Field};
use crate::group::cyclic_permutation_group;

/// `y_j` and `Y_j = Σ_i ξ^{ij} x_i^2` for `j = 0..n`.
#[derive(Debug, Clone)]
pub struct FourierBasis {
    ring: Arc<SkewPolyRing<Cyclotomic>>,
    y: Vec<AlgebraElement<Cyclotomic>>,
    squares: Vec<AlgebraElement<Cyclotomic>>,
}

impl FourierBasis {
    pub fn new(n: usize) -> Result<Self, SmashError> {
        let field = Cyclotomic::new(n as u32)?;
        let ring = Arc::new(SkewPolyRing::minus_one(field.clone(), n));
        let y = (0..n as i64)
            .map(|j| {
                let c: Vec<_> = (1..=n as i64).map(|i| field.root_power(i * j)).collect();
                AlgebraElement::linear(&ring, &c)
            })
            .collect();
        let squares = (0..n as i64)
            .map(|j| {
                let mut e = AlgebraElement::zero(&ring);
                for i in 0..n {
                    let mut ex = vec![0; n];
                    ex[i] = 2;
                    e.add_term(Monomial::new(ex), field.root_power((i as i64 + 1) * j));
                }
                e
            })
            .collect();
        Ok(FourierBasis { ring, y, squares })
    }

    pub fn ring(&self) -> &Arc<SkewPolyRing<Cyclotomic>> {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// `y_j`, index taken modulo `n`.
    pub fn y(&self, j: i64) -> &AlgebraElement<Cyclotomic> {
        &self.y[j.rem_euclid(self.n() as i64) as usize]
    }

    /// `Y_j`, index taken modulo `n`.
    pub fn big_y(&self, j: i64) -> &AlgebraElement<Cyclotomic> {
        &self.squares[j.rem_euclid(self.n() as i64) as usize]
    }
}

/// Outcome of the identity suite for one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourierSuite {
    pub n: usize,
    /// `y_i y_j + y_j y_i = 2 Y_{i+j}` for every pair.
    pub anticommutators: bool,
    /// `(y_s y_{s-1})^n # 1 ∈ I` for each `s`; only for `n = 2^d`.
    pub pair_powers: Option<Vec<bool>>,
    /// `y_s^{2(d+1)} # 1 ∈ I` for each `s`; only for `n = 2^d`.
    pub square_powers: Option<Vec<bool>>,
}

impl FourierSuite {
    pub fn all_hold(&self) -> bool {
        self.anticommutators
            && self.pair_powers.iter().flatten().all(|&b| b)
            && self.square_powers.iter().flatten().all(|&b| b)
    }
}

/// Runs the suite over `Q(ξ_n)` in `R # kW` with `W = <σ>`.
///
/// The membership checks build the ideal ladder up to degree `2n`, so this
/// is only practical for small `n`.
pub fn fourier_suite(n: usize) -> Result<FourierSuite, SmashError> {
    let basis = FourierBasis::new(n)?;
    let ring = basis.ring();
    let field = ring.field();
    let two = field.from_i64(2);
    let mut anticommutators = true;
    for i in 0..n as i64 {
        for j in i..n as i64 {
            let lhs = basis.y(i).mul(basis.y(j))?.add(&basis.y(j).mul(basis.y(i))?)?;
            anticommutators &= lhs == basis.big_y(i + j).scale(&two);
        }
    }
    if !n.is_power_of_two() || n < 2 {
        return Ok(FourierSuite { n, anticommutators, pair_powers: None, square_powers: None });
    }
    let d = n.trailing_zeros();
    let group = cyclic_permutation_group(ring)?;
    let b = Arc::new(SmashAlgebra::group(ring.clone(), Arc::new(group))?);
    let ladder = ideal_ladder(&b, (2 * n as u32).max(2 * (d + 1)))?;
    let member = |f: &AlgebraElement<Cyclotomic>| ideal_membership(&SmashElement::from_ring(&b, f), &ladder);
    let mut pair_powers = Vec::with_capacity(n);
    let mut square_powers = Vec::with_capacity(n);
    for s in 0..n as i64 {
        let pair = basis.y(s).mul(basis.y(s - 1))?;
        pair_powers.push(member(&pair.pow(n as u32))?);
        square_powers.push(member(&basis.y(s).pow(2 * (d + 1)))?);
    }
    Ok(FourierSuite { n, anticommutators, pair_powers: Some(pair_powers), square_powers: Some(square_powers) })
}
