//! Exact computations with finite group and dual group actions on q-skew
//! polynomial rings.
//!
//! The end product is the pertinency `p(R, H) = GKdim R - GKdim (R#H)/(e)`
//! of an action, computed from the graded pieces of the ideal generated by
//! the integral idempotent `e` in the smash product. Along the way the
//! crate provides trace series, reflection numbers, homological
//! determinants and Molien series.
//!
//! - [`coeff`]: `Q`, cyclotomic fields and prime fields behind one [`coeff::Field`] trait.
//! - [`linalg`]: exact row reduction and incremental sparse row spaces.
//! - [`series`]: truncated series, Padé reconstruction and growth estimates.
//! - [`algebra`]: skew polynomial rings, their elements and gradings.
//! - [`group`]: monomial automorphisms, finite groups and trace-based invariants.
//! - [`smash`]: smash products, the ideal `(e)` and pertinency reports.
//!
//! ```
//! use std::sync::Arc;
//! use pertinency::algebra::SkewPolyRing;
//! use pertinency::coeff::Rationals;
//! use pertinency::group::cyclic_permutation_group;
//! use pertinency::smash::{quotient_hilbert, SmashAlgebra};
//!
//! let ring = Arc::new(SkewPolyRing::minus_one(Rationals, 2));
//! let w = Arc::new(cyclic_permutation_group(&ring)?);
//! let b = SmashAlgebra::group(ring, w)?;
//! assert_eq!(quotient_hilbert(&b, 3)?, vec![1, 1, 0, 0]);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod coeff;
pub mod linalg;
pub mod series;
pub mod algebra;
pub mod group;
pub mod smash;

// Snippets in the guide run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/rings.md")]
    mod rings {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/smash.md")]
    mod smash {}
    #[doc = include_str!("../../../book/src/pertinency.md")]
    mod pertinency {}
    #[doc = include_str!("../../../book/src/fourier.md")]
    mod fourier {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
