//! Exact transform from the graded Fock spaces `F_n^{p,q}` to polynomial
//! sections over the generalized unit disk `D_{p,q}`, with its inversion and
//! invariant pairing at `p = 1`, the 2×2-minor operators cutting out the
//! image, and the `U(p,q)` actions on both sides.
//!
//! ```
//! use ladder_transform::display::format_section;
//! use ladder_transform::fock::FockPoly;
//! use ladder_transform::index::MultiIndex;
//! use ladder_transform::inversion::{invert, pairing};
//! use ladder_transform::operators::l_op;
//! use ladder_transform::scalar::from_int;
//! use ladder_transform::transform::phi;
//!
//! let f = FockPoly::monomial(MultiIndex::new(vec![3]), MultiIndex::new(vec![1, 3, 1]));
//! let s = phi(&f)?;
//! assert_eq!(format_section(&l_op(&s)?), "6 ζ₂²ζ₃ v̄₁v̄₂");
//! assert_eq!(invert(&s)?, f);
//! assert_eq!(pairing(&s, &s)?, from_int(36));
//! # Ok::<(), ladder_transform::error::Error>(())
//! ```

pub mod diffops;
pub mod display;
pub mod error;
pub mod fock;
pub mod group;
pub mod index;
pub mod inversion;
pub mod json;
pub mod moments;
pub mod operators;
pub mod scalar;
pub mod section;
pub mod transform;
