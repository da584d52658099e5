//! The `(p+1) × q` operator matrix `□_{p,q}` (rows `∂/∂ζ_{i·}` for
//! `i ≤ p`, then `∂/∂v̄_·`) and its 2×2 minors acting on sections.

use crate::error::{Error, Result};
use crate::section::DiskSection;

/// A 2×2 minor of `□_{p,q}`, by 1-based row and column pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Minor {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl Minor {
    pub fn new(rows: (usize, usize), cols: (usize, usize)) -> Self {
        Self { rows, cols }
    }
}

/// `∂/∂ζ_{ij}` or `∂/∂v̄_j` (0-based).
#[derive(Debug, Clone, Copy)]
enum Entry {
    Zeta(usize, usize),
    VBar(usize),
}

fn entry(p: usize, row: usize, col: usize) -> Entry {
    if row == p + 1 {
        Entry::VBar(col - 1)
    } else {
        Entry::Zeta(row - 1, col - 1)
    }
}

fn apply_entry(phi: &DiskSection, e: Entry) -> DiskSection {
    match e {
        Entry::Zeta(i, j) => phi.map_components(|_, poly| poly.derivative(i, j)),
        Entry::VBar(j) => {
            // Stored convention: v̄^η/η! differentiates to v̄^{η−e_j}/(η−e_j)!.
            let mut out = DiskSection::zero(phi.p(), phi.q(), phi.n() - 1);
            for (eta, poly) in phi.components() {
                if eta.get(j) > 0 {
                    let lower = eta.with(j, eta.get(j) - 1);
                    out.insert_unchecked(lower, poly.clone());
                }
            }
            out
        }
    }
}

fn validate(phi: &DiskSection, m: &Minor) -> Result<()> {
    let (p, q) = (phi.p(), phi.q());
    let (r1, r2) = m.rows;
    let (c1, c2) = m.cols;
    for r in [r1, r2] {
        if r == 0 || r > p + 1 {
            return Err(Error::IndexOutOfRange(format!("row {r} of a {}×{q} operator matrix", p + 1)));
        }
    }
    for c in [c1, c2] {
        if c == 0 || c > q {
            return Err(Error::IndexOutOfRange(format!("column {c} of a {}×{q} operator matrix", p + 1)));
        }
    }
    if r1 == r2 || c1 == c2 {
        return Err(Error::InvalidArgument("a 2×2 minor needs distinct rows and distinct columns".into()));
    }
    Ok(())
}

/// `(D_{r₁c₁} D_{r₂c₂} − D_{r₁c₂} D_{r₂c₁}) φ`. The output degree is `n − 1`
/// when the `v̄` row is involved and `n` otherwise.
pub fn apply_minor(phi: &DiskSection, minor: &Minor) -> Result<DiskSection> {
    validate(phi, minor)?;
    let p = phi.p();
    let (r1, r2) = minor.rows;
    let (c1, c2) = minor.cols;
    let first = apply_entry(&apply_entry(phi, entry(p, r2, c2)), entry(p, r1, c1));
    let second = apply_entry(&apply_entry(phi, entry(p, r2, c1)), entry(p, r1, c2));
    first.sub(&second)
}

/// Every 2×2 minor of `□_{p,q}` with `r₁ < r₂` and `c₁ < c₂`.
pub fn all_minors(p: usize, q: usize) -> Vec<Minor> {
    let mut out = Vec::new();
    for r1 in 1..=p + 1 {
        for r2 in r1 + 1..=p + 1 {
            for c1 in 1..=q {
                for c2 in c1 + 1..=q {
                    out.push(Minor::new((r1, r2), (c1, c2)));
                }
            }
        }
    }
    out
}

/// The minors that fail to annihilate `φ`.
pub fn failing_minors(phi: &DiskSection) -> Result<Vec<Minor>> {
    let mut bad = Vec::new();
    for m in all_minors(phi.p(), phi.q()) {
        if !apply_minor(phi, &m)?.is_zero() {
            bad.push(m);
        }
    }
    Ok(bad)
}

/// True iff every 2×2 minor sends `φ` to the exact zero section.
pub fn annihilates(phi: &DiskSection) -> Result<bool> {
    Ok(failing_minors(phi)?.is_empty())
}

/// Convenience for the `v̄`-row minor `∂ζ_{c₁}∂v̄_{c₂} − ∂ζ_{c₂}∂v̄_{c₁}` at
/// `p = 1`.
pub fn ball_minor(c1: usize, c2: usize) -> Minor {
    Minor::new((1, 2), (c1, c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockPoly;
    use crate::index::{MatrixIndex, MultiIndex};
    use crate::scalar::from_int;
    use crate::transform::{coefficient, phi, phi_ball};

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn row(v: &[u32]) -> MatrixIndex {
        MatrixIndex::from_row(&mi(v))
    }

    #[test]
    fn minor_counts() {
        assert_eq!(all_minors(1, 1).len(), 0);
        assert_eq!(all_minors(1, 3).len(), 3);
        assert_eq!(all_minors(2, 2).len(), 3);
        assert_eq!(all_minors(2, 3).len(), 9);
    }

    #[test]
    fn worked_example_is_annihilated() {
        let s = phi(&FockPoly::monomial(mi(&[3]), mi(&[1, 3, 1]))).unwrap();
        assert!(annihilates(&s).unwrap());
        for m in all_minors(1, 3) {
            let out = apply_minor(&s, &m).unwrap();
            assert_eq!(out.n(), 1);
            assert!(out.is_zero());
        }
    }

    #[test]
    fn hand_computed_minors() {
        let s = phi_ball(&mi(&[1, 1]), 1).unwrap();
        assert!(apply_minor(&s, &ball_minor(1, 2)).unwrap().is_zero());
        let mut lone = DiskSection::zero(1, 2, 1);
        lone.add_term(mi(&[0, 1]), row(&[1, 0]), from_int(1)).unwrap();
        let out = apply_minor(&lone, &ball_minor(1, 2)).unwrap();
        assert_eq!(out.n(), 0);
        assert_eq!(out.num_terms(), 1);
        assert_eq!(coefficient(&out, &mi(&[0, 0]), &row(&[0, 0])), from_int(1));
        assert!(!annihilates(&lone).unwrap());
    }

    #[test]
    fn pure_zeta_minors_keep_degree() {
        let f = FockPoly::monomial(mi(&[1, 1]), mi(&[2, 1]));
        let s = phi(&f).unwrap();
        let out = apply_minor(&s, &Minor::new((1, 2), (1, 2))).unwrap();
        assert_eq!(out.n(), s.n());
        assert!(annihilates(&s).unwrap());
    }

    #[test]
    fn rejects_bad_indices() {
        let s = DiskSection::zero(1, 2, 1);
        assert!(apply_minor(&s, &Minor::new((1, 3), (1, 2))).is_err());
        assert!(apply_minor(&s, &Minor::new((1, 2), (1, 3))).is_err());
        assert!(apply_minor(&s, &Minor::new((1, 1), (1, 2))).is_err());
        assert!(apply_minor(&s, &Minor::new((1, 2), (2, 2))).is_err());
    }
}
