//! Inversion of `Φₙ`, the invariant pairing on its image, and the exact
//! kernel of the minor operators, all at `p = 1`.
//!
//! The `t`-limits are taken symbolically: every term depends on `t` through
//! `t^{k+q}`, whose `q`-th derivative at `t = 1` is `(k+q)!/k!`.

mod nullspace;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::diffops::{all_minors, apply_minor};
use crate::error::{Error, Result};
use crate::fock::FockPoly;
use crate::index::{enumerate_weight, MatrixIndex, MultiIndex};
use crate::operators::l_op;
use crate::scalar::{self, ExactScalar};
use crate::section::DiskSection;

pub use nullspace::nullspace;

fn require_ball(phi: &DiskSection) -> Result<()> {
    if phi.p() != 1 {
        return Err(Error::Unsupported(format!(
            "inversion and pairing are only established for p = 1 (got p = {})",
            phi.p()
        )));
    }
    Ok(())
}

fn inv_factorial(k: u32) -> BigRational {
    BigRational::new(1.into(), scalar::factorial(k))
}

/// Recovers `f` from `φ = Φₙ f`. Each absolute term `c ζ^γ v̄^η` of `Lφ`
/// contributes `c/|γ|! z₁^{|γ|} z̄_S^{γ+η}`.
pub fn invert(phi: &DiskSection) -> Result<FockPoly> {
    require_ball(phi)?;
    if phi.n() < 0 {
        return Err(Error::InvalidArgument(format!("inversion needs n >= 0, got {}", phi.n())));
    }
    let mut out = FockPoly::zero(1, phi.q());
    for (eta, poly) in l_op(phi)?.components() {
        let eta_inv = BigRational::new(1.into(), eta.factorial());
        for (gamma, c) in poly.terms() {
            let g = gamma.row(0);
            let k = g.modulus();
            let w = scalar::real(&eta_inv * inv_factorial(k));
            out.add_term(MultiIndex::new(vec![k]), g.add(eta), c * w)?;
        }
    }
    Ok(out)
}

/// `((φ₁, φ₂))`: pairs absolute terms `c₁ ζ^γ v̄^η` of `Lφ₁` with matching
/// terms `c₂ ζ^γ v̄^η` of `φ₂`, weighted by `η! γ!/|γ|!`.
pub fn pairing(phi1: &DiskSection, phi2: &DiskSection) -> Result<ExactScalar> {
    require_ball(phi1)?;
    require_ball(phi2)?;
    if (phi1.q(), phi1.n()) != (phi2.q(), phi2.n()) {
        return Err(Error::SignatureMismatch(format!(
            "pairing (q, n) = ({}, {}) with ({}, {})",
            phi1.q(),
            phi1.n(),
            phi2.q(),
            phi2.n()
        )));
    }
    let mut acc = ExactScalar::zero();
    for (eta, poly) in l_op(phi1)?.components() {
        let Some(other) = phi2.component(eta) else { continue };
        // Stored coefficients carry an extra η! each; the weight restores one.
        let eta_inv = BigRational::new(1.into(), eta.factorial());
        for (gamma, c1) in poly.terms() {
            let c2 = other.coefficient(gamma);
            if scalar::is_zero(&c2) {
                continue;
            }
            let g = gamma.row(0);
            let w = BigRational::from_integer(g.factorial()) * inv_factorial(g.modulus()) * &eta_inv;
            acc += c1 * c2.conj() * scalar::real(w);
        }
    }
    Ok(acc)
}

/// A basis of the degree-`m` sections (ζ-degree `m`, values in `P̄(n, C^q)`)
/// annihilated by every 2×2 minor of `□_{1,q}`, by exact elimination.
pub fn minor_kernel_basis(m: u32, n: u32, q: usize) -> Result<Vec<DiskSection>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    let unknowns: Vec<(MultiIndex, MatrixIndex)> = enumerate_weight(n, q)
        .into_iter()
        .flat_map(|eta| enumerate_weight(m, q).into_iter().map(move |g| (eta.clone(), MatrixIndex::from_row(&g))))
        .collect();
    let minors = all_minors(1, q);

    let mut equations: BTreeMap<(usize, MultiIndex, MatrixIndex), Vec<(usize, BigRational)>> = BTreeMap::new();
    for (col, (eta, gamma)) in unknowns.iter().enumerate() {
        let mut unit = DiskSection::zero(1, q, i64::from(n));
        unit.add_term(eta.clone(), gamma.clone(), scalar::from_int(1))?;
        for (k, minor) in minors.iter().enumerate() {
            for (e, poly) in apply_minor(&unit, minor)?.components() {
                for (g, c) in poly.terms() {
                    equations.entry((k, e.clone(), g.clone())).or_default().push((col, c.re.clone()));
                }
            }
        }
    }

    let rows: Vec<Vec<BigRational>> = equations
        .into_values()
        .map(|entries| {
            let mut row = vec![BigRational::zero(); unknowns.len()];
            for (col, c) in entries {
                row[col] += c;
            }
            row
        })
        .collect();

    nullspace(rows, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut s = DiskSection::zero(1, q, i64::from(n));
            for ((eta, gamma), c) in unknowns.iter().zip(v) {
                if !c.is_zero() {
                    s.add_term(eta.clone(), gamma.clone(), scalar::real(c))?;
                }
            }
            Ok(s)
        })
        .collect()
}
