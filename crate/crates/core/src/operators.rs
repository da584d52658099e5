//! Operators on `p = 1` sections: coordinate restriction `Q_j`, the
//! highest-weight projection `P`, the iterated integrals `I(m, j)` and
//! `F_ρ`, and their composite `L`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{check_len, Error, Result};
use crate::index::{succ_index, MatrixIndex, MultiIndex};
use crate::scalar;
use crate::section::{DiskPoly, DiskSection};

fn require_ball(phi: &DiskSection) -> Result<()> {
    if phi.p() != 1 {
        return Err(Error::Unsupported(format!("operator defined for p = 1, got p = {}", phi.p())));
    }
    Ok(())
}

/// Drops every monomial containing `ζ_j` (1-based `j`).
pub fn q_op(phi: &DiskSection, j: usize) -> Result<DiskSection> {
    require_ball(phi)?;
    if j == 0 || j > phi.q() {
        return Err(Error::IndexOutOfRange(format!("Q_{j} with q = {}", phi.q())));
    }
    Ok(phi.map_components(|_, poly| poly.filter(|g| g.get(0, j - 1) == 0)))
}

/// `P_η = Q_1 ⋯ Q_{s(η)}` applied to a single component polynomial.
pub fn p_eta(eta: &MultiIndex, poly: &DiskPoly) -> DiskPoly {
    let s = succ_index(eta);
    poly.filter(|g| (0..s).all(|j| g.get(0, j) == 0))
}

/// `ψ^{(η)} ↦ P_η ψ^{(η)}` on every component.
pub fn p_op(phi: &DiskSection) -> Result<DiskSection> {
    require_ball(phi)?;
    Ok(phi.map_components(p_eta))
}

/// Multiplies the coefficient of each monomial with `ζ_j`-exponent `k` by
/// `k!/(k+m)!`.
pub fn i_op(phi: &DiskSection, m: i64, j: usize) -> Result<DiskSection> {
    require_ball(phi)?;
    if m < 0 {
        return Err(Error::InvalidArgument(format!("I(m, j) needs m >= 0, got {m}")));
    }
    if j == 0 || j > phi.q() {
        return Err(Error::IndexOutOfRange(format!("I(m, {j}) with q = {}", phi.q())));
    }
    let m = m as u32;
    Ok(phi.map_components(|_, poly| {
        poly.reweight(|g| {
            let k = g.get(0, j - 1);
            BigRational::new(BigInt::from(1), scalar::falling(k + m, k))
        })
    }))
}

/// `γ!/(γ+ρ)!` for a single-row exponent.
fn f_weight(gamma: &MatrixIndex, rho: &MultiIndex) -> BigRational {
    let den = gamma
        .entries()
        .iter()
        .zip(rho.entries())
        .fold(BigInt::from(1), |acc, (&g, &r)| acc * scalar::falling(g + r, g));
    BigRational::new(BigInt::from(1), den)
}

/// Multiplies the coefficient of `ζ^γ` by `γ!/(γ+ρ)!`; requires `|ρ| = n`.
pub fn f_op(phi: &DiskSection, rho: &MultiIndex) -> Result<DiskSection> {
    require_ball(phi)?;
    check_len(phi.q(), rho.len())?;
    if i64::from(rho.modulus()) != phi.n() {
        return Err(Error::GradeMismatch { expected: phi.n(), actual: i64::from(rho.modulus()) });
    }
    Ok(phi.map_components(|_, poly| poly.reweight(|g| f_weight(g, rho))))
}

/// `L`: stored component `ψ^{(η)} ↦ η! F_η P_η ψ^{(η)}`, so that the absolute
/// coefficient of `v̄^η` in the output is `F_η P_η ψ^{(η)}`.
pub fn l_op(phi: &DiskSection) -> Result<DiskSection> {
    require_ball(phi)?;
    Ok(phi.map_components(|eta, poly| {
        let eta_fact = BigRational::from_integer(eta.factorial());
        p_eta(eta, poly).reweight(|g| f_weight(g, eta) * &eta_fact)
    }))
}

/// Lexicographically largest `η ≤ ν` with `|η| = n`, chosen greedily.
pub fn eta_max(nu: &MultiIndex, n: u32) -> Result<MultiIndex> {
    if nu.modulus() < n {
        return Err(Error::InvalidArgument(format!("|ν| = {} is below n = {n}", nu.modulus())));
    }
    let mut left = n;
    let entries = nu
        .entries()
        .iter()
        .map(|&x| {
            let take = x.min(left);
            left -= take;
            take
        })
        .collect();
    Ok(MultiIndex::new(entries))
}
