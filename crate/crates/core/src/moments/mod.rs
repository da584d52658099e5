//! Gaussian and ball moments in closed form, and polynomial integrals against
//! shifted complex Gaussians.
//!
//! All integrals use the normalized measure `dm = π^{-r} dx₁dy₁⋯dx_r dy_r`.

pub mod oracle;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_len, Error, Result};
use crate::index::{enumerate_bounded, enumerate_margin_tables, MultiIndex};
use crate::scalar::{self, factorial_f64, ExactScalar};

pub use oracle::{quad_oracle, Budget, Domain, Estimate, Method};

/// `∫_C z^k z̄^l e^{−|z|²} dm(z) = δ_{kl} k!`.
pub fn gaussian_moment_1d(k: u32, l: u32) -> ExactScalar {
    if k == l {
        scalar::real(scalar::factorial_q(k))
    } else {
        ExactScalar::zero()
    }
}

/// `∫_{B^q} ζ^η ζ̄^γ dm(ζ) = δ_{ηγ} η!/(|η|+q)!`.
pub fn ball_moment(eta: &MultiIndex, gamma: &MultiIndex, q: usize) -> Result<ExactScalar> {
    check_len(q, eta.len())?;
    check_len(q, gamma.len())?;
    if eta != gamma {
        return Ok(ExactScalar::zero());
    }
    let den = scalar::factorial(eta.modulus() + q as u32);
    Ok(scalar::real(BigRational::new(eta.factorial(), den)))
}

/// Same as [`ball_moment`] as a float.
pub fn ball_moment_f64(eta: &MultiIndex, q: usize) -> f64 {
    crate::fock::factorial_index(eta) / factorial_f64(eta.modulus() + q as u32)
}

/// Polynomial in `w, w̄ ∈ C^r` with float coefficients; the key `(k, l)`
/// stands for `w^k w̄^l`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Complex64>,
}

impl ComplexPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut out = Self::zero(dim);
        out.add_term(MultiIndex::zeros(dim), MultiIndex::zeros(dim), c);
        out
    }

    pub fn monomial(k: MultiIndex, l: MultiIndex, c: Complex64) -> Result<Self> {
        check_len(k.len(), l.len())?;
        let mut out = Self::zero(k.len());
        out.add_term(k, l, c);
        Ok(out)
    }

    /// `Σ_j c_j w_j`.
    pub fn linear(coeffs: &[Complex64]) -> Self {
        let dim = coeffs.len();
        let mut out = Self::zero(dim);
        for (j, &c) in coeffs.iter().enumerate() {
            out.add_term(MultiIndex::unit(dim, j), MultiIndex::zeros(dim), c);
        }
        out
    }

    /// `Σ_j c_j w̄_j`.
    pub fn conj_linear(coeffs: &[Complex64]) -> Self {
        let dim = coeffs.len();
        let mut out = Self::zero(dim);
        for (j, &c) in coeffs.iter().enumerate() {
            out.add_term(MultiIndex::zeros(dim), MultiIndex::unit(dim, j), c);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<(MultiIndex, MultiIndex), Complex64> {
        &self.terms
    }

    pub fn add_term(&mut self, k: MultiIndex, l: MultiIndex, c: Complex64) {
        if c == Complex64::zero() {
            return;
        }
        let key = (k, l);
        let sum = self.terms.get(&key).copied().unwrap_or_default() + c;
        if sum == Complex64::zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &ComplexPoly) -> ComplexPoly {
        let mut out = self.clone();
        for ((k, l), &c) in &other.terms {
            out.add_term(k.clone(), l.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> ComplexPoly {
        let mut out = Self::zero(self.dim);
        for ((k, l), &a) in &self.terms {
            out.add_term(k.clone(), l.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        let mut out = Self::zero(self.dim);
        for ((k1, l1), &a) in &self.terms {
            for ((k2, l2), &b) in &other.terms {
                out.add_term(k1.add(k2), l1.add(l2), a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> ComplexPoly {
        (0..e).fold(Self::constant(self.dim, Complex64::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, w: &[Complex64]) -> Result<Complex64> {
        check_len(self.dim, w.len())?;
        let mut acc = Complex64::zero();
        for ((k, l), &c) in &self.terms {
            let mut t = c;
            for j in 0..self.dim {
                t *= w[j].powu(k.get(j)) * w[j].conj().powu(l.get(j));
            }
            acc += t;
        }
        Ok(acc)
    }
}

fn check_hermitian_part(u: &DMatrix<Complex64>) -> Result<()> {
    let h = (u + u.adjoint()) * Complex64::new(0.5, 0.0);
    // Complex Cholesky happily takes square roots of negative pivots, so the
    // spectrum is checked directly.
    if h.symmetric_eigenvalues().iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite("U + U* must be positive definite".into()));
    }
    Ok(())
}

/// `∫_{C^r} P(w, w̄) e^{−w*Uw + a*w + w*b} dm(w)`.
///
/// With `s = ā`, `t = b` and `M = U^{-1}` the generating function is
/// `exp(sᵀMt)/det U`; each monomial is the matching mixed derivative,
/// expanded as a sum over pairing matrices between `w` and `w̄` factors.
pub fn gaussian_poly_integral(
    poly: &ComplexPoly,
    u: &DMatrix<Complex64>,
    a: &[Complex64],
    b: &[Complex64],
) -> Result<Complex64> {
    let r = poly.dim();
    if u.nrows() != r || u.ncols() != r {
        return Err(Error::LengthMismatch { expected: r, actual: u.nrows().max(u.ncols()) });
    }
    check_len(r, a.len())?;
    check_len(r, b.len())?;
    check_hermitian_part(u)?;
    let lu = u.clone().lu();
    let det = lu.determinant();
    let m = lu.try_inverse().ok_or_else(|| Error::Singular("U".into()))?;
    let s = DMatrix::from_iterator(r, 1, a.iter().map(|z| z.conj()));
    let t = DMatrix::from_column_slice(r, 1, b);
    let x = &m * &t;
    let y = m.transpose() * &s;
    let z = ((s.transpose() * &m * &t)[(0, 0)]).exp() / det;

    let mut total = Complex64::zero();
    for ((k, l), &c) in poly.terms() {
        total += c * shifted_moment(k, l, &m, x.as_slice(), y.as_slice());
    }
    Ok(total * z)
}

/// `k! l! Σ_π Π M^π/π! · x^{k−r}/(k−r)! · y^{l−c}/(l−c)!` over pairing
/// matrices `π` with row sums `r ≤ k` and column sums `c ≤ l`.
fn shifted_moment(k: &MultiIndex, l: &MultiIndex, m: &DMatrix<Complex64>, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let dim = k.len();
    let pow_over_fact = |base: Complex64, e: u32| base.powu(e) / factorial_f64(e);
    let mut sum = Complex64::zero();
    for d in 0..=k.modulus().min(l.modulus()) {
        let rows = enumerate_bounded(d, k.entries());
        let cols = enumerate_bounded(d, l.entries());
        for rs in &rows {
            let mut x_part = Complex64::one();
            for i in 0..dim {
                x_part *= pow_over_fact(x[i], k.get(i) - rs.get(i));
            }
            if x_part == Complex64::zero() {
                continue;
            }
            for cs in &cols {
                let mut y_part = Complex64::one();
                for j in 0..dim {
                    y_part *= pow_over_fact(y[j], l.get(j) - cs.get(j));
                }
                if y_part == Complex64::zero() {
                    continue;
                }
                let mut pairings = Complex64::zero();
                for pi in enumerate_margin_tables(rs, cs) {
                    let mut term = Complex64::one();
                    for i in 0..dim {
                        for j in 0..dim {
                            let e = pi.get(i, j);
                            if e > 0 {
                                term *= pow_over_fact(m[(i, j)], e);
                            }
                        }
                    }
                    pairings += term;
                }
                sum += pairings * x_part * y_part;
            }
        }
    }
    sum * crate::fock::factorial_index(k) * crate::fock::factorial_index(l)
}

/// Right side of the reproducing formula at signature `(p, q)`:
/// `∫ f(w) e^{w_R* z_R + z_S* w_S} e^{−|w|²} dm(w)` for the monomial
/// `f = z_R^l z̄_S^m`.
pub fn reproduce_monomial(l: &MultiIndex, m: &MultiIndex, z: &[Complex64]) -> Result<Complex64> {
    let (p, q) = (l.len(), m.len());
    check_len(p + q, z.len())?;
    let k = MultiIndex::new(l.entries().iter().copied().chain(std::iter::repeat_n(0, q)).collect());
    let lbar = MultiIndex::new(std::iter::repeat_n(0, p).chain(m.entries().iter().copied()).collect());
    let poly = ComplexPoly::monomial(k, lbar, Complex64::one())?;
    let mut a = vec![Complex64::zero(); p + q];
    let mut b = vec![Complex64::zero(); p + q];
    a[p..].copy_from_slice(&z[p..]);
    b[..p].copy_from_slice(&z[..p]);
    gaussian_poly_integral(&poly, &DMatrix::identity(p + q, p + q), &a, &b)
}
