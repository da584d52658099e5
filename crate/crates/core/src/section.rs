//! Polynomial-valued sections on the generalized unit disk.
//!
//! A section `φ(ζ, v) = Σ_η ψ^{(η)}(ζ) v̄^η / η!` is stored through its
//! components `ψ^{(η)}`; the `1/η!` is applied only at evaluation time.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_len, Error, Result};
use crate::fock::accumulate;
use crate::index::{MatrixIndex, MultiIndex};
use crate::scalar::{self, ExactScalar};

/// A sparse polynomial in the `p × q` disk variables `ζ_{ij}`, keyed by
/// matrix exponents.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiskPoly {
    terms: BTreeMap<MatrixIndex, ExactScalar>,
}

impl DiskPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(gamma: MatrixIndex, c: ExactScalar) -> Self {
        let mut out = Self::new();
        out.add_term(gamma, c);
        out
    }

    pub fn terms(&self) -> &BTreeMap<MatrixIndex, ExactScalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, gamma: &MatrixIndex) -> ExactScalar {
        self.terms.get(gamma).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn add_term(&mut self, gamma: MatrixIndex, c: ExactScalar) {
        accumulate(&mut self.terms, gamma, c);
    }

    pub fn add_assign(&mut self, other: &DiskPoly) {
        for (g, c) in &other.terms {
            accumulate(&mut self.terms, g.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> DiskPoly {
        if scalar::is_zero(c) {
            return DiskPoly::new();
        }
        DiskPoly { terms: self.terms.iter().map(|(g, a)| (g.clone(), a * c)).collect() }
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&MatrixIndex) -> bool) -> DiskPoly {
        DiskPoly { terms: self.terms.iter().filter(|(g, _)| keep(g)).map(|(g, c)| (g.clone(), c.clone())).collect() }
    }

    /// Multiplies each coefficient by a rational weight depending on its
    /// exponent.
    pub fn reweight(&self, mut weight: impl FnMut(&MatrixIndex) -> BigRational) -> DiskPoly {
        let mut out = DiskPoly::new();
        for (g, c) in &self.terms {
            out.add_term(g.clone(), c * scalar::real(weight(g)));
        }
        out
    }

    /// `∂/∂ζ_{ij}` (0-based row and column).
    pub fn derivative(&self, i: usize, j: usize) -> DiskPoly {
        let mut out = DiskPoly::new();
        for (g, c) in &self.terms {
            let e = g.get(i, j);
            if e == 0 {
                continue;
            }
            let mut h = g.clone();
            h.set(i, j, e - 1);
            out.add_term(h, c * scalar::from_int(i64::from(e)));
        }
        out
    }

    /// Evaluates at a matrix point given row-major as `p·q` complex values.
    pub fn eval<T>(&self, zeta: &[Complex<T>], convert: impl Fn(&ExactScalar) -> Complex<T>) -> Complex<T>
    where
        T: Clone + num_traits::Num,
    {
        let mut acc = Complex::<T>::zero();
        for (g, c) in &self.terms {
            let mut t = convert(c);
            for (k, &e) in g.entries().iter().enumerate() {
                if e > 0 {
                    t = t * zeta[k].clone().powu(e);
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Maximum total degree of the terms.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(MatrixIndex::total).max().unwrap_or(0)
    }
}

/// A finite element of `O(D_{p,q}, P̄(n, C^q))` in component form.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskSection {
    p: usize,
    q: usize,
    n: i64,
    components: BTreeMap<MultiIndex, DiskPoly>,
}

impl DiskSection {
    /// The zero section. Negative `n` is allowed and can only hold zero.
    pub fn zero(p: usize, q: usize, n: i64) -> Self {
        Self { p, q, n, components: BTreeMap::new() }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Components `(η, ψ^{(η)})` in increasing lexicographic order of `η`.
    pub fn components(&self) -> impl Iterator<Item = (&MultiIndex, &DiskPoly)> {
        self.components.iter()
    }

    pub fn component(&self, eta: &MultiIndex) -> Option<&DiskPoly> {
        self.components.get(eta)
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Total number of stored monomials across all components.
    pub fn num_terms(&self) -> usize {
        self.components.values().map(DiskPoly::len).sum()
    }

    pub(crate) fn check_eta(&self, eta: &MultiIndex) -> Result<()> {
        check_len(self.q, eta.len())?;
        if i64::from(eta.modulus()) != self.n {
            return Err(Error::GradeMismatch { expected: self.n, actual: i64::from(eta.modulus()) });
        }
        Ok(())
    }

    fn check_gamma(&self, gamma: &MatrixIndex) -> Result<()> {
        if (gamma.rows(), gamma.cols()) != (self.p, self.q) {
            return Err(Error::SignatureMismatch(format!(
                "exponent shape {}×{} in a {}×{} section",
                gamma.rows(),
                gamma.cols(),
                self.p,
                self.q
            )));
        }
        Ok(())
    }

    /// Adds `c ζ^γ` to `ψ^{(η)}` (stored convention).
    pub fn add_term(&mut self, eta: MultiIndex, gamma: MatrixIndex, c: ExactScalar) -> Result<()> {
        self.check_eta(&eta)?;
        self.check_gamma(&gamma)?;
        let entry = self.components.entry(eta.clone()).or_default();
        entry.add_term(gamma, c);
        if entry.is_zero() {
            self.components.remove(&eta);
        }
        Ok(())
    }

    /// Adds a whole polynomial to `ψ^{(η)}`.
    pub fn add_component(&mut self, eta: MultiIndex, poly: &DiskPoly) -> Result<()> {
        self.check_eta(&eta)?;
        for g in poly.terms().keys() {
            self.check_gamma(g)?;
        }
        let entry = self.components.entry(eta.clone()).or_default();
        entry.add_assign(poly);
        if entry.is_zero() {
            self.components.remove(&eta);
        }
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, eta: MultiIndex, poly: DiskPoly) {
        if !poly.is_zero() {
            let entry = self.components.entry(eta.clone()).or_default();
            entry.add_assign(&poly);
            if entry.is_zero() {
                self.components.remove(&eta);
            }
        }
    }

    fn check_shape(&self, other: &DiskSection) -> Result<()> {
        if (self.p, self.q, self.n) != (other.p, other.q, other.n) {
            return Err(Error::SignatureMismatch(format!(
                "sections (p,q,n) = ({},{},{}) vs ({},{},{})",
                self.p, self.q, self.n, other.p, other.q, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &DiskSection) -> Result<DiskSection> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (eta, poly) in &other.components {
            out.insert_unchecked(eta.clone(), poly.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiskSection) -> Result<DiskSection> {
        self.add(&other.scale(&scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> DiskSection {
        let mut out = DiskSection::zero(self.p, self.q, self.n);
        for (eta, poly) in &self.components {
            out.insert_unchecked(eta.clone(), poly.scale(c));
        }
        out
    }

    /// Applies `f` to every component polynomial, keeping `η`.
    pub fn map_components(&self, mut f: impl FnMut(&MultiIndex, &DiskPoly) -> DiskPoly) -> DiskSection {
        let mut out = DiskSection::zero(self.p, self.q, self.n);
        for (eta, poly) in &self.components {
            out.insert_unchecked(eta.clone(), f(eta, poly));
        }
        out
    }

    /// Largest ζ-degree among the stored terms.
    pub fn zeta_degree(&self) -> u32 {
        self.components.values().map(DiskPoly::degree).max().unwrap_or(0)
    }

    /// Exact pointwise value `Σ ψ^{(η)}(ζ) v̄^η / η!`; `zeta` is row-major.
    pub fn eval_exact(&self, zeta: &[ExactScalar], v: &[ExactScalar]) -> Result<ExactScalar> {
        check_len(self.p * self.q, zeta.len())?;
        check_len(self.q, v.len())?;
        let vbar: Vec<ExactScalar> = v.iter().map(|x| x.conj()).collect();
        let mut acc = ExactScalar::zero();
        for (eta, poly) in &self.components {
            let mut weight = ExactScalar::one();
            for (j, &e) in eta.entries().iter().enumerate() {
                if e > 0 {
                    weight *= vbar[j].powu(e);
                }
            }
            let inv_fact = scalar::real(BigRational::new(One::one(), eta.factorial()));
            acc += poly.eval(zeta, Clone::clone) * weight * inv_fact;
        }
        Ok(acc)
    }

    /// Floating-point pointwise value; `zeta` is row-major.
    pub fn eval(&self, zeta: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
        check_len(self.p * self.q, zeta.len())?;
        check_len(self.q, v.len())?;
        let mut acc = Complex64::zero();
        for (eta, poly) in &self.components {
            let mut weight = Complex64::one();
            for (j, &e) in eta.entries().iter().enumerate() {
                weight *= v[j].conj().powu(e);
            }
            weight /= crate::fock::factorial_index(eta);
            acc += poly.eval(zeta, scalar::to_c64) * weight;
        }
        Ok(acc)
    }

    /// The fiber `φ(ζ, ·)` as absolute coefficients of `v̄^η` (the `1/η!`
    /// folded in).
    pub fn fiber(&self, zeta: &[Complex64]) -> Result<BTreeMap<MultiIndex, Complex64>> {
        check_len(self.p * self.q, zeta.len())?;
        Ok(self
            .components
            .iter()
            .map(|(eta, poly)| (eta.clone(), poly.eval(zeta, scalar::to_c64) / crate::fock::factorial_index(eta)))
            .collect())
    }

    /// Squared sup-norm surrogate `Σ_η max_A |ψ^{(η)}|²` over a finite sample
    /// set `A` of disk points.
    pub fn grid_norm_sqr(&self, samples: &[Vec<Complex64>]) -> f64 {
        self.components
            .values()
            .map(|poly| {
                samples
                    .iter()
                    .map(|z| poly.eval(z, scalar::to_c64).norm_sqr())
                    .fold(0.0, f64::max)
            })
            .sum()
    }
}

/// True iff `I_q − ζ*ζ` is positive definite. For `p = 1` this is the exact
/// test `|ζ|² < 1`; otherwise eigenvalues must exceed `1e−12`.
pub fn in_disk(zeta: &DMatrix<Complex64>) -> bool {
    if zeta.nrows() == 1 {
        return zeta.iter().map(|z| z.norm_sqr()).sum::<f64>() < 1.0;
    }
    let q = zeta.ncols();
    let gram = DMatrix::<Complex64>::identity(q, q) - zeta.adjoint() * zeta;
    gram.symmetric_eigenvalues().iter().all(|&l| l > 1e-12)
}

/// Exact `|ζ|² < 1` membership for a row vector (`p = 1`).
pub fn in_ball_exact(zeta: &[ExactScalar]) -> bool {
    let norm: BigRational = zeta.iter().map(|z| z.norm_sqr()).fold(BigRational::zero(), |a, b| a + b);
    norm < BigRational::one()
}

/// Checks dimensions of a `p × q` point given row-major.
pub fn disk_point(p: usize, q: usize, entries: &[Complex64]) -> Result<DMatrix<Complex64>> {
    check_len(p * q, entries.len())?;
    Ok(DMatrix::from_row_slice(p, q, entries))
}
