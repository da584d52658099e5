//! Finite (p,q)-holomorphic polynomials `Σ a_{l,m} z_R^l z̄_S^m` and the Fock
//! inner product.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{check_len, Error, Result};
use crate::index::MultiIndex;
use crate::scalar::{self, ExactScalar};

/// Monomial key `(l, m)`: exponents of the `p` holomorphic and `q`
/// antiholomorphic variables.
pub type FockKey = (MultiIndex, MultiIndex);

/// Homogeneity of a polynomial under `z ↦ e^{−iθ}z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    /// The zero polynomial lies in every graded piece.
    Any,
    Pure(i64),
    Mixed,
}

impl Grade {
    pub fn admits(self, n: i64) -> bool {
        matches!(self, Grade::Any) || self == Grade::Pure(n)
    }
}

/// An element of `F^{p,q}` with finitely many nonzero exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FockPoly {
    p: usize,
    q: usize,
    terms: BTreeMap<FockKey, ExactScalar>,
}

impl FockPoly {
    pub fn zero(p: usize, q: usize) -> Self {
        Self { p, q, terms: BTreeMap::new() }
    }

    /// `f_{αβ}(z) = z_R^α z̄_S^β` with unit coefficient.
    pub fn monomial(alpha: MultiIndex, beta: MultiIndex) -> Self {
        let mut f = Self::zero(alpha.len(), beta.len());
        f.terms.insert((alpha, beta), scalar::from_int(1));
        f
    }

    /// `f_{ν,n}(z) = z₁^{|ν|−n} z̄_S^ν`, an element of `F_n^{1,q}`.
    pub fn ball_monomial(nu: &MultiIndex, n: u32) -> Result<Self> {
        let k = nu.modulus().checked_sub(n).ok_or_else(|| {
            Error::InvalidArgument(format!("ball monomial needs |ν| ≥ n, got |ν| = {} < {n}", nu.modulus()))
        })?;
        Ok(Self::monomial(MultiIndex::new(vec![k]), nu.clone()))
    }

    pub fn from_terms<I>(p: usize, q: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, MultiIndex, ExactScalar)>,
    {
        let mut f = Self::zero(p, q);
        for (l, m, c) in terms {
            f.add_term(l, m, c)?;
        }
        Ok(f)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<FockKey, ExactScalar> {
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

    pub fn coefficient(&self, l: &MultiIndex, m: &MultiIndex) -> ExactScalar {
        self.terms.get(&(l.clone(), m.clone())).cloned().unwrap_or_else(ExactScalar::zero)
    }

    /// Accumulates `c · z_R^l z̄_S^m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, l: MultiIndex, m: MultiIndex, c: ExactScalar) -> Result<()> {
        check_len(self.p, l.len())?;
        check_len(self.q, m.len())?;
        accumulate(&mut self.terms, (l, m), c);
        Ok(())
    }

    fn check_signature(&self, other: &FockPoly) -> Result<()> {
        if (self.p, self.q) != (other.p, other.q) {
            return Err(Error::SignatureMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.p, self.q, other.p, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &FockPoly) -> Result<FockPoly> {
        self.check_signature(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            accumulate(&mut out.terms, k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FockPoly) -> Result<FockPoly> {
        self.add(&other.scale(&scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> FockPoly {
        let mut out = FockPoly::zero(self.p, self.q);
        if scalar::is_zero(c) {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, a)| (k.clone(), a * c)).collect();
        out
    }

    /// Product of two polynomials of the same signature.
    pub fn mul(&self, other: &FockPoly) -> Result<FockPoly> {
        self.check_signature(other)?;
        let mut out = FockPoly::zero(self.p, self.q);
        for ((l1, m1), a) in &self.terms {
            for ((l2, m2), b) in &other.terms {
                accumulate(&mut out.terms, (l1.add(l2), m1.add(m2)), a * b);
            }
        }
        Ok(out)
    }

    pub fn grade(&self) -> Grade {
        let mut grade = Grade::Any;
        for (l, m) in self.terms.keys() {
            let g = i64::from(m.modulus()) - i64::from(l.modulus());
            grade = match grade {
                Grade::Any => Grade::Pure(g),
                Grade::Pure(h) if h == g => Grade::Pure(h),
                Grade::Pure(_) => return Grade::Mixed,
                Grade::Mixed => unreachable!(),
            };
        }
        grade
    }

    /// The grade as a number, with the zero polynomial reported at `default`.
    pub fn pure_grade_or(&self, default: i64) -> Result<i64> {
        match self.grade() {
            Grade::Any => Ok(default),
            Grade::Pure(n) => Ok(n),
            Grade::Mixed => Err(self.mixed_error()),
        }
    }

    fn mixed_error(&self) -> Error {
        let mut grades = self
            .terms
            .keys()
            .map(|(l, m)| i64::from(m.modulus()) - i64::from(l.modulus()));
        let first = grades.next().unwrap_or(0);
        let other = grades.find(|&g| g != first).unwrap_or(first);
        Error::MixedGrade(first, other)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(l, m)| l.modulus() + m.modulus()).max().unwrap_or(0)
    }

    /// `f(e^{−iθ}z)` for an exact unit phase `u = e^{iθ}`: multiplies each
    /// coefficient by `u^{|m|−|l|}`.
    pub fn rotate(&self, phase: &ExactScalar) -> FockPoly {
        let inv = phase.inv();
        let mut out = FockPoly::zero(self.p, self.q);
        for ((l, m), a) in &self.terms {
            let g = i64::from(m.modulus()) - i64::from(l.modulus());
            let factor = if g >= 0 { phase.powu(g as u32) } else { inv.powu((-g) as u32) };
            accumulate(&mut out.terms, (l.clone(), m.clone()), a * factor);
        }
        out
    }

    /// Evaluates at a complex point `z ∈ C^{p+q}` (holomorphic block first).
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_len(self.p + self.q, z.len())?;
        let mut acc = Complex64::zero();
        for ((l, m), a) in &self.terms {
            let mut t = scalar::to_c64(a);
            for (i, &e) in l.entries().iter().enumerate() {
                t *= z[i].powu(e);
            }
            for (j, &e) in m.entries().iter().enumerate() {
                t *= z[self.p + j].conj().powu(e);
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn to_numeric(&self) -> NumericFockPoly {
        NumericFockPoly {
            p: self.p,
            q: self.q,
            terms: self.terms.iter().map(|(k, a)| (k.clone(), scalar::to_c64(a))).collect(),
        }
    }
}

pub(crate) fn accumulate<K: Ord>(map: &mut BTreeMap<K, ExactScalar>, key: K, c: ExactScalar) {
    if scalar::is_zero(&c) {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let sum = e.get() + c;
            if scalar::is_zero(&sum) {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// `⟨f, g⟩ = Σ a_{l,m} conj(b_{l,m}) l! m!`
pub fn fock_inner(f: &FockPoly, g: &FockPoly) -> Result<ExactScalar> {
    f.check_signature(g)?;
    let mut acc = ExactScalar::zero();
    for (key, a) in &f.terms {
        if let Some(b) = g.terms.get(key) {
            let weight = BigRational::from_integer(key.0.factorial() * key.1.factorial());
            acc += a * b.conj() * scalar::real(weight);
        }
    }
    Ok(acc)
}

/// A Fock polynomial with floating-point coefficients, produced by numeric
/// group actions.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericFockPoly {
    pub p: usize,
    pub q: usize,
    pub terms: BTreeMap<FockKey, Complex64>,
}

impl NumericFockPoly {
    pub fn zero(p: usize, q: usize) -> Self {
        Self { p, q, terms: BTreeMap::new() }
    }

    pub fn coefficient(&self, l: &MultiIndex, m: &MultiIndex) -> Complex64 {
        self.terms.get(&(l.clone(), m.clone())).copied().unwrap_or_default()
    }

    /// `Σ a conj(b) l! m!` in floating point.
    pub fn inner(&self, other: &NumericFockPoly) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|(key, a)| {
                other.terms.get(key).map(|b| {
                    let w = factorial_index(&key.0) * factorial_index(&key.1);
                    a * b.conj() * w
                })
            })
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        check_len(self.p + self.q, z.len())?;
        let mut acc = Complex64::zero();
        for ((l, m), a) in &self.terms {
            let mut t = *a;
            for (i, &e) in l.entries().iter().enumerate() {
                t *= z[i].powu(e);
            }
            for (j, &e) in m.entries().iter().enumerate() {
                t *= z[self.p + j].conj().powu(e);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Largest coefficient-wise distance, weighted by the Fock norm of each
    /// monomial, to another polynomial.
    pub fn distance(&self, other: &NumericFockPoly) -> f64 {
        let keys: std::collections::BTreeSet<&FockKey> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| {
                let d = self.terms.get(k).copied().unwrap_or_default() - other.terms.get(k).copied().unwrap_or_default();
                d.norm_sqr() * factorial_index(&k.0) * factorial_index(&k.1)
            })
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn factorial_index(m: &MultiIndex) -> f64 {
    m.entries().iter().map(|&k| scalar::factorial_f64(k)).product()
}
