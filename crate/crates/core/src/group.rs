//! `U(p,q)` elements, the disk action, the factor of automorphy `J_n`, the
//! multiplier representation `ω_n` and the oscillator action `σ`.
//!
//! General elements are floating point. Block-diagonal elements of the
//! maximal compact subgroup `K = U(p) × U(q)` also have an exact form over
//! the Gaussian rationals.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{check_len, Error, Result};
use crate::fock::{FockPoly, NumericFockPoly};
use crate::index::{enumerate_weight, MultiIndex};
use crate::moments::{gaussian_poly_integral, ComplexPoly};
use crate::scalar::{self, ExactScalar};
use crate::section::DiskSection;

const GROUP_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `I_{p,q} = diag(1,…,1,−1,…,−1)`.
pub fn signature_matrix(p: usize, q: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(p + q, p + q, |i, j| if i != j { c(0.0) } else if i < p { c(1.0) } else { c(-1.0) })
}

/// An element of `U(p,q)` with blocks `A (p×p)`, `B (p×q)`, `C (q×p)`,
/// `D (q×q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    p: usize,
    q: usize,
    m: DMatrix<Complex64>,
}

impl GroupElement {
    /// Wraps a matrix after checking `g* I_{p,q} g = I_{p,q}` within `1e−10`.
    pub fn new(p: usize, q: usize, m: DMatrix<Complex64>) -> Result<Self> {
        if !check_group(p, q, &m)? {
            return Err(Error::NotInGroup(format!("matrix violates g* I g = I for ({p},{q})")));
        }
        Ok(Self { p, q, m })
    }

    pub fn identity(p: usize, q: usize) -> Self {
        Self { p, q, m: DMatrix::identity(p + q, p + q) }
    }

    /// `e^{iθ} I_{p+q}`.
    pub fn scalar(p: usize, q: usize, theta: f64) -> Self {
        Self { p, q, m: DMatrix::identity(p + q, p + q) * Complex64::from_polar(1.0, theta) }
    }

    /// Hyperbolic rotation by `s` in the plane of coordinates `i < p` and
    /// `p + j` (0-based `i`, `j`).
    pub fn boost(p: usize, q: usize, i: usize, j: usize, s: f64) -> Result<Self> {
        if i >= p || j >= q {
            return Err(Error::IndexOutOfRange(format!("boost plane ({i}, {j}) for ({p},{q})")));
        }
        let mut m = DMatrix::identity(p + q, p + q);
        let k = p + j;
        m[(i, i)] = c(s.cosh());
        m[(k, k)] = c(s.cosh());
        m[(i, k)] = c(s.sinh());
        m[(k, i)] = c(s.sinh());
        Ok(Self { p, q, m })
    }

    /// `diag(A, D)` for unitary `A`, `D`.
    pub fn compact(a: &DMatrix<Complex64>, d: &DMatrix<Complex64>) -> Result<Self> {
        let (p, q) = (a.nrows(), d.nrows());
        let mut m = DMatrix::zeros(p + q, p + q);
        m.view_mut((0, 0), (p, p)).copy_from(a);
        m.view_mut((p, p), (q, q)).copy_from(d);
        Self::new(p, q, m)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn a(&self) -> DMatrix<Complex64> {
        self.m.view((0, 0), (self.p, self.p)).into_owned()
    }

    pub fn b(&self) -> DMatrix<Complex64> {
        self.m.view((0, self.p), (self.p, self.q)).into_owned()
    }

    pub fn c(&self) -> DMatrix<Complex64> {
        self.m.view((self.p, 0), (self.q, self.p)).into_owned()
    }

    pub fn d(&self) -> DMatrix<Complex64> {
        self.m.view((self.p, self.p), (self.q, self.q)).into_owned()
    }

    /// `g^{−1} = I_{p,q} g* I_{p,q}`.
    pub fn inverse(&self) -> Self {
        let i = signature_matrix(self.p, self.q);
        Self { p: self.p, q: self.q, m: &i * self.m.adjoint() * &i }
    }

    pub fn mul(&self, other: &GroupElement) -> Result<Self> {
        if (self.p, self.q) != (other.p, other.q) {
            return Err(Error::SignatureMismatch("group elements of different signature".into()));
        }
        Ok(Self { p: self.p, q: self.q, m: &self.m * &other.m })
    }

    /// True when `B` and `C` vanish.
    pub fn is_compact(&self) -> bool {
        self.b().iter().chain(self.c().iter()).all(|z| z.norm() <= GROUP_TOL)
    }

    /// `Cζ + D`.
    fn automorphy_matrix(&self, zeta: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if (zeta.nrows(), zeta.ncols()) != (self.p, self.q) {
            return Err(Error::LengthMismatch { expected: self.p * self.q, actual: zeta.len() });
        }
        Ok(self.c() * zeta + self.d())
    }
}

/// Membership test `g* I_{p,q} g = I_{p,q}` within `1e−10`.
pub fn check_group(p: usize, q: usize, m: &DMatrix<Complex64>) -> Result<bool> {
    if m.nrows() != p + q || m.ncols() != p + q {
        return Err(Error::LengthMismatch { expected: p + q, actual: m.nrows().max(m.ncols()) });
    }
    let i = signature_matrix(p, q);
    let defect = m.adjoint() * &i * m - &i;
    Ok(defect.iter().all(|z| z.norm() <= GROUP_TOL))
}

/// `g·ζ = (Aζ + B)(Cζ + D)^{−1}`.
pub fn mobius(g: &GroupElement, zeta: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let x = g.automorphy_matrix(zeta)?;
    let inv = x.try_inverse().ok_or_else(|| Error::Singular("Cζ + D".into()))?;
    Ok((g.a() * zeta + g.b()) * inv)
}

/// An antiholomorphic polynomial `Σ a_η v̄^η` on `C^q` with absolute
/// coefficients (no `1/η!`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiberPoly {
    pub q: usize,
    pub terms: BTreeMap<MultiIndex, Complex64>,
}

impl FiberPoly {
    pub fn new(q: usize) -> Self {
        Self { q, terms: BTreeMap::new() }
    }

    /// The fiber `φ(ζ, ·)` of a section at a point.
    pub fn from_section(phi: &DiskSection, zeta: &[Complex64]) -> Result<Self> {
        Ok(Self { q: phi.q(), terms: phi.fiber(zeta)? })
    }

    pub fn add_term(&mut self, eta: MultiIndex, a: Complex64) {
        *self.terms.entry(eta).or_default() += a;
    }

    pub fn eval(&self, v: &[Complex64]) -> Result<Complex64> {
        check_len(self.q, v.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(eta, a)| eta.entries().iter().enumerate().fold(*a, |t, (j, &e)| t * v[j].conj().powu(e)))
            .sum())
    }

    /// `v̄_i ↦ Σ_j M_{ij} v̄_j`.
    pub fn substitute(&self, m: &DMatrix<Complex64>) -> FiberPoly {
        let q = self.q;
        let mut out = FiberPoly::new(q);
        for (eta, a) in &self.terms {
            let mut acc: BTreeMap<MultiIndex, Complex64> = BTreeMap::from([(MultiIndex::zeros(q), *a)]);
            for (i, &e) in eta.entries().iter().enumerate() {
                for _ in 0..e {
                    let mut next = BTreeMap::new();
                    for (mono, coef) in &acc {
                        for j in 0..q {
                            if m[(i, j)] != Complex64::zero() {
                                let key = mono.with(j, mono.get(j) + 1);
                                *next.entry(key).or_insert(Complex64::zero()) += coef * m[(i, j)];
                            }
                        }
                    }
                    acc = next;
                }
            }
            for (mono, coef) in acc {
                out.add_term(mono, coef);
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> FiberPoly {
        FiberPoly { q: self.q, terms: self.terms.iter().map(|(k, a)| (k.clone(), a * s)).collect() }
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &FiberPoly) -> f64 {
        let keys: std::collections::BTreeSet<&MultiIndex> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .map(|k| (self.terms.get(k).copied().unwrap_or_default() - other.terms.get(k).copied().unwrap_or_default()).norm())
            .fold(0.0, f64::max)
    }
}

/// `J_n(g, ζ) f(v) = det[Cζ + D] f([Cζ + D]* v)`. Since
/// `conj([Cζ+D]* v) = [Cζ+D]ᵀ v̄`, this substitutes `v̄ ↦ [Cζ+D]ᵀ v̄`.
pub fn multiplier(g: &GroupElement, zeta: &DMatrix<Complex64>, f: &FiberPoly) -> Result<FiberPoly> {
    check_len(g.q(), f.q)?;
    let x = g.automorphy_matrix(zeta)?;
    let det = x.determinant();
    if det.norm() == 0.0 {
        return Err(Error::Singular("Cζ + D".into()));
    }
    Ok(f.substitute(&x.transpose()).scale(det))
}

/// `(ω_n(g)φ)(ζ, v) = J_n(g^{−1}, ζ)^{−1} φ(g^{−1}·ζ, v)`, using
/// `J_n(g^{−1}, ζ)^{−1} = J_n(g, g^{−1}·ζ)`. `zeta` is row-major.
pub fn omega_eval(g: &GroupElement, phi: &DiskSection, zeta: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    if (phi.p(), phi.q()) != (g.p(), g.q()) {
        return Err(Error::SignatureMismatch("section and group element differ in (p, q)".into()));
    }
    omega_eval_with(g, zeta, v, |z, w| phi.eval(z, w))
}

/// [`omega_eval`] for a section given only pointwise.
pub fn omega_eval_with<F>(g: &GroupElement, zeta: &[Complex64], v: &[Complex64], phi: F) -> Result<Complex64>
where
    F: Fn(&[Complex64], &[Complex64]) -> Result<Complex64>,
{
    let (p, q) = (g.p(), g.q());
    check_len(p * q, zeta.len())?;
    check_len(q, v.len())?;
    let z = DMatrix::from_row_slice(p, q, zeta);
    let moved = mobius(&g.inverse(), &z)?;
    let x = g.automorphy_matrix(&moved)?;
    let w = x.adjoint() * DMatrix::from_column_slice(q, 1, v);
    let moved_rows: Vec<Complex64> = (0..p).flat_map(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| moved[(i, j)]).collect();
    Ok(x.determinant() * phi(&moved_rows, w.as_slice())?)
}

/// A block-diagonal unitary `diag(A, D)` with Gaussian-rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CompactElement {
    a: Vec<Vec<ExactScalar>>,
    d: Vec<Vec<ExactScalar>>,
}

fn adjoint(m: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i].conj()).collect()).collect()
}

fn is_unitary(m: &[Vec<ExactScalar>]) -> bool {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return false;
    }
    let adj = adjoint(m);
    (0..n).all(|i| {
        (0..n).all(|j| {
            let s = (0..n).fold(ExactScalar::zero(), |acc, k| acc + &adj[i][k] * &m[k][j]);
            s == if i == j { ExactScalar::one() } else { ExactScalar::zero() }
        })
    })
}

impl CompactElement {
    /// Checks `A*A = I` and `D*D = I` exactly.
    pub fn new(a: Vec<Vec<ExactScalar>>, d: Vec<Vec<ExactScalar>>) -> Result<Self> {
        if a.is_empty() || d.is_empty() || !is_unitary(&a) || !is_unitary(&d) {
            return Err(Error::NotInGroup("compact blocks must be nonempty unitary matrices".into()));
        }
        Ok(Self { a, d })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.d.len()
    }

    pub fn a(&self) -> &[Vec<ExactScalar>] {
        &self.a
    }

    pub fn d(&self) -> &[Vec<ExactScalar>] {
        &self.d
    }

    pub fn det_d(&self) -> ExactScalar {
        scalar::exact_determinant(&self.d).expect("square by construction")
    }

    pub fn to_numeric(&self) -> GroupElement {
        let conv = |m: &[Vec<ExactScalar>]| {
            let n = m.len();
            DMatrix::from_fn(n, n, |i, j| scalar::to_c64(&m[i][j]))
        };
        GroupElement::compact(&conv(&self.a), &conv(&self.d)).expect("exactly unitary blocks")
    }
}

/// Exact `(ω_n(k)φ)(ζ, v) = det(D) φ(A*ζD, D*v)` for `k = diag(A, D)`.
pub fn omega_compact(k: &CompactElement, phi: &DiskSection, zeta: &[ExactScalar], v: &[ExactScalar]) -> Result<ExactScalar> {
    let (p, q) = (k.p(), k.q());
    if (phi.p(), phi.q()) != (p, q) {
        return Err(Error::SignatureMismatch("section and group element differ in (p, q)".into()));
    }
    check_len(p * q, zeta.len())?;
    check_len(q, v.len())?;
    let a_adj = adjoint(&k.a);
    let d_adj = adjoint(&k.d);
    let mut moved = vec![ExactScalar::zero(); p * q];
    for i in 0..p {
        for j in 0..q {
            let mut acc = ExactScalar::zero();
            for r in 0..p {
                for s in 0..q {
                    acc += &a_adj[i][r] * &zeta[r * q + s] * &k.d[s][j];
                }
            }
            moved[i * q + j] = acc;
        }
    }
    let w: Vec<ExactScalar> = (0..q).map(|i| (0..q).fold(ExactScalar::zero(), |acc, j| acc + &d_adj[i][j] * &v[j])).collect();
    Ok(k.det_d() * phi.eval_exact(&moved, &w)?)
}

/// Exact `σ(k) f(z) = det(D) f(A* z_R, D* z_S)`.
///
/// The antiholomorphic block substitutes `z̄_i ↦ Σ_j D_{ji} z̄_j`.
pub fn sigma_compact(k: &CompactElement, f: &FockPoly) -> Result<FockPoly> {
    let (p, q) = (k.p(), k.q());
    if (f.p(), f.q()) != (p, q) {
        return Err(Error::SignatureMismatch("polynomial and group element differ in (p, q)".into()));
    }
    let a_adj = adjoint(&k.a);
    let hol: Vec<FockPoly> = (0..p)
        .map(|i| {
            let mut out = FockPoly::zero(p, q);
            for j in 0..p {
                out.add_term(MultiIndex::unit(p, j), MultiIndex::zeros(q), a_adj[i][j].clone()).expect("shape fixed");
            }
            out
        })
        .collect();
    let anti: Vec<FockPoly> = (0..q)
        .map(|i| {
            let mut out = FockPoly::zero(p, q);
            for j in 0..q {
                out.add_term(MultiIndex::zeros(p), MultiIndex::unit(q, j), k.d[j][i].clone()).expect("shape fixed");
            }
            out
        })
        .collect();

    let one = {
        let mut o = FockPoly::zero(p, q);
        o.add_term(MultiIndex::zeros(p), MultiIndex::zeros(q), ExactScalar::one())?;
        o
    };
    let mut out = FockPoly::zero(p, q);
    for ((l, m), coef) in f.terms() {
        let mut term = one.clone();
        for (i, &e) in l.entries().iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&hol[i])?;
            }
        }
        for (i, &e) in m.entries().iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&anti[i])?;
            }
        }
        out = out.add(&term.scale(coef))?;
    }
    Ok(out.scale(&k.det_d()))
}

/// Scalar in front of the oscillator integral: `det(D)`. With this factor
/// `Φₙ σ(g) = ωₙ(g) Φₙ`; the conjugate `det(D*)` breaks that identity by
/// `det(D)²` already on `K`.
pub fn sigma_prefactor(g: &GroupElement) -> Complex64 {
    g.d().determinant()
}

/// `f(Gw)` as a polynomial in `w, w̄ ∈ C^{p+q}`.
fn pullback(f: &NumericFockPoly, g: &DMatrix<Complex64>) -> ComplexPoly {
    let (p, q) = (f.p, f.q);
    let r = p + q;
    let rows: Vec<ComplexPoly> = (0..r)
        .map(|i| {
            let coeffs: Vec<Complex64> = (0..r).map(|j| g[(i, j)]).collect();
            if i < p {
                ComplexPoly::linear(&coeffs)
            } else {
                ComplexPoly::conj_linear(&coeffs.iter().map(|z| z.conj()).collect::<Vec<_>>())
            }
        })
        .collect();
    let mut out = ComplexPoly::zero(r);
    for ((l, m), a) in &f.terms {
        let mut term = ComplexPoly::constant(r, *a);
        for (i, &e) in l.entries().iter().chain(m.entries()).enumerate() {
            if e > 0 {
                term = term.mul(&rows[i].pow(e));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Truncation report for [`sigma_general`].
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated {
    pub poly: NumericFockPoly,
    /// Highest holomorphic degree `|l|` kept.
    pub levels: u32,
    /// Squared norm carried by the last level kept.
    pub tail: f64,
}

/// `σ(g) f` coefficient by coefficient:
/// `a_{l,m} = det(D)/(l! m!) ∫ f(Gw) w̄_R^l w_S^m e^{−w*Uw} dm(w)` with
/// `G = g^{−1}` and `U = ½(G*G + I)`, for levels `|l| = 0, 1, …` until a level
/// carries squared norm below `tol` or `max_levels` is reached.
pub fn sigma_general(g: &GroupElement, f: &FockPoly, tol: f64, max_levels: u32) -> Result<Truncated> {
    let (p, q) = (g.p(), g.q());
    if (f.p(), f.q()) != (p, q) {
        return Err(Error::SignatureMismatch("polynomial and group element differ in (p, q)".into()));
    }
    let n = f.pure_grade_or(0)?;
    let r = p + q;
    let ginv = g.inverse();
    let gm = ginv.matrix();
    let u = (gm.adjoint() * gm + DMatrix::identity(r, r)) * c(0.5);
    let base = pullback(&f.to_numeric(), gm);
    let pref = sigma_prefactor(g);
    let zero = vec![Complex64::zero(); r];

    let mut out = NumericFockPoly::zero(p, q);
    let mut tail = f64::INFINITY;
    let mut level = 0;
    while level <= max_levels {
        let hol = level as i64;
        let anti = hol + n;
        if anti >= 0 {
            let mut level_norm = 0.0;
            for l in enumerate_weight(level, p) {
                for m in enumerate_weight(anti as u32, q) {
                    let k = MultiIndex::new(std::iter::repeat_n(0, p).chain(m.entries().iter().copied()).collect());
                    let lbar = MultiIndex::new(l.entries().iter().copied().chain(std::iter::repeat_n(0, q)).collect());
                    let mono = ComplexPoly::monomial(k, lbar, Complex64::one())?;
                    let weight = crate::fock::factorial_index(&l) * crate::fock::factorial_index(&m);
                    let a = pref * gaussian_poly_integral(&base.mul(&mono), &u, &zero, &zero)? / weight;
                    if a.norm() > 0.0 {
                        level_norm += a.norm_sqr() * weight;
                        out.terms.insert((l.clone(), m), a);
                    }
                }
            }
            tail = level_norm;
            if level_norm < tol && level >= f.degree() {
                break;
            }
        }
        level += 1;
    }
    Ok(Truncated { poly: out, levels: level.min(max_levels), tail })
}

/// `Φₙ(σ(g) f)(ζ, v)` as one Gaussian integral over `(w, w') ∈ C^{p+q} × C^q`:
/// quadratic form `[[U, −Z], [−T, I]]` with `Z = [ζ; 0]`, `T = [0, I_q]`,
/// source `v` on `w'`, and polynomial `f(Gw)`.
pub fn phi_sigma_eval(g: &GroupElement, f: &FockPoly, zeta: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    let (p, q) = (g.p(), g.q());
    if (f.p(), f.q()) != (p, q) {
        return Err(Error::SignatureMismatch("polynomial and group element differ in (p, q)".into()));
    }
    check_len(p * q, zeta.len())?;
    check_len(q, v.len())?;
    let r = p + q;
    let dim = r + q;
    let ginv = g.inverse();
    let gm = ginv.matrix();
    let u = (gm.adjoint() * gm + DMatrix::identity(r, r)) * c(0.5);

    let mut big = DMatrix::zeros(dim, dim);
    big.view_mut((0, 0), (r, r)).copy_from(&u);
    for i in 0..p {
        for j in 0..q {
            big[(i, r + j)] = -zeta[i * q + j];
        }
    }
    for j in 0..q {
        big[(r + j, p + j)] = c(-1.0);
        big[(r + j, r + j)] = c(1.0);
    }

    let small = pullback(&f.to_numeric(), gm);
    let mut poly = ComplexPoly::zero(dim);
    for ((k, l), a) in small.terms() {
        let pad = |x: &MultiIndex| MultiIndex::new(x.entries().iter().copied().chain(std::iter::repeat_n(0, q)).collect());
        poly.add_term(pad(k), pad(l), *a);
    }
    let mut a = vec![Complex64::zero(); dim];
    a[r..].copy_from_slice(v);
    let b = vec![Complex64::zero(); dim];
    Ok(sigma_prefactor(g) * gaussian_poly_integral(&poly, &big, &a, &b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fock_inner;
    use crate::moments::{quad_oracle, Budget, Domain, Method};
    use crate::scalar::{from_int, from_ratio, gaussian, rational};
    use crate::section::in_disk;
    use crate::transform::{phi, phi_eval};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn q_(re: i64, im: i64, den: i64) -> ExactScalar {
        gaussian(rational(re, den), rational(im, den))
    }

    fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
        Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    fn rand_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
        let m = DMatrix::from_fn(n, n, |_, _| rand_c(rng, 1.0));
        m.qr().q()
    }

    fn rand_element(rng: &mut ChaCha8Rng, p: usize, q: usize) -> GroupElement {
        let mut g = GroupElement::compact(&rand_unitary(rng, p), &rand_unitary(rng, q)).unwrap();
        for _ in 0..2 {
            let b = GroupElement::boost(p, q, rng.gen_range(0..p), rng.gen_range(0..q), rng.gen_range(-0.6..0.6)).unwrap();
            let k = GroupElement::compact(&rand_unitary(rng, p), &rand_unitary(rng, q)).unwrap();
            g = g.mul(&b).unwrap().mul(&k).unwrap();
        }
        g
    }

    fn rand_point(rng: &mut ChaCha8Rng, p: usize, q: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let r = 0.5 / ((p * q) as f64).sqrt();
        ((0..p * q).map(|_| rand_c(rng, r)).collect(), (0..q).map(|_| rand_c(rng, 1.0)).collect())
    }

    /// `A = (3+4i)/5`, `D = diag((3+4i)/5, 1) · rotation(3/5, 4/5)`; `det D`
    /// is not real, so determinant conventions are visible.
    fn rational_k() -> CompactElement {
        let a = vec![vec![q_(3, 4, 5)]];
        let d = vec![vec![q_(9, 12, 25), q_(-12, -16, 25)], vec![from_ratio(4, 5), from_ratio(3, 5)]];
        CompactElement::new(a, d).unwrap()
    }

    #[test]
    fn membership() {
        assert!(check_group(2, 2, GroupElement::identity(2, 2).matrix()).unwrap());
        let b = GroupElement::boost(1, 1, 0, 0, 0.7).unwrap();
        assert!(check_group(1, 1, b.matrix()).unwrap());
        assert!(rational_k().to_numeric().is_compact());
        let mut bad = b.matrix().clone();
        bad[(0, 1)] = c(0.0);
        assert!(!check_group(1, 1, &bad).unwrap());
        assert!(GroupElement::new(1, 1, bad).is_err());
        assert!(check_group(1, 2, b.matrix()).is_err());
        let g = rand_element(&mut ChaCha8Rng::seed_from_u64(1), 2, 3);
        assert!(check_group(2, 3, g.mul(&g.inverse()).unwrap().matrix()).unwrap());
    }

    #[test]
    fn compact_blocks_must_be_unitary() {
        assert!(CompactElement::new(vec![vec![from_int(2)]], vec![vec![from_int(1)]]).is_err());
        assert!(CompactElement::new(vec![vec![from_int(1)]], vec![vec![from_int(1), from_int(0)]]).is_err());
    }

    #[test]
    fn disk_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (p, q) = (2, 2);
        for _ in 0..10 {
            let (z, _) = rand_point(&mut rng, p, q);
            let z = DMatrix::from_row_slice(p, q, &z);
            assert_eq!(mobius(&GroupElement::identity(p, q), &z).unwrap(), z);
            let (g1, g2) = (rand_element(&mut rng, p, q), rand_element(&mut rng, p, q));
            let once = mobius(&g1.mul(&g2).unwrap(), &z).unwrap();
            let twice = mobius(&g1, &mobius(&g2, &z).unwrap()).unwrap();
            assert!((once - &twice).norm() < 1e-10);
            assert!(in_disk(&twice));
            let a = rand_unitary(&mut rng, p);
            let d = rand_unitary(&mut rng, q);
            let k = GroupElement::compact(&a, &d).unwrap();
            let want = &a * &z * d.try_inverse().unwrap();
            assert!((mobius(&k, &z).unwrap() - want).norm() < 1e-12);
            assert_eq!(mobius(&k, &DMatrix::zeros(p, q)).unwrap(), DMatrix::zeros(p, q));
        }
    }

    fn rand_fiber(rng: &mut ChaCha8Rng, n: u32, q: usize) -> FiberPoly {
        let mut f = FiberPoly::new(q);
        for eta in enumerate_weight(n, q) {
            f.add_term(eta, rand_c(rng, 1.0));
        }
        f
    }

    #[test]
    fn multiplier_scalar_law_and_cocycle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (p, q, n) = (1, 3, 2);
        let f = rand_fiber(&mut rng, n, q);
        let z = DMatrix::from_row_slice(p, q, &rand_point(&mut rng, p, q).0);
        assert!(multiplier(&GroupElement::identity(p, q), &z, &f).unwrap().distance(&f) < 1e-14);

        let theta = 0.37;
        let got = multiplier(&GroupElement::scalar(p, q, theta), &z, &f).unwrap();
        let want = f.scale(Complex64::from_polar(1.0, theta * (q as f64 + n as f64)));
        assert!(got.distance(&want) < 1e-12);

        for _ in 0..5 {
            let (g1, g2) = (rand_element(&mut rng, p, q), rand_element(&mut rng, p, q));
            let lhs = multiplier(&g1.mul(&g2).unwrap(), &z, &f).unwrap();
            let moved = mobius(&g2, &z).unwrap();
            let rhs = multiplier(&g1, &moved, &multiplier(&g2, &z, &f).unwrap()).unwrap();
            assert!(lhs.distance(&rhs) < 1e-10);
        }
    }

    #[test]
    fn omega_is_a_representation() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let f = FockPoly::monomial(mi(&[1, 1]), mi(&[2, 1]));
        let s = phi(&f).unwrap();
        let (g1, g2) = (rand_element(&mut rng, 2, 2), rand_element(&mut rng, 2, 2));
        let g12 = g1.mul(&g2).unwrap();
        for _ in 0..10 {
            let (z, v) = rand_point(&mut rng, 2, 2);
            let direct = omega_eval(&g12, &s, &z, &v).unwrap();
            let nested = omega_eval_with(&g1, &z, &v, |z2, v2| omega_eval(&g2, &s, z2, v2)).unwrap();
            assert!((direct - nested).norm() < 1e-9 * direct.norm().max(1.0));
            let id = omega_eval(&GroupElement::identity(2, 2), &s, &z, &v).unwrap();
            assert!((id - s.eval(&z, &v).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn sigma_on_compact_closed_form() {
        let one = CompactElement::new(vec![vec![from_int(1)]], vec![vec![from_int(1), from_int(0)], vec![from_int(0), from_int(1)]]).unwrap();
        let f = FockPoly::monomial(mi(&[1]), mi(&[1, 0]));
        assert_eq!(sigma_compact(&one, &f).unwrap(), f);

        let swap = CompactElement::new(vec![vec![from_int(1)]], vec![vec![from_int(0), from_int(1)], vec![from_int(1), from_int(0)]]).unwrap();
        let mut want = FockPoly::zero(1, 2);
        want.add_term(mi(&[1]), mi(&[0, 1]), from_int(-1)).unwrap();
        assert_eq!(sigma_compact(&swap, &f).unwrap(), want);

        // e^{−iθ} I with e^{−iθ} = (3−4i)/5: det(D) e^{−inθ} = e^{−iθ(q+n)}.
        let ph = q_(3, -4, 5);
        let zero = ExactScalar::zero();
        let k = CompactElement::new(vec![vec![ph.clone()]], vec![vec![ph.clone(), zero.clone()], vec![zero, ph.clone()]]).unwrap();
        let g = FockPoly::monomial(mi(&[1]), mi(&[2, 1]));
        let phase = ph.powi(4);
        assert_eq!(sigma_compact(&k, &g).unwrap(), g.scale(&phase));
    }

    #[test]
    fn sigma_compact_is_exactly_unitary_and_graded() {
        let k = rational_k();
        let f = FockPoly::from_terms(
            1,
            2,
            [
                (mi(&[1]), mi(&[2, 1]), from_ratio(1, 2)),
                (mi(&[0]), mi(&[1, 1]), q_(1, -3, 1)),
                (mi(&[2]), mi(&[0, 4]), from_int(5)),
            ],
        )
        .unwrap();
        let h = FockPoly::monomial(mi(&[1]), mi(&[0, 3]));
        let (sf, sh) = (sigma_compact(&k, &f).unwrap(), sigma_compact(&k, &h).unwrap());
        assert_eq!(fock_inner(&sf, &sh).unwrap(), fock_inner(&f, &h).unwrap());
        assert_eq!(fock_inner(&sf, &sf).unwrap(), fock_inner(&f, &f).unwrap());
        assert_eq!(sf.pure_grade_or(0).unwrap(), 2);
    }

    /// Quadrature of the defining integral on `K`, where it reduces to
    /// `det(D) ∫ f(k^{−1}w) e^{w_R* z_R + z_S* w_S} e^{−|w|²} dm(w)`.
    #[test]
    fn sigma_compact_against_quadrature() {
        let k = rational_k();
        let kn = k.to_numeric();
        let kinv = kn.inverse().matrix().clone();
        let det = kn.d().determinant();
        let z = [Complex64::new(0.3, -0.2), Complex64::new(-0.4, 0.1), Complex64::new(0.2, 0.5)];
        for (l, m) in [(mi(&[1]), mi(&[1, 0])), (mi(&[0]), mi(&[2, 1])), (mi(&[1]), mi(&[0, 2])), (mi(&[2]), mi(&[1, 0]))] {
            let f = FockPoly::monomial(l, m);
            let integrand = |w: &[Complex64]| {
                let x = &kinv * DMatrix::from_column_slice(3, 1, w);
                let e = w[0].conj() * z[0] + z[1].conj() * w[1] + z[2].conj() * w[2];
                det * f.eval(x.as_slice()).unwrap() * e.exp()
            };
            let est = quad_oracle(integrand, &Domain::Gaussian(3), &Budget { nodes: 10, ..Budget::default() });
            assert_eq!(est.method, Method::Quadrature);
            let want = sigma_compact(&k, &f).unwrap().eval(&z).unwrap();
            assert!((est.value - want).norm() < 1e-8, "{} vs {want}", est.value);
        }
    }

    #[test]
    fn sigma_general_matches_compact_and_identity() {
        let f = FockPoly::from_terms(1, 2, [(mi(&[1]), mi(&[2, 0]), from_int(2)), (mi(&[0]), mi(&[0, 1]), q_(0, 1, 1))]).unwrap();
        let id = sigma_general(&GroupElement::identity(1, 2), &f, 1e-14, 6).unwrap();
        assert!(id.poly.distance(&f.to_numeric()) < 1e-12);
        let k = rational_k();
        let got = sigma_general(&k.to_numeric(), &f, 1e-14, 6).unwrap();
        assert!(got.poly.distance(&sigma_compact(&k, &f).unwrap().to_numeric()) < 1e-8);
    }

    #[test]
    fn boost_preserves_norm() {
        let f = FockPoly::monomial(mi(&[0]), mi(&[1]));
        let g = GroupElement::boost(1, 1, 0, 0, 0.7).unwrap();
        let out = sigma_general(&g, &f, 1e-12, 60).unwrap();
        assert!(out.tail < 1e-12);
        assert!((out.poly.norm_sqr() - 1.0).abs() < 1e-6, "{}", out.poly.norm_sqr());
        // The z̄₂ coefficient is 1/cosh² s.
        let lead = out.poly.coefficient(&mi(&[0]), &mi(&[1]));
        assert!((lead - c(0.7f64.cosh().powi(-2))).norm() < 1e-12);
    }

    #[test]
    fn truncated_sigma_agrees_with_closed_integral() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = rand_element(&mut rng, 1, 2);
        let f = FockPoly::monomial(mi(&[1]), mi(&[1, 1]));
        let out = sigma_general(&g, &f, 1e-20, 40).unwrap();
        for _ in 0..3 {
            let (z, v) = rand_point(&mut rng, 1, 2);
            let series = phi_eval(&out.poly, 1, &z, &v).unwrap();
            let closed = phi_sigma_eval(&g, &f, &z, &v).unwrap();
            assert!((series - closed).norm() < 1e-8 * closed.norm().max(1.0), "{series} vs {closed}");
        }
    }

    #[test]
    fn intertwining_exact_on_compact() {
        let k = rational_k();
        let f = FockPoly::from_terms(1, 2, [(mi(&[2]), mi(&[1, 3]), from_int(1)), (mi(&[1]), mi(&[1, 2]), q_(2, 1, 3))]).unwrap();
        let s = phi(&f).unwrap();
        let moved = phi(&sigma_compact(&k, &f).unwrap()).unwrap();
        for (z, v) in [
            ([from_ratio(1, 3), q_(0, 1, 4)], [from_int(1), q_(2, -1, 3)]),
            ([q_(1, 1, 5), from_ratio(-1, 2)], [q_(0, 3, 2), from_ratio(1, 7)]),
        ] {
            assert_eq!(omega_compact(&k, &s, &z, &v).unwrap(), moved.eval_exact(&z, &v).unwrap());
        }
    }

    #[test]
    fn intertwining_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (p, q, f) in [
            (1, 1, FockPoly::monomial(mi(&[1]), mi(&[3]))),
            (1, 2, FockPoly::monomial(mi(&[1]), mi(&[1, 2]))),
            (2, 2, FockPoly::monomial(mi(&[1, 0]), mi(&[1, 1]))),
        ] {
            let g = rand_element(&mut rng, p, q);
            let s = phi(&f).unwrap();
            for _ in 0..4 {
                let (z, v) = rand_point(&mut rng, p, q);
                let lhs = omega_eval(&g, &s, &z, &v).unwrap();
                let rhs = phi_sigma_eval(&g, &f, &z, &v).unwrap();
                assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "({p},{q}): {lhs} vs {rhs}");
            }
        }
    }
}
