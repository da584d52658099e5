//! The transform `Φₙ` from grade-`n` Fock polynomials to disk sections, in
//! closed combinatorial form.
//!
//! For `f = z_R^α z̄_S^β` with `|β| − |α| = n`,
//! `ψ^{(η)} = Σ_{γ ∈ M(α, β−η)} α!β!/γ! ζ^γ` for each `η ≤ β` with `|η| = n`.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{check_len, Error, Result};
use crate::fock::{factorial_index, FockPoly, Grade, NumericFockPoly};
use crate::index::{enumerate_bounded, enumerate_margin_tables, MatrixIndex, MultiIndex};
use crate::scalar::{self, ExactScalar};
use crate::section::{DiskPoly, DiskSection};

/// `Φₙ f` with `n` read off the grade of `f`; the zero polynomial maps to
/// the zero section at `n = 0`.
pub fn phi(f: &FockPoly) -> Result<DiskSection> {
    let n = f.pure_grade_or(0)?;
    phi_with_grade(f, n)
}

/// `Φₙ f` for an explicitly requested `n`. Negative `n` gives the zero
/// section.
pub fn phi_with_grade(f: &FockPoly, n: i64) -> Result<DiskSection> {
    match f.grade() {
        Grade::Mixed => return Err(f.pure_grade_or(0).unwrap_err()),
        Grade::Pure(g) if g != n => return Err(Error::GradeMismatch { expected: n, actual: g }),
        _ => {}
    }
    let mut out = DiskSection::zero(f.p(), f.q(), n);
    if n < 0 {
        return Ok(out);
    }
    for ((alpha, beta), a) in f.terms() {
        for (eta, poly) in monomial_components(alpha, beta, n as u32) {
            out.insert_unchecked(eta, poly.scale(a));
        }
    }
    Ok(out)
}

/// Components of `Φₙ(z_R^α z̄_S^β)` with unit coefficient.
fn monomial_components(alpha: &MultiIndex, beta: &MultiIndex, n: u32) -> Vec<(MultiIndex, DiskPoly)> {
    let ab = alpha.factorial() * beta.factorial();
    enumerate_bounded(n, beta.entries())
        .into_iter()
        .filter_map(|eta| {
            let rest = beta.checked_sub(&eta)?;
            let mut poly = DiskPoly::new();
            for gamma in enumerate_margin_tables(alpha, &rest) {
                let c = BigRational::new(ab.clone(), gamma.factorial());
                poly.add_term(gamma, scalar::real(c));
            }
            (!poly.is_zero()).then_some((eta, poly))
        })
        .collect()
}

/// `φ_ν = Φₙ(z₁^{|ν|−n} z̄_S^ν)` directly:
/// `ψ^{(η)} = ν!(|ν|−n)!/(ν−η)! ζ^{ν−η}` for `η ≤ ν`.
pub fn phi_ball(nu: &MultiIndex, n: u32) -> Result<DiskSection> {
    if nu.modulus() < n {
        return Err(Error::InvalidArgument(format!("|ν| = {} is below n = {n}", nu.modulus())));
    }
    let q = nu.len();
    let lead = BigRational::from_integer(nu.factorial() * scalar::factorial(nu.modulus() - n));
    let mut out = DiskSection::zero(1, q, i64::from(n));
    for eta in enumerate_bounded(n, nu.entries()) {
        let rest = nu.checked_sub(&eta).expect("η ≤ ν by construction");
        let c = &lead / BigRational::from_integer(rest.factorial());
        out.insert_unchecked(eta, DiskPoly::monomial(MatrixIndex::from_row(&rest), scalar::real(c)));
    }
    Ok(out)
}

/// Pointwise `(Φₙ f)(ζ, v)` for a float-coefficient polynomial, using the
/// same closed form. `zeta` is row-major `p × q`.
pub fn phi_eval(f: &NumericFockPoly, n: i64, zeta: &[Complex64], v: &[Complex64]) -> Result<Complex64> {
    let (p, q) = (f.p, f.q);
    check_len(p * q, zeta.len())?;
    check_len(q, v.len())?;
    let mut acc = Complex64::zero();
    if n < 0 {
        return Ok(acc);
    }
    for ((alpha, beta), &a) in &f.terms {
        let g = i64::from(beta.modulus()) - i64::from(alpha.modulus());
        if g != n {
            return Err(Error::GradeMismatch { expected: n, actual: g });
        }
        let ab = factorial_index(alpha) * factorial_index(beta);
        for eta in enumerate_bounded(n as u32, beta.entries()) {
            let Some(rest) = beta.checked_sub(&eta) else { continue };
            let mut vbar = Complex64::one() / factorial_index(&eta);
            for (j, &e) in eta.entries().iter().enumerate() {
                vbar *= v[j].conj().powu(e);
            }
            for gamma in enumerate_margin_tables(alpha, &rest) {
                let mut t = a * ab;
                for (k, &e) in gamma.entries().iter().enumerate() {
                    if e > 0 {
                        t *= zeta[k].powu(e) / scalar::factorial_f64(e);
                    }
                }
                acc += t * vbar;
            }
        }
    }
    Ok(acc)
}

/// The integrand of the defining integral, `f(ζw, w) e^{v*w}`, as a function
/// of `w ∈ C^q` (to be integrated against `e^{−|w|²} dm`).
pub fn phi_integrand<'a>(
    f: &'a FockPoly,
    zeta: &'a [Complex64],
    v: &'a [Complex64],
) -> impl Fn(&[Complex64]) -> Complex64 + 'a {
    let (p, q) = (f.p(), f.q());
    move |w: &[Complex64]| {
        let mut z = Vec::with_capacity(p + q);
        for i in 0..p {
            z.push((0..q).map(|j| zeta[i * q + j] * w[j]).sum());
        }
        z.extend_from_slice(w);
        let vw: Complex64 = v.iter().zip(w).map(|(a, b)| a.conj() * b).sum();
        f.eval(&z).expect("dimensions fixed by f") * vw.exp()
    }
}

/// Convenience: the exact coefficient of `ζ^γ` in `ψ^{(η)}`.
pub fn coefficient(section: &DiskSection, eta: &MultiIndex, gamma: &MatrixIndex) -> ExactScalar {
    section.component(eta).map(|p| p.coefficient(gamma)).unwrap_or_else(ExactScalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::weight_count;
    use crate::moments::{quad_oracle, Budget, Domain};
    use crate::scalar::from_int;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn row(v: &[u32]) -> MatrixIndex {
        MatrixIndex::from_row(&mi(v))
    }

    fn worked_example() -> FockPoly {
        FockPoly::monomial(mi(&[3]), mi(&[1, 3, 1]))
    }

    #[test]
    fn worked_example_terms() {
        let s = phi(&worked_example()).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.num_components(), 4);
        assert_eq!(s.num_terms(), 4);
        assert_eq!(coefficient(&s, &mi(&[0, 1, 1]), &row(&[1, 2, 0])), from_int(18));
        assert_eq!(coefficient(&s, &mi(&[0, 2, 0]), &row(&[1, 1, 1])), from_int(36));
        assert_eq!(coefficient(&s, &mi(&[1, 0, 1]), &row(&[0, 3, 0])), from_int(6));
        assert_eq!(coefficient(&s, &mi(&[1, 1, 0]), &row(&[0, 2, 1])), from_int(18));
        assert_eq!(phi_ball(&mi(&[1, 3, 1]), 2).unwrap(), s);
    }

    #[test]
    fn negative_grade_maps_to_zero() {
        let f = FockPoly::monomial(mi(&[3]), mi(&[1, 0]));
        let s = phi(&f).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.n(), -2);
    }

    #[test]
    fn grade_errors() {
        let f = FockPoly::monomial(mi(&[1]), mi(&[1, 1])).add(&FockPoly::monomial(mi(&[0]), mi(&[0, 0]))).unwrap();
        assert!(matches!(phi(&f), Err(Error::MixedGrade(..))));
        assert!(matches!(phi_with_grade(&worked_example(), 1), Err(Error::GradeMismatch { .. })));
        assert!(phi_with_grade(&FockPoly::zero(1, 2), 3).unwrap().is_zero());
    }

    #[test]
    fn single_margin_table_for_two_by_two() {
        let f = FockPoly::monomial(mi(&[1, 0]), mi(&[1, 0]));
        let s = phi(&f).unwrap();
        let mut gamma = MatrixIndex::zeros(2, 2);
        gamma.set(0, 0, 1);
        assert_eq!(s.num_terms(), 1);
        assert_eq!(coefficient(&s, &mi(&[0, 0]), &gamma), from_int(1));
    }

    #[test]
    fn ball_sections_by_hand() {
        let s = phi_ball(&mi(&[1, 1]), 1).unwrap();
        let comps: Vec<_> = s.components().map(|(e, p)| (e.clone(), p.clone())).collect();
        assert_eq!(comps[0], (mi(&[0, 1]), DiskPoly::monomial(row(&[1, 0]), from_int(1))));
        assert_eq!(comps[1], (mi(&[1, 0]), DiskPoly::monomial(row(&[0, 1]), from_int(1))));
        let top = phi_ball(&mi(&[2, 1]), 3).unwrap();
        assert_eq!(top.num_terms(), 1);
        assert_eq!(coefficient(&top, &mi(&[2, 1]), &row(&[0, 0])), from_int(2));
        assert!(phi_ball(&mi(&[1, 0]), 2).is_err());
    }

    #[test]
    fn float_evaluation_matches_exact_section() {
        let f = worked_example().add(&FockPoly::monomial(mi(&[1]), mi(&[2, 0, 1]))).unwrap();
        let s = phi(&f).unwrap();
        let zeta = [Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.2), Complex64::new(0.1, -0.4)];
        let v = [Complex64::new(0.5, 0.5), Complex64::new(-1.0, 0.2), Complex64::new(0.3, 0.0)];
        let want = s.eval(&zeta, &v).unwrap();
        let got = phi_eval(&f.to_numeric(), 2, &zeta, &v).unwrap();
        assert!((got - want).norm() < 1e-10 * want.norm().max(1.0));
    }

    #[test]
    fn defining_integral_agrees_for_two_by_two() {
        let f = FockPoly::monomial(mi(&[1, 0]), mi(&[1, 0]));
        let s = phi(&f).unwrap();
        let zeta = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.0), Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.3)];
        let v = [Complex64::new(0.4, -0.2), Complex64::new(0.1, 0.3)];
        let e = quad_oracle(phi_integrand(&f, &zeta, &v), &Domain::Gaussian(2), &Budget { nodes: 10, ..Budget::default() });
        let want = s.eval(&zeta, &v).unwrap();
        assert!((e.value - want).norm() < 1e-6, "{e:?} vs {want}");
    }

    #[test]
    fn distinct_ball_monomials_never_share_a_component() {
        for q in 1..=3usize {
            for total in 0..=6u32 {
                for n in 0..=total {
                    let mut seen = std::collections::BTreeMap::new();
                    for nu in enumerate_bounded(total, &vec![total; q]) {
                        let s = phi_ball(&nu, n).unwrap();
                        assert!(!s.is_zero());
                        for (eta, poly) in s.components() {
                            let key = (eta.clone(), format!("{poly:?}"));
                            assert!(seen.insert(key, nu.clone()).is_none(), "shared component for q={q} n={n}");
                        }
                    }
                    assert_eq!(seen.values().collect::<std::collections::BTreeSet<_>>().len(), weight_count(total, q));
                }
            }
        }
    }
}
