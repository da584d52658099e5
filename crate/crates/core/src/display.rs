//! Unicode rendering of polynomials and sections, e.g. `18 ζ₂²ζ₃ v̄₁v̄₂`.

use num_rational::BigRational;

use crate::fock::FockPoly;
use crate::index::{MatrixIndex, MultiIndex};
use crate::scalar::{self, ExactScalar};
use crate::section::DiskSection;

const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
const SUP: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn digits(n: usize, table: &[char; 10]) -> String {
    n.to_string().bytes().map(|b| table[(b - b'0') as usize]).collect()
}

fn factor(name: &str, index: String, power: u32) -> String {
    if power == 1 {
        format!("{name}{index}")
    } else {
        format!("{name}{index}{}", digits(power as usize, &SUP))
    }
}

fn zeta_part(gamma: &MatrixIndex) -> String {
    let mut out = String::new();
    for i in 0..gamma.rows() {
        for j in 0..gamma.cols() {
            let e = gamma.get(i, j);
            if e > 0 {
                let index = if gamma.rows() == 1 {
                    digits(j + 1, &SUB)
                } else {
                    format!("{}{}", digits(i + 1, &SUB), digits(j + 1, &SUB))
                };
                out.push_str(&factor("ζ", index, e));
            }
        }
    }
    out
}

fn vars(name: &str, m: &MultiIndex, offset: usize) -> String {
    m.entries().iter().enumerate().filter(|(_, &e)| e > 0).map(|(j, &e)| factor(name, digits(j + 1 + offset, &SUB), e)).collect()
}

fn term(c: &ExactScalar, parts: &[String]) -> String {
    let mono: Vec<&str> = parts.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    let coef = scalar::display_scalar(c);
    match (coef.as_str(), mono.is_empty()) {
        (_, true) => coef,
        ("1", false) => mono.join(" "),
        ("-1", false) => format!("-{}", mono.join(" ")),
        _ => format!("{coef} {}", mono.join(" ")),
    }
}

fn join(terms: Vec<String>) -> String {
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// `Σ c ζ^γ v̄^η` with absolute coefficients, components in lexicographic
/// order of `η`.
pub fn format_section(phi: &DiskSection) -> String {
    let mut terms = Vec::new();
    for (eta, poly) in phi.components() {
        let inv = scalar::real(BigRational::new(1.into(), eta.factorial()));
        for (gamma, c) in poly.terms() {
            terms.push(term(&(c * &inv), &[zeta_part(gamma), vars("v̄", eta, 0)]));
        }
    }
    join(terms)
}

/// `Σ a z_R^l z̄_S^m` with global variable numbering `z₁ … z_{p+q}`.
pub fn format_fock(f: &FockPoly) -> String {
    join(f.terms().iter().map(|((l, m), c)| term(c, &[vars("z", l, 0) + &vars("z̄", m, f.p())])).collect())
}
