//! Exact complex scalars with rational parts, plus the factorial helpers every
//! closed form in this crate leans on.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Complex number with exact rational real and imaginary parts.
pub type ExactScalar = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: i64) -> ExactScalar {
    Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
}

pub fn from_ratio(num: i64, den: i64) -> ExactScalar {
    Complex::new(rational(num, den), BigRational::zero())
}

pub fn gaussian(re: BigRational, im: BigRational) -> ExactScalar {
    Complex::new(re, im)
}

pub fn real(r: BigRational) -> ExactScalar {
    Complex::new(r, BigRational::zero())
}

pub fn imag_unit() -> ExactScalar {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn is_zero(c: &ExactScalar) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_q(n: u32) -> BigRational {
    BigRational::from_integer(factorial(n))
}

/// `n! / m!` for `n >= m`, as an integer.
pub fn falling(n: u32, m: u32) -> BigInt {
    debug_assert!(n >= m);
    (m + 1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn factorial_f64(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a ratio of floats for values outside the direct range.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_c64(c: &ExactScalar) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

/// Formats a rational as `"num/den"`, always including the denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `"num/den"` for real values, `"a/b + c/di"` otherwise.
pub fn format_exact(c: &ExactScalar) -> String {
    if c.im.is_zero() {
        format_rational(&c.re)
    } else {
        format!("{} + {}i", format_rational(&c.re), format_rational(&c.im))
    }
}

/// Parses `"num/den"` or a bare integer `"num"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Human-readable exact scalar: `36`, `-1/2`, `3/5 + 4/5i`, `-i`.
pub fn display_scalar(c: &ExactScalar) -> String {
    fn part(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => part(&c.re),
        (true, false) => format!("{}i", part(&c.im)),
        (false, false) => {
            let sign = if c.im < BigRational::zero() { "-" } else { "+" };
            format!("({} {} {}i)", part(&c.re), sign, part(&c.im.abs()))
        }
    }
}

/// Exact determinant of a square matrix over the Gaussian rationals, by
/// fraction-field elimination.
pub fn exact_determinant(rows: &[Vec<ExactScalar>]) -> Result<ExactScalar> {
    let n = rows.len();
    for r in rows {
        crate::error::check_len(n, r.len())?;
    }
    let mut a: Vec<Vec<ExactScalar>> = rows.to_vec();
    let mut det = from_int(1);
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !is_zero(&a[r][col])) else {
            return Ok(ExactScalar::zero());
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.clone();
        for r in col + 1..n {
            if is_zero(&a[r][col]) {
                continue;
            }
            let factor = a[r][col].clone() / p.clone();
            for c in col..n {
                let sub = factor.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - sub;
            }
        }
    }
    Ok(det)
}
