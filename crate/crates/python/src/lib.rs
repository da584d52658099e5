use ladder_transform::error::Error;
use ladder_transform::transform::{phi, phi_with_grade};
use ladder_transform::{diffops, display, inversion, json, scalar};
use pyo3::exceptions::{PyNotImplementedError, PyValueError};
use pyo3::prelude::*;

/// `((r1, r2), (c1, c2))`, 1-based.
type MinorIndex = ((usize, usize), (usize, usize));

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Unsupported(_) => PyNotImplementedError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Polynomial JSON to section JSON; `n` defaults to the grade of the input.
#[pyfunction]
#[pyo3(signature = (fock_json, n=None))]
fn transform(fock_json: &str, n: Option<i64>) -> PyResult<String> {
    let f = json::fock_from_json(fock_json).map_err(to_py)?;
    let s = match n {
        Some(n) => phi_with_grade(&f, n),
        None => phi(&f),
    }
    .map_err(to_py)?;
    Ok(json::section_to_json(&s))
}

/// Section JSON back to polynomial JSON (p = 1).
#[pyfunction]
fn invert(section_json: &str) -> PyResult<String> {
    let s = json::section_from_json(section_json).map_err(to_py)?;
    Ok(json::fock_to_json(&inversion::invert(&s).map_err(to_py)?))
}

/// Pairing of two sections as an exact `"num/den"` string (p = 1).
#[pyfunction]
fn pairing(a_json: &str, b_json: &str) -> PyResult<String> {
    let a = json::section_from_json(a_json).map_err(to_py)?;
    let b = json::section_from_json(b_json).map_err(to_py)?;
    Ok(scalar::format_exact(&inversion::pairing(&a, &b).map_err(to_py)?))
}

/// Every minor that fails to annihilate the section.
#[pyfunction]
fn failing_minors(section_json: &str) -> PyResult<Vec<MinorIndex>> {
    let s = json::section_from_json(section_json).map_err(to_py)?;
    Ok(diffops::failing_minors(&s).map_err(to_py)?.into_iter().map(|m| (m.rows, m.cols)).collect())
}

#[pyfunction]
fn format_section(section_json: &str) -> PyResult<String> {
    Ok(display::format_section(&json::section_from_json(section_json).map_err(to_py)?))
}

#[pyfunction]
fn format_fock(fock_json: &str) -> PyResult<String> {
    Ok(display::format_fock(&json::fock_from_json(fock_json).map_err(to_py)?))
}

#[pymodule]
fn ladder_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(failing_minors, m)?)?;
    m.add_function(wrap_pyfunction!(format_section, m)?)?;
    m.add_function(wrap_pyfunction!(format_fock, m)?)?;
    Ok(())
}
