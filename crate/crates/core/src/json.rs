//! JSON forms of polynomials, sections and group elements. Exact
//! coefficients travel as `"num/den"` strings.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockPoly;
use crate::group::GroupElement;
use crate::index::{MatrixIndex, MultiIndex};
use crate::scalar::{self, ExactScalar};
use crate::section::DiskSection;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockTerm {
    l: Vec<u32>,
    m: Vec<u32>,
    re: String,
    im: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockJson {
    p: usize,
    q: usize,
    terms: Vec<FockTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyTerm {
    gamma: Vec<Vec<u32>>,
    re: String,
    im: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Component {
    eta: Vec<u32>,
    poly: Vec<PolyTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SectionJson {
    p: usize,
    q: usize,
    n: i64,
    components: Vec<Component>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    p: usize,
    q: usize,
    /// Rows of `[re, im]` pairs.
    entries: Vec<Vec<[f64; 2]>>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn scalar_from(re: &str, im: &str) -> Result<ExactScalar> {
    Ok(scalar::gaussian(scalar::parse_rational(re)?, scalar::parse_rational(im)?))
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

pub fn fock_to_json(f: &FockPoly) -> String {
    let terms = f
        .terms()
        .iter()
        .map(|((l, m), c)| FockTerm {
            l: l.entries().to_vec(),
            m: m.entries().to_vec(),
            re: scalar::format_rational(&c.re),
            im: scalar::format_rational(&c.im),
        })
        .collect();
    pretty(&FockJson { p: f.p(), q: f.q(), terms })
}

pub fn fock_from_json(s: &str) -> Result<FockPoly> {
    let raw: FockJson = serde_json::from_str(s).map_err(parse_err)?;
    let mut f = FockPoly::zero(raw.p, raw.q);
    for t in raw.terms {
        f.add_term(MultiIndex::new(t.l), MultiIndex::new(t.m), scalar_from(&t.re, &t.im)?)?;
    }
    Ok(f)
}

pub fn section_to_json(phi: &DiskSection) -> String {
    let components = phi
        .components()
        .map(|(eta, poly)| Component {
            eta: eta.entries().to_vec(),
            poly: poly
                .terms()
                .iter()
                .map(|(gamma, c)| PolyTerm {
                    gamma: gamma.row_vec().into_iter().map(MultiIndex::into_inner).collect(),
                    re: scalar::format_rational(&c.re),
                    im: scalar::format_rational(&c.im),
                })
                .collect(),
        })
        .collect();
    pretty(&SectionJson { p: phi.p(), q: phi.q(), n: phi.n(), components })
}

pub fn section_from_json(s: &str) -> Result<DiskSection> {
    let raw: SectionJson = serde_json::from_str(s).map_err(parse_err)?;
    let mut phi = DiskSection::zero(raw.p, raw.q, raw.n);
    for comp in raw.components {
        let eta = MultiIndex::new(comp.eta);
        for t in comp.poly {
            let rows: Vec<MultiIndex> = t.gamma.into_iter().map(MultiIndex::new).collect();
            phi.add_term(eta.clone(), MatrixIndex::from_rows(&rows)?, scalar_from(&t.re, &t.im)?)?;
        }
    }
    Ok(phi)
}

pub fn group_to_json(g: &GroupElement) -> String {
    let m = g.matrix();
    let entries = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    pretty(&GroupJson { p: g.p(), q: g.q(), entries })
}

/// Parses and checks membership in `U(p,q)`.
pub fn group_from_json(s: &str) -> Result<GroupElement> {
    let raw: GroupJson = serde_json::from_str(s).map_err(parse_err)?;
    let r = raw.p + raw.q;
    if raw.entries.len() != r || raw.entries.iter().any(|row| row.len() != r) {
        return Err(Error::Parse(format!("group element must be a {r}×{r} matrix")));
    }
    let m = DMatrix::from_fn(r, r, |i, j| Complex64::new(raw.entries[i][j][0], raw.entries[i][j][1]));
    GroupElement::new(raw.p, raw.q, m)
}
