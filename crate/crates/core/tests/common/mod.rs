#![allow(dead_code)]

use ladder_transform::fock::FockPoly;
use ladder_transform::index::{enumerate_weight, MultiIndex};
use ladder_transform::scalar::{gaussian, rational, ExactScalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn mi(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.to_vec())
}

pub fn random_scalar<R: Rng>(rng: &mut R) -> ExactScalar {
    let den = rng.gen_range(1..=9);
    gaussian(rational(rng.gen_range(-9..=9), den), rational(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
}

pub fn random_index<R: Rng>(rng: &mut R, weight: u32, len: usize) -> MultiIndex {
    enumerate_weight(weight, len).choose(rng).expect("nonempty").clone()
}

/// Up to `terms` random monomials of grade `n` and total degree at most
/// `max_degree`, with random Gaussian-rational coefficients.
pub fn random_graded<R: Rng>(rng: &mut R, p: usize, q: usize, n: u32, max_degree: u32, terms: usize) -> FockPoly {
    assert!(n <= max_degree);
    let mut f = FockPoly::zero(p, q);
    for _ in 0..terms {
        let k = rng.gen_range(0..=(max_degree - n) / 2);
        let l = random_index(rng, k, p);
        let m = random_index(rng, k + n, q);
        f.add_term(l, m, random_scalar(rng)).expect("shapes agree");
    }
    f
}
