mod common;

use common::{mi, random_graded};
use ladder_transform::diffops::annihilates;
use ladder_transform::fock::{fock_inner, FockPoly};
use ladder_transform::index::{enumerate_margin_tables, enumerate_weight, lex_compare, lex_successor, MatrixIndex, MultiIndex};
use ladder_transform::inversion::{invert, pairing};
use ladder_transform::json::{fock_from_json, fock_to_json, section_from_json, section_to_json};
use ladder_transform::operators::{eta_max, p_op};
use ladder_transform::scalar::from_int;
use ladder_transform::transform::{phi, phi_ball, phi_with_grade};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

fn graded(seed: u64, q: usize, n: u32) -> FockPoly {
    random_graded(&mut ChaCha8Rng::seed_from_u64(seed), 1, q, n, 7, 6)
}

fn brute_force_tables(rows: &MultiIndex, cols: &MultiIndex) -> Vec<MatrixIndex> {
    let (p, q) = (rows.len(), cols.len());
    let mut out = vec![MatrixIndex::zeros(p, q)];
    for i in 0..p {
        for j in 0..q {
            let bound = rows.get(i).min(cols.get(j));
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..=bound).map(move |v| {
                        let mut t = t.clone();
                        t.set(i, j, v);
                        t
                    })
                })
                .collect();
        }
    }
    out.retain(|t| t.row_sums() == *rows && t.col_sums() == *cols);
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transform_is_linear(s1 in any::<u64>(), s2 in any::<u64>(), q in 1usize..4, n in 0u32..4, k in -3i64..4) {
        let (f, g) = (graded(s1, q, n), graded(s2, q, n));
        let c = from_int(k);
        let lhs = phi_with_grade(&f.add(&g.scale(&c)).unwrap(), n.into()).unwrap();
        let rhs = phi_with_grade(&f, n.into()).unwrap().add(&phi_with_grade(&g, n.into()).unwrap().scale(&c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inversion_round_trip(seed in any::<u64>(), q in 1usize..4, n in 0u32..4) {
        let f = graded(seed, q, n);
        prop_assert_eq!(invert(&phi_with_grade(&f, n.into()).unwrap()).unwrap(), f);
    }

    #[test]
    fn pairing_is_unitary(s1 in any::<u64>(), s2 in any::<u64>(), q in 1usize..4, n in 0u32..4) {
        let (f, g) = (graded(s1, q, n), graded(s2, q, n));
        let (a, b) = (phi_with_grade(&f, n.into()).unwrap(), phi_with_grade(&g, n.into()).unwrap());
        prop_assert_eq!(pairing(&a, &b).unwrap(), fock_inner(&f, &g).unwrap());
        prop_assert_eq!(pairing(&b, &a).unwrap(), fock_inner(&f, &g).unwrap().conj());
    }

    #[test]
    fn images_are_annihilated(seed in any::<u64>(), q in 2usize..5, n in 1u32..4) {
        prop_assert!(annihilates(&phi_with_grade(&graded(seed, q, n), n.into()).unwrap()).unwrap());
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), q in 1usize..4, n in 0u32..3) {
        let f = graded(seed, q, n);
        prop_assert_eq!(fock_from_json(&fock_to_json(&f)).unwrap(), f.clone());
        let s = phi_with_grade(&f, n.into()).unwrap();
        prop_assert_eq!(section_from_json(&section_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn margin_tables_match_brute_force(rows in prop::collection::vec(0u32..4, 1..3), cols in prop::collection::vec(0u32..4, 1..4)) {
        let (r, c) = (MultiIndex::new(rows), MultiIndex::new(cols));
        let mut got = enumerate_margin_tables(&r, &c);
        got.sort();
        let want = if r.modulus() == c.modulus() { brute_force_tables(&r, &c) } else { Vec::new() };
        prop_assert_eq!(got, want);
    }

    #[test]
    fn successor_is_next_in_order(q in 1usize..5, n in 0u32..6) {
        let all = enumerate_weight(n, q);
        for pair in all.windows(2) {
            prop_assert_eq!(lex_compare(&pair[0], &pair[1]).unwrap(), Ordering::Less);
            prop_assert_eq!(lex_successor(&pair[0]), Some(pair[1].clone()));
        }
        prop_assert_eq!(lex_successor(all.last().unwrap()), None);
    }

    #[test]
    fn projection_isolates_top_index(nu in prop::collection::vec(0u32..4, 1..4), n in 0u32..6) {
        let nu = MultiIndex::new(nu);
        prop_assume!(n <= nu.modulus());
        let s = phi_ball(&nu, n).unwrap();
        let ps = p_op(&s).unwrap();
        let top = eta_max(&nu, n).unwrap();
        prop_assert_eq!(ps.components().map(|(e, _)| e.clone()).collect::<Vec<_>>(), vec![top.clone()]);
        prop_assert_eq!(ps.component(&top), s.component(&top));
    }
}

#[test]
fn zero_maps_to_zero() {
    let z = FockPoly::zero(1, 3);
    let s = phi(&z).unwrap();
    assert!(s.is_zero());
    assert!(invert(&s).unwrap().is_zero());
    assert_eq!(pairing(&s, &s).unwrap(), from_int(0));
    assert!(annihilates(&phi(&FockPoly::monomial(mi(&[0]), mi(&[0, 0]))).unwrap()).unwrap());
}
