use std::collections::BTreeMap;

use bogomolov::corpus::load_corpus;
use bogomolov::engine::{self, t_invert, t_multiply, GroupElement, TailedElement};
use bogomolov::lattice::{hnf, lattice_contains, snf_with_transforms, IntMatrix};
use bogomolov::pipeline::{build_tailed, consistency_relations};
use bogomolov::presentation::{parse_presentation, ParseError, PcGroup, PcPresentation, Word};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Presentations

/// A structurally valid presentation; not necessarily consistent.
fn presentation() -> impl Strategy<Value = PcPresentation> {
    (1usize..=6)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(prop::sample::select(vec![2u32, 3, 5]), n),
            )
        })
        .prop_flat_map(|(n, orders)| {
            let word = move |after: usize, orders: Vec<u32>| {
                prop::collection::vec(any::<u32>(), n).prop_map(move |raw| {
                    let factors = (after + 1..n)
                        .filter_map(|k| {
                            let e = raw[k] % (orders[k] + 1);
                            (e > 0 && e < orders[k]).then_some((k, e))
                        })
                        .collect();
                    Word::new(factors)
                })
            };
            let powers: Vec<_> = (0..n).map(|i| word(i, orders.clone())).collect();
            let comms: Vec<_> = (0..n)
                .flat_map(|i| (0..i).map(move |j| (i, j)))
                .map(|(i, j)| word(i, orders.clone()).prop_map(move |w| ((i, j), w)))
                .collect();
            (Just(orders), powers, comms)
        })
        .prop_map(|(orders, powers, comms)| {
            let comms: BTreeMap<_, _> = comms.into_iter().collect();
            PcPresentation::new("random", orders, powers, comms).unwrap()
        })
}

proptest! {
    #[test]
    fn text_round_trip(p in presentation()) {
        let back = parse_presentation(&p.to_text()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn json_round_trip(p in presentation()) {
        let back = PcPresentation::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rhs_must_come_after_lhs(n in 2usize..6, i in 0usize..6, k in 0usize..6) {
        let (i, k) = (i % n, k % n);
        prop_assume!(k <= i);
        let orders = vec!["2"; n].join(" ");
        let text = format!("pcgroup {n}\norders {orders}\ng{}^2 = g{}\n", i + 1, k + 1);
        let is_structural = matches!(parse_presentation(&text), Err(ParseError::Invalid { .. }));
        prop_assert!(is_structural);
        if i > 0 {
            let text = format!("pcgroup {n}\norders {orders}\n[g{},g1] = g{}\n", i + 1, k + 1);
            let is_structural = matches!(parse_presentation(&text), Err(ParseError::Invalid { .. }));
            prop_assert!(is_structural);
        }
    }

    #[test]
    fn garbage_is_rejected(s in "[a-z0-9 \\^=\\[\\],\\n]{0,40}") {
        // Anything accepted must survive a round trip; nothing may panic.
        if let Ok(p) = parse_presentation(&s) {
            prop_assert_eq!(parse_presentation(&p.to_text()).unwrap(), p);
        }
    }
}

// ---------------------------------------------------------------------------
// Collection over the corpus groups

fn element(g: &PcGroup, rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement::from_exponents(g.orders().iter().map(|&o| rng.gen_range(0..o)).collect())
}

#[test]
fn lagrange_for_every_element() {
    for e in load_corpus() {
        let g = &e.presentation;
        let order = g.order() as i64;
        for x in bogomolov::structure::enumerate_elements(g) {
            assert!(
                engine::power(g, &x, order).is_identity(),
                "family {}",
                e.family
            );
            assert!(engine::power(g, &x, 0).is_identity());
        }
    }
}

#[test]
fn group_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for e in load_corpus() {
        let g = &e.presentation;
        for _ in 0..50 {
            let (a, b, c) = (
                element(g, &mut rng),
                element(g, &mut rng),
                element(g, &mut rng),
            );
            let ab_c = engine::multiply(g, &engine::multiply(g, &a, &b), &c);
            let a_bc = engine::multiply(g, &a, &engine::multiply(g, &b, &c));
            assert_eq!(ab_c, a_bc, "family {}", e.family);
            let ai = engine::invert(g, &a);
            assert!(engine::multiply(g, &a, &ai).is_identity());
            assert!(engine::multiply(g, &ai, &a).is_identity());
            let k = rng.gen_range(-5i64..=5);
            let j = rng.gen_range(-5i64..=5);
            assert_eq!(
                engine::multiply(g, &engine::power(g, &a, k), &engine::power(g, &a, j)),
                engine::power(g, &a, k + j)
            );
        }
    }
}

fn tailed(
    tp: &bogomolov::engine::TailedPresentation,
    g: &PcGroup,
    rng: &mut ChaCha8Rng,
) -> TailedElement {
    TailedElement {
        g: element(g, rng),
        tails: (0..tp.tail_count())
            .map(|_| BigInt::from(rng.gen_range(-4i64..=4)))
            .collect(),
    }
}

#[test]
fn tailed_inverse_and_centrality() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for e in load_corpus() {
        let g = &e.presentation;
        let tp = build_tailed(g);
        for _ in 0..100 {
            let x = tailed(&tp, g, &mut rng);
            assert!(
                t_multiply(&tp, &x, &t_invert(&tp, &x)).is_identity(),
                "family {}",
                e.family
            );

            let y = tailed(&tp, g, &mut rng);
            let xy = t_multiply(&tp, &x, &y);
            assert_eq!(xy.g, engine::multiply(g, &x.g, &y.g));

            let z = TailedElement {
                g: GroupElement::identity(g.len()),
                tails: y.tails.clone(),
            };
            assert_eq!(t_multiply(&tp, &x, &z), t_multiply(&tp, &z, &x));
        }
    }
}

#[test]
fn tailed_associativity_modulo_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for e in load_corpus().iter().step_by(5) {
        let g = &e.presentation;
        let tp = build_tailed(g);
        let m = tp.tail_count();
        let rows = consistency_relations(&tp).unwrap();
        let lattice = hnf(&IntMatrix::from_rows(m, rows.into_iter().map(|r| r.vector)));
        for _ in 0..20 {
            let (a, b, c) = (
                tailed(&tp, g, &mut rng),
                tailed(&tp, g, &mut rng),
                tailed(&tp, g, &mut rng),
            );
            let l = t_multiply(&tp, &t_multiply(&tp, &a, &b), &c);
            let r = t_multiply(&tp, &a, &t_multiply(&tp, &b, &c));
            assert_eq!(l.g, r.g);
            let diff: Vec<BigInt> = l.tails.iter().zip(&r.tails).map(|(x, y)| x - y).collect();
            assert!(lattice_contains(&lattice, &diff), "family {}", e.family);
        }
    }
}

// ---------------------------------------------------------------------------
// Lattices

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-12i64..=12, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, rows))
    })
}

proptest! {
    #[test]
    fn hnf_is_idempotent_and_keeps_rows(m in small_matrix()) {
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h.clone());
        for row in m.row_vecs() {
            prop_assert!(lattice_contains(&h, &row));
        }
        // Integer combinations stay inside.
        let combo: Vec<BigInt> = (0..m.cols())
            .map(|j| (0..m.rows()).map(|i| m.get(i, j) * BigInt::from(i as i64 * 2 - 3)).sum())
            .collect();
        prop_assert!(lattice_contains(&h, &combo));
    }

    #[test]
    fn snf_transforms_recompose(m in small_matrix()) {
        let r = snf_with_transforms(&m);
        prop_assert_eq!(r.u.mul(&m).mul(&r.v), r.s.clone());
        prop_assert_eq!(r.u.determinant().magnitude().clone(), 1u32.into());
        prop_assert_eq!(r.v.determinant().magnitude().clone(), 1u32.into());
        let d = r.divisors();
        prop_assert_eq!(d.len(), hnf(&m).rows());
        for w in d.windows(2) {
            prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
        }
    }

    #[test]
    fn divisors_are_row_order_invariant(m in small_matrix(), shift in 0usize..5) {
        let mut rows = m.row_vecs();
        let s = shift % rows.len();
        rows.rotate_left(s);
        let rotated = IntMatrix::from_rows(m.cols(), rows);
        prop_assert_eq!(snf_with_transforms(&rotated).divisors(), snf_with_transforms(&m).divisors());
        prop_assert_eq!(hnf(&rotated), hnf(&m));
    }
}
