//! The printed torsion data (transition matrices, expansions, extensions and
//! commutator words) checked against each other and against the computed
//! lattices. Our own complement differs from the printed one, so the printed
//! extension is rebuilt from the printed expansions.

use std::collections::BTreeMap;

use bogomolov::corpus::{load_corpus, CorpusEntry};
use bogomolov::engine::GroupElement;
use bogomolov::lattice::IntMatrix;
use bogomolov::pipeline::{
    b0_quotient, compute_b0, cp_check, cp_extension_with, evaluate_expression, verify_expression,
    Mode, Options,
};
use bogomolov::structure::GroupTable;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn nontrivial() -> impl Iterator<Item = &'static CorpusEntry> {
    load_corpus().iter().filter(|e| e.torsion.is_some())
}

fn matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows.len(), rows.iter().cloned())
}

/// Exact inverse of a unimodular matrix through cofactors.
fn unimodular_inverse(m: &IntMatrix) -> IntMatrix {
    let n = m.rows();
    let det = m.determinant();
    assert!(
        det.abs().is_one(),
        "transition matrix has determinant {det}"
    );
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = IntMatrix::from_rows(
                n - 1,
                (0..n).filter(|&r| r != i).map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m.get(r, c).clone())
                        .collect::<Vec<_>>()
                }),
            );
            let mut c = if n == 1 {
                BigInt::one()
            } else {
                minor.determinant()
            };
            if (i + j) % 2 == 1 {
                c = -c;
            }
            // adj[j][i] = cofactor(i, j)
            inv.set(j, i, c * &det);
        }
    }
    inv
}

/// Expansions read off the transition matrix: `t = (M⁻¹)ᵀ t*`, so tail `i`
/// carries `(M⁻¹)[k][i]` copies of `t*_k`, reduced mod the order of `t*_k`.
fn derived_expansions(e: &CorpusEntry) -> BTreeMap<usize, BTreeMap<usize, i64>> {
    let t = e.torsion.as_ref().unwrap();
    let inv = unimodular_inverse(&matrix(&t.transition));
    let orders = e.printed_torsion_orders();
    let mut out = BTreeMap::new();
    for i in 0..e.expected_tail_count {
        let mut terms = BTreeMap::new();
        for (&k, d) in t.torsion_generators.iter().zip(&orders) {
            let c = inv.get(k - 1, i).mod_floor(d);
            if !c.is_zero() {
                terms.insert(k, i64::try_from(c).unwrap());
            }
        }
        if !terms.is_empty() {
            out.insert(i + 1, terms);
        }
    }
    out
}

#[test]
fn transition_matrices_reproduce_printed_expansions() {
    for e in nontrivial() {
        let t = e.torsion.as_ref().unwrap();
        assert_eq!(
            t.transition.len(),
            e.expected_tail_count,
            "family {}",
            e.family
        );
        assert_eq!(derived_expansions(e), t.expansions, "family {}", e.family);
    }
}

#[test]
fn printed_projection_kills_computed_lattice() {
    for e in nontrivial() {
        let t = e.torsion.as_ref().unwrap();
        let inv = unimodular_inverse(&matrix(&t.transition));
        let q = b0_quotient(&e.presentation, Mode::Default).unwrap();
        let orders = e.printed_torsion_orders();
        for row in q.hnf.row_vecs() {
            for (&k, d) in t.torsion_generators.iter().zip(&orders) {
                let s: BigInt = row
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r * inv.get(k - 1, i))
                    .sum();
                assert!(
                    s.mod_floor(d).is_zero(),
                    "family {} row {row:?} t*_{k}",
                    e.family
                );
            }
        }
    }
}

#[test]
fn printed_expansions_rebuild_printed_extension() {
    for e in nontrivial() {
        let t = e.torsion.as_ref().unwrap();
        let built = cp_extension_with(
            &e.presentation,
            &e.printed_torsion_orders(),
            &e.printed_expansions(),
        )
        .unwrap();
        let printed = t.extension.presentation();
        assert_eq!(built.orders(), printed.orders(), "family {}", e.family);
        assert_eq!(built.powers(), printed.powers(), "family {}", e.family);
        assert_eq!(built.comms(), printed.comms(), "family {}", e.family);
        assert!(
            cp_check(&t.extension, &e.presentation).unwrap(),
            "family {}",
            e.family
        );
    }
}

#[test]
fn family_16_printed_extension() {
    let e = bogomolov::corpus::expected_result(16).unwrap();
    let ext = &e.torsion.as_ref().unwrap().extension;
    let rhs = ext.comm(2, 1).unwrap().to_string();
    assert_eq!(rhs, "g6*g7*g8");
}

#[test]
fn printed_words_verify_in_printed_extension() {
    let mut count = 0;
    for e in nontrivial() {
        let t = e.torsion.as_ref().unwrap();
        let n = e.presentation.len();
        for w in &t.words {
            let pos = t
                .torsion_generators
                .iter()
                .position(|&k| k == w.target)
                .unwrap();
            let target = GroupElement::generator(t.extension.len(), n + pos);
            assert!(
                verify_expression(&t.extension, &w.expression, &target),
                "family {} word {}",
                e.family,
                w.expression
            );
            // Nonuniversal: the word is trivial in G.
            assert!(evaluate_expression(&e.presentation, &w.expression).is_identity());
            count += 1;
        }
    }
    assert_eq!(count, 12);
}

#[test]
fn printed_words_generate_b0_in_our_extension() {
    let opts = Options::default();
    for e in nontrivial() {
        let t = e.torsion.as_ref().unwrap();
        let r = compute_b0(&e.presentation, Some(e.family), &opts).unwrap();
        let ext = &r.cp_extension;
        let n = e.presentation.len();
        let values: Vec<GroupElement> = t
            .words
            .iter()
            .map(|w| evaluate_expression(ext, &w.expression))
            .collect();
        if values.len() == 1 {
            assert_eq!(
                values[0],
                GroupElement::generator(ext.len(), n),
                "family {}",
                e.family
            );
            continue;
        }
        // The two printed t* correspond to some basis of our torsion part.
        let table = GroupTable::new(ext);
        let idx: Vec<usize> = values.iter().map(|v| table.index_of(v)).collect();
        let torsion: Vec<usize> = (n..ext.len()).map(|k| table.generator(k)).collect();
        assert_eq!(
            table.closure(&idx),
            table.closure(&torsion),
            "family {}",
            e.family
        );
    }
}
