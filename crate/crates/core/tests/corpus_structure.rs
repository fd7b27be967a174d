use bogomolov::corpus::{family_source, load_corpus, metadata};
use bogomolov::structure::GroupTable;
use sha2::{Digest, Sha256};

/// Canonical form of the corpus: each presentation as rewritten by the
/// serializer, followed by its expected invariants.
fn canonical() -> String {
    let mut out = String::new();
    for e in load_corpus() {
        out.push_str(&e.presentation.to_text());
        out.push_str(&format!(
            "b0 {:?} tails {} divisors {:?}\n",
            e.expected_b0, e.expected_tail_count, e.expected_divisors
        ));
    }
    out
}

#[test]
fn corpus_checksum() {
    let digest = hex::encode(Sha256::digest(canonical().as_bytes()));
    assert_eq!(
        digest,
        "d31c67c37496c521a8c3c2672a6a58d6a44050c989cfc4ac2dea2d3d512e6641"
    );
}

#[test]
fn sources_round_trip() {
    for e in load_corpus() {
        let text = family_source(e.family).unwrap();
        let again = bogomolov::presentation::parse_presentation(text).unwrap();
        assert_eq!(&again, e.presentation.presentation());
        assert_eq!(e.presentation.order(), metadata().order);
    }
}

#[test]
fn class_equation_and_centralizers() {
    for e in load_corpus() {
        let t = GroupTable::new(&e.presentation);
        let classes = t.classes();
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 128);
        assert_eq!(classes[0], vec![0]);
        for class in &classes {
            let rep = class[0];
            let c = t.centralizer(rep);
            assert_eq!(class.len() * c.len(), 128, "family {}", e.family);
            assert_eq!(
                t.closure(&t.centralizer_generators(rep)),
                c,
                "family {}",
                e.family
            );
        }
        let abelian = t.is_abelian();
        assert_eq!(abelian, classes.len() == 128);
        let derived = t.derived_subgroup();
        assert_eq!(derived.len() == 1, abelian);
        // Normal, and the quotient is abelian.
        let mut mask = [false; 128];
        for &d in &derived {
            mask[d] = true;
        }
        for &d in &derived {
            for k in 0..e.presentation.len() {
                assert!(mask[t.conjugate(d, t.generator(k))]);
            }
        }
    }
}
