//! The embedded corpus: one representative presentation for each of the 115
//! isoclinism families of groups of order 128, with the published results
//! for each (tail counts, printed relations, relation matrices, divisors,
//! expansions, extensions and commutator words).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Deserialize;
use thiserror::Error;

use crate::engine::{ConsistencyCheck, GroupElement};
use crate::pipeline::{
    compute_b0, B0Result, CommutatorExpression, Expansion, Options, PipelineError,
};
use crate::presentation::{parse_presentation, PcGroup};

include!(concat!(env!("OUT_DIR"), "/corpus_files.rs"));

static EXPECTED: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/expected.json"));

pub const FAMILY_COUNT: u32 = 115;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("family {0} is out of range (1..={FAMILY_COUNT})")]
    OutOfRange(u32),
}

/// A consistency relation as printed, with the check that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedConsistency {
    pub check: ConsistencyCheck,
    pub vector: Vec<i64>,
}

/// A commuting-pair relation as printed: `[left, right]` in the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedCommuting {
    pub left: GroupElement,
    pub right: GroupElement,
    pub vector: Vec<i64>,
}

/// A printed commutator word for the torsion generator `t*_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedWord {
    pub target: usize,
    pub expression: CommutatorExpression,
}

/// Data printed only for families with nontrivial B₀.
#[derive(Clone, Debug)]
pub struct TorsionData {
    /// The printed transition matrix; column `k` expresses `t*_k` over the
    /// tails, so `t = (M⁻¹)ᵀ t*`.
    pub transition: Vec<Vec<i64>>,
    /// 1-based indices `k` of the torsion generators `t*_k`.
    pub torsion_generators: Vec<usize>,
    /// Reduced expansions `tail -> {k -> coefficient}`, 1-based.
    pub expansions: BTreeMap<usize, BTreeMap<usize, i64>>,
    pub words: Vec<PrintedWord>,
    /// The printed extension, with `t*_k` as generators `g8, g9, ...` in
    /// the order of `torsion_generators`.
    pub extension: PcGroup,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub family: u32,
    pub gap_id: Option<u32>,
    pub presentation: PcGroup,
    /// Invariants of B₀ greater than one; empty when trivial.
    pub expected_b0: Vec<u64>,
    /// The full printed list of nonzero Smith divisors, where printed.
    pub expected_divisors: Option<Vec<u64>>,
    pub expected_tail_count: usize,
    pub consistency: Vec<PrintedConsistency>,
    pub commuting: Vec<PrintedCommuting>,
    /// Rows of the printed relation matrix `T`.
    pub matrix_t: Vec<Vec<i64>>,
    pub torsion: Option<TorsionData>,
}

impl CorpusEntry {
    /// Every printed relation vector: consistency, commuting and matrix rows.
    pub fn printed_vectors(&self) -> Vec<Vec<i64>> {
        self.consistency
            .iter()
            .map(|r| r.vector.clone())
            .chain(self.commuting.iter().map(|r| r.vector.clone()))
            .chain(self.matrix_t.iter().cloned())
            .collect()
    }

    /// Orders of the printed torsion generators `t*_k`, from the printed
    /// divisor list.
    pub fn printed_torsion_orders(&self) -> Vec<BigInt> {
        let (Some(t), Some(d)) = (&self.torsion, &self.expected_divisors) else {
            return Vec::new();
        };
        t.torsion_generators
            .iter()
            .map(|&k| BigInt::from(d[k - 1]))
            .collect()
    }

    /// The printed expansions in the form `cp_extension_with` takes:
    /// 0-based tails, terms indexed by position in `torsion_generators`.
    pub fn printed_expansions(&self) -> Vec<Expansion> {
        let Some(t) = &self.torsion else {
            return Vec::new();
        };
        t.expansions
            .iter()
            .map(|(&tail, terms)| Expansion {
                tail: tail - 1,
                terms: terms
                    .iter()
                    .map(|(k, &c)| {
                        let pos = t
                            .torsion_generators
                            .iter()
                            .position(|g| g == k)
                            .expect("corpus: expansion over a non-torsion generator");
                        (pos, BigInt::from(c))
                    })
                    .collect(),
            })
            .collect()
    }
}

/// Corpus-wide metadata; the group totals are recorded, not recomputed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusMetadata {
    pub order: u64,
    pub families: u32,
    pub nontrivial_groups: u32,
    pub total_groups: u32,
}

#[derive(Deserialize)]
struct RawCorpus {
    order: u64,
    families: u32,
    nontrivial_groups: u32,
    total_groups: u32,
    entries: Vec<RawEntry>,
}

#[derive(Deserialize)]
struct RawCheck {
    kind: String,
    indices: Vec<usize>,
}

#[derive(Deserialize)]
struct RawConsistency {
    check: RawCheck,
    vector: Vec<i64>,
}

#[derive(Deserialize)]
struct RawCommuting {
    left: Vec<u32>,
    right: Vec<u32>,
    vector: Vec<i64>,
}

#[derive(Deserialize)]
struct RawWord {
    target: usize,
    factors: Vec<(usize, usize, i8)>,
}

#[derive(Deserialize)]
struct RawEntry {
    family: u32,
    gap_id: Option<u32>,
    tails: usize,
    consistency_relations: Vec<RawConsistency>,
    commuting_relations: Vec<RawCommuting>,
    matrix_t: Vec<Vec<i64>>,
    b0: Vec<u64>,
    divisors: Option<Vec<u64>>,
    transition: Option<Vec<Vec<i64>>>,
    torsion_generators: Option<Vec<usize>>,
    expansions: Option<BTreeMap<String, BTreeMap<String, i64>>>,
    words: Option<Vec<RawWord>>,
}

fn check_from_raw(raw: &RawCheck) -> ConsistencyCheck {
    let ix: Vec<usize> = raw.indices.iter().map(|&i| i - 1).collect();
    match (raw.kind.as_str(), ix.as_slice()) {
        ("triple", &[k, j, i]) => ConsistencyCheck::Triple { k, j, i },
        ("power_left", &[j, i]) => ConsistencyCheck::PowerLeft { j, i },
        ("power_right", &[j, i]) => ConsistencyCheck::PowerRight { j, i },
        ("power_self", &[i]) => ConsistencyCheck::PowerSelf { i },
        (kind, _) => panic!("corpus: bad check {kind} {:?}", raw.indices),
    }
}

fn group(family: u32, text: &str) -> PcGroup {
    let p = parse_presentation(text).unwrap_or_else(|e| panic!("corpus family {family}: {e}"));
    PcGroup::new(p).unwrap_or_else(|e| panic!("corpus family {family}: {e}"))
}

fn source(list: &[(u32, &'static str)], family: u32) -> Option<&'static str> {
    list.iter().find(|(f, _)| *f == family).map(|&(_, s)| s)
}

fn build() -> (CorpusMetadata, Vec<CorpusEntry>) {
    let raw: RawCorpus =
        serde_json::from_str(EXPECTED).expect("corpus: expected.json is malformed");
    assert_eq!(
        raw.entries.len(),
        FAMILY_COUNT as usize,
        "corpus: wrong entry count"
    );
    let entries = raw
        .entries
        .into_iter()
        .enumerate()
        .map(|(idx, e)| {
            let family = e.family;
            assert_eq!(family as usize, idx + 1, "corpus: entries out of order");
            let text = source(FAMILY_SOURCES, family)
                .unwrap_or_else(|| panic!("corpus: no presentation for family {family}"));
            let torsion = e.transition.map(|transition| {
                let key = |s: &String| s.parse::<usize>().expect("corpus: numeric key");
                let expansions = e
                    .expansions
                    .unwrap_or_default()
                    .iter()
                    .map(|(t, terms)| (key(t), terms.iter().map(|(k, c)| (key(k), *c)).collect()))
                    .collect();
                let words = e
                    .words
                    .unwrap_or_default()
                    .into_iter()
                    .map(|w| PrintedWord {
                        target: w.target,
                        expression: CommutatorExpression::from_generator_pairs(&w.factors),
                    })
                    .collect();
                let cp = source(CP_SOURCES, family)
                    .unwrap_or_else(|| panic!("corpus: no printed extension for family {family}"));
                TorsionData {
                    transition,
                    torsion_generators: e.torsion_generators.unwrap_or_default(),
                    expansions,
                    words,
                    extension: group(family, cp),
                }
            });
            CorpusEntry {
                family,
                gap_id: e.gap_id,
                presentation: group(family, text),
                expected_b0: e.b0,
                expected_divisors: e.divisors,
                expected_tail_count: e.tails,
                consistency: e
                    .consistency_relations
                    .iter()
                    .map(|r| PrintedConsistency {
                        check: check_from_raw(&r.check),
                        vector: r.vector.clone(),
                    })
                    .collect(),
                commuting: e
                    .commuting_relations
                    .into_iter()
                    .map(|r| PrintedCommuting {
                        left: GroupElement::from_exponents(r.left),
                        right: GroupElement::from_exponents(r.right),
                        vector: r.vector,
                    })
                    .collect(),
                matrix_t: e.matrix_t,
                torsion,
            }
        })
        .collect();
    let meta = CorpusMetadata {
        order: raw.order,
        families: raw.families,
        nontrivial_groups: raw.nontrivial_groups,
        total_groups: raw.total_groups,
    };
    (meta, entries)
}

fn corpus() -> &'static (CorpusMetadata, Vec<CorpusEntry>) {
    static CORPUS: OnceLock<(CorpusMetadata, Vec<CorpusEntry>)> = OnceLock::new();
    CORPUS.get_or_init(build)
}

/// All 115 entries, in family order. Parsed and validated on first use.
pub fn load_corpus() -> &'static [CorpusEntry] {
    &corpus().1
}

pub fn metadata() -> CorpusMetadata {
    corpus().0
}

pub fn expected_result(family: u32) -> Result<&'static CorpusEntry, CorpusError> {
    if !(1..=FAMILY_COUNT).contains(&family) {
        return Err(CorpusError::OutOfRange(family));
    }
    Ok(&load_corpus()[family as usize - 1])
}

/// The presentation file of a family exactly as shipped.
pub fn family_source(family: u32) -> Result<&'static str, CorpusError> {
    source(FAMILY_SOURCES, family).ok_or(CorpusError::OutOfRange(family))
}

/// The outcome of running one family against its published results.
#[derive(Debug)]
pub struct FamilyCheck {
    pub family: u32,
    pub result: Result<B0Result, PipelineError>,
    /// Human-readable differences; empty when everything matches.
    pub mismatches: Vec<String>,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.result.is_ok() && self.mismatches.is_empty()
    }
}

fn as_bigints(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&d| BigInt::from(d)).collect()
}

fn show(v: &[BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(BigInt::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Runs the routine on `entry` and compares B₀, the tail count, the printed
/// divisors, the Schur divisibility and the extension checks.
pub fn check_family(entry: &CorpusEntry, opts: &Options) -> FamilyCheck {
    let result = compute_b0(&entry.presentation, Some(entry.family), opts);
    let mut mismatches = Vec::new();
    match &result {
        Ok(r) => {
            let expected = as_bigints(&entry.expected_b0);
            if r.b0() != expected {
                mismatches.push(format!("B0 {} expected {}", show(&r.b0()), show(&expected)));
            }
            if r.m() != entry.expected_tail_count {
                mismatches.push(format!(
                    "{} tails expected {}",
                    r.m(),
                    entry.expected_tail_count
                ));
            }
            if let Some(d) = &entry.expected_divisors {
                let d = as_bigints(d);
                if r.quotient.divisors != d {
                    mismatches.push(format!(
                        "divisors {} expected {}",
                        show(&r.quotient.divisors),
                        show(&d)
                    ));
                }
            }
            let schur: BigInt = r.schur.invariants.iter().product();
            if !schur.mod_floor(&r.b0_order()).is_zero() {
                mismatches.push(format!(
                    "|B0| = {} does not divide |M(G)| = {schur}",
                    r.b0_order()
                ));
            }
            if !r.cp_ok {
                mismatches.push("extension is not commutativity preserving".into());
            }
            if !r.exterior_square.ok {
                mismatches.push(format!(
                    "|[E,E]| = {} but |[G,G]|*|B0| = {}",
                    r.exterior_square.order,
                    r.exterior_square.derived_order * r.exterior_square.b0_order
                ));
            }
        }
        Err(e) => mismatches.push(e.to_string()),
    }
    FamilyCheck {
        family: entry.family,
        result,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_nontrivial_families() {
        let c = load_corpus();
        assert_eq!(c.len(), 115);
        let nontrivial: Vec<u32> = c
            .iter()
            .filter(|e| !e.expected_b0.is_empty())
            .map(|e| e.family)
            .collect();
        assert_eq!(
            nontrivial,
            vec![16, 30, 31, 37, 39, 43, 58, 60, 80, 106, 114]
        );
        assert_eq!(expected_result(30).unwrap().expected_b0, vec![2, 2]);
    }

    #[test]
    fn lookups() {
        let e = expected_result(16).unwrap();
        assert_eq!(e.gap_id, Some(227));
        assert_eq!(e.expected_b0, vec![2]);
        assert_eq!(e.presentation.comms().len(), 5);
        assert_eq!(expected_result(1).unwrap().expected_b0, Vec::<u64>::new());
        assert_eq!(expected_result(115).unwrap().expected_tail_count, 16);
        assert_eq!(expected_result(0).unwrap_err(), CorpusError::OutOfRange(0));
        assert!(expected_result(116).is_err());
    }

    #[test]
    fn metadata_totals() {
        let m = metadata();
        assert_eq!(
            (m.order, m.families, m.nontrivial_groups, m.total_groups),
            (128, 115, 230, 2328)
        );
    }
}
