//! The tails routine end to end: harvest tail relations, read off the
//! Bogomolov and Schur multipliers, build the commutativity-preserving
//! extension and find commutator words for its new central generators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::engine::{self, ConsistencyCheck, GroupElement, TailedPresentation};
use crate::lattice::{hnf, snf_with_transforms, IntMatrix, SnfResult};
use crate::presentation::{
    InconsistentPresentation, PcGroup, PcPresentation, Relation, StructureError, Word,
};
use crate::structure::{GroupTable, MAX_TABLE_ORDER};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{stage}: free rank {found} differs from the generator count {expected}")]
    FreeRankMismatch {
        stage: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("check {check} gives different group parts in the tailed extension")]
    GroupPartMismatch { check: ConsistencyCheck },
    #[error("commutator of commuting elements {left} and {right} has a nontrivial group part")]
    NonCentralCommutator {
        left: GroupElement,
        right: GroupElement,
    },
    #[error("group too large for exhaustive enumeration (limit {MAX_TABLE_ORDER} elements)")]
    TooLarge,
    #[error("torsion invariant {0} is too large for a relative order")]
    TorsionTooLarge(BigInt),
    #[error("extension presentation is malformed: {0}")]
    ExtensionStructure(#[from] StructureError),
    #[error("extension presentation is inconsistent: {0}")]
    InconsistentExtension(#[from] InconsistentPresentation),
    #[error("no product of at most {max_len} commutators equals t{target}*")]
    WordNotFound { target: usize, max_len: usize },
}

/// How commuting pairs are chosen when harvesting relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Class representatives against generators of their centralizers.
    #[default]
    Default,
    /// Every pair of commuting elements.
    OracleAllPairs,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "default" => Ok(Mode::Default),
            "oracle-all-pairs" => Ok(Mode::OracleAllPairs),
            other => Err(format!(
                "unknown mode {other:?} (expected default or oracle-all-pairs)"
            )),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Default => "default",
            Mode::OracleAllPairs => "oracle-all-pairs",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub max_word_len: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            mode: Mode::Default,
            max_word_len: 4,
        }
    }
}

// ---------------------------------------------------------------------------
// Relation rows

fn ser_word<S: Serializer>(g: &GroupElement, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&g.to_word())
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(BigInt::to_string))
}

/// Where a relation row came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Provenance {
    Consistency {
        check: ConsistencyCheck,
    },
    /// `[rep, h]` for the class with index `class` (0-based, in order of
    /// representatives) and its centralizer generator number `generator`.
    #[serde(rename_all = "camelCase")]
    CommutingPair {
        class: usize,
        generator: usize,
        #[serde(serialize_with = "ser_word")]
        left: GroupElement,
        #[serde(serialize_with = "ser_word")]
        right: GroupElement,
    },
    /// A commuting pair found by the exhaustive sweep.
    ElementPair {
        #[serde(serialize_with = "ser_word")]
        left: GroupElement,
        #[serde(serialize_with = "ser_word")]
        right: GroupElement,
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Consistency { check } => write!(f, "{check}"),
            Provenance::CommutingPair { left, right, .. }
            | Provenance::ElementPair { left, right } => {
                write!(f, "[{}, {}]", left.to_word(), right.to_word())
            }
        }
    }
}

/// A relation among the tails: the tail vector of an element of the tailed
/// extension whose group part is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationRow {
    #[serde(serialize_with = "ser_bigints")]
    pub vector: Vec<BigInt>,
    pub provenance: Provenance,
}

impl RelationRow {
    /// `t3^2*t4` style, or `1` for the zero vector.
    pub fn relation_text(&self) -> String {
        tail_monomial(&self.vector)
    }
}

fn tail_monomial(v: &[BigInt]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| {
            if x.is_one() {
                format!("t{}", i + 1)
            } else {
                format!("t{}^{}", i + 1, x)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Collects rows, dropping zero vectors and duplicates up to sign. Rows are
/// stored with their first nonzero entry positive.
#[derive(Default)]
struct RowSet {
    rows: Vec<RelationRow>,
    seen: HashSet<Vec<BigInt>>,
}

impl RowSet {
    fn push(&mut self, mut vector: Vec<BigInt>, provenance: Provenance) {
        let Some(lead) = vector.iter().find(|x| !x.is_zero()) else {
            return;
        };
        if lead.is_negative() {
            for x in &mut vector {
                *x = -std::mem::take(x);
            }
        }
        if self.seen.insert(vector.clone()) {
            self.rows.push(RelationRow { vector, provenance });
        }
    }

    fn extend(&mut self, rows: Vec<RelationRow>) {
        for r in rows {
            self.push(r.vector, r.provenance);
        }
    }
}

pub fn build_tailed(g: &PcGroup) -> TailedPresentation {
    TailedPresentation::new(g.presentation())
}

/// Tail differences of both sides of every consistency check.
pub fn consistency_relations(tp: &TailedPresentation) -> Result<Vec<RelationRow>, PipelineError> {
    let mut set = RowSet::default();
    for check in ConsistencyCheck::all(tp.base().len()) {
        let (l, r) = engine::t_evaluate_check(tp, check);
        if l.g != r.g {
            return Err(PipelineError::GroupPartMismatch { check });
        }
        let diff = l.tails.iter().zip(&r.tails).map(|(a, b)| a - b).collect();
        set.push(diff, Provenance::Consistency { check });
    }
    Ok(set.rows)
}

fn table(p: &PcPresentation) -> Result<GroupTable, PipelineError> {
    match p.group_order() {
        Some(order) if order <= MAX_TABLE_ORDER => Ok(GroupTable::new(p)),
        _ => Err(PipelineError::TooLarge),
    }
}

fn commutator_tails(
    tp: &TailedPresentation,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<Vec<BigInt>, PipelineError> {
    let c = engine::t_commutator(tp, &tp.lift(x), &tp.lift(y));
    if !c.g.is_identity() {
        return Err(PipelineError::NonCentralCommutator {
            left: x.clone(),
            right: y.clone(),
        });
    }
    Ok(c.tails)
}

fn commuting_relations_in(
    tp: &TailedPresentation,
    t: &GroupTable,
    mode: Mode,
) -> Result<Vec<RelationRow>, PipelineError> {
    let mut set = RowSet::default();
    match mode {
        Mode::Default => {
            for (class, members) in t.classes().iter().enumerate() {
                let rep = members[0];
                for (generator, h) in t.centralizer_generators(rep).into_iter().enumerate() {
                    let (left, right) = (t.element(rep).clone(), t.element(h).clone());
                    let v = commutator_tails(tp, &left, &right)?;
                    set.push(
                        v,
                        Provenance::CommutingPair {
                            class,
                            generator,
                            left,
                            right,
                        },
                    );
                }
            }
        }
        Mode::OracleAllPairs => {
            // [y,x] is the inverse of [x,y] and both are central, so
            // unordered pairs give the same lattice.
            for x in 0..t.order() {
                for y in x + 1..t.order() {
                    if !t.commute(x, y) {
                        continue;
                    }
                    let (left, right) = (t.element(x).clone(), t.element(y).clone());
                    let v = commutator_tails(tp, &left, &right)?;
                    set.push(v, Provenance::ElementPair { left, right });
                }
            }
        }
    }
    Ok(set.rows)
}

/// Tail vectors of commutators of lifts of commuting pairs.
pub fn commuting_relations(
    tp: &TailedPresentation,
    mode: Mode,
) -> Result<Vec<RelationRow>, PipelineError> {
    commuting_relations_in(tp, &table(tp.base())?, mode)
}

fn relation_matrix(m: usize, rows: &[RelationRow]) -> IntMatrix {
    IntMatrix::from_rows(m, rows.iter().map(|r| r.vector.clone()))
}

// ---------------------------------------------------------------------------
// Multipliers

/// A torsion generator `t*_k` of the tail quotient: SNF column `column`
/// (0-based) with invariant `order > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Torsion {
    pub column: usize,
    #[serde(serialize_with = "ser_bigint")]
    pub order: BigInt,
}

impl Torsion {
    /// Printed name, e.g. `t5*`.
    pub fn label(&self) -> String {
        format!("t{}*", self.column + 1)
    }
}

fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// The reduced expansion of one tail over the torsion generators: pairs of
/// (index into the torsion list, coefficient in `[1, d)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub tail: usize,
    pub terms: Vec<(usize, BigInt)>,
}

/// Quotient data shared by the B₀ and Schur computations.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub m: usize,
    pub rows: Vec<RelationRow>,
    pub hnf: IntMatrix,
    pub snf: SnfResult,
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
    pub torsion: Vec<Torsion>,
}

impl Quotient {
    fn new(
        stage: &'static str,
        n: usize,
        m: usize,
        rows: Vec<RelationRow>,
    ) -> Result<Quotient, PipelineError> {
        let t = relation_matrix(m, &rows);
        let snf = snf_with_transforms(&t);
        let divisors = snf.divisors();
        let free_rank = m - divisors.len();
        if free_rank != n {
            return Err(PipelineError::FreeRankMismatch {
                stage,
                expected: n,
                found: free_rank,
            });
        }
        let torsion = snf
            .diagonal()
            .into_iter()
            .enumerate()
            .filter(|(_, d)| *d > BigInt::one())
            .map(|(column, order)| Torsion { column, order })
            .collect();
        Ok(Quotient {
            m,
            hnf: hnf(&t),
            rows,
            snf,
            divisors,
            free_rank,
            torsion,
        })
    }

    /// The torsion invariants, e.g. `[2, 2]`.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.torsion.iter().map(|t| t.order.clone()).collect()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().map(|t| &t.order).product()
    }

    /// `t = V t*`, restricted to the torsion columns and reduced mod their
    /// orders. Tails with a trivial expansion are omitted.
    pub fn expansions(&self) -> Vec<Expansion> {
        (0..self.m)
            .filter_map(|tail| {
                let terms: Vec<(usize, BigInt)> = self
                    .torsion
                    .iter()
                    .enumerate()
                    .filter_map(|(k, tor)| {
                        let c = self.snf.v.get(tail, tor.column).mod_floor(&tor.order);
                        (!c.is_zero()).then_some((k, c))
                    })
                    .collect();
                (!terms.is_empty()).then_some(Expansion { tail, terms })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SchurResult {
    #[serde(serialize_with = "ser_bigints")]
    pub divisors: Vec<BigInt>,
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub invariants: Vec<BigInt>,
}

/// M(G): the consistency quotient of the extension with a tail on every
/// relation, trivial commutators included.
pub fn compute_schur(g: &PcGroup) -> Result<SchurResult, PipelineError> {
    let tp = TailedPresentation::with_trivial_commutators(g.presentation());
    let q = Quotient::new(
        "schur",
        g.len(),
        tp.tail_count(),
        consistency_relations(&tp)?,
    )?;
    Ok(SchurResult {
        invariants: q.invariants(),
        divisors: q.divisors,
        free_rank: q.free_rank,
    })
}

/// The tail quotient with both consistency and commuting relations imposed;
/// its torsion is B₀(G).
pub fn b0_quotient(g: &PcGroup, mode: Mode) -> Result<Quotient, PipelineError> {
    let tp = build_tailed(g);
    let t = table(g.presentation())?;
    let mut set = RowSet::default();
    set.extend(consistency_relations(&tp)?);
    set.extend(commuting_relations_in(&tp, &t, mode)?);
    Quotient::new("b0", g.len(), tp.tail_count(), set.rows)
}

// ---------------------------------------------------------------------------
// Extension

/// `G` with every relation's right-hand side multiplied by the reduced
/// expansion of its tail, over new central generators of orders `orders`
/// appended after `g_n`.
pub fn cp_extension_with(
    g: &PcGroup,
    orders: &[BigInt],
    expansions: &[Expansion],
) -> Result<PcGroup, PipelineError> {
    let p = g.presentation();
    let n = p.len();
    let tp = build_tailed(g);
    let mut all_orders = p.orders().to_vec();
    for d in orders {
        all_orders.push(
            d.to_u32()
                .ok_or_else(|| PipelineError::TorsionTooLarge(d.clone()))?,
        );
    }
    let mut powers: Vec<Word> = p.powers().to_vec();
    powers.resize(n + orders.len(), Word::identity());
    let mut comms = p.comms().clone();
    for e in expansions {
        let extra = e.terms.iter().map(|(k, c)| {
            let c = c
                .mod_floor(&orders[*k])
                .to_u32()
                .expect("reduced below a u32 order");
            (n + k, c)
        });
        let rel = tp.relation_of(e.tail);
        let base = p.rhs(rel).cloned().unwrap_or_else(Word::identity);
        let word = Word::new(
            base.factors()
                .iter()
                .copied()
                .chain(extra.filter(|&(_, c)| c != 0))
                .collect(),
        );
        match rel {
            Relation::Power(i) => powers[i] = word,
            Relation::Comm(i, j) => {
                comms.insert((i, j), word);
            }
        }
    }
    let name = if orders.is_empty() {
        p.name().to_string()
    } else {
        format!("{}-cp", p.name())
    };
    let e = PcPresentation::new(name, all_orders, powers, comms)?;
    Ok(PcGroup::new(e)?)
}

pub fn cp_extension(g: &PcGroup, q: &Quotient) -> Result<PcGroup, PipelineError> {
    cp_extension_with(g, &q.invariants(), &q.expansions())
}

fn lift_index(e: &GroupTable, x: &GroupElement, ext_len: usize) -> usize {
    e.index_of(&x.extended(ext_len))
}

/// A commuting pair of `G` whose lifts do not commute in `E`, if any.
pub fn cp_violation(
    e: &PcGroup,
    g: &PcGroup,
) -> Result<Option<(GroupElement, GroupElement)>, PipelineError> {
    let tg = table(g.presentation())?;
    let te = table(e.presentation())?;
    let lifts: Vec<usize> = tg
        .elements()
        .iter()
        .map(|x| lift_index(&te, x, e.len()))
        .collect();
    for x in 0..tg.order() {
        for y in x + 1..tg.order() {
            if tg.commute(x, y) && !te.commute(lifts[x], lifts[y]) {
                return Ok(Some((tg.element(x).clone(), tg.element(y).clone())));
            }
        }
    }
    Ok(None)
}

/// Whether commuting pairs of `G` lift to commuting pairs of `E`.
pub fn cp_check(e: &PcGroup, g: &PcGroup) -> Result<bool, PipelineError> {
    Ok(cp_violation(e, g)?.is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExteriorSquare {
    /// `|[E, E]|`
    pub order: u64,
    /// `|[G, G]|`
    pub derived_order: u64,
    pub b0_order: u64,
    pub ok: bool,
}

/// `|[E, E]|` against `|[G, G]| · |B₀|`.
pub fn exterior_square_order(
    g: &PcGroup,
    e: &PcGroup,
    b0_order: u64,
) -> Result<ExteriorSquare, PipelineError> {
    let order = table(e.presentation())?.derived_subgroup().len() as u64;
    let derived_order = table(g.presentation())?.derived_subgroup().len() as u64;
    Ok(ExteriorSquare {
        order,
        derived_order,
        b0_order,
        ok: order == derived_order * b0_order,
    })
}

// ---------------------------------------------------------------------------
// Commutator words

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutatorFactor {
    pub left: Word,
    pub right: Word,
    /// `1` or `-1`.
    pub sign: i8,
}

/// A product of commutators `∏ [x, y]^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CommutatorExpression {
    pub factors: Vec<CommutatorFactor>,
}

impl CommutatorExpression {
    /// From 1-based generator pairs `(i, j, sign)`.
    pub fn from_generator_pairs(pairs: &[(usize, usize, i8)]) -> Self {
        let factors = pairs
            .iter()
            .map(|&(i, j, sign)| CommutatorFactor {
                left: Word::new(vec![(i - 1, 1)]),
                right: Word::new(vec![(j - 1, 1)]),
                sign,
            })
            .collect();
        CommutatorExpression { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for CommutatorExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for c in &self.factors {
            write!(f, "[{},{}]", c.left, c.right)?;
            if c.sign < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CommutatorExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let factors: Vec<(String, String, i8)> = self
            .factors
            .iter()
            .map(|c| (c.left.to_string(), c.right.to_string(), c.sign))
            .collect();
        let mut st = s.serialize_struct("CommutatorExpression", 2)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("factors", &factors)?;
        st.end()
    }
}

fn word_element(p: &PcPresentation, w: &Word) -> GroupElement {
    engine::collect(
        p,
        w.factors()
            .iter()
            .flat_map(|&(k, x)| std::iter::repeat_n(k, x as usize)),
    )
}

/// Evaluates the expression in the group presented by `e`.
pub fn evaluate_expression(e: &PcPresentation, expr: &CommutatorExpression) -> GroupElement {
    let mut acc = GroupElement::identity(e.len());
    for c in &expr.factors {
        let x = word_element(e, &c.left);
        let y = word_element(e, &c.right);
        let v = engine::power(e, &engine::commutator(e, &x, &y), i64::from(c.sign));
        acc = engine::multiply(e, &acc, &v);
    }
    acc
}

pub fn verify_expression(
    e: &PcPresentation,
    expr: &CommutatorExpression,
    target: &GroupElement,
) -> bool {
    evaluate_expression(e, expr) == *target
}

/// Which search produced a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SearchRegime {
    GeneratorPairs,
    ElementPairs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratorWord {
    /// Printed name of the target, e.g. `t5*`.
    pub target: String,
    /// Index of the target among the extension's generators, 1-based.
    pub generator: usize,
    pub expression: CommutatorExpression,
    pub regime: SearchRegime,
}

/// Shortest product of letters equal to `target`, lexicographically least
/// among the shortest in letter order. Letters are `(element, payload)`.
fn shortest_product(
    t: &GroupTable,
    letters: &[usize],
    target: usize,
    max_len: usize,
) -> Option<Vec<usize>> {
    if target == 0 {
        return Some(Vec::new());
    }
    // best[x]: least letter sequence of exactly the current length reaching x
    let mut layer: Vec<Option<Vec<usize>>> = vec![None; t.order()];
    layer[0] = Some(Vec::new());
    for _ in 0..max_len {
        let mut next: Vec<Option<Vec<usize>>> = vec![None; t.order()];
        for (x, seq) in layer.iter().enumerate() {
            let Some(seq) = seq else { continue };
            for (li, &v) in letters.iter().enumerate() {
                let y = t.mul(x, v);
                let mut cand = seq.clone();
                cand.push(li);
                if next[y].as_ref().is_none_or(|cur| cand < *cur) {
                    next[y] = Some(cand);
                }
            }
        }
        if let Some(found) = next[target].take() {
            return Some(found);
        }
        layer = next;
    }
    None
}

fn generator_word_in(
    e: &PcPresentation,
    te: &GroupTable,
    target: &GroupElement,
    max_len: usize,
) -> Option<(CommutatorExpression, SearchRegime)> {
    let goal = te.index_of(target);
    let n = e.len();

    // Letters [g_i, g_j]^{±1}, i > j, ordered by (i, j) and then +1 before -1.
    let mut letters = Vec::new();
    let mut factors = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let c = te.commutator(te.generator(i), te.generator(j));
            if c == 0 {
                continue;
            }
            for (sign, v) in [(1i8, c), (-1, te.inv(c))] {
                letters.push(v);
                factors.push(CommutatorFactor {
                    left: Word::new(vec![(i, 1)]),
                    right: Word::new(vec![(j, 1)]),
                    sign,
                });
            }
        }
    }
    if let Some(seq) = shortest_product(te, &letters, goal, max_len) {
        let factors = seq.into_iter().map(|l| factors[l].clone()).collect();
        return Some((
            CommutatorExpression { factors },
            SearchRegime::GeneratorPairs,
        ));
    }

    // Commutators of arbitrary pairs, one letter per value (its least pair).
    let mut first_pair: Vec<Option<(usize, usize)>> = vec![None; te.order()];
    for x in 0..te.order() {
        for y in 0..te.order() {
            let c = te.commutator(x, y);
            if c != 0 && first_pair[c].is_none() {
                first_pair[c] = Some((x, y));
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = first_pair.into_iter().flatten().collect();
    pairs.sort_unstable();
    let letters: Vec<usize> = pairs.iter().map(|&(x, y)| te.commutator(x, y)).collect();
    let seq = shortest_product(te, &letters, goal, max_len)?;
    let factors = seq
        .into_iter()
        .map(|l| {
            let (x, y) = pairs[l];
            CommutatorFactor {
                left: te.element(x).to_word(),
                right: te.element(y).to_word(),
                sign: 1,
            }
        })
        .collect();
    Some((CommutatorExpression { factors }, SearchRegime::ElementPairs))
}

/// A shortest product of commutators in `e` equal to `target`; generator
/// pairs are tried before arbitrary element pairs.
pub fn b0_generator_word(
    e: &PcGroup,
    target: &GroupElement,
    max_len: usize,
) -> Option<(CommutatorExpression, SearchRegime)> {
    let te = table(e.presentation()).ok()?;
    generator_word_in(e.presentation(), &te, target, max_len)
}

// ---------------------------------------------------------------------------
// Full result

/// Everything computed for one group.
#[derive(Clone, Debug)]
pub struct B0Result {
    pub family: Option<u32>,
    pub name: String,
    pub n: usize,
    pub quotient: Quotient,
    pub expansions: Vec<Expansion>,
    pub cp_extension: PcGroup,
    pub generator_words: Vec<GeneratorWord>,
    pub schur: SchurResult,
    pub cp_ok: bool,
    pub exterior_square: ExteriorSquare,
}

impl B0Result {
    pub fn m(&self) -> usize {
        self.quotient.m
    }

    pub fn b0(&self) -> Vec<BigInt> {
        self.quotient.invariants()
    }

    pub fn b0_order(&self) -> BigInt {
        self.quotient.torsion_order()
    }

    /// `1`, `C2`, `C2 x C2`, ...
    pub fn b0_name(&self) -> String {
        group_name(&self.b0())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Label of the extension generator `g_{n+k+1}`.
    pub fn torsion_labels(&self) -> Vec<String> {
        self.quotient.torsion.iter().map(Torsion::label).collect()
    }
}

/// Name of a finite abelian group from its invariants.
pub fn group_name(invariants: &[BigInt]) -> String {
    if invariants.is_empty() {
        "1".to_string()
    } else {
        invariants
            .iter()
            .map(|d| format!("C{d}"))
            .collect::<Vec<_>>()
            .join(" x ")
    }
}

struct ExpansionsJson<'a>(&'a [Expansion], &'a [Torsion]);

impl Serialize for ExpansionsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for e in self.0 {
            let terms: Vec<(String, String)> = e
                .terms
                .iter()
                .map(|(k, c)| (self.1[*k].label(), c.to_string()))
                .collect();
            map.serialize_entry(&format!("t{}", e.tail + 1), &TermsJson(&terms))?;
        }
        map.end()
    }
}

struct TermsJson<'a>(&'a [(String, String)]);

impl Serialize for TermsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Checks {
    cp: bool,
    #[serde(rename = "extSquare")]
    ext_square: bool,
    #[serde(rename = "extSquareOrder")]
    ext_square_order: u64,
    #[serde(rename = "derivedOrder")]
    derived_order: u64,
}

impl Serialize for B0Result {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let q = &self.quotient;
        let mut st = s.serialize_struct("B0Result", 14)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &q.m)?;
        st.serialize_field("rows", &q.rows)?;
        st.serialize_field("hnf", &q.hnf)?;
        st.serialize_field(
            "divisors",
            &q.divisors.iter().map(BigInt::to_string).collect::<Vec<_>>(),
        )?;
        st.serialize_field("freeRank", &q.free_rank)?;
        st.serialize_field(
            "b0",
            &self.b0().iter().map(BigInt::to_string).collect::<Vec<_>>(),
        )?;
        st.serialize_field("torsionGenerators", &self.torsion_labels())?;
        st.serialize_field("expansions", &ExpansionsJson(&self.expansions, &q.torsion))?;
        st.serialize_field("cpPresentation", self.cp_extension.presentation())?;
        st.serialize_field("generatorWords", &self.generator_words)?;
        st.serialize_field("schur", &self.schur)?;
        st.serialize_field(
            "checks",
            &Checks {
                cp: self.cp_ok,
                ext_square: self.exterior_square.ok,
                ext_square_order: self.exterior_square.order,
                derived_order: self.exterior_square.derived_order,
            },
        )?;
        st.end()
    }
}

/// Runs the whole routine on `g`.
pub fn compute_b0(
    g: &PcGroup,
    family: Option<u32>,
    opts: &Options,
) -> Result<B0Result, PipelineError> {
    let quotient = b0_quotient(g, opts.mode)?;
    let expansions = quotient.expansions();
    let cp_extension = cp_extension_with(g, &quotient.invariants(), &expansions)?;
    let schur = compute_schur(g)?;

    let te = table(cp_extension.presentation())?;
    let n = g.len();
    let mut generator_words = Vec::new();
    for (k, tor) in quotient.torsion.iter().enumerate() {
        let target = GroupElement::generator(cp_extension.len(), n + k);
        let (expression, regime) =
            generator_word_in(cp_extension.presentation(), &te, &target, opts.max_word_len).ok_or(
                PipelineError::WordNotFound {
                    target: tor.column + 1,
                    max_len: opts.max_word_len,
                },
            )?;
        generator_words.push(GeneratorWord {
            target: tor.label(),
            generator: n + k + 1,
            expression,
            regime,
        });
    }

    let cp_ok = cp_check(&cp_extension, g)?;
    let b0_order = quotient
        .torsion_order()
        .to_u64()
        .ok_or(PipelineError::TooLarge)?;
    let exterior_square = exterior_square_order(g, &cp_extension, b0_order)?;
    Ok(B0Result {
        family,
        name: g.name().to_string(),
        n,
        quotient,
        expansions,
        cp_extension,
        generator_words,
        schur,
        cp_ok,
        exterior_square,
    })
}
