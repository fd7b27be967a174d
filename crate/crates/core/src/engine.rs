//! Collection to normal form in a pc-presented group and in its tailed
//! central extension.
//!
//! Multiplication appends one generator at a time to a normal-form element:
//! `a · g_k = (g_1^{a_1}..g_k^{a_k}) · g_k · (g_{k+1}^{a_{k+1}}..)^{g_k}`, where
//! the conjugated suffix is expanded with `g_j^{g_k} = g_j [g_j, g_k]` and a
//! completed power `g_k^{e_k}` is replaced by its right-hand side before the
//! suffix is re-applied. Every letter produced has index `> k`, so the
//! recursion depth is bounded by the number of generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::presentation::{PcPresentation, Relation, Word};

/// Normal form `g_1^{a_1} ... g_n^{a_n}` with `0 <= a_i < e_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut exps = vec![0; n];
        exps[i] = 1;
        GroupElement(exps)
    }

    /// Wraps an exponent vector; the caller guarantees `exps[i] < e_i`.
    pub fn from_exponents(exps: Vec<u32>) -> Self {
        GroupElement(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<u32> {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_exponents(&self.0)
    }

    /// The same exponents padded with zeros to `n` generators; used to lift
    /// elements of a group into an extension by later central generators.
    pub fn extended(&self, n: usize) -> Self {
        let mut exps = self.0.clone();
        exps.resize(n, 0);
        GroupElement(exps)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_word(), f)
    }
}

/// Receives every relation application made during collection.
trait TailSink {
    fn record(&mut self, rel: Relation);

    /// Whether swaps across trivial commutator relations must be reported.
    fn tracks_trivial(&self) -> bool {
        false
    }
}

struct NoTails;

impl TailSink for NoTails {
    #[inline]
    fn record(&mut self, _: Relation) {}
}

/// Per-collection tail counters. One collection applies at most as many
/// relations as it takes steps, so `i64` cannot overflow here; the totals are
/// folded into arbitrary-precision tails afterwards.
struct TailCounter<'a> {
    tp: &'a TailedPresentation,
    counts: Vec<i64>,
}

impl TailSink for TailCounter<'_> {
    #[inline]
    fn record(&mut self, rel: Relation) {
        if let Some(t) = self.tp.tail_of(rel) {
            self.counts[t] += 1;
        }
    }

    fn tracks_trivial(&self) -> bool {
        self.tp.trivial_tails
    }
}

fn mul_gen<S: TailSink>(p: &PcPresentation, exps: &mut [u32], k: usize, sink: &mut S) {
    let n = exps.len();
    let wraps = exps[k] + 1 == p.orders()[k];
    let commutes =
        !sink.tracks_trivial() && (k + 1..n).all(|j| exps[j] == 0 || p.comm(j, k).is_none());
    if commutes && !wraps {
        exps[k] += 1;
        return;
    }

    let mut suffix: Vec<(usize, u32)> = Vec::new();
    for (j, e) in exps.iter_mut().enumerate().skip(k + 1) {
        if *e != 0 {
            suffix.push((j, std::mem::take(e)));
        }
    }

    exps[k] += 1;
    if wraps {
        exps[k] = 0;
        sink.record(Relation::Power(k));
        for l in p.power(k).letters() {
            mul_gen(p, exps, l, sink);
        }
    }
    for (j, a) in suffix {
        let conj = p.comm(j, k);
        for _ in 0..a {
            mul_gen(p, exps, j, sink);
            sink.record(Relation::Comm(j, k));
            if let Some(w) = conj {
                for l in w.letters() {
                    mul_gen(p, exps, l, sink);
                }
            }
        }
    }
}

/// Collects a word given letter by letter, starting from the identity.
pub fn collect(p: &PcPresentation, letters: impl IntoIterator<Item = usize>) -> GroupElement {
    let mut exps = vec![0; p.len()];
    for l in letters {
        mul_gen(p, &mut exps, l, &mut NoTails);
    }
    GroupElement(exps)
}

/// Normal form of `a · b`.
pub fn multiply(p: &PcPresentation, a: &GroupElement, b: &GroupElement) -> GroupElement {
    let mut exps = a.0.clone();
    for l in b.to_word().letters() {
        mul_gen(p, &mut exps, l, &mut NoTails);
    }
    GroupElement(exps)
}

/// `a^{ord(a) - 1}`, found by stepping through the powers of `a`.
pub fn invert(p: &PcPresentation, a: &GroupElement) -> GroupElement {
    let mut prev = GroupElement::identity(p.len());
    let mut cur = a.clone();
    while !cur.is_identity() {
        prev = cur;
        cur = multiply(p, &prev, a);
    }
    prev
}

pub fn power(p: &PcPresentation, a: &GroupElement, k: i64) -> GroupElement {
    let mut base = if k < 0 { invert(p, a) } else { a.clone() };
    let mut e = k.unsigned_abs();
    let mut acc = GroupElement::identity(p.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = multiply(p, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = multiply(p, &base, &base);
        }
    }
    acc
}

/// `[a, b] = a^{-1} b^{-1} a b`.
pub fn commutator(p: &PcPresentation, a: &GroupElement, b: &GroupElement) -> GroupElement {
    let ab = multiply(p, a, b);
    let ba = multiply(p, b, a);
    // [a,b] is the unique x with b·a·x = a·b.
    multiply(p, &invert(p, &ba), &ab)
}

/// The presentation with one central tail appended to every power relation
/// and every stored commutator relation.
///
/// Tails are numbered in printed order: for each `i`, the tail of
/// `g_i^{e_i}` followed by the tails of `[g_i, g_j]`, `j` ascending.
#[derive(Clone, Debug)]
pub struct TailedPresentation {
    base: PcPresentation,
    tails: Vec<Relation>,
    power_tail: Vec<usize>,
    comm_tail: BTreeMap<(usize, usize), usize>,
    trivial_tails: bool,
}

impl TailedPresentation {
    /// Tails on the power relations and the stored commutator relations.
    pub fn new(base: &PcPresentation) -> Self {
        Self::build(base, base.relations(), false)
    }

    /// Tails on every relation, trivial commutators `[g_i, g_j] = 1`
    /// included. This is the extension whose consistency quotient has the
    /// Schur multiplier as torsion; the tails of trivial commutators only
    /// become redundant once commuting pairs are imposed.
    pub fn with_trivial_commutators(base: &PcPresentation) -> Self {
        let mut tails = Vec::new();
        for i in 0..base.len() {
            tails.push(Relation::Power(i));
            tails.extend((0..i).map(|j| Relation::Comm(i, j)));
        }
        Self::build(base, tails, true)
    }

    fn build(base: &PcPresentation, tails: Vec<Relation>, trivial_tails: bool) -> Self {
        let mut power_tail = vec![0; base.len()];
        let mut comm_tail = BTreeMap::new();
        for (t, rel) in tails.iter().enumerate() {
            match *rel {
                Relation::Power(i) => power_tail[i] = t,
                Relation::Comm(i, j) => {
                    comm_tail.insert((i, j), t);
                }
            }
        }
        TailedPresentation {
            base: base.clone(),
            tails,
            power_tail,
            comm_tail,
            trivial_tails,
        }
    }

    pub fn base(&self) -> &PcPresentation {
        &self.base
    }

    /// Number of tails `m`.
    pub fn tail_count(&self) -> usize {
        self.tails.len()
    }

    /// The tail appended to `rel`; `None` for trivial commutators.
    pub fn tail_of(&self, rel: Relation) -> Option<usize> {
        match rel {
            Relation::Power(i) => self.power_tail.get(i).copied(),
            Relation::Comm(i, j) => self.comm_tail.get(&(i, j)).copied(),
        }
    }

    /// The relation carrying tail `t`.
    pub fn relation_of(&self, t: usize) -> Relation {
        self.tails[t]
    }

    /// The canonical lift: same group part, zero tails.
    pub fn lift(&self, g: &GroupElement) -> TailedElement {
        TailedElement {
            g: g.clone(),
            tails: vec![BigInt::zero(); self.tail_count()],
        }
    }

    pub fn identity(&self) -> TailedElement {
        self.lift(&GroupElement::identity(self.base.len()))
    }

    pub fn generator(&self, i: usize) -> TailedElement {
        self.lift(&GroupElement::generator(self.base.len(), i))
    }

    fn counter(&self) -> TailCounter<'_> {
        TailCounter {
            tp: self,
            counts: vec![0; self.tail_count()],
        }
    }
}

/// An element of the tailed extension: a group part and a central tail vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TailedElement {
    pub g: GroupElement,
    pub tails: Vec<BigInt>,
}

impl TailedElement {
    pub fn is_identity(&self) -> bool {
        self.g.is_identity() && self.tails.iter().all(Zero::is_zero)
    }
}

impl Serialize for TailedElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TailedElement", 2)?;
        st.serialize_field("g", &self.g)?;
        let tails: Vec<String> = self.tails.iter().map(BigInt::to_string).collect();
        st.serialize_field("tails", &tails)?;
        st.end()
    }
}

fn add_counts(tails: &mut [BigInt], counts: &[i64]) {
    for (t, &c) in tails.iter_mut().zip(counts) {
        if c != 0 {
            *t += c;
        }
    }
}

/// Collects a word letter by letter in the tailed extension.
pub fn t_collect(
    tp: &TailedPresentation,
    letters: impl IntoIterator<Item = usize>,
) -> TailedElement {
    let mut exps = vec![0; tp.base.len()];
    let mut sink = tp.counter();
    for l in letters {
        mul_gen(&tp.base, &mut exps, l, &mut sink);
    }
    let mut tails = vec![BigInt::zero(); tp.tail_count()];
    add_counts(&mut tails, &sink.counts);
    TailedElement {
        g: GroupElement(exps),
        tails,
    }
}

pub fn t_multiply(tp: &TailedPresentation, a: &TailedElement, b: &TailedElement) -> TailedElement {
    let mut exps = a.g.0.clone();
    let mut sink = tp.counter();
    for l in b.g.to_word().letters() {
        mul_gen(&tp.base, &mut exps, l, &mut sink);
    }
    let mut tails: Vec<BigInt> = a.tails.iter().zip(&b.tails).map(|(x, y)| x + y).collect();
    add_counts(&mut tails, &sink.counts);
    TailedElement {
        g: GroupElement(exps),
        tails,
    }
}

/// Right inverse: `t_multiply(a, t_invert(a))` is exactly the identity.
pub fn t_invert(tp: &TailedPresentation, a: &TailedElement) -> TailedElement {
    let y = tp.lift(&invert(&tp.base, &a.g));
    let r = t_multiply(tp, a, &y);
    debug_assert!(r.g.is_identity());
    TailedElement {
        g: y.g,
        tails: r.tails.into_iter().map(|t| -t).collect(),
    }
}

/// `a^{-1} b^{-1} a b` in the tailed extension.
pub fn t_commutator(
    tp: &TailedPresentation,
    a: &TailedElement,
    b: &TailedElement,
) -> TailedElement {
    let ai = t_invert(tp, a);
    let bi = t_invert(tp, b);
    let x = t_multiply(tp, &ai, &bi);
    let x = t_multiply(tp, &x, a);
    t_multiply(tp, &x, b)
}

/// One of the associativity checks whose failure detects inconsistency.
/// Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConsistencyCheck {
    /// `g_k (g_j g_i) = (g_k g_j) g_i` for `k > j > i`.
    Triple { k: usize, j: usize, i: usize },
    /// `(g_j^{e_j}) g_i = g_j^{e_j - 1} (g_j g_i)` for `j > i`.
    PowerLeft { j: usize, i: usize },
    /// `g_j (g_i^{e_i}) = (g_j g_i) g_i^{e_i - 1}` for `j > i`.
    PowerRight { j: usize, i: usize },
    /// `(g_i^{e_i}) g_i = g_i (g_i^{e_i})`.
    PowerSelf { i: usize },
}

type Side = [Vec<usize>; 2];

impl ConsistencyCheck {
    /// Every check for an `n`-generator presentation, in a fixed order.
    pub fn all(n: usize) -> Vec<ConsistencyCheck> {
        let mut out = Vec::new();
        for k in 0..n {
            for j in 0..k {
                for i in 0..j {
                    out.push(ConsistencyCheck::Triple { k, j, i });
                }
            }
        }
        for j in 0..n {
            for i in 0..j {
                out.push(ConsistencyCheck::PowerLeft { j, i });
                out.push(ConsistencyCheck::PowerRight { j, i });
            }
        }
        out.extend((0..n).map(|i| ConsistencyCheck::PowerSelf { i }));
        out
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ConsistencyCheck::Triple { .. } => "triple",
            ConsistencyCheck::PowerLeft { .. } => "power_left",
            ConsistencyCheck::PowerRight { .. } => "power_right",
            ConsistencyCheck::PowerSelf { .. } => "power_self",
        }
    }

    /// Generator indices as printed, 1-based.
    pub fn indices(&self) -> Vec<usize> {
        match *self {
            ConsistencyCheck::Triple { k, j, i } => vec![k + 1, j + 1, i + 1],
            ConsistencyCheck::PowerLeft { j, i } | ConsistencyCheck::PowerRight { j, i } => {
                vec![j + 1, i + 1]
            }
            ConsistencyCheck::PowerSelf { i } => vec![i + 1],
        }
    }

    /// Both sides as two blocks of letters: each block is collected on its
    /// own, then the blocks are multiplied.
    fn sides(&self, orders: &[u32]) -> (Side, Side) {
        let rep = |g: usize, times: u32| vec![g; times as usize];
        match *self {
            ConsistencyCheck::Triple { k, j, i } => ([vec![k], vec![j, i]], [vec![k, j], vec![i]]),
            ConsistencyCheck::PowerLeft { j, i } => (
                [rep(j, orders[j]), vec![i]],
                [rep(j, orders[j] - 1), vec![j, i]],
            ),
            ConsistencyCheck::PowerRight { j, i } => (
                [vec![j], rep(i, orders[i])],
                [vec![j, i], rep(i, orders[i] - 1)],
            ),
            ConsistencyCheck::PowerSelf { i } => {
                ([rep(i, orders[i]), vec![i]], [vec![i], rep(i, orders[i])])
            }
        }
    }
}

impl fmt::Display for ConsistencyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConsistencyCheck::Triple { k, j, i } => {
                let (k, j, i) = (k + 1, j + 1, i + 1);
                write!(f, "g{k}(g{j} g{i}) = (g{k} g{j})g{i}")
            }
            ConsistencyCheck::PowerLeft { j, i } => {
                let (j, i) = (j + 1, i + 1);
                write!(f, "(g{j}^e)g{i} = g{j}^(e-1)(g{j} g{i})")
            }
            ConsistencyCheck::PowerRight { j, i } => {
                let (j, i) = (j + 1, i + 1);
                write!(f, "g{j}(g{i}^e) = (g{j} g{i})g{i}^(e-1)")
            }
            ConsistencyCheck::PowerSelf { i } => {
                let i = i + 1;
                write!(f, "(g{i}^e)g{i} = g{i}(g{i}^e)")
            }
        }
    }
}

impl Serialize for ConsistencyCheck {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ConsistencyCheck", 2)?;
        st.serialize_field("kind", self.kind())?;
        st.serialize_field("indices", &self.indices())?;
        st.end()
    }
}

/// Both sides of `check`, collected in the group itself.
pub fn evaluate_check(p: &PcPresentation, check: ConsistencyCheck) -> (GroupElement, GroupElement) {
    let (left, right) = check.sides(p.orders());
    let eval = |[a, b]: Side| multiply(p, &collect(p, a), &collect(p, b));
    (eval(left), eval(right))
}

/// Both sides of `check`, collected in the tailed extension.
pub fn t_evaluate_check(
    tp: &TailedPresentation,
    check: ConsistencyCheck,
) -> (TailedElement, TailedElement) {
    let (left, right) = check.sides(tp.base.orders());
    let eval = |[a, b]: Side| t_multiply(tp, &t_collect(tp, a), &t_collect(tp, b));
    (eval(left), eval(right))
}
