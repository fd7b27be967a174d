//! Power-commutator presentations: the data model, the line-oriented text
//! format, JSON, and the consistency check that gates every downstream use.
//!
//! Generators are 0-based internally and 1-based (`g1..gn`) in every external
//! format.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::engine::{self, ConsistencyCheck, GroupElement};

/// A relation of a pc-presentation, identified by its left-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    /// `g_i^{e_i}`
    Power(usize),
    /// `[g_i, g_j]` with `j < i`
    Comm(usize, usize),
}

impl Relation {
    /// The smallest generator index the right-hand side may use is one past this.
    fn head(self) -> usize {
        match self {
            Relation::Power(i) | Relation::Comm(i, _) => i,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Relation::Power(i) => write!(f, "g{}^e", i + 1),
            Relation::Comm(i, j) => write!(f, "[g{},g{}]", i + 1, j + 1),
        }
    }
}

/// A product `g_{k1}^{x1} g_{k2}^{x2} ...` of generator powers. The empty
/// word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    factors: Vec<(usize, u32)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Builds a word from `(generator, exponent)` pairs without checking
    /// normalization; [`PcPresentation::new`] does that.
    pub fn new(factors: Vec<(usize, u32)>) -> Self {
        Word { factors }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// The word spelled out one generator at a time.
    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors
            .iter()
            .flat_map(|&(k, x)| std::iter::repeat_n(k, x as usize))
    }

    /// The normal-form word of an exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Word {
            factors: exps
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(k, &x)| (k, x))
                .collect(),
        }
    }

    fn to_text(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|&(k, x)| {
                if x == 1 {
                    format!("g{}", k + 1)
                } else {
                    format!("g{}^{}", k + 1, x)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Structural defects of a presentation, independent of where it came from.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("a presentation needs at least one generator")]
    Empty,
    #[error("relative order {order} of g{index} is below 2")]
    OrderTooSmall { index: usize, order: u32 },
    #[error("generator g{index} is out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("commutator [g{i},g{j}] needs j < i")]
    CommutatorOrder { i: usize, j: usize },
    #[error("the word for {relation} uses g{index}, which does not come after it")]
    RhsIndex { relation: String, index: usize },
    #[error("the word for {relation} is not in normal form: indices must strictly increase")]
    NotIncreasing { relation: String },
    #[error("exponent {exponent} of g{index} in the word for {relation} is outside 1..{order}")]
    ExponentRange {
        relation: String,
        index: usize,
        exponent: i64,
        order: u32,
    },
    #[error("expected {expected} power relations, found {found}")]
    PowerCount { expected: usize, found: usize },
    #[error("names may not contain '#' or line breaks")]
    InvalidName,
}

/// Errors from reading the text or JSON formats.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: StructureError,
    },
    #[error("line {line}: duplicate relation {relation}")]
    Duplicate { line: usize, relation: String },
    #[error("line {line}: g{index}^{given} does not match the declared order {declared}")]
    PowerExponent {
        line: usize,
        index: usize,
        given: u32,
        declared: u32,
    },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("invalid JSON presentation: {0}")]
    Json(String),
}

/// A power-commutator presentation of a finite polycyclic group.
///
/// Relations absent from `comms` are the trivial ones `[g_i, g_j] = 1`; they
/// are never stored, so two presentations of the same relations compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    name: String,
    orders: Vec<u32>,
    powers: Vec<Word>,
    comms: BTreeMap<(usize, usize), Word>,
}

impl PcPresentation {
    pub fn new(
        name: impl Into<String>,
        orders: Vec<u32>,
        powers: Vec<Word>,
        comms: BTreeMap<(usize, usize), Word>,
    ) -> Result<Self, StructureError> {
        let name = name.into();
        if name.contains(['#', '\n', '\r']) {
            return Err(StructureError::InvalidName);
        }
        let n = orders.len();
        if n == 0 {
            return Err(StructureError::Empty);
        }
        if let Some((i, &e)) = orders.iter().enumerate().find(|(_, &e)| e < 2) {
            return Err(StructureError::OrderTooSmall {
                index: i + 1,
                order: e,
            });
        }
        if powers.len() != n {
            return Err(StructureError::PowerCount {
                expected: n,
                found: powers.len(),
            });
        }
        for (i, w) in powers.iter().enumerate() {
            check_word(Relation::Power(i), w, &orders)?;
        }
        let mut kept = BTreeMap::new();
        for (&(i, j), w) in &comms {
            if i >= n {
                return Err(StructureError::IndexOutOfRange { index: i + 1, n });
            }
            if j >= i {
                return Err(StructureError::CommutatorOrder { i: i + 1, j: j + 1 });
            }
            check_word(Relation::Comm(i, j), w, &orders)?;
            if !w.is_identity() {
                kept.insert((i, j), w.clone());
            }
        }
        Ok(PcPresentation {
            name,
            orders,
            powers,
            comms: kept,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Result<Self, StructureError> {
        let name = name.into();
        if name.contains(['#', '\n', '\r']) {
            return Err(StructureError::InvalidName);
        }
        self.name = name;
        Ok(self)
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn power(&self, i: usize) -> &Word {
        &self.powers[i]
    }

    pub fn powers(&self) -> &[Word] {
        &self.powers
    }

    /// The stored right-hand side of `[g_i, g_j]`, or `None` when trivial.
    pub fn comm(&self, i: usize, j: usize) -> Option<&Word> {
        self.comms.get(&(i, j))
    }

    /// Stored (nontrivial) commutator relations in printed order: by `i`, then `j`.
    pub fn comms(&self) -> &BTreeMap<(usize, usize), Word> {
        &self.comms
    }

    /// Group order `∏ e_i`, or `None` if it does not fit in a `u64`.
    pub fn group_order(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &e| acc.checked_mul(u64::from(e)))
    }

    /// Relations in printed order: power relation of `g_i` followed by the
    /// stored commutators `[g_i, g_j]`, `j` ascending.
    pub fn relations(&self) -> Vec<Relation> {
        let mut out = Vec::with_capacity(self.len() + self.comms.len());
        for i in 0..self.len() {
            out.push(Relation::Power(i));
            out.extend(
                self.comms
                    .range((i, 0)..(i + 1, 0))
                    .map(|(&(i, j), _)| Relation::Comm(i, j)),
            );
        }
        out
    }

    pub fn rhs(&self, r: Relation) -> Option<&Word> {
        match r {
            Relation::Power(i) => self.powers.get(i),
            Relation::Comm(i, j) => self.comms.get(&(i, j)),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.name.trim().is_empty() {
            out.push_str(&format!("pcgroup {}\n", self.len()));
        } else {
            out.push_str(&format!("pcgroup {} {}\n", self.len(), self.name.trim()));
        }
        let orders: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        out.push_str(&format!("orders {}\n", orders.join(" ")));
        for r in self.relations() {
            match r {
                Relation::Power(i) => out.push_str(&format!(
                    "g{}^{} = {}\n",
                    i + 1,
                    self.orders[i],
                    self.powers[i]
                )),
                Relation::Comm(i, j) => out.push_str(&format!(
                    "[g{},g{}] = {}\n",
                    i + 1,
                    j + 1,
                    self.comms[&(i, j)]
                )),
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))
    }
}

fn check_word(rel: Relation, w: &Word, orders: &[u32]) -> Result<(), StructureError> {
    let n = orders.len();
    let mut last = None;
    for &(k, x) in w.factors() {
        if k >= n {
            return Err(StructureError::IndexOutOfRange { index: k + 1, n });
        }
        if k <= rel.head() {
            return Err(StructureError::RhsIndex {
                relation: rel.to_string(),
                index: k + 1,
            });
        }
        if last.is_some_and(|l| k <= l) {
            return Err(StructureError::NotIncreasing {
                relation: rel.to_string(),
            });
        }
        if x == 0 || x >= orders[k] {
            return Err(StructureError::ExponentRange {
                relation: rel.to_string(),
                index: k + 1,
                exponent: i64::from(x),
                order: orders[k],
            });
        }
        last = Some(k);
    }
    Ok(())
}

/// Output formats for [`serialize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

pub fn serialize(p: &PcPresentation, format: Format) -> String {
    match format {
        Format::Text => p.to_text(),
        Format::Json => p.to_json(),
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

// ---------------------------------------------------------------------------
// Text format

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, text, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            Ok(())
        } else {
            self.err(format!("expected '{kw}'"))
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let digits = rest.len() - rest.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        if digits == 0 {
            return self.err("expected a number");
        }
        match rest[..digits].parse() {
            Ok(v) => {
                self.pos += digits;
                Ok(v)
            }
            Err(_) => self.err("number too large"),
        }
    }

    /// `g<k>` with `k >= 1`; returns the 0-based index.
    fn generator(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        if self.peek() != Some('g') {
            return self.err("expected a generator g<k>");
        }
        self.pos += 1;
        let start = self.pos;
        let k = self.number()?;
        if self.pos - start != self.text[start..self.pos].trim_start().len() {
            self.pos = start;
            return self.err("expected a generator index directly after 'g'");
        }
        if k == 0 {
            self.pos = start;
            return self.err("generator indices start at 1");
        }
        Ok(k as usize - 1)
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        self.skip_ws();
        if self.peek() == Some('1') {
            self.pos += 1;
            return Ok(Word::identity());
        }
        let mut factors = Vec::new();
        loop {
            let k = self.generator()?;
            let x = if self.eat('^') { self.number()? } else { 1 };
            let x = u32::try_from(x).or_else(|_| self.err("exponent too large"))?;
            factors.push((k, x));
            if !self.eat('*') {
                break;
            }
        }
        Ok(Word::new(factors))
    }
}

/// Parses the line-oriented presentation format:
///
/// ```text
/// # comment
/// pcgroup 2 klein-four
/// orders 2 2
/// g1^2 = 1
/// [g2,g1] = 1
/// ```
///
/// Relations left out default to `g_i^{e_i} = 1` and `[g_i, g_j] = 1`.
pub fn parse_presentation(text: &str) -> Result<PcPresentation, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());

    let (hline, header) = lines
        .next()
        .ok_or(ParseError::Missing("'pcgroup' header"))?;
    let mut cur = Cursor::new(hline, header);
    cur.keyword("pcgroup")?;
    let n = cur.number()? as usize;
    if n == 0 {
        return Err(ParseError::Invalid {
            line: hline,
            source: StructureError::Empty,
        });
    }
    let name = cur.text[cur.pos..].trim().to_string();

    let (oline, olist) = lines.next().ok_or(ParseError::Missing("'orders' line"))?;
    let mut cur = Cursor::new(oline, olist);
    cur.keyword("orders")?;
    let mut orders = Vec::with_capacity(n);
    while !cur.at_end() {
        let e = cur.number()?;
        let e = u32::try_from(e).or_else(|_| cur.err("order too large"))?;
        if e < 2 {
            return Err(ParseError::Invalid {
                line: oline,
                source: StructureError::OrderTooSmall {
                    index: orders.len() + 1,
                    order: e,
                },
            });
        }
        orders.push(e);
    }
    if orders.len() != n {
        return cur.err(format!(
            "expected {n} relative orders, found {}",
            orders.len()
        ));
    }

    let mut powers: Vec<Option<Word>> = vec![None; n];
    let mut comms = BTreeMap::new();
    let mut seen_comms = BTreeMap::new();
    for (line, body) in lines {
        let mut cur = Cursor::new(line, body);
        let invalid = |source| ParseError::Invalid { line, source };
        let rel = if cur.eat('[') {
            let i = cur.generator()?;
            cur.expect(',')?;
            let j = cur.generator()?;
            cur.expect(']')?;
            for idx in [i, j] {
                if idx >= n {
                    return Err(invalid(StructureError::IndexOutOfRange {
                        index: idx + 1,
                        n,
                    }));
                }
            }
            if j >= i {
                return Err(invalid(StructureError::CommutatorOrder {
                    i: i + 1,
                    j: j + 1,
                }));
            }
            Relation::Comm(i, j)
        } else {
            let i = cur.generator()?;
            if i >= n {
                return Err(invalid(StructureError::IndexOutOfRange { index: i + 1, n }));
            }
            cur.expect('^')?;
            let e = cur.number()?;
            if e != u64::from(orders[i]) {
                return Err(ParseError::PowerExponent {
                    line,
                    index: i + 1,
                    given: u32::try_from(e).unwrap_or(u32::MAX),
                    declared: orders[i],
                });
            }
            Relation::Power(i)
        };
        cur.expect('=')?;
        let w = cur.word()?;
        if !cur.at_end() {
            return cur.err("unexpected trailing input");
        }
        check_word(rel, &w, &orders).map_err(invalid)?;
        let duplicate = match rel {
            Relation::Power(i) => powers[i].replace(w).is_some(),
            Relation::Comm(i, j) => {
                let dup = seen_comms.insert((i, j), ()).is_some();
                comms.insert((i, j), w);
                dup
            }
        };
        if duplicate {
            return Err(ParseError::Duplicate {
                line,
                relation: rel.to_string(),
            });
        }
    }

    let powers = powers.into_iter().map(Option::unwrap_or_default).collect();
    PcPresentation::new(name, orders, powers, comms).map_err(|source| ParseError::Invalid {
        line: hline,
        source,
    })
}

// ---------------------------------------------------------------------------
// JSON format: {name, n, orders, powers: [[[k,x],...],...], comms: {"i,j": [[k,x],...]}}

fn word_json(w: &Word) -> Vec<[i64; 2]> {
    w.factors()
        .iter()
        .map(|&(k, x)| [k as i64 + 1, i64::from(x)])
        .collect()
}

fn word_from_json(rel: Relation, raw: &[[i64; 2]], orders: &[u32]) -> Result<Word, StructureError> {
    let mut factors = Vec::with_capacity(raw.len());
    for &[k, x] in raw {
        if k < 1 || k as usize > orders.len() {
            return Err(StructureError::IndexOutOfRange {
                index: k.max(0) as usize,
                n: orders.len(),
            });
        }
        let order = orders[k as usize - 1];
        if x < 1 || x >= i64::from(order) {
            return Err(StructureError::ExponentRange {
                relation: rel.to_string(),
                index: k as usize,
                exponent: x,
                order,
            });
        }
        factors.push((k as usize - 1, x as u32));
    }
    Ok(Word::new(factors))
}

impl Serialize for PcPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Comms<'a>(&'a BTreeMap<(usize, usize), Word>);
        impl Serialize for Comms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (&(i, j), w) in self.0 {
                    map.serialize_entry(&format!("{},{}", i + 1, j + 1), &word_json(w))?;
                }
                map.end()
            }
        }
        #[derive(Serialize)]
        struct Out<'a> {
            name: &'a str,
            n: usize,
            orders: &'a [u32],
            powers: Vec<Vec<[i64; 2]>>,
            comms: Comms<'a>,
        }
        Out {
            name: &self.name,
            n: self.len(),
            orders: &self.orders,
            powers: self.powers.iter().map(word_json).collect(),
            comms: Comms(&self.comms),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PcPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct In {
            #[serde(default)]
            name: String,
            n: usize,
            orders: Vec<u32>,
            powers: Vec<Vec<[i64; 2]>>,
            #[serde(default)]
            comms: BTreeMap<String, Vec<[i64; 2]>>,
        }
        let raw = In::deserialize(d)?;
        if raw.n != raw.orders.len() {
            return Err(D::Error::custom(format!(
                "n = {} but {} orders given",
                raw.n,
                raw.orders.len()
            )));
        }
        let orders = raw.orders;
        let powers = raw
            .powers
            .iter()
            .enumerate()
            .map(|(i, w)| word_from_json(Relation::Power(i), w, &orders))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let mut comms = BTreeMap::new();
        for (key, w) in &raw.comms {
            let (i, j) = key
                .split_once(',')
                .and_then(|(a, b)| {
                    Some((
                        a.trim().parse::<usize>().ok()?,
                        b.trim().parse::<usize>().ok()?,
                    ))
                })
                .filter(|&(a, b)| a >= 1 && b >= 1)
                .ok_or_else(|| D::Error::custom(format!("bad commutator key {key:?}")))?;
            let rel = Relation::Comm(i - 1, j - 1);
            let word = word_from_json(rel, w, &orders).map_err(D::Error::custom)?;
            if comms.insert((i - 1, j - 1), word).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate commutator key {key:?}"
                )));
            }
        }
        PcPresentation::new(raw.name, orders, powers, comms).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Consistency

/// One failed consistency check: both sides collected in the group itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyFailure {
    pub check: ConsistencyCheck,
    pub left: GroupElement,
    pub right: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub checks_run: usize,
    pub failures: Vec<ConsistencyFailure>,
}

/// Runs every consistency check of `p` in the group it presents.
pub fn validate(p: &PcPresentation) -> ValidationReport {
    let checks = ConsistencyCheck::all(p.len());
    let failures: Vec<_> = checks
        .iter()
        .filter_map(|&check| {
            let (left, right) = engine::evaluate_check(p, check);
            (left != right).then_some(ConsistencyFailure { check, left, right })
        })
        .collect();
    ValidationReport {
        ok: failures.is_empty(),
        checks_run: checks.len(),
        failures,
    }
}

/// A presentation that passed [`validate`]. Every group-theoretic operation
/// downstream of parsing takes this type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcGroup {
    presentation: PcPresentation,
}

#[derive(Debug, Clone, Error)]
#[error("presentation {name:?} is inconsistent ({} failed checks)", report.failures.len())]
pub struct InconsistentPresentation {
    pub name: String,
    pub report: ValidationReport,
}

impl PcGroup {
    pub fn new(presentation: PcPresentation) -> Result<Self, InconsistentPresentation> {
        let report = validate(&presentation);
        if report.ok {
            Ok(PcGroup { presentation })
        } else {
            Err(InconsistentPresentation {
                name: presentation.name().to_string(),
                report,
            })
        }
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.presentation
    }

    pub fn into_presentation(self) -> PcPresentation {
        self.presentation
    }

    pub fn len(&self) -> usize {
        self.presentation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.presentation.is_empty()
    }

    pub fn order(&self) -> u64 {
        self.presentation
            .group_order()
            .expect("group order overflows u64")
    }
}

impl std::ops::Deref for PcGroup {
    type Target = PcPresentation;

    fn deref(&self) -> &PcPresentation {
        &self.presentation
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CYCLIC_128: &str = "\
# chain g_i^2 = g_{i+1}
pcgroup 7 cyclic
orders 2 2 2 2 2 2 2
g1^2 = g2
g2^2 = g3
g3^2 = g4
g4^2 = g5
g5^2 = g6
g6^2 = g7
g7^2 = 1
";

    #[test]
    fn parses_power_chain() {
        let p = parse_presentation(CYCLIC_128).unwrap();
        assert_eq!(p.len(), 7);
        assert_eq!(p.orders(), &[2; 7]);
        assert!(p.comms().is_empty());
        assert_eq!(p.power(0), &Word::new(vec![(1, 1)]));
        assert!(p.power(6).is_identity());
        assert_eq!(p.name(), "cyclic");
    }

    #[test]
    fn smallest_input() {
        let p = parse_presentation("pcgroup 1\norders 2\ng1^2 = 1\n").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.group_order(), Some(2));
        let report = validate(&p);
        assert!(report.ok);
        assert!(report
            .failures
            .iter()
            .all(|f| !matches!(f.check, ConsistencyCheck::Triple { .. })));
    }

    #[test]
    fn omitted_relations_default_to_trivial() {
        let p = parse_presentation("pcgroup 3\norders 2 3 2\n[g3,g1] = 1\n").unwrap();
        assert!(p.powers().iter().all(Word::is_identity));
        assert!(p.comms().is_empty());
        assert_eq!(p.group_order(), Some(12));
    }

    #[test]
    fn rejects_rhs_at_or_before_relation() {
        let err = parse_presentation("pcgroup 2\norders 2 2\n[g2,g1] = g2\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Invalid {
                line: 3,
                source: StructureError::RhsIndex { index: 2, .. }
            }
        ));
        let err = parse_presentation("pcgroup 2\norders 2 2\ng1^2 = g1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Invalid {
                source: StructureError::RhsIndex { .. },
                ..
            }
        ));
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_presentation("pcgroup 2\norders 2 2\ng2^2 = g3\n").unwrap_err();
        match err {
            ParseError::Invalid {
                source: StructureError::IndexOutOfRange { index: 3, n: 2 },
                ..
            } => {}
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_presentation("pcgroup 2\norders 2 2\ng1^2 = g2 g2\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 3,
                column: 11,
                message: "unexpected trailing input".into()
            }
        );
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_presentation("pcgroup 2\norders 2 1\n"),
            Err(ParseError::Invalid {
                source: StructureError::OrderTooSmall { index: 2, order: 1 },
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("pcgroup 3\norders 2 2 2\ng1^2 = g2\ng1^2 = g3\n"),
            Err(ParseError::Duplicate { line: 4, .. })
        ));
        assert!(matches!(
            parse_presentation("pcgroup 3\norders 2 2 2\n[g1,g2] = g3\n"),
            Err(ParseError::Invalid {
                source: StructureError::CommutatorOrder { .. },
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("pcgroup 2\norders 2 2\ng1^3 = 1\n"),
            Err(ParseError::PowerExponent {
                given: 3,
                declared: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("pcgroup 3\norders 2 2 2\ng1^2 = g3*g2\n"),
            Err(ParseError::Invalid {
                source: StructureError::NotIncreasing { .. },
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("pcgroup 3\norders 2 2 2\ng1^2 = g3^2\n"),
            Err(ParseError::Invalid {
                source: StructureError::ExponentRange { .. },
                ..
            })
        ));
        assert!(matches!(
            parse_presentation("# nothing\n"),
            Err(ParseError::Missing(_))
        ));
        assert!(matches!(
            parse_presentation("pcgroup 2\norders 2 2 2\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn serializes_without_trivial_commutators() {
        let p = parse_presentation("pcgroup 2 v4\norders 2 2\n[g2,g1] = 1\n").unwrap();
        let text = serialize(&p, Format::Text);
        assert_eq!(text, "pcgroup 2 v4\norders 2 2\ng1^2 = 1\ng2^2 = 1\n");
        assert!(!text.contains('['));
    }

    #[test]
    fn text_round_trip_ignores_comments() {
        let p = parse_presentation(CYCLIC_128).unwrap();
        let text = p.to_text();
        let stripped: String = CYCLIC_128
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(text, stripped);
        assert_eq!(parse_presentation(&text).unwrap(), p);
    }

    #[test]
    fn json_shape() {
        let p = parse_presentation("pcgroup 3 t\norders 2 3 2\ng1^2 = g2^2\n[g3,g1] = g2*g3\n")
            .unwrap_err();
        // g2 comes before g3, but [g3,g1] may only use generators after g3.
        assert!(matches!(p, ParseError::Invalid { .. }));
        let p =
            parse_presentation("pcgroup 3 t\norders 2 3 2\ng1^2 = g2^2\n[g2,g1] = g3\n").unwrap();
        let json = p.to_json();
        assert_eq!(
            json,
            r#"{"name":"t","n":3,"orders":[2,3,2],"powers":[[[2,2]],[],[]],"comms":{"2,1":[[3,1]]}}"#
        );
        assert_eq!(PcPresentation::from_json(&json).unwrap(), p);
        assert!(PcPresentation::from_json(r#"{"n":1,"orders":[2],"powers":[[[1,1]]]}"#).is_err());
    }
}
