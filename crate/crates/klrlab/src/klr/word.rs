//! Strand sequences, diagram words and formal linear combinations of words.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::conventions::{crossing_degree, dot_degree};
use super::KlrError;

/// A sequence of strand labels in `{1, …, n}` (an element of some `seq(β)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StrandSeq {
    pub rank: usize,
    pub labels: Vec<u8>,
}

impl StrandSeq {
    /// Validates that every label lies in `1..=rank`.
    pub fn new(rank: usize, labels: Vec<u8>) -> Result<Self, KlrError> {
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l as usize > rank) {
            return Err(KlrError::LabelOutOfRange { label: bad, rank });
        }
        Ok(Self { rank, labels })
    }

    /// Parses comma-separated labels, e.g. `"1,2,1"`. The empty string is
    /// the empty sequence.
    pub fn parse(rank: usize, text: &str) -> Result<Self, KlrError> {
        let text = text.trim();
        let labels = if text.is_empty() {
            Vec::new()
        } else {
            text.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| KlrError::Parse(format!("bad label {t:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Self::new(rank, labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of strands labelled `i`.
    pub fn count(&self, i: u8) -> usize {
        self.labels.iter().filter(|&&l| l == i).count()
    }

    /// The root multiplicities `β` with `self ∈ seq(β)`.
    pub fn beta(&self) -> Vec<u32> {
        let mut b = vec![0u32; self.rank];
        for &l in &self.labels {
            b[l as usize - 1] += 1;
        }
        b
    }

    /// All sequences in `seq(β)`, lexicographically ascending.
    pub fn all_of_weight(rank: usize, beta: &[u32]) -> Vec<StrandSeq> {
        crate::uqmod::seq_of(beta)
            .into_iter()
            .map(|labels| StrandSeq { rank, labels })
            .collect()
    }
}

impl fmt::Display for StrandSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A generator: a dot on the strand at position `pos`, or a crossing of the
/// strands at positions `pos` and `pos + 1`. Positions are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gen {
    Dot { pos: usize },
    Cross { pos: usize },
}

impl Gen {
    pub fn dot(pos: usize) -> Self {
        Gen::Dot { pos }
    }

    pub fn cross(pos: usize) -> Self {
        Gen::Cross { pos }
    }
}

/// Parses generators such as `x1,s2` or `x1 s2`, read bottom to top:
/// `x<pos>` is a dot on strand `pos`, `s<pos>` crosses strands `pos` and
/// `pos + 1`.
pub fn parse_ops(text: &str) -> Result<Vec<Gen>, KlrError> {
    text.split(|ch: char| ch == ',' || ch.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let bad = || KlrError::Parse(format!("bad generator {t:?}: expected x<pos> or s<pos>"));
            let mut chars = t.chars();
            let kind = chars.next().ok_or_else(bad)?;
            let pos: usize = chars.as_str().parse().map_err(|_| bad())?;
            match kind {
                'x' => Ok(Gen::dot(pos)),
                's' => Ok(Gen::cross(pos)),
                _ => Err(bad()),
            }
        })
        .collect()
}

/// A diagram word: a bottom sequence and generators read bottom to top.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KlrWord {
    pub rank: usize,
    pub bottom: Vec<u8>,
    pub ops: Vec<Gen>,
}

/// Validates generator positions and labels, returning the word.
pub fn make_word(bottom: &StrandSeq, ops: Vec<Gen>) -> Result<KlrWord, KlrError> {
    let m = bottom.len();
    for g in &ops {
        match *g {
            Gen::Dot { pos } if pos == 0 || pos > m => {
                return Err(KlrError::PositionOutOfRange { gen: *g, strands: m })
            }
            Gen::Cross { pos } if pos == 0 || pos + 1 > m => {
                return Err(KlrError::PositionOutOfRange { gen: *g, strands: m })
            }
            _ => {}
        }
    }
    Ok(KlrWord {
        rank: bottom.rank,
        bottom: bottom.labels.clone(),
        ops,
    })
}

impl KlrWord {
    /// The undecorated word `1_seq`.
    pub fn identity(seq: &StrandSeq) -> Self {
        KlrWord {
            rank: seq.rank,
            bottom: seq.labels.clone(),
            ops: Vec::new(),
        }
    }

    /// Re-validates a word built by hand or read from JSON.
    pub fn validate(&self) -> Result<(), KlrError> {
        let seq = StrandSeq::new(self.rank, self.bottom.clone())?;
        make_word(&seq, self.ops.clone()).map(|_| ())
    }

    pub fn bottom_seq(&self) -> StrandSeq {
        StrandSeq {
            rank: self.rank,
            labels: self.bottom.clone(),
        }
    }

    /// Labels at the top: the bottom permuted by the crossings.
    pub fn top(&self) -> Vec<u8> {
        let mut labels = self.bottom.clone();
        for g in &self.ops {
            if let Gen::Cross { pos } = *g {
                labels.swap(pos - 1, pos);
            }
        }
        labels
    }

    pub fn top_seq(&self) -> StrandSeq {
        StrandSeq {
            rank: self.rank,
            labels: self.top(),
        }
    }

    /// Number of crossings.
    pub fn crossings(&self) -> usize {
        self.ops.iter().filter(|g| matches!(g, Gen::Cross { .. })).count()
    }

    /// Stacks `other` on top of `self`.
    pub fn then(&self, other: &[Gen]) -> KlrWord {
        let mut w = self.clone();
        w.ops.extend_from_slice(other);
        w
    }
}

/// Degree of a word: 2 per dot, `−a_ij` per crossing of labels `i`, `j`.
pub fn degree(w: &KlrWord) -> i64 {
    let mut labels = w.bottom.clone();
    let mut d = 0;
    for g in &w.ops {
        match *g {
            Gen::Dot { .. } => d += dot_degree(),
            Gen::Cross { pos } => {
                d += crossing_degree(labels[pos - 1], labels[pos]);
                labels.swap(pos - 1, pos);
            }
        }
    }
    d
}

/// A formal integer combination of words.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KlrElement {
    pub rank: usize,
    terms: BTreeMap<KlrWord, i64>,
}

impl KlrElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(w: KlrWord) -> Self {
        let mut e = Self::zero(w.rank);
        e.add_term(w, 1);
        e
    }

    /// The idempotent `1_seq`.
    pub fn idempotent(seq: &StrandSeq) -> Self {
        Self::from_word(KlrWord::identity(seq))
    }

    /// Builds an element from `(coefficient, word)` pairs.
    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (i64, KlrWord)>) -> Self {
        let mut e = Self::zero(rank);
        for (c, w) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: KlrWord, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&KlrWord, i64)> + '_ {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    /// Number of terms with nonzero coefficient.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True if there are no terms, i.e. for zero.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a word (0 if absent).
    pub fn coeff(&self, w: &KlrWord) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut e = Self::zero(self.rank);
        if c != 0 {
            for (w, &x) in &self.terms {
                e.terms.insert(w.clone(), x * c);
            }
        }
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut e = self.clone();
        for (w, &c) in &other.terms {
            e.add_term(w.clone(), c);
        }
        e
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// The common degree of all terms, if the element is homogeneous and
    /// nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The common bottom sequence, if nonzero.
    pub fn bottom(&self) -> Option<Vec<u8>> {
        self.terms.keys().next().map(|w| w.bottom.clone())
    }

    /// The common top sequence, if nonzero.
    pub fn top(&self) -> Option<Vec<u8>> {
        self.terms.keys().next().map(KlrWord::top)
    }

    /// True if all words share one bottom and one top sequence.
    pub fn is_consistent(&self) -> bool {
        let (Some(b), Some(t)) = (self.bottom(), self.top()) else {
            return true;
        };
        self.terms.keys().all(|w| w.bottom == b && w.top() == t)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: i64,
    word: KlrWord,
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    rank: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for KlrElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ElementRepr {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, &c)| TermRepr {
                    coeff: c,
                    word: w.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KlrElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(d)?;
        let mut e = KlrElement::zero(repr.rank);
        for t in repr.terms {
            t.word.validate().map_err(serde::de::Error::custom)?;
            e.add_term(t.word, t.coeff);
        }
        Ok(e)
    }
}

impl fmt::Display for KlrWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ops: Vec<String> = self
            .ops
            .iter()
            .map(|g| match g {
                Gen::Dot { pos } => format!("x{pos}"),
                Gen::Cross { pos } => format!("s{pos}"),
            })
            .collect();
        let labels: Vec<String> = self.bottom.iter().map(|l| l.to_string()).collect();
        if ops.is_empty() {
            write!(f, "1[{}]", labels.join(","))
        } else {
            write!(f, "{}·1[{}]", ops.iter().rev().cloned().collect::<Vec<_>>().join(""), labels.join(","))
        }
    }
}

impl fmt::Display for KlrElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}·{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
