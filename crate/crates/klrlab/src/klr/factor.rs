//! Factorization of idempotents through special idempotents.
//!
//! An idempotent `1_e` of rank `n` with `k` strands labelled `n` is written
//! as `Σ c · L · 1_{e′} · R`, where every `e′` starts with staircase blocks
//! `(i_1, …, n)(i_2, …, n)⋯(i_k, …, n)` with `i_1 ≤ … ≤ i_k`, followed by a
//! tail of labels below `n`.
//!
//! The algorithm moves blocks to the left one `n`-strand at a time. Each step
//! rewrites the current idempotent `1_u` as `Σ c · A · 1_v · B` using one of
//! three local identities:
//!
//! * distant swap: `1_{ij} = ψ 1_{ji} ψ` for `|i − j| > 1`;
//! * on labels `(a, a, a+1)`: `1 = ψ₁ψ₂²ψ₁x₂ − x₁ψ₁ψ₂²ψ₁`, both terms passing
//!   through `(a, a+1, a)`;
//! * on labels `(j, j−1, j)`: the braid relation, both terms passing through
//!   `(j−1, j, j)` or `(j, j, j−1)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::conventions::braid_defect;
use super::rewrite::Rewriter;
use super::word::{Gen, KlrElement, KlrWord, StrandSeq};
use super::KlrError;
use crate::combi::{Partition, XiSequence};

/// `e(p_{i_1 … i_k}, tail)`: staircase blocks followed by a tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpecialIdempotentSpec {
    pub rank: usize,
    pub xi: XiSequence,
    pub tail: StrandSeq,
}

impl SpecialIdempotentSpec {
    /// The block `(i, i+1, …, n)`; empty for `i = n + 1`.
    pub fn block(rank: usize, i: usize) -> Vec<u8> {
        (i..=rank).map(|l| l as u8).collect()
    }

    /// Number of strands in the blocks.
    pub fn block_len(&self) -> usize {
        self.xi.0.iter().map(|&i| Self::block(self.rank, i).len()).sum()
    }

    /// The full bottom sequence: all blocks, then the tail.
    pub fn full_sequence(&self) -> StrandSeq {
        let mut labels = Vec::new();
        for &i in &self.xi.0 {
            labels.extend(Self::block(self.rank, i));
        }
        labels.extend(&self.tail.labels);
        StrandSeq {
            rank: self.rank,
            labels,
        }
    }

    /// True if the blocks are ordered `i_1 ≤ … ≤ i_k`.
    pub fn is_ordered(&self) -> bool {
        self.xi.is_sorted()
    }

    /// Special (rather than merely primed) status relative to `λ`: the
    /// removal sequence must be sorted and `λ`-dominant.
    pub fn is_special_for(&self, lambda: &Partition) -> bool {
        self.is_ordered() && self.xi.is_dominant_for(lambda)
    }
}

/// One term `coeff · left · 1_{through} · right` of a factorization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorTerm {
    pub coeff: i64,
    /// Bottom: the special sequence; top: the input sequence.
    pub left: KlrElement,
    pub through: SpecialIdempotentSpec,
    /// Bottom: the input sequence; top: the special sequence.
    pub right: KlrElement,
}

/// The two sides of the identity `1 = ψ₁ψ₂²ψ₁x₂ − x₁ψ₁ψ₂²ψ₁` on
/// `1_{(j, j, j+1)}`.
pub fn inv_r3(rank: usize, labels: &[u8]) -> Result<(KlrElement, KlrElement), KlrError> {
    let ok = labels.len() == 3
        && labels[0] == labels[1]
        && labels[2] == labels[0] + 1
        && labels[2] as usize <= rank
        && labels[0] >= 1;
    if !ok {
        return Err(KlrError::BadPattern(labels.to_vec()));
    }
    let seq = StrandSeq::new(rank, labels.to_vec())?;
    let lhs = KlrElement::idempotent(&seq);
    let word = |ops: Vec<Gen>| KlrWord {
        rank,
        bottom: labels.to_vec(),
        ops,
    };
    let (c1, c2, x1, x2) = (Gen::cross(1), Gen::cross(2), Gen::dot(1), Gen::dot(2));
    let rhs = KlrElement::from_terms(
        rank,
        [
            (1, word(vec![x2, c1, c2, c2, c1])),
            (-1, word(vec![c1, c2, c2, c1, x1])),
        ],
    );
    Ok((lhs, rhs))
}

/// A local identity `1_u = Σ c · A · 1_v · B`: `(c, A ops, B ops, v)`.
type Template = Vec<(i64, Vec<Gen>, Vec<Gen>, Vec<u8>)>;

fn swap_template(seq: &[u8], r: usize) -> Template {
    let mut v = seq.to_vec();
    debug_assert!(v[r].abs_diff(v[r + 1]) > 1, "swap of non-distant labels");
    v.swap(r, r + 1);
    let c = Gen::cross(r + 1);
    vec![(1, vec![c], vec![c], v)]
}

fn inv_r3_template(seq: &[u8], r: usize) -> Template {
    let a = seq[r];
    debug_assert_eq!(&seq[r..r + 3], &[a, a, a + 1]);
    let mut v = seq.to_vec();
    v[r + 1] = a + 1;
    v[r + 2] = a;
    let (c1, c2) = (Gen::cross(r + 1), Gen::cross(r + 2));
    let (x1, x2) = (Gen::dot(r + 1), Gen::dot(r + 2));
    vec![
        (1, vec![c2, c1], vec![x2, c1, c2], v.clone()),
        (-1, vec![c2, c1, x1], vec![c1, c2], v),
    ]
}

fn r3_split_template(seq: &[u8], r: usize) -> Template {
    let j = seq[r];
    debug_assert_eq!(&seq[r..r + 3], &[j, j - 1, j]);
    let sign = braid_defect(j, j - 1, j);
    let (c1, c2) = (Gen::cross(r + 1), Gen::cross(r + 2));
    let mut up = seq.to_vec();
    up[r] = j - 1;
    up[r + 1] = j;
    let mut down = seq.to_vec();
    down[r + 1] = j;
    down[r + 2] = j - 1;
    vec![
        (sign, vec![c2, c1], vec![c1], up),
        (-sign, vec![c1, c2], vec![c2], down),
    ]
}

#[derive(Clone, Debug)]
struct FState {
    coeff: i64,
    seq: Vec<u8>,
    left: Vec<Gen>,
    right: Vec<Gen>,
    blocks: Vec<u8>,
    cur: Option<(u8, usize)>,
}

impl FState {
    fn apply(&self, t: Template) -> Vec<FState> {
        t.into_iter()
            .map(|(c, a, b, v)| {
                let mut left = a;
                left.extend_from_slice(&self.left);
                let mut right = self.right.clone();
                right.extend(b);
                FState {
                    coeff: self.coeff * c,
                    seq: v,
                    left,
                    right,
                    blocks: self.blocks.clone(),
                    cur: self.cur,
                }
            })
            .collect()
    }

    fn swap(self, r: usize) -> FState {
        let t = swap_template(&self.seq, r);
        self.apply(t).pop().expect("one term")
    }

    fn swaps(self, rs: impl IntoIterator<Item = usize>) -> FState {
        rs.into_iter().fold(self, FState::swap)
    }

    fn floor(&self, n: u8) -> usize {
        self.blocks.iter().map(|&s| (n - s + 1) as usize).sum()
    }
}

const STATE_BUDGET: usize = 1_000_000;

fn run(rank: usize, e: &StrandSeq) -> Result<Vec<FactorTerm>, KlrError> {
    let n = rank as u8;
    let mut stack = vec![FState {
        coeff: 1,
        seq: e.labels.clone(),
        left: Vec::new(),
        right: Vec::new(),
        blocks: Vec::new(),
        cur: None,
    }];
    let mut finals: BTreeMap<(SpecialIdempotentSpec, Vec<Gen>, Vec<Gen>), i64> = BTreeMap::new();
    let mut processed = 0usize;
    while let Some(mut st) = stack.pop() {
        processed += 1;
        if processed > STATE_BUDGET {
            return Err(KlrError::BudgetExceeded(STATE_BUDGET as u64));
        }
        let floor = st.floor(n);
        let Some((s, pos)) = st.cur else {
            match (floor..st.seq.len()).find(|&i| st.seq[i] == n) {
                Some(idx) => {
                    st.cur = Some((n, idx));
                    stack.push(st);
                }
                None => {
                    let through = SpecialIdempotentSpec {
                        rank,
                        xi: XiSequence(st.blocks.iter().map(|&b| b as usize).collect()),
                        tail: StrandSeq {
                            rank,
                            labels: st.seq[floor..].to_vec(),
                        },
                    };
                    *finals.entry((through, st.left, st.right)).or_insert(0) += st.coeff;
                }
            }
            continue;
        };
        let len = (n - s + 1) as usize;
        if pos == floor {
            match st.blocks.last() {
                Some(&t) if s < t => stack.extend(merge(st, n, s, floor)),
                _ => {
                    st.blocks.push(s);
                    st.cur = None;
                    stack.push(st);
                }
            }
            continue;
        }
        let j = st.seq[pos - 1];
        if j + 1 < s {
            // Slide the whole block left past a distant label.
            let mut st = st.swaps((pos - 1)..(pos - 1 + len));
            st.cur = Some((s, pos - 1));
            stack.push(st);
        } else if j + 1 == s {
            st.cur = Some((s - 1, pos - 1));
            stack.push(st);
        } else if j == s {
            debug_assert!(s < n, "two n-strands meet away from the floor");
            for t in st.apply(inv_r3_template(&st.seq, pos - 1)) {
                // Eject the second s past s+2, …, n.
                let mut t = t.swaps((pos + 1)..(pos + 1 + (n - s - 1) as usize));
                t.cur = Some((s, pos - 1));
                stack.push(t);
            }
        } else {
            debug_assert!(j < n, "an unprocessed n-strand left of the block");
            // Pull j right past s, …, j−2.
            let pulls = (j - 1 - s) as usize;
            let st = st.swaps((pos - 1)..(pos - 1 + pulls));
            let q = pos - 1 + pulls;
            let mut terms = st.apply(r3_split_template(&st.seq, q));
            let down = terms.pop().expect("two terms");
            let up = terms.pop().expect("two terms");
            // (j−1, j, j): resolve (j, j, j+1) and eject the spare j.
            for t in up.apply(inv_r3_template(&up.seq, q + 1)) {
                let mut t = t.swaps((q + 3)..(q + 3 + (n - j - 1) as usize));
                t.cur = Some((s, pos - 1));
                stack.push(t);
            }
            // (j, j, j−1): eject j−1, resolve (j, j, j+1), eject the spare j.
            let down = down.swaps((q + 2)..(q + 2 + (n - j) as usize));
            for t in down.apply(inv_r3_template(&down.seq, q)) {
                let mut t = t.swaps((q + 2)..(q + 2 + (n - j - 1) as usize));
                t.cur = Some((j, q));
                stack.push(t);
            }
        }
    }
    Ok(finals
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((through, left, right), coeff)| {
            let special = through.full_sequence();
            FactorTerm {
                coeff,
                left: KlrElement::from_word(KlrWord {
                    rank,
                    bottom: special.labels.clone(),
                    ops: left,
                }),
                right: KlrElement::from_word(KlrWord {
                    rank,
                    bottom: e.labels.clone(),
                    ops: right,
                }),
                through,
            }
        })
        .collect())
}

/// Reorders a new block `(s, …, n)` arriving at the floor behind a finished
/// block `(t, …, n)` with `s < t`.
fn merge(st: FState, n: u8, s: u8, floor: usize) -> Vec<FState> {
    // Pull the n of the last block right past s, …, n−2.
    let pulls = (n - 1 - s) as usize;
    let st = st.swaps((floor - 1)..(floor - 1 + pulls));
    let q = floor - 1 + pulls;
    let mut terms = st.apply(r3_split_template(&st.seq, q));
    let mut down = terms.pop().expect("two terms");
    let mut up = terms.pop().expect("two terms");
    let mut out = Vec::new();
    // (n−1, n, n): the last block dissolves and (s, …, n) continues left.
    up.blocks.pop();
    up.cur = Some((s, floor - 1));
    out.push(up);
    // (n, n, n−1): move both n's left past s, …, n−2; blocks (t…n), (n).
    let start = floor - 1;
    down = down.swaps((start..q).rev());
    down = down.swaps(((start + 1)..(q + 1)).rev());
    down.blocks.push(n);
    down.cur = None;
    out.push(down);
    out
}

/// Factorization of an idempotent with exactly one strand labelled `n`.
pub fn factor_one_strand(idem: &StrandSeq) -> Result<Vec<FactorTerm>, KlrError> {
    let n = idem.rank as u8;
    let found = idem.count(n);
    if found != 1 {
        return Err(KlrError::WrongStrandCount {
            label: n,
            expected: 1,
            found,
        });
    }
    run(idem.rank, idem)
}

/// Factorization of an idempotent with exactly `k` strands labelled `n`;
/// every term passes through ordered blocks `i_1 ≤ … ≤ i_k`.
pub fn factor_general(idem: &StrandSeq, k: usize) -> Result<Vec<FactorTerm>, KlrError> {
    let n = idem.rank as u8;
    let found = idem.count(n);
    if found != k {
        return Err(KlrError::WrongStrandCount {
            label: n,
            expected: k,
            found,
        });
    }
    run(idem.rank, idem)
}

/// `Σ coeff · left · 1_{through} · right` in normal form.
pub fn reconstruct(rw: &mut Rewriter, rank: usize, terms: &[FactorTerm]) -> KlrElement {
    let mut out = KlrElement::zero(rank);
    for t in terms {
        let mid = KlrElement::idempotent(&t.through.full_sequence());
        let lower = rw.multiply(&mid, &t.right);
        let prod = rw.multiply(&t.left, &lower);
        out = out.add(&prod.scale(t.coeff));
    }
    out
}
