//! The rewriting engine: reduction of diagram words to the normal form
//! `ψ_w x^a 1_i`.
//!
//! A normal-form word consists of dots collected at the bottom (an exponent
//! vector `a`) followed by the lexicographically minimal reduced word of a
//! permutation `w`. Elements are built by multiplying generators on top of a
//! normal-form word one at a time:
//!
//! * a dot on top slides down through the crossings, each slide through a
//!   crossing of equal labels leaving a correction term with that crossing
//!   removed;
//! * a crossing that lengthens `w` is appended and the resulting reduced word
//!   is carried to the canonical one by commutations and braid moves, each
//!   braid move on labels `(i, i±1, i)` leaving a correction term;
//! * a crossing that shortens `w` is first exposed at the top of the word by
//!   the same moves and then cancelled by the quadratic relation.
//!
//! Correction terms have fewer crossings, so the recursion terminates.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::conventions::{braid_defect, double_crossing, DoubleCrossing, DOT_SLIDE_FROM_LEFT, DOT_SLIDE_FROM_RIGHT};
use super::word::{Gen, KlrElement, KlrWord};

/// A normal-form word with a fixed bottom: permutation `w` (strand starting
/// at bottom position `p` ends at top position `w[p]`) and dot exponents `a`
/// at the bottom. Positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Basis {
    pub w: Vec<u8>,
    pub a: Vec<u8>,
}

impl Basis {
    pub fn identity(m: usize) -> Self {
        Basis {
            w: (0..m as u8).collect(),
            a: vec![0; m],
        }
    }
}

/// A 0-based generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Op {
    Dot(u8),
    Cross(u8),
}

impl From<Gen> for Op {
    fn from(g: Gen) -> Self {
        match g {
            Gen::Dot { pos } => Op::Dot((pos - 1) as u8),
            Gen::Cross { pos } => Op::Cross((pos - 1) as u8),
        }
    }
}

impl From<Op> for Gen {
    fn from(o: Op) -> Self {
        match o {
            Op::Dot(p) => Gen::dot(p as usize + 1),
            Op::Cross(p) => Gen::cross(p as usize + 1),
        }
    }
}

/// Linear combination of normal-form words with a common bottom.
pub(crate) type Lin = BTreeMap<Basis, i64>;

fn lin_add(acc: &mut Lin, b: Basis, c: i64) {
    if c == 0 {
        return;
    }
    match acc.entry(b) {
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

fn lin_add_scaled(acc: &mut Lin, other: &Lin, c: i64) {
    if c == 0 {
        return;
    }
    for (b, &x) in other {
        lin_add(acc, b.clone(), x * c);
    }
}

/// The lexicographically minimal reduced word of `w`, bottom to top.
pub(crate) fn canonical_word(w: &[u8]) -> Vec<u8> {
    let mut w = w.to_vec();
    let mut word = Vec::new();
    'outer: loop {
        for t in 0..w.len().saturating_sub(1) {
            if w[t] > w[t + 1] {
                word.push(t as u8);
                w.swap(t, t + 1);
                continue 'outer;
            }
        }
        return word;
    }
}

/// Permutation of a crossing word (bottom position ↦ top position).
pub(crate) fn perm_of_word(m: usize, word: &[u8]) -> Vec<u8> {
    // at[q] = bottom strand currently at position q.
    let mut at: Vec<u8> = (0..m as u8).collect();
    for &t in word {
        at.swap(t as usize, t as usize + 1);
    }
    let mut w = vec![0u8; m];
    for (q, &p) in at.iter().enumerate() {
        w[p as usize] = q as u8;
    }
    w
}

/// Labels after applying a crossing word.
pub(crate) fn labels_after(labels: &[u8], word: &[u8]) -> Vec<u8> {
    let mut l = labels.to_vec();
    for &t in word {
        l.swap(t as usize, t as usize + 1);
    }
    l
}

fn inverse(w: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; w.len()];
    for (p, &q) in w.iter().enumerate() {
        inv[q as usize] = p as u8;
    }
    inv
}

/// Correction terms of a conversion: `(coefficient, crossing word)`.
type Errs = Vec<(i64, Vec<u8>)>;

/// Products `op · (ψ_w x^a 1_bottom)` already normalised, keyed by
/// `(bottom, basis word, op)`.
type Memo = HashMap<(Vec<u8>, Basis, Op), Lin>;

/// A rewriting engine. The default engine is deterministic and memoised; a
/// randomized engine picks association orders and braid-move directions at
/// random and keeps no memo, so two randomized engines with different seeds
/// apply the relations in independent orders.
#[derive(Debug)]
pub struct Rewriter {
    memo: Option<Memo>,
    rng: Option<ChaCha8Rng>,
    steps: u64,
}

impl Default for Rewriter {
    fn default() -> Self {
        Self::new()
    }
}

impl Rewriter {
    /// Deterministic, memoised engine.
    pub fn new() -> Self {
        Self {
            memo: Some(HashMap::new()),
            rng: None,
            steps: 0,
        }
    }

    /// Deterministic engine without memoisation (for counting rule
    /// applications).
    pub fn unmemoised() -> Self {
        Self {
            memo: None,
            rng: None,
            steps: 0,
        }
    }

    /// Engine with randomized rule order.
    pub fn randomized(seed: u64) -> Self {
        Self {
            memo: None,
            rng: Some(ChaCha8Rng::seed_from_u64(seed)),
            steps: 0,
        }
    }

    /// Number of relation applications performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn reset_steps(&mut self) {
        self.steps = 0;
    }

    fn coin(&mut self) -> bool {
        match &mut self.rng {
            Some(r) => r.gen_bool(0.5),
            None => false,
        }
    }

    /// Normal form of an element.
    pub fn normal_form(&mut self, x: &KlrElement) -> KlrElement {
        let mut out = KlrElement::zero(x.rank);
        for (w, c) in x.terms() {
            let ops: Vec<Op> = w.ops.iter().map(|&g| g.into()).collect();
            let lin = self.normalize_ops(&w.bottom, &ops);
            for (b, x) in lin {
                out.add_term(basis_word(w.rank, &w.bottom, &b), c * x);
            }
        }
        out
    }

    /// Normal form of a single word.
    pub fn normal_form_word(&mut self, w: &KlrWord) -> KlrElement {
        self.normal_form(&KlrElement::from_word(w.clone()))
    }

    /// `a · b` (a stacked on top of b), in normal form.
    pub fn multiply(&mut self, a: &KlrElement, b: &KlrElement) -> KlrElement {
        let rank = a.rank.max(b.rank);
        let nb = self.normal_form(b);
        let mut out = KlrElement::zero(rank);
        for (wb, cb) in nb.terms() {
            let basis = word_basis(wb);
            let top = wb.top();
            for (wa, ca) in a.terms() {
                if wa.bottom != top {
                    continue;
                }
                let mut lin = Lin::new();
                lin.insert(basis.clone(), 1);
                for &g in &wa.ops {
                    lin = self.mult(&wb.bottom, &lin, g.into());
                }
                for (bb, x) in lin {
                    out.add_term(basis_word(rank, &wb.bottom, &bb), ca * cb * x);
                }
            }
        }
        out
    }

    pub(crate) fn normalize_ops(&mut self, bottom: &[u8], ops: &[Op]) -> Lin {
        let m = bottom.len();
        if ops.len() >= 2 && self.rng.is_some() {
            let k = self.rng.as_mut().map_or(1, |r| r.gen_range(1..ops.len()));
            let lower = self.normalize_ops(bottom, &ops[..k]);
            // Labels in the middle are determined by the crossings below.
            let mut mid = bottom.to_vec();
            for op in &ops[..k] {
                if let Op::Cross(t) = op {
                    mid.swap(*t as usize, *t as usize + 1);
                }
            }
            let upper = self.normalize_ops(&mid, &ops[k..]);
            let mut out = Lin::new();
            for (ub, uc) in &upper {
                let mut lin = lower.clone();
                for op in basis_ops(ub) {
                    lin = self.mult(bottom, &lin, op);
                }
                lin_add_scaled(&mut out, &lin, *uc);
            }
            return out;
        }
        let mut lin = Lin::new();
        lin.insert(Basis::identity(m), 1);
        for &op in ops {
            lin = self.mult(bottom, &lin, op);
        }
        lin
    }

    fn normalize_raw(&mut self, bottom: &[u8], a: &[u8], crossings: &[u8]) -> Lin {
        let mut lin = Lin::new();
        lin.insert(
            Basis {
                w: (0..bottom.len() as u8).collect(),
                a: a.to_vec(),
            },
            1,
        );
        for &t in crossings {
            lin = self.mult(bottom, &lin, Op::Cross(t));
        }
        lin
    }

    pub(crate) fn mult(&mut self, bottom: &[u8], lin: &Lin, op: Op) -> Lin {
        let mut out = Lin::new();
        for (b, &c) in lin {
            let r = self.mult_basis(bottom, b, op);
            lin_add_scaled(&mut out, &r, c);
        }
        out
    }

    fn mult_basis(&mut self, bottom: &[u8], b: &Basis, op: Op) -> Lin {
        if let Some(memo) = &self.memo {
            if let Some(r) = memo.get(&(bottom.to_vec(), b.clone(), op)) {
                return r.clone();
            }
        }
        let r = match op {
            Op::Dot(q) => self.mult_dot(bottom, b, q),
            Op::Cross(r) => self.mult_cross(bottom, b, r),
        };
        if let Some(memo) = &mut self.memo {
            memo.insert((bottom.to_vec(), b.clone(), op), r.clone());
        }
        r
    }

    fn mult_dot(&mut self, bottom: &[u8], b: &Basis, q: u8) -> Lin {
        let word = canonical_word(&b.w);
        let mut out = Lin::new();
        let mut pos = q;
        for j in (0..word.len()).rev() {
            let t = word[j];
            if pos != t && pos != t + 1 {
                continue;
            }
            let below = labels_after(bottom, &word[..j]);
            let (li, lj) = (below[t as usize], below[t as usize + 1]);
            let from_left = pos == t;
            pos = if from_left { t + 1 } else { t };
            if li == lj {
                self.steps += 1;
                let coef = if from_left { DOT_SLIDE_FROM_LEFT } else { DOT_SLIDE_FROM_RIGHT };
                let mut shorter = word.clone();
                shorter.remove(j);
                let e = self.normalize_raw(bottom, &b.a, &shorter);
                lin_add_scaled(&mut out, &e, coef);
            }
        }
        let mut a = b.a.clone();
        a[pos as usize] += 1;
        lin_add(&mut out, Basis { w: b.w.clone(), a }, 1);
        out
    }

    fn mult_cross(&mut self, bottom: &[u8], b: &Basis, r: u8) -> Lin {
        let word = canonical_word(&b.w);
        let winv = inverse(&b.w);
        let (r0, r1) = (r as usize, r as usize + 1);
        let mut w2 = b.w.clone();
        for q in w2.iter_mut() {
            if *q == r {
                *q = r + 1;
            } else if *q == r + 1 {
                *q = r;
            }
        }
        let mut out = Lin::new();
        if winv[r0] < winv[r1] {
            // Length goes up: ψ_r ψ_word is reduced; carry it to canonical form.
            let mut longer = word.clone();
            longer.push(r);
            let target = canonical_word(&w2);
            let errs = self.convert(bottom, &longer, &target);
            lin_add(&mut out, Basis { w: w2, a: b.a.clone() }, 1);
            for (c, e) in errs {
                let lin = self.normalize_raw(bottom, &b.a, &e);
                lin_add_scaled(&mut out, &lin, c);
            }
        } else {
            // Length goes down: expose ψ_r at the top, then apply R2.
            let mut target = canonical_word(&w2);
            target.push(r);
            let errs = self.convert(bottom, &word, &target);
            let shorter = Basis { w: w2.clone(), a: b.a.clone() };
            let top = labels_after(bottom, &target[..target.len() - 1]);
            self.steps += 1;
            match double_crossing(top[r0], top[r1]) {
                DoubleCrossing::Zero => {}
                DoubleCrossing::Identity => lin_add(&mut out, shorter.clone(), 1),
                DoubleCrossing::Dots { left, right } => {
                    let l = self.mult_basis(bottom, &shorter, Op::Dot(r));
                    lin_add_scaled(&mut out, &l, left);
                    let rr = self.mult_basis(bottom, &shorter, Op::Dot(r + 1));
                    lin_add_scaled(&mut out, &rr, right);
                }
            }
            for (c, mut e) in errs {
                e.push(r);
                let lin = self.normalize_raw(bottom, &b.a, &e);
                lin_add_scaled(&mut out, &lin, c);
            }
        }
        out
    }

    /// Carries the reduced word `from` to the reduced word `to` (same
    /// permutation), returning correction terms with
    /// `ψ_from = ψ_to + Σ c ψ_e`.
    fn convert(&mut self, labels: &[u8], from: &[u8], to: &[u8]) -> Errs {
        if from == to || to.is_empty() {
            return Vec::new();
        }
        if self.coin() {
            // Bottom-up: fix the lowest letter first.
            let t = to[0];
            let (moved, mut errs) = self.bring_to_bottom(labels, from, t);
            let next = labels_after(labels, &[t]);
            for (c, e) in self.convert(&next, &moved[1..], &to[1..]) {
                let mut w = vec![t];
                w.extend(e);
                errs.push((c, w));
            }
            errs
        } else {
            let t = *to.last().expect("nonempty");
            let (moved, mut errs) = self.bring_to_top(labels, from, t);
            for (c, mut e) in self.convert(labels, &moved[..moved.len() - 1], &to[..to.len() - 1]) {
                e.push(t);
                errs.push((c, e));
            }
            errs
        }
    }

    /// Rewrites the reduced word `u` (whose permutation has left descent `t`)
    /// into a reduced word ending in `t`.
    fn bring_to_top(&mut self, labels: &[u8], u: &[u8], t: u8) -> (Vec<u8>, Errs) {
        let last = *u.last().expect("t is a descent, so the word is nonempty");
        if last == t {
            return (u.to_vec(), Vec::new());
        }
        let v = &u[..u.len() - 1];
        if last.abs_diff(t) > 1 {
            self.steps += 1;
            let (mut v1, errs) = self.bring_to_top(labels, v, t);
            v1.pop();
            v1.push(last);
            v1.push(t);
            let errs = errs
                .into_iter()
                .map(|(c, mut e)| {
                    e.push(last);
                    (c, e)
                })
                .collect();
            return (v1, errs);
        }
        let (mut v1, e1) = self.bring_to_top(labels, v, t);
        v1.pop();
        let (mut v2, e2) = self.bring_to_top(labels, &v1, last);
        v2.pop();
        self.steps += 1;
        let mut errs: Errs = Vec::new();
        for (c, mut e) in e1 {
            e.push(last);
            errs.push((c, e));
        }
        for (c, mut e) in e2 {
            e.extend([t, last]);
            errs.push((c, e));
        }
        let below = labels_after(labels, &v2);
        let r = last.min(t) as usize;
        let defect = braid_defect(below[r], below[r + 1], below[r + 2]);
        if defect != 0 {
            let sign = if last < t { 1 } else { -1 };
            errs.push((sign * defect, v2.clone()));
        }
        v2.extend([t, last, t]);
        (v2, errs)
    }

    /// Rewrites the reduced word `u` (whose permutation has right descent
    /// `t`) into a reduced word starting with `t`.
    fn bring_to_bottom(&mut self, labels: &[u8], u: &[u8], t: u8) -> (Vec<u8>, Errs) {
        let first = u[0];
        if first == t {
            return (u.to_vec(), Vec::new());
        }
        let v = &u[1..];
        let lv = labels_after(labels, &[first]);
        if first.abs_diff(t) > 1 {
            self.steps += 1;
            let (v1, errs) = self.bring_to_bottom(&lv, v, t);
            let mut out = vec![t, first];
            out.extend_from_slice(&v1[1..]);
            let errs = errs
                .into_iter()
                .map(|(c, e)| {
                    let mut w = vec![first];
                    w.extend(e);
                    (c, w)
                })
                .collect();
            return (out, errs);
        }
        let (v1, e1) = self.bring_to_bottom(&lv, v, t);
        let lv1 = labels_after(labels, &[first, t]);
        let (v2, e2) = self.bring_to_bottom(&lv1, &v1[1..], first);
        let rest = &v2[1..];
        self.steps += 1;
        let mut errs: Errs = Vec::new();
        for (c, e) in e1 {
            let mut w = vec![first];
            w.extend(e);
            errs.push((c, w));
        }
        for (c, e) in e2 {
            let mut w = vec![first, t];
            w.extend(e);
            errs.push((c, w));
        }
        let r = first.min(t) as usize;
        let defect = braid_defect(labels[r], labels[r + 1], labels[r + 2]);
        if defect != 0 {
            let sign = if first < t { 1 } else { -1 };
            errs.push((sign * defect, rest.to_vec()));
        }
        let mut out = vec![t, first, t];
        out.extend_from_slice(rest);
        (out, errs)
    }
}

/// Generators of a normal-form word, bottom to top.
pub(crate) fn basis_ops(b: &Basis) -> Vec<Op> {
    let mut ops = Vec::new();
    for (p, &k) in b.a.iter().enumerate() {
        for _ in 0..k {
            ops.push(Op::Dot(p as u8));
        }
    }
    ops.extend(canonical_word(&b.w).into_iter().map(Op::Cross));
    ops
}

/// The stored word of a normal-form basis element.
pub(crate) fn basis_word(rank: usize, bottom: &[u8], b: &Basis) -> KlrWord {
    KlrWord {
        rank,
        bottom: bottom.to_vec(),
        ops: basis_ops(b).into_iter().map(Gen::from).collect(),
    }
}

/// Reads a normal-form word back into its permutation and exponents.
pub(crate) fn word_basis(w: &KlrWord) -> Basis {
    let m = w.bottom.len();
    let mut a = vec![0u8; m];
    let mut crossings = Vec::new();
    for g in &w.ops {
        match *g {
            Gen::Dot { pos } => {
                debug_assert!(crossings.is_empty(), "not a normal-form word");
                a[pos - 1] += 1;
            }
            Gen::Cross { pos } => crossings.push((pos - 1) as u8),
        }
    }
    Basis {
        w: perm_of_word(m, &crossings),
        a,
    }
}

/// True if `w` is already a normal-form word.
pub fn is_normal_form(w: &KlrWord) -> bool {
    let b = word_basis(w);
    let ops: Vec<Gen> = basis_ops(&b).into_iter().map(Gen::from).collect();
    ops == w.ops
}

thread_local! {
    static DEFAULT: RefCell<Rewriter> = RefCell::new(Rewriter::new());
}

/// Runs `f` with this thread's shared memoised rewriter.
pub fn with_default<R>(f: impl FnOnce(&mut Rewriter) -> R) -> R {
    DEFAULT.with(|r| f(&mut r.borrow_mut()))
}

/// Normal form using the shared memoised rewriter.
pub fn normal_form(x: &KlrElement) -> KlrElement {
    with_default(|r| r.normal_form(x))
}

/// `a · b` (a on top of b) in normal form. Pairs of words whose sequences
/// do not match contribute zero.
pub fn multiply(a: &KlrElement, b: &KlrElement) -> KlrElement {
    with_default(|r| r.multiply(a, b))
}
