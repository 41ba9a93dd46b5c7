//! Cyclotomic quotients `R^λ = R / I^λ`, where `I^λ` is the two-sided ideal
//! generated by `x_1^{λ̄_{i_1}} 1_i` for all sequences `i`.
//!
//! # Exact reduction
//!
//! Every element of `1_{e′} I^λ 1_e` is a combination of
//! `ψ_w x_1^{λ̄_{j_1}} ψ_v x^b 1_e`, where `j` runs over `seq(β)`, `v` and `w`
//! are permutations carrying `e` to `j` and `j` to `e′`, and `x^b` is a dot
//! monomial at the bottom (dots above the generator commute past `x_1` or
//! merge with it). The normal form of the product is computed once and
//! shifted by `x^b`, so each graded piece `1_{e′} I^λ_d 1_e` is spanned by
//! finitely many explicit vectors in the finite normal-form basis of
//! `1_{e′} R_d 1_e`. Reduction modulo the ideal is therefore exact linear
//! algebra over `ℚ`, one degree at a time.
//!
//! # Graded dimensions
//!
//! To know which degrees can be nonzero, the context searches for
//! nilpotency certificates `x_r^{N_r} 1_e ∈ I^λ` for every strand, up to
//! `dot_cap`. Once found, every basis word with `a_r ≥ N_r` lies in the
//! ideal, so the quotient is spanned by words with `a_r < N_r` and its
//! degrees are bounded. A result is `exact` when all certificates were found
//! and every degree fits under `degree_cap`; otherwise it is `capped`.
//!
//! # Branching and Gelfand–Tsetlin layers
//!
//! [`pi_project`] sends an element between special idempotents
//! `e(p_{i_1…i_k}, tail)` to `R^{ξ(λ)}` of rank `n − 1`. It keeps the
//! normal-form terms in which the block strands run straight up without
//! dots, strips the block, and reduces in the smaller cyclotomic quotient.
//! [`gt_idempotent`] nests these blocks along a Gelfand–Tsetlin pattern,
//! and [`gt_orthogonality_check`] computes Hom spaces in the quotient `Ř^λ`.
//! That quotient kills every word that dots a block strand or crosses two
//! strands of the same layer.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combi::{enumerate_gt_patterns, removal_sequence, xi_apply, CombiError, GtPattern, Partition, SlWeight, XiSequence};
use crate::klr::conventions::crossing_degree;
use crate::klr::rewrite::{basis_word, canonical_word, with_default, word_basis, Basis, Lin, Op};
use crate::klr::{decorate_regions, Gen, KlrElement, KlrError, KlrWord, SpecialIdempotentSpec, StrandSeq};
use crate::linalg::{Echelon, SparseVec};
use crate::qint::LaurentPoly;
use crate::uqmod::{seq_of, GramOracle};

/// Default degree cap of a context.
pub const DEFAULT_DEGREE_CAP: i64 = 64;

/// Whether a result is proven (`exact`) or only valid below the caps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exact,
    Capped,
}

impl Status {
    /// `exact` only if both are.
    pub fn and(self, other: Status) -> Status {
        if self == Status::Exact && other == Status::Exact {
            Status::Exact
        } else {
            Status::Capped
        }
    }

    pub fn is_exact(self) -> bool {
        self == Status::Exact
    }
}

/// Errors raised by cyclotomic computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("invalid cap: {0}")]
    InvalidCap(String),
    #[error("partition must have at least one part")]
    EmptyPartition,
    #[error("element has rank {got}, context has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("element is not a consistent combination of words")]
    Inconsistent,
    #[error("removal sequence {0:?} is not sorted and λ-dominant")]
    NotDominant(XiSequence),
    #[error("sequence {0:?} does not start with the block strands")]
    NotSpecial(Vec<u8>),
    #[error("mask does not fit the word: {0}")]
    BadMask(String),
    #[error("reduced representative is not integral (denominator {0})")]
    NonIntegral(String),
    #[error("coefficient does not fit in 64 bits")]
    Overflow,
    #[error(transparent)]
    Combi(#[from] CombiError),
    #[error(transparent)]
    Klr(#[from] KlrError),
}

/// One graded piece `1_{e′} R_d 1_e` together with its ideal part.
#[derive(Debug)]
struct Level {
    cols: Vec<Basis>,
    index: HashMap<Basis, usize>,
    ideal: Echelon,
}

type PairKey = (Vec<u8>, Vec<u8>);

#[derive(Debug, Default)]
struct Memo {
    generators: HashMap<PairKey, Rc<Vec<(i64, Lin)>>>,
    levels: HashMap<(Vec<u8>, Vec<u8>, i64), Rc<Level>>,
    certificates: HashMap<Vec<u8>, Rc<Vec<Option<u32>>>>,
    gdims: HashMap<PairKey, (LaurentPoly, Status)>,
    branches: HashMap<XiSequence, Rc<CycContext>>,
}

/// A partition `λ` with `n + 1` parts, its ideal data and computation caps.
///
/// The partition is stored with last part 0. Lowering every part by the
/// last one changes neither `λ̄` nor the algebra.
#[derive(Debug)]
pub struct CycContext {
    pub lambda: Partition,
    pub lambda_bar: SlWeight,
    pub degree_cap: i64,
    pub dot_cap: u32,
    memo: RefCell<Memo>,
}

/// Builds a context. The default `dot_cap` is `|λ| + max_i λ̄_i` (at least 1);
/// the default degree cap is [`DEFAULT_DEGREE_CAP`]. Caps must be positive.
pub fn make_context(lambda: &Partition, degree_cap: Option<i64>, dot_cap: Option<u32>) -> Result<CycContext, CycError> {
    if lambda.is_empty() {
        return Err(CycError::EmptyPartition);
    }
    let lambda = lambda.normalized();
    let parts = lambda.parts();
    let lambda_bar = SlWeight(parts.windows(2).map(|w| w[0] as i64 - w[1] as i64).collect());
    let degree_cap = degree_cap.unwrap_or(DEFAULT_DEGREE_CAP);
    if degree_cap <= 0 {
        return Err(CycError::InvalidCap(format!("degree cap must be positive, got {degree_cap}")));
    }
    let max_bar = lambda_bar.0.iter().copied().max().unwrap_or(0) as u32;
    let dot_cap = dot_cap.unwrap_or((lambda.size() + max_bar).max(1));
    if dot_cap == 0 {
        return Err(CycError::InvalidCap("dot cap must be positive".into()));
    }
    Ok(CycContext {
        lambda,
        lambda_bar,
        degree_cap,
        dot_cap,
        memo: RefCell::new(Memo::default()),
    })
}

/// All permutations `w` (bottom position ↦ top position) carrying the
/// labels `from` to `to`.
fn perms_between(from: &[u8], to: &[u8]) -> Vec<Vec<u8>> {
    fn rec(from: &[u8], to: &[u8], p: usize, used: &mut Vec<bool>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if p == from.len() {
            out.push(cur.clone());
            return;
        }
        for q in 0..to.len() {
            if !used[q] && to[q] == from[p] {
                used[q] = true;
                cur.push(q as u8);
                rec(from, to, p + 1, used, cur, out);
                cur.pop();
                used[q] = false;
            }
        }
    }
    let mut out = Vec::new();
    if from.len() == to.len() {
        rec(from, to, 0, &mut vec![false; to.len()], &mut Vec::new(), &mut out);
    }
    out
}

/// Degree of `ψ_w 1_e`: every inverted pair crosses once.
fn perm_degree(bottom: &[u8], w: &[u8]) -> i64 {
    let mut d = 0;
    for p in 0..w.len() {
        for q in p + 1..w.len() {
            if w[p] > w[q] {
                d += crossing_degree(bottom[p], bottom[q]);
            }
        }
    }
    d
}

/// All exponent vectors of length `m` summing to `total`, with `a_r < bound_r`
/// when bounds are given.
fn compositions(total: u32, m: usize, bound: Option<&[u32]>) -> Vec<Vec<u8>> {
    fn rec(left: u32, r: usize, m: usize, bound: Option<&[u32]>, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if r == m {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let hi = match bound {
            Some(b) if b[r] == 0 => return,
            Some(b) => left.min(b[r] - 1),
            None => left,
        };
        for k in 0..=hi {
            cur.push(k as u8);
            rec(left - k, r + 1, m, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, 0, m, bound, &mut Vec::new(), &mut out);
    out
}

fn beta_of(labels: &[u8], rank: usize) -> Vec<u32> {
    let mut b = vec![0u32; rank];
    for &l in labels {
        b[l as usize - 1] += 1;
    }
    b
}

fn to_i64(x: &BigInt) -> Result<i64, CycError> {
    x.to_i64().ok_or(CycError::Overflow)
}

impl CycContext {
    /// The rank `n` of the KLR algebra (labels `1..=n`).
    pub fn rank(&self) -> usize {
        self.lambda.len() - 1
    }

    /// `λ̄_i` for a label `i`.
    pub fn bar(&self, label: u8) -> u32 {
        self.lambda_bar.0[label as usize - 1].max(0) as u32
    }

    fn check_labels(&self, labels: &[u8]) -> Result<(), CycError> {
        StrandSeq::new(self.rank(), labels.to_vec())?;
        Ok(())
    }

    /// Normal forms of `ψ_w x_1^{λ̄_{j_1}} ψ_v 1_e` for all `j`, `v: e → j`,
    /// `w: j → e′`, with their degrees.
    fn generators(&self, e: &[u8], e2: &[u8]) -> Rc<Vec<(i64, Lin)>> {
        let key = (e.to_vec(), e2.to_vec());
        if let Some(g) = self.memo.borrow().generators.get(&key) {
            return g.clone();
        }
        let mut out = Vec::new();
        if !e.is_empty() {
            for j in seq_of(&beta_of(e, self.rank())) {
                let dots = self.bar(j[0]);
                for v in perms_between(e, &j) {
                    for w in perms_between(&j, e2) {
                        let mut ops: Vec<Op> = canonical_word(&v).into_iter().map(Op::Cross).collect();
                        ops.extend(std::iter::repeat(Op::Dot(0)).take(dots as usize));
                        ops.extend(canonical_word(&w).into_iter().map(Op::Cross));
                        let lin = with_default(|r| r.normalize_ops(e, &ops));
                        if !lin.is_empty() {
                            let deg = perm_degree(e, &v) + 2 * dots as i64 + perm_degree(&j, &w);
                            out.push((deg, lin));
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.memo.borrow_mut().generators.insert(key, out.clone());
        out
    }

    /// Normal-form basis of `1_{e′} R_d 1_e`, with optional bounds
    /// `a_r < bound_r`. Columns with more dots come first so that reduced
    /// representatives prefer fewer dots.
    fn basis(&self, e: &[u8], e2: &[u8], d: i64, bound: Option<&[u32]>) -> Vec<Basis> {
        let mut cols = Vec::new();
        for w in perms_between(e, e2) {
            let rest = d - perm_degree(e, &w);
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for a in compositions((rest / 2) as u32, e.len(), bound) {
                cols.push(Basis { w: w.clone(), a });
            }
        }
        cols.sort_by(|x, y| {
            let sx: u32 = x.a.iter().map(|&k| k as u32).sum();
            let sy: u32 = y.a.iter().map(|&k| k as u32).sum();
            sy.cmp(&sx).then_with(|| y.a.cmp(&x.a)).then_with(|| x.w.cmp(&y.w))
        });
        cols
    }

    /// The ideal vectors of degree `d`, restricted to the given columns.
    fn ideal_vectors(
        &self,
        e: &[u8],
        e2: &[u8],
        d: i64,
        bound: Option<&[u32]>,
        index: &HashMap<Basis, usize>,
        mut sink: impl FnMut(SparseVec) -> bool,
    ) {
        let gens = self.generators(e, e2);
        for (g, lin) in gens.iter() {
            let rest = d - g;
            if rest < 0 || rest % 2 != 0 {
                continue;
            }
            for b in compositions((rest / 2) as u32, e.len(), bound) {
                let mut v = SparseVec::new();
                for (basis, &c) in lin {
                    let a: Vec<u8> = basis.a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    let shifted = Basis { w: basis.w.clone(), a };
                    if let Some(&col) = index.get(&shifted) {
                        *v.entry(col).or_insert_with(BigInt::zero) += c;
                    }
                }
                v.retain(|_, c| !c.is_zero());
                if !v.is_empty() && sink(v) {
                    return;
                }
            }
        }
    }

    /// The full graded piece with its ideal part (memoised).
    fn level(&self, e: &[u8], e2: &[u8], d: i64) -> Rc<Level> {
        let key = (e.to_vec(), e2.to_vec(), d);
        if let Some(l) = self.memo.borrow().levels.get(&key) {
            return l.clone();
        }
        let cols = self.basis(e, e2, d, None);
        let index: HashMap<Basis, usize> = cols.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut ideal = Echelon::new();
        let n = cols.len();
        self.ideal_vectors(e, e2, d, None, &index, |v| {
            ideal.insert(v);
            ideal.rank() == n
        });
        let level = Rc::new(Level { cols, index, ideal });
        self.memo.borrow_mut().levels.insert(key, level.clone());
        level
    }

    /// Minimal `N_r` with `x_r^{N_r} 1_e ∈ I^λ` for each strand, if found
    /// within the caps.
    pub fn nilpotency_bounds(&self, e: &[u8]) -> Vec<Option<u32>> {
        if let Some(c) = self.memo.borrow().certificates.get(e) {
            return c.as_ref().clone();
        }
        let m = e.len();
        let mut out = vec![None; m];
        for (r, slot) in out.iter_mut().enumerate() {
            for n in 0..=self.dot_cap {
                if 2 * n as i64 > self.degree_cap {
                    break;
                }
                let mut a = vec![0u8; m];
                a[r] = n as u8;
                let target = Basis {
                    w: (0..m as u8).collect(),
                    a,
                };
                let level = self.level(e, e, 2 * n as i64);
                let col = level.index[&target];
                let v: SparseVec = [(col, BigInt::from(1))].into_iter().collect();
                if level.ideal.contains(&v) {
                    *slot = Some(n);
                    break;
                }
            }
        }
        self.memo
            .borrow_mut()
            .certificates
            .insert(e.to_vec(), Rc::new(out.clone()));
        out
    }

    /// Reduces one homogeneous component given in normal-form coordinates.
    fn reduce_component(&self, e: &[u8], e2: &[u8], d: i64, terms: &Lin) -> Result<(Lin, Status), CycError> {
        if d > self.degree_cap {
            // Only the defining generators are applied above the cap.
            let kept: Lin = terms
                .iter()
                .filter(|(b, _)| e.is_empty() || (b.a[0] as u32) < self.bar(e[0]))
                .map(|(b, &c)| (b.clone(), c))
                .collect();
            return Ok((kept, Status::Capped));
        }
        let level = self.level(e, e2, d);
        let v: SparseVec = terms
            .iter()
            .map(|(b, &c)| (level.index[b], BigInt::from(c)))
            .collect();
        let r = level
            .ideal
            .reduce(&v)
            .map_err(|den| CycError::NonIntegral(den.to_string()))?;
        let mut out = Lin::new();
        for (col, c) in r {
            out.insert(level.cols[col].clone(), to_i64(&c)?);
        }
        Ok((out, Status::Exact))
    }
}

/// Reduces `x` modulo `I^λ`: normal form, then the canonical representative
/// of every homogeneous component modulo the ideal's graded piece.
/// Components above the degree cap only lose words whose leftmost strand
/// carries at least `λ̄_{i_1}` dots, and are flagged `capped`.
pub fn cyc_reduce(x: &KlrElement, ctx: &CycContext) -> Result<(KlrElement, Status), CycError> {
    if x.rank != ctx.rank() {
        return Err(CycError::RankMismatch {
            expected: ctx.rank(),
            got: x.rank,
        });
    }
    let nf = with_default(|r| r.normal_form(x));
    let mut groups: BTreeMap<(Vec<u8>, Vec<u8>, i64), Lin> = BTreeMap::new();
    for (w, c) in nf.terms() {
        let key = (w.bottom.clone(), w.top(), crate::klr::degree(w));
        groups.entry(key).or_default().insert(word_basis(w), c);
    }
    let mut out = KlrElement::zero(x.rank);
    let mut status = Status::Exact;
    for ((e, e2, d), terms) in groups {
        let (reduced, s) = ctx.reduce_component(&e, &e2, d, &terms)?;
        status = status.and(s);
        for (b, c) in reduced {
            out.add_term(basis_word(x.rank, &e, &b), c);
        }
    }
    Ok((out, status))
}

/// Graded dimension of `1_{e′} R^λ 1_e` with its status.
pub fn gdim_hom(e: &StrandSeq, e2: &StrandSeq, ctx: &CycContext) -> Result<(LaurentPoly, Status), CycError> {
    ctx.check_labels(&e.labels)?;
    ctx.check_labels(&e2.labels)?;
    let rank = ctx.rank();
    if e.len() != e2.len() || beta_of(&e.labels, rank) != beta_of(&e2.labels, rank) {
        return Ok((LaurentPoly::zero(), Status::Exact));
    }
    let key = (e.labels.clone(), e2.labels.clone());
    if let Some(r) = ctx.memo.borrow().gdims.get(&key) {
        return Ok(r.clone());
    }
    let (e, e2) = (&e.labels[..], &e2.labels[..]);
    let certs = ctx.nilpotency_bounds(e);
    let mut status = if certs.iter().all(Option::is_some) {
        Status::Exact
    } else {
        Status::Capped
    };
    let bounds: Vec<u32> = certs.iter().map(|c| c.unwrap_or(ctx.dot_cap + 1)).collect();
    let mut result = LaurentPoly::zero();
    let perms = perms_between(e, e2);
    if !bounds.contains(&0) && !perms.is_empty() {
        let degs: Vec<i64> = perms.iter().map(|w| perm_degree(e, w)).collect();
        let lo = *degs.iter().min().unwrap_or(&0);
        let mut hi = degs.iter().max().unwrap_or(&0) + 2 * bounds.iter().map(|&b| b as i64 - 1).sum::<i64>();
        if hi > ctx.degree_cap {
            hi = ctx.degree_cap;
            status = Status::Capped;
        }
        for d in lo..=hi {
            let cols = ctx.basis(e, e2, d, Some(&bounds));
            if cols.is_empty() {
                continue;
            }
            let index: HashMap<Basis, usize> = cols.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
            let mut ideal = Echelon::new();
            let n = cols.len();
            ctx.ideal_vectors(e, e2, d, Some(&bounds), &index, |v| {
                ideal.insert(v);
                ideal.rank() == n
            });
            let dim = n - ideal.rank();
            if dim > 0 {
                result.add_term(d as i32, BigInt::from(dim));
            }
        }
    }
    ctx.memo
        .borrow_mut()
        .gdims
        .insert(key, (result.clone(), status));
    Ok((result, status))
}

/// One `gdim_hom` value set against the Shapovalov form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdimRecord {
    pub lambda: Partition,
    pub left: Vec<u8>,
    pub right: Vec<u8>,
    pub gdim: LaurentPoly,
    pub shapovalov: LaurentPoly,
    pub status: Status,
    /// The exponent `s` with `gdim = q^s · shapovalov`, when both are nonzero.
    pub qshift: Option<i64>,
    pub ok: bool,
}

/// Comparison of a whole weight space `seq(β)` against the Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpaceComparison {
    pub lambda: Partition,
    pub beta: Vec<u32>,
    pub entries: Vec<GdimRecord>,
    /// The single shift shared by all nonzero entries, if any.
    pub qshift: Option<i64>,
    pub status: Status,
    /// All entries agree up to the common shift and the status is exact.
    pub ok: bool,
}

fn shift_between(gdim: &LaurentPoly, gram: &LaurentPoly) -> Option<i64> {
    let s = gdim.min_exp()? as i64 - gram.min_exp()? as i64;
    (gram.shift(s as i32) == *gdim).then_some(s)
}

/// Compares `gdim 1_{e′} R^λ 1_e` with `⟨F_{e′} v, F_e v⟩` for a single pair.
pub fn compare_pair(e: &StrandSeq, e2: &StrandSeq, ctx: &CycContext) -> Result<GdimRecord, CycError> {
    let (gdim, status) = gdim_hom(e, e2, ctx)?;
    let gram = GramOracle::new(&ctx.lambda_bar).entry(&e2.labels, &e.labels);
    let qshift = shift_between(&gdim, &gram);
    let ok = (gdim.is_zero() && gram.is_zero()) || qshift.is_some();
    Ok(GdimRecord {
        lambda: ctx.lambda.clone(),
        left: e.labels.clone(),
        right: e2.labels.clone(),
        gdim,
        shapovalov: gram,
        status,
        qshift,
        ok,
    })
}

/// Compares every pair in `seq(β)` and requires one common q-shift.
pub fn compare_weight_space(beta: &[u32], ctx: &CycContext) -> Result<WeightSpaceComparison, CycError> {
    let rank = ctx.rank();
    let seqs = seq_of(beta);
    let mut entries = Vec::new();
    let mut status = Status::Exact;
    let mut shifts = Vec::new();
    let mut ok = true;
    for a in &seqs {
        for b in &seqs {
            let rec = compare_pair(
                &StrandSeq::new(rank, a.clone())?,
                &StrandSeq::new(rank, b.clone())?,
                ctx,
            )?;
            status = status.and(rec.status);
            ok &= rec.ok;
            if let Some(s) = rec.qshift {
                shifts.push(s);
            }
            entries.push(rec);
        }
    }
    shifts.dedup();
    let common = shifts.first().copied();
    ok &= shifts.iter().all(|&s| Some(s) == common) && status.is_exact();
    Ok(WeightSpaceComparison {
        lambda: ctx.lambda.clone(),
        beta: beta.to_vec(),
        entries,
        qshift: common,
        status,
        ok,
    })
}

/// `e(p_{i_1…i_k}, tail)` after checking that the removal sequence is
/// sorted and `λ`-dominant and that the tail avoids the label `n`.
pub fn special_idempotent(xi: &XiSequence, tail: &StrandSeq, ctx: &CycContext) -> Result<SpecialIdempotentSpec, CycError> {
    let rank = ctx.rank();
    if !xi.is_sorted() || !xi.is_dominant_for(&ctx.lambda) || xi.0.iter().any(|&i| i == 0 || i > rank + 1) {
        return Err(CycError::NotDominant(xi.clone()));
    }
    ctx.check_labels(&tail.labels)?;
    if let Some(&bad) = tail.labels.iter().find(|&&l| l as usize >= rank) {
        return Err(KlrError::LabelOutOfRange { label: bad, rank: rank - 1 }.into());
    }
    Ok(SpecialIdempotentSpec {
        rank,
        xi: xi.clone(),
        tail: StrandSeq {
            rank,
            labels: tail.labels.clone(),
        },
    })
}

/// Which strands (by bottom position) belong to the block group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PGroupMask {
    /// Number of strands.
    pub strands: usize,
    /// `block[p]` is true if the strand starting at bottom position `p`
    /// (0-based) belongs to the block group.
    pub block: Vec<bool>,
}

impl PGroupMask {
    /// The first `len` strands of `strands` form the group.
    pub fn leading(strands: usize, len: usize) -> Self {
        Self {
            strands,
            block: (0..strands).map(|p| p < len).collect(),
        }
    }

    /// The mask of a special idempotent: the block strands on the left.
    pub fn for_special(spec: &SpecialIdempotentSpec) -> Self {
        let total = spec.full_sequence().len();
        Self::leading(total, spec.block_len())
    }

    /// Number of strands in the group.
    pub fn group_len(&self) -> usize {
        self.block.iter().filter(|&&b| b).count()
    }
}

/// True if `w` crosses two block strands or puts a dot on a block strand,
/// i.e. `w` is one of the generators of the kernel of the branching
/// projection.
pub fn tilde_kernel_test(w: &KlrWord, mask: &PGroupMask) -> Result<bool, CycError> {
    if mask.strands != w.bottom.len() || mask.block.len() != mask.strands {
        return Err(CycError::BadMask(format!(
            "mask has {} strands, word has {}",
            mask.strands,
            w.bottom.len()
        )));
    }
    w.validate()?;
    // at[q] = bottom position of the strand currently at position q.
    let mut at: Vec<usize> = (0..mask.strands).collect();
    for g in &w.ops {
        match *g {
            Gen::Dot { pos } => {
                if mask.block[at[pos - 1]] {
                    return Ok(true);
                }
            }
            Gen::Cross { pos } => {
                if mask.block[at[pos - 1]] && mask.block[at[pos]] {
                    return Ok(true);
                }
                at.swap(pos - 1, pos);
            }
        }
    }
    Ok(false)
}

impl CycContext {
    /// The context of `R^{ξ(λ)}` (rank `n − 1`) for a dominant sequence.
    pub fn branch(&self, xi: &XiSequence) -> Result<Rc<CycContext>, CycError> {
        if let Some(c) = self.memo.borrow().branches.get(xi) {
            return Ok(c.clone());
        }
        if !xi.is_sorted() || !xi.is_dominant_for(&self.lambda) {
            return Err(CycError::NotDominant(xi.clone()));
        }
        let mu = xi_apply(xi, &self.lambda, true)?;
        let zeta = mu.truncate(self.rank());
        let ctx = Rc::new(make_context(&zeta, Some(self.degree_cap), Some(self.dot_cap))?);
        self.memo.borrow_mut().branches.insert(xi.clone(), ctx.clone());
        Ok(ctx)
    }
}

/// The branching projection `π_{i_1…i_k}`: an element whose words go between
/// special idempotents `e(p_{i_1…i_k}, ·)` is sent to `R^{ξ(λ)}` of rank
/// `n − 1`.
///
/// The normal form of `x` is split into the span of words in which the block
/// strands run straight up without dots, and its complement spanned by all
/// other normal-form words. The complement is discarded, the block is
/// stripped, and the result is reduced in `R^{ξ(λ)}`.
pub fn pi_project(x: &KlrElement, xi: &XiSequence, ctx: &CycContext) -> Result<(KlrElement, Status), CycError> {
    let rank = ctx.rank();
    if x.rank != rank {
        return Err(CycError::RankMismatch {
            expected: rank,
            got: x.rank,
        });
    }
    let target = ctx.branch(xi)?;
    let block: Vec<u8> = xi
        .0
        .iter()
        .flat_map(|&i| SpecialIdempotentSpec::block(rank, i))
        .collect();
    let plen = block.len();
    let nf = with_default(|r| r.normal_form(x));
    let mut image = KlrElement::zero(rank.saturating_sub(1));
    for (w, c) in nf.terms() {
        let top = w.top();
        for labels in [&w.bottom, &top] {
            if labels.len() < plen || labels[..plen] != block[..] || labels[plen..].iter().any(|&l| l as usize >= rank) {
                return Err(CycError::NotSpecial(labels.clone()));
            }
        }
        let b = word_basis(w);
        let straight = (0..plen).all(|p| b.w[p] as usize == p && b.a[p] == 0);
        if !straight {
            continue;
        }
        let tail = Basis {
            w: b.w[plen..].iter().map(|&q| q - plen as u8).collect(),
            a: b.a[plen..].to_vec(),
        };
        image.add_term(basis_word(rank - 1, &w.bottom[plen..], &tail), c);
    }
    cyc_reduce(&image, &target)
}

/// Appends a free strand labelled `label` on the right of every word.
pub fn append_strand(x: &KlrElement, label: u8) -> KlrElement {
    KlrElement::from_terms(
        x.rank,
        x.terms().map(|(w, c)| {
            let mut w = w.clone();
            w.bottom.push(label);
            (c, w)
        }),
    )
}

/// `X_i(j, r)`: on `(i, …, n, j, rest…)`, the strand `j` crosses leftwards
/// over the whole block `(i, …, n)`, carries `r` dots in the leftmost
/// region, and crosses back.
pub fn cycinc_generator(rank: usize, i: usize, j: u8, r: u32, rest: &[u8]) -> Result<KlrElement, CycError> {
    let block = SpecialIdempotentSpec::block(rank, i);
    let mut bottom = block.clone();
    bottom.push(j);
    bottom.extend_from_slice(rest);
    let seq = StrandSeq::new(rank, bottom)?;
    let p = block.len();
    let mut ops: Vec<Gen> = (1..=p).rev().map(Gen::cross).collect();
    ops.extend((0..r).map(|_| Gen::dot(1)));
    ops.extend((1..=p).map(Gen::cross));
    Ok(KlrElement::from_word(crate::klr::make_word(&seq, ops)?))
}

/// A generator of `R^{ξ(λ)}` with an explicit preimage under `π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiWitness {
    /// The generator, reduced in `R^{ξ(λ)}`.
    pub generator: KlrElement,
    /// The same diagram with the block strands added on the left.
    pub preimage: KlrElement,
    /// `π(preimage)`.
    pub image: KlrElement,
    pub ok: bool,
}

/// Checks that every idempotent, dot and crossing of `R^{ξ(λ)}` on tails of
/// length at most `max_tail` is the image of the diagram obtained by adding
/// the straight block strands on its left.
pub fn surjectivity_witnesses(xi: &XiSequence, max_tail: usize, ctx: &CycContext) -> Result<Vec<PiWitness>, CycError> {
    let rank = ctx.rank();
    let target = ctx.branch(xi)?;
    let block: Vec<u8> = xi
        .0
        .iter()
        .flat_map(|&i| SpecialIdempotentSpec::block(rank, i))
        .collect();
    let plen = block.len();
    let small = rank.saturating_sub(1);
    let mut tails: Vec<Vec<u8>> = vec![Vec::new()];
    let mut frontier = tails.clone();
    for _ in 0..max_tail {
        let mut next = Vec::new();
        for t in &frontier {
            for l in 1..=small as u8 {
                let mut u = t.clone();
                u.push(l);
                next.push(u);
            }
        }
        tails.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::new();
    for tail in tails {
        let m = tail.len();
        let mut gens: Vec<Vec<Gen>> = vec![Vec::new()];
        gens.extend((1..=m).map(|p| vec![Gen::dot(p)]));
        gens.extend((1..m).map(|p| vec![Gen::cross(p)]));
        for ops in gens {
            let small_word = KlrWord {
                rank: small,
                bottom: tail.clone(),
                ops: ops.clone(),
            };
            let (generator, _) = cyc_reduce(&KlrElement::from_word(small_word), &target)?;
            let mut bottom = block.clone();
            bottom.extend_from_slice(&tail);
            let shifted = ops
                .iter()
                .map(|g| match *g {
                    Gen::Dot { pos } => Gen::dot(pos + plen),
                    Gen::Cross { pos } => Gen::cross(pos + plen),
                })
                .collect();
            let preimage = KlrElement::from_word(KlrWord {
                rank,
                bottom,
                ops: shifted,
            });
            let (image, _) = pi_project(&preimage, xi, ctx)?;
            let ok = image == generator;
            out.push(PiWitness {
                generator,
                preimage,
                image,
                ok,
            });
        }
    }
    Ok(out)
}

/// One branching layer of a Gelfand–Tsetlin idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtLayer {
    /// The layer partition `μ^{(j)}` (with `j` parts).
    pub from: Partition,
    /// The next layer `μ^{(j−1)}`.
    pub to: Partition,
    /// The dominant removal sequence carrying one to the other.
    pub xi: XiSequence,
    /// Bottom positions `start..end` (0-based) of this layer's blocks.
    pub start: usize,
    pub end: usize,
}

/// The nested idempotent `e(s)` of a Gelfand–Tsetlin pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtIdempotent {
    pub pattern: GtPattern,
    pub layers: Vec<GtLayer>,
    /// The concatenated blocks, outermost layer leftmost.
    pub sequence: StrandSeq,
}

impl GtIdempotent {
    /// Layer index of every strand position.
    pub fn layer_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.sequence.len()];
        for (k, l) in self.layers.iter().enumerate() {
            for slot in &mut out[l.start..l.end] {
                *slot = k;
            }
        }
        out
    }
}

/// Builds `e(s)`: each layer `μ^{(j)} → μ^{(j−1)}` contributes the blocks of
/// its dominant removal sequence, labels at most `j − 1`.
pub fn gt_idempotent(s: &GtPattern) -> Result<GtIdempotent, CycError> {
    let pattern = GtPattern::new(s.layers().to_vec())?;
    let top = pattern.top().len();
    let rank = top.saturating_sub(1);
    let mut labels = Vec::new();
    let mut layers = Vec::new();
    for pair in pattern.layers().windows(2) {
        let (from, to) = (&pair[0], &pair[1]);
        let xi = removal_sequence(from, to);
        let start = labels.len();
        for &i in &xi.0 {
            labels.extend(SpecialIdempotentSpec::block(from.len() - 1, i));
        }
        layers.push(GtLayer {
            from: from.clone(),
            to: to.clone(),
            xi,
            start,
            end: labels.len(),
        });
    }
    Ok(GtIdempotent {
        pattern,
        layers,
        sequence: StrandSeq { rank, labels },
    })
}

/// Graded dimension of `e(s′) Ř^λ e(s)`: normal-form words that carry a dot
/// or cross two strands of the same layer (at the bottom or at the top) are
/// killed; the surviving words are reduced modulo `I^λ`.
pub fn gt_hom_dim(s: &GtIdempotent, s2: &GtIdempotent, ctx: &CycContext) -> Result<(LaurentPoly, Status), CycError> {
    let (e, e2) = (&s.sequence.labels, &s2.sequence.labels);
    let mut result = LaurentPoly::zero();
    if e.len() != e2.len() || beta_of(e, ctx.rank()) != beta_of(e2, ctx.rank()) {
        return Ok((result, Status::Exact));
    }
    let (lb, lt) = (s.layer_of(), s2.layer_of());
    let mut survivors: BTreeMap<i64, Vec<Basis>> = BTreeMap::new();
    for w in perms_between(e, e2) {
        let mut killed = false;
        for p in 0..w.len() {
            for q in p + 1..w.len() {
                if w[p] > w[q] && (lb[p] == lb[q] || lt[w[p] as usize] == lt[w[q] as usize]) {
                    killed = true;
                }
            }
        }
        if !killed {
            let a = vec![0u8; w.len()];
            survivors.entry(perm_degree(e, &w)).or_default().push(Basis { w, a });
        }
    }
    let mut status = Status::Exact;
    for (d, cols) in survivors {
        if d > ctx.degree_cap {
            status = Status::Capped;
            result.add_term(d as i32, BigInt::from(cols.len()));
            continue;
        }
        let index: HashMap<Basis, usize> = cols.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        let mut ideal = Echelon::new();
        let n = cols.len();
        ctx.ideal_vectors(e, e2, d, None, &index, |v| {
            ideal.insert(v);
            ideal.rank() == n
        });
        if n > ideal.rank() {
            result.add_term(d as i32, BigInt::from(n - ideal.rank()));
        }
    }
    Ok((result, status))
}

/// Outcome of the Gelfand–Tsetlin orthogonality check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GtOrthogonalityReport {
    pub lambda: Partition,
    pub patterns: usize,
    /// Ordered pairs `s ≠ s′` examined.
    pub pairs_checked: usize,
    /// Pairs (indices into the enumeration) with a nonzero Hom space.
    pub nonzero_pairs: Vec<(usize, usize)>,
    /// Number of distinct sequences `e(s)` with `1_{e(s)} ≠ 0` in `R^λ`.
    pub distinct_nonzero: usize,
    pub status: Status,
    pub ok: bool,
}

/// Checks `Hom_Ř(e(s), e(s′)) = 0` for all `s ≠ s′` in `S(λ)`.
pub fn gt_orthogonality_check(ctx: &CycContext) -> Result<GtOrthogonalityReport, CycError> {
    let patterns = enumerate_gt_patterns(&ctx.lambda);
    let idems = patterns.iter().map(gt_idempotent).collect::<Result<Vec<_>, _>>()?;
    let mut status = Status::Exact;
    let mut nonzero_pairs = Vec::new();
    let mut pairs_checked = 0;
    for (i, s) in idems.iter().enumerate() {
        for (j, s2) in idems.iter().enumerate() {
            if i == j {
                continue;
            }
            pairs_checked += 1;
            let (dim, st) = gt_hom_dim(s, s2, ctx)?;
            status = status.and(st);
            if !dim.is_zero() {
                nonzero_pairs.push((i, j));
            }
        }
    }
    let mut nonzero = std::collections::BTreeSet::new();
    for s in &idems {
        let (r, st) = cyc_reduce(&KlrElement::idempotent(&s.sequence), ctx)?;
        status = status.and(st);
        if !r.is_zero() {
            nonzero.insert(s.sequence.labels.clone());
        }
    }
    let ok = nonzero_pairs.is_empty() && status.is_exact();
    Ok(GtOrthogonalityReport {
        lambda: ctx.lambda.clone(),
        patterns: idems.len(),
        pairs_checked,
        nonzero_pairs,
        distinct_nonzero: nonzero.len(),
        status,
        ok,
    })
}

/// True if `1_{(1,…,1)}` with `λ̄₁ + 1` strands vanishes in the `sl₂`
/// quotient, with exact status.
pub fn sl2_vanishing_check(lambda_bar: u32) -> Result<bool, CycError> {
    let ctx = make_context(&Partition::new(vec![lambda_bar, 0])?, None, None)?;
    let seq = StrandSeq::new(1, vec![1; lambda_bar as usize + 1])?;
    let (r, status) = cyc_reduce(&KlrElement::idempotent(&seq), &ctx)?;
    Ok(r.is_zero() && status.is_exact())
}

/// Outcome of the region-weight vanishing check for one idempotent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylVanishingReport {
    pub idem: Vec<u8>,
    /// Some region of `1_idem` has a negative entry.
    pub flagged: bool,
    /// The rightmost region has a negative entry.
    pub rightmost_flagged: bool,
    /// `1_idem` reduced to zero (only computed when flagged).
    pub vanishes: Option<bool>,
    pub status: Status,
    /// Flagged idempotents vanish exactly; unflagged ones hold vacuously.
    pub holds: bool,
}

/// Decorates the regions of `1_idem` starting from `λ` on the left; if any
/// region has a negative entry, requires `1_idem = 0` in `R^λ` exactly.
pub fn weyl_vanishing_check(idem: &StrandSeq, ctx: &CycContext) -> Result<WeylVanishingReport, CycError> {
    ctx.check_labels(&idem.labels)?;
    let word = KlrWord::identity(&StrandSeq {
        rank: ctx.rank(),
        labels: idem.labels.clone(),
    });
    let deco = decorate_regions(&word, &ctx.lambda.to_gl_weight());
    let flagged = deco.any_negative();
    let (vanishes, status) = if flagged {
        let (r, st) = cyc_reduce(&KlrElement::from_word(word), ctx)?;
        (Some(r.is_zero()), st)
    } else {
        (None, Status::Exact)
    };
    let holds = !flagged || (vanishes == Some(true) && status.is_exact());
    Ok(WeylVanishingReport {
        idem: idem.labels.clone(),
        flagged,
        rightmost_flagged: deco.rightmost_negative(),
        vanishes,
        status,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(parts: &[u32]) -> CycContext {
        make_context(&Partition::new(parts.to_vec()).unwrap(), None, None).unwrap()
    }

    fn seq(rank: usize, labels: &[u8]) -> StrandSeq {
        StrandSeq::new(rank, labels.to_vec()).unwrap()
    }

    #[test]
    fn context_defaults() {
        let c = ctx(&[2, 1, 0]);
        assert_eq!(c.lambda_bar, SlWeight(vec![1, 1]));
        assert_eq!(c.dot_cap, 4);
        assert!(make_context(&Partition::new(vec![1, 0]).unwrap(), Some(0), None).is_err());
        assert!(make_context(&Partition::new(vec![1, 0]).unwrap(), None, Some(0)).is_err());
    }

    #[test]
    fn permutations_and_compositions() {
        assert_eq!(perms_between(&[1, 2, 1], &[1, 1, 2]).len(), 2);
        assert_eq!(compositions(2, 2, None).len(), 3);
        assert_eq!(compositions(3, 2, Some(&[2, 2])).len(), 0);
        assert_eq!(compositions(0, 0, None), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn dot_on_level_one_strand_vanishes() {
        let c = ctx(&[1, 0]);
        let w = KlrWord {
            rank: 1,
            bottom: vec![1],
            ops: vec![Gen::dot(1)],
        };
        let (r, s) = cyc_reduce(&KlrElement::from_word(w), &c).unwrap();
        assert!(r.is_zero());
        assert_eq!(s, Status::Exact);
    }

    #[test]
    fn gdim_examples() {
        let c = ctx(&[1, 0]);
        assert_eq!(gdim_hom(&seq(1, &[1]), &seq(1, &[1]), &c).unwrap(), (LaurentPoly::one(), Status::Exact));
        assert_eq!(gdim_hom(&seq(1, &[1, 1]), &seq(1, &[1, 1]), &c).unwrap().0, LaurentPoly::zero());
        let c2 = ctx(&[2, 0]);
        let expect = LaurentPoly::from_terms([(0, 1), (2, 1)]);
        assert_eq!(gdim_hom(&seq(1, &[1]), &seq(1, &[1]), &c2).unwrap(), (expect, Status::Exact));
    }

    #[test]
    fn sl2_base_case() {
        for l in 0..=3 {
            assert!(sl2_vanishing_check(l).unwrap(), "λ̄ = {l}");
        }
    }
}
