//! The end-to-end acceptance suite.
//!
//! Each criterion is a self-contained exact check with a wall-clock budget.
//! Random instances come from fixed ChaCha seeds, so every run examines the
//! same words and idempotents. [`run_all`] is shared by the `acceptance`
//! integration test and the `suite acceptance` command.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combi::{
    enumerate_dominant, enumerate_gt_patterns, interlacing_set, partitions_with_parts, weyl_dim, Partition,
    SlWeight,
};
use crate::cyclo::{
    append_strand, compare_weight_space, cyc_reduce, gt_orthogonality_check, make_context, pi_project,
    sl2_vanishing_check, surjectivity_witnesses, weyl_vanishing_check, CycContext,
};
use crate::klr::{
    factor_general, inv_r3, multiply, normal_form, reconstruct, Gen, KlrElement, KlrWord, Rewriter,
    SpecialIdempotentSpec, StrandSeq,
};
use crate::uqmod::{build_irreducible, seq_of};

/// Number of acceptance criteria.
pub const CRITERIA: usize = 11;

/// Short names, indexed by criterion id − 1.
pub const NAMES: [&str; CRITERIA] = [
    "branching-dimensions",
    "gt-enumeration",
    "module-oracle",
    "confluence-associativity",
    "inverse-r3",
    "factorization",
    "gdim-vs-shapovalov",
    "sl2-base-case",
    "pi-projection",
    "gt-orthogonality",
    "region-vanishing",
];

/// Wall-clock budgets in milliseconds, indexed by criterion id − 1.
pub const LIMITS_MS: [u64; CRITERIA] = [
    1_000, 1_000, 30_000, 60_000, 1_000, 120_000, 300_000, 60_000, 120_000, 300_000, 120_000,
];

/// Outcome of one criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    /// The exact check succeeded and finished within its budget.
    pub pass: bool,
    /// The exact check alone succeeded.
    pub correct: bool,
    pub detail: String,
    pub elapsed_ms: u64,
    pub limit_ms: u64,
}

impl CriterionReport {
    /// A one-line human-readable summary: verdict, id, name, time/budget and
    /// detail.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<26} {:>8} ms / {:>6} ms  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

/// Outcome of the whole suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub criteria: Vec<CriterionReport>,
    pub pass: bool,
}

/// Runs every criterion in order.
pub fn run_all() -> AcceptanceReport {
    let criteria: Vec<CriterionReport> = (1..=CRITERIA).map(|id| run_criterion(id).expect("valid id")).collect();
    let pass = criteria.iter().all(|c| c.pass);
    AcceptanceReport { criteria, pass }
}

/// Runs criterion `id` (1-based); `None` for an unknown id.
pub fn run_criterion(id: usize) -> Option<CriterionReport> {
    let check: fn() -> Result<String, String> = match id {
        1 => branching_dimensions,
        2 => gt_enumeration,
        3 => module_oracle,
        4 => confluence_associativity,
        5 => inverse_r3,
        6 => factorization,
        7 => gdim_vs_shapovalov,
        8 => sl2_base_case,
        9 => pi_projection,
        10 => gt_orthogonality,
        11 => region_vanishing,
        _ => return None,
    };
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let limit = Duration::from_millis(LIMITS_MS[id - 1]);
    let (correct, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionReport {
        id,
        name: NAMES[id - 1].to_string(),
        pass: correct && elapsed <= limit,
        correct,
        detail,
        elapsed_ms: elapsed.as_millis() as u64,
        limit_ms: LIMITS_MS[id - 1],
    })
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn partition(parts: &[u32]) -> Partition {
    Partition::new(parts.to_vec()).expect("nonincreasing parts")
}

fn context(parts: &[u32]) -> Result<CycContext, String> {
    make_context(&partition(parts), None, None).map_err(|e| e.to_string())
}

/// Partitions with exactly 3 or 4 parts and at most 6 boxes.
fn small_partitions() -> Vec<Partition> {
    (3..=4)
        .flat_map(|m| (0..=6).flat_map(move |d| partitions_with_parts(m, d)))
        .collect()
}

/// All `β ∈ ℕ^rank` with `|β| = size`.
fn betas(rank: usize, size: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if r == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(r - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(rank, size, &mut Vec::new(), &mut out);
    out
}

/// All strand sequences of rank `rank` with at most `max_len` strands.
fn idempotents(rank: usize, max_len: u32) -> Vec<StrandSeq> {
    (0..=max_len)
        .flat_map(|size| betas(rank, size))
        .flat_map(|beta| seq_of(&beta))
        .map(|labels| StrandSeq::new(rank, labels).expect("labels in range"))
        .collect()
}

fn random_ops(rng: &mut ChaCha8Rng, m: usize, max_ops: usize) -> Vec<Gen> {
    let k = rng.gen_range(0..=max_ops);
    (0..k)
        .map(|_| {
            if m >= 2 && rng.gen_bool(0.6) {
                Gen::cross(rng.gen_range(1..m))
            } else {
                Gen::dot(rng.gen_range(1..=m))
            }
        })
        .collect()
}

fn random_word(rng: &mut ChaCha8Rng, max_rank: usize, max_len: usize, max_ops: usize) -> KlrWord {
    let rank = rng.gen_range(1..=max_rank);
    let m = rng.gen_range(1..=max_len);
    let bottom: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=rank as u8)).collect();
    let ops = random_ops(rng, m, max_ops);
    KlrWord { rank, bottom, ops }
}

fn branching_dimensions() -> Result<String, String> {
    let lambdas = small_partitions();
    for lambda in &lambdas {
        let lhs = weyl_dim(lambda);
        let rhs: u128 = interlacing_set(lambda, None).iter().map(weyl_dim).sum();
        ensure(lhs == rhs, || format!("{lambda}: weyl_dim {lhs} ≠ Σ {rhs}"))?;
    }
    Ok(format!("{} partitions", lambdas.len()))
}

fn gt_enumeration() -> Result<String, String> {
    let lambdas = small_partitions();
    for lambda in &lambdas {
        let count = enumerate_gt_patterns(lambda).len() as u128;
        ensure(count == weyl_dim(lambda), || format!("{lambda}: {count} patterns"))?;
    }
    let count = enumerate_gt_patterns(&partition(&[2, 1, 0])).len();
    ensure(count == 8, || format!("(2,1,0): {count} patterns"))?;
    Ok(format!("{} partitions; |S(2,1,0)| = 8", lambdas.len()))
}

fn module_oracle() -> Result<String, String> {
    let mut weights: Vec<SlWeight> = (0..30).map(|a| SlWeight(vec![a])).collect();
    for a in 0..30 {
        for b in 0..30 {
            let lambda = partition(&[(a + b) as u32, b as u32, 0]);
            if weyl_dim(&lambda) <= 30 {
                weights.push(SlWeight(vec![a, b]));
            }
        }
    }
    for w in &weights {
        let lambda = w.to_partition().map_err(|e| e.to_string())?;
        let m = build_irreducible(w, None).map_err(|e| e.to_string())?;
        ensure(m.complete, || format!("λ̄ = {:?}: construction incomplete", w.0))?;
        ensure(m.verify_relations(), || format!("λ̄ = {:?}: relations fail", w.0))?;
        ensure(m.dim() as u128 == weyl_dim(&lambda), || {
            format!("λ̄ = {:?}: dim {} ≠ {}", w.0, m.dim(), weyl_dim(&lambda))
        })?;
    }
    Ok(format!("{} highest weights", weights.len()))
}

fn confluence_associativity() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for i in 0..200u64 {
        let w = random_word(&mut rng, 3, 4, 8);
        let a = Rewriter::randomized(2 * i).normal_form_word(&w);
        let b = Rewriter::randomized(2 * i + 1).normal_form_word(&w);
        ensure(a == b, || format!("orders disagree on {w}"))?;
        ensure(a == normal_form(&KlrElement::from_word(w.clone())), || {
            format!("randomized and deterministic orders disagree on {w}")
        })?;
    }
    for _ in 0..100 {
        let c = random_word(&mut rng, 3, 4, 3);
        let m = c.bottom.len();
        let b_ops = random_ops(&mut rng, m, 3);
        let b = KlrWord { rank: c.rank, bottom: c.top(), ops: b_ops };
        let a_ops = random_ops(&mut rng, m, 3);
        let a = KlrWord { rank: c.rank, bottom: b.top(), ops: a_ops };
        let (x, y, z) = (KlrElement::from_word(a), KlrElement::from_word(b), KlrElement::from_word(c));
        let left = multiply(&multiply(&x, &y), &z);
        let right = multiply(&x, &multiply(&y, &z));
        ensure(left == right, || "a(bc) ≠ (ab)c".to_string())?;
    }
    Ok("200 words, 100 triples".to_string())
}

fn inverse_r3() -> Result<String, String> {
    let mut count = 0;
    for rank in 2..=4usize {
        for j in 1..rank as u8 {
            let (lhs, rhs) = inv_r3(rank, &[j, j, j + 1]).map_err(|e| e.to_string())?;
            ensure(normal_form(&lhs) == normal_form(&rhs), || format!("rank {rank}, j = {j}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} instances over ranks 2–4"))
}

fn factorization() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7);
    let rank = 3usize;
    let mut checked = 0;
    let mut terms_total = 0;
    while checked < 100 {
        let m = rng.gen_range(1..=5usize);
        let labels: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=rank as u8)).collect();
        let idem = StrandSeq::new(rank, labels).expect("labels in range");
        let k = idem.count(rank as u8);
        if k > 2 {
            continue;
        }
        let terms = factor_general(&idem, k).map_err(|e| format!("{idem}: {e}"))?;
        let total = reconstruct(&mut Rewriter::new(), rank, &terms);
        ensure(total == KlrElement::idempotent(&idem), || format!("{idem}: reconstruction differs"))?;
        for t in &terms {
            ensure(t.through.is_ordered(), || format!("{idem}: unordered blocks {:?}", t.through.xi))?;
        }
        terms_total += terms.len();
        checked += 1;
    }
    Ok(format!("{checked} idempotents, {terms_total} terms"))
}

fn gdim_vs_shapovalov() -> Result<String, String> {
    let cases: [&[u32]; 5] = [&[1, 0], &[2, 0], &[3, 0], &[1, 0, 0], &[1, 1, 0]];
    let mut spaces = 0;
    let mut pairs = 0;
    for parts in cases {
        let ctx = context(parts)?;
        for size in 0..=3 {
            for beta in betas(ctx.rank(), size) {
                let cmp = compare_weight_space(&beta, &ctx).map_err(|e| e.to_string())?;
                ensure(cmp.ok && cmp.status.is_exact(), || {
                    format!("λ = {:?}, β = {beta:?}: mismatch or capped", parts)
                })?;
                spaces += 1;
                pairs += cmp.entries.len();
            }
        }
    }
    Ok(format!("{spaces} weight spaces, {pairs} pairs, exact"))
}

fn sl2_base_case() -> Result<String, String> {
    for l in 0..=3u32 {
        ensure(sl2_vanishing_check(l).map_err(|e| e.to_string())?, || format!("λ̄ = {l}: 1_(λ̄+1) ≠ 0"))?;
        let ctx = context(&[l, 0])?;
        let below = KlrElement::idempotent(&StrandSeq::new(1, vec![1; l as usize]).expect("label 1"));
        let (r, s) = cyc_reduce(&below, &ctx).map_err(|e| e.to_string())?;
        ensure(!r.is_zero() && s.is_exact(), || format!("λ̄ = {l}: 1_λ̄ not certified nonzero"))?;
    }
    Ok("λ̄ = 0..3".to_string())
}

/// A random word on `bottom` whose top begins with `block`, if one is found.
/// Most generators act on the free strands so that the projection is
/// usually nonzero.
fn random_special_word(rng: &mut ChaCha8Rng, bottom: &[u8], block: &[u8]) -> Option<KlrElement> {
    let (m, p) = (bottom.len(), block.len());
    for _ in 0..20 {
        let k = rng.gen_range(0..=2);
        let ops = (0..k)
            .map(|_| {
                let free = rng.gen_bool(0.75);
                let lo = if free { p + 1 } else { 1 };
                if m > lo && rng.gen_bool(0.6) {
                    Gen::cross(rng.gen_range(lo..m))
                } else if free && m > p {
                    Gen::dot(rng.gen_range(p + 1..=m))
                } else {
                    Gen::dot(rng.gen_range(1..=m))
                }
            })
            .collect();
        let w = KlrWord { rank: 2, bottom: bottom.to_vec(), ops };
        if w.top().starts_with(block) {
            return Some(KlrElement::from_word(w));
        }
    }
    None
}

fn pi_projection() -> Result<String, String> {
    let ctx = context(&[2, 1, 0])?;
    let xis = enumerate_dominant(&ctx.lambda, 1);
    let mut witnesses = 0;
    for xi in &xis {
        let ws = surjectivity_witnesses(xi, 3, &ctx).map_err(|e| e.to_string())?;
        ensure(!ws.is_empty() && ws.iter().all(|w| w.ok), || format!("ξ = {:?}: missing preimage", xi.0))?;
        witnesses += ws.len();
    }
    let mut levels = Vec::new();
    for xi in &xis {
        let target = ctx.branch(xi).map_err(|e| e.to_string())?;
        levels.push(target.lambda_bar.0.iter().sum::<i64>());
    }
    let richest = xis.iter().zip(&levels).max_by_key(|(_, l)| **l).map(|(xi, _)| xi).ok_or("no blocks")?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x51);
    let (mut products, mut intertwined, mut nonzero, mut nonzero_strands) = (0, 0, 0, 0);
    while products < 50 || intertwined < 50 {
        // A target of level zero kills every free strand, so the block whose
        // target has the highest level is drawn more often.
        let xi = if rng.gen_bool(0.75) { richest } else { &xis[rng.gen_range(0..xis.len())] };
        let block = SpecialIdempotentSpec::block(2, xi.0[0]);
        // Three free strands already vanish in every target quotient.
        let tail = rng.gen_range(0..=2usize);
        let bottom: Vec<u8> = block.iter().copied().chain(std::iter::repeat(1).take(tail)).collect();
        let target = ctx.branch(xi).map_err(|e| e.to_string())?;
        let project = |x: &KlrElement| pi_project(x, xi, &ctx).map_err(|e| e.to_string());
        let Some(h) = random_special_word(&mut rng, &bottom, &block) else { continue };
        if products < 50 {
            let top = h.top().expect("nonzero word");
            if let Some(g) = random_special_word(&mut rng, &top, &block) {
                let (lhs, s1) = project(&multiply(&g, &h))?;
                let (pg, _) = project(&g)?;
                let (ph, _) = project(&h)?;
                let (rhs, s2) = cyc_reduce(&multiply(&pg, &ph), &target).map_err(|e| e.to_string())?;
                ensure(lhs == rhs && s1.is_exact() && s2.is_exact(), || {
                    format!("ξ = {:?}: π(gh) ≠ π(g)π(h)", xi.0)
                })?;
                nonzero += usize::from(!lhs.is_zero());
                products += 1;
            }
        }
        if intertwined < 50 {
            // Free strands carry labels below `n`.
            let j = rng.gen_range(1..ctx.rank() as u8);
            let (lhs, s1) = project(&append_strand(&h, j))?;
            let (ph, _) = project(&h)?;
            let (rhs, s2) = cyc_reduce(&append_strand(&ph, j), &target).map_err(|e| e.to_string())?;
            ensure(lhs == rhs && s1.is_exact() && s2.is_exact(), || {
                format!("ξ = {:?}, j = {j}: π does not commute with adding a strand", xi.0)
            })?;
            nonzero_strands += usize::from(!lhs.is_zero());
            intertwined += 1;
        }
    }
    Ok(format!(
        "{witnesses} generator preimages; {products} products ({nonzero} nonzero); \
         {intertwined} strand additions ({nonzero_strands} nonzero)"
    ))
}

fn gt_orthogonality() -> Result<String, String> {
    let mut pairs = 0;
    for parts in [&[1u32, 0][..], &[2, 0], &[1, 1, 0], &[2, 1, 0]] {
        let ctx = context(parts)?;
        let r = gt_orthogonality_check(&ctx).map_err(|e| e.to_string())?;
        ensure(r.ok && r.status.is_exact(), || format!("λ = {parts:?}: nonzero pairs {:?}", r.nonzero_pairs))?;
        pairs += r.pairs_checked;
    }
    Ok(format!("{pairs} ordered pairs s ≠ s′, exact"))
}

fn region_vanishing() -> Result<String, String> {
    let (mut checked, mut flagged) = (0, 0);
    for parts in [&[1u32, 0][..], &[1, 0, 0], &[1, 1, 0]] {
        let ctx = context(parts)?;
        for idem in idempotents(ctx.rank(), 3) {
            let r = weyl_vanishing_check(&idem, &ctx).map_err(|e| e.to_string())?;
            ensure(r.holds, || format!("λ = {parts:?}, 1_{idem}: flagged but nonzero"))?;
            checked += 1;
            flagged += usize::from(r.flagged);
        }
    }
    Ok(format!("{checked} idempotents, {flagged} flagged and zero"))
}
