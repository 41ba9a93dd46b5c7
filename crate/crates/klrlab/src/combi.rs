//! Partitions, weights, branching sets, box-removal sequences, Gelfand–Tsetlin
//! patterns, Schur weight lattices and the Weyl dimension formula.
//!
//! Conventions:
//! * partitions carry an explicit number of parts, so `(2,1,0) ≠ (2,1)`;
//! * a partition `μ` with `n` parts interlaces `λ` with `n+1` parts when
//!   `λ_{i+1} ≤ μ_i ≤ λ_i` for every `i`;
//! * row indices in box-removal sequences are 1-based;
//! * every enumeration is returned in lexicographically descending order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the combinatorial layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombiError {
    #[error("parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<u32>),
    #[error("a partition needs at least {needed} parts, got {got}")]
    TooFewParts { needed: usize, got: usize },
    #[error("row index {row} out of range 1..={rows}")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("removing a box from row {row} of {shape:?} does not leave a partition")]
    NotDominant { row: usize, shape: Vec<u32> },
    #[error("pattern layers do not interlace at layer {layer}")]
    NotInterlacing { layer: usize },
    #[error("malformed pattern: {0}")]
    MalformedPattern(String),
    #[error("{0}")]
    Parse(String),
}

/// A partition with an explicit number of parts (trailing zeros are significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing.
    pub fn new(parts: Vec<u32>) -> Result<Self, CombiError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CombiError::NotDecreasing(parts));
        }
        Ok(Self { parts })
    }

    /// The all-zero partition with `m` parts.
    pub fn zero(m: usize) -> Self {
        Self { parts: vec![0; m] }
    }

    /// Parses comma-separated nonnegative integers, e.g. `"2,1,0"`.
    pub fn parse(text: &str) -> Result<Self, CombiError> {
        let text = text.trim();
        if text.is_empty() {
            return Err(CombiError::Parse("empty partition".into()));
        }
        let parts = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| CombiError::Parse(format!("bad part {t:?} in {text:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of parts `m` (including zeros).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of boxes `|λ|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `i` (1-based).
    pub fn part(&self, i: usize) -> u32 {
        self.parts[i - 1]
    }

    /// The same shape with every part lowered by the last part, so the last
    /// part becomes 0. The `sl`-weight is unchanged.
    pub fn normalized(&self) -> Partition {
        let last = self.parts.last().copied().unwrap_or(0);
        Partition {
            parts: self.parts.iter().map(|p| p - last).collect(),
        }
    }

    /// The first `n` parts.
    pub fn truncate(&self, n: usize) -> Partition {
        Partition {
            parts: self.parts[..n].to_vec(),
        }
    }

    /// The shape as a `gl`-weight in the ε-basis.
    pub fn to_gl_weight(&self) -> GlWeight {
        GlWeight(self.parts.iter().map(|&p| p as i64).collect())
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = CombiError;
    fn try_from(parts: Vec<u32>) -> Result<Self, CombiError> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// An `sl`-weight written in the fundamental-weight basis `(λ̄_1, …, λ̄_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlWeight(pub Vec<i64>);

impl SlWeight {
    /// Dominant iff every entry is nonnegative.
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Entry `i` (1-based).
    pub fn get(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// The partition with `rank + 1` parts and last part 0 whose weight is `self`.
    pub fn to_partition(&self) -> Result<Partition, CombiError> {
        if !self.is_dominant() {
            return Err(CombiError::Parse(format!("weight {:?} is not dominant", self.0)));
        }
        let mut parts = vec![0u32; self.0.len() + 1];
        for i in (0..self.0.len()).rev() {
            parts[i] = parts[i + 1] + self.0[i] as u32;
        }
        Partition::new(parts)
    }
}

/// A `gl`-weight in the ε-basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GlWeight(pub Vec<i64>);

impl GlWeight {
    /// Sum of entries.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Membership in `Λ(n, d)`: nonnegative entries summing to `d`.
    pub fn in_lambda(&self, d: i64) -> bool {
        self.0.iter().all(|&x| x >= 0) && self.degree() == d
    }

    /// Membership in `Λ⁺(n, d)`: additionally weakly decreasing.
    pub fn in_lambda_plus(&self, d: i64) -> bool {
        self.in_lambda(d) && self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// True if some entry is negative.
    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&x| x < 0)
    }
}

/// A box-removal sequence `ξ_{i_1 … i_k}` with 1-based row indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XiSequence(pub Vec<usize>);

impl XiSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `i_1 ≤ … ≤ i_k`.
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    /// True if every prefix removal leaves a partition (λ-dominance).
    pub fn is_dominant_for(&self, lambda: &Partition) -> bool {
        xi_apply(self, lambda, true).is_ok()
    }
}

/// A Gelfand–Tsetlin pattern: layers `μ^{(n+1)} = λ, μ^{(n)}, …, μ^{(1)}`,
/// layer `j` having `j` parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct GtPattern {
    layers: Vec<Partition>,
}

impl GtPattern {
    /// Validates layer sizes and interlacing.
    pub fn new(layers: Vec<Partition>) -> Result<Self, CombiError> {
        let top = layers
            .first()
            .ok_or_else(|| CombiError::MalformedPattern("no layers".into()))?
            .len();
        if layers.len() != top {
            return Err(CombiError::MalformedPattern(format!(
                "expected {top} layers, got {}",
                layers.len()
            )));
        }
        for (idx, layer) in layers.iter().enumerate() {
            if layer.len() != top - idx {
                return Err(CombiError::MalformedPattern(format!(
                    "layer {} has {} parts",
                    top - idx,
                    layer.len()
                )));
            }
        }
        for (idx, pair) in layers.windows(2).enumerate() {
            if !interlaces(&pair[0], &pair[1]) {
                return Err(CombiError::NotInterlacing { layer: top - idx });
            }
        }
        Ok(Self { layers })
    }

    /// Layers from the top partition down to the one-part layer.
    pub fn layers(&self) -> &[Partition] {
        &self.layers
    }

    /// The top partition `λ`.
    pub fn top(&self) -> &Partition {
        &self.layers[0]
    }

    /// The layer with `j` parts.
    pub fn layer(&self, j: usize) -> &Partition {
        &self.layers[self.layers.len() - j]
    }
}

impl TryFrom<Vec<Vec<u32>>> for GtPattern {
    type Error = CombiError;
    fn try_from(raw: Vec<Vec<u32>>) -> Result<Self, CombiError> {
        let layers = raw
            .into_iter()
            .map(Partition::new)
            .collect::<Result<Vec<_>, _>>()?;
        GtPattern::new(layers)
    }
}

impl From<GtPattern> for Vec<Vec<u32>> {
    fn from(p: GtPattern) -> Self {
        p.layers.into_iter().map(Vec::from).collect()
    }
}

/// The type-A Cartan matrix of rank `n`, indices 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CartanA {
    pub rank: usize,
}

impl CartanA {
    pub fn new(rank: usize) -> Self {
        Self { rank }
    }

    /// `a(i, j)`: 2 on the diagonal, −1 for neighbours, 0 otherwise.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        cartan(i, j)
    }
}

/// Type-A Cartan entry for labels `i`, `j` (any indexing base).
pub fn cartan(i: usize, j: usize) -> i64 {
    match i.abs_diff(j) {
        0 => 2,
        1 => -1,
        _ => 0,
    }
}

/// `λ̄_i = λ_i − λ_{i+1}`.
pub fn weight_of_partition(lambda: &Partition) -> Result<SlWeight, CombiError> {
    if lambda.len() < 2 {
        return Err(CombiError::TooFewParts {
            needed: 2,
            got: lambda.len(),
        });
    }
    Ok(SlWeight(
        lambda
            .parts
            .windows(2)
            .map(|w| w[0] as i64 - w[1] as i64)
            .collect(),
    ))
}

/// True if `mu` (n parts) interlaces `lambda` (n+1 parts).
pub fn interlaces(lambda: &Partition, mu: &Partition) -> bool {
    mu.len() + 1 == lambda.len()
        && (0..mu.len()).all(|i| lambda.parts[i + 1] <= mu.parts[i] && mu.parts[i] <= lambda.parts[i])
}

/// `τ_k(λ)` (or the union `τ(λ)` when `k` is `None`): partitions with one
/// part fewer that interlace `λ`, with `|λ| − |μ| = k`. Lexicographically
/// descending.
pub fn interlacing_set(lambda: &Partition, k: Option<u32>) -> Vec<Partition> {
    let n = lambda.len().saturating_sub(1);
    if lambda.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(lambda: &[u32], i: usize, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == cur.len() {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for v in (lambda[i + 1]..=lambda[i]).rev() {
            cur[i] = v;
            rec(lambda, i + 1, cur, out);
        }
    }
    rec(&lambda.parts, 0, &mut cur, &mut out);
    if let Some(k) = k {
        out.retain(|mu| lambda.size() - mu.size() == k);
    }
    out
}

/// Removes one box from row `i_r` of the running shape for `r = 1 … k`.
/// In strict mode every intermediate shape must be a partition.
pub fn xi_apply(xi: &XiSequence, lambda: &Partition, strict: bool) -> Result<Partition, CombiError> {
    let mut parts: Vec<i64> = lambda.parts.iter().map(|&p| p as i64).collect();
    for &row in &xi.0 {
        if row == 0 || row > parts.len() {
            return Err(CombiError::RowOutOfRange {
                row,
                rows: parts.len(),
            });
        }
        parts[row - 1] -= 1;
        let ok = parts[row - 1] >= 0 && (row == parts.len() || parts[row - 1] >= parts[row]);
        if strict && !ok {
            return Err(CombiError::NotDominant {
                row,
                shape: parts.iter().map(|&p| p.max(0) as u32).collect(),
            });
        }
        if parts[row - 1] < 0 {
            return Err(CombiError::NotDominant {
                row,
                shape: parts.iter().map(|&p| p.max(0) as u32).collect(),
            });
        }
    }
    Ok(Partition {
        parts: parts.into_iter().map(|p| p as u32).collect(),
    })
}

/// The weight variant of [`xi_apply`]: applies `ξ'_{i_k} ⋯ ξ'_{i_1}` to an
/// `sl_{n+1}`-weight and projects to `sl_n` by dropping the last entry.
pub fn xi_apply_weight(xi: &XiSequence, weight: &SlWeight) -> Result<SlWeight, CombiError> {
    let n = weight.0.len();
    let mut w = weight.0.clone();
    for &row in &xi.0 {
        if row == 0 || row > n + 1 {
            return Err(CombiError::RowOutOfRange { row, rows: n + 1 });
        }
        if row >= 2 {
            w[row - 2] += 1;
        }
        if row <= n {
            w[row - 1] -= 1;
        }
    }
    w.truncate(n.saturating_sub(1));
    Ok(SlWeight(w))
}

/// `D_λ^k`: all λ-dominant sorted sequences `ξ_{i_1 … i_k}` whose result
/// interlaces `λ` (the last row is removed completely), lexicographically
/// descending by the resulting shape. In bijection with `τ_k(λ)`.
pub fn enumerate_dominant(lambda: &Partition, k: u32) -> Vec<XiSequence> {
    interlacing_set(lambda, Some(k))
        .iter()
        .map(|mu| removal_sequence(lambda, mu))
        .collect()
}

/// The unique sorted removal sequence carrying `λ` (n+1 parts) to `μ`
/// (n parts, interlacing): `λ_i − μ_i` boxes from row `i` for `i ≤ n` and
/// all of row `n+1`.
pub fn removal_sequence(lambda: &Partition, mu: &Partition) -> XiSequence {
    let n = mu.len();
    let mut seq = Vec::new();
    for i in 0..=n {
        let target = if i < n { mu.parts[i] } else { 0 };
        for _ in 0..(lambda.parts[i] - target) {
            seq.push(i + 1);
        }
    }
    XiSequence(seq)
}

/// All Gelfand–Tsetlin patterns for `λ`, lexicographically descending.
pub fn enumerate_gt_patterns(lambda: &Partition) -> Vec<GtPattern> {
    let mut out = Vec::new();
    let mut chain = vec![lambda.clone()];
    fn rec(chain: &mut Vec<Partition>, out: &mut Vec<GtPattern>) {
        let last = chain.last().expect("nonempty chain");
        if last.len() <= 1 {
            out.push(GtPattern {
                layers: chain.clone(),
            });
            return;
        }
        for mu in interlacing_set(last, None) {
            chain.push(mu);
            rec(chain, out);
            chain.pop();
        }
    }
    if lambda.is_empty() {
        return out;
    }
    rec(&mut chain, &mut out);
    out
}

/// Weight of a GT basis vector: entry `j` is `|μ^{(j)}| − |μ^{(j−1)}|`.
pub fn gt_weight(s: &GtPattern) -> GlWeight {
    let m = s.layers.len();
    GlWeight(
        (1..=m)
            .map(|j| {
                let upper = s.layer(j).size() as i64;
                let lower = if j == 1 { 0 } else { s.layer(j - 1).size() as i64 };
                upper - lower
            })
            .collect(),
    )
}

/// Weyl dimension `∏_{i<j} (λ_i − λ_j + j − i)/(j − i)`, computed exactly.
pub fn weyl_dim(lambda: &Partition) -> u128 {
    let m = lambda.len();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        for j in i + 1..m {
            num *= (lambda.parts[i] - lambda.parts[j]) as u128 + (j - i) as u128;
            den *= (j - i) as u128;
            let g = gcd_u128(num, den);
            num /= g;
            den /= g;
        }
    }
    debug_assert_eq!(den, 1);
    num / den
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `Λ(n, d)` (all compositions of `d` into `n` nonnegative parts) or
/// `Λ⁺(n, d)` (weakly decreasing ones), lexicographically descending.
pub fn schur_weights(n: usize, d: u32, dominant_only: bool) -> Vec<GlWeight> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<GlWeight>, dom: bool) {
        if i + 1 == cur.len() {
            cur[i] = left;
            if !dom || i == 0 || cur[i - 1] >= left {
                out.push(GlWeight(cur.clone()));
            }
            return;
        }
        let cap = if dom && i > 0 { left.min(cur[i - 1]) } else { left };
        for v in (0..=cap).rev() {
            cur[i] = v;
            rec(i + 1, left - v, cur, out, dom);
        }
    }
    if n == 0 {
        return out;
    }
    rec(0, d as i64, &mut cur, &mut out, dominant_only);
    out
}

/// All partitions with exactly `m` parts and exactly `size` boxes,
/// lexicographically descending.
pub fn partitions_with_parts(m: usize, size: u32) -> Vec<Partition> {
    schur_weights(m, size, true)
        .into_iter()
        .map(|w| Partition {
            parts: w.0.into_iter().map(|x| x as u32).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight_of_partition(&p(&[2, 1, 0])).unwrap(), SlWeight(vec![1, 1]));
        assert_eq!(weight_of_partition(&p(&[5, 0])).unwrap(), SlWeight(vec![5]));
        assert_eq!(weight_of_partition(&p(&[3, 3, 1])).unwrap(), SlWeight(vec![0, 2]));
        assert!(weight_of_partition(&p(&[3])).is_err());
    }

    #[test]
    fn interlacing_examples() {
        let lam = p(&[2, 1, 0]);
        assert_eq!(interlacing_set(&lam, Some(0)), vec![p(&[2, 1])]);
        assert_eq!(
            interlacing_set(&lam, None),
            vec![p(&[2, 1]), p(&[2, 0]), p(&[1, 1]), p(&[1, 0])]
        );
        assert!(interlacing_set(&lam, Some(3)).is_empty());
    }

    #[test]
    fn xi_examples() {
        let lam = p(&[2, 1, 0]);
        assert_eq!(xi_apply(&XiSequence(vec![1]), &lam, true).unwrap(), p(&[1, 1, 0]));
        assert!(xi_apply(&XiSequence(vec![1, 1]), &lam, true).is_err());
        assert_eq!(xi_apply(&XiSequence(vec![1, 2]), &lam, true).unwrap(), p(&[1, 0, 0]));
        assert!(xi_apply(&XiSequence(vec![4]), &lam, false).is_err());
    }

    #[test]
    fn xi_weight_variant_matches_partition_variant() {
        let lam = p(&[3, 1, 0]);
        for xi in enumerate_dominant(&lam, 2) {
            let shape = xi_apply(&xi, &lam, true).unwrap();
            let via_shape = weight_of_partition(&shape.truncate(2)).unwrap();
            let via_weight = xi_apply_weight(&xi, &weight_of_partition(&lam).unwrap()).unwrap();
            assert_eq!(via_shape, via_weight, "xi = {xi:?}");
        }
    }

    #[test]
    fn dominant_examples() {
        let lam = p(&[2, 1, 0]);
        assert_eq!(enumerate_dominant(&lam, 0), vec![XiSequence(vec![])]);
        assert_eq!(
            enumerate_dominant(&lam, 1),
            vec![XiSequence(vec![2]), XiSequence(vec![1])]
        );
        assert_eq!(enumerate_dominant(&lam, 2), vec![XiSequence(vec![1, 2])]);
    }

    #[test]
    fn gt_examples() {
        assert_eq!(enumerate_gt_patterns(&p(&[0, 0, 0])).len(), 1);
        assert_eq!(enumerate_gt_patterns(&p(&[1, 0, 0])).len(), 3);
        assert_eq!(enumerate_gt_patterns(&p(&[2, 1, 0])).len(), 8);
        let s = GtPattern::new(vec![p(&[1, 0, 0]), p(&[1, 0]), p(&[1])]).unwrap();
        assert_eq!(gt_weight(&s), GlWeight(vec![1, 0, 0]));
        let s = GtPattern::new(vec![p(&[1, 0, 0]), p(&[1, 0]), p(&[0])]).unwrap();
        assert_eq!(gt_weight(&s), GlWeight(vec![0, 1, 0]));
        assert!(GtPattern::new(vec![p(&[1, 0]), p(&[2])]).is_err());
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_dim(&p(&[0, 0, 0])), 1);
        assert_eq!(weyl_dim(&p(&[1, 0, 0])), 3);
        assert_eq!(weyl_dim(&p(&[2, 1, 0])), 8);
        assert_eq!(weyl_dim(&p(&[4, 2, 0])), 27);
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_weights(1, 4, false), vec![GlWeight(vec![4])]);
        assert_eq!(
            schur_weights(2, 2, false),
            vec![GlWeight(vec![2, 0]), GlWeight(vec![1, 1]), GlWeight(vec![0, 2])]
        );
        assert_eq!(
            schur_weights(2, 2, true),
            vec![GlWeight(vec![2, 0]), GlWeight(vec![1, 1])]
        );
    }

    #[test]
    fn parse_partition() {
        assert_eq!(Partition::parse("2,1,0").unwrap(), p(&[2, 1, 0]));
        assert!(Partition::parse("1,2").is_err());
        assert!(Partition::parse("a,1").is_err());
        assert!(Partition::parse("").is_err());
    }
}
