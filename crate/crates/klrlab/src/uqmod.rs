//! Independent oracle: irreducible highest-weight modules of `U_q(sl_m)`
//! built weight space by weight space from F-monomials, and their
//! q-Shapovalov Gram matrices.
//!
//! A word `b = (b_1, …, b_k)` stands for the vector `F_{b_k} ⋯ F_{b_1} v_λ`
//! (the first letter acts first), the same reading order as the bottom
//! sequence of a KLR diagram. Weight spaces are indexed by `β`, the
//! multiplicity vector of the labels, and `V_β` has weight
//! `λ̄ − Σ_j β_j α_j`.
//!
//! The form is computed from `⟨v_λ, v_λ⟩ = 1`, `φ(F_i) = q⁻¹K_iE_i` and the
//! commutation relation `E_iF_j − F_jE_i = δ_ij (K_i − K_i⁻¹)/(q − q⁻¹)`,
//! which give the recursion
//!
//! ```text
//! ⟨a·i, b⟩ = Σ_{p : b_p = i} [μ^{(p−1)}_i] q^{ν_i − 1} ⟨a, b ∖ p⟩
//! ```
//!
//! with `μ^{(p−1)}` the weight after the first `p − 1` letters of `b` and
//! `ν` the weight of `b ∖ p`.

// Dense matrix code reads best with explicit row/column indices.
#![allow(clippy::needless_range_loop)]

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combi::{cartan, interlacing_set, weight_of_partition, Partition, SlWeight};
use crate::qint::{quantum_integer, LaurentPoly};

/// Errors raised by the module oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UqError {
    #[error("highest weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("root combination has {got} entries, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Combi(#[from] crate::combi::CombiError),
}

/// A word of F-labels (1-based), first letter applied first.
pub type FWord = Vec<u8>;

/// Multiplicities of each simple root.
pub type RootVec = Vec<u32>;

/// An element of `ℚ(q)` stored as a reduced fraction of Laurent polynomials.
/// The denominator is normalised (lowest exponent 0, positive leading
/// coefficient), so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    /// Builds `num/den` in lowest terms. Panics if `den` is zero.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let mut n = num.div_exact(&g).expect("gcd divides numerator");
        let d = den.div_exact(&g).expect("gcd divides denominator");
        // Move the unit ±q^k of the denominator into the numerator.
        let nd = d.normalize_unit();
        let unit = d.div_exact(&nd).expect("unit part");
        n = n.div_exact(&unit).expect("units are invertible");
        Self { num: n, den: nd }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this fraction equals, if any.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    /// `q ↦ q⁻¹`.
    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self * &rhs.inv()
    }
}

/// A dense matrix over `ℚ(q)`.
pub type Mat = Vec<Vec<RatFunc>>;

fn mat_zero(rows: usize, cols: usize) -> Mat {
    vec![vec![RatFunc::zero(); cols]; rows]
}

fn mat_mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    let rows = a.len();
    let mut out = mat_zero(rows, cols);
    for (i, row) in a.iter().enumerate() {
        for (k, aik) in row.iter().enumerate().take(inner) {
            if aik.is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

fn mat_combine(terms: &[(RatFunc, Mat)], rows: usize, cols: usize) -> Mat {
    let mut out = mat_zero(rows, cols);
    for (c, m) in terms {
        for i in 0..rows {
            for j in 0..cols {
                if !m[i][j].is_zero() {
                    out[i][j] = &out[i][j] + &(c * &m[i][j]);
                }
            }
        }
    }
    out
}

fn mat_is_zero(m: &Mat) -> bool {
    m.iter().all(|r| r.iter().all(RatFunc::is_zero))
}

/// Pivot columns of a matrix over `ℤ[q, q⁻¹]`, found by fraction-free
/// (Bareiss) elimination scanning columns left to right. The number of
/// pivots is the rank.
pub fn bareiss_pivots(m: &[Vec<LaurentPoly>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<LaurentPoly>> = m.to_vec();
    let mut prev = LaurentPoly::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &(&a[r][c] * &a[i][j]) - &(&a[i][c] * &a[r][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = LaurentPoly::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b` for a nonsingular square `A` over `ℚ(q)`.
fn solve(a: &Mat, b: &[RatFunc]) -> Vec<RatFunc> {
    let n = a.len();
    let mut m: Vec<Vec<RatFunc>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !m[i][c].is_zero())
            .expect("Gram matrix of a basis is nonsingular");
        m.swap(c, p);
        let inv = m[c][c].inv();
        for j in c..=n {
            m[c][j] = &m[c][j] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=n {
                    let v = &m[i][j] - &(&f * &m[c][j]);
                    m[i][j] = v;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n].clone()).collect()
}

/// Memoised evaluator of the Shapovalov form on F-monomials.
#[derive(Debug)]
pub struct GramOracle {
    lambda: Vec<i64>,
    memo: RefCell<HashMap<(FWord, FWord), LaurentPoly>>,
}

impl GramOracle {
    pub fn new(lambda_bar: &SlWeight) -> Self {
        Self {
            lambda: lambda_bar.0.clone(),
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    /// `⟨F_a v_λ, F_b v_λ⟩`.
    pub fn entry(&self, a: &[u8], b: &[u8]) -> LaurentPoly {
        if a.len() != b.len() {
            return LaurentPoly::zero();
        }
        if a.is_empty() {
            return LaurentPoly::one();
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.borrow().get(&key) {
            return v.clone();
        }
        let (i, rest) = (a[a.len() - 1], &a[..a.len() - 1]);
        let ii = i as usize;
        let total: i64 = b.iter().map(|&br| cartan(ii, br as usize)).sum();
        let mut acc = LaurentPoly::zero();
        let mut before = 0i64;
        for (p, &bp) in b.iter().enumerate() {
            if bp == i {
                let mu = self.lambda[ii - 1] - before;
                let nu = self.lambda[ii - 1] - (total - 2);
                let mut rest_b = b.to_vec();
                rest_b.remove(p);
                let sub = self.entry(rest, &rest_b);
                if !sub.is_zero() {
                    acc += &(&quantum_integer(mu) * &sub).shift((nu - 1) as i32);
                }
            }
            before += cartan(ii, bp as usize);
        }
        self.memo.borrow_mut().insert(key, acc.clone());
        acc
    }
}

/// The multiplicity vector of a word.
pub fn word_weight(word: &[u8], rank: usize) -> RootVec {
    let mut beta = vec![0u32; rank];
    for &l in word {
        beta[l as usize - 1] += 1;
    }
    beta
}

/// All words in `seq(β)`, lexicographically ascending.
pub fn seq_of(beta: &[u32]) -> Vec<FWord> {
    let total: u32 = beta.iter().sum();
    let mut out = Vec::new();
    let mut left = beta.to_vec();
    let mut cur = Vec::with_capacity(total as usize);
    fn rec(left: &mut Vec<u32>, cur: &mut FWord, total: usize, out: &mut Vec<FWord>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for i in 0..left.len() {
            if left[i] > 0 {
                left[i] -= 1;
                cur.push(i as u8 + 1);
                rec(left, cur, total, out);
                cur.pop();
                left[i] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, total as usize, &mut out);
    out
}

/// The weight `λ̄ − Σ_j β_j α_j` of the space `V_β`.
pub fn weight_at(lambda_bar: &[i64], beta: &[u32]) -> Vec<i64> {
    (1..=lambda_bar.len())
        .map(|i| {
            lambda_bar[i - 1]
                - beta
                    .iter()
                    .enumerate()
                    .map(|(j, &b)| b as i64 * cartan(i, j + 1))
                    .sum::<i64>()
        })
        .collect()
}

/// Gram matrix of the Shapovalov form on `seq(β)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapovalovGram {
    pub lambda: Vec<i64>,
    pub beta: RootVec,
    pub labels: Vec<FWord>,
    pub entries: Vec<Vec<LaurentPoly>>,
}

impl ShapovalovGram {
    /// Rank of the Gram matrix.
    pub fn rank(&self) -> usize {
        bareiss_pivots(&self.entries).len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.entries.len();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// The exponent `c` for which every entry times `q^c` is bar-invariant.
    pub fn bar_shift(&self) -> i64 {
        bar_shift(&self.lambda, &self.beta)
    }

    /// JSON export with fraction-valued entries.
    pub fn to_json_value(&self) -> GramExport {
        GramExport {
            lambda: self.lambda.clone(),
            beta: self.beta.clone(),
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|e| RatFunc::from_poly(e.clone())).collect())
                .collect(),
        }
    }
}

/// Serialised form of a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramExport {
    pub lambda: Vec<i64>,
    pub beta: RootVec,
    pub labels: Vec<FWord>,
    pub entries: Vec<Vec<RatFunc>>,
}

/// Overall power of `q` making the Gram entries of weight `β` bar-invariant:
/// `c = ½ Σ_{ij} β_i β_j a_ij − Σ_i β_i λ̄_i`.
pub fn bar_shift(lambda_bar: &[i64], beta: &[u32]) -> i64 {
    let mut quad = 0i64;
    for (i, &bi) in beta.iter().enumerate() {
        for (j, &bj) in beta.iter().enumerate() {
            quad += bi as i64 * bj as i64 * cartan(i + 1, j + 1);
        }
    }
    let lin: i64 = beta.iter().zip(lambda_bar).map(|(&b, &l)| b as i64 * l).sum();
    quad / 2 - lin
}

/// Gram matrix `⟨F_a v_λ, F_b v_λ⟩` over all `a, b ∈ seq(β)`.
pub fn shapovalov_gram(lambda_bar: &SlWeight, beta: &[u32]) -> Result<ShapovalovGram, UqError> {
    if !lambda_bar.is_dominant() {
        return Err(UqError::NotDominant(lambda_bar.0.clone()));
    }
    if beta.len() != lambda_bar.rank() {
        return Err(UqError::RankMismatch {
            expected: lambda_bar.rank(),
            got: beta.len(),
        });
    }
    let oracle = GramOracle::new(lambda_bar);
    let labels = seq_of(beta);
    let entries = labels
        .iter()
        .map(|a| labels.iter().map(|b| oracle.entry(a, b)).collect())
        .collect();
    Ok(ShapovalovGram {
        lambda: lambda_bar.0.clone(),
        beta: beta.to_vec(),
        labels,
        entries,
    })
}

/// One weight space of a constructed module.
#[derive(Clone, Debug)]
pub struct WeightSpace {
    /// Basis words (pivot columns of the Gram matrix of candidates).
    pub basis: Vec<FWord>,
    /// Gram matrix of the basis.
    pub gram: Vec<Vec<LaurentPoly>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// An explicitly constructed irreducible highest-weight module.
#[derive(Clone, Debug)]
pub struct HighestWeightModule {
    pub lambda_bar: SlWeight,
    pub depth: usize,
    /// True if construction stopped because a whole height vanished, so every
    /// weight space of the module has been built.
    pub complete: bool,
    pub spaces: BTreeMap<RootVec, WeightSpace>,
    /// `F_i : V_β → V_{β+α_i}`, keyed by `(i, β)`; rows index the target basis.
    pub f: BTreeMap<(usize, RootVec), Mat>,
    /// `E_i : V_β → V_{β−α_i}`, keyed by `(i, β)`.
    pub e: BTreeMap<(usize, RootVec), Mat>,
    max_height: usize,
}

/// Default construction depth: the height of the lowest weight.
pub fn default_depth(lambda_bar: &SlWeight) -> usize {
    let Ok(p) = lambda_bar.to_partition() else {
        return 0;
    };
    let parts = p.parts();
    let mut d = 0;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            d += (parts[i] - parts[j]) as usize;
        }
    }
    d
}

/// Builds `V_λ` weight space by weight space down to height `depth`
/// (`None` = [`default_depth`]).
pub fn build_irreducible(
    lambda_bar: &SlWeight,
    depth: Option<usize>,
) -> Result<HighestWeightModule, UqError> {
    if !lambda_bar.is_dominant() {
        return Err(UqError::NotDominant(lambda_bar.0.clone()));
    }
    let rank = lambda_bar.rank();
    let depth = depth.unwrap_or_else(|| default_depth(lambda_bar));
    let oracle = GramOracle::new(lambda_bar);
    let mut spaces: BTreeMap<RootVec, WeightSpace> = BTreeMap::new();
    spaces.insert(
        vec![0; rank],
        WeightSpace {
            basis: vec![Vec::new()],
            gram: vec![vec![LaurentPoly::one()]],
        },
    );
    let mut frontier: Vec<RootVec> = vec![vec![0; rank]];
    let mut complete = false;
    let mut max_height = 0;
    // One extra height is explored (but not stored) to detect completeness.
    for h in 1..=depth + 1 {
        let mut next: BTreeMap<RootVec, Vec<FWord>> = BTreeMap::new();
        for beta in &frontier {
            for i in 1..=rank {
                let mut target = beta.clone();
                target[i - 1] += 1;
                let cands = next.entry(target).or_default();
                for b in &spaces[beta].basis {
                    let mut w = b.clone();
                    w.push(i as u8);
                    cands.push(w);
                }
            }
        }
        let mut new_frontier = Vec::new();
        let mut built = Vec::new();
        for (beta, mut cands) in next {
            cands.sort();
            cands.dedup();
            let g: Vec<Vec<LaurentPoly>> = cands
                .iter()
                .map(|a| cands.iter().map(|b| oracle.entry(a, b)).collect())
                .collect();
            let piv = bareiss_pivots(&g);
            if piv.is_empty() {
                continue;
            }
            let basis: Vec<FWord> = piv.iter().map(|&c| cands[c].clone()).collect();
            let gram = piv
                .iter()
                .map(|&r| piv.iter().map(|&c| g[r][c].clone()).collect())
                .collect();
            built.push((beta.clone(), WeightSpace { basis, gram }));
            new_frontier.push(beta);
        }
        if new_frontier.is_empty() {
            complete = true;
            break;
        }
        if h > depth {
            break;
        }
        spaces.extend(built);
        max_height = h;
        frontier = new_frontier;
    }
    let mut module = HighestWeightModule {
        lambda_bar: lambda_bar.clone(),
        depth,
        complete,
        spaces,
        f: BTreeMap::new(),
        e: BTreeMap::new(),
        max_height,
    };
    module.fill_matrices(&oracle);
    Ok(module)
}

impl HighestWeightModule {
    pub fn rank(&self) -> usize {
        self.lambda_bar.rank()
    }

    /// Total dimension of the constructed weight spaces.
    pub fn dim(&self) -> usize {
        self.spaces.values().map(WeightSpace::dim).sum()
    }

    /// Dimension of `V_β` (0 for a non-weight).
    pub fn dim_at(&self, beta: &[u32]) -> usize {
        self.spaces.get(beta).map_or(0, WeightSpace::dim)
    }

    /// The weight of `V_β`.
    pub fn weight_of(&self, beta: &[u32]) -> Vec<i64> {
        weight_at(&self.lambda_bar.0, beta)
    }

    /// True if `V_β` is known (built, or known to vanish).
    fn known(&self, beta: &[u32]) -> bool {
        let h: u32 = beta.iter().sum();
        self.complete || (h as usize) <= self.max_height
    }

    /// Coordinates of the word `m` in the basis of its weight space.
    fn coords(&self, oracle: &GramOracle, m: &[u8]) -> Vec<RatFunc> {
        let beta = word_weight(m, self.rank());
        let Some(space) = self.spaces.get(&beta) else {
            return Vec::new();
        };
        if let Some(pos) = space.basis.iter().position(|b| b == m) {
            let mut v = vec![RatFunc::zero(); space.dim()];
            v[pos] = RatFunc::one();
            return v;
        }
        let a: Mat = space
            .gram
            .iter()
            .map(|r| r.iter().map(|x| RatFunc::from_poly(x.clone())).collect())
            .collect();
        let rhs: Vec<RatFunc> = space
            .basis
            .iter()
            .map(|b| RatFunc::from_poly(oracle.entry(b, m)))
            .collect();
        solve(&a, &rhs)
    }

    fn fill_matrices(&mut self, oracle: &GramOracle) {
        let rank = self.rank();
        let betas: Vec<RootVec> = self.spaces.keys().cloned().collect();
        for beta in &betas {
            let src = &self.spaces[beta];
            for i in 1..=rank {
                // F_i
                let mut up = beta.clone();
                up[i - 1] += 1;
                if self.known(&up) {
                    let rows = self.dim_at(&up);
                    let mut m = mat_zero(rows, src.dim());
                    if rows > 0 {
                        for (c, b) in src.basis.iter().enumerate() {
                            let mut w = b.clone();
                            w.push(i as u8);
                            for (r, x) in self.coords(oracle, &w).into_iter().enumerate() {
                                m[r][c] = x;
                            }
                        }
                    }
                    self.f.insert((i, beta.clone()), m);
                }
                // E_i
                let rows = if beta[i - 1] == 0 {
                    0
                } else {
                    let mut down = beta.clone();
                    down[i - 1] -= 1;
                    self.dim_at(&down)
                };
                let mut m = mat_zero(rows, src.dim());
                if rows > 0 {
                    for (c, b) in src.basis.iter().enumerate() {
                        let mut before = 0i64;
                        for (p, &bp) in b.iter().enumerate() {
                            if bp as usize == i {
                                let mu = self.lambda_bar.0[i - 1] - before;
                                let mut w = b.clone();
                                w.remove(p);
                                let coef = RatFunc::from_poly(quantum_integer(mu));
                                for (r, x) in self.coords(oracle, &w).into_iter().enumerate() {
                                    m[r][c] = &m[r][c] + &(&coef * &x);
                                }
                            }
                            before += cartan(i, bp as usize);
                        }
                    }
                }
                self.e.insert((i, beta.clone()), m);
            }
        }
    }

    /// Matrix of `F_i` on `V_β`, if the target space is known.
    pub fn f_matrix(&self, i: usize, beta: &[u32]) -> Option<Mat> {
        if let Some(m) = self.f.get(&(i, beta.to_vec())) {
            return Some(m.clone());
        }
        let mut up = beta.to_vec();
        up[i - 1] += 1;
        (self.known(beta) && self.known(&up))
            .then(|| mat_zero(self.dim_at(&up), self.dim_at(beta)))
    }

    /// Matrix of `E_i` on `V_β`.
    pub fn e_matrix(&self, i: usize, beta: &[u32]) -> Option<Mat> {
        if let Some(m) = self.e.get(&(i, beta.to_vec())) {
            return Some(m.clone());
        }
        if !self.known(beta) {
            return None;
        }
        let rows = if beta[i - 1] == 0 {
            0
        } else {
            let mut down = beta.to_vec();
            down[i - 1] -= 1;
            self.dim_at(&down)
        };
        Some(mat_zero(rows, self.dim_at(beta)))
    }

    /// Scalar by which `K_i` acts on `V_β`.
    pub fn k_scalar(&self, i: usize, beta: &[u32], inverse: bool) -> RatFunc {
        let w = self.weight_of(beta)[i - 1];
        RatFunc::from_poly(LaurentPoly::q_pow(if inverse { -w } else { w } as i32))
    }

    /// Applies a word of generators (rightmost acts first) to `V_β`.
    /// Each generator is `(is_e, i)`. Returns the matrix and target weight.
    fn compose(&self, gens: &[(bool, usize)], beta: &[u32]) -> Option<(Mat, RootVec)> {
        let d = self.dim_at(beta);
        let mut cur_beta = beta.to_vec();
        let mut m: Mat = (0..d)
            .map(|i| (0..d).map(|j| if i == j { RatFunc::one() } else { RatFunc::zero() }).collect())
            .collect();
        for &(is_e, i) in gens.iter().rev() {
            let g = if is_e {
                if cur_beta[i - 1] == 0 {
                    // Leaves the weight lattice below the top: zero map.
                    return Some((Vec::new(), Vec::new()));
                }
                self.e_matrix(i, &cur_beta)?
            } else {
                self.f_matrix(i, &cur_beta)?
            };
            let inner = self.dim_at(&cur_beta);
            m = mat_mul(&g, &m, inner, d);
            if is_e {
                cur_beta[i - 1] -= 1;
            } else {
                cur_beta[i - 1] += 1;
            }
        }
        Some((m, cur_beta))
    }

    /// Checks `Σ c · word = 0` (or `= rhs · id`) on `V_β`; `None` when some
    /// intermediate space is unknown.
    fn relation_holds(
        &self,
        terms: &[(RatFunc, Vec<(bool, usize)>)],
        beta: &[u32],
        identity_coeff: Option<RatFunc>,
    ) -> Option<bool> {
        let cols = self.dim_at(beta);
        let mut mats = Vec::new();
        let mut target: Option<RootVec> = None;
        for (c, w) in terms {
            let (m, t) = self.compose(w, beta)?;
            if t.is_empty() {
                continue;
            }
            target = Some(t);
            mats.push((c.clone(), m));
        }
        let rows = match &target {
            Some(t) => self.dim_at(t),
            None => cols,
        };
        let mut acc = mat_combine(&mats, rows, cols);
        if let Some(c) = identity_coeff {
            if target.is_some() && target.as_deref() != Some(beta) {
                return Some(false);
            }
            for k in 0..cols {
                acc[k][k] = &acc[k][k] - &c;
            }
        }
        Some(mat_is_zero(&acc))
    }

    /// All failing relations, each described by a short message.
    pub fn relation_failures(&self) -> Vec<String> {
        let rank = self.rank();
        let one = RatFunc::one;
        let two = RatFunc::from_poly(quantum_integer(2));
        let mut failures = Vec::new();
        let betas: Vec<RootVec> = self.spaces.keys().cloned().collect();
        for beta in &betas {
            // K K⁻¹ = 1 and K-conjugation of E and F.
            for i in 1..=rank {
                let kk = &self.k_scalar(i, beta, false) * &self.k_scalar(i, beta, true);
                if kk != one() {
                    failures.push(format!("K{i}K{i}^-1 on {beta:?}"));
                }
                for j in 1..=rank {
                    let mut up = beta.clone();
                    up[j - 1] += 1;
                    if self.known(&up) {
                        let lhs = &self.k_scalar(i, &up, false) * &self.k_scalar(i, beta, true);
                        let expected = RatFunc::from_poly(LaurentPoly::q_pow(-cartan(i, j) as i32));
                        if self.dim_at(&up) > 0 && lhs != expected {
                            failures.push(format!("K{i} F{j} K{i}^-1 on {beta:?}"));
                        }
                    }
                }
            }
            // Commutator relations.
            for i in 1..=rank {
                for j in 1..=rank {
                    let terms = vec![
                        (one(), vec![(true, i), (false, j)]),
                        (-&one(), vec![(false, j), (true, i)]),
                    ];
                    let id = (i == j).then(|| {
                        RatFunc::from_poly(quantum_integer(self.weight_of(beta)[i - 1]))
                    });
                    if self.relation_holds(&terms, beta, id) == Some(false) {
                        failures.push(format!("[E{i},F{j}] on {beta:?}"));
                    }
                }
            }
            // Serre relations and distant commutation, for F and E.
            for is_e in [false, true] {
                let name = if is_e { "E" } else { "F" };
                for i in 1..=rank {
                    for j in 1..=rank {
                        if i == j {
                            continue;
                        }
                        let terms = if i.abs_diff(j) == 1 {
                            vec![
                                (one(), vec![(is_e, i), (is_e, i), (is_e, j)]),
                                (-&two, vec![(is_e, i), (is_e, j), (is_e, i)]),
                                (one(), vec![(is_e, j), (is_e, i), (is_e, i)]),
                            ]
                        } else {
                            vec![
                                (one(), vec![(is_e, i), (is_e, j)]),
                                (-&one(), vec![(is_e, j), (is_e, i)]),
                            ]
                        };
                        if self.relation_holds(&terms, beta, None) == Some(false) {
                            failures.push(format!("Serre {name}{i}{name}{j} on {beta:?}"));
                        }
                    }
                }
            }
        }
        failures
    }

    /// True iff every defining relation holds on every constructed space.
    pub fn verify_relations(&self) -> bool {
        self.relation_failures().is_empty()
    }

    /// Checks `⟨F_i x, y⟩ = ⟨x, q⁻¹K_iE_i y⟩` as a matrix identity
    /// `bar(F_i)ᵀ G_{β+α_i} = G_β q⁻¹ K_i E_i` on every constructed pair.
    pub fn biadjoint_check(&self) -> bool {
        for ((i, beta), f) in &self.f {
            let mut up = beta.clone();
            up[i - 1] += 1;
            let (Some(src), Some(dst)) = (self.spaces.get(beta), self.spaces.get(&up)) else {
                continue;
            };
            let e = &self.e[&(*i, up.clone())];
            let k = &self.k_scalar(*i, beta, false)
                * &RatFunc::from_poly(LaurentPoly::q_pow(-1));
            for x in 0..src.dim() {
                for y in 0..dst.dim() {
                    let mut lhs = RatFunc::zero();
                    for r in 0..dst.dim() {
                        let g = RatFunc::from_poly(dst.gram[r][y].clone());
                        lhs = &lhs + &(&f[r][x].bar() * &g);
                    }
                    let mut rhs = RatFunc::zero();
                    for s in 0..src.dim() {
                        let g = RatFunc::from_poly(src.gram[x][s].clone());
                        rhs = &rhs + &(&g * &e[s][y]);
                    }
                    if lhs != &rhs * &k {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// A copy with one entry of an `F_i` matrix overwritten — used to show
    /// that [`verify_relations`](Self::verify_relations) detects corruption.
    pub fn with_corrupted_f(&self, i: usize, beta: &[u32], row: usize, col: usize, value: RatFunc) -> Self {
        let mut m = self.clone();
        if let Some(mat) = m.f.get_mut(&(i, beta.to_vec())) {
            mat[row][col] = value;
        }
        m
    }

    /// Weight multiset of the constructed spaces: weight ↦ multiplicity.
    pub fn weight_multiset(&self) -> BTreeMap<Vec<i64>, usize> {
        let mut out = BTreeMap::new();
        for (beta, s) in &self.spaces {
            *out.entry(self.weight_of(beta)).or_insert(0) += s.dim();
        }
        out
    }
}

/// Result of [`branching_character_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingReport {
    pub ok: bool,
    pub lhs: usize,
    pub rhs: Vec<usize>,
}

/// Projects the weight multiset of `V_λ` to `sl_n` (dropping the last entry)
/// and compares it with the disjoint union of the multisets of `V_μ` over
/// `μ ∈ τ(λ)` (listed in lexicographically descending order).
pub fn branching_character_check(lambda: &Partition) -> Result<BranchingReport, UqError> {
    let lb = weight_of_partition(lambda)?;
    let big = build_irreducible(&lb, None)?;
    let mut lhs: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for (w, m) in big.weight_multiset() {
        let mut w = w;
        w.pop();
        *lhs.entry(w).or_insert(0) += m;
    }
    let mut rhs_union: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut rhs = Vec::new();
    for mu in interlacing_set(lambda, None) {
        if mu.len() < 2 {
            *rhs_union.entry(Vec::new()).or_insert(0) += 1;
            rhs.push(1);
            continue;
        }
        let small = build_irreducible(&weight_of_partition(&mu)?, None)?;
        rhs.push(small.dim());
        for (w, m) in small.weight_multiset() {
            *rhs_union.entry(w).or_insert(0) += m;
        }
    }
    Ok(BranchingReport {
        ok: lhs == rhs_union && big.complete,
        lhs: big.dim(),
        rhs,
    })
}
