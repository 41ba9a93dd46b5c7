//! Exact incremental row echelon form over `ℚ`, stored fraction-free with
//! sparse big-integer rows.
//!
//! Rows are kept with distinct leading columns. Every nonzero vector in
//! their span has a pivot column as its leading column, so reducing a
//! vector until all pivot entries vanish yields a representative modulo the
//! span that depends only on the span and the column order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A sparse vector: column ↦ nonzero entry.
pub type SparseVec = BTreeMap<usize, BigInt>;

fn content(v: &SparseVec) -> BigInt {
    v.values().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn normalize(v: &mut SparseVec) {
    let mut g = content(v);
    if g.is_zero() {
        return;
    }
    if v.values().next().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    if !g.is_one() {
        for c in v.values_mut() {
            *c /= &g;
        }
    }
}

/// `v := p·v − f·row`, dropping zeros.
fn eliminate(v: &mut SparseVec, p: &BigInt, f: &BigInt, row: &SparseVec) {
    if !p.is_one() {
        for c in v.values_mut() {
            *c *= p;
        }
    }
    for (k, r) in row {
        let entry = v.entry(*k).or_insert_with(BigInt::zero);
        *entry -= f * r;
        if entry.is_zero() {
            v.remove(k);
        }
    }
}

/// Incremental echelon basis of a subspace of `ℚ^cols`.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    /// Pivot column ↦ row (its entry at the pivot column is positive).
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The pivot columns, ascending.
    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against the rows, up to an overall nonzero scalar.
    fn reduce_scaled(&self, mut v: SparseVec) -> SparseVec {
        let mut col = 0usize;
        while let Some((&c, _)) = v.range(col..).next() {
            if let Some(row) = self.rows.get(&c) {
                let p = row[&c].clone();
                let f = v[&c].clone();
                let g = p.gcd(&f);
                eliminate(&mut v, &(&p / &g), &(&f / &g), row);
                normalize(&mut v);
            }
            col = c + 1;
        }
        v
    }

    /// Adds `v` to the span; returns true if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        if v.is_empty() {
            return false;
        }
        let mut r = self.reduce_scaled(v);
        let Some((&lead, _)) = r.iter().next() else {
            return false;
        };
        normalize(&mut r);
        self.rows.insert(lead, r);
        true
    }

    /// True if `v` lies in the span.
    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_scaled(v.clone()).is_empty()
    }

    /// The representative of `v` modulo the span with zero entries at every
    /// pivot column. Returns `Err(d)` if it has a non-integral entry (with `d`
    /// a denominator witnessing this).
    pub fn reduce(&self, v: &SparseVec) -> Result<SparseVec, BigInt> {
        let mut v = v.clone();
        let mut den = BigInt::one();
        let mut col = 0usize;
        while let Some((&c, _)) = v.range(col..).next() {
            if let Some(row) = self.rows.get(&c) {
                let p = row[&c].clone();
                let f = v[&c].clone();
                let g = p.gcd(&f);
                let (p, f) = (&p / &g, &f / &g);
                eliminate(&mut v, &p, &f, row);
                den *= &p;
                let g = content(&v).gcd(&den);
                if !g.is_zero() && !g.is_one() {
                    for x in v.values_mut() {
                        *x /= &g;
                    }
                    den /= &g;
                }
            }
            col = c + 1;
        }
        if den.is_negative() {
            den = -den;
            for x in v.values_mut() {
                *x = -x.clone();
            }
        }
        if den.is_one() {
            Ok(v)
        } else if v.values().all(|x| x.is_multiple_of(&den)) {
            Ok(v.into_iter().map(|(k, x)| (k, x / &den)).collect())
        } else {
            Err(den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, v)| (k, BigInt::from(v))).collect()
    }

    #[test]
    fn rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(0, 2), (1, 4)])));
        assert!(e.insert(sv(&[(1, 3), (2, 1)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 5), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&sv(&[(0, 4), (1, 11), (2, 1)])));
        assert!(!e.contains(&sv(&[(2, 1)])));
    }

    #[test]
    fn canonical_representatives() {
        let mut e = Echelon::new();
        e.insert(sv(&[(0, 1), (2, -1)]));
        // x0 ≡ x2 modulo the span.
        assert_eq!(e.reduce(&sv(&[(0, 3), (1, 1)])).unwrap(), sv(&[(1, 1), (2, 3)]));
        let mut half = Echelon::new();
        half.insert(sv(&[(0, 2), (1, 1)]));
        assert!(half.reduce(&sv(&[(0, 1)])).is_err());
        assert_eq!(half.reduce(&sv(&[(0, 2)])).unwrap(), sv(&[(1, -1)]));
    }
}
