//! The polynomial representation: each idempotent `1_i` acts on
//! `ℤ[x_1, …, x_m]`, dots by multiplication and crossings by
//! Demazure operators, transpositions, or transpositions times a linear
//! factor, according to the labels. It is faithful, so two elements that
//! act identically on enough polynomials are equal; the tests use it as an
//! independent check of the rewriting engine and of the sign table.

use std::collections::BTreeMap;

use super::conventions::{R2_ADJACENT_LEFT, R2_ADJACENT_RIGHT};
use super::word::{Gen, KlrElement, KlrWord};

/// A polynomial: exponent vector ↦ coefficient (no zero coefficients).
pub type Poly = BTreeMap<Vec<u32>, i64>;

fn add_to(p: &mut Poly, e: Vec<u32>, c: i64) {
    if c == 0 {
        return;
    }
    let v = p.entry(e.clone()).or_insert(0);
    *v += c;
    if *v == 0 {
        p.remove(&e);
    }
}

/// The monomial `x^e`.
pub fn monomial(e: &[u32]) -> Poly {
    let mut p = Poly::new();
    p.insert(e.to_vec(), 1);
    p
}

fn swap_vars(f: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    for (e, &c) in f {
        let mut e2 = e.clone();
        e2.swap(k, k + 1);
        add_to(&mut out, e2, c);
    }
    out
}

fn times_var(f: &Poly, k: usize) -> Poly {
    f.iter()
        .map(|(e, &c)| {
            let mut e2 = e.clone();
            e2[k] += 1;
            (e2, c)
        })
        .collect()
}

/// `(f − s_k f)/(x_k − x_{k+1})`.
fn demazure(f: &Poly, k: usize) -> Poly {
    let mut out = Poly::new();
    for (e, &c) in f {
        let (a, b) = (e[k], e[k + 1]);
        // ∂(x_k^a x_{k+1}^b) = ± Σ x_k^{…} x_{k+1}^{…}
        let (lo, hi, sign) = if a >= b { (b, a, 1) } else { (a, b, -1) };
        for i in 0..hi - lo {
            let mut e2 = e.clone();
            if sign == 1 {
                e2[k] = hi - 1 - i;
                e2[k + 1] = lo + i;
            } else {
                e2[k] = lo + i;
                e2[k + 1] = hi - 1 - i;
            }
            add_to(&mut out, e2, sign * c);
        }
    }
    out
}

/// Applies a word to a polynomial in the component of its bottom sequence.
pub fn act_word(w: &KlrWord, f: &Poly) -> Poly {
    let mut labels = w.bottom.clone();
    let mut f = f.clone();
    for g in &w.ops {
        match *g {
            Gen::Dot { pos } => f = times_var(&f, pos - 1),
            Gen::Cross { pos } => {
                let k = pos - 1;
                let (i, j) = (labels[k], labels[k + 1]);
                f = match i.abs_diff(j) {
                    0 => demazure(&f, k),
                    1 if i < j => swap_vars(&f, k),
                    1 => {
                        // The product of the two halves of the quadratic
                        // relation is the linear factor from the table.
                        let s = swap_vars(&f, k);
                        let mut out = Poly::new();
                        for (e, c) in times_var(&s, k) {
                            add_to(&mut out, e, c * R2_ADJACENT_LEFT);
                        }
                        for (e, c) in times_var(&s, k + 1) {
                            add_to(&mut out, e, c * R2_ADJACENT_RIGHT);
                        }
                        out
                    }
                    _ => swap_vars(&f, k),
                };
                labels.swap(k, k + 1);
            }
        }
    }
    f
}

/// Applies an element, grouped by top sequence.
pub fn act(x: &KlrElement, f: &Poly) -> BTreeMap<Vec<u8>, Poly> {
    let mut out: BTreeMap<Vec<u8>, Poly> = BTreeMap::new();
    for (w, c) in x.terms() {
        let r = act_word(w, f);
        let slot = out.entry(w.top()).or_default();
        for (e, v) in r {
            add_to(slot, e, v * c);
        }
    }
    out.retain(|_, p| !p.is_empty());
    out
}

/// Test polynomials in `m` variables: all monomials of total degree ≤ `d`.
pub fn probe_polys(m: usize, d: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Poly>) {
        if i == cur.len() {
            out.push(monomial(cur));
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, d, &mut cur, &mut out);
    out
}

/// True if `a` and `b` act identically on every probe polynomial.
pub fn same_action(a: &KlrElement, b: &KlrElement, m: usize, d: u32) -> bool {
    probe_polys(m, d).iter().all(|f| act(a, f) == act(b, f))
}
