//! The rewriting engine against the relations, the polynomial
//! representation, randomized rule orders and the grading.

use klrlab::klr::polyrep::same_action;
use klrlab::klr::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(rank: usize, labels: &[u8]) -> StrandSeq {
    StrandSeq::new(rank, labels.to_vec()).unwrap()
}

fn word(rank: usize, labels: &[u8], ops: Vec<Gen>) -> KlrWord {
    make_word(&seq(rank, labels), ops).unwrap()
}

fn el(w: KlrWord) -> KlrElement {
    KlrElement::from_word(w)
}

fn random_word(rng: &mut ChaCha8Rng, max_rank: usize, max_len: usize, max_ops: usize) -> KlrWord {
    let rank = rng.gen_range(1..=max_rank);
    let m = rng.gen_range(1..=max_len);
    let labels: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=rank as u8)).collect();
    let k = rng.gen_range(0..=max_ops);
    let ops = (0..k)
        .map(|_| {
            if m >= 2 && rng.gen_bool(0.6) {
                Gen::cross(rng.gen_range(1..m))
            } else {
                Gen::dot(rng.gen_range(1..=m))
            }
        })
        .collect();
    word(rank, &labels, ops)
}

#[test]
fn quadratic_relation_examples() {
    let c = Gen::cross(1);
    assert!(normal_form(&el(word(3, &[2, 2], vec![c, c]))).is_zero());
    assert_eq!(
        normal_form(&el(word(3, &[1, 3], vec![c, c]))),
        el(word(3, &[1, 3], vec![]))
    );
    for labels in [[1u8, 2], [2, 1]] {
        let expected = KlrElement::from_terms(
            3,
            [
                (1, word(3, &labels, vec![Gen::dot(1)])),
                (1, word(3, &labels, vec![Gen::dot(2)])),
            ],
        );
        assert_eq!(normal_form(&el(word(3, &labels, vec![c, c]))), expected);
    }
}

#[test]
fn braid_relation_examples() {
    let (c1, c2) = (Gen::cross(1), Gen::cross(2));
    for labels in [[1u8, 2, 1], [2, 1, 2]] {
        let lhs = el(word(2, &labels, vec![c1, c2, c1])).sub(&el(word(2, &labels, vec![c2, c1, c2])));
        assert_eq!(normal_form(&lhs), el(word(2, &labels, vec![])), "{labels:?}");
    }
    for labels in [[1u8, 1, 1], [1, 3, 1], [1, 2, 3]] {
        let lhs = el(word(3, &labels, vec![c1, c2, c1])).sub(&el(word(3, &labels, vec![c2, c1, c2])));
        assert!(normal_form(&lhs).is_zero(), "{labels:?}");
    }
}

#[test]
fn dot_slide_examples() {
    let (c, x1, x2) = (Gen::cross(1), Gen::dot(1), Gen::dot(2));
    // x1 ψ = ψ x2 + 1 on equal labels, and dots slide freely otherwise.
    let lhs = el(word(2, &[1, 1], vec![c, x1])).sub(&el(word(2, &[1, 1], vec![x2, c])));
    assert_eq!(normal_form(&lhs), el(word(2, &[1, 1], vec![])));
    let lhs = el(word(2, &[1, 1], vec![c, x2])).sub(&el(word(2, &[1, 1], vec![x1, c])));
    assert_eq!(normal_form(&lhs), el(word(2, &[1, 1], vec![])).scale(-1));
    let lhs = el(word(2, &[1, 2], vec![c, x1])).sub(&el(word(2, &[1, 2], vec![x2, c])));
    assert!(normal_form(&lhs).is_zero());
}

#[test]
fn multiply_examples() {
    let e = el(word(2, &[1, 2], vec![]));
    assert_eq!(multiply(&e, &e), e);
    assert!(multiply(&e, &el(word(2, &[2, 1], vec![]))).is_zero());
    let x = el(word(2, &[1, 2], vec![Gen::dot(1)]));
    let xx = multiply(&x, &x);
    assert_eq!(xx, el(word(2, &[1, 2], vec![Gen::dot(1), Gen::dot(1)])));
    assert_eq!(xx.degree(), Some(4));
}

#[test]
fn degree_examples() {
    assert_eq!(degree(&word(3, &[2], vec![Gen::dot(1)])), 2);
    assert_eq!(degree(&word(3, &[1, 2], vec![Gen::cross(1)])), 1);
    assert_eq!(degree(&word(3, &[1, 3], vec![Gen::cross(1)])), 0);
    assert_eq!(degree(&word(3, &[2, 2], vec![Gen::cross(1)])), -2);
}

#[test]
fn generator_syntax() {
    assert_eq!(parse_ops("x1,s2").unwrap(), vec![Gen::dot(1), Gen::cross(2)]);
    assert_eq!(parse_ops(" x1  s1 ").unwrap(), vec![Gen::dot(1), Gen::cross(1)]);
    assert!(parse_ops("").unwrap().is_empty());
    for bad in ["y1", "x", "s-1", "é2"] {
        assert!(parse_ops(bad).is_err(), "{bad}");
    }
}

#[test]
fn word_validation() {
    let w = word(3, &[1, 2], vec![Gen::cross(1)]);
    assert_eq!(w.top(), vec![2, 1]);
    assert!(make_word(&seq(3, &[1]), vec![Gen::cross(1)]).is_err());
    assert!(make_word(&seq(3, &[1]), vec![Gen::dot(2)]).is_err());
    assert!(StrandSeq::new(2, vec![3]).is_err());
}

#[test]
fn json_format() {
    let w = word(2, &[1, 2], vec![Gen::dot(1), Gen::cross(1)]);
    let v = serde_json::to_value(&w).unwrap();
    assert_eq!(
        v,
        serde_json::json!({"rank": 2, "bottom": [1, 2], "ops": [{"kind": "dot", "pos": 1}, {"kind": "cross", "pos": 1}]})
    );
    let e = KlrElement::from_terms(2, [(3, w.clone())]);
    let text = serde_json::to_string(&e).unwrap();
    assert_eq!(serde_json::from_str::<KlrElement>(&text).unwrap(), e);
    let bad = r#"{"rank":2,"terms":[{"coeff":1,"word":{"rank":2,"bottom":[1],"ops":[{"kind":"cross","pos":1}]}}]}"#;
    assert!(serde_json::from_str::<KlrElement>(bad).is_err());
}

#[test]
fn normal_form_agrees_with_polynomial_representation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let w = random_word(&mut rng, 3, 4, 7);
        let x = el(w.clone());
        let nf = normal_form(&x);
        assert!(nf.terms().all(|(t, _)| is_normal_form(t)));
        assert!(same_action(&x, &nf, w.bottom.len(), 3), "{w}");
    }
}

#[test]
fn randomized_orders_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let w = random_word(&mut rng, 3, 4, 8);
        let a = Rewriter::randomized(2 * i).normal_form_word(&w);
        let b = Rewriter::randomized(2 * i + 1).normal_form_word(&w);
        assert_eq!(a, b, "{w}");
        assert_eq!(a, normal_form(&el(w)));
    }
}

#[test]
fn normal_form_is_idempotent_and_graded() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let w = random_word(&mut rng, 3, 4, 7);
        let nf = normal_form(&el(w.clone()));
        assert_eq!(normal_form(&nf), nf);
        if !nf.is_zero() {
            assert_eq!(nf.degree(), Some(degree(&w)), "{w}");
        }
    }
}

#[test]
fn step_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let w = random_word(&mut rng, 3, 4, 8);
        let mut rw = Rewriter::unmemoised();
        rw.normal_form_word(&w);
        let size = (w.ops.len() + w.bottom.len()) as u64;
        assert!(rw.steps() <= 4 * size.pow(4), "{w}: {} steps", rw.steps());
    }
}

#[test]
fn associativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 100 {
        let c = random_word(&mut rng, 3, 4, 3);
        let next = |bottom: Vec<u8>, rng: &mut ChaCha8Rng| {
            let m = bottom.len();
            let k = rng.gen_range(0..=3);
            let ops: Vec<Gen> = (0..k)
                .map(|_| if m >= 2 && rng.gen_bool(0.6) { Gen::cross(rng.gen_range(1..m)) } else { Gen::dot(rng.gen_range(1..=m)) })
                .collect();
            KlrWord { rank: c.rank, bottom, ops }
        };
        let b = next(c.top(), &mut rng);
        let a = next(b.top(), &mut rng);
        let (a, b, c) = (el(a), el(b), el(c));
        assert_eq!(multiply(&a, &multiply(&b, &c)), multiply(&multiply(&a, &b), &c));
        checked += 1;
    }
}

#[test]
fn inv_r3_identity() {
    for rank in 2..=4 {
        for j in 1..rank as u8 {
            let (lhs, rhs) = inv_r3(rank, &[j, j, j + 1]).unwrap();
            assert_eq!(normal_form(&lhs), normal_form(&rhs), "rank {rank}, j {j}");
            assert_eq!(rhs.degree(), Some(0));
        }
    }
    assert!(inv_r3(4, &[1, 1, 3]).is_err());
    assert!(inv_r3(2, &[2, 2, 3]).is_err());
}

#[test]
fn region_examples() {
    use klrlab::combi::GlWeight;
    let d = decorate_regions(&word(1, &[1], vec![]), &GlWeight(vec![1, 0]));
    assert_eq!(d.rightmost, GlWeight(vec![0, 1]));
    let d = decorate_regions(&word(2, &[1, 1], vec![]), &GlWeight(vec![1, 0, 0]));
    assert_eq!(d.rightmost, GlWeight(vec![-1, 2, 0]));
    assert!(d.rightmost_negative());
    let d = decorate_regions(&word(2, &[1, 2], vec![Gen::cross(1)]), &GlWeight(vec![1, 1, 0]));
    assert_eq!(d.heights.len(), 2);
    assert_eq!(d.heights[1][1], GlWeight(vec![1, 0, 1]));
}

#[test]
fn polynomial_representation_separates_and_fixes_signs() {
    let (c1, c2) = (Gen::cross(1), Gen::cross(2));
    // The sign table is consistent with the representation.
    for labels in [[1u8, 2, 1], [2, 1, 2]] {
        let lhs = el(word(2, &labels, vec![c1, c2, c1])).sub(&el(word(2, &labels, vec![c2, c1, c2])));
        assert!(same_action(&lhs, &el(word(2, &labels, vec![])), 3, 3));
    }
    // Distinct normal-form words act differently.
    let basis = [
        word(2, &[1, 1], vec![]),
        word(2, &[1, 1], vec![Gen::dot(1)]),
        word(2, &[1, 1], vec![Gen::dot(2)]),
        word(2, &[1, 1], vec![c1]),
        word(2, &[1, 1], vec![Gen::dot(1), c1]),
    ];
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            assert!(!same_action(&el(a.clone()), &el(b.clone()), 2, 3), "{a} vs {b}");
        }
    }
}
