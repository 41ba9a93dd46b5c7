//! Cyclotomic quotients: reduction, graded dimensions against the
//! Shapovalov oracle, branching projections, Gelfand–Tsetlin idempotents and
//! vanishing checks.

use klrlab::combi::{enumerate_dominant, enumerate_gt_patterns, GtPattern, Partition, XiSequence};
use klrlab::cyclo::*;
use klrlab::klr::{multiply, Gen, KlrElement, KlrWord, StrandSeq};
use klrlab::qint::LaurentPoly;
use klrlab::uqmod::seq_of;
use proptest::prelude::*;

fn ctx(parts: &[u32]) -> CycContext {
    make_context(&Partition::new(parts.to_vec()).unwrap(), None, None).unwrap()
}

fn seq(rank: usize, labels: &[u8]) -> StrandSeq {
    StrandSeq::new(rank, labels.to_vec()).unwrap()
}

fn word(rank: usize, bottom: &[u8], ops: Vec<Gen>) -> KlrElement {
    KlrElement::from_word(KlrWord {
        rank,
        bottom: bottom.to_vec(),
        ops,
    })
}

fn all_betas(rank: usize, size: u32) -> Vec<Vec<u32>> {
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

#[test]
fn context_examples() {
    let c = ctx(&[1, 0]);
    assert_eq!(c.lambda_bar.0, vec![1]);
    assert_eq!(ctx(&[2, 1, 0]).lambda_bar.0, vec![1, 1]);
    let p = Partition::new(vec![1, 0]).unwrap();
    assert!(matches!(make_context(&p, Some(0), None), Err(CycError::InvalidCap(_))));
    // The last part is normalised away.
    assert_eq!(ctx(&[3, 2, 1]).lambda.parts(), &[2, 1, 0]);
}

#[test]
fn reduce_examples() {
    let c = ctx(&[1, 0]);
    let (r, s) = cyc_reduce(&word(1, &[1], vec![Gen::dot(1)]), &c).unwrap();
    assert!(r.is_zero());
    assert_eq!(s, Status::Exact);
    let (r, s) = cyc_reduce(&KlrElement::zero(1), &c).unwrap();
    assert!(r.is_zero());
    assert_eq!(s, Status::Exact);
    let c2 = ctx(&[2, 0]);
    let (r, s) = cyc_reduce(&KlrElement::idempotent(&seq(1, &[1, 1, 1])), &c2).unwrap();
    assert!(r.is_zero());
    assert_eq!(s, Status::Exact);
    let (r, _) = cyc_reduce(&KlrElement::idempotent(&seq(1, &[1, 1])), &c2).unwrap();
    assert!(!r.is_zero());
    assert!(matches!(
        cyc_reduce(&KlrElement::idempotent(&seq(2, &[1])), &c2),
        Err(CycError::RankMismatch { .. })
    ));
}

#[test]
fn reduce_above_degree_cap_is_flagged() {
    let c = make_context(&Partition::new(vec![3, 0]).unwrap(), Some(2), None).unwrap();
    let x = word(1, &[1], vec![Gen::dot(1), Gen::dot(1)]);
    let (r, s) = cyc_reduce(&x, &c).unwrap();
    assert_eq!(s, Status::Capped);
    assert_eq!(r, x);
    let too_many = word(1, &[1], vec![Gen::dot(1); 3]);
    assert!(cyc_reduce(&too_many, &c).unwrap().0.is_zero());
}

#[test]
fn gdim_examples() {
    let c = ctx(&[1, 0]);
    assert_eq!(
        gdim_hom(&seq(1, &[1]), &seq(1, &[1]), &c).unwrap(),
        (LaurentPoly::one(), Status::Exact)
    );
    assert!(gdim_hom(&seq(1, &[1, 1]), &seq(1, &[1, 1]), &c).unwrap().0.is_zero());
    let c2 = ctx(&[2, 0]);
    assert_eq!(
        gdim_hom(&seq(1, &[1]), &seq(1, &[1]), &c2).unwrap(),
        (LaurentPoly::from_terms([(0, 1), (2, 1)]), Status::Exact)
    );
    // Different weights: zero, exact.
    let c3 = ctx(&[2, 1, 0]);
    assert_eq!(
        gdim_hom(&seq(2, &[1]), &seq(2, &[2]), &c3).unwrap(),
        (LaurentPoly::zero(), Status::Exact)
    );
}

#[test]
fn nilhecke_dimensions() {
    // 1_{(1,1)} R^{(2)} 1_{(1,1)} is a 2×2 matrix algebra over ℚ: (q⁻¹ + q)².
    let c = ctx(&[2, 0]);
    let (g, s) = gdim_hom(&seq(1, &[1, 1]), &seq(1, &[1, 1]), &c).unwrap();
    assert_eq!(g, LaurentPoly::from_terms([(-2, 1), (0, 2), (2, 1)]));
    assert_eq!(s, Status::Exact);
}

#[test]
fn gdim_matches_shapovalov_on_desk_range() {
    let cases: [(&[u32], usize); 5] = [(&[1, 0], 1), (&[2, 0], 1), (&[3, 0], 1), (&[1, 0, 0], 2), (&[1, 1, 0], 2)];
    for (parts, rank) in cases {
        let c = ctx(parts);
        for size in 0..=3 {
            for beta in all_betas(rank, size) {
                let cmp = compare_weight_space(&beta, &c).unwrap();
                assert!(cmp.ok, "{parts:?} β={beta:?}: {cmp:?}");
                assert!(cmp.qshift.is_none() || cmp.qshift == Some(0));
            }
        }
    }
}

#[test]
fn gdim_matches_shapovalov_beyond_acceptance() {
    let c = ctx(&[2, 1, 0]);
    for beta in [vec![1, 1], vec![2, 1], vec![1, 2], vec![2, 2]] {
        let cmp = compare_weight_space(&beta, &c).unwrap();
        assert!(cmp.ok, "β={beta:?}");
    }
}

#[test]
fn block_decomposition_by_number_of_top_labels() {
    let c = ctx(&[2, 1, 0]);
    for a in seq_of(&[1, 1]) {
        for b in seq_of(&[2, 0]) {
            let (g, s) = gdim_hom(&seq(2, &a), &seq(2, &b), &c).unwrap();
            assert!(g.is_zero());
            assert_eq!(s, Status::Exact);
        }
    }
}

#[test]
fn compare_record_json_shape() {
    let c = ctx(&[1, 0]);
    let rec = compare_pair(&seq(1, &[1]), &seq(1, &[1]), &c).unwrap();
    let v = serde_json::to_value(&rec).unwrap();
    assert_eq!(v["gdim"], serde_json::json!([[0, 1]]));
    assert_eq!(v["shapovalov"], serde_json::json!([[0, 1]]));
    assert_eq!(v["status"], "exact");
    assert_eq!(v["qshift"], 0);
    assert_eq!(v["ok"], true);
}

#[test]
fn special_idempotent_examples() {
    let c = ctx(&[2, 1, 0]);
    let empty = seq(2, &[]);
    assert!(special_idempotent(&XiSequence(vec![1]), &empty, &c).is_ok());
    assert!(matches!(
        special_idempotent(&XiSequence(vec![1, 1]), &empty, &c),
        Err(CycError::NotDominant(_))
    ));
    let ok = special_idempotent(&XiSequence(vec![1, 2]), &seq(2, &[1]), &c).unwrap();
    assert_eq!(ok.full_sequence().labels, vec![1, 2, 2, 1]);
    assert!(special_idempotent(&XiSequence(vec![2]), &seq(2, &[2]), &c).is_err());
}

#[test]
fn tilde_kernel_examples() {
    let mask = PGroupMask::leading(3, 2);
    let w = |ops| KlrWord {
        rank: 2,
        bottom: vec![1, 2, 1],
        ops,
    };
    assert!(!tilde_kernel_test(&w(vec![]), &mask).unwrap());
    assert!(tilde_kernel_test(&w(vec![Gen::dot(2)]), &mask).unwrap());
    assert!(!tilde_kernel_test(&w(vec![Gen::dot(3)]), &mask).unwrap());
    assert!(!tilde_kernel_test(&w(vec![Gen::cross(2)]), &mask).unwrap());
    assert!(tilde_kernel_test(&w(vec![Gen::cross(1)]), &mask).unwrap());
    // After the free strand moves into the middle, positions 1 and 3 hold
    // the block strands.
    assert!(!tilde_kernel_test(&w(vec![Gen::cross(2), Gen::cross(1)]), &mask).unwrap());
    assert!(tilde_kernel_test(&w(vec![Gen::cross(2), Gen::dot(3)]), &mask).unwrap());
    assert!(tilde_kernel_test(&w(vec![]), &PGroupMask::leading(2, 1)).is_err());
}

#[test]
fn pi_examples() {
    let c = ctx(&[2, 1, 0]);
    // Two block strands crossing: the block (1,2)(2) for ξ₁ξ₂.
    let xi = XiSequence(vec![1, 2]);
    let x = word(2, &[1, 2, 2], vec![Gen::cross(2)]);
    assert!(pi_project(&x, &xi, &c).unwrap().0.is_zero());
    // A free strand far from the block passes through unchanged.
    let c4 = ctx(&[2, 1, 1, 0]);
    let xi3 = XiSequence(vec![3]);
    let target = c4.branch(&xi3).unwrap();
    for r in 0..3 {
        let x = cycinc_generator(3, 3, 1, r, &[]).unwrap();
        let (img, s) = pi_project(&x, &xi3, &c4).unwrap();
        let expect = cyc_reduce(&word(2, &[1], vec![Gen::dot(1); r as usize]), &target).unwrap().0;
        assert_eq!(img, expect, "r = {r}");
        assert_eq!(s, Status::Exact);
    }
    // Inputs must start with the block.
    assert!(matches!(
        pi_project(&word(2, &[1, 2], vec![]), &XiSequence(vec![2]), &c),
        Err(CycError::NotSpecial(_))
    ));
}

#[test]
fn cycinc_equal_label_case_vanishes_for_small_weights() {
    // X_i(i, r) with λ̄_i ∈ {0, 1} is zero for every r, including r = 1.
    for parts in [vec![2u32, 1, 0], vec![1, 0, 0], vec![2, 2, 1, 0], vec![2, 1, 1, 0]] {
        let c = ctx(&parts);
        let n = parts.len() - 1;
        for xi in enumerate_dominant(&c.lambda, 1) {
            let i = xi.0[0];
            if i >= n || c.lambda_bar.0[i - 1] > 1 {
                continue;
            }
            for r in 0..4 {
                let x = cycinc_generator(n, i, i as u8, r, &[]).unwrap();
                assert!(cyc_reduce(&x, &c).unwrap().0.is_zero(), "{parts:?} i={i} r={r}");
                assert!(pi_project(&x, &xi, &c).unwrap().0.is_zero());
            }
        }
    }
    // With λ̄_1 = 2 the case r = 1 leaves a single undotted term.
    let c = ctx(&[3, 1, 0]);
    let x = cycinc_generator(2, 1, 1, 1, &[]).unwrap();
    let (img, _) = pi_project(&x, &XiSequence(vec![1]), &c).unwrap();
    assert_eq!(img, KlrElement::idempotent(&seq(1, &[1])).scale(-1));
}

#[test]
fn cycinc_generators_at_full_weight_land_in_the_smaller_ideal() {
    // X_i(j, λ̄_j) projects into the cyclotomic ideal of R^{ξ(λ)}.
    for parts in [vec![2u32, 1, 0], vec![3, 1, 0], vec![2, 1, 1, 0], vec![2, 2, 1, 0]] {
        let c = ctx(&parts);
        let n = parts.len() - 1;
        for xi in enumerate_dominant(&c.lambda, 1) {
            let i = xi.0[0];
            if i > n {
                continue;
            }
            for j in 1..n as u8 {
                let r = c.lambda_bar.0[j as usize - 1] as u32;
                let x = cycinc_generator(n, i, j, r, &[]).unwrap();
                assert!(pi_project(&x, &xi, &c).unwrap().0.is_zero(), "{parts:?} i={i} j={j}");
            }
        }
    }
}

#[test]
fn surjectivity_witnesses_exist() {
    let c = ctx(&[2, 1, 0]);
    for xi in enumerate_dominant(&c.lambda, 1) {
        let ws = surjectivity_witnesses(&xi, 3, &c).unwrap();
        assert!(!ws.is_empty());
        assert!(ws.iter().all(|w| w.ok), "{xi:?}");
    }
}

#[test]
fn gt_idempotent_examples() {
    let p = |layers: Vec<Vec<u32>>| GtPattern::try_from(layers).unwrap();
    assert!(gt_idempotent(&p(vec![vec![0, 0], vec![0]])).unwrap().sequence.is_empty());
    assert!(gt_idempotent(&p(vec![vec![1, 0], vec![1]])).unwrap().sequence.is_empty());
    assert_eq!(gt_idempotent(&p(vec![vec![1, 0], vec![0]])).unwrap().sequence.labels, vec![1]);
    let e = gt_idempotent(&p(vec![vec![2, 1, 0], vec![1, 0], vec![0]])).unwrap();
    assert_eq!(e.sequence.labels, vec![1, 2, 2, 1]);
    assert_eq!(e.layer_of(), vec![0, 0, 0, 1]);
    assert!(gt_idempotent(&p(vec![vec![0]])).unwrap().sequence.is_empty());
}

#[test]
fn gt_orthogonality() {
    for parts in [vec![0u32], vec![1, 0], vec![2, 0], vec![1, 1, 0], vec![2, 1, 0]] {
        let c = ctx(&parts);
        let r = gt_orthogonality_check(&c).unwrap();
        assert!(r.ok, "{parts:?}: {r:?}");
        assert_eq!(r.status, Status::Exact);
        assert_eq!(r.distinct_nonzero, r.patterns);
    }
    let r = gt_orthogonality_check(&ctx(&[2, 1, 0])).unwrap();
    assert_eq!(r.patterns, 8);
    assert_eq!(r.pairs_checked, 56);
    assert_eq!(r.distinct_nonzero, 8);
}

#[test]
fn gt_diagonal_homs_are_nonzero() {
    let c = ctx(&[2, 1, 0]);
    for s in enumerate_gt_patterns(&c.lambda) {
        let e = gt_idempotent(&s).unwrap();
        let (d, _) = gt_hom_dim(&e, &e, &c).unwrap();
        assert!(!d.is_zero(), "{:?}", e.sequence);
    }
}

#[test]
fn sl2_base_case() {
    for l in 0..=3u32 {
        assert!(sl2_vanishing_check(l).unwrap(), "λ̄ = {l}");
        let c = ctx(&[l, 0]);
        let below = KlrElement::idempotent(&seq(1, &vec![1; l as usize]));
        let (r, s) = cyc_reduce(&below, &c).unwrap();
        assert!(!r.is_zero() && s == Status::Exact, "λ̄ = {l}");
    }
}

#[test]
fn weyl_vanishing_examples() {
    let c = ctx(&[1, 0]);
    let r = weyl_vanishing_check(&seq(1, &[1, 1]), &c).unwrap();
    assert!(r.flagged && r.rightmost_flagged && r.holds);
    assert_eq!(r.vanishes, Some(true));
    let r = weyl_vanishing_check(&seq(1, &[1]), &c).unwrap();
    assert!(!r.flagged && r.holds);
    let c3 = ctx(&[1, 0, 0]);
    let r = weyl_vanishing_check(&seq(2, &[1, 1]), &c3).unwrap();
    assert!(r.flagged && r.holds);
}

#[test]
fn weyl_vanishing_on_all_small_idempotents() {
    for parts in [vec![1u32, 0], vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0]] {
        let c = ctx(&parts);
        let rank = parts.len() - 1;
        for size in 0..=3 {
            for beta in all_betas(rank, size) {
                for labels in seq_of(&beta) {
                    let r = weyl_vanishing_check(&seq(rank, &labels), &c).unwrap();
                    assert!(r.holds, "{parts:?} {labels:?}");
                }
            }
        }
    }
}

/// Random words between special idempotents `e(p_i, tail)` for `λ = (2,1,0)`.
fn special_pair() -> impl Strategy<Value = (usize, Vec<Gen>, Vec<Gen>, Vec<u8>)> {
    (0usize..2, 0usize..=3).prop_flat_map(|(which, tail)| {
        let m = [2usize, 1][which] + tail;
        let gen = move || {
            prop_oneof![
                (1..=m).prop_map(Gen::dot),
                (1..m.max(2)).prop_map(Gen::cross),
            ]
        };
        (
            Just(which),
            proptest::collection::vec(gen(), 0..5),
            proptest::collection::vec(gen(), 0..5),
            Just(vec![1u8; tail]),
        )
    })
}

fn build(which: usize, ops: &[Gen], bottom: &[u8]) -> Option<KlrElement> {
    let block = [vec![1u8, 2], vec![2u8]][which].clone();
    let m = bottom.len();
    if ops.iter().any(|g| matches!(*g, Gen::Cross { pos } if pos + 1 > m)) {
        return None;
    }
    let w = KlrWord {
        rank: 2,
        bottom: bottom.to_vec(),
        ops: ops.to_vec(),
    };
    (w.top()[..block.len()] == block[..]).then(|| KlrElement::from_word(w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn pi_is_multiplicative((which, g_ops, h_ops, tail) in special_pair()) {
        let c = ctx(&[2, 1, 0]);
        let xi = XiSequence(vec![[1usize, 2][which]]);
        let block = [vec![1u8, 2], vec![2u8]][which].clone();
        let bottom: Vec<u8> = block.iter().chain(&tail).copied().collect();
        let Some(h) = build(which, &h_ops, &bottom) else { return Ok(()); };
        let Some(g) = build(which, &g_ops, &h.top().unwrap()) else { return Ok(()); };
        let target = c.branch(&xi).unwrap();
        let (lhs, s1) = pi_project(&multiply(&g, &h), &xi, &c).unwrap();
        let (pg, _) = pi_project(&g, &xi, &c).unwrap();
        let (ph, _) = pi_project(&h, &xi, &c).unwrap();
        let (rhs, s2) = cyc_reduce(&multiply(&pg, &ph), &target).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(s1.is_exact() && s2.is_exact());
    }

    #[test]
    fn pi_intertwines_free_strands((which, g_ops, _h, tail) in special_pair(), j in Just(1u8)) {
        let c = ctx(&[2, 1, 0]);
        let xi = XiSequence(vec![[1usize, 2][which]]);
        let block = [vec![1u8, 2], vec![2u8]][which].clone();
        let bottom: Vec<u8> = block.iter().chain(&tail).copied().collect();
        let Some(g) = build(which, &g_ops, &bottom) else { return Ok(()); };
        let target = c.branch(&xi).unwrap();
        let (lhs, _) = pi_project(&append_strand(&g, j), &xi, &c).unwrap();
        let (pg, _) = pi_project(&g, &xi, &c).unwrap();
        let (rhs, _) = cyc_reduce(&append_strand(&pg, j), &target).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pi_kills_flagged_words((which, g_ops, _h, tail) in special_pair()) {
        let c = ctx(&[2, 1, 0]);
        let xi = XiSequence(vec![[1usize, 2][which]]);
        let block = [vec![1u8, 2], vec![2u8]][which].clone();
        let bottom: Vec<u8> = block.iter().chain(&tail).copied().collect();
        let Some(g) = build(which, &g_ops, &bottom) else { return Ok(()); };
        let (w, _) = g.terms().next().unwrap();
        let mask = PGroupMask::leading(bottom.len(), block.len());
        if tilde_kernel_test(w, &mask).unwrap() {
            prop_assert!(pi_project(&g, &xi, &c).unwrap().0.is_zero());
        }
    }

    #[test]
    fn reduction_is_idempotent_and_ideal_invariant(
        ops in proptest::collection::vec((0u8..2, 1usize..3), 0..6),
        gen_ops in proptest::collection::vec(1usize..3, 0..3),
    ) {
        let c = ctx(&[2, 1, 0]);
        let bottom = [1u8, 2, 1];
        let ops: Vec<Gen> = ops.into_iter().map(|(k, p)| if k == 0 { Gen::dot(p) } else { Gen::cross(p) }).collect();
        let x = word(2, &bottom, ops);
        let (r1, _) = cyc_reduce(&x, &c).unwrap();
        let (r2, _) = cyc_reduce(&r1, &c).unwrap();
        prop_assert_eq!(&r1, &r2);
        // Add an element of the ideal: crossings, then λ̄ dots on strand 1.
        let mut gops: Vec<Gen> = gen_ops.into_iter().map(Gen::cross).collect();
        let mid = KlrWord { rank: 2, bottom: bottom.to_vec(), ops: gops.clone() }.top();
        gops.extend(std::iter::repeat(Gen::dot(1)).take(c.bar(mid[0]) as usize));
        let ideal = word(2, &bottom, gops);
        if ideal.top() == x.top() {
            let (r3, _) = cyc_reduce(&x.add(&ideal), &c).unwrap();
            prop_assert_eq!(r1, r3);
        }
    }
}
