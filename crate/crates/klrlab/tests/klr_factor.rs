//! Reconstruction checks for the factorization through special idempotents.

use klrlab::klr::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(idem: &StrandSeq, k: usize) -> Vec<FactorTerm> {
    let terms = factor_general(idem, k).unwrap();
    let mut rw = Rewriter::new();
    let total = reconstruct(&mut rw, idem.rank, &terms);
    assert_eq!(total, KlrElement::idempotent(idem), "idem {idem}");
    for t in &terms {
        assert!(t.through.is_ordered(), "{idem}: {:?}", t.through);
        assert_eq!(t.through.xi.len(), k);
        assert!(t.through.tail.labels.iter().all(|&l| (l as usize) < idem.rank));
        assert_eq!(t.left.bottom().unwrap(), t.through.full_sequence().labels);
        assert_eq!(t.left.top().unwrap(), idem.labels);
        assert_eq!(t.right.bottom().unwrap(), idem.labels);
        assert_eq!(t.right.top().unwrap(), t.through.full_sequence().labels);
    }
    terms
}

#[test]
fn one_strand_examples() {
    let s = StrandSeq::new(3, vec![3, 1, 2]).unwrap();
    let t = factor_one_strand(&s).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].through.full_sequence(), s);

    let s = StrandSeq::new(3, vec![2, 3]).unwrap();
    let t = factor_one_strand(&s).unwrap();
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].through.xi.0, vec![2]);

    let s = StrandSeq::new(3, vec![2, 2, 3]).unwrap();
    let t = check(&s, 1);
    assert_eq!(t.len(), 2);
    for term in &t {
        assert_eq!(term.through.full_sequence().labels, vec![2, 3, 2]);
    }

    assert!(factor_one_strand(&StrandSeq::new(3, vec![3, 3]).unwrap()).is_err());
    assert!(factor_one_strand(&StrandSeq::new(3, vec![1, 2]).unwrap()).is_err());
}

#[test]
fn general_examples() {
    let s = StrandSeq::new(3, vec![1, 2, 1]).unwrap();
    let t = check(&s, 0);
    assert_eq!(t.len(), 1);
    let s = StrandSeq::new(3, vec![3, 3]).unwrap();
    let t = check(&s, 2);
    assert_eq!(t.len(), 1);
    assert_eq!(t[0].through.xi.0, vec![3, 3]);
}

#[test]
fn exhaustive_small_rank_three() {
    for m in 1..=4usize {
        let total = 3usize.pow(m as u32);
        for code in 0..total {
            let mut c = code;
            let labels: Vec<u8> = (0..m)
                .map(|_| {
                    let l = (c % 3) as u8 + 1;
                    c /= 3;
                    l
                })
                .collect();
            let s = StrandSeq::new(3, labels).unwrap();
            let k = s.count(3);
            if k <= 2 {
                check(&s, k);
            }
        }
    }
}

#[test]
fn random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let rank = rng.gen_range(2..=4usize);
        let m = rng.gen_range(1..=5usize);
        let labels: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=rank as u8)).collect();
        let s = StrandSeq::new(rank, labels).unwrap();
        let k = s.count(rank as u8);
        if k <= 2 {
            check(&s, k);
        }
    }
}
