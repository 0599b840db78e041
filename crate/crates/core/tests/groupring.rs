use nbraid_core::groupring::{
    check_decomposition, decomposition_nilpotency_index, nilpotency_index, random_special, special_reduce, swap_commutator,
    FiniteGroup, RingElement, SemidirectQuotient, SpecialElement, Tag,
};
use nbraid_core::padp::SplitSequence;
use nbraid_core::pquotient::DEFAULT_ORDER_LIMIT;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn klein(class: u32) -> SemidirectQuotient {
    SemidirectQuotient::from_split(&SplitSequence::klein(), class, DEFAULT_ORDER_LIMIT).unwrap()
}

#[test]
fn klein_class_two_decomposes() {
    let sq = klein(2);
    assert_eq!(sq.group().order(), 16);
    assert_eq!((sq.a_elements().len(), sq.c_elements().len()), (4, 4));
    assert!(sq.is_two_almost_direct());
    let report = check_decomposition(&sq, 3).unwrap();
    assert!(report.holds, "{:?}", report);
    assert_eq!(report.dims[0], 15);
}

#[test]
fn klein_nilpotency_both_ways() {
    for class in [1, 2, 3] {
        let sq = klein(class);
        let direct = nilpotency_index(sq.group(), 64).unwrap();
        assert_eq!(Some(direct), decomposition_nilpotency_index(&sq, 64));
    }
}

#[test]
fn swap_identity_on_klein() {
    let sq = klein(2);
    let q = sq.group();
    let n = q.order();
    for &a in sq.a_elements() {
        for &c in sq.c_elements() {
            let f = swap_commutator(q, c, a);
            let lhs = RingElement::augmented(n, c).mul(q, &RingElement::augmented(n, a));
            let mut rhs = RingElement::augmented(n, a).mul(q, &RingElement::augmented(n, c));
            rhs.add_assign(&RingElement::augmented(n, f).mul_group(q, q.mul(a, c)));
            assert_eq!(lhs, rhs);
            assert!(sq.in_a(f));
        }
    }
}

#[test]
fn klein_certificates() {
    let sq = klein(2);
    let q = sq.group();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut nontrivial = 0;
    for _ in 0..100 {
        let e = random_special(&sq, &mut rng, 4);
        let cert = special_reduce(&sq, &e).unwrap();
        assert_eq!(cert.evaluate(q), e.evaluate(q));
        for t in &cert.terms {
            assert_eq!(t.i + t.h, e.factors.len());
            assert!(t.a_factors.len() >= t.i && t.c_factors.len() >= t.h);
        }
        nontrivial += usize::from(!e.is_standard());
    }
    assert!(nontrivial > 20);
}

#[test]
fn klein_swap_with_correction() {
    let sq = klein(2);
    let q = sq.group();
    let pair = sq
        .a_elements()
        .iter()
        .flat_map(|&a| sq.c_elements().iter().map(move |&c| (a, c)))
        .find(|&(a, c)| swap_commutator(q, c, a) != 0)
        .expect("a noncommuting pair");
    let e = SpecialElement::new(&sq, vec![(Tag::C, pair.1), (Tag::A, pair.0)]).unwrap();
    let cert = special_reduce(&sq, &e).unwrap();
    assert!(cert.terms.len() > 1);
    assert_eq!(cert.evaluate(q), e.evaluate(q));
}

#[test]
fn z4_squared_certificates() {
    let z4 = FiniteGroup::cyclic(4).unwrap();
    let sq = SemidirectQuotient::direct(&z4, &z4).unwrap();
    assert!(check_decomposition(&sq, 3).unwrap().holds);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let e = random_special(&sq, &mut rng, 4);
        assert_eq!(special_reduce(&sq, &e).unwrap().evaluate(sq.group()), e.evaluate(sq.group()));
    }
}

#[test]
fn braid_quotient_decomposes() {
    let seq = SplitSequence::closed_braid(2, 2).unwrap();
    let sq = SemidirectQuotient::from_split(&seq, 2, DEFAULT_ORDER_LIMIT).unwrap();
    assert_eq!(sq.group().order(), 512);
    let report = check_decomposition(&sq, 3).unwrap();
    assert!(report.holds, "{:?}", report);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let e = random_special(&sq, &mut rng, 3);
        assert_eq!(special_reduce(&sq, &e).unwrap().evaluate(sq.group()), e.evaluate(sq.group()));
    }
}
