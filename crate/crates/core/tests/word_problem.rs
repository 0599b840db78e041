use nbraid_core::combing::{BorderedComber, ClosedSolver, Solver};
use nbraid_core::presentations::{commutation_identities, GroupSpec, Presentation};
use nbraid_core::words::{Generator, Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], inverse: rng.gen_bool(0.5) }))
}

/// Inserts a random conjugate of a random relator at a random position.
fn insert_relator(rng: &mut ChaCha8Rng, w: &Word, pres: &Presentation) -> Word {
    let r = &pres.relators[rng.gen_range(0..pres.relators.len())].word;
    let r = if rng.gen_bool(0.5) { r.clone() } else { r.inverse() };
    let clen = rng.gen_range(0..4);
    let c = random_word(rng, &pres.generators, clen);
    let pos = rng.gen_range(0..=w.len());
    let head = Word::from_letters(w.letters()[..pos].iter().copied());
    let tail = Word::from_letters(w.letters()[pos..].iter().copied());
    &(&head * &r.conjugate_by(&c)) * &tail
}

#[test]
fn relator_insertion_preserves_combed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in ["bordered:g=2,b=1,n=2", "bordered:g=2,b=1,n=3", "bordered:g=1,b=2,n=3", "bordered:g=2,b=3,n=3"] {
        let spec: GroupSpec = spec.parse().unwrap();
        let pres = Presentation::of(spec).unwrap();
        let comber = BorderedComber::new(spec).unwrap();
        for _ in 0..100 {
            let w = random_word(&mut rng, &pres.generators, 10);
            let mut v = w.clone();
            for _ in 0..2 {
                v = insert_relator(&mut rng, &v, &pres);
            }
            let cw = comber.comb(&w).unwrap();
            assert_eq!(cw, comber.comb(&v).unwrap(), "{} {} vs {}", spec, w, v);
            assert_eq!(comber.comb(&cw.to_word()).unwrap(), cw);
        }
    }
}

#[test]
fn closed_relator_insertion_is_trivial() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (g, n) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2)] {
        let spec = GroupSpec::closed(g, n).unwrap();
        let pres = Presentation::of(spec).unwrap();
        let s = ClosedSolver::new(g, n).unwrap();
        for _ in 0..40 {
            let w = random_word(&mut rng, &pres.generators, 8);
            let v = insert_relator(&mut rng, &w, &pres);
            assert!(s.equal(&w, &v).unwrap(), "{} vs {}", w, v);
        }
    }
}

#[test]
fn commutation_identities_hold() {
    for (g, n) in [(2u16, 2u16), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let solver = Solver::new(GroupSpec::closed(g, n).unwrap()).unwrap();
        let ids = commutation_identities(g, n).unwrap();
        assert_eq!(ids.iter().any(|id| id.label.starts_with("f1")), g >= 3);
        for id in ids {
            assert!(solver.is_trivial(&id.word).unwrap(), "g={} n={} identity {} failed", g, n, id.label);
        }
    }
}

#[test]
fn perturbed_identities_fail() {
    let solver = ClosedSolver::new(2, 3).unwrap();
    for id in commutation_identities(2, 3).unwrap() {
        let w = &id.word * &Generator::B(1, 2).word();
        assert!(!solver.is_trivial(&w).unwrap(), "{}", id.label);
    }
}
