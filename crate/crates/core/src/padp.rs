//! Split extensions `1 -> A -> B -> C -> 1` and the checks around them:
//! sections, `p`-almost-direct actions, compatibility of the lower
//! exponent-`p` series, and nontriviality witnesses.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combing::surface::klein_normal_form;
use crate::combing::{ClosedSolver, Solver, SurfaceSolver};
use crate::error::{Error, Result};
use crate::linalg;
use crate::pquotient::{series, Exp, PQuotient};
use crate::presentations::{section_images, GroupSpec, Presentation};
use crate::words::{Generator, Letter, Word};

/// Decision procedures attached to a split extension.
pub trait SplitOracle: fmt::Debug + Send + Sync {
    /// Rewrites a word of `B` lying in the kernel as a word in the
    /// generators of `A`. Fails if the word does not map to `1` in `C`.
    fn to_kernel(&self, w: &Word) -> Result<Word>;
    fn is_trivial_total(&self, w: &Word) -> Result<bool>;
    fn is_trivial_quotient(&self, w: &Word) -> Result<bool>;
}

/// A split extension with explicit inclusion, projection and section.
#[derive(Clone, Debug)]
pub struct SplitSequence {
    pub name: String,
    pub kernel: Presentation,
    pub total: Presentation,
    pub quotient: Presentation,
    /// Generators of `A` as words in `B`.
    pub inclusion: Vec<(Generator, Word)>,
    /// Generators of `B` as words in `C`.
    pub projection: Vec<(Generator, Word)>,
    /// Generators of `C` as words in `B`.
    pub section: Vec<(Generator, Word)>,
    oracle: Arc<dyn SplitOracle>,
}

fn lookup(table: &[(Generator, Word)], g: Generator) -> Option<Word> {
    table.iter().find(|(x, _)| *x == g).map(|(_, w)| w.clone())
}

impl SplitSequence {
    /// `1 -> P_{n-1}(N_{g,1}) -> P_n(N_g) -> pi_1(N_g) -> 1`, forgetting all
    /// strands but the first.
    pub fn closed_braid(g: u16, n: u16) -> Result<SplitSequence> {
        if n < 2 {
            return Err(Error::Unsupported("the splitting needs at least two strands".to_string()));
        }
        let solver = ClosedSolver::new(g, n)?;
        let total = Presentation::of(GroupSpec::closed(g, n)?)?;
        let kernel = Presentation::of(GroupSpec::bordered(g, 1, n - 1)?)?;
        let quotient = Presentation::of(GroupSpec::surface(g)?)?;
        let inclusion = kernel.generators.iter().map(|&x| (x, ClosedSolver::bordered_to_kernel(&x.word()))).collect();
        let projection = total
            .generators
            .iter()
            .map(|&x| {
                let img = match x {
                    Generator::Rho(1, l) => Generator::P(l).word(),
                    _ => Word::identity(),
                };
                (x, img)
            })
            .collect();
        Ok(SplitSequence {
            name: format!("closed:g={},n={}", g, n),
            kernel,
            total,
            quotient,
            inclusion,
            projection,
            section: section_images(g, n),
            oracle: Arc::new(ClosedOracle { solver, surface: SurfaceSolver::new(g)? }),
        })
    }

    /// The Klein bottle group `pi_1(N_2)` as `Z x| Z`: the kernel is
    /// generated by `b = p1 p2`, the quotient by the image of `a = p1`.
    pub fn klein() -> SplitSequence {
        let total = Presentation::of(GroupSpec::ClosedSurface { g: 2 }).expect("valid");
        let z = Presentation::of(GroupSpec::free(1)).expect("valid");
        let g1 = Generator::Abstract(1);
        let (p1, p2) = (Generator::P(1).word(), Generator::P(2).word());
        SplitSequence {
            name: "surface:g=2".to_string(),
            kernel: z.clone(),
            total,
            quotient: z,
            inclusion: alloc::vec![(g1, &p1 * &p2)],
            projection: alloc::vec![(Generator::P(1), g1.word()), (Generator::P(2), g1.word().inverse())],
            section: alloc::vec![(g1, p1)],
            oracle: Arc::new(KleinOracle),
        }
    }

    /// `Z x Z = <g1, g2 | [g1, g2]>` with kernel `<g2>` and quotient `<g1>`.
    pub fn direct_product() -> SplitSequence {
        let z = Presentation::of(GroupSpec::free(1)).expect("valid");
        let (g1, g2) = (Generator::Abstract(1), Generator::Abstract(2));
        SplitSequence {
            name: "zxz".to_string(),
            kernel: z.clone(),
            total: Presentation::free_abelian_rank_two(),
            quotient: z,
            inclusion: alloc::vec![(g1, g2.word())],
            projection: alloc::vec![(g1, g1.word()), (g2, Word::identity())],
            section: alloc::vec![(g1, g1.word())],
            oracle: Arc::new(AbelianOracle),
        }
    }

    /// The sequence attached to a group spec, when there is one.
    pub fn for_spec(spec: GroupSpec) -> Result<SplitSequence> {
        match spec {
            GroupSpec::ClosedBraid { g, n } => SplitSequence::closed_braid(g, n),
            GroupSpec::ClosedSurface { g: 2 } => Ok(SplitSequence::klein()),
            other => Err(Error::Unsupported(format!("no split extension registered for {}", other))),
        }
    }

    pub fn include(&self, a: &Word) -> Result<Word> {
        a.substitute(|g| lookup(&self.inclusion, g))
    }

    pub fn project(&self, b: &Word) -> Result<Word> {
        b.substitute(|g| lookup(&self.projection, g))
    }

    pub fn lift(&self, c: &Word) -> Result<Word> {
        c.substitute(|g| lookup(&self.section, g))
    }

    pub fn to_kernel(&self, b: &Word) -> Result<Word> {
        self.oracle.to_kernel(b)
    }

    pub fn is_trivial_total(&self, b: &Word) -> Result<bool> {
        self.oracle.is_trivial_total(b)
    }

    pub fn is_trivial_quotient(&self, c: &Word) -> Result<bool> {
        self.oracle.is_trivial_quotient(c)
    }

    /// Replaces the section by `c -> x s(c) x^-1` for a kernel word `x`.
    pub fn conjugate_section(&self, x: &Word) -> Result<SplitSequence> {
        let bx = self.include(x)?;
        let mut out = self.clone();
        out.section = self.section.iter().map(|(g, w)| (*g, w.conjugate_by(&bx))).collect();
        Ok(out)
    }

    /// Replaces the whole section table.
    pub fn with_section(&self, section: Vec<(Generator, Word)>) -> SplitSequence {
        let mut out = self.clone();
        out.section = section;
        out
    }

    /// Replaces the image of one generator of `C`.
    pub fn with_section_image(&self, gen: Generator, image: Word) -> SplitSequence {
        let mut out = self.clone();
        for entry in out.section.iter_mut() {
            if entry.0 == gen {
                entry.1 = image.clone();
            }
        }
        out
    }
}

#[derive(Debug)]
struct ClosedOracle {
    solver: ClosedSolver,
    surface: SurfaceSolver,
}

impl SplitOracle for ClosedOracle {
    fn to_kernel(&self, w: &Word) -> Result<Word> {
        match self.solver.rewrite_to_kernel(w)? {
            Some(a) => Ok(ClosedSolver::kernel_to_bordered(&a)),
            None => Err(Error::RewriteFailure(format!("{} does not map to the identity", w))),
        }
    }

    fn is_trivial_total(&self, w: &Word) -> Result<bool> {
        self.solver.is_trivial(w)
    }

    fn is_trivial_quotient(&self, w: &Word) -> Result<bool> {
        self.surface.is_trivial(w)
    }
}

#[derive(Debug)]
struct KleinOracle;

impl KleinOracle {
    fn coordinates(w: &Word) -> Result<(i64, i64)> {
        let (a, b) = (Generator::Abstract(1).word(), Generator::Abstract(2).word());
        let ab = w.substitute(|g| match g {
            Generator::P(1) => Some(a.clone()),
            Generator::P(2) => Some(&a.inverse() * &b),
            _ => None,
        })?;
        klein_normal_form(&ab)
    }
}

impl SplitOracle for KleinOracle {
    fn to_kernel(&self, w: &Word) -> Result<Word> {
        let (j, i) = KleinOracle::coordinates(w)?;
        if i != 0 {
            return Err(Error::RewriteFailure(format!("{} does not map to the identity", w)));
        }
        Ok(Word::power_of(Generator::Abstract(1), j))
    }

    fn is_trivial_total(&self, w: &Word) -> Result<bool> {
        Ok(KleinOracle::coordinates(w)? == (0, 0))
    }

    fn is_trivial_quotient(&self, w: &Word) -> Result<bool> {
        Ok(w.is_identity())
    }
}

#[derive(Debug)]
struct AbelianOracle;

impl SplitOracle for AbelianOracle {
    fn to_kernel(&self, w: &Word) -> Result<Word> {
        if w.exponent_sum(Generator::Abstract(1)) != 0 {
            return Err(Error::RewriteFailure(format!("{} does not map to the identity", w)));
        }
        Ok(Word::power_of(Generator::Abstract(1), w.exponent_sum(Generator::Abstract(2))))
    }

    fn is_trivial_total(&self, w: &Word) -> Result<bool> {
        Ok(w.exponent_sum(Generator::Abstract(1)) == 0 && w.exponent_sum(Generator::Abstract(2)) == 0)
    }

    fn is_trivial_quotient(&self, w: &Word) -> Result<bool> {
        Ok(w.is_identity())
    }
}

/// Outcome of [`check_section`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionReport {
    pub holds: bool,
    /// Human-readable descriptions of the failed conditions.
    pub failures: Vec<String>,
}

/// Checks that `lambda(sigma(c)) = c` for every generator `c` of `C` and that
/// `sigma` sends every relator of `C` to the identity of `B`.
pub fn check_section(seq: &SplitSequence) -> Result<SectionReport> {
    let mut failures = Vec::new();
    for &c in &seq.quotient.generators {
        let back = seq.project(&seq.lift(&c.word())?)?;
        if !seq.is_trivial_quotient(&(&back * &c.word().inverse()))? {
            failures.push(format!("projection of the lift of {} is {}", c, back));
        }
    }
    for r in seq.quotient.relator_words() {
        let lifted = seq.lift(r)?;
        if !seq.is_trivial_total(&lifted)? {
            failures.push(format!("lift of relator {} is nontrivial", r));
        }
    }
    Ok(SectionReport { holds: failures.is_empty(), failures })
}

/// Outcome of [`check_p_almost_direct`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostDirectReport {
    pub p: u32,
    pub holds: bool,
    /// `dim H_1(A; F_p)`.
    pub h1_dimension: usize,
    /// `(c, a, image of a, image of s(c) a s(c)^-1)` for the first failure.
    pub counterexample: Option<(Generator, Generator, Exp, Exp)>,
}

/// Whether conjugation by the section acts trivially on `H_1(A; F_p)`.
pub fn check_p_almost_direct(seq: &SplitSequence, p: u32) -> Result<AlmostDirectReport> {
    let h1 = PQuotient::class_one(&seq.kernel, p, u128::MAX)?;
    for &c in &seq.quotient.generators {
        let sc = seq.lift(&c.word())?;
        for &a in &seq.kernel.generators {
            let conj = seq.include(&a.word())?.conjugate_by(&sc);
            let back = seq.to_kernel(&conj)?;
            let (before, after) = (h1.image(&a.word())?, h1.image(&back)?);
            if before != after {
                return Ok(AlmostDirectReport {
                    p,
                    holds: false,
                    h1_dimension: h1.len(),
                    counterexample: Some((c, a, before, after)),
                });
            }
        }
    }
    Ok(AlmostDirectReport { p, holds: true, h1_dimension: h1.len(), counterexample: None })
}

/// One class of [`check_split_filtration`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassComparison {
    pub class: u32,
    /// `log_p` of the orders of `A`, `B`, `C` modulo `P_{class+1}`.
    pub kernel_log: u32,
    pub total_log: u32,
    pub quotient_log: u32,
    pub multiplicative: bool,
    /// The projection does not lower weights of generators of `B`.
    pub projection_weights: bool,
    /// The projection is onto every layer of `C`.
    pub projection_layers: bool,
    /// The inclusion is injective on every layer of `A`.
    pub inclusion_layers: bool,
}

impl ClassComparison {
    pub fn holds(&self) -> bool {
        self.multiplicative && self.projection_weights && self.projection_layers && self.inclusion_layers
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationComparison {
    pub p: u32,
    pub classes: Vec<ClassComparison>,
}

impl FiltrationComparison {
    pub fn holds(&self) -> bool {
        self.classes.iter().all(|c| c.holds())
    }
}

/// Rank over `F_p` of the weight-`k` coordinates of the given elements.
fn layer_rank(q: &PQuotient, elems: &[Exp], k: u32) -> usize {
    let cols: Vec<usize> = (0..q.len()).filter(|&i| q.weights()[i] == k).collect();
    let rows: Vec<Vec<u32>> = elems.iter().map(|e| cols.iter().map(|&i| e[i]).collect()).collect();
    if cols.is_empty() {
        return 0;
    }
    linalg::rank(&rows, q.p())
}

/// Compares the lower exponent-`p` series of `A`, `B` and `C` for classes
/// `1..=max_class`.
pub fn check_split_filtration(seq: &SplitSequence, p: u32, max_class: u32, limit: u128) -> Result<FiltrationComparison> {
    let qa = series(&seq.kernel, p, max_class, limit)?;
    let qb = series(&seq.total, p, max_class, limit)?;
    let qc = series(&seq.quotient, p, max_class, limit)?;
    let mut classes = Vec::new();
    for c in 0..max_class as usize {
        let (a, b, q) = (&qa[c], &qb[c], &qc[c]);
        let lam = b.induced_images(q, |x| q.image(&seq.project(&seq.total.generators[x].word())?))?;
        let inc = a.induced_images(b, |x| b.image(&seq.include(&seq.kernel.generators[x].word())?))?;
        let mut weights_ok = true;
        let mut layers_ok = true;
        let mut inclusion_ok = true;
        for k in 1..=c as u32 + 1 {
            let of_weight = |qq: &PQuotient, imgs: &[Exp]| -> Vec<Exp> {
                (0..qq.len()).filter(|&i| qq.weights()[i] == k).map(|i| imgs[i].clone()).collect()
            };
            let lam_k = of_weight(b, &lam);
            if lam_k.iter().any(|e| q.weight(e).is_some_and(|w| w < k)) {
                weights_ok = false;
            }
            if layer_rank(q, &lam_k, k) != q.rank(k) {
                layers_ok = false;
            }
            let inc_k = of_weight(a, &inc);
            if inc_k.iter().any(|e| b.weight(e).is_some_and(|w| w < k)) || layer_rank(b, &inc_k, k) != a.rank(k) {
                inclusion_ok = false;
            }
        }
        classes.push(ClassComparison {
            class: c as u32 + 1,
            kernel_log: a.order_log(),
            total_log: b.order_log(),
            quotient_log: q.order_log(),
            multiplicative: b.order_log() == a.order_log() + q.order_log(),
            projection_weights: weights_ok,
            projection_layers: layers_ok,
            inclusion_layers: inclusion_ok,
        });
    }
    Ok(FiltrationComparison { p, classes })
}

/// A random element of `P_k` of the group generated by `gens`, as a word.
pub fn random_filtration_element(rng: &mut ChaCha8Rng, gens: &[Generator], k: u32, p: u32) -> Word {
    let random_word = |rng: &mut ChaCha8Rng| {
        let len = rng.gen_range(1..=3);
        Word::from_letters((0..len).map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], inverse: rng.gen_bool(0.5) }))
    };
    if k <= 1 {
        return random_word(rng);
    }
    let inner = random_filtration_element(rng, gens, k - 1, p);
    if rng.gen_bool(0.3) {
        inner.pow(p as i64)
    } else {
        let other = random_word(rng);
        if rng.gen_bool(0.5) {
            Word::commutator(&inner, &other)
        } else {
            Word::commutator(&other, &inner)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub samples: usize,
    /// `(u, v)` pairs whose commutator escaped `P_{m+n}(A)`.
    pub failures: Vec<(Word, Word)>,
}

/// Samples `u` in `P_m(C)` and `v` in `P_n(A)` and checks that
/// `[s(u), v]` lies in `P_{m+n}(A)`.
pub fn lemma_fr_sample(
    seq: &SplitSequence,
    p: u32,
    m: u32,
    n: u32,
    samples: usize,
    seed: u64,
    limit: u128,
) -> Result<SampleReport> {
    if m == 0 || n == 0 {
        return Err(Error::Unsupported("filtration degrees start at 1".to_string()));
    }
    let q = PQuotient::new(&seq.kernel, p, m + n - 1, limit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..samples {
        let u = random_filtration_element(&mut rng, &seq.quotient.generators, m, p);
        let v = random_filtration_element(&mut rng, &seq.kernel.generators, n, p);
        let x = Word::commutator(&seq.lift(&u)?, &seq.include(&v)?);
        let a = seq.to_kernel(&x)?;
        if q.image(&a)?.iter().any(|&e| e != 0) {
            failures.push((u, v));
        }
    }
    Ok(SampleReport { samples, failures })
}

/// Result of [`witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessVerdict {
    /// The first class with a nontrivial image, and that image.
    Found { class: u32, image: String },
    /// The image is trivial in every class up to the bound.
    Exhausted { max_class: u32 },
}

/// Finds the least `c` such that `w` survives in `G / P_{c+1}(G)`.
pub fn witness(spec: GroupSpec, w: &Word, p: u32, max_class: u32, limit: u128) -> Result<WitnessVerdict> {
    let solver = Solver::new(spec)?;
    if solver.is_trivial(w)? {
        return Err(Error::TrivialInput);
    }
    let pres = Presentation::of(spec)?;
    let mut q: Option<PQuotient> = None;
    for c in 1..=max_class {
        let next = match &q {
            None => PQuotient::class_one(&pres, p, limit)?,
            Some(prev) => prev.next_class()?,
        };
        let img = next.image(w)?;
        if img.iter().any(|&e| e != 0) {
            return Ok(WitnessVerdict::Found { class: c, image: next.format(&img) });
        }
        q = Some(next);
    }
    Ok(WitnessVerdict::Exhausted { max_class })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pquotient::DEFAULT_ORDER_LIMIT;

    #[test]
    fn klein_section_and_action() {
        let k = SplitSequence::klein();
        assert!(check_section(&k).unwrap().holds);
        assert!(check_p_almost_direct(&k, 2).unwrap().holds);
        let r3 = check_p_almost_direct(&k, 3).unwrap();
        assert!(!r3.holds);
        assert!(r3.counterexample.is_some());
    }

    #[test]
    fn direct_product_filtration() {
        let d = SplitSequence::direct_product();
        assert!(check_section(&d).unwrap().holds);
        for p in [2, 3] {
            assert!(check_p_almost_direct(&d, p).unwrap().holds);
            assert!(check_split_filtration(&d, p, 4, DEFAULT_ORDER_LIMIT).unwrap().holds());
        }
    }

    #[test]
    fn corrupted_section_fails() {
        let s = SplitSequence::closed_braid(2, 2).unwrap();
        assert!(check_section(&s).unwrap().holds);
        let bad = s.with_section_image(Generator::P(1), &s.section[0].1 * &Generator::Rho(1, 1).word());
        assert!(!check_section(&bad).unwrap().holds);
    }

    #[test]
    fn closed_form_section_needs_genus_three() {
        use crate::presentations::stated_section_images;
        let s = SplitSequence::closed_braid(2, 2).unwrap();
        let stated = s.with_section(stated_section_images(2, 2));
        let report = check_section(&stated).unwrap();
        assert!(!report.holds);
        let s3 = SplitSequence::closed_braid(3, 2).unwrap();
        assert!(check_section(&s3.with_section(stated_section_images(3, 2))).unwrap().holds);
    }

    #[test]
    fn witness_levels() {
        let spec = GroupSpec::closed(2, 2).unwrap();
        let b12 = Generator::B(1, 2).word();
        let found = witness(spec, &b12, 2, 4, DEFAULT_ORDER_LIMIT).unwrap();
        assert!(matches!(found, WitnessVerdict::Found { class, .. } if class >= 2), "{:?}", found);
        let r = Generator::Rho(1, 1).word();
        assert!(matches!(witness(spec, &r, 2, 4, DEFAULT_ORDER_LIMIT).unwrap(), WitnessVerdict::Found { class: 1, .. }));
        assert_eq!(witness(spec, &Word::identity(), 2, 4, DEFAULT_ORDER_LIMIT), Err(Error::TrivialInput));
    }
}
