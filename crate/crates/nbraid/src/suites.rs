//! Curated verification batteries over small grids of surfaces and strands.

use nbraid_core::groupring::{
    aug_dims, check_decomposition, random_special, special_reduce, FiniteGroup, SemidirectQuotient,
};
use nbraid_core::padp::{
    check_p_almost_direct, check_section, check_split_filtration, witness, SplitSequence, WitnessVerdict,
};
use nbraid_core::presentations::{commutation_identities, stated_section_images, surface_relator};
use nbraid_core::{combing::Solver, Generator, GroupSpec, Letter, Result, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{timed, Check};

pub const SUITES: [&str; 5] = ["lemma42", "prop42", "prop43", "thm33", "thm-aug"];

/// `(g, n)` pairs used by the identity battery.
pub const IDENTITY_GRID: [(u16, u16); 6] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];
/// `(g, n)` pairs used by the section and almost-direct batteries.
pub const SECTION_GRID: [(u16, u16); 6] = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the deepest class of the Klein bottle filtration check.
    pub max_class: Option<u32>,
    pub limit: u128,
}

pub fn run(name: &str, cfg: &SuiteConfig) -> Option<Vec<Check>> {
    Some(match name {
        "lemma42" => identities(&IDENTITY_GRID),
        "prop42" => sections(&SECTION_GRID, cfg.limit),
        "prop43" => almost_direct(&SECTION_GRID, cfg.seed, 5),
        "thm33" => split_filtration(cfg.max_class.unwrap_or(3), 2, cfg.limit),
        "thm-aug" => augmentation(cfg.seed, 100, cfg.limit),
        _ => return None,
    })
}

fn or_error(name: String, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::error(name, e))
}

/// Every commutation identity is trivial in `P_n(N_g)`.
pub fn identities(grid: &[(u16, u16)]) -> Vec<Check> {
    grid.iter()
        .map(|&(g, n)| {
            let name = format!("identities closed:g={},n={}", g, n);
            timed(|| {
                or_error(name.clone(), || {
                    let solver = Solver::new(GroupSpec::closed(g, n)?)?;
                    let ids = commutation_identities(g, n)?;
                    let f1 = ids.iter().filter(|id| id.label.starts_with("f1")).count();
                    for id in &ids {
                        if !solver.is_trivial(&id.word)? {
                            return Ok(Check::new(name.clone(), false, format!("{} is not trivial", id.label))
                                .with_counterexample(id.word.to_string()));
                        }
                    }
                    Ok(Check::new(name.clone(), true, format!("{} identities trivial, {} of type f1", ids.len(), f1)))
                })
            })
        })
        .collect()
}

/// The default section is a section; the closed-form assignment is one for
/// `g >= 3` and breaks the surface relation for `g = 2`.
pub fn sections(grid: &[(u16, u16)], limit: u128) -> Vec<Check> {
    let mut out = Vec::new();
    for &(g, n) in grid {
        let name = format!("section closed:g={},n={}", g, n);
        out.push(timed(|| {
            or_error(name.clone(), || {
                let seq = SplitSequence::closed_braid(g, n)?;
                let report = check_section(&seq)?;
                let images: Vec<String> = seq.section.iter().map(|(c, w)| format!("{} -> {}", c, w)).collect();
                let check = Check::new(name.clone(), report.holds, images.join(", "));
                Ok(match report.failures.first() {
                    Some(f) => check.with_counterexample(f.clone()),
                    None => check,
                })
            })
        }));
        let name = format!("closed-form assignment closed:g={},n={}", g, n);
        out.push(timed(|| {
            or_error(name.clone(), || {
                let seq = SplitSequence::closed_braid(g, n)?;
                let stated = seq.with_section(stated_section_images(g, n));
                let holds = check_section(&stated)?.holds;
                if g >= 3 {
                    return Ok(Check::new(name.clone(), holds, "is a section"));
                }
                // Expected to fail: certify with a finite quotient.
                let image = stated.lift(&surface_relator(g))?;
                let verdict = witness(GroupSpec::closed(g, n)?, &image, 2, 3, limit)?;
                Ok(match verdict {
                    WitnessVerdict::Found { class, image: img } => Check::new(
                        name.clone(),
                        !holds,
                        format!("violates the surface relation; the relator image survives at class {} as {}", class, img),
                    ),
                    WitnessVerdict::Exhausted { max_class } => Check::new(
                        name.clone(),
                        false,
                        format!("relator image trivial up to class {}", max_class),
                    ),
                })
            })
        }));
    }
    out
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], inverse: rng.gen_bool(0.5) }))
}

/// Triviality of the action on `H_1(A; F_2)`, its independence of the
/// section, and the Klein bottle as a negative control at `p = 3`.
pub fn almost_direct(grid: &[(u16, u16)], seed: u64, perturbations: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &(g, n) in grid {
        let name = format!("2-almost-direct closed:g={},n={}", g, n);
        out.push(timed(|| {
            or_error(name.clone(), || {
                let seq = SplitSequence::closed_braid(g, n)?;
                let r = check_p_almost_direct(&seq, 2)?;
                let c = Check::new(name.clone(), r.holds, format!("dim H1(A;F2) = {}", r.h1_dimension));
                Ok(match r.counterexample {
                    Some(ce) => c.with_counterexample(format!("{:?}", ce)),
                    None => c,
                })
            })
        }));
        let name = format!("perturbed sections closed:g={},n={}", g, n);
        let mut check = || -> Result<Check> {
            let seq = SplitSequence::closed_braid(g, n)?;
            for _ in 0..perturbations {
                let len = rng.gen_range(1..=6);
                let x = random_word(&mut rng, &seq.kernel.generators, len);
                let moved = seq.conjugate_section(&x)?;
                if !check_section(&moved)?.holds || !check_p_almost_direct(&moved, 2)?.holds {
                    return Ok(Check::new(name.clone(), false, "perturbed section breaks the action").with_counterexample(x.to_string()));
                }
            }
            Ok(Check::new(name.clone(), true, format!("{} conjugated sections agree", perturbations)))
        };
        let start = std::time::Instant::now();
        let mut c = check().unwrap_or_else(|e| Check::error(name.clone(), e));
        c.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        out.push(c);
    }
    let klein = SplitSequence::klein();
    out.push(timed(|| {
        or_error("2-almost-direct klein".into(), || {
            let r = check_p_almost_direct(&klein, 2)?;
            Ok(Check::new("2-almost-direct klein", r.holds, "b -> b^-1 is trivial mod 2"))
        })
    }));
    out.push(timed(|| {
        or_error("negative control klein p=3".into(), || {
            let r = check_p_almost_direct(&klein, 3)?;
            Ok(Check::new("negative control klein p=3", !r.holds, "b -> b^-1 acts as -1 on H1(A;F3)"))
        })
    }));
    out
}

/// `|B/P_c| = |A/P_c| |C/P_c|` and the layer checks, for the Klein bottle
/// up to `klein_class` and for `P_2(N_2)` up to `braid_class`.
pub fn split_filtration(klein_class: u32, braid_class: u32, limit: u128) -> Vec<Check> {
    let cases: Vec<(String, Result<SplitSequence>, u32)> = vec![
        ("klein".into(), Ok(SplitSequence::klein()), klein_class),
        ("closed:g=2,n=2".into(), SplitSequence::closed_braid(2, 2), braid_class),
    ];
    cases
        .into_iter()
        .map(|(label, seq, max_class)| {
            let name = format!("split filtration {} classes 1..{}", label, max_class);
            timed(|| {
                or_error(name.clone(), || {
                    let cmp = check_split_filtration(&seq?, 2, max_class, limit)?;
                    let logs: Vec<String> = cmp
                        .classes
                        .iter()
                        .map(|c| format!("2^{} = 2^{} * 2^{}", c.total_log, c.kernel_log, c.quotient_log))
                        .collect();
                    Ok(Check::new(name.clone(), cmp.holds(), logs.join("; ")))
                })
            })
        })
        .collect()
}

/// Augmentation powers, their decomposition over `A x| C`, and special
/// element certificates.
pub fn augmentation(seed: u64, samples: usize, limit: u128) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(timed(|| {
        or_error("augmentation dims Z/4".into(), || {
            let dims = aug_dims(&FiniteGroup::cyclic(4)?, 4);
            Ok(Check::new("augmentation dims Z/4", dims == [3, 2, 1, 0], format!("{:?}", dims)))
        })
    }));
    let cases: Vec<(&str, Result<SemidirectQuotient>)> = vec![
        ("klein class 2", SemidirectQuotient::from_split(&SplitSequence::klein(), 2, limit)),
        ("Z/4 x Z/4", FiniteGroup::cyclic(4).and_then(|z| SemidirectQuotient::direct(&z, &z))),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (label, sq) in cases {
        let sq = match sq {
            Ok(sq) => sq,
            Err(e) => {
                out.push(Check::error(format!("decomposition {}", label), e));
                continue;
            }
        };
        let name = format!("decomposition {} k<=3", label);
        out.push(timed(|| {
            or_error(name.clone(), || {
                let r = check_decomposition(&sq, 3)?;
                Ok(Check::new(
                    name.clone(),
                    r.holds,
                    format!("|Q| = {}, dims {:?}, sum dims {:?}", sq.group().order(), r.dims, r.rhs_dims),
                ))
            })
        }));
        let name = format!("certificates {}", label);
        let start = std::time::Instant::now();
        let mut check = || -> Result<Check> {
            let mut terms = 0;
            for _ in 0..samples {
                let e = random_special(&sq, &mut rng, 4);
                let cert = special_reduce(&sq, &e)?;
                let q = sq.group();
                if cert.evaluate(q) != e.evaluate(q) {
                    return Ok(Check::new(name.clone(), false, "certificate does not evaluate to its input")
                        .with_counterexample(format!("{:?}", e.factors)));
                }
                terms += cert.terms.len();
            }
            Ok(Check::new(name.clone(), true, format!("{} special elements, {} standard terms", samples, terms)))
        };
        let mut c = check().unwrap_or_else(|e| Check::error(name.clone(), e));
        c.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        out.push(c);
    }
    out
}
