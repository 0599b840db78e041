//! Acceptance battery: one line per criterion, nonzero exit on any failure.
//! A criterion that cannot hold as stated is reported as UNATTAINABLE
//! together with the evidence, and does not fail the run.

use std::process::ExitCode;
use std::time::Instant;

use nbraid::suites;
use nbraid_core::combing::{BorderedComber, ClosedSolver};
use nbraid_core::padp::{check_section, check_split_filtration, witness, SplitSequence, WitnessVerdict};
use nbraid_core::pquotient::{filtration, h1_dimension, PQuotient, DEFAULT_ORDER_LIMIT};
use nbraid_core::presentations::{stated_section_images, surface_relator};
use nbraid_core::{Generator, GroupSpec, Letter, Presentation, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Verdict);

enum Verdict {
    Pass(String),
    Fail(String),
    Unattainable(String),
}

fn all_pass(checks: &[nbraid::report::Check]) -> Result<usize, String> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(format!("{}: {}", c.name, c.detail)),
        None => Ok(checks.len()),
    }
}

fn criterion_identities() -> Verdict {
    let start = Instant::now();
    let grid = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];
    let checks = suites::identities(&grid);
    let secs = start.elapsed().as_secs_f64();
    match all_pass(&checks) {
        Err(e) => Verdict::Fail(e),
        Ok(_) if secs >= 60.0 => Verdict::Fail(format!("took {:.1} s", secs)),
        Ok(_) => {
            let f1: Vec<&str> = checks.iter().map(|c| c.detail.as_str()).collect();
            Verdict::Pass(format!("{} groups in {:.2} s; {}", grid.len(), secs, f1.join("; ")))
        }
    }
}

fn criterion_sections() -> Verdict {
    let mut notes = Vec::new();
    let mut unattainable = Vec::new();
    for g in [2u16, 3, 4] {
        for n in [2u16, 3] {
            let seq = match SplitSequence::closed_braid(g, n) {
                Ok(s) => s,
                Err(e) => return Verdict::Fail(e.to_string()),
            };
            let stated = seq.with_section(stated_section_images(g, n));
            let report = match check_section(&stated) {
                Ok(r) => r,
                Err(e) => return Verdict::Fail(e.to_string()),
            };
            if report.holds {
                continue;
            }
            if g >= 3 {
                return Verdict::Fail(format!("g={} n={}: {:?}", g, n, report.failures));
            }
            // Certify the failure independently of the combing solver.
            let image = stated.lift(&surface_relator(g)).expect("section covers generators");
            let spec = GroupSpec::closed(g, n).expect("valid");
            match witness(spec, &image, 2, 3, DEFAULT_ORDER_LIMIT) {
                Ok(WitnessVerdict::Found { class, .. }) => {
                    unattainable.push(format!("g=2 n={} (relation image survives at class {})", n, class))
                }
                other => return Verdict::Fail(format!("g=2 n={}: unconfirmed failure {:?}", n, other)),
            }
            match check_section(&seq) {
                Ok(r) if r.holds => notes.push(format!("parallel section holds at g=2 n={}", n)),
                other => return Verdict::Fail(format!("g=2 n={}: replacement section fails {:?}", n, other)),
            }
        }
    }
    if unattainable.is_empty() {
        Verdict::Pass("closed-form section holds on the whole grid".into())
    } else {
        Verdict::Unattainable(format!(
            "closed-form assignment breaks the surface relation at {}; holds for g=3,4; {}",
            unattainable.join(", "),
            notes.join(", ")
        ))
    }
}

fn criterion_almost_direct() -> Verdict {
    let grid = [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)];
    match all_pass(&suites::almost_direct(&grid, 1, 5)) {
        Ok(n) => Verdict::Pass(format!("{} checks incl. 5 perturbations per group and the p=3 control", n)),
        Err(e) => Verdict::Fail(e),
    }
}

/// Brute-force lower exponent-2 series of (Z/16) x| (Z/16), b -> b^-1,
/// returning the orders of the successive quotients.
fn semidirect_oracle_orders(classes: usize) -> Vec<usize> {
    let mul = |x: (i64, i64), y: (i64, i64)| {
        let s = if x.1 % 2 == 0 { 1 } else { -1 };
        ((x.0 + s * y.0).rem_euclid(16), (x.1 + y.1).rem_euclid(16))
    };
    let inv = |x: (i64, i64)| {
        let s = if x.1 % 2 == 0 { 1 } else { -1 };
        ((-s * x.0).rem_euclid(16), (-x.1).rem_euclid(16))
    };
    let all: Vec<(i64, i64)> = (0..16).flat_map(|b| (0..16).map(move |a| (b, a))).collect();
    let closure = |gens: &[(i64, i64)]| {
        let mut set = std::collections::BTreeSet::new();
        set.insert((0, 0));
        let mut frontier = vec![(0, 0)];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    };
    let mut current = all.clone();
    let mut orders = Vec::new();
    for _ in 0..classes {
        let mut gens = Vec::new();
        for &x in &current {
            gens.push(mul(x, x));
            for &g in &all {
                gens.push(mul(mul(inv(x), inv(g)), mul(x, g)));
            }
        }
        let next: Vec<(i64, i64)> = closure(&gens).into_iter().collect();
        orders.push(all.len() / next.len());
        current = next;
    }
    orders
}

fn orders(spec: &str, classes: u32) -> Result<Vec<String>, String> {
    let p = Presentation::of(spec.parse().map_err(|e| format!("{}", e))?).map_err(|e| e.to_string())?;
    filtration(&p, 2, classes, DEFAULT_ORDER_LIMIT).map(|r| r.orders_decimal()).map_err(|e| e.to_string())
}

fn criterion_filtration() -> Verdict {
    let oracle: Vec<String> = semidirect_oracle_orders(2).iter().map(usize::to_string).collect();
    let expectations: Vec<(&str, u32, Vec<String>)> = vec![
        ("free:rank=1", 3, vec!["2".into(), "4".into(), "8".into()]),
        ("free:rank=2", 2, vec!["4".into(), "32".into()]),
        ("surface:g=2", 2, oracle.clone()),
    ];
    if oracle != ["4", "16"] {
        return Verdict::Fail(format!("oracle gave {:?}", oracle));
    }
    for (spec, classes, want) in &expectations {
        match orders(spec, *classes) {
            Ok(got) if got == *want => {}
            other => return Verdict::Fail(format!("{}: {:?}, expected {:?}", spec, other, want)),
        }
    }
    for g in 2..=6u16 {
        let p = Presentation::of(GroupSpec::surface(g).expect("valid")).expect("valid");
        if h1_dimension(&p, 2).ok() != Some(g as usize) {
            return Verdict::Fail(format!("H1 of surface:g={}", g));
        }
    }
    let p22 = Presentation::of(GroupSpec::closed(2, 2).expect("valid")).expect("valid");
    if h1_dimension(&p22, 2).ok() != Some(4) {
        return Verdict::Fail("H1 of closed:g=2,n=2".into());
    }
    Verdict::Pass("Z: 2,4,8; F2 class 2: 32; Klein: 4,16 (matches (Z/16)x|(Z/16)); H1 dims g and 4".into())
}

fn criterion_multiplicativity() -> Verdict {
    let cases = [("klein", SplitSequence::klein(), 3), ("closed:g=2,n=2", SplitSequence::closed_braid(2, 2).expect("valid"), 2)];
    let mut notes = Vec::new();
    for (label, seq, classes) in cases {
        match check_split_filtration(&seq, 2, classes, DEFAULT_ORDER_LIMIT) {
            Ok(cmp) if cmp.holds() => {
                let logs: Vec<String> =
                    cmp.classes.iter().map(|c| format!("{}={}+{}", c.total_log, c.kernel_log, c.quotient_log)).collect();
                notes.push(format!("{} [{}]", label, logs.join(", ")));
            }
            other => return Verdict::Fail(format!("{}: {:?}", label, other)),
        }
    }
    Verdict::Pass(format!("log2 orders {}", notes.join("; ")))
}

fn criterion_witness() -> Verdict {
    let spec = GroupSpec::closed(2, 2).expect("valid");
    let b12 = Generator::B(1, 2).word();
    let first = witness(spec, &b12, 2, 4, DEFAULT_ORDER_LIMIT);
    let second = witness(spec, &b12, 2, 4, DEFAULT_ORDER_LIMIT);
    let class = match (&first, &second) {
        (Ok(WitnessVerdict::Found { class: c1, .. }), Ok(WitnessVerdict::Found { class: c2, .. })) if c1 == c2 => *c1,
        _ => return Verdict::Fail(format!("B[1,2]: {:?} / {:?}", first, second)),
    };
    if class < 2 {
        return Verdict::Fail(format!("B[1,2] already visible at class {}", class));
    }
    match witness(spec, &Generator::Rho(1, 1).word(), 2, 4, DEFAULT_ORDER_LIMIT) {
        Ok(WitnessVerdict::Found { class: 1, .. }) => {}
        other => return Verdict::Fail(format!("r[1,1]: {:?}", other)),
    }
    Verdict::Pass(format!("B[1,2] first survives at class {} (stable), r[1,1] at class 1", class))
}

fn criterion_augmentation() -> Verdict {
    match all_pass(&suites::augmentation(1, 100, DEFAULT_ORDER_LIMIT)) {
        Ok(_) => Verdict::Pass("Z/4 dims 3,2,1,0; Klein class 2 and (Z/4)^2 decompose for k<=3; 200 certificates".into()),
        Err(e) => Verdict::Fail(e),
    }
}

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], len: usize) -> Word {
    Word::from_letters((0..len).map(|_| Letter { gen: gens[rng.gen_range(0..gens.len())], inverse: rng.gen_bool(0.5) }))
}

fn with_relator(rng: &mut ChaCha8Rng, w: &Word, pres: &Presentation) -> Word {
    let r = &pres.relators[rng.gen_range(0..pres.relators.len())].word;
    let len = rng.gen_range(0..5);
    let c = random_word(rng, &pres.generators, len);
    let pos = rng.gen_range(0..=w.len());
    let head = Word::from_letters(w.letters()[..pos].iter().copied());
    let tail = Word::from_letters(w.letters()[pos..].iter().copied());
    &(&head * &r.conjugate_by(&c)) * &tail
}

fn combing_soundness(spec: &str, rng: &mut ChaCha8Rng) -> Result<String, String> {
    let spec: GroupSpec = spec.parse().map_err(|e| format!("{}", e))?;
    let pres = Presentation::of(spec).map_err(|e| e.to_string())?;
    let q = PQuotient::new(&pres, 2, 2, u128::MAX).map_err(|e| e.to_string())?;
    let closed = match spec {
        GroupSpec::ClosedBraid { g, n } => Some(ClosedSolver::new(g, n).map_err(|e| e.to_string())?),
        _ => None,
    };
    let comber = match spec {
        GroupSpec::BorderedBraid { .. } => Some(BorderedComber::new(spec).map_err(|e| e.to_string())?),
        _ => None,
    };
    let trivial = |w: &Word| -> Result<bool, String> {
        match (&closed, &comber) {
            (Some(s), _) => s.is_trivial(w),
            (_, Some(c)) => c.is_trivial(w),
            _ => unreachable!(),
        }
        .map_err(|e| e.to_string())
    };
    for r in &pres.relators {
        if !trivial(&r.word)? {
            return Err(format!("relator {} is not trivial", r.word));
        }
    }
    let mut trivial_count = 0;
    for i in 0..200 {
        let len = rng.gen_range(0..16);
        let mut w = random_word(rng, &pres.generators, len);
        if i % 2 == 1 {
            // Half the samples are products of conjugated relators.
            w = Word::identity();
            for _ in 0..3 {
                w = with_relator(rng, &w, &pres);
            }
        }
        let v = with_relator(rng, &w, &pres);
        if let Some(c) = &comber {
            let (fw, fv) = (c.comb(&w).map_err(|e| e.to_string())?, c.comb(&v).map_err(|e| e.to_string())?);
            if fw != fv {
                return Err(format!("relator insertion changed the normal form of {}", w));
            }
            if c.comb(&fw.to_word()).map_err(|e| e.to_string())? != fw {
                return Err(format!("combing {} is not idempotent", w));
            }
        }
        let (tw, tv) = (trivial(&w)?, trivial(&v)?);
        if tw != tv {
            return Err(format!("relator insertion changed the verdict on {}", w));
        }
        let image_trivial = q.image(&w).map_err(|e| e.to_string())? == q.identity();
        if tw && !image_trivial {
            return Err(format!("{} is trivial but has a nontrivial 2-quotient image", w));
        }
        if i % 2 == 1 && !tw {
            return Err(format!("product of relators {} judged nontrivial", w));
        }
        trivial_count += usize::from(tw);
    }
    Ok(format!("{}: 200 words, {} trivial", spec, trivial_count))
}

fn criterion_combing() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut notes = Vec::new();
    for spec in ["bordered:g=2,b=1,n=2", "bordered:g=2,b=1,n=3", "closed:g=2,n=2"] {
        match combing_soundness(spec, &mut rng) {
            Ok(s) => notes.push(s),
            Err(e) => return Verdict::Fail(format!("{}: {}", spec, e)),
        }
    }
    Verdict::Pass(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("commutation identities", criterion_identities),
        ("section relation and retraction", criterion_sections),
        ("2-almost-direct action", criterion_almost_direct),
        ("filtration orders and H1", criterion_filtration),
        ("order multiplicativity", criterion_multiplicativity),
        ("residual 2-finiteness witnesses", criterion_witness),
        ("augmentation ideal decomposition", criterion_augmentation),
        ("combing soundness", criterion_combing),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let ms = start.elapsed().as_millis();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Unattainable(d) => ("UNATTAINABLE", d),
        };
        println!("criterion {} {} {}: {} ({} ms)", i + 1, tag, title, detail, ms);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", failed);
        ExitCode::FAILURE
    }
}
