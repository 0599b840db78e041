//! The `nbraid` command line.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{debug, info};
use nbraid_core::combing::{BorderedComber, Solver};
use nbraid_core::groupring::{
    random_special, special_reduce, DecompositionCertificate, SemidirectQuotient, SpecialElement, Tag,
};
use nbraid_core::padp::{
    check_p_almost_direct, check_section, check_split_filtration, witness, SplitSequence, WitnessVerdict,
};
use nbraid_core::pquotient::{h1_dimension, series, DEFAULT_ORDER_LIMIT};
use nbraid_core::{groupring, parse_word, Error, GroupSpec, Presentation, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::formats::{CombDoc, PqDoc, PresentationDoc};
use crate::report::{Check, Report};
use crate::suites::{self, SuiteConfig};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "nbraid", version, about = "Pure braid groups of non-orientable surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Deepest filtration class to explore.
    #[arg(long, global = true)]
    pub max_class: Option<u32>,
    /// Largest p-quotient order allowed before giving up.
    #[arg(long, global = true)]
    pub limit_order: Option<u128>,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Closed,
    Bordered,
    Surface,
    Free,
}

/// Either `--group SPEC` or `--family` with its parameters.
#[derive(Debug, Args)]
pub struct GroupArgs {
    /// `closed:g=G,n=N`, `bordered:g=G,b=B,n=N`, `surface:g=G` or `free:rank=R`.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long, value_enum, conflicts_with = "group")]
    pub family: Option<FamilyArg>,
    #[arg(long = "g")]
    pub genus: Option<u16>,
    #[arg(long = "b")]
    pub boundary: Option<u16>,
    #[arg(long = "n")]
    pub strands: Option<u16>,
    #[arg(long)]
    pub rank: Option<u16>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckKind {
    /// The section is a section.
    Section,
    /// The action on `H_1(A; F_p)` is trivial.
    Padp,
    /// The filtration orders multiply across the extension.
    Lcs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the standard presentation.
    Present(GroupArgs),
    /// Comb a word of a bordered braid group into its normal form.
    Comb {
        #[command(flatten)]
        group: GroupArgs,
        word: Option<String>,
        #[arg(long = "word", conflicts_with = "word")]
        word_flag: Option<String>,
    },
    /// Decide whether two words are equal.
    Equal {
        #[command(flatten)]
        group: GroupArgs,
        left: String,
        right: String,
    },
    /// Lower exponent-p central quotients.
    Pq {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value_t = 2)]
        class: u32,
    },
    /// Dimension of `H_1(G; F_p)`.
    H1 {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Find the first filtration quotient in which a word survives.
    Witness {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Check a property of the split extension attached to a group.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        class: Option<u32>,
    },
    /// Augmentation ideal powers of a finite quotient and their decomposition.
    Aug {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        class: u32,
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// Number of random special elements to reduce and export.
        #[arg(long, default_value_t = 0)]
        certificates: usize,
    },
    /// Run a named verification battery.
    Suite {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(suites::SUITES))]
        name: String,
    },
}

impl GroupArgs {
    pub fn resolve(&self) -> Result<GroupSpec, Error> {
        if let Some(s) = &self.group {
            return s.parse();
        }
        let need = |v: Option<u16>, what: &str| v.ok_or_else(|| Error::Unsupported(format!("missing --{}", what)));
        match self.family {
            Some(FamilyArg::Closed) => GroupSpec::closed(need(self.genus, "g")?, need(self.strands, "n")?),
            Some(FamilyArg::Bordered) => {
                GroupSpec::bordered(need(self.genus, "g")?, need(self.boundary, "b")?, need(self.strands, "n")?)
            }
            Some(FamilyArg::Surface) => GroupSpec::surface(need(self.genus, "g")?),
            Some(FamilyArg::Free) => Ok(GroupSpec::free(need(self.rank, "rank")?)),
            None => Err(Error::Unsupported("give --group or --family".into())),
        }
    }
}

/// Result of a command: text and JSON renderings plus a verdict.
struct Output {
    text: String,
    json: serde_json::Value,
    passed: bool,
}

impl Output {
    fn new(text: String, json: serde_json::Value, passed: bool) -> Output {
        Output { text, json, passed }
    }

    fn report(r: Report) -> Output {
        let json = serde_json::to_value(&r).expect("serializable");
        Output { text: r.to_string(), passed: r.passed, json }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) => EXIT_RESOURCE,
        Error::Syntax { .. } | Error::Unsupported(_) | Error::UnknownGenerator(_) | Error::PreconditionFailed(_) => {
            EXIT_USAGE
        }
        _ => EXIT_FAILED,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::MissingImage(_) => "missing_image",
        Error::Unsupported(_) => "unsupported",
        Error::UnknownGenerator(_) => "unknown_generator",
        Error::NoAction(_) => "no_action",
        Error::NotInvertible => "not_invertible",
        Error::RewriteFailure(_) => "rewrite_failure",
        Error::ResourceLimit(_) => "resource_limit",
        Error::TrivialInput => "trivial_input",
        Error::SearchFailure(_) => "search_failure",
        Error::PreconditionFailed(_) => "precondition_failed",
    }
}

fn word_in(pres: &Presentation, text: &str) -> Result<Word, Error> {
    let w = parse_word(text)?;
    pres.check_word(&w)?;
    Ok(w)
}

/// Parses arguments, runs the command, prints the result and returns the
/// process exit code.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("NBRAID_LOG")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    ExitCode::from(run(&cli))
}

/// Runs a parsed command line, printing to stdout and stderr.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(out) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.json {
                writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable"))
            } else {
                writeln!(stdout, "{}", out.text)
            };
            if out.passed {
                EXIT_PASS
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            if cli.json {
                let doc = json!({ "error": { "kind": error_kind(&e), "message": e.to_string() } });
                let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
            eprintln!("nbraid: {}", e);
            exit_code_for(&e)
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let limit = cli.limit_order.unwrap_or(DEFAULT_ORDER_LIMIT);
    debug!("command {:?}", cli.command);
    match &cli.command {
        Command::Present(g) => {
            let spec = g.resolve()?;
            let doc = PresentationDoc::new(&Presentation::of(spec)?);
            let text = format!(
                "{}\ngenerators: {}\nrelators ({}):\n{}",
                doc.spec,
                doc.generators.join(" "),
                doc.relators.len(),
                doc.relators.iter().map(|r| format!("  {}", r)).collect::<Vec<_>>().join("\n")
            );
            Ok(Output::new(text, to_json(&doc), true))
        }
        Command::Comb { group, word, word_flag } => {
            let spec = group.resolve()?;
            let text = word.as_ref().or(word_flag.as_ref()).ok_or_else(|| Error::Unsupported("missing word".into()))?;
            let w = word_in(&Presentation::of(spec)?, text)?;
            let form = BorderedComber::new(spec)?.comb(&w)?;
            let doc = CombDoc::new(spec, &form);
            let lines: Vec<String> = doc.levels.iter().enumerate().map(|(i, l)| format!("level {}: {}", i, l)).collect();
            Ok(Output::new(lines.join("\n"), to_json(&doc), true))
        }
        Command::Equal { group, left, right } => {
            let spec = group.resolve()?;
            let pres = Presentation::of(spec)?;
            let (u, v) = (word_in(&pres, left)?, word_in(&pres, right)?);
            let equal = Solver::new(spec)?.equal(&u, &v)?;
            let doc = json!({ "group": spec.to_string(), "left": u.to_string(), "right": v.to_string(), "equal": equal });
            Ok(Output::new(if equal { "equal" } else { "not equal" }.to_string(), doc, equal))
        }
        Command::Pq { group, p, class } => {
            let spec = group.resolve()?;
            info!("computing the class-{} {}-quotient of {}", class, p, spec);
            let qs = series(&Presentation::of(spec)?, *p, *class, limit)?;
            let doc = PqDoc::new(&spec.to_string(), &qs);
            let mut text: Vec<String> = qs
                .iter()
                .enumerate()
                .map(|(i, q)| format!("class {}: order {}^{} = {}, rank {}", i + 1, p, q.order_log(), q.order_decimal(), q.rank(i as u32 + 1)))
                .collect();
            text.extend(doc.images.iter().map(|(g, img)| format!("  {} -> {}", g, img)));
            Ok(Output::new(text.join("\n"), to_json(&doc), true))
        }
        Command::H1 { group, p } => {
            let spec = group.resolve()?;
            let d = h1_dimension(&Presentation::of(spec)?, *p)?;
            let doc = json!({ "group": spec.to_string(), "p": p, "dim": d });
            Ok(Output::new(format!("dim H1({}; F_{}) = {}", spec, p, d), doc, true))
        }
        Command::Witness { group, word, p } => {
            let spec = group.resolve()?;
            let w = word_in(&Presentation::of(spec)?, word)?;
            let max_class = cli.max_class.unwrap_or(4);
            let base = json!({ "group": spec.to_string(), "word": w.to_string(), "p": p, "max_class": max_class });
            match witness(spec, &w, *p, max_class, limit) {
                Ok(WitnessVerdict::Found { class, image }) => {
                    let mut doc = base;
                    doc["verdict"] = json!("found");
                    doc["class"] = json!(class);
                    doc["image"] = json!(image);
                    Ok(Output::new(format!("nontrivial at class {}: {}", class, image), doc, true))
                }
                Ok(WitnessVerdict::Exhausted { max_class }) => {
                    let mut doc = base;
                    doc["verdict"] = json!("exhausted");
                    Ok(Output::new(format!("trivial in every quotient up to class {}", max_class), doc, false))
                }
                Err(Error::TrivialInput) => {
                    let mut doc = base;
                    doc["verdict"] = json!("trivial");
                    Ok(Output::new("the word is trivial".to_string(), doc, false))
                }
                Err(e) => Err(e),
            }
        }
        Command::Check { kind, group, p, class } => {
            let spec = group.resolve()?;
            let seq = SplitSequence::for_spec(spec)?;
            let name = format!("{:?} {}", kind, seq.name).to_lowercase();
            let check = match kind {
                CheckKind::Section => {
                    let r = check_section(&seq)?;
                    let c = Check::new(name, r.holds, format!("{} failures", r.failures.len()));
                    match r.failures.first() {
                        Some(f) => c.with_counterexample(f.clone()),
                        None => c,
                    }
                }
                CheckKind::Padp => {
                    let r = check_p_almost_direct(&seq, *p)?;
                    let c = Check::new(name, r.holds, format!("p = {}, dim H1(A;F_p) = {}", p, r.h1_dimension));
                    match r.counterexample {
                        Some((cg, ag, x, y)) => c.with_counterexample(format!(
                            "{} acting on {}: {:?} vs {:?}",
                            cg, ag, x, y
                        )),
                        None => c,
                    }
                }
                CheckKind::Lcs => {
                    let max_class = class.or(cli.max_class).unwrap_or(3);
                    let cmp = check_split_filtration(&seq, *p, max_class, limit)?;
                    let logs: Vec<String> = cmp
                        .classes
                        .iter()
                        .map(|c| format!("class {}: {} = {} + {}", c.class, c.total_log, c.kernel_log, c.quotient_log))
                        .collect();
                    Check::new(name, cmp.holds(), logs.join("; "))
                }
            };
            Ok(Output::report(finish(cli, Report::new(command_echo(cli), None, vec![check]))))
        }
        Command::Aug { group, class, kmax, certificates } => {
            let spec = group.resolve()?;
            let seq = SplitSequence::for_spec(spec)?;
            let sq = SemidirectQuotient::from_split(&seq, *class, limit)?;
            let all_dims = groupring::aug_dims(sq.group(), *kmax);
            let decomposition = groupring::check_decomposition(&sq, *kmax)?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut certs = Vec::new();
            for _ in 0..*certificates {
                let e = random_special(&sq, &mut rng, 4);
                let cert = special_reduce(&sq, &e)?;
                certs.push(certificate_json(&sq, &e, &cert));
            }
            let doc = json!({
                "group": spec.to_string(),
                "class": class,
                "order": sq.group().order().to_string(),
                "dims": all_dims,
                "decomposition_dims": decomposition.rhs_dims,
                "decomposition_ok": decomposition.holds,
                "seed": cli.seed,
                "certificates": certs,
            });
            let text = format!(
                "|Q| = {}\ndims of I^k, k = 1..{}: {:?}\ndecomposition holds: {}\n{} certificates",
                sq.group().order(),
                kmax,
                all_dims,
                decomposition.holds,
                certs.len()
            );
            Ok(Output::new(text, doc, decomposition.holds))
        }
        Command::Suite { name } => {
            let cfg = SuiteConfig { seed: cli.seed, max_class: cli.max_class, limit };
            let checks = suites::run(name, &cfg).ok_or_else(|| Error::Unsupported(format!("unknown suite {}", name)))?;
            Ok(Output::report(finish(cli, Report::new(command_echo(cli), Some(cli.seed), checks))))
        }
    }
}

fn finish(cli: &Cli, r: Report) -> Report {
    if cli.timings {
        r
    } else {
        r.without_timings()
    }
}

fn command_echo(cli: &Cli) -> String {
    match &cli.command {
        Command::Check { kind, group, .. } => {
            format!("check {:?} {}", kind, group.group.clone().unwrap_or_default()).to_lowercase()
        }
        Command::Suite { name } => format!("suite {}", name),
        other => format!("{:?}", other),
    }
}

fn to_json<T: Serialize>(doc: &T) -> serde_json::Value {
    serde_json::to_value(doc).expect("serializable")
}

fn certificate_json(sq: &SemidirectQuotient, e: &SpecialElement, cert: &DecompositionCertificate) -> serde_json::Value {
    let q = sq.group();
    let label = |x: usize| q.label(x).to_string();
    let input: Vec<_> = e
        .factors
        .iter()
        .map(|&(t, x)| json!({ "tag": if t == Tag::A { "A" } else { "C" }, "element": label(x) }))
        .collect();
    let terms: Vec<_> = cert
        .terms
        .iter()
        .map(|t| {
            json!({
                "i": t.i,
                "h": t.h,
                "a": t.a_factors.iter().map(|&x| label(x)).collect::<Vec<_>>(),
                "c": t.c_factors.iter().map(|&x| label(x)).collect::<Vec<_>>(),
                "multiplier": label(t.multiplier),
            })
        })
        .collect();
    json!({ "input": input, "degree": cert.degree, "terms": terms })
}
