//! Command-line surface over the bi-non-crossing combinatorics engine.
//!
//! Exit codes: 0 on success (or a fully verified suite), 1 when a
//! verification suite finds a counterexample (the first one is printed),
//! 2 on usage, parse, or size-limit errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bifree_core::bnc::{
    enumerate_bnc, enumerate_lr, kreweras_bnc, shaded_bnc, BncPartition, Shading, SidePattern,
};
use bifree_core::cumulant::{
    bifree_join, cumulants_to_moments, mixed_moment_lat, moments_to_cumulants,
    multconv_cumulants, universal_poly, word_from_string, CumulantTable, Distribution, PolyKind,
};
use bifree_core::fock::fock_moment;
use bifree_core::incidence::{mobius_bnc, EvalContext};
use bifree_core::partition::{kreweras_nc, Partition};
use bifree_core::ratio::format_q;
use bifree_core::verify::{run_suite, Budget};

#[derive(Parser)]
#[command(
    name = "bifree",
    about = "Exact combinatorics of two-faced families: bi-non-crossing lattices, \
             Möbius/cumulant calculus, Kreweras complements, and an operator model",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumKind {
    Nc,
    Bnc,
    Shaded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolyKindArg {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "R", alias = "r")]
    R,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a partition lattice as JSON lines, sorted by text form.
    Enum(EnumArgs),
    /// Möbius function of an interval.
    Mobius(MobiusArgs),
    /// Kreweras complement (classical without --chi, transported with it).
    Kreweras(KrewerasArgs),
    /// Shaded-diagram census for one pattern and shading.
    Lr(LrArgs),
    /// Moments to cumulants over a distribution JSON file.
    M2c(DistArg),
    /// Cumulants to moments over a cumulant-table JSON file.
    C2m(DistArg),
    /// Joint distribution of an independent pair.
    Join(PairArgs),
    /// Mixed moment by the coefficient formula.
    MixedMoment(MixedMomentArgs),
    /// Multiplicative convolution of two single-faced-pair distributions.
    Multconv(MultconvArgs),
    /// Universal polynomial for a pattern (and shading, for kind P).
    Poly(PolyArgs),
    /// Operator-model vacuum expectation with an equality check.
    Fock(FockArgs),
    /// Run a named verification suite (or "all").
    Verify(VerifyArgs),
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long, value_enum)]
    kind: EnumKind,
    /// Side pattern over {L, R}; required for bnc and shaded.
    #[arg(long)]
    chi: Option<String>,
    /// Shading over {A, B}; required for shaded.
    #[arg(long)]
    shading: Option<String>,
    /// Ground-set size; required for nc (ignored otherwise).
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct MobiusArgs {
    #[arg(long)]
    chi: String,
    /// Lower partition in canonical text form.
    #[arg(long)]
    pi: String,
    /// Upper partition in canonical text form.
    #[arg(long)]
    sigma: String,
}

#[derive(Args)]
struct KrewerasArgs {
    #[arg(long)]
    chi: Option<String>,
    #[arg(long)]
    pi: String,
}

#[derive(Args)]
struct LrArgs {
    #[arg(long)]
    chi: String,
    #[arg(long)]
    shading: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct DistArg {
    /// Path to the JSON file.
    #[arg(long)]
    dist: String,
}

#[derive(Args)]
struct PairArgs {
    /// First distribution JSON path.
    #[arg(long)]
    left: String,
    /// Second distribution JSON path.
    #[arg(long)]
    right: String,
}

#[derive(Args)]
struct MixedMomentArgs {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    /// Space-separated index names.
    #[arg(long)]
    word: String,
    #[arg(long)]
    shading: String,
}

#[derive(Args)]
struct MultconvArgs {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    #[arg(long)]
    degree: usize,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long, value_enum)]
    kind: PolyKindArg,
    #[arg(long)]
    chi: String,
    #[arg(long)]
    shading: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct FockArgs {
    #[arg(long)]
    dist: String,
    #[arg(long)]
    word: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    /// Ground-set ceiling for the suite's exhaustive sweeps.
    #[arg(long, default_value_t = 4)]
    max_n: usize,
}

enum Outcome {
    Ok,
    VerificationFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_file(path: &str) -> Result<String, bifree_core::Error> {
    std::fs::read_to_string(path)
        .map_err(|e| bifree_core::Error::Parse(format!("cannot read {path}: {e}")))
}

fn load_distribution(path: &str) -> Result<Distribution, bifree_core::Error> {
    Distribution::from_json(&read_file(path)?)
}

fn run(command: Command) -> Result<Outcome, bifree_core::Error> {
    match command {
        Command::Enum(args) => cmd_enum(args),
        Command::Mobius(args) => {
            let chi = SidePattern::parse(&args.chi)?;
            let n = chi.len();
            let pi = BncPartition::new(Partition::parse(n, &args.pi)?, chi.clone())?;
            let sigma = BncPartition::new(Partition::parse(n, &args.sigma)?, chi)?;
            let mut ctx = EvalContext::new();
            println!("{}", format_q(&mobius_bnc(&mut ctx, &pi, &sigma)?));
            Ok(Outcome::Ok)
        }
        Command::Kreweras(args) => {
            match args.chi {
                Some(chi) => {
                    let chi = SidePattern::parse(&chi)?;
                    let p = BncPartition::new(Partition::parse(chi.len(), &args.pi)?, chi)?;
                    println!("{}", kreweras_bnc(&p).partition());
                }
                None => {
                    let p = Partition::parse_infer(&args.pi)?;
                    println!("{}", kreweras_nc(&p)?);
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Lr(args) => cmd_lr(args),
        Command::M2c(args) => {
            let dist = load_distribution(&args.dist)?;
            println!("{}", moments_to_cumulants(&dist)?.to_json());
            Ok(Outcome::Ok)
        }
        Command::C2m(args) => {
            let table = CumulantTable::from_json(&read_file(&args.dist)?)?;
            println!("{}", cumulants_to_moments(&table)?.to_json());
            Ok(Outcome::Ok)
        }
        Command::Join(args) => {
            let d1 = load_distribution(&args.left)?;
            let d2 = load_distribution(&args.right)?;
            println!("{}", bifree_join(&d1, &d2)?.to_json());
            Ok(Outcome::Ok)
        }
        Command::MixedMoment(args) => {
            let d1 = load_distribution(&args.left)?;
            let d2 = load_distribution(&args.right)?;
            let word = word_from_string(&args.word);
            let eps = Shading::parse(&args.shading)?;
            println!("{}", format_q(&mixed_moment_lat(&d1, &d2, &word, &eps)?));
            Ok(Outcome::Ok)
        }
        Command::Multconv(args) => {
            let d1 = load_distribution(&args.left)?;
            let d2 = load_distribution(&args.right)?;
            println!("{}", multconv_cumulants(&d1, &d2, args.degree)?.to_json());
            Ok(Outcome::Ok)
        }
        Command::Poly(args) => {
            let chi = SidePattern::parse(&args.chi)?;
            let (kind, eps) = match args.kind {
                PolyKindArg::P => {
                    let s = args.shading.ok_or_else(|| {
                        bifree_core::Error::InvalidArgument("--shading is required for P".into())
                    })?;
                    (PolyKind::P, Some(Shading::parse(&s)?))
                }
                PolyKindArg::Q => (PolyKind::Q, None),
                PolyKindArg::R => (PolyKind::R, None),
            };
            let poly = universal_poly(kind, &chi, eps.as_ref())?;
            match args.format {
                Format::Latex => println!("{}", poly.to_latex()),
                _ => println!("{}", poly.to_json()),
            }
            Ok(Outcome::Ok)
        }
        Command::Fock(args) => {
            let dist = load_distribution(&args.dist)?;
            let word = word_from_string(&args.word);
            let model = fock_moment(&dist, &word)?;
            let moment = dist.moment(&word)?;
            println!(
                "{{\"fock\":\"{}\",\"moment\":\"{}\",\"equal\":{}}}",
                format_q(&model),
                format_q(&moment),
                model == moment
            );
            Ok(Outcome::Ok)
        }
        Command::Verify(args) => cmd_verify(args),
    }
}

fn cmd_enum(args: EnumArgs) -> Result<Outcome, bifree_core::Error> {
    let mut lines = Vec::new();
    match args.kind {
        EnumKind::Nc => {
            let n = args.n.ok_or_else(|| {
                bifree_core::Error::InvalidArgument("--n is required for kind nc".into())
            })?;
            for p in bifree_core::partition::enumerate_nc(n)? {
                lines.push(format!("{{\"partition\":\"{p}\"}}"));
            }
        }
        EnumKind::Bnc => {
            let chi = parse_required_chi(&args.chi)?;
            for p in enumerate_bnc(&chi)? {
                lines.push(format!(
                    "{{\"chi\":\"{}\",\"partition\":\"{}\"}}",
                    chi,
                    p.partition()
                ));
            }
        }
        EnumKind::Shaded => {
            let chi = parse_required_chi(&args.chi)?;
            let eps = match &args.shading {
                Some(s) => Shading::parse(s)?,
                None => {
                    return Err(bifree_core::Error::InvalidArgument(
                        "--shading is required for kind shaded".into(),
                    ))
                }
            };
            for p in shaded_bnc(&chi, &eps)? {
                lines.push(format!(
                    "{{\"chi\":\"{}\",\"shading\":\"{}\",\"partition\":\"{}\"}}",
                    chi,
                    eps,
                    p.partition()
                ));
            }
        }
    }
    lines.sort();
    for line in lines {
        println!("{line}");
    }
    Ok(Outcome::Ok)
}

fn parse_required_chi(chi: &Option<String>) -> Result<SidePattern, bifree_core::Error> {
    match chi {
        Some(c) => SidePattern::parse(c),
        None => Err(bifree_core::Error::InvalidArgument(
            "--chi is required for this kind".into(),
        )),
    }
}

fn cmd_lr(args: LrArgs) -> Result<Outcome, bifree_core::Error> {
    let chi = SidePattern::parse(&args.chi)?;
    let eps = Shading::parse(&args.shading)?;
    let diagrams = enumerate_lr(&chi, &eps)?;
    match args.format {
        Format::Text => {
            for (i, d) in diagrams.iter().enumerate() {
                println!("diagram {i} (open chords: {})", d.open_chords());
                print!("{}", d.text_dump());
            }
        }
        _ => {
            let mut by_k: BTreeMap<usize, usize> = BTreeMap::new();
            for d in &diagrams {
                *by_k.entry(d.open_chords()).or_insert(0) += 1;
            }
            let closed: Vec<String> = shaded_bnc(&chi, &eps)?
                .iter()
                .map(|p| p.partition().to_string())
                .collect();
            let mut counts = String::new();
            for (i, (k, c)) in by_k.iter().enumerate() {
                if i > 0 {
                    counts.push(',');
                }
                let _ = write!(counts, "\"{k}\":{c}");
            }
            let classes: Vec<String> = closed.iter().map(|p| format!("\"{p}\"")).collect();
            println!(
                "{{\"chi\":\"{}\",\"shading\":\"{}\",\"total\":{},\"by_open_chords\":{{{}}},\"closed_partitions\":[{}]}}",
                chi,
                eps,
                diagrams.len(),
                counts,
                classes.join(",")
            );
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_verify(args: VerifyArgs) -> Result<Outcome, bifree_core::Error> {
    let budget = Budget::new(args.max_n);
    let reports = run_suite(&args.suite, budget)?;
    let mut all_pass = true;
    for report in &reports {
        for case in &report.cases {
            let status = if case.pass { "PASS" } else { "FAIL" };
            if case.pass {
                println!("{status} [{}] {}", report.suite, case.name);
            } else {
                println!("{status} [{}] {}: {}", report.suite, case.name, case.detail);
            }
        }
        if !report.passed() {
            all_pass = false;
        }
    }
    let total: usize = reports.iter().map(|r| r.cases.len()).sum();
    let failed: usize = reports
        .iter()
        .map(|r| r.cases.iter().filter(|c| !c.pass).count())
        .sum();
    println!("{} cases, {} failed", total, failed);
    if all_pass {
        Ok(Outcome::Ok)
    } else {
        Ok(Outcome::VerificationFailed)
    }
}

