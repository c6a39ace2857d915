use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leadrel_core::classify3::{classify_relation, Classification, ClassifyOutcome};
use leadrel_core::derivation::{lnd_witness_for_map, LndWitness};
use leadrel_core::jvdk::{decompose2, Certificate, Decompose2};
use leadrel_core::poly::format_poly_with;
use leadrel_core::relations::relation_report;
use leadrel_core::suites::{run_suite, SuiteReport, SUITES};
use leadrel_core::{AutWord, Error, NilpotenceVerdict, PolyMap, RelationReport};
use serde::Serialize;

mod input;

#[derive(Parser)]
#[command(name = "leadrel", version, about = "Relations between leading terms of polynomial automorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapSource {
    /// Coordinates separated by `;`, or `@file`.
    #[arg(long, conflicts_with = "word", required_unless_present = "word")]
    map: Option<String>,
    /// Tame generators separated by `;` or newlines, or `@file`.
    #[arg(long)]
    word: Option<String>,
    /// Number of variables of the word (inferred when absent).
    #[arg(long, short = 'n')]
    nvars: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Ideal of relations between the leading terms.
    Relations {
        #[command(flatten)]
        source: MapSource,
        /// Source weights `w1,...,wn` (standard when absent).
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Tame decomposition of a plane map.
    Decompose2 {
        #[command(flatten)]
        source: MapSource,
        #[command(flatten)]
        out: Output,
    },
    /// Classify a relation in three variables and reduce it to normal form.
    Classify3 {
        /// The relation in x1, x2, x3, or `@file`.
        #[arg(long)]
        rel: String,
        /// Weights `d1,d2,d3` of the relation variables.
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Locally nilpotent derivation witness.
    LndWitness {
        #[command(flatten)]
        source: MapSource,
        #[arg(long)]
        weights: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cases (suite default when absent).
        #[arg(long)]
        count: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Expand a word into its map.
    Compose {
        #[arg(long)]
        word: String,
        #[arg(long, short = 'n')]
        nvars: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Invert a word.
    Invert {
        #[arg(long)]
        word: String,
        #[arg(long, short = 'n')]
        nvars: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConstantJacobian(_)
            | Error::ZeroJacobian
            | Error::NoWitnessIndex
            | Error::ResourceCap(_)
            | Error::WitnessVerificationFailed(_)
            | Error::OracleDisagreement(_)
            | Error::NotHomogeneous(_)
            | Error::OddLeadingX3Coefficient(_) => Failure::Domain(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

/// Text for stdout and whether the result is a domain outcome (status 1).
struct Report {
    text: String,
    domain: bool,
}

fn emit<T: Serialize>(value: &T, json: bool, text: impl FnOnce(&T) -> String, domain: bool) -> Result<Report, Failure> {
    let text = if json {
        serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))? + "\n"
    } else {
        text(value)
    };
    Ok(Report { text, domain })
}

fn source_map(source: &MapSource) -> Result<(PolyMap, Option<AutWord>), Failure> {
    match (&source.map, &source.word) {
        (Some(m), _) => Ok((input::parse_map(m)?, None)),
        (None, Some(w)) => {
            let w = input::parse_word(w, source.nvars)?;
            Ok((w.expand(), Some(w)))
        }
        (None, None) => Err(Failure::Usage("give --map or --word".into())),
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Relations { source, weights, out } => {
            let (map, _) = source_map(&source)?;
            let w1 = input::weights(weights.as_deref(), map.nvars())?;
            let rep = relation_report(&map, &w1)?;
            emit(&rep, out.json, relations_text, false)
        }
        Command::Decompose2 { source, out } => {
            let (map, _) = source_map(&source)?;
            let res = decompose2(&map)?;
            let domain = matches!(res, Decompose2::NotAnAutomorphism(_));
            emit(&res, out.json, decompose_text, domain)
        }
        Command::Classify3 { rel, weights, out } => {
            let r = input::parse_relation(&rel, 3)?;
            let d = input::weights(weights.as_deref(), 3)?;
            let c = classify_relation(&r, &d)?;
            let domain = !matches!(c.outcome, ClassifyOutcome::Classified(_));
            emit(&c, out.json, classify_text, domain)
        }
        Command::LndWitness { source, weights, out } => {
            let (map, word) = source_map(&source)?;
            let inverse = match word {
                Some(w) => w.invert().expand(),
                None => plane_inverse(&map)?,
            };
            let w1 = input::weights(weights.as_deref(), map.nvars())?;
            let rep = relation_report(&map, &w1)?;
            let wit = lnd_witness_for_map(&map, &inverse, &w1, rep.relation.as_ref())?;
            emit(&wit, out.json, witness_text, false)
        }
        Command::Verify { suite, seed, count, out } => {
            let names: Vec<&str> =
                if suite == "all" { SUITES.iter().map(|(n, _)| *n).collect() } else { vec![suite.as_str()] };
            let reports = names.iter().map(|n| run_suite(n, seed, count)).collect::<Result<Vec<_>, _>>()?;
            let domain = !reports.iter().all(SuiteReport::passed);
            if reports.len() == 1 {
                emit(&reports[0], out.json, |r| format!("{r}\n"), domain)
            } else {
                emit(&reports, out.json, |rs| rs.iter().map(|r| format!("{r}\n")).collect(), domain)
            }
        }
        Command::Compose { word, nvars, out } => {
            let w = input::parse_word(&word, nvars)?;
            emit(&w.expand(), out.json, PolyMap::to_text, false)
        }
        Command::Invert { word, nvars, out } => {
            let w = input::parse_word(&word, nvars)?;
            emit(&w.invert(), out.json, AutWord::to_text, false)
        }
    }
}

/// The inverse of a plane map, through its tame decomposition.
fn plane_inverse(map: &PolyMap) -> Result<PolyMap, Failure> {
    if map.nvars() != 2 {
        return Err(Failure::Usage("--map needs two variables here; give --word for larger maps".into()));
    }
    match decompose2(map)? {
        Decompose2::Tame(dec) => Ok(dec.word.invert().expand()),
        Decompose2::NotAnAutomorphism(c) => Err(Failure::Domain(format!("not an automorphism: {c:?}"))),
    }
}

fn relations_text(r: &RelationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "weights d = ({})", r.d);
    for (i, f) in r.fbars.iter().enumerate() {
        let _ = writeln!(s, "leading f{} = {f}", i + 1);
    }
    if r.is_zero_ideal() {
        let _ = writeln!(s, "ideal of relations: (0)");
    } else {
        let _ = writeln!(s, "ideal of relations: ({})", r.ideal.display_with('z').join(", "));
    }
    match &r.relation {
        Some(rel) if !rel.is_zero() => {
            let _ = writeln!(s, "principal, R = {}", format_poly_with(rel, 'z'));
            if let Some(deg) = &r.deg2_of_relation {
                let _ = writeln!(s, "deg2(R) = {deg}");
            }
        }
        Some(_) => {}
        None => {
            let _ = writeln!(s, "not principal");
        }
    }
    let _ = writeln!(s, "parachute = {}", leadrel_core::rational::format(&r.parachute));
    if let Some(ok) = r.bound_ok {
        let _ = writeln!(s, "deg2(R) <= parachute + 1: {ok}");
    }
    let _ = writeln!(s, "oracle cross-check: {}", if r.oracle_checked { "agrees" } else { "not run" });
    s
}

fn decompose_text(d: &Decompose2) -> String {
    match d {
        Decompose2::Tame(dec) => {
            let n = dec.steps.len();
            let mut s = format!("tame, {n} reduction step{}\n", if n == 1 { "" } else { "s" });
            for st in &dec.steps {
                let _ = writeln!(
                    s,
                    "  {}subtract {} * g^{}: degree sum {} -> {}",
                    if st.swapped { "swap, " } else { "" },
                    leadrel_core::rational::format(&st.c),
                    st.r,
                    st.degree_sum_before,
                    st.degree_sum_after
                );
            }
            s.push_str("word:\n");
            s.push_str(&dec.word.to_text());
            s
        }
        Decompose2::NotAnAutomorphism(c) => {
            let why = match c {
                Certificate::NonConstantJacobian { jacobian } => format!("Jacobian {jacobian} is not constant"),
                Certificate::ZeroJacobian => "Jacobian is zero".into(),
                Certificate::ConstantCoordinate => "a coordinate is constant".into(),
                Certificate::SingularLinearPart => "the affine part is singular".into(),
                Certificate::NotReducible { f_bar, g_bar, after_steps } => {
                    format!("after {after_steps} steps no reduction relates {f_bar} and {g_bar}")
                }
            };
            format!("not an automorphism: {why}\n")
        }
    }
}

fn classify_text(c: &Classification) -> String {
    let mut s = String::new();
    if c.order != [0, 1, 2] {
        let order: Vec<String> = c.order.iter().map(|i| format!("x{}", i + 1)).collect();
        let _ = writeln!(s, "variables sorted by weight: ({})", order.join(", "));
    }
    let _ = writeln!(s, "weights d = ({})", c.d);
    let _ = writeln!(s, "relation R = {}", c.relation);
    match &c.outcome {
        ClassifyOutcome::Classified(rt) => {
            let _ = writeln!(s, "tag {} (line {}): {}", rt.tag(), rt.tag().line(), rt.tag().shape());
            let params = serde_json::to_string(&rt.pattern).unwrap_or_default();
            let _ = writeln!(s, "params {params}");
            let _ = writeln!(s, "shift h = {}", rt.shift_h);
            let _ = writeln!(s, "scalar = {}", leadrel_core::rational::format(&rt.scalar));
        }
        ClassifyOutcome::Forbidden(k) => {
            let _ = writeln!(s, "forbidden: entry {k} of the impossible list");
        }
        ClassifyOutcome::NeedsExtension(why) => {
            let _ = writeln!(s, "needs a field extension: {why}");
        }
        ClassifyOutcome::NotWeightedHomogeneous => {
            let _ = writeln!(s, "not weighted homogeneous for these weights");
        }
        ClassifyOutcome::NotInList(why) => {
            let _ = writeln!(s, "not in the list: {why}");
        }
    }
    if let Some(nf) = &c.normal_form {
        match &nf.canonical {
            Some(form) => {
                let _ = writeln!(
                    s,
                    "canonical form {} * ({})",
                    leadrel_core::rational::format(&nf.residual_scalar),
                    form.polynomial()
                );
                let _ = writeln!(s, "annihilating derivation {}", form.annihilating_lnd());
            }
            None => {
                let _ = writeln!(s, "reduced form {}", nf.reduced);
            }
        }
        if let Some(root) = &nf.needs_root {
            let _ = writeln!(
                s,
                "stopped: needs a root of degree {} of {}",
                root.degree,
                leadrel_core::rational::format(&root.value)
            );
        }
        if nf.witness.is_empty() {
            s.push_str("witness: identity\n");
        } else {
            s.push_str("witness:\n");
            s.push_str(&nf.witness.to_text());
        }
    }
    s
}

fn witness_text(w: &LndWitness) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "index i = {}", w.index + 1);
    let _ = writeln!(s, "weights d = ({})", w.d);
    let _ = writeln!(s, "deg2(Delta_i) = {}", w.delta_degree);
    let _ = writeln!(s, "leading derivation {}", w.leading);
    let verdict = match &w.verdict {
        NilpotenceVerdict::LocallyNilpotent { orders } => format!("locally nilpotent, orders {orders:?}"),
        NilpotenceVerdict::NotNilpotent { var, reason } => format!("not nilpotent on x{}: {reason}", var + 1),
        NilpotenceVerdict::Unknown { cap } => format!("undecided at cap {cap}"),
    };
    let _ = writeln!(s, "verdict: {verdict}");
    if let Some(k) = w.annihilates_relation {
        let _ = writeln!(s, "kills the relation: {k}");
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.text);
            ExitCode::from(u8::from(report.domain))
        }
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Domain(m) | Failure::Io(m) => m,
            };
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
