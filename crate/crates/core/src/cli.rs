//! Command-line front end.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::check::{self, LemmaReport, LEMMAS};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::{parse_rational, Rational};
use crate::fls::{borel_cantelli_sweep, corollary_m10, theorem_m7, BorelCantelliReport, BoundDoc, BoundReport};
use crate::parts::{decompose, star};

/// Environment variable holding the worker thread count for `check`.
pub const THREADS_ENV: &str = "SUPCOMP_THREADS";

#[derive(Debug, Parser)]
#[command(name = "supcomp", version, about = "Sup-completion calculator and lemma checker")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "structured")]
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split each element into finite and infinite parts.
    Decompose {
        /// JSON file with one element or a list of elements (`-` for stdin).
        input: PathBuf,
    },
    /// Print x* for each element.
    Star { input: PathBuf },
    /// Evaluate the limsup lower bound on a bound document.
    Bound {
        input: PathBuf,
        /// Use the weights (T q_n)*; the document must not give `weights_seq`.
        #[arg(long)]
        corollary: bool,
    },
    /// Truncated-product experiment with independent events of probability p_n.
    BorelCantelli {
        /// Probabilities, cycled if fewer than the depth (e.g. `1/2` or `1/3,1/4`).
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<String>,
        /// Number of events N; the space has 2^N atoms.
        #[arg(long)]
        depth: usize,
    },
    /// Run seeded property suites.
    Check {
        /// Lemma name, or `all`.
        #[arg(long, default_value = "all")]
        lemma: String,
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Rendered output and whether every verdict passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

fn read_input(path: &Path) -> Result<String> {
    let mut s = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut s).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    Ok(s)
}

/// Deserializes with the failing field path and the line/column in the message.
pub fn parse_json<T: DeserializeOwned>(src: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(src);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        let inner = inner.strip_prefix("parse error: ").unwrap_or(&inner);
        if path == "." {
            Error::Parse(inner.to_string())
        } else {
            Error::Parse(format!("at `{}`: {}", path, inner))
        }
    })
}

/// One element (`["1","inf"]`) or a list of them.
pub fn parse_elements(src: &str) -> Result<Vec<Element>> {
    let v: Value = parse_json(src)?;
    let nested = matches!(&v, Value::Array(items) if items.first().is_some_and(Value::is_array));
    if nested {
        parse_json(src)
    } else {
        parse_json::<Element>(src).map(|x| vec![x])
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn textual(x: &Element) -> String {
    serde_json::to_string(x).expect("serializable")
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Decompose { input } => {
            let xs = parse_elements(&read_input(input)?)?;
            let rows: Vec<_> = xs.iter().map(|x| (x, decompose(x))).collect();
            let output = match fmt {
                Format::Json => to_json(
                    &rows
                        .iter()
                        .map(|(x, (f, i))| json!({"input": x, "finite": f, "infinite": i}))
                        .collect::<Vec<_>>(),
                ),
                Format::Text => rows
                    .iter()
                    .map(|(x, (f, i))| {
                        format!("x = {}\n  finite:   {}\n  infinite: {}\n", textual(x), textual(f), textual(i))
                    })
                    .collect(),
            };
            Ok(Outcome { output, ok: true })
        }
        Command::Star { input } => {
            let xs = parse_elements(&read_input(input)?)?;
            let stars: Vec<Element> = xs.iter().map(star).collect();
            let output = match fmt {
                Format::Json => to_json(&stars),
                Format::Text => stars.iter().map(|s| textual(s) + "\n").collect(),
            };
            Ok(Outcome { output, ok: true })
        }
        Command::Bound { input, corollary } => {
            let doc: BoundDoc = parse_json(&read_input(input)?)?;
            if *corollary {
                if doc.weights_seq.is_some() {
                    return Err(Error::Parse("`weights_seq` is not used with --corollary".into()));
                }
                let r = corollary_m10(&doc.cond()?, &doc.events()?, &doc.checkpoints)?;
                let ok = r.bound.verdict && r.displayed_matches;
                let output = match fmt {
                    Format::Json => to_json(&r),
                    Format::Text => {
                        let mut s = render_bound(&r.bound);
                        let _ = writeln!(s, "displayed form matches: {}", r.displayed_matches);
                        s
                    }
                };
                Ok(Outcome { output, ok })
            } else {
                let r = theorem_m7(&doc.seq()?, &doc.checkpoints)?;
                let output = match fmt {
                    Format::Json => to_json(&r),
                    Format::Text => render_bound(&r),
                };
                Ok(Outcome { output, ok: r.verdict })
            }
        }
        Command::BorelCantelli { p, depth } => {
            let ps = p.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Rational>>>()?;
            let (sweep, monotone) = borel_cantelli_sweep(&ps, *depth)?;
            let last = sweep.last().expect("depth >= 1");
            let output = match fmt {
                Format::Json => to_json(&json!({
                    "report": last,
                    "ratios": sweep.iter().map(|r| r.fls_ratio.to_string()).collect::<Vec<_>>(),
                    "ratio_nondecreasing": monotone,
                })),
                Format::Text => render_bc(last, &sweep, monotone),
            };
            Ok(Outcome { output, ok: last.certificate_holds })
        }
        Command::Check { lemma, trials, seed } => {
            let trials = *trials as usize;
            let reports = if lemma.eq_ignore_ascii_case("all") {
                check::run_all(trials, *seed)
            } else {
                vec![check::run_lemma(lemma, trials, *seed)?]
            };
            let ok = reports.iter().all(LemmaReport::ok);
            let output = match fmt {
                Format::Json => to_json(&json!({"seed": seed, "trials": trials, "lemmas": reports, "ok": ok})),
                Format::Text => render_check(&reports),
            };
            Ok(Outcome { output, ok })
        }
    }
}

fn render_bound(r: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "lhs: {}", r.lhs);
    let _ = writeln!(s, "band: {}", r.band);
    let _ = writeln!(s, "finite part of K vanishes: {}", r.finite_part_vanishes);
    let _ = writeln!(s, "rhs samples:");
    for x in &r.rhs_samples {
        let _ = writeln!(s, "  n = {}: {}", x.n, x.value);
    }
    let _ = writeln!(s, "rhs limsup: {}", r.rhs_limsup);
    let failed: Vec<_> = r.failed_certificates().collect();
    let _ = writeln!(s, "certificates: {}/{} hold", r.certificates.len() - failed.len(), r.certificates.len());
    for c in failed {
        let _ = writeln!(s, "  FAILED q = {}, n = {}: {} < {}", c.q, c.n, c.union_value, c.bound);
    }
    let _ = writeln!(s, "lhs dominates every sample: {}", r.samples_dominated);
    if let Some(u) = &r.unprojected {
        let _ = writeln!(s, "unprojected: {} >= {}: {}", u.lhs, u.rhs_limsup, u.holds);
    }
    let _ = writeln!(s, "verdict: {}", r.verdict);
    s
}

fn render_bc(r: &BorelCantelliReport, sweep: &[BorelCantelliReport], monotone: bool) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "depth: {}", r.depth);
    let _ = writeln!(s, "union value: {}", r.union_value);
    let _ = writeln!(s, "fls ratio: {}", r.fls_ratio);
    let _ = writeln!(s, "gap: {}", r.gap);
    let _ = writeln!(s, "K = {}, S = {}", r.k, r.s);
    let _ = writeln!(s, "pairwise independent: {}", r.pairwise_independent);
    let _ = writeln!(s, "S <= K^2 + K: {}", r.independence_bound_holds);
    let ratios: Vec<String> = sweep.iter().map(|x| x.fls_ratio.to_string()).collect();
    let _ = writeln!(s, "ratios: {}", ratios.join(", "));
    let _ = writeln!(s, "ratio nondecreasing: {}", monotone);
    let _ = writeln!(s, "certificate: {}", r.certificate_holds);
    s
}

fn render_check(reports: &[LemmaReport]) -> String {
    let width = LEMMAS.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in reports {
        let status = if r.ok() { "pass" } else { "FAIL" };
        let _ = writeln!(s, "{:<width$}  {}/{} {}", r.lemma, r.passed, r.trials, status);
        if let Some(c) = &r.counterexample {
            let _ = writeln!(s, "  trial {}: {}", c.trial, c.property);
            let _ = writeln!(s, "  instance: {}", c.instance);
        }
    }
    s
}
