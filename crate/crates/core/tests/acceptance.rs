//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng as _, SeedableRng};
use supcomp::check::gen::{self, Rng};
use supcomp::check::{run_all, LEMMAS};
use supcomp::ext::{rat, rational_to_f64};
use supcomp::fls::{borel_cantelli_sweep, BoundDoc};
use supcomp::{
    finite_part, theorem_m7, CondExp, Element, PeriodicSeq, ProbSpace, Rational, WeightedEventSeq,
};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    o.ok &= took < limit;
    o.detail = format!("{} ({:.2?}, limit {:?})", o.detail, took, limit);
    o
}

fn lemma_suite() -> Outcome {
    timed(Duration::from_secs(120), || {
        let reports = run_all(500, 7);
        let failed: Vec<String> = reports
            .iter()
            .filter(|r| !r.ok())
            .map(|r| format!("{} {}/{}", r.lemma, r.passed, r.trials))
            .collect();
        let total: usize = reports.iter().map(|r| r.passed).sum();
        let ok = failed.is_empty() && reports.len() == LEMMAS.len() && reports.iter().all(|r| r.trials == 500);
        outcome(ok, format!("{} lemmas, {} trials passed; failing: {:?}", reports.len(), total, failed))
    })
}

fn regressions() -> Outcome {
    let e = |v: &[i64]| Element::from_ints(v);
    let (x1, x2) = (e(&[1, 0]), e(&[0, 1]));
    let x = PeriodicSeq::new(vec![], vec![x1.clone(), x2.clone()]).unwrap();
    let y = PeriodicSeq::new(vec![], vec![x2.clone(), x1.clone()]).unwrap();
    let sum = x.try_zip_with(&y, |a, b| a.add(b)).unwrap();
    let pairwise = x1.disjoint(&x2).unwrap();
    let disjoint_case = pairwise && sum.sup() == e(&[1, 1]) && x.sup().add(&y.sup()).unwrap() == e(&[2, 2]);

    let small = e(&[1, 1]);
    let big = Element::parse(&["1", "inf"]).unwrap();
    let finite_case =
        small.leq(&big).unwrap() && finite_part(&small) == e(&[1, 1]) && finite_part(&big) == e(&[1, 0]);

    let u = Element::infinity(1);
    let terms: Vec<Element> = (1..=50).map(|n| Element::from_rationals([rat(1, n)]).unwrap()).collect();
    let xs = PeriodicSeq::new(terms.clone(), vec![Element::zero(1)]).unwrap();
    let scaled: Vec<Element> = terms.iter().map(|t| u.mul(t).unwrap()).collect();
    let remark_case =
        Element::inf(&scaled).unwrap() == Element::infinity(1) && u.mul(&xs.inf()).unwrap() == Element::zero(1);

    let lib = supcomp::check::regressions::pairwise_disjoint_sup_fails()
        && supcomp::check::regressions::finite_part_not_monotone()
        && supcomp::check::regressions::remark_w();
    outcome(
        disjoint_case && finite_case && remark_case && lib,
        format!("pairwise disjoint: {}, finite part: {}, inf(u x_n): {}", disjoint_case, finite_case, remark_case),
    )
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn dependent_case() -> Outcome {
    timed(Duration::from_secs(10), || {
        let src = std::fs::read_to_string(data("two_event_cycle.json")).unwrap();
        let doc: BoundDoc = supcomp::cli::parse_json(&src).unwrap();
        let r = theorem_m7(&doc.seq().unwrap(), &doc.checkpoints).unwrap();
        let lhs_ok = r.lhs == Element::constant(4, rat(3, 4));
        let values: Vec<Rational> = r.rhs_samples.iter().map(|s| s.value.as_constant().unwrap().clone()).collect();
        let increasing = values.windows(2).all(|w| w[0] < w[1]) && values.iter().all(|v| *v <= rat(2, 3));
        let last = r.rhs_samples.last().unwrap();
        let last_v = last.value.as_constant().unwrap().clone();
        let gap = rational_to_f64(&(rat(2, 3) - &last_v)).abs();
        let close = last.n == 200 && gap <= 1e-2 && last_v >= rat(65, 100) && last_v <= rat(667, 1000);
        let certs = r.certificates.iter().all(|c| c.holds);
        outcome(
            lhs_ok && increasing && close && certs && r.verdict,
            format!(
                "lhs {}, {} samples increasing: {}, n=200 value {} (|.-2/3| = {:.2e}), {} certificates hold: {}",
                r.lhs,
                values.len(),
                increasing,
                last_v,
                gap,
                r.certificates.len(),
                certs
            ),
        )
    })
}

fn borel_cantelli() -> Outcome {
    timed(Duration::from_secs(30), || {
        let (sweep, monotone) = borel_cantelli_sweep(&[rat(1, 2)], 12).unwrap();
        let r = sweep.last().unwrap();
        let ratio = r.fls_ratio == rat(12, 13);
        let union = r.union_value == Rational::one() - rat(1, 4096);
        let cert = r.certificate_holds && r.fls_ratio <= r.union_value;
        outcome(
            ratio && union && cert && monotone && r.depth == 12,
            format!("ratio {}, union {}, certificate {}, nondecreasing over 1..=12: {}", r.fls_ratio, r.union_value, cert, monotone),
        )
    })
}

fn conditional_case() -> Outcome {
    let space = ProbSpace::new(vec![rat(1, 6), rat(1, 3), rat(1, 4), rat(1, 4)]).unwrap();
    let t = CondExp::new(space, vec![vec![0, 1], vec![2, 3]]).unwrap();
    let mut bad = Vec::new();
    let mut certs = 0;
    for i in 0..100u64 {
        let mut rng = Rng::seed_from_u64(1000 + i);
        let weights = gen::seq_with(&mut rng, |r| gen::range_weight(r, &t));
        let events = gen::seq_with(&mut rng, |r| gen::band(r, 4));
        let seq = WeightedEventSeq::new(t.clone(), weights, events).unwrap();
        let ns = gen::checkpoints(&mut rng, 30);
        let r = theorem_m7(&seq, &ns).unwrap();
        certs += r.certificates.len();
        let blocky = t.is_block_constant(&r.lhs)
            && r.certificates.iter().all(|c| t.is_block_constant(&c.union_value) && t.is_block_constant(&c.bound));
        if !(blocky && r.certificates.iter().all(|c| c.holds) && r.verdict) {
            bad.push(i);
        }
    }
    outcome(bad.is_empty(), format!("100 instances, {} certificates; failing instances: {:?}", certs, bad))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let d = gen::dim(&mut rng);
        let cone = rng.gen_bool(0.5);
        let x = gen::seq_with(&mut rng, |r| if cone { gen::cone(r, d) } else { gen::element(r, d) });
        let w = common::window(&x);
        let last = x.prefix_len() + x.cycle_len();
        let mut ok = common::coords(&x.limsup()) == common::limsup(&w, last)
            && common::coords(&x.liminf()) == common::liminf(&w, last);
        for beta in 0..=last {
            ok &= common::coords(&x.tail_sup(beta)) == common::tail_sup(&w, beta);
            ok &= common::coords(&x.tail_inf(beta)) == common::tail_inf(&w, beta);
            if cone {
                ok &= common::coords(&x.series_sum(beta).unwrap()) == common::series_sum(&w, beta, x.cycle_len());
            }
        }
        mismatches += usize::from(!ok);
    }
    outcome(mismatches == 0, format!("1000 instances, {} mismatches", mismatches))
}

fn determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_supcomp"))
            .args(["--format", "json", "check", "--lemma", "all", "--trials", "60", "--seed", "7"])
            .output()
            .expect("binary runs");
        (out.status.success(), out.stdout)
    };
    let (a_ok, a) = run();
    let (b_ok, b) = run();
    outcome(a_ok && b_ok && a == b && !a.is_empty(), format!("{} bytes, identical: {}", a.len(), a == b))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("lemma suite, 500 trials per lemma", lemma_suite),
        ("counterexample regressions", regressions),
        ("dependent two-event cycle", dependent_case),
        ("truncated-product Borel-Cantelli, N = 12", borel_cantelli),
        ("nontrivial conditional case", conditional_case),
        ("window oracle equivalence", oracle_equivalence),
        ("deterministic check output", determinism),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.ok;
        println!("{} {}. {}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
