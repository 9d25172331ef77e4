//! Seeded property suites, one per lemma.
//!
//! Every trial draws from its own generator seeded by `(seed, lemma, trial)`,
//! so results do not depend on how trials are scheduled across threads.

pub mod gen;
pub mod regressions;
mod suites;

use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use gen::Rng;

/// Lemma names accepted by [`run_lemma`], in reporting order.
pub const LEMMAS: [&str; 25] = [
    "YY2-A", "YY2-Q", "YY2-H", "YY2-k", "YY2-T", "YY2-E", "X1", "X4", "YY2-Jm", "YY2-q", "YY2-r", "L1", "YY2-t",
    "YY3-a", "YY2-P", "YY2-g", "YY2-B", "M1", "M2", "M3", "M4", "M5", "M6", "M7-cert", "BC",
];

/// A failed property together with the instance that broke it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub property: String,
    pub instance: Value,
}

pub type Trial = std::result::Result<(), Failure>;

/// Collects property outcomes within one trial, keeping the first failure.
#[derive(Default)]
pub struct Checks {
    failed: Option<String>,
}

impl Checks {
    pub fn check(&mut self, property: &str, ok: bool) {
        if !ok && self.failed.is_none() {
            self.failed = Some(property.to_string());
        }
    }
}

/// Runs the checks in `body` against `instance`. A library error counts as a
/// failure of the property being evaluated.
pub fn run(instance: Value, body: impl FnOnce(&mut Checks) -> Result<()>) -> Trial {
    let mut c = Checks::default();
    match body(&mut c) {
        Err(e) => Err(Failure { property: format!("error: {}", e), instance }),
        Ok(()) => match c.failed {
            Some(property) => Err(Failure { property, instance }),
            None => Ok(()),
        },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub property: String,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl LemmaReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, lemma: usize, trial: usize) -> u64 {
    mix64(mix64(mix64(seed) ^ lemma as u64) ^ trial as u64)
}

/// Exact match, else a case-insensitive match when only one lemma fits
/// (`YY2-Q` and `YY2-q` are different lemmas).
pub fn lemma_index(name: &str) -> Result<usize> {
    if let Some(i) = LEMMAS.iter().position(|l| *l == name) {
        return Ok(i);
    }
    let mut folded = LEMMAS.iter().enumerate().filter(|(_, l)| l.eq_ignore_ascii_case(name));
    match (folded.next(), folded.next()) {
        (Some((i, _)), None) => Ok(i),
        _ => Err(Error::UnknownLemma(name.to_string())),
    }
}

pub fn run_lemma(name: &str, trials: usize, seed: u64) -> Result<LemmaReport> {
    Ok(run_index(lemma_index(name)?, trials, seed))
}

fn run_index(idx: usize, trials: usize, seed: u64) -> LemmaReport {
    let suite = suites::suite(idx);
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = Rng::seed_from_u64(trial_seed(seed, idx, t));
            suite(&mut rng)
        })
        .collect();
    let failed = outcomes.iter().filter(|o| o.is_err()).count();
    let counterexample = outcomes.into_iter().enumerate().find_map(|(trial, o)| {
        o.err().map(|f| Counterexample { trial, property: f.property, instance: f.instance })
    });
    LemmaReport { lemma: LEMMAS[idx].to_string(), trials, passed: trials - failed, failed, counterexample }
}

pub fn run_all(trials: usize, seed: u64) -> Vec<LemmaReport> {
    (0..LEMMAS.len()).map(|idx| run_index(idx, trials, seed)).collect()
}
