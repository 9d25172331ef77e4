//! Random instances for the lemma suites.
//!
//! Coordinates are drawn from a small rational grid, with `inf` appearing with
//! probability 0.2 wherever the sup-completion allows it.

use rand::seq::SliceRandom;
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use crate::band::BandProjection;
use crate::cond_exp::{CondExp, ProbSpace};
use crate::element::Element;
use crate::ext::{rat, ExtValue, Rational};
use crate::fls::WeightedEventSeq;
use crate::sequences::PeriodicSeq;

pub type Rng = ChaCha8Rng;

pub const INF_PROB: f64 = 0.2;

const GRID: [(i64, i64); 10] = [(0, 1), (1, 3), (-1, 3), (1, 2), (-1, 2), (1, 1), (-1, 1), (2, 1), (-2, 1), (3, 1)];

pub fn dim(rng: &mut Rng) -> usize {
    rng.gen_range(1..=6)
}

pub fn rational(rng: &mut Rng) -> Rational {
    let (n, d) = *GRID.choose(rng).unwrap();
    rat(n, d)
}

pub fn nonneg(rng: &mut Rng) -> Rational {
    let (n, d) = *GRID.iter().filter(|(n, _)| *n >= 0).collect::<Vec<_>>().choose(rng).unwrap();
    rat(*n, *d)
}

pub fn positive(rng: &mut Rng) -> Rational {
    let (n, d) = *GRID.iter().filter(|(n, _)| *n > 0).collect::<Vec<_>>().choose(rng).unwrap();
    rat(*n, *d)
}

fn build(rng: &mut Rng, d: usize, inf: bool, value: fn(&mut Rng) -> Rational) -> Element {
    let coords = (0..d)
        .map(|_| {
            if inf && rng.gen_bool(INF_PROB) {
                ExtValue::Infinity
            } else {
                ExtValue::Finite(value(rng))
            }
        })
        .collect();
    Element::new(coords).expect("d >= 1")
}

/// Signed, possibly infinite.
pub fn element(rng: &mut Rng, d: usize) -> Element {
    build(rng, d, true, rational)
}

/// Nonnegative, possibly infinite.
pub fn cone(rng: &mut Rng, d: usize) -> Element {
    build(rng, d, true, nonneg)
}

pub fn finite(rng: &mut Rng, d: usize) -> Element {
    build(rng, d, false, rational)
}

pub fn finite_cone(rng: &mut Rng, d: usize) -> Element {
    build(rng, d, false, nonneg)
}

/// Finite with every coordinate nonzero.
pub fn weak_unit(rng: &mut Rng, d: usize) -> Element {
    build(rng, d, false, |r| {
        let x = positive(r);
        if r.gen_bool(0.5) {
            -x
        } else {
            x
        }
    })
}

pub fn band(rng: &mut Rng, d: usize) -> BandProjection {
    let atoms: Vec<usize> = (0..d).filter(|_| rng.gen_bool(0.5)).collect();
    BandProjection::new(d, atoms).expect("in range")
}

/// Prefix of length 0..=3 and cycle of length 1..=3.
pub fn seq_with<T: Clone>(rng: &mut Rng, mut f: impl FnMut(&mut Rng) -> T) -> PeriodicSeq<T> {
    let p = rng.gen_range(0..=3);
    let c = rng.gen_range(1..=3);
    let prefix = (0..p).map(|_| f(rng)).collect();
    let cycle = (0..c).map(|_| f(rng)).collect();
    PeriodicSeq::from_parts(prefix, cycle).expect("nonempty cycle")
}

pub fn space(rng: &mut Rng, d: usize) -> ProbSpace {
    let masses: Vec<u64> = (0..d).map(|_| rng.gen_range(1..=4)).collect();
    ProbSpace::from_masses(&masses).expect("positive masses")
}

pub fn partition(rng: &mut Rng, d: usize) -> Vec<Vec<usize>> {
    let k = rng.gen_range(1..=d);
    let mut blocks = vec![Vec::new(); k];
    for a in 0..d {
        blocks[rng.gen_range(0..k)].push(a);
    }
    blocks.retain(|b| !b.is_empty());
    blocks
}

pub fn cond_exp(rng: &mut Rng, d: usize) -> CondExp {
    let space = space(rng, d);
    let partition = partition(rng, d);
    CondExp::new(space, partition).expect("valid partition")
}

/// A block-constant element with block values from `value`.
pub fn block_constant(rng: &mut Rng, t: &CondExp, value: impl Fn(&mut Rng) -> ExtValue) -> Element {
    let mut coords = vec![ExtValue::zero(); t.dim()];
    for block in t.partition() {
        let v = value(rng);
        for &a in block {
            coords[a] = v.clone();
        }
    }
    Element::new(coords).expect("d >= 1")
}

pub fn range_weight(rng: &mut Rng, t: &CondExp) -> Element {
    block_constant(rng, t, |r| ExtValue::Finite(nonneg(r)))
}

pub fn weighted_event_seq(rng: &mut Rng, t: CondExp) -> WeightedEventSeq {
    let d = t.dim();
    let weights = seq_with(rng, |r| range_weight(r, &t));
    let events = seq_with(rng, |r| band(r, d));
    WeightedEventSeq::new(t, weights, events).expect("generated weights are valid")
}

/// A `{1..=hi}` checkpoint list of length 1..=4, sorted.
pub fn checkpoints(rng: &mut Rng, hi: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=4);
    let mut ns: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=hi)).collect();
    ns.sort_unstable();
    ns.dedup();
    ns
}
