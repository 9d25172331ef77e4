mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use supcomp::check::gen::{self, Rng};
use supcomp::ext::{int, rat, rational_to_f64};
use supcomp::fls::{borel_cantelli, borel_cantelli_sweep};
use supcomp::{
    corollary_m10, theorem_m7, BandProjection, CondExp, Element, PeriodicSeq, ProbSpace, Rational, Upto,
    WeightedEventSeq,
};

/// Plain-rational evaluation of the weighted sums, straight from the
/// definitions.
struct Direct {
    probs: Vec<Rational>,
    block: Vec<usize>,
    seq: WeightedEventSeq,
}

impl Direct {
    fn new(seq: &WeightedEventSeq) -> Self {
        let t = seq.cond();
        let mut block = vec![0; t.dim()];
        for (b, atoms) in t.partition().iter().enumerate() {
            for &a in atoms {
                block[a] = b;
            }
        }
        Direct { probs: t.space().weights().to_vec(), block, seq: seq.clone() }
    }

    fn d(&self) -> usize {
        self.probs.len()
    }

    /// `T 1_set` at every atom.
    fn t(&self, set: &[bool]) -> Vec<Rational> {
        (0..self.d())
            .map(|w| {
                let same: Vec<usize> = (0..self.d()).filter(|&a| self.block[a] == self.block[w]).collect();
                let hit: Rational = same.iter().filter(|&&a| set[a]).map(|&a| self.probs[a].clone()).sum();
                let all: Rational = same.iter().map(|&a| self.probs[a].clone()).sum();
                hit / all
            })
            .collect()
    }

    fn v(&self, i: usize) -> Vec<Rational> {
        common::coords(self.seq.weight(i)).into_iter().map(|c| c.expect("finite weight")).collect()
    }

    fn q(&self, i: usize) -> Vec<bool> {
        (0..self.d()).map(|a| self.seq.event(i).contains(a)).collect()
    }

    fn k(&self, q: usize, n: usize) -> Vec<Rational> {
        let mut k = vec![Rational::zero(); self.d()];
        for i in q..=n {
            let (v, tq) = (self.v(i), self.t(&self.q(i)));
            for w in 0..self.d() {
                k[w] += &v[w] * &tq[w];
            }
        }
        k
    }

    fn s(&self, q: usize, n: usize) -> Vec<Rational> {
        let mut s = vec![Rational::zero(); self.d()];
        for i in q..=n {
            for j in q..=n {
                let both: Vec<bool> = self.q(i).iter().zip(self.q(j)).map(|(a, b)| *a && b).collect();
                let (vi, vj, tq) = (self.v(i), self.v(j), self.t(&both));
                for w in 0..self.d() {
                    s[w] += &vi[w] * &vj[w] * &tq[w];
                }
            }
        }
        s
    }

    fn ratio(&self, q: usize, n: usize) -> Vec<Rational> {
        let (k, s) = (self.k(q, n), self.s(q, n));
        (0..self.d()).map(|w| if s[w].is_zero() { Rational::zero() } else { &k[w] * &k[w] / &s[w] }).collect()
    }

    /// `T 1_U` with `U = band ∩ ⋃_{i=q..n} (Q_i ∩ {v_i > 0})`.
    fn union(&self, band: &BandProjection, q: usize, n: usize) -> Vec<Rational> {
        let set: Vec<bool> = (0..self.d())
            .map(|a| band.contains(a) && (q..=n).any(|i| self.q(i)[a] && !self.v(i)[a].is_zero()))
            .collect();
        self.t(&set)
    }
}

fn finite(x: &Element) -> Vec<Rational> {
    common::coords(x).into_iter().map(|c| c.expect("finite")).collect()
}

fn project(band: &BandProjection, x: Vec<Rational>) -> Vec<Rational> {
    x.into_iter().enumerate().map(|(a, v)| if band.contains(a) { v } else { Rational::zero() }).collect()
}

fn random_seq(seed: u64) -> WeightedEventSeq {
    let mut rng = Rng::seed_from_u64(seed);
    let d = gen::dim(&mut rng);
    let t = gen::cond_exp(&mut rng, d);
    gen::weighted_event_seq(&mut rng, t)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn sums_match_direct_evaluation(seed in any::<u64>()) {
        let seq = random_seq(seed);
        let direct = Direct::new(&seq);
        for q in 1..=4 {
            for n in q..=q + 8 {
                let (k, s) = (seq.k(q, Upto::At(n)).unwrap(), seq.s(q, Upto::At(n)).unwrap());
                prop_assert_eq!(finite(&k), direct.k(q, n));
                prop_assert_eq!(finite(&s), direct.s(q, n));
                prop_assert_eq!(finite(&seq.ratio(q, n).unwrap()), direct.ratio(q, n));
                let kk: Vec<Rational> = direct.k(q, n).iter().map(|x| x * x).collect();
                prop_assert!(kk.iter().zip(direct.s(q, n)).all(|(a, b)| *a <= b));
            }
        }
    }

    #[test]
    fn infinite_sums_match_growth(seed in any::<u64>()) {
        let seq = random_seq(seed);
        let direct = Direct::new(&seq);
        let (p, l) = (seq.prefix_len(), seq.cycle_len());
        for q in 1..=3 {
            let n1 = q + p + 2 * l;
            let n2 = n1 + l;
            let k_inf = common::coords(&seq.k(q, Upto::Infinity).unwrap());
            let s_inf = common::coords(&seq.s(q, Upto::Infinity).unwrap());
            for (lim, (a, b)) in [(k_inf, (direct.k(q, n1), direct.k(q, n2))), (s_inf, (direct.s(q, n1), direct.s(q, n2)))] {
                for w in 0..direct.d() {
                    let expect = if a[w] == b[w] { Some(a[w].clone()) } else { None };
                    prop_assert_eq!(&lim[w], &expect);
                }
            }
        }
    }

    #[test]
    fn limsup_matches_large_n(seed in any::<u64>()) {
        let seq = random_seq(seed);
        let direct = Direct::new(&seq);
        let band = seq.divergence_band();
        let l = seq.cycle_len();
        let exact = finite(&seq.ratio_limsup(1, &band).unwrap());
        let base = seq.prefix_len() + 4000 * l;
        let mut best = vec![f64::NEG_INFINITY; direct.d()];
        for r in 0..l {
            let x = finite(&band.apply(&seq.ratio(1, base + r).unwrap()).unwrap());
            for w in 0..direct.d() {
                best[w] = best[w].max(rational_to_f64(&x[w]));
            }
        }
        for w in 0..direct.d() {
            prop_assert!((best[w] - rational_to_f64(&exact[w])).abs() < 1e-2, "{:?} vs {:?}", best, exact);
        }
    }

    #[test]
    fn certificates_match_direct_evaluation(seed in any::<u64>(), ns in prop::collection::btree_set(1usize..=10, 1..=3)) {
        let seq = random_seq(seed);
        let direct = Direct::new(&seq);
        let ns: Vec<usize> = ns.into_iter().collect();
        let report = theorem_m7(&seq, &ns).unwrap();
        prop_assert!(report.verdict);
        for c in &report.certificates {
            prop_assert_eq!(finite(&c.union_value), direct.union(&report.band, c.q, c.n));
            prop_assert_eq!(finite(&c.bound), project(&report.band, direct.ratio(c.q, c.n)));
            prop_assert!(c.holds);
        }
        prop_assert!(seq.cond().is_block_constant(&report.lhs));
    }

    #[test]
    fn corollary_displayed_form_agrees(seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        let d = gen::dim(&mut rng);
        let t = gen::cond_exp(&mut rng, d);
        let events = gen::seq_with(&mut rng, |r| gen::band(r, d));
        let r = corollary_m10(&t, &events, &[1, 2, 5, 9]).unwrap();
        prop_assert!(r.displayed_matches);
        prop_assert!(r.bound.verdict);
    }
}

fn two_event_cycle() -> WeightedEventSeq {
    let d = 4;
    let t = CondExp::trivial(ProbSpace::uniform(d).unwrap());
    let events = PeriodicSeq::new(
        vec![],
        vec![BandProjection::new(d, [0, 1]).unwrap(), BandProjection::new(d, [0, 2]).unwrap()],
    )
    .unwrap();
    WeightedEventSeq::new(t, PeriodicSeq::constant(Element::unit(d)), events).unwrap()
}

#[test]
fn two_event_cycle_closed_form() {
    // K_{1,n} = n/2. S_{1,n} = n/2 + 2 * (#pairs of distinct indices)/4, where distinct
    // indices of different parity meet in one atom and same parity in two.
    let seq = two_event_cycle();
    for k in 1..=100i64 {
        assert_eq!(seq.ratio(1, (2 * k) as usize).unwrap(), Element::constant(4, rat(2, 3)));
        let odd = rat((2 * k + 1) * (2 * k + 1), 2 * (3 * k * k + 3 * k + 1));
        assert_eq!(seq.ratio(1, (2 * k + 1) as usize).unwrap(), Element::constant(4, odd));
    }
    assert_eq!(seq.ratio(1, 1).unwrap(), Element::constant(4, rat(1, 2)));
    let report = theorem_m7(&seq, &[1, 3, 200]).unwrap();
    assert_eq!(report.lhs, Element::constant(4, rat(3, 4)));
    assert_eq!(report.rhs_limsup, Element::constant(4, rat(2, 3)));
}

#[test]
fn corollary_single_event_first_sample_is_t_of_q() {
    let space = ProbSpace::new(vec![rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
    let t = CondExp::new(space, vec![vec![0], vec![1, 2]]).unwrap();
    let events = PeriodicSeq::constant(BandProjection::new(3, [0, 1]).unwrap());
    let r = corollary_m10(&t, &events, &[1]).unwrap();
    let tq = Element::from_rationals([int(1), rat(1, 2), rat(1, 2)]).unwrap();
    assert_eq!(r.bound.rhs_samples[0].value, tq);
    assert!(r.displayed_matches);
}

#[test]
fn borel_cantelli_closed_forms() {
    let half = rat(1, 2);
    let (sweep, monotone) = borel_cantelli_sweep(std::slice::from_ref(&half), 9).unwrap();
    assert!(monotone);
    for (i, r) in sweep.iter().enumerate() {
        let n = (i + 1) as i64;
        assert_eq!(r.fls_ratio, rat(n, n + 1));
        assert_eq!(r.union_value, Rational::one() - rat(1, 1 << n));
        assert!(r.certificate_holds && r.pairwise_independent);
    }
}

#[test]
fn borel_cantelli_ratio_is_not_monotone_for_varying_p() {
    let ps = [rat(9, 10), rat(1, 100)];
    let (sweep, monotone) = borel_cantelli_sweep(&ps, 2).unwrap();
    assert!(!monotone);
    assert!(sweep[1].fls_ratio < sweep[0].fls_ratio);
    assert!(borel_cantelli(&ps, 2).unwrap().certificate_holds);
}
