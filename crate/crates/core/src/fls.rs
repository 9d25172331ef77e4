//! Feng–Li–Shen type lower bounds for limsup events under a conditional
//! expectation.
//!
//! Given weights `v_i` in the range of `T` and events `Q_i`, the quantities
//!
//! ```text
//! K_{q,n}    = Σ_{i=q..n} v_i T Q_i e
//! S_{q,n}    = Σ_{q<=i,j<=n} v_i v_j T Q_i Q_j e
//! R_{q,n}    = Σ_{i=q..n} v_i v_1 T Q_i Q_1 e
//! R_{q,n}(j) = Σ_{i=q..n} v_j v_i T Q_i Q_j e
//! ```
//!
//! bound `T P limsup Q_{v_n} e` from below by `limsup P (S*_{1,n} K_{1,n}^2)`,
//! where `P` projects onto the band of the infinite part of `K_{1,inf}`.
//!
//! Inputs are eventually periodic, so every index `i` falls in one of finitely
//! many classes (the prefix positions and the cycle positions of the joint
//! sequence). Sums become class counts times a precomputed table, and along
//! each residue class of `n` modulo the cycle length the counts are affine in
//! the number of completed cycles. That turns every limsup below into a limit
//! of a ratio of polynomials, decided exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::band::{band_of, BandProjection};
use crate::cond_exp::{CondExp, ProbSpace};
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::{rational_str, rational_to_f64, ExtValue, Rational};
use crate::parts::{component, finite_part, infinite_part, star};
use crate::sequences::{PeriodicSeq, RawBandSeq};
use crate::trend::{ratio_limit, Poly};

/// Input document for the bound: a probability space, an optional partition
/// (trivial when absent), weights, events and checkpoints.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundDoc {
    pub space: ProbSpace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights_seq: Option<PeriodicSeq<Element>>,
    pub events_seq: RawBandSeq,
    #[serde(default)]
    pub checkpoints: Vec<usize>,
}

impl BoundDoc {
    pub fn cond(&self) -> Result<CondExp> {
        match &self.partition {
            Some(p) => CondExp::new(self.space.clone(), p.clone()),
            None => Ok(CondExp::trivial(self.space.clone())),
        }
    }

    pub fn events(&self) -> Result<PeriodicSeq<BandProjection>> {
        self.events_seq.resolve(self.space.dim())
    }

    pub fn seq(&self) -> Result<WeightedEventSeq> {
        let weights = self
            .weights_seq
            .clone()
            .ok_or_else(|| Error::Parse("missing field `weights_seq`".into()))?;
        WeightedEventSeq::new(self.cond()?, weights, self.events()?)
    }

    pub fn from_seq(seq: &WeightedEventSeq, checkpoints: Vec<usize>) -> Self {
        let cond = seq.cond();
        let bands = |v: &[BandProjection]| v.iter().map(BandProjection::to_vec).collect();
        BoundDoc {
            space: cond.space().clone(),
            partition: Some(cond.partition().to_vec()),
            weights_seq: Some(seq.weights().clone()),
            events_seq: RawBandSeq { prefix: bands(seq.events().prefix()), cycle: bands(seq.events().cycle()) },
            checkpoints,
        }
    }
}

/// Upper summation limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upto {
    At(usize),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Count {
    Finite(u64),
    Infinite,
}

/// A conditional triple with weights `(v_n)` and events `(Q_n)`.
#[derive(Clone, Debug)]
pub struct WeightedEventSeq {
    cond: CondExp,
    weights: PeriodicSeq<Element>,
    events: PeriodicSeq<BandProjection>,
    prefix: usize,
    cycle: usize,
    /// `v_c` per class.
    v: Vec<Element>,
    /// `Q_c ∘ P_{v_c}` per class.
    qv: Vec<BandProjection>,
    /// `v_c T Q_c e`.
    k: Vec<Element>,
    /// `v_a v_b T Q_a Q_b e`.
    g: Vec<Vec<Element>>,
}

impl WeightedEventSeq {
    pub fn new(cond: CondExp, weights: PeriodicSeq<Element>, events: PeriodicSeq<BandProjection>) -> Result<Self> {
        let d = cond.dim();
        if weights.dim() != d {
            return Err(Error::DimensionMismatch { left: d, right: weights.dim() });
        }
        if events.dim() != d {
            return Err(Error::DimensionMismatch { left: d, right: events.dim() });
        }
        for v in weights.tail_terms(0) {
            if !v.is_finite() || !v.is_cone() {
                return Err(Error::PreconditionViolated(format!("weight {} is not finite and nonnegative", v)));
            }
            if !cond.is_block_constant(v) {
                return Err(Error::PreconditionViolated(format!("weight {} is not in the range of T", v)));
            }
        }
        let prefix = weights.prefix_len().max(events.prefix_len());
        let cycle = weights.cycle_len().lcm(&events.cycle_len());
        let classes = prefix + cycle;
        let v: Vec<Element> = (0..classes).map(|n| weights.term(n).clone()).collect();
        let q: Vec<BandProjection> = (0..classes).map(|n| events.term(n).clone()).collect();
        let qv = q
            .iter()
            .zip(&v)
            .map(|(q, v)| q.meet(&band_of(v)))
            .collect::<Result<Vec<_>>>()?;
        let k = (0..classes)
            .map(|c| v[c].mul(&cond.apply(&q[c].unit())?))
            .collect::<Result<Vec<_>>>()?;
        let mut g: Vec<Vec<Element>> = vec![Vec::with_capacity(classes); classes];
        for a in 0..classes {
            for b in 0..classes {
                let entry = if b < a {
                    g[b][a].clone()
                } else {
                    let tq = cond.apply(&q[a].meet(&q[b])?.unit())?;
                    v[a].mul(&v[b])?.mul(&tq)?
                };
                g[a].push(entry);
            }
        }
        Ok(WeightedEventSeq { cond, weights, events, prefix, cycle, v, qv, k, g })
    }

    pub fn cond(&self) -> &CondExp {
        &self.cond
    }

    pub fn weights(&self) -> &PeriodicSeq<Element> {
        &self.weights
    }

    pub fn events(&self) -> &PeriodicSeq<BandProjection> {
        &self.events
    }

    pub fn dim(&self) -> usize {
        self.cond.dim()
    }

    /// Length of the joint prefix of weights and events.
    pub fn prefix_len(&self) -> usize {
        self.prefix
    }

    /// Length of the joint cycle of weights and events.
    pub fn cycle_len(&self) -> usize {
        self.cycle
    }

    /// Class of the 1-based index `i`.
    fn class_of(&self, i: usize) -> usize {
        let j = i - 1;
        if j < self.prefix {
            j
        } else {
            self.prefix + (j - self.prefix) % self.cycle
        }
    }

    /// `v_i` for a 1-based index.
    pub fn weight(&self, i: usize) -> &Element {
        &self.v[self.class_of(i)]
    }

    /// `Q_i` for a 1-based index.
    pub fn event(&self, i: usize) -> &BandProjection {
        self.events.term(i - 1)
    }

    fn check_range(&self, q: usize, upto: Upto) -> Result<()> {
        if q == 0 {
            return Err(Error::IndexError("indices start at 1".into()));
        }
        if let Upto::At(n) = upto {
            if n < q {
                return Err(Error::IndexError(format!("empty range {}..={}", q, n)));
            }
        }
        Ok(())
    }

    /// Class multiplicities over `q..=n`; an empty range gives all zeros.
    fn counts(&self, q: usize, upto: Upto) -> Vec<Count> {
        let classes = self.prefix + self.cycle;
        let mut out = vec![Count::Finite(0); classes];
        let lo = q.max(1) - 1;
        for (a, slot) in out.iter_mut().enumerate().take(self.prefix) {
            let inside = match upto {
                Upto::At(n) => lo <= a && a < n,
                Upto::Infinity => lo <= a,
            };
            if inside {
                *slot = Count::Finite(1);
            }
        }
        let start = lo.max(self.prefix) - self.prefix;
        for c in 0..self.cycle {
            out[self.prefix + c] = match upto {
                Upto::Infinity => Count::Infinite,
                Upto::At(n) if n <= self.prefix || n <= lo => Count::Finite(0),
                Upto::At(n) => {
                    let end = n - 1 - self.prefix;
                    Count::Finite(count_congruent(start, end, c, self.cycle))
                }
            };
        }
        out
    }

    fn sum1(&self, counts: &[Count], vals: &[Element]) -> Element {
        let mut acc = Element::zero(self.dim());
        for (cnt, val) in counts.iter().zip(vals) {
            acc = acc.add(&scale_count(val, *cnt)).expect("same dimension");
        }
        acc
    }

    fn sum2(&self, counts: &[Count]) -> Element {
        let mut acc = Element::zero(self.dim());
        for (a, ca) in counts.iter().enumerate() {
            for (b, cb) in counts.iter().enumerate() {
                let cnt = match (ca, cb) {
                    (Count::Finite(x), Count::Finite(y)) => Count::Finite(x * y),
                    (Count::Finite(0), _) | (_, Count::Finite(0)) => Count::Finite(0),
                    _ => Count::Infinite,
                };
                acc = acc.add(&scale_count(&self.g[a][b], cnt)).expect("same dimension");
            }
        }
        acc
    }

    fn column(&self, j: usize) -> Vec<Element> {
        let cj = self.class_of(j);
        (0..self.g.len()).map(|a| self.g[a][cj].clone()).collect()
    }

    /// `K_{q,n}`.
    pub fn k(&self, q: usize, upto: Upto) -> Result<Element> {
        self.check_range(q, upto)?;
        Ok(self.sum1(&self.counts(q, upto), &self.k))
    }

    /// `S_{q,n}`.
    pub fn s(&self, q: usize, upto: Upto) -> Result<Element> {
        self.check_range(q, upto)?;
        Ok(self.sum2(&self.counts(q, upto)))
    }

    /// `S_{q,n}` with an empty range allowed (`n = q - 1` gives zero).
    fn s_or_zero(&self, q: usize, n: usize) -> Element {
        self.sum2(&self.counts(q, Upto::At(n)))
    }

    /// `R_{q,n}`.
    pub fn r(&self, q: usize, upto: Upto) -> Result<Element> {
        self.r_j(q, upto, 1)
    }

    /// `R_{q,n}(j)`.
    pub fn r_j(&self, q: usize, upto: Upto, j: usize) -> Result<Element> {
        self.check_range(q, upto)?;
        if j == 0 || matches!(upto, Upto::At(n) if j > n) {
            return Err(Error::IndexError(format!("j = {} out of range", j)));
        }
        Ok(self.sum1(&self.counts(q, upto), &self.column(j)))
    }

    /// `⋁_{i=q..n} Q_{v_i} e` as a band.
    fn union_band(&self, q: usize, n: usize) -> BandProjection {
        let counts = self.counts(q, Upto::At(n));
        let mut out = BandProjection::empty(self.dim());
        for (c, cnt) in counts.iter().enumerate() {
            if *cnt != Count::Finite(0) {
                out = out.join(&self.qv[c]).expect("same dimension");
            }
        }
        out
    }

    /// Band of `limsup_n Q_{v_n}`: classes that recur forever.
    pub fn limsup_band(&self) -> BandProjection {
        BandProjection::sup(&self.qv[self.prefix..]).expect("nonempty cycle")
    }

    /// The band of `(K_{1,inf})^inf`.
    pub fn divergence_band(&self) -> BandProjection {
        band_of(&infinite_part(&self.k(1, Upto::Infinity).expect("valid range")))
    }

    /// `S*_{q,n} K_{q,n}^2`.
    pub fn ratio(&self, q: usize, n: usize) -> Result<Element> {
        let k = self.k(q, Upto::At(n))?;
        star(&self.s(q, Upto::At(n))?).mul(&k.mul(&k)?)
    }

    /// Class counts over `q..=n` as polynomials in `m`, for
    /// `n = base + m * cycle` with `base >= max(q, prefix)`.
    fn count_polys(&self, q: usize, base: usize) -> Vec<Poly> {
        self.counts(q, Upto::At(base))
            .into_iter()
            .enumerate()
            .map(|(c, cnt)| {
                let Count::Finite(c0) = cnt else { unreachable!("finite range") };
                let slope = if c >= self.prefix { Rational::one() } else { Rational::zero() };
                Poly::affine(Rational::from_integer(BigInt::from(c0)), slope)
            })
            .collect()
    }

    fn k_poly(&self, counts: &[Poly], omega: usize) -> Poly {
        counts
            .iter()
            .zip(&self.k)
            .fold(Poly::zero(), |acc, (cnt, k)| acc.add(&cnt.scale(finite_at(k, omega))))
    }

    fn s_poly(&self, counts: &[Poly], omega: usize) -> Poly {
        let mut acc = Poly::zero();
        for (a, ca) in counts.iter().enumerate() {
            for (b, cb) in counts.iter().enumerate() {
                let gab = finite_at(&self.g[a][b], omega);
                if !gab.is_zero() {
                    acc = acc.add(&ca.mul(cb).scale(gab));
                }
            }
        }
        acc
    }

    /// Exact `limsup_n P (S*_{q,n} K_{q,n}^2)` for the band `p`.
    pub fn ratio_limsup(&self, q: usize, p: &BandProjection) -> Result<Element> {
        self.check_range(q, Upto::Infinity)?;
        let d = self.dim();
        let start = q.max(self.prefix).max(1);
        let residues: Vec<Vec<Poly>> = (0..self.cycle).map(|r| self.count_polys(q, start + r)).collect();
        let mut coords = Vec::with_capacity(d);
        for omega in 0..d {
            if !p.contains(omega) {
                coords.push(ExtValue::zero());
                continue;
            }
            let mut best = ExtValue::zero();
            for counts in &residues {
                let s = self.s_poly(counts, omega);
                if s.is_zero() {
                    continue;
                }
                let k = self.k_poly(counts, omega);
                best = ExtValue::max(&best, &ratio_limit(&k.mul(&k), &s)?);
            }
            coords.push(best);
        }
        Element::new(coords)
    }
}

fn finite_at(x: &Element, omega: usize) -> &Rational {
    x.coords()[omega].as_finite().expect("finite table entry")
}

fn scale_count(x: &Element, cnt: Count) -> Element {
    match cnt {
        Count::Finite(c) => x.scale(&Rational::from_integer(BigInt::from(c))).expect("nonnegative scale"),
        Count::Infinite => x.map(|v| if v.is_positive() { ExtValue::Infinity } else { ExtValue::zero() }),
    }
}

/// `#{t in [lo, hi] : t ≡ c (mod l)}`.
fn count_congruent(lo: usize, hi: usize, c: usize, l: usize) -> u64 {
    if hi < lo {
        return 0;
    }
    let upto = |x: usize| if x < c { 0 } else { (x - c) / l + 1 };
    let below = if lo == 0 { 0 } else { upto(lo - 1) };
    (upto(hi) - below) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhsSample {
    pub n: usize,
    pub value: Element,
}

/// `T(P ⋁_{i=q..n} Q_{v_i} e) >= P(S*_{q,n} K_{q,n}^2)` at one `(q, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub q: usize,
    pub n: usize,
    pub union_value: Element,
    pub bound: Element,
    pub holds: bool,
}

/// When the finite part of `K_{1,inf}` vanishes the projection can be dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnprojectedCheck {
    pub lhs: Element,
    pub rhs_limsup: Element,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// `T P limsup_n Q_{v_n} e`.
    pub lhs: Element,
    /// Atoms of the band `P`.
    pub band: BandProjection,
    pub finite_part_vanishes: bool,
    /// `P(S*_{1,n} K_{1,n}^2)` at the checkpoints.
    pub rhs_samples: Vec<RhsSample>,
    /// Exact `limsup_n P(S*_{1,n} K_{1,n}^2)`.
    pub rhs_limsup: Element,
    pub certificates: Vec<Certificate>,
    /// Whether `lhs` dominates every individual sample (not implied by the
    /// bound when the sequence has a prefix).
    pub samples_dominated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unprojected: Option<UnprojectedCheck>,
    pub verdict: bool,
}

impl BoundReport {
    pub fn failed_certificates(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.holds)
    }
}

fn normalize_checkpoints(checkpoints: &[usize]) -> Result<Vec<usize>> {
    if checkpoints.is_empty() {
        return Err(Error::EmptyCheckpoints);
    }
    if checkpoints.contains(&0) {
        return Err(Error::IndexError("checkpoints start at 1".into()));
    }
    let mut ns = checkpoints.to_vec();
    ns.sort_unstable();
    ns.dedup();
    Ok(ns)
}

/// The generalized Feng–Li–Shen bound with per-`(q, n)` certificates.
///
/// Certificates are issued for every `q` in `{1} ∪ checkpoints` and every
/// checkpoint `n >= q`. The verdict requires every certificate to hold and
/// `lhs >= rhs_limsup`.
pub fn theorem_m7(seq: &WeightedEventSeq, checkpoints: &[usize]) -> Result<BoundReport> {
    let ns = normalize_checkpoints(checkpoints)?;
    let t = seq.cond();
    let k_inf = seq.k(1, Upto::Infinity)?;
    let p = seq.divergence_band();
    let finite_part_vanishes = finite_part(&k_inf).is_zero();

    let limsup_e = seq.limsup_band().unit();
    let lhs = t.apply(&p.apply(&limsup_e)?)?;

    let rhs_samples = ns
        .iter()
        .map(|&n| Ok(RhsSample { n, value: p.apply(&seq.ratio(1, n)?)? }))
        .collect::<Result<Vec<_>>>()?;

    let mut qs = vec![1];
    qs.extend(ns.iter().copied().filter(|&n| n > 1));
    let mut certificates = Vec::new();
    for &q in &qs {
        for &n in ns.iter().filter(|&&n| n >= q) {
            let union_value = t.apply(&p.apply(&seq.union_band(q, n).unit())?)?;
            let bound = p.apply(&seq.ratio(q, n)?)?;
            let holds = bound.leq(&union_value)?;
            certificates.push(Certificate { q, n, union_value, bound, holds });
        }
    }

    let rhs_limsup = seq.ratio_limsup(1, &p)?;
    let samples_dominated = rhs_samples.iter().all(|s| s.value.leq(&lhs).unwrap_or(false));

    let unprojected = if finite_part_vanishes {
        let full = BandProjection::full(seq.dim());
        let lhs = t.apply(&limsup_e)?;
        let rhs_limsup = seq.ratio_limsup(1, &full)?;
        let holds = rhs_limsup.leq(&lhs)?;
        Some(UnprojectedCheck { lhs, rhs_limsup, holds })
    } else {
        None
    };

    let verdict = certificates.iter().all(|c| c.holds)
        && rhs_limsup.leq(&lhs)?
        && unprojected.as_ref().is_none_or(|u| u.holds);

    Ok(BoundReport {
        lhs,
        band: p,
        finite_part_vanishes,
        rhs_samples,
        rhs_limsup,
        certificates,
        samples_dominated,
        unprojected,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    #[serde(flatten)]
    pub bound: BoundReport,
    /// `(Σ_{i,j<=n} (Tq_i Tq_j)* T(q_i q_j))* (Σ_{i<=n} e_{Tq_i})^2` at the
    /// checkpoints.
    pub displayed_rhs: Vec<RhsSample>,
    /// The displayed form equals `S*_{1,n} K_{1,n}^2` with `v_n = (Tq_n)*`.
    pub displayed_matches: bool,
}

/// The bound specialized to `v_n = (T q_n)*` with `q_n = Q_n e`.
pub fn corollary_m10(
    t: &CondExp,
    events: &PeriodicSeq<BandProjection>,
    checkpoints: &[usize],
) -> Result<CorollaryReport> {
    let weights = events.try_map(|q| Ok(star(&t.apply(&q.unit())?)))?;
    let seq = WeightedEventSeq::new(t.clone(), weights, events.clone())?;
    let bound = theorem_m7(&seq, checkpoints)?;

    let d = t.dim();
    let mut displayed_rhs = Vec::new();
    let mut displayed_matches = true;
    for s in &bound.rhs_samples {
        let n = s.n;
        let tq: Vec<Element> = (1..=n).map(|i| t.apply(&events.term(i - 1).unit())).collect::<Result<_>>()?;
        let mut inner = Element::zero(d);
        let mut comp = Element::zero(d);
        for i in 0..n {
            comp = comp.add(&component(&tq[i]))?;
            for j in 0..n {
                let qq = t.apply(&events.term(i).meet(events.term(j))?.unit())?;
                inner = inner.add(&star(&tq[i].mul(&tq[j])?).mul(&qq)?)?;
            }
        }
        let value = star(&inner).mul(&comp.mul(&comp)?)?;
        displayed_matches &= value == seq.ratio(1, n)?;
        displayed_rhs.push(RhsSample { n, value });
    }
    Ok(CorollaryReport { bound, displayed_rhs, displayed_matches })
}

pub const MAX_BC_DEPTH: usize = 14;

/// One depth of the truncated product experiment. Every value is a constant
/// multiple of `e`, so plain rationals are reported.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BorelCantelliReport {
    pub depth: usize,
    #[serde(with = "rational_str")]
    pub union_value: Rational,
    #[serde(with = "rational_str")]
    pub fls_ratio: Rational,
    #[serde(with = "rational_str")]
    pub gap: Rational,
    #[serde(with = "rational_str")]
    pub k: Rational,
    #[serde(with = "rational_str")]
    pub s: Rational,
    pub certificate_holds: bool,
    pub k_squared_below_s: bool,
    pub pairwise_independent: bool,
    /// `S <= K^2 + K`, the bound pairwise independence gives.
    pub independence_bound_holds: bool,
}

/// Builds `{0,1}^N` with product weights and events `P_n = {bit n set}`, then
/// evaluates `T(⋁ P_n e)` and the bound `S*_{1,N} K_{1,N}^2` with `v = e`.
/// `ps` is cycled if shorter than `depth`; each `p_n` must lie in `(0, 1)`.
pub fn borel_cantelli(ps: &[Rational], depth: usize) -> Result<BorelCantelliReport> {
    if depth > MAX_BC_DEPTH {
        return Err(Error::DepthTooLarge { depth, max: MAX_BC_DEPTH });
    }
    if depth == 0 || ps.is_empty() {
        return Err(Error::PreconditionViolated("need depth >= 1 and at least one probability".into()));
    }
    if ps.iter().any(|p| !(p > &Rational::zero() && p < &Rational::one())) {
        return Err(Error::PreconditionViolated("probabilities must lie strictly between 0 and 1".into()));
    }
    let p_at = |n: usize| &ps[n % ps.len()];
    let atoms = 1usize << depth;
    let weights = (0..atoms)
        .map(|w| {
            (0..depth)
                .map(|n| if w >> n & 1 == 1 { p_at(n).clone() } else { Rational::one() - p_at(n) })
                .product()
        })
        .collect();
    let t = CondExp::trivial(ProbSpace::new(weights)?);
    let events: Vec<BandProjection> = (0..depth)
        .map(|n| BandProjection::new(atoms, (0..atoms).filter(|w| w >> n & 1 == 1)))
        .collect::<Result<_>>()?;

    let mut pairwise_independent = true;
    for i in 0..depth {
        for j in i + 1..depth {
            pairwise_independent &= t.is_independent(&events[i], &events[j])?;
        }
    }

    let e = Element::unit(atoms);
    let seq = WeightedEventSeq::new(
        t.clone(),
        PeriodicSeq::new(vec![e.clone(); depth], vec![e])?,
        PeriodicSeq::new(events.clone(), vec![BandProjection::empty(atoms)])?,
    )?;
    let k_el = seq.k(1, Upto::At(depth))?;
    let s_el = seq.s(1, Upto::At(depth))?;
    let union_el = t.apply(&BandProjection::sup(&events)?.unit())?;
    let ratio_el = star(&s_el).mul(&k_el.mul(&k_el)?)?;

    let constant = |x: &Element| {
        x.as_constant()
            .cloned()
            .ok_or_else(|| Error::PreconditionViolated("expected a constant element".into()))
    };
    let k = constant(&k_el)?;
    let s = constant(&s_el)?;
    let union_value = constant(&union_el)?;
    let fls_ratio = constant(&ratio_el)?;
    Ok(BorelCantelliReport {
        depth,
        gap: Rational::one() - &union_value,
        certificate_holds: fls_ratio <= union_value,
        k_squared_below_s: &k * &k <= s,
        independence_bound_holds: s <= &k * &k + &k,
        union_value,
        fls_ratio,
        k,
        s,
        pairwise_independent,
    })
}

/// Runs depths `1..=depth` and checks the ratio never decreases.
pub fn borel_cantelli_sweep(ps: &[Rational], depth: usize) -> Result<(Vec<BorelCantelliReport>, bool)> {
    let reports = (1..=depth).map(|n| borel_cantelli(ps, n)).collect::<Result<Vec<_>>>()?;
    let monotone = reports.windows(2).all(|w| w[0].fls_ratio <= w[1].fls_ratio);
    Ok((reports, monotone))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    Agrees,
    Disagrees,
    NoLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct M5Report {
    pub p: usize,
    pub q: usize,
    pub n_max: usize,
    /// `e_{S_{q,inf}} + S*_{q,inf} (S_{p,q-1} + 2 Σ_{j=p}^{q-1} R^f_{q,inf}(j))`.
    pub claimed: Element,
    /// Exact order limit of `S*_{q,n} S_{p,n}`, coordinatewise; `None` where
    /// the residue classes disagree.
    pub limit: Vec<Option<ExtValue>>,
    pub status: Vec<LimitStatus>,
    /// Coordinatewise min and max of the computed tail `n in [n_max/2, n_max]`.
    pub bracket_lo: Element,
    pub bracket_hi: Element,
    pub last: Element,
    pub agrees: bool,
}

/// Checks `S*_{q,n} S_{p,n} -> e_{S_{q,inf}} + S*_{q,inf}(S_{p,q-1} + 2 Σ R^f_{q,inf}(j))`.
pub fn m5_limit_check(seq: &WeightedEventSeq, q: usize, p: usize, n_max: usize) -> Result<M5Report> {
    if p == 0 || p > q || n_max < q {
        return Err(Error::IndexError(format!("need 1 <= p <= q <= n_max, got p={} q={} n_max={}", p, q, n_max)));
    }
    let d = seq.dim();
    let s_q_inf = seq.s(q, Upto::Infinity)?;
    let mut tail = seq.s_or_zero(p, q - 1);
    for j in p..q {
        let r = finite_part(&seq.r_j(q, Upto::Infinity, j)?);
        tail = tail.add(&r.scale(&Rational::from_integer(2.into()))?)?;
    }
    let claimed = component(&s_q_inf).add(&star(&s_q_inf).mul(&tail)?)?;

    let value_at = |n: usize| -> Result<Element> { star(&seq.s(q, Upto::At(n))?).mul(&seq.s(p, Upto::At(n))?) };
    let from = (n_max / 2).max(q);
    let mut bracket_lo = value_at(from)?;
    let mut bracket_hi = bracket_lo.clone();
    let mut last = bracket_lo.clone();
    for n in from + 1..=n_max {
        last = value_at(n)?;
        bracket_lo = bracket_lo.meet(&last)?;
        bracket_hi = bracket_hi.join(&last)?;
    }

    let start = q.max(seq.prefix_len()).max(1);
    let residues: Vec<(Vec<Poly>, Vec<Poly>)> = (0..seq.cycle_len())
        .map(|r| (seq.count_polys(q, start + r), seq.count_polys(p, start + r)))
        .collect();
    let mut limit = Vec::with_capacity(d);
    let mut status = Vec::with_capacity(d);
    for omega in 0..d {
        let mut values = Vec::new();
        for (cq, cp) in &residues {
            let den = seq.s_poly(cq, omega);
            values.push(if den.is_zero() {
                ExtValue::zero()
            } else {
                ratio_limit(&seq.s_poly(cp, omega), &den)?
            });
        }
        let lim = values.iter().all(|v| v == &values[0]).then(|| values[0].clone());
        status.push(match &lim {
            None => LimitStatus::NoLimit,
            Some(v) if v == &claimed.coords()[omega] => LimitStatus::Agrees,
            Some(_) => LimitStatus::Disagrees,
        });
        limit.push(lim);
    }
    let agrees = status.iter().all(|s| *s == LimitStatus::Agrees);
    Ok(M5Report { p, q, n_max, claimed, limit, status, bracket_lo, bracket_hi, last, agrees })
}

/// `S*_{1,n} K_{1,n}^2` in 64-bit floating point, for large-`n` diagnostics.
/// Never used for a verdict.
pub fn ratio_f64(seq: &WeightedEventSeq, n: usize) -> Result<Vec<f64>> {
    seq.check_range(1, Upto::At(n))?;
    let counts: Vec<f64> = seq
        .counts(1, Upto::At(n))
        .into_iter()
        .map(|c| match c {
            Count::Finite(c) => c as f64,
            Count::Infinite => f64::INFINITY,
        })
        .collect();
    let f = |x: &Element, w: usize| rational_to_f64(finite_at(x, w));
    Ok((0..seq.dim())
        .map(|w| {
            let k: f64 = counts.iter().zip(&seq.k).map(|(c, k)| c * f(k, w)).sum();
            let mut s = 0.0;
            for (a, ca) in counts.iter().enumerate() {
                for (b, cb) in counts.iter().enumerate() {
                    s += ca * cb * f(&seq.g[a][b], w);
                }
            }
            if s == 0.0 { 0.0 } else { k * k / s }
        })
        .collect())
}
