//! Eventually periodic sequences and finite directed grids, with exact order
//! limits and nonnegative series.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::band::BandProjection;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::ExtValue;

/// Anything with an atom dimension.
pub trait Dimensioned {
    fn dim(&self) -> usize;
}

impl Dimensioned for Element {
    fn dim(&self) -> usize {
        Element::dim(self)
    }
}

impl Dimensioned for BandProjection {
    fn dim(&self) -> usize {
        BandProjection::dim(self)
    }
}

/// `prefix` followed by `cycle` repeated forever. Terms are indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicSeq<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone> PeriodicSeq<T> {
    /// Builds a sequence without dimension checks. Use [`PeriodicSeq::new`]
    /// for dimensioned terms.
    pub fn from_parts(prefix: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::PreconditionViolated("cycle must be nonempty".into()));
        }
        Ok(PeriodicSeq { prefix, cycle })
    }

    pub fn constant(x: T) -> Self {
        PeriodicSeq { prefix: Vec::new(), cycle: vec![x] }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    pub fn term(&self, n: usize) -> &T {
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `len` terms.
    pub fn window(&self, len: usize) -> Vec<&T> {
        (0..len).map(|n| self.term(n)).collect()
    }

    /// One representative of every term value with index `>= beta`.
    pub fn tail_terms(&self, beta: usize) -> impl Iterator<Item = &T> {
        let start = beta.min(self.prefix.len());
        self.prefix[start..].iter().chain(self.cycle.iter())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> PeriodicSeq<U> {
        PeriodicSeq {
            prefix: self.prefix.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
    }

    pub fn try_map<U, F: Fn(&T) -> Result<U>>(&self, f: F) -> Result<PeriodicSeq<U>> {
        Ok(PeriodicSeq {
            prefix: self.prefix.iter().map(&f).collect::<Result<_>>()?,
            cycle: self.cycle.iter().map(&f).collect::<Result<_>>()?,
        })
    }

    /// Termwise combination; the result has prefix `max` and cycle `lcm` of the
    /// two shapes.
    pub fn try_zip_with<U: Clone, V, F>(&self, other: &PeriodicSeq<U>, f: F) -> Result<PeriodicSeq<V>>
    where
        F: Fn(&T, &U) -> Result<V>,
    {
        let p = self.prefix_len().max(other.prefix_len());
        let l = self.cycle_len().lcm(&other.cycle_len());
        let prefix = (0..p).map(|n| f(self.term(n), other.term(n))).collect::<Result<_>>()?;
        let cycle = (p..p + l).map(|n| f(self.term(n), other.term(n))).collect::<Result<_>>()?;
        Ok(PeriodicSeq { prefix, cycle })
    }
}

impl<T: Clone + Dimensioned> PeriodicSeq<T> {
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        let seq = PeriodicSeq::from_parts(prefix, cycle)?;
        let d = seq.cycle[0].dim();
        for t in seq.prefix.iter().chain(&seq.cycle) {
            if t.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: t.dim() });
            }
        }
        Ok(seq)
    }

    pub fn dim(&self) -> usize {
        self.cycle[0].dim()
    }
}

#[derive(Deserialize)]
struct RawSeq<T> {
    #[serde(default = "Vec::new")]
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<'de> Deserialize<'de> for PeriodicSeq<Element> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawSeq::<Element>::deserialize(d)?;
        PeriodicSeq::new(raw.prefix, raw.cycle).map_err(serde::de::Error::custom)
    }
}

/// Band sequences in textual form, before the atom count is known.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct RawBandSeq {
    #[serde(default)]
    pub prefix: Vec<Vec<usize>>,
    pub cycle: Vec<Vec<usize>>,
}

impl RawBandSeq {
    pub fn resolve(&self, dim: usize) -> Result<PeriodicSeq<BandProjection>> {
        let mk = |v: &Vec<usize>| BandProjection::new(dim, v.iter().copied());
        PeriodicSeq::new(
            self.prefix.iter().map(mk).collect::<Result<_>>()?,
            self.cycle.iter().map(mk).collect::<Result<_>>()?,
        )
    }
}

impl PeriodicSeq<Element> {
    /// `sup {x_n : n >= beta}`.
    pub fn tail_sup(&self, beta: usize) -> Element {
        Element::sup(self.tail_terms(beta)).expect("uniform dimension")
    }

    /// `inf {x_n : n >= beta}`.
    pub fn tail_inf(&self, beta: usize) -> Element {
        Element::inf(self.tail_terms(beta)).expect("uniform dimension")
    }

    pub fn sup(&self) -> Element {
        self.tail_sup(0)
    }

    pub fn inf(&self) -> Element {
        self.tail_inf(0)
    }

    /// `inf_beta sup_{n >= beta} x_n`: the coordinatewise max over the cycle.
    pub fn limsup(&self) -> Element {
        Element::sup(&self.cycle).expect("uniform dimension")
    }

    /// `sup_beta inf_{n >= beta} x_n`: the coordinatewise min over the cycle.
    pub fn liminf(&self) -> Element {
        Element::inf(&self.cycle).expect("uniform dimension")
    }

    /// The order limit, when `limsup == liminf`.
    pub fn order_limit(&self) -> Option<Element> {
        let (hi, lo) = (self.limsup(), self.liminf());
        (hi == lo).then_some(hi)
    }

    /// `sum_{n >= from} x_n` for cone terms, exactly. A coordinate diverges
    /// when some cycle term is positive there or a summed prefix term is
    /// infinite there.
    pub fn series_sum(&self, from: usize) -> Result<Element> {
        if !self.tail_terms(0).all(Element::is_cone) {
            return Err(Error::PreconditionViolated("series terms must be in the cone".into()));
        }
        let d = self.dim();
        let mut acc = Element::zero(d);
        for x in &self.prefix[from.min(self.prefix.len())..] {
            acc = acc.add(x)?;
        }
        let diverging = self.limsup();
        let tail = diverging.map(|c| if c.is_positive() { ExtValue::Infinity } else { ExtValue::zero() });
        acc.add(&tail)
    }

    pub fn is_cone(&self) -> bool {
        self.tail_terms(0).all(Element::is_cone)
    }

    pub fn is_finite(&self) -> bool {
        self.tail_terms(0).all(Element::is_finite)
    }
}

impl PeriodicSeq<BandProjection> {
    pub fn tail_sup(&self, beta: usize) -> BandProjection {
        BandProjection::sup(self.tail_terms(beta)).expect("uniform dimension")
    }

    pub fn tail_inf(&self, beta: usize) -> BandProjection {
        BandProjection::inf(self.tail_terms(beta)).expect("uniform dimension")
    }

    /// Atoms hit infinitely often.
    pub fn limsup(&self) -> BandProjection {
        BandProjection::sup(&self.cycle).expect("uniform dimension")
    }

    /// Atoms hit eventually always.
    pub fn liminf(&self) -> BandProjection {
        BandProjection::inf(&self.cycle).expect("uniform dimension")
    }
}

/// A net over `{0..=m} x {0..=m}` with the product order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteDirectedGrid {
    m: usize,
    values: Vec<Element>,
}

impl FiniteDirectedGrid {
    /// `values` in row-major order, `(m + 1)^2` of them.
    pub fn new(m: usize, values: Vec<Element>) -> Result<Self> {
        let side = m + 1;
        if values.len() != side * side {
            return Err(Error::ShapeMismatch(format!(
                "grid of side {} needs {} values, got {}",
                side,
                side * side,
                values.len()
            )));
        }
        let d = values[0].dim();
        if let Some(v) = values.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch { left: d, right: v.dim() });
        }
        Ok(FiniteDirectedGrid { m, values })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Element>(m: usize, mut f: F) -> Result<Self> {
        let values = (0..=m).flat_map(|i| (0..=m).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        FiniteDirectedGrid::new(m, values)
    }

    pub fn side(&self) -> usize {
        self.m + 1
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.values[i * self.side() + j]
    }

    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> {
        let m = self.m;
        (0..=m).flat_map(move |i| (0..=m).map(move |j| (i, j)))
    }

    fn above(&self, beta: (usize, usize)) -> impl Iterator<Item = &Element> {
        self.indices()
            .filter(move |&(i, j)| i >= beta.0 && j >= beta.1)
            .map(move |(i, j)| self.get(i, j))
    }

    pub fn tail_sup(&self, beta: (usize, usize)) -> Element {
        Element::sup(self.above(beta)).expect("nonempty tail")
    }

    pub fn tail_inf(&self, beta: (usize, usize)) -> Element {
        Element::inf(self.above(beta)).expect("nonempty tail")
    }

    pub fn sup(&self) -> Element {
        Element::sup(&self.values).expect("nonempty")
    }

    pub fn inf(&self) -> Element {
        Element::inf(&self.values).expect("nonempty")
    }

    pub fn limsup(&self) -> Element {
        let tails: Vec<Element> = self.indices().map(|b| self.tail_sup(b)).collect();
        Element::inf(&tails).expect("nonempty")
    }

    pub fn liminf(&self) -> Element {
        let tails: Vec<Element> = self.indices().map(|b| self.tail_inf(b)).collect();
        Element::sup(&tails).expect("nonempty")
    }

    pub fn try_zip_with<F>(&self, other: &FiniteDirectedGrid, f: F) -> Result<FiniteDirectedGrid>
    where
        F: Fn(&Element, &Element) -> Result<Element>,
    {
        if self.m != other.m {
            return Err(Error::ShapeMismatch("grids of different sides".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        FiniteDirectedGrid::new(self.m, values)
    }

    /// Decreasing in the product order.
    pub fn is_decreasing(&self) -> bool {
        self.indices().all(|(i, j)| {
            let x = self.get(i, j);
            (i == self.m || self.get(i + 1, j).leq(x).unwrap_or(false))
                && (j == self.m || self.get(i, j + 1).leq(x).unwrap_or(false))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(items: &[&str]) -> Element {
        Element::parse(items).unwrap()
    }

    fn seq(prefix: &[&[&str]], cycle: &[&[&str]]) -> PeriodicSeq<Element> {
        PeriodicSeq::new(prefix.iter().map(|x| el(x)).collect(), cycle.iter().map(|x| el(x)).collect())
            .unwrap()
    }

    #[test]
    fn term_indexing() {
        let s = seq(&[&["9"]], &[&["1"], &["2"]]);
        assert_eq!(s.term(0), &el(&["9"]));
        assert_eq!(s.term(1), &el(&["1"]));
        assert_eq!(s.term(4), &el(&["2"]));
        assert!(PeriodicSeq::<Element>::new(vec![], vec![]).is_err());
        assert!(PeriodicSeq::new(vec![el(&["1"])], vec![el(&["1", "2"])]).is_err());
    }

    #[test]
    fn alternating_has_no_limit() {
        let s = seq(&[], &[&["1", "0"], &["0", "1"]]);
        assert_eq!(s.tail_sup(0), el(&["1", "1"]));
        assert_eq!(s.limsup(), el(&["1", "1"]));
        assert_eq!(s.liminf(), el(&["0", "0"]));
        assert_eq!(s.order_limit(), None);
    }

    #[test]
    fn eventually_constant_limit() {
        let s = seq(&[&["9", "9"]], &[&["2", "2"]]);
        assert_eq!(s.order_limit(), Some(el(&["2", "2"])));
        let c = PeriodicSeq::constant(el(&["1/3", "inf"]));
        assert_eq!(c.tail_sup(5), c.tail_inf(5));
    }

    #[test]
    fn series_examples() {
        assert_eq!(seq(&[], &[&["1/2", "0"]]).series_sum(0).unwrap(), el(&["inf", "0"]));
        let s = seq(&[&["3", "0"], &["4", "0"]], &[&["0", "0"]]);
        assert_eq!(s.series_sum(0).unwrap(), el(&["7", "0"]));
        assert_eq!(s.series_sum(1).unwrap(), el(&["4", "0"]));
        assert!(seq(&[], &[&["-1"]]).series_sum(0).is_err());
    }

    #[test]
    fn zip_uses_lcm_cycle() {
        let a = seq(&[&["1"]], &[&["0"], &["1"]]);
        let b = seq(&[], &[&["1"], &["2"], &["3"]]);
        let s = a.try_zip_with(&b, |x, y| x.add(y)).unwrap();
        assert_eq!(s.prefix_len(), 1);
        assert_eq!(s.cycle_len(), 6);
        for n in 0..20 {
            assert_eq!(s.term(n), &a.term(n).add(b.term(n)).unwrap());
        }
    }

    #[test]
    fn infinite_product_counterexample() {
        // u = inf, x_n = 1/n for n <= 8, then 0.
        let prefix: Vec<Element> = (1..=8).map(|n| el(&[&format!("1/{}", n)])).collect();
        let x = PeriodicSeq::new(prefix, vec![el(&["0"])]).unwrap();
        let u = el(&["inf"]);
        let ux = x.try_map(|t| u.mul(t)).unwrap();
        let prefix_inf = Element::inf(ux.prefix()).unwrap();
        assert_eq!(prefix_inf, el(&["inf"]));
        assert_eq!(u.mul(&x.inf()).unwrap(), el(&["0"]));
        assert_ne!(prefix_inf, u.mul(&x.inf()).unwrap());
    }

    #[test]
    fn grid_limits() {
        let g = FiniteDirectedGrid::from_fn(2, |i, j| Element::from_ints(&[(i + j) as i64])).unwrap();
        assert_eq!(g.sup(), Element::from_ints(&[4]));
        assert_eq!(g.inf(), Element::from_ints(&[0]));
        assert_eq!(g.limsup(), Element::from_ints(&[4]));
        assert_eq!(g.liminf(), Element::from_ints(&[4]));
        assert_eq!(g.tail_inf((1, 0)), Element::from_ints(&[1]));
        assert!(!g.is_decreasing());
        assert!(FiniteDirectedGrid::new(1, vec![Element::zero(1)]).is_err());
    }

    #[test]
    fn band_sequences() {
        let b = |v: &[usize]| BandProjection::new(3, v.iter().copied()).unwrap();
        let s = PeriodicSeq::new(vec![b(&[2])], vec![b(&[0, 1]), b(&[0])]).unwrap();
        assert_eq!(s.limsup().to_vec(), vec![0, 1]);
        assert_eq!(s.liminf().to_vec(), vec![0]);
        assert_eq!(s.tail_sup(0).to_vec(), vec![0, 1, 2]);
        let raw: RawBandSeq = serde_json::from_str(r#"{"cycle": [[0,1],[0,2]]}"#).unwrap();
        assert_eq!(raw.resolve(4).unwrap().cycle_len(), 2);
        assert!(raw.resolve(2).is_err());
    }

    #[test]
    fn element_seq_textual_form() {
        let s: PeriodicSeq<Element> =
            serde_json::from_str(r#"{"prefix": [["1","inf"]], "cycle": [["0","1/2"]]}"#).unwrap();
        assert_eq!(s.prefix_len(), 1);
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"prefix":[["1","inf"]],"cycle":[["0","1/2"]]}"#
        );
    }
}
