//! Elements of the sup-completion of an atomic Riesz space with unit `e`.
//!
//! An element is a vector of [`ExtValue`] coordinates, one per atom. A vector
//! with only rational coordinates is a member of `X` (which coincides with the
//! universal completion in this model); a vector with nonnegative coordinates
//! is a member of the positive cone. Addition, multiplication, meets and joins
//! are all coordinatewise, with `+inf` absorbing under addition and
//! `0 * inf = 0` under multiplication.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ext::{ExtValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    coords: Vec<ExtValue>,
}

/// Addition semantics for elements carrying `+inf` coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AddMode {
    /// `(-r) + inf = inf` everywhere.
    #[default]
    Absorbing,
    /// Reject a negative coordinate paired with `+inf`.
    StrictCone,
}

impl Element {
    pub fn new(coords: Vec<ExtValue>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyElement);
        }
        Ok(Element { coords })
    }

    pub fn from_rationals<I: IntoIterator<Item = Rational>>(it: I) -> Result<Self> {
        Element::new(it.into_iter().map(ExtValue::Finite).collect())
    }

    /// Convenience constructor; panics on an empty slice.
    pub fn from_ints(v: &[i64]) -> Self {
        Element::new(v.iter().map(|&n| ExtValue::from(n)).collect()).expect("nonempty")
    }

    /// Parses the textual form `["1/2", "inf", "3"]` given as separate strings.
    pub fn parse<S: AsRef<str>>(items: &[S]) -> Result<Self> {
        let coords = items
            .iter()
            .map(|s| s.as_ref().parse())
            .collect::<Result<Vec<ExtValue>>>()?;
        Element::new(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Element { coords: vec![ExtValue::zero(); dim.max(1)] }
    }

    /// The unit `e` (all ones).
    pub fn unit(dim: usize) -> Self {
        Element { coords: vec![ExtValue::one(); dim.max(1)] }
    }

    /// `c * e` for a rational constant `c`.
    pub fn constant(dim: usize, c: Rational) -> Self {
        Element { coords: vec![ExtValue::Finite(c); dim.max(1)] }
    }

    /// The top element `inf` (every coordinate infinite).
    pub fn infinity(dim: usize) -> Self {
        Element { coords: vec![ExtValue::Infinity; dim.max(1)] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[ExtValue] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> Result<&ExtValue> {
        self.coords
            .get(i)
            .ok_or(Error::IndexOutOfRange { index: i, len: self.dim() })
    }

    pub fn into_coords(self) -> Vec<ExtValue> {
        self.coords
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(ExtValue::is_finite)
    }

    pub fn is_cone(&self) -> bool {
        self.coords.iter().all(ExtValue::is_nonnegative)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(ExtValue::is_zero)
    }

    pub fn has_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// If every coordinate is the same rational, returns it.
    pub fn as_constant(&self) -> Option<&Rational> {
        let first = self.coords[0].as_finite()?;
        self.coords[1..]
            .iter()
            .all(|c| c.as_finite() == Some(first))
            .then_some(first)
    }

    fn check_dim(&self, other: &Element) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }

    fn zip_map<F>(&self, other: &Element, f: F) -> Result<Element>
    where
        F: Fn(&ExtValue, &ExtValue) -> ExtValue,
    {
        self.check_dim(other)?;
        Ok(Element { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect() })
    }

    pub fn map<F: Fn(&ExtValue) -> ExtValue>(&self, f: F) -> Element {
        Element { coords: self.coords.iter().map(f).collect() }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.add_with(other, AddMode::Absorbing)
    }

    pub fn add_strict(&self, other: &Element) -> Result<Element> {
        self.add_with(other, AddMode::StrictCone)
    }

    pub fn add_with(&self, other: &Element, mode: AddMode) -> Result<Element> {
        self.check_dim(other)?;
        if mode == AddMode::StrictCone {
            for (i, (a, b)) in self.coords.iter().zip(&other.coords).enumerate() {
                if (a.is_infinite() && b.is_negative()) || (b.is_infinite() && a.is_negative()) {
                    return Err(Error::UndefinedSum { index: i });
                }
            }
        }
        self.zip_map(other, ExtValue::add)
    }

    /// `x - a` for a finite `a`; `inf - r = inf`.
    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.check_dim(other)?;
        let mut coords = Vec::with_capacity(self.dim());
        for (i, (a, b)) in self.coords.iter().zip(&other.coords).enumerate() {
            let b = b.as_finite().ok_or(Error::UndefinedDifference { index: i })?;
            coords.push(match a {
                ExtValue::Finite(a) => ExtValue::Finite(a - b),
                ExtValue::Infinity => ExtValue::Infinity,
            });
        }
        Ok(Element { coords })
    }

    /// `-x`, defined for finite `x` only.
    pub fn neg(&self) -> Result<Element> {
        Element::zero(self.dim()).sub(self)
    }

    pub fn scale(&self, lambda: &Rational) -> Result<Element> {
        if lambda.is_negative() && self.has_infinite() {
            return Err(Error::NegativeScaleOnInfinite);
        }
        let l = ExtValue::Finite(lambda.clone());
        Ok(self.map(|c| l.mul(c).expect("nonnegative scale or finite element")))
    }

    /// Coordinatewise product with `0 * inf = 0` and `r * inf = inf` for `r > 0`.
    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_dim(other)?;
        let mut coords = Vec::with_capacity(self.dim());
        for (i, (a, b)) in self.coords.iter().zip(&other.coords).enumerate() {
            coords.push(a.mul(b).ok_or(Error::UndefinedProduct { index: i })?);
        }
        Ok(Element { coords })
    }

    pub fn join(&self, other: &Element) -> Result<Element> {
        self.zip_map(other, ExtValue::max)
    }

    pub fn meet(&self, other: &Element) -> Result<Element> {
        self.zip_map(other, ExtValue::min)
    }

    pub fn leq(&self, other: &Element) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b))
    }

    /// Disjointness of `|x|` and `|y|`.
    pub fn disjoint(&self, other: &Element) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a.is_zero() || b.is_zero()))
    }

    pub fn pos_part(&self) -> Element {
        self.map(|c| c.max(&ExtValue::zero()))
    }

    /// `x^- = -(x ∧ 0)`; always finite.
    pub fn neg_part(&self) -> Element {
        self.map(|c| match c {
            ExtValue::Finite(r) if r.is_negative() => ExtValue::Finite(-r),
            _ => ExtValue::zero(),
        })
    }

    pub fn abs(&self) -> Element {
        self.map(|c| match c {
            ExtValue::Finite(r) => ExtValue::Finite(r.abs()),
            ExtValue::Infinity => ExtValue::Infinity,
        })
    }

    /// Coordinatewise `p`-th power, `inf^p = inf`. Requires `p >= 1`.
    pub fn int_power(&self, p: u32) -> Result<Element> {
        if p == 0 {
            return Err(Error::PreconditionViolated("power must be at least 1".into()));
        }
        Ok(self.map(|c| match c {
            ExtValue::Finite(r) => ExtValue::Finite(num_traits::pow(r.clone(), p as usize)),
            ExtValue::Infinity => ExtValue::Infinity,
        }))
    }

    /// Sum of a nonempty family. Errors on an empty iterator.
    pub fn sum<'a, I: IntoIterator<Item = &'a Element>>(it: I) -> Result<Element> {
        let mut it = it.into_iter();
        let first = it.next().ok_or(Error::PreconditionViolated("empty sum".into()))?.clone();
        it.try_fold(first, |acc, x| acc.add(x))
    }

    /// Sup of a nonempty finite family.
    pub fn sup<'a, I: IntoIterator<Item = &'a Element>>(it: I) -> Result<Element> {
        let mut it = it.into_iter();
        let first = it.next().ok_or(Error::PreconditionViolated("empty supremum".into()))?.clone();
        it.try_fold(first, |acc, x| acc.join(x))
    }

    /// Inf of a nonempty finite family.
    pub fn inf<'a, I: IntoIterator<Item = &'a Element>>(it: I) -> Result<Element> {
        let mut it = it.into_iter();
        let first = it.next().ok_or(Error::PreconditionViolated("empty infimum".into()))?.clone();
        it.try_fold(first, |acc, x| acc.meet(x))
    }

    /// Finite rational coordinates, if the element is finite.
    pub fn finite_coords(&self) -> Option<Vec<Rational>> {
        self.coords.iter().map(|c| c.as_finite().cloned()).collect()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for Element {
    /// Constant elements print as `c·e`, others as a bracketed list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_constant() {
            if c.is_zero() {
                return f.write_str("0");
            }
            if c.is_one() {
                return f.write_str("e");
            }
            return write!(f, "{}·e", c);
        }
        f.write_str("[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
        }
        f.write_str("]")
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<ExtValue>::deserialize(d)?;
        Element::new(coords).map_err(serde::de::Error::custom)
    }
}
