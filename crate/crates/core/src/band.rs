//! Band projections of the atomic model.
//!
//! Every band is generated by a set of atoms, so a projection is a bitmask
//! over the atom indices. [`BandProjection::apply`] keeps the coordinates in
//! the mask and zeroes the rest (infinite coordinates included).

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::ExtValue;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BandProjection {
    atoms: FixedBitSet,
}

impl BandProjection {
    pub fn new<I: IntoIterator<Item = usize>>(dim: usize, atoms: I) -> Result<Self> {
        let mut set = FixedBitSet::with_capacity(dim);
        for a in atoms {
            if a >= dim {
                return Err(Error::IndexOutOfRange { index: a, len: dim });
            }
            set.insert(a);
        }
        Ok(BandProjection { atoms: set })
    }

    pub fn empty(dim: usize) -> Self {
        BandProjection { atoms: FixedBitSet::with_capacity(dim) }
    }

    pub fn full(dim: usize) -> Self {
        let mut atoms = FixedBitSet::with_capacity(dim);
        atoms.insert_range(..);
        BandProjection { atoms }
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.atoms.contains(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.atoms.ones()
    }

    pub fn count(&self) -> usize {
        self.atoms.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.dim()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch { left: self.dim(), right: dim });
        }
        Ok(())
    }

    /// `P_B x`.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.check_dim(x.dim())?;
        let coords = x
            .coords()
            .iter()
            .enumerate()
            .map(|(i, c)| if self.contains(i) { c.clone() } else { ExtValue::zero() })
            .collect();
        Element::new(coords)
    }

    /// `P_B e`, the component of the unit carried by `B`.
    pub fn unit(&self) -> Element {
        self.apply(&Element::unit(self.dim())).expect("same dimension")
    }

    pub fn complement(&self) -> BandProjection {
        let mut atoms = self.atoms.clone();
        atoms.toggle_range(..);
        BandProjection { atoms }
    }

    pub fn meet(&self, other: &BandProjection) -> Result<BandProjection> {
        self.check_dim(other.dim())?;
        let mut atoms = self.atoms.clone();
        atoms.intersect_with(&other.atoms);
        Ok(BandProjection { atoms })
    }

    pub fn join(&self, other: &BandProjection) -> Result<BandProjection> {
        self.check_dim(other.dim())?;
        let mut atoms = self.atoms.clone();
        atoms.union_with(&other.atoms);
        Ok(BandProjection { atoms })
    }

    pub fn leq(&self, other: &BandProjection) -> Result<bool> {
        self.check_dim(other.dim())?;
        Ok(self.atoms.is_subset(&other.atoms))
    }

    /// Join of a nonempty finite family.
    pub fn sup<'a, I: IntoIterator<Item = &'a BandProjection>>(it: I) -> Result<BandProjection> {
        let mut it = it.into_iter();
        let first = it.next().ok_or(Error::PreconditionViolated("empty supremum".into()))?.clone();
        it.try_fold(first, |acc, b| acc.join(b))
    }

    /// Meet of a nonempty finite family.
    pub fn inf<'a, I: IntoIterator<Item = &'a BandProjection>>(it: I) -> Result<BandProjection> {
        let mut it = it.into_iter();
        let first = it.next().ok_or(Error::PreconditionViolated("empty infimum".into()))?.clone();
        it.try_fold(first, |acc, b| acc.meet(b))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.atoms().collect()
    }
}

/// The principal band `B_x`: the support of `|x|`.
pub fn band_of(x: &Element) -> BandProjection {
    let atoms = x
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, _)| i);
    BandProjection::new(x.dim(), atoms).expect("indices in range")
}

/// `inf_B`: `+inf` on the atoms of `B`, zero elsewhere.
pub fn infinity_of(b: &BandProjection) -> Element {
    let coords = (0..b.dim())
        .map(|i| if b.contains(i) { ExtValue::Infinity } else { ExtValue::zero() })
        .collect();
    Element::new(coords).unwrap_or_else(|_| Element::zero(1))
}

/// `pi_x(a) = sup_n (a ∧ n x)` for cone `x` and `a`, in closed form: `a_i`
/// where `x_i > 0`, zero elsewhere.
pub fn pi(x: &Element, a: &Element) -> Result<Element> {
    if !x.is_cone() || !a.is_cone() {
        return Err(Error::PreconditionViolated("pi requires cone elements".into()));
    }
    band_of(x).apply(a)
}

impl Serialize for BandProjection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.atoms())
    }
}

impl fmt::Display for BandProjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_vec())
    }
}
