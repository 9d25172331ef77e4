//! Finite and infinite parts, the star map (partial inverse) and the
//! multiplicative decomposition of cone elements.

use num_traits::{One, Zero};

use crate::band::band_of;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::{ExtValue, Rational};

/// `x = x^f + x^inf`: the finite part keeps the rational coordinates and zeroes
/// the infinite ones; the infinite part is `inf` exactly where `x` is.
pub fn decompose(x: &Element) -> (Element, Element) {
    (finite_part(x), infinite_part(x))
}

pub fn finite_part(x: &Element) -> Element {
    x.map(|c| match c {
        ExtValue::Finite(_) => c.clone(),
        ExtValue::Infinity => ExtValue::zero(),
    })
}

pub fn infinite_part(x: &Element) -> Element {
    x.map(|c| match c {
        ExtValue::Finite(_) => ExtValue::zero(),
        ExtValue::Infinity => ExtValue::Infinity,
    })
}

/// Partial inverse: `1/x_i` on finite nonzero coordinates (sign kept), zero on
/// zero and infinite ones. Always finite.
pub fn star(x: &Element) -> Element {
    x.map(|c| match c {
        ExtValue::Finite(r) if !r.is_zero() => ExtValue::Finite(r.recip()),
        _ => ExtValue::zero(),
    })
}

/// `e_x = P_x e`, the component of the unit on the band generated by `x`.
pub fn component(x: &Element) -> Element {
    band_of(x).unit()
}

/// Splits a cone element `x <= y z` as `x = a b` with `0 <= a <= y` and
/// `0 <= b <= z`.
///
/// On the band of `y^f` the pair is `(y, y* x)`; on its disjoint complement it
/// is `(x (z* + e_{z^inf}), z^f + e_{z^inf})`.
pub fn mul_decompose(x: &Element, y: &Element, z: &Element) -> Result<(Element, Element)> {
    if !(x.is_cone() && y.is_cone() && z.is_cone()) {
        return Err(Error::PreconditionViolated("mul_decompose requires cone elements".into()));
    }
    let yz = y.mul(z)?;
    if !x.leq(&yz)? {
        return Err(Error::PreconditionViolated("x is not below y·z".into()));
    }
    let p = band_of(&finite_part(y));
    let q = p.complement();

    let a_fin = p.apply(y)?;
    let b_fin = p.apply(&star(y).mul(x)?)?;

    let e_zinf = component(&infinite_part(z));
    let a_inf = q.apply(&x.mul(&star(z).add(&e_zinf)?)?)?;
    let b_inf = q.apply(&finite_part(z).add(&e_zinf)?)?;

    Ok((a_fin.add(&a_inf)?, b_fin.add(&b_inf)?))
}

/// `x` is a weak unit of the whole space: every coordinate nonzero.
pub fn is_weak_unit(x: &Element) -> bool {
    x.coords().iter().all(|c| !c.is_zero())
}

/// `lambda^{-1}` helper for the scaling identity of the star map.
pub fn recip(lambda: &Rational) -> Result<Rational> {
    if lambda.is_zero() {
        return Err(Error::PreconditionViolated("cannot invert zero".into()));
    }
    Ok(Rational::one() / lambda)
}
