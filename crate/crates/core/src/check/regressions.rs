//! Fixed counterexamples showing that hypotheses cannot be dropped.

use crate::element::Element;
use crate::ext::rat;
use crate::parts::finite_part;
use crate::sequences::PeriodicSeq;

/// In `R^2` take `x = ((1,0), (0,1))` and `y = ((0,1), (1,0))`. Each `x_a` is
/// disjoint from `y_a`, yet `sup (x + y) = (1,1)` while `sup x + sup y = (2,2)`.
pub fn pairwise_disjoint_sup_fails() -> bool {
    let (a, b) = (Element::from_ints(&[1, 0]), Element::from_ints(&[0, 1]));
    let x = PeriodicSeq::from_parts(vec![], vec![a.clone(), b.clone()]).unwrap();
    let y = PeriodicSeq::from_parts(vec![], vec![b.clone(), a.clone()]).unwrap();
    let disjoint = a.disjoint(&b).unwrap();
    let s = x.try_zip_with(&y, |p, q| p.add(q)).unwrap();
    disjoint && s.sup() != x.sup().add(&y.sup()).unwrap()
}

/// `(1,1) <= (1,inf)` but the finite parts are `(1,1)` and `(1,0)`.
pub fn finite_part_not_monotone() -> bool {
    let x = Element::from_ints(&[1, 1]);
    let y = Element::parse(&["1", "inf"]).unwrap();
    x.leq(&y).unwrap() && !finite_part(&x).leq(&finite_part(&y)).unwrap()
}

/// `u = inf` and `x_n = 1/n` on the first eight terms, then `0`. Over the
/// prefix `inf (u x_n) = inf`, while `u inf x_n = 0`.
pub fn remark_w() -> bool {
    let u = Element::infinity(1);
    let prefix: Vec<Element> = (1..=8).map(|n| Element::from_rationals([rat(1, n)]).unwrap()).collect();
    let x = PeriodicSeq::from_parts(prefix.clone(), vec![Element::zero(1)]).unwrap();
    let window: Vec<Element> = prefix.iter().map(|p| u.mul(p).unwrap()).collect();
    let lhs = Element::inf(&window).unwrap();
    lhs == Element::infinity(1) && u.mul(&x.inf()).unwrap().is_zero()
}
