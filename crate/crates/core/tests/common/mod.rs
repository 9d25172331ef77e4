//! Brute-force oracles shared by the integration tests. Extended values are
//! `Option<Rational>` with `None` for `inf`, so none of the crate's arithmetic
//! is reused here.

#![allow(dead_code)]

use num_traits::Zero;
use supcomp::{Element, ExtValue, PeriodicSeq, Rational};

pub type Ext = Option<Rational>;

pub fn ext(v: &ExtValue) -> Ext {
    v.as_finite().cloned()
}

pub fn coords(x: &Element) -> Vec<Ext> {
    x.coords().iter().map(ext).collect()
}

pub fn ext_le(a: &Ext, b: &Ext) -> bool {
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a <= b,
    }
}

pub fn ext_max(a: &Ext, b: &Ext) -> Ext {
    if ext_le(a, b) {
        b.clone()
    } else {
        a.clone()
    }
}

pub fn ext_min(a: &Ext, b: &Ext) -> Ext {
    if ext_le(a, b) {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn ext_add(a: &Ext, b: &Ext) -> Ext {
    match (a, b) {
        (Some(a), Some(b)) => Some(a + b),
        _ => None,
    }
}

/// The first `prefix + 3 * cycle` terms.
pub fn window(seq: &PeriodicSeq<Element>) -> Vec<Vec<Ext>> {
    let len = seq.prefix_len() + 3 * seq.cycle_len();
    (0..len).map(|n| coords(seq.term(n))).collect()
}

fn fold(terms: &[Vec<Ext>], f: fn(&Ext, &Ext) -> Ext) -> Vec<Ext> {
    let mut acc = terms[0].clone();
    for t in &terms[1..] {
        for (a, b) in acc.iter_mut().zip(t) {
            *a = f(a, b);
        }
    }
    acc
}

pub fn tail_sup(w: &[Vec<Ext>], beta: usize) -> Vec<Ext> {
    fold(&w[beta..], ext_max)
}

pub fn tail_inf(w: &[Vec<Ext>], beta: usize) -> Vec<Ext> {
    fold(&w[beta..], ext_min)
}

/// Tails starting at or before `last` still see two full cycles of the window.
pub fn limsup(w: &[Vec<Ext>], last: usize) -> Vec<Ext> {
    let tails: Vec<Vec<Ext>> = (0..=last).map(|b| tail_sup(w, b)).collect();
    fold(&tails, ext_min)
}

pub fn liminf(w: &[Vec<Ext>], last: usize) -> Vec<Ext> {
    let tails: Vec<Vec<Ext>> = (0..=last).map(|b| tail_inf(w, b)).collect();
    fold(&tails, ext_max)
}

/// `sum_{n >= from}` for cone terms: a coordinate whose partial sum still grows
/// over the last cycle of the window grows forever.
pub fn series_sum(w: &[Vec<Ext>], from: usize, cycle: usize) -> Vec<Ext> {
    let d = w[0].len();
    let partial = |end: usize| {
        let mut acc = vec![Some(Rational::zero()); d];
        for t in &w[from.min(end)..end] {
            for (a, b) in acc.iter_mut().zip(t) {
                *a = ext_add(a, b);
            }
        }
        acc
    };
    let full = partial(w.len());
    let short = partial(w.len() - cycle);
    full.into_iter().zip(short).map(|(f, s)| if f == s { f } else { None }).collect()
}

/// Coefficients `c_0..c_n` of `det(tI - M)` by Faddeev-LeVerrier.
pub fn char_poly(a: &[Vec<Rational>]) -> Vec<Rational> {
    let n = a.len();
    let mul = |x: &[Vec<Rational>], y: &[Vec<Rational>]| -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(Rational::zero(), |s, k| s + &x[i][k] * &y[k][j])).collect())
            .collect()
    };
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::from_integer(1.into());
    let mut mk = vec![vec![Rational::zero(); n]; n];
    for k in 1..=n {
        mk = mul(a, &mk);
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += &c[n - k + 1];
        }
        let am = mul(a, &mk);
        let trace = (0..n).fold(Rational::zero(), |s, i| s + &am[i][i]);
        c[n - k] = -trace / Rational::from_integer((k as i64).into());
    }
    c
}

/// A symmetric real matrix is PSD iff the coefficients of its characteristic
/// polynomial alternate in sign (all eigenvalues are real).
pub fn psd_by_char_poly(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let c = char_poly(m);
    (0..=n).all(|k| {
        let signed = if (n - k).is_multiple_of(2) { c[k].clone() } else { -c[k].clone() };
        signed >= Rational::zero()
    })
}
