//! Conditional expectations on finite probability spaces and matrices with
//! entries in the model.
//!
//! A [`CondExp`] averages an element over the blocks of a partition of the
//! atoms, weighted by a [`ProbSpace`]. Its range is the set of block-constant
//! elements. Algebra homomorphisms into the reals are the atom evaluations, so
//! positivity questions about an [`XMatrix`] are decided one atom at a time.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::band::BandProjection;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::ext::{rational_vec_str, ExtValue, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProbSpaceDoc", into = "ProbSpaceDoc")]
pub struct ProbSpace {
    weights: Vec<Rational>,
}

#[derive(Clone, Serialize, Deserialize)]
struct ProbSpaceDoc {
    #[serde(with = "rational_vec_str")]
    weights: Vec<Rational>,
}

impl TryFrom<ProbSpaceDoc> for ProbSpace {
    type Error = Error;
    fn try_from(doc: ProbSpaceDoc) -> Result<Self> {
        ProbSpace::new(doc.weights)
    }
}

impl From<ProbSpace> for ProbSpaceDoc {
    fn from(p: ProbSpace) -> Self {
        ProbSpaceDoc { weights: p.weights }
    }
}

impl ProbSpace {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidProbSpace("no atoms".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::InvalidProbSpace(format!("weight {} is not positive", w)));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidProbSpace(format!("weights sum to {}", total)));
        }
        Ok(ProbSpace { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProbSpace("no atoms".into()));
        }
        let w = Rational::new(1.into(), (n as i64).into());
        ProbSpace::new(vec![w; n])
    }

    /// Normalizes positive integer masses into a probability space.
    pub fn from_masses(masses: &[u64]) -> Result<Self> {
        let total: u64 = masses.iter().sum();
        if total == 0 {
            return Err(Error::InvalidProbSpace("zero total mass".into()));
        }
        ProbSpace::new(
            masses
                .iter()
                .map(|&m| Rational::new((m as i64).into(), (total as i64).into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// The triple `(X, e, T)` of a finite probability space and a partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CondExp {
    space: ProbSpace,
    partition: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    block_mass: Vec<Rational>,
}

/// Textual form: `{"weights": ["1/4", ...], "partition": [[0,1],[2,3]]}`.
/// A missing partition means the trivial one-block partition.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CondExpDoc {
    #[serde(with = "rational_vec_str")]
    pub weights: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
}

impl CondExp {
    pub fn new(space: ProbSpace, partition: Vec<Vec<usize>>) -> Result<Self> {
        let d = space.dim();
        let mut block_of = vec![usize::MAX; d];
        for (b, block) in partition.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {} is empty", b)));
            }
            for &a in block {
                if a >= d {
                    return Err(Error::InvalidPartition(format!("atom {} out of range {}", a, d)));
                }
                if block_of[a] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("atom {} appears twice", a)));
                }
                block_of[a] = b;
            }
        }
        if let Some(a) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::InvalidPartition(format!("atom {} is not covered", a)));
        }
        let block_mass = partition
            .iter()
            .map(|block| block.iter().map(|&a| &space.weights[a]).sum())
            .collect();
        Ok(CondExp { space, partition, block_of, block_mass })
    }

    /// Expectation: a single block.
    pub fn trivial(space: ProbSpace) -> Self {
        let all = (0..space.dim()).collect();
        CondExp::new(space, vec![all]).expect("trivial partition is valid")
    }

    /// Identity operator: every atom its own block.
    pub fn discrete(space: ProbSpace) -> Self {
        let blocks = (0..space.dim()).map(|a| vec![a]).collect();
        CondExp::new(space, blocks).expect("discrete partition is valid")
    }

    pub fn from_doc(doc: &CondExpDoc) -> Result<Self> {
        let space = ProbSpace::new(doc.weights.clone())?;
        match &doc.partition {
            Some(p) => CondExp::new(space, p.clone()),
            None => Ok(CondExp::trivial(space)),
        }
    }

    pub fn to_doc(&self) -> CondExpDoc {
        CondExpDoc { weights: self.space.weights.clone(), partition: Some(self.partition.clone()) }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    pub fn block_of(&self, atom: usize) -> usize {
        self.block_of[atom]
    }

    fn check_dim(&self, x: &Element) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: x.dim() });
        }
        Ok(())
    }

    /// `T x`: weighted block averages. A block containing an infinite
    /// coordinate maps to `inf`.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.check_dim(x)?;
        let mut block_val = Vec::with_capacity(self.partition.len());
        for (block, mass) in self.partition.iter().zip(&self.block_mass) {
            let mut acc = Rational::zero();
            let mut infinite = false;
            for &a in block {
                match &x.coords()[a] {
                    ExtValue::Finite(r) => acc += r * &self.space.weights[a],
                    ExtValue::Infinity => infinite = true,
                }
            }
            block_val.push(if infinite { ExtValue::Infinity } else { ExtValue::Finite(acc / mass) });
        }
        Element::new(self.block_of.iter().map(|&b| block_val[b].clone()).collect())
    }

    /// `T x` restricted to finite inputs.
    pub fn apply_finite(&self, x: &Element) -> Result<Element> {
        if let Some(i) = x.coords().iter().position(ExtValue::is_infinite) {
            return Err(Error::PreconditionViolated(format!("coordinate {} is infinite", i)));
        }
        self.apply(x)
    }

    /// `T(P e · Q e) = T(P e) · T(Q e)`.
    pub fn is_independent(&self, p: &BandProjection, q: &BandProjection) -> Result<bool> {
        let pq = self.apply(&p.meet(q)?.unit())?;
        let prod = self.apply(&p.unit())?.mul(&self.apply(&q.unit())?)?;
        Ok(pq == prod)
    }

    pub fn is_block_constant(&self, x: &Element) -> bool {
        x.dim() == self.dim()
            && self.partition.iter().all(|block| block.iter().all(|&a| x.coords()[a] == x.coords()[block[0]]))
    }

    /// `P_B T = T P_B` holds exactly when `B` is a union of blocks.
    pub fn commutes_with(&self, p: &BandProjection) -> bool {
        p.dim() == self.dim()
            && self.partition.iter().all(|block| block.iter().all(|&a| p.contains(a) == p.contains(block[0])))
    }
}

/// Evaluation at an atom, the homomorphism `x -> x(omega)`.
pub fn hom_evaluate(omega: usize, x: &Element) -> Result<ExtValue> {
    x.coord(omega).cloned()
}

/// Dense matrix of rationals, used per atom.
pub type RealMatrix = Vec<Vec<Rational>>;

/// Exact determinant by Gaussian elimination with row pivoting.
pub fn real_det(m: &RealMatrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return Rational::zero();
        };
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        let pivot = a[k].clone();
        det *= &pivot[k];
        for row in a.iter_mut().skip(k + 1) {
            if row[k].is_zero() {
                continue;
            }
            let f = &row[k] / &pivot[k];
            for (dst, src) in row[k..].iter_mut().zip(&pivot[k..]) {
                *dst -= &f * src;
            }
        }
    }
    det
}

/// Real PSD test: symmetric and every principal minor nonnegative.
pub fn real_is_psd(m: &RealMatrix) -> bool {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return false;
    }
    if (0..n).any(|i| (0..i).any(|j| m[i][j] != m[j][i])) {
        return false;
    }
    assert!(n <= 20, "principal-minor enumeration is exponential");
    (1u32..(1u32 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: RealMatrix = idx.iter().map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect()).collect();
        !real_det(&sub).is_negative()
    })
}

/// Matrix with finite elements as entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Element>,
}

impl XMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Element>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        let d = entries[0].dim();
        for e in &entries {
            if e.dim() != d {
                return Err(Error::DimensionMismatch { left: d, right: e.dim() });
            }
            if !e.is_finite() {
                return Err(Error::PreconditionViolated("matrix entries must be finite".into()));
            }
        }
        Ok(XMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        XMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Result<Element>>(rows: usize, cols: usize, mut f: F) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j)?);
            }
        }
        XMatrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.entries[0].dim()
    }

    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> XMatrix {
        XMatrix::from_fn(self.cols, self.rows, |i, j| Ok(self.get(j, i).clone())).expect("same entries")
    }

    pub fn matmul(&self, other: &XMatrix) -> Result<XMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("inner dimensions differ".into()));
        }
        XMatrix::from_fn(self.rows, other.cols, |i, j| {
            let terms = (0..self.cols)
                .map(|k| self.get(i, k).mul(other.get(k, j)))
                .collect::<Result<Vec<_>>>()?;
            Element::sum(&terms)
        })
    }

    /// `Γ(M)`: the sum of all entries.
    pub fn gamma(&self) -> Element {
        Element::sum(&self.entries).expect("nonempty matrix")
    }

    /// The real matrix `φ_ω(M)` of coordinates at atom `omega`.
    pub fn at_atom(&self, omega: usize) -> Result<RealMatrix> {
        if omega >= self.dim() {
            return Err(Error::IndexOutOfRange { index: omega, len: self.dim() });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).coords()[omega].as_finite().cloned().expect("finite entries"))
                    .collect()
            })
            .collect())
    }

    /// PSD in the Riesz sense: symmetric and PSD under every atom evaluation.
    pub fn is_psd(&self) -> bool {
        self.is_symmetric() && (0..self.dim()).all(|w| real_is_psd(&self.at_atom(w).expect("in range")))
    }

    /// Coordinatewise determinant.
    pub fn det(&self) -> Result<Element> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        Element::from_rationals((0..self.dim()).map(|w| real_det(&self.at_atom(w).expect("in range"))))
    }

    /// `Σ_ij m_ij x_i x_j` for a tuple of elements.
    pub fn quadratic_form(&self, xs: &[Element]) -> Result<Element> {
        if !self.is_square() || xs.len() != self.rows {
            return Err(Error::ShapeMismatch("tuple length must match a square matrix".into()));
        }
        let mut terms = Vec::with_capacity(self.rows * self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                terms.push(self.get(i, j).mul(&xs[i])?.mul(&xs[j])?);
            }
        }
        Element::sum(&terms)
    }

    /// Sub-matrix on `rows x cols` index ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Result<XMatrix> {
        if rows.end > self.rows || cols.end > self.cols || rows.is_empty() || cols.is_empty() {
            return Err(Error::ShapeMismatch(format!("block {:?}x{:?} out of range", rows, cols)));
        }
        XMatrix::from_fn(rows.len(), cols.len(), |i, j| Ok(self.get(rows.start + i, cols.start + j).clone()))
    }

    /// Splits `[[A, C], [C^t, B]]` at `m` and checks `Γ(C)^2 <= Γ(A) Γ(B)`.
    pub fn block_gamma_check(&self, m: usize) -> Result<bool> {
        if !self.is_square() || m == 0 || m >= self.rows {
            return Err(Error::ShapeMismatch(format!("cannot split a {}x{} matrix at {}", self.rows, self.cols, m)));
        }
        let n = self.rows;
        let a = self.block(0..m, 0..m)?.gamma();
        let c = self.block(0..m, m..n)?.gamma();
        let b = self.block(m..n, m..n)?.gamma();
        c.mul(&c)?.leq(&a.mul(&b)?)
    }

    /// `(Γ(A_ij))` for the block partition given by consecutive `sizes`.
    pub fn compress(&self, sizes: &[usize]) -> Result<XMatrix> {
        if !self.is_square() || sizes.iter().sum::<usize>() != self.rows || sizes.contains(&0) {
            return Err(Error::ShapeMismatch("block sizes must partition the matrix".into()));
        }
        let starts: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &s| {
                let start = *acc;
                *acc += s;
                Some(start)
            })
            .collect();
        let k = sizes.len();
        XMatrix::from_fn(k, k, |i, j| {
            Ok(self.block(starts[i]..starts[i] + sizes[i], starts[j]..starts[j] + sizes[j])?.gamma())
        })
    }
}

/// `(T Q_i Q_j e)_{ij}`.
pub fn gram_matrix(t: &CondExp, qs: &[BandProjection]) -> Result<XMatrix> {
    let n = qs.len();
    XMatrix::from_fn(n, n, |i, j| t.apply(&qs[i].meet(&qs[j])?.unit()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::{int, rat};

    fn el(items: &[&str]) -> Element {
        Element::parse(items).unwrap()
    }

    fn uniform(n: usize, partition: Vec<Vec<usize>>) -> CondExp {
        CondExp::new(ProbSpace::uniform(n).unwrap(), partition).unwrap()
    }

    #[test]
    fn prob_space_validation() {
        assert!(ProbSpace::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(ProbSpace::new(vec![rat(1, 1), rat(0, 1)]).is_err());
        assert!(ProbSpace::new(vec![]).is_err());
        assert!(ProbSpace::new(vec![rat(1, 6), rat(1, 3), rat(1, 4), rat(1, 4)]).is_ok());
    }

    #[test]
    fn partition_validation() {
        let s = ProbSpace::uniform(3).unwrap();
        assert!(CondExp::new(s.clone(), vec![vec![0, 1]]).is_err());
        assert!(CondExp::new(s.clone(), vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(CondExp::new(s.clone(), vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(CondExp::new(s, vec![vec![0, 3], vec![1, 2]]).is_err());
    }

    #[test]
    fn averaging_example() {
        let t = uniform(4, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(t.apply(&el(&["1", "0", "1", "1"])).unwrap(), el(&["1/2", "1/2", "1", "1"]));
        assert_eq!(t.apply(&Element::unit(4)).unwrap(), Element::unit(4));
        assert_eq!(t.apply(&el(&["1", "inf", "1", "1"])).unwrap(), el(&["inf", "inf", "1", "1"]));
        assert!(t.apply_finite(&el(&["1", "inf", "1", "1"])).is_err());
        assert!(t.apply(&el(&["1"])).is_err());
    }

    #[test]
    fn weighted_averaging() {
        let s = ProbSpace::new(vec![rat(1, 6), rat(1, 3), rat(1, 4), rat(1, 4)]).unwrap();
        let t = CondExp::new(s, vec![vec![0, 1], vec![2, 3]]).unwrap();
        // (1/6 * 3 + 1/3 * 0) / (1/2) = 1
        assert_eq!(t.apply(&el(&["3", "0", "2", "0"])).unwrap(), el(&["1", "1", "1", "1"]));
    }

    #[test]
    fn independence_examples() {
        let t = CondExp::trivial(ProbSpace::uniform(4).unwrap());
        let p = BandProjection::new(4, [0, 1]).unwrap();
        let q = BandProjection::new(4, [0, 2]).unwrap();
        assert!(t.is_independent(&p, &q).unwrap());
        assert!(!t.is_independent(&p, &p).unwrap());
        assert!(t.is_independent(&BandProjection::full(4), &q).unwrap());
    }

    #[test]
    fn commuting_bands() {
        let t = uniform(4, vec![vec![0, 1], vec![2, 3]]);
        assert!(t.commutes_with(&BandProjection::new(4, [2, 3]).unwrap()));
        assert!(!t.commutes_with(&BandProjection::new(4, [1, 2]).unwrap()));
    }

    #[test]
    fn gram_example_is_psd() {
        let t = CondExp::trivial(ProbSpace::uniform(3).unwrap());
        let qs = [BandProjection::new(3, [0, 1]).unwrap(), BandProjection::new(3, [1, 2]).unwrap()];
        let m = gram_matrix(&t, &qs).unwrap();
        assert_eq!(m.get(0, 0), &Element::constant(3, rat(2, 3)));
        assert_eq!(m.get(0, 1), &Element::constant(3, rat(1, 3)));
        assert!(m.is_psd());
        assert!(m.block_gamma_check(1).unwrap());
        assert_eq!(m.det().unwrap(), Element::constant(3, rat(1, 3)));
    }

    #[test]
    fn non_psd_example() {
        let z = Element::zero(1);
        let o = Element::unit(1);
        let m = XMatrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]]).unwrap();
        assert!(!m.is_psd());
        assert_eq!(m.det().unwrap(), Element::from_ints(&[-1]));
    }

    #[test]
    fn gamma_and_det() {
        let x = el(&["1/2", "3"]);
        assert_eq!(XMatrix::from_rows(vec![vec![x.clone()]]).unwrap().gamma(), x);
        let (a, b, c) = (el(&["2", "1"]), el(&["1", "1"]), el(&["3", "5"]));
        let m = XMatrix::from_rows(vec![vec![a.clone(), b.clone()], vec![b.clone(), c.clone()]]).unwrap();
        assert_eq!(m.gamma(), el(&["7", "8"]));
        assert_eq!(m.det().unwrap(), el(&["5", "4"]));
        let e = Element::unit(2);
        let z = Element::zero(2);
        let id = XMatrix::from_rows(vec![vec![e.clone(), z.clone()], vec![z, e.clone()]]).unwrap();
        assert_eq!(id.det().unwrap(), e);
    }

    #[test]
    fn block_checks() {
        let e = Element::unit(1);
        let m = XMatrix::from_rows(vec![vec![e.clone(), e.clone()], vec![e.clone(), e.clone()]]).unwrap();
        assert!(m.block_gamma_check(1).unwrap());
        assert!(m.block_gamma_check(0).is_err());
        assert!(m.block_gamma_check(2).is_err());
        assert_eq!(m.compress(&[2]).unwrap().get(0, 0), &Element::from_ints(&[4]));
        assert!(m.compress(&[1]).is_err());
    }

    #[test]
    fn homomorphisms() {
        let x = el(&["1/2", "-3"]);
        assert_eq!(hom_evaluate(0, &Element::unit(2)).unwrap(), ExtValue::one());
        assert_eq!(hom_evaluate(1, &x).unwrap(), ExtValue::from(-3));
        assert_eq!(hom_evaluate(2, &x), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn real_det_pivots() {
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(real_det(&m), int(-1));
        let s = vec![vec![int(0), int(0)], vec![int(0), int(1)]];
        assert!(real_is_psd(&s));
        let bad = vec![vec![int(0), int(0)], vec![int(0), int(-1)]];
        assert!(!real_is_psd(&bad));
    }
}
