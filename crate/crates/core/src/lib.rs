//! Exact arithmetic in the sup-completion of a finite atomic Riesz space,
//! with conditional expectations and lower bounds for limsup events.
//!
//! Elements are vectors of extended rationals indexed by atoms. Band
//! projections are atom subsets. A conditional expectation averages over the
//! blocks of a partition.

pub mod band;
pub mod check;
pub mod cli;
pub mod cond_exp;
pub mod element;
pub mod error;
pub mod ext;
pub mod fls;
pub mod parts;
pub mod sequences;
pub mod trend;

pub use band::{band_of, infinity_of, pi, BandProjection};
pub use cond_exp::{gram_matrix, CondExp, ProbSpace, XMatrix};
pub use element::{AddMode, Element};
pub use error::{Error, Result};
pub use ext::{ExtValue, Rational};
pub use fls::{borel_cantelli, corollary_m10, theorem_m7, BoundReport, Upto, WeightedEventSeq};
pub use parts::{component, decompose, finite_part, infinite_part, mul_decompose, star};
pub use sequences::{FiniteDirectedGrid, PeriodicSeq};
