//! Exact coefficient arithmetic.
//!
//! Rationals are `num_rational::BigRational`. On top of that sit the ring
//! `Q[t]` for a tagged transcendental `t`, polynomials and rational functions
//! in `zeta`, truncated jets in `eps = zeta - 1` and sparse multivariate
//! polynomials used for symbolic grove formulas.

mod frac;
mod jet;
mod linalg;
mod multipoly;
mod poly;
mod precision;
mod value;

use std::fmt::Debug;

pub use frac::FracValue;
pub use jet::{jet_det, Jet};
pub use linalg::{bareiss_solve, det_generic, rational_det, rational_inverse};
pub use multipoly::{GenKind, Generator, Monomial, MultiPoly};
pub use poly::{ratfunc_expand_at_one, PolyZ, RatFuncZ};
pub use precision::{pi_fixed, sqrt3_fixed};
pub use value::{ExactValue, Tag};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};


pub type Rational = num_rational::BigRational;

/// `p/q` as a rational.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let p: BigInt = a.trim().parse().ok()?;
            let q: BigInt = b.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Bit length of a rational's height.
pub(crate) fn rational_bits(r: &Rational) -> u64 {
    r.numer().abs().bits() + r.denom().bits()
}

/// Commutative ring with unit used as jet and matrix coefficients.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self {
        self.mul(&Self::from_rational(r))
    }
}
