//! Exact scalar, jet, sparse-polynomial and dense-tensor arithmetic.
//!
//! Everything downstream (r-matrices, Poisson brackets, deformation tables)
//! is computed over these carriers; there is no floating point anywhere.

mod jet;
mod poly;
mod tensor;

pub use jet::Jet1;
pub use poly::{Monomial, PolyError, SparsePoly, VarId};
pub use tensor::{tensor_contract, DenseTensor, TensorError};

use num_traits::{One, Signed, Zero};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for small integer rationals.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `p / q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// The coefficient operations shared by [`Rational`] and [`Jet1`].
pub trait Coeff: Clone + PartialEq + std::fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// True if `x` is a negative rational.
pub fn is_negative(x: &Rational) -> bool {
    x.is_negative()
}
