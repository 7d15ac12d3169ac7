use super::{fmt_rational, rat, Coeff, Rational};

/// First-order jet `c0 + h*c1`, with `h^2 = 0`.
///
/// The truncation order is fixed at one: the quantisation statements checked
/// by this crate only constrain the order-`h` coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet1 {
    pub c0: Rational,
    pub c1: Rational,
}

impl Jet1 {
    pub fn new(c0: Rational, c1: Rational) -> Self {
        Jet1 { c0, c1 }
    }

    pub fn constant(c0: Rational) -> Self {
        Jet1 {
            c0,
            c1: Rational::zero(),
        }
    }

    /// The generator `h` itself.
    pub fn hbar() -> Self {
        Jet1 {
            c0: rat(0),
            c1: rat(1),
        }
    }
}

/// Truncated product: `(a0 + h a1)(b0 + h b1) = a0 b0 + h (a0 b1 + a1 b0)`.
pub fn jet_mul(a: &Jet1, b: &Jet1) -> Jet1 {
    Jet1 {
        c0: &a.c0 * &b.c0,
        c1: &a.c0 * &b.c1 + &a.c1 * &b.c0,
    }
}

impl Coeff for Jet1 {
    fn zero() -> Self {
        Jet1::constant(rat(0))
    }
    fn one() -> Self {
        Jet1::constant(rat(1))
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(&self.c0) && Coeff::is_zero(&self.c1)
    }
    fn add(&self, other: &Self) -> Self {
        Jet1 {
            c0: &self.c0 + &other.c0,
            c1: &self.c1 + &other.c1,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        Jet1 {
            c0: &self.c0 - &other.c0,
            c1: &self.c1 - &other.c1,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        jet_mul(self, other)
    }
    fn neg(&self) -> Self {
        Jet1 {
            c0: -&self.c0,
            c1: -&self.c1,
        }
    }
}

impl std::fmt::Display for Jet1 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} + {}h",
            fmt_rational(&self.c0),
            fmt_rational(&self.c1)
        )
    }
}
