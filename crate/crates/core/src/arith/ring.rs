use core::fmt::Debug;

use num_traits::{One, Zero};

use super::Rational;

/// Minimal commutative ring interface shared by the coefficient types of the
/// series code. Elements know their own ring (e.g. the modulus of the
/// critical-point ring), hence `zero_like` / `one_like`.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    /// Multiplicative inverse, `None` for zero divisors or when unsupported.
    fn inverse(&self) -> Option<Self>;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.plus(other);
    }
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, c: &Rational) -> Self {
        self * c
    }
    fn inverse(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}
