//! One arithmetic interface over the three execution modes: a 61-bit prime
//! field for fast exact runs, arbitrary-precision rationals for a second
//! exact opinion, and complex doubles for the Gaussian channel model.

use num::complex::Complex64;
use num::{One, Zero};

use crate::core::Rat;

use super::rng::{derive_with, uniform01};

/// Relative magnitude below which a floating entry counts as zero during
/// elimination. Exact modes ignore it.
pub const RELATIVE_TOLERANCE: f64 = 1e-9;

pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Multiplicative inverse; callers only invert accepted pivots.
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
    /// Pivot-selection weight: any positive value marks a usable pivot in
    /// the exact modes, while floats report actual magnitude.
    fn mag(&self) -> f64;
    /// Zero test against the largest magnitude in the enclosing matrix.
    fn is_negligible(&self, scale: f64) -> bool;
}

/// Draws one scalar from the keyed counter stream.
pub trait Sample: Scalar {
    fn sample(words: &[u64]) -> Self;
}

// ---- prime field 2^61 - 1 ----

pub const FP61_MODULUS: u64 = (1u64 << 61) - 1;

/// Element of the integers modulo the Mersenne prime 2^61 - 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Fp61(u64);

impl Fp61 {
    pub fn new(v: u64) -> Fp61 {
        Fp61(v % FP61_MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Fp61 {
        let mut base = self;
        let mut acc = Fp61(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Scalar for Fp61 {
    fn zero() -> Fp61 {
        Fp61(0)
    }

    fn one() -> Fp61 {
        Fp61(1)
    }

    fn add(&self, rhs: &Fp61) -> Fp61 {
        let s = self.0 + rhs.0;
        Fp61(if s >= FP61_MODULUS { s - FP61_MODULUS } else { s })
    }

    fn sub(&self, rhs: &Fp61) -> Fp61 {
        self.add(&rhs.neg())
    }

    fn mul(&self, rhs: &Fp61) -> Fp61 {
        Fp61(((self.0 as u128 * rhs.0 as u128) % FP61_MODULUS as u128) as u64)
    }

    fn inv(&self) -> Fp61 {
        assert!(self.0 != 0, "inverse of zero in Fp61");
        self.pow(FP61_MODULUS - 2)
    }

    fn neg(&self) -> Fp61 {
        Fp61(if self.0 == 0 { 0 } else { FP61_MODULUS - self.0 })
    }

    fn mag(&self) -> f64 {
        if self.0 == 0 {
            0.0
        } else {
            1.0
        }
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.0 == 0
    }
}

impl Sample for Fp61 {
    fn sample(words: &[u64]) -> Fp61 {
        let mut salt = 0;
        loop {
            let v = derive_with(words, salt) >> 3;
            if v < FP61_MODULUS {
                return Fp61(v);
            }
            salt += 1;
        }
    }
}

// ---- exact rationals ----

impl Scalar for Rat {
    fn zero() -> Rat {
        <Rat as Zero>::zero()
    }

    fn one() -> Rat {
        <Rat as One>::one()
    }

    fn add(&self, rhs: &Rat) -> Rat {
        self + rhs
    }

    fn sub(&self, rhs: &Rat) -> Rat {
        self - rhs
    }

    fn mul(&self, rhs: &Rat) -> Rat {
        self * rhs
    }

    fn inv(&self) -> Rat {
        assert!(!self.is_zero(), "inverse of zero rational");
        self.recip()
    }

    fn neg(&self) -> Rat {
        -self.clone()
    }

    fn mag(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}

impl Sample for Rat {
    /// Integer draws keep later arithmetic cheap while staying generic.
    fn sample(words: &[u64]) -> Rat {
        let n = (derive_with(words, 0) >> 33) as i64;
        Rat::from_integer(n.into())
    }
}

// ---- complex doubles ----

impl Scalar for Complex64 {
    fn zero() -> Complex64 {
        <Complex64 as Zero>::zero()
    }

    fn one() -> Complex64 {
        <Complex64 as One>::one()
    }

    fn add(&self, rhs: &Complex64) -> Complex64 {
        self + rhs
    }

    fn sub(&self, rhs: &Complex64) -> Complex64 {
        self - rhs
    }

    fn mul(&self, rhs: &Complex64) -> Complex64 {
        self * rhs
    }

    fn inv(&self) -> Complex64 {
        1.0 / self
    }

    fn neg(&self) -> Complex64 {
        -self
    }

    fn mag(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.norm() <= RELATIVE_TOLERANCE * scale.max(1.0)
    }
}

impl Sample for Complex64 {
    /// Circularly symmetric complex Gaussian with unit total variance.
    fn sample(words: &[u64]) -> Complex64 {
        let u1 = uniform01(derive_with(words, 0));
        let u2 = uniform01(derive_with(words, 1));
        let radius = (-u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        Complex64::new(radius * angle.cos(), radius * angle.sin())
    }
}
