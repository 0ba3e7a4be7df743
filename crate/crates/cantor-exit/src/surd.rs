//! Exact real quadratic surds `u + v*sqrt(d)`.
//!
//! Signs are decided by one integer squaring, floors by bracketing
//! `sqrt(d)` between rationals; no floating point anywhere.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::util::{is_perfect_square, rational_decimal, three_pow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurdError {
    #[error("surd base {0} must be positive")]
    NonPositiveBase(BigInt),
    #[error("surd base {0} is a perfect square")]
    SquareBase(BigInt),
}

/// `u + v*sqrt(d)` with rational `u`, `v` over a fixed positive nonsquare
/// integer base `d`.
///
/// All values arising from one orbit share the same base (the discriminant
/// of the minimal polynomial, deliberately not reduced to its squarefree
/// part), so the closed-field operations below never need to mix bases.
/// A value with `v = 0` is rational; such values are allowed as synthetic
/// test points and compare equal across bases.
#[derive(Debug, Clone)]
pub struct QuadraticSurd {
    u: BigRational,
    v: BigRational,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(u: BigRational, v: BigRational, d: BigInt) -> Result<Self, SurdError> {
        if !d.is_positive() {
            return Err(SurdError::NonPositiveBase(d));
        }
        if is_perfect_square(&d) {
            return Err(SurdError::SquareBase(d));
        }
        Ok(QuadraticSurd { u, v, d })
    }

    /// A rational value carried inside the field `Q(sqrt(d))`.
    pub fn from_rational(u: BigRational, d: BigInt) -> Result<Self, SurdError> {
        Self::new(u, BigRational::zero(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.u
    }

    pub fn surd_coefficient(&self) -> &BigRational {
        &self.v
    }

    pub fn base(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    fn with(&self, u: BigRational, v: BigRational) -> Self {
        QuadraticSurd {
            u,
            v,
            d: self.d.clone(),
        }
    }

    pub fn add_rational(&self, r: &BigRational) -> Self {
        self.with(&self.u + r, self.v.clone())
    }

    pub fn sub_rational(&self, r: &BigRational) -> Self {
        self.with(&self.u - r, self.v.clone())
    }

    pub fn neg(&self) -> Self {
        self.with(-self.u.clone(), -self.v.clone())
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        self.with(&self.u * r, &self.v * r)
    }

    /// Multiply by `3^k` exactly.
    pub fn mul_pow3(&self, k: usize) -> Self {
        self.scale(&BigRational::from(three_pow(k)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "mixed surd bases");
        self.with(&self.u + &other.u, &self.v + &other.v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "mixed surd bases");
        self.with(&self.u - &other.u, &self.v - &other.v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.d, other.d, "mixed surd bases");
        let d = BigRational::from(self.d.clone());
        self.with(
            &self.u * &other.u + &self.v * &other.v * d,
            &self.u * &other.v + &self.v * &other.u,
        )
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn abs(&self) -> Self {
        if self.sign() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact sign against zero.
    ///
    /// When `u` and `v` have strictly opposite signs the comparison reduces
    /// to `u^2` versus `v^2 d`; equality there would force `d` to be a
    /// rational square, which the constructor excludes.
    pub fn sign(&self) -> Ordering {
        let zero = BigRational::zero();
        let us = self.u.cmp(&zero);
        let vs = self.v.cmp(&zero);
        match (us, vs) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            _ => {
                let u2 = &self.u * &self.u;
                let v2d = &self.v * &self.v * BigRational::from(self.d.clone());
                let c = u2.cmp(&v2d);
                if us == Ordering::Greater {
                    c
                } else {
                    c.reverse()
                }
            }
        }
    }

    pub fn compare_to_rational(&self, r: &BigRational) -> Ordering {
        self.sub_rational(r).sign()
    }

    pub fn compare(&self, other: &Self) -> Ordering {
        self.sub(other).sign()
    }

    /// Exact floor, via a rational bracket on `sqrt(d)` of width below
    /// `1/|v|` followed by one exact comparison.
    pub fn floor(&self) -> BigInt {
        if self.v.is_zero() {
            return self.u.floor().to_integer();
        }
        let k: BigInt = self.v.numer().abs() / self.v.denom() + 2;
        let w = (&self.d * &k * &k).sqrt();
        let sqrt_lo = BigRational::new(w.clone(), k.clone());
        let sqrt_hi = BigRational::new(w + BigInt::one(), k);
        let lo = if self.v.is_positive() {
            &self.u + &self.v * sqrt_lo
        } else {
            &self.u + &self.v * sqrt_hi
        };
        let cand = lo.floor().to_integer();
        let next = &cand + BigInt::one();
        if self.compare_to_rational(&BigRational::from(next.clone())) != Ordering::Less {
            next
        } else {
            cand
        }
    }

    /// Fractional part `x - floor(x)`, in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self.sub_rational(&BigRational::from(self.floor()))
    }

    /// Decimal rendering truncated toward minus infinity. Approximate by
    /// construction; exact values stay in the struct.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let floored = self.scale(&BigRational::from(scale)).floor();
        rational_decimal(
            &BigRational::new(floored, num_traits::pow(BigInt::from(10), digits)),
            digits,
        )
    }
}

impl PartialEq for QuadraticSurd {
    fn eq(&self, other: &Self) -> bool {
        if self.v.is_zero() && other.v.is_zero() {
            return self.u == other.u;
        }
        self.d == other.d && self.u == other.u && self.v == other.v
    }
}

impl Eq for QuadraticSurd {}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "{}", self.u);
        }
        let sqrt = if self.v.abs() == BigRational::one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", self.v.abs(), self.d)
        };
        if self.u.is_zero() {
            if self.v.is_negative() {
                write!(f, "-{sqrt}")
            } else {
                write!(f, "{sqrt}")
            }
        } else if self.v.is_negative() {
            write!(f, "{} - {sqrt}", self.u)
        } else {
            write!(f, "{} + {sqrt}", self.u)
        }
    }
}
