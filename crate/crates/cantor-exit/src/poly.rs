//! Primitive integer quadratics with real irrational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::surd::QuadraticSurd;
use crate::util::is_perfect_square;

/// Which root of `ax^2 + bx + c`: `(-b + sqrt(Δ))/(2a)` or `(-b - sqrt(Δ))/(2a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Root {
    Plus,
    Minus,
}

impl Root {
    pub fn label(self) -> &'static str {
        match self {
            Root::Plus => "plus",
            Root::Minus => "minus",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("leading coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("coefficients are not primitive: gcd(|a|,|b|,|c|) = {0}")]
    NotPrimitive(BigInt),
    #[error("discriminant {0} is not positive; the roots are not real irrationals")]
    NonPositiveDiscriminant(BigInt),
    #[error("discriminant {0} is a perfect square; the roots are rational")]
    SquareDiscriminant(BigInt),
}

/// Primitive `ax^2 + bx + c` with positive nonsquare discriminant, carrying
/// its height `H = max(|a|,|b|,|c|)` and discriminant `Δ = b^2 - 4ac`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadraticPoly {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    h: BigInt,
    delta: BigInt,
}

impl QuadraticPoly {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Result<Self, PolyError> {
        if a.is_zero() {
            return Err(PolyError::ZeroLeadingCoefficient);
        }
        let g = a.gcd(&b).gcd(&c);
        if g > BigInt::from(1) {
            return Err(PolyError::NotPrimitive(g));
        }
        let delta = &b * &b - BigInt::from(4) * &a * &c;
        if !delta.is_positive() {
            return Err(PolyError::NonPositiveDiscriminant(delta));
        }
        if is_perfect_square(&delta) {
            return Err(PolyError::SquareDiscriminant(delta));
        }
        let h = a.abs().max(b.abs()).max(c.abs());
        Ok(QuadraticPoly { a, b, c, h, delta })
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Result<Self, PolyError> {
        Self::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn height(&self) -> &BigInt {
        &self.h
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.delta
    }

    /// `(-b ± sqrt(Δ)) / (2a)` as an exact surd over the base `Δ`.
    ///
    /// The chosen root need not lie in `(0,1)`; callers that need an orbit
    /// start take the fractional part.
    pub fn root(&self, which: Root) -> QuadraticSurd {
        let two_a = BigInt::from(2) * &self.a;
        let u = BigRational::new(-self.b.clone(), two_a.clone());
        let v = match which {
            Root::Plus => BigRational::new(BigInt::from(1), two_a),
            Root::Minus => BigRational::new(BigInt::from(-1), two_a),
        };
        QuadraticSurd::new(u, v, self.delta.clone()).expect("validated discriminant")
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let a = BigRational::from(self.a.clone());
        let b = BigRational::from(self.b.clone());
        let c = BigRational::from(self.c.clone());
        a * x * x + b * x + c
    }

    pub fn eval_surd(&self, x: &QuadraticSurd) -> QuadraticSurd {
        x.square()
            .scale(&BigRational::from(self.a.clone()))
            .add(&x.scale(&BigRational::from(self.b.clone())))
            .add_rational(&BigRational::from(self.c.clone()))
    }

    /// 3-adic resonance condition: `v3(a) = 1` and `v3(c) = 0`.
    pub fn is_baby_resonant(&self) -> bool {
        let three = BigInt::from(3);
        let nine = BigInt::from(9);
        self.a.is_multiple_of(&three)
            && !self.a.is_multiple_of(&nine)
            && !self.c.is_multiple_of(&three)
    }
}

impl std::fmt::Display for QuadraticPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn construction_validates() {
        assert!(QuadraticPoly::from_i64(1, 2, -2).is_ok());
        assert_eq!(
            QuadraticPoly::from_i64(0, 1, -1),
            Err(PolyError::ZeroLeadingCoefficient)
        );
        assert_eq!(
            QuadraticPoly::from_i64(2, 4, -2),
            Err(PolyError::NotPrimitive(BigInt::from(2)))
        );
        assert_eq!(
            QuadraticPoly::from_i64(1, 0, 1),
            Err(PolyError::NonPositiveDiscriminant(BigInt::from(-4)))
        );
        assert_eq!(
            QuadraticPoly::from_i64(1, 0, -4),
            Err(PolyError::SquareDiscriminant(BigInt::from(16)))
        );
    }

    #[test]
    fn height_and_discriminant() {
        let f = QuadraticPoly::from_i64(1, 2, -2).unwrap();
        assert_eq!(f.height(), &BigInt::from(2));
        assert_eq!(f.discriminant(), &BigInt::from(12));
    }

    #[test]
    fn roots_satisfy_polynomial() {
        for (a, b, c) in [(1, 2, -2), (1, 2, -1), (1, 1, -1), (3, 1, -5), (-2, 3, 1)] {
            let f = QuadraticPoly::from_i64(a, b, c).unwrap();
            for which in [Root::Plus, Root::Minus] {
                let x = f.root(which);
                let value = f.eval_surd(&x);
                assert!(value.rational_part().is_zero() && value.surd_coefficient().is_zero());
            }
        }
    }

    #[test]
    fn baby_resonance() {
        assert!(QuadraticPoly::from_i64(3, 1, 1).is_err()); // Δ = -11, not a valid poly
        let f = QuadraticPoly::from_i64(3, 1, -1).unwrap();
        assert!(f.is_baby_resonant());
        let g = QuadraticPoly::from_i64(9, 1, -1).unwrap();
        assert!(!g.is_baby_resonant());
        let h = QuadraticPoly::from_i64(3, 1, -3).unwrap();
        assert!(!h.is_baby_resonant());
    }
}
