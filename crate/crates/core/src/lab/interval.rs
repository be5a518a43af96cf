//! Closed rational intervals for enclosing radicals.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use crate::rational::Rational;

/// Digits of precision for radical enclosures: width `10^-9`.
const SCALE: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `[⌊√(k·10^18)⌋, ⌊√(k·10^18)⌋ + 1] / 10^9`.
    pub fn sqrt_of(k: u64) -> Self {
        let scaled = k
            .checked_mul(SCALE * SCALE)
            .expect("radicand too large for the enclosure");
        let root = scaled.isqrt();
        let d = SCALE as i64;
        let lo = Rational::new(root as i64, d);
        let hi = if root * root == scaled {
            lo.clone()
        } else {
            Rational::new(root as i64 + 1, d)
        };
        Interval::new(lo, hi)
    }

    pub fn sqrt2() -> Self {
        Self::sqrt_of(2)
    }

    pub fn sqrt5() -> Self {
        Self::sqrt_of(5)
    }

    /// `(1 + √5) / 2`.
    pub fn phi() -> Self {
        (Self::sqrt5() + Rational::one()) / Rational::integer(2)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<Rational> for Interval {
    fn from(x: Rational) -> Self {
        Interval::point(x)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::new(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::new(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = p.iter().min().expect("four products").clone();
        let hi = p.iter().max().expect("four products").clone();
        Interval::new(lo, hi)
    }
}

impl Div for Interval {
    type Output = Interval;
    fn div(self, rhs: Interval) -> Interval {
        assert!(
            !rhs.contains_zero(),
            "division by an interval containing zero: {rhs}"
        );
        self * Interval::new(rhs.hi.recip(), rhs.lo.recip())
    }
}

macro_rules! scalar_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<Rational> for Interval {
            type Output = Interval;
            fn $method(self, rhs: Rational) -> Interval {
                self.$method(Interval::point(rhs))
            }
        }
        impl $trait<Interval> for Rational {
            type Output = Interval;
            fn $method(self, rhs: Interval) -> Interval {
                Interval::point(self).$method(rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);
