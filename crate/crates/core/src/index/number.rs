//! Exact arithmetic over ℚ≥0 ∪ {∞}.
//!
//! Conventions: 0·∞ = 0, x·∞ = ∞ for x > 0, x + ∞ = ∞, x^0 = 1,
//! ∞^k = ∞ for k ≥ 1. These make index evaluation total and keep an
//! unused (grade-0) hypothesis from being poisoned by an ∞ scale.

use num::{BigRational, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(BigRational),
    Infinity,
}

impl Extended {
    pub fn zero() -> Extended {
        Extended::Finite(BigRational::zero())
    }

    pub fn one() -> Extended {
        Extended::Finite(BigRational::one())
    }

    pub fn from_nat(n: u64) -> Extended {
        Extended::Finite(BigRational::from_integer(n.into()))
    }

    pub fn from_rational(q: BigRational) -> Extended {
        debug_assert!(!q.is_negative());
        Extended::Finite(q)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Extended::Finite(q) if q.is_zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn add(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }

    pub fn mul(&self, other: &Extended) -> Extended {
        if self.is_zero() || other.is_zero() {
            return Extended::zero();
        }
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a * b),
            _ => Extended::Infinity,
        }
    }

    /// Raise to a natural power.
    pub fn pow(&self, exp: u64) -> Extended {
        if exp == 0 {
            return Extended::one();
        }
        match self {
            Extended::Infinity => Extended::Infinity,
            Extended::Finite(q) => {
                let e = i32::try_from(exp).expect("exponent out of range");
                Extended::Finite(q.pow(e))
            }
        }
    }

    /// Natural-number view, for size-sorted values.
    pub fn as_nat(&self) -> Option<u64> {
        match self {
            Extended::Finite(q) if q.is_integer() => q.numer().to_u64(),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(q) => q.to_f64().unwrap_or(f64::MAX),
            Extended::Infinity => f64::INFINITY,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinity) => Ordering::Less,
            (Extended::Infinity, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinity, Extended::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(q) => write!(
                f,
                "{}",
                crate::syntax::rational::format_integer_or_decimal(q)
            ),
            Extended::Infinity => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        let inf = Extended::Infinity;
        let zero = Extended::zero();
        let two = Extended::from_nat(2);
        assert_eq!(zero.mul(&inf), Extended::zero());
        assert_eq!(inf.mul(&zero), Extended::zero());
        assert_eq!(two.mul(&inf), Extended::Infinity);
        assert_eq!(two.add(&inf), Extended::Infinity);
        assert_eq!(inf.pow(0), Extended::one());
        assert_eq!(inf.pow(3), Extended::Infinity);
        assert_eq!(zero.pow(0), Extended::one());
        assert_eq!(two.pow(3), Extended::from_nat(8));
        assert!(two < inf);
    }
}
