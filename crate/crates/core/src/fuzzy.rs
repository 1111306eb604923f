//! Triangular fuzzy numbers.
//!
//! A triangular fuzzy number is stored as its triplet `(lo, mid, hi)`: the
//! left extreme of the support, the apex, and the right extreme. Crisp reals
//! embed as degenerate triplets `(p, p, p)`. For triplets the LU order
//! reduces to componentwise comparison, which makes it a partial order:
//! [`compare`](Tfn::compare) reports [`OrderRelation::Incomparable`] when
//! neither direction holds.

use core::fmt;
use core::ops::Add;

use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::DomainViolation(alloc::format!(
                "interval [{lo}, {hi}] is reversed"
            )))
        }
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Interval product: hull of the four endpoint products.
    pub fn mul(&self, other: &Interval) -> Interval {
        let p = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        Interval {
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// Result of comparing two fuzzy numbers under the LU order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderRelation {
    LessOrEqual,
    GreaterOrEqual,
    Equal,
    Incomparable,
}

/// Triangular fuzzy number `(lo, mid, hi)` with `lo <= mid <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tfn {
    lo: f64,
    mid: f64,
    hi: f64,
}

impl Tfn {
    pub const ZERO: Tfn = Tfn {
        lo: 0.0,
        mid: 0.0,
        hi: 0.0,
    };

    pub fn new(lo: f64, mid: f64, hi: f64) -> Result<Self> {
        // NaN fails both comparisons and is rejected here as well.
        if lo <= mid && mid <= hi {
            Ok(Self { lo, mid, hi })
        } else {
            Err(Error::OrderViolation { lo, mid, hi })
        }
    }

    /// Degenerate triplet `(p, p, p)`.
    pub const fn crisp(p: f64) -> Self {
        Self {
            lo: p,
            mid: p,
            hi: p,
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn mid(&self) -> f64 {
        self.mid
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn triplet(&self) -> [f64; 3] {
        [self.lo, self.mid, self.hi]
    }

    pub fn is_crisp(&self) -> bool {
        self.lo == self.mid && self.mid == self.hi
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lo >= 0.0
    }

    /// The α-cut `[lo + α(mid - lo), hi - α(hi - mid)]`.
    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::DomainViolation(alloc::format!(
                "alpha {alpha} outside [0, 1]"
            )));
        }
        if alpha == 1.0 {
            return Ok(Interval {
                lo: self.mid,
                hi: self.mid,
            });
        }
        // Rounding must not push a cut past the apex.
        Ok(Interval {
            lo: (self.lo + alpha * (self.mid - self.lo)).min(self.mid),
            hi: (self.hi - alpha * (self.hi - self.mid)).max(self.mid),
        })
    }

    /// Scalar multiple; a negative factor reverses the triplet.
    pub fn scale(&self, lambda: f64) -> Tfn {
        if lambda >= 0.0 {
            Tfn {
                lo: lambda * self.lo,
                mid: lambda * self.mid,
                hi: lambda * self.hi,
            }
        } else {
            Tfn {
                lo: lambda * self.hi,
                mid: lambda * self.mid,
                hi: lambda * self.lo,
            }
        }
    }

    /// Product of two nonnegative triplets, taken componentwise.
    pub fn mul_nonneg(&self, other: &Tfn) -> Result<Tfn> {
        if !self.is_nonnegative() || !other.is_nonnegative() {
            return Err(Error::NegativityViolation);
        }
        Ok(Tfn {
            lo: self.lo * other.lo,
            mid: self.mid * other.mid,
            hi: self.hi * other.hi,
        })
    }

    /// LU order on triplets. Exact floating comparison, no tolerance.
    pub fn compare(&self, other: &Tfn) -> OrderRelation {
        let a = self.triplet();
        let b = other.triplet();
        let le = a.iter().zip(&b).all(|(x, y)| x <= y);
        let ge = a.iter().zip(&b).all(|(x, y)| x >= y);
        match (le, ge) {
            (true, true) => OrderRelation::Equal,
            (true, false) => OrderRelation::LessOrEqual,
            (false, true) => OrderRelation::GreaterOrEqual,
            (false, false) => OrderRelation::Incomparable,
        }
    }

    /// `self ⪯ other`.
    pub fn le(&self, other: &Tfn) -> bool {
        matches!(
            self.compare(other),
            OrderRelation::LessOrEqual | OrderRelation::Equal
        )
    }
}

impl Add for Tfn {
    type Output = Tfn;

    fn add(self, rhs: Tfn) -> Tfn {
        Tfn {
            lo: self.lo + rhs.lo,
            mid: self.mid + rhs.mid,
            hi: self.hi + rhs.hi,
        }
    }
}

impl core::iter::Sum for Tfn {
    fn sum<I: Iterator<Item = Tfn>>(iter: I) -> Tfn {
        iter.fold(Tfn::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.lo, self.mid, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(lo: f64, mid: f64, hi: f64) -> Tfn {
        Tfn::new(lo, mid, hi).unwrap()
    }

    #[test]
    fn constructor() {
        assert_eq!(t(2.0, 5.0, 9.0).triplet(), [2.0, 5.0, 9.0]);
        let three = t(3.0, 3.0, 3.0);
        assert!(three.is_crisp());
        assert_eq!(three, Tfn::crisp(3.0));
        assert!(matches!(
            Tfn::new(5.0, 2.0, 9.0),
            Err(Error::OrderViolation { .. })
        ));
        assert!(Tfn::new(1.0, 4.0, 3.0).is_err());
        assert!(Tfn::new(f64::NAN, 1.0, 2.0).is_err());
    }

    #[test]
    fn alpha_cuts() {
        let a = t(2.0, 5.0, 9.0);
        assert_eq!(a.alpha_cut(0.5).unwrap(), Interval { lo: 3.5, hi: 7.0 });
        assert_eq!(a.alpha_cut(1.0).unwrap(), Interval { lo: 5.0, hi: 5.0 });
        assert_eq!(a.alpha_cut(0.0).unwrap(), Interval { lo: 2.0, hi: 9.0 });
        assert!(matches!(
            a.alpha_cut(1.5),
            Err(Error::DomainViolation(_))
        ));
        assert!(a.alpha_cut(-0.1).is_err());
    }

    #[test]
    fn addition() {
        assert_eq!(t(1.0, 2.0, 3.0) + t(4.0, 5.0, 6.0), t(5.0, 7.0, 9.0));
        assert_eq!(Tfn::ZERO + t(1.0, 2.0, 3.0), t(1.0, 2.0, 3.0));
        assert_eq!(
            t(1.0, 2.0, 3.0) + t(1.0, 2.0, 3.0),
            t(1.0, 2.0, 3.0).scale(2.0)
        );
    }

    #[test]
    fn scaling() {
        let a = t(1.0, 2.0, 3.0);
        assert_eq!(a.scale(2.0), t(2.0, 4.0, 6.0));
        assert_eq!(a.scale(0.0), Tfn::ZERO);
        assert_eq!(a.scale(-1.0), t(-3.0, -2.0, -1.0));
    }

    #[test]
    fn nonnegative_product() {
        assert_eq!(
            t(1.0, 2.0, 3.0).mul_nonneg(&t(2.0, 3.0, 4.0)).unwrap(),
            t(2.0, 6.0, 12.0)
        );
        assert_eq!(
            Tfn::ZERO.mul_nonneg(&t(5.0, 6.0, 7.0)).unwrap(),
            Tfn::ZERO
        );
        assert_eq!(
            t(2.0, 3.0, 4.0).mul_nonneg(&Tfn::crisp(1.0)).unwrap(),
            t(2.0, 3.0, 4.0)
        );
        assert_eq!(
            t(-1.0, 2.0, 3.0).mul_nonneg(&t(1.0, 1.0, 1.0)),
            Err(Error::NegativityViolation)
        );
    }

    #[test]
    fn ordering() {
        let a = t(1.0, 2.0, 3.0);
        assert_eq!(a.compare(&a), OrderRelation::Equal);
        assert_eq!(a.compare(&t(0.0, 5.0, 6.0)), OrderRelation::Incomparable);
        assert_eq!(a.compare(&t(1.0, 2.0, 4.0)), OrderRelation::LessOrEqual);
        assert_eq!(t(1.0, 2.0, 4.0).compare(&a), OrderRelation::GreaterOrEqual);
        // Two served demands reported for the 30-point illustration.
        let s1 = t(2437.80, 3290.0, 3970.53);
        let s2 = t(2392.47, 3250.0, 3971.95);
        assert_eq!(s1.compare(&s2), OrderRelation::Incomparable);
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", t(0.5, 1.0, 2.25)), "(0.5, 1, 2.25)");
    }
}
