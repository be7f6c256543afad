use num_traits::Zero;

use super::{poly::RationalPoly, Rational};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RationalInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "empty interval");
        Self { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self { lo, hi }
    }

    /// Division; `None` when the divisor straddles zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.contains(&Rational::zero()) {
            return None;
        }
        let inv = Self {
            lo: Rational::from_integer(1.into()) / &other.hi,
            hi: Rational::from_integer(1.into()) / &other.lo,
        };
        Some(self.mul(&inv))
    }

    /// Enclosure of `p` over the interval by Horner's scheme.
    pub fn eval_poly(p: &RationalPoly, x: &Self) -> Self {
        let mut acc = Self::point(Rational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add(&Self::point(c.clone()));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn horner_enclosure_contains_samples() {
        let p = RationalPoly::from_i64(&[1, -3, 0, 2]);
        let x = RationalInterval::new(rat(-1, 2), rat(3, 2));
        let e = RationalInterval::eval_poly(&p, &x);
        for i in 0..=20 {
            let t = rat(-1, 2) + rat(i, 10);
            assert!(e.contains(&p.eval(&t)));
        }
    }

    #[test]
    fn division_rejects_zero() {
        let a = RationalInterval::new(int(1), int(2));
        assert!(a.div(&RationalInterval::new(int(-1), int(1))).is_none());
        let q = a.div(&RationalInterval::new(int(2), int(4))).unwrap();
        assert_eq!(q, RationalInterval::new(rat(1, 4), int(1)));
    }
}
