use std::fmt;

use num_traits::{Signed, Zero};

use super::{int, interval::RationalInterval, max_rational, poly::RationalPoly, rat, Rational};
use crate::error::Error;

/// Quotient of two rational polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: RationalPoly,
    pub den: RationalPoly,
}

impl RationalFn {
    pub fn new(num: RationalPoly, den: RationalPoly) -> Self {
        Self { num, den }
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(RationalPoly::constant(c), RationalPoly::one())
    }

    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    // No gcd reduction: denominators here are products of linear factors and
    // staying unreduced keeps their factored sign obvious.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone());
        }
        Self::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.num, self.den.clone())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self::new(self.num.scale(r), self.den.clone())
    }

    /// `f(x + c)`.
    pub fn shift(&self, c: &Rational) -> Self {
        Self::new(self.num.taylor_shift(c), self.den.taylor_shift(c))
    }

    /// Equality as rational functions (cross-multiplied).
    pub fn same_function(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num.display_in("k"), self.den.display_in("k"))
    }
}

/// Certified upper bound on `num(x)/den(x)` over the real ray `[k, inf)`.
///
/// The supremum is attained at `k`, approached at infinity, or attained at a
/// critical point. Critical points are the real roots of
/// `num' den - num den'`; each is isolated by Sturm bisection and the function
/// is bounded on its isolating interval by exact interval evaluation. When
/// there are no critical points the result is exactly `max(f(k), limit)`.
pub fn rational_fn_sup_on_ray(
    num: &RationalPoly,
    den: &RationalPoly,
    k: &Rational,
) -> Result<Rational, Error> {
    if den.is_zero() {
        return Err(Error::DenominatorVanishes(k.clone()));
    }
    let d_at_k = den.eval(k);
    if d_at_k.is_zero() {
        return Err(Error::DenominatorVanishes(k.clone()));
    }
    if den.count_real_roots(k, None) > 0 {
        let roots = den.isolate_real_roots(k, &(den.cauchy_root_bound() + int(1)), &rat(1, 1000));
        let at = roots.first().map(|r| r.1.clone()).unwrap_or_else(|| k.clone());
        return Err(Error::DenominatorVanishes(at));
    }
    // den keeps one sign on the ray; make it positive.
    let (num, den) = if d_at_k.is_negative() {
        (-num, -den)
    } else {
        (num.clone(), den.clone())
    };
    let dn = num.degree().unwrap_or(0);
    let dd = den.degree().unwrap_or(0);
    if !num.is_zero() && dn > dd {
        return Err(Error::Unbounded);
    }
    let f = RationalFn::new(num.clone(), den.clone());
    let at_k = f.eval(k).expect("denominator checked nonzero");
    let limit = if !num.is_zero() && dn == dd {
        num.leading() / den.leading()
    } else {
        Rational::zero()
    };
    let mut best = max_rational(at_k, limit);

    let g = &(&num.derivative() * &den) - &(&num * &den.derivative());
    if g.is_zero() {
        return Ok(best);
    }
    let hi = max_rational(g.cauchy_root_bound(), k.abs()) + int(1);
    let mut width = rat(1, 64);
    let mut intervals = g.isolate_real_roots(k, &hi, &width);
    'refine: for _ in 0..40 {
        let mut bounds = Vec::with_capacity(intervals.len());
        for (a, b) in &intervals {
            let x = RationalInterval::new(a.clone(), b.clone());
            let n = RationalInterval::eval_poly(&num, &x);
            let d = RationalInterval::eval_poly(&den, &x);
            match n.div(&d) {
                Some(q) => bounds.push(q.hi),
                None => {
                    width /= int(16);
                    intervals = g.isolate_real_roots(k, &hi, &width);
                    continue 'refine;
                }
            }
        }
        for b in bounds {
            best = max_rational(best, b);
        }
        return Ok(best);
    }
    Err(Error::Unbounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::to_f64;
    use proptest::prelude::*;

    #[test]
    fn decreasing_function_sup_is_value_at_start() {
        let num = RationalPoly::from_i64(&[5, 3]);
        let den = RationalPoly::from_i64(&[1, 1]);
        let b = rational_fn_sup_on_ray(&num, &den, &int(2)).unwrap();
        assert_eq!(b, rat(11, 3));
        // brute force over k = 2..10^4
        for k in 2..10_000 {
            let v = RationalFn::new(num.clone(), den.clone()).eval(&int(k)).unwrap();
            assert!(v <= b);
        }
    }

    #[test]
    fn constant_function() {
        let b = rational_fn_sup_on_ray(&RationalPoly::from_i64(&[7]), &RationalPoly::one(), &int(0)).unwrap();
        assert_eq!(b, int(7));
    }

    #[test]
    fn interior_maximum_is_bounded() {
        // x / (x^2 + 1) peaks at x = 1 with value 1/2
        let num = RationalPoly::from_i64(&[0, 1]);
        let den = RationalPoly::from_i64(&[1, 0, 1]);
        let b = rational_fn_sup_on_ray(&num, &den, &int(0)).unwrap();
        assert!(b >= rat(1, 2));
        assert!(to_f64(&b) < 0.5 + 1e-2);
    }

    #[test]
    fn vanishing_denominator_is_reported() {
        let den = RationalPoly::from_i64(&[-5, 1]);
        let r = rational_fn_sup_on_ray(&RationalPoly::one(), &den, &int(0));
        assert!(matches!(r, Err(Error::DenominatorVanishes(_))));
    }

    #[test]
    fn growing_numerator_is_unbounded() {
        let r = rational_fn_sup_on_ray(&RationalPoly::from_i64(&[0, 0, 1]), &RationalPoly::from_i64(&[1, 1]), &int(0));
        assert!(matches!(r, Err(Error::Unbounded)));
    }

    proptest! {
        #[test]
        fn bound_dominates_grid(a in -9i64..10, b in -9i64..10, c in -9i64..10,
                                 r1 in 0i64..6, r2 in 0i64..6, k in 0i64..5) {
            // den = (x + r1 + 1)(x + r2 + 1) > 0 on [0, inf)
            let den = &RationalPoly::from_i64(&[r1 + 1, 1]) * &RationalPoly::from_i64(&[r2 + 1, 1]);
            let num = RationalPoly::from_i64(&[a, b, c]);
            let bound = rational_fn_sup_on_ray(&num, &den, &int(k)).unwrap();
            let bf = to_f64(&bound);
            let f = RationalFn::new(num, den);
            for i in 0..10_000 {
                let x = k as f64 + i as f64 * 0.01;
                prop_assert!(f.eval_f64(x) <= bf + 1e-12);
            }
        }
    }
}
