//! Deciding `p(k) >= 0` (or `> 0`) for every integer `k >= K`.
//!
//! The finite part `K..=L` is scanned exactly with forward differences. The
//! tail `k > L` is handled by, in order: nonnegative coefficients of
//! `p(L + t)`; a Sturm count showing no real root beyond `L`; and finally an
//! isolation of the remaining real roots, which either exhibits the first
//! negative integer or shows that none exists.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{fmt_rational, int, poly::RationalPoly, rat, Rational};

pub const DEFAULT_CHECK_LIMIT: i64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "k")]
pub enum Positivity {
    PositiveOnRay,
    NegativeAt(i64),
    Inconclusive,
}

/// How the tail beyond `checked_up_to` was settled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TailCertificate {
    /// `p(L + t)` has only nonnegative coefficients and a positive leading one,
    /// so `p >= 0` on the whole real ray `[L, inf)`.
    ShiftedCoefficients { at: i64, coefficients: Vec<String> },
    /// `p(L) > 0`, positive leading coefficient, and the Sturm sequence shows
    /// no real root in `(L, inf)`.
    SturmNoRoots { at: i64 },
    /// Every real root beyond `L` was isolated and the sign of `p` at the first
    /// integer after each root was checked; covers integers only.
    RootIsolation { at: i64, roots: usize },
    /// `p` is a constant (or zero) polynomial.
    Constant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityVerdict {
    #[serde(flatten)]
    pub tag: Positivity,
    pub ray_start: i64,
    pub checked_up_to: i64,
    pub certificate: Option<TailCertificate>,
}

impl PositivityVerdict {
    pub fn is_positive(&self) -> bool {
        self.tag == Positivity::PositiveOnRay
    }

    pub fn negative_at(&self) -> Option<i64> {
        match self.tag {
            Positivity::NegativeAt(k) => Some(k),
            _ => None,
        }
    }
}

/// `p(k) >= 0` for all integers `k >= ray_start`.
pub fn poly_nonneg_on_integer_ray(
    p: &RationalPoly,
    ray_start: i64,
    check_limit: i64,
) -> PositivityVerdict {
    decide(p, ray_start, check_limit, false)
}

/// `p(k) > 0` for all integers `k >= ray_start`. `NegativeAt(k)` then means
/// `p(k) <= 0`.
pub fn poly_positive_on_integer_ray(
    p: &RationalPoly,
    ray_start: i64,
    check_limit: i64,
) -> PositivityVerdict {
    decide(p, ray_start, check_limit, true)
}

fn bad(v: &BigInt, strict: bool) -> bool {
    if strict {
        !v.is_positive()
    } else {
        v.is_negative()
    }
}

fn bad_rat(v: &Rational, strict: bool) -> bool {
    if strict {
        !v.is_positive()
    } else {
        v.is_negative()
    }
}

fn decide(p: &RationalPoly, k0: i64, limit: i64, strict: bool) -> PositivityVerdict {
    let limit = limit.max(k0);
    let verdict = |tag, checked_up_to, certificate| PositivityVerdict {
        tag,
        ray_start: k0,
        checked_up_to,
        certificate,
    };

    if p.degree().unwrap_or(0) == 0 {
        let c = p.coeff(0);
        return if bad_rat(&c, strict) {
            verdict(Positivity::NegativeAt(k0), k0, None)
        } else {
            verdict(Positivity::PositiveOnRay, limit, Some(TailCertificate::Constant))
        };
    }

    // Work with a positive integer multiple: same signs, cheaper arithmetic.
    let ip = RationalPoly::new(
        p.integer_coefficients()
            .into_iter()
            .map(Rational::from_integer)
            .collect(),
    );
    if let Some(k) = scan(&ip, k0, limit, strict) {
        return verdict(Positivity::NegativeAt(k), k, None);
    }

    let l = int(limit);
    let shifted = ip.taylor_shift(&l);
    let lead_pos = shifted.leading().is_positive();
    // In the strict case the constant term is p(L) > 0, already checked.
    if lead_pos && shifted.coeffs().iter().all(|c| !c.is_negative()) {
        let coefficients = shifted.coeffs().iter().map(fmt_rational).collect();
        return verdict(
            Positivity::PositiveOnRay,
            limit,
            Some(TailCertificate::ShiftedCoefficients {
                at: limit,
                coefficients,
            }),
        );
    }
    if lead_pos && ip.eval(&l).is_positive() && ip.count_real_roots(&l, None) == 0 {
        return verdict(
            Positivity::PositiveOnRay,
            limit,
            Some(TailCertificate::SturmNoRoots { at: limit }),
        );
    }

    // Remaining real roots beyond L all lie below the Cauchy bound.
    let bound = ip.cauchy_root_bound().ceil() + int(1);
    let hi = if bound > l { bound } else { &l + int(1) };
    let roots = ip.isolate_real_roots(&l, &hi, &rat(1, 4));
    let mut candidates: Vec<Rational> = vec![&l + int(1)];
    for (a, _) in &roots {
        let f = a.floor();
        candidates.push(&f + int(1));
        candidates.push(&f + int(2));
    }
    candidates.retain(|c| c > &l);
    candidates.sort();
    candidates.dedup();
    for c in &candidates {
        if bad_rat(&ip.eval(c), strict) {
            return match c.to_integer().to_i64() {
                Some(k) => verdict(Positivity::NegativeAt(k), limit, None),
                None => verdict(Positivity::Inconclusive, limit, None),
            };
        }
    }
    if !lead_pos {
        // Cannot happen: a negative leading coefficient makes the last
        // candidate negative. Kept as a guard against logic errors.
        return verdict(Positivity::Inconclusive, limit, None);
    }
    verdict(
        Positivity::PositiveOnRay,
        limit,
        Some(TailCertificate::RootIsolation {
            at: limit,
            roots: roots.len(),
        }),
    )
}

/// First integer in `k0..=limit` where the integer polynomial `p` fails the
/// sign test, using exact forward differences.
fn scan(p: &RationalPoly, k0: i64, limit: i64, strict: bool) -> Option<i64> {
    let d = p.degree().unwrap_or(0);
    // Table of p(k0), p(k0+1), ..., p(k0+d) turned into differences.
    let mut diffs: Vec<BigInt> = (0..=d as i64)
        .map(|i| p.eval(&int(k0 + i)).to_integer())
        .collect();
    for level in 1..=d {
        for i in (level..=d).rev() {
            let prev = diffs[i - 1].clone();
            diffs[i] -= prev;
        }
    }
    let mut k = k0;
    loop {
        if bad(&diffs[0], strict) {
            return Some(k);
        }
        if k == limit {
            return None;
        }
        for i in 0..d {
            let next = diffs[i + 1].clone();
            diffs[i] += next;
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_first_negative(p: &RationalPoly, k0: i64, k1: i64) -> Option<i64> {
        (k0..=k1).find(|&k| p.eval(&int(k)).is_negative())
    }

    #[test]
    fn linear_positive() {
        let v = poly_nonneg_on_integer_ray(&RationalPoly::from_i64(&[8, 3]), 0, DEFAULT_CHECK_LIMIT);
        assert!(v.is_positive());
    }

    #[test]
    fn displayed_degree_seven_numerator() {
        let p = RationalPoly::from_i64(&[927168, 2228760, 2061168, 985764, 267977, 41785, 3475, 119]);
        let v = poly_nonneg_on_integer_ray(&p, 0, DEFAULT_CHECK_LIMIT);
        assert!(v.is_positive());
        assert_eq!(v.checked_up_to, DEFAULT_CHECK_LIMIT);
    }

    #[test]
    fn negative_at_start() {
        let v = poly_nonneg_on_integer_ray(&RationalPoly::from_i64(&[-5, 1]), 0, 10);
        assert_eq!(v.tag, Positivity::NegativeAt(0));
    }

    #[test]
    fn negative_beyond_scan_found_by_isolation() {
        // (k - 30)(k - 31.5) is negative only at k = 31.
        let p = &RationalPoly::from_i64(&[-30, 1]) * &RationalPoly::new(vec![rat(-63, 2), int(1)]);
        let v = poly_nonneg_on_integer_ray(&p, 0, 10);
        assert_eq!(v.tag, Positivity::NegativeAt(31));
    }

    #[test]
    fn negative_leading_coefficient_is_caught() {
        let p = RationalPoly::from_i64(&[1_000_000, 0, -1]);
        let v = poly_nonneg_on_integer_ray(&p, 0, 10);
        assert_eq!(v.tag, Positivity::NegativeAt(1001));
    }

    #[test]
    fn positive_with_real_roots_between_integers() {
        // (k - 20.25)(k - 20.75) > 0 at every integer
        let p = &RationalPoly::new(vec![rat(-81, 4), int(1)]) * &RationalPoly::new(vec![rat(-83, 4), int(1)]);
        let v = poly_nonneg_on_integer_ray(&p, 0, 5);
        assert!(v.is_positive());
        assert!(matches!(v.certificate, Some(TailCertificate::RootIsolation { .. })));
    }

    #[test]
    fn strict_variant_rejects_zero() {
        let p = RationalPoly::from_i64(&[-3, 1]);
        let v = poly_nonneg_on_integer_ray(&p, 3, 10);
        assert!(v.is_positive());
        let v = poly_positive_on_integer_ray(&p, 3, 10);
        assert_eq!(v.tag, Positivity::NegativeAt(3));
        let v = poly_positive_on_integer_ray(&RationalPoly::zero(), 0, 10);
        assert_eq!(v.tag, Positivity::NegativeAt(0));
    }

    #[test]
    fn random_verdicts_are_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let deg = rng.random_range(1..5);
            let roots: Vec<i64> = (0..deg).map(|_| rng.random_range(-5..60)).collect();
            let mut p = RationalPoly::from_i64(&[rng.random_range(1..4)]);
            for r in roots {
                p = &p * &RationalPoly::from_i64(&[-r, 1]);
            }
            let k0 = rng.random_range(0..20);
            let v = poly_nonneg_on_integer_ray(&p, k0, 25);
            match v.tag {
                Positivity::PositiveOnRay => {
                    for _ in 0..50 {
                        let k = rng.random_range(k0..k0 + 10_000);
                        assert!(!p.eval(&int(k)).is_negative());
                    }
                    assert_eq!(brute_first_negative(&p, k0, k0 + 200), None);
                }
                Positivity::NegativeAt(k) => {
                    assert!(k >= k0);
                    assert_eq!(brute_first_negative(&p, k0, k.max(k0)), Some(k));
                }
                Positivity::Inconclusive => panic!("unexpected inconclusive"),
            }
        }
    }

    proptest! {
        #[test]
        fn positive_verdicts_survive_random_sampling(
            coeffs in prop::collection::vec(-50i64..50, 1..6),
            k0 in 0i64..30,
            samples in prop::collection::vec(0i64..1_000_000, 100),
        ) {
            let p = RationalPoly::from_i64(&coeffs);
            let v = poly_nonneg_on_integer_ray(&p, k0, 50);
            if v.is_positive() {
                for s in samples {
                    prop_assert!(!p.eval(&int(k0 + s)).is_negative());
                }
            }
            if let Some(k) = v.negative_at() {
                prop_assert!(k >= k0);
                prop_assert!(p.eval(&int(k)).is_negative());
            }
        }
    }
}
