//! Phase dependence of a fixed-degree binomial `a1 z^m zb^n + r2 e^(i theta) z^i zb^j`.
//!
//! With `A = a1/(a+m+1)`, `R = r2/(a+i+1)`, `B = a1/(a+n+1)`, `S = r2/(a+j+1)`
//! and `c2 = (a-delta+1)/(a+delta+1)`, the Mellin criterion at `alpha = a`
//! reads `F_a(c) >= 0` where
//!
//! ```text
//! F_a(c) = A^2 + R^2 + 2ARc - c2 (B^2 + S^2 + 2BSc),   c = cos(theta).
//! ```
//!
//! `F_a` is affine in `c`, so it holds for every `theta` as soon as it holds
//! at `c = 1` and `c = -1`.

use serde::Serialize;

use num_traits::{Signed, Zero};

use super::{Certificate, Refutation, TheoremId, Verdict, Violation};
use crate::arith::{
    from_f64, int, poly_nonneg_on_integer_ray, poly_positive_on_integer_ray, to_f64, PositivityVerdict, Rational,
    RationalFn, RationalPoly,
};
use crate::error::{Error, Result};
use crate::operator::{commutator_form_float, Basis, CoefficientVector, FormValue, Witness};
use crate::symbol::{Coefficient, Monomial, SymbolPoly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseAnalysisRow {
    pub alpha: i64,
    /// Root of `F_alpha(cos theta) = 0` in `[0, pi]`, when `F_alpha` changes sign.
    pub theta_alpha: Option<f64>,
    /// The root in terms of `c = cos theta`, even when it lies outside `[-1, 1]`.
    pub root_cos: Option<f64>,
    /// `(F_alpha(1), F_alpha(-1))`.
    #[serde(serialize_with = "ser_pair")]
    pub f_endpoints: (Rational, Rational),
}

fn ser_pair<S: serde::Serializer>(p: &(Rational, Rational), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&crate::arith::fmt_rational(&p.0))?;
    t.serialize_element(&crate::arith::fmt_rational(&p.1))?;
    t.end()
}

/// Whether `0 <= A - R < c2 (B - S)` holds for all `alpha >= delta`, which
/// makes the quarter-plane condition necessary as well as sufficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub lower: PositivityVerdict,
    pub upper: PositivityVerdict,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseAnalysis {
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub a1: Rational,
    pub term1: (u32, u32),
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub r2: Rational,
    pub term2: (u32, u32),
    pub delta: i64,
    pub alpha_max: i64,
    pub rows: Vec<PhaseAnalysisRow>,
    pub tail_plus: PositivityVerdict,
    pub tail_minus: PositivityVerdict,
    /// The criterion holds at `c = 1` and `c = -1` for every `alpha >= delta`.
    pub holds_for_all_theta: bool,
    pub condition: ConditionCheck,
}

fn recip_lin(num: &Rational, c: i64) -> RationalFn {
    RationalFn::new(RationalPoly::constant(num.clone()), RationalPoly::x_plus(int(c)))
}

struct Pieces {
    a: RationalFn,
    r: RationalFn,
    b: RationalFn,
    s: RationalFn,
    c2: RationalFn,
}

impl Pieces {
    fn new(a1: &Rational, (m, n): (u32, u32), r2: &Rational, (i, j): (u32, u32)) -> Self {
        let d = m as i64 - n as i64;
        Self {
            a: recip_lin(a1, m as i64 + 1),
            r: recip_lin(r2, i as i64 + 1),
            b: recip_lin(a1, n as i64 + 1),
            s: recip_lin(r2, j as i64 + 1),
            c2: RationalFn::new(RationalPoly::x_plus(int(1 - d)), RationalPoly::x_plus(int(d + 1))),
        }
    }

    /// `(F(0), dF/dc)`.
    fn affine(&self) -> (RationalFn, RationalFn) {
        let sq = |f: &RationalFn| f.mul(f);
        let p = sq(&self.a).add(&sq(&self.r)).sub(&self.c2.mul(&sq(&self.b).add(&sq(&self.s))));
        let q = self.a.mul(&self.r).sub(&self.c2.mul(&self.b.mul(&self.s))).scale(&int(2));
        (p, q)
    }

    fn at(&self, c: &Rational) -> RationalFn {
        let (p, q) = self.affine();
        p.add(&q.scale(c))
    }
}

fn cleared(f: &RationalFn) -> RationalPoly {
    // Denominators are products of (alpha + positive) factors.
    &f.num * &f.den
}

pub fn binomial_phase_analysis(
    a1: &Rational,
    term1: (u32, u32),
    r2: &Rational,
    term2: (u32, u32),
    alpha_max: i64,
) -> Result<PhaseAnalysis> {
    let d = term1.0 as i64 - term1.1 as i64;
    if d <= 0 || term2.0 as i64 - term2.1 as i64 != d {
        return Err(Error::PreconditionViolated(format!(
            "both terms need the same positive relative degree: {term1:?}, {term2:?}"
        )));
    }
    if term1 == term2 {
        return Err(Error::PreconditionViolated("the two terms must differ".into()));
    }
    if !a1.is_positive() || !r2.is_positive() {
        return Err(Error::PreconditionViolated("a1 and r2 must be positive".into()));
    }
    let pieces = Pieces::new(a1, term1, r2, term2);
    let (p, q) = pieces.affine();
    let f_plus = pieces.at(&int(1));
    let f_minus = pieces.at(&int(-1));
    let last = alpha_max.max(d);
    let rows = (d..=last)
        .map(|alpha| {
            let x = int(alpha);
            let pv = p.eval(&x).expect("positive denominators");
            let qv = q.eval(&x).expect("positive denominators");
            let root_cos = (!qv.is_zero()).then(|| -to_f64(&(pv / &qv)));
            let theta_alpha = root_cos.filter(|c| (-1.0..=1.0).contains(c)).map(f64::acos);
            PhaseAnalysisRow {
                alpha,
                theta_alpha,
                root_cos,
                f_endpoints: (f_plus.eval(&x).expect("den"), f_minus.eval(&x).expect("den")),
            }
        })
        .collect::<Vec<_>>();
    let tail_plus = poly_nonneg_on_integer_ray(&cleared(&f_plus), d, last);
    let tail_minus = poly_nonneg_on_integer_ray(&cleared(&f_minus), d, last);
    let rows_ok = rows
        .iter()
        .all(|r| !r.f_endpoints.0.is_negative() && !r.f_endpoints.1.is_negative());
    let holds_for_all_theta = rows_ok && tail_plus.is_positive() && tail_minus.is_positive();

    let (m, i) = (term1.0 as i64, term2.0 as i64);
    let lower_poly = RationalPoly::linear(a1 - r2, a1 * int(i + 1) - r2 * int(m + 1));
    let lower = poly_nonneg_on_integer_ray(&lower_poly, d, last);
    let upper_fn = pieces
        .c2
        .mul(&pieces.b.sub(&pieces.s))
        .sub(&pieces.a.sub(&pieces.r));
    let upper = poly_positive_on_integer_ray(&cleared(&upper_fn), d, last);
    let condition = ConditionCheck {
        holds: lower.is_positive() && upper.is_positive(),
        lower,
        upper,
    };

    Ok(PhaseAnalysis {
        a1: a1.clone(),
        term1,
        r2: r2.clone(),
        term2,
        delta: d,
        alpha_max: last,
        rows,
        tail_plus,
        tail_minus,
        holds_for_all_theta,
        condition,
    })
}

impl PhaseAnalysis {
    pub fn symbol_at(&self, theta: f64) -> SymbolPoly {
        SymbolPoly::new(vec![
            Monomial::new(self.term1.0, self.term1.1, Coefficient::real(self.a1.clone())),
            Monomial::new(self.term2.0, self.term2.1, Coefficient::polar(self.r2.clone(), theta)),
        ])
    }

    fn certificate(&self, tail: PositivityVerdict) -> Certificate {
        Certificate {
            theorem_id: TheoremId::LiuLu41,
            ranges_checked: vec![(self.delta, self.alpha_max)],
            tail: Some(tail),
        }
    }

    /// Verdict for the concrete phase `theta` of the second coefficient.
    ///
    /// `cos theta` is enclosed in a rational interval of width `2^-40`; since
    /// `F_alpha` is affine in `c` its sign on the interval is decided by the
    /// two endpoints.
    pub fn verdict_at(&self, theta: f64) -> Verdict {
        if self.holds_for_all_theta {
            let weaker = if self.tail_minus.checked_up_to <= self.tail_plus.checked_up_to {
                self.tail_minus.clone()
            } else {
                self.tail_plus.clone()
            };
            return Verdict::ProvenHyponormal(self.certificate(weaker));
        }
        let c = theta.cos();
        if c > 1e-15 {
            return Verdict::ProvenHyponormal(Certificate::finite(TheoremId::QuarterPlane43));
        }
        let eps = 2f64.powi(-40);
        let lo = from_f64((c - eps).max(-1.0)).expect("finite");
        let hi = from_f64((c + eps).min(1.0)).expect("finite");
        let pieces = Pieces::new(&self.a1, self.term1, &self.r2, self.term2);
        let (f_lo, f_hi) = (pieces.at(&lo), pieces.at(&hi));
        for alpha in self.delta..=self.alpha_max {
            let x = int(alpha);
            let (vl, vh) = (f_lo.eval(&x).expect("den"), f_hi.eval(&x).expect("den"));
            if vl.is_negative() && vh.is_negative() {
                return Verdict::NotHyponormal(Refutation::CriterionViolation(Violation {
                    theorem_id: TheoremId::LiuLu41,
                    alpha: Some(alpha),
                    detail: format!("F_alpha(cos theta) < 0 on [{}, {}]", to_f64(&lo), to_f64(&hi)),
                    witness: self.float_witness(theta, alpha),
                }));
            }
        }
        let t_lo = poly_nonneg_on_integer_ray(&cleared(&f_lo), self.delta, self.alpha_max);
        let t_hi = poly_nonneg_on_integer_ray(&cleared(&f_hi), self.delta, self.alpha_max);
        if t_lo.is_positive() && t_hi.is_positive() {
            return Verdict::ProvenHyponormal(self.certificate(t_lo));
        }
        if self.condition.holds {
            Verdict::inconclusive(format!(
                "the necessity condition holds, so some alpha > {} violates the criterion",
                self.alpha_max
            ))
        } else {
            Verdict::inconclusive(format!("no violation found for alpha <= {}", self.alpha_max))
        }
    }

    fn float_witness(&self, theta: f64, alpha: i64) -> Option<Witness> {
        let s = self.symbol_at(theta);
        let u = CoefficientVector::basis_vector(Basis::OrthonormalBasis, alpha as usize);
        let (value, error_bound) = commutator_form_float(&s, &u);
        (value + error_bound < 0.0).then_some(Witness {
            vector: u,
            form_value: FormValue::Float { value, error_bound },
            section_size: 0,
            eigenvalue: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn small_second_coefficient_is_hyponormal_for_every_phase() {
        let pa = binomial_phase_analysis(&int(1), (2, 1), &rat(1, 10), (3, 2), 200).unwrap();
        assert!(pa.holds_for_all_theta);
        assert_eq!(pa.rows.len(), 200);
        assert!(pa.verdict_at(PI).is_proven());
        assert!(pa.verdict_at(2.0).is_proven());
    }

    #[test]
    fn unit_second_coefficient_fails_at_pi() {
        let pa = binomial_phase_analysis(&int(1), (2, 1), &int(1), (3, 2), 50).unwrap();
        assert!(!pa.holds_for_all_theta);
        let v = pa.verdict_at(PI);
        assert_eq!(v.violation_alpha(), Some(2));
        assert!(v.witness().unwrap().form_value.is_certified_negative());
        assert!(pa.verdict_at(0.0).is_proven());
        assert!(pa.verdict_at(PI / 2.0).is_proven());
    }

    #[test]
    fn theta_rows_solve_the_affine_equation() {
        let pa = binomial_phase_analysis(&int(1), (2, 1), &int(1), (3, 2), 40).unwrap();
        let pieces = Pieces::new(&int(1), (2, 1), &int(1), (3, 2));
        let (p, q) = pieces.affine();
        for r in pa.rows.iter().filter(|r| r.theta_alpha.is_some()) {
            let x = int(r.alpha);
            let c = r.theta_alpha.unwrap().cos();
            let v = p.eval_f64(r.alpha as f64) + c * q.eval_f64(r.alpha as f64);
            let scale = to_f64(&p.eval(&x).unwrap()).abs().max(1e-300);
            assert!(v.abs() <= 1e-9 * scale, "alpha={}", r.alpha);
        }
    }

    #[test]
    fn endpoint_values_match_direct_formula() {
        let pa = binomial_phase_analysis(&rat(3, 2), (4, 1), &rat(2, 3), (5, 2), 20).unwrap();
        for r in &pa.rows {
            let a = r.alpha;
            let (aa, rr) = (rat(3, 2) / int(a + 5), rat(2, 3) / int(a + 6));
            let (bb, ss) = (rat(3, 2) / int(a + 2), rat(2, 3) / int(a + 3));
            let c2 = rat(a - 2, a + 4);
            let fp = (&aa + &rr) * (&aa + &rr) - &c2 * (&bb + &ss) * (&bb + &ss);
            let fm = (&aa - &rr) * (&aa - &rr) - &c2 * (&bb - &ss) * (&bb - &ss);
            assert_eq!(r.f_endpoints, (fp, fm));
        }
    }

    #[test]
    fn shape_errors() {
        assert!(binomial_phase_analysis(&int(1), (2, 1), &int(1), (3, 1), 5).is_err());
        assert!(binomial_phase_analysis(&int(1), (1, 1), &int(1), (2, 2), 5).is_err());
        assert!(binomial_phase_analysis(&int(0), (2, 1), &int(1), (3, 2), 5).is_err());
    }

    proptest! {
        #[test]
        fn affine_reduction_identity(b in -50i64..50, bd in 1i64..20, s in -50i64..50, sd in 1i64..20, c in -20i64..20, cd in 1i64..20) {
            let (b, s, c) = (rat(b, bd), rat(s, sd), rat(c, cd));
            let lhs = (&b + &s * &c) * (&b + &s * &c) + &s * &s * (int(1) - &c * &c);
            let rhs = &b * &b + &s * &s + int(2) * &b * &s * &c;
            prop_assert_eq!(lhs, rhs);
        }
    }
}
