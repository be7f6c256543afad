use super::{Certificate, Refutation, TheoremId, Verdict};
use crate::arith::{poly_nonneg_on_integer_ray, RationalPoly, DEFAULT_CHECK_LIMIT};
use crate::operator::{commutator_form_exact, Basis, CoefficientVector, FormValue, Witness};
use crate::symbol::{Monomial, SymbolPoly};

/// Numerator of `(k+m-n+1)/(k+m+1)^2 - (k+n-m+1)/(k+n+1)^2` over the common
/// denominator `(k+m+1)^2 (k+n+1)^2`:
/// `(m^2 - n^2) k + (m-n+1)(n+1)^2 + (m-n-1)(m+1)^2`.
pub fn monomial_numerator(m: u32, n: u32) -> RationalPoly {
    let (m, n) = (m as i64, n as i64);
    RationalPoly::from_i64(&[
        (m - n + 1) * (n + 1) * (n + 1) + (m - n - 1) * (m + 1) * (m + 1),
        m * m - n * n,
    ])
}

pub fn check_monomial(mono: &Monomial) -> Verdict {
    check_monomial_with(mono, DEFAULT_CHECK_LIMIT)
}

/// As [`check_monomial`], scanning the numerator exactly up to `k_max`.
pub(crate) fn check_monomial_with(mono: &Monomial, k_max: i64) -> Verdict {
    if mono.coeff.is_zero() {
        return Verdict::ProvenHyponormal(Certificate::finite(TheoremId::SelfAdjointDelta0));
    }
    if mono.m >= mono.n {
        let tail = poly_nonneg_on_integer_ray(&monomial_numerator(mono.m, mono.n), 0, k_max);
        if !tail.is_positive() {
            // Cannot happen for m >= n; reported rather than asserted.
            return Verdict::inconclusive(format!("monomial numerator check failed: {:?}", tail.tag));
        }
        return Verdict::ProvenHyponormal(Certificate {
            theorem_id: TheoremId::Monomial32,
            ranges_checked: vec![(0, tail.checked_up_to)],
            tail: Some(tail),
        });
    }
    // m < n: the form at z^(n-m) is |a|^2 (1/(n+1)^2 - (2(n-m)+1)/(2n-m+1)^2) < 0.
    let d = (mono.n - mono.m) as usize;
    let u = CoefficientVector::basis_vector(Basis::MonomialBasis, d);
    let unit = SymbolPoly::monomial(mono.m, mono.n, crate::arith::int(1));
    let value = commutator_form_exact(&unit, &u).expect("unit coefficient is exact") * mono.coeff.norm_sq();
    Verdict::NotHyponormal(Refutation::Witness(Witness {
        vector: u,
        form_value: FormValue::ExactRationalTimesPi { value },
        section_size: 0,
        eigenvalue: None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Rational};
    use crate::symbol::Coefficient;

    fn weight_difference(m: i64, n: i64, k: i64) -> Rational {
        rat(k + m - n + 1, (k + m + 1) * (k + m + 1)) - rat(k + n - m + 1, (k + n + 1) * (k + n + 1))
    }

    #[test]
    fn numerator_matches_direct_difference() {
        for m in 0..8 {
            for n in 0..=m {
                let p = monomial_numerator(m, n);
                for k in 0..30i64 {
                    let (mi, ni) = (m as i64, n as i64);
                    let den = int((k + mi + 1) * (k + mi + 1) * (k + ni + 1) * (k + ni + 1));
                    assert_eq!(p.eval(&int(k)) / den, weight_difference(mi, ni, k), "m={m} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn hypo_monomials_are_proven() {
        let v = check_monomial(&Monomial::new(5, 2, int(3)));
        assert_eq!(v.theorem_id(), Some(TheoremId::Monomial32));
        assert!(v.certificate().unwrap().tail.as_ref().unwrap().is_positive());
    }

    #[test]
    fn zb_refuted_by_z() {
        let v = check_monomial(&Monomial::new(0, 1, int(1)));
        let w = v.witness().unwrap();
        assert_eq!(w.vector.offset, 1);
        assert_eq!(w.form_value, FormValue::ExactRationalTimesPi { value: rat(-1, 12) });
    }

    #[test]
    fn polar_coefficient_scales_witness_value() {
        let v = check_monomial(&Monomial::new(0, 1, Coefficient::polar(int(2), 0.4)));
        assert_eq!(
            v.witness().unwrap().form_value,
            FormValue::ExactRationalTimesPi { value: rat(-4, 12) }
        );
    }

    #[test]
    fn zero_is_hyponormal() {
        assert!(check_monomial(&Monomial::new(0, 3, int(0))).is_proven());
    }
}
