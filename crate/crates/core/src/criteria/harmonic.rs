use super::{Certificate, Refutation, TheoremId, Verdict, Violation};
use crate::arith::{fmt_rational, int, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::operator::find_refutation;
use crate::symbol::{Coefficient, Monomial, SymbolPoly};

/// Squared threshold for `|alpha|` in `z^n + alpha zb^m`: `(m+1)/(n+1)` when
/// `m <= n`, `n^2/m^2` when `m >= n` (both equal 1 at `m = n`).
fn threshold_sq(n: u32, m: u32) -> Rational {
    let (n, m) = (n as i64, m as i64);
    if m <= n {
        Rational::new((m + 1).into(), (n + 1).into())
    } else {
        Rational::new((n * n).into(), (m * m).into())
    }
}

/// If-and-only-if test for `T_{z^n + alpha zb^m}`.
pub fn check_harmonic_binomial(n: u32, m: u32, alpha: &GaussianRational) -> Result<Verdict> {
    let s = SymbolPoly::new(vec![
        Monomial::new(n, 0, int(1)),
        Monomial::new(0, m, Coefficient::Exact(alpha.clone())),
    ]);
    harmonic_binomial_from_norm(n, m, &alpha.norm_sq(), &s)
}

/// Same test from `|alpha|^2` alone; `symbol` is only used to search for an
/// explicit witness when the criterion fails.
pub fn harmonic_binomial_from_norm(n: u32, m: u32, alpha_sq: &Rational, symbol: &SymbolPoly) -> Result<Verdict> {
    if n < 1 || m < 1 {
        return Err(Error::PreconditionViolated("need n >= 1 and m >= 1".into()));
    }
    let t = threshold_sq(n, m);
    if *alpha_sq <= t {
        return Ok(Verdict::ProvenHyponormal(Certificate::finite(TheoremId::HarmonicBinomial)));
    }
    let mut witness = None;
    for size in [32, 128] {
        if let Some(w) = find_refutation(symbol, size)? {
            witness = Some(w);
            break;
        }
    }
    Ok(Verdict::NotHyponormal(Refutation::CriterionViolation(Violation {
        theorem_id: TheoremId::HarmonicBinomial,
        alpha: None,
        detail: format!("|alpha|^2 = {} exceeds {}", fmt_rational(alpha_sq), fmt_rational(&t)),
        witness,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn g(r: Rational) -> GaussianRational {
        GaussianRational::real(r)
    }

    #[test]
    fn boundary_is_hyponormal() {
        assert!(check_harmonic_binomial(1, 2, &g(rat(1, 2))).unwrap().is_proven());
        assert!(check_harmonic_binomial(1, 2, &g(rat(51, 100))).unwrap().is_refuted());
        assert!(check_harmonic_binomial(2, 1, &g(rat(6, 5))).unwrap().is_refuted());
        assert!(check_harmonic_binomial(3, 3, &GaussianRational::i()).unwrap().is_proven());
        // |3/5 + 4/5 i| = 1 against sqrt(2/3)
        let a = GaussianRational::new(rat(3, 5), rat(4, 5));
        assert!(check_harmonic_binomial(2, 1, &a).unwrap().is_refuted());
    }

    #[test]
    fn thresholds_are_consistent_with_sections() {
        // Just below each threshold no section should go negative.
        for (n, m, a) in [(1u32, 2u32, rat(1, 2)), (2, 1, rat(4, 5)), (3, 1, rat(7, 10)), (1, 3, rat(1, 3))] {
            let s = SymbolPoly::new(vec![Monomial::new(n, 0, int(1)), Monomial::new(0, m, a.clone())]);
            let mtx = crate::operator::commutator_matrix(&s, 200).unwrap();
            assert!(mtx.min_eigenvalue() >= -1e-10, "n={n} m={m}");
        }
    }

    #[test]
    fn zero_exponent_rejected() {
        assert!(check_harmonic_binomial(0, 2, &g(rat(1, 2))).is_err());
    }
}
