//! Cross-module invariants checked on generated symbols.

use bergman_hypo::arith::{int, rat, to_f64, GaussianRational};
use bergman_hypo::criteria::{check_with, check_hypo_plus_cohypo, check_sum_of_hypo_monomials, CheckOptions, Verdict};
use bergman_hypo::operator::{commutator_matrix, find_refutation};
use bergman_hypo::spectral::{monomial_commutator_norm, norm_report, section_norm};
use bergman_hypo::symbol::{parse_symbol, Coefficient, Monomial, SymbolPoly};
use proptest::prelude::*;

fn small() -> CheckOptions {
    CheckOptions {
        section_size: 48,
        max_section: 48,
        alpha_check: 60,
        k_max: 500,
        ..CheckOptions::default()
    }
}

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-9i64..=9, 1i64..=9, -9i64..=9, 1i64..=9).prop_map(|(a, b, c, d)| GaussianRational::new(rat(a, b), rat(c, d)))
}

fn nonzero_coeff() -> impl Strategy<Value = GaussianRational> {
    coeff().prop_filter("nonzero", |g| g.norm_sq() != int(0))
}

fn symbol() -> impl Strategy<Value = SymbolPoly> {
    prop::collection::vec((0u32..5, 0u32..5, coeff()), 1..4)
        .prop_map(|ts| SymbolPoly::new(ts.into_iter().map(|(m, n, c)| Monomial::new(m, n, c)).collect()))
}

fn min_eig(s: &SymbolPoly, n: usize) -> f64 {
    commutator_matrix(s, n).unwrap().min_eigenvalue()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// A proof is never contradicted by a finite section, and a refutation is
    /// backed by a certified negative value or a criterion violation.
    #[test]
    fn verdicts_are_consistent_with_sections(s in symbol()) {
        let v = check_with(&s, &small()).verdict;
        match &v {
            Verdict::ProvenHyponormal(_) => prop_assert!(min_eig(&s, 96) >= -1e-10, "{s}"),
            Verdict::NotHyponormal(_) => {
                if let Some(w) = v.witness() {
                    prop_assert!(w.form_value.is_certified_negative());
                } else {
                    prop_assert!(v.violation_alpha().is_some() || v.theorem_id().is_some());
                }
            }
            Verdict::Inconclusive(_) => {}
        }
    }

    /// `T_{c phi}` is hyponormal exactly when `T_phi` is, for `c != 0`.
    #[test]
    fn unimodular_and_scalar_multiples_agree(s in symbol(), c in nonzero_coeff()) {
        let a = check_with(&s, &small()).verdict;
        let b = check_with(&s.scale(&Coefficient::Exact(c)), &small()).verdict;
        if !a.is_inconclusive() && !b.is_inconclusive() {
            prop_assert_eq!(a.tag(), b.tag(), "{}", s);
        }
    }

    /// Largest eigenvalues of nested sections are nondecreasing.
    #[test]
    fn section_norm_is_monotone(s in symbol(), n in 2usize..40) {
        let a = section_norm(&s, n).unwrap();
        let b = section_norm(&s, n + 7).unwrap();
        prop_assert!(b >= a - 1e-12);
    }

    #[test]
    fn monomial_norm_bounds(m in 1u32..40, n in 0u32..40) {
        prop_assume!(n < m);
        let x = monomial_commutator_norm(m, n).unwrap();
        prop_assert!(x <= rat(1, 2));
        prop_assert!(x > int(0));
        let sec = section_norm(&SymbolPoly::monomial(m, n, int(1)), 4 * m as usize + 40).unwrap();
        prop_assert!(sec <= to_f64(&x) + 1e-12);
    }

    /// Two hyponormal terms: a proof must survive a finite section.
    #[test]
    fn hypo_pair_proofs_are_sound(m in 1u32..5, n in 0u32..4, i in 1u32..5, j in 0u32..4, a in nonzero_coeff(), b in nonzero_coeff()) {
        prop_assume!(m > n && i > j && (m, n) != (i, j));
        let f = Monomial::new(m, n, a);
        let g = Monomial::new(i, j, b);
        let v = check_sum_of_hypo_monomials(&f, &g).unwrap();
        if v.is_proven() {
            prop_assert!(min_eig(&SymbolPoly::new(vec![f, g]), 80) >= -1e-10);
        }
    }

    #[test]
    fn hypo_cohypo_proofs_are_sound(m in 1u32..5, n in 0u32..4, i in 1u32..6, j in 0u32..5, a in nonzero_coeff(), b in 1i64..40) {
        prop_assume!(m > n && i > j);
        let f = Monomial::new(m, n, a);
        let g = Monomial::new(j, i, rat(1, b));
        let v = check_hypo_plus_cohypo(&f, &g).unwrap();
        if v.is_proven() {
            prop_assert!(min_eig(&SymbolPoly::new(vec![f, g]), 80) >= -1e-10);
        }
        if let Some(w) = v.witness() {
            prop_assert!(w.form_value.is_certified_negative());
        }
    }
}

/// Whenever an exact proof is available, finite sections never refute.
#[test]
fn corpus_has_no_contradictions() {
    let corpus = [
        "z", "zb", "z^3", "|z|^2", "z + (1/2) zb^2", "z + (51/100) zb^2", "z^2 zb + (1/7) z^3 zb^4",
        "z^2 zb - z^3 zb^2", "z^2 zb + (1/10) z^3 zb^2", "z^3 zb + (1/100) z^2 zb", "z + (1/3)|z|^2",
        "z - 3|z|^2", "z^4 zb^2 + (2/3) z^3 zb", "z^2 zb + (1/9) z^4 zb^5",
    ];
    for text in corpus {
        let s = parse_symbol(text).unwrap();
        let v = check_with(&s, &small()).verdict;
        let w = find_refutation(&s, 128).unwrap();
        assert!(!(v.is_proven() && w.is_some()), "{text}");
    }
}

/// Conjecture monitor: the half-area value should dominate the section norm
/// for hyponormal symbols. Violations are reported, not failed.
#[test]
fn half_area_monitor() {
    let mut seen = 0;
    for text in ["z", "z^2 zb", "z^3 zb", "z + (1/2) zb^2", "z^2 zb + (1/7) z^3 zb^4", "z + (1/3)|z|^2"] {
        let s = parse_symbol(text).unwrap();
        if !check_with(&s, &small()).verdict.is_proven() {
            continue;
        }
        let r = norm_report(&s, 120, 128).unwrap();
        if r.conjecture_violated(0.02) {
            eprintln!("half-area value {:?} below section norm {} for {text}", r.half_area_conjecture, r.section_lower_bound);
        }
        seen += 1;
    }
    assert!(seen >= 4);
}

#[test]
fn verdict_json_has_documented_fields() {
    let s = parse_symbol("z^2 zb - z^3 zb^2").unwrap();
    let v = check_with(&s, &small()).verdict;
    let j = serde_json::to_value(&v).unwrap();
    assert_eq!(j["tag"], "NotHyponormal");
    assert_eq!(j["theorem_id"], "LiuLu41");
    assert_eq!(j["violation_alpha"], 2);
    assert_eq!(j["witness"]["form_value"]["kind"], "ExactRationalTimesPi");
    assert_eq!(j["witness"]["form_value"]["value"], "-1/1800");
    assert!(j["ranges"].as_array().unwrap().is_empty());

    let p = check_with(&parse_symbol("z^3 zb").unwrap(), &small()).verdict;
    let j = serde_json::to_value(&p).unwrap();
    assert_eq!(j["tag"], "ProvenHyponormal");
    assert_eq!(j["tail"]["tag"], "PositiveOnRay");
}
