//! Two-monomial symbols `f + g` through a diagonal lower bound.
//!
//! In the monomial basis the self-commutator form of `a f + b g` splits into
//! `sum_k (|a|^2 d_f(k) + |b|^2 d_g(k)) |u_k|^2` plus the cross term
//! `2 Re(a conj(b) sum_k C_k u_k conj(u_{k+s}))`, where `s = delta_f - delta_g`
//! and `C_k = P_k - Q_k` collects the `T` and `T*` contributions. Bounding the
//! cross term by `|ab| |C_k| (|u_k|^2 + |u_{k+s}|^2)` leaves the per-index
//! margin
//!
//! ```text
//! margin_k = |a|^2 d_f(k) + |b|^2 d_g(k) - |ab| (|C_k| + |C_{k-s}|),
//! ```
//!
//! and the operator is hyponormal when every margin is nonnegative. All
//! quantities are in units of `pi`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::monomial::check_monomial_with;
use super::{Certificate, TheoremId, Verdict, DEFAULT_ALPHA_CHECK};
use crate::arith::{
    ceil_int, exact_sqrt, floor_int, int, poly_nonneg_on_integer_ray, rat, rational_fn_sup_on_ray, Positivity,
    PositivityVerdict, Rational, RationalFn, RationalPoly, DEFAULT_CHECK_LIMIT,
};
use crate::error::{Error, Result};
use crate::symbol::{Monomial, SymbolPoly};

/// One index of the cross-term comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossTermBounds {
    pub k: i64,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub c_k: Rational,
    /// `C_{k-s}` for `k >= s`, else 0.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub d_k: Rational,
    /// `|a|^2 d_f(k)`.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub diag_f: Rational,
    /// `|b|^2 d_g(k)`.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub diag_g: Rational,
    /// Exact margin; absent when `|ab|` is irrational (the sign is still exact).
    #[serde(serialize_with = "crate::arith::serde_rational::option::serialize")]
    pub margin: Option<Rational>,
    pub holds: bool,
}

/// The hypo + cohypo quantities `A~, B~, C~, D~` at one index, with
/// `margin = A~ - B~ - |ab| (|C~| + |D~|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TildeBounds {
    pub k: i64,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub a: Rational,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub b: Rational,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub c: Rational,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub d: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairAnalysis {
    pub f: Monomial,
    pub g: Monomial,
    pub shift: i64,
    /// From here on every indicator in the formulas is active and the signs of
    /// `C_k`, `C_{k-s}` are constant, so the margin is one rational function.
    pub tail_start: i64,
    pub rows: Vec<CrossTermBounds>,
    /// The margin as a rational function of `k`, valid for `k >= tail_start`;
    /// `None` when `|ab|` is irrational.
    #[serde(skip)]
    pub margin_fn: Option<RationalFn>,
    pub tail: PositivityVerdict,
}

impl PairAnalysis {
    pub fn first_failure(&self) -> Option<i64> {
        self.rows
            .iter()
            .find(|r| !r.holds)
            .map(|r| r.k)
            .or_else(|| self.tail.negative_at())
    }

    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds) && self.tail.is_positive()
    }

    pub fn tilde_rows(&self) -> Vec<TildeBounds> {
        self.rows
            .iter()
            .map(|r| TildeBounds {
                k: r.k,
                a: r.diag_f.clone(),
                b: -r.diag_g.clone(),
                c: r.c_k.clone(),
                d: r.d_k.clone(),
            })
            .collect()
    }

    fn certificate(&self, theorem_id: TheoremId) -> Certificate {
        let last = self.rows.last().map_or(0, |r| r.k).max(self.tail.checked_up_to);
        Certificate {
            theorem_id,
            ranges_checked: vec![(0, last)],
            tail: Some(self.tail.clone()),
        }
    }

    fn verdict(&self, theorem_id: TheoremId) -> Verdict {
        if self.holds() {
            return Verdict::ProvenHyponormal(self.certificate(theorem_id));
        }
        match self.first_failure() {
            Some(k) => Verdict::inconclusive(format!(
                "sufficient condition fails: cross-term margin is negative at k = {k}"
            )),
            None => Verdict::inconclusive("tail of the cross-term margin could not be certified"),
        }
    }
}

// Per-unit-coefficient pieces, exact at a single index.

fn delta(t: &Monomial) -> i64 {
    t.delta()
}

/// Coefficient of `T_t z^l` on `z^(l+delta)`.
fn coef_t(t: &Monomial, l: i64) -> Rational {
    let d = delta(t);
    if l < 0 || l + d < 0 {
        Rational::zero()
    } else {
        rat(l + d + 1, l + t.m as i64 + 1)
    }
}

/// Coefficient of `T_t^* z^l` on `z^(l-delta)`.
fn coef_star(t: &Monomial, l: i64) -> Rational {
    let d = delta(t);
    if l < 0 || l - d < 0 {
        Rational::zero()
    } else {
        rat(l - d + 1, l + t.n as i64 + 1)
    }
}

/// `(||T z^k||^2 - ||T^* z^k||^2) / pi` for unit coefficient.
fn diag(t: &Monomial, k: i64) -> Rational {
    let d = delta(t);
    let a = coef_t(t, k);
    let b = coef_star(t, k);
    let mut out = Rational::zero();
    if !a.is_zero() {
        out += &a * &a / int(k + d + 1);
    }
    if !b.is_zero() {
        out -= &b * &b / int(k - d + 1);
    }
    out
}

/// `C_k`: inner product coefficient of `u_k conj(u_{k+s})`, `T` minus `T*` part.
fn cross(f: &Monomial, g: &Monomial, s: i64, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    let (df, dg) = (delta(f), delta(g));
    let mut out = Rational::zero();
    if k + df >= 0 {
        out += coef_t(f, k) * coef_t(g, k + s) / int(k + df + 1);
    }
    if k - dg >= 0 {
        out -= coef_star(f, k + s) * coef_star(g, k) / int(k - dg + 1);
    }
    out
}

fn x_plus(c: i64) -> RationalPoly {
    RationalPoly::x_plus(int(c))
}

fn frac(num: RationalPoly, den: RationalPoly) -> RationalFn {
    RationalFn::new(num, den)
}

/// `d_t(k)` with both indicators active.
fn diag_fn(t: &Monomial) -> RationalFn {
    let (m, n, d) = (t.m as i64, t.n as i64, delta(t));
    frac(x_plus(d + 1), x_plus(m + 1).pow(2)).sub(&frac(x_plus(1 - d), x_plus(n + 1).pow(2)))
}

/// `C_k` with both indicators active.
fn cross_fn(f: &Monomial, g: &Monomial, s: i64) -> RationalFn {
    let (df, dg) = (delta(f), delta(g));
    let p = frac(x_plus(df + 1), &x_plus(f.m as i64 + 1) * &x_plus(s + g.m as i64 + 1));
    let q = frac(x_plus(1 - dg), &x_plus(s + f.n as i64 + 1) * &x_plus(g.n as i64 + 1));
    p.sub(&q)
}

/// Sign of `r` on the integers from `start`, or `None` if it changes there.
fn sign_on_ray(r: &RationalFn, start: i64) -> Option<i64> {
    let p = &r.num * &r.den;
    if p.is_zero() {
        return Some(0);
    }
    let limit = start + 64;
    if poly_nonneg_on_integer_ray(&p, start, limit).is_positive() {
        Some(1)
    } else if poly_nonneg_on_integer_ray(&-&p, start, limit).is_positive() {
        Some(-1)
    } else {
        None
    }
}

fn root_free_start(r: &RationalFn) -> i64 {
    let p = &r.num * &r.den;
    if p.is_zero() {
        return 0;
    }
    let bound = ceil_int(&p.cauchy_root_bound());
    i64::try_from(bound).unwrap_or(i64::MAX / 4) + 1
}

/// Margin analysis for `f + g` (any two distinct monomials with exact or polar
/// coefficients; only the moduli enter).
pub fn pair_analysis(f: &Monomial, g: &Monomial, row_limit: i64, check_limit: i64) -> PairAnalysis {
    let (f, g) = if delta(f) >= delta(g) { (f, g) } else { (g, f) };
    let s = delta(f) - delta(g);
    let a2 = f.coeff.norm_sq();
    let b2 = g.coeff.norm_sq();
    let ab2 = &a2 * &b2;
    let ab = exact_sqrt(&ab2);

    let k0 = delta(f).abs().max(delta(g).abs()).max(s);
    let c_fn = cross_fn(f, g, s);
    let d_fn = c_fn.shift(&int(-s));
    let (mut start, mut sc, mut sd) = (k0, sign_on_ray(&c_fn, k0), sign_on_ray(&d_fn, k0));
    if sc.is_none() || sd.is_none() {
        start = k0.max(root_free_start(&c_fn)).max(root_free_start(&d_fn));
        sc = sign_on_ray(&c_fn, start);
        sd = sign_on_ray(&d_fn, start);
    }
    let (sc, sd) = (sc.unwrap_or(0), sd.unwrap_or(0));

    let diag_total = diag_fn(f).scale(&a2).add(&diag_fn(g).scale(&b2));
    let x = c_fn.scale(&int(sc)).add(&d_fn.scale(&int(sd)));
    let (margin_fn, tail) = match &ab {
        Some(r) => {
            let mf = diag_total.sub(&x.scale(r));
            let tail = poly_nonneg_on_integer_ray(&(&mf.num * &mf.den), start, check_limit.max(start));
            (Some(mf), tail)
        }
        None => {
            // margin >= 0  <=>  diag >= 0 and diag^2 >= |ab|^2 x^2 (x >= 0 here).
            let first = poly_nonneg_on_integer_ray(&(&diag_total.num * &diag_total.den), start, check_limit.max(start));
            let sq = diag_total.mul(&diag_total).sub(&x.mul(&x).scale(&ab2));
            let second = poly_nonneg_on_integer_ray(&(&sq.num * &sq.den), start, check_limit.max(start));
            let tail = match (&first.tag, &second.tag) {
                (Positivity::PositiveOnRay, _) => second,
                (Positivity::NegativeAt(k1), Positivity::NegativeAt(k2)) if k2 < k1 => second,
                _ => first,
            };
            (None, tail)
        }
    };

    let last_row = row_limit.max(start - 1);
    let rows = (0..=last_row)
        .map(|k| {
            let c_k = cross(f, g, s, k);
            let d_k = if k >= s { cross(f, g, s, k - s) } else { Rational::zero() };
            let diag_f = &a2 * diag(f, k);
            let diag_g = &b2 * diag(g, k);
            let dsum = &diag_f + &diag_g;
            let xk = c_k.abs() + d_k.abs();
            let (margin, holds) = match &ab {
                Some(r) => {
                    let mg = &dsum - r * &xk;
                    let ok = !mg.is_negative();
                    (Some(mg), ok)
                }
                None => {
                    let ok = !dsum.is_negative() && &dsum * &dsum >= &ab2 * &xk * &xk;
                    (None, ok)
                }
            };
            CrossTermBounds {
                k,
                c_k,
                d_k,
                diag_f,
                diag_g,
                margin,
                holds,
            }
        })
        .collect();

    PairAnalysis {
        f: f.clone(),
        g: g.clone(),
        shift: s,
        tail_start: start,
        rows,
        margin_fn,
        tail,
    }
}

/// Degenerate two-term inputs: a zero coefficient or equal exponents leave a
/// single monomial.
fn as_single(f: &Monomial, g: &Monomial) -> Option<Monomial> {
    if g.coeff.is_zero() {
        return Some(f.clone());
    }
    if f.coeff.is_zero() {
        return Some(g.clone());
    }
    if (f.m, f.n) == (g.m, g.n) {
        let s = SymbolPoly::new(vec![f.clone(), g.clone()]);
        return Some(s.terms().first().cloned().unwrap_or_else(|| Monomial::new(f.m, f.n, int(0))));
    }
    None
}

/// `a z^m zb^n + b z^i zb^j` with `m > n`, `i > j`.
pub fn check_sum_of_hypo_monomials(f: &Monomial, g: &Monomial) -> Result<Verdict> {
    sum_of_hypo_with(f, g, DEFAULT_CHECK_LIMIT)
}

pub(crate) fn sum_of_hypo_with(f: &Monomial, g: &Monomial, k_max: i64) -> Result<Verdict> {
    if f.m <= f.n || g.m <= g.n {
        return Err(Error::PreconditionViolated(format!(
            "both terms must have more z than zb: got {f} and {g}"
        )));
    }
    if let Some(t) = as_single(f, g) {
        return Ok(check_monomial_with(&t, k_max));
    }
    let pa = pair_analysis(f, g, DEFAULT_ALPHA_CHECK, k_max);
    Ok(pa.verdict(TheoremId::SumHypo33))
}

/// `a z^m zb^n + b zb^i z^j` with `m > n`, `i > j`. `g` is given as a
/// monomial with more `zb` than `z`.
pub fn check_hypo_plus_cohypo(f: &Monomial, g: &Monomial) -> Result<Verdict> {
    hypo_plus_cohypo_with(f, g, DEFAULT_CHECK_LIMIT)
}

pub(crate) fn hypo_plus_cohypo_with(f: &Monomial, g: &Monomial, k_max: i64) -> Result<Verdict> {
    if g.coeff.is_zero() && f.m >= f.n {
        return Ok(check_monomial_with(f, k_max));
    }
    if f.m <= f.n || g.n <= g.m {
        return Err(Error::PreconditionViolated(format!(
            "expected a z-dominant and a zb-dominant term: got {f} and {g}"
        )));
    }
    let pa = pair_analysis(f, g, DEFAULT_ALPHA_CHECK, k_max);
    Ok(pa.verdict(TheoremId::HypoCoHypo35))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub n: u32,
    pub delta: u32,
    pub j: u32,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub q_sup: Rational,
    pub symbol: SymbolPoly,
    pub verdict: Verdict,
}

/// `z^(n+delta) zb^n + (1/(2j+delta)) zb^(j+delta) z^j` for the least `j`
/// exceeding both `m = n + delta` and `sup q` on `[2 delta, inf)` that passes
/// the margin check, where `q(k) = (k(m+delta) + mn + m + delta)/(k + n - delta + 1)`.
pub fn construct_hypo_plus_cohypo(n: u32, delta: u32) -> Result<ConstructionReport> {
    if n < 1 || delta < 1 {
        return Err(Error::PreconditionViolated("need n >= 1 and delta >= 1".into()));
    }
    let (ni, d) = (n as i64, delta as i64);
    let m = ni + d;
    let num = RationalPoly::from_i64(&[m * ni + m + d, m + d]);
    let den = RationalPoly::from_i64(&[ni - d + 1, 1]);
    let q_sup = rational_fn_sup_on_ray(&num, &den, &int(2 * d))?;
    let floor_q = i64::try_from(floor_int(&q_sup)).map_err(|_| Error::ConstructionFailed("q_sup too large".into()))?;
    let mut j = (m + 1).max(floor_q + 1);
    let cap = ceil_int(&((&q_sup + int(m)) * int(10)));
    let cap = i64::try_from(cap).unwrap_or(i64::MAX);
    let f = Monomial::new(m as u32, n, int(1));
    while j <= cap {
        let g = Monomial::new(j as u32, (j + d) as u32, rat(1, 2 * j + d));
        let verdict = check_hypo_plus_cohypo(&f, &g)?;
        if let Verdict::ProvenHyponormal(mut cert) = verdict {
            cert.theorem_id = TheoremId::Construct37;
            return Ok(ConstructionReport {
                n,
                delta,
                j: j as u32,
                q_sup,
                symbol: SymbolPoly::new(vec![f, g]),
                verdict: Verdict::ProvenHyponormal(cert),
            });
        }
        j += 1;
    }
    Err(Error::ConstructionFailed(format!("no j up to {cap} passed the margin check")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::GaussianRational;
    use num_traits::One;
    use crate::operator::{commutator_form_exact, commutator_matrix, Basis, CoefficientVector};

    fn mono(m: u32, n: u32, c: Rational) -> Monomial {
        Monomial::new(m, n, c)
    }

    /// Brute-force oracle for the diagonal and cross coefficients: evaluate
    /// the exact form on `x z^k + y z^(k+s)` for a few `(x, y)` and solve.
    #[test]
    fn rows_match_exact_form() {
        let f = mono(3, 1, int(1));
        let g = mono(1, 3, rat(1, 3));
        let pa = pair_analysis(&f, &g, 12, 100);
        let s = pa.shift as usize;
        let sym = SymbolPoly::new(vec![f.clone(), g.clone()]);
        // form(z^k) = diag_f(k) + diag_g(k) (the cross term needs two indices)
        for row in &pa.rows {
            let k = row.k as usize;
            let u = CoefficientVector::basis_vector(Basis::MonomialBasis, k);
            assert_eq!(commutator_form_exact(&sym, &u).unwrap(), &row.diag_f + &row.diag_g, "k={k}");
            // form(z^k + z^(k+s)) - form(z^k) - form(z^(k+s)) = 2 Re(a conj(b)) C_k
            let mut e = vec![GaussianRational::zero(); s + 1];
            e[0] = GaussianRational::one();
            e[s] = GaussianRational::one();
            let both = commutator_form_exact(&sym, &CoefficientVector::exact(Basis::MonomialBasis, k, e)).unwrap();
            let hi = commutator_form_exact(&sym, &CoefficientVector::basis_vector(Basis::MonomialBasis, k + s)).unwrap();
            let c = f.coeff.exact().unwrap() * &g.coeff.exact().unwrap().conj();
            assert_eq!(both - &row.diag_f - &row.diag_g - hi, int(2) * &c.re * &row.c_k, "k={k}");
        }
    }

    #[test]
    fn rational_tail_matches_rows() {
        let pa = pair_analysis(&mono(2, 1, int(1)), &mono(3, 4, rat(1, 7)), 40, 100);
        let mf = pa.margin_fn.as_ref().unwrap();
        for r in pa.rows.iter().filter(|r| r.k >= pa.tail_start) {
            assert_eq!(mf.eval(&int(r.k)).as_ref(), r.margin.as_ref(), "k={}", r.k);
        }
    }

    /// Cross coefficients against the closed forms for two hypo terms
    /// (`f = a z^m zb^n`, `g = b z^i zb^j`, `m - n >= i - j`).
    #[test]
    fn cross_coefficients_match_closed_form_hypo_pair() {
        for (m, n, i, j) in [(3i64, 1i64, 2i64, 1i64), (5, 1, 4, 2), (4, 0, 3, 1), (6, 2, 2, 1)] {
            let f = mono(m as u32, n as u32, int(1));
            let g = mono(i as u32, j as u32, int(1));
            let pa = pair_analysis(&f, &g, 30, 50);
            for r in &pa.rows {
                let k = r.k;
                let mut c = rat(m - n + k + 1, (m + k + 1) * (m - n + j + k + 1));
                if k >= i - j {
                    c -= rat(j - i + k + 1, (j + k + 1) * (j - i + m + k + 1));
                }
                assert_eq!(r.c_k, c, "({m},{n},{i},{j}) k={k}");
            }
        }
    }

    /// Closed forms for hypo + cohypo (`g = b zb^i z^j`), valid for all `k`.
    #[test]
    fn cross_coefficients_match_closed_form_hypo_cohypo() {
        for (m, n, i, j) in [(2i64, 1i64, 4i64, 3i64), (3, 1, 5, 2), (4, 2, 3, 0)] {
            let f = mono(m as u32, n as u32, int(1));
            let g = mono(j as u32, i as u32, int(1));
            let pa = pair_analysis(&f, &g, 30, 50);
            let s = m - n + i - j;
            assert_eq!(pa.shift, s);
            let ct = |k: i64| {
                rat(m - n + k + 1, (m + k + 1) * (m - n + i + k + 1))
                    - rat(i - j + k + 1, (i + k + 1) * (i - j + m + k + 1))
            };
            for r in &pa.rows {
                assert_eq!(r.c_k, ct(r.k));
                let d = if r.k >= s {
                    let k = r.k;
                    rat(k + j - i + 1, (n + j - i + k + 1) * (j + k + 1))
                        - rat(k + n - m + 1, (j + n - m + k + 1) * (n + k + 1))
                } else {
                    int(0)
                };
                assert_eq!(r.d_k, d, "k={}", r.k);
            }
        }
    }

    #[test]
    fn seventh_example_a_tilde() {
        let pa = pair_analysis(&mono(2, 1, int(1)), &mono(3, 4, rat(1, 7)), 100, 100);
        for t in pa.tilde_rows().iter().filter(|t| t.k >= 1) {
            let k = t.k;
            assert_eq!(t.a, rat(3 * k + 8, (k + 3) * (k + 3) * (k + 2) * (k + 2)));
        }
    }

    #[test]
    fn small_b_hypo_pair_is_proven_and_psd() {
        let f = mono(3, 1, int(1));
        let g = mono(2, 1, rat(1, 100));
        let v = check_sum_of_hypo_monomials(&f, &g).unwrap();
        assert_eq!(v.theorem_id(), Some(TheoremId::SumHypo33));
        let m = commutator_matrix(&SymbolPoly::new(vec![f, g]), 120).unwrap();
        assert!(m.min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn unit_cohypo_term_is_inconclusive() {
        let v = check_hypo_plus_cohypo(&mono(2, 1, int(1)), &mono(3, 4, int(1))).unwrap();
        assert!(v.is_inconclusive());
    }

    #[test]
    fn precondition_errors() {
        assert!(check_sum_of_hypo_monomials(&mono(1, 1, int(1)), &mono(2, 1, int(1))).is_err());
        assert!(check_hypo_plus_cohypo(&mono(2, 1, int(1)), &mono(2, 1, int(1))).is_err());
    }

    #[test]
    fn merged_terms_reduce_to_monomial() {
        let v = check_sum_of_hypo_monomials(&mono(2, 1, int(1)), &mono(2, 1, int(1))).unwrap();
        assert_eq!(v.theorem_id(), Some(TheoremId::Monomial32));
    }

    #[test]
    fn construction_smallest_case() {
        let r = construct_hypo_plus_cohypo(1, 1).unwrap();
        assert_eq!(r.q_sup, rat(11, 3));
        assert_eq!(r.j, 4);
        assert_eq!(r.symbol.to_string(), "z^2 zb + (1/9) z^4 zb^5");
        assert_eq!(r.verdict.theorem_id(), Some(TheoremId::Construct37));
    }
}
