//! Fixed relative degree: Mellin-transform criterion and the quarter-plane test.
//!
//! For `phi = e^(i delta t) phi0(r)` with `phi0(r) = sum a_i r^(p_i)` the
//! operator is diagonal up to the shift `delta`:
//! `T z^k = 2(k+delta+1) phi0^(2k+delta+2) z^(k+delta)`. The form at `z^k` is
//! therefore a positive multiple of
//! `(k+delta+1) |phi0^(2k+delta+2)|^2 - (k-delta+1) |phi0^(2k-delta+2)|^2`,
//! and hyponormality is equivalent to that being nonnegative for all
//! `k >= delta`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{Certificate, Refutation, TheoremId, Verdict, Violation};
use crate::arith::{int, poly_nonneg_on_integer_ray, GaussianRational, PositivityVerdict, Rational, RationalPoly};
use crate::error::{Error, Result};
use crate::operator::{Basis, CoefficientVector, Witness};
use crate::symbol::{Coefficient, RadialProfile, SymbolClass, SymbolPoly};

/// `phi0^(s) = sum a_i / (s + p_i)`.
pub fn mellin_hat(profile: &RadialProfile, s: &Rational) -> Result<GaussianRational> {
    let mut acc = GaussianRational::zero();
    for (p, c) in &profile.components {
        let den = s + int(*p as i64);
        if den.is_zero() {
            return Err(Error::PoleHit(s.clone()));
        }
        acc = acc + c.exact()?.scale(&den.recip());
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MellinCheckRow {
    pub alpha: i64,
    /// `(alpha - delta + 1)/(alpha + delta + 1)`.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub c_squared: Rational,
    /// `|phi0^(2 alpha + delta + 2)|^2`.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub lhs_sq: Rational,
    /// `c^2 |phi0^(2 alpha - delta + 2)|^2`.
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub rhs_sq: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiuLuReport {
    pub delta: i64,
    pub rows: Vec<MellinCheckRow>,
    /// Positivity of the cleared-denominator difference from `alpha = delta`.
    pub tail: Option<PositivityVerdict>,
    pub verdict: Verdict,
}

fn row(profile: &RadialProfile, alpha: i64) -> Result<MellinCheckRow> {
    let d = profile.delta;
    let lhs_sq = mellin_hat(profile, &int(2 * alpha + d + 2))?.norm_sq();
    let c_squared = Rational::new((alpha - d + 1).into(), (alpha + d + 1).into());
    let rhs_sq = &c_squared * mellin_hat(profile, &int(2 * alpha - d + 2))?.norm_sq();
    Ok(MellinCheckRow {
        alpha,
        holds: lhs_sq >= rhs_sq,
        c_squared,
        lhs_sq,
        rhs_sq,
    })
}

/// Real and imaginary parts of `sum a_i prod_{j != i} (x + p_j)`, and the
/// common denominator `prod (x + p_j)`.
fn cleared_transform(profile: &RadialProfile) -> Result<(RationalPoly, RationalPoly, RationalPoly)> {
    let factors: Vec<RationalPoly> = profile
        .components
        .iter()
        .map(|(p, _)| RationalPoly::x_plus(int(*p as i64)))
        .collect();
    let mut re = RationalPoly::zero();
    let mut im = RationalPoly::zero();
    for (i, (_, c)) in profile.components.iter().enumerate() {
        let c = c.exact()?;
        let rest = factors
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .fold(RationalPoly::one(), |acc, (_, f)| &acc * f);
        re = &re + &rest.scale(&c.re);
        im = &im + &rest.scale(&c.im);
    }
    let den = factors.iter().fold(RationalPoly::one(), |acc, f| &acc * f);
    Ok((re, im, den))
}

/// `(a+d+1)|N(2a+d+2)|^2 D(2a-d+2)^2 - (a-d+1)|N(2a-d+2)|^2 D(2a+d+2)^2` as a
/// polynomial in `a`; same sign as the row difference for `a >= delta > 0`.
fn cleared_difference(profile: &RadialProfile) -> Result<RationalPoly> {
    let d = profile.delta;
    let (re, im, den) = cleared_transform(profile)?;
    let at = |p: &RationalPoly, shift: i64| p.compose_linear(&int(2), &int(shift));
    let abs2 = |shift: i64| {
        let (r, i) = (at(&re, shift), at(&im, shift));
        &(&r * &r) + &(&i * &i)
    };
    let (up, down) = (d + 2, 2 - d);
    let d_up = at(&den, up);
    let d_down = at(&den, down);
    let left = &(&RationalPoly::x_plus(int(d + 1)) * &abs2(up)) * &(&d_down * &d_down);
    let right = &(&RationalPoly::x_plus(int(1 - d)) * &abs2(down)) * &(&d_up * &d_up);
    Ok(&left - &right)
}

fn monomial_witness(s: &SymbolPoly, alpha: i64) -> Result<Option<Witness>> {
    let u = CoefficientVector::basis_vector(Basis::MonomialBasis, alpha as usize);
    Witness::from_exact_vector(s, u)
}

fn violation(s: &SymbolPoly, alpha: i64, detail: String) -> Result<Verdict> {
    Ok(Verdict::NotHyponormal(Refutation::CriterionViolation(Violation {
        theorem_id: TheoremId::LiuLu41,
        alpha: Some(alpha),
        detail,
        witness: monomial_witness(s, alpha)?,
    })))
}

/// Full table plus verdict. `alpha_check` is the last row evaluated one by one.
pub fn liu_lu_report(s: &SymbolPoly, alpha_check: i64) -> Result<LiuLuReport> {
    if !s.is_exact() {
        return Err(Error::ExactnessViolation);
    }
    let profile = s.radial_profile()?;
    let d = profile.delta;
    if s.is_zero() || d == 0 {
        // Radial symbol: T is diagonal in the monomial basis, hence normal.
        return Ok(LiuLuReport {
            delta: d,
            rows: Vec::new(),
            tail: None,
            verdict: Verdict::ProvenHyponormal(Certificate::finite(TheoremId::SelfAdjointDelta0)),
        });
    }
    if d < 0 {
        for alpha in 0..=alpha_check.max(0) {
            if let Some(w) = monomial_witness(s, alpha)? {
                let verdict = Verdict::NotHyponormal(Refutation::CriterionViolation(Violation {
                    theorem_id: TheoremId::LiuLu41,
                    alpha: Some(alpha),
                    detail: format!("relative degree {d} < 0: the form at z^{alpha} is negative"),
                    witness: Some(w),
                }));
                return Ok(LiuLuReport { delta: d, rows: Vec::new(), tail: None, verdict });
            }
        }
        let verdict = Verdict::inconclusive(format!(
            "relative degree {d} < 0 but no negative z^alpha found for alpha <= {alpha_check}"
        ));
        return Ok(LiuLuReport { delta: d, rows: Vec::new(), tail: None, verdict });
    }
    let rows = (d..=alpha_check.max(d)).map(|a| row(&profile, a)).collect::<Result<Vec<_>>>()?;
    if let Some(bad) = rows.iter().find(|r| !r.holds) {
        let detail = format!(
            "|phi0^(2a+d+2)|^2 = {} < c^2 |phi0^(2a-d+2)|^2 = {}",
            crate::arith::fmt_rational(&bad.lhs_sq),
            crate::arith::fmt_rational(&bad.rhs_sq)
        );
        let verdict = violation(s, bad.alpha, detail)?;
        return Ok(LiuLuReport { delta: d, rows, tail: None, verdict });
    }
    let g = cleared_difference(&profile)?;
    let tail = poly_nonneg_on_integer_ray(&g, d, alpha_check.max(d));
    let verdict = match tail.negative_at() {
        Some(k) => violation(s, k, format!("cleared difference is negative at alpha = {k}"))?,
        None if tail.is_positive() => Verdict::ProvenHyponormal(Certificate {
            theorem_id: TheoremId::LiuLu41,
            ranges_checked: vec![(d, tail.checked_up_to)],
            tail: Some(tail.clone()),
        }),
        None => Verdict::inconclusive("tail of the Mellin criterion could not be certified"),
    };
    Ok(LiuLuReport { delta: d, rows, tail: Some(tail), verdict })
}

/// If-and-only-if test for fixed relative degree with exact coefficients.
pub fn check_liu_lu(s: &SymbolPoly, alpha_check: i64) -> Result<Verdict> {
    liu_lu_report(s, alpha_check).map(|r| r.verdict)
}

/// Rows only, for `delta <= alpha <= alpha_max`.
pub fn liu_lu_rows(s: &SymbolPoly, alpha_max: i64) -> Result<Vec<MellinCheckRow>> {
    liu_lu_report(s, alpha_max).map(|r| r.rows)
}

/// Sufficient test: fixed relative degree `delta >= 0` and all coefficients
/// within a closed quarter-plane.
pub fn check_quarter_plane(s: &SymbolPoly) -> Result<Verdict> {
    let delta = match s.classify() {
        SymbolClass::FixedRelativeDegree(d) => d,
        SymbolClass::Analytic | SymbolClass::CoAnalytic => s.relative_degree().ok_or(Error::NotFixedDegree)?,
        _ => return Err(Error::NotFixedDegree),
    };
    if delta < 0 {
        return Err(Error::NegativeDelta(delta));
    }
    let id = if s.terms().len() == 2 {
        TheoremId::QuarterPlane43
    } else {
        TheoremId::QuarterPlane46
    };
    let coeffs: Vec<&Coefficient> = s.terms().iter().map(|t| &t.coeff).collect();
    if same_quarter_plane(&coeffs) {
        Ok(Verdict::ProvenHyponormal(Certificate::finite(id)))
    } else {
        Ok(Verdict::inconclusive("coefficient arguments spread more than pi/2"))
    }
}

/// Some coefficient `a_p` such that every `a_q / a_p` lies in the closed first
/// quadrant. Exact for Gaussian rationals; polar phases are compared in `f64`.
fn same_quarter_plane(cs: &[&Coefficient]) -> bool {
    if cs.len() <= 1 {
        return true;
    }
    if cs.iter().all(|c| c.is_exact()) {
        let gs: Vec<&GaussianRational> = cs.iter().map(|c| c.exact().expect("exact")).collect();
        return gs.iter().any(|p| {
            let pc = p.conj();
            gs.iter().all(|q| {
                let r = (*q).clone() * pc.clone();
                !r.re.is_negative() && !r.im.is_negative()
            })
        });
    }
    let phases: Vec<f64> = cs.iter().map(|c| c.to_complex().arg()).collect();
    phases.iter().any(|p| {
        phases.iter().all(|q| {
            let d = (q - p).rem_euclid(2.0 * PI);
            d <= FRAC_PI_2
        })
    })
}
