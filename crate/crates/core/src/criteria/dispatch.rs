use log::{debug, error};
use serde::Serialize;

use super::harmonic::harmonic_binomial_from_norm;
use super::mellin::{check_liu_lu, check_quarter_plane};
use super::monomial::check_monomial_with;
use super::phase::binomial_phase_analysis;
use super::two_term::{hypo_plus_cohypo_with, sum_of_hypo_with};
use super::{Certificate, Refutation, TheoremId, Verdict, DEFAULT_ALPHA_CHECK};
use crate::arith::{exact_sqrt, Rational, DEFAULT_CHECK_LIMIT};
use crate::operator::{
    find_refutation_with, scan_for_refutation, DEFAULT_MAX_SECTION, DEFAULT_SECTION_SIZE, WITNESS_THRESHOLD,
};
use crate::symbol::{Coefficient, Monomial, SymbolClass, SymbolPoly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOptions {
    /// Section size for the refutation search that always runs.
    pub section_size: usize,
    /// When nothing else decides, sections are doubled up to this size.
    pub max_section: usize,
    pub alpha_check: i64,
    /// Exact scan length before tail certificates take over.
    pub k_max: i64,
    /// An eigenvalue below `-threshold` triggers an exact witness attempt.
    pub threshold: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            section_size: DEFAULT_SECTION_SIZE,
            max_section: DEFAULT_MAX_SECTION,
            alpha_check: DEFAULT_ALPHA_CHECK,
            k_max: DEFAULT_CHECK_LIMIT,
            threshold: WITNESS_THRESHOLD,
        }
    }
}

/// The combined verdict and what each route said.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub routes: Vec<(String, Verdict)>,
    /// `(size, min eigenvalue)` of each section examined.
    pub sections: Vec<(usize, f64)>,
}

pub fn check(s: &SymbolPoly) -> Verdict {
    check_with(s, &CheckOptions::default()).verdict
}

/// Modulus as a rational, when it is one.
fn modulus(c: &Coefficient) -> Option<Rational> {
    match c {
        Coefficient::Polar { modulus, .. } => Some(modulus.clone()),
        Coefficient::Exact(g) => exact_sqrt(&g.norm_sq()),
    }
}

fn criteria_routes(s: &SymbolPoly, opts: &CheckOptions) -> Vec<(String, Verdict)> {
    let mut out: Vec<(String, Verdict)> = Vec::new();
    let terms = s.terms();
    if s.is_zero() {
        out.push((
            "zero symbol".into(),
            Verdict::ProvenHyponormal(Certificate::finite(TheoremId::SelfAdjointDelta0)),
        ));
        return out;
    }
    if terms.len() == 1 {
        let t = &terms[0];
        if t.m == t.n {
            // c |z|^2m gives c times a self-adjoint operator, which is normal.
            out.push((
                "radial symbol".into(),
                Verdict::ProvenHyponormal(Certificate::finite(TheoremId::SelfAdjointDelta0)),
            ));
        }
        out.push(("monomial".into(), check_monomial_with(t, opts.k_max)));
        return out;
    }
    if let Some(delta) = s.relative_degree() {
        if s.is_exact() {
            match check_liu_lu(s, opts.alpha_check) {
                Ok(v) => out.push(("mellin criterion".into(), v)),
                Err(e) => out.push(("mellin criterion".into(), Verdict::inconclusive(e.to_string()))),
            }
        } else if delta == 0 {
            out.push((
                "radial symbol".into(),
                Verdict::ProvenHyponormal(Certificate::finite(TheoremId::SelfAdjointDelta0)),
            ));
        }
        if delta >= 0 {
            if let Ok(v) = check_quarter_plane(s) {
                out.push(("quarter-plane".into(), v));
            }
        }
        if delta > 0 && terms.len() == 2 && !s.is_exact() {
            out.push(("phase analysis".into(), phase_route(&terms[0], &terms[1], opts)));
        }
    }
    if terms.len() == 2 {
        let (f, g) = (&terms[0], &terms[1]);
        if let Some(v) = harmonic_route(s, f, g) {
            out.push(("harmonic binomial".into(), v));
        }
        let hypo = |t: &Monomial| t.m > t.n;
        let cohypo = |t: &Monomial| t.n > t.m;
        if hypo(f) && hypo(g) {
            if let Ok(v) = sum_of_hypo_with(f, g, opts.k_max) {
                out.push(("two hyponormal terms".into(), v));
            }
        } else if hypo(f) && cohypo(g) {
            if let Ok(v) = hypo_plus_cohypo_with(f, g, opts.k_max) {
                out.push(("hyponormal plus cohyponormal".into(), v));
            }
        } else if cohypo(f) && hypo(g) {
            if let Ok(v) = hypo_plus_cohypo_with(g, f, opts.k_max) {
                out.push(("hyponormal plus cohyponormal".into(), v));
            }
        }
    }
    out
}

/// `a z^n + b zb^m` is unitarily the same question as `z^n + (b/a) zb^m`.
fn harmonic_route(s: &SymbolPoly, f: &Monomial, g: &Monomial) -> Option<Verdict> {
    if s.classify() != SymbolClass::Harmonic {
        return None;
    }
    let (analytic, co) = if f.n == 0 && g.m == 0 { (f, g) } else if g.n == 0 && f.m == 0 { (g, f) } else { return None };
    if analytic.m == 0 || co.n == 0 {
        return None;
    }
    let ratio = co.coeff.norm_sq() / analytic.coeff.norm_sq();
    harmonic_binomial_from_norm(analytic.m, co.n, &ratio, s).ok()
}

/// Rotate so the first coefficient is positive and feed the moduli and the
/// relative phase to the phase analysis.
fn phase_route(f: &Monomial, g: &Monomial, opts: &CheckOptions) -> Verdict {
    let (Some(a1), Some(r2)) = (modulus(&f.coeff), modulus(&g.coeff)) else {
        return Verdict::inconclusive("a coefficient modulus is irrational");
    };
    let theta = g.coeff.to_complex().arg() - f.coeff.to_complex().arg();
    match binomial_phase_analysis(&a1, (f.m, f.n), &r2, (g.m, g.n), opts.alpha_check) {
        Ok(pa) => pa.verdict_at(theta),
        Err(e) => Verdict::inconclusive(e.to_string()),
    }
}

/// Runs every applicable criterion plus a finite-section refutation search and
/// combines them: any refutation wins, then any proof, else inconclusive.
pub fn check_with(s: &SymbolPoly, opts: &CheckOptions) -> CheckReport {
    let mut routes = criteria_routes(s, opts);
    let mut sections = Vec::new();
    let decided = routes.iter().any(|(_, v)| !v.is_inconclusive());
    let size = opts.section_size.max(1);
    let refutation = if decided || opts.max_section <= size {
        find_refutation_with(s, size, opts.threshold).map(|(w, lambda)| {
            sections.push((size, lambda));
            w
        })
    } else {
        scan_for_refutation(s, size, opts.max_section, opts.threshold).map(|scan| {
            sections = scan.sections;
            scan.witness
        })
    };
    match refutation {
        Ok(Some(w)) => routes.push(("finite section".into(), Verdict::NotHyponormal(Refutation::Witness(w)))),
        Ok(None) => {}
        Err(e) => debug!("refutation search failed: {e}"),
    }

    let refuted = routes.iter().find(|(_, v)| v.is_refuted());
    let proven = routes.iter().find(|(_, v)| v.is_proven());
    let verdict = match (refuted, proven) {
        (Some((rname, r)), Some((pname, _))) => {
            error!("{rname} refutes {s} while {pname} proves it; reporting the refutation");
            r.clone()
        }
        (Some((_, r)), None) => r.clone(),
        (None, Some((_, p))) => p.clone(),
        (None, None) => {
            let reasons: Vec<String> = routes
                .iter()
                .map(|(name, v)| match v {
                    Verdict::Inconclusive(r) => format!("{name}: {r}"),
                    _ => name.clone(),
                })
                .collect();
            let largest = sections.last().map_or(size, |(n, _)| *n);
            let mut reason = format!("no criterion applies and no witness up to section size {largest}");
            if !reasons.is_empty() {
                reason = format!("{reason} ({})", reasons.join("; "));
            }
            Verdict::Inconclusive(reason)
        }
    };
    CheckReport {
        verdict,
        routes,
        sections,
    }
}
