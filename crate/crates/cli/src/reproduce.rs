//! Published computations rerun against the library.

use std::f64::consts::SQRT_2;

use bergman_hypo::arith::{fmt_rational, from_f64, int, rat, to_f64, Rational, RationalFn, RationalPoly};
use bergman_hypo::criteria::{
    binomial_phase_analysis, check_hypo_plus_cohypo, check_with, liu_lu_report, pair_analysis, CheckOptions, TheoremId,
};
use bergman_hypo::operator::{commutator_form_float, find_refutation, Basis, CoefficientVector};
use bergman_hypo::spectral::{monomial_commutator_norm, section_norm};
use bergman_hypo::symbol::{parse_symbol, Monomial, SymbolPoly};
use bergman_hypo::Result;
use num_complex::Complex64;
use serde::Serialize;

use crate::output::float;

#[derive(Clone, Debug, Serialize)]
pub struct Line {
    pub check: String,
    pub computed: String,
    pub expected: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn line(check: impl Into<String>, computed: impl Into<String>, expected: impl Into<String>, pass: bool) -> Line {
    Line {
        check: check.into(),
        computed: computed.into(),
        expected: expected.into(),
        pass,
        note: None,
    }
}

pub struct Options {
    pub size: usize,
    pub alpha_max: i64,
    pub k_max: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    ZPlusRadial,
    HypoCohypoMargin,
    MellinCounterexample,
    PhaseBinomial,
    MonomialNorms,
}

const ITEMS: [(Item, &str, &str, &str); 5] = [
    (Item::ZPlusRadial, "z-plus-radial", "ex3.1", "form of z + C|z|^2 at phi_0/2 + phi_1/2 and the threshold C = -2 sqrt 2"),
    (Item::HypoCohypoMargin, "hypo-cohypo-margin", "ex3.5-rational", "margin of z^2 zb + (1/7) zb^4 z^3 as a rational function of k"),
    (Item::MellinCounterexample, "mellin-counterexample", "ex4-counterexample", "z^2 zb - z^3 zb^2 fails the Mellin criterion from alpha = 2"),
    (Item::PhaseBinomial, "phase-binomial", "ex4.5", "z^2 zb + (e^{i theta}/10) z^3 zb^2 for every theta"),
    (Item::MonomialNorms, "monomial-norms", "thm5.1", "norms of [T*, T] for z^m zb^n, m <= 10, against 1/2"),
];

pub fn lookup(id: &str) -> Option<Item> {
    ITEMS.iter().find(|(_, name, alias, _)| *name == id || *alias == id).map(|(i, ..)| *i)
}

pub fn list() -> String {
    let mut out = String::from("available examples (name, alias):\n");
    for (_, name, alias, about) in ITEMS {
        out.push_str(&format!("  {name:<22} {alias:<20} {about}\n"));
    }
    out
}

impl Item {
    pub fn name(&self) -> &'static str {
        ITEMS.iter().find(|(i, ..)| i == self).map_or("", |t| t.1)
    }

    pub fn run(&self, opts: &Options) -> Result<Vec<Line>> {
        match self {
            Item::ZPlusRadial => z_plus_radial(opts),
            Item::HypoCohypoMargin => hypo_cohypo_margin(opts),
            Item::MellinCounterexample => mellin_counterexample(opts),
            Item::PhaseBinomial => phase_binomial(opts),
            Item::MonomialNorms => monomial_norms(opts),
        }
    }
}

fn quick(opts: &Options) -> CheckOptions {
    CheckOptions {
        section_size: opts.size.min(64),
        max_section: opts.size.min(64),
        alpha_check: opts.alpha_max,
        k_max: opts.k_max,
        ..CheckOptions::default()
    }
}

fn z_plus_radial(opts: &Options) -> Result<Vec<Line>> {
    let u = CoefficientVector::float(Basis::OrthonormalBasis, 0, vec![Complex64::new(0.5, 0.0); 2]);
    let form = |c: f64| -> f64 {
        let s = parse_symbol("z").expect("literal").add(&SymbolPoly::monomial(1, 1, from_f64(c).expect("finite")));
        commutator_form_float(&s, &u).0
    };
    let mut out = Vec::new();
    for (label, c) in [("0", 0.0), ("-1", -1.0), ("-2 sqrt 2", -2.0 * SQRT_2), ("-3", -3.0)] {
        let v = form(c);
        let expect = 1.0 / 6.0 + c / (12.0 * SQRT_2);
        out.push(line(
            format!("form at C = {label}"),
            float(v),
            format!("1/6 + C/(12 sqrt 2) = {}", float(expect)),
            (v - expect).abs() <= 1e-12,
        ));
    }
    // The form is affine in C; locate its root from two evaluations.
    let (v0, v1) = (form(0.0), form(-1.0));
    let root = -v0 / (v0 - v1);
    out.push(line("root in C", float(root), float(-2.0 * SQRT_2), (root + 2.0 * SQRT_2).abs() <= 1e-12));

    let s = parse_symbol("z - 3|z|^2")?;
    let v = check_with(&s, &quick(opts)).verdict;
    let exact_neg = v.witness().is_some_and(|w| w.form_value.is_certified_negative());
    out.push(line(
        "z - 3|z|^2",
        format!("{}{}", v.tag(), v.witness().map(|w| format!(", witness {}", w.form_value.describe())).unwrap_or_default()),
        "NotHyponormal with a certified negative witness",
        v.is_refuted() && exact_neg,
    ));
    Ok(out)
}

fn published_margin() -> RationalFn {
    let num = RationalPoly::from_i64(&[927168, 2228760, 2061168, 985764, 267977, 41785, 3475, 119]);
    let x = |c: i64| RationalPoly::x_plus(int(c));
    let mut den = RationalPoly::constant(int(49));
    for (c, e) in [(6, 1), (5, 2), (4, 2), (3, 2), (2, 2), (1, 1)] {
        den = &den * &x(c).pow(e);
    }
    RationalFn::new(num, den)
}

fn hypo_cohypo_margin(opts: &Options) -> Result<Vec<Line>> {
    let f = Monomial::new(2, 1, int(1));
    let g = Monomial::new(3, 4, rat(1, 7));
    let mut out = Vec::new();
    let v = check_hypo_plus_cohypo(&f, &g)?;
    out.push(line(
        "verdict",
        format!("{} ({:?})", v.tag(), v.theorem_id()),
        "ProvenHyponormal",
        v.is_proven() && v.theorem_id() == Some(TheoremId::HypoCoHypo35),
    ));

    let pa = pair_analysis(&f, &g, 12, opts.k_max);
    let a_ok = pa
        .tilde_rows()
        .iter()
        .filter(|t| t.k >= 1)
        .all(|t| t.a == rat(3 * t.k + 8, (t.k + 3) * (t.k + 3) * (t.k + 2) * (t.k + 2)));
    out.push(line("A~_k for k >= 1", if a_ok { "matches" } else { "differs" }, "(3k+8)/((k+3)^2 (k+2)^2)", a_ok));

    let published = published_margin();
    let mine = pa.margin_fn.clone();
    let same = mine.as_ref().is_some_and(|m| m.same_function(&published));
    let at = |k: i64| -> String {
        let ours = pa.rows.iter().find(|r| r.k == k).and_then(|r| r.margin.clone());
        format!(
            "k={k}: {} vs {}",
            ours.map_or("-".into(), |x| fmt_rational(&x)),
            fmt_rational(&published.eval(&int(k)).expect("no pole"))
        )
    };
    let mut l = line(
        "margin equals the published rational function for k >= 2",
        format!("{}; {}; {}", if same { "equal" } else { "different" }, at(2), at(3)),
        "119k^7 + 3475k^6 + ... + 927168 over 49(k+6)(k+5)^2(k+4)^2(k+3)^2(k+2)^2(k+1)",
        same,
    );
    if !same {
        l.note = Some(
            "the published display bounds the cross terms by less than the exact cross coefficients \
             computed here, so the exact margin is smaller than the displayed one; it is still positive on \
             every k, so the verdict stands while the displayed numerator is not reproduced"
                .into(),
        );
    }
    out.push(l);
    let first_bad = pa.first_failure();
    out.push(line(
        "exact margin nonnegative on every k",
        first_bad.map_or("yes".into(), |k| format!("fails at k = {k}")),
        "yes",
        first_bad.is_none() && pa.tail.is_positive(),
    ));
    Ok(out)
}

fn mellin_counterexample(opts: &Options) -> Result<Vec<Line>> {
    let s = parse_symbol("z^2 zb - z^3 zb^2")?;
    let r = liu_lu_report(&s, opts.alpha_max.max(5))?;
    let mut out = Vec::new();
    let first = r.rows.iter().find(|row| !row.holds).map(|row| row.alpha);
    out.push(line("first failing alpha", format!("{first:?}"), "Some(2)", first == Some(2)));

    // Closed forms from the published transform 1/(k+3) - 1/(k+5).
    let closed = |a: i64| -> (Rational, Rational) {
        let l = rat(1, 2 * a + 6) - rat(1, 2 * a + 8);
        let rr = rat(1, 2 * a + 4) - rat(1, 2 * a + 6);
        (&l * &l, rat(a, a + 2) * &rr * &rr)
    };
    let agree = r.rows.iter().all(|row| (row.lhs_sq.clone(), row.rhs_sq.clone()) == closed(row.alpha));
    out.push(line(
        format!("rows match the closed form for alpha = 1..{}", r.rows.last().map_or(0, |x| x.alpha)),
        if agree { "all equal" } else { "mismatch" },
        "all equal",
        agree,
    ));
    if let Some(row) = r.rows.iter().find(|row| row.alpha == 2) {
        out.push(line(
            "alpha = 2: lhs^2 vs rhs^2",
            format!("{} < {}", fmt_rational(&row.lhs_sq), fmt_rational(&row.rhs_sq)),
            "1/3600 < 1/3200",
            row.lhs_sq == rat(1, 3600) && row.rhs_sq == rat(1, 3200),
        ));
    }
    let all_fail = r.rows.iter().filter(|row| row.alpha >= 2).all(|row| !row.holds);
    out.push(line("fails for every alpha >= 2 checked", all_fail.to_string(), "true", all_fail));

    let w = find_refutation(&s, 32)?;
    let exact = w.as_ref().is_some_and(|w| w.vector.is_exact() && w.form_value.is_certified_negative());
    out.push(line(
        "exact negative witness from a 32 x 32 section",
        w.as_ref().map_or("none".into(), |w| w.form_value.describe()),
        "an exact negative form value",
        exact,
    ));
    Ok(out)
}

fn phase_binomial(opts: &Options) -> Result<Vec<Line>> {
    let alpha_max = opts.alpha_max.max(20);
    let pa = binomial_phase_analysis(&int(1), (2, 1), &rat(1, 10), (3, 2), alpha_max)?;
    let mut out = Vec::new();
    out.push(line(
        format!("criterion at cos theta = +1 and -1 for alpha = 1..{alpha_max} plus tail"),
        format!(
            "rows {}, tails {:?}/{:?}",
            if pa.rows.iter().all(|r| r.f_endpoints.0 >= int(0) && r.f_endpoints.1 >= int(0)) { "hold" } else { "fail" },
            pa.tail_plus.tag,
            pa.tail_minus.tag
        ),
        "holds, so hyponormal for every theta",
        pa.holds_for_all_theta,
    ));
    for theta in [0.0, std::f64::consts::FRAC_PI_2 + 0.5, std::f64::consts::PI] {
        let v = pa.verdict_at(theta);
        out.push(line(format!("verdict at theta = {}", float(theta)), v.tag(), "ProvenHyponormal", v.is_proven()));
    }

    let tail: Vec<_> = pa.rows.iter().filter(|r| r.alpha >= 10).collect();
    let thetas: Vec<f64> = tail.iter().filter_map(|r| r.theta_alpha).collect();
    let monotone = thetas.len() == tail.len()
        && !thetas.is_empty()
        && thetas.windows(2).all(|w| w[1] < w[0])
        && thetas.iter().all(|t| *t > std::f64::consts::FRAC_PI_2);
    let root = |a: i64| pa.rows.iter().find(|r| r.alpha == a).and_then(|r| r.root_cos).map_or("-".into(), float);
    let mut l = line(
        "theta_alpha decreases monotonically toward pi/2 for alpha >= 10",
        format!(
            "theta_alpha defined for {} of {} rows; root of F_alpha in cos theta at alpha = 10, 100, {alpha_max}: {}, {}, {}",
            thetas.len(),
            tail.len(),
            root(10),
            root(100),
            root(alpha_max)
        ),
        "theta_alpha in (pi/2, pi], decreasing",
        monotone,
    );
    if !monotone {
        l.note = Some(
            "F_alpha is affine in cos theta and its root stays below -1 for every alpha, tending to a finite \
             constant, so no theta in [0, pi] makes the criterion fail and theta_alpha is undefined"
                .into(),
        );
    }
    out.push(l);
    Ok(out)
}

fn monomial_norms(opts: &Options) -> Result<Vec<Line>> {
    let half = rat(1, 2);
    let mut out = Vec::new();
    for m in 1..=10u32 {
        let norms: Vec<Rational> = (0..m).map(|n| monomial_commutator_norm(m, n)).collect::<Result<_>>()?;
        let bounded = norms.iter().all(|x| *x <= half);
        let analytic = norms[0] == half;
        let listing: Vec<String> = norms.iter().map(fmt_rational).collect();
        out.push(line(
            format!("m = {m}, n = 0..{}", m - 1),
            listing.join(", "),
            "all <= 1/2, equal to 1/2 at n = 0",
            bounded && analytic,
        ));
    }
    let n = opts.size.max(100);
    let s = SymbolPoly::monomial(2, 1, int(1));
    let sec = section_norm(&s, n)?;
    let exact = to_f64(&monomial_commutator_norm(2, 1)?);
    out.push(line(
        format!("z^2 zb: section norm at N = {n} vs exact"),
        float(sec),
        float(exact),
        (sec - exact).abs() <= 1e-8,
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_aliases_resolve() {
        for (item, name, alias, _) in ITEMS {
            assert_eq!(lookup(name).unwrap().name(), name);
            assert_eq!(lookup(alias).unwrap().name(), item.name());
        }
        assert!(lookup("nope").is_none());
    }

    #[test]
    fn published_margin_matches_its_own_parts() {
        // The display is a combination of A~ and the bracketed bound; recombine it independently.
        let p = published_margin();
        for k in 2..20i64 {
            let a = rat(3 * k + 8, (k + 3) * (k + 3) * (k + 2) * (k + 2));
            let b1 = rat(7 * k + 32, 7 * (k + 5) * (k + 5) * (k + 4) * (k + 4));
            let b2 = rat(
                3 * k * k * k + 21 * k * k + 46 * k + 8,
                (k + 6) * (k + 5) * (k + 4) * (k + 3) * (k + 2) * (k + 1),
            );
            assert_eq!(p.eval(&int(k)).unwrap(), a - (b1 + b2) / int(7));
        }
    }
}
