//! Rendering of reports as human text, JSON or CSV.

use std::fmt::Write;

use bergman_hypo::arith::{fmt_rational, to_f64, PositivityVerdict, Rational};
use bergman_hypo::criteria::{CheckReport, ConstructionReport, LiuLuReport, Refutation, Verdict};
use bergman_hypo::operator::{Entries, HermitianMatrix, Witness};
use bergman_hypo::spectral::NormReport;
use bergman_hypo::symbol::SymbolPoly;
use serde_json::{json, Value};

use crate::reproduce::Line;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Twelve significant digits, trailing zeros dropped.
pub fn float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let s = format!("{:.*}", (11 - mag).max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `p/q`, with the decimal value alongside when it is not an integer.
fn exact(r: &Rational) -> String {
    let p = fmt_rational(r);
    if p.contains('/') {
        format!("{p} ({})", float(to_f64(r)))
    } else {
        p
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn tail_line(t: &PositivityVerdict) -> String {
    let how = match &t.certificate {
        Some(c) => serde_json::to_value(c)
            .ok()
            .and_then(|v| v.get("kind").and_then(|k| k.as_str()).map(str::to_string))
            .unwrap_or_default(),
        None => "none".into(),
    };
    format!(
        "{:?} from k = {} (exact up to {}, tail: {how})",
        t.tag, t.ray_start, t.checked_up_to
    )
}

fn witness_lines(w: &Witness, out: &mut String) {
    let basis = match w.vector.basis {
        bergman_hypo::operator::Basis::MonomialBasis => "z^k",
        bergman_hypo::operator::Basis::OrthonormalBasis => "phi_k",
    };
    let len = w.vector.len();
    let _ = writeln!(out, "witness form value: {}", w.form_value.describe());
    let _ = writeln!(
        out,
        "witness vector: {len} {} coefficient(s) on {basis}, k = {}..{}",
        if w.vector.is_exact() { "exact" } else { "float" },
        w.vector.offset,
        w.vector.offset + len.saturating_sub(1)
    );
    if len <= 8 {
        let entries: Vec<String> = match &w.vector.entries {
            Entries::Exact(v) => v.iter().map(|g| g.to_string()).collect(),
            Entries::Float(v) => v.iter().map(|c| format!("{}{:+}i", float(c.re), float(c.im))).collect(),
        };
        let _ = writeln!(out, "witness entries: [{}]", entries.join(", "));
    }
    if w.section_size > 0 {
        let ev = w.eigenvalue.map_or("-".into(), float);
        let _ = writeln!(out, "found at section size {} (eigenvalue {ev})", w.section_size);
    }
}

pub fn verdict_human(v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", v.tag());
    if let Some(id) = v.theorem_id() {
        let _ = writeln!(out, "theorem: {id:?}");
    }
    match v {
        Verdict::ProvenHyponormal(c) => {
            for (a, b) in &c.ranges_checked {
                let _ = writeln!(out, "checked exactly: {a}..={b}");
            }
            if let Some(t) = &c.tail {
                let _ = writeln!(out, "tail: {}", tail_line(t));
            }
        }
        Verdict::NotHyponormal(r) => {
            if let Refutation::CriterionViolation(viol) = r {
                if let Some(a) = viol.alpha {
                    let _ = writeln!(out, "violation at alpha = {a}");
                }
                let _ = writeln!(out, "detail: {}", viol.detail);
            }
            if let Some(w) = v.witness() {
                witness_lines(w, &mut out);
            }
        }
        Verdict::Inconclusive(reason) => {
            let _ = writeln!(out, "reason: {reason}");
        }
    }
    out
}

pub fn check_report(s: &SymbolPoly, r: &CheckReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "symbol": s.to_string(),
            "verdict": r.verdict,
            "routes": r.routes.iter().map(|(name, v)| json!({"route": name, "verdict": v})).collect::<Vec<_>>(),
            "sections": r.sections.iter().map(|(n, l)| json!({"size": n, "min_eigenvalue": l})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let form = r.verdict.witness().map(|w| w.form_value.describe()).unwrap_or_default();
            format!(
                "symbol,verdict,theorem_id,violation_alpha,witness_value\n{},{},{},{},{}\n",
                csv_field(&s.to_string()),
                r.verdict.tag(),
                r.verdict.theorem_id().map(|t| format!("{t:?}")).unwrap_or_default(),
                r.verdict.violation_alpha().map(|a| a.to_string()).unwrap_or_default(),
                csv_field(&form)
            )
        }
        Format::Human => {
            let mut out = format!("symbol: {s}\nclass: {:?}\n", s.classify());
            out.push_str(&verdict_human(&r.verdict));
            if r.routes.len() > 1 || r.routes.first().is_some_and(|(_, v)| v.tag() != r.verdict.tag()) {
                out.push_str("routes:\n");
                for (name, v) in &r.routes {
                    let _ = writeln!(out, "  {name}: {}", v.tag());
                }
            }
            for (n, l) in &r.sections {
                let _ = writeln!(out, "section {n}: min eigenvalue {}", float(*l));
            }
            out
        }
    }
}

pub fn matrix(m: &HermitianMatrix, format: Format) -> String {
    let n = m.dim();
    match format {
        Format::Json => pretty(&m.to_json()),
        Format::Csv if m.is_real() => {
            let mut out = String::new();
            for j in 0..n {
                let row: Vec<String> = (0..n).map(|k| format!("{}", m.get(j, k).re)).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
        Format::Csv => m.to_csv(),
        Format::Human => {
            let mut out = format!("{n}x{n} section of [T*, T] in the orthonormal basis\n");
            for j in 0..n {
                let row: Vec<String> = (0..n)
                    .map(|k| {
                        let c = m.get(j, k);
                        if m.is_real() {
                            format!("{:>20}", float(c.re))
                        } else {
                            format!("{:>36}", format!("{}{:+}i", float(c.re), float(c.im)))
                        }
                    })
                    .collect();
                out.push_str(row.join(" ").trim_end());
                out.push('\n');
            }
            out
        }
    }
}

pub fn norm(s: &SymbolPoly, r: &NormReport, format: Format) -> String {
    let opt = |x: Option<f64>| x.map(float).unwrap_or_else(|| "-".into());
    match format {
        Format::Json => pretty(&json!({"symbol": s.to_string(), "norm": r})),
        Format::Csv => format!(
            "symbol,exact_sup,section_lower_bound,section_size,putnam_upper,half_area_conjecture\n{},{},{},{},{},{}\n",
            csv_field(&s.to_string()),
            r.exact_sup.as_ref().map(fmt_rational).unwrap_or_default(),
            r.section_lower_bound,
            r.section_size,
            r.putnam_upper.map(|x| x.to_string()).unwrap_or_default(),
            r.half_area_conjecture.map(|x| x.to_string()).unwrap_or_default()
        ),
        Format::Human => {
            let mut out = format!("symbol: {s}\n");
            if let Some(x) = &r.exact_sup {
                let _ = writeln!(out, "exact norm of [T*, T]: {}", exact(x));
            }
            let _ = writeln!(out, "section lower bound (N = {}): {}", r.section_size, float(r.section_lower_bound));
            let _ = writeln!(out, "Area(phi(D))/pi: {}", opt(r.putnam_upper));
            let _ = writeln!(out, "Area(phi(D))/(2 pi): {}", opt(r.half_area_conjecture));
            if r.conjecture_violated(0.02) {
                out.push_str("note: the section bound exceeds the half-area value\n");
            }
            out
        }
    }
}

pub fn construction(r: &ConstructionReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(r).expect("report serializes")),
        Format::Csv => format!(
            "n,delta,j,q_sup,symbol,verdict\n{},{},{},{},{},{}\n",
            r.n,
            r.delta,
            r.j,
            fmt_rational(&r.q_sup),
            csv_field(&r.symbol.to_string()),
            r.verdict.tag()
        ),
        Format::Human => {
            let mut out = format!(
                "n = {}, delta = {}\nsup of q on [2 delta, inf): {}\nj = {}\nsymbol: {}\n",
                r.n,
                r.delta,
                exact(&r.q_sup),
                r.j,
                r.symbol
            );
            out.push_str(&verdict_human(&r.verdict));
            out
        }
    }
}

pub fn mellin(s: &SymbolPoly, r: &LiuLuReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({"symbol": s.to_string(), "report": r})),
        Format::Csv => {
            let mut out = String::from("alpha,c_squared,lhs_sq,rhs_sq,holds\n");
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    row.alpha,
                    fmt_rational(&row.c_squared),
                    fmt_rational(&row.lhs_sq),
                    fmt_rational(&row.rhs_sq),
                    row.holds
                );
            }
            out
        }
        Format::Human => {
            let mut out = format!("symbol: {s}\nrelative degree: {}\n", r.delta);
            if !r.rows.is_empty() {
                let _ = writeln!(out, "{:>6}  {:>14}  {:>22}  {:>22}  holds", "alpha", "c^2", "lhs^2", "rhs^2");
            }
            for row in &r.rows {
                let _ = writeln!(
                    out,
                    "{:>6}  {:>14}  {:>22}  {:>22}  {}",
                    row.alpha,
                    fmt_rational(&row.c_squared),
                    short(&row.lhs_sq),
                    short(&row.rhs_sq),
                    if row.holds { "yes" } else { "NO" }
                );
            }
            if let Some(t) = &r.tail {
                let _ = writeln!(out, "tail: {}", tail_line(t));
            }
            out.push_str(&verdict_human(&r.verdict));
            out
        }
    }
}

/// Exact when short, otherwise the float value.
fn short(r: &Rational) -> String {
    let p = fmt_rational(r);
    if p.len() <= 22 {
        p
    } else {
        float(to_f64(r))
    }
}

pub fn reproduction(name: &str, lines: &[Line], format: Format) -> String {
    match format {
        Format::Json => pretty(&json!({
            "example": name,
            "pass": lines.iter().all(|l| l.pass),
            "checks": lines,
        })),
        Format::Csv => {
            let mut out = String::from("example,check,computed,expected,pass\n");
            for l in lines {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    name,
                    csv_field(&l.check),
                    csv_field(&l.computed),
                    csv_field(&l.expected),
                    l.pass
                );
            }
            out
        }
        Format::Human => {
            let mut out = format!("{name}\n");
            for l in lines {
                let _ = writeln!(out, "[{}] {}", if l.pass { "PASS" } else { "FAIL" }, l.check);
                let _ = writeln!(out, "       computed: {}", l.computed);
                let _ = writeln!(out, "       expected: {}", l.expected);
                if let Some(n) = &l.note {
                    let _ = writeln!(out, "       note: {n}");
                }
            }
            out
        }
    }
}
