//! Polynomial symbols `sum a_i z^{m_i} zb^{n_i}`: normalization, conjugation,
//! classification and the radial profile of fixed-degree symbols.

mod parse;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{fmt_rational, from_f64, to_f64, GaussianRational, Rational};
use crate::error::{Error, Result};

pub use parse::parse_symbol;

/// A term coefficient. Polar coefficients carry an irrational phase and are
/// only accepted by the floating point engines and the phase analysis.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Exact(GaussianRational),
    Polar { modulus: Rational, phase: f64 },
}

impl Coefficient {
    pub fn real(r: Rational) -> Self {
        Coefficient::Exact(GaussianRational::real(r))
    }

    pub fn one() -> Self {
        Coefficient::Exact(GaussianRational::one())
    }

    /// Polar coefficient with the phase reduced to `(-pi, pi]`.
    pub fn polar(modulus: Rational, phase: f64) -> Self {
        let mut p = phase % (2.0 * PI);
        if p > PI {
            p -= 2.0 * PI;
        } else if p <= -PI {
            p += 2.0 * PI;
        }
        Coefficient::Polar { modulus, phase: p }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    pub fn exact(&self) -> Result<&GaussianRational> {
        match self {
            Coefficient::Exact(g) => Ok(g),
            Coefficient::Polar { .. } => Err(Error::ExactnessViolation),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(g) => g.is_zero(),
            Coefficient::Polar { modulus, .. } => modulus.is_zero(),
        }
    }

    /// `|a|^2`, exact for both representations.
    pub fn norm_sq(&self) -> Rational {
        match self {
            Coefficient::Exact(g) => g.norm_sq(),
            Coefficient::Polar { modulus, .. } => modulus * modulus,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Coefficient::Exact(g) => g.to_complex(),
            Coefficient::Polar { modulus, phase } => Complex64::from_polar(to_f64(modulus), *phase),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Coefficient::Exact(g) => Coefficient::Exact(g.conj()),
            Coefficient::Polar { modulus, phase } => Coefficient::polar(modulus.clone(), -phase),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coefficient::Exact(g) => Coefficient::Exact(-g),
            Coefficient::Polar { modulus, phase } => Coefficient::polar(modulus.clone(), phase + PI),
        }
    }

    /// Product. A polar factor times a non-real exact one has no exact polar
    /// form and is rounded through `f64`.
    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(a * b),
            (Coefficient::Polar { modulus: r, phase: t }, Coefficient::Polar { modulus: s, phase: u }) => {
                Coefficient::polar(r * s, t + u)
            }
            (Coefficient::Polar { modulus, phase }, Coefficient::Exact(g))
            | (Coefficient::Exact(g), Coefficient::Polar { modulus, phase }) => {
                if g.is_real() {
                    let flip = if g.re.is_negative() { PI } else { 0.0 };
                    Coefficient::polar(modulus * g.re.abs(), phase + flip)
                } else {
                    Coefficient::from_complex(self.to_complex() * other.to_complex())
                }
            }
        }
    }

    /// Sum. Exact plus exact stays exact; anything involving a polar term is
    /// rounded through `f64`.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(a + b),
            (Coefficient::Polar { modulus: r, phase: t }, Coefficient::Polar { modulus: s, phase: u })
                if t == u =>
            {
                Coefficient::polar(r + s, *t)
            }
            _ => Coefficient::from_complex(self.to_complex() + other.to_complex()),
        }
    }

    fn from_complex(c: Complex64) -> Self {
        let r = c.norm();
        if r == 0.0 {
            return Coefficient::real(Rational::zero());
        }
        Coefficient::polar(from_f64(r).unwrap_or_else(Rational::zero), c.arg())
    }
}

impl From<GaussianRational> for Coefficient {
    fn from(g: GaussianRational) -> Self {
        Coefficient::Exact(g)
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient::real(r)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(g) if g.is_real() => write!(f, "{}", fmt_rational(&g.re)),
            Coefficient::Exact(g) => write!(f, "({g})"),
            Coefficient::Polar { modulus, phase } => write!(f, "polar({}, {phase:?})", fmt_rational(modulus)),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `coeff * z^m * zb^n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Monomial {
    pub m: u32,
    pub n: u32,
    pub coeff: Coefficient,
}

impl Monomial {
    pub fn new(m: u32, n: u32, coeff: impl Into<Coefficient>) -> Self {
        Self {
            m,
            n,
            coeff: coeff.into(),
        }
    }

    /// Relative degree `m - n`, the index shift of the Toeplitz action.
    pub fn delta(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    pub fn conjugate(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
            coeff: self.coeff.conj(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&SymbolPoly::new(vec![self.clone()]).to_string())
    }
}

/// Finite sum of monomials, sorted by `(m, n)`, with no zero coefficients and
/// no repeated exponent pairs.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SymbolPoly {
    terms: Vec<Monomial>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", content = "delta")]
pub enum SymbolClass {
    Analytic,
    CoAnalytic,
    Harmonic,
    FixedRelativeDegree(i64),
    General,
}

/// Radial part of a fixed-degree symbol: `phi(r e^{it}) = e^{i delta t} phi0(r)`
/// with `phi0(r) = sum a r^p`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialProfile {
    pub delta: i64,
    pub components: Vec<(u32, Coefficient)>,
}

impl SymbolPoly {
    pub fn new(terms: Vec<Monomial>) -> Self {
        let mut merged: BTreeMap<(u32, u32), Coefficient> = BTreeMap::new();
        for t in terms {
            let key = (t.m, t.n);
            let c = match merged.remove(&key) {
                Some(prev) => prev.add(&t.coeff),
                None => t.coeff,
            };
            merged.insert(key, c);
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((m, n), coeff)| Monomial { m, n, coeff })
            .collect();
        Self { terms }
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn monomial(m: u32, n: u32, coeff: impl Into<Coefficient>) -> Self {
        Self::new(vec![Monomial::new(m, n, coeff)])
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.is_exact())
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.terms.iter().map(Monomial::conjugate).collect())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Coefficient) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| Monomial {
                    m: t.m,
                    n: t.n,
                    coeff: t.coeff.mul(c),
                })
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(other.terms.iter()).cloned().collect())
    }

    /// Common value of `m - n` when every term shares it (zero symbol: 0).
    pub fn relative_degree(&self) -> Option<i64> {
        let mut it = self.terms.iter().map(Monomial::delta);
        let first = it.next().unwrap_or(0);
        it.all(|d| d == first).then_some(first)
    }

    pub fn classify(&self) -> SymbolClass {
        if self.is_zero() {
            return SymbolClass::FixedRelativeDegree(0);
        }
        if self.terms.iter().all(|t| t.n == 0) {
            return SymbolClass::Analytic;
        }
        if self.terms.iter().all(|t| t.m == 0) {
            return SymbolClass::CoAnalytic;
        }
        if let Some(d) = self.relative_degree() {
            return SymbolClass::FixedRelativeDegree(d);
        }
        if self.terms.iter().all(|t| t.m == 0 || t.n == 0) {
            return SymbolClass::Harmonic;
        }
        SymbolClass::General
    }

    pub fn radial_profile(&self) -> Result<RadialProfile> {
        let delta = self.relative_degree().ok_or(Error::NotFixedDegree)?;
        // Sorting by (m, n) with m - n fixed sorts by m + n as well.
        let components = self
            .terms
            .iter()
            .map(|t| (t.m + t.n, t.coeff.clone()))
            .collect();
        Ok(RadialProfile { delta, components })
    }

    /// `phi(z)` in floating point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|t| t.coeff.to_complex() * z.powu(t.m) * zb.powu(t.n))
            .sum()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.m.max(t.n)).max().unwrap_or(0)
    }
}

impl FromStr for SymbolPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_symbol(s)
    }
}

impl Serialize for SymbolPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn write_factors(out: &mut String, m: u32, n: u32) {
    let mut parts = Vec::new();
    match m {
        0 => {}
        1 => parts.push("z".to_string()),
        _ => parts.push(format!("z^{m}")),
    }
    match n {
        0 => {}
        1 => parts.push("zb".to_string()),
        _ => parts.push(format!("zb^{n}")),
    }
    out.push_str(&parts.join(" "));
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let constant = t.m == 0 && t.n == 0;
            // Real exact coefficients print with the sign pulled out.
            let (negative, body) = match &t.coeff {
                Coefficient::Exact(g) if g.is_real() => {
                    let mag = g.re.abs();
                    let body = if mag.is_one() && !constant {
                        String::new()
                    } else if mag.is_integer() {
                        mag.numer().to_string()
                    } else {
                        format!("({})", fmt_rational(&mag))
                    };
                    (g.re.is_negative(), body)
                }
                other => (false, other.to_string()),
            };
            if i == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            s.push_str(&body);
            if !constant {
                if !body.is_empty() {
                    s.push(' ');
                }
                write_factors(&mut s, t.m, t.n);
            }
        }
        f.write_str(&s)
    }
}
