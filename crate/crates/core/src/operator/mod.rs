//! Bergman projection of monomials, the Toeplitz action on coefficient
//! vectors, and the self-commutator quadratic form
//! `<[T*, T] u, u> = |T u|^2 - |T* u|^2`, where `T* = T_{conj(s)}`.
//!
//! Exact values are reported in units of `pi`: `<z^a, z^b> = pi delta_ab / (a+1)`.

mod matrix;
mod refute;
mod vector;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{int, rat, GaussianRational, Rational};
use crate::error::{Error, Result};
use crate::symbol::SymbolPoly;

pub use matrix::{commutator_matrix, HermitianMatrix};
pub use refute::{
    find_refutation, find_refutation_with, scan_for_refutation, FormValue, RefutationScan,
    Witness, DEFAULT_MAX_SECTION, DEFAULT_SECTION_SIZE, WITNESS_THRESHOLD,
};
pub use vector::{Basis, CoefficientVector, Entries};

/// `P(z^m zb^n) = (m-n+1)/(m+1) z^{m-n}` when `m >= n`; zero otherwise.
pub fn project_monomial(m: u32, n: u32) -> Option<(Rational, u32)> {
    (m >= n).then(|| (rat((m - n + 1) as i64, (m + 1) as i64), m - n))
}

/// Squared amplitude of `T_{z^m zb^n} phi_k = amp * phi_{k+m-n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Weight {
    pub m: u32,
    pub n: u32,
    pub k: u32,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub squared_value: Rational,
}

impl Weight {
    pub fn new(m: u32, n: u32, k: u32) -> Self {
        let (m_, n_, k_) = (m as i64, n as i64, k as i64);
        let squared_value = if k_ + m_ - n_ >= 0 {
            rat((k_ + 1) * (k_ + m_ - n_ + 1), (k_ + m_ + 1) * (k_ + m_ + 1))
        } else {
            Rational::zero()
        };
        Self {
            m,
            n,
            k,
            squared_value,
        }
    }

    pub fn amplitude(&self) -> f64 {
        amplitude(self.m, self.n, self.k as usize)
    }
}

/// `sqrt((k+1)(k+m-n+1)) / (k+m+1)`, or 0 when the output index is negative.
/// Numerator and denominator are exact integers before the single rounding.
pub(crate) fn amplitude(m: u32, n: u32, k: usize) -> f64 {
    let (m, n, k) = (m as i128, n as i128, k as i128);
    if k + m - n < 0 {
        return 0.0;
    }
    let num = (k + 1) * (k + m - n + 1);
    let den = k + m + 1;
    (num as f64).sqrt() / den as f64
}

/// Monomial-basis factor `(k+m-n+1)/(k+m+1)`, or `None` when annihilated.
fn monomial_factor(m: u32, n: u32, k: usize) -> Option<Rational> {
    let (m, n, k) = (m as i64, n as i64, k as i64);
    (k + m - n >= 0).then(|| rat(k + m - n + 1, k + m + 1))
}

fn output_range(s: &SymbolPoly, u: &CoefficientVector) -> Option<(usize, usize)> {
    if s.is_zero() || u.is_empty() {
        return None;
    }
    let dmin = s.terms().iter().map(|t| t.delta()).min().unwrap();
    let dmax = s.terms().iter().map(|t| t.delta()).max().unwrap();
    let lo = (u.offset as i64 + dmin).max(0);
    let hi = u.end() as i64 - 1 + dmax;
    (hi >= lo).then(|| (lo as usize, hi as usize + 1))
}

/// `T_s u` in exact arithmetic; needs monomial basis, exact entries and exact
/// coefficients.
pub fn apply_toeplitz_exact(s: &SymbolPoly, u: &CoefficientVector) -> Result<CoefficientVector> {
    let Entries::Exact(entries) = &u.entries else {
        return Err(Error::ExactnessViolation);
    };
    if u.basis != Basis::MonomialBasis {
        return Err(Error::PreconditionViolated(
            "exact Toeplitz action needs the monomial basis".into(),
        ));
    }
    let coeffs = s
        .terms()
        .iter()
        .map(|t| t.coeff.exact().cloned())
        .collect::<Result<Vec<_>>>()?;
    let Some((lo, hi)) = output_range(s, u) else {
        return Ok(CoefficientVector::exact(Basis::MonomialBasis, 0, Vec::new()));
    };
    let mut out = vec![GaussianRational::zero(); hi - lo];
    for (t, a) in s.terms().iter().zip(&coeffs) {
        for (i, c) in entries.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = u.offset + i;
            if let Some(f) = monomial_factor(t.m, t.n, k) {
                let p = (k as i64 + t.delta()) as usize;
                out[p - lo] = &out[p - lo] + &(a * c).scale(&f);
            }
        }
    }
    Ok(CoefficientVector::exact(Basis::MonomialBasis, lo, out))
}

/// `T_s u` in floating point, in the basis of `u`. The second vector holds,
/// per output index, the sum of moduli of the contributing products (used
/// for rounding error bounds).
fn apply_float(s: &SymbolPoly, u: &CoefficientVector) -> (CoefficientVector, Vec<f64>) {
    let Some((lo, hi)) = output_range(s, u) else {
        return (CoefficientVector::float(u.basis, 0, Vec::new()), Vec::new());
    };
    let entries = u.complex_entries();
    let mut out = vec![Complex64::zero(); hi - lo];
    let mut mass = vec![0.0; hi - lo];
    for t in s.terms() {
        let a = t.coeff.to_complex();
        for (i, c) in entries.iter().enumerate() {
            let k = u.offset + i;
            if k as i64 + t.delta() < 0 {
                continue;
            }
            let f = match u.basis {
                Basis::OrthonormalBasis => amplitude(t.m, t.n, k),
                Basis::MonomialBasis => {
                    let (m, n, k) = (t.m as f64, t.n as f64, k as f64);
                    (k + m - n + 1.0) / (k + m + 1.0)
                }
            };
            let p = (k as i64 + t.delta()) as usize - lo;
            out[p] += a * c * f;
            mass[p] += a.norm() * c.norm() * f;
        }
    }
    (CoefficientVector::float(u.basis, lo, out), mass)
}

/// `T_s u`: exact when possible (monomial basis, exact data), float otherwise.
pub fn apply_toeplitz(s: &SymbolPoly, u: &CoefficientVector) -> CoefficientVector {
    if u.is_exact() && u.basis == Basis::MonomialBasis && s.is_exact() {
        apply_toeplitz_exact(s, u).expect("exact preconditions checked")
    } else {
        apply_float(s, u).0
    }
}

/// `|u|^2 / pi` for an exact monomial-basis vector.
pub fn norm_sq_exact(u: &CoefficientVector) -> Result<Rational> {
    let Entries::Exact(entries) = &u.entries else {
        return Err(Error::ExactnessViolation);
    };
    if u.basis != Basis::MonomialBasis {
        return Err(Error::PreconditionViolated(
            "exact norms need the monomial basis".into(),
        ));
    }
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, c)| c.norm_sq() / int((u.offset + i + 1) as i64))
        .fold(Rational::zero(), |a, b| a + b))
}

/// `<[T_s*, T_s] u, u> / pi`, exact.
pub fn commutator_form_exact(s: &SymbolPoly, u: &CoefficientVector) -> Result<Rational> {
    if !s.is_exact() {
        return Err(Error::ExactnessViolation);
    }
    let tu = apply_toeplitz_exact(s, u)?;
    let tsu = apply_toeplitz_exact(&s.conjugate(), u)?;
    Ok(norm_sq_exact(&tu)? - norm_sq_exact(&tsu)?)
}

fn gamma(n: usize) -> f64 {
    let u = f64::EPSILON / 2.0;
    let nu = n as f64 * u;
    nu / (1.0 - nu)
}

/// `<[T_s*, T_s] u, u>` in floating point (absolute units, `pi` included),
/// with a forward error bound. `u` is converted to the orthonormal basis first.
pub fn commutator_form_float(s: &SymbolPoly, u: &CoefficientVector) -> (f64, f64) {
    let v = u.to_basis(Basis::OrthonormalBasis);
    let (ty, tmass) = apply_float(s, &v);
    let (sy, smass) = apply_float(&s.conjugate(), &v);
    let norm = |x: &CoefficientVector| x.complex_entries().iter().map(|c| c.norm_sqr()).sum::<f64>();
    let value = norm(&ty) - norm(&sy);
    let mass: f64 = tmass.iter().chain(smass.iter()).map(|m| m * m).sum();
    let n = s.terms().len() + tmass.len().max(smass.len()) + 10;
    (value, 4.0 * gamma(n) * mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::symbol::parse_symbol;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn sym(s: &str) -> SymbolPoly {
        parse_symbol(s).unwrap()
    }

    /// `<z^m zb^n, z^p>` over the disk by polar quadrature, divided by
    /// `|z^p|^2`: the coefficient of `z^p` in `P(z^m zb^n)`.
    fn projection_by_quadrature(m: u32, n: u32, p: u32) -> f64 {
        // Angular part integrates to 2 pi when m - n == p, else 0.
        if m as i64 - n as i64 != p as i64 {
            return 0.0;
        }
        // Radial part: int_0^1 r^{m+n+p+1} dr by composite Simpson.
        let steps = 2000;
        let h = 1.0 / steps as f64;
        let f = |r: f64| r.powi((m + n + p + 1) as i32);
        let mut acc = f(0.0) + f(1.0);
        for i in 1..steps {
            acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        let inner = 2.0 * PI * acc * h / 3.0;
        inner / (PI / (p as f64 + 1.0))
    }

    #[test]
    fn projections() {
        assert_eq!(project_monomial(1, 1), Some((rat(1, 2), 0)));
        assert_eq!(project_monomial(0, 3), None);
        assert_eq!(project_monomial(5, 2), Some((rat(2, 3), 3)));
        for (m, n) in [(5, 2), (1, 1), (4, 0), (3, 3)] {
            let (c, p) = project_monomial(m, n).unwrap();
            assert_abs_diff_eq!(projection_by_quadrature(m, n, p), crate::arith::to_f64(&c), epsilon = 1e-9);
        }
    }

    #[test]
    fn weights() {
        assert_eq!(Weight::new(1, 0, 0).squared_value, rat(1, 2));
        assert_eq!(Weight::new(0, 2, 1).squared_value, int(0));
        assert_eq!(Weight::new(2, 1, 0).squared_value, rat(2, 9));
    }

    #[test]
    fn orthonormal_actions() {
        for k in 0..6usize {
            let e = CoefficientVector::basis_vector(Basis::OrthonormalBasis, k);
            let out = apply_toeplitz(&sym("z"), &e);
            assert_eq!(out.offset, k + 1);
            let expect = ((k as f64 + 1.0) / (k as f64 + 2.0)).sqrt();
            assert_abs_diff_eq!(out.complex_entries()[0].re, expect, epsilon = 1e-15);
            let out = apply_toeplitz(&sym("|z|^2"), &e);
            assert_eq!(out.offset, k);
            assert_abs_diff_eq!(out.complex_entries()[0].re, (k as f64 + 1.0) / (k as f64 + 2.0), epsilon = 1e-15);
        }
    }

    #[test]
    fn annihilation() {
        let one = CoefficientVector::basis_vector(Basis::MonomialBasis, 0);
        assert!(apply_toeplitz(&sym("zb^2"), &one).is_empty());
    }

    #[test]
    fn exact_forms() {
        let zero = CoefficientVector::exact(Basis::MonomialBasis, 0, vec![]);
        assert_eq!(commutator_form_exact(&sym("z^2 zb - 3 z"), &zero).unwrap(), int(0));
        let one = CoefficientVector::basis_vector(Basis::MonomialBasis, 0);
        assert_eq!(commutator_form_exact(&sym("z^2 zb"), &one).unwrap(), rat(2, 9));
        let u = CoefficientVector::exact(
            Basis::MonomialBasis,
            0,
            vec![GaussianRational::new(int(1), int(2)), GaussianRational::real(rat(-3, 4)), GaussianRational::i()],
        );
        assert_eq!(commutator_form_exact(&sym("|z|^2"), &u).unwrap(), int(0));
        let polar = sym("polar(1, 0.5) z");
        assert_eq!(commutator_form_exact(&polar, &one), Err(Error::ExactnessViolation));
    }

    #[test]
    fn mixed_symbol_curve() {
        let u = CoefficientVector::float(
            Basis::OrthonormalBasis,
            0,
            vec![Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0)],
        );
        for c in [0.0, -1.0, -2.0 * 2f64.sqrt(), -3.0] {
            let s = sym("z").add(&SymbolPoly::monomial(1, 1, crate::arith::from_f64(c).unwrap()));
            let (v, e) = commutator_form_float(&s, &u);
            let expect = 1.0 / 6.0 + c / (12.0 * 2f64.sqrt());
            assert_abs_diff_eq!(v, expect, epsilon = 1e-12);
            assert!(e < 1e-13);
        }
    }

    #[test]
    fn coanalytic_form_is_negative() {
        let u = CoefficientVector::basis_vector(Basis::OrthonormalBasis, 0);
        let (v, _) = commutator_form_float(&sym("zb"), &u);
        assert_abs_diff_eq!(v, -0.5, epsilon = 1e-15);
    }

    fn arb_exact_symbol() -> impl Strategy<Value = SymbolPoly> {
        prop::collection::vec((0u32..5, 0u32..5, -9i64..10, 1i64..10, -9i64..10), 0..4).prop_map(|ts| {
            SymbolPoly::new(
                ts.into_iter()
                    .map(|(m, n, a, b, c)| crate::symbol::Monomial::new(m, n, GaussianRational::new(rat(a, b), int(c))))
                    .collect(),
            )
        })
    }

    fn arb_exact_vector() -> impl Strategy<Value = CoefficientVector> {
        (0usize..4, prop::collection::vec((-20i64..20, 1i64..8, -20i64..20), 1..6)).prop_map(|(o, es)| {
            CoefficientVector::exact(
                Basis::MonomialBasis,
                o,
                es.into_iter().map(|(a, b, c)| GaussianRational::new(rat(a, b), int(c))).collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn exact_and_float_forms_agree(s in arb_exact_symbol(), u in arb_exact_vector()) {
            let exact = crate::arith::to_f64(&commutator_form_exact(&s, &u).unwrap()) * PI;
            let (v, e) = commutator_form_float(&s, &u);
            prop_assert!((exact - v).abs() <= e + 1e-300, "exact {exact} float {v} bound {e}");
        }
    }
}
