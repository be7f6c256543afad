use num_complex::Complex64;
use num_traits::Signed;
use serde::Serialize;

use super::{commutator_form_exact, commutator_form_float, commutator_matrix, Basis, CoefficientVector};
use crate::arith::{fmt_rational, to_f64, GaussianRational, Rational};
use crate::error::Result;
use crate::symbol::SymbolPoly;

/// A float eigenvalue must fall below `-WITNESS_THRESHOLD` before an exact
/// re-check is attempted.
pub const WITNESS_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_SECTION_SIZE: usize = 200;
pub const DEFAULT_MAX_SECTION: usize = 1600;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum FormValue {
    /// `<[T*, T] u, u> / pi`, exact.
    ExactRationalTimesPi {
        #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
        value: Rational,
    },
    /// Float value with a rigorous rounding error bound; `value + error_bound < 0`.
    Float { value: f64, error_bound: f64 },
}

impl FormValue {
    pub fn is_certified_negative(&self) -> bool {
        match self {
            FormValue::ExactRationalTimesPi { value } => value.is_negative(),
            FormValue::Float { value, error_bound } => value + error_bound < 0.0,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FormValue::ExactRationalTimesPi { value } => {
                let s = fmt_rational(value);
                if s.len() > 60 {
                    format!("{:.12e} pi (exact rational with {} digits)", to_f64(value), s.len())
                } else {
                    format!("{s} pi")
                }
            }
            FormValue::Float { value, error_bound } => format!("{value:.12e} +- {error_bound:.3e}"),
        }
    }
}

/// A test function with certified negative self-commutator form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub vector: CoefficientVector,
    pub form_value: FormValue,
    /// Section size whose eigenvector produced the witness (0 when the vector
    /// was written down directly).
    pub section_size: usize,
    /// Float eigenvalue that led to the witness.
    pub eigenvalue: Option<f64>,
}

impl Witness {
    /// Witness from an explicit exact vector, or `None` if its form is not
    /// negative.
    pub fn from_exact_vector(s: &SymbolPoly, u: CoefficientVector) -> Result<Option<Witness>> {
        let value = commutator_form_exact(s, &u)?;
        Ok(value.is_negative().then_some(Witness {
            vector: u,
            form_value: FormValue::ExactRationalTimesPi { value },
            section_size: 0,
            eigenvalue: None,
        }))
    }
}

/// Outcome of a doubling scan over section sizes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefutationScan {
    pub witness: Option<Witness>,
    /// `(size, min eigenvalue)` for each section examined.
    pub sections: Vec<(usize, f64)>,
}

pub fn find_refutation(s: &SymbolPoly, size: usize) -> Result<Option<Witness>> {
    find_refutation_with(s, size, WITNESS_THRESHOLD).map(|(w, _)| w)
}

/// Minimum eigenpair of the `size` section; when clearly negative, the
/// eigenvector is turned into a certified witness. Also returns the eigenvalue.
pub fn find_refutation_with(
    s: &SymbolPoly,
    size: usize,
    threshold: f64,
) -> Result<(Option<Witness>, f64)> {
    let m = commutator_matrix(s, size)?;
    let (lambda, v) = m.min_eigenpair();
    if lambda >= -threshold {
        return Ok((None, lambda));
    }
    let witness = if s.is_exact() {
        certify_exact(s, &v, size, lambda)?
    } else {
        let u = CoefficientVector::float(Basis::OrthonormalBasis, 0, v);
        let (value, error_bound) = commutator_form_float(s, &u);
        (value + error_bound < 0.0).then_some(Witness {
            vector: u,
            form_value: FormValue::Float { value, error_bound },
            section_size: size,
            eigenvalue: Some(lambda),
        })
    };
    Ok((witness, lambda))
}

/// Rounds the eigenvector to Gaussian integers in the monomial basis
/// (`u_k = v_k sqrt(k+1)` up to the irrelevant factor `pi^{-1/2}`) and
/// re-evaluates the form exactly, trying finer scales if needed.
fn certify_exact(
    s: &SymbolPoly,
    v: &[Complex64],
    size: usize,
    lambda: f64,
) -> Result<Option<Witness>> {
    let w: Vec<Complex64> = v
        .iter()
        .enumerate()
        .map(|(k, c)| c * ((k + 1) as f64).sqrt())
        .collect();
    let max = w.iter().map(|c| c.re.abs().max(c.im.abs())).fold(0.0, f64::max);
    if max == 0.0 {
        return Ok(None);
    }
    for bits in [40, 64, 96, 128] {
        let scale = 2f64.powi(bits) / max;
        let to_int = |x: f64| Rational::from_float((x * scale).round()).expect("finite");
        let entries: Vec<GaussianRational> = w
            .iter()
            .map(|c| GaussianRational::new(to_int(c.re), to_int(c.im)))
            .collect();
        let u = CoefficientVector::exact(Basis::MonomialBasis, 0, entries);
        let value = commutator_form_exact(s, &u)?;
        if value.is_negative() {
            return Ok(Some(Witness {
                vector: u,
                form_value: FormValue::ExactRationalTimesPi { value },
                section_size: size,
                eigenvalue: Some(lambda),
            }));
        }
    }
    Ok(None)
}

/// Tries sections `start, 2 start, 4 start, ...` up to `max` until a witness
/// is certified.
pub fn scan_for_refutation(
    s: &SymbolPoly,
    start: usize,
    max: usize,
    threshold: f64,
) -> Result<RefutationScan> {
    let mut sections = Vec::new();
    let mut size = start.max(1);
    loop {
        let (w, lambda) = find_refutation_with(s, size, threshold)?;
        sections.push((size, lambda));
        if w.is_some() || size >= max {
            return Ok(RefutationScan {
                witness: w,
                sections,
            });
        }
        size = (size * 2).min(max);
    }
}
