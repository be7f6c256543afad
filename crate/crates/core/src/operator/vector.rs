use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arith::{fmt_rational, GaussianRational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Basis {
    /// `u = sum u_k z^k`
    MonomialBasis,
    /// `u = sum u_k phi_k`, `phi_k = sqrt((k+1)/pi) z^k`
    OrthonormalBasis,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<GaussianRational>),
    Float(Vec<Complex64>),
}

/// Finitely supported coefficient sequence; `entries[i]` belongs to index
/// `offset + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    pub basis: Basis,
    pub offset: usize,
    pub entries: Entries,
}

impl CoefficientVector {
    pub fn exact(basis: Basis, offset: usize, entries: Vec<GaussianRational>) -> Self {
        Self {
            basis,
            offset,
            entries: Entries::Exact(entries),
        }
        .trimmed()
    }

    pub fn float(basis: Basis, offset: usize, entries: Vec<Complex64>) -> Self {
        Self {
            basis,
            offset,
            entries: Entries::Float(entries),
        }
        .trimmed()
    }

    /// The single basis vector `e_k` (`z^k` or `phi_k`).
    pub fn basis_vector(basis: Basis, k: usize) -> Self {
        Self::exact(basis, k, vec![GaussianRational::one()])
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    pub fn len(&self) -> usize {
        match &self.entries {
            Entries::Exact(v) => v.len(),
            Entries::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// One past the largest index carried.
    pub fn end(&self) -> usize {
        self.offset + self.len()
    }

    pub fn complex_entries(&self) -> Vec<Complex64> {
        match &self.entries {
            Entries::Exact(v) => v.iter().map(GaussianRational::to_complex).collect(),
            Entries::Float(v) => v.clone(),
        }
    }

    /// Dense float coefficients on indices `0..end()`.
    pub fn dense_complex(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::zero(); self.offset];
        out.extend(self.complex_entries());
        out
    }

    /// Float coefficients in the other basis. Monomial to orthonormal divides
    /// by `sqrt((k+1)/pi)`.
    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        let entries = self
            .complex_entries()
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let k = (self.offset + i) as f64;
                let f = ((k + 1.0) / PI).sqrt();
                match basis {
                    Basis::OrthonormalBasis => c / f,
                    Basis::MonomialBasis => c * f,
                }
            })
            .collect();
        Self::float(basis, self.offset, entries)
    }

    /// Drops leading and trailing zeros, moving `offset` forward.
    fn trimmed(mut self) -> Self {
        match &mut self.entries {
            Entries::Exact(v) => {
                while v.last().is_some_and(|c| c.is_zero()) {
                    v.pop();
                }
                let lead = v.iter().take_while(|c| c.is_zero()).count();
                v.drain(..lead);
                self.offset += lead;
            }
            Entries::Float(v) => {
                while v.last().is_some_and(|c| c.is_zero()) {
                    v.pop();
                }
                let lead = v.iter().take_while(|c| c.is_zero()).count();
                v.drain(..lead);
                self.offset += lead;
            }
        }
        if self.is_empty() {
            self.offset = 0;
        }
        self
    }
}

impl Serialize for CoefficientVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CoefficientVector", 3)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("offset", &self.offset)?;
        match &self.entries {
            Entries::Exact(v) => {
                let e: Vec<[String; 2]> = v
                    .iter()
                    .map(|c| [fmt_rational(&c.re), fmt_rational(&c.im)])
                    .collect();
                st.serialize_field("entries", &e)?;
            }
            Entries::Float(v) => {
                let e: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
                st.serialize_field("entries", &e)?;
            }
        }
        st.end()
    }
}
