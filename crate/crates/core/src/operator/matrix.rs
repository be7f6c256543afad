use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::symbol::{Coefficient, SymbolPoly};

/// Dense Hermitian matrix of the self-commutator on `span(phi_0..phi_{N-1})`.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
    real: bool,
    offsets: Vec<i64>,
}

struct TermData {
    m: i64,
    delta: i64,
}

impl TermData {
    /// `(k+1)(k+delta+1)` and `k+m+1`: `amp^2 = num / den^2`.
    fn parts(&self, k: i64) -> Option<(i128, i128)> {
        (k + self.delta >= 0).then(|| {
            (
                (k as i128 + 1) * (k as i128 + self.delta as i128 + 1),
                k as i128 + self.m as i128 + 1,
            )
        })
    }
}

/// Term pairs `(t, t')` of one operator with their coefficient products
/// `a_t conj(a_t')`, computed exactly when both coefficients are exact.
fn pair_products(terms: &[(TermData, Coefficient)]) -> Vec<(usize, usize, Complex64)> {
    let mut out = Vec::new();
    for (i, (_, a)) in terms.iter().enumerate() {
        for (j, (_, b)) in terms.iter().enumerate() {
            let prod = match (a, b) {
                (Coefficient::Exact(x), Coefficient::Exact(y)) => (x * &y.conj()).to_complex(),
                _ => a.to_complex() * b.to_complex().conj(),
            };
            out.push((i, j, prod));
        }
    }
    out
}

fn term_data(s: &SymbolPoly) -> Vec<(TermData, Coefficient)> {
    s.terms()
        .iter()
        .map(|t| {
            (
                TermData {
                    m: t.m as i64,
                    delta: t.delta(),
                },
                t.coeff.clone(),
            )
        })
        .collect()
}

/// `M[j][k] = <[T*, T] phi_k, phi_j> = <T phi_k, T phi_j> - <T* phi_k, T* phi_j>`.
///
/// Each entry is a signed sum over term pairs of
/// `a_t conj(a_t') amp_t(k) amp_t'(j)`; the amplitude product is formed from
/// exact integers and rounded once. Only `j <= k` is computed; the rest is
/// mirrored, so the result is Hermitian bit for bit.
pub fn commutator_matrix(s: &SymbolPoly, size: usize) -> Result<HermitianMatrix> {
    if size < 1 {
        return Err(Error::SizeTooSmall);
    }
    let ops = [term_data(s), term_data(&s.conjugate())];
    let pairs: Vec<_> = ops.iter().map(|t| pair_products(t)).collect();
    let real = s.terms().iter().all(|t| match &t.coeff {
        Coefficient::Exact(g) => g.is_real(),
        Coefficient::Polar { phase, .. } => *phase == 0.0 || phase.abs() == std::f64::consts::PI,
    });
    let offsets: BTreeSet<i64> = ops[0]
        .iter()
        .flat_map(|(a, _)| ops[0].iter().map(move |(b, _)| a.delta - b.delta))
        .collect();

    let rows: Vec<Vec<(usize, Complex64)>> = (0..size)
        .into_par_iter()
        .map(|j| {
            let mut row: Vec<(usize, Complex64)> = Vec::new();
            for (sign, (terms, pairs)) in [(1.0, (&ops[0], &pairs[0])), (-1.0, (&ops[1], &pairs[1]))] {
                for &(t, tp, prod) in pairs.iter() {
                    let (dt, dtp) = (&terms[t].0, &terms[tp].0);
                    // T phi_k lands on k + delta_t, T phi_j on j + delta_t'.
                    let k = j as i64 + dtp.delta - dt.delta;
                    if k < j as i64 || k >= size as i64 {
                        continue;
                    }
                    let (Some((nk, dk)), Some((nj, dj))) = (dt.parts(k), dtp.parts(j as i64)) else {
                        continue;
                    };
                    let amp = ((nk * nj) as f64).sqrt() / ((dk * dj) as f64);
                    let v = prod * (sign * amp);
                    match row.iter_mut().find(|(c, _)| *c == k as usize) {
                        Some((_, acc)) => *acc += v,
                        None => row.push((k as usize, v)),
                    }
                }
            }
            row
        })
        .collect();

    let mut data = DMatrix::<Complex64>::zeros(size, size);
    for (j, row) in rows.into_iter().enumerate() {
        for (k, mut v) in row {
            if k == j || real {
                // Diagonal entries are real in exact arithmetic.
                v.im = 0.0;
            }
            data[(j, k)] = v;
            data[(k, j)] = v.conj();
        }
    }
    Ok(HermitianMatrix {
        data,
        real,
        offsets: offsets.into_iter().collect(),
    })
}

impl HermitianMatrix {
    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.data[(j, k)]
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Differences `j - k` at which entries may be nonzero.
    pub fn band_offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|k| (self.data[(j, k)] - self.data[(k, j)].conj()).norm() <= tol))
    }

    /// Leading `n x n` block.
    pub fn top_left(&self, n: usize) -> HermitianMatrix {
        HermitianMatrix {
            data: self.data.view((0, 0), (n, n)).into_owned(),
            real: self.real,
            offsets: self.offsets.clone(),
        }
    }

    /// `u^H M u` for dense orthonormal coefficients (shorter `u` is
    /// zero-padded).
    pub fn quadratic_form(&self, u: &[Complex64]) -> f64 {
        let n = self.dim().min(u.len());
        let mut acc = Complex64::zero();
        for j in 0..n {
            for k in 0..n {
                acc += u[j].conj() * self.data[(j, k)] * u[k];
            }
        }
        acc.re
    }

    /// Index classes `r, r+g, r+2g, ...` that never couple, where `g` is the
    /// gcd of the band offsets. A diagonal matrix yields singletons.
    fn blocks(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let g = self
            .offsets
            .iter()
            .filter(|&&d| d != 0)
            .fold(0i64, |acc, &d| acc.gcd(&d)) as usize;
        if g == 0 {
            return (0..n).map(|i| vec![i]).collect();
        }
        (0..g.min(n)).map(|r| (r..n).step_by(g).collect()).collect()
    }

    fn block_eigen(&self, idx: &[usize], vectors: bool) -> (Vec<f64>, Option<Vec<Vec<Complex64>>>) {
        let b = idx.len();
        if b == 1 {
            let v = self.data[(idx[0], idx[0])].re;
            return (vec![v], vectors.then(|| vec![vec![Complex64::new(1.0, 0.0)]]));
        }
        if self.real {
            let m = DMatrix::<f64>::from_fn(b, b, |r, c| self.data[(idx[r], idx[c])].re);
            if !vectors {
                return (m.symmetric_eigenvalues().iter().copied().collect(), None);
            }
            let e = SymmetricEigen::new(m);
            let vs = (0..b)
                .map(|i| e.eigenvectors.column(i).iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect();
            (e.eigenvalues.iter().copied().collect(), Some(vs))
        } else {
            let m = DMatrix::<Complex64>::from_fn(b, b, |r, c| self.data[(idx[r], idx[c])]);
            if !vectors {
                return (m.symmetric_eigenvalues().iter().copied().collect(), None);
            }
            let e = SymmetricEigen::new(m);
            let vs = (0..b)
                .map(|i| e.eigenvectors.column(i).iter().copied().collect())
                .collect();
            (e.eigenvalues.iter().copied().collect(), Some(vs))
        }
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self
            .blocks()
            .par_iter()
            .flat_map(|idx| self.block_eigen(idx, false).0)
            .collect();
        all.sort_by(|a, b| a.total_cmp(b));
        all
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Smallest eigenvalue with a unit eigenvector in dense coordinates.
    pub fn min_eigenpair(&self) -> (f64, Vec<Complex64>) {
        let blocks = self.blocks();
        let best = blocks
            .par_iter()
            .map(|idx| {
                let (vals, _) = self.block_eigen(idx, false);
                let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
                (lo, idx)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0));
        let n = self.dim();
        let Some((_, idx)) = best else {
            return (0.0, vec![Complex64::zero(); n]);
        };
        let (vals, vecs) = self.block_eigen(idx, true);
        let (i, &lambda) = vals
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty block");
        let mut v = vec![Complex64::zero(); n];
        for (r, &ix) in idx.iter().enumerate() {
            v[ix] = vecs.as_ref().unwrap()[i][r];
        }
        (lambda, v)
    }

    /// Row-major nested arrays of `[re, im]`.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.dim();
        serde_json::Value::Array(
            (0..n)
                .map(|j| {
                    serde_json::Value::Array(
                        (0..n)
                            .map(|k| {
                                let c = self.data[(j, k)];
                                serde_json::json!([c.re, c.im])
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// One line per row: `re,im,re,im,...`.
    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut s = String::new();
        for j in 0..n {
            let row: Vec<String> = (0..n)
                .flat_map(|k| {
                    let c = self.data[(j, k)];
                    [format!("{:e}", c.re), format!("{:e}", c.im)]
                })
                .collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, to_f64};
    use crate::operator::{commutator_form_float, Basis, CoefficientVector};
    use crate::symbol::parse_symbol;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sym(s: &str) -> SymbolPoly {
        parse_symbol(s).unwrap()
    }

    /// Oracle for monomials: the diagonal entry at k from the weight formula.
    fn monomial_diagonal(m: i64, n: i64, k: i64) -> f64 {
        let first = if k + m - n >= 0 {
            (k + 1) as f64 * (k + m - n + 1) as f64 / ((k + m + 1) * (k + m + 1)) as f64
        } else {
            0.0
        };
        let second = if k + n - m >= 0 {
            (k + 1) as f64 * (k + n - m + 1) as f64 / ((k + n + 1) * (k + n + 1)) as f64
        } else {
            0.0
        };
        first - second
    }

    #[test]
    fn monomial_matrix_is_diagonal() {
        for (m, n) in [(1, 0), (2, 1), (5, 2), (1, 3)] {
            let s = SymbolPoly::monomial(m, n, rat(3, 2));
            let mat = commutator_matrix(&s, 12).unwrap();
            for j in 0..12 {
                for k in 0..12 {
                    let v = mat.get(j, k);
                    if j == k {
                        assert_abs_diff_eq!(v.re, 2.25 * monomial_diagonal(m as i64, n as i64, k as i64), epsilon = 1e-14);
                    } else {
                        assert_eq!(v, Complex64::zero());
                    }
                }
            }
        }
    }

    #[test]
    fn self_adjoint_symbol_gives_zero() {
        let mat = commutator_matrix(&sym("|z|^2"), 10).unwrap();
        assert!(mat.eigenvalues().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mixed_symbol_two_by_two() {
        let mat = commutator_matrix(&sym("z + |z|^2"), 2).unwrap();
        assert_abs_diff_eq!(mat.get(0, 0).re, 0.5, epsilon = 1e-15);
        // |T e0|^2 - |T* e0|^2 etc. from the hand expansion
        assert_abs_diff_eq!(mat.get(1, 1).re, 2.0 / 3.0 - 0.5, epsilon = 1e-15);
        let cross = 0.5f64.sqrt() * (2.0 / 3.0 - 0.5);
        assert_abs_diff_eq!(mat.get(0, 1).re, cross, epsilon = 1e-15);
        assert_abs_diff_eq!(mat.get(1, 0).re, cross, epsilon = 1e-15);
        for k in 0..2 {
            let ek = CoefficientVector::basis_vector(Basis::OrthonormalBasis, k);
            assert_abs_diff_eq!(commutator_form_float(&sym("z + |z|^2"), &ek).0, mat.get(k, k).re, epsilon = 1e-15);
        }
    }

    #[test]
    fn exports() {
        let mat = commutator_matrix(&sym("z"), 3).unwrap();
        let csv = mat.to_csv();
        assert_eq!(csv.lines().count(), 3);
        assert_eq!(csv.lines().next().unwrap().split(',').count(), 6);
        let json = mat.to_json();
        assert_abs_diff_eq!(json[1][1][0].as_f64().unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(json[2][2][0].as_f64().unwrap(), 1.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn size_zero_is_rejected() {
        assert!(matches!(commutator_matrix(&sym("z"), 0), Err(Error::SizeTooSmall)));
    }

    fn arb_symbol() -> impl Strategy<Value = SymbolPoly> {
        prop::collection::vec((0u32..5, 0u32..5, -5i64..6, 1i64..5, -3i64..4), 1..4).prop_map(|ts| {
            SymbolPoly::new(
                ts.into_iter()
                    .map(|(m, n, a, b, c)| {
                        crate::symbol::Monomial::new(
                            m,
                            n,
                            crate::arith::GaussianRational::new(rat(a, b), rat(c, 1)),
                        )
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn structure(s in arb_symbol()) {
            let big = commutator_matrix(&s, 14).unwrap();
            let small = commutator_matrix(&s, 9).unwrap();
            let deltas: Vec<i64> = s.terms().iter().map(|t| t.delta()).collect();
            for j in 0..14 {
                for k in 0..14 {
                    let v = big.get(j, k);
                    // exact Hermitian symmetry
                    prop_assert_eq!(v, big.get(k, j).conj());
                    let d = j as i64 - k as i64;
                    let in_band = deltas.iter().any(|a| deltas.iter().any(|b| a - b == d));
                    if !in_band {
                        prop_assert_eq!(v, Complex64::zero());
                    }
                    if j < 9 && k < 9 {
                        prop_assert_eq!(v, small.get(j, k));
                    }
                }
            }
        }

        #[test]
        fn quadratic_form_matches_operator_form(s in arb_symbol(),
                                                 u in prop::collection::vec((-5i64..6, -5i64..6), 1..8)) {
            let n = 14;
            let mat = commutator_matrix(&s, n).unwrap();
            let dense: Vec<Complex64> = u.iter().map(|&(a, b)| Complex64::new(a as f64, b as f64)).collect();
            let v = CoefficientVector::float(Basis::OrthonormalBasis, 0, dense.clone());
            let (f, err) = commutator_form_float(&s, &v);
            let q = mat.quadratic_form(&dense);
            let scale: f64 = s.terms().iter().map(|t| to_f64(&t.coeff.norm_sq())).sum::<f64>()
                * dense.iter().map(|c| c.norm_sqr()).sum::<f64>();
            prop_assert!((f - q).abs() <= err + 1e-12 * scale.max(1.0), "{f} vs {q}");
        }
    }
}
