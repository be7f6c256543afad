//! Self-commutator norms, the area comparison, and the projection norm.
//!
//! For a single term `c z^m zb^n` the self-commutator is diagonal in the
//! orthonormal basis `phi_k`, with eigenvalue `|c|^2 w_k`, where
//! `w_k = (k+1) [ (k+m-n+1)/(k+m+1)^2 - (k+n-m+1)/(k+n+1)^2 ]` (the second
//! term only when `k >= m-n`). Norms are reported in those units, i.e. not
//! multiplied by `pi`.

use log::warn;
use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{int, poly_nonneg_on_integer_ray, rat, PositivityVerdict, Rational, RationalPoly};
use crate::criteria::monomial_numerator;
use crate::error::{Error, Result};
use crate::operator::{commutator_matrix, project_monomial};
use crate::symbol::{Coefficient, SymbolPoly};

/// Upper bound on grid doublings in [`putnam_area_bound`].
const MAX_AREA_GRID: usize = 4096;

/// `w_k` for `z^m zb^n` as an exact rational.
pub fn monomial_commutator_weight(m: u32, n: u32, k: i64) -> Rational {
    let (m, n) = (m as i64, n as i64);
    let forward = if k + m - n >= 0 { rat(k + m - n + 1, (k + m + 1) * (k + m + 1)) } else { Rational::zero() };
    let backward = if k + n - m >= 0 { rat(k + n - m + 1, (k + n + 1) * (k + n + 1)) } else { Rational::zero() };
    (forward - backward) * int(k + 1)
}

/// Exact norm of the self-commutator of `T_{z^m zb^n}` with where it is
/// attained and how the tail was excluded.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonomialNorm {
    pub m: u32,
    pub n: u32,
    #[serde(serialize_with = "crate::arith::serde_rational::serialize")]
    pub value: Rational,
    pub attained_at: i64,
    /// `value * (k+m+1)^2 (k+n+1)^2 - (k+1) N(k) >= 0` beyond the scanned range.
    pub tail: Option<PositivityVerdict>,
}

pub fn monomial_commutator_norm(m: u32, n: u32) -> Result<Rational> {
    monomial_norm_detail(m, n).map(|r| r.value)
}

pub fn monomial_norm_detail(m: u32, n: u32) -> Result<MonomialNorm> {
    if m <= n && n > 0 {
        return Err(Error::PreconditionViolated(format!(
            "z^{m} zb^{n} is not a hyponormal monomial with nonzero commutator (need m > n)"
        )));
    }
    if m == 0 {
        return Ok(MonomialNorm { m, n, value: Rational::zero(), attained_at: 0, tail: None });
    }
    let delta = (m - n) as i64;
    let (mi, ni) = (m as i64, n as i64);
    // On k >= delta, w_k = (k+1) N(k) / ((k+m+1)^2 (k+n+1)^2).
    let num = &RationalPoly::x_plus(int(1)) * &monomial_numerator(m, n);
    let den = &RationalPoly::x_plus(int(mi + 1)).pow(2) * &RationalPoly::x_plus(int(ni + 1)).pow(2);

    let mut best = Rational::zero();
    let mut at = 0;
    let mut scanned = -1;
    let mut limit = (10 * (mi + 1)).max(delta);
    loop {
        for k in scanned + 1..=limit {
            let w = monomial_commutator_weight(m, n, k);
            if w > best {
                best = w;
                at = k;
            }
        }
        scanned = limit;
        let gap = &den.scale(&best) - &num;
        let tail = poly_nonneg_on_integer_ray(&gap, limit + 1, limit + 1 + 10 * (mi + 1));
        match tail.negative_at() {
            // A larger weight further out; scan up to it and try again.
            Some(k) => limit = k,
            None if tail.is_positive() => {
                return Ok(MonomialNorm { m, n, value: best, attained_at: at, tail: Some(tail) });
            }
            None => {
                return Err(Error::PreconditionViolated(format!(
                    "could not certify the tail of w_k for z^{m} zb^{n}"
                )))
            }
        }
    }
}

/// Largest eigenvalue of the `size x size` section of the self-commutator.
/// When the commutator is positive semidefinite this is a lower bound for
/// its norm, nondecreasing in `size`.
pub fn section_norm(s: &SymbolPoly, size: usize) -> Result<f64> {
    Ok(commutator_matrix(s, size)?.max_eigenvalue())
}

/// `|P(z^m zb^n)|^2 / pi`: `(m-n+1)/(m+1)^2` for `m >= n`, and `0` otherwise
/// since the projection annihilates the monomial.
pub fn projection_norm_sq(m: u32, n: u32) -> Rational {
    match project_monomial(m, n) {
        Some((c, d)) => &c * &c / int(d as i64 + 1),
        None => Rational::zero(),
    }
}

/// Rasterized estimate of `Area(phi(D))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub area_over_pi: f64,
    pub area_over_2pi: f64,
    /// Grid of the final pass.
    pub grid: usize,
    /// Relative change between the last two passes.
    pub relative_change: f64,
}

/// Maps a polar mesh of the closed disk through `s` and rasterizes the image
/// triangles on a `grid x grid` pixel array spanning the image's bounding box.
/// The grid doubles until two successive estimates agree to 1%.
pub fn putnam_area_bound(s: &SymbolPoly, grid: usize) -> Result<AreaEstimate> {
    if grid < 64 {
        return Err(Error::PreconditionViolated(format!("grid must be at least 64, got {grid}")));
    }
    let mut g = grid;
    let mut prev = raster_area(s, g)?;
    loop {
        let next_g = g * 2;
        if next_g > MAX_AREA_GRID.max(grid) {
            warn!("area estimate did not settle to 1% by grid {g}");
            return Ok(estimate(prev, g, f64::NAN));
        }
        let next = raster_area(s, next_g)?;
        let change = (next - prev).abs() / next;
        g = next_g;
        prev = next;
        if change < 0.01 {
            return Ok(estimate(prev, g, change));
        }
    }
}

fn estimate(area: f64, grid: usize, relative_change: f64) -> AreaEstimate {
    AreaEstimate {
        area_over_pi: area / std::f64::consts::PI,
        area_over_2pi: area / (2.0 * std::f64::consts::PI),
        grid,
        relative_change,
    }
}

fn raster_area(s: &SymbolPoly, grid: usize) -> Result<f64> {
    let (nr, nt) = (grid, grid);
    // Mesh vertices phi(r_i e^{i t_j}); column nt wraps to column 0.
    let verts: Vec<Complex64> = (0..=nr)
        .into_par_iter()
        .flat_map_iter(|i| {
            let r = i as f64 / nr as f64;
            (0..nt).map(move |j| {
                let t = std::f64::consts::TAU * j as f64 / nt as f64;
                s.eval(Complex64::from_polar(r, t))
            })
        })
        .collect();
    let v = |i: usize, j: usize| verts[i * nt + j % nt];

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &verts {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let scale = 1.0f64.max(x1 - x0).max(y1 - y0).max(x0.abs()).max(y0.abs());
    if !(x1 - x0 > 1e-12 * scale && y1 - y0 > 1e-12 * scale) {
        return Err(Error::DegenerateImage);
    }
    let (pw, ph) = ((x1 - x0) / grid as f64, (y1 - y0) / grid as f64);
    let words = grid.div_ceil(64);

    // Each worker rasterizes a band of mesh rows into its own bitmap.
    let bitmap = (0..nr)
        .into_par_iter()
        .fold(
            || vec![0u64; words * grid],
            |mut bits, i| {
                for j in 0..nt {
                    let (a, b, c, d) = (v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1));
                    for tri in [[a, b, c], [a, c, d]] {
                        fill_triangle(&mut bits, words, grid, tri, (x0, y0, pw, ph));
                    }
                }
                bits
            },
        )
        .reduce(
            || vec![0u64; words * grid],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    let filled: u64 = bitmap.iter().map(|w| w.count_ones() as u64).sum();
    let area = filled as f64 * pw * ph;
    if area <= 1e-12 * scale * scale {
        return Err(Error::DegenerateImage);
    }
    Ok(area)
}

/// Marks pixels whose centers lie in the closed triangle.
fn fill_triangle(bits: &mut [u64], words: usize, grid: usize, t: [Complex64; 3], frame: (f64, f64, f64, f64)) {
    let (x0, y0, pw, ph) = frame;
    let p: Vec<(f64, f64)> = t.iter().map(|z| ((z.re - x0) / pw - 0.5, (z.im - y0) / ph - 0.5)).collect();
    let area2 = (p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[2].0 - p[0].0) * (p[1].1 - p[0].1);
    if area2 == 0.0 {
        return;
    }
    let orient = area2.signum();
    let lo = |a: f64, b: f64, c: f64| a.min(b).min(c).ceil().max(0.0) as usize;
    let hi = |a: f64, b: f64, c: f64| (a.max(b).max(c).floor() as i64).min(grid as i64 - 1);
    let (cx0, cx1) = (lo(p[0].0, p[1].0, p[2].0), hi(p[0].0, p[1].0, p[2].0));
    let (cy0, cy1) = (lo(p[0].1, p[1].1, p[2].1), hi(p[0].1, p[1].1, p[2].1));
    if cx1 < 0 || cy1 < 0 {
        return;
    }
    let eps = 1e-9;
    let edge = |a: (f64, f64), b: (f64, f64), x: f64, y: f64| orient * ((b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0));
    for y in cy0..=cy1 as usize {
        for x in cx0..=cx1 as usize {
            let (fx, fy) = (x as f64, y as f64);
            if edge(p[0], p[1], fx, fy) >= -eps && edge(p[1], p[2], fx, fy) >= -eps && edge(p[2], p[0], fx, fy) >= -eps {
                bits[y * words + x / 64] |= 1 << (x % 64);
            }
        }
    }
}

/// Norm data for one symbol.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormReport {
    #[serde(serialize_with = "crate::arith::serde_rational::option::serialize")]
    pub exact_sup: Option<Rational>,
    pub section_lower_bound: f64,
    pub section_size: usize,
    /// `Area(phi(D))/pi`, the bound the area inequality would give.
    pub putnam_upper: Option<f64>,
    /// `Area(phi(D))/(2 pi)`, the conjectured bound.
    pub half_area_conjecture: Option<f64>,
}

impl NormReport {
    /// True when the section bound exceeds the conjectured half-area bound by
    /// more than `tol` (relative to the bound). Only meaningful for
    /// hyponormal symbols; this is a monitor, not a theorem.
    pub fn conjecture_violated(&self, tol: f64) -> bool {
        self.half_area_conjecture
            .is_some_and(|h| self.section_lower_bound > h * (1.0 + tol) + 1e-12)
    }
}

/// Exact norm for single hyponormal terms, section bound, and area estimate
/// (skipped when the image is degenerate).
pub fn norm_report(s: &SymbolPoly, size: usize, grid: usize) -> Result<NormReport> {
    let exact_sup = match s.terms() {
        [] => Some(Rational::zero()),
        [t] if t.m == t.n => Some(Rational::zero()),
        [t] if t.m > t.n => {
            let scale = match &t.coeff {
                Coefficient::Polar { modulus, .. } => modulus * modulus,
                Coefficient::Exact(g) => g.norm_sq(),
            };
            Some(monomial_commutator_norm(t.m, t.n)? * scale)
        }
        _ => None,
    };
    let section_lower_bound = section_norm(s, size)?;
    let area = match putnam_area_bound(s, grid) {
        Ok(a) => Some(a),
        Err(Error::DegenerateImage) => None,
        Err(e) => return Err(e),
    };
    let report = NormReport {
        exact_sup,
        section_lower_bound,
        section_size: size,
        putnam_upper: area.as_ref().map(|a| a.area_over_pi),
        half_area_conjecture: area.as_ref().map(|a| a.area_over_2pi),
    };
    if let Some(x) = &report.exact_sup {
        let x = crate::arith::to_f64(x);
        if section_lower_bound > x + 1e-10 * x.abs().max(1.0) {
            warn!("section bound {section_lower_bound} exceeds exact norm {x} for {s}");
        }
    }
    if report.conjecture_violated(0.02) {
        warn!(
            "half-area bound {:?} below section norm {} for {s}",
            report.half_area_conjecture, section_lower_bound
        );
    }
    Ok(report)
}
