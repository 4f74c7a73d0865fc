//! Haar-radial scalar product on the unit circle, the dual basis to tilting
//! characters, and the quadrature formula for multiplicities.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bigq::{decompose_weight, tilting_char_poly};
use crate::error::{Error, Result};
use crate::level::Level;
use crate::qarith::{quantum_number, LaurentPoly};

/// Trapezoid nodes `theta_j = offset + 2*pi*j/M` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleGrid {
    m: usize,
    offset: f64,
}

impl CircleGrid {
    pub fn new(m: usize, offset: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument(
                "grid needs at least one node".into(),
            ));
        }
        if !(offset > 0.0 && offset < 2.0 * PI / m as f64) {
            return Err(Error::InvalidArgument(format!(
                "grid offset {offset} outside (0, 2*pi/M)"
            )));
        }
        Ok(Self { m, offset })
    }

    /// Default offset `pi / (4 l M)`, which keeps every node away from `x^2 = 1`.
    pub fn for_level(l: Level, m: usize) -> Result<Self> {
        Self::new(m, PI / (4.0 * l.get() as f64 * m.max(1) as f64))
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.m).map(move |j| {
            Complex64::from_polar(1.0, self.offset + 2.0 * PI * j as f64 / self.m as f64)
        })
    }

    /// `|x - 1/x|^2 / (2M)` at each node.
    fn haar_weights(&self) -> Vec<f64> {
        self.nodes()
            .map(|x| (x - x.inv()).norm_sqr() / (2.0 * self.m as f64))
            .collect()
    }
}

/// `(x^{k+1} - x^{-(k+1)}) / (x - x^{-1})`, with the limits at `x = +-1`.
pub fn weyl_char_eval(k: usize, x: Complex64) -> Complex64 {
    let d = x - x.inv();
    if d.norm() < 1e-12 {
        let sign = if x.re < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        return Complex64::new(sign * (k + 1) as f64, 0.0);
    }
    let e = k as i32 + 1;
    (x.powi(e) - x.powi(-e)) / d
}

/// Character of the Weyl module `W(k)` as a Laurent polynomial.
pub fn weyl_char_poly(k: usize) -> LaurentPoly {
    quantum_number(k as i64 + 1)
}

/// Discretized `(1/4pi) int conj(f) g |x - 1/x|^2 dtheta`.
pub fn haar_inner<F, G>(f: F, g: G, grid: &CircleGrid) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    grid.nodes()
        .zip(grid.haar_weights())
        .map(|(x, w)| f(x).conj() * g(x) * w)
        .sum()
}

/// Node values of a Laurent polynomial, for repeated pairings on one grid.
fn sample(p: &LaurentPoly, grid: &CircleGrid) -> Vec<Complex64> {
    grid.nodes().map(|x| p.eval_complex(x)).collect()
}

fn pair_samples(f: &[Complex64], g: &[Complex64], w: &[f64]) -> Complex64 {
    f.iter()
        .zip(g)
        .zip(w)
        .map(|((a, b), w)| a.conj() * b * w)
        .sum()
}

/// Truncation `sum_{j=0}^{J} (W_{(k1+2j)l+k0} - W_{(k1+1+2j)l+l-2-k0})` of the dual element `eta`.
///
/// On the wall `k0 = l-1` the two terms coincide, and the dual element is `W_{k1 l + l - 1}` itself.
pub fn eta_truncated(l: Level, k1: usize, k0: usize, j_max: usize) -> LaurentPoly {
    let li = l.get();
    if k0 == li - 1 {
        return weyl_char_poly(k1 * li + k0);
    }
    let mut eta = LaurentPoly::zero();
    for j in 0..=j_max {
        eta += &weyl_char_poly((k1 + 2 * j) * li + k0);
        eta -= &weyl_char_poly((k1 + 1 + 2 * j) * li + li - 2 - k0);
    }
    eta
}

/// Truncation depth used by [`integral_mult`].
pub fn integral_depth(l: Level, n: usize, k: usize) -> usize {
    n.saturating_sub(k).div_ceil(2 * l.get()) + 1
}

/// Minimum grid size (exclusive) for [`integral_mult`].
pub fn integral_grid_bound(l: Level, n: usize, k: usize) -> usize {
    let k1 = k / l.get();
    n + (k1 + 2 * integral_depth(l, n, k) + 2) * l.get() + 2
}

/// `(eta_k, ch_T(1)^N)` by trapezoid quadrature; a real number close to `M_k^(l)(N)`.
pub fn integral_mult(l: Level, n: usize, k: usize, grid: &CircleGrid) -> Result<f64> {
    let required = integral_grid_bound(l, n, k);
    if grid.len() <= required {
        return Err(Error::GridTooSmall {
            required,
            actual: grid.len(),
        });
    }
    let w = decompose_weight(l, k);
    let eta = eta_truncated(l, w.k1, w.k0, integral_depth(l, n, k));
    let value = haar_inner(
        |x| eta.eval_complex(x),
        |x| (x + x.inv()).powi(n as i32),
        grid,
    );
    Ok(value.re)
}

/// `max |(ch_T(m), eta_k) - delta_{mk}|` over `m, k <= k_max`.
pub fn biorthogonality_residual(l: Level, k_max: usize, grid: &CircleGrid) -> Result<f64> {
    let li = l.get();
    let depth = k_max / (2 * li) + 1;
    let required = k_max + (k_max / li + 2 * depth + 2) * li + 2;
    if grid.len() <= required {
        return Err(Error::GridTooSmall {
            required,
            actual: grid.len(),
        });
    }
    let weights = grid.haar_weights();
    let tilting: Vec<Vec<Complex64>> = (0..=k_max)
        .into_par_iter()
        .map(|m| sample(&tilting_char_poly(l, m), grid))
        .collect();
    let residual = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            let w = decompose_weight(l, k);
            let eta = sample(&eta_truncated(l, w.k1, w.k0, depth), grid);
            tilting
                .iter()
                .enumerate()
                .map(|(m, ch)| {
                    let target = if m == k { 1.0 } else { 0.0 };
                    (pair_samples(ch, &eta, &weights) - target).norm()
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(residual)
}
