//! Dominant left singular vector of a nonnegative matrix and angle ranking
//! of its columns against that vector.
//!
//! The dominant left singular vector `u1` of `A` is the top eigenvector of
//! `A·Aᵀ`. It is found by power iteration, applying the Gram product as
//! `A·(Aᵀ·x)` so that neither `A·Aᵀ` nor `Aᵀ·A` is ever formed. Starting from
//! the all-ones vector keeps every iterate entrywise nonnegative, so the limit
//! is the Perron vector of the dominant component and the result does not
//! depend on any random choice.

use serde::Serialize;
use thiserror::Error;

use crate::embedding::{SparseColumns, WordMatrix};
use crate::wordlist::Word;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("matrix is identically zero")]
    ZeroMatrix,
    #[error("power iteration stopped after {iterations} steps with residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("cannot take the angle to a zero vector")]
    ZeroVector,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIteration {
    /// Stop once successive iterates differ by at most this much (Euclidean).
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerIteration {
    fn default() -> Self {
        PowerIteration {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

/// Unit-norm, entrywise nonnegative top eigenvector of `A·Aᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantVector {
    values: Vec<f64>,
    /// Largest eigenvalue of `A·Aᵀ`, i.e. the squared top singular value.
    pub eigenvalue: f64,
    pub iterations: usize,
    /// `‖A·Aᵀ·u − λ·u‖₂` at the returned vector.
    pub residual: f64,
}

impl DominantVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn singular_value(&self) -> f64 {
        self.eigenvalue.sqrt()
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dominant_left_singular_vector(
    a: &SparseColumns,
    cfg: PowerIteration,
) -> Result<DominantVector, SpectralError> {
    let (m, n) = (a.rows(), a.cols());
    if m == 0 || n == 0 {
        return Err(SpectralError::EmptyMatrix);
    }
    let mut x = vec![1.0 / (m as f64).sqrt(); m];
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; m];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < cfg.max_iter.max(1) {
        iterations += 1;
        a.mul_transpose_into(&x, &mut y);
        a.mul_into(&y, &mut z);
        let len = norm(&z);
        if len == 0.0 {
            return Err(SpectralError::ZeroMatrix);
        }
        let mut step = 0.0;
        for (xi, zi) in x.iter_mut().zip(&z) {
            let next = zi / len;
            step += (next - *xi) * (next - *xi);
            *xi = next;
        }
        if step.sqrt() <= cfg.tol {
            converged = true;
            break;
        }
    }

    // Iterates stay nonnegative in exact arithmetic; scrub rounding noise.
    for xi in x.iter_mut() {
        if *xi < 0.0 {
            *xi = 0.0;
        }
    }
    let len = norm(&x);
    x.iter_mut().for_each(|xi| *xi /= len);

    a.mul_transpose_into(&x, &mut y);
    let eigenvalue = dot(&y, &y);
    a.mul_into(&y, &mut z);
    let residual = z
        .iter()
        .zip(&x)
        .map(|(zi, xi)| (zi - eigenvalue * xi).powi(2))
        .sum::<f64>()
        .sqrt();

    if !converged && residual > 100.0 * cfg.tol * eigenvalue.max(1.0) {
        return Err(SpectralError::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(DominantVector {
        values: x,
        eigenvalue,
        iterations,
        residual,
    })
}

/// Angle in radians between `u` and `col`, in `[0, π]`.
pub fn angle_to(u: &[f64], col: &[f64]) -> Result<f64, SpectralError> {
    if u.len() != col.len() {
        return Err(SpectralError::DimensionMismatch {
            left: u.len(),
            right: col.len(),
        });
    }
    let (nu, nc) = (norm(u), norm(col));
    if nu == 0.0 || nc == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    Ok((dot(u, col) / (nu * nc)).clamp(-1.0, 1.0).acos())
}

/// Angle between `u` and every column of `a`, in column order.
pub fn column_angles(a: &SparseColumns, u: &[f64]) -> Result<Vec<f64>, SpectralError> {
    if u.len() != a.rows() {
        return Err(SpectralError::DimensionMismatch {
            left: u.len(),
            right: a.rows(),
        });
    }
    let nu = norm(u);
    if nu == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    (0..a.cols())
        .map(|c| {
            let nc = a.column_norm(c);
            if nc == 0.0 {
                return Err(SpectralError::ZeroVector);
            }
            let d: f64 = a.column(c).map(|(r, v)| u[r] * v).sum();
            Ok((d / (nu * nc)).clamp(-1.0, 1.0).acos())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankedCandidate {
    pub word: Word,
    /// Radians.
    pub theta: f64,
    pub column_index: usize,
}

impl RankedCandidate {
    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }
}

/// Columns of `a` sorted by ascending angle to `u`; equal angles keep column order.
pub fn rank_candidates(
    a: &WordMatrix,
    u: &DominantVector,
) -> Result<Vec<RankedCandidate>, SpectralError> {
    let angles = column_angles(a.columns(), u.values())?;
    let mut ranked: Vec<RankedCandidate> = a
        .words()
        .iter()
        .zip(angles)
        .enumerate()
        .map(|(column_index, (&word, theta))| RankedCandidate {
            word,
            theta,
            column_index,
        })
        .collect();
    ranked.sort_by(|x, y| x.theta.total_cmp(&y.theta));
    Ok(ranked)
}
