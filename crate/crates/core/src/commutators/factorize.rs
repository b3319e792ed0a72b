//! Nearest Kronecker product via the rearrangement SVD.
//!
//! M ↦ R(M) with R[(i₁,j₁),(i₂,j₂)] = M[(i₁,i₂),(j₁,j₂)] turns X ⊗ Y into
//! the rank-one matrix vec(X)·vec(Y)ᵀ, so M is a product exactly when R(M)
//! has a single nonzero singular value.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmat::{thin_svd, ComplexMatrix, C64};

pub const PRODUCT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factorization {
    /// M = scale · left ⊗ right with ‖left‖_F = ‖right‖_F = 1, scale ≥ 0 and
    /// the first largest entry of `left` (row-major) real positive.
    Product { left: ComplexMatrix, right: ComplexMatrix, scale: f64, reconstruction_error: f64 },
    /// Frobenius distance to the best product approximation.
    NotProduct { residual: f64 },
}

impl Factorization {
    pub fn is_product(&self) -> bool {
        matches!(self, Factorization::Product { .. })
    }
}

pub fn kron_factorize(m: &ComplexMatrix, dims: [usize; 2]) -> Result<Factorization> {
    let [d1, d2] = dims;
    if d1 * d2 != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not match dimension {}",
            m.dim()
        )));
    }
    let data = m.data();
    let r = DMatrix::from_fn(d1 * d1, d2 * d2, |row, col| {
        let (i1, j1) = (row / d1, row % d1);
        let (i2, j2) = (col / d2, col % d2);
        data[(i1 * d2 + i2, j1 * d2 + j2)]
    });
    let svd = thin_svd(&r);
    let s = &svd.values;
    let lead = (0..s.len()).max_by(|&a, &b| s[a].total_cmp(&s[b])).unwrap_or(0);
    let residual = (0..s.len()).filter(|&k| k != lead).map(|k| s[k] * s[k]).sum::<f64>().sqrt();
    if residual > PRODUCT_TOL * m.frobenius_norm().max(1.0) {
        return Ok(Factorization::NotProduct { residual });
    }
    // The right factor is the projection of R onto the leading left vector.
    let lead_u = svd.u.column(lead).into_owned();
    let coeffs = lead_u.adjoint() * &r;
    let scale = coeffs.norm();
    let mut left = DMatrix::from_fn(d1, d1, |i, j| lead_u[i * d1 + j]);
    let mut right = DMatrix::from_fn(d2, d2, |i, j| {
        if scale > 0.0 { coeffs[i * d2 + j] / scale } else { C64::new(0.0, 0.0) }
    });
    // Move the phase of the largest entry of `left` into `right`; ties go to
    // the first such entry in row-major order.
    let biggest = left.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = (0..d1 * d1)
        .map(|k| left[(k / d1, k % d1)])
        .find(|z| z.norm() >= biggest * (1.0 - 1e-9));
    if let Some(p) = pivot.filter(|p| p.norm() > 0.0) {
        let phase = p / p.norm();
        left /= phase;
        right *= phase;
    }
    let left = ComplexMatrix::new(left, vec![d1])?;
    let right = ComplexMatrix::new(right, vec![d2])?;
    let rebuilt = left.tensor(&right).scale(C64::new(scale, 0.0));
    let reconstruction_error = rebuilt.max_abs_diff(m);
    Ok(Factorization::Product { left, right, scale, reconstruction_error })
}
