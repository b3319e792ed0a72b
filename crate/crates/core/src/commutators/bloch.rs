use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{identity2, paulis};
use crate::qmat::{ComplexMatrix, C64};

/// Qubit observable `scalar·I + vec·σ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochObservable {
    pub scalar: f64,
    pub vec: [f64; 3],
}

impl BlochObservable {
    pub const fn new(scalar: f64, vec: [f64; 3]) -> Self {
        Self { scalar, vec }
    }

    pub const fn x() -> Self {
        Self::new(0.0, [1.0, 0.0, 0.0])
    }

    pub const fn y() -> Self {
        Self::new(0.0, [0.0, 1.0, 0.0])
    }

    pub const fn z() -> Self {
        Self::new(0.0, [0.0, 0.0, 1.0])
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut m = identity2().scale(C64::new(self.scalar, 0.0));
        for (p, &c) in paulis().iter().zip(&self.vec) {
            m = &m + &p.scale(C64::new(c, 0.0));
        }
        m
    }

    /// Bloch coordinates of a Hermitian 2×2 matrix: scalar = tr(M)/2,
    /// vec_i = tr(M σ_i)/2.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("expected 2x2, got {}", m.dim())));
        }
        let herm = m.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::Precondition(format!("observable not Hermitian ({herm:e})")));
        }
        let half = |x: C64| 0.5 * x.re;
        let [sx, sy, sz] = paulis();
        Ok(Self {
            scalar: half(m.trace()),
            vec: [
                half((m * &sx).trace()),
                half((m * &sy).trace()),
                half((m * &sz).trace()),
            ],
        })
    }

    pub fn vec_norm(&self) -> f64 {
        norm(&self.vec)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.scalar * factor, self.vec.map(|v| v * factor))
    }

    /// Conjugation U·M·U†, re-expressed in Bloch form.
    pub fn conjugated(&self, u: &DMatrix<C64>) -> Self {
        let m = ComplexMatrix::plain(u * self.matrix().data() * u.adjoint());
        Self::from_matrix(&m).expect("unitary conjugation keeps Hermiticity")
    }
}

/// `left ⊗ right`, Alice's factor first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProductObservable {
    pub left: BlochObservable,
    pub right: BlochObservable,
}

impl ProductObservable {
    pub const fn new(left: BlochObservable, right: BlochObservable) -> Self {
        Self { left, right }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        self.left.matrix().tensor(&self.right.matrix())
    }
}

pub(crate) fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_through_matrix() {
        let b = BlochObservable::new(0.3, [0.1, -0.7, 2.0]);
        let back = BlochObservable::from_matrix(&b.matrix()).unwrap();
        assert!((back.scalar - b.scalar).abs() < 1e-15);
        for i in 0..3 {
            assert!((back.vec[i] - b.vec[i]).abs() < 1e-15);
        }
        assert_eq!(b.matrix().hermiticity_error(), 0.0);
    }
}
