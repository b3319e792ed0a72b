//! Seeded sampling of Haar-random kets, unitaries and mixed states.
//!
//! Every sampler takes the generator explicitly; [`seeded`] gives the
//! reproducible stream used throughout the crate.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;

use crate::qmat::{BipartiteState, ComplexMatrix, C64};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unit vector in ℂ^dim.
pub fn haar_ket<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| gaussian(rng));
    let n = v.norm();
    v.unscale(n)
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the phase fix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    q
}

/// Random mixed state on `dims`: partial trace of a Haar-random purification
/// with an ancilla of dimension `ancilla`.
pub fn random_mixed_state<R: Rng + ?Sized>(
    dims: [usize; 2],
    ancilla: usize,
    rng: &mut R,
) -> BipartiteState {
    let d = dims[0] * dims[1];
    let psi = haar_ket(d * ancilla, rng);
    let full = ComplexMatrix::projector(&psi, &[dims[0], dims[1], ancilla]).expect("dims match");
    let reduced = full.partial_trace(&[0, 1]).expect("three subsystems");
    // Re-Hermitize to keep the validation tolerance meaningful.
    let m = reduced.data();
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let tr = herm.trace();
    let m = ComplexMatrix::new(herm / tr, dims.to_vec()).expect("dims match");
    BipartiteState::from_density(m).expect("reduced states are valid")
}

pub fn random_pure_state<R: Rng + ?Sized>(dims: [usize; 2], rng: &mut R) -> BipartiteState {
    BipartiteState::from_ket(haar_ket(dims[0] * dims[1], rng), dims).expect("nonzero ket")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(3);
        let u = haar_unitary(4, &mut rng);
        let err = (&u * u.adjoint() - DMatrix::<C64>::identity(4, 4)).norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn same_seed_same_stream() {
        let a = haar_ket(3, &mut seeded(11));
        let b = haar_ket(3, &mut seeded(11));
        assert_eq!(a, b);
    }
}
