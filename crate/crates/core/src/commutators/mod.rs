//! Parity and phase observables, their local implementations, and
//! ordinary versus restricted commutators.
//!
//! Globally Σ_z = σ_z⊗σ_z and Σ_x = σ_x⊗σ_x commute. Measured locally they
//! become σ_z⊗I + α_z I⊗σ_z and σ_x⊗I + α_x I⊗σ_x, whose commutator
//! −2i(σ_y⊗I + α_xα_z I⊗σ_y) never vanishes.

pub mod bloch;
pub mod factorize;
pub mod minimize;
pub mod proposition;

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ops::{identity2, sigma_x, sigma_y, sigma_z};
use crate::qmat::{ket_pairs, real_ket, schmidt, ComplexMatrix, C64};

pub use bloch::{BlochObservable, ProductObservable};
pub use factorize::{kron_factorize, Factorization, PRODUCT_TOL};
pub use minimize::{
    parity_phase_infimum_trend, restricted_commutator_min, FiniteFamily, ImplementationFamily,
    Minimum, ParityPhaseFamily, SingletonFamily, TrendPoint,
};
pub use proposition::{
    product_commutator_norm, proposition1_certify, proposition1_search, Certificate, Dressing, Proposition1Outcome,
    SearchReport,
};

/// Norm at or below which a commutator counts as zero.
pub const ZERO_TOL: f64 = 1e-10;
/// Spectra closer than this count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
const ZERO_OUTPUT_TOL: f64 = 1e-12;

/// (Σ_z, Σ_x)
pub fn parity_phase_pair() -> (ComplexMatrix, ComplexMatrix) {
    (sigma_z().tensor(&sigma_z()), sigma_x().tensor(&sigma_x()))
}

/// The four Bell states, in the order ψ⁻, ψ⁺, Φ⁺, Φ⁻.
pub fn bell_basis() -> [(&'static str, DVector<C64>); 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        ("psi_minus", real_ket(&[0.0, h, -h, 0.0])),
        ("psi_plus", real_ket(&[0.0, h, h, 0.0])),
        ("phi_plus", real_ket(&[h, 0.0, 0.0, h])),
        ("phi_minus", real_ket(&[h, 0.0, 0.0, -h])),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Parity,
    Phase,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalImplementation {
    pub which: Which,
    pub alpha: f64,
    pub matrix: ComplexMatrix,
    /// σ⊗I and α·I⊗σ.
    pub terms: [ComplexMatrix; 2],
    /// Descending.
    pub spectrum: Vec<f64>,
    pub nondegenerate: bool,
}

pub fn locc_implementation(which: Which, alpha: f64) -> LocalImplementation {
    let s = match which {
        Which::Parity => sigma_z(),
        Which::Phase => sigma_x(),
    };
    let alice = s.tensor(&identity2());
    let bob = identity2().tensor(&s).scale(C64::new(alpha, 0.0));
    let matrix = &alice + &bob;
    let spectrum = matrix.eigh().eigenvalues;
    let nondegenerate = spectrum.windows(2).all(|w| (w[0] - w[1]).abs() > DEGENERACY_TOL);
    LocalImplementation { which, alpha, matrix, terms: [alice, bob], spectrum, nondegenerate }
}

/// −2i(σ_y⊗I + α_x·α_z·I⊗σ_y)
pub fn expected_locc_commutator(alpha_x: f64, alpha_z: f64) -> ComplexMatrix {
    let sy = sigma_y();
    let sum = &sy.tensor(&identity2()) + &identity2().tensor(&sy).scale(C64::new(alpha_x * alpha_z, 0.0));
    sum.scale(C64::new(0.0, -2.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglingDiagnostic {
    pub input: Vec<[f64; 2]>,
    /// K·input, normalized.
    pub output: Vec<[f64; 2]>,
    pub output_norm: f64,
    /// Entanglement entropy of the output, in bits.
    pub entropy: f64,
    pub schmidt_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub commutator: ComplexMatrix,
    pub frobenius_norm: f64,
    pub is_zero: bool,
    pub anti_hermiticity_error: f64,
    pub entangling: Option<EntanglingDiagnostic>,
}

pub fn commutator(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<CommutatorReport> {
    let k = m.commutator(n)?;
    let frobenius_norm = k.frobenius_norm();
    Ok(CommutatorReport {
        anti_hermiticity_error: k.anti_hermiticity_error(),
        is_zero: frobenius_norm <= ZERO_TOL,
        frobenius_norm,
        commutator: k,
        entangling: None,
    })
}

impl CommutatorReport {
    /// Attaches the action of the commutator on a product ket.
    pub fn with_entangling(mut self, ket: &DVector<C64>, dims: [usize; 2]) -> Result<Self> {
        self.entangling = Some(entangling_action(&self.commutator, ket, dims)?);
        Ok(self)
    }
}

/// Applies an anti-Hermitian `k` to a product ket and measures how much
/// entanglement the (normalized) result carries.
pub fn entangling_action(k: &ComplexMatrix, ket: &DVector<C64>, dims: [usize; 2]) -> Result<EntanglingDiagnostic> {
    if k.dim() != ket.len() || dims[0] * dims[1] != ket.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator of dimension {}, ket of length {}, dims {dims:?}",
            k.dim(),
            ket.len()
        )));
    }
    let ah = k.anti_hermiticity_error();
    if ah > ZERO_TOL {
        return Err(Error::Precondition(format!("operator not anti-Hermitian ({ah:e})")));
    }
    let rank = schmidt(ket, dims)?.rank;
    if rank != 1 {
        return Err(Error::Precondition(format!("input has Schmidt rank {rank}")));
    }
    let out = k.apply(ket);
    let output_norm = out.norm();
    if output_norm <= ZERO_OUTPUT_TOL {
        return Err(Error::ZeroOutput(output_norm));
    }
    let out = out.unscale(output_norm);
    let form = schmidt(&out, dims)?;
    Ok(EntanglingDiagnostic {
        input: ket_pairs(ket),
        output: ket_pairs(&out),
        output_norm,
        entropy: form.entropy(),
        schmidt_rank: form.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{basis_ket, binary_entropy};
    use approx::assert_abs_diff_eq;

    #[test]
    fn global_pair_commutes_and_labels_bell_states() {
        let (z, x) = parity_phase_pair();
        assert_eq!(z.commutator(&x).unwrap().max_abs(), 0.0);
        let expected = [(-1.0, -1.0), (-1.0, 1.0), (1.0, 1.0), (1.0, -1.0)];
        for ((_, ket), (ez, ex)) in bell_basis().iter().zip(expected) {
            assert_abs_diff_eq!(z.expectation(ket).re, ez, epsilon = 1e-15);
            assert_abs_diff_eq!(x.expectation(ket).re, ex, epsilon = 1e-15);
        }
    }

    #[test]
    fn other_commuting_pair() {
        let p = sigma_x().tensor(&sigma_y());
        let q = sigma_z().tensor(&sigma_z());
        assert!(commutator(&p, &q).unwrap().is_zero);
    }

    #[test]
    fn implementation_spectra() {
        let imp = locc_implementation(Which::Parity, 2.0);
        assert_eq!(imp.spectrum, vec![3.0, 1.0, -1.0, -3.0]);
        assert!(imp.nondegenerate);
        let imp = locc_implementation(Which::Phase, 1.0);
        assert!(!imp.nondegenerate);
        for (v, e) in imp.spectrum.iter().zip([2.0, 0.0, 0.0, -2.0]) {
            assert_abs_diff_eq!(*v, e, epsilon = 1e-12);
        }
        for t in &imp.terms {
            assert!(kron_factorize(t, [2, 2]).unwrap().is_product());
        }
    }

    #[test]
    fn locc_commutator_expansion() {
        for (ax, az) in [(1.0, 1.0), (0.5, 3.0), (-2.0, 0.25)] {
            let k = commutator(
                &locc_implementation(Which::Phase, ax).matrix,
                &locc_implementation(Which::Parity, az).matrix,
            )
            .unwrap();
            assert!(k.commutator.max_abs_diff(&expected_locc_commutator(ax, az)) <= 1e-12);
            assert!(k.anti_hermiticity_error <= 1e-12);
            let a: f64 = ax * az;
            assert_abs_diff_eq!(k.frobenius_norm, 4.0 * (1.0 + a * a).sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn entangling_examples() {
        let k00 = basis_ket(4, 0);
        let d = entangling_action(&expected_locc_commutator(1.0, 1.0), &k00, [2, 2]).unwrap();
        assert_abs_diff_eq!(d.entropy, 1.0, epsilon = 1e-12);
        let d = entangling_action(&expected_locc_commutator(0.5, 1.0), &k00, [2, 2]).unwrap();
        assert_abs_diff_eq!(d.entropy, binary_entropy(0.2), epsilon = 1e-12);

        // A product commutator keeps products.
        let k = sigma_y().tensor(&sigma_z()).scale(C64::new(0.0, 1.0));
        let d = entangling_action(&k, &basis_ket(4, 1), [2, 2]).unwrap();
        assert_eq!(d.schmidt_rank, 1);
        assert_abs_diff_eq!(d.entropy, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entangling_errors() {
        let zero = ComplexMatrix::zeros(&[2, 2]);
        assert!(matches!(entangling_action(&zero, &basis_ket(4, 0), [2, 2]), Err(Error::ZeroOutput(_))));
        let (z, _) = parity_phase_pair();
        assert!(matches!(entangling_action(&z, &basis_ket(4, 0), [2, 2]), Err(Error::Precondition(_))));
        let bell = bell_basis()[0].1.clone();
        let k = expected_locc_commutator(1.0, 1.0);
        assert!(matches!(entangling_action(&k, &bell, [2, 2]), Err(Error::Precondition(_))));
    }
}
