//! Standard qubit gates and Pauli matrices.

use nalgebra::DMatrix;

use crate::qmat::{ComplexMatrix, C64};

fn qubit(entries: [C64; 4]) -> ComplexMatrix {
    ComplexMatrix::new(DMatrix::from_row_slice(2, 2, &entries), vec![2]).expect("2x2")
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(&[2])
}

pub fn sigma_x() -> ComplexMatrix {
    qubit([ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> ComplexMatrix {
    qubit([ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> ComplexMatrix {
    qubit([ONE, ZERO, ZERO, -ONE])
}

/// (σ_x, σ_y, σ_z)
pub fn paulis() -> [ComplexMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

pub fn hadamard() -> ComplexMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    qubit([h, h, h, -h])
}

/// Controlled-NOT on two qubits, control first.
pub fn cnot() -> ComplexMatrix {
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    ComplexMatrix::new(m, vec![2, 2]).expect("4x4")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_products() {
        // σ_x σ_y = i σ_z
        let xy = &sigma_x() * &sigma_y();
        assert_eq!(xy.max_abs_diff(&sigma_z().scale(I)), 0.0);
        for p in paulis() {
            assert_eq!((&p * &p).max_abs_diff(&identity2()), 0.0);
        }
        let h2 = &hadamard() * &hadamard();
        assert!(h2.max_abs_diff(&identity2()) < 1e-15);
    }
}
