//! Dense complex linear algebra for small multipartite systems.
//!
//! A [`ComplexMatrix`] carries the list of subsystem dimensions it lives on,
//! so partial traces, partial transposes and local embeddings can be taken
//! without the caller re-stating the tensor structure. Subsystem 0 is the
//! most significant digit of the computational-basis index.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum |M - M†| accepted for a Hermitian matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Most negative eigenvalue still treated as numerical noise.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed deviation of a state's trace from one.
pub const TRACE_TOL: f64 = 1e-12;

const ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<C64>,
    dims: Vec<usize>,
}

impl ComplexMatrix {
    pub fn new(data: DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected square",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if !dims.is_empty() {
            if dims.contains(&0) {
                return Err(Error::DimensionMismatch("zero subsystem dimension".into()));
            }
            let product: usize = dims.iter().product();
            if product != data.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "subsystem dims {dims:?} multiply to {product}, matrix has dimension {}",
                    data.nrows()
                )));
            }
        }
        Ok(Self { data, dims })
    }

    /// Wraps a square matrix with no subsystem structure.
    ///
    /// Panics if `data` is not square.
    pub fn plain(data: DMatrix<C64>) -> Self {
        assert!(data.is_square() && data.nrows() > 0, "matrix must be square");
        Self { data, dims: Vec::new() }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let d = dims.iter().product();
        Self { data: DMatrix::identity(d, d), dims: dims.to_vec() }
    }

    pub fn zeros(dims: &[usize]) -> Self {
        let d = dims.iter().product();
        Self { data: DMatrix::zeros(d, d), dims: dims.to_vec() }
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Self::plain(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    /// |ψ⟩⟨ψ| on the given subsystems.
    pub fn projector(ket: &DVector<C64>, dims: &[usize]) -> Result<Self> {
        Self::new(ket * ket.adjoint(), dims.to_vec())
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal(values: &[f64], dims: &[usize]) -> Result<Self> {
        let data = DMatrix::from_diagonal(&DVector::from_iterator(
            values.len(),
            values.iter().map(|&v| C64::new(v, 0.0)),
        ));
        Self::new(data, dims.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_data(self) -> DMatrix<C64> {
        self.data
    }

    pub fn with_dims(self, dims: &[usize]) -> Result<Self> {
        Self::new(self.data, dims.to_vec())
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    pub fn dagger(&self) -> Self {
        Self { data: self.data.adjoint(), dims: self.dims.clone() }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { data: &self.data * factor, dims: self.dims.clone() }
    }

    /// Kronecker product; the subsystem lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.effective_dims();
        dims.extend(other.effective_dims());
        Self { data: self.data.kronecker(&other.data), dims }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// max |M_ij - conj(M_ji)|
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= HERMITIAN_TOL
    }

    /// max |M_ij + conj(M_ji)|
    pub fn anti_hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[(i, j)] + self.data[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Largest elementwise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.data[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let data = &self.data * &other.data - &other.data * &self.data;
        Ok(Self { data, dims: self.merged_dims(other) })
    }

    pub fn apply(&self, ket: &DVector<C64>) -> DVector<C64> {
        &self.data * ket
    }

    /// ⟨ψ|M|ψ⟩
    pub fn expectation(&self, ket: &DVector<C64>) -> C64 {
        (ket.adjoint() * &self.data * ket)[(0, 0)]
    }

    /// Eigendecomposition of the Hermitian part, eigenvalues descending.
    pub fn eigh(&self) -> SpectralDecomposition {
        let herm = (&self.data + self.data.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let n = self.dim();
        let eigenvectors =
            DMatrix::from_fn(n, order.len(), |i, c| eig.eigenvectors[(i, order[c])]);
        SpectralDecomposition { eigenvalues, eigenvectors }
    }

    /// Lifts an operator acting on `sites` (in the listed order) of a system
    /// with subsystem dimensions `dims` to the full space.
    pub fn embed(&self, sites: &[usize], dims: &[usize]) -> Result<Self> {
        for (k, &s) in sites.iter().enumerate() {
            if s >= dims.len() || sites[..k].contains(&s) {
                return Err(Error::DimensionMismatch(format!(
                    "invalid site list {sites:?} for {} subsystems",
                    dims.len()
                )));
            }
        }
        let local: usize = sites.iter().map(|&s| dims[s]).product();
        if local != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator of dimension {} cannot act on sites {sites:?} of {dims:?}",
                self.dim()
            )));
        }
        let total: usize = dims.iter().product();
        let rest: Vec<usize> = (0..dims.len()).filter(|s| !sites.contains(s)).collect();
        let mut data = DMatrix::zeros(total, total);
        let digit_cache: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
        for i in 0..total {
            let di = &digit_cache[i];
            let li = sub_index(di, sites, dims);
            for j in 0..total {
                let dj = &digit_cache[j];
                if rest.iter().all(|&r| di[r] == dj[r]) {
                    data[(i, j)] = self.data[(li, sub_index(dj, sites, dims))];
                }
            }
        }
        Self::new(data, dims.to_vec())
    }

    /// Traces out every subsystem not listed in `keep` (strictly increasing).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let dims = self.require_dims()?;
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return Err(Error::DimensionMismatch(format!(
                "keep list {keep:?} invalid for {} subsystems",
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|s| !keep.contains(s)).collect();
        let out_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
        let out_dim: usize = out_dims.iter().product();
        let mut out = DMatrix::zeros(out_dim, out_dim);
        let total = self.dim();
        let digit_cache: Vec<Vec<usize>> = (0..total).map(|i| digits(i, dims)).collect();
        for i in 0..total {
            let di = &digit_cache[i];
            let oi = sub_index(di, keep, dims);
            for j in 0..total {
                let dj = &digit_cache[j];
                if traced.iter().all(|&t| di[t] == dj[t]) {
                    out[(oi, sub_index(dj, keep, dims))] += self.data[(i, j)];
                }
            }
        }
        Self::new(out, out_dims)
    }

    /// Transposes the indices of one subsystem.
    pub fn partial_transpose(&self, site: usize) -> Result<Self> {
        let dims = self.require_dims()?;
        if site >= dims.len() {
            return Err(Error::DimensionMismatch(format!("no subsystem {site}")));
        }
        let total = self.dim();
        let mut out = DMatrix::zeros(total, total);
        for i in 0..total {
            let mut di = digits(i, dims);
            for j in 0..total {
                let mut dj = digits(j, dims);
                std::mem::swap(&mut di[site], &mut dj[site]);
                out[(compose(&di, dims), compose(&dj, dims))] = self.data[(i, j)];
                std::mem::swap(&mut di[site], &mut dj[site]);
            }
        }
        Self::new(out, dims.to_vec())
    }

    /// Removes coherences of subsystem `site` in the basis given by the
    /// columns of `basis`: ρ ↦ Σ_k P_k ρ P_k.
    pub fn dephase(&self, site: usize, basis: &DMatrix<C64>) -> Result<Self> {
        let dims = self.require_dims()?.to_vec();
        if site >= dims.len() || basis.nrows() != dims[site] || !basis.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "basis of size {}x{} does not fit subsystem {site} of {dims:?}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        let gram = basis.adjoint() * basis;
        let deviation = (gram - DMatrix::<C64>::identity(basis.nrows(), basis.ncols()))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > ORTHONORMAL_TOL {
            return Err(Error::NonOrthonormalBasis(deviation));
        }
        let mut out = DMatrix::zeros(self.dim(), self.dim());
        for k in 0..basis.ncols() {
            let v = basis.column(k).into_owned();
            let local = ComplexMatrix::plain(&v * v.adjoint());
            let p = local.embed(&[site], &dims)?;
            out += &p.data * &self.data * &p.data;
        }
        Self::new(out, dims)
    }

    fn require_dims(&self) -> Result<&[usize]> {
        if self.dims.is_empty() {
            Err(Error::MalformedState("matrix carries no subsystem dimensions".into()))
        } else {
            Ok(&self.dims)
        }
    }

    fn effective_dims(&self) -> Vec<usize> {
        if self.dims.is_empty() {
            vec![self.dim()]
        } else {
            self.dims.clone()
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }

    fn merged_dims(&self, other: &Self) -> Vec<usize> {
        if self.dims.is_empty() {
            other.dims.clone()
        } else {
            self.dims.clone()
        }
    }
}

/// Mixed-radix digits of a basis index, subsystem 0 most significant.
pub(crate) fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

pub(crate) fn compose(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d)
}

fn sub_index(digits: &[usize], sites: &[usize], dims: &[usize]) -> usize {
    sites.iter().fold(0, |acc, &s| acc * dims[s] + digits[s])
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix { data: &self.data * &rhs.data, dims: self.merged_dims(rhs) }
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sum");
        ComplexMatrix { data: &self.data + &rhs.data, dims: self.merged_dims(rhs) }
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in difference");
        ComplexMatrix { data: &self.data - &rhs.data, dims: self.merged_dims(rhs) }
    }
}

/// Serialized as `{"dims": [...], "entries": [[[re, im], ...], ...]}`.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| {
                        let z = self.data[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        let mut st = serializer.serialize_struct("ComplexMatrix", 2)?;
        st.serialize_field("dims", &self.dims)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            self.eigenvalues.len(),
            self.eigenvalues.iter().map(|&v| C64::new(v, 0.0)),
        ));
        &self.eigenvectors * diag * self.eigenvectors.adjoint()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Orthogonal projector onto the eigenspace with eigenvalues within `tol` of `value`.
    pub fn eigenspace_projector(&self, value: f64, tol: f64) -> DMatrix<C64> {
        let n = self.eigenvectors.nrows();
        let mut p = DMatrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            if (lambda - value).abs() <= tol {
                let v = self.eigenvectors.column(k);
                p += &v * v.adjoint();
            }
        }
        p
    }
}

/// The two parties. Alice holds subsystem 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Party {
    A,
    B,
}

impl Party {
    pub fn index(self) -> usize {
        match self {
            Party::A => 0,
            Party::B => 1,
        }
    }
}

/// A valid density matrix on `d_A ⊗ d_B`, optionally remembering the ket
/// it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    matrix: ComplexMatrix,
    ket: Option<DVector<C64>>,
}

impl BipartiteState {
    /// Normalizes `ket` and builds |ψ⟩⟨ψ|.
    pub fn from_ket(ket: DVector<C64>, dims: [usize; 2]) -> Result<Self> {
        if ket.len() != dims[0] * dims[1] {
            return Err(Error::MalformedState(format!(
                "ket of length {} does not match dims {dims:?}",
                ket.len()
            )));
        }
        let norm = ket.norm();
        if norm <= 1e-15 || !norm.is_finite() {
            return Err(Error::NotAState("zero ket".into()));
        }
        let ket = ket.unscale(norm);
        let matrix = ComplexMatrix::projector(&ket, &dims)?;
        Ok(Self { matrix, ket: Some(ket) })
    }

    pub fn from_real_ket(amplitudes: &[f64], dims: [usize; 2]) -> Result<Self> {
        Self::from_ket(real_ket(amplitudes), dims)
    }

    /// Validates trace, Hermiticity and positivity.
    pub fn from_density(matrix: ComplexMatrix) -> Result<Self> {
        if matrix.dims().len() != 2 {
            return Err(Error::MalformedState(format!(
                "expected two subsystems, got dims {:?}",
                matrix.dims()
            )));
        }
        let herm = matrix.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotAState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        let min = matrix.eigh().min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix, ket: None })
    }

    /// (|01⟩ − |10⟩)/√2
    pub fn singlet() -> Self {
        Self::from_real_ket(&[0.0, 1.0, -1.0, 0.0], [2, 2]).expect("valid ket")
    }

    /// (|01⟩ + |10⟩)/√2
    pub fn psi_plus() -> Self {
        Self::from_real_ket(&[0.0, 1.0, 1.0, 0.0], [2, 2]).expect("valid ket")
    }

    /// (|00⟩ + |11⟩)/√2
    pub fn phi_plus() -> Self {
        Self::from_real_ket(&[1.0, 0.0, 0.0, 1.0], [2, 2]).expect("valid ket")
    }

    /// (|00⟩ − |11⟩)/√2
    pub fn phi_minus() -> Self {
        Self::from_real_ket(&[1.0, 0.0, 0.0, -1.0], [2, 2]).expect("valid ket")
    }

    pub fn product00() -> Self {
        Self::from_real_ket(&[1.0, 0.0, 0.0, 0.0], [2, 2]).expect("valid ket")
    }

    pub fn maximally_mixed(dims: [usize; 2]) -> Self {
        let d = dims[0] * dims[1];
        let matrix = ComplexMatrix::identity(&dims).scale(C64::new(1.0 / d as f64, 0.0));
        Self { matrix, ket: None }
    }

    /// a|00⟩ + b|11⟩ with a² = `a2`, b = √(1 − a²).
    pub fn schmidt_a2(a2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a2) {
            return Err(Error::InvalidArgument(format!("a2 = {a2} outside [0, 1]")));
        }
        Self::from_real_ket(&[a2.sqrt(), 0.0, 0.0, (1.0 - a2).sqrt()], [2, 2])
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.matrix.dims()[0], self.matrix.dims()[1]]
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn ket(&self) -> Option<&DVector<C64>> {
        self.ket.as_ref()
    }

    pub fn is_pure(&self) -> bool {
        if self.ket.is_some() {
            return true;
        }
        let purity = (&self.matrix * &self.matrix).trace().re;
        (purity - 1.0).abs() <= PSD_TOL
    }

    /// The stored ket, or the dominant eigenvector of a rank-one density matrix.
    pub fn pure_ket(&self) -> Option<DVector<C64>> {
        if let Some(k) = &self.ket {
            return Some(k.clone());
        }
        if !self.is_pure() {
            return None;
        }
        Some(self.matrix.eigh().eigenvectors.column(0).into_owned())
    }

    pub fn reduced(&self, keep: Party) -> ComplexMatrix {
        self.matrix.partial_trace(&[keep.index()]).expect("bipartite dims are always present")
    }
}

/// Builds a complex vector from real amplitudes.
pub fn real_ket(amplitudes: &[f64]) -> DVector<C64> {
    DVector::from_iterator(amplitudes.len(), amplitudes.iter().map(|&a| C64::new(a, 0.0)))
}

/// Computational basis vector |index⟩ of dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> DVector<C64> {
    let mut v = DVector::zeros(dim);
    v[index] = C64::new(1.0, 0.0);
    v
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.tensor(b)
}

pub fn partial_trace(state: &BipartiteState, keep: Party) -> ComplexMatrix {
    state.reduced(keep)
}

pub fn partial_transpose(state: &BipartiteState, side: Party) -> ComplexMatrix {
    state.matrix.partial_transpose(side.index()).expect("bipartite dims are always present")
}

/// Shannon entropy in bits of a list of eigenvalues, clipping noise above −[`PSD_TOL`].
pub fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        if v < -PSD_TOL {
            return Err(Error::NotAState(format!("negative eigenvalue {v:e}")));
        }
        let p = v.clamp(0.0, 1.0);
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}

/// S(ρ) = −Tr ρ log₂ ρ
pub fn von_neumann_entropy(m: &ComplexMatrix) -> Result<f64> {
    let herm = m.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Err(Error::NotAState(format!("not Hermitian (deviation {herm:e})")));
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
        return Err(Error::NotAState(format!("trace is {tr}")));
    }
    entropy_of_spectrum(&m.eigh().eigenvalues)
}

/// H(p) = −Σ p log₂ p
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&neg) = p.iter().find(|&&x| x < 0.0) {
        return Err(Error::NegativeProbability(neg));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum())
}

/// Binary entropy h(p) in bits.
pub fn binary_entropy(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Schmidt decomposition Σ_k λ_k |u_k⟩|v_k⟩ of a bipartite ket.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    /// Nonincreasing, nonnegative.
    pub coefficients: Vec<f64>,
    /// Alice's vectors as columns.
    pub left: DMatrix<C64>,
    /// Bob's vectors as columns.
    pub right: DMatrix<C64>,
    pub rank: usize,
}

/// Thin SVD m = u · diag(values) · vᴴ.
///
/// nalgebra's complex SVD occasionally returns a wrong spectrum for exactly
/// rank-one inputs (σ ≈ 1.06 for a unit-norm matrix), so this goes through faer.
pub struct ThinSvd {
    pub u: DMatrix<C64>,
    pub values: Vec<f64>,
    pub v: DMatrix<C64>,
}

pub fn thin_svd(m: &DMatrix<C64>) -> ThinSvd {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return ThinSvd { u: DMatrix::zeros(r, 0), values: vec![], v: DMatrix::zeros(c, 0) };
    }
    let a = faer::Mat::<C64>::from_fn(r, c, |i, j| m[(i, j)]);
    let svd = a.thin_svd().expect("svd of a finite matrix converges");
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let s = s.column_vector();
    ThinSvd {
        u: DMatrix::from_fn(r, k, |i, j| u[(i, j)]),
        values: (0..k).map(|j| s[j].re).collect(),
        v: DMatrix::from_fn(c, k, |i, j| v[(i, j)]),
    }
}

pub const SCHMIDT_CUTOFF: f64 = 1e-10;

impl SchmidtForm {
    pub fn reconstruct(&self) -> DVector<C64> {
        let da = self.left.nrows();
        let db = self.right.nrows();
        let mut ket = DVector::zeros(da * db);
        for (k, &c) in self.coefficients.iter().enumerate() {
            for i in 0..da {
                for j in 0..db {
                    ket[i * db + j] += self.left[(i, k)] * self.right[(j, k)] * c;
                }
            }
        }
        ket
    }

    pub fn squared(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }

    /// Entanglement entropy in bits.
    pub fn entropy(&self) -> f64 {
        let sq = self.squared();
        let total: f64 = sq.iter().sum();
        sq.iter().filter(|&&x| x > 0.0).map(|&x| x / total).map(|x| -x * x.log2()).sum()
    }
}

pub fn schmidt(ket: &DVector<C64>, dims: [usize; 2]) -> Result<SchmidtForm> {
    let [da, db] = dims;
    if ket.len() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "ket of length {} vs dims {dims:?}",
            ket.len()
        )));
    }
    let coeff = DMatrix::from_fn(da, db, |i, j| ket[i * db + j]);
    let svd = thin_svd(&coeff);
    let mut order: Vec<usize> = (0..svd.values.len()).collect();
    order.sort_by(|&a, &b| svd.values[b].total_cmp(&svd.values[a]));
    let coefficients: Vec<f64> = order.iter().map(|&k| svd.values[k]).collect();
    let left = DMatrix::from_fn(da, order.len(), |i, c| svd.u[(i, order[c])]);
    let right = DMatrix::from_fn(db, order.len(), |j, c| svd.v[(j, order[c])].conj());
    let rank = coefficients.iter().filter(|&&c| c > SCHMIDT_CUTOFF).count();
    Ok(SchmidtForm { coefficients, left, right, rank })
}

/// Sum of |negative eigenvalues| of the partial transpose on Bob.
pub fn negativity(state: &BipartiteState) -> f64 {
    negativity_of(state.matrix()).expect("bipartite dims are always present")
}

/// Negativity of any matrix with two subsystems (need not be normalized).
pub fn negativity_of(m: &ComplexMatrix) -> Result<f64> {
    if m.dims().len() != 2 {
        return Err(Error::MalformedState("negativity needs two subsystems".into()));
    }
    let pt = m.partial_transpose(1)?;
    Ok(pt.eigh().eigenvalues.iter().filter(|&&v| v < 0.0).map(|v| -v).sum())
}

pub fn dephase(m: &ComplexMatrix, site: usize, basis: &DMatrix<C64>) -> Result<ComplexMatrix> {
    m.dephase(site, basis)
}

/// Amplitudes as `[re, im]` pairs, the serialized form of a ket.
pub fn ket_pairs(ket: &DVector<C64>) -> Vec<[f64; 2]> {
    ket.iter().map(|z| [z.re, z.im]).collect()
}

/// Re⟨ψ|ρ|ψ⟩ clipped to [0, 1].
pub fn fidelity_pure(ket: &DVector<C64>, m: &ComplexMatrix) -> f64 {
    m.expectation(ket).re.clamp(0.0, 1.0)
}
