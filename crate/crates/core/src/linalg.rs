//! Dense complex linear algebra on Fock space.
//!
//! Operators that conserve particle number and spin are block diagonal in the
//! occupation basis. Eigensolvers first split a matrix into the connected
//! components of its sparsity graph and diagonalize each block separately.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spin-orbital count for full-matrix operations.
pub const DENSE_LIMIT: usize = 12;
/// Largest spin-orbital count for statevector-only paths.
pub const STATEVECTOR_LIMIT: usize = 20;

pub const FLAG_TOL: f64 = 1e-10;
pub const BRANCH_CUT_TOL: f64 = 1e-8;
/// Dimensions up to this are checked for unitarity exactly; above it with
/// random probes.
const EXACT_CHECK_DIM: usize = 512;

pub fn check_dense(n_qubits: usize, what: &'static str) -> Result<()> {
    if n_qubits > DENSE_LIMIT {
        return Err(Error::DimensionOverflow {
            n_qubits,
            limit: DENSE_LIMIT,
            what,
        });
    }
    Ok(())
}

pub fn check_statevector(n_qubits: usize, what: &'static str) -> Result<()> {
    if n_qubits > STATEVECTOR_LIMIT {
        return Err(Error::DimensionOverflow {
            n_qubits,
            limit: STATEVECTOR_LIMIT,
            what,
        });
    }
    Ok(())
}

pub fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Largest modulus among `values`.
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Complex64>) -> f64 {
    values.into_iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    General,
    Hermitian,
    Unitary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
    kind: OperatorKind,
}

impl DenseOperator {
    pub fn general(matrix: DMatrix<Complex64>) -> Self {
        Self {
            matrix,
            kind: OperatorKind::General,
        }
    }

    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        let deviation = hermitian_deviation(&matrix);
        if deviation > FLAG_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self {
            matrix,
            kind: OperatorKind::Hermitian,
        })
    }

    pub fn unitary(matrix: DMatrix<Complex64>) -> Result<Self> {
        let deviation = unitary_deviation(&matrix);
        if deviation > FLAG_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self {
            matrix,
            kind: OperatorKind::Unitary,
        })
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self {
            matrix: DMatrix::identity(dim, dim),
            kind: OperatorKind::Unitary,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn is_hermitian(&self) -> bool {
        self.kind == OperatorKind::Hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.kind == OperatorKind::Unitary
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector {
            amplitudes: &self.matrix * &psi.amplitudes,
        }
    }

    /// Product `self * rhs`; unitary when both factors are.
    pub fn compose(&self, rhs: &DenseOperator) -> DenseOperator {
        let kind = if self.is_unitary() && rhs.is_unitary() {
            OperatorKind::Unitary
        } else {
            OperatorKind::General
        };
        DenseOperator {
            matrix: &self.matrix * &rhs.matrix,
            kind,
        }
    }

    pub fn adjoint(&self) -> DenseOperator {
        DenseOperator {
            matrix: self.matrix.adjoint(),
            kind: self.kind,
        }
    }

    /// Trusts the caller that the product of unitaries stayed unitary.
    pub(crate) fn assume_unitary(matrix: DMatrix<Complex64>) -> Self {
        Self {
            matrix,
            kind: OperatorKind::Unitary,
        }
    }

    pub(crate) fn assume_hermitian(matrix: DMatrix<Complex64>) -> Self {
        Self {
            matrix,
            kind: OperatorKind::Hermitian,
        }
    }
}

pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn unitary_deviation(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    if n != m.ncols() {
        return f64::INFINITY;
    }
    if n <= EXACT_CHECK_DIM {
        let gram = m.adjoint() * m;
        return max_abs(&(gram - DMatrix::<Complex64>::identity(n, n)));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..4 {
        let v = DVector::from_fn(n, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let v = &v / c64(v.norm());
        let back = m.ad_mul(&(m * &v));
        worst = worst.max(max_abs(&(back - v)));
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: DVector<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::Config(format!(
                "state length {} is not a power of two",
                amplitudes.len()
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = DVector::zeros(1 << n_qubits);
        amplitudes[index] = c64(1.0);
        Self { amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.amplitudes.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Index sets of the connected components of `|m_ij| > 1e-14 max|m|`,
/// each sorted, ordered by smallest member.
pub fn block_partition(m: &DMatrix<Complex64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let cutoff = 1e-14 * max_abs(m).max(f64::MIN_POSITIVE);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && m[(i, j)].norm() > cutoff {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[root]].push(i);
    }
    blocks
}

pub fn submatrix(m: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Eigenpairs of one diagonal block, values ascending.
#[derive(Debug, Clone)]
pub struct BlockEigen {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Columns are eigenvectors in block-local coordinates.
    pub vectors: DMatrix<Complex64>,
}

impl BlockEigen {
    pub fn embed(&self, k: usize, dim: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(dim);
        for (local, &global) in self.indices.iter().enumerate() {
            v[global] = self.vectors[(local, k)];
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub dim: usize,
    pub blocks: Vec<BlockEigen>,
}

impl Eigensystem {
    pub fn values_sorted(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_value(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.values[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| *b.values.last().unwrap())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// All eigenpairs as `(energy, full vector)`.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, DVector<Complex64>)> + '_ {
        self.blocks.iter().flat_map(move |b| {
            (0..b.values.len()).map(move |k| (b.values[k], b.embed(k, self.dim)))
        })
    }
}

pub fn hermitian_eigen(h: &DenseOperator) -> Result<Eigensystem> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian {
            deviation: hermitian_deviation(h.matrix()),
        });
    }
    Ok(hermitian_eigen_matrix(h.matrix()))
}

pub(crate) fn hermitian_eigen_matrix(m: &DMatrix<Complex64>) -> Eigensystem {
    let blocks = block_partition(m)
        .into_iter()
        .map(|indices| {
            let sub = submatrix(m, &indices);
            let eig = sub.symmetric_eigen();
            let mut order: Vec<usize> = (0..indices.len()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
            let vectors = DMatrix::from_fn(indices.len(), indices.len(), |i, j| {
                eig.eigenvectors[(i, order[j])]
            });
            BlockEigen {
                indices,
                values,
                vectors,
            }
        })
        .collect();
    Eigensystem {
        dim: m.nrows(),
        blocks,
    }
}

/// Rotates `v` so that its largest-magnitude amplitude is real positive.
pub fn fix_phase(v: &mut DVector<Complex64>) {
    let mut best = 0;
    for (i, a) in v.iter().enumerate() {
        if a.norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    let a = v[best];
    if a.norm() > 0.0 {
        let rot = a.conj() / a.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

/// Lowest eigenpair. Ties between blocks go to the block holding the lowest
/// basis index.
pub fn ground_state(h: &DenseOperator) -> Result<(f64, StateVector)> {
    let eig = hermitian_eigen(h)?;
    ground_from_eigensystem(&eig)
}

pub fn ground_from_eigensystem(eig: &Eigensystem) -> Result<(f64, StateVector)> {
    let e0 = eig.min_value();
    let tol = 1e-12 * e0.abs().max(1.0);
    let block = eig
        .blocks
        .iter()
        .find(|b| b.values[0] <= e0 + tol)
        .expect("nonempty spectrum");
    let mut v = block.embed(0, eig.dim);
    v /= c64(v.norm());
    fix_phase(&mut v);
    Ok((e0, StateVector { amplitudes: v }))
}

/// `exp(-i h t)` via eigendecomposition.
pub fn exact_propagator(h: &DenseOperator, t: f64) -> Result<DenseOperator> {
    let eig = hermitian_eigen(h)?;
    Ok(DenseOperator::assume_unitary(
        spectral_function(&eig, |e| Complex64::from_polar(1.0, -e * t)).to_dense(),
    ))
}

/// Block-diagonal operator stored as dense blocks over index sets.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    pub dim: usize,
    pub blocks: Vec<(Vec<usize>, DMatrix<Complex64>)>,
}

impl BlockOperator {
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (indices, local) in &self.blocks {
            for (i, &gi) in indices.iter().enumerate() {
                for (j, &gj) in indices.iter().enumerate() {
                    out[(gi, gj)] = local[(i, j)];
                }
            }
        }
        out
    }

    /// `self * m` without forming `self` densely.
    pub fn left_mul(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(self.dim, m.ncols());
        for (indices, local) in &self.blocks {
            let rows = DMatrix::from_fn(indices.len(), m.ncols(), |i, j| m[(indices[i], j)]);
            let prod = local * rows;
            for (i, &gi) in indices.iter().enumerate() {
                out.row_mut(gi).copy_from(&prod.row(i));
            }
        }
        out
    }
}

/// `sum_k f(e_k) |v_k><v_k|`
pub fn spectral_function(eig: &Eigensystem, f: impl Fn(f64) -> Complex64) -> BlockOperator {
    let blocks = eig
        .blocks
        .iter()
        .map(|b| {
            let d = DMatrix::from_diagonal(&DVector::from_iterator(
                b.values.len(),
                b.values.iter().map(|&e| f(e)),
            ));
            (b.indices.clone(), &b.vectors * d * b.vectors.adjoint())
        })
        .collect();
    BlockOperator {
        dim: eig.dim,
        blocks,
    }
}

/// Eigenvalues and eigenvectors of one unitary block.
struct UnitaryBlock {
    indices: Vec<usize>,
    values: Vec<Complex64>,
    vectors: DMatrix<Complex64>,
}

fn unitary_blocks(u: &DMatrix<Complex64>) -> Vec<UnitaryBlock> {
    block_partition(u)
        .into_iter()
        .map(|indices| {
            let sub = submatrix(u, &indices);
            let n = indices.len();
            if n == 1 {
                return UnitaryBlock {
                    values: vec![sub[(0, 0)]],
                    vectors: DMatrix::identity(1, 1),
                    indices,
                };
            }
            // A normal matrix has a diagonal Schur form whose unitary factor
            // holds the eigenvectors.
            let (q, t) = sub.schur().unpack();
            let values = (0..n).map(|k| t[(k, k)]).collect();
            UnitaryBlock {
                indices,
                values,
                vectors: q,
            }
        })
        .collect()
}

fn quasi_energy(lambda: Complex64, t: f64) -> Result<f64> {
    let phase = lambda.arg();
    if phase.abs() > std::f64::consts::PI - BRANCH_CUT_TOL {
        return Err(Error::BranchCut { phase });
    }
    Ok(-phase / t)
}

fn require_unitary(u: &DenseOperator) -> Result<()> {
    if !u.is_unitary() {
        return Err(Error::NotUnitary {
            deviation: unitary_deviation(u.matrix()),
        });
    }
    Ok(())
}

/// `H_eff = i ln(u) / t`, principal branch.
pub fn effective_hamiltonian(u: &DenseOperator, t: f64) -> Result<DenseOperator> {
    require_unitary(u)?;
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let dim = u.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for b in unitary_blocks(u.matrix()) {
        let energies = b
            .values
            .iter()
            .map(|&l| quasi_energy(l, t).map(c64))
            .collect::<Result<Vec<_>>>()?;
        let d = DMatrix::from_diagonal(&DVector::from_vec(energies));
        let local = &b.vectors * d * b.vectors.adjoint();
        for (i, &gi) in b.indices.iter().enumerate() {
            for (j, &gj) in b.indices.iter().enumerate() {
                out[(gi, gj)] = local[(i, j)];
            }
        }
    }
    // Hermitize away rounding from the Schur factor.
    let sym = (&out + out.adjoint()) * c64(0.5);
    Ok(DenseOperator::assume_hermitian(sym))
}

/// Eigenvalues of the effective Hamiltonian, ascending, without forming it.
pub fn effective_spectrum(u: &DenseOperator, t: f64) -> Result<Vec<f64>> {
    require_unitary(u)?;
    if t <= 0.0 {
        return Err(Error::NonPositiveTime(t));
    }
    let mut energies = Vec::with_capacity(u.dim());
    for b in unitary_blocks(u.matrix()) {
        for l in b.values {
            energies.push(quasi_energy(l, t)?);
        }
    }
    energies.sort_by(f64::total_cmp);
    Ok(energies)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumWindow {
    pub e_min: f64,
    pub e_max: f64,
}

impl SpectrumWindow {
    pub fn new(e_min: f64, e_max: f64) -> Result<Self> {
        if e_max <= e_min {
            return Err(Error::DegenerateWindow(e_min));
        }
        Ok(Self { e_min, e_max })
    }

    pub fn width(&self) -> f64 {
        self.e_max - self.e_min
    }

    /// Maps an energy into normalized units.
    pub fn normalize(&self, e: f64) -> f64 {
        (e - self.e_max) / self.width()
    }

    /// Maps a normalized energy back to physical units.
    pub fn recover(&self, e: f64) -> f64 {
        e * self.width() + self.e_max
    }

    /// Normalized energy differences back to physical units.
    pub fn recover_difference(&self, de: f64) -> f64 {
        de * self.width()
    }
}

/// `H' = (H - e_max) / (e_max - e_min)`, spectrum in `[-1, 0]`.
pub fn normalize_spectrum(h: &DenseOperator) -> Result<(DenseOperator, SpectrumWindow)> {
    let eig = hermitian_eigen(h)?;
    let window = SpectrumWindow::new(eig.min_value(), eig.max_value())?;
    let dim = h.dim();
    let shifted = (h.matrix() - DMatrix::<Complex64>::identity(dim, dim) * c64(window.e_max))
        / c64(window.width());
    Ok((DenseOperator::assume_hermitian(shifted), window))
}

/// `0.95 pi / |e0|`
pub fn trotter_time_step(e0: f64) -> Result<f64> {
    if e0 == 0.0 || !e0.is_finite() {
        return Err(Error::ZeroEnergy);
    }
    Ok(0.95 * std::f64::consts::PI / e0.abs())
}

/// Largest `|eigenvalue|` of a hermitian matrix.
pub fn hermitian_spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    let eig = hermitian_eigen_matrix(m);
    eig.min_value().abs().max(eig.max_value().abs())
}

/// Largest singular value.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    let gram = m.adjoint() * m;
    let eig = hermitian_eigen_matrix(&gram);
    eig.max_value().max(0.0).sqrt()
}
