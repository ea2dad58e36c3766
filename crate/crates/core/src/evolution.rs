//! Exact exponentials of single hermitian terms, applied in place.
//!
//! A term's qubit image `c0 + sum_j c_j P_j` with mutually commuting strings
//! exponentiates to a global phase times commuting rotations
//! `exp(-i c_j t P_j) = cos(c_j t) - i sin(c_j t) P_j`. Strings sharing an
//! X mask `x` act on the same pairs `(y, y ^ x)`, so each such group is one
//! 2x2 update per pair.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::{
    c64, check_dense, hermitian_eigen_matrix, spectral_function, DenseOperator, Eigensystem,
};
use crate::pauli::{PauliString, PauliSum};
use crate::terms::{Term, TermSequence};

/// Columns per matrix are processed in parallel from this dimension on.
const PARALLEL_DIM: usize = 64;

#[derive(Debug, Clone)]
struct MaskGroup {
    x: u64,
    strings: Vec<(PauliString, f64)>,
}

#[derive(Debug, Clone)]
enum KernelForm {
    Rotations(Vec<MaskGroup>),
    /// Non-commuting image; exponentiated through its eigensystem.
    Dense(Eigensystem),
}

/// Precomputed `exp(-i H_k t)` for one term and any `t`.
#[derive(Debug, Clone)]
pub struct TermKernel {
    n_qubits: usize,
    identity: f64,
    strings: Vec<(PauliString, f64)>,
    form: KernelForm,
}

impl TermKernel {
    pub fn new(term: &Term, n_qubits: usize) -> Self {
        Self::from_image(&term.pauli_image(n_qubits), n_qubits)
    }

    pub fn from_image(image: &PauliSum, n_qubits: usize) -> Self {
        let identity = image.identity_coefficient().re;
        let strings: Vec<(PauliString, f64)> = image
            .strings()
            .filter(|(s, _)| !s.is_identity())
            .map(|(s, c)| (s, c.re))
            .collect();
        let commuting = strings
            .iter()
            .enumerate()
            .all(|(i, (a, _))| strings[i + 1..].iter().all(|(b, _)| a.commutes_with(b)));
        let form = if commuting {
            let mut groups: Vec<MaskGroup> = Vec::new();
            for &(s, c) in &strings {
                match groups.iter_mut().find(|g| g.x == s.x) {
                    Some(g) => g.strings.push((s, c)),
                    None => groups.push(MaskGroup {
                        x: s.x,
                        strings: vec![(s, c)],
                    }),
                }
            }
            KernelForm::Rotations(groups)
        } else {
            log::warn!("term image has non-commuting strings; using dense exponential");
            let mut m = image
                .to_matrix()
                .map(|d| d.into_matrix())
                .unwrap_or_else(|_| DMatrix::zeros(0, 0));
            let dim = m.nrows();
            m -= DMatrix::<Complex64>::identity(dim, dim) * c64(identity);
            KernelForm::Dense(hermitian_eigen_matrix(&m))
        };
        Self {
            n_qubits,
            identity,
            strings,
            form,
        }
    }

    pub fn is_dense_fallback(&self) -> bool {
        matches!(self.form, KernelForm::Dense(_))
    }

    /// Per-pair 2x2 factors for one mask group at time `t`.
    fn pair_factors(group: &MaskGroup, t: f64, dim: usize) -> Vec<(usize, [Complex64; 4])> {
        let hb = 1u64 << (63 - group.x.leading_zeros());
        let trig: Vec<(f64, f64)> = group
            .strings
            .iter()
            .map(|(_, c)| (c * t).sin_cos())
            .collect();
        (0..dim as u64)
            .filter(|y| y & hb == 0)
            .map(|y| {
                let yp = y ^ group.x;
                // Row-major [m00, m01, m10, m11] on the basis (y, y').
                let mut m = [c64(1.0), c64(0.0), c64(0.0), c64(1.0)];
                for ((s, _), &(sin, cos)) in group.strings.iter().zip(&trig) {
                    let a = s.apply_basis(y).1; // P|y> = a|y'>
                    let b = s.apply_basis(yp).1; // P|y'> = b|y>
                    let f = [
                        c64(cos),
                        Complex64::new(0.0, -sin) * b,
                        Complex64::new(0.0, -sin) * a,
                        c64(cos),
                    ];
                    m = [
                        f[0] * m[0] + f[1] * m[2],
                        f[0] * m[1] + f[1] * m[3],
                        f[2] * m[0] + f[3] * m[2],
                        f[2] * m[1] + f[3] * m[3],
                    ];
                }
                (y as usize, m)
            })
            .collect()
    }

    fn diagonal_phases(group: &MaskGroup, t: f64, dim: usize) -> Vec<Complex64> {
        (0..dim as u64)
            .map(|y| {
                let angle: f64 = group
                    .strings
                    .iter()
                    .map(|(s, c)| {
                        if (s.z & y).count_ones() % 2 == 0 {
                            *c
                        } else {
                            -*c
                        }
                    })
                    .sum();
                Complex64::from_polar(1.0, -angle * t)
            })
            .collect()
    }

    /// Applies `exp(-i H_k t)` to every column of `m` (one column for a
    /// state vector).
    pub fn apply_columns(&self, t: f64, data: &mut [Complex64], dim: usize) {
        let global = Complex64::from_polar(1.0, -self.identity * t);
        match &self.form {
            KernelForm::Rotations(groups) => {
                for g in groups {
                    if g.x == 0 {
                        let phases = Self::diagonal_phases(g, t, dim);
                        for_each_column(data, dim, |col| {
                            col.iter_mut().zip(&phases).for_each(|(v, p)| *v *= p);
                        });
                    } else {
                        let factors = Self::pair_factors(g, t, dim);
                        let x = g.x as usize;
                        for_each_column(data, dim, |col| {
                            for (y, m) in &factors {
                                let (a, b) = (col[*y], col[y ^ x]);
                                col[*y] = m[0] * a + m[1] * b;
                                col[y ^ x] = m[2] * a + m[3] * b;
                            }
                        });
                    }
                }
            }
            KernelForm::Dense(eig) => {
                let op = spectral_function(eig, |e| Complex64::from_polar(1.0, -e * t));
                let ncols = data.len() / dim;
                let m = DMatrix::from_column_slice(dim, ncols, data);
                data.copy_from_slice(op.left_mul(&m).as_slice());
            }
        }
        if self.identity != 0.0 {
            data.iter_mut().for_each(|v| *v *= global);
        }
    }

    /// Adds `scale * H_k psi` into `out`.
    pub fn apply_generator(&self, psi: &[Complex64], out: &mut [Complex64], scale: Complex64) {
        if self.identity != 0.0 {
            let c = scale * self.identity;
            out.iter_mut().zip(psi).for_each(|(o, p)| *o += c * p);
        }
        for (s, coeff) in &self.strings {
            let c = scale * *coeff;
            for (y, amp) in psi.iter().enumerate() {
                let (target, a) = s.apply_basis(y as u64);
                out[target as usize] += c * a * amp;
            }
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }
}

fn for_each_column(data: &mut [Complex64], dim: usize, f: impl Fn(&mut [Complex64]) + Sync + Send) {
    if data.len() > dim && dim >= PARALLEL_DIM {
        data.par_chunks_mut(dim).for_each(&f);
    } else {
        data.chunks_mut(dim).for_each(f);
    }
}

/// `exp(-i H_k t)` as a dense unitary.
pub fn term_exponential(term: &Term, n_qubits: usize, t: f64) -> Result<DenseOperator> {
    check_dense(n_qubits, "term exponential")?;
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    TermKernel::new(term, n_qubits).apply_columns(t, m.as_mut_slice(), dim);
    DenseOperator::unitary(m)
}

/// Kernels for a whole sequence, reusable across steps.
#[derive(Debug, Clone)]
pub struct SequenceKernels {
    pub n_qubits: usize,
    pub constant: f64,
    pub kernels: Vec<TermKernel>,
}

impl SequenceKernels {
    pub fn new(seq: &TermSequence) -> Self {
        Self {
            n_qubits: seq.n_qubits,
            constant: seq.constant,
            kernels: seq
                .terms
                .iter()
                .map(|t| TermKernel::new(t, seq.n_qubits))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    /// One Trotter step on every column: first kernel first, then the
    /// constant's phase.
    pub fn step_columns(&self, t: f64, data: &mut [Complex64]) {
        let dim = self.dim();
        for k in &self.kernels {
            k.apply_columns(t, data, dim);
        }
        if self.constant != 0.0 {
            let phase = Complex64::from_polar(1.0, -self.constant * t);
            data.iter_mut().for_each(|v| *v *= phase);
        }
    }

    /// `H psi`, constant included.
    pub fn apply_hamiltonian(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = psi.iter().map(|p| p * self.constant).collect();
        for k in &self.kernels {
            k.apply_generator(psi, &mut out, c64(1.0));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::{FermionTerm, TermKind};
    use crate::linalg::max_abs;

    #[test]
    fn z_rotation() {
        let term = Term::Pauli {
            string: PauliString::single(0, 'Z'),
            weight: 1.0,
        };
        let u = term_exponential(&term, 1, 0.4).unwrap();
        assert!((u.matrix()[(0, 0)] - Complex64::from_polar(1.0, -0.4)).norm() < 1e-15);
        assert!((u.matrix()[(1, 1)] - Complex64::from_polar(1.0, 0.4)).norm() < 1e-15);
        assert_eq!(u.matrix()[(0, 1)], c64(0.0));
    }

    #[test]
    fn zero_time_is_identity() {
        let term = Term::Fermion(FermionTerm {
            weight: 0.9,
            kind: TermKind::DoubleHopping,
            indices: vec![0, 1, 2, 3],
        });
        let u = term_exponential(&term, 4, 0.0).unwrap();
        assert!(max_abs(&(u.matrix() - DMatrix::identity(16, 16))) < 1e-15);
    }

    #[test]
    fn hopping_rotates_single_particle() {
        let term = Term::Fermion(FermionTerm {
            weight: 1.0,
            kind: TermKind::Hopping,
            indices: vec![0, 1],
        });
        let t = 0.3;
        let u = term_exponential(&term, 2, t).unwrap();
        // On span{|01>, |10>} the hopping is sigma_x.
        assert!((u.matrix()[(1, 1)] - c64(t.cos())).norm() < 1e-15);
        assert!((u.matrix()[(2, 1)] - Complex64::new(0.0, -t.sin())).norm() < 1e-15);
        assert!((u.matrix()[(3, 3)] - c64(1.0)).norm() < 1e-15);
    }

    #[test]
    fn non_commuting_image_falls_back() {
        let mut image = PauliSum::new(1);
        image.add_string(PauliString::single(0, 'X'), c64(0.3));
        image.add_string(PauliString::single(0, 'Z'), c64(0.4));
        let kernel = TermKernel::from_image(&image, 1);
        assert!(kernel.is_dense_fallback());
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        kernel.apply_columns(2.0, m.as_mut_slice(), 2);
        // exp(-i t (0.3 X + 0.4 Z)) = cos(0.5 t) - i sin(0.5 t) (0.6 X + 0.8 Z)
        let (s, c) = 1.0f64.sin_cos();
        assert!((m[(0, 0)] - Complex64::new(c, -0.8 * s)).norm() < 1e-14);
        assert!((m[(1, 0)] - Complex64::new(0.0, -0.6 * s)).norm() < 1e-14);
    }
}
