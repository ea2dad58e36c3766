//! Orbital bases parameterized by Givens angles.
//!
//! A [`GivensVector`] holds one angle per spatial pair `p < q` in
//! lexicographic order. The rotation is `R = G(0,1) G(0,2) ... G(m-2,m-1)`
//! with `G_pp = G_qq = cos`, `G_pq = -sin`, `G_qp = sin`, and the transformed
//! orbitals are `phi'_p = sum_a R_pa phi_a` for both spins.

use nalgebra::DMatrix;
use ndarray::{Array2, Array4};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fermion::{apply_word, Ladder};
use crate::integrals::SpinOrbitalIntegrals;
use crate::linalg::{c64, check_dense, hermitian_eigen_matrix, spectral_function, DenseOperator};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GivensVector {
    #[serde(skip)]
    n_spatial: usize,
    angles: Vec<f64>,
}

/// Spatial pairs `p < q` in lexicographic order.
pub fn pairs(n_spatial: usize) -> Vec<(usize, usize)> {
    (0..n_spatial)
        .flat_map(|p| (p + 1..n_spatial).map(move |q| (p, q)))
        .collect()
}

pub fn pair_count(n_spatial: usize) -> usize {
    n_spatial * n_spatial.saturating_sub(1) / 2
}

impl GivensVector {
    pub fn new(n_spatial: usize, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != pair_count(n_spatial) {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n_spatial),
                found: angles.len(),
            });
        }
        Ok(Self { n_spatial, angles })
    }

    pub fn zeros(n_spatial: usize) -> Self {
        Self {
            n_spatial,
            angles: vec![0.0; pair_count(n_spatial)],
        }
    }

    /// All angles zero except the one for `pair`.
    pub fn single(n_spatial: usize, pair: (usize, usize), angle: f64) -> Result<Self> {
        let slot = pairs(n_spatial)
            .iter()
            .position(|&p| p == pair)
            .ok_or_else(|| {
                Error::Config(format!(
                    "no orbital pair {pair:?} among {n_spatial} orbitals"
                ))
            })?;
        let mut v = Self::zeros(n_spatial);
        v.angles[slot] = angle;
        Ok(v)
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spatial
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_zero(&self) -> bool {
        self.angles.iter().all(|&a| a == 0.0)
    }
}

pub fn rotation_matrix(theta: &GivensVector) -> Array2<f64> {
    let m = theta.n_spatial;
    let mut r = Array2::<f64>::eye(m);
    for (&(p, q), &angle) in pairs(m).iter().zip(&theta.angles) {
        if angle == 0.0 {
            continue;
        }
        let (s, c) = angle.sin_cos();
        // r <- r * G(p, q) mixes columns p and q.
        for i in 0..m {
            let (a, b) = (r[[i, p]], r[[i, q]]);
            r[[i, p]] = c * a + s * b;
            r[[i, q]] = -s * a + c * b;
        }
    }
    r
}

/// Spin-orbital rotation: the spatial rotation on each spin block.
pub fn spin_rotation_matrix(theta: &GivensVector) -> Array2<f64> {
    let r = rotation_matrix(theta);
    let m = theta.n_spatial;
    let mut out = Array2::zeros((2 * m, 2 * m));
    for p in 0..m {
        for a in 0..m {
            for sigma in 0..2 {
                out[[2 * p + sigma, 2 * a + sigma]] = r[[p, a]];
            }
        }
    }
    out
}

/// `h1' = R h1 R^T`, `h2'_pqrs = sum R_pa R_qb R_rc R_sd h2_abcd`.
pub fn transform_integrals(
    ints: &SpinOrbitalIntegrals,
    theta: &GivensVector,
) -> Result<SpinOrbitalIntegrals> {
    if 2 * theta.n_spatial != ints.n_spin {
        return Err(Error::DimensionMismatch {
            expected: ints.n_spin,
            found: 2 * theta.n_spatial,
        });
    }
    if theta.is_zero() {
        return Ok(ints.clone());
    }
    let r = spin_rotation_matrix(theta);
    let h1 = r.dot(&ints.h1).dot(&r.t());
    let mut h2 = ints.h2.clone();
    for axis in 0..4 {
        h2 = contract_axis(&h2, &r, axis);
    }
    Ok(SpinOrbitalIntegrals {
        n_spin: ints.n_spin,
        h1,
        h2,
        core_energy: ints.core_energy,
    })
}

/// Replaces index `axis` of `t` by `sum_a r[new, a] t[.., a, ..]`.
fn contract_axis(t: &Array4<f64>, r: &Array2<f64>, axis: usize) -> Array4<f64> {
    let n = r.nrows();
    let mut out = Array4::<f64>::zeros(t.raw_dim());
    for ((i, j, k, l), v) in out.indexed_iter_mut() {
        let idx = [i, j, k, l];
        let mut acc = 0.0;
        for a in 0..n {
            let coeff = r[[idx[axis], a]];
            if coeff == 0.0 {
                continue;
            }
            let mut src = idx;
            src[axis] = a;
            acc += coeff * t[src];
        }
        *v = acc;
    }
    out
}

/// Fock-space unitary `U` with `U mat(H) U^dagger = mat(H')` for the
/// Hamiltonian rebuilt from [`transform_integrals`]. Built as
/// `prod_pairs exp(K_pq)` in pair order with
/// `K_pq = theta_pq sum_sigma (a+_q a_p - a+_p a_q)`.
pub fn rotation_unitary_fock(theta: &GivensVector, n_spin: usize) -> Result<DenseOperator> {
    check_dense(n_spin, "orbital rotation unitary")?;
    if 2 * theta.n_spatial != n_spin {
        return Err(Error::DimensionMismatch {
            expected: n_spin,
            found: 2 * theta.n_spatial,
        });
    }
    let dim = 1usize << n_spin;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    // Factors are applied right to left, so walk the pairs backwards.
    for (&(p, q), &angle) in pairs(theta.n_spatial).iter().zip(&theta.angles).rev() {
        if angle == 0.0 {
            continue;
        }
        let generator = pair_generator(p, q, angle, n_spin);
        // exp(K) = exp(-i (iK)) with iK hermitian.
        let eig = hermitian_eigen_matrix(&(generator * Complex64::new(0.0, 1.0)));
        let factor = spectral_function(&eig, |e| Complex64::from_polar(1.0, -e));
        u = factor.left_mul(&u);
    }
    Ok(DenseOperator::assume_unitary(u))
}

fn pair_generator(p: usize, q: usize, angle: f64, n_spin: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n_spin;
    let mut k = DMatrix::<Complex64>::zeros(dim, dim);
    for sigma in 0..2 {
        let (a, b) = (2 * p + sigma, 2 * q + sigma);
        let terms = [
            (angle, [Ladder::create(b), Ladder::annihilate(a)]),
            (-angle, [Ladder::create(a), Ladder::annihilate(b)]),
        ];
        for (coeff, word) in terms {
            for y in 0..dim {
                if let Some((target, sign)) = apply_word(&word, y as u64) {
                    k[(target as usize, y)] += c64(coeff * sign);
                }
            }
        }
    }
    k
}

/// Uniform angles in `[0, 2 pi)` from `rng`.
pub fn random_basis_from(rng: &mut impl Rng, n_spatial: usize) -> GivensVector {
    let angles = (0..pair_count(n_spatial))
        .map(|_| rng.gen::<f64>() * std::f64::consts::TAU)
        .collect();
    GivensVector { n_spatial, angles }
}

/// ChaCha20 seeded with `seed`, stream 0.
pub fn sample_random_basis(seed: u64, n_spatial: usize) -> GivensVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_basis_from(&mut rng, n_spatial)
}
