mod common;

use common::*;
use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use trotter_core::fermion::build_fermion_hamiltonian;
use trotter_core::linalg::{hermitian_eigen, DenseOperator};
use trotter_core::orbital::{
    pairs, random_basis_from, rotation_matrix, rotation_unitary_fock, sample_random_basis,
    spin_rotation_matrix, transform_integrals, GivensVector,
};

fn spectrum(ints: &trotter_core::integrals::SpinOrbitalIntegrals) -> Vec<f64> {
    let m = build_fermion_hamiltonian(ints, 0.0).to_matrix().unwrap();
    hermitian_eigen(&DenseOperator::hermitian(m).unwrap())
        .unwrap()
        .values_sorted()
}

#[test]
fn spectrum_is_basis_independent() {
    for name in ["h2_sto3g", "hf_631g_cas22", "random_3orb", "random_4orb"] {
        let ints = spin_ints(name);
        let reference = spectrum(&ints);
        for seed in 0..5 {
            let theta = sample_random_basis(seed, ints.n_spin / 2);
            let rotated = spectrum(&transform_integrals(&ints, &theta).unwrap());
            let dev = reference
                .iter()
                .zip(&rotated)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-10, "{name} seed {seed}: {dev:e}");
        }
    }
}

/// Givens factors multiplied out by hand, `G(0,1)` leftmost.
fn givens_product(theta: &GivensVector) -> Array2<f64> {
    let m = theta.n_spatial();
    let mut r = Array2::<f64>::eye(m);
    for (&(p, q), &a) in pairs(m).iter().zip(theta.angles()) {
        let mut g = Array2::<f64>::eye(m);
        g[[p, p]] = a.cos();
        g[[q, q]] = a.cos();
        g[[p, q]] = -a.sin();
        g[[q, p]] = a.sin();
        r = r.dot(&g);
    }
    r
}

#[test]
fn rotation_matrix_is_the_ordered_givens_product() {
    let theta = sample_random_basis(11, 4);
    let dev = (&rotation_matrix(&theta) - &givens_product(&theta))
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    assert!(dev < 1e-14);
    let r = rotation_matrix(&theta);
    let gram = r.t().dot(&r) - Array2::<f64>::eye(4);
    assert!(gram.iter().all(|v| v.abs() < 1e-14));
}

#[test]
fn fock_unitary_rotates_creation_operators() {
    let m = 3;
    let n = 2 * m;
    let theta = sample_random_basis(5, m);
    let u = rotation_unitary_fock(&theta, n).unwrap();
    let r = spin_rotation_matrix(&theta);
    for a in 0..n {
        let lhs = u.matrix() * annihilator(a, n).adjoint() * u.matrix().adjoint();
        let mut rhs = CMat::zeros(1 << n, 1 << n);
        for p in 0..n {
            rhs += annihilator(p, n).adjoint() * c(r[[p, a]]);
        }
        assert!(max_abs(&(lhs - rhs)) < 1e-12, "mode {a}");
    }
}

#[test]
fn fock_unitary_conjugates_the_hamiltonian() {
    for name in ["h2_sto3g", "random_3orb"] {
        let ints = spin_ints(name);
        let theta = sample_random_basis(2, ints.n_spin / 2);
        let h = build_fermion_hamiltonian(&ints, 0.0).to_matrix().unwrap();
        let rotated = build_fermion_hamiltonian(&transform_integrals(&ints, &theta).unwrap(), 0.0)
            .to_matrix()
            .unwrap();
        let u = rotation_unitary_fock(&theta, ints.n_spin).unwrap();
        let conj = u.matrix() * h * u.matrix().adjoint();
        assert!(max_abs(&(conj - rotated)) < 1e-12, "{name}");
    }
}

#[test]
fn random_angles_are_uniform() {
    // 20 bins, 19 degrees of freedom; 43.82 is the 0.999 quantile.
    const BINS: usize = 20;
    let mut counts = [0usize; BINS];
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let draws = 2000;
    for _ in 0..draws {
        for &a in random_basis_from(&mut rng, 4).angles() {
            assert!((0.0..std::f64::consts::TAU).contains(&a));
            counts[(a / std::f64::consts::TAU * BINS as f64) as usize] += 1;
        }
    }
    let total = (draws * 6) as f64;
    let expected = total / BINS as f64;
    let chi2: f64 = counts
        .iter()
        .map(|&k| (k as f64 - expected).powi(2) / expected)
        .sum();
    assert!(chi2 < 43.82, "chi2 = {chi2}");
}

#[test]
fn integrals_vary_continuously_with_angle() {
    let ints = spin_ints("random_3orb");
    let at =
        |a: f64| transform_integrals(&ints, &GivensVector::single(3, (0, 2), a).unwrap()).unwrap();
    let (x, y) = (at(0.7), at(0.7 + 1e-7));
    let d1 = (&x.h1 - &y.h1).iter().map(|v| v.abs()).fold(0.0, f64::max);
    let d2 = (&x.h2 - &y.h2).iter().map(|v| v.abs()).fold(0.0, f64::max);
    assert!(d1 < 1e-6 && d2 < 1e-6, "{d1:e} {d2:e}");
}
