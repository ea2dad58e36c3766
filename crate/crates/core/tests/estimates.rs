mod common;

use common::*;
use num_complex::Complex64;

use trotter_core::linalg::{effective_hamiltonian, exact_propagator};
use trotter_core::metrics::*;
use trotter_core::orbital::GivensVector;
use trotter_core::ordering::OrderingSpec;
use trotter_core::pauli::{PauliString, PauliSum};
use trotter_core::propagators::trotter_propagator;
use trotter_core::terms::{Representation, TermSequence};

/// `exp(-i m t)` for hermitian `m` through a plain dense eigensolve.
fn expm(m: &CMat, t: f64) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let d = CMat::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

fn dense_v1(h: &[CMat]) -> CMat {
    let dim = h[0].nrows();
    let mut v1 = CMat::zeros(dim, dim);
    for a in 0..h.len() {
        for b in a + 1..h.len() {
            v1 += comm(&h[b], &h[a]);
        }
    }
    v1 * Complex64::new(0.0, -0.5)
}

#[test]
fn v2_matches_dense_construction() {
    for (k, seq) in toys().iter().enumerate() {
        let psi = ground(seq);
        let dense = dense_v2(&term_matrices(seq));
        let expected = psi.amplitudes.dotc(&(&dense * &psi.amplitudes));
        assert!(expected.im.abs() < 1e-12);
        let cached = v2_expectation(seq, &psi);
        let recomputed = v2_expectation_with_budget(seq, &psi, 0);
        assert!(
            (cached - expected.re).abs() < 1e-12,
            "toy {k}: {cached} vs {}",
            expected.re
        );
        assert!((recomputed - expected.re).abs() < 1e-12, "toy {k}");
        assert!((epsilon_2(seq, &psi) - expected.re.abs()).abs() < 1e-12);
    }
}

#[test]
fn v1_matches_dense_construction() {
    for seq in toys() {
        let psi = ground(&seq);
        let expected = dense_v1(&term_matrices(&seq)) * &psi.amplitudes;
        let got = v1_apply(&seq, &psi);
        assert!((got - expected).norm() < 1e-12);
    }
}

#[test]
fn effective_hamiltonian_follows_bch() {
    // U = exp(-i H2 t) exp(-i H1 t): first term first.
    let mut sum = PauliSum::new(1);
    sum.add_string(PauliString::single(0, 'X'), c(0.6));
    sum.add_string(PauliString::single(0, 'Z'), c(0.8));
    let seq = TermSequence::from_pauli(&sum, 0.0);
    let h = term_matrices(&seq);
    let total = &h[0] + &h[1];
    let k = comm(&h[1], &h[0]);
    let third = (comm(&h[1], &k) + comm(&h[0], &comm(&h[0], &h[1]))) * c(-1.0 / 12.0);
    let mut previous = f64::INFINITY;
    for t in [0.08, 0.04, 0.02] {
        let heff = effective_hamiltonian(&trotter_propagator(&seq, t).unwrap(), t).unwrap();
        let series = &total + dense_v1(&h) * c(t) + &third * c(t * t);
        let residual = max_abs(&(heff.matrix() - series));
        // Next correction is O(t^3).
        assert!(residual < 0.5 * t.powi(3), "t = {t}: {residual:e}");
        assert!(residual < previous / 6.0);
        previous = residual;
    }
    // The BCH t^2 term and v2 differ by [H, K] / 12, invisible in eigenstates.
    let eig = total.clone().symmetric_eigen();
    let v2 = dense_v2(&h);
    for j in 0..2 {
        let v = eig.eigenvectors.column(j).into_owned();
        let a = v.dotc(&(&third * &v));
        let b = v.dotc(&(&v2 * &v));
        assert!((a - b).norm() < 1e-14);
    }
}

#[test]
fn trotter_product_matches_dense_exponentials() {
    for name in ["h2_sto3g", "random_3orb"] {
        for rep in [Representation::Fermionic, Representation::Qubit] {
            let exp = experiment(name, rep, OrderingSpec::Magnitude);
            let seq = exp.sequence(&GivensVector::zeros(exp.n_spatial())).unwrap();
            let dim = 1usize << seq.n_qubits;
            let mut u =
                CMat::identity(dim, dim) * Complex64::from_polar(1.0, -seq.constant * exp.t);
            for m in term_matrices(&seq) {
                u = expm(&m, exp.t) * u;
            }
            let got = trotter_propagator(&seq, exp.t).unwrap();
            assert!(max_abs(&(got.matrix() - u)) < 1e-12, "{name} {rep:?}");
        }
    }
}

#[test]
fn commuting_terms_have_no_error() {
    let exp = experiment(
        "hubbard_atom",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let seq = exp.sequence(&GivensVector::zeros(1)).unwrap();
    let h = &exp.reference.h;
    assert_eq!(alpha_bound(&seq).unwrap().alpha, 0.0);
    assert_eq!(epsilon_2(&seq, &exp.reference.psi0), 0.0);
    let report = delta_e0_heff(&trotter_propagator(&seq, exp.t).unwrap(), h, exp.t).unwrap();
    assert!(report.delta_e0.abs() < 1e-14);
    let f = fidelity_error(h, &seq, exp.t, None).unwrap();
    assert!(f.abs_f < 1e-14);
    assert!(acf_offset(h, &seq, exp.t).unwrap() < 1e-14);
    let pt = delta_e_pt(&seq, h, 0.1).unwrap();
    assert_eq!(pt.signed, 0.0);
}

#[test]
fn fidelity_matches_dense_evolution() {
    let exp = experiment(
        "h2_sto3g",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let seq = exp.sequence(&GivensVector::zeros(2)).unwrap();
    let psi = &exp.reference.psi0.amplitudes;
    let h = exp.reference.h.matrix();
    let t = 0.3;
    let exact = expm(h, t) * psi;
    let mut trotter = psi.clone() * Complex64::from_polar(1.0, -seq.constant * t);
    for m in term_matrices(&seq) {
        trotter = expm(&m, t) * trotter;
    }
    let f = c(1.0) - exact.dotc(&trotter);
    let got = fidelity_with(&exp.reference, &seq, t, None);
    assert!((got.value() - f).norm() < 1e-12);
    assert!((got.abs_one_minus_f - (c(1.0) - f).norm()).abs() < 1e-12);
    let g = (psi.dotc(&exact) - psi.dotc(&trotter)).norm();
    assert!((acf_offset_with(&exp.reference, &seq, t) - g).abs() < 1e-12);
    let d = wavefunction_difference_with(&exp.reference, &seq, t, &exp.reference.psi0);
    assert!((d - (exact - trotter).norm()).abs() < 1e-12);
}

fn dense_alpha(seq: &TermSequence) -> f64 {
    let h = term_matrices(seq);
    (0..h.len())
        .map(|a| {
            let dim = h[a].nrows();
            let mut m = CMat::zeros(dim, dim);
            for hb in &h[a + 1..] {
                m += comm(hb, &h[a]);
            }
            m.singular_values().max()
        })
        .sum()
}

#[test]
fn alpha_matches_dense_norms_and_is_below_lambda_squared() {
    for name in ["h2_sto3g", "random_3orb"] {
        for rep in [Representation::Fermionic, Representation::Qubit] {
            let exp = experiment(name, rep, OrderingSpec::Magnitude);
            let seq = exp.sequence(&GivensVector::zeros(exp.n_spatial())).unwrap();
            let alpha = alpha_bound(&seq).unwrap().alpha;
            assert!((alpha - dense_alpha(&seq)).abs() < 1e-10, "{name} {rep:?}");
            assert!(alpha <= lambda_squared_bound(&seq) + 1e-12);
        }
    }
    for seq in toys() {
        assert!((alpha_bound(&seq).unwrap().alpha - dense_alpha(&seq)).abs() < 1e-10);
    }
}

#[test]
fn propagator_error_norm_is_largest_singular_value() {
    let exp = experiment(
        "random_3orb",
        Representation::Fermionic,
        OrderingSpec::Index,
    );
    let seq = exp.sequence(&GivensVector::zeros(3)).unwrap();
    let ut = trotter_propagator(&seq, 0.5).unwrap();
    let u = exact_propagator(&exp.reference.h, 0.5).unwrap();
    let expected = (ut.matrix() - u.matrix()).singular_values().max();
    assert!((propagator_error_norm(&ut, &u) - expected).abs() < 1e-12);
}

#[test]
fn spectral_and_heff_routes_agree() {
    for name in ["h2_sto3g", "hf_631g_cas22", "random_3orb"] {
        let exp = experiment(name, Representation::Fermionic, OrderingSpec::Magnitude);
        let seq = exp.sequence(&GivensVector::zeros(exp.n_spatial())).unwrap();
        let heff = delta_e0_heff(
            &trotter_propagator(&seq, exp.t).unwrap(),
            &exp.reference.h,
            exp.t,
        )
        .unwrap();
        let acf = acf_report(&exp.reference, &seq, exp.t, DEFAULT_ACF_STEPS).unwrap();
        assert!((heff.delta_e0 - acf.delta_e0).abs() < 1e-5, "{name}");
        assert!(acf.precision.unwrap() < 1e-3);
    }
}

#[test]
fn spectral_peak_of_a_pure_tone() {
    let (e, t, n) = (-0.4321, 0.5, 1 << 12);
    let acf: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, -e * k as f64 * t))
        .collect();
    let err = (spectral_ground_energy(&acf, t).unwrap() - e).abs();
    assert!(err < 1e-9);
}

#[test]
fn acf_rejects_aliasing_time_steps() {
    let exp = experiment(
        "h2_sto3g",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let seq = exp.sequence(&GivensVector::zeros(2)).unwrap();
    assert!(matches!(
        acf_report(&exp.reference, &seq, 3.3, 1024),
        Err(trotter_core::Error::Nyquist(_))
    ));
}

#[test]
fn perturbative_estimate_tracks_small_step_error() {
    let exp = experiment(
        "h2_sto3g",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let seq = exp.sequence(&GivensVector::zeros(2)).unwrap();
    let t = 1e-3;
    let de = exp.trotter_energy(&seq, t).unwrap() - exp.e0();
    let pt = delta_e_pt_with(&exp.reference, &seq, t);
    assert!(
        (de / pt.signed - 1.0).abs() < 1e-3,
        "{de:e} vs {:e}",
        pt.signed
    );
    assert!(pt.v1_re.abs() < 1e-12 && pt.v1_im.abs() < 1e-12);
}
