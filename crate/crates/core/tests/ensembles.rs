mod common;

use common::*;

use trotter_core::ensembles::{
    angle_sweep, bisect_error_free_basis, ensemble_csv, propagator_csv, random_propagator_ensemble,
    sample_error_distribution, Experiment, SampleMode, TimeRule,
};
use trotter_core::error::Error;
use trotter_core::metrics::{alpha_bound, effective_ground_energy};
use trotter_core::orbital::{sample_random_basis, GivensVector};
use trotter_core::ordering::OrderingSpec;
use trotter_core::propagators::{eta_basis_propagator, trotter_steps};
use trotter_core::terms::Representation;

#[test]
fn same_seed_gives_identical_output() {
    let exp = experiment(
        "random_3orb",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    for mode in [SampleMode::RandomBasis, SampleMode::RandomOrdering] {
        let a = sample_error_distribution(&exp, mode, 12, 7).unwrap();
        let b = sample_error_distribution(&exp, mode, 12, 7).unwrap();
        assert_eq!(ensemble_csv(&a), ensemble_csv(&b));
        let c = sample_error_distribution(&exp, mode, 12, 8).unwrap();
        assert_ne!(ensemble_csv(&a), ensemble_csv(&c));
        let p = random_propagator_ensemble(&exp, mode, 3, 4, 7).unwrap();
        let q = random_propagator_ensemble(&exp, mode, 3, 4, 7).unwrap();
        assert_eq!(propagator_csv(&p), propagator_csv(&q));
    }
}

#[test]
fn single_constituent_propagators_are_single_samples() {
    let exp = experiment("h2_sto3g", Representation::Qubit, OrderingSpec::Magnitude);
    for mode in [SampleMode::RandomBasis, SampleMode::RandomOrdering] {
        let samples = sample_error_distribution(&exp, mode, 6, 3).unwrap();
        let props = random_propagator_ensemble(&exp, mode, 1, 6, 3).unwrap();
        for (s, p) in samples.records.iter().zip(&props.records) {
            assert_eq!(s.delta_e0, p.delta_e0);
            assert_eq!(p.constituents[0].basis, s.basis);
            assert_eq!(p.constituents[0].permutation, s.permutation);
        }
    }
}

#[test]
fn repeated_basis_is_a_multi_step_product() {
    let exp = experiment(
        "random_3orb",
        Representation::Fermionic,
        OrderingSpec::Index,
    );
    let basis = sample_random_basis(4, 3);
    let eta = 10;
    let composite = eta_basis_propagator(
        &exp.ints,
        &exp.builder,
        &exp.ordering,
        &vec![basis.clone(); eta],
        exp.t,
    )
    .unwrap();
    let seq = exp.sequence(&basis).unwrap();
    let steps = trotter_steps(&seq, exp.t / eta as f64, eta).unwrap();
    // Same operator up to the basis change conjugating the product.
    let e_composite = effective_ground_energy(&composite.unitary, exp.t).unwrap();
    let e_steps = effective_ground_energy(&steps, exp.t).unwrap();
    assert!(
        (e_composite - e_steps).abs() < 1e-11,
        "{e_composite} {e_steps}"
    );
}

#[test]
fn physical_time_step_uses_the_electronic_energy() {
    let exp = Experiment::new(
        spin_ints("h2_sto3g"),
        Representation::Fermionic,
        OrderingSpec::Magnitude,
        1e-8,
        false,
        TimeRule::Standard,
    )
    .unwrap();
    let electronic = reference("h2_sto3g").e_fci_electronic;
    assert!((exp.t - 0.95 * std::f64::consts::PI / electronic.abs()).abs() < 1e-9);
}

#[test]
fn h2_orderings_all_give_the_same_error() {
    let exp = experiment(
        "h2_sto3g",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let result = sample_error_distribution(&exp, SampleMode::RandomOrdering, 20, 1).unwrap();
    let first = result.records[0].delta_e0;
    let spread = result
        .records
        .iter()
        .map(|r| (r.delta_e0 - first).abs())
        .fold(0.0, f64::max);
    assert!(spread < 1e-12, "{spread:e}");
    assert!(result.summary.min > 0.0);
}

#[test]
fn h2_has_no_error_free_basis_to_bisect() {
    let exp = experiment(
        "h2_sto3g",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    match bisect_error_free_basis(&exp, (0, 1), 0.0, 1.0, 1e-8) {
        Err(Error::Bracket { f_lo, f_hi, .. }) => assert!(f_lo > 0.0 && f_hi > 0.0),
        other => panic!("expected a bracket error, got {other:?}"),
    }
}

#[test]
fn unrotated_sweep_row_repeats_the_reference_step() {
    let exp = experiment(
        "hf_631g_cas22",
        Representation::Fermionic,
        OrderingSpec::Index,
    );
    let rows = angle_sweep(&exp, (0, 1), &[0.0, 0.3]).unwrap();
    let r = rows[0];
    assert!((r.e_second - r.e_first).abs() < 1e-13);
    assert!((r.e_combined - r.e_first).abs() < 1e-11);
    assert!(rows.iter().all(|r| r.is_between(1e-9)));
}

#[test]
fn every_sample_respects_the_commutator_bound() {
    let exp = experiment(
        "random_3orb",
        Representation::Fermionic,
        OrderingSpec::Magnitude,
    );
    let result = sample_error_distribution(&exp, SampleMode::RandomBasis, 6, 9).unwrap();
    for record in &result.records {
        let basis = GivensVector::new(3, record.basis.clone().unwrap()).unwrap();
        let bound = alpha_bound(&exp.sequence(&basis).unwrap())
            .unwrap()
            .energy_bound(exp.t);
        assert!(
            record.delta_e0.abs() <= bound,
            "{} > {bound}",
            record.delta_e0
        );
    }
}
