//! Trotter products and composite multi-basis / multi-ordering propagators.
//!
//! Orientation: in `prod_k exp(-i H_k t)` the first term of a sequence acts
//! first on the state, i.e. it is the rightmost factor. Likewise constituent
//! `n = 1` of a composite propagator is applied first.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::SequenceKernels;
use crate::integrals::SpinOrbitalIntegrals;
use crate::linalg::{check_dense, DenseOperator};
use crate::orbital::{rotation_unitary_fock, transform_integrals, GivensVector};
use crate::ordering::{order_terms, OrderingSpec};
use crate::terms::{SequenceBuilder, TermSequence};

/// One first-order Trotter step of length `t`.
pub fn trotter_propagator(seq: &TermSequence, t: f64) -> Result<DenseOperator> {
    trotter_steps(seq, t, 1)
}

/// `steps` consecutive Trotter steps of length `t`.
pub fn trotter_steps(seq: &TermSequence, t: f64, steps: usize) -> Result<DenseOperator> {
    check_dense(seq.n_qubits, "Trotter propagator")?;
    let kernels = SequenceKernels::new(seq);
    let dim = kernels.dim();
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for _ in 0..steps {
        kernels.step_columns(t, u.as_mut_slice());
    }
    DenseOperator::unitary(u).map_err(|e| {
        log::error!("Trotter product lost unitarity: {e}");
        e
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositeMode {
    /// One orbital basis per constituent, shared ordering.
    Bases(Vec<Vec<f64>>),
    /// One ordering per constituent, shared basis.
    Orderings(Vec<OrderingSpec>),
}

#[derive(Debug, Clone)]
pub struct Constituent {
    /// Trotter step in the constituent's own basis.
    pub unitary: DenseOperator,
    pub sequence: TermSequence,
    pub basis: Option<GivensVector>,
}

#[derive(Debug, Clone)]
pub struct CompositePropagator {
    pub unitary: DenseOperator,
    /// Step length of every constituent, `t / eta`.
    pub step: f64,
    pub constituents: Vec<Constituent>,
}

impl CompositePropagator {
    pub fn eta(&self) -> usize {
        self.constituents.len()
    }
}

/// `prod_n U_R,n^dagger U_rot,n U_R,n`, each `U_rot,n` a Trotter step of
/// length `t / eta` built from the integrals rotated into basis `n`.
pub fn eta_basis_propagator(
    ints: &SpinOrbitalIntegrals,
    builder: &SequenceBuilder,
    ordering: &OrderingSpec,
    bases: &[GivensVector],
    t: f64,
) -> Result<CompositePropagator> {
    if bases.is_empty() {
        return Err(Error::Config(
            "composite propagator needs at least one basis".into(),
        ));
    }
    check_dense(ints.n_spin, "composite propagator")?;
    let step = t / bases.len() as f64;
    let mut total = DenseOperator::identity(ints.n_spin);
    let mut constituents = Vec::with_capacity(bases.len());
    for theta in bases {
        let rotated = transform_integrals(ints, theta)?;
        let seq = order_terms(&builder.build(&rotated), ordering)?.sequence;
        let u = trotter_propagator(&seq, step)?;
        let in_reference = if theta.is_zero() {
            u.clone()
        } else {
            let r = rotation_unitary_fock(theta, ints.n_spin)?;
            r.adjoint().compose(&u).compose(&r)
        };
        total = in_reference.compose(&total);
        constituents.push(Constituent {
            unitary: u,
            sequence: seq,
            basis: Some(theta.clone()),
        });
    }
    Ok(CompositePropagator {
        unitary: DenseOperator::unitary(total.into_matrix())?,
        step,
        constituents,
    })
}

/// `prod_n U_reo,n`, each a Trotter step of length `t / eta` with its own
/// ordering of `seq`.
pub fn eta_ordering_propagator(
    seq: &TermSequence,
    orderings: &[OrderingSpec],
    t: f64,
) -> Result<CompositePropagator> {
    if orderings.is_empty() {
        return Err(Error::Config(
            "composite propagator needs at least one ordering".into(),
        ));
    }
    let step = t / orderings.len() as f64;
    let mut total = DenseOperator::identity(seq.n_qubits);
    let mut constituents = Vec::with_capacity(orderings.len());
    for spec in orderings {
        let ordered = order_terms(seq, spec)?.sequence;
        let u = trotter_propagator(&ordered, step)?;
        total = u.compose(&total);
        constituents.push(Constituent {
            unitary: u,
            sequence: ordered,
            basis: None,
        });
    }
    Ok(CompositePropagator {
        unitary: DenseOperator::unitary(total.into_matrix())?,
        step,
        constituents,
    })
}

/// Everything needed to build a composite propagator from integrals.
#[derive(Debug, Clone)]
pub struct PropagatorSpec {
    pub builder: SequenceBuilder,
    pub ordering: OrderingSpec,
    pub t: f64,
    pub mode: CompositeMode,
}

impl PropagatorSpec {
    pub fn eta(&self) -> usize {
        match &self.mode {
            CompositeMode::Bases(b) => b.len(),
            CompositeMode::Orderings(o) => o.len(),
        }
    }

    pub fn build(&self, ints: &SpinOrbitalIntegrals) -> Result<CompositePropagator> {
        if self.t <= 0.0 {
            return Err(Error::NonPositiveTime(self.t));
        }
        match &self.mode {
            CompositeMode::Bases(angles) => {
                let bases = angles
                    .iter()
                    .map(|a| GivensVector::new(ints.n_spin / 2, a.clone()))
                    .collect::<Result<Vec<_>>>()?;
                eta_basis_propagator(ints, &self.builder, &self.ordering, &bases, self.t)
            }
            CompositeMode::Orderings(orderings) => {
                eta_ordering_propagator(&self.builder.build(ints), orderings, self.t)
            }
        }
    }
}
