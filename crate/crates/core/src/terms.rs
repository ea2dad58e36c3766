//! Trotter term sequences in either representation.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fermion::{build_fermion_hamiltonian, FermionTerm, FermionTermList, Signature};
use crate::integrals::SpinOrbitalIntegrals;
use crate::linalg::{c64, check_dense, DenseOperator, SpectrumWindow};
use crate::pauli::{jordan_wigner, jordan_wigner_term, PauliString, PauliSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    #[default]
    Fermionic,
    Qubit,
}

impl std::str::FromStr for Representation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fermionic" | "fermion" => Ok(Self::Fermionic),
            "qubit" | "pauli" => Ok(Self::Qubit),
            other => Err(format!(
                "unknown representation `{other}` (expected fermionic or qubit)"
            )),
        }
    }
}

/// Basis-independent key used to match terms across bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermSignature {
    Fermion(Signature),
    /// Pauli label, character `k` acting on qubit `k`.
    Pauli(String),
}

impl PartialOrd for TermSignature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TermSignature {
    /// Index order. Labels compare character-wise, which gives
    /// `I < X < Y < Z` on every qubit.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Fermion(a), Self::Fermion(b)) => a.cmp(b),
            (Self::Pauli(a), Self::Pauli(b)) => a.cmp(b),
            (Self::Fermion(_), Self::Pauli(_)) => Ordering::Less,
            (Self::Pauli(_), Self::Fermion(_)) => Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Fermion(FermionTerm),
    /// `weight * string` with a hermitian string.
    Pauli {
        string: PauliString,
        weight: f64,
    },
}

impl Term {
    pub fn weight(&self) -> f64 {
        match self {
            Term::Fermion(t) => t.weight,
            Term::Pauli { weight, .. } => *weight,
        }
    }

    pub fn signature(&self, n_qubits: usize) -> TermSignature {
        match self {
            Term::Fermion(t) => TermSignature::Fermion(t.signature()),
            Term::Pauli { string, .. } => TermSignature::Pauli(string.label(n_qubits)),
        }
    }

    pub fn scaled(&self, factor: f64) -> Term {
        match self {
            Term::Fermion(t) => Term::Fermion(FermionTerm {
                weight: t.weight * factor,
                ..t.clone()
            }),
            Term::Pauli { string, weight } => Term::Pauli {
                string: *string,
                weight: weight * factor,
            },
        }
    }

    /// Qubit operator of the full term, weight included.
    pub fn pauli_image(&self, n_qubits: usize) -> PauliSum {
        match self {
            Term::Fermion(t) => jordan_wigner_term(t, n_qubits),
            Term::Pauli { string, weight } => {
                let mut s = PauliSum::new(n_qubits);
                s.add_string(*string, c64(*weight));
                s
            }
        }
    }

    pub fn to_matrix(&self, n_qubits: usize) -> Result<DMatrix<Complex64>> {
        match self {
            Term::Fermion(t) => t.to_matrix(n_qubits),
            Term::Pauli { .. } => Ok(self.pauli_image(n_qubits).to_matrix()?.into_matrix()),
        }
    }
}

/// Ordered list of hermitian terms plus an identity offset. The first term
/// is applied first in a Trotter step.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSequence {
    pub n_qubits: usize,
    pub constant: f64,
    pub terms: Vec<Term>,
}

impl TermSequence {
    pub fn from_fermion(list: &FermionTermList) -> Self {
        Self {
            n_qubits: list.n_spin,
            constant: list.constant,
            terms: list.terms.iter().cloned().map(Term::Fermion).collect(),
        }
    }

    /// Non-identity strings with `|c| >= prune`, in label order; the
    /// identity coefficient becomes the constant.
    pub fn from_pauli(sum: &PauliSum, prune: f64) -> Self {
        let mut terms: Vec<(String, Term)> = sum
            .strings()
            .filter(|(s, c)| !s.is_identity() && c.norm() >= prune)
            .map(|(string, c)| {
                (
                    string.label(sum.n_qubits),
                    Term::Pauli {
                        string,
                        weight: c.re,
                    },
                )
            })
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Self {
            n_qubits: sum.n_qubits,
            constant: sum.identity_coefficient().re,
            terms: terms.into_iter().map(|(_, t)| t).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.weight().abs()).sum()
    }

    pub fn signatures(&self) -> Vec<TermSignature> {
        self.terms
            .iter()
            .map(|t| t.signature(self.n_qubits))
            .collect()
    }

    /// `(H - e_max) / (e_max - e_min)` applied term by term.
    pub fn normalized(&self, window: &SpectrumWindow) -> Self {
        let w = window.width();
        Self {
            n_qubits: self.n_qubits,
            constant: (self.constant - window.e_max) / w,
            terms: self.terms.iter().map(|t| t.scaled(1.0 / w)).collect(),
        }
    }

    /// Terms rearranged so that position `k` holds source term `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            n_qubits: self.n_qubits,
            constant: self.constant,
            terms: order.iter().map(|&k| self.terms[k].clone()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DenseOperator> {
        check_dense(self.n_qubits, "Hamiltonian matrix")?;
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::identity(dim, dim) * c64(self.constant);
        for term in &self.terms {
            m += term.to_matrix(self.n_qubits)?;
        }
        DenseOperator::hermitian(m)
    }
}

/// Integrals to term sequence: grouping, optional Jordan-Wigner map,
/// pruning, and optional spectrum normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceBuilder {
    pub representation: Representation,
    pub prune: f64,
    pub window: Option<SpectrumWindow>,
}

impl SequenceBuilder {
    pub fn new(representation: Representation, prune: f64) -> Self {
        Self {
            representation,
            prune,
            window: None,
        }
    }

    pub fn with_window(mut self, window: SpectrumWindow) -> Self {
        self.window = Some(window);
        self
    }

    /// Physical-unit sequence, index ordered.
    pub fn build_raw(&self, ints: &SpinOrbitalIntegrals) -> TermSequence {
        match self.representation {
            Representation::Fermionic => {
                TermSequence::from_fermion(&build_fermion_hamiltonian(ints, self.prune))
            }
            Representation::Qubit => {
                let list = build_fermion_hamiltonian(ints, 0.0);
                TermSequence::from_pauli(&jordan_wigner(&list), self.prune)
            }
        }
    }

    pub fn build(&self, ints: &SpinOrbitalIntegrals) -> TermSequence {
        let raw = self.build_raw(ints);
        match &self.window {
            Some(w) => raw.normalized(w),
            None => raw,
        }
    }
}
