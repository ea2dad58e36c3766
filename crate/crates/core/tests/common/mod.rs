//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! The oracle Hamiltonian is assembled from PySCF's chemists'-notation
//! integrals with Kronecker-product ladder matrices, sharing no code with
//! the library's parser, spin expansion or term grouping.
#![allow(dead_code)]

use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Deserialize;

use trotter_core::ensembles::{Experiment, TimeRule};
use trotter_core::integrals::{parse_fcidump, to_spin_orbitals, FcidumpData, SpinOrbitalIntegrals};
use trotter_core::linalg::{ground_state, StateVector};
use trotter_core::orbital::GivensVector;
use trotter_core::ordering::OrderingSpec;
use trotter_core::pauli::{PauliString, PauliSum};
use trotter_core::terms::{Representation, TermSequence};

pub type CMat = DMatrix<Complex64>;

/// Fixtures with PySCF reference data.
pub const MOLECULAR: [&str; 5] = [
    "h2_sto3g",
    "hf_631g_cas22",
    "h4_sto3g",
    "random_3orb",
    "random_4orb",
];
/// Everything, including the hand-written single-orbital Hubbard atom.
pub const ALL: [&str; 6] = [
    "hubbard_atom",
    "h2_sto3g",
    "hf_631g_cas22",
    "h4_sto3g",
    "random_3orb",
    "random_4orb",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn fcidump(name: &str) -> FcidumpData {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.fcidump"))).unwrap();
    parse_fcidump(&text).unwrap()
}

pub fn spin_ints(name: &str) -> SpinOrbitalIntegrals {
    to_spin_orbitals(&fcidump(name))
}

pub fn experiment(
    name: &str,
    representation: Representation,
    ordering: OrderingSpec,
) -> Experiment {
    Experiment::new(
        spin_ints(name),
        representation,
        ordering,
        1e-8,
        true,
        TimeRule::Standard,
    )
    .unwrap()
}

#[derive(Debug, Deserialize)]
pub struct Reference {
    pub norb: usize,
    pub nelec: usize,
    pub core_energy: f64,
    pub e_fci_total: f64,
    pub e_fci_electronic: f64,
    pub h1: Vec<Vec<f64>>,
    pub eri: Vec<Vec<Vec<Vec<f64>>>>,
    pub fock_spectrum_total: Vec<f64>,
}

pub fn reference(name: &str) -> Reference {
    let text = std::fs::read_to_string(fixture_path(&format!("{name}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron_chain(ops: &[CMat]) -> CMat {
    // ops[k] acts on qubit k; qubit 0 is the least significant bit.
    let mut m = CMat::identity(1, 1);
    for op in ops {
        m = op.kronecker(&m);
    }
    m
}

/// Annihilator of mode `j` among `n`: `Z` on lower modes, `|0><1|` on `j`.
pub fn annihilator(j: usize, n: usize) -> CMat {
    let id = CMat::identity(2, 2);
    let z = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let lower = CMat::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
    let ops: Vec<CMat> = (0..n)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => z.clone(),
            std::cmp::Ordering::Equal => lower.clone(),
            std::cmp::Ordering::Greater => id.clone(),
        })
        .collect();
    kron_chain(&ops)
}

/// A ladder matrix as a column map `y -> (row, sign)`, read off the dense
/// Kronecker product.
#[derive(Clone)]
pub struct SignedMap(Vec<Option<(usize, f64)>>);

impl SignedMap {
    pub fn from_dense(m: &CMat) -> Self {
        Self(
            (0..m.ncols())
                .map(|y| {
                    let hits: Vec<usize> =
                        (0..m.nrows()).filter(|&r| m[(r, y)].norm() > 0.0).collect();
                    assert!(hits.len() <= 1, "ladder column with several entries");
                    hits.first().map(|&r| (r, m[(r, y)].re))
                })
                .collect(),
        )
    }

    /// `self * rhs`
    pub fn then_after(&self, rhs: &SignedMap) -> SignedMap {
        SignedMap(
            rhs.0
                .iter()
                .map(|e| e.and_then(|(mid, s1)| self.0[mid].map(|(r, s2)| (r, s1 * s2))))
                .collect(),
        )
    }

    pub fn accumulate(&self, h: &mut CMat, weight: f64) {
        for (y, e) in self.0.iter().enumerate() {
            if let Some((r, s)) = e {
                h[(*r, y)] += c(weight * s);
            }
        }
    }
}

/// `E_core + sum h_pq a+_{p s} a_{q s} + 1/2 sum (pq|rs) a+_{p s} a+_{r t} a_{s t} a_{q s}`
/// with spin orbital `2 p + s`.
#[allow(clippy::needless_range_loop)]
pub fn oracle_hamiltonian(h1: &[Vec<f64>], eri: &[Vec<Vec<Vec<f64>>>], core: f64) -> CMat {
    let m = h1.len();
    let n = 2 * m;
    let dim = 1usize << n;
    let a: Vec<SignedMap> = (0..n)
        .map(|j| SignedMap::from_dense(&annihilator(j, n)))
        .collect();
    let ad: Vec<SignedMap> = (0..n)
        .map(|j| SignedMap::from_dense(&annihilator(j, n).adjoint()))
        .collect();
    let mut h = CMat::identity(dim, dim) * c(core);
    for p in 0..m {
        for q in 0..m {
            for s in 0..2 {
                if h1[p][q] != 0.0 {
                    ad[2 * p + s]
                        .then_after(&a[2 * q + s])
                        .accumulate(&mut h, h1[p][q]);
                }
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let v = eri[p][q][r][s];
                    if v == 0.0 {
                        continue;
                    }
                    for sig in 0..2 {
                        for tau in 0..2 {
                            let (ps, qs, rt, st) =
                                (2 * p + sig, 2 * q + sig, 2 * r + tau, 2 * s + tau);
                            let word =
                                ad[ps].then_after(&ad[rt].then_after(&a[st].then_after(&a[qs])));
                            word.accumulate(&mut h, 0.5 * v);
                        }
                    }
                }
            }
        }
    }
    h
}

pub fn oracle_from_reference(name: &str) -> CMat {
    let r = reference(name);
    oracle_hamiltonian(&r.h1, &r.eri, r.core_energy)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Sorted eigenvalues of a hermitian matrix, by a plain dense solve.
pub fn dense_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut v: Vec<f64> = m
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn term_matrices(seq: &TermSequence) -> Vec<CMat> {
    seq.terms
        .iter()
        .map(|t| t.to_matrix(seq.n_qubits).unwrap())
        .collect()
}

pub fn comm(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// `v2 = -1/3 sum_{a<b<=c} w_bc [H_c, [H_b, H_a]]` with `w_bb = 1/2`.
pub fn dense_v2(h: &[CMat]) -> CMat {
    let dim = h[0].nrows();
    let mut v2 = CMat::zeros(dim, dim);
    for a in 0..h.len() {
        for b in a + 1..h.len() {
            let inner = comm(&h[b], &h[a]);
            for (cc, hc) in h.iter().enumerate().skip(b) {
                let w = if cc == b { 0.5 } else { 1.0 };
                v2 += comm(hc, &inner) * c(w);
            }
        }
    }
    v2 * c(-1.0 / 3.0)
}

/// Random hermitian Pauli terms on `n` qubits.
pub fn random_toy(n: usize, terms: usize, seed: u64) -> TermSequence {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut sum = PauliSum::new(n);
    while sum.len() < terms {
        let label: String = (0..n)
            .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
            .collect();
        let s = PauliString::from_label(&label).unwrap();
        if !s.is_identity() {
            sum.add_string(s, c(rng.gen_range(-1.0..1.0)));
        }
    }
    TermSequence::from_pauli(&sum, 0.0)
}

pub fn ground(seq: &TermSequence) -> StateVector {
    ground_state(&seq.to_matrix().unwrap()).unwrap().1
}

pub fn toys() -> Vec<TermSequence> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for seed in 0..4 {
            out.push(random_toy(
                n,
                (2 + n + seed as usize).min((1 << (2 * n)) - 1),
                seed,
            ));
        }
    }
    let hubbard = experiment(
        "hubbard_atom",
        Representation::Fermionic,
        OrderingSpec::Index,
    );
    out.push(hubbard.sequence(&GivensVector::zeros(1)).unwrap());
    out
}
