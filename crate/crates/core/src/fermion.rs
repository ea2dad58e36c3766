//! Grouped hermitian fermionic Hamiltonian terms.
//!
//! The two-body sum `1/2 sum h2[p,q,r,s] a+_p a+_q a_r a_s` is rewritten with
//! anticommutation so that every creation pair `A = (p, q)` and annihilation
//! pair `B = (s, r)` is sorted (`p < q`, `s < r`). Pairs with `A = B` give
//! `n_p n_q`; the remaining `op(A, B)` are joined with their adjoints
//! `op(B, A)`.
//!
//! Basis states are bit strings; bit `j` is the occupation of spin orbital `j`
//! and ladder operators carry the sign `(-1)^(occupied modes below j)`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrals::SpinOrbitalIntegrals;
use crate::linalg::check_dense;

pub const DEFAULT_PRUNE: f64 = 1e-8;

/// Sorted spin-orbital index pair.
type Pair = (usize, usize);

/// The hermitian operator patterns, listed in index-ordering rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermKind {
    /// `n_i`
    Number,
    /// `a+_i a_j + a+_j a_i`, `i < j`
    Hopping,
    /// `n_p n_q`, `p < q`
    PairNumber,
    /// `op(A, B) + op(B, A)` with one mode shared between the pairs
    NumberHopping,
    /// `op(A, B) + op(B, A)` with disjoint pairs
    DoubleHopping,
}

impl TermKind {
    pub fn rank(self) -> u8 {
        self as u8
    }
}

/// Basis-independent identity of a term: its kind and index tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub kind: TermKind,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self {
            mode,
            dagger: false,
        }
    }
}

/// Applies a product of ladder operators (rightmost first) to basis state `y`.
pub fn apply_word(word: &[Ladder], mut y: u64) -> Option<(u64, f64)> {
    let mut sign = 1.0;
    for op in word.iter().rev() {
        let bit = 1u64 << op.mode;
        let occupied = y & bit != 0;
        if occupied == op.dagger {
            return None;
        }
        if (y & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        y ^= bit;
    }
    Some((y, sign))
}

/// `h_k F_k`. Index layout by kind: `[i]`, `[i, j]`, `[p, q]`, and
/// `[A0, A1, B0, B1]` for the two hopping kinds with `A < B`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionTerm {
    pub weight: f64,
    pub kind: TermKind,
    pub indices: Vec<usize>,
}

impl FermionTerm {
    pub fn signature(&self) -> Signature {
        Signature {
            kind: self.kind,
            indices: self.indices.clone(),
        }
    }

    /// `F_k` as a sum of ladder-operator words, each with unit coefficient.
    pub fn words(&self) -> Vec<Vec<Ladder>> {
        use Ladder as L;
        let ix = &self.indices;
        match self.kind {
            TermKind::Number => vec![vec![L::create(ix[0]), L::annihilate(ix[0])]],
            TermKind::Hopping => vec![
                vec![L::create(ix[0]), L::annihilate(ix[1])],
                vec![L::create(ix[1]), L::annihilate(ix[0])],
            ],
            TermKind::PairNumber => vec![pair_word((ix[0], ix[1]), (ix[0], ix[1]))],
            TermKind::NumberHopping | TermKind::DoubleHopping => vec![
                pair_word((ix[0], ix[1]), (ix[2], ix[3])),
                pair_word((ix[2], ix[3]), (ix[0], ix[1])),
            ],
        }
    }

    /// Highest spin-orbital index touched, plus one.
    pub fn span(&self) -> usize {
        self.indices.iter().max().map_or(0, |m| m + 1)
    }

    /// Adds `scale * weight * F |y>` into `out` for every basis state.
    pub fn apply_into(&self, psi: &[Complex64], out: &mut [Complex64], scale: f64) {
        let words = self.words();
        let w = scale * self.weight;
        for (y, amp) in psi.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for word in &words {
                if let Some((target, sign)) = apply_word(word, y as u64) {
                    out[target as usize] += amp * (w * sign);
                }
            }
        }
    }

    /// Dense matrix of `weight * F` on `n_modes` spin orbitals.
    pub fn to_matrix(&self, n_modes: usize) -> Result<DMatrix<Complex64>> {
        check_dense(n_modes, "fermion term matrix")?;
        let dim = 1usize << n_modes;
        let mut m = DMatrix::zeros(dim, dim);
        for word in self.words() {
            for y in 0..dim {
                if let Some((target, sign)) = apply_word(&word, y as u64) {
                    m[(target as usize, y)] += Complex64::new(self.weight * sign, 0.0);
                }
            }
        }
        Ok(m)
    }
}

/// `a+_{A0} a+_{A1} a_{B1} a_{B0}`
fn pair_word(a: (usize, usize), b: (usize, usize)) -> Vec<Ladder> {
    vec![
        Ladder::create(a.0),
        Ladder::create(a.1),
        Ladder::annihilate(b.1),
        Ladder::annihilate(b.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionTermList {
    pub n_spin: usize,
    /// Identity offset, the core energy.
    pub constant: f64,
    pub terms: Vec<FermionTerm>,
}

impl FermionTermList {
    /// Sum of `|h_k|`, constant excluded.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.weight.abs()).sum()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        check_dense(self.n_spin, "fermion Hamiltonian matrix")?;
        let dim = 1usize << self.n_spin;
        let mut m = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(self.constant, 0.0);
        for term in &self.terms {
            m += term.to_matrix(self.n_spin)?;
        }
        Ok(m)
    }
}

/// Groups spin-orbital integrals into hermitian terms and drops those with
/// `|h_k| < prune`. Terms come out in index order (kind rank, then indices).
pub fn build_fermion_hamiltonian(ints: &SpinOrbitalIntegrals, prune: f64) -> FermionTermList {
    let n = ints.n_spin;
    let mut terms: BTreeMap<Signature, f64> = BTreeMap::new();

    for i in 0..n {
        let w = ints.h1[[i, i]];
        terms.insert(sig(TermKind::Number, vec![i]), w);
        for j in i + 1..n {
            let w = 0.5 * (ints.h1[[i, j]] + ints.h1[[j, i]]);
            terms.insert(sig(TermKind::Hopping, vec![i, j]), w);
        }
    }

    // Coefficient of op(A, B) after sorting both pairs.
    let mut pair_coeff: BTreeMap<(Pair, Pair), f64> = BTreeMap::new();
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    if r == s {
                        continue;
                    }
                    let h = ints.h2[[p, q, r, s]];
                    if h == 0.0 {
                        continue;
                    }
                    let (a, sa) = if p < q { ((p, q), 1.0) } else { ((q, p), -1.0) };
                    // a_r a_s == a_{B1} a_{B0} for B = (s, r) when r > s.
                    let (b, sb) = if r > s { ((s, r), 1.0) } else { ((r, s), -1.0) };
                    *pair_coeff.entry((a, b)).or_insert(0.0) += 0.5 * sa * sb * h;
                }
            }
        }
    }
    for (&(a, b), &c) in &pair_coeff {
        if a == b {
            terms.insert(sig(TermKind::PairNumber, vec![a.0, a.1]), c);
        } else if a < b {
            let adjoint = pair_coeff.get(&(b, a)).copied().unwrap_or(0.0);
            terms.insert(hopping_signature(a, b), 0.5 * (c + adjoint));
        } else if !pair_coeff.contains_key(&(b, a)) {
            terms.insert(hopping_signature(b, a), 0.5 * c);
        }
    }

    let terms = terms
        .into_iter()
        .filter(|(_, w)| w.abs() >= prune)
        .map(|(s, weight)| FermionTerm {
            weight,
            kind: s.kind,
            indices: s.indices,
        })
        .collect();
    FermionTermList {
        n_spin: n,
        constant: ints.core_energy,
        terms,
    }
}

fn sig(kind: TermKind, indices: Vec<usize>) -> Signature {
    Signature { kind, indices }
}

fn hopping_signature(a: (usize, usize), b: (usize, usize)) -> Signature {
    let shared = [a.0, a.1]
        .iter()
        .filter(|m| **m == b.0 || **m == b.1)
        .count();
    let kind = if shared == 0 {
        TermKind::DoubleHopping
    } else {
        TermKind::NumberHopping
    };
    sig(kind, vec![a.0, a.1, b.0, b.1])
}
