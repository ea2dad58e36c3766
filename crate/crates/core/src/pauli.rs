//! Pauli strings in symplectic form and the Jordan-Wigner map.
//!
//! A [`PauliString`] is `i^phase X^x Z^z` with qubit 0 in the least
//! significant bit. `Y = i X Z`, so the hermitian string with masks `(x, z)` is
//! `i^{|x & z|} X^x Z^z`; [`PauliSum`] stores coefficients relative to that
//! hermitian representative.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{FermionTerm, FermionTermList, Ladder};
use crate::linalg::{check_dense, DenseOperator};

pub const COEFF_TOL: f64 = 1e-14;

const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

pub fn i_pow(k: u32) -> Complex64 {
    I_POWERS[(k % 4) as usize]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    /// Power of `i` in the prefactor.
    pub phase: u8,
}

impl PauliString {
    pub const IDENTITY: Self = Self {
        x: 0,
        z: 0,
        phase: 0,
    };

    /// The hermitian string with the given masks.
    pub fn hermitian(x: u64, z: u64) -> Self {
        Self {
            x,
            z,
            phase: ((x & z).count_ones() % 4) as u8,
        }
    }

    pub fn single(qubit: usize, p: char) -> Self {
        let bit = 1u64 << qubit;
        match p {
            'X' => Self::hermitian(bit, 0),
            'Y' => Self::hermitian(bit, bit),
            'Z' => Self::hermitian(0, bit),
            _ => Self::IDENTITY,
        }
    }

    /// Parses labels like `"XIZY"`; character `k` acts on qubit `k`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (mut x, mut z) = (0u64, 0u64);
        for (k, c) in label.chars().enumerate() {
            let bit = 1u64 << k;
            match c {
                'I' => {}
                'X' => x |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                'Z' => z |= bit,
                other => {
                    return Err(Error::Config(format!(
                        "invalid Pauli label character `{other}`"
                    )))
                }
            }
        }
        Ok(Self::hermitian(x, z))
    }

    /// Label of the mask pattern; the phase is not part of the label.
    pub fn label(&self, n_qubits: usize) -> String {
        (0..n_qubits)
            .map(|k| match ((self.x >> k) & 1, (self.z >> k) & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + 4 - (self.x & self.z).count_ones() % 4).is_multiple_of(2)
    }

    pub fn prefactor(&self) -> Complex64 {
        i_pow(self.phase as u32)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.z & other.x).count_ones() + (self.x & other.z).count_ones()).is_multiple_of(2)
    }

    /// `self * other`
    pub fn mul(&self, other: &Self) -> Self {
        // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        let swap = 2 * ((self.z & other.x).count_ones() % 2);
        Self {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: ((self.phase as u32 + other.phase as u32 + swap) % 4) as u8,
        }
    }

    /// `P |y> = amplitude |target>`
    pub fn apply_basis(&self, y: u64) -> (u64, Complex64) {
        let sign = (self.z & y).count_ones() % 2;
        (y ^ self.x, i_pow(self.phase as u32 + 2 * sign))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 64 - (self.x | self.z).leading_zeros() as usize;
        write!(f, "{}", self.label(n.max(1)))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    pub n_qubits: usize,
    pub terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: f64) -> Self {
        let mut s = Self::new(n_qubits);
        s.add_string(PauliString::IDENTITY, Complex64::new(coeff, 0.0));
        s
    }

    /// Adds `coeff * string`.
    pub fn add_string(&mut self, string: PauliString, coeff: Complex64) {
        let rel = string.phase as u32 + 4 - (string.x & string.z).count_ones() % 4;
        let c = coeff * i_pow(rel);
        let entry = self
            .terms
            .entry((string.x, string.z))
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm() < COEFF_TOL {
            self.terms.remove(&(string.x, string.z));
        }
    }

    pub fn add(&mut self, other: &PauliSum, scale: Complex64) {
        for (&(x, z), &c) in &other.terms {
            self.add_string(PauliString::hermitian(x, z), c * scale);
        }
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut out = PauliSum::new(self.n_qubits.max(other.n_qubits));
        for (&(x1, z1), &c1) in &self.terms {
            let a = PauliString::hermitian(x1, z1);
            for (&(x2, z2), &c2) in &other.terms {
                out.add_string(a.mul(&PauliString::hermitian(x2, z2)), c1 * c2);
            }
        }
        out
    }

    pub fn commutator(&self, other: &PauliSum) -> PauliSum {
        let mut out = self.mul(other);
        out.add(&other.mul(self), Complex64::new(-1.0, 0.0));
        out
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn identity_coefficient(&self) -> Complex64 {
        self.terms.get(&(0, 0)).copied().unwrap_or_default()
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() < COEFF_TOL)
    }

    /// Hermitian strings with their coefficients, identity included.
    pub fn strings(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms
            .iter()
            .map(|(&(x, z), &c)| (PauliString::hermitian(x, z), c))
    }

    /// Drops entries with `|c| < tol`.
    pub fn pruned(&self, tol: f64) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.norm() >= tol)
                .map(|(k, c)| (*k, *c))
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<DenseOperator> {
        check_dense(self.n_qubits, "Pauli sum matrix")?;
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (string, c) in self.strings() {
            for y in 0..dim {
                let (target, amp) = string.apply_basis(y as u64);
                m[(target as usize, y)] += c * amp;
            }
        }
        if self.is_hermitian() {
            DenseOperator::hermitian(m)
        } else {
            Ok(DenseOperator::general(m))
        }
    }

    pub fn apply(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(psi.len());
        for (string, c) in self.strings() {
            for (y, amp) in psi.iter().enumerate() {
                let (target, a) = string.apply_basis(y as u64);
                out[target as usize] += c * a * amp;
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct LabelledTerm(String, [f64; 2]);

impl Serialize for PauliSum {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (s, c) in self.strings() {
            seq.serialize_element(&LabelledTerm(s.label(self.n_qubits), [c.re, c.im]))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PauliSum {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<LabelledTerm>::deserialize(deserializer)?;
        let mut sum = PauliSum::new(entries.first().map_or(0, |e| e.0.len()));
        for LabelledTerm(label, [re, im]) in entries {
            let s = PauliString::from_label(&label).map_err(serde::de::Error::custom)?;
            sum.add_string(s, Complex64::new(re, im));
        }
        Ok(sum)
    }
}

/// Sum of `|c|` over all non-identity strings.
pub fn pauli_one_norm(sum: &PauliSum) -> f64 {
    sum.terms
        .iter()
        .filter(|(k, _)| **k != (0, 0))
        .map(|(_, c)| c.norm())
        .sum()
}

pub fn pauli_commutator(a: &PauliString, b: &PauliString) -> PauliSum {
    let n = 64 - (a.x | a.z | b.x | b.z).leading_zeros() as usize;
    let mut out = PauliSum::new(n);
    if !a.commutes_with(b) {
        out.add_string(a.mul(b), Complex64::new(2.0, 0.0));
    }
    out
}

fn ladder_sum(op: Ladder, n_qubits: usize) -> PauliSum {
    let bit = 1u64 << op.mode;
    let string_z = bit - 1;
    let mut s = PauliSum::new(n_qubits);
    s.add_string(
        PauliString::hermitian(bit, string_z),
        Complex64::new(0.5, 0.0),
    );
    // Z_{<j} Y_j = i X^bit Z^(string|bit)
    let y = PauliString {
        x: bit,
        z: string_z | bit,
        phase: 1,
    };
    let sign = if op.dagger { -0.5 } else { 0.5 };
    s.add_string(y, Complex64::new(0.0, sign));
    s
}

/// Jordan-Wigner image of one term, `weight` included.
pub fn jordan_wigner_term(term: &FermionTerm, n_qubits: usize) -> PauliSum {
    let mut out = PauliSum::new(n_qubits);
    for word in term.words() {
        let mut product = PauliSum::identity(n_qubits, 1.0);
        for op in &word {
            product = product.mul(&ladder_sum(*op, n_qubits));
        }
        out.add(&product, Complex64::new(term.weight, 0.0));
    }
    out
}

/// Jordan-Wigner image of the whole list; the identity coefficient includes
/// `constant`.
pub fn jordan_wigner(list: &FermionTermList) -> PauliSum {
    let mut out = PauliSum::identity(list.n_spin, list.constant);
    for term in &list.terms {
        out.add(
            &jordan_wigner_term(term, list.n_spin),
            Complex64::new(1.0, 0.0),
        );
    }
    out.n_qubits = list.n_spin;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fermion::TermKind;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliString::single(0, 'X');
        let y = PauliString::single(0, 'Y');
        let z = PauliString::single(0, 'Z');
        // XY = iZ
        let xy = x.mul(&y);
        assert_eq!((xy.x, xy.z), (z.x, z.z));
        assert_eq!(xy.prefactor(), c(0.0, 1.0));
        // ZX = iY, YZ = iX
        let zx = z.mul(&x);
        assert_eq!(zx.prefactor() * i_pow(4 - y.phase as u32), c(0.0, 1.0));
        assert!(y.is_hermitian() && !xy.is_hermitian());
    }

    #[test]
    fn x_z_commutator() {
        let comm = pauli_commutator(&PauliString::single(0, 'X'), &PauliString::single(0, 'Z'));
        assert_eq!(comm.len(), 1);
        let (s, coeff) = comm.strings().next().unwrap();
        assert_eq!(s.label(1), "Y");
        assert!((coeff - c(0.0, -2.0)).norm() < 1e-15);
    }

    #[test]
    fn disjoint_support_commutes() {
        let a = PauliString::from_label("XX").unwrap();
        let b = PauliString::from_label("IIZ").unwrap();
        assert!(pauli_commutator(&a, &b).is_empty());
    }

    #[test]
    fn number_operator_image() {
        let term = FermionTerm {
            weight: 1.0,
            kind: TermKind::Number,
            indices: vec![2],
        };
        let sum = jordan_wigner_term(&term, 3);
        assert_eq!(sum.len(), 2);
        assert!((sum.identity_coefficient() - c(0.5, 0.0)).norm() < 1e-15);
        let z2 = sum.terms[&(0, 0b100)];
        assert!((z2 - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn adjacent_hopping_image() {
        let term = FermionTerm {
            weight: 1.0,
            kind: TermKind::Hopping,
            indices: vec![0, 1],
        };
        let sum = jordan_wigner_term(&term, 2);
        let labels: Vec<_> = sum.strings().map(|(s, c)| (s.label(2), c.re)).collect();
        assert_eq!(
            labels,
            vec![("XX".to_string(), 0.5), ("YY".to_string(), 0.5)]
        );
    }

    #[test]
    fn one_norm_skips_identity() {
        let mut sum = PauliSum::identity(1, 7.0);
        sum.add_string(PauliString::single(0, 'X'), c(1.0, 0.0));
        sum.add_string(PauliString::single(0, 'Z'), c(-0.5, 0.0));
        assert_eq!(pauli_one_norm(&sum), 1.5);
        assert_eq!(pauli_one_norm(&PauliSum::new(2)), 0.0);
    }

    #[test]
    fn z0_matrix_ordering() {
        let mut sum = PauliSum::new(2);
        sum.add_string(PauliString::single(0, 'Z'), c(1.0, 0.0));
        let m = sum.to_matrix().unwrap();
        // Qubit 0 is the least significant bit of the basis index.
        let diag: Vec<f64> = (0..4).map(|k| m.matrix()[(k, k)].re).collect();
        assert_eq!(diag, vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn identity_matrix() {
        let m = PauliSum::identity(1, 1.0).to_matrix().unwrap();
        assert_eq!(m.matrix(), &DMatrix::identity(2, 2));
    }

    #[test]
    fn json_round_trip() {
        let mut sum = PauliSum::identity(3, 0.25);
        sum.add_string(PauliString::from_label("XZY").unwrap(), c(-1.5, 0.0));
        let text = serde_json::to_string(&sum).unwrap();
        assert!(text.contains("\"XZY\""));
        let back: PauliSum = serde_json::from_str(&text).unwrap();
        assert_eq!(back.terms, sum.terms);
    }
}
