//! Trotter-error measures: exact ground-energy shifts, state overlaps,
//! perturbative estimates and commutator bounds.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{SequenceKernels, TermKernel};
use crate::fermion::{apply_word, FermionTerm};
use crate::linalg::{
    block_partition, c64, effective_spectrum, ground_from_eigensystem, hermitian_eigen,
    hermitian_eigen_matrix, hermitian_spectral_norm, max_abs, spectral_function, submatrix,
    DenseOperator, Eigensystem, StateVector,
};
use crate::ordering::OrderingSpec;
use crate::propagators::trotter_propagator;
use crate::terms::{Representation, Term, TermSequence};

/// Default ACF length; the energy grid spacing is `2 pi / (n t)`.
pub const DEFAULT_ACF_STEPS: usize = 1 << 16;
/// Spectral peaks below this fraction of the global maximum are ignored.
const PEAK_THRESHOLD: f64 = 1e-3;
/// Eigenvalues closer than this to `E0` are left out of the second-order sum.
const DEGENERACY_TOL: f64 = 1e-10;
/// Cache of `H_k psi` vectors allowed before falling back to recomputation.
pub const DEFAULT_CACHE_BYTES: usize = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    HeffDiag,
    AcfIft,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "heff" | "heff_diag" => Ok(Self::HeffDiag),
            "acf" | "acf_ift" => Ok(Self::AcfIft),
            other => Err(format!("unknown method `{other}` (expected heff or acf)")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<Representation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ordering: Option<OrderingSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrotterErrorReport {
    pub e0_exact: f64,
    pub e0_trotter: f64,
    pub delta_e0: f64,
    pub method: Method,
    /// Energy grid spacing of the spectral route.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    pub t: f64,
    #[serde(default)]
    pub metadata: ReportMetadata,
}

impl TrotterErrorReport {
    fn new(e0_exact: f64, e0_trotter: f64, method: Method, precision: Option<f64>, t: f64) -> Self {
        Self {
            e0_exact,
            e0_trotter,
            delta_e0: e0_trotter - e0_exact,
            method,
            precision,
            t,
            metadata: ReportMetadata::default(),
        }
    }
}

/// Exact Hamiltonian with its eigensystem and ground state.
#[derive(Debug, Clone)]
pub struct Reference {
    pub h: DenseOperator,
    pub eig: Eigensystem,
    pub e0: f64,
    pub psi0: StateVector,
}

impl Reference {
    pub fn new(h: DenseOperator) -> Result<Self> {
        let eig = hermitian_eigen(&h)?;
        let (e0, psi0) = ground_from_eigensystem(&eig)?;
        Ok(Self { h, eig, e0, psi0 })
    }

    /// `exp(-i H t) psi`
    pub fn evolve(&self, psi: &StateVector, t: f64) -> StateVector {
        let op = spectral_function(&self.eig, |e| Complex64::from_polar(1.0, -e * t));
        let m = DMatrix::from_column_slice(psi.amplitudes.len(), 1, psi.amplitudes.as_slice());
        StateVector {
            amplitudes: DVector::from_column_slice(op.left_mul(&m).as_slice()),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::NonPositiveTime(t));
    }
    Ok(())
}

/// Ground energies of `H` and of `H_eff = i ln(u) / t`.
pub fn delta_e0_heff(
    u_trotter: &DenseOperator,
    h: &DenseOperator,
    t: f64,
) -> Result<TrotterErrorReport> {
    check_time(t)?;
    let eig = hermitian_eigen(h)?;
    heff_report(u_trotter, eig.min_value(), t)
}

pub(crate) fn heff_report(
    u_trotter: &DenseOperator,
    e0_exact: f64,
    t: f64,
) -> Result<TrotterErrorReport> {
    let spectrum = effective_spectrum(u_trotter, t)?;
    Ok(TrotterErrorReport::new(
        e0_exact,
        spectrum[0],
        Method::HeffDiag,
        None,
        t,
    ))
}

/// Lowest ground energy of the effective Hamiltonian of `u`.
pub fn effective_ground_energy(u: &DenseOperator, t: f64) -> Result<f64> {
    Ok(effective_spectrum(u, t)?[0])
}

/// Ground energies from the spectra of the autocorrelation functions
/// `<psi0|U^k psi0>` and `<psi0|U_T^k psi0>`.
pub fn delta_e0_acf(
    h: &DenseOperator,
    terms: &TermSequence,
    t: f64,
    n_steps: usize,
) -> Result<TrotterErrorReport> {
    check_time(t)?;
    let reference = Reference::new(h.clone())?;
    acf_report(&reference, terms, t, n_steps)
}

pub fn acf_report(
    reference: &Reference,
    terms: &TermSequence,
    t: f64,
    n_steps: usize,
) -> Result<TrotterErrorReport> {
    check_time(t)?;
    if n_steps < 8 {
        return Err(Error::Config(format!(
            "ACF needs at least 8 samples, got {n_steps}"
        )));
    }
    let reach = reference
        .eig
        .min_value()
        .abs()
        .max(reference.eig.max_value().abs())
        * t;
    if reach >= std::f64::consts::PI {
        return Err(Error::Nyquist(reach));
    }
    let u_trotter = trotter_propagator(terms, t)?;
    let u_exact = crate::linalg::exact_propagator(&reference.h, t)?;
    let psi = &reference.psi0.amplitudes;

    let exact_acf = sample_acf(u_exact.matrix(), psi, n_steps);
    let trotter_acf = sample_acf(u_trotter.matrix(), psi, n_steps);
    let e_exact = spectral_ground_energy(&exact_acf, t)?;
    let e_trotter = spectral_ground_energy(&trotter_acf, t)?;
    let precision = std::f64::consts::TAU / (n_steps as f64 * t);
    Ok(TrotterErrorReport::new(
        e_exact,
        e_trotter,
        Method::AcfIft,
        Some(precision),
        t,
    ))
}

/// `<psi|U^k psi>` for `k = 0..n`, iterating only on the blocks of `u` that
/// the support of `psi` touches.
pub fn sample_acf(u: &DMatrix<Complex64>, psi: &DVector<Complex64>, n: usize) -> Vec<Complex64> {
    let blocks = block_partition(u);
    let support: Vec<usize> = blocks
        .into_iter()
        .filter(|b| b.iter().any(|&i| psi[i].norm() > 1e-14))
        .flatten()
        .collect();
    let sub = submatrix(u, &support);
    let start = DVector::from_iterator(support.len(), support.iter().map(|&i| psi[i]));
    let mut v = start.clone();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(start.dotc(&v));
        v = &sub * v;
    }
    out
}

/// Lowest-energy spectral peak of a sampled `sum_j w_j exp(-i E_j k t)`.
pub fn spectral_ground_energy(acf: &[Complex64], t: f64) -> Result<f64> {
    let n = acf.len();
    let mut buf: Vec<Complex64> = acf
        .iter()
        .enumerate()
        .map(|(k, c)| c * (0.5 - 0.5 * (std::f64::consts::TAU * k as f64 / n as f64).cos()))
        .collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);
    let power: Vec<f64> = buf.iter().map(|c| c.norm_sqr()).collect();
    let max = power.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::Config("autocorrelation function vanishes".into()));
    }
    // Bin j carries energy -2 pi j_signed / (n t): scanning j_signed from
    // n/2 downwards visits energies in ascending order.
    let signed = |j: usize| {
        if j > n / 2 {
            j as i64 - n as i64
        } else {
            j as i64
        }
    };
    let mut bins: Vec<usize> = (0..n).collect();
    bins.sort_by_key(|&j| std::cmp::Reverse(signed(j)));
    let at = |j: i64| power[j.rem_euclid(n as i64) as usize];
    let peak = bins
        .into_iter()
        .find(|&j| {
            let js = j as i64;
            power[j] >= PEAK_THRESHOLD * max && power[j] >= at(js - 1) && power[j] >= at(js + 1)
        })
        .expect("the global maximum is a local maximum");
    let js = signed(peak);
    // Under a Hann window a tone at bin offset d has neighbour magnitudes
    // |X+-| = (1 +- d) / (2 -+ d) |X0|, which this ratio inverts exactly.
    let (m0, mm, mp) = (at(js).sqrt(), at(js - 1).sqrt(), at(js + 1).sqrt());
    let delta = 2.0 * (mp - mm) / (mm + 2.0 * m0 + mp);
    Ok(-std::f64::consts::TAU * (js as f64 + delta) / (n as f64 * t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fidelity {
    /// `1 - <U psi | U_T psi>`
    pub f_re: f64,
    pub f_im: f64,
    pub abs_f: f64,
    pub abs_one_minus_f: f64,
}

impl Fidelity {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.f_re, self.f_im)
    }
}

fn trotter_state(terms: &TermSequence, psi: &StateVector, t: f64) -> StateVector {
    let kernels = SequenceKernels::new(terms);
    let mut v = psi.amplitudes.clone();
    kernels.step_columns(t, v.as_mut_slice());
    StateVector { amplitudes: v }
}

/// `f(t) = 1 - <exp(-iHt) psi | U_T psi>`, `psi` defaulting to the ground
/// state of `h`.
pub fn fidelity_error(
    h: &DenseOperator,
    terms: &TermSequence,
    t: f64,
    psi: Option<&StateVector>,
) -> Result<Fidelity> {
    let reference = Reference::new(h.clone())?;
    Ok(fidelity_with(&reference, terms, t, psi))
}

pub fn fidelity_with(
    reference: &Reference,
    terms: &TermSequence,
    t: f64,
    psi: Option<&StateVector>,
) -> Fidelity {
    let psi = psi.unwrap_or(&reference.psi0);
    let exact = reference.evolve(psi, t);
    let trotter = trotter_state(terms, psi, t);
    let f = c64(1.0) - exact.inner(&trotter);
    Fidelity {
        f_re: f.re,
        f_im: f.im,
        abs_f: f.norm(),
        abs_one_minus_f: (c64(1.0) - f).norm(),
    }
}

/// `g(t) = |<psi0|exp(-iHt) psi0> - <psi0|U_T psi0>|` after one step.
pub fn acf_offset(h: &DenseOperator, terms: &TermSequence, t: f64) -> Result<f64> {
    let reference = Reference::new(h.clone())?;
    Ok(acf_offset_with(&reference, terms, t))
}

pub fn acf_offset_with(reference: &Reference, terms: &TermSequence, t: f64) -> f64 {
    let psi = &reference.psi0;
    let exact = psi.inner(&reference.evolve(psi, t));
    let trotter = psi.inner(&trotter_state(terms, psi, t));
    (exact - trotter).norm()
}

/// `|| exp(-iHt) psi - U_T psi ||`
pub fn wavefunction_difference(
    h: &DenseOperator,
    terms: &TermSequence,
    t: f64,
    psi: &StateVector,
) -> Result<f64> {
    let reference = Reference::new(h.clone())?;
    Ok(wavefunction_difference_with(&reference, terms, t, psi))
}

pub fn wavefunction_difference_with(
    reference: &Reference,
    terms: &TermSequence,
    t: f64,
    psi: &StateVector,
) -> f64 {
    let exact = reference.evolve(psi, t);
    let trotter = trotter_state(terms, psi, t);
    (exact.amplitudes - trotter.amplitudes).norm()
}

fn kernels_of(terms: &TermSequence) -> Vec<TermKernel> {
    terms
        .terms
        .iter()
        .map(|t| TermKernel::new(t, terms.n_qubits))
        .collect()
}

fn apply(kernel: &TermKernel, psi: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![c64(0.0); psi.len()];
    kernel.apply_generator(psi, &mut out, c64(1.0));
    out
}

fn dotc(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy(acc: &mut [Complex64], x: &[Complex64], s: f64) {
    acc.iter_mut().zip(x).for_each(|(a, b)| *a += b * s);
}

/// `<psi|v2|psi>` with
/// `v2 = -1/3 sum_{a<b} sum_{c>=b} (1 - delta_bc / 2) [H_c, [H_b, H_a]]`.
pub fn v2_expectation(terms: &TermSequence, psi: &StateVector) -> f64 {
    v2_expectation_with_budget(terms, psi, DEFAULT_CACHE_BYTES)
}

pub fn v2_expectation_with_budget(
    terms: &TermSequence,
    psi: &StateVector,
    cache_bytes: usize,
) -> f64 {
    let kernels = kernels_of(terms);
    let psi = psi.amplitudes.as_slice();
    let g = kernels.len();
    if g < 2 {
        return 0.0;
    }
    let cache = g * psi.len() * std::mem::size_of::<Complex64>();
    let per_b: Vec<f64> = if cache <= cache_bytes {
        let phi: Vec<Vec<Complex64>> = kernels.par_iter().map(|k| apply(k, psi)).collect();
        // tau_b = phi_b / 2 + sum_{c>b} phi_c ; p_b = sum_{a<b} phi_a
        let mut suffix = vec![vec![c64(0.0); psi.len()]; g + 1];
        for b in (0..g).rev() {
            let mut s = suffix[b + 1].clone();
            axpy(&mut s, &phi[b], 1.0);
            suffix[b] = s;
        }
        let mut prefix = vec![vec![c64(0.0); psi.len()]; g];
        for b in 1..g {
            let mut p = prefix[b - 1].clone();
            axpy(&mut p, &phi[b - 1], 1.0);
            prefix[b] = p;
        }
        (1..g)
            .into_par_iter()
            .map(|b| {
                let mut tau = suffix[b + 1].clone();
                axpy(&mut tau, &phi[b], 0.5);
                let h_tau = apply(&kernels[b], &tau);
                let mut first = dotc(&h_tau, &prefix[b]).re;
                let mut second = 0.0;
                for kernel in &kernels[..b] {
                    second += dotc(&tau, &apply(kernel, &phi[b])).re;
                }
                first *= 2.0;
                first - 2.0 * second
            })
            .collect()
    } else {
        log::warn!("v2 vector cache of {cache} bytes exceeds budget; recomputing term actions");
        (1..g)
            .into_par_iter()
            .map(|b| {
                let mut acc = 0.0;
                for a in 0..b {
                    for c in b..g {
                        let w = if c == b { 0.5 } else { 1.0 };
                        acc += w * double_commutator(&kernels[c], &kernels[b], &kernels[a], psi);
                    }
                }
                acc
            })
            .collect()
    };
    -per_b.iter().sum::<f64>() / 3.0
}

/// `<psi|[C, [B, A]]|psi>` from term actions alone.
fn double_commutator(c: &TermKernel, b: &TermKernel, a: &TermKernel, psi: &[Complex64]) -> f64 {
    let ap = apply(a, psi);
    let bp = apply(b, psi);
    let cp = apply(c, psi);
    // <C B A> + <A B C> - <C A B> - <B A C>, using hermiticity.
    let cba = dotc(&apply(b, &cp), &ap);
    let cab = dotc(&apply(a, &cp), &bp);
    2.0 * cba.re - 2.0 * cab.re
}

/// `|<psi|v2|psi>|`
pub fn epsilon_2(terms: &TermSequence, psi: &StateVector) -> f64 {
    v2_expectation(terms, psi).abs()
}

/// `V1 psi` with `V1 = -(i/2) sum_{a<b} [H_b, H_a]`.
pub fn v1_apply(terms: &TermSequence, psi: &StateVector) -> DVector<Complex64> {
    let kernels = kernels_of(terms);
    let psi = psi.amplitudes.as_slice();
    let g = kernels.len();
    let dim = psi.len();
    let phi: Vec<Vec<Complex64>> = kernels.iter().map(|k| apply(k, psi)).collect();
    let mut out = vec![c64(0.0); dim];
    let mut prefix = vec![c64(0.0); dim];
    for b in 0..g {
        kernels[b].apply_generator(&prefix, &mut out, c64(1.0));
        axpy(&mut prefix, &phi[b], 1.0);
    }
    let mut suffix = vec![c64(0.0); dim];
    for a in (0..g).rev() {
        kernels[a].apply_generator(&suffix, &mut out, c64(-1.0));
        axpy(&mut suffix, &phi[a], 1.0);
    }
    DVector::from_iterator(dim, out.into_iter().map(|v| v * Complex64::new(0.0, -0.5)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtEstimate {
    /// `<psi0|v2|psi0>`
    pub v2: f64,
    /// `sum_{n>0} |<n|V1|0>|^2 / (E0 - En)`
    pub second_order: f64,
    /// `|<v2>| t^2 + second_order t^2`
    pub as_written: f64,
    /// `(<v2> + second_order) t^2`
    pub signed: f64,
    /// `<psi0|V1|psi0>`, zero for real ground states and real terms.
    pub v1_re: f64,
    pub v1_im: f64,
    pub excluded_degenerate: usize,
    pub t: f64,
}

pub fn delta_e_pt(terms: &TermSequence, h: &DenseOperator, t: f64) -> Result<PtEstimate> {
    let reference = Reference::new(h.clone())?;
    Ok(delta_e_pt_with(&reference, terms, t))
}

pub fn delta_e_pt_with(reference: &Reference, terms: &TermSequence, t: f64) -> PtEstimate {
    let v2 = v2_expectation(terms, &reference.psi0);
    let v1_psi = v1_apply(terms, &reference.psi0);
    let v1_0 = reference.psi0.amplitudes.dotc(&v1_psi);
    let e0 = reference.e0;
    let mut second = 0.0;
    let mut excluded = 0usize;
    for block in &reference.eig.blocks {
        for (k, &en) in block.values.iter().enumerate() {
            let overlap: Complex64 = block
                .indices
                .iter()
                .enumerate()
                .map(|(local, &global)| block.vectors[(local, k)].conj() * v1_psi[global])
                .sum();
            if (en - e0).abs() < DEGENERACY_TOL {
                if overlap.norm() > 1e-10 {
                    excluded += 1;
                }
                continue;
            }
            second += overlap.norm_sqr() / (e0 - en);
        }
    }
    if excluded > 0 {
        log::warn!(
            "{excluded} states degenerate with the ground state couple through V1; left out"
        );
    }
    PtEstimate {
        v2,
        second_order: second,
        as_written: (v2.abs() + second) * t * t,
        signed: (v2 + second) * t * t,
        v1_re: v1_0.re,
        v1_im: v1_0.im,
        excluded_degenerate: excluded,
        t,
    }
}

/// Sparse term matrix as `(row, col, value)` triplets.
fn sparse_term(kernel: &TermKernel, dim: usize) -> Vec<(usize, usize, Complex64)> {
    let mut entries = Vec::new();
    let mut col = vec![c64(0.0); dim];
    let mut unit = vec![c64(0.0); dim];
    for y in 0..dim {
        unit[y] = c64(1.0);
        col.iter_mut().for_each(|v| *v = c64(0.0));
        kernel.apply_generator(&unit, &mut col, c64(1.0));
        for (r, v) in col.iter().enumerate() {
            if v.norm() > 1e-15 {
                entries.push((r, y, *v));
            }
        }
        unit[y] = c64(0.0);
    }
    entries
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaBound {
    /// `sum_a || sum_{b>a} [H_b, H_a] ||`
    pub alpha: f64,
}

impl AlphaBound {
    /// Bound on `|dE0|` for step `t`.
    pub fn energy_bound(&self, t: f64) -> f64 {
        t * self.alpha / 2.0
    }

    /// Bound on `||U_T - U||` for step `t`.
    pub fn propagator_bound(&self, t: f64) -> f64 {
        t * t * self.alpha / 2.0
    }
}

pub fn alpha_bound(terms: &TermSequence) -> Result<AlphaBound> {
    crate::linalg::check_dense(terms.n_qubits, "commutator bound")?;
    let dim = 1usize << terms.n_qubits;
    let kernels = kernels_of(terms);
    let sparse: Vec<_> = kernels.iter().map(|k| sparse_term(k, dim)).collect();
    // Walk from the back so `suffix` is sum_{b>a} H_b; commutators are
    // formed in chunks and their norms taken in parallel.
    const CHUNK: usize = 32;
    let mut suffix = DMatrix::<Complex64>::zeros(dim, dim);
    let mut alpha = 0.0;
    let order: Vec<usize> = (0..sparse.len()).rev().collect();
    for chunk in order.chunks(CHUNK) {
        let mut commutators = Vec::with_capacity(chunk.len());
        for &a in chunk {
            let mut m = DMatrix::<Complex64>::zeros(dim, dim);
            for &(r, c, v) in &sparse[a] {
                // (S H)[:, c] += v S[:, r] ; (H S)[r, :] += v S[c, :]
                for i in 0..dim {
                    m[(i, c)] += v * suffix[(i, r)];
                    m[(r, i)] -= v * suffix[(c, i)];
                }
            }
            commutators.push(m);
            for &(r, c, v) in &sparse[a] {
                suffix[(r, c)] += v;
            }
        }
        let norms: Vec<f64> = commutators
            .into_par_iter()
            .map(|m| {
                if max_abs(&m) == 0.0 {
                    0.0
                } else {
                    hermitian_spectral_norm(&(m * Complex64::new(0.0, 1.0)))
                }
            })
            .collect();
        alpha += norms.iter().sum::<f64>();
    }
    Ok(AlphaBound { alpha })
}

/// Spectral norm of `F` evaluated on the modes it touches.
fn operator_norm(term: &FermionTerm) -> f64 {
    let mut modes: Vec<usize> = term.indices.clone();
    modes.sort_unstable();
    modes.dedup();
    let local = FermionTerm {
        weight: 1.0,
        kind: term.kind,
        indices: term
            .indices
            .iter()
            .map(|m| modes.iter().position(|x| x == m).unwrap())
            .collect(),
    };
    let n = modes.len();
    let dim = 1usize << n;
    let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
    for word in local.words() {
        for y in 0..dim {
            if let Some((target, sign)) = apply_word(&word, y as u64) {
                mat[(target as usize, y)] += c64(sign);
            }
        }
    }
    hermitian_spectral_norm(&mat)
}

/// `sum_{a<b} 2 |h_a| |h_b| ||F_a|| ||F_b||`, an upper bound on alpha.
pub fn lambda_squared_bound(terms: &TermSequence) -> f64 {
    let scaled: Vec<f64> = terms
        .terms
        .iter()
        .map(|t| match t {
            Term::Fermion(f) => f.weight.abs() * operator_norm(f),
            Term::Pauli { weight, .. } => weight.abs(),
        })
        .collect();
    let total: f64 = scaled.iter().sum();
    let squares: f64 = scaled.iter().map(|x| x * x).sum();
    total * total - squares
}

/// Largest singular value of `U_T - U`.
pub fn propagator_error_norm(u_trotter: &DenseOperator, u_exact: &DenseOperator) -> f64 {
    let diff = u_trotter.matrix() - u_exact.matrix();
    let gram = diff.adjoint() * &diff;
    let eig = hermitian_eigen_matrix(&gram);
    eig.max_value().max(0.0).sqrt()
}
