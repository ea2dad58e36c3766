//! Orbital-basis and ordering experiments: angle sweeps, error
//! distributions, random composite propagators and bisection for a basis
//! without Trotter error.
//!
//! Every energy is the ground energy of an effective Hamiltonian, and every
//! `delta_e0` is measured against the exact ground energy of the reference
//! basis (the spectrum does not depend on the basis). Randomness comes from
//! ChaCha20 seeded with the experiment seed; sample `s`, constituent `n`
//! draws from stream `(s << 16) | n`, so results do not depend on the number
//! of worker threads.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrals::{parse_fcidump, to_spin_orbitals, SpinOrbitalIntegrals};
use crate::linalg::{hermitian_eigen, trotter_time_step, SpectrumWindow};
use crate::metrics::{effective_ground_energy, Reference};
use crate::orbital::{random_basis_from, rotation_unitary_fock, transform_integrals, GivensVector};
use crate::ordering::{order_terms, OrderingSpec};
use crate::propagators::{
    eta_basis_propagator, eta_ordering_propagator, trotter_propagator, CompositePropagator,
};
use crate::terms::{Representation, SequenceBuilder, TermSequence};

pub const DEFAULT_GRID_POINTS: usize = 360;
pub const BISECTION_CAP: usize = 200;

/// Time step in normalized units, `0.95 pi`.
pub const NORMALIZED_TIME_STEP: f64 = 0.95 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TimeRule {
    /// `0.95 pi` on normalized spectra, `0.95 pi / |E0|` otherwise with `E0`
    /// the ground energy without the core energy.
    #[default]
    Standard,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    /// Random orbital basis per sample, configured ordering.
    #[default]
    RandomBasis,
    /// Random ordering per sample, reference basis.
    RandomOrdering,
}

fn default_ordering() -> OrderingSpec {
    OrderingSpec::Magnitude
}
fn default_prune() -> f64 {
    crate::fermion::DEFAULT_PRUNE
}
fn default_true() -> bool {
    true
}
fn default_samples() -> usize {
    1000
}
fn default_eta() -> usize {
    1
}
fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}
fn default_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// FCIDUMP file, relative paths resolved against the config file.
    pub system: PathBuf,
    #[serde(default)]
    pub representation: Representation,
    #[serde(default = "default_ordering")]
    pub ordering: OrderingSpec,
    #[serde(default = "default_prune")]
    pub prune: f64,
    #[serde(default = "default_true")]
    pub normalize: bool,
    #[serde(default)]
    pub t_rule: TimeRule,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_eta")]
    pub eta: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: SampleMode,
    /// Spatial pair `(p, q)` for sweeps and bisection.
    #[serde(default)]
    pub pair: Option<[usize; 2]>,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// Angle bracket for bisection.
    #[serde(default)]
    pub bracket: Option<[f64; 2]>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(system: impl Into<PathBuf>) -> Self {
        Self {
            system: system.into(),
            representation: Representation::default(),
            ordering: default_ordering(),
            prune: default_prune(),
            normalize: true,
            t_rule: TimeRule::default(),
            samples: default_samples(),
            eta: default_eta(),
            seed: 0,
            mode: SampleMode::default(),
            pair: None,
            grid_points: DEFAULT_GRID_POINTS,
            bracket: None,
            tolerance: default_tolerance(),
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.samples == 0 {
            return fail("samples must be at least 1");
        }
        if self.eta == 0 {
            return fail("eta must be at least 1");
        }
        if self.prune.is_nan() || self.prune < 0.0 {
            return fail("prune must be nonnegative");
        }
        if self.grid_points == 0 {
            return fail("grid_points must be at least 1");
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return fail("tolerance must be positive");
        }
        if let TimeRule::Fixed(t) = self.t_rule {
            if t <= 0.0 || !t.is_finite() {
                return Err(Error::NonPositiveTime(t));
            }
        }
        Ok(())
    }

    /// Parses JSON and resolves `system` and `output` relative to `base`.
    pub fn from_json(text: &str, base: Option<&Path>) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let mut config: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Config(format!("{} at `{}`", e.inner(), e.path())))?;
        if let Some(base) = base {
            if config.system.is_relative() {
                config.system = base.join(&config.system);
            }
            if let Some(out) = config.output.as_mut().filter(|o| o.is_relative()) {
                *out = base.join(&*out);
            }
        }
        config.validate()?;
        Ok(config)
    }
}

/// Integrals, term construction and exact reference shared by all samples.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub ints: SpinOrbitalIntegrals,
    pub builder: SequenceBuilder,
    pub ordering: OrderingSpec,
    /// Exact Hamiltonian of the reference basis, in the builder's units.
    pub reference: Reference,
    pub t: f64,
}

impl Experiment {
    pub fn new(
        ints: SpinOrbitalIntegrals,
        representation: Representation,
        ordering: OrderingSpec,
        prune: f64,
        normalize: bool,
        t_rule: TimeRule,
    ) -> Result<Self> {
        let mut builder = SequenceBuilder::new(representation, prune);
        let raw = builder.build_raw(&ints).to_matrix()?;
        if normalize {
            let eig = hermitian_eigen(&raw)?;
            builder = builder.with_window(SpectrumWindow::new(eig.min_value(), eig.max_value())?);
        }
        let h = builder.build(&ints).to_matrix()?;
        let reference = Reference::new(h)?;
        let t = match t_rule {
            TimeRule::Fixed(t) if t > 0.0 && t.is_finite() => t,
            TimeRule::Fixed(t) => return Err(Error::NonPositiveTime(t)),
            TimeRule::Standard if normalize => NORMALIZED_TIME_STEP,
            // The core energy only shifts the phase; the step follows the electronic energy.
            TimeRule::Standard => trotter_time_step(reference.e0 - ints.core_energy)?,
        };
        Ok(Self {
            ints,
            builder,
            ordering,
            reference,
            t,
        })
    }

    pub fn from_config(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let text = std::fs::read_to_string(&config.system)?;
        let data = parse_fcidump(&text)?;
        for w in &data.warnings {
            log::warn!("{}: {w}", config.system.display());
        }
        Self::new(
            to_spin_orbitals(&data),
            config.representation,
            config.ordering.clone(),
            config.prune,
            config.normalize,
            config.t_rule,
        )
    }

    pub fn n_spatial(&self) -> usize {
        self.ints.n_spin / 2
    }

    pub fn e0(&self) -> f64 {
        self.reference.e0
    }

    /// Ordered term sequence of the Hamiltonian rotated into `basis`.
    pub fn sequence(&self, basis: &GivensVector) -> Result<TermSequence> {
        let seq = if basis.is_zero() {
            self.builder.build(&self.ints)
        } else {
            self.builder.build(&transform_integrals(&self.ints, basis)?)
        };
        Ok(order_terms(&seq, &self.ordering)?.sequence)
    }

    /// Effective ground energy of one Trotter step of `seq` with length `step`.
    pub fn trotter_energy(&self, seq: &TermSequence, step: f64) -> Result<f64> {
        effective_ground_energy(&trotter_propagator(seq, step)?, step)
    }

    /// Single-basis `delta_e0` at the experiment's time step.
    pub fn basis_error(&self, basis: &GivensVector) -> Result<f64> {
        Ok(self.trotter_energy(&self.sequence(basis)?, self.t)? - self.e0())
    }

    /// The spatial pair to vary: `pair` if given, else the only pair of a
    /// two-orbital system.
    pub fn sweep_pair(&self, pair: Option<[usize; 2]>) -> Result<(usize, usize)> {
        match pair {
            Some([p, q]) if p < q && q < self.n_spatial() => Ok((p, q)),
            Some([p, q]) => Err(Error::Config(format!(
                "pair ({p}, {q}) is not p < q < {}",
                self.n_spatial()
            ))),
            None if self.n_spatial() == 2 => Ok((0, 1)),
            None => Err(Error::Config(format!(
                "{} spatial orbitals: choose a pair to vary",
                self.n_spatial()
            ))),
        }
    }

    fn rng(&self, seed: u64, sample: usize, sub: usize) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(((sample as u64) << 16) | sub as u64);
        rng
    }

    fn random_ordering(&self, seed: u64, sample: usize, sub: usize) -> OrderingSpec {
        OrderingSpec::Random {
            seed,
            stream: ((sample as u64) << 16) | sub as u64,
        }
    }
}

/// `n` equally spaced angles on `[0, 2 pi)`.
pub fn default_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta: f64,
    /// Constituent in the reference basis, step `t / 2`.
    pub e_first: f64,
    /// Constituent in the basis rotated by `theta`, step `t / 2`.
    pub e_second: f64,
    /// Two-basis propagator over `t`.
    pub e_combined: f64,
    pub delta_first: f64,
    pub delta_second: f64,
    pub delta_combined: f64,
}

impl SweepRow {
    /// Whether the combined energy lies within the constituents' range.
    pub fn is_between(&self, slack: f64) -> bool {
        let lo = self.e_first.min(self.e_second) - slack;
        let hi = self.e_first.max(self.e_second) + slack;
        (lo..=hi).contains(&self.e_combined)
    }
}

/// Two-basis propagators with the first basis fixed at the reference and the
/// second rotated by each `theta` of `grid` on `pair`.
pub fn angle_sweep(exp: &Experiment, pair: (usize, usize), grid: &[f64]) -> Result<Vec<SweepRow>> {
    let n = exp.n_spatial();
    let half = exp.t / 2.0;
    let first_seq = exp.sequence(&GivensVector::zeros(n))?;
    let first = trotter_propagator(&first_seq, half)?;
    let e_first = effective_ground_energy(&first, half)?;
    let e0 = exp.e0();
    grid.par_iter()
        .map(|&theta| {
            let basis = GivensVector::single(n, pair, theta)?;
            let second = trotter_propagator(&exp.sequence(&basis)?, half)?;
            let e_second = effective_ground_energy(&second, half)?;
            let r = rotation_unitary_fock(&basis, exp.ints.n_spin)?;
            let combined = r.adjoint().compose(&second).compose(&r).compose(&first);
            let e_combined = effective_ground_energy(&combined, exp.t)?;
            Ok(SweepRow {
                theta,
                e_first,
                e_second,
                e_combined,
                delta_first: e_first - e0,
                delta_second: e_second - e0,
                delta_combined: e_combined - e0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<f64>>,
    /// 1-based positions into the index-ordered sequence.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    pub e0_trotter: f64,
    pub delta_e0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub std_dev: f64,
    /// Fraction of samples with `delta_e0 < 0`.
    pub negative_fraction: f64,
    /// `delta_e0` of the reference basis with the configured ordering.
    pub reference_delta_e0: f64,
}

impl EnsembleSummary {
    fn from_deltas(deltas: &[f64], reference_delta_e0: f64) -> Self {
        let count = deltas.len();
        let n = count.max(1) as f64;
        let mean = deltas.iter().sum::<f64>() / n;
        let var = deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / n;
        Self {
            count,
            mean,
            min: deltas.iter().copied().fold(f64::INFINITY, f64::min),
            max: deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            std_dev: var.sqrt(),
            negative_fraction: deltas.iter().filter(|&&d| d < 0.0).count() as f64 / n,
            reference_delta_e0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub mode: SampleMode,
    pub seed: u64,
    pub t: f64,
    pub e0_exact: f64,
    pub records: Vec<EnsembleRecord>,
    pub summary: EnsembleSummary,
}

fn sample_one(
    exp: &Experiment,
    mode: SampleMode,
    seed: u64,
    index: usize,
    sub: usize,
) -> Result<(EnsembleRecord, TermSequence)> {
    let n = exp.n_spatial();
    let (seq, basis, permutation) = match mode {
        SampleMode::RandomBasis => {
            let basis = random_basis_from(&mut exp.rng(seed, index, sub), n);
            (exp.sequence(&basis)?, Some(basis.angles().to_vec()), None)
        }
        SampleMode::RandomOrdering => {
            let base = exp.builder.build(&exp.ints);
            let ordered = order_terms(&base, &exp.random_ordering(seed, index, sub))?;
            let perm = ordered.source.iter().map(|s| s + 1).collect();
            (ordered.sequence, None, Some(perm))
        }
    };
    let e0_trotter = exp.trotter_energy(&seq, exp.t)?;
    Ok((
        EnsembleRecord {
            index,
            basis,
            permutation,
            e0_trotter,
            delta_e0: e0_trotter - exp.e0(),
        },
        seq,
    ))
}

/// Trotter errors of `samples` random bases or random orderings.
pub fn sample_error_distribution(
    exp: &Experiment,
    mode: SampleMode,
    samples: usize,
    seed: u64,
) -> Result<EnsembleResult> {
    let records = (0..samples)
        .into_par_iter()
        .map(|s| sample_one(exp, mode, seed, s, 0).map(|(r, _)| r))
        .collect::<Result<Vec<_>>>()?;
    let reference = exp.basis_error(&GivensVector::zeros(exp.n_spatial()))?;
    let deltas: Vec<f64> = records.iter().map(|r| r.delta_e0).collect();
    Ok(EnsembleResult {
        mode,
        seed,
        t: exp.t,
        e0_exact: exp.e0(),
        summary: EnsembleSummary::from_deltas(&deltas, reference),
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagatorRecord {
    pub index: usize,
    pub e0_trotter: f64,
    pub delta_e0: f64,
    /// Constituent `|delta_e0|`, each at step `t / eta`.
    pub constituent_max_abs: f64,
    pub constituent_mean_abs: f64,
    pub constituent_min_abs: f64,
    pub constituents: Vec<EnsembleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropagatorEnsemble {
    pub mode: SampleMode,
    pub eta: usize,
    pub seed: u64,
    pub t: f64,
    pub e0_exact: f64,
    pub records: Vec<PropagatorRecord>,
    pub summary: EnsembleSummary,
    /// Fraction of propagators whose `|delta_e0|` exceeds the constituent mean.
    pub magnified_fraction: f64,
    /// Fraction whose `|delta_e0|` is below every constituent.
    pub cancelled_fraction: f64,
}

fn constituent_energies(composite: &CompositePropagator) -> Result<Vec<f64>> {
    composite
        .constituents
        .iter()
        .map(|c| effective_ground_energy(&c.unitary, composite.step))
        .collect()
}

/// `count` composite propagators of `eta` random bases or orderings each.
pub fn random_propagator_ensemble(
    exp: &Experiment,
    mode: SampleMode,
    eta: usize,
    count: usize,
    seed: u64,
) -> Result<PropagatorEnsemble> {
    if eta == 0 {
        return Err(Error::Config("eta must be at least 1".into()));
    }
    let n = exp.n_spatial();
    let records = (0..count)
        .into_par_iter()
        .map(|p| {
            let (composite, mut constituents) = match mode {
                SampleMode::RandomBasis => {
                    let bases: Vec<GivensVector> = (0..eta)
                        .map(|k| random_basis_from(&mut exp.rng(seed, p, k), n))
                        .collect();
                    let c = eta_basis_propagator(
                        &exp.ints,
                        &exp.builder,
                        &exp.ordering,
                        &bases,
                        exp.t,
                    )?;
                    let recs: Vec<EnsembleRecord> = bases
                        .iter()
                        .map(|b| EnsembleRecord {
                            index: p,
                            basis: Some(b.angles().to_vec()),
                            permutation: None,
                            e0_trotter: 0.0,
                            delta_e0: 0.0,
                        })
                        .collect();
                    (c, recs)
                }
                SampleMode::RandomOrdering => {
                    let base = exp.builder.build(&exp.ints);
                    let specs: Vec<OrderingSpec> =
                        (0..eta).map(|k| exp.random_ordering(seed, p, k)).collect();
                    let recs = specs
                        .iter()
                        .map(|s| {
                            let source = order_terms(&base, s)?.source;
                            Ok(EnsembleRecord {
                                index: p,
                                basis: None,
                                permutation: Some(source.iter().map(|k| k + 1).collect()),
                                e0_trotter: 0.0,
                                delta_e0: 0.0,
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (eta_ordering_propagator(&base, &specs, exp.t)?, recs)
                }
            };
            let energies = constituent_energies(&composite)?;
            for (rec, e) in constituents.iter_mut().zip(&energies) {
                rec.e0_trotter = *e;
                rec.delta_e0 = e - exp.e0();
            }
            // A single constituent is the whole propagator.
            let e0_trotter = if eta == 1 {
                energies[0]
            } else {
                effective_ground_energy(&composite.unitary, exp.t)?
            };
            let abs: Vec<f64> = constituents.iter().map(|c| c.delta_e0.abs()).collect();
            Ok(PropagatorRecord {
                index: p,
                e0_trotter,
                delta_e0: e0_trotter - exp.e0(),
                constituent_max_abs: abs.iter().copied().fold(0.0, f64::max),
                constituent_mean_abs: abs.iter().sum::<f64>() / abs.len() as f64,
                constituent_min_abs: abs.iter().copied().fold(f64::INFINITY, f64::min),
                constituents,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = exp.basis_error(&GivensVector::zeros(n))?;
    let deltas: Vec<f64> = records.iter().map(|r| r.delta_e0).collect();
    let frac = |pred: &dyn Fn(&PropagatorRecord) -> bool| {
        records.iter().filter(|r| pred(r)).count() as f64 / records.len().max(1) as f64
    };
    let magnified_fraction = frac(&|r| r.delta_e0.abs() > r.constituent_mean_abs);
    let cancelled_fraction = frac(&|r| r.delta_e0.abs() < r.constituent_min_abs);
    Ok(PropagatorEnsemble {
        mode,
        eta,
        seed,
        t: exp.t,
        e0_exact: exp.e0(),
        summary: EnsembleSummary::from_deltas(&deltas, reference),
        records,
        magnified_fraction,
        cancelled_fraction,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BisectionResult {
    pub theta: f64,
    pub value: f64,
    pub iterations: usize,
}

/// Root of `f` on `[lo, hi]` with `|f(theta)| < tol`, by bisection.
pub fn bisect(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    tol: f64,
    cap: usize,
) -> Result<BisectionResult> {
    let (mut lo, mut hi) = (lo, hi);
    let (mut f_lo, f_hi) = (f(lo)?, f(hi)?);
    for (x, v) in [(lo, f_lo), (hi, f_hi)] {
        if v.abs() < tol {
            return Ok(BisectionResult {
                theta: x,
                value: v,
                iterations: 0,
            });
        }
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    let mut best = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for iteration in 1..=cap {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let v = f(mid)?;
        if v.abs() < best.1.abs() {
            best = (mid, v);
        }
        if v.abs() < tol {
            return Ok(BisectionResult {
                theta: mid,
                value: v,
                iterations: iteration,
            });
        }
        if v.signum() == f_lo.signum() {
            lo = mid;
            f_lo = v;
        } else {
            hi = mid;
        }
    }
    Err(Error::Convergence {
        iterations: cap,
        best: best.0,
        value: best.1,
    })
}

/// Angle on `pair` at which the single-basis Trotter error vanishes to `tol`.
pub fn bisect_error_free_basis(
    exp: &Experiment,
    pair: (usize, usize),
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<BisectionResult> {
    let n = exp.n_spatial();
    bisect(
        |theta| exp.basis_error(&GivensVector::single(n, pair, theta)?),
        lo,
        hi,
        tol,
        BISECTION_CAP,
    )
}

/// Full-precision decimal for CSV cells.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("theta,e_first,e_second,e_combined,delta_first,delta_second,delta_combined\n");
    for r in rows {
        let cells = [
            r.theta,
            r.e_first,
            r.e_second,
            r.e_combined,
            r.delta_first,
            r.delta_second,
            r.delta_combined,
        ];
        let line: Vec<String> = cells.iter().map(|&c| fmt_f64(c)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

fn record_cells(r: &EnsembleRecord) -> Vec<String> {
    let mut cells = vec![fmt_f64(r.e0_trotter), fmt_f64(r.delta_e0)];
    if let Some(b) = &r.basis {
        cells.extend(b.iter().map(|&x| fmt_f64(x)));
    }
    if let Some(p) = &r.permutation {
        cells.push(
            p.iter()
                .map(|k| k.to_string())
                .collect::<Vec<_>>()
                .join(" "),
        );
    }
    cells
}

fn record_header(first: Option<&EnsembleRecord>, prefix: &str) -> Vec<String> {
    let mut cols = vec![format!("{prefix}e0_trotter"), format!("{prefix}delta_e0")];
    if let Some(r) = first {
        if let Some(b) = &r.basis {
            cols.extend((1..=b.len()).map(|k| format!("{prefix}theta_{k}")));
        }
        if r.permutation.is_some() {
            cols.push(format!("{prefix}permutation"));
        }
    }
    cols
}

pub fn ensemble_csv(result: &EnsembleResult) -> String {
    let mut out = String::from("index,");
    out += &record_header(result.records.first(), "").join(",");
    out.push('\n');
    for r in &result.records {
        let _ = writeln!(out, "{},{}", r.index, record_cells(r).join(","));
    }
    out
}

/// One row per propagator; constituent columns carry a `c<n>_` prefix.
pub fn propagator_csv(result: &PropagatorEnsemble) -> String {
    let mut cols = vec![
        "index".to_string(),
        "e0_trotter".into(),
        "delta_e0".into(),
        "constituent_max_abs".into(),
        "constituent_mean_abs".into(),
        "constituent_min_abs".into(),
    ];
    if let Some(first) = result.records.first() {
        for (k, c) in first.constituents.iter().enumerate() {
            cols.extend(record_header(Some(c), &format!("c{}_", k + 1)));
        }
    }
    let mut out = cols.join(",");
    out.push('\n');
    for r in &result.records {
        let mut cells = vec![
            r.index.to_string(),
            fmt_f64(r.e0_trotter),
            fmt_f64(r.delta_e0),
            fmt_f64(r.constituent_max_abs),
            fmt_f64(r.constituent_mean_abs),
            fmt_f64(r.constituent_min_abs),
        ];
        for c in &r.constituents {
            cells.extend(record_cells(c));
        }
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_on_a_line() {
        let (lo, hi, tol) = (0.0, 1.0, 1e-9);
        let r = bisect(|x| Ok(x - 0.3), lo, hi, tol, BISECTION_CAP).unwrap();
        assert!((r.theta - 0.3).abs() < tol);
        assert!(r.iterations as f64 <= ((hi - lo) / tol).log2().ceil());
    }

    #[test]
    fn bisection_needs_sign_change() {
        let err = bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-8, BISECTION_CAP).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn bisection_reports_cap() {
        let err = bisect(|x| Ok(x - 0.3), 0.0, 1.0, 1e-12, 5).unwrap_err();
        match err {
            Error::Convergence {
                iterations, best, ..
            } => {
                assert_eq!(iterations, 5);
                assert!((best - 0.3).abs() < 0.05);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn grid_spacing() {
        let g = default_grid(4);
        assert_eq!(g.len(), 4);
        assert!((g[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn config_defaults_and_paths() {
        let cfg = ExperimentConfig::from_json(
            r#"{"system": "h2.fcidump", "seed": 7}"#,
            Some(Path::new("/data")),
        )
        .unwrap();
        assert_eq!(cfg.system, PathBuf::from("/data/h2.fcidump"));
        assert_eq!(cfg.samples, 1000);
        assert_eq!(cfg.eta, 1);
        assert_eq!(cfg.t_rule, TimeRule::Standard);
        assert_eq!(cfg.ordering, OrderingSpec::Magnitude);
    }

    #[test]
    fn config_errors_name_the_path() {
        let err = ExperimentConfig::from_json(
            r#"{"system": "x", "ordering": {"mode": "sideways"}}"#,
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("ordering"), "{err}");
        let err = ExperimentConfig::from_json(r#"{"system": "x", "eta": 0}"#, None).unwrap_err();
        assert!(err.to_string().contains("eta"));
    }
}
