use std::io::Read;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use trotter_core::ensembles::{
    angle_sweep, bisect_error_free_basis, default_grid, ensemble_csv, fmt_f64, propagator_csv,
    random_propagator_ensemble, sample_error_distribution, sweep_csv, Experiment, ExperimentConfig,
    TimeRule,
};
use trotter_core::integrals::{parse_fcidump, to_spin_orbitals, FcidumpData};
use trotter_core::linalg::{
    hermitian_eigen, submatrix, trotter_time_step, DenseOperator, DENSE_LIMIT,
};
use trotter_core::metrics::{
    acf_offset_with, acf_report, alpha_bound, delta_e0_heff, delta_e_pt_with, epsilon_2,
    fidelity_with, lambda_squared_bound, Method, Reference, ReportMetadata,
};
use trotter_core::orbital::GivensVector;
use trotter_core::propagators::trotter_propagator;
use trotter_core::terms::{Representation, SequenceBuilder, TermSequence};

use crate::correlate::correlate_dir;
use crate::manifest::RunManifest;
use crate::{BuildArgs, CliError, ConfigArgs};

fn input_error(context: impl std::fmt::Display, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{context}: {e}"))
}

/// Raw bytes of `system`, `-` meaning standard input.
fn read_input(system: &str) -> Result<Vec<u8>, CliError> {
    if system == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| input_error("stdin", e))?;
        Ok(buf)
    } else {
        std::fs::read(system).map_err(|e| input_error(system, e))
    }
}

fn parse_system(label: &str, bytes: &[u8]) -> Result<FcidumpData, CliError> {
    let text = std::str::from_utf8(bytes).map_err(|e| input_error(label, e))?;
    let data = parse_fcidump(text).map_err(|e| input_error(label, e))?;
    for w in &data.warnings {
        log::warn!("{label}: {w}");
    }
    Ok(data)
}

fn print_json(value: &impl Serialize) -> Result<String, CliError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))? + "\n";
    print!("{text}");
    Ok(text)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| input_error(path.display(), e))
}

/// `report.json` gets a `report.manifest.json` next to it.
fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output");
    output.with_file_name(format!("{stem}.manifest.json"))
}

fn write_with_manifest(
    out: &Path,
    text: &str,
    mut manifest: RunManifest,
    start: Instant,
) -> Result<(), CliError> {
    write_file(out, text)?;
    manifest.finish(start.elapsed(), vec![out.to_path_buf()]);
    manifest
        .write(&manifest_path(out))
        .map_err(|e| input_error(manifest_path(out).display(), e))
}

#[derive(Debug, Serialize)]
struct InspectReport {
    n_spatial: usize,
    n_spin_orbitals: usize,
    n_electrons: usize,
    ms2: i64,
    core_energy: f64,
    gamma_fermionic: usize,
    gamma_qubit: usize,
    lambda_fermionic: f64,
    lambda_qubit: f64,
    /// Lowest eigenvalue over the whole Fock space, including the core energy.
    e0_fock: Option<f64>,
    /// Lowest eigenvalue at the file's electron count.
    e0_total: Option<f64>,
    /// `e0_total` without the core energy.
    e0_electronic: Option<f64>,
    /// `0.95 pi / |e0_electronic|`
    recommended_t: Option<f64>,
    normalized_t: f64,
    warnings: Vec<String>,
}

pub fn inspect(system: &str, prune: f64) -> Result<(), CliError> {
    let bytes = read_input(system)?;
    let data = parse_system(system, &bytes)?;
    let ints = to_spin_orbitals(&data);
    let fermionic = SequenceBuilder::new(Representation::Fermionic, prune).build_raw(&ints);
    let qubit = SequenceBuilder::new(Representation::Qubit, prune).build_raw(&ints);
    let mut warnings = data.warnings.clone();
    let (mut e0_fock, mut e0_total) = (None, None);
    if ints.n_spin <= DENSE_LIMIT {
        let h = fermionic.to_matrix()?;
        e0_fock = Some(hermitian_eigen(&h)?.min_value());
        let sector: Vec<usize> = (0..h.dim())
            .filter(|y| y.count_ones() as usize == data.n_electrons)
            .collect();
        if sector.is_empty() {
            warnings.push(format!("no states with {} electrons", data.n_electrons));
        } else {
            let block = DenseOperator::hermitian(submatrix(h.matrix(), &sector))?;
            e0_total = Some(hermitian_eigen(&block)?.min_value());
        }
    } else {
        warnings.push(format!(
            "{} spin orbitals exceeds the dense limit of {DENSE_LIMIT}; energies skipped",
            ints.n_spin
        ));
    }
    let e0_electronic = e0_total.map(|e| e - data.core_energy);
    let report = InspectReport {
        n_spatial: data.n_spatial,
        n_spin_orbitals: ints.n_spin,
        n_electrons: data.n_electrons,
        ms2: data.ms2,
        core_energy: data.core_energy,
        gamma_fermionic: fermionic.len(),
        gamma_qubit: qubit.len(),
        lambda_fermionic: fermionic.one_norm(),
        lambda_qubit: qubit.one_norm(),
        e0_fock,
        e0_total,
        e0_electronic,
        recommended_t: e0_electronic.and_then(|e| trotter_time_step(e).ok()),
        normalized_t: trotter_core::ensembles::NORMALIZED_TIME_STEP,
        warnings,
    };
    print_json(&report)?;
    Ok(())
}

/// Experiment, analysed sequence and its exact reference for one run.
struct SingleRun {
    exp: Experiment,
    basis: GivensVector,
    seq: TermSequence,
    reference: Reference,
    config: Value,
}

fn single_run(
    system: &str,
    bytes: &[u8],
    build: &BuildArgs,
    command: Value,
) -> Result<SingleRun, CliError> {
    let data = parse_system(system, bytes)?;
    let t_rule = build.t.map_or(TimeRule::Standard, TimeRule::Fixed);
    let exp = Experiment::new(
        to_spin_orbitals(&data),
        build.representation,
        build.ordering.clone(),
        build.prune,
        build.normalize,
        t_rule,
    )?;
    let basis = match &build.basis {
        Some(angles) => GivensVector::new(exp.n_spatial(), angles.clone())?,
        None => GivensVector::zeros(exp.n_spatial()),
    };
    let seq = exp.sequence(&basis)?;
    // Rotated bases carry their own eigenvectors; the spectrum is shared.
    let reference = if basis.is_zero() {
        exp.reference.clone()
    } else {
        Reference::new(seq.to_matrix()?)?
    };
    let mut config = json!({
        "system": system,
        "representation": build.representation,
        "ordering": build.ordering,
        "t": build.t,
        "normalize": build.normalize,
        "prune": build.prune,
        "basis": basis.angles(),
    });
    if let (Value::Object(map), Value::Object(extra)) = (&mut config, command) {
        map.extend(extra);
    }
    Ok(SingleRun {
        exp,
        basis,
        seq,
        reference,
        config,
    })
}

pub fn error(
    system: &str,
    build: &BuildArgs,
    method: Method,
    acf_steps: usize,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let start = Instant::now();
    let bytes = read_input(system)?;
    let extra = json!({"method": method, "acf_steps": acf_steps});
    let run = single_run(system, &bytes, build, extra)?;
    let t = run.exp.t;
    let mut report = match method {
        Method::HeffDiag => delta_e0_heff(&trotter_propagator(&run.seq, t)?, &run.reference.h, t)?,
        Method::AcfIft => acf_report(&run.reference, &run.seq, t, acf_steps)?,
    };
    report.metadata = ReportMetadata {
        representation: Some(build.representation),
        ordering: Some(build.ordering.clone()),
        basis: (!run.basis.is_zero()).then(|| run.basis.angles().to_vec()),
    };
    let text = print_json(&report)?;
    if let Some(out) = out {
        let manifest = RunManifest::new("error", &run.config, &bytes, None);
        write_with_manifest(out, &text, manifest, start)?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct EstimatePanel {
    system: String,
    representation: Representation,
    normalized: bool,
    t: f64,
    n_qubits: usize,
    gamma_fermionic: usize,
    gamma_qubit: usize,
    lambda_fermionic: f64,
    lambda_qubit: f64,
    e0_exact: f64,
    e0_trotter: f64,
    delta_e0: f64,
    /// `<psi0|v2|psi0>`
    v2: f64,
    epsilon_2: f64,
    epsilon_2_t2: f64,
    /// `(|<v2>| + second order) t^2`
    delta_e_pt: f64,
    /// `(<v2> + second order) t^2`
    delta_e_pt_signed: f64,
    alpha: f64,
    /// `t alpha / 2`
    alpha_energy_bound: f64,
    /// `t^2 alpha / 2`
    alpha_propagator_bound: f64,
    /// `alpha' = sum_{a<b} 2 |h_a| |h_b| ||F_a|| ||F_b||`
    lambda_squared: f64,
    f_re: f64,
    f_im: f64,
    abs_f: f64,
    abs_one_minus_f: f64,
    g: f64,
}

pub fn estimates(system: &str, build: &BuildArgs, out: Option<&Path>) -> Result<(), CliError> {
    let start = Instant::now();
    let bytes = read_input(system)?;
    let run = single_run(system, &bytes, build, json!({"command": "estimates"}))?;
    let (exp, seq, reference) = (&run.exp, &run.seq, &run.reference);
    let t = exp.t;
    let transformed;
    let ints = if run.basis.is_zero() {
        &exp.ints
    } else {
        transformed = trotter_core::orbital::transform_integrals(&exp.ints, &run.basis)?;
        &transformed
    };
    let with_rep = |representation| SequenceBuilder {
        representation,
        ..exp.builder
    };
    let fermionic = with_rep(Representation::Fermionic).build(ints);
    let qubit = with_rep(Representation::Qubit).build(ints);
    let e0_trotter = exp.trotter_energy(seq, t)?;
    let pt = delta_e_pt_with(reference, seq, t);
    let eps2 = epsilon_2(seq, &reference.psi0);
    let alpha = alpha_bound(seq)?;
    let f = fidelity_with(reference, seq, t, None);
    let panel = EstimatePanel {
        system: system.to_string(),
        representation: build.representation,
        normalized: build.normalize,
        t,
        n_qubits: seq.n_qubits,
        gamma_fermionic: fermionic.len(),
        gamma_qubit: qubit.len(),
        lambda_fermionic: fermionic.one_norm(),
        lambda_qubit: qubit.one_norm(),
        e0_exact: reference.e0,
        e0_trotter,
        delta_e0: e0_trotter - reference.e0,
        v2: pt.v2,
        epsilon_2: eps2,
        epsilon_2_t2: eps2 * t * t,
        delta_e_pt: pt.as_written,
        delta_e_pt_signed: pt.signed,
        alpha: alpha.alpha,
        alpha_energy_bound: alpha.energy_bound(t),
        alpha_propagator_bound: alpha.propagator_bound(t),
        lambda_squared: lambda_squared_bound(seq),
        f_re: f.f_re,
        f_im: f.f_im,
        abs_f: f.abs_f,
        abs_one_minus_f: f.abs_one_minus_f,
        g: acf_offset_with(reference, seq, t),
    };
    let text = print_json(&panel)?;
    if let Some(out) = out {
        let manifest = RunManifest::new("estimates", &run.config, &bytes, None);
        write_with_manifest(out, &text, manifest, start)?;
    }
    Ok(())
}

pub fn correlate(
    dir: &Path,
    columns: Option<&[String]>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let start = Instant::now();
    let result = correlate_dir(dir, columns)?;
    let text = print_json(&result)?;
    if let Some(out) = out {
        let config = json!({"columns": columns});
        let listing: Vec<String> = result.columns.clone();
        let manifest = RunManifest::new("correlate", &config, listing.join(",").as_bytes(), None);
        write_with_manifest(out, &text, manifest, start)?;
    }
    Ok(())
}

fn load_config(path: &Path) -> Result<(ExperimentConfig, Value), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(path.display(), e))?;
    let config = ExperimentConfig::from_json(&text, path.parent())
        .map_err(|e| input_error(path.display(), e))?;
    // Hash the config with defaults filled in, so omitted and explicit
    // defaults give the same manifest.
    let value = serde_json::to_value(&config).map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok((config, value))
}

/// Sign changes of `values` between neighbouring grid points.
fn sign_changes(values: &[f64]) -> usize {
    values
        .windows(2)
        .filter(|w| w[0].signum() != w[1].signum())
        .count()
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

pub fn experiment(command: &str, args: &ConfigArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let (config, config_value) = load_config(&args.config)?;
    let bytes =
        std::fs::read(&config.system).map_err(|e| input_error(config.system.display(), e))?;
    let exp = Experiment::from_config(&config)?;
    let dir = args
        .out
        .clone()
        .or_else(|| config.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| input_error(dir.display(), e))?;

    let (csv, summary, seed) = match command {
        "sweep" => {
            let pair = exp.sweep_pair(config.pair)?;
            let rows = angle_sweep(&exp, pair, &default_grid(config.grid_points))?;
            let combined: Vec<f64> = rows.iter().map(|r| r.delta_combined).collect();
            let second: Vec<f64> = rows.iter().map(|r| r.delta_second).collect();
            let (lo_c, hi_c) = min_max(combined.iter().copied());
            let (lo_s, hi_s) = min_max(second.iter().copied());
            let summary = json!({
                "pair": [pair.0, pair.1],
                "points": rows.len(),
                "t": exp.t,
                "e0_exact": exp.e0(),
                "delta_first": rows.first().map(|r| r.delta_first),
                "delta_second_min": lo_s,
                "delta_second_max": hi_s,
                "delta_combined_min": lo_c,
                "delta_combined_max": hi_c,
                "delta_second_sign_changes": sign_changes(&second),
                "between_fraction": rows.iter().filter(|r| r.is_between(1e-9)).count() as f64 / rows.len() as f64,
            });
            (sweep_csv(&rows), summary, None)
        }
        "sample" => {
            let result = sample_error_distribution(&exp, config.mode, config.samples, config.seed)?;
            let summary = json!({
                "mode": result.mode,
                "seed": result.seed,
                "t": result.t,
                "e0_exact": result.e0_exact,
                "summary": result.summary,
            });
            (ensemble_csv(&result), summary, Some(config.seed))
        }
        "random-props" => {
            let result = random_propagator_ensemble(
                &exp,
                config.mode,
                config.eta,
                config.samples,
                config.seed,
            )?;
            let summary = json!({
                "mode": result.mode,
                "eta": result.eta,
                "seed": result.seed,
                "t": result.t,
                "e0_exact": result.e0_exact,
                "summary": result.summary,
                "magnified_fraction": result.magnified_fraction,
                "cancelled_fraction": result.cancelled_fraction,
            });
            (propagator_csv(&result), summary, Some(config.seed))
        }
        "bisect" => {
            let pair = exp.sweep_pair(config.pair)?;
            let n = exp.n_spatial();
            let error_at = |theta: f64| -> Result<f64, CliError> {
                Ok(exp.basis_error(&GivensVector::single(n, pair, theta)?)?)
            };
            let mut csv = String::from("theta,delta_e0\n");
            let [lo, hi] = match config.bracket {
                Some(b) => b,
                None => {
                    // First sign change on the scan grid.
                    let grid = default_grid(config.grid_points);
                    let values = grid
                        .iter()
                        .map(|&x| error_at(x))
                        .collect::<Result<Vec<_>, _>>()?;
                    for (x, v) in grid.iter().zip(&values) {
                        csv += &format!("{},{}\n", fmt_f64(*x), fmt_f64(*v));
                    }
                    let k = values
                        .windows(2)
                        .position(|w| w[0].signum() != w[1].signum())
                        .ok_or_else(|| {
                            let (lo, hi) = min_max(values.iter().copied());
                            CliError::Numeric(format!(
                                "no sign change of the Trotter error over {} angles (range [{lo:.3e}, {hi:.3e}])",
                                grid.len()
                            ))
                        })?;
                    [grid[k], grid[k + 1]]
                }
            };
            let found = bisect_error_free_basis(&exp, pair, lo, hi, config.tolerance)?;
            csv += &format!("{},{}\n", fmt_f64(found.theta), fmt_f64(found.value));
            let summary = json!({
                "pair": [pair.0, pair.1],
                "bracket": [lo, hi],
                "t": exp.t,
                "e0_exact": exp.e0(),
                "theta": found.theta,
                "delta_e0": found.value,
                "iterations": found.iterations,
                "tolerance": config.tolerance,
            });
            (csv, summary, None)
        }
        other => unreachable!("unknown experiment command {other}"),
    };

    let csv_path = dir.join(format!("{command}.csv"));
    let json_path = dir.join(format!("{command}.json"));
    write_file(&csv_path, &csv)?;
    let summary_text = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Numeric(e.to_string()))?
        + "\n";
    write_file(&json_path, &summary_text)?;
    let mut manifest = RunManifest::new(command, &config_value, &bytes, seed);
    manifest.finish(start.elapsed(), vec![csv_path.clone(), json_path.clone()]);
    let manifest_file = dir.join(format!("{command}.manifest.json"));
    manifest
        .write(&manifest_file)
        .map_err(|e| input_error(manifest_file.display(), e))?;
    print!("{summary_text}");
    Ok(())
}
