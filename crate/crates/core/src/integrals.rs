//! FCIDUMP ingestion and spin-orbital integral tensors.
//!
//! Files carry 1-based spatial indices in chemists' notation `(ij|kl)`.
//! Everything past [`parse_fcidump`] is 0-based. Spin orbitals interleave
//! spin: spatial orbital `p` becomes `2p` (alpha) and `2p + 1` (beta).
//!
//! Whether `core_energy` already contains frozen-core contributions is up to
//! the program that wrote the file; it is carried through unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use ndarray::{Array2, Array4};

use crate::error::{Error, Result};

/// Raw FCIDUMP content with 0-based spatial indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FcidumpData {
    pub n_spatial: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    pub core_energy: f64,
    /// Keyed by `(i, j)` with `i >= j`.
    pub one_body: BTreeMap<(usize, usize), f64>,
    /// Keyed by the canonical representative of the 8-fold symmetry class,
    /// see [`two_body_key`].
    pub two_body: BTreeMap<[usize; 4], f64>,
    pub warnings: Vec<String>,
}

/// Canonical key of `(ij|kl)`: `i >= j`, `k >= l`, `(i, j) >= (k, l)`.
pub fn two_body_key(i: usize, j: usize, k: usize, l: usize) -> [usize; 4] {
    let a = (i.max(j), i.min(j));
    let b = (k.max(l), k.min(l));
    let (x, y) = if a >= b { (a, b) } else { (b, a) };
    [x.0, x.1, y.0, y.1]
}

impl FcidumpData {
    pub fn empty(n_spatial: usize, n_electrons: usize) -> Self {
        Self {
            n_spatial,
            n_electrons,
            ms2: 0,
            core_energy: 0.0,
            one_body: BTreeMap::new(),
            two_body: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn one_body(&self, i: usize, j: usize) -> f64 {
        self.one_body
            .get(&(i.max(j), i.min(j)))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn two_body(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.two_body
            .get(&two_body_key(i, j, k, l))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn set_one_body(&mut self, i: usize, j: usize, value: f64) {
        self.one_body.insert((i.max(j), i.min(j)), value);
    }

    pub fn set_two_body(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        self.two_body.insert(two_body_key(i, j, k, l), value);
    }
}

/// Parses Molpro-style FCIDUMP text.
pub fn parse_fcidump(text: &str) -> Result<FcidumpData> {
    let lines: Vec<&str> = text.lines().collect();
    let (header, body_start) = split_header(&lines)?;
    let header_line = body_start.max(1);

    let norb = header
        .get("NORB")
        .ok_or_else(|| parse_err(header_line, "header is missing NORB"))?;
    let nelec = header
        .get("NELEC")
        .ok_or_else(|| parse_err(header_line, "header is missing NELEC"))?;
    let n_spatial = header_int(norb, header_line, "NORB")?;
    let n_electrons = header_int(nelec, header_line, "NELEC")?;
    let ms2 = match header.get("MS2") {
        Some(v) => v
            .trim()
            .parse::<i64>()
            .map_err(|_| parse_err(header_line, format!("MS2 is not an integer: {v}")))?,
        None => 0,
    };
    if n_spatial == 0 {
        return Err(parse_err(header_line, "NORB must be positive"));
    }

    let mut data = FcidumpData::empty(n_spatial as usize, n_electrons as usize);
    data.ms2 = ms2;

    for (offset, raw) in lines[body_start..].iter().enumerate() {
        let line_no = body_start + offset + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(
                line_no,
                format!("expected `value i j k l`, found {} fields", fields.len()),
            ));
        }
        let value = parse_value(fields[0])
            .ok_or_else(|| parse_err(line_no, format!("non-numeric value `{}`", fields[0])))?;
        let mut idx = [0usize; 4];
        for (slot, field) in idx.iter_mut().zip(&fields[1..]) {
            *slot = field
                .parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("invalid index `{field}`")))?;
            if *slot > data.n_spatial {
                return Err(parse_err(
                    line_no,
                    format!("index {} out of range 0..={}", slot, data.n_spatial),
                ));
            }
        }
        let [i, j, k, l] = idx;
        match (i, j, k, l) {
            (0, 0, 0, 0) => {
                if data.core_energy != 0.0 {
                    data.warn(line_no, "core energy given twice; keeping the later value");
                }
                data.core_energy = value;
            }
            (i, j, 0, 0) if i > 0 && j > 0 => {
                let key = (i.max(j) - 1, i.min(j) - 1);
                if data.one_body.insert(key, value).is_some() {
                    data.warn(
                        line_no,
                        format!("duplicate one-body entry ({i},{j}) overwritten"),
                    );
                }
            }
            (i, 0, 0, 0) if i > 0 => {
                data.warn(line_no, format!("orbital energy for orbital {i} ignored"));
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => {
                let key = two_body_key(i - 1, j - 1, k - 1, l - 1);
                if data.two_body.insert(key, value).is_some() {
                    data.warn(
                        line_no,
                        format!("duplicate two-body entry ({i}{j}|{k}{l}) overwritten"),
                    );
                }
            }
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("unsupported index pattern {i} {j} {k} {l}"),
                ))
            }
        }
    }
    Ok(data)
}

impl FcidumpData {
    fn warn(&mut self, line: usize, message: impl Into<String>) {
        let message = format!("line {line}: {}", message.into());
        log::warn!("{message}");
        self.warnings.push(message);
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn header_int(value: &str, line: usize, key: &str) -> Result<u64> {
    value
        .trim()
        .parse::<u64>()
        .map_err(|_| parse_err(line, format!("{key} is not a nonnegative integer: {value}")))
}

/// Fortran writers sometimes emit `1.0D-03`.
fn parse_value(field: &str) -> Option<f64> {
    field
        .parse::<f64>()
        .ok()
        .or_else(|| field.replace(['D', 'd'], "E").parse::<f64>().ok())
}

/// Returns the namelist keys (upper-cased, first list element only) and the
/// index of the first body line.
fn split_header(lines: &[&str]) -> Result<(BTreeMap<String, String>, usize)> {
    let start = lines
        .iter()
        .position(|l| !l.trim().is_empty())
        .ok_or_else(|| parse_err(1, "empty input"))?;
    if !lines[start]
        .trim_start()
        .to_ascii_uppercase()
        .starts_with("&FCI")
    {
        return Err(parse_err(
            start + 1,
            "expected namelist header starting with &FCI",
        ));
    }

    let mut text = String::new();
    let mut end = None;
    for (n, line) in lines.iter().enumerate().skip(start) {
        let upper = line.to_ascii_uppercase();
        if let Some(pos) = upper.find("&END") {
            text.push_str(&upper[..pos]);
            end = Some(n);
            break;
        }
        let trimmed = upper.trim_end();
        if let Some(stripped) = trimmed.strip_suffix('/') {
            text.push_str(stripped);
            end = Some(n);
            break;
        }
        text.push_str(&upper);
        text.push(',');
    }
    let end = end.ok_or_else(|| parse_err(lines.len(), "namelist header is not terminated"))?;

    let text = text.replacen("&FCI", "", 1);
    let mut keys = BTreeMap::new();
    let mut current: Option<String> = None;
    for token in text.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        if let Some((key, value)) = token.split_once('=') {
            let key = key.trim().to_string();
            let value = value.trim();
            current = Some(key.clone());
            keys.insert(key, value.to_string());
        } else if let Some(key) = &current {
            // Continuation of a list-valued key such as ORBSYM; only the
            // first element is retained.
            if keys.get(key).is_some_and(|v| v.is_empty()) {
                keys.insert(key.clone(), token.to_string());
            }
        }
    }
    Ok((keys, end + 1))
}

/// Serializes back to FCIDUMP text with 17 significant digits.
pub fn write_fcidump(data: &FcidumpData) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        " &FCI NORB={},NELEC={},MS2={},",
        data.n_spatial, data.n_electrons, data.ms2
    );
    let _ = writeln!(out, " &END");
    for (key, value) in &data.two_body {
        let _ = writeln!(
            out,
            "{:>25.16e} {:>4} {:>4} {:>4} {:>4}",
            value,
            key[0] + 1,
            key[1] + 1,
            key[2] + 1,
            key[3] + 1
        );
    }
    for (&(i, j), value) in &data.one_body {
        let _ = writeln!(
            out,
            "{:>25.16e} {:>4} {:>4} {:>4} {:>4}",
            value,
            i + 1,
            j + 1,
            0,
            0
        );
    }
    let _ = writeln!(
        out,
        "{:>25.16e} {:>4} {:>4} {:>4} {:>4}",
        data.core_energy, 0, 0, 0, 0
    );
    out
}

/// One- and two-electron integrals over spin orbitals, physicists' order:
/// the two-body part of the Hamiltonian is `1/2 sum h2[p,q,r,s] a+_p a+_q a_r a_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalIntegrals {
    pub n_spin: usize,
    pub h1: Array2<f64>,
    pub h2: Array4<f64>,
    pub core_energy: f64,
}

impl SpinOrbitalIntegrals {
    pub fn zeros(n_spin: usize) -> Self {
        Self {
            n_spin,
            h1: Array2::zeros((n_spin, n_spin)),
            h2: Array4::zeros((n_spin, n_spin, n_spin, n_spin)),
            core_energy: 0.0,
        }
    }

    pub fn n_spatial(&self) -> usize {
        self.n_spin / 2
    }

    /// Largest violation of the real-orbital symmetries and spin selection
    /// rules documented on the type.
    pub fn symmetry_violation(&self) -> f64 {
        let n = self.n_spin;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.h1[[i, j]] - self.h1[[j, i]]).abs());
                if i % 2 != j % 2 {
                    worst = worst.max(self.h1[[i, j]].abs());
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.h2[[p, q, r, s]];
                        worst = worst.max((v - self.h2[[q, p, s, r]]).abs());
                        worst = worst.max((v - self.h2[[s, r, q, p]]).abs());
                        if p % 2 != s % 2 || q % 2 != r % 2 {
                            worst = worst.max(v.abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

/// Expands spatial chemists' integrals to spin orbitals:
/// `h2[p,q,r,s] = (ps|qr)` whenever spin(p) = spin(s) and spin(q) = spin(r).
pub fn to_spin_orbitals(data: &FcidumpData) -> SpinOrbitalIntegrals {
    let m = data.n_spatial;
    let mut ints = SpinOrbitalIntegrals::zeros(2 * m);
    ints.core_energy = data.core_energy;
    for i in 0..m {
        for j in 0..m {
            let v = data.one_body(i, j);
            for sigma in 0..2 {
                ints.h1[[2 * i + sigma, 2 * j + sigma]] = v;
            }
        }
    }
    for p in 0..m {
        for q in 0..m {
            for r in 0..m {
                for s in 0..m {
                    let v = data.two_body(p, s, q, r);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            ints.h2[[2 * p + sigma, 2 * q + tau, 2 * r + tau, 2 * s + sigma]] = v;
                        }
                    }
                }
            }
        }
    }
    ints
}
