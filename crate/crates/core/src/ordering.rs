//! Trotter series orderings.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::terms::{TermSequence, TermSignature};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum OrderingSpec {
    /// Descending `|h_k|`, ties broken by index order.
    Magnitude,
    /// Lexicographic on (kind rank, indices), or on the Pauli label.
    Index,
    /// 1-based positions into the index-ordered sequence.
    Explicit { permutation: Vec<usize> },
    /// Seeded shuffle of the index order. `stream` selects an independent
    /// ChaCha20 stream for the same seed.
    Random {
        seed: u64,
        #[serde(default)]
        stream: u64,
    },
    /// Terms placed at the positions of matching signatures in `reference`;
    /// the rest follow in index order.
    Aligned { reference: Vec<TermSignature> },
}

impl std::str::FromStr for OrderingSpec {
    type Err = String;

    /// `magnitude`, `index`, `random:<seed>` or `explicit:3,1,2`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(':') {
            None if s == "magnitude" => Ok(Self::Magnitude),
            None if s == "index" => Ok(Self::Index),
            Some(("random", seed)) => seed
                .parse()
                .map(|seed| Self::Random { seed, stream: 0 })
                .map_err(|_| format!("invalid seed `{seed}`")),
            Some(("explicit", list)) => list
                .split(',')
                .map(|v| v.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(|permutation| Self::Explicit { permutation })
                .map_err(|_| format!("invalid permutation `{list}`")),
            _ => Err(format!(
                "unknown ordering `{s}` (expected magnitude, index, random:<seed> or explicit:<list>)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ordered {
    pub sequence: TermSequence,
    /// `sequence.terms[k]` is source term `source[k]` of the index-ordered input.
    pub source: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Index order of the sequence's terms.
pub fn index_order(seq: &TermSequence) -> Vec<usize> {
    let sigs = seq.signatures();
    let mut order: Vec<usize> = (0..seq.len()).collect();
    order.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    order
}

pub fn order_terms(seq: &TermSequence, spec: &OrderingSpec) -> Result<Ordered> {
    let base = index_order(seq);
    let mut warnings = Vec::new();
    let source = match spec {
        OrderingSpec::Index => base,
        OrderingSpec::Magnitude => {
            let mut order = base;
            // Stable sort on top of index order breaks ties by signature.
            order.sort_by(|&a, &b| {
                seq.terms[b]
                    .weight()
                    .abs()
                    .total_cmp(&seq.terms[a].weight().abs())
            });
            order
        }
        OrderingSpec::Explicit { permutation } => {
            validate_permutation(permutation, seq.len())?;
            permutation.iter().map(|&p| base[p - 1]).collect()
        }
        OrderingSpec::Random { seed, stream } => {
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            rng.set_stream(*stream);
            let mut order = base;
            order.shuffle(&mut rng);
            order
        }
        OrderingSpec::Aligned { reference } => {
            let sigs = seq.signatures();
            let lookup: HashMap<&TermSignature, usize> =
                sigs.iter().enumerate().map(|(k, s)| (s, k)).collect();
            let mut used = vec![false; seq.len()];
            let mut order = Vec::with_capacity(seq.len());
            for sig in reference {
                match lookup.get(sig) {
                    Some(&k) if !used[k] => {
                        used[k] = true;
                        order.push(k);
                    }
                    Some(_) => warnings.push(format!("reference signature {sig:?} repeated")),
                    None => warnings.push(format!("reference term {sig:?} absent in this basis")),
                }
            }
            order.extend(base.into_iter().filter(|&k| !used[k]));
            order
        }
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Ordered {
        sequence: seq.permuted(&source),
        source,
        warnings,
    })
}

fn validate_permutation(permutation: &[usize], n: usize) -> Result<()> {
    if permutation.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "length {} for {} terms",
            permutation.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::InvalidPermutation(format!(
                "entry {p} is out of range 1..={n} or repeated"
            )));
        }
        seen[p - 1] = true;
    }
    Ok(())
}
