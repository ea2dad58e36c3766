use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL: &str = "trotter";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hash of a config with file locations dropped. `serde_json` maps keep
/// their keys sorted, so the serialization is canonical.
pub fn config_hash(config: &Value) -> String {
    let mut config = config.clone();
    if let Value::Object(map) = &mut config {
        map.remove("system");
        map.remove("output");
    }
    sha256_hex(config.to_string().as_bytes())
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_hash: String,
    pub input_hash: String,
    pub seed: Option<u64>,
    /// Hash of everything above: equal for reruns of the same experiment.
    pub run_hash: String,
    pub threads: usize,
    pub elapsed_seconds: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &str, config: &Value, input: &[u8], seed: Option<u64>) -> Self {
        let config_hash = config_hash(config);
        let input_hash = sha256_hex(input);
        let seed_text = seed.map(|s| s.to_string()).unwrap_or_default();
        let run_hash = sha256_hex(
            [
                TOOL,
                VERSION,
                command,
                &config_hash,
                &input_hash,
                &seed_text,
            ]
            .join("\n")
            .as_bytes(),
        );
        Self {
            tool: TOOL,
            version: VERSION,
            command: command.to_string(),
            config_hash,
            input_hash,
            seed,
            run_hash,
            threads: rayon::current_num_threads(),
            elapsed_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn finish(&mut self, elapsed: Duration, outputs: Vec<PathBuf>) {
        self.elapsed_seconds = elapsed.as_secs_f64();
        self.outputs = outputs;
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")
    }
}
