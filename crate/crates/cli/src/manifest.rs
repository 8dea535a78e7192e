//! Provenance block embedded in every JSON output.

use serde::Serialize;

use sec_core::planner::CurveFile;

#[derive(Debug, Clone, Serialize)]
pub struct Versions {
    pub sec_cli: &'static str,
    pub sec_core: &'static str,
}

/// Rerunning with the same manifest reproduces the output byte for byte, so no clock readings go in here.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub versions: Versions,
    pub precision_bits: u32,
    pub curve: Option<CurveFile>,
}

impl RunManifest {
    pub fn new(command: &str, precision_bits: u32) -> Self {
        Self {
            command: command.to_string(),
            args: std::env::args().skip(1).collect(),
            seed: None,
            versions: Versions { sec_cli: env!("CARGO_PKG_VERSION"), sec_core: sec_core::VERSION },
            precision_bits,
            curve: None,
        }
    }
}
