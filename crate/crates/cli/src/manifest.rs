//! Run manifest embedded in every emitted artifact: tool version, input
//! digest, config echo, and timings, so any report can be reproduced.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub graph_file: Option<String>,
    pub graph_sha256: Option<String>,
    pub config: serde_json::Value,
    pub wall_clock_seconds: f64,
    pub stage_seconds: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new<const N: usize>(
        graph_path: Option<&Path>,
        config: serde_json::Value,
        wall_clock_seconds: f64,
        stages: [(&str, f64); N],
    ) -> std::io::Result<Self> {
        let (graph_file, graph_sha256) = match graph_path {
            Some(path) => {
                let bytes = std::fs::read(path)?;
                let mut hasher = Sha256::new();
                hasher.update(&bytes);
                (
                    Some(path.display().to_string()),
                    Some(format!("{:x}", hasher.finalize())),
                )
            }
            None => (None, None),
        };
        Ok(RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            graph_file,
            graph_sha256,
            config,
            wall_clock_seconds,
            stage_seconds: stages
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        })
    }

    /// One-line `# manifest: {...}` comment for CSV artifacts.
    pub fn write_comment_line<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let json = serde_json::to_string(self).expect("manifest serializes");
        writeln!(w, "# manifest: {json}")
    }
}
