use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Envelope shared by every report. `timestamp` is the only field that
/// differs between two runs with the same configuration.
#[derive(Debug, Serialize)]
pub struct Report<I, R> {
    pub schema_version: u32,
    pub command: &'static str,
    pub tool_version: &'static str,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub input: I,
    pub result: R,
    pub exit_code: u8,
}

impl<I: Serialize, R: Serialize> Report<I, R> {
    pub fn new(command: &'static str, input: I, result: R, exit_code: u8) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp,
            input,
            result,
            exit_code,
        }
    }

    pub fn emit(&self, out: Option<&Path>) -> anyhow::Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        match out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}
