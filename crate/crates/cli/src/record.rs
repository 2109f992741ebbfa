//! One JSON line per trial.

use std::io::{BufRead, Write};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// Field order is the serialized key order; optional fields are omitted
/// when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub protocol: String,
    pub cell: usize,
    pub trial: usize,
    pub shared_seed: u64,
    pub adversary_seed: u64,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<String>,
    pub success: bool,
    /// Payload bits Alice sends (ECC: redundancy bits `r`).
    pub sketch_bits: usize,
    /// Payload plus wire headers.
    pub size_bits: usize,
    pub baseline_bits: f64,
    pub overhead: f64,
    /// Errors actually injected.
    pub errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message_bits: Option<usize>,
    /// Edit runs: `|T_i|` per level.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level_mismatches: Option<Vec<usize>>,
    /// Edit runs: at level `i >= 2`, wrong blocks descending from level
    /// `i - 1` repairs before the level is processed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub undetected_prev: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_bad_blocks: Option<usize>,
    /// Expander runs: graph shape.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ns: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_stage: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn new(protocol: &str, cell: usize, trial: usize, shared_seed: u64, adversary_seed: u64, n: usize) -> Self {
        TrialRecord {
            protocol: protocol.to_string(),
            cell,
            trial,
            shared_seed,
            adversary_seed,
            n,
            sizes: None,
            bounds: None,
            k: None,
            layout: None,
            style: None,
            success: false,
            sketch_bits: 0,
            size_bits: 0,
            baseline_bits: 0.0,
            overhead: 0.0,
            errors: 0,
            groups: None,
            message_bits: None,
            level_mismatches: None,
            undetected_prev: None,
            final_bad_blocks: None,
            degree: None,
            checks: None,
            wall_ns: None,
            failure_stage: None,
            error: None,
        }
    }

    pub fn set_cost(&mut self, sketch_bits: usize, size_bits: usize, baseline_bits: f64) {
        self.sketch_bits = sketch_bits;
        self.size_bits = size_bits;
        self.baseline_bits = baseline_bits;
        self.overhead = if baseline_bits > 0.0 {
            sketch_bits as f64 / baseline_bits
        } else {
            f64::INFINITY
        };
    }
}

pub fn write_jsonl<W: Write>(mut out: W, records: &[TrialRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<TrialRecord>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).with_context(|| format!("record on line {}", i + 1))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_key_order() {
        let mut r = TrialRecord::new("one-set", 2, 7, 11, 12, 4096);
        r.sizes = Some(vec![256]);
        r.bounds = Some(vec![4]);
        r.success = true;
        r.set_cost(100, 300, 50.0);
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &[r.clone(), r.clone()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("{\"protocol\":\"one-set\",\"cell\":2,\"trial\":7,"));
        assert!(!text.contains("wall_ns"));
        let back = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back, vec![r.clone(), r]);
        assert_eq!(back[0].overhead, 2.0);
    }
}
