//! Per-cell aggregation of trial records.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use crate::record::TrialRecord;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub protocol: String,
    pub cell: usize,
    pub params: String,
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_sketch_bits: f64,
    pub max_sketch_bits: usize,
    pub baseline_bits: f64,
    pub mean_overhead: f64,
    pub max_overhead: f64,
    /// Wall-time percentiles in nanoseconds; zero when timing was off.
    pub p50_ns: u64,
    pub p95_ns: u64,
}

fn params_of(r: &TrialRecord) -> String {
    let mut s = format!("n={}", r.n);
    if let Some(v) = &r.sizes {
        let _ = write!(s, " s={v:?}");
    }
    if let Some(v) = &r.bounds {
        let _ = write!(s, " k={v:?}");
    }
    if let Some(k) = r.k {
        let _ = write!(s, " k={k}");
    }
    if let Some(l) = &r.layout {
        let _ = write!(s, " layout={l}");
    }
    if let Some(st) = &r.style {
        let _ = write!(s, " style={st}");
    }
    s
}

/// Nearest-rank percentile of a sorted slice.
fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (q * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1]
}

pub fn summarize(records: &[TrialRecord]) -> Vec<CellSummary> {
    let mut groups: BTreeMap<(String, usize), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.protocol.clone(), r.cell)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((protocol, cell), rs)| {
            let trials = rs.len();
            let successes = rs.iter().filter(|r| r.success).count();
            let mean = |f: &dyn Fn(&TrialRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / trials as f64;
            let mut times: Vec<u64> = rs.iter().filter_map(|r| r.wall_ns).collect();
            times.sort_unstable();
            CellSummary {
                params: params_of(rs[0]),
                protocol,
                cell,
                trials,
                successes,
                success_rate: successes as f64 / trials as f64,
                mean_sketch_bits: mean(&|r| r.sketch_bits as f64),
                max_sketch_bits: rs.iter().map(|r| r.sketch_bits).max().unwrap_or(0),
                baseline_bits: mean(&|r| r.baseline_bits),
                mean_overhead: mean(&|r| r.overhead),
                max_overhead: rs.iter().map(|r| r.overhead).fold(0.0, f64::max),
                p50_ns: percentile(&times, 0.5),
                p95_ns: percentile(&times, 0.95),
            }
        })
        .collect()
}

const HEADER: [&str; 13] = [
    "protocol",
    "cell",
    "params",
    "trials",
    "successes",
    "success_rate",
    "mean_sketch_bits",
    "max_sketch_bits",
    "baseline_bits",
    "mean_overhead",
    "max_overhead",
    "p50_ns",
    "p95_ns",
];

fn row(s: &CellSummary) -> [String; 13] {
    [
        s.protocol.clone(),
        s.cell.to_string(),
        s.params.clone(),
        s.trials.to_string(),
        s.successes.to_string(),
        format!("{:.4}", s.success_rate),
        format!("{:.1}", s.mean_sketch_bits),
        s.max_sketch_bits.to_string(),
        format!("{:.1}", s.baseline_bits),
        format!("{:.3}", s.mean_overhead),
        format!("{:.3}", s.max_overhead),
        s.p50_ns.to_string(),
        s.p95_ns.to_string(),
    ]
}

pub fn write_csv<W: Write>(out: W, summaries: &[CellSummary]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for s in summaries {
        w.write_record(row(s))?;
    }
    w.flush()?;
    Ok(())
}

pub fn render_text(summaries: &[CellSummary]) -> String {
    let rows: Vec<[String; 13]> = summaries.iter().map(row).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.len()).collect();
    for r in &rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i == 2 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(HEADER.to_vec(), &mut out);
    for r in &rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(cell: usize, success: bool, bits: usize, ns: u64) -> TrialRecord {
        let mut r = TrialRecord::new("one-set", cell, 0, 1, 2, 64);
        r.success = success;
        r.set_cost(bits, bits + 100, 10.0);
        r.wall_ns = Some(ns);
        r
    }

    #[test]
    fn empty_input_gives_header_only() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &summarize(&[])).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn single_record_rate() {
        assert_eq!(summarize(&[rec(0, true, 5, 1)])[0].success_rate, 1.0);
        assert_eq!(summarize(&[rec(0, false, 5, 1)])[0].success_rate, 0.0);
    }

    #[test]
    fn five_records_by_hand() {
        let rs = [
            rec(0, true, 10, 50),
            rec(0, true, 20, 10),
            rec(0, false, 30, 40),
            rec(0, true, 40, 20),
            rec(0, true, 50, 30),
        ];
        let s = &summarize(&rs)[0];
        assert_eq!(s.trials, 5);
        assert_eq!(s.successes, 4);
        assert!((s.success_rate - 0.8).abs() < 1e-12);
        assert!((s.mean_sketch_bits - 30.0).abs() < 1e-12);
        assert_eq!(s.max_sketch_bits, 50);
        assert!((s.mean_overhead - 3.0).abs() < 1e-12);
        assert!((s.max_overhead - 5.0).abs() < 1e-12);
        assert_eq!(s.p50_ns, 30);
        assert_eq!(s.p95_ns, 50);
        let text = render_text(&[s.clone()]);
        assert_eq!(text.lines().count(), 2);
    }
}
