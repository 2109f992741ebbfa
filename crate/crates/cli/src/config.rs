//! Experiment configuration: one flat TOML table, validated up front.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use asymde_core::edit::{EditConfig, EditParams, EditStyle};
use asymde_core::expander::{PlanMode, Tuning};
use asymde_core::hamming::{Config, EccPlan};
use asymde_core::spec::Layout;
use asymde_core::SubsetSpec;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolKind {
    OneSet,
    General,
    Grouped,
    Special,
    Ecc,
    Edit,
    Expander,
}

impl ProtocolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::OneSet => "one-set",
            ProtocolKind::General => "general",
            ProtocolKind::Grouped => "grouped",
            ProtocolKind::Special => "special",
            ProtocolKind::Ecc => "ecc",
            ProtocolKind::Edit => "edit",
            ProtocolKind::Expander => "expander",
        }
    }

    pub fn is_hamming(self) -> bool {
        matches!(
            self,
            ProtocolKind::OneSet | ProtocolKind::General | ProtocolKind::Grouped | ProtocolKind::Special
        )
    }
}

/// Subset layouts understood by the harness. `tail` deals positions
/// round-robin from the end of the string and puts every error at the
/// highest positions of its subset, so for ECC runs all errors hit the
/// redundancy tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarnessLayout {
    Core(Layout),
    Tail,
}

impl HarnessLayout {
    pub fn parse(s: &str) -> Option<Self> {
        if s == "tail" {
            return Some(HarnessLayout::Tail);
        }
        Layout::parse(s).map(HarnessLayout::Core)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            HarnessLayout::Core(l) => l.as_str(),
            HarnessLayout::Tail => "tail",
        }
    }
}

/// Every key is optional in the file; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub n: usize,
    /// Hamming / ECC / expander cells: `sizes[c]` pairs with `bounds[c]`.
    pub sizes: Vec<Vec<usize>>,
    pub bounds: Vec<Vec<usize>>,
    /// Edit cells: one per `k`, crossed with `styles`.
    pub k: Vec<usize>,
    pub layouts: Vec<String>,
    pub styles: Vec<String>,
    /// Errors per subset uniform in `[0, k_i]` instead of exactly `k_i`.
    pub uniform_counts: bool,
    /// Extra errors anywhere outside Bob's subsets (two-sided setting).
    pub k_a: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub output: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Record wall time per trial. Off makes output files byte-identical.
    pub timing: bool,

    pub c_d: f64,
    pub c_m: f64,
    pub c_s: f64,
    pub delta: f64,
    pub conservative: bool,
    pub chi_base: u32,
    pub hash_bits: u32,
    pub c_prime: f64,
    pub fill_gaps: bool,
    pub joint_planes: bool,
    /// Expansion factor checked by `expander verify`, as a fraction of `d`.
    pub alpha: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let t = Tuning::default();
        let e = EditConfig::default();
        ExperimentConfig {
            protocol: ProtocolKind::OneSet,
            n: 4096,
            sizes: Vec::new(),
            bounds: Vec::new(),
            k: Vec::new(),
            layouts: vec!["random".into()],
            styles: vec!["random".into()],
            uniform_counts: false,
            k_a: 0,
            trials: 100,
            master_seed: 1,
            output: None,
            threads: None,
            timing: true,
            c_d: t.c_d,
            c_m: t.c_m,
            c_s: t.c_s,
            delta: t.delta,
            conservative: false,
            chi_base: 2,
            hash_bits: e.hash_bits,
            c_prime: e.c_prime,
            fill_gaps: e.fill_gaps,
            joint_planes: e.joint_planes,
            alpha: 0.9,
        }
    }
}

/// One point of the parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub index: usize,
    pub sizes: Vec<usize>,
    pub bounds: Vec<usize>,
    pub k: usize,
    pub layout: Option<HarnessLayout>,
    pub style: Option<EditStyle>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).context("parsing experiment config")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text)
    }

    pub fn hamming_config(&self) -> Config {
        Config {
            tuning: Tuning {
                c_d: self.c_d,
                c_m: self.c_m,
                c_s: self.c_s,
                delta: self.delta,
            },
            mode: if self.conservative {
                PlanMode::Conservative
            } else {
                PlanMode::Tuned
            },
        }
    }

    pub fn edit_config(&self) -> EditConfig {
        EditConfig {
            hash_bits: self.hash_bits,
            c_prime: self.c_prime,
            hamming: self.hamming_config(),
            fill_gaps: self.fill_gaps,
            joint_planes: self.joint_planes,
        }
    }

    pub fn cells(&self) -> Result<Vec<Cell>> {
        let mut out = Vec::new();
        match self.protocol {
            ProtocolKind::Edit => {
                for &k in &self.k {
                    for s in &self.styles {
                        let style = EditStyle::parse(s).with_context(|| format!("unknown edit style {s:?}"))?;
                        out.push(Cell {
                            index: out.len(),
                            sizes: Vec::new(),
                            bounds: Vec::new(),
                            k,
                            layout: None,
                            style: Some(style),
                        });
                    }
                }
            }
            _ => {
                ensure!(
                    self.sizes.len() == self.bounds.len(),
                    "sizes has {} cells but bounds has {}",
                    self.sizes.len(),
                    self.bounds.len()
                );
                for (sizes, bounds) in self.sizes.iter().zip(&self.bounds) {
                    for l in &self.layouts {
                        let layout = HarnessLayout::parse(l).with_context(|| format!("unknown layout {l:?}"))?;
                        out.push(Cell {
                            index: out.len(),
                            sizes: sizes.clone(),
                            bounds: bounds.clone(),
                            k: bounds.iter().sum(),
                            layout: Some(layout),
                            style: None,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Checks every cell's parameters without running anything.
    pub fn validate(&self) -> Result<()> {
        ensure!(self.trials > 0, "trials must be positive");
        ensure!(self.n > 0, "n must be positive");
        ensure!(self.threads != Some(0), "threads must be positive");
        ensure!(self.alpha > 0.0 && self.alpha <= 1.0, "alpha must lie in (0, 1]");
        let cells = self.cells()?;
        ensure!(!cells.is_empty(), "the parameter grid is empty");
        let cfg = self.hamming_config();
        for c in &cells {
            match self.protocol {
                ProtocolKind::Edit => {
                    EditParams::new(self.n, c.k, &self.edit_config()).with_context(|| format!("edit cell k = {}", c.k))?;
                }
                ProtocolKind::Expander => {
                    ensure!(c.sizes.len() == 1, "expander cells take one size and one bound");
                    SubsetSpec::new(self.n, c.sizes.clone(), c.bounds.clone())?.require_protocol_ready()?;
                }
                kind => {
                    let spec = SubsetSpec::new(self.n, c.sizes.clone(), c.bounds.clone())
                        .with_context(|| format!("cell {}", c.index))?;
                    spec.require_protocol_ready()?;
                    if kind == ProtocolKind::OneSet && c.sizes.len() != 1 {
                        bail!("one-set cells take exactly one subset");
                    }
                    if c.layout == Some(HarnessLayout::Tail) && kind != ProtocolKind::Ecc {
                        bail!("the tail layout only applies to ecc runs");
                    }
                    if self.k_a > 0 {
                        ensure!(
                            kind != ProtocolKind::Ecc && kind != ProtocolKind::OneSet,
                            "k_a needs a multi-set hamming protocol"
                        );
                        let free = self.n - spec.total_size();
                        ensure!(free >= 2 * self.k_a, "complement of size {free} cannot carry k_a = {}", self.k_a);
                    }
                    if kind == ProtocolKind::Ecc {
                        EccPlan::new(self.n, &c.sizes, &c.bounds, self.chi_base, &cfg)?;
                    }
                }
            }
        }
        Ok(())
    }
}
