//! File formats used by the `sketch` / `recover` commands.
//!
//! - Bit files: magic `ADBS`, the bit length as a big-endian u64, then the
//!   bits packed MSB-first.
//! - Sketch files: the core wire format, verbatim.
//! - Subset files: JSON `{ "n", "sizes", "bounds", "subsets" }`.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use asymde_core::hamming::Sketch;
use asymde_core::{BitString, SubsetSpec};
use serde::{Deserialize, Serialize};

const BITS_MAGIC: &[u8; 4] = b"ADBS";

pub fn encode_bits(bits: &BitString) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + bits.len().div_ceil(8));
    out.extend_from_slice(BITS_MAGIC);
    out.extend_from_slice(&(bits.len() as u64).to_be_bytes());
    out.extend_from_slice(&bits.to_bytes());
    out
}

pub fn decode_bits(bytes: &[u8]) -> Result<BitString> {
    ensure!(bytes.len() >= 12 && &bytes[..4] == BITS_MAGIC, "not a bit file");
    let len = u64::from_be_bytes(bytes[4..12].try_into().expect("8 bytes")) as usize;
    ensure!(
        bytes.len() - 12 == len.div_ceil(8),
        "bit file holds {} payload bytes, expected {}",
        bytes.len() - 12,
        len.div_ceil(8)
    );
    Ok(BitString::from_bytes(&bytes[12..], len)?)
}

pub fn read_bits(path: &Path) -> Result<BitString> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    decode_bits(&bytes).with_context(|| format!("decoding {}", path.display()))
}

pub fn write_bits(path: &Path, bits: &BitString) -> Result<()> {
    fs::write(path, encode_bits(bits)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_sketch(path: &Path) -> Result<Sketch> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Sketch::from_bytes(&bytes).with_context(|| format!("decoding sketch {}", path.display()))
}

pub fn write_sketch(path: &Path, sketch: &Sketch) -> Result<()> {
    fs::write(path, sketch.to_bytes()).with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetFile {
    pub n: usize,
    pub sizes: Vec<usize>,
    pub bounds: Vec<usize>,
    pub subsets: Vec<Vec<usize>>,
}

impl SubsetFile {
    pub fn from_spec(spec: &SubsetSpec) -> Result<Self> {
        let Some(subsets) = spec.subsets() else {
            bail!("spec has no subsets to write");
        };
        Ok(SubsetFile {
            n: spec.n(),
            sizes: spec.sizes().to_vec(),
            bounds: spec.bounds().to_vec(),
            subsets: subsets.to_vec(),
        })
    }

    pub fn to_spec(&self) -> Result<SubsetSpec> {
        Ok(SubsetSpec::new(self.n, self.sizes.clone(), self.bounds.clone())?.with_subsets(self.subsets.clone())?)
    }
}

pub fn read_subsets(path: &Path) -> Result<SubsetSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SubsetFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_spec()
}

pub fn write_subsets(path: &Path, spec: &SubsetSpec) -> Result<()> {
    let text = serde_json::to_string_pretty(&SubsetFile::from_spec(spec)?)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}
