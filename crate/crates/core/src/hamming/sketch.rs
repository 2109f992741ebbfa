//! The segmented sketch container and its byte format.
//!
//! ```text
//! "ADE1" | version u16 | protocol u8 | n u64 | t u16
//! then per segment: tag u8 | iteration u16 | bit length u32 | payload
//! ```
//!
//! Integers are big-endian; each payload is `ceil(len / 8)` bytes in bit
//! string order. Segments run to the end of the buffer.

use alloc::format;
use alloc::vec::Vec;

use crate::bits::BitString;
use crate::error::Error;

pub const MAGIC: [u8; 4] = *b"ADE1";
pub const VERSION: u16 = 1;
pub const HEADER_BYTES: usize = 17;
pub const SEGMENT_HEADER_BYTES: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolId {
    OneSet,
    General,
    Special,
    Grouped,
    Edit,
}

impl ProtocolId {
    pub fn code(self) -> u8 {
        match self {
            ProtocolId::OneSet => 1,
            ProtocolId::General => 2,
            ProtocolId::Special => 3,
            ProtocolId::Grouped => 4,
            ProtocolId::Edit => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            1 => ProtocolId::OneSet,
            2 => ProtocolId::General,
            3 => ProtocolId::Special,
            4 => ProtocolId::Grouped,
            5 => ProtocolId::Edit,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolId::OneSet => "one_set",
            ProtocolId::General => "general",
            ProtocolId::Special => "special",
            ProtocolId::Grouped => "grouped",
            ProtocolId::Edit => "edit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentTag {
    Parity,
    Syndrome,
    HashVec,
    LevelSketch,
    Final,
}

impl SegmentTag {
    pub fn code(self) -> u8 {
        match self {
            SegmentTag::Parity => 1,
            SegmentTag::Syndrome => 2,
            SegmentTag::HashVec => 3,
            SegmentTag::LevelSketch => 4,
            SegmentTag::Final => 5,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            1 => SegmentTag::Parity,
            2 => SegmentTag::Syndrome,
            3 => SegmentTag::HashVec,
            4 => SegmentTag::LevelSketch,
            5 => SegmentTag::Final,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub tag: SegmentTag,
    pub iteration: u16,
    pub payload: BitString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    pub protocol: ProtocolId,
    pub n: u64,
    pub t: u16,
    pub segments: Vec<Segment>,
}

impl Sketch {
    pub fn new(protocol: ProtocolId, n: usize, t: usize) -> Self {
        Sketch {
            protocol,
            n: n as u64,
            t: t as u16,
            segments: Vec::new(),
        }
    }

    pub fn push(&mut self, tag: SegmentTag, iteration: usize, payload: BitString) {
        self.segments.push(Segment {
            tag,
            iteration: iteration as u16,
            payload,
        });
    }

    /// Sum of segment payload lengths.
    pub fn payload_bits(&self) -> usize {
        self.segments.iter().map(|s| s.payload.len()).sum()
    }

    /// Payload bits plus the fixed header and per-segment headers.
    pub fn size_bits(&self) -> usize {
        self.payload_bits() + 8 * (HEADER_BYTES + SEGMENT_HEADER_BYTES * self.segments.len())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.size_bits().div_ceil(8) + self.segments.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_be_bytes());
        out.push(self.protocol.code());
        out.extend_from_slice(&self.n.to_be_bytes());
        out.extend_from_slice(&self.t.to_be_bytes());
        for seg in &self.segments {
            out.push(seg.tag.code());
            out.extend_from_slice(&seg.iteration.to_be_bytes());
            out.extend_from_slice(&(seg.payload.len() as u32).to_be_bytes());
            out.extend_from_slice(&seg.payload.to_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, Error> {
        let bad = |msg: &str| Error::MalformedSketch(msg.into());
        if bytes.len() < HEADER_BYTES {
            return Err(bad("header truncated"));
        }
        if bytes[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u16::from_be_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::MalformedSketch(format!("unsupported version {version}")));
        }
        let protocol = ProtocolId::from_code(bytes[6])
            .ok_or_else(|| Error::MalformedSketch(format!("unknown protocol id {}", bytes[6])))?;
        let n = u64::from_be_bytes(bytes[7..15].try_into().expect("8 bytes"));
        let t = u16::from_be_bytes([bytes[15], bytes[16]]);
        let mut segments = Vec::new();
        let mut pos = HEADER_BYTES;
        while pos < bytes.len() {
            if bytes.len() - pos < SEGMENT_HEADER_BYTES {
                return Err(bad("segment header truncated"));
            }
            let tag = SegmentTag::from_code(bytes[pos])
                .ok_or_else(|| Error::MalformedSketch(format!("unknown segment tag {}", bytes[pos])))?;
            let iteration = u16::from_be_bytes([bytes[pos + 1], bytes[pos + 2]]);
            let len = u32::from_be_bytes(bytes[pos + 3..pos + 7].try_into().expect("4 bytes")) as usize;
            pos += SEGMENT_HEADER_BYTES;
            let nbytes = len.div_ceil(8);
            if bytes.len() - pos < nbytes {
                return Err(bad("segment payload truncated"));
            }
            let payload = BitString::from_bytes(&bytes[pos..pos + nbytes], len)?;
            if payload.to_bytes() != bytes[pos..pos + nbytes] {
                return Err(bad("nonzero padding bits in segment payload"));
            }
            pos += nbytes;
            segments.push(Segment {
                tag,
                iteration,
                payload,
            });
        }
        Ok(Sketch {
            protocol,
            n,
            t,
            segments,
        })
    }

    /// Checks the header against what the receiver expects.
    pub fn expect_header(&self, protocol: ProtocolId, n: usize) -> Result<(), Error> {
        if self.protocol != protocol {
            return Err(Error::MalformedSketch(format!(
                "expected a {} sketch, got {}",
                protocol.as_str(),
                self.protocol.as_str()
            )));
        }
        if self.n != n as u64 {
            return Err(Error::MalformedSketch(format!("sketch is for n = {}, input has {n}", self.n)));
        }
        Ok(())
    }

    /// The payload of the `index`-th segment, checking tag and length.
    pub fn segment(&self, index: usize, tag: SegmentTag, len: usize) -> Result<&BitString, Error> {
        let seg = self
            .segments
            .get(index)
            .ok_or_else(|| Error::MalformedSketch(format!("missing segment {index}")))?;
        if seg.tag != tag {
            return Err(Error::MalformedSketch(format!("segment {index} has the wrong tag")));
        }
        if seg.payload.len() != len {
            return Err(Error::MalformedSketch(format!(
                "segment {index} has {} bits, expected {len}",
                seg.payload.len()
            )));
        }
        Ok(&seg.payload)
    }

    pub fn expect_segment_count(&self, count: usize) -> Result<(), Error> {
        if self.segments.len() != count {
            return Err(Error::MalformedSketch(format!(
                "expected {count} segments, found {}",
                self.segments.len()
            )));
        }
        Ok(())
    }
}
