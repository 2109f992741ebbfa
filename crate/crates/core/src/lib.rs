//! Document exchange and error correction under asymmetric information.
//!
//! Alice holds a bit string `x`, Bob holds a nearby `y`. Only Bob knows the
//! disjoint position sets `S_1..S_t` in which `y` may differ from `x`; both
//! parties know the set sizes and the per-set error bounds. Alice sends one
//! sketch and Bob reconstructs `x` exactly.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithm:
//!
//! - [`bits`]: packed bit strings with the wire bit order.
//! - [`spec`]: subset specifications, error patterns, information baselines.
//! - [`expander`]: random left-regular bipartite graphs and expansion checks.
//! - [`expcode`]: expander-code parities and the bit-flipping decoders.
//! - [`syndrome`]: systematic Reed-Solomon codes over `GF(2^w)`.
//! - [`hamming`]: the Hamming-distance protocols, the sketch format and the
//!   stochastic code built from them.
//! - [`edit`]: the leveled edit-distance protocol.
//!
//! All randomness shared between the parties is derived from a `u64` seed
//! through [`seed::derive`]; nothing in this crate touches the OS.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bits;
pub mod edit;
pub mod editdist;
pub mod error;
pub mod expander;
pub mod expcode;
pub mod hamming;
pub mod seed;
pub mod spec;
pub mod syndrome;

pub use bits::BitString;
pub use error::Error;
pub use spec::{ErrorPattern, SubsetSpec};

pub type Result<T, E = Error> = core::result::Result<T, E>;
