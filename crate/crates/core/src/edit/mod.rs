//! Edit-distance document exchange.
//!
//! - [`protocol`]: level parameters, Alice's sketch and Bob's recovery.
//! - [`matching`]: the monotone block matching under a shift budget.
//! - [`hash`]: keyed per-block hash functions.
//! - [`adversary`]: edit scripts for experiments.

pub mod adversary;
pub mod hash;
pub mod matching;
pub mod protocol;

pub use adversary::{edit_adversary, EditOp, EditStyle};
pub use hash::{hash_block, LevelHash};
pub use matching::{dp_match, shift_cost, MatchBlock, Matching};
pub use protocol::{
    alice_edit_sketch, bob_edit_recover, bob_edit_recover_traced, EditConfig, EditParams, EditTrace, FinalCode,
    LevelParams, LevelTrace, RecoveryState,
};
