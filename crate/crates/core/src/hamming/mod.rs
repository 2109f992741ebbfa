//! Hamming-distance document exchange under asymmetric information.
//!
//! - [`plan`]: public iteration schedules and ratio-band grouping.
//! - [`protocol`]: the one-set, general, grouped and special protocols.
//! - [`ecc`]: the stochastic code and the two-sided reduction.
//! - [`sketch`]: the segmented sketch container and its byte format.

pub mod ecc;
pub mod plan;
pub mod protocol;
pub mod sketch;

pub use ecc::{ecc_decode, ecc_encode, two_sided_sizes, two_sided_wrap, EccPlan};
pub use plan::{group_by_chi, plan_general, Config, Grouping, Iteration, ProtocolPlan, C};
pub use protocol::{
    alice_general, alice_grouped, alice_one_set, alice_special, bob_general, bob_grouped, bob_one_set, bob_special,
    special_decode, special_encode, stage_graph, SpecialPlan,
};
pub use sketch::{ProtocolId, Segment, SegmentTag, Sketch};
