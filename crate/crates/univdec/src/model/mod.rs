//! Core domain model: alphabets, sequences, priors, channels and metrics.

pub mod alphabet;
pub mod channel;
pub mod metric;
pub mod prior;

pub use alphabet::{enumerate_sequences, enumeration_cap, Alphabet, Sequence, DEFAULT_ENUM_CAP};
pub use channel::Channel;
pub use metric::{markov_as_fsm, pair_index, FamilyMember, Metric, MetricFamily, STATE_CAP};
pub use prior::{Prior, PriorKind};
