//! Feedforward ReLU networks with weights on the dyadic grid.

mod calculus;
mod check;
mod enumerate;
mod grid;
mod network;

pub use calculus::{
    concatenate, identity_net, linear_net, parallelize, parallelize_all, power_of_two_nets, scale_net, sum_outputs,
};
pub use check::{compose_check, random_network, ComposeCheck};
pub use enumerate::{
    count_bound, enumerated_count, fingerprint, log_count_bound, network_from_slots, slot_count, ClassBudget,
    ClassEnumerator, DEFAULT_ENUMERATION_LIMIT,
};
pub use grid::{dyadic_exponent, from_pair, to_pair, WeightGrid, MAX_EXPONENT};
pub use network::{Layer, Matrix, Network, NetworkDoc, NETWORK_FORMAT_VERSION};
