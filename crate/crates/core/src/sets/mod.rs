//! Boundary fragment sets and the explicit network whose preimage of 1
//! approximates such a set.

mod approx;
mod boundary;
mod construct;
mod fragment;
mod region;

pub use approx::{
    compose_boundary_net, grid_interp_boundary_net, pw_linear_boundary_net, signed_scale_net, ApproxNet,
    BoundaryApproximator, ComposeReport, ComposeStage, ComposedApprox, GridInterpApprox, PwLinearApprox,
    StageComponent,
};
pub use boundary::{mollifier, BoundaryFn};
pub use construct::{
    approx_dfq_bound, bayes_approx_net, bayes_approx_net_with, boundary_shift_net, box_gate_net, clip_net, clip_value,
    dyadic_floor, fragment_indicator_net, heaviside_net, membership, snap_box, ApproxBudget, ApproxOptions,
    BayesApprox, BudgetReport, CertifiedFragment, CertifiedSet,
};
pub use fragment::{drop_coord, BoundaryFragmentSet, Fragment};
pub use region::{
    complement_intervals, merge_intervals, sym_diff_intervals, BoxSet, Complement, EmptySet, FullCube, Interval,
    NetworkSet, Region,
};
