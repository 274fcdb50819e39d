//! Parametrized topological complexity of sphere bundles.
//!
//! * [`ring`]: truncated polynomial cohomology rings and the Leray–Hirsch
//!   module of a sphere bundle with a section.
//! * [`bundle`]: vector bundle descriptors with characteristic classes,
//!   Whitney sums and the doubled bundle `ξ̈`.
//! * [`bounds`]: the rule engine producing bounds on sectional category and
//!   parametrized topological complexity, with provenance.
//! * [`planner`]: explicit fiberwise motion planners on the sphere bundles of
//!   `η ⊕ ε` and of the Hopf bundle.
//! * [`verify`]: independent oracles and property checks.

pub mod bounds;
pub mod bundle;
pub mod planner;
pub mod ring;
pub mod verify;

pub use bounds::{
    kernel_cuplength, secat_ddot, secat_sphere_bundle, tc_dimension_upper, tc_sphere_bundle,
    tc_split_upper, BoundsError, Contribution, ProvenanceEntry, Quantity, RuleId, TCReport,
    UpperBound,
};
pub use bundle::{
    ddot_of, k_fold_sum, whitney_sum, BaseFamily, BaseSpace, BundleDescriptor, BundleError,
    CustomBundle, DdotDescriptor,
};
pub use planner::{
    plan, plan_default, plan_hopf, BundlePoint, PlannedPath, PlannerError, ProjectiveRep,
};
pub use ring::LHElement;
pub use ring::{Coefficients, Generator, RingDescriptor, RingElement, RingError};
