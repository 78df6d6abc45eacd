//! Expansion classes: a base class over L with an extended class over a
//! larger signature, and the checks relating the two.

mod ops;
mod spec;

pub use ops::{
    age_shadow, all_expansions_embed, check_expansion_functor, check_expp, check_precompact, check_reasonable,
    degree_equals_expansion_count, expansion_counts, expansions_of, finite_logic_action, pullback_expansion,
    reachable_points, AgeShadow, ConsistencyReport, ConsistencyStatus, ConstantRefutation, ExpPReport, ExpPRow,
    ExpPVerdict, ExpansionClass, FunctorReport, PrecompactReport, PrecompactRow, ReachablePoints, ReasonableFailure,
    ReasonableReport,
};
pub use spec::{expansion_by_name, expansion_names, Alignment, ClassRef, ExpansionSpec, ExpansionSpecDoc};
