//! Arrow relations, colorings of embedding sets, thick and syndetic sets at
//! a horizon, Ramsey degree evidence, bad-coloring trees and CNF export.

mod arrow;
mod cnf;
mod coloring;
mod degree;
mod horizon;
mod tree;

pub use arrow::{
    arrow_check, find_arrow_witness, from_copy_coloring, instance, structural_arrow_check, to_copy_coloring,
    ArrowQuery, ArrowResult, ArrowVerdict, Instance, WitnessSearch,
};
pub use coloring::{
    act_on_coloring, fingerprint_maps, product_coloring, pullback_coloring, refines, Coloring, EmbeddingIndex,
    PartialMap,
};
pub use horizon::{
    horizon_members, syndetic_at_horizon, thick_at_horizon, EmbeddingSet, SyndeticReport, ThickReport, ThickWitness,
};
pub use cnf::{export_bad_coloring_cnf, import_sat_model, CnfExport};
pub use degree::{
    degree_report, lower_evidence, order_pattern, upper_evidence, DegreeConfig, DegreeReport, DegreeStatus,
    LowerEvidence, OrderClass, Ratio, SubstructureCheck, UpperAttempt, UpperInstance,
};
pub use tree::{bad_coloring_tree, BadColoringTree, TreeLevel};
