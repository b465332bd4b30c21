//! Operator families of the methyl decoherence-free subspace and their checks.

pub mod basis;
pub mod errors;
pub mod report;
pub mod two_qubit;

pub use basis::{
    embed_in_system, embed_string_in_system, family_order, highest_state, logical_basis, methyl_weights, mq_coherences,
    order_fractions, pure_coherences, LogicalBasis, DFS_LABELS, LOGICAL_LABELS, MQ_FAMILIES, MQ_STRINGS,
};
pub use errors::{
    eigenoperator_check, error_family, permutation_symmetry_check, permutations, permute_operator, permute_string, EigenSign,
    ErrorFamily, FamilyTag, Symmetry, EN_MEMBERS,
};
pub use report::{dfs_report, Check, DfsReport, EigenEntry, PermutationEntry, PROTONS};
pub use two_qubit::{flip_flop_notes, logical_zero_operator, two_qubit_dfs_demo, TwoQubitDemo};
