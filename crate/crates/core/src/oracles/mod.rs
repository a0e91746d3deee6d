//! Brute-force finite-group verifiers.
//!
//! [`abelian`] enumerates products of cyclic groups to count elements by
//! order and cyclic subgroups by their intersection with a distinguished
//! factor. [`table`] works on arbitrary finite groups given by a Cayley
//! table: it enumerates subgroup lattices and checks the conjugacy-class
//! counting identity for subgroups of a given index.

pub mod abelian;
pub mod table;

pub use abelian::{
    dual_cyclic_subgroup_count, dual_cyclic_subgroup_counts, dual_group_for, element_order_count,
    AbelianGroup, DEFAULT_MAX_ABELIAN_ORDER,
};
pub use table::{
    builtin_group, lemma_check, lemma_check_with_cap, subgroups, subgroups_with_cap, BuiltinGroup,
    GroupTable, LemmaReport, DEFAULT_MAX_TABLE_ORDER,
};
