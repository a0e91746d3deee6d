//! Exact counts of extensions of p-adic fields.
//!
//! The crate evaluates, in exact integer arithmetic:
//!
//! - Krasner's count of extensions with given ramification and inertia in a
//!   fixed algebraic closure ([`counting::krasner_count`]);
//! - the number of cyclic extensions of a field with given ramification and
//!   inertia, or of given degree ([`counting::cyclic_count_ef`],
//!   [`counting::cyclic_count_total`]);
//! - the number of isomorphism classes of extensions with given ramification
//!   and inertia, or of given degree ([`theorems::iso_count_ef`],
//!   [`theorems::iso_count_total`], [`theorems::tame_iso_count`]).
//!
//! The [`oracles`] module holds brute-force finite-group verifiers for each
//! closed form, and [`selfcheck`] runs them as a property suite.

pub mod arith;
pub mod counting;
pub mod error;
pub mod oracles;
pub mod profiles;
pub mod selfcheck;
pub mod theorems;

pub use arith::{Count, Limits, PValuation, DEFAULT_MAX_BITS};
pub use counting::KrasnerQuery;
pub use error::{CountError, Result};
pub use profiles::{qp_profile, BaseFieldProfile, CyclicBaseProfile, CyclotomicDatum};
pub use theorems::{Expansion, Summand};
