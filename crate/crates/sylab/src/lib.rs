//! Exact computational finite group theory over permutation representations.
//!
//! The crate provides stabilizer chains, backtrack searches (centralizers,
//! normalizers, conjugacy), Sylow subgroups and their local data, composition
//! factors with simple-group identification, exact character tables, p-block
//! distributions and weight counting, plus a catalog/reporting harness and a
//! thin `sylab` CLI. See the `examples/` directory for runnable tours of each
//! capability.

pub mod arith;
pub mod backtrack;
pub mod chain;
pub mod classes;
pub mod error;
pub mod group;
pub mod perm;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Permutation;

/// Resource bounds for the expensive operations. Exceeding a bound is a
/// reported error, never a silent skip.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Class-count bound for class data and character tables.
    pub max_classes: usize,
    /// Group-order bound for character table computation.
    pub table_order: u64,
    /// Full conjugation-orbit enumeration below this order; sampling above.
    pub class_full_enum: u64,
    /// Bound on enumerating the elements of a single conjugacy class.
    pub class_elements: u64,
    /// Bound on the index of a coset action (quotient degree).
    pub quotient_degree: u64,
    /// Element bound for the two quotients enumerated by the Lemma 2.1 check.
    pub lemma21_quotient: u64,
    /// Sylow-order bound for radical subgroup enumeration.
    pub radical_sylow: u64,
    /// General element-enumeration bound.
    pub element_enum: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_classes: 200,
            table_order: 10_000_000,
            class_full_enum: 100_000,
            class_elements: 2_000_000,
            quotient_degree: 100_000,
            lemma21_quotient: 10_000,
            radical_sylow: 729,
            element_enum: 1_000_000,
        }
    }
}
