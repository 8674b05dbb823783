//! Exact computations in the normalized unit group `V(F_pG)` of the modular
//! group algebra of a finite p-group `G`.
//!
//! - [`group`]: p-groups as multiplication tables and their constructions.
//! - [`algebra`]: arithmetic and linear algebra in `F_pG`.

pub mod algebra;
pub mod group;
pub mod harness;
pub mod prime;
pub mod recognizer;
pub mod units;
