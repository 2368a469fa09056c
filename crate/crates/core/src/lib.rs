//! Finite graded gamma rings, gamma anneids, and their Jacobson radicals.
//!
//! The library builds finite gamma rings graded in the sense of Krasner,
//! moves between the three equivalent presentations of such a structure —
//! the graded ring itself, the semihomogeneous quadruple `(R, Γ, A, G)`,
//! and the gamma anneid carried by the homogeneous parts — and computes
//! the Jacobson radical of a gamma anneid along several independent
//! characterizations that are cross-checked against each other.
//!
//! Modules:
//! - [`finabel`]: finite abelian groups as products of cyclic groups.
//! - [`grading`]: graduations, homogeneous parts, homogroupoids,
//!   linearization.
//! - [`gammaring`]: gamma rings, graded gamma rings, the grade ternary
//!   operation, and the concrete builders (generalized matrix rings,
//!   semidirect sums, graded rings as gamma rings).
//! - [`anneid`]: gamma anneids and the three-aspect equivalence.
//! - [`ideals`]: one-sided ideals, principal ideals, factor anneids,
//!   modularity.
//! - [`moduloid`]: moduloids over an anneid, regularity, irreducibility,
//!   strictly cyclic structure.
//! - [`radical`]: quasi-regular elements and the Jacobson radical.
//! - [`dsl`]: the `.ggr` text format.
//! - [`corpus`]: deterministic generation of small test structures.

pub mod anneid;
pub mod corpus;
pub mod dsl;
pub mod error;
pub mod finabel;
pub mod gammaring;
pub mod grading;
pub mod ideals;
pub mod moduloid;
pub mod radical;
pub mod report;
pub mod samples;
pub mod set;

pub use error::{Error, Result};

/// Enumeration and table-size bounds threaded through the expensive
/// operations. `GGR_MAX_SIZE` and the CLI flags override the defaults.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    /// Largest carrier on which right ideals are enumerated.
    pub max_carrier: usize,
    /// Largest group on which subgroups are enumerated.
    pub max_group: usize,
    /// Largest right-ideal lattice materialized.
    pub max_ideals: usize,
    /// Largest linearized ring built for the large radical.
    pub max_linearized: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_carrier: 24,
            max_group: 64,
            max_ideals: 4096,
            max_linearized: 256,
        }
    }
}

impl Bounds {
    pub fn with_max_carrier(mut self, n: usize) -> Self {
        self.max_carrier = n;
        self
    }
}
