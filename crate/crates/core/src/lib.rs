//! Hopf graphs `Γ_{G,𝔯}` of a group with ramification data, and the
//! classification of their Leavitt path algebras.
//!
//! The crate builds the graphs, computes the semigroup `S_{G,𝔯}` and the
//! subgroups it determines, evaluates closed-form verdicts (GK dimension,
//! stable rank, pure infinite simplicity, finite-dimensional
//! representations, IBN), and recomputes each verdict directly on the graph
//! for comparison.
//!
//! ```
//! use hopf_lpa::{classify, parse_group, parse_ramification};
//!
//! let g = parse_group("symmetric:3", 5040).unwrap();
//! let r = parse_ramification(&g, "(1 2 3)=1", 8).unwrap();
//! let (_, cls) = classify(&g, &r);
//! assert_eq!(cls.lpa_structure.as_deref(), Some("L_K(Δ)^(2)"));
//! ```

pub mod cardinal;
pub mod classifier;
pub mod cross_check;
pub mod digraph;
pub mod groups;
pub mod hopf_graph;
pub mod lattice;
pub mod monoid;
pub mod ramification;
pub mod semigroup;

pub use cardinal::Cardinal;
pub use classifier::{classify, Classification, GkClass, StableRank};
pub use cross_check::{run_instance, CheckConfig, CrossCheckReport, Instance, InstanceResult};
pub use groups::{parse_group, AmbientGroup, FiniteGroup, GroupError};
pub use hopf_graph::{GraphError, HopfGraphBundle, MultiDigraph};
pub use monoid::{GraphMonoid, MonoidBudget};
pub use ramification::{parse_ramification, RamificationData, RamificationError};
pub use semigroup::SemigroupReport;

/// Lattices over arbitrary-precision integers.
pub type Lattice = lattice::IntegerLattice<num_bigint::BigInt>;
/// Lattices over `i64`; overflow panics in debug builds.
pub type MachineLattice = lattice::IntegerLattice<i64>;
pub type Functional = lattice::Functional<num_bigint::BigInt>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ramification(#[from] RamificationError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl Error {
    /// Whether the input was well-formed but exceeded a configured cap.
    pub fn is_size_limit(&self) -> bool {
        match self {
            Error::Group(GroupError::SizeLimit { .. }) => true,
            Error::Ramification(e) => e.is_size_limit(),
            Error::Graph(GraphError::SizeLimit { .. }) => true,
            _ => false,
        }
    }
}
