//! Graph relations and the structures built on them: the strong, weak and
//! weighted relational operators, point-determining quotients, R-cores and
//! cocores, a constraint-pluggable homomorphism search engine, degree
//! refinement matrices, and embeddings of finite posets into homomorphism
//! orders of directed cycles, sunlet gadgets and line graphs.
//!
//! Every search takes a [`SearchConfig`] node budget and answers with an
//! [`Outcome`], keeping "absent" apart from "budget exhausted".

pub mod drm;
pub mod embedding;
pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod generators;
pub mod hom;
pub mod graph;
pub mod io;
pub mod iso;
pub mod poset;
pub mod relation;
pub mod search;
pub mod weights;

pub use error::{Error, Result};
pub use graph::{ComplementMode, EdgeOrientation, Graph, Partition};
pub use hom::{check_hom, find_hom, HomConstraint};
pub use relation::Relation;
pub use search::{Outcome, SearchConfig};
pub use weights::{apply_weighted, Weight, WeightMatrix};

/// Integer-weighted adjacency matrix.
pub type IntWeights = WeightMatrix<i64>;
/// Real-weighted adjacency matrix.
pub type RealWeights = WeightMatrix<f64>;
/// Exact rational weights.
pub type RationalWeights = WeightMatrix<num_rational::Rational64>;
