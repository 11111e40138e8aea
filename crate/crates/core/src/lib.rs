//! Representation cohomology of finite posets, computed exactly over the
//! integers on interval-generated cochain complexes.

pub mod error;
pub mod poset;
pub mod chain;
pub mod interval;
pub mod levels;
pub mod class;
pub mod matrix;
pub mod snf;
pub mod complex;
pub mod cohomology;
pub mod family;

pub use chain::{enumerate_chains, Chain};
pub use error::{Error, Result};
pub use interval::{enumerate_intervals, is_interval, Interval, DEFAULT_INTERVAL_CAP};
pub use levels::{structure_map, LevelPoset, LevelTower, ObjectMap, OrderRule, StructureKind, Variant};
pub use matrix::IntegerMatrix;
pub use poset::Poset;
pub use snf::{rational_rank, smith_form, smith_with_transforms, SmithDecomposition, SmithForm};
pub use class::{coboundary_class, cup, morphism_components, pullback_class, pullback_components, rank_invariant, unit_class, ComponentRule, VirtualClass};
pub use cohomology::{cocycle_representatives, cohomology, cohomology_all, CohomologyGroup, Representatives};
pub use complex::{build_complex, interval_bases, nerve_comparison, nerve_complex, pullback_matrix, singleton_complex, Basis, BasisKind, CochainComplex, IntervalBasis, NerveComparison};
pub use family::{family, parse_family, FAMILY_NAMES};
