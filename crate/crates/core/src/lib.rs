//! Exact computation of restricted h-fold sumsets in finite abelian groups.
//!
//! `h^A` is the set of values reachable as a sum of `h` *distinct* elements
//! of a subset `A`; `R(m)` counts the ordered representations.  The crate
//! computes these exactly (integer arithmetic only, with automatic promotion
//! to big integers), via either direct enumeration or a partition identity
//! over dilate convolutions with an optional number-theoretic-transform fast
//! path, and provides the character-sum and density-threshold machinery used
//! to certify when `h^A` covers the whole group.

pub mod characters;
pub mod convolve;
pub mod error;
pub mod group;
pub mod partitions;
pub mod rep_counts;
pub mod thresholds;

pub use characters::{
    arc_max_consecutive, arc_sum_audit, arc_sum_bound, orthogonality_audit, parseval_audit,
    spectrum, spectrum_max_audit, weighted_root_sum, ArcSumReport, CharacterTable,
    OrthogonalityReport, ParsevalReport, SpectrumMaxReport, SpectrumReport, CHARACTER_SUM_TOL,
};
pub use convolve::{convolve, convolve_many, convolve_many_with, convolve_with, Engine};
pub use error::{Error, Result};
pub use group::{dilate_count, indicator, CountVector, Element, GroupSpec, SubsetA, MAX_ORDER};
pub use partitions::{
    coefficient, colex_less, colex_partitions, partition_count, three_one_index,
    verify_newton_identity, NewtonIdentityCheck, Partition, MAX_COUNT_H, MAX_ENUM_H,
};
pub use rep_counts::{
    audit_component_bounds, audit_power_lower_bound, combination_count, compute_r, compute_r_i,
    compute_r_with, is_covering, restricted_sumset, restricted_sumset_naive, sumset_unrestricted,
    ComponentBoundsReport, PowerLowerBoundReport, RMethod, RepCountOptions, RepCountProfile,
    DEFAULT_COMBINATION_GUARD,
};
pub use thresholds::{
    alpha_threshold, chi_upper_bound, density_polynomial, density_root_profile,
    falling_factorial_upper_check, legacy_order_threshold_h3, legacy_order_threshold_h4,
    minimal_order, order_threshold, order_threshold_terms, threshold_table, ChiUpperOutcome,
    ChiUpperReport, FallingFactorialReport, RootSequenceProfile, ThresholdRow,
};
