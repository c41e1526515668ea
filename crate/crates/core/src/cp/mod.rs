//! Constraint-programming model over all pairwise distances: alldifferent,
//! triangle identities `d_ij + d_jk = d_ik` and forbidden-assignment tables,
//! explored depth-first mark by mark.

mod domain;
mod propagators;
mod search;
mod store;
mod tables;

pub use domain::{Domain, MAX_VALUE};
pub use propagators::{propagate_alldiff, propagate_triangle, PropStatus};
pub use search::{search, SearchConfig, SearchMode, ValueOrder};
pub use store::DomainStore;
pub use tables::{build_forbidden_tables, ForbiddenTable};
