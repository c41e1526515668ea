//! Exact LP solving and the distance-model relaxations.

mod integer;
mod model;
mod rational;
mod relaxation;
mod simplex;
mod subset_sum;

pub use model::{Cmp, LinearProgram, LpSolution, LpStatus, Row, Sense, Variable};
pub use rational::Rational;
pub use relaxation::{
    add_subset_sum_row, d_lp_bound, d_relaxation, de_lp_bound, de_relaxation, DRelaxation, DeRelaxation, LpBound,
};
pub use simplex::{solve_lp, solve_lp_objectives, WarmLp};
pub use subset_sum::{separate_subset_sum, separate_subset_sum_all, SubsetSumCut};
