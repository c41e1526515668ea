//! Exact optimality certification for Golomb rulers.
//!
//! Three independent engines prove that no shorter ruler exists:
//!
//! * [`cp`]: constraint propagation over pairwise distances with
//!   lexicographic depth-first search,
//! * [`milp_d`]: branch-and-bound over the distance LP with lazy
//!   subset-sum cuts,
//! * [`qip`]: branch-and-cut over mark-placement binaries with Golomb,
//!   clique and no-good cuts.
//!
//! [`bounds`] tightens per-pair distance bounds shared by all engines and
//! [`ruler`] holds the oracle every result is checked against.

pub mod bounds;
pub mod certify;
pub mod cp;
pub mod error;
pub mod lp;
pub mod milp_d;
pub mod qip;
pub mod report;
pub mod ruler;
pub mod stats;

pub use bounds::BoundsTable;
pub use certify::{
    certify_optimal_length, solve_length, Bounding, Certificate, CertifyConfig, LengthOutcome, LengthRun, Method,
};
pub use error::{GolombError, Result};
pub use ruler::{OptimaTable, Ruler};
pub use stats::{CutCounts, SolveStats};

/// Outcome of a budget-limited exact solve.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum SolveOutcome {
    /// Proven optimal within the requested length bound.
    Optimal { length: u32, ruler: Ruler },
    /// A ruler satisfying the bound was found (feasibility mode).
    Feasible { length: u32, ruler: Ruler },
    /// Proven: no ruler within the bound exists.
    Infeasible,
    /// Budget or node limit hit before a proof.
    Unknown,
}

impl SolveOutcome {
    pub fn is_proven(&self) -> bool {
        !matches!(self, SolveOutcome::Unknown)
    }

    pub fn ruler(&self) -> Option<&Ruler> {
        match self {
            SolveOutcome::Optimal { ruler, .. } | SolveOutcome::Feasible { ruler, .. } => Some(ruler),
            _ => None,
        }
    }
}

/// Outcome of one engine run with its effort counters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub stats: SolveStats,
}
