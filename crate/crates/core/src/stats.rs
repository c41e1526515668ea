use std::ops::AddAssign;

use serde::{Deserialize, Serialize};

/// Cuts added during a solve, per family.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCounts {
    pub golomb: u64,
    pub arithmetic: u64,
    pub clique: u64,
    pub nogood: u64,
    pub subset_sum: u64,
}

impl AddAssign for CutCounts {
    fn add_assign(&mut self, o: CutCounts) {
        self.golomb += o.golomb;
        self.arithmetic += o.arithmetic;
        self.clique += o.clique;
        self.nogood += o.nogood;
        self.subset_sum += o.subset_sum;
    }
}

/// Timing and effort counters of one solve (times in seconds).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveStats {
    pub bound_tighten_time: f64,
    pub optimize_time: f64,
    pub total_time: f64,
    pub nodes: u64,
    pub cuts: CutCounts,
}

impl SolveStats {
    /// Accumulates another run: times and counts add up.
    pub fn absorb(&mut self, o: &SolveStats) {
        self.bound_tighten_time += o.bound_tighten_time;
        self.optimize_time += o.optimize_time;
        self.total_time += o.total_time;
        self.nodes += o.nodes;
        self.cuts += o.cuts;
    }

    /// Same run, counters only; used when comparing runs for determinism.
    pub fn effort(&self) -> (u64, CutCounts) {
        (self.nodes, self.cuts)
    }
}
