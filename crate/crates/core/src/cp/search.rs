use std::collections::HashMap;
use std::time::{Duration, Instant};

use super::propagators::Propagation;
use super::store::DomainStore;
use super::tables::ForbiddenTable;
use crate::bounds::{pair_index, BoundsTable};
use crate::error::Result;
use crate::ruler::Ruler;
use crate::stats::SolveStats;
use crate::{SolveOutcome, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Minimise the length `d_{0,n-1}`.
    #[default]
    Optimize,
    /// Stop at the first ruler.
    Feasibility,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueOrder {
    #[default]
    Ascending,
    /// Values with the smallest observed domain reduction first.
    Impact,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub value_order: ValueOrder,
    pub budget: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Require `d_{0,1} < d_{n-2,n-1}`.
    pub symmetry_breaking: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Optimize,
            value_order: ValueOrder::Ascending,
            budget: None,
            node_limit: None,
            symmetry_breaking: true,
        }
    }
}

impl SearchConfig {
    pub fn feasibility() -> SearchConfig {
        SearchConfig {
            mode: SearchMode::Feasibility,
            ..SearchConfig::default()
        }
    }
}

enum Flow {
    Continue,
    Stop,
}

struct Searcher<'a> {
    n: usize,
    config: &'a SearchConfig,
    prop: Propagation,
    store: DomainStore,
    start: Instant,
    nodes: u64,
    best: Option<Ruler>,
    cap: Option<u32>,
    exhausted: bool,
    impacts: HashMap<(usize, u32), f64>,
}

impl Searcher<'_> {
    fn out_of_budget(&self) -> bool {
        if let Some(limit) = self.config.node_limit {
            if self.nodes >= limit {
                return true;
            }
        }
        if let Some(b) = self.config.budget {
            // the clock is only read every 256 nodes
            if self.nodes.is_multiple_of(256) && self.start.elapsed() >= b {
                return true;
            }
        }
        false
    }

    fn log_size(&self) -> f64 {
        (1..self.n).map(|j| (self.store.pair(0, j).len() as f64).ln()).sum()
    }

    fn select(&self) -> Option<usize> {
        (1..self.n)
            .map(|j| pair_index(self.n, 0, j))
            .find(|&v| !self.store.domain(v).is_fixed())
    }

    fn record_solution(&mut self) -> Flow {
        let marks: Vec<u32> = std::iter::once(0)
            .chain((1..self.n).map(|j| self.store.pair(0, j).value().expect("fixed")))
            .collect();
        let ruler = Ruler::from_sorted_unchecked(marks);
        debug_assert!(ruler.is_golomb());
        let len = ruler.length();
        self.best = Some(ruler);
        match self.config.mode {
            SearchMode::Feasibility => Flow::Stop,
            SearchMode::Optimize => {
                if len == 0 {
                    return Flow::Stop;
                }
                self.cap = Some(len - 1);
                Flow::Continue
            }
        }
    }

    fn ordered_values(&self, var: usize) -> Vec<u32> {
        let mut vals: Vec<u32> = self.store.domain(var).iter().collect();
        if self.config.value_order == ValueOrder::Impact {
            let imp = |v: u32| self.impacts.get(&(var, v)).copied().unwrap_or(0.0);
            vals.sort_by(|&a, &b| imp(a).total_cmp(&imp(b)).then(a.cmp(&b)));
        }
        vals
    }

    /// Called with the store already propagated.
    fn dfs(&mut self) -> Flow {
        self.nodes += 1;
        if self.out_of_budget() {
            self.exhausted = true;
            return Flow::Stop;
        }
        let Some(var) = self.select() else {
            return self.record_solution();
        };
        for v in self.ordered_values(var) {
            if !self.store.domain(var).contains(v) {
                continue;
            }
            self.store.push_level();
            let before = if self.config.value_order == ValueOrder::Impact {
                self.log_size()
            } else {
                0.0
            };
            let ok = self.store.restrict(var, super::domain::Domain::singleton(v))
                && self.prop.propagate(&mut self.store, self.cap);
            if self.config.value_order == ValueOrder::Impact {
                let after = if ok { self.log_size() } else { 0.0 };
                let impact = if before > 0.0 { 1.0 - after / before } else { 1.0 };
                let e = self.impacts.entry((var, v)).or_insert(impact);
                *e = 0.5 * (*e + impact);
            }
            let flow = if ok { self.dfs() } else { Flow::Continue };
            self.store.pop_level();
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
            let rest = self.store.domain(var).minus(&super::domain::Domain::singleton(v));
            if !self.store.restrict(var, rest) || !self.prop.propagate(&mut self.store, self.cap) {
                return Flow::Continue;
            }
        }
        Flow::Continue
    }
}

/// Depth-first search over the marks `d_{0,1}, d_{0,2}, ...` with full
/// propagation at every node.
pub fn search(bounds: &BoundsTable, tables: &[ForbiddenTable], config: &SearchConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let n = bounds.n();
    let mut stats = SolveStats::default();
    if n <= 1 {
        stats.total_time = start.elapsed().as_secs_f64();
        stats.optimize_time = stats.total_time;
        let outcome = if n == 1 {
            let ruler = Ruler::from_sorted_unchecked(vec![0]);
            match config.mode {
                SearchMode::Optimize => SolveOutcome::Optimal { length: 0, ruler },
                SearchMode::Feasibility => SolveOutcome::Feasible { length: 0, ruler },
            }
        } else {
            SolveOutcome::Infeasible
        };
        return Ok(SolveResult { outcome, stats });
    }
    let store = DomainStore::from_bounds(bounds)?;
    let prop = Propagation::new(n, tables, config.symmetry_breaking);
    let mut s = Searcher {
        n,
        config,
        prop,
        store,
        start,
        nodes: 0,
        best: None,
        cap: None,
        exhausted: false,
        impacts: HashMap::new(),
    };
    s.store.queue_all();
    if s.prop.propagate(&mut s.store, None) {
        s.dfs();
    }
    stats.nodes = s.nodes;
    stats.total_time = start.elapsed().as_secs_f64();
    stats.optimize_time = stats.total_time;
    let outcome = match (s.best, s.exhausted, config.mode) {
        (Some(r), _, SearchMode::Feasibility) => SolveOutcome::Feasible {
            length: r.length(),
            ruler: r,
        },
        (Some(r), false, SearchMode::Optimize) => SolveOutcome::Optimal {
            length: r.length(),
            ruler: r,
        },
        (Some(_), true, _) | (None, true, _) => SolveOutcome::Unknown,
        (None, false, _) => SolveOutcome::Infeasible,
    };
    Ok(SolveResult { outcome, stats })
}
