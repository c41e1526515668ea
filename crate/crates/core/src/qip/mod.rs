//! Branch-and-cut for the feasibility question "do `n` marks fit on a ruler
//! of length `L`?" over placement binaries `y_0..y_L`.
//!
//! Nodes fix a Golomb prefix of marks from the left. The node relaxation is
//! the LP over the remaining free positions, maximising the mark count,
//! with window cuts and no-good cuts pulled from a global pool when
//! violated and clique cuts separated locally.

mod clique;
mod cuts;

pub use clique::bron_kerbosch;
pub use cuts::{benders_nogood_cuts, golomb_cuts, separate_clique_cuts, Cut, CutFamily, CutPool};

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::BoundsTable;
use crate::error::{GolombError, Result};
use crate::lp::{solve_lp, Cmp, LinearProgram, LpStatus, Rational, Sense};
use crate::ruler::{OptimaTable, Ruler};
use crate::stats::SolveStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoGoodMode {
    Off,
    #[default]
    Default,
    /// Aggregated cuts that may remove Golomb placements; never for proofs.
    Aggregated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMode {
    /// No-good cuts are added inside a single search tree.
    #[default]
    OneTree,
    /// The tree is solved to an integral placement, cut, and solved again.
    MultiTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSelection {
    pub golomb: bool,
    pub arithmetic: bool,
    pub clique: bool,
    pub nogood: NoGoodMode,
}

impl Default for CutSelection {
    fn default() -> Self {
        CutSelection {
            golomb: true,
            arithmetic: false,
            clique: true,
            nogood: NoGoodMode::Default,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QipConfig {
    pub cuts: CutSelection,
    pub tree: TreeMode,
    /// Also fix `y_L = 1`. A result below the target then only says that no
    /// ruler of length exactly `L` exists, and `n_L = target - 1` assumes
    /// every shorter length was already ruled out, as in certification.
    pub pin_end: bool,
    /// With `pin_end`, require the first gap to be shorter than the last.
    pub symmetry: bool,
    /// Clique separation only at nodes up to this depth; `None` means half
    /// the target.
    pub clique_depth: Option<usize>,
    pub clique_max_vertices: usize,
    /// Separation passes per node.
    pub clique_rounds: usize,
    pub budget: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl Default for QipConfig {
    fn default() -> Self {
        QipConfig {
            cuts: CutSelection::default(),
            tree: TreeMode::OneTree,
            pin_end: false,
            symmetry: true,
            clique_depth: None,
            clique_max_vertices: 200,
            clique_rounds: 3,
            budget: None,
            node_limit: None,
        }
    }
}

/// Search node: marks placed from the left and the distances they use.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QNode {
    pub prefix: Vec<u32>,
    pub distances: BTreeSet<u32>,
    pub lp_value: Option<Rational>,
    pub depth: usize,
}

impl QNode {
    pub fn root() -> QNode {
        QNode {
            prefix: vec![0],
            distances: BTreeSet::new(),
            lp_value: None,
            depth: 0,
        }
    }

    /// Node with marks `prefix` (ascending, Golomb, starting at 0).
    pub fn with_prefix(prefix: &[u32]) -> Result<QNode> {
        let mut node = QNode::root();
        if prefix.first() != Some(&0) {
            return Err(GolombError::InvalidRuler("prefix must start at 0".into()));
        }
        for &v in &prefix[1..] {
            if !node.admits(v) {
                return Err(GolombError::InvalidRuler(format!("mark {v} breaks the prefix")));
            }
            node = node.place(v);
        }
        node.depth = 0;
        Ok(node)
    }

    /// Placing a mark at `v` keeps the prefix Golomb.
    pub fn admits(&self, v: u32) -> bool {
        let last = *self.prefix.last().unwrap();
        v > last && self.prefix.iter().all(|&l| !self.distances.contains(&(v - l)))
    }

    fn place(&self, v: u32) -> QNode {
        let mut c = self.clone();
        for &l in &self.prefix {
            c.distances.insert(v - l);
        }
        c.prefix.push(v);
        c.lp_value = None;
        c.depth += 1;
        c
    }
}

/// Children placing the next mark at each admissible position inside the
/// bounds of `d_{0,m}`, `m` being the number of marks placed so far.
pub fn left_mark_branch(node: &QNode, b: &BoundsTable) -> Vec<QNode> {
    let m = node.prefix.len();
    if m >= b.n() {
        return Vec::new();
    }
    let (lo, hi) = b.range(0, m);
    let last = *node.prefix.last().unwrap();
    (lo.max(last + 1)..=hi)
        .filter(|&v| node.admits(v))
        .map(|v| node.place(v))
        .collect()
}

/// Result of [`max_marks`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum MarksOutcome {
    /// `target` marks fit; the ruler has exactly `target` marks.
    Reached {
        ruler: Ruler,
    },
    /// Proven: fewer than `target` marks fit; `n_l` is the maximum.
    Below {
        n_l: usize,
    },
    Unknown,
}

#[derive(Debug, Clone)]
pub struct MarksResult {
    pub outcome: MarksOutcome,
    pub stats: SolveStats,
    pub pool: CutPool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RowKey {
    Pool(usize),
    Local(usize),
}

enum NodeLp {
    /// Infeasible or below the target.
    Pruned,
    /// Integral Golomb placement.
    Golomb(Vec<u32>),
    /// Integral placement repeating a distance, left uncut.
    Repeats(Vec<u32>),
    Fractional {
        tight: Vec<RowKey>,
    },
}

enum Flow {
    Continue,
    Found(Vec<u32>),
    /// Multi-tree: the master reached an integral placement that is not Golomb.
    Master(Vec<u32>),
    Stop,
}

struct Layout {
    fixed: Vec<u32>,
    free: Vec<u32>,
}

struct Search<'a> {
    length: u32,
    target: usize,
    bounds: &'a BoundsTable,
    config: &'a QipConfig,
    pool: CutPool,
    start: Instant,
    nodes: u64,
    clique_cuts: u64,
    exhausted: bool,
}

enum Reduced {
    Skip,
    Infeasible,
    Row(Vec<(usize, Rational)>, Rational),
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        self.config.node_limit.is_some_and(|l| self.nodes >= l)
            || self.config.budget.is_some_and(|b| self.start.elapsed() >= b)
    }

    /// Fixed marks and free positions of a node; `None` if the fixed marks
    /// already repeat a distance.
    fn layout(&self, node: &QNode) -> Option<Layout> {
        let l = self.length;
        let last = *node.prefix.last().unwrap();
        let mut fixed = node.prefix.clone();
        let mut dist = node.distances.clone();
        let pinned = self.config.pin_end && last != l;
        if pinned {
            for &m in &node.prefix {
                if !dist.insert(l - m) {
                    return None;
                }
            }
            fixed.push(l);
        }
        let mut top = if pinned { l - 1 } else { l };
        if self.config.pin_end && self.config.symmetry && self.target >= 3 && node.prefix.len() >= 2 {
            let first = node.prefix[1];
            if first < l && 2 * first >= l {
                return None;
            }
            // interior marks stay below L - first
            top = top.min(l.saturating_sub(first + 1));
        }
        let mut free = Vec::new();
        if last < top {
            'pos: for v in last + 1..=top {
                let mut seen = BTreeSet::new();
                for &f in &fixed {
                    let d = v.abs_diff(f);
                    if dist.contains(&d) || !seen.insert(d) {
                        continue 'pos;
                    }
                }
                free.push(v);
            }
        }
        Some(Layout { fixed, free })
    }

    fn reduce(cut: &Cut, fixed: &BTreeSet<u32>, col: &BTreeMap<u32, usize>) -> Reduced {
        let mut rhs = cut.rhs.clone();
        let mut coeffs = Vec::new();
        for (&p, &c) in cut.support.iter().zip(&cut.coef) {
            if let Some(&k) = col.get(&p) {
                coeffs.push((k, Rational::from_int(c)));
            } else if fixed.contains(&p) {
                rhs = &rhs - &Rational::from_int(c);
            }
        }
        if coeffs.is_empty() {
            if rhs.is_negative() {
                Reduced::Infeasible
            } else {
                Reduced::Skip
            }
        } else {
            Reduced::Row(coeffs, rhs)
        }
    }

    fn solve_node(&mut self, node: &QNode, lay: &Layout, local: &mut Vec<Cut>, seed: &[RowKey]) -> NodeLp {
        let fixed: BTreeSet<u32> = lay.fixed.iter().copied().collect();
        let col: BTreeMap<u32, usize> = lay.free.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let base = Rational::from(lay.fixed.len());
        let target = Rational::from(self.target);
        let mut lp = LinearProgram::new(Sense::Maximize);
        for &p in &lay.free {
            let v = lp.add_var(format!("y{p}"), Rational::zero(), Some(Rational::one()));
            lp.set_objective(v, Rational::one());
        }
        let mut rows: BTreeSet<RowKey> = BTreeSet::new();
        let aggregated = self.config.cuts.nogood == NoGoodMode::Aggregated;
        let in_tree_nogood = self.config.cuts.nogood != NoGoodMode::Off && self.config.tree == TreeMode::OneTree;
        let clique_depth = self.config.clique_depth.unwrap_or(self.target / 2);
        let mut clique_rounds = if self.config.cuts.clique && node.depth <= clique_depth {
            self.config.clique_rounds
        } else {
            0
        };
        // false when a fully fixed cut is violated
        let add =
            |lp: &mut LinearProgram, rows: &mut BTreeSet<RowKey>, key: RowKey, pool: &mut CutPool, local: &[Cut]| {
                if !rows.insert(key) {
                    return true;
                }
                let cut = match key {
                    RowKey::Pool(k) => {
                        pool.touch(k);
                        pool.get(k)
                    }
                    RowKey::Local(k) => &local[k],
                };
                match Self::reduce(cut, &fixed, &col) {
                    Reduced::Skip => true,
                    Reduced::Infeasible => false,
                    Reduced::Row(coeffs, rhs) => {
                        lp.add_row(coeffs, Cmp::Le, rhs);
                        true
                    }
                }
            };
        for &key in seed {
            if !add(&mut lp, &mut rows, key, &mut self.pool, local) {
                return NodeLp::Pruned;
            }
        }
        loop {
            let sol = solve_lp(&lp);
            if sol.status != LpStatus::Optimal {
                return NodeLp::Pruned;
            }
            let value = &base + &sol.value;
            if value < target {
                return NodeLp::Pruned;
            }
            let mut y = vec![Rational::zero(); self.length as usize + 1];
            for &p in &lay.fixed {
                y[p as usize] = Rational::one();
            }
            for (k, &p) in lay.free.iter().enumerate() {
                y[p as usize] = sol.point[k].clone();
            }
            let violated: Vec<usize> = (0..self.pool.len())
                .filter(|&k| !rows.contains(&RowKey::Pool(k)) && self.pool.get(k).is_violated(&y))
                .collect();
            if !violated.is_empty() {
                for k in violated {
                    if !add(&mut lp, &mut rows, RowKey::Pool(k), &mut self.pool, local) {
                        return NodeLp::Pruned;
                    }
                }
                continue;
            }
            if y.iter().all(|v| v.is_integer()) {
                let marks: Vec<u32> = (0..=self.length).filter(|&p| y[p as usize].is_one()).collect();
                match benders_nogood_cuts(&marks, aggregated) {
                    None => return NodeLp::Golomb(marks),
                    Some(cuts) if in_tree_nogood => {
                        let mut progress = false;
                        for c in cuts {
                            let k = self.pool.add(c);
                            if !rows.contains(&RowKey::Pool(k)) {
                                progress = true;
                                if !add(&mut lp, &mut rows, RowKey::Pool(k), &mut self.pool, local) {
                                    return NodeLp::Pruned;
                                }
                            }
                        }
                        if progress {
                            continue;
                        }
                        return NodeLp::Repeats(marks);
                    }
                    Some(_) => return NodeLp::Repeats(marks),
                }
            }
            if clique_rounds > 0 {
                clique_rounds -= 1;
                let mut progress = false;
                for c in separate_clique_cuts(&y, &lay.fixed, self.config.clique_max_vertices, 64) {
                    if local.contains(&c) {
                        continue;
                    }
                    local.push(c);
                    self.clique_cuts += 1;
                    progress = true;
                    if !add(
                        &mut lp,
                        &mut rows,
                        RowKey::Local(local.len() - 1),
                        &mut self.pool,
                        local,
                    ) {
                        return NodeLp::Pruned;
                    }
                }
                if progress {
                    continue;
                }
            }
            let tight = rows
                .into_iter()
                .filter(|&key| {
                    let cut = match key {
                        RowKey::Pool(k) => self.pool.get(k),
                        RowKey::Local(k) => &local[k],
                    };
                    cut.lhs(&y) == cut.rhs
                })
                .collect();
            return NodeLp::Fractional { tight };
        }
    }

    fn dfs(&mut self, node: QNode, mut local: Vec<Cut>, seed: &[RowKey]) -> Flow {
        self.nodes += 1;
        if self.out_of_budget() {
            self.exhausted = true;
            return Flow::Stop;
        }
        let Some(lay) = self.layout(&node) else {
            return Flow::Continue;
        };
        if lay.fixed.len() >= self.target {
            return Flow::Found(lay.fixed);
        }
        let tight = match self.solve_node(&node, &lay, &mut local, seed) {
            NodeLp::Pruned => return Flow::Continue,
            NodeLp::Golomb(marks) => return Flow::Found(marks),
            NodeLp::Repeats(marks) if self.config.tree == TreeMode::MultiTree => return Flow::Master(marks),
            NodeLp::Repeats(_) => Vec::new(),
            NodeLp::Fractional { tight } => tight,
        };
        let pinned_end = self.config.pin_end.then_some(self.length);
        let free: BTreeSet<u32> = lay.free.iter().copied().collect();
        for child in left_mark_branch(&node, self.bounds) {
            let v = *child.prefix.last().unwrap();
            if !free.contains(&v) && Some(v) != pinned_end {
                continue;
            }
            match self.dfs(child, local.clone(), &tight) {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}

/// Keeps `target` marks of a Golomb placement, the last one included.
fn trim(mut marks: Vec<u32>, target: usize) -> Ruler {
    marks.sort_unstable();
    if marks.len() > target {
        let last = *marks.last().unwrap();
        marks.truncate(target - 1);
        marks.push(last);
    }
    Ruler::from_sorted_unchecked(marks)
}

/// Decides whether `target` marks fit on a ruler of length `length`.
///
/// Prefix positions come from bounds built with `optima` (which must cover
/// `target - 1`), or from `bounds` when given.
pub fn max_marks(length: u32, target: usize, optima: &OptimaTable, config: &QipConfig) -> Result<MarksResult> {
    max_marks_within(length, target, optima, None, config)
}

/// As [`max_marks`], searching only inside `bounds` (a table for `target`
/// marks and length `length`).
pub fn max_marks_within(
    length: u32,
    target: usize,
    optima: &OptimaTable,
    bounds: Option<&BoundsTable>,
    config: &QipConfig,
) -> Result<MarksResult> {
    let start = Instant::now();
    if target == 0 {
        return Err(GolombError::InvalidConfig("target must be at least one mark".into()));
    }
    if config.tree == TreeMode::MultiTree && config.cuts.nogood == NoGoodMode::Off {
        return Err(GolombError::InvalidConfig("multi-tree mode needs no-good cuts".into()));
    }
    let mut stats = SolveStats::default();
    let finish = |outcome, mut stats: SolveStats, pool| {
        stats.total_time = start.elapsed().as_secs_f64();
        stats.optimize_time = stats.total_time;
        Ok(MarksResult { outcome, stats, pool })
    };
    if target == 1 || (target == 2 && length >= 1) {
        let marks = if target == 1 { vec![0] } else { vec![0, length] };
        let ruler = trim(marks, target);
        return finish(MarksOutcome::Reached { ruler }, stats, CutPool::default());
    }
    let own;
    let bounds = match bounds {
        Some(b) => {
            if b.n() != target || b.length() != length {
                return Err(GolombError::InvalidBounds(format!(
                    "table is for {} marks and length {}, not {target} and {length}",
                    b.n(),
                    b.length()
                )));
            }
            b
        }
        None => {
            own = BoundsTable::initial_open_top(target, length, optima)?;
            &own
        }
    };
    let mut pool = CutPool::default();
    for c in golomb_cuts(length, optima, config.cuts.arithmetic) {
        let keep = match c.family {
            CutFamily::Golomb => config.cuts.golomb,
            _ => config.cuts.arithmetic,
        };
        if keep {
            pool.add(c);
        }
    }
    let mut search = Search {
        length,
        target,
        bounds,
        config,
        pool,
        start,
        nodes: 0,
        clique_cuts: 0,
        exhausted: false,
    };
    let flow = loop {
        if !bounds.is_feasible() {
            break Flow::Continue;
        }
        match search.dfs(QNode::root(), Vec::new(), &[]) {
            Flow::Master(marks) => {
                // multi-tree: cut the master's placement off and solve again
                let aggregated = config.cuts.nogood == NoGoodMode::Aggregated;
                for c in benders_nogood_cuts(&marks, aggregated).unwrap_or_default() {
                    search.pool.add(c);
                }
            }
            other => break other,
        }
    };
    stats.nodes = search.nodes;
    stats.cuts.golomb = search.pool.used(CutFamily::Golomb);
    stats.cuts.arithmetic = search.pool.used(CutFamily::Arithmetic);
    stats.cuts.clique = search.clique_cuts;
    stats.cuts.nogood = search.pool.count(CutFamily::NoGood) + search.pool.count(CutFamily::AggregatedNoGood);
    let pool = search.pool;
    let outcome = match flow {
        Flow::Found(marks) => MarksOutcome::Reached {
            ruler: trim(marks, target),
        },
        Flow::Stop => MarksOutcome::Unknown,
        Flow::Continue | Flow::Master(_) => {
            if optima.max_marks_known(length) + 1 >= target {
                MarksOutcome::Below { n_l: target - 1 }
            } else {
                let below = max_marks(length, target - 1, optima, config)?;
                stats.absorb(&below.stats);
                match below.outcome {
                    MarksOutcome::Reached { .. } => MarksOutcome::Below { n_l: target - 1 },
                    other => other,
                }
            }
        }
    };
    finish(outcome, stats, pool)
}

#[cfg(test)]
mod tests;
