//! Branch-and-bound over the "d" model: the LP over consecutive distances
//! with lazily separated subset-sum cuts. An integral LP point need not be a
//! Golomb ruler, so nodes whose point repeats a distance are split on a pair
//! of near-equal distances (difference branching) or on the leftmost
//! undecided consecutive distance (left branching).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::BoundsTable;
use crate::error::{GolombError, Result};
use crate::lp::{
    add_subset_sum_row, separate_subset_sum_all, solve_lp, Cmp, LinearProgram, LpStatus, Rational, Sense, SubsetSumCut,
};
use crate::ruler::Ruler;
use crate::stats::SolveStats;
use crate::{SolveOutcome, SolveResult};

/// A pair of marks `(i, j)`, `i < j`, 0-based.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branching {
    Left,
    #[default]
    Difference,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DConfig {
    pub branching: Branching,
    pub budget: Option<Duration>,
    pub node_limit: Option<u64>,
}

/// `d_a <= d_b - 1` when `below`, else `d_a >= d_b + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiffConstraint {
    pub a: Pair,
    pub b: Pair,
    pub below: bool,
}

impl DiffConstraint {
    pub fn holds(&self, r: &Ruler) -> bool {
        let x = r.distance(self.a.0, self.a.1) as i64;
        let y = r.distance(self.b.0, self.b.1) as i64;
        if self.below {
            x < y
        } else {
            x > y
        }
    }

    /// Row over the consecutive distances.
    fn row(&self) -> (Vec<(usize, Rational)>, Cmp, Rational) {
        let mut coef: BTreeMap<usize, i64> = BTreeMap::new();
        for k in self.a.0..self.a.1 {
            *coef.entry(k).or_default() += 1;
        }
        for k in self.b.0..self.b.1 {
            *coef.entry(k).or_default() -= 1;
        }
        let coeffs = coef
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(k, c)| (k, Rational::from_int(c)))
            .collect();
        if self.below {
            (coeffs, Cmp::Le, Rational::from_int(-1))
        } else {
            (coeffs, Cmp::Ge, Rational::one())
        }
    }
}

/// A node of the search tree: local bounds, branching constraints collected
/// on the way down, and the LP value once solved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DNode {
    pub bounds: BoundsTable,
    pub constraints: Vec<DiffConstraint>,
    pub lp_value: Option<Rational>,
    pub depth: usize,
}

impl DNode {
    pub fn root(bounds: BoundsTable) -> DNode {
        DNode {
            bounds,
            constraints: Vec::new(),
            lp_value: None,
            depth: 0,
        }
    }

    /// The ruler satisfies the node's bounds and branching constraints.
    pub fn admits(&self, r: &Ruler) -> bool {
        self.bounds.is_feasible() && self.bounds.admits(r) && self.constraints.iter().all(|c| c.holds(r))
    }

    fn child(&self) -> DNode {
        DNode {
            bounds: self.bounds.clone(),
            constraints: self.constraints.clone(),
            lp_value: None,
            depth: self.depth + 1,
        }
    }
}

/// Two distances whose values differ by at most one, closest first; ties go
/// to the lexicographically smallest pair of pairs.
pub fn difference_branch_select(point: &BTreeMap<Pair, Rational>) -> Option<(Pair, Pair)> {
    let entries: Vec<(&Pair, &Rational)> = point.iter().collect();
    let mut best: Option<(Rational, Pair, Pair)> = None;
    for (k, (a, x)) in entries.iter().enumerate() {
        for (b, y) in &entries[k + 1..] {
            let gap = (*x - *y).abs();
            if gap > Rational::one() {
                continue;
            }
            if best.as_ref().is_none_or(|(g, _, _)| gap < *g) {
                best = Some((gap, **a, **b));
            }
        }
    }
    best.map(|(_, a, b)| (a, b))
}

/// One child per value of the leftmost consecutive distance that is not yet
/// fixed; empty when all are fixed.
pub fn left_branch_children(node: &DNode) -> Vec<DNode> {
    let n = node.bounds.n();
    let Some(k) = (0..n.saturating_sub(1)).find(|&k| {
        let (l, u) = node.bounds.range(k, k + 1);
        l < u
    }) else {
        return Vec::new();
    };
    let (l, u) = node.bounds.range(k, k + 1);
    (l..=u)
        .map(|v| {
            let mut c = node.child();
            c.bounds.raise_lower(k, k + 1, v);
            c.bounds.lower_upper(k, k + 1, v);
            c
        })
        .collect()
}

/// The two sides of `d_a != d_b`.
pub fn difference_children(node: &DNode, a: Pair, b: Pair) -> [DNode; 2] {
    [true, false].map(|below| {
        let mut c = node.child();
        c.constraints.push(DiffConstraint { a, b, below });
        c
    })
}

/// Subset-sum cuts found so far; valid at every node.
#[derive(Debug, Default)]
struct CutPool {
    cuts: Vec<SubsetSumCut>,
    seen: BTreeSet<Vec<Pair>>,
}

/// A row the node LP may carry besides the branching constraints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RowKey {
    Lower(Pair),
    Upper(Pair),
    Cut(usize),
}

struct NodeLp {
    value: Rational,
    /// Consecutive distances.
    x: Vec<Rational>,
    pairs: BTreeMap<Pair, Rational>,
    /// Rows tight at the optimum, inherited by the children.
    rows: Vec<RowKey>,
}

fn pair_values(n: usize, x: &[Rational]) -> BTreeMap<Pair, Rational> {
    let mut out = BTreeMap::new();
    for i in 0..n {
        let mut acc = Rational::zero();
        for j in i + 1..n {
            acc = &acc + &x[j - 1];
            out.insert((i, j), acc.clone());
        }
    }
    out
}

fn span(p: Pair) -> Vec<(usize, Rational)> {
    (p.0..p.1).map(|k| (k, Rational::one())).collect()
}

/// Solves the node LP. Pair bounds and pooled cuts enter the LP only once
/// violated, starting from the rows in `seed`; new subset-sum cuts are
/// separated when nothing else is violated.
fn solve_node(node: &DNode, pool: &mut CutPool, seed: &[RowKey]) -> Result<Option<NodeLp>> {
    let b = &node.bounds;
    if !b.is_feasible() {
        return Ok(None);
    }
    let n = b.n();
    let length = b.length();
    let range = |p: Pair| {
        let (l, u) = b.range(p.0, p.1);
        (l.max(1), u.min(length))
    };
    let mut lp = LinearProgram::new(Sense::Minimize);
    for k in 0..n - 1 {
        let (l, u) = range((k, k + 1));
        if l > u {
            return Ok(None);
        }
        let v = lp.add_var(format!("x{}", k + 1), Rational::from(l), Some(Rational::from(u)));
        lp.set_objective(v, Rational::one());
    }
    for c in &node.constraints {
        let (coeffs, cmp, rhs) = c.row();
        lp.add_row(coeffs, cmp, rhs);
    }
    let mut rows: BTreeSet<RowKey> = BTreeSet::new();
    let add = |lp: &mut LinearProgram, rows: &mut BTreeSet<RowKey>, key: RowKey, pool: &CutPool| {
        if !rows.insert(key) {
            return;
        }
        match key {
            RowKey::Lower(p) => {
                lp.add_row(span(p), Cmp::Ge, Rational::from(range(p).0));
            }
            RowKey::Upper(p) => {
                lp.add_row(span(p), Cmp::Le, Rational::from(range(p).1));
            }
            RowKey::Cut(k) => add_subset_sum_row(lp, &pool.cuts[k]),
        }
    };
    for &key in seed {
        add(&mut lp, &mut rows, key, pool);
    }
    loop {
        let sol = solve_lp(&lp);
        if sol.status != LpStatus::Optimal {
            return Ok(None);
        }
        let pairs = pair_values(n, &sol.point);
        let mut violated = Vec::new();
        for (&p, v) in &pairs {
            if p.1 == p.0 + 1 {
                continue;
            }
            let (l, u) = range(p);
            if *v < Rational::from(l) {
                violated.push(RowKey::Lower(p));
            } else if *v > Rational::from(u) {
                violated.push(RowKey::Upper(p));
            }
        }
        for (k, cut) in pool.cuts.iter().enumerate() {
            if !rows.contains(&RowKey::Cut(k)) && cut.violation(&pairs).is_positive() {
                violated.push(RowKey::Cut(k));
            }
        }
        if violated.is_empty() {
            for cut in separate_subset_sum_all(&pairs) {
                if pool.seen.insert(cut.pairs.clone()) {
                    pool.cuts.push(cut);
                    violated.push(RowKey::Cut(pool.cuts.len() - 1));
                }
            }
        }
        if violated.is_empty() {
            let tight = rows
                .into_iter()
                .filter(|&key| match key {
                    RowKey::Lower(p) => pairs[&p] == Rational::from(range(p).0),
                    RowKey::Upper(p) => pairs[&p] == Rational::from(range(p).1),
                    RowKey::Cut(k) => pool.cuts[k].violation(&pairs).is_zero(),
                })
                .collect();
            return Ok(Some(NodeLp {
                value: sol.value,
                x: sol.point,
                pairs,
                rows: tight,
            }));
        }
        for key in violated {
            add(&mut lp, &mut rows, key, pool);
        }
    }
}

/// LP bound of a node (cuts from a private pool).
pub fn node_bound(node: &DNode) -> Result<Option<Rational>> {
    Ok(solve_node(node, &mut CutPool::default(), &[])?.map(|lp| lp.value))
}

struct Open {
    node: DNode,
    lp: NodeLp,
    seq: u64,
}

impl PartialEq for Open {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Open {}

impl PartialOrd for Open {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Open {
    // BinaryHeap pops the maximum: smallest bound first, then oldest.
    fn cmp(&self, o: &Self) -> Ordering {
        o.lp.value.cmp(&self.lp.value).then(o.seq.cmp(&self.seq))
    }
}

fn integral_ruler(x: &[Rational]) -> Option<Ruler> {
    let mut marks = vec![0u32];
    for v in x {
        let step = v.is_integer().then(|| v.to_i64()).flatten()?;
        if step <= 0 {
            return None;
        }
        marks.push(marks.last().unwrap() + step as u32);
    }
    Some(Ruler::from_sorted_unchecked(marks))
}

/// Best-first branch-and-bound for the shortest ruler of length at most
/// `bounds.length()` inside `bounds`.
pub fn solve_d_formulation(bounds: &BoundsTable, config: &DConfig) -> Result<SolveResult> {
    let start = Instant::now();
    let n = bounds.n();
    if n == 0 {
        return Err(GolombError::InvalidConfig("need at least one mark".into()));
    }
    let mut stats = SolveStats::default();
    let finish = |outcome: SolveOutcome, mut stats: SolveStats| {
        stats.total_time = start.elapsed().as_secs_f64();
        stats.optimize_time = stats.total_time;
        Ok(SolveResult { outcome, stats })
    };
    if n == 1 {
        let ruler = Ruler::from_sorted_unchecked(vec![0]);
        return finish(SolveOutcome::Optimal { length: 0, ruler }, stats);
    }
    let mut pool = CutPool::default();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut cap = Rational::from_int(bounds.length() as i64);
    let mut best: Option<Ruler> = None;
    let mut exhausted = false;

    let root = DNode::root(bounds.clone());
    stats.nodes += 1;
    if let Some(lp) = solve_node(&root, &mut pool, &[])? {
        heap.push(Open { node: root, lp, seq });
        seq += 1;
    }
    while let Some(Open { mut node, lp, .. }) = heap.pop() {
        if lp.value > cap {
            continue;
        }
        if config.node_limit.is_some_and(|l| stats.nodes >= l) || config.budget.is_some_and(|b| start.elapsed() >= b) {
            exhausted = true;
            break;
        }
        if let Some(r) = integral_ruler(&lp.x) {
            if r.is_golomb() {
                cap = Rational::from_int(r.length() as i64 - 1);
                best = Some(r);
                continue;
            }
        }
        node.lp_value = Some(lp.value.clone());
        let children: Vec<DNode> = match config.branching {
            Branching::Difference => match difference_branch_select(&lp.pairs) {
                // a gap of exactly one would not cut the point off
                Some((a, b)) if (&lp.pairs[&a] - &lp.pairs[&b]).abs() < Rational::one() => {
                    difference_children(&node, a, b).into()
                }
                _ => left_branch_children(&node),
            },
            Branching::Left => left_branch_children(&node),
        };
        for child in children {
            stats.nodes += 1;
            if let Some(clp) = solve_node(&child, &mut pool, &lp.rows)? {
                if clp.value <= cap {
                    heap.push(Open {
                        node: child,
                        lp: clp,
                        seq,
                    });
                    seq += 1;
                }
            }
        }
    }
    stats.cuts.subset_sum = pool.cuts.len() as u64;
    let outcome = match (best, exhausted) {
        (_, true) => SolveOutcome::Unknown,
        (Some(r), false) => SolveOutcome::Optimal {
            length: r.length(),
            ruler: r,
        },
        (None, false) => SolveOutcome::Infeasible,
    };
    finish(outcome, stats)
}
