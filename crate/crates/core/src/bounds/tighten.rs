use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{num_pairs, pair_index, pairs, BoundsTable};
use crate::cp::{build_forbidden_tables, search, ForbiddenTable, SearchConfig};
use crate::error::Result;
use crate::lp::{de_relaxation, LpStatus, Rational, Sense, WarmLp};
use crate::ruler::OptimaTable;
use crate::SolveOutcome;

/// How an exact probe narrows a pair's range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMode {
    /// Bisect on the extreme value with range-restricted feasibility probes.
    Optimize,
    /// Pin the pair to its current lower (upper) bound; drop it if infeasible.
    Shave,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TightenConfig {
    /// Upper limit on LP + exact round pairs.
    pub rounds: usize,
    pub lp: bool,
    pub exact: Option<ExactMode>,
    /// Time budget of a single exact probe.
    pub probe_budget: Duration,
    /// Node limit of a single exact probe; with it, results do not depend on timing.
    pub probe_nodes: Option<u64>,
    /// Pruning passes for the forbidden tables used by probes.
    pub table_rounds: usize,
    pub parallel: bool,
}

impl Default for TightenConfig {
    fn default() -> Self {
        TightenConfig {
            rounds: 5,
            lp: true,
            exact: Some(ExactMode::Optimize),
            probe_budget: Duration::from_secs(1),
            probe_nodes: None,
            table_rounds: 3,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TightenReport {
    pub rounds: usize,
    /// Wall time of each round, in seconds.
    pub round_times: Vec<f64>,
    /// Shrinkage of the summed ranges, per round.
    pub round_reductions: Vec<u64>,
    pub range_reduction: u64,
    /// Summed wall time of exact probes, in seconds.
    pub subsolver_time: f64,
    pub probes: u64,
    pub infeasible: bool,
}

impl TightenReport {
    pub fn total_time(&self) -> f64 {
        self.round_times.iter().sum()
    }
}

/// Initial bounds from the optimal lengths of shorter rulers.
pub fn initial_bounds(n: usize, length: u32, optima: &OptimaTable) -> Result<BoundsTable> {
    BoundsTable::initial(n, length, optima)
}

/// Pairs with a non-trivial range, widest first.
fn probe_order(b: &BoundsTable) -> Vec<(usize, usize)> {
    let mut ps: Vec<(usize, usize)> = pairs(b.n()).filter(|&(i, j)| b.lower(i, j) < b.upper(i, j)).collect();
    ps.sort_by_key(|&(i, j)| std::cmp::Reverse(b.upper(i, j) - b.lower(i, j)));
    ps
}

/// Minimises and maximises every `d_ij` over the "d+e" relaxation and
/// installs the rounded optima. Never widens a range.
pub fn lp_bounding_round(b: &BoundsTable) -> Result<BoundsTable> {
    let mut out = b.clone();
    if !b.is_feasible() {
        return Ok(out);
    }
    let n = b.n();
    let Some(rel) = de_relaxation(n, b.length(), b)? else {
        out.mark_infeasible();
        return Ok(out);
    };
    let mut lp = WarmLp::new(&rel.lp);
    if !lp.is_feasible() {
        out.mark_infeasible();
        return Ok(out);
    }
    let cols = rel.lp.num_vars();
    // An objective is skipped when some earlier LP point already has the pair
    // at its current bound, since then its optimum cannot move that bound.
    let mut at_lower = vec![false; num_pairs(n)];
    let mut at_upper = vec![false; num_pairs(n)];
    let note = |point: &[Rational], at_lower: &mut [bool], at_upper: &mut [bool]| {
        for (i, j) in pairs(n) {
            let p = pair_index(n, i, j);
            let x = &point[rel.d_var[p]];
            let (l, u) = b.range(i, j);
            at_lower[p] |= *x <= Rational::from_int(l as i64);
            at_upper[p] |= *x >= Rational::from_int(u as i64);
        }
    };
    for (i, j) in probe_order(b) {
        let p = pair_index(n, i, j);
        let mut c = vec![Rational::zero(); cols];
        c[rel.d_var[p]] = Rational::one();
        if !at_lower[p] {
            let s = lp.solve(Sense::Minimize, &c);
            if s.status != LpStatus::Optimal {
                out.mark_infeasible();
                return Ok(out);
            }
            if let Some(v) = s.value.ceil().to_i64() {
                out.raise_lower(i, j, v.max(0) as u32);
            }
            note(&s.point, &mut at_lower, &mut at_upper);
        }
        if !at_upper[p] {
            let s = lp.solve(Sense::Maximize, &c);
            if s.status != LpStatus::Optimal {
                out.mark_infeasible();
                return Ok(out);
            }
            if let Some(v) = s.value.floor().to_i64() {
                out.lower_upper(i, j, v.max(0) as u32);
            }
            note(&s.point, &mut at_lower, &mut at_upper);
        }
    }
    Ok(out)
}

struct Prober<'a> {
    snapshot: &'a BoundsTable,
    tables: &'a [ForbiddenTable],
    config: SearchConfig,
}

enum Probe {
    Infeasible,
    /// Value of the probed pair in the ruler found.
    Feasible(u32),
    Unknown,
}

impl Prober<'_> {
    fn probe(&self, i: usize, j: usize, lo: u32, hi: u32, spent: &mut Duration) -> Probe {
        let mut b = self.snapshot.clone();
        b.raise_lower(i, j, lo);
        b.lower_upper(i, j, hi);
        if !b.is_feasible() {
            return Probe::Infeasible;
        }
        let start = Instant::now();
        let r = search(&b, self.tables, &self.config);
        *spent += start.elapsed();
        match r.map(|r| r.outcome) {
            Ok(SolveOutcome::Infeasible) => Probe::Infeasible,
            Ok(SolveOutcome::Feasible { ruler, .. }) | Ok(SolveOutcome::Optimal { ruler, .. }) => {
                Probe::Feasible(ruler.distance(i, j))
            }
            _ => Probe::Unknown,
        }
    }

    /// Proven range of `d_ij`, or `None` when no value is feasible.
    fn narrow(
        &self,
        i: usize,
        j: usize,
        mode: ExactMode,
        spent: &mut Duration,
        probes: &mut u64,
    ) -> Option<(u32, u32)> {
        let (mut lo, mut hi) = self.snapshot.range(i, j);
        match mode {
            ExactMode::Shave => {
                while lo <= hi {
                    *probes += 1;
                    match self.probe(i, j, lo, lo, spent) {
                        Probe::Infeasible => lo += 1,
                        _ => break,
                    }
                }
                while lo < hi {
                    *probes += 1;
                    match self.probe(i, j, hi, hi, spent) {
                        Probe::Infeasible => hi -= 1,
                        _ => break,
                    }
                }
            }
            ExactMode::Optimize => {
                // the minimum lies in [lo, top]; `seen` means top is attained
                let (mut top, mut seen) = (hi, false);
                while lo <= top && !(seen && lo == top) {
                    let mid = lo + (top - lo) / 2;
                    *probes += 1;
                    match self.probe(i, j, lo, mid, spent) {
                        Probe::Infeasible => lo = mid + 1,
                        Probe::Feasible(v) => (top, seen) = (v, true),
                        Probe::Unknown => break,
                    }
                }
                if lo > hi {
                    return None;
                }
                let mut bottom = if seen { top } else { lo };
                while bottom <= hi && !(seen && bottom == hi) {
                    let mid = hi - (hi - bottom) / 2;
                    *probes += 1;
                    match self.probe(i, j, mid, hi, spent) {
                        Probe::Infeasible => hi = mid - 1,
                        Probe::Feasible(v) => (bottom, seen) = (v, true),
                        Probe::Unknown => break,
                    }
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

/// Narrows every pair with budget-limited exact probes of the CP engine.
/// Probes read a frozen copy of `b`; a bound moves only on a proof.
pub fn exact_bounding_round(
    b: &BoundsTable,
    mode: ExactMode,
    config: &TightenConfig,
) -> Result<(BoundsTable, f64, u64)> {
    let mut out = b.clone();
    if !b.is_feasible() || config.probe_budget.is_zero() || config.probe_nodes == Some(0) {
        return Ok((out, 0.0, 0));
    }
    if b.length() > crate::cp::MAX_VALUE {
        return Err(crate::GolombError::InvalidBounds(format!(
            "length {} too large for exact probes",
            b.length()
        )));
    }
    let tables = build_forbidden_tables(b, config.table_rounds);
    let prober = Prober {
        snapshot: b,
        tables: &tables,
        config: SearchConfig {
            budget: Some(config.probe_budget),
            node_limit: config.probe_nodes,
            symmetry_breaking: false,
            ..SearchConfig::feasibility()
        },
    };
    let order = probe_order(b);
    let run = |&(i, j): &(usize, usize)| {
        let mut spent = Duration::ZERO;
        let mut probes = 0;
        let r = prober.narrow(i, j, mode, &mut spent, &mut probes);
        ((i, j), r, spent, probes)
    };
    let results: Vec<_> = if config.parallel {
        order.par_iter().map(run).collect()
    } else {
        order.iter().map(run).collect()
    };
    let mut spent = 0.0;
    let mut probes = 0;
    for ((i, j), r, t, p) in results {
        spent += t.as_secs_f64();
        probes += p;
        match r {
            Some((lo, hi)) => {
                out.raise_lower(i, j, lo);
                out.lower_upper(i, j, hi);
            }
            None => out.mark_infeasible(),
        }
    }
    Ok((out, spent, probes))
}

/// Alternates LP and exact rounds from `start` until nothing moves or the
/// round limit is hit.
pub fn tighten_from(start: BoundsTable, config: &TightenConfig) -> Result<(BoundsTable, TightenReport)> {
    let mut b = start;
    let mut report = TightenReport::default();
    while report.rounds < config.rounds && b.is_feasible() && (config.lp || config.exact.is_some()) {
        let t0 = Instant::now();
        let before = b.total_range();
        let snapshot = b.clone();
        if config.lp {
            b = lp_bounding_round(&b)?;
        }
        if let Some(mode) = config.exact {
            let (next, spent, probes) = exact_bounding_round(&b, mode, config)?;
            b = next;
            report.subsolver_time += spent;
            report.probes += probes;
        }
        debug_assert!(!b.is_feasible() || b.is_within(&snapshot));
        report.rounds += 1;
        report.round_times.push(t0.elapsed().as_secs_f64());
        let after = if b.is_feasible() {
            b.total_range()
        } else {
            before.min(b.total_range())
        };
        report.round_reductions.push(before - after);
        report.range_reduction += before - after;
        if b == snapshot {
            break;
        }
    }
    report.infeasible = !b.is_feasible();
    Ok((b, report))
}

/// Initial bounds followed by [`tighten_from`].
pub fn tighten_fixpoint(
    n: usize,
    length: u32,
    optima: &OptimaTable,
    config: &TightenConfig,
) -> Result<(BoundsTable, TightenReport)> {
    let b = initial_bounds(n, length, optima)?;
    tighten_from(b, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::Ruler;

    fn quick() -> TightenConfig {
        TightenConfig {
            probe_nodes: Some(2_000),
            probe_budget: Duration::from_secs(60),
            parallel: false,
            ..TightenConfig::default()
        }
    }

    #[test]
    fn two_marks_is_a_fixpoint() {
        let (b, r) = tighten_fixpoint(2, 1, OptimaTable::standard(), &quick()).unwrap();
        assert_eq!(b.range(0, 1), (1, 1));
        assert_eq!(r.range_reduction, 0);
        assert!(r.rounds <= 1);
    }

    #[test]
    fn too_short_is_infeasible() {
        let (b, r) = tighten_fixpoint(5, 10, OptimaTable::standard(), &quick()).unwrap();
        assert!(!b.is_feasible());
        assert!(r.infeasible);
    }

    #[test]
    fn lp_round_is_idempotent_at_its_fixpoint() {
        let b = initial_bounds(6, 17, OptimaTable::standard()).unwrap();
        let mut cur = lp_bounding_round(&b).unwrap();
        assert!(cur.is_within(&b));
        for _ in 0..10 {
            let next = lp_bounding_round(&cur).unwrap();
            if next == cur {
                break;
            }
            cur = next;
        }
        assert_eq!(lp_bounding_round(&cur).unwrap(), cur);
    }

    #[test]
    fn zero_budget_changes_nothing() {
        let b = initial_bounds(7, 25, OptimaTable::standard()).unwrap();
        let cfg = TightenConfig {
            probe_budget: Duration::ZERO,
            ..quick()
        };
        for mode in [ExactMode::Optimize, ExactMode::Shave] {
            assert_eq!(exact_bounding_round(&b, mode, &cfg).unwrap().0, b);
        }
    }

    #[test]
    fn tightened_bounds_keep_an_optimal_ruler() {
        let optima = OptimaTable::standard();
        for (text, mode) in [
            ("0 1 4 9 11", ExactMode::Optimize),
            ("0 1 4 10 12 17", ExactMode::Shave),
            ("0 1 4 10 18 23 25", ExactMode::Optimize),
        ] {
            let r: Ruler = text.parse().unwrap();
            let cfg = TightenConfig {
                exact: Some(mode),
                ..quick()
            };
            let (b, _) = tighten_fixpoint(r.order(), r.length(), optima, &cfg).unwrap();
            assert!(b.admits(&r) || b.admits(&r.reflect()), "{text}");
            assert!(b.is_within(&initial_bounds(r.order(), r.length(), optima).unwrap()));
        }
    }
}
