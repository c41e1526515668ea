//! Optimal-length certification: lengths `G_{n-1}+1, G_{n-1}+2, ...` are
//! tried in turn, each as an exact-length feasibility problem, until one
//! admits an `n`-mark ruler. Every shorter length is proven empty.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::{tighten_from, BoundsTable, ExactMode, TightenConfig};
use crate::cp::{build_forbidden_tables, search, SearchConfig, SearchMode};
use crate::error::{GolombError, Result};
use crate::milp_d::{solve_d_formulation, DConfig};
use crate::qip::{max_marks_within, MarksOutcome, QipConfig};
use crate::ruler::{OptimaTable, Ruler};
use crate::stats::SolveStats;
use crate::SolveOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Cp,
    D,
    Qip,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Cp => "cp",
            Method::D => "d",
            Method::Qip => "qip",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = GolombError;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "cp" => Ok(Method::Cp),
            "d" => Ok(Method::D),
            "qip" => Ok(Method::Qip),
            _ => Err(GolombError::InvalidConfig(format!("unknown method `{s}`"))),
        }
    }
}

/// Bound tightening applied to each length before the engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bounding {
    #[default]
    None,
    Lp,
    Exact,
    Full,
}

impl Bounding {
    pub fn tag(self) -> &'static str {
        match self {
            Bounding::None => "none",
            Bounding::Lp => "lp",
            Bounding::Exact => "exact",
            Bounding::Full => "full",
        }
    }

    /// `base` with the LP and exact rounds switched on or off.
    pub fn apply(self, base: &TightenConfig) -> TightenConfig {
        let exact = base.exact.or(Some(ExactMode::Optimize));
        let (lp, exact) = match self {
            Bounding::None => (false, None),
            Bounding::Lp => (true, None),
            Bounding::Exact => (false, exact),
            Bounding::Full => (true, exact),
        };
        TightenConfig {
            lp,
            exact,
            ..base.clone()
        }
    }
}

impl std::str::FromStr for Bounding {
    type Err = GolombError;

    fn from_str(s: &str) -> Result<Bounding> {
        match s {
            "none" => Ok(Bounding::None),
            "lp" => Ok(Bounding::Lp),
            "exact" => Ok(Bounding::Exact),
            "full" => Ok(Bounding::Full),
            _ => Err(GolombError::InvalidConfig(format!("unknown bounding `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyConfig {
    pub method: Method,
    pub bounding: Bounding,
    pub tighten: TightenConfig,
    pub cp: SearchConfig,
    pub d: DConfig,
    pub qip: QipConfig,
    /// Wall-clock budget of each length; applied to whichever engine runs.
    pub budget: Option<Duration>,
    /// Forbidden-table pruning passes for the CP engine.
    pub table_rounds: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            method: Method::Cp,
            bounding: Bounding::None,
            tighten: TightenConfig::default(),
            cp: SearchConfig::feasibility(),
            d: DConfig::default(),
            qip: QipConfig::default(),
            budget: None,
            table_rounds: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum LengthOutcome {
    /// An `n`-mark ruler of exactly this length exists.
    Feasible {
        ruler: Ruler,
    },
    /// Proven: no `n`-mark ruler has exactly this length.
    Infeasible,
    Unknown,
}

impl LengthOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            LengthOutcome::Feasible { .. } => "feasible",
            LengthOutcome::Infeasible => "infeasible",
            LengthOutcome::Unknown => "unknown",
        }
    }
}

/// One exact-length feasibility run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthRun {
    pub length: u32,
    pub outcome: LengthOutcome,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    pub method: Method,
    /// Lengths proven empty, ascending and without gaps; the last entry is
    /// `Unknown` if a budget ran out.
    pub runs: Vec<LengthRun>,
    /// The run that found the optimal ruler.
    pub witness: Option<LengthRun>,
}

impl Certificate {
    pub fn optimum(&self) -> Option<u32> {
        self.witness.as_ref().map(|w| w.length)
    }

    pub fn ruler(&self) -> Option<&Ruler> {
        match &self.witness {
            Some(LengthRun {
                outcome: LengthOutcome::Feasible { ruler },
                ..
            }) => Some(ruler),
            _ => None,
        }
    }

    /// Sum over the refuted lengths; the witness run is not included.
    pub fn refutation_stats(&self) -> SolveStats {
        let mut s = SolveStats::default();
        for r in &self.runs {
            s.absorb(&r.stats);
        }
        s
    }

    /// Sum over all runs, the witness included.
    pub fn total_stats(&self) -> SolveStats {
        let mut s = self.refutation_stats();
        if let Some(w) = &self.witness {
            s.absorb(&w.stats);
        }
        s
    }
}

/// Bounds for `n` marks and length exactly `length`.
pub fn exact_length_bounds(n: usize, length: u32, optima: &OptimaTable) -> Result<BoundsTable> {
    let mut b = BoundsTable::initial_open_top(n, length, optima)?;
    b.raise_lower(0, n - 1, length);
    Ok(b)
}

/// Decides whether an `n`-mark ruler of exactly `length` exists.
/// `optima` must cover `n - 1`; entries at `n` and above are not consulted.
pub fn solve_length(n: usize, length: u32, optima: &OptimaTable, config: &CertifyConfig) -> Result<LengthRun> {
    if n < 2 {
        return Err(GolombError::InvalidConfig(
            "certification needs at least two marks".into(),
        ));
    }
    if !optima.covers(n - 1) {
        return Err(GolombError::MissingOptimum(n - 1));
    }
    let optima = optima.truncated(n - 1);
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut b = exact_length_bounds(n, length, &optima)?;
    let tighten = config.bounding.apply(&config.tighten);
    if b.is_feasible() && (tighten.lp || tighten.exact.is_some()) {
        let t0 = Instant::now();
        let (tight, _) = tighten_from(b, &tighten)?;
        b = tight;
        stats.bound_tighten_time = t0.elapsed().as_secs_f64();
    }
    let t1 = Instant::now();
    let outcome = if !b.is_feasible() {
        LengthOutcome::Infeasible
    } else {
        match config.method {
            Method::Cp | Method::D => {
                let r = match config.method {
                    Method::Cp => {
                        let tables = build_forbidden_tables(&b, config.table_rounds);
                        let cp = SearchConfig {
                            mode: SearchMode::Feasibility,
                            budget: config.budget.or(config.cp.budget),
                            ..config.cp.clone()
                        };
                        search(&b, &tables, &cp)?
                    }
                    _ => {
                        let d = DConfig {
                            budget: config.budget.or(config.d.budget),
                            ..config.d.clone()
                        };
                        solve_d_formulation(&b, &d)?
                    }
                };
                stats.nodes = r.stats.nodes;
                stats.cuts = r.stats.cuts;
                match r.outcome {
                    SolveOutcome::Optimal { ruler, .. } | SolveOutcome::Feasible { ruler, .. } => {
                        LengthOutcome::Feasible { ruler }
                    }
                    SolveOutcome::Infeasible => LengthOutcome::Infeasible,
                    SolveOutcome::Unknown => LengthOutcome::Unknown,
                }
            }
            Method::Qip => {
                let q = QipConfig {
                    pin_end: true,
                    budget: config.budget.or(config.qip.budget),
                    ..config.qip.clone()
                };
                let r = max_marks_within(length, n, &optima, Some(&b), &q)?;
                stats.nodes = r.stats.nodes;
                stats.cuts = r.stats.cuts;
                match r.outcome {
                    MarksOutcome::Reached { ruler } => LengthOutcome::Feasible { ruler },
                    MarksOutcome::Below { .. } => LengthOutcome::Infeasible,
                    MarksOutcome::Unknown => LengthOutcome::Unknown,
                }
            }
        }
    };
    if let LengthOutcome::Feasible { ruler } = &outcome {
        if !ruler.is_golomb() || ruler.order() != n || ruler.length() != length {
            return Err(GolombError::Internal(format!(
                "engine returned {ruler:?} for n={n}, L={length}"
            )));
        }
    }
    stats.optimize_time = t1.elapsed().as_secs_f64();
    stats.total_time = start.elapsed().as_secs_f64();
    Ok(LengthRun { length, outcome, stats })
}

/// Finds `G_n` from `G_{n-1}` alone, proving every shorter length empty.
/// Stops at the first `Unknown`; the certificate then has no witness.
pub fn certify_optimal_length(n: usize, optima: &OptimaTable, config: &CertifyConfig) -> Result<Certificate> {
    if n < 2 {
        return Err(GolombError::InvalidConfig(
            "certification needs at least two marks".into(),
        ));
    }
    let first = optima.get(n - 1)? + 1;
    let mut cert = Certificate {
        n,
        method: config.method,
        runs: Vec::new(),
        witness: None,
    };
    for length in first.. {
        let run = solve_length(n, length, optima, config)?;
        match run.outcome {
            LengthOutcome::Infeasible => cert.runs.push(run),
            LengthOutcome::Feasible { .. } => {
                cert.witness = Some(run);
                break;
            }
            LengthOutcome::Unknown => {
                cert.runs.push(run);
                break;
            }
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qip::{CutSelection, TreeMode};
    use crate::ruler::brute_force_optimal;

    fn oracle(n: usize) -> u32 {
        brute_force_optimal(n, Duration::from_secs(120)).expect("oracle").0
    }

    fn check(n: usize, config: &CertifyConfig) {
        let want = oracle(n);
        let cert = certify_optimal_length(n, OptimaTable::standard(), config).unwrap();
        assert_eq!(cert.optimum(), Some(want), "n={n} {config:?}");
        let ruler = cert.ruler().unwrap();
        assert!(ruler.is_golomb() && ruler.order() == n && ruler.length() == want);
        let lengths: Vec<u32> = cert.runs.iter().map(|r| r.length).collect();
        let first = if n == 2 { 1 } else { oracle(n - 1) + 1 };
        assert_eq!(lengths, (first..want).collect::<Vec<_>>());
        assert!(cert.runs.iter().all(|r| r.outcome == LengthOutcome::Infeasible));
    }

    #[test]
    fn two_marks() {
        let cert = certify_optimal_length(2, OptimaTable::standard(), &CertifyConfig::default()).unwrap();
        assert_eq!(cert.optimum(), Some(1));
        assert!(cert.runs.is_empty());
    }

    #[test]
    fn each_method_matches_oracle() {
        for method in [Method::Cp, Method::D, Method::Qip] {
            for n in 2..=7 {
                check(
                    n,
                    &CertifyConfig {
                        method,
                        ..CertifyConfig::default()
                    },
                );
            }
        }
    }

    #[test]
    fn qip_variants_match_oracle() {
        for tree in [TreeMode::OneTree, TreeMode::MultiTree] {
            for (golomb, clique) in [(false, false), (true, false), (false, true), (true, true)] {
                let qip = QipConfig {
                    tree,
                    cuts: CutSelection {
                        golomb,
                        clique,
                        ..CutSelection::default()
                    },
                    ..QipConfig::default()
                };
                for n in 3..=6 {
                    check(
                        n,
                        &CertifyConfig {
                            method: Method::Qip,
                            qip: qip.clone(),
                            ..CertifyConfig::default()
                        },
                    );
                }
            }
        }
    }

    #[test]
    fn bounding_modes_agree() {
        let tighten = TightenConfig {
            probe_nodes: Some(2_000),
            parallel: false,
            ..TightenConfig::default()
        };
        for bounding in [Bounding::Lp, Bounding::Exact, Bounding::Full] {
            for method in [Method::Cp, Method::D, Method::Qip] {
                check(
                    6,
                    &CertifyConfig {
                        method,
                        bounding,
                        tighten: tighten.clone(),
                        ..CertifyConfig::default()
                    },
                );
            }
        }
    }

    #[test]
    fn budget_gives_unknown_tail() {
        let config = CertifyConfig {
            method: Method::Qip,
            qip: QipConfig {
                node_limit: Some(1),
                ..QipConfig::default()
            },
            ..CertifyConfig::default()
        };
        let cert = certify_optimal_length(8, OptimaTable::standard(), &config).unwrap();
        assert_eq!(cert.witness, None);
        assert_eq!(cert.runs.last().unwrap().outcome, LengthOutcome::Unknown);
    }

    #[test]
    fn missing_optimum_is_an_error() {
        let t = OptimaTable::standard().truncated(4);
        assert!(solve_length(6, 20, &t, &CertifyConfig::default()).is_err());
        assert!(certify_optimal_length(6, &t, &CertifyConfig::default()).is_err());
    }
}
