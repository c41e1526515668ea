use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use golomb_core::bounds::{tighten_from, TightenConfig};
use golomb_core::cp::{build_forbidden_tables, search, SearchConfig, SearchMode};
use golomb_core::milp_d::{solve_d_formulation, Branching, DConfig};
use golomb_core::qip::{max_marks_within, CutSelection, MarksOutcome, NoGoodMode, QipConfig, TreeMode};
use golomb_core::report::{to_csv, to_json_array, LengthRow, RunReport};
use golomb_core::ruler::{brute_force_optimal, parse_ruler_file};
use golomb_core::{
    certify_optimal_length, Bounding, BoundsTable, CertifyConfig, Method, OptimaTable, Ruler, SolveOutcome, SolveResult,
};

use crate::args::{Command, Common, Format, Suite, Tree};

/// What the process exit status should report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Proven,
    Unknown,
}

impl Status {
    fn of(proven: bool) -> Status {
        if proven {
            Status::Proven
        } else {
            Status::Unknown
        }
    }
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Verify(c) => verify(&c.merge_config()?),
        Command::Oracle(c) => oracle(&c.merge_config()?),
        Command::Bounds(c) => bounds(&c.merge_config()?),
        Command::SolveCp(c) => solve(&c.merge_config()?, Method::Cp),
        Command::SolveD(c) => solve(&c.merge_config()?, Method::D),
        Command::SolveQip(c) => solve(&c.merge_config()?, Method::Qip),
        Command::Certify(c) => certify(&c.merge_config()?),
        Command::Bench(c) => bench(&c.merge_config()?),
    }
}

fn need_n(c: &Common) -> Result<usize> {
    match c.n {
        Some(n) if n >= 2 => Ok(n),
        Some(n) => bail!("--n must be at least 2, got {n}"),
        None => bail!("--n is required"),
    }
}

fn need_length(c: &Common) -> Result<u32> {
    c.length.context("--L is required")
}

fn budget(c: &Common) -> Result<Option<Duration>> {
    match c.budget {
        Some(b) if b.is_finite() && b > 0.0 => Ok(Some(Duration::from_secs_f64(b))),
        Some(b) => bail!("--budget must be a positive number of seconds, got {b}"),
        None => Ok(None),
    }
}

fn rulers(c: &Common) -> Result<Vec<Ruler>> {
    match (&c.ruler, &c.ruler_file) {
        (Some(_), Some(_)) => bail!("give either --ruler or --ruler-file, not both"),
        (Some(r), None) => Ok(vec![r.parse()?]),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let rs = parse_ruler_file(&text)?;
            if rs.is_empty() {
                bail!("{} holds no rulers", path.display());
            }
            Ok(rs)
        }
        (None, None) => bail!("--ruler or --ruler-file is required"),
    }
}

fn parse_cuts(spec: &str) -> Result<CutSelection> {
    let mut s = CutSelection {
        golomb: false,
        arithmetic: false,
        clique: false,
        nogood: NoGoodMode::Default,
    };
    for tok in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok {
            "golomb" => s.golomb = true,
            "ap" => s.arithmetic = true,
            "clique" => s.clique = true,
            "nogood" => {}
            "paper-literal-benders" => s.nogood = NoGoodMode::Aggregated,
            "none" => {}
            other => bail!("unknown cut family `{other}`"),
        }
    }
    Ok(s)
}

fn parse_branching(s: &str) -> Result<Branching> {
    match s {
        "left" => Ok(Branching::Left),
        "difference" => Ok(Branching::Difference),
        _ => bail!("unknown branching `{s}` (left or difference)"),
    }
}

/// Engine settings from the flags, rejecting flags that do not apply.
fn certify_config(c: &Common, method: Method) -> Result<CertifyConfig> {
    if c.cuts.is_some() && method != Method::Qip {
        bail!("--cuts only applies to the qip method");
    }
    if c.tree.is_some() && method != Method::Qip {
        bail!("--tree only applies to the qip method");
    }
    if c.branching.is_some() && method != Method::D {
        bail!("--branching only applies to the d method");
    }
    let mut config = CertifyConfig {
        method,
        bounding: match &c.bounding {
            Some(b) => b.parse()?,
            None => Bounding::None,
        },
        budget: budget(c)?,
        ..CertifyConfig::default()
    };
    if let Some(r) = c.rounds {
        config.tighten.rounds = r;
    }
    if let Some(cuts) = &c.cuts {
        config.qip.cuts = parse_cuts(cuts)?;
    }
    if let Some(t) = c.tree {
        config.qip.tree = match t {
            Tree::One => TreeMode::OneTree,
            Tree::Multi => TreeMode::MultiTree,
        };
        if config.qip.tree == TreeMode::MultiTree && config.qip.cuts.nogood == NoGoodMode::Off {
            bail!("multi-tree mode needs no-good cuts");
        }
    }
    if let Some(b) = &c.branching {
        config.d.branching = parse_branching(b)?;
    }
    config.cp.node_limit = c.nodes;
    config.d.node_limit = c.nodes;
    config.qip.node_limit = c.nodes;
    Ok(config)
}

fn config_echo(c: &Common, config: &CertifyConfig) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("method".into(), config.method.tag().into());
    m.insert("bounding".into(), config.bounding.tag().into());
    if config.bounding != Bounding::None {
        m.insert("rounds".into(), config.tighten.rounds.to_string());
    }
    match config.method {
        Method::Qip => {
            let q = &config.qip;
            let mut cuts = Vec::new();
            for (on, tag) in [
                (q.cuts.golomb, "golomb"),
                (q.cuts.arithmetic, "ap"),
                (q.cuts.clique, "clique"),
            ] {
                if on {
                    cuts.push(tag);
                }
            }
            cuts.push(match q.cuts.nogood {
                NoGoodMode::Off => "no-nogood",
                NoGoodMode::Default => "nogood",
                NoGoodMode::Aggregated => "paper-literal-benders",
            });
            m.insert("cuts".into(), cuts.join(","));
            let tree = if q.tree == TreeMode::OneTree { "one" } else { "multi" };
            m.insert("tree".into(), tree.into());
        }
        Method::D => {
            let b = if config.d.branching == Branching::Left {
                "left"
            } else {
                "difference"
            };
            m.insert("branching".into(), b.into());
        }
        Method::Cp => {}
    }
    if let Some(b) = c.budget {
        m.insert("budget".into(), b.to_string());
    }
    if let Some(nodes) = c.nodes {
        m.insert("nodes".into(), nodes.to_string());
    }
    m
}

fn format_for(c: &Common, default: Format) -> Format {
    c.format.unwrap_or_else(
        || match c.out.as_deref().and_then(Path::extension).and_then(|e| e.to_str()) {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            _ => default,
        },
    )
}

fn emit(c: &Common, reports: &[RunReport], default: Format) -> Result<()> {
    let text = match format_for(c, default) {
        Format::Csv => to_csv(reports)?,
        Format::Json if reports.len() == 1 => reports[0].to_json()? + "\n",
        Format::Json => to_json_array(reports)? + "\n",
    };
    write_out(c, &text)
}

fn write_out(c: &Common, text: &str) -> Result<()> {
    match &c.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(c: &Common) -> Result<Status> {
    let mut out = String::new();
    for r in rulers(c)? {
        let marks: Vec<String> = r.marks().iter().map(u32::to_string).collect();
        out += &format!(
            "{}: golomb: {} (marks {}, length {})\n",
            marks.join(" "),
            r.is_golomb(),
            r.order(),
            r.length()
        );
    }
    write_out(c, &out)?;
    Ok(Status::Proven)
}

fn oracle(c: &Common) -> Result<Status> {
    let n = c.n.context("--n is required")?;
    let limit = budget(c)?.unwrap_or(Duration::from_secs(600));
    match brute_force_optimal(n, limit) {
        Ok((len, ruler)) => {
            write_out(c, &format!("G_{n} = {len}\nruler: {}\n", ruler_text(&ruler)))?;
            Ok(Status::Proven)
        }
        Err(timeout) => {
            let best = timeout.best.map_or("none".to_string(), |r| ruler_text(&r));
            write_out(c, &format!("G_{n} unknown within budget; best found: {best}\n"))?;
            Ok(Status::Unknown)
        }
    }
}

fn ruler_text(r: &Ruler) -> String {
    r.marks().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn tighten_config(c: &Common, bounding: Bounding) -> Result<TightenConfig> {
    let mut base = TightenConfig::default();
    if let Some(r) = c.rounds {
        base.rounds = r;
    }
    if let Some(b) = budget(c)? {
        base.probe_budget = b;
    }
    base.probe_nodes = c.nodes;
    Ok(bounding.apply(&base))
}

fn bounds(c: &Common) -> Result<Status> {
    let (n, length) = (need_n(c)?, need_length(c)?);
    let bounding: Bounding = c.bounding.as_deref().unwrap_or("full").parse()?;
    let start = BoundsTable::initial(n, length, OptimaTable::standard())?;
    let (table, report) = tighten_from(start, &tighten_config(c, bounding)?)?;
    eprintln!(
        "rounds {}, range reduced by {}, {:.3} s{}",
        report.rounds,
        report.range_reduction,
        report.total_time(),
        if report.infeasible { ", infeasible" } else { "" }
    );
    write_out(c, &table.to_text())?;
    Ok(Status::Proven)
}

/// Best ruler of length at most `L` (cp, d), or whether `n` marks fit on
/// length `L` (qip). Only optimal lengths below `n` marks are used.
fn solve(c: &Common, method: Method) -> Result<Status> {
    if c.method.as_deref().is_some_and(|m| m != method.tag()) {
        bail!("--method conflicts with the subcommand");
    }
    let (n, length) = (need_n(c)?, need_length(c)?);
    let config = certify_config(c, method)?;
    let optima = OptimaTable::standard().truncated(n - 1);
    let mut b = BoundsTable::initial_open_top(n, length, &optima)?;
    let tighten = config.bounding.apply(&config.tighten);
    let mut btt = 0.0;
    if b.is_feasible() && (tighten.lp || tighten.exact.is_some()) {
        let (tight, report) = tighten_from(b, &tighten)?;
        b = tight;
        btt = report.total_time();
    }
    let (status, mut stats, ruler) = match method {
        Method::Cp | Method::D => {
            let r = if !b.is_feasible() {
                SolveResult {
                    outcome: SolveOutcome::Infeasible,
                    stats: Default::default(),
                }
            } else if method == Method::Cp {
                let tables = build_forbidden_tables(&b, config.table_rounds);
                let cp = SearchConfig {
                    mode: SearchMode::Optimize,
                    budget: config.budget,
                    ..config.cp.clone()
                };
                search(&b, &tables, &cp)?
            } else {
                solve_d_formulation(
                    &b,
                    &DConfig {
                        budget: config.budget,
                        ..config.d.clone()
                    },
                )?
            };
            let status = match &r.outcome {
                SolveOutcome::Optimal { .. } => "optimal",
                SolveOutcome::Feasible { .. } => "feasible",
                SolveOutcome::Infeasible => "infeasible",
                SolveOutcome::Unknown => "unknown",
            };
            (status, r.stats, r.outcome.ruler().cloned())
        }
        Method::Qip => {
            let q = QipConfig {
                budget: config.budget,
                ..config.qip.clone()
            };
            let r = max_marks_within(length, n, &optima, b.is_feasible().then_some(&b), &q)?;
            match r.outcome {
                MarksOutcome::Reached { ruler } => ("feasible", r.stats, Some(ruler)),
                MarksOutcome::Below { n_l } => {
                    eprintln!("at most {n_l} marks fit on length {length}");
                    ("infeasible", r.stats, None)
                }
                MarksOutcome::Unknown => ("unknown", r.stats, None),
            }
        }
    };
    stats.bound_tighten_time = btt;
    stats.total_time += btt;
    if let Some(r) = &ruler {
        eprintln!("ruler: {}", ruler_text(r));
    }
    let proven = status != "unknown";
    let report = RunReport::single(
        n,
        method.tag(),
        LengthRow::new(length, status, stats, ruler),
        config_echo(c, &config),
    );
    emit(c, &[report], Format::Json)?;
    Ok(Status::of(proven))
}

fn method_of(c: &Common) -> Result<Method> {
    Ok(c.method.as_deref().unwrap_or("cp").parse()?)
}

fn certify(c: &Common) -> Result<Status> {
    let n = need_n(c)?;
    if c.length.is_some() {
        bail!("certify searches the length itself; --L does not apply");
    }
    let config = certify_config(c, method_of(c)?)?;
    if config.qip.cuts.nogood == NoGoodMode::Aggregated {
        bail!("aggregated Benders cuts can remove valid rulers and are not allowed in certification");
    }
    let cert = certify_optimal_length(n, OptimaTable::standard(), &config)?;
    match cert.optimum() {
        Some(g) => eprintln!(
            "G_{n} = {g}; lengths {}..{} refuted",
            cert.runs.first().map_or(g, |r| r.length),
            g - 1
        ),
        None => eprintln!("G_{n} not certified within budget"),
    }
    let report = RunReport::from_certificate(&cert, config_echo(c, &config));
    emit(c, &[report], Format::Json)?;
    Ok(Status::of(cert.optimum().is_some()))
}

fn bench(c: &Common) -> Result<Status> {
    if c.n.is_some() || c.length.is_some() {
        bail!("bench runs a fixed suite; --n and --L do not apply");
    }
    let (orders, methods): (Vec<usize>, Vec<Method>) = match c.suite.unwrap_or(Suite::Small) {
        Suite::Small => ((4..=8).collect(), vec![Method::Cp, Method::D, Method::Qip]),
        Suite::Medium => ((9..=10).collect(), vec![Method::Cp, Method::Qip]),
    };
    let methods = match &c.method {
        Some(_) => vec![method_of(c)?],
        None => methods,
    };
    let mut reports = Vec::new();
    for &method in &methods {
        let config = certify_config(c, method)?;
        for &n in &orders {
            let cert = certify_optimal_length(n, OptimaTable::standard(), &config)?;
            eprintln!("n={n} {}: {:?}", method.tag(), cert.optimum());
            reports.push(RunReport::from_certificate(&cert, config_echo(c, &config)));
        }
    }
    emit(c, &reports, Format::Csv)?;
    Ok(Status::of(reports.iter().all(RunReport::is_proven)))
}
