//! Acceptance criteria, one test each. Every test writes a single
//! `criterion N: PASS|FAIL ...` line to stderr (bypassing output capture)
//! before asserting.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use golomb_core::bounds::{exact_bounding_round, initial_bounds, lp_bounding_round, TightenConfig};
use golomb_core::lp::{d_lp_bound, de_lp_bound, separate_subset_sum, Rational};
use golomb_core::qip::{benders_nogood_cuts, golomb_cuts, separate_clique_cuts, CutFamily, CutSelection, QipConfig};
use golomb_core::ruler::brute_force_optimal;
use golomb_core::stats::CutCounts;
use golomb_core::{certify_optimal_length, BoundsTable, CertifyConfig, Method, OptimaTable, Ruler};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: u32, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {criterion}: {verdict} {detail}");
}

/// Nodes and cuts of a whole certification, witness run included.
type Effort = (u64, CutCounts);

fn certify(n: usize, config: &CertifyConfig) -> (Option<u32>, Effort) {
    let cert = certify_optimal_length(n, OptimaTable::standard(), config).expect("certification runs");
    (cert.optimum(), cert.total_stats().effort())
}

fn qip(golomb: bool, clique: bool) -> CertifyConfig {
    CertifyConfig {
        method: Method::Qip,
        qip: QipConfig {
            cuts: CutSelection {
                golomb,
                clique,
                ..CutSelection::default()
            },
            ..QipConfig::default()
        },
        ..CertifyConfig::default()
    }
}

fn method(m: Method) -> CertifyConfig {
    CertifyConfig {
        method: m,
        ..CertifyConfig::default()
    }
}

// ---- criterion 1 -----------------------------------------------------------

fn criterion_1_runs() -> Vec<(String, Option<u32>, u32, Effort)> {
    let mut out = Vec::new();
    for (n, want) in [(9, 44), (10, 55)] {
        for m in [Method::Cp, Method::Qip] {
            let t = Instant::now();
            let (got, effort) = certify(n, &method(m));
            out.push((
                format!("n={n} {} {:.1}s", m.tag(), t.elapsed().as_secs_f64()),
                got,
                want,
                effort,
            ));
        }
    }
    out
}

#[test]
fn criterion_1_certification() {
    let mut runs = criterion_1_runs();
    // the command-line form, through the binary
    let o = Command::new(env!("CARGO_BIN_EXE_golomb"))
        .args(["certify", "--n", "9", "--method", "qip", "--cuts", "golomb,clique"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap_or_default();
    let cli_range = (v["l_from"].as_u64(), v["l_to"].as_u64());
    runs.push((
        "cli n=9 qip".into(),
        v["optimum"].as_u64().map(|g| g as u32),
        44,
        (0, CutCounts::default()),
    ));
    let pass = runs.iter().all(|(_, got, want, _)| *got == Some(*want))
        && cli_range == (Some(35), Some(43))
        && o.status.success();
    let detail: Vec<String> = runs
        .iter()
        .map(|(k, got, want, _)| format!("{k} -> {got:?} (want {want})"))
        .collect();
    report(
        1,
        pass,
        &format!("{}; cli L range {cli_range:?}; tolerance 0", detail.join(", ")),
    );
    assert!(pass);
}

// ---- criterion 2 -----------------------------------------------------------

#[test]
#[ignore = "expected-slow: about 18 minutes on one core"]
fn criterion_2_stretch_certification() {
    let t = Instant::now();
    let (got, _) = certify(11, &qip(true, true));
    let pass = got == Some(72) && t.elapsed() <= Duration::from_secs(4 * 3600);
    report(
        2,
        pass,
        &format!(
            "n=11 qip golomb,clique -> {got:?} (want 72) in {:.0}s, budget 4h",
            t.elapsed().as_secs_f64()
        ),
    );
    assert!(pass);
}

// ---- criterion 3 -----------------------------------------------------------

fn criterion_3_configs() -> Vec<(String, CertifyConfig)> {
    let mut out = vec![
        ("cp".to_string(), method(Method::Cp)),
        ("d".to_string(), method(Method::D)),
    ];
    for (g, c) in [(false, false), (true, false), (false, true), (true, true)] {
        out.push((format!("qip golomb={g} clique={c}"), qip(g, c)));
    }
    out
}

fn criterion_3_runs() -> (Vec<String>, Vec<Effort>) {
    let mut failures = Vec::new();
    let mut efforts = Vec::new();
    for n in 2..=8 {
        let (want, _) = brute_force_optimal(n, Duration::from_secs(300)).expect("oracle");
        for (name, config) in criterion_3_configs() {
            let (got, effort) = certify(n, &config);
            if got != Some(want) {
                failures.push(format!("n={n} {name}: {got:?} != {want}"));
            }
            efforts.push(effort);
        }
    }
    (failures, efforts)
}

#[test]
fn criterion_3_oracle_equivalence() {
    let t = Instant::now();
    let (failures, efforts) = criterion_3_runs();
    let secs = t.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs <= 15.0 * 60.0;
    report(
        3,
        pass,
        &format!(
            "{} runs (n=2..8, cp, d, qip x4) in {secs:.1}s, budget 900s; mismatches: {failures:?}",
            efforts.len()
        ),
    );
    assert!(pass);
}

// ---- criterion 4 -----------------------------------------------------------

#[test]
fn criterion_4_lp_bound_equivalence() {
    let optima = OptimaTable::standard();
    let mut detail = Vec::new();
    let mut pass = true;
    for n in 3..=6 {
        let g = optima.get(n).unwrap();
        let b = BoundsTable::initial(n, g, optima).unwrap();
        let d = d_lp_bound(n, g, &b).unwrap();
        let de = de_lp_bound(n, g, &b).unwrap();
        pass &= d == de && d.value().is_some();
        detail.push(format!(
            "n={n}: d={:?} de={:?}",
            d.value().map(ToString::to_string),
            de.value().map(ToString::to_string)
        ));
    }
    report(4, pass, &format!("{}; exact rational equality", detail.join(", ")));
    assert!(pass);
}

// ---- criterion 5 -----------------------------------------------------------

#[test]
fn criterion_5_initial_bounds() {
    let optima = OptimaTable::from_entries([
        (1, 0),
        (2, 1),
        (3, 3),
        (4, 6),
        (5, 11),
        (6, 17),
        (7, 25),
        (8, 34),
        (9, 44),
    ])
    .unwrap();
    let b = initial_bounds(9, 44, &optima).unwrap();
    let (first, whole) = (b.range(0, 1), b.range(0, 8));
    let pass = first == (1, 10) && whole == (44, 44);
    report(
        5,
        pass,
        &format!("d_1,2 in {first:?} (want (1, 10)), d_1,9 in {whole:?} (want (44, 44)); exact"),
    );
    assert!(pass);
}

// ---- criterion 6 -----------------------------------------------------------

fn random_golomb(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    loop {
        let mut marks = vec![0u32];
        let mut dist = BTreeSet::new();
        let mut stuck = 0;
        while marks.len() < n && stuck < 50 {
            let v = marks.last().unwrap() + rng.gen_range(1..=10);
            if marks.iter().all(|&m| !dist.contains(&(v - m))) {
                dist.extend(marks.iter().map(|&m| v - m));
                marks.push(v);
            } else {
                stuck += 1;
            }
        }
        if marks.len() == n {
            return marks;
        }
    }
}

fn random_non_golomb(rng: &mut ChaCha8Rng, length: u32, size: usize) -> Vec<u32> {
    loop {
        let mut p: Vec<u32> = (0..size).map(|_| rng.gen_range(0..=length)).collect();
        p.sort_unstable();
        p.dedup();
        if p.len() >= 3 && Ruler::from_positions(&p).is_ok_and(|r| !r.is_golomb()) {
            return p;
        }
    }
}

#[test]
fn criterion_6_cut_validity() {
    let t = Instant::now();
    let optima = OptimaTable::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut placements = 0u64;
    let mut checked: BTreeMap<&str, u64> = BTreeMap::new();
    let mut violated: BTreeMap<&str, u64> = BTreeMap::new();
    let mut tally = |fam: &'static str, ok: bool| {
        *checked.entry(fam).or_default() += 1;
        if !ok {
            *violated.entry(fam).or_default() += 1;
        }
    };
    for _ in 0..1000 {
        let n = rng.gen_range(2..=8);
        let ruler = random_golomb(&mut rng, n);
        let len = *ruler.last().unwrap();
        let length = len + rng.gen_range(0..=8);
        let window = golomb_cuts(length, optima, true);
        for offset in 0..=length - len {
            placements += 1;
            let marks: Vec<u32> = ruler.iter().map(|&m| m + offset).collect();
            let set: BTreeSet<u32> = marks.iter().copied().collect();
            for c in &window {
                let fam = if c.family == CutFamily::Golomb { "golomb" } else { "ap" };
                tally(fam, c.holds_for_marks(&set));
            }
            // clique cuts at a node whose fixed marks are part of this placement
            let k = rng.gen_range(1..=marks.len());
            let fixed = &marks[..k];
            let y: Vec<Rational> = (0..=length)
                .map(|p| {
                    if fixed.contains(&p) {
                        Rational::one()
                    } else {
                        Rational::new(rng.gen_range(1..10), 10)
                    }
                })
                .collect();
            for c in separate_clique_cuts(&y, fixed, 200, 64) {
                tally("clique", c.holds_for_marks(&set));
            }
            // a repeated distance needs three points, so length 1 has none
            if length >= 2 {
                let bad = random_non_golomb(&mut rng, length, n + 2);
                for c in benders_nogood_cuts(&bad, false).expect("placement repeats a distance") {
                    tally("nogood", c.holds_for_marks(&set));
                }
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    let pass = violated.is_empty()
        && secs <= 120.0
        && ["golomb", "ap", "clique", "nogood"]
            .iter()
            .all(|f| checked.contains_key(f));
    report(
        6,
        pass,
        &format!("1000 rulers, {placements} embedded placements, cuts checked {checked:?}, violated {violated:?}, {secs:.1}s (budget 120s)"),
    );
    assert!(pass);
}

// ---- criterion 7 -----------------------------------------------------------

/// Largest relative violation over all subsets, with the smallest cardinality
/// attaining it.
fn exhaustive_subset_sum(point: &BTreeMap<(usize, usize), Rational>) -> Option<(Rational, usize)> {
    let vals: Vec<&Rational> = point.values().collect();
    let p = vals.len();
    let mut best: Option<(Rational, usize)> = None;
    for mask in 1u32..(1 << p) {
        let k = mask.count_ones() as usize;
        let mut sum = Rational::zero();
        for (i, v) in vals.iter().enumerate() {
            if mask & (1 << i) != 0 {
                sum = &sum + *v;
            }
        }
        let rhs = Rational::from_int((k * (k + 1) / 2) as i64);
        let rel = &(&rhs - &sum) / &rhs;
        if !rel.is_positive() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, bk)) => rel > *b || (rel == *b && k < *bk),
        };
        if better {
            best = Some((rel, k));
        }
    }
    best
}

#[test]
fn criterion_7_separation_exactness() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let all_pairs: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    let mut mismatches = 0;
    let mut violated_points = 0;
    for _ in 0..200 {
        let p = rng.gen_range(1..=12);
        let mut pairs = all_pairs.clone();
        for k in 0..p {
            let r = rng.gen_range(k..pairs.len());
            pairs.swap(k, r);
        }
        let point: BTreeMap<(usize, usize), Rational> = pairs[..p]
            .iter()
            .map(|&pr| (pr, Rational::new(rng.gen_range(0..60), rng.gen_range(1..7))))
            .collect();
        let want = exhaustive_subset_sum(&point);
        let got = separate_subset_sum(&point).map(|c| {
            let rhs = Rational::from_int(c.rhs);
            (&c.violation(&point) / &rhs, c.pairs.len())
        });
        violated_points += want.is_some() as u32;
        if got != want {
            mismatches += 1;
        }
    }
    let pass = mismatches == 0 && violated_points > 0;
    report(
        7,
        pass,
        &format!("200 points, P <= 12, {violated_points} with a violated cut, {mismatches} mismatches; exact"),
    );
    assert!(pass);
}

// ---- criterion 8 -----------------------------------------------------------

fn criterion_8_runs() -> [(Option<u32>, Effort); 2] {
    [certify(9, &qip(true, true)), certify(9, &qip(true, false))]
}

#[test]
fn criterion_8_clique_effect() {
    let [(with, e_with), (without, e_without)] = criterion_8_runs();
    let pass = with == Some(44) && without == Some(44) && e_with.0 < e_without.0;
    report(
        8,
        pass,
        &format!(
            "n=9 qip nodes with clique {} ({with:?}), without {} ({without:?}); strict <",
            e_with.0, e_without.0
        ),
    );
    assert!(pass);
}

// ---- criterion 9 -----------------------------------------------------------

#[test]
fn criterion_9_tightening_soundness() {
    let optima = OptimaTable::standard();
    let config = TightenConfig::default();
    let mut detail = Vec::new();
    let mut pass = true;
    for n in 2..=8 {
        let (g, ruler) = brute_force_optimal(n, Duration::from_secs(300)).expect("oracle");
        let mut b = initial_bounds(n, g, optima).unwrap();
        let mut monotone = true;
        let mut rounds = 0;
        while rounds < config.rounds && b.is_feasible() {
            let before = b.clone();
            if config.lp {
                let next = lp_bounding_round(&b).unwrap();
                monotone &= !next.is_feasible() || next.is_within(&b);
                b = next;
            }
            if let Some(mode) = config.exact {
                let (next, _, _) = exact_bounding_round(&b, mode, &config).unwrap();
                monotone &= !next.is_feasible() || next.is_within(&b);
                b = next;
            }
            rounds += 1;
            if b == before {
                break;
            }
        }
        let contains = b.is_feasible() && (b.admits(&ruler) || b.admits(&ruler.reflect()));
        pass &= monotone && contains;
        detail.push(format!(
            "n={n}: {rounds} rounds, range {}, optimum inside {contains}, monotone {monotone}",
            b.total_range()
        ));
    }
    report(9, pass, &detail.join("; "));
    assert!(pass);
}

// ---- criterion 10 ----------------------------------------------------------

#[test]
fn criterion_10_determinism() {
    let c1: Vec<Effort> = criterion_1_runs().into_iter().map(|r| r.3).collect();
    let c1_again: Vec<Effort> = criterion_1_runs().into_iter().map(|r| r.3).collect();
    let (_, c3) = criterion_3_runs();
    let (_, c3_again) = criterion_3_runs();
    let c8: Vec<Effort> = criterion_8_runs().into_iter().map(|r| r.1).collect();
    let c8_again: Vec<Effort> = criterion_8_runs().into_iter().map(|r| r.1).collect();
    let same = [c1 == c1_again, c3 == c3_again, c8 == c8_again];
    let pass = same.iter().all(|&s| s);
    report(
        10,
        pass,
        &format!(
            "identical node and cut counts on repeat: criterion 1 {}, 3 {}, 8 {}",
            same[0], same[1], same[2]
        ),
    );
    assert!(pass);
}
