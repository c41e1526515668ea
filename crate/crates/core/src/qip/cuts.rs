//! Valid inequalities over the placement binaries `y_0..y_L`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::clique::{for_each_maximal_clique, Graph};
use crate::lp::Rational;
use crate::ruler::OptimaTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutFamily {
    /// Window of consecutive positions.
    Golomb,
    /// Window of an arithmetic progression with stride above one.
    Arithmetic,
    Clique,
    NoGood,
    /// The aggregated no-good form; not valid in general.
    AggregatedNoGood,
}

impl CutFamily {
    pub fn tag(self) -> &'static str {
        match self {
            CutFamily::Golomb => "golomb",
            CutFamily::Arithmetic => "ap",
            CutFamily::Clique => "clique",
            CutFamily::NoGood => "nogood",
            CutFamily::AggregatedNoGood => "aggregated-nogood",
        }
    }
}

/// `sum_k coef[k] * y[support[k]] <= rhs`, support ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub family: CutFamily,
    pub support: Vec<u32>,
    pub coef: Vec<i64>,
    pub rhs: Rational,
}

impl Cut {
    pub fn unit(family: CutFamily, mut support: Vec<u32>, rhs: i64) -> Cut {
        support.sort_unstable();
        support.dedup();
        let coef = vec![1; support.len()];
        Cut {
            family,
            support,
            coef,
            rhs: Rational::from_int(rhs),
        }
    }

    /// Left-hand side at a placement given by its marks.
    pub fn lhs_at_marks(&self, marks: &BTreeSet<u32>) -> i64 {
        self.support
            .iter()
            .zip(&self.coef)
            .filter(|(p, _)| marks.contains(p))
            .map(|(_, c)| c)
            .sum()
    }

    pub fn holds_for_marks(&self, marks: &BTreeSet<u32>) -> bool {
        Rational::from_int(self.lhs_at_marks(marks)) <= self.rhs
    }

    /// Left-hand side at `y`, indexed by position.
    pub fn lhs(&self, y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (&p, &c) in self.support.iter().zip(&self.coef) {
            let v = &y[p as usize];
            if !v.is_zero() {
                acc = &acc + &(v * &Rational::from_int(c));
            }
        }
        acc
    }

    pub fn is_violated(&self, y: &[Rational]) -> bool {
        self.lhs(y) > self.rhs
    }

    /// One line: family tag, support, coefficients, right-hand side.
    pub fn dump(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        format!(
            "{} [{}] [{}] {}",
            self.family.tag(),
            join(self.support.iter().map(|p| p.to_string()).collect()),
            join(self.coef.iter().map(|c| c.to_string()).collect()),
            self.rhs
        )
    }
}

/// Deduplicated cuts with a use counter each.
#[derive(Debug, Clone, Default)]
pub struct CutPool {
    cuts: Vec<Cut>,
    activity: Vec<u64>,
    index: HashMap<Cut, usize>,
}

impl CutPool {
    /// Adds a cut unless already pooled; returns its index.
    pub fn add(&mut self, cut: Cut) -> usize {
        if let Some(&k) = self.index.get(&cut) {
            return k;
        }
        let k = self.cuts.len();
        self.index.insert(cut.clone(), k);
        self.cuts.push(cut);
        self.activity.push(0);
        k
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn get(&self, k: usize) -> &Cut {
        &self.cuts[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Cut> {
        self.cuts.iter()
    }

    /// Times the cut entered a node LP.
    pub fn activity(&self, k: usize) -> u64 {
        self.activity[k]
    }

    pub(crate) fn touch(&mut self, k: usize) {
        self.activity[k] += 1;
    }

    /// Pooled cuts of one family that were used at least once.
    pub fn used(&self, family: CutFamily) -> u64 {
        self.cuts
            .iter()
            .zip(&self.activity)
            .filter(|(c, &a)| c.family == family && a > 0)
            .count() as u64
    }

    pub fn count(&self, family: CutFamily) -> u64 {
        self.cuts.iter().filter(|c| c.family == family).count() as u64
    }

    /// One cut per line.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for c in &self.cuts {
            let _ = writeln!(s, "{}", c.dump());
        }
        s
    }
}

/// Window cuts: any `G_{i+1}` consecutive positions hold at most `i` marks,
/// since `i + 1` marks there would form a Golomb ruler shorter than
/// `G_{i+1}`. With `include_ap`, the same holds for `G_{i+1}` consecutive
/// terms of any arithmetic progression of positions.
pub fn golomb_cuts(length: u32, optima: &OptimaTable, include_ap: bool) -> Vec<Cut> {
    let mut out = Vec::new();
    let max_stride = if include_ap { (length / 2).max(1) } else { 1 };
    for i in 2.. {
        let Ok(g) = optima.get(i + 1) else {
            break;
        };
        if g > length + 1 {
            break;
        }
        for stride in 1..=max_stride {
            let span = (g - 1) * stride;
            if span > length {
                break;
            }
            let family = if stride == 1 {
                CutFamily::Golomb
            } else {
                CutFamily::Arithmetic
            };
            for start in 0..=length - span {
                let support = (0..g).map(|t| start + t * stride).collect();
                out.push(Cut::unit(family, support, i as i64));
            }
        }
    }
    out
}

/// No-good cuts for a placement `marks`; `None` when it is Golomb.
///
/// The default form forbids each pair of pairs at a repeated distance:
/// their (three or four) marks cannot all be present. `aggregated`
/// instead emits, per repeated distance `u`, the aggregated inequality
/// `sum_l |M_u(l)| y_l <= |M|/2 + 1`, which can cut off Golomb placements.
pub fn benders_nogood_cuts(marks: &[u32], aggregated: bool) -> Option<Vec<Cut>> {
    let mut by_distance: BTreeMap<u32, Vec<(u32, u32)>> = BTreeMap::new();
    let mut sorted = marks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for (k, &a) in sorted.iter().enumerate() {
        for &b in &sorted[k + 1..] {
            by_distance.entry(b - a).or_default().push((a, b));
        }
    }
    let mut cuts = Vec::new();
    for (_, pairs) in by_distance.into_iter().filter(|(_, p)| p.len() > 1) {
        if aggregated {
            let mut degree: BTreeMap<u32, i64> = BTreeMap::new();
            for &(a, b) in &pairs {
                *degree.entry(a).or_default() += 1;
                *degree.entry(b).or_default() += 1;
            }
            cuts.push(Cut {
                family: CutFamily::AggregatedNoGood,
                support: degree.keys().copied().collect(),
                coef: degree.values().copied().collect(),
                rhs: &Rational::new(sorted.len() as i64, 2) + &Rational::one(),
            });
        } else {
            for (k, &(a, b)) in pairs.iter().enumerate() {
                for &(c, d) in &pairs[k + 1..] {
                    let set: BTreeSet<u32> = [a, b, c, d].into_iter().collect();
                    let size = set.len() as i64;
                    cuts.push(Cut::unit(CutFamily::NoGood, set.into_iter().collect(), size - 1));
                }
            }
        }
    }
    if cuts.is_empty() {
        None
    } else {
        cuts.sort_by(|a, b| a.support.cmp(&b.support));
        cuts.dedup();
        Some(cuts)
    }
}

/// Clique cuts at a node LP point `y`. `fixed` are the marks fixed to one
/// at the node; their distances `D` join two fractional positions `k`, `l`
/// whenever `|k - l|` is in `D`, and every maximal clique of fractional
/// weight above one yields `sum y <= 1`. Graphs with more than
/// `max_vertices` fractional positions are skipped, and at most
/// `max_cuts` cuts are returned.
pub fn separate_clique_cuts(y: &[Rational], fixed: &[u32], max_vertices: usize, max_cuts: usize) -> Vec<Cut> {
    let mut distances = BTreeSet::new();
    for (k, &a) in fixed.iter().enumerate() {
        for &b in &fixed[k + 1..] {
            distances.insert(a.abs_diff(b));
        }
    }
    if distances.is_empty() {
        return Vec::new();
    }
    let frac: Vec<u32> = (0..y.len() as u32)
        .filter(|&l| {
            let v = &y[l as usize];
            v.is_positive() && *v < Rational::one()
        })
        .collect();
    if frac.len() < 2 || frac.len() > max_vertices {
        return Vec::new();
    }
    let mut g = Graph::new(frac.len());
    for a in 0..frac.len() {
        for b in a + 1..frac.len() {
            if distances.contains(&(frac[b] - frac[a])) {
                g.add_edge(a, b);
            }
        }
    }
    let mut cuts = Vec::new();
    for_each_maximal_clique(&g, &mut |c| {
        if c.len() >= 2 {
            let w = c.iter().fold(Rational::zero(), |acc, &k| &acc + &y[frac[k] as usize]);
            if w > Rational::one() {
                cuts.push(Cut::unit(CutFamily::Clique, c.iter().map(|&k| frac[k]).collect(), 1));
            }
        }
        cuts.len() < max_cuts
    });
    cuts
}
