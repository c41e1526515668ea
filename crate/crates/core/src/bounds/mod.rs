//! Per-pair distance bounds and their iterative tightening.

mod tighten;

pub use tighten::{
    exact_bounding_round, initial_bounds, lp_bounding_round, tighten_fixpoint, tighten_from, ExactMode, TightenConfig,
    TightenReport,
};

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{GolombError, Result};
use crate::ruler::{OptimaTable, Ruler};

/// Index of pair `(i, j)`, `i < j < n`, in row-major upper-triangular order.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All pairs `(i, j)` with `i < j < n`, in [`pair_index`] order.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Lower and upper bounds on every pairwise distance `d_ij` (marks 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsTable {
    n: usize,
    length: u32,
    lower: Vec<u32>,
    upper: Vec<u32>,
    infeasible: bool,
}

impl BoundsTable {
    /// Every pair in `[1, length]`.
    pub fn uniform(n: usize, length: u32) -> BoundsTable {
        let p = num_pairs(n);
        let mut t = BoundsTable {
            n,
            length,
            lower: vec![1; p],
            upper: vec![length; p],
            infeasible: false,
        };
        t.refresh_feasibility();
        t
    }

    /// Bounds from the optimal lengths of sub-rulers:
    /// `G_{j-i+1} <= d_ij <= L - G_i - G_{n-j+1}` (1-based marks).
    pub fn initial(n: usize, length: u32, optima: &OptimaTable) -> Result<BoundsTable> {
        Self::initial_with(n, length, |m| optima.get(m))
    }

    /// As [`BoundsTable::initial`], but `G_n` may be unknown; the full-span
    /// lower bound then falls back to `G_{n-1} + 1`. Used while certifying `G_n`.
    pub fn initial_open_top(n: usize, length: u32, optima: &OptimaTable) -> Result<BoundsTable> {
        Self::initial_with(n, length, |m| match optima.get(m) {
            Err(_) if m == n && n >= 2 => optima.get(n - 1).map(|g| g + 1),
            other => other,
        })
    }

    fn initial_with(n: usize, length: u32, g: impl Fn(usize) -> Result<u32>) -> Result<BoundsTable> {
        if n < 1 {
            return Err(GolombError::InvalidBounds("need at least one mark".into()));
        }
        let p = num_pairs(n);
        let mut lower = Vec::with_capacity(p);
        let mut upper = Vec::with_capacity(p);
        for (i, j) in pairs(n) {
            lower.push(g(j - i + 1)?);
            let cut = g(i + 1)? as i64 + g(n - j)? as i64;
            upper.push((length as i64 - cut).max(0) as u32);
        }
        let mut t = BoundsTable {
            n,
            length,
            lower,
            upper,
            infeasible: false,
        };
        t.refresh_feasibility();
        Ok(t)
    }

    fn refresh_feasibility(&mut self) {
        if self.lower.iter().zip(&self.upper).any(|(l, u)| l > u) {
            self.infeasible = true;
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn lower(&self, i: usize, j: usize) -> u32 {
        self.lower[pair_index(self.n, i, j)]
    }

    pub fn upper(&self, i: usize, j: usize) -> u32 {
        self.upper[pair_index(self.n, i, j)]
    }

    pub fn range(&self, i: usize, j: usize) -> (u32, u32) {
        let k = pair_index(self.n, i, j);
        (self.lower[k], self.upper[k])
    }

    pub fn is_feasible(&self) -> bool {
        !self.infeasible
    }

    pub fn mark_infeasible(&mut self) {
        self.infeasible = true;
    }

    /// Raises the lower bound; never lowers it.
    pub fn raise_lower(&mut self, i: usize, j: usize, v: u32) -> bool {
        let k = pair_index(self.n, i, j);
        if v > self.lower[k] {
            self.lower[k] = v;
            if v > self.upper[k] {
                self.infeasible = true;
            }
            true
        } else {
            false
        }
    }

    /// Lowers the upper bound; never raises it.
    pub fn lower_upper(&mut self, i: usize, j: usize, v: u32) -> bool {
        let k = pair_index(self.n, i, j);
        if v < self.upper[k] {
            self.upper[k] = v;
            if v < self.lower[k] {
                self.infeasible = true;
            }
            true
        } else {
            false
        }
    }

    /// Sum over pairs of `upper - lower` (0 for empty ranges).
    pub fn total_range(&self) -> u64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| u.saturating_sub(l) as u64)
            .sum()
    }

    /// Every range of `self` lies inside the matching range of `outer`.
    pub fn is_within(&self, outer: &BoundsTable) -> bool {
        self.n == outer.n
            && self
                .lower
                .iter()
                .zip(&self.upper)
                .zip(outer.lower.iter().zip(&outer.upper))
                .all(|((l, u), (ol, ou))| l >= ol && u <= ou)
    }

    /// True when every pairwise distance of `ruler` lies in its range.
    pub fn admits(&self, ruler: &Ruler) -> bool {
        ruler.order() == self.n
            && pairs(self.n).all(|(i, j)| {
                let d = ruler.distance(i, j);
                let (l, u) = self.range(i, j);
                l <= d && d <= u
            })
    }

    /// Pairwise tightest bounds of two tables over the same instance.
    pub fn intersect(&self, other: &BoundsTable) -> BoundsTable {
        assert_eq!(self.n, other.n);
        let mut t = BoundsTable {
            n: self.n,
            length: self.length.min(other.length),
            lower: self.lower.iter().zip(&other.lower).map(|(a, b)| *a.max(b)).collect(),
            upper: self.upper.iter().zip(&other.upper).map(|(a, b)| *a.min(b)).collect(),
            infeasible: self.infeasible || other.infeasible,
        };
        t.refresh_feasibility();
        t
    }

    /// Line-oriented text: a header `n L`, then `i j lower upper` per pair
    /// with 1-based mark indices.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# golomb bounds{}",
            if self.infeasible { " (infeasible)" } else { "" }
        );
        let _ = writeln!(s, "{} {}", self.n, self.length);
        for (i, j) in pairs(self.n) {
            let (l, u) = self.range(i, j);
            let _ = writeln!(s, "{} {} {} {}", i + 1, j + 1, l, u);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BoundsTable> {
        let bad = |msg: String| GolombError::Parse(format!("bounds table: {msg}"));
        let mut header: Option<(usize, u32)> = None;
        let mut table: Option<BoundsTable> = None;
        let mut seen = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<u64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| bad(format!("line {}: bad number {t:?}", lineno + 1)))
                })
                .collect::<Result<_>>()?;
            match (fields.len(), header) {
                (2, None) => {
                    let n = fields[0] as usize;
                    let l = u32::try_from(fields[1]).map_err(|_| bad("length too large".into()))?;
                    header = Some((n, l));
                    table = Some(BoundsTable::uniform(n, l));
                    seen = vec![false; num_pairs(n)];
                }
                (4, Some((n, _))) => {
                    let (i, j) = (fields[0] as usize, fields[1] as usize);
                    if i < 1 || j <= i || j > n {
                        return Err(bad(format!("line {}: bad pair ({i}, {j})", lineno + 1)));
                    }
                    let t = table.as_mut().expect("header seen");
                    let k = pair_index(n, i - 1, j - 1);
                    let conv = |v: u64| u32::try_from(v).map_err(|_| bad("bound too large".into()));
                    t.lower[k] = conv(fields[2])?;
                    t.upper[k] = conv(fields[3])?;
                    seen[k] = true;
                }
                _ => return Err(bad(format!("line {}: unexpected record", lineno + 1))),
            }
        }
        let mut t = table.ok_or_else(|| bad("missing header".into()))?;
        if let Some(k) = seen.iter().position(|s| !s) {
            let (i, j) = pairs(t.n).nth(k).unwrap();
            return Err(bad(format!("missing pair ({}, {})", i + 1, j + 1)));
        }
        t.infeasible = false;
        t.refresh_feasibility();
        Ok(t)
    }
}
