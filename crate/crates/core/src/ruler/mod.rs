//! Ruler representation, Golomb verification and the optimal-length table.

mod optima;
mod oracle;

pub use optima::{optima_lookup, OptimaTable, Provenance};
pub use oracle::{brute_force_optimal, OracleTimeout};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GolombError, Result};

/// A ruler: strictly increasing integer marks starting at zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct Ruler {
    marks: Vec<u32>,
}

impl Ruler {
    /// Validates and wraps a list of marks.
    pub fn new(marks: &[i64]) -> Result<Ruler> {
        if marks.is_empty() {
            return Err(GolombError::InvalidRuler("no marks".into()));
        }
        if marks[0] != 0 {
            return Err(GolombError::InvalidRuler(format!(
                "first mark must be 0, got {}",
                marks[0]
            )));
        }
        let mut out = Vec::with_capacity(marks.len());
        for (k, &m) in marks.iter().enumerate() {
            if m < 0 {
                return Err(GolombError::InvalidRuler(format!("negative mark {m}")));
            }
            if m > u32::MAX as i64 {
                return Err(GolombError::InvalidRuler(format!("mark {m} too large")));
            }
            if k > 0 && m <= marks[k - 1] {
                return Err(GolombError::InvalidRuler(format!(
                    "marks must be strictly increasing ({} then {m})",
                    marks[k - 1]
                )));
            }
            out.push(m as u32);
        }
        Ok(Ruler { marks: out })
    }

    /// Wraps marks that the caller already knows to be valid.
    pub(crate) fn from_sorted_unchecked(marks: Vec<u32>) -> Ruler {
        debug_assert!(marks.first() == Some(&0));
        debug_assert!(marks.windows(2).all(|w| w[0] < w[1]));
        Ruler { marks }
    }

    /// Builds a ruler from any set of distinct positions by shifting the smallest to zero.
    pub fn from_positions(positions: &[u32]) -> Result<Ruler> {
        let mut p = positions.to_vec();
        p.sort_unstable();
        p.dedup();
        if p.len() != positions.len() {
            return Err(GolombError::InvalidRuler("duplicate positions".into()));
        }
        let Some(&first) = p.first() else {
            return Err(GolombError::InvalidRuler("no marks".into()));
        };
        Ok(Ruler {
            marks: p.into_iter().map(|x| x - first).collect(),
        })
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    pub fn order(&self) -> usize {
        self.marks.len()
    }

    pub fn length(&self) -> u32 {
        *self.marks.last().expect("ruler has at least one mark")
    }

    /// Mirror image `{length - x}`, re-sorted.
    pub fn reflect(&self) -> Ruler {
        let len = self.length();
        Ruler {
            marks: self.marks.iter().rev().map(|&x| len - x).collect(),
        }
    }

    pub fn is_golomb(&self) -> bool {
        let len = self.length() as usize;
        let mut seen = vec![false; len + 1];
        for (i, &a) in self.marks.iter().enumerate() {
            for &b in &self.marks[i + 1..] {
                let d = (b - a) as usize;
                if seen[d] {
                    return false;
                }
                seen[d] = true;
            }
        }
        true
    }

    pub fn distances(&self) -> DifferenceMultiset {
        let mut counts = BTreeMap::new();
        for (i, &a) in self.marks.iter().enumerate() {
            for &b in &self.marks[i + 1..] {
                *counts.entry(b - a).or_insert(0) += 1;
            }
        }
        DifferenceMultiset { counts }
    }

    /// The lexicographically smaller of the ruler and its reflection.
    pub fn canonical(&self) -> Ruler {
        let r = self.reflect();
        if r.marks < self.marks {
            r
        } else {
            self.clone()
        }
    }

    /// Distance between marks `i < j` (0-based).
    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.marks[j] - self.marks[i]
    }
}

impl TryFrom<Vec<i64>> for Ruler {
    type Error = GolombError;
    fn try_from(v: Vec<i64>) -> Result<Ruler> {
        Ruler::new(&v)
    }
}

impl From<Ruler> for Vec<u32> {
    fn from(r: Ruler) -> Vec<u32> {
        r.marks
    }
}

impl fmt::Display for Ruler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.marks.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl FromStr for Ruler {
    type Err = GolombError;

    /// Parses the one-line text form: space-separated decimal marks.
    fn from_str(s: &str) -> Result<Ruler> {
        let marks = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| GolombError::Parse(format!("bad mark {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ruler::new(&marks)
    }
}

/// Parses a ruler file: one ruler per line, blank lines and `#` comments skipped.
pub fn parse_ruler_file(text: &str) -> Result<Vec<Ruler>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect()
}

/// Multiset of pairwise distances of a ruler.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DifferenceMultiset {
    pub counts: BTreeMap<u32, usize>,
}

impl DifferenceMultiset {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn all_distinct(&self) -> bool {
        self.counts.values().all(|&c| c == 1)
    }
}

pub fn verify_golomb(marks: &[i64]) -> Result<bool> {
    Ok(Ruler::new(marks)?.is_golomb())
}

pub fn pairwise_distances(marks: &[i64]) -> Result<DifferenceMultiset> {
    Ok(Ruler::new(marks)?.distances())
}

pub fn canonicalize(marks: &[i64]) -> Result<Ruler> {
    Ok(Ruler::new(marks)?.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_examples() {
        assert!(verify_golomb(&[0, 1, 3]).unwrap());
        assert!(!verify_golomb(&[0, 1, 2]).unwrap());
        assert!(verify_golomb(&[0, 1, 5, 12, 25, 27, 35, 41, 44]).unwrap());
    }

    #[test]
    fn malformed_rulers_rejected() {
        assert!(verify_golomb(&[0, 3, 1]).is_err());
        assert!(verify_golomb(&[0, 1, 1]).is_err());
        assert!(verify_golomb(&[-1, 0, 2]).is_err());
        assert!(verify_golomb(&[1, 2]).is_err());
        assert!(verify_golomb(&[]).is_err());
        assert!(pairwise_distances(&[0, 2, 2]).is_err());
        assert!(canonicalize(&[0, 5, 4]).is_err());
    }

    #[test]
    fn distance_examples() {
        let d = pairwise_distances(&[0, 1, 3]).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 1), (2, 1), (3, 1)]));
        let d = pairwise_distances(&[0, 1, 2]).unwrap();
        assert_eq!(d.counts, BTreeMap::from([(1, 2), (2, 1)]));
        let d = pairwise_distances(&[0, 2, 5, 6]).unwrap();
        assert_eq!(d.counts, (1..=6).map(|k| (k, 1)).collect());
        assert_eq!(d.total(), 6);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonicalize(&[0, 5, 6]).unwrap().marks(), &[0, 1, 6]);
        assert_eq!(canonicalize(&[0, 1, 3]).unwrap().marks(), &[0, 1, 3]);
        assert_eq!(canonicalize(&[0, 2, 5, 6]).unwrap().marks(), &[0, 1, 4, 6]);
    }

    #[test]
    fn text_format() {
        let r: Ruler = "0 1 5 12 25 27 35 41 44".parse().unwrap();
        assert_eq!(r.order(), 9);
        assert_eq!(r.length(), 44);
        assert_eq!(r.to_string(), "0 1 5 12 25 27 35 41 44");
        assert!("0 x 3".parse::<Ruler>().is_err());
        let rs = parse_ruler_file("# header\n0 1 3\n\n0 2 7 8 11\n").unwrap();
        assert_eq!(rs.len(), 2);
    }

    #[test]
    fn from_positions_shifts() {
        let r = Ruler::from_positions(&[9, 5, 6]).unwrap();
        assert_eq!(r.marks(), &[0, 1, 4]);
        assert!(Ruler::from_positions(&[1, 1]).is_err());
    }
}
