use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::oracle::brute_force_optimal;
use crate::error::{GolombError, Result};

/// Where a table entry comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Published,
    OracleComputed,
}

/// Optimal lengths `G_m` keyed by mark count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimaTable {
    entries: BTreeMap<usize, (u32, Provenance)>,
}

const PUBLISHED: [(usize, u32); 7] = [(8, 34), (9, 44), (10, 55), (11, 72), (12, 85), (13, 106), (14, 127)];

const ORACLE_MAX: usize = 7;

impl OptimaTable {
    /// Table with published values for 8..=14 and oracle-computed values for 1..=7.
    ///
    /// The oracle part is computed once per process.
    pub fn standard() -> &'static OptimaTable {
        static TABLE: OnceLock<OptimaTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let mut entries = BTreeMap::new();
            for m in 1..=ORACLE_MAX {
                let (len, _) =
                    brute_force_optimal(m, Duration::from_secs(3600)).expect("small orders finish well within budget");
                entries.insert(m, (len, Provenance::OracleComputed));
            }
            for (m, g) in PUBLISHED {
                entries.insert(m, (g, Provenance::Published));
            }
            let t = OptimaTable { entries };
            debug_assert!(t.is_strictly_increasing());
            t
        })
    }

    /// Builds a table from explicit entries; values must increase with m and G_1 = 0.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, u32)>) -> Result<OptimaTable> {
        let entries: BTreeMap<_, _> = entries
            .into_iter()
            .map(|(m, g)| (m, (g, Provenance::OracleComputed)))
            .collect();
        let t = OptimaTable { entries };
        if t.entries.contains_key(&0) {
            return Err(GolombError::InvalidConfig("order 0 in optima table".into()));
        }
        if t.entries.get(&1).is_some_and(|&(g, _)| g != 0) {
            return Err(GolombError::InvalidConfig("G_1 must be 0".into()));
        }
        if !t.is_strictly_increasing() {
            return Err(GolombError::InvalidConfig("optima must increase with m".into()));
        }
        Ok(t)
    }

    fn is_strictly_increasing(&self) -> bool {
        self.entries
            .values()
            .zip(self.entries.values().skip(1))
            .all(|(a, b)| a.0 < b.0)
    }

    pub fn get(&self, m: usize) -> Result<u32> {
        self.entries
            .get(&m)
            .map(|&(g, _)| g)
            .ok_or(GolombError::MissingOptimum(m))
    }

    pub fn provenance(&self, m: usize) -> Option<Provenance> {
        self.entries.get(&m).map(|&(_, p)| p)
    }

    /// Copy restricted to orders `<= max_order`.
    pub fn truncated(&self, max_order: usize) -> OptimaTable {
        OptimaTable {
            entries: self.entries.range(..=max_order).map(|(&m, &e)| (m, e)).collect(),
        }
    }

    /// True when every order `1..=m` is present.
    pub fn covers(&self, m: usize) -> bool {
        (1..=m).all(|k| self.entries.contains_key(&k))
    }

    pub fn max_order(&self) -> usize {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    /// Largest m with `G_m <= length`, as far as the contiguous prefix of the table tells.
    pub fn max_marks_known(&self, length: u32) -> usize {
        let mut best = 0;
        for m in 1.. {
            match self.entries.get(&m) {
                Some(&(g, _)) if g <= length => best = m,
                _ => break,
            }
        }
        best
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32, Provenance)> + '_ {
        self.entries.iter().map(|(&m, &(g, p))| (m, g, p))
    }
}

/// `G_m` from the standard table.
pub fn optima_lookup(m: usize) -> Result<u32> {
    OptimaTable::standard().get(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_examples() {
        assert_eq!(optima_lookup(9).unwrap(), 44);
        assert_eq!(optima_lookup(1).unwrap(), 0);
        assert_eq!(optima_lookup(7).unwrap(), 25);
        assert_eq!(optima_lookup(0), Err(GolombError::MissingOptimum(0)));
        assert_eq!(optima_lookup(15), Err(GolombError::MissingOptimum(15)));
    }

    #[test]
    fn standard_table_shape() {
        let t = OptimaTable::standard();
        assert!(t.covers(14));
        assert!(t.is_strictly_increasing());
        assert_eq!(t.provenance(5), Some(Provenance::OracleComputed));
        assert_eq!(t.provenance(10), Some(Provenance::Published));
        let small: Vec<u32> = (1..=7).map(|m| t.get(m).unwrap()).collect();
        assert_eq!(small, [0, 1, 3, 6, 11, 17, 25]);
    }

    #[test]
    fn truncation_and_known_marks() {
        let t = OptimaTable::standard().truncated(8);
        assert_eq!(t.max_order(), 8);
        assert!(t.get(9).is_err());
        assert_eq!(t.max_marks_known(43), 8);
        assert_eq!(t.max_marks_known(5), 3);
        assert_eq!(t.max_marks_known(6), 4);
    }

    #[test]
    fn from_entries_validation() {
        assert!(OptimaTable::from_entries([(1, 0), (2, 1), (3, 3)]).is_ok());
        assert!(OptimaTable::from_entries([(1, 0), (2, 3), (3, 3)]).is_err());
        assert!(OptimaTable::from_entries([(1, 2)]).is_err());
    }
}
