//! Forbidden-assignment tables over three consecutive distances.
//!
//! For a window starting at mark `i`, `S_i` holds the triplets
//! `(d_{i,i+1}, d_{i+1,i+2}, d_{i+2,i+3})` that form a valid 4-mark subruler
//! under the current bounds. A triplet is dropped when it cannot be extended
//! by one more mark on either side into a valid 5-mark subruler whose other
//! triplet survives. Whatever lies in the bounds box but outside the final
//! `S_i` is forbidden.

use std::collections::{BTreeSet, HashMap};

use super::domain::Domain;
use crate::bounds::BoundsTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenTable {
    window: usize,
    boxes: [Domain; 3],
    allowed: BTreeSet<[u32; 3]>,
    /// Allowed values of position `k` keyed by the other two, in order.
    index: [HashMap<(u32, u32), Domain>; 3],
}

impl ForbiddenTable {
    fn new(window: usize, boxes: [Domain; 3], allowed: BTreeSet<[u32; 3]>) -> ForbiddenTable {
        let mut index: [HashMap<(u32, u32), Domain>; 3] = Default::default();
        for t in &allowed {
            for (k, map) in index.iter_mut().enumerate() {
                let key = match k {
                    0 => (t[1], t[2]),
                    1 => (t[0], t[2]),
                    _ => (t[0], t[1]),
                };
                map.entry(key).or_default().insert(t[k]);
            }
        }
        ForbiddenTable {
            window,
            boxes,
            allowed,
            index,
        }
    }

    /// First mark of the window (0-based).
    pub fn window(&self) -> usize {
        self.window
    }

    /// Number of forbidden triplets.
    pub fn len(&self) -> usize {
        let size: usize = self.boxes.iter().map(|b| b.len() as usize).product();
        size - self.allowed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: u32, y: u32, z: u32) -> bool {
        self.boxes[0].contains(x)
            && self.boxes[1].contains(y)
            && self.boxes[2].contains(z)
            && !self.allowed.contains(&[x, y, z])
    }

    /// Values of position `free` forbidden when the other two positions take
    /// `a` and `b` (in window order).
    pub fn banned(&self, free: usize, a: u32, b: u32) -> Domain {
        let (p, q) = match free {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if !self.boxes[p].contains(a) || !self.boxes[q].contains(b) {
            return Domain::EMPTY;
        }
        let ok = self.index[free].get(&(a, b)).copied().unwrap_or(Domain::EMPTY);
        self.boxes[free].minus(&ok)
    }

    /// Forbidden triplets in lexicographic order.
    pub fn forbidden(&self) -> impl Iterator<Item = [u32; 3]> + '_ {
        let [b0, b1, b2] = self.boxes;
        b0.iter().flat_map(move |x| {
            b1.iter()
                .flat_map(move |y| b2.iter().map(move |z| [x, y, z]))
                .filter(move |t| !self.allowed.contains(t))
        })
    }
}

fn span(b: &BoundsTable, i: usize, j: usize) -> (u32, u32) {
    let (l, u) = b.range(i, j);
    (l.max(1), u.min(b.length()))
}

fn in_range(b: &BoundsTable, i: usize, j: usize, v: u32) -> bool {
    let (l, u) = span(b, i, j);
    l <= v && v <= u
}

/// All distances of consecutive gaps `gaps` starting at mark `start` lie in
/// bounds and are pairwise distinct.
fn valid_subruler(b: &BoundsTable, start: usize, gaps: &[u32]) -> bool {
    let mut seen = Domain::EMPTY;
    let mut count = 0;
    for p in 0..gaps.len() {
        let mut d = 0;
        for q in p..gaps.len() {
            d += gaps[q];
            if !in_range(b, start + p, start + q + 1, d) || seen.contains(d) {
                return false;
            }
            seen.insert(d);
            count += 1;
        }
    }
    count == gaps.len() * (gaps.len() + 1) / 2
}

fn enumerate_window(b: &BoundsTable, i: usize) -> BTreeSet<[u32; 3]> {
    let mut out = BTreeSet::new();
    let (r0, r1, r2) = (span(b, i, i + 1), span(b, i + 1, i + 2), span(b, i + 2, i + 3));
    for x in r0.0..=r0.1 {
        for y in r1.0..=r1.1 {
            if x == y || !in_range(b, i, i + 2, x + y) {
                continue;
            }
            for z in r2.0..=r2.1 {
                if valid_subruler(b, i, &[x, y, z]) {
                    out.insert([x, y, z]);
                }
            }
        }
    }
    out
}

/// Builds one table per window of four consecutive marks, pruning for
/// `rounds` passes.
pub fn build_forbidden_tables(b: &BoundsTable, rounds: usize) -> Vec<ForbiddenTable> {
    let n = b.n();
    if n < 4 || !b.is_feasible() || b.length() > super::domain::MAX_VALUE {
        return Vec::new();
    }
    let windows = n - 3;
    let mut sets: Vec<BTreeSet<[u32; 3]>> = (0..windows).map(|i| enumerate_window(b, i)).collect();
    for _ in 0..rounds {
        let mut changed = false;
        // right to left, so pruning of S_{i+1} reaches S_i in the same pass
        for i in (0..windows.saturating_sub(1)).rev() {
            let mut next_by_prefix: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
            for t in &sets[i + 1] {
                next_by_prefix.entry((t[0], t[1])).or_default().push(t[2]);
            }
            let before = sets[i].len();
            let mut supported_next = BTreeSet::new();
            sets[i].retain(|&[x, y, z]| {
                let mut ok = false;
                if let Some(tails) = next_by_prefix.get(&(y, z)) {
                    for &w in tails {
                        if valid_subruler(b, i, &[x, y, z, w]) {
                            supported_next.insert([y, z, w]);
                            ok = true;
                        }
                    }
                }
                ok
            });
            let before_next = sets[i + 1].len();
            sets[i + 1].retain(|t| supported_next.contains(t));
            changed |= sets[i].len() != before || sets[i + 1].len() != before_next;
        }
        if !changed {
            break;
        }
    }
    sets.into_iter()
        .enumerate()
        .map(|(i, allowed)| {
            let r = [span(b, i, i + 1), span(b, i + 1, i + 2), span(b, i + 2, i + 3)];
            ForbiddenTable::new(i, r.map(|(l, u)| Domain::range(l, u)), allowed)
        })
        .collect()
}
