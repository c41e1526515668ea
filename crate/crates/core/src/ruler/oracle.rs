//! Exhaustive depth-first oracle for shortest Golomb rulers.
//!
//! Deliberately independent of every engine in this crate: plain
//! backtracking over increasing mark positions, pruned only by the lengths
//! of shorter optimal rulers it computes itself and by mirror symmetry.

use std::time::{Duration, Instant};

use super::Ruler;

/// Budget ran out before optimality was proven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleTimeout {
    /// Shortest ruler seen so far, if any.
    pub best: Option<Ruler>,
}

struct Dfs<'a> {
    order: usize,
    /// `shorter[k - 1]` is the optimal length of a k-mark ruler, k < order.
    shorter: &'a [u32],
    marks: Vec<u32>,
    used: Vec<bool>,
    best_len: u32,
    best: Option<Vec<u32>>,
    deadline: Instant,
    ticks: u64,
    timed_out: bool,
}

impl Dfs<'_> {
    fn run(&mut self) {
        if self.timed_out {
            return;
        }
        self.ticks += 1;
        if self.ticks.is_multiple_of(1024) && Instant::now() >= self.deadline {
            self.timed_out = true;
            return;
        }
        let depth = self.marks.len();
        if depth == self.order {
            let len = *self.marks.last().unwrap();
            let first = self.marks[1] - self.marks[0];
            let last = len - self.marks[depth - 2];
            if len < self.best_len && first <= last {
                self.best_len = len;
                self.best = Some(self.marks.clone());
            }
            return;
        }
        let prev = *self.marks.last().unwrap();
        // marks 0..=depth form a (depth+1)-mark ruler; the tail from the new
        // mark onwards holds `order - depth` marks.
        let head_min = match self.shorter.get(depth) {
            Some(&g) => g,
            None => self.shorter[depth - 1] + 1,
        };
        let tail_min = self.shorter[self.order - depth - 1];
        let mut v = (prev + 1).max(head_min);
        while v + tail_min < self.best_len {
            if self.try_place(v) {
                self.run();
                self.unplace();
                if self.timed_out {
                    return;
                }
            }
            v += 1;
        }
    }

    fn try_place(&mut self, v: u32) -> bool {
        if self.used.len() <= v as usize {
            self.used.resize(v as usize + 1, false);
        }
        for &m in &self.marks {
            if self.used[(v - m) as usize] {
                return false;
            }
        }
        // distances from v are pairwise distinct automatically
        for &m in &self.marks {
            self.used[(v - m) as usize] = true;
        }
        self.marks.push(v);
        true
    }

    fn unplace(&mut self) {
        let v = self.marks.pop().unwrap();
        for &m in &self.marks {
            self.used[(v - m) as usize] = false;
        }
    }
}

fn greedy_ruler(n: usize) -> Vec<u32> {
    let mut marks = vec![0u32];
    let mut used = vec![false];
    let mut v = 0;
    while marks.len() < n {
        v += 1;
        if used.len() <= v as usize {
            used.resize(v as usize + 1, false);
        }
        if marks.iter().all(|&m| !used[(v - m) as usize]) {
            for &m in &marks {
                used[(v - m) as usize] = true;
            }
            marks.push(v);
        }
    }
    marks
}

/// Shortest `n`-mark Golomb ruler by exhaustive search, in canonical form.
///
/// Panics if `n == 0`.
pub fn brute_force_optimal(n: usize, budget: Duration) -> Result<(u32, Ruler), OracleTimeout> {
    assert!(n >= 1, "a ruler needs at least one mark");
    let deadline = Instant::now() + budget;
    let mut shorter = vec![0u32];
    let mut result = Ruler::from_sorted_unchecked(vec![0]);
    for k in 2..=n {
        let greedy = greedy_ruler(k);
        let mut dfs = Dfs {
            order: k,
            shorter: &shorter,
            marks: vec![0],
            used: vec![false; 1],
            best_len: *greedy.last().unwrap() + 1,
            best: None,
            deadline,
            ticks: 0,
            timed_out: false,
        };
        dfs.run();
        let best = dfs.best.take().unwrap_or(greedy);
        let ruler = Ruler::from_sorted_unchecked(best).canonical();
        if dfs.timed_out {
            return Err(OracleTimeout {
                best: (k == n).then_some(ruler),
            });
        }
        shorter.push(ruler.length());
        result = ruler;
    }
    Ok((result.length(), result))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LONG: Duration = Duration::from_secs(600);

    #[test]
    fn small_orders() {
        assert_eq!(brute_force_optimal(1, LONG).unwrap(), (0, "0".parse().unwrap()));
        assert_eq!(brute_force_optimal(2, LONG).unwrap().0, 1);
        assert_eq!(brute_force_optimal(3, LONG).unwrap().0, 3);
        let (len, r) = brute_force_optimal(4, LONG).unwrap();
        assert_eq!(len, 6);
        assert_eq!(r.marks(), &[0, 1, 4, 6]);
    }

    #[test]
    fn order_eight_is_34() {
        let (len, r) = brute_force_optimal(8, LONG).unwrap();
        assert_eq!(len, 34);
        assert!(r.is_golomb());
        assert_eq!(r.order(), 8);
    }

    #[test]
    fn zero_budget_times_out() {
        // the nine-mark search visits far more than 1024 nodes
        let err = brute_force_optimal(9, Duration::ZERO).unwrap_err();
        assert!(err.best.is_none() || err.best.unwrap().is_golomb());
    }

    #[test]
    fn greedy_is_golomb() {
        for n in 1..10 {
            let g = greedy_ruler(n);
            assert!(Ruler::new(&g.iter().map(|&x| x as i64).collect::<Vec<_>>())
                .unwrap()
                .is_golomb());
        }
    }
}
