use super::domain::Domain;
use super::store::DomainStore;
use super::tables::ForbiddenTable;
use crate::bounds::pair_index;

/// Outcome of running a propagator to its local fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropStatus {
    Changed,
    Fixpoint,
    Fail,
}

fn status(store: &DomainStore, before: u64) -> PropStatus {
    if store.is_failed() {
        PropStatus::Fail
    } else if store.change_count() != before {
        PropStatus::Changed
    } else {
        PropStatus::Fixpoint
    }
}

/// Removes assigned values from every other variable.
fn remove_assigned(store: &mut DomainStore) -> bool {
    loop {
        let mut used = Domain::EMPTY;
        let mut fixed = 0u32;
        for d in store.domains() {
            if d.is_fixed() {
                used = used.union(d);
                fixed += 1;
            }
        }
        if used.len() != fixed {
            store.fail();
            return false;
        }
        let mut newly_fixed = false;
        for v in 0..store.num_vars() {
            let d = store.domain(v);
            if d.is_fixed() {
                continue;
            }
            if !store.restrict(v, d.minus(&used)) {
                return false;
            }
            newly_fixed |= store.domain(v).is_fixed();
        }
        if !newly_fixed {
            return true;
        }
    }
}

/// Hall-interval filtering: when `k` variables have domains inside an
/// interval of `k` values, no other variable may take those values.
fn hall_intervals(store: &mut DomainStore) -> bool {
    let mut spans: Vec<(u32, u32)> = store
        .domains()
        .iter()
        .map(|d| (d.min().unwrap_or(0), d.max().unwrap_or(0)))
        .collect();
    spans.sort_unstable_by_key(|&(lo, hi)| (hi, lo));
    let mut starts: Vec<u32> = spans.iter().map(|s| s.0).collect();
    starts.sort_unstable();
    starts.dedup();
    let mut halls = Vec::new();
    for &a in &starts {
        let mut count = 0u32;
        for &(lo, hi) in &spans {
            if lo < a {
                continue;
            }
            count += 1;
            let cap = hi - a + 1;
            if count > cap {
                store.fail();
                return false;
            }
            if count == cap {
                halls.push((a, hi));
            }
        }
    }
    for (a, b) in halls {
        let block = Domain::range(a, b);
        for v in 0..store.num_vars() {
            let d = store.domain(v);
            let (lo, hi) = (d.min().unwrap(), d.max().unwrap());
            if lo >= a && hi <= b {
                continue;
            }
            if !store.restrict(v, d.minus(&block)) {
                return false;
            }
        }
    }
    true
}

/// Assigned-value removal plus Hall intervals over all variables of the store.
pub fn propagate_alldiff(store: &mut DomainStore) -> PropStatus {
    let before = store.change_count();
    loop {
        let round = store.change_count();
        if !remove_assigned(store) || !hall_intervals(store) {
            return PropStatus::Fail;
        }
        if store.change_count() == round {
            break;
        }
    }
    status(store, before)
}

/// Interval hull of `{z - y : z in c, y in b}`; empty when no positive value fits.
fn difference_span(c: &Domain, b: &Domain) -> Domain {
    let hi = c.max().unwrap() as i64 - b.min().unwrap() as i64;
    let lo = (c.min().unwrap() as i64 - b.max().unwrap() as i64).max(1);
    if hi < lo {
        Domain::EMPTY
    } else {
        Domain::range(lo as u32, hi as u32)
    }
}

/// Filters `a + b = c` (with `a = d_ij`, `b = d_jk`, `c = d_ik`).
#[inline]
fn revise_sum(store: &mut DomainStore, a: usize, b: usize, c: usize) -> bool {
    let (da, db) = (store.domain(a), store.domain(b));
    let nc = match (da.value(), db.value()) {
        (Some(x), _) => db.shift_up(x),
        (_, Some(y)) => da.shift_up(y),
        _ => Domain::range(
            da.min().unwrap() + db.min().unwrap(),
            da.max().unwrap() + db.max().unwrap(),
        ),
    };
    if !store.restrict(c, nc) {
        return false;
    }
    let dc = store.domain(c);
    let na = match (db.value(), dc.value()) {
        (Some(y), _) => dc.shift_down(y),
        (_, Some(z)) => db.reflect(z),
        _ => difference_span(&dc, &db),
    };
    if !store.restrict(a, na) {
        return false;
    }
    let da = store.domain(a);
    let nb = match (da.value(), dc.value()) {
        (Some(x), _) => dc.shift_down(x),
        (_, Some(z)) => da.reflect(z),
        _ => difference_span(&dc, &da),
    };
    store.restrict(b, nb)
}

/// Triangle identities `d_ij + d_jk = d_ik` over every `i < j < k`.
pub fn propagate_triangle(store: &mut DomainStore) -> PropStatus {
    let n = store.n().expect("triangle propagation needs a ruler layout");
    let before = store.change_count();
    let triples = Triples::new(n);
    store.queue_all();
    if !triples.run(store) {
        return PropStatus::Fail;
    }
    status(store, before)
}

/// Index of the triples touching each variable.
#[derive(Debug, Clone)]
pub(crate) struct Triples {
    list: Vec<[u16; 3]>,
    by_var: Vec<Vec<u32>>,
}

impl Triples {
    pub(crate) fn new(n: usize) -> Triples {
        let mut list = Vec::new();
        let mut by_var = vec![Vec::new(); crate::bounds::num_pairs(n)];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let t = [pair_index(n, i, j), pair_index(n, j, k), pair_index(n, i, k)];
                    let id = list.len() as u32;
                    for &v in &t {
                        by_var[v].push(id);
                    }
                    list.push(t.map(|v| v as u16));
                }
            }
        }
        Triples { list, by_var }
    }

    /// Revises triples of queued variables until the queue drains.
    pub(crate) fn run(&self, store: &mut DomainStore) -> bool {
        while let Some(v) = store.pop_queue() {
            for &t in &self.by_var[v] {
                let [a, b, c] = self.list[t as usize];
                if !revise_sum(store, a as usize, b as usize, c as usize) {
                    store.clear_queue();
                    return false;
                }
            }
        }
        true
    }
}

/// Applies one forbidden table to a store. Only prunes when two of the three
/// window variables are fixed.
pub(crate) fn propagate_table(store: &mut DomainStore, t: &ForbiddenTable) -> bool {
    let n = store.n().expect("ruler layout");
    let i = t.window();
    let vars = [
        pair_index(n, i, i + 1),
        pair_index(n, i + 1, i + 2),
        pair_index(n, i + 2, i + 3),
    ];
    let vals = vars.map(|v| store.domain(v).value());
    match vals {
        [Some(x), Some(y), Some(z)] => {
            if t.contains(x, y, z) {
                store.fail();
                return false;
            }
        }
        _ => {
            let fixed: Vec<usize> = (0..3).filter(|&k| vals[k].is_some()).collect();
            if fixed.len() == 2 {
                let free = 3 - fixed[0] - fixed[1];
                let banned = t.banned(free, vals[fixed[0]].unwrap(), vals[fixed[1]].unwrap());
                if !banned.is_empty() && !store.restrict(vars[free], banned.complement()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Full propagation context for one search: triangle, alldifferent, tables,
/// symmetry breaking and an optional cap on the total length.
#[derive(Debug, Clone)]
pub(crate) struct Propagation {
    n: usize,
    triples: Triples,
    tables: Vec<ForbiddenTable>,
    symmetry: bool,
}

impl Propagation {
    pub(crate) fn new(n: usize, tables: &[ForbiddenTable], symmetry: bool) -> Propagation {
        Propagation {
            n,
            triples: Triples::new(n),
            tables: tables
                .iter()
                .filter(|t| t.window() + 3 < n && !t.is_empty())
                .cloned()
                .collect(),
            symmetry,
        }
    }

    fn symmetry(&self, store: &mut DomainStore) -> bool {
        let n = self.n;
        if !self.symmetry || n < 3 {
            return true;
        }
        let first = pair_index(n, 0, 1);
        let last = pair_index(n, n - 2, n - 1);
        let (df, dl) = (store.domain(first), store.domain(last));
        let lmax = dl.max().unwrap();
        let fmin = df.min().unwrap();
        store.restrict(first, Domain::range(0, lmax.saturating_sub(1)))
            && store.restrict(last, Domain::range(fmin + 1, super::domain::MAX_VALUE))
    }

    /// Runs every propagator to a joint fixpoint; false on failure.
    pub(crate) fn propagate(&self, store: &mut DomainStore, cap: Option<u32>) -> bool {
        if store.is_failed() {
            return false;
        }
        if let Some(c) = cap {
            if !store.restrict(pair_index(self.n, 0, self.n - 1), Domain::range(0, c)) {
                return false;
            }
        }
        loop {
            if !self.triples.run(store) {
                return false;
            }
            let round = store.change_count();
            if !self.symmetry(store) || !remove_assigned(store) {
                store.clear_queue();
                return false;
            }
            for t in &self.tables {
                if !propagate_table(store, t) {
                    store.clear_queue();
                    return false;
                }
            }
            if store.change_count() == round && !hall_intervals(store) {
                store.clear_queue();
                return false;
            }
            if store.change_count() == round {
                return true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store(doms: &[Domain]) -> DomainStore {
        DomainStore::new(doms.to_vec())
    }

    #[test]
    fn alldiff_removes_assigned_value() {
        let mut s = store(&[Domain::singleton(1), Domain::range(1, 2)]);
        assert_eq!(propagate_alldiff(&mut s), PropStatus::Changed);
        assert_eq!(s.domain(1), Domain::singleton(2));
        assert_eq!(propagate_alldiff(&mut s), PropStatus::Fixpoint);
    }

    #[test]
    fn alldiff_hall_interval() {
        let mut s = store(&[Domain::range(1, 2), Domain::range(1, 2), Domain::range(1, 3)]);
        assert_eq!(propagate_alldiff(&mut s), PropStatus::Changed);
        assert_eq!(s.domain(2), Domain::singleton(3));
    }

    #[test]
    fn alldiff_pigeonhole() {
        let mut s = store(&[Domain::range(1, 2); 3]);
        assert_eq!(propagate_alldiff(&mut s), PropStatus::Fail);
    }

    fn three(d12: Domain, d23: Domain, d13: Domain) -> DomainStore {
        // pair order for n = 3: (0,1), (0,2), (1,2)
        DomainStore::for_ruler(3, vec![d12, d13, d23]).unwrap()
    }

    #[test]
    fn triangle_interval_sum() {
        let mut s = three(Domain::range(1, 3), Domain::range(2, 4), Domain::range(1, 20));
        assert_eq!(propagate_triangle(&mut s), PropStatus::Changed);
        let d13 = s.pair(0, 2);
        assert!(d13.min().unwrap() >= 3 && d13.max().unwrap() <= 7);
    }

    #[test]
    fn triangle_fixed_difference() {
        let mut s = three(Domain::singleton(2), Domain::range(1, 20), Domain::singleton(5));
        propagate_triangle(&mut s);
        assert_eq!(s.pair(1, 2), Domain::singleton(3));
    }

    #[test]
    fn triangle_overflow_fails() {
        let mut s = three(Domain::range(4, 5), Domain::range(4, 5), Domain::range(1, 7));
        assert_eq!(propagate_triangle(&mut s), PropStatus::Fail);
    }
}
