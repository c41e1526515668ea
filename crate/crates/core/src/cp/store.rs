use super::domain::Domain;
use crate::bounds::{num_pairs, pair_index, BoundsTable};
use crate::error::{GolombError, Result};

/// Per-variable finite domains with a trail for backtracking.
///
/// When built for an `n`-mark ruler, variable `pair_index(n, i, j)` is the
/// distance `d_ij`.
#[derive(Debug, Clone)]
pub struct DomainStore {
    n: Option<usize>,
    doms: Vec<Domain>,
    trail: Vec<(u32, Domain)>,
    levels: Vec<usize>,
    failed: bool,
    queue: Vec<u32>,
    queued: Vec<bool>,
    changes: u64,
}

impl DomainStore {
    /// A store of unrelated variables (no ruler layout).
    pub fn new(doms: Vec<Domain>) -> DomainStore {
        let k = doms.len();
        let failed = doms.iter().any(Domain::is_empty);
        DomainStore {
            n: None,
            doms,
            trail: Vec::new(),
            levels: Vec::new(),
            failed,
            queue: Vec::new(),
            queued: vec![false; k],
            changes: 0,
        }
    }

    /// Distance variables of an `n`-mark ruler, in pair order.
    pub fn for_ruler(n: usize, doms: Vec<Domain>) -> Result<DomainStore> {
        if doms.len() != num_pairs(n) {
            return Err(GolombError::InvalidConfig(format!(
                "{} domains for {} pairs",
                doms.len(),
                num_pairs(n)
            )));
        }
        let mut s = DomainStore::new(doms);
        s.n = Some(n);
        Ok(s)
    }

    /// Domains `[lower_ij, upper_ij]`, also capped by the table length.
    pub fn from_bounds(b: &BoundsTable) -> Result<DomainStore> {
        if b.length() > super::domain::MAX_VALUE {
            return Err(GolombError::InvalidBounds(format!(
                "length {} exceeds the supported maximum {}",
                b.length(),
                super::domain::MAX_VALUE
            )));
        }
        let n = b.n();
        let doms = crate::bounds::pairs(n)
            .map(|(i, j)| {
                let (l, u) = b.range(i, j);
                Domain::range(l.max(1), u.min(b.length()))
            })
            .collect();
        let mut s = DomainStore::for_ruler(n, doms)?;
        if !b.is_feasible() {
            s.failed = true;
        }
        Ok(s)
    }

    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.doms.len()
    }

    #[inline]
    pub fn domain(&self, v: usize) -> Domain {
        self.doms[v]
    }

    /// Domain of `d_ij`; panics without a ruler layout.
    #[inline]
    pub fn pair(&self, i: usize, j: usize) -> Domain {
        self.doms[pair_index(self.n.expect("ruler layout"), i, j)]
    }

    pub fn pair_var(&self, i: usize, j: usize) -> usize {
        pair_index(self.n.expect("ruler layout"), i, j)
    }

    pub fn domains(&self) -> &[Domain] {
        &self.doms
    }

    pub fn is_failed(&self) -> bool {
        self.failed
    }

    pub(crate) fn fail(&mut self) {
        self.failed = true;
    }

    /// Number of effective domain changes so far.
    pub(crate) fn change_count(&self) -> u64 {
        self.changes
    }

    /// Replaces a domain by `d ∩ current`. Returns false when the store failed.
    #[inline]
    pub fn restrict(&mut self, v: usize, d: Domain) -> bool {
        let cur = self.doms[v];
        let next = cur.intersect(&d);
        if next != cur {
            self.trail.push((v as u32, cur));
            self.doms[v] = next;
            self.changes += 1;
            if next.is_empty() {
                self.failed = true;
                return false;
            }
            if !self.queued[v] {
                self.queued[v] = true;
                self.queue.push(v as u32);
            }
        }
        !self.failed
    }

    pub(crate) fn pop_queue(&mut self) -> Option<usize> {
        let v = self.queue.pop()? as usize;
        self.queued[v] = false;
        Some(v)
    }

    pub(crate) fn clear_queue(&mut self) {
        for &v in &self.queue {
            self.queued[v as usize] = false;
        }
        self.queue.clear();
    }

    /// Queues every variable, e.g. before the first propagation.
    pub(crate) fn queue_all(&mut self) {
        for v in 0..self.doms.len() {
            if !self.queued[v] {
                self.queued[v] = true;
                self.queue.push(v as u32);
            }
        }
    }

    pub fn push_level(&mut self) {
        self.levels.push(self.trail.len());
    }

    /// Undoes every change since the matching [`push_level`](Self::push_level).
    pub fn pop_level(&mut self) {
        let mark = self.levels.pop().expect("pop_level without push_level");
        while self.trail.len() > mark {
            let (v, d) = self.trail.pop().unwrap();
            self.doms[v as usize] = d;
        }
        self.failed = false;
        self.clear_queue();
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}
