//! Bounded-variable primal simplex over exact rationals.
//!
//! Dense tableau, two phases. Each row is stored fraction-free: integer
//! numerators over one shared positive denominator, reduced to lowest terms
//! after every update. Entering variables are chosen by largest reduced cost
//! (ties to the smallest index); after a run of degenerate pivots the rule
//! falls back to the smallest-index rule for both the entering and the
//! leaving variable, which cannot cycle. Everything is deterministic given
//! the input ordering.

use std::cmp::Ordering;

use super::integer::{split, Int};
use super::model::{Cmp, LinearProgram, LpSolution, LpStatus, Sense};
use super::rational::Rational;

const DEGENERATE_RUN_BEFORE_BLAND: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Structural,
    Slack,
    Artificial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NonBasic {
    Lower,
    Upper,
}

/// `coef[k] / den` for every column; the last slot holds the value of the
/// row's basic variable.
#[derive(Debug, Clone)]
struct IRow {
    coef: Vec<Int>,
    den: Int,
}

impl IRow {
    /// From rational entries, scaled by the lcm of their denominators.
    fn from_rationals(vals: &[Rational]) -> IRow {
        let parts: Vec<(Int, Int)> = vals.iter().map(split).collect();
        let mut den = Int::ONE;
        for (_, d) in &parts {
            if !d.is_one() {
                let g = den.gcd(d);
                den = den.div_exact(&g).mul(d);
            }
        }
        let coef = parts
            .iter()
            .map(|(n, d)| {
                if n.is_zero() {
                    Int::ZERO
                } else {
                    n.mul(&den.div_exact(d))
                }
            })
            .collect();
        let mut r = IRow { coef, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.coef {
            if !c.is_zero() {
                g = g.gcd(c);
                if g.is_one() {
                    return;
                }
            }
        }
        for c in self.coef.iter_mut() {
            if !c.is_zero() {
                *c = c.div_exact(&g);
            }
        }
        self.den = self.den.div_exact(&g);
    }

    fn scale(&mut self, a: &Int) {
        if a.is_one() {
            return;
        }
        for c in self.coef.iter_mut() {
            if !c.is_zero() {
                *c = c.mul(a);
            }
        }
        self.den = self.den.mul(a);
    }

    fn nonzeros(&self) -> Vec<usize> {
        self.coef
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    /// `self -= (self[col] / src[col]) * src`; `nz` lists the non-zero
    /// columns of `src`.
    fn eliminate(&mut self, src: &IRow, col: usize, nz: &[usize], scratch: &mut Vec<i128>) {
        let t = &self.coef[col];
        if t.is_zero() {
            return;
        }
        let s = &src.coef[col];
        let g = t.gcd(s);
        let (mut a, mut b) = (s.div_exact(&g), t.div_exact(&g));
        if a.signum() < 0 {
            a = a.neg();
            b = b.neg();
        }
        if self.eliminate_small(src, col, nz, &a, &b, scratch) {
            return;
        }
        self.scale(&a);
        for &k in nz {
            self.coef[k] = Int::mul_sub(&self.coef[k], &Int::ONE, &b, &src.coef[k]);
        }
        self.coef[col] = Int::ZERO;
        self.reduce();
    }

    /// Machine-word version of [`eliminate`](Self::eliminate): every product
    /// of two `i64` fits in `i128`, and the row is reduced before it is
    /// stored. Returns false, leaving the row untouched, if some operand is
    /// not a machine word.
    fn eliminate_small(
        &mut self,
        src: &IRow,
        col: usize,
        nz: &[usize],
        a: &Int,
        b: &Int,
        scratch: &mut Vec<i128>,
    ) -> bool {
        let (Int::S(a), Int::S(b), Int::S(den)) = (a, b, &self.den) else {
            return false;
        };
        let (a, b) = (*a as i128, *b as i128);
        scratch.clear();
        for c in &self.coef {
            match c {
                Int::S(v) => scratch.push(*v as i128 * a),
                Int::B(_) => return false,
            }
        }
        for &k in nz {
            match &src.coef[k] {
                Int::S(y) => scratch[k] -= b * *y as i128,
                Int::B(_) => return false,
            }
        }
        scratch[col] = 0;
        let mut d = *den as i128 * a;
        let mut g = d as u128;
        for v in scratch.iter() {
            if g == 1 {
                break;
            }
            if *v != 0 {
                g = gcd_u128(g, v.unsigned_abs());
            }
        }
        if g > 1 {
            let g = g as i128;
            for v in scratch.iter_mut() {
                // 64-bit division is much cheaper when the value allows it
                *v = match i64::try_from(*v) {
                    Ok(w) => (w / g as i64) as i128,
                    Err(_) => *v / g,
                };
            }
            d /= g;
        }
        for (c, v) in self.coef.iter_mut().zip(scratch.iter()) {
            *c = Int::from_i128(*v);
        }
        self.den = Int::from_i128(d);
        true
    }

    /// Divides the row by its entry in `col`, which becomes 1.
    fn normalize(&mut self, col: usize) {
        let mut p = self.coef[col].clone();
        if p.signum() < 0 {
            p = p.neg();
            for c in self.coef.iter_mut() {
                if !c.is_zero() {
                    *c = c.neg();
                }
            }
        }
        self.den = p;
        self.reduce();
    }

    /// `value -= self[col] * (num / den)`.
    fn shift_value(&mut self, col: usize, num: &Int, den: &Int) {
        if self.coef[col].is_zero() || num.is_zero() {
            return;
        }
        self.scale(den);
        let last = self.coef.len() - 1;
        self.coef[last] = Int::mul_sub(&self.coef[last], &Int::ONE, &self.coef[col], num);
        self.reduce();
    }

    fn get(&self, k: usize) -> Rational {
        Int::ratio(&self.coef[k], &self.den)
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    use num_integer::Integer;
    if a <= u64::MAX as u128 && b <= u64::MAX as u128 {
        (a as u64).gcd(&(b as u64)) as u128
    } else {
        a.gcd(&b)
    }
}

/// `num / den` with `den > 0`.
#[derive(Debug, Clone)]
struct Frac {
    num: Int,
    den: Int,
}

impl Frac {
    fn cmp(&self, o: &Frac) -> Ordering {
        Int::cmp_frac(&self.num, &self.den, &o.num, &o.den)
    }
}

pub(crate) struct Tableau {
    rows: Vec<IRow>,
    basis: Vec<usize>,
    /// `None` when the column is basic.
    status: Vec<Option<NonBasic>>,
    /// Upper bound `(num, den)` of each shifted column (lower is always 0).
    upper: Vec<Option<(Int, Int)>>,
    kind: Vec<ColKind>,
    /// Reduced costs of the current (minimisation) objective.
    z: IRow,
    n_struct: usize,
    lower_shift: Vec<Rational>,
    scratch: Vec<i128>,
    pub(crate) pivots: u64,
}

enum Step {
    Optimal,
    Unbounded,
    Continue { degenerate: bool },
}

impl Tableau {
    /// Builds the phase-one tableau. Returns `None` when a variable has
    /// `upper < lower`.
    pub(crate) fn new(lp: &LinearProgram) -> Option<Tableau> {
        let n = lp.vars.len();
        let m = lp.rows.len();
        let mut upper = Vec::with_capacity(n + 2 * m);
        let mut lower_shift = Vec::with_capacity(n);
        for v in &lp.vars {
            let u = match &v.upper {
                Some(u) => {
                    if u < &v.lower {
                        return None;
                    }
                    Some(split(&(u - &v.lower)))
                }
                None => None,
            };
            upper.push(u);
            lower_shift.push(v.lower.clone());
        }
        let mut kind = vec![ColKind::Structural; n];

        let mut slack_col = vec![None; m];
        let mut next = n;
        for (i, r) in lp.rows.iter().enumerate() {
            if r.cmp != Cmp::Eq {
                slack_col[i] = Some(next);
                next += 1;
                upper.push(None);
                kind.push(ColKind::Slack);
            }
        }
        let n_art = lp
            .rows
            .iter()
            .enumerate()
            .filter(|(i, r)| {
                // rows whose slack can start basic need no artificial
                let mut rhs = r.rhs.clone();
                for (j, a) in &r.coeffs {
                    rhs.sub_mul(a, &lower_shift[*j]);
                }
                let flip = rhs.is_negative();
                !(slack_col[*i].is_some() && ((r.cmp == Cmp::Le) != flip))
            })
            .count();
        let total = next + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = next;
        for (i, r) in lp.rows.iter().enumerate() {
            let mut vals = vec![Rational::zero(); total + 1];
            let mut rhs = r.rhs.clone();
            for (j, a) in &r.coeffs {
                vals[*j] = &vals[*j] + a;
                rhs.sub_mul(a, &lower_shift[*j]);
            }
            if let Some(s) = slack_col[i] {
                vals[s] = match r.cmp {
                    Cmp::Le => Rational::one(),
                    _ => -Rational::one(),
                };
            }
            if rhs.is_negative() {
                for a in vals.iter_mut() {
                    if !a.is_zero() {
                        *a = -&*a;
                    }
                }
                rhs = -rhs;
            }
            match slack_col[i] {
                Some(s) if vals[s].is_one() => basis.push(s),
                _ => {
                    vals[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            vals[total] = rhs;
            rows.push(IRow::from_rationals(&vals));
        }
        debug_assert_eq!(art, total);
        for _ in next..total {
            upper.push(None);
            kind.push(ColKind::Artificial);
        }
        let mut status = vec![Some(NonBasic::Lower); total];
        for &b in &basis {
            status[b] = None;
        }
        Some(Tableau {
            rows,
            basis,
            status,
            upper,
            kind,
            z: IRow {
                coef: vec![Int::ZERO; total + 1],
                den: Int::ONE,
            },
            n_struct: n,
            lower_shift,
            scratch: Vec::new(),
            pivots: 0,
        })
    }

    fn ncols(&self) -> usize {
        self.kind.len()
    }

    fn value_of_nonbasic(&self, j: usize) -> Rational {
        match (self.status[j], &self.upper[j]) {
            (Some(NonBasic::Upper), Some((n, d))) => Int::ratio(n, d),
            _ => Rational::zero(),
        }
    }

    /// Installs a minimisation cost vector and recomputes reduced costs.
    fn set_cost(&mut self, cost: &[Rational]) {
        let mut vals = cost.to_vec();
        vals.resize(self.ncols() + 1, Rational::zero());
        let mut z = IRow::from_rationals(&vals);
        for (i, &b) in self.basis.iter().enumerate() {
            if !z.coef[b].is_zero() {
                let nz = self.rows[i].nonzeros();
                z.eliminate(&self.rows[i], b, &nz, &mut self.scratch);
            }
        }
        self.z = z;
    }

    fn is_fixed(&self, j: usize) -> bool {
        matches!(&self.upper[j], Some((n, _)) if n.is_zero())
    }

    fn eligible(&self, j: usize) -> bool {
        let d = self.z.coef[j].signum();
        match self.status[j] {
            None => false,
            Some(NonBasic::Lower) => d < 0 && !self.is_fixed(j),
            Some(NonBasic::Upper) => d > 0,
        }
    }

    fn choose_entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.ncols() {
            if !self.eligible(j) {
                continue;
            }
            if bland {
                return Some(j);
            }
            match best {
                Some(b) if self.z.coef[j].abs().cmp(&self.z.coef[b].abs()) != Ordering::Greater => {}
                _ => best = Some(j),
            }
        }
        best
    }

    fn step(&mut self, bland: bool) -> Step {
        let Some(j) = self.choose_entering(bland) else {
            return Step::Optimal;
        };
        let increasing = self.status[j] == Some(NonBasic::Lower);
        let last = self.ncols();

        // Ratio test. Basic i moves by -a_ij per unit increase of column j.
        let mut best_t: Option<Frac> = self.upper[j].clone().map(|(num, den)| Frac { num, den });
        let mut leave: Option<(usize, NonBasic)> = None;
        for i in 0..self.rows.len() {
            let row = &self.rows[i];
            let a = &row.coef[j];
            if a.is_zero() {
                continue;
            }
            let delta_neg = (a.signum() > 0) == increasing;
            let limit = if delta_neg {
                Some(Frac {
                    num: row.coef[last].clone(),
                    den: a.abs(),
                })
            } else {
                self.upper[self.basis[i]].as_ref().map(|(un, ud)| Frac {
                    num: Int::mul_sub(un, &row.den, ud, &row.coef[last]),
                    den: ud.mul(&a.abs()),
                })
            };
            let Some(t) = limit else { continue };
            let bound = if delta_neg { NonBasic::Lower } else { NonBasic::Upper };
            let better = match (&best_t, leave) {
                (None, _) => true,
                (Some(bt), None) => t.cmp(bt) == Ordering::Less,
                (Some(bt), Some((li, _))) => match t.cmp(bt) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basis[i] < self.basis[li],
                    Ordering::Greater => false,
                },
            };
            if better {
                best_t = Some(t);
                leave = Some((i, bound));
            }
        }
        let Some(t) = best_t else {
            return Step::Unbounded;
        };
        let degenerate = t.num.is_zero();
        self.pivots += 1;

        match leave {
            None => {
                // bound flip
                let (un, ud) = self.upper[j].clone().expect("flip needs a finite bound");
                let delta = if increasing { un } else { un.neg() };
                for row in self.rows.iter_mut() {
                    row.shift_value(j, &delta, &ud);
                }
                self.status[j] = Some(if increasing { NonBasic::Upper } else { NonBasic::Lower });
            }
            Some((r, bound)) => self.pivot(r, j, bound),
        }
        Step::Continue { degenerate }
    }

    /// Column `j` enters at row `r`; the leaving variable goes to `bound`.
    fn pivot(&mut self, r: usize, j: usize, bound: NonBasic) {
        if self.status[j] == Some(NonBasic::Upper) {
            // measure column j from zero again
            let (un, ud) = self.upper[j].clone().expect("at upper implies finite");
            let back = un.neg();
            for row in self.rows.iter_mut() {
                row.shift_value(j, &back, &ud);
            }
        }
        self.rows[r].normalize(j);
        let nz = self.rows[r].nonzeros();
        let pivot_row = std::mem::replace(
            &mut self.rows[r],
            IRow {
                coef: Vec::new(),
                den: Int::ONE,
            },
        );
        for row in self.rows.iter_mut() {
            if !row.coef.is_empty() {
                row.eliminate(&pivot_row, j, &nz, &mut self.scratch);
            }
        }
        self.z.eliminate(&pivot_row, j, &nz, &mut self.scratch);
        self.rows[r] = pivot_row;
        let old = self.basis[r];
        self.basis[r] = j;
        self.status[j] = None;
        self.status[old] = Some(bound);
        if bound == NonBasic::Upper {
            let (un, ud) = self.upper[old].clone().expect("leaving at upper implies finite");
            for row in self.rows.iter_mut() {
                row.shift_value(old, &un, &ud);
            }
        }
    }

    fn run(&mut self) -> bool {
        let mut degenerate_run = 0;
        loop {
            match self.step(degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND) {
                Step::Optimal => return true,
                Step::Unbounded => return false,
                Step::Continue { degenerate } => {
                    degenerate_run = if degenerate { degenerate_run + 1 } else { 0 };
                }
            }
        }
    }

    /// Phase one. Returns false when the LP is infeasible.
    pub(crate) fn phase_one(&mut self) -> bool {
        let cost: Vec<Rational> = self
            .kind
            .iter()
            .map(|k| {
                if *k == ColKind::Artificial {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        if cost.iter().all(Rational::is_zero) {
            return true;
        }
        self.set_cost(&cost);
        let bounded = self.run();
        debug_assert!(bounded, "phase one is bounded below by zero");
        let last = self.ncols();
        let residual = self
            .basis
            .iter()
            .enumerate()
            .any(|(i, &b)| self.kind[b] == ColKind::Artificial && !self.rows[i].coef[last].is_zero());
        if residual {
            return false;
        }
        // drive zero-valued artificials out of the basis where possible
        for r in 0..self.rows.len() {
            if self.kind[self.basis[r]] != ColKind::Artificial {
                continue;
            }
            let candidate = (0..self.ncols()).find(|&k| {
                self.kind[k] != ColKind::Artificial && self.status[k].is_some() && !self.rows[r].coef[k].is_zero()
            });
            if let Some(k) = candidate {
                self.pivot(r, k, NonBasic::Lower);
                self.pivots += 1;
            }
        }
        self.drop_nonbasic_artificials();
        true
    }

    /// Removes artificial columns that left the basis; those still basic sit
    /// at zero on redundant rows and are fixed there.
    fn drop_nonbasic_artificials(&mut self) {
        let keep: Vec<usize> = (0..self.ncols())
            .filter(|&k| self.kind[k] != ColKind::Artificial || self.status[k].is_none())
            .collect();
        let mut remap = vec![usize::MAX; self.ncols() + 1];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        remap[self.ncols()] = keep.len();
        let pick = |row: &IRow| -> IRow {
            let mut coef: Vec<Int> = keep.iter().map(|&k| row.coef[k].clone()).collect();
            coef.push(row.coef[row.coef.len() - 1].clone());
            IRow {
                coef,
                den: row.den.clone(),
            }
        };
        self.rows = self.rows.iter().map(pick).collect();
        self.z = IRow {
            coef: vec![Int::ZERO; keep.len() + 1],
            den: Int::ONE,
        };
        self.basis = self.basis.iter().map(|&b| remap[b]).collect();
        self.status = keep.iter().map(|&k| self.status[k]).collect();
        self.upper = keep
            .iter()
            .map(|&k| match self.kind[k] {
                ColKind::Artificial => Some((Int::ZERO, Int::ONE)),
                _ => self.upper[k].clone(),
            })
            .collect();
        self.kind = keep.iter().map(|&k| self.kind[k]).collect();
    }

    /// Phase two for one objective over the structural columns, starting
    /// from the current basis.
    pub(crate) fn optimize(&mut self, sense: Sense, objective: &[Rational]) -> (LpStatus, Rational, Vec<Rational>) {
        let cost: Vec<Rational> = objective
            .iter()
            .map(|c| match sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => -c,
            })
            .collect();
        self.set_cost(&cost);
        if !self.run() {
            return (LpStatus::Unbounded, Rational::zero(), Vec::new());
        }
        let point = self.point();
        let mut value = Rational::zero();
        for (c, x) in objective.iter().zip(&point) {
            if !c.is_zero() {
                value = &value + &(c * x);
            }
        }
        (LpStatus::Optimal, value, point)
    }

    fn point(&self) -> Vec<Rational> {
        let last = self.ncols();
        let mut x: Vec<Rational> = (0..self.n_struct).map(|j| self.value_of_nonbasic(j)).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_struct {
                x[b] = self.rows[i].get(last);
            }
        }
        for (xj, l) in x.iter_mut().zip(&self.lower_shift) {
            if !l.is_zero() {
                *xj = &*xj + l;
            }
        }
        x
    }
}

pub(crate) fn infeasible() -> LpSolution {
    LpSolution {
        status: LpStatus::Infeasible,
        value: Rational::zero(),
        point: Vec::new(),
        pivots: 0,
    }
}

/// Solves the LP exactly.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    let mut out = solve_lp_objectives(lp, &[(lp.sense, lp.objective.clone())]);
    out.pop().expect("one objective in, one solution out")
}

/// A feasible region solved once, then optimised for any number of
/// objectives, each phase two warm-started from the previous optimal basis.
pub struct WarmLp {
    tab: Option<Tableau>,
}

impl WarmLp {
    /// Runs phase one.
    pub fn new(lp: &LinearProgram) -> WarmLp {
        debug_assert!(lp.validate().is_ok());
        let tab = Tableau::new(lp).and_then(|mut t| t.phase_one().then_some(t));
        WarmLp { tab }
    }

    pub fn is_feasible(&self) -> bool {
        self.tab.is_some()
    }

    pub fn solve(&mut self, sense: Sense, objective: &[Rational]) -> LpSolution {
        let Some(tab) = self.tab.as_mut() else {
            return infeasible();
        };
        let before = tab.pivots;
        let (status, value, point) = tab.optimize(sense, objective);
        LpSolution {
            status,
            value,
            point,
            pivots: tab.pivots - before,
        }
    }
}

/// Solves the same feasible region for several objectives in turn.
pub fn solve_lp_objectives(lp: &LinearProgram, objectives: &[(Sense, Vec<Rational>)]) -> Vec<LpSolution> {
    let mut warm = WarmLp::new(lp);
    objectives.iter().map(|(sense, obj)| warm.solve(*sense, obj)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::model::Cmp;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        Rational::from_int(v)
    }

    #[test]
    fn max_single_var() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", q(0), None);
        lp.set_objective(x, q(1));
        lp.add_row(vec![(x, q(1))], Cmp::Le, q(3));
        let s = solve_lp(&lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.value, q(3));
    }

    #[test]
    fn min_covering_row() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var("x", q(0), None);
        let y = lp.add_var("y", q(0), None);
        lp.set_objective(x, q(1));
        lp.set_objective(y, q(1));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Cmp::Ge, q(3));
        let s = solve_lp(&lp);
        assert_eq!(s.value, q(3));
        assert!(lp.is_feasible_point(&s.point));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", q(0), None);
        lp.set_objective(x, q(1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
        lp.add_row(vec![(x, q(1))], Cmp::Ge, q(2));
        lp.add_row(vec![(x, q(1))], Cmp::Le, q(1));
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(Sense::Minimize);
        lp.add_var("x", q(2), Some(q(1)));
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // max x + y, 2x + y <= 4, x + 3y <= 6 -> (6/5, 8/5), value 14/5
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", q(0), None);
        let y = lp.add_var("y", q(0), None);
        lp.set_objective(x, q(1));
        lp.set_objective(y, q(1));
        lp.add_row(vec![(x, q(2)), (y, q(1))], Cmp::Le, q(4));
        lp.add_row(vec![(x, q(1)), (y, q(3))], Cmp::Le, q(6));
        let s = solve_lp(&lp);
        assert_eq!(s.value, Rational::new(14, 5));
        assert_eq!(s.point, vec![Rational::new(6, 5), Rational::new(8, 5)]);
    }

    #[test]
    fn equality_rows_with_shifted_bounds() {
        // x + y = 5, x in [1, 2], y in [0, 10], min y -> y = 3
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var("x", q(1), Some(q(2)));
        let y = lp.add_var("y", q(0), Some(q(10)));
        lp.set_objective(y, q(1));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Cmp::Eq, q(5));
        let s = solve_lp(&lp);
        assert_eq!(s.value, q(3));
        assert_eq!(s.point, vec![q(2), q(3)]);
    }

    #[test]
    fn degenerate_redundant_rows() {
        let mut lp = LinearProgram::new(Sense::Maximize);
        let x = lp.add_var("x", q(0), Some(q(1)));
        let y = lp.add_var("y", q(0), Some(q(1)));
        lp.set_objective(x, q(1));
        lp.set_objective(y, q(1));
        for _ in 0..4 {
            lp.add_row(vec![(x, q(1)), (y, q(1))], Cmp::Le, q(1));
            lp.add_row(vec![(x, q(1)), (y, q(1))], Cmp::Eq, q(1));
        }
        let s = solve_lp(&lp);
        assert_eq!(s.value, q(1));
        assert!(lp.is_feasible_point(&s.point));
    }

    #[test]
    fn warm_started_objectives() {
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = lp.add_var("x", q(0), Some(q(4)));
        let y = lp.add_var("y", q(0), Some(q(4)));
        lp.add_row(vec![(x, q(1)), (y, q(1))], Cmp::Ge, q(3));
        let objs = vec![
            (Sense::Minimize, vec![q(1), q(0)]),
            (Sense::Maximize, vec![q(1), q(0)]),
            (Sense::Minimize, vec![q(1), q(1)]),
        ];
        let out = solve_lp_objectives(&lp, &objs);
        let vals: Vec<_> = out.iter().map(|s| s.value.clone()).collect();
        assert_eq!(vals, vec![q(0), q(4), q(3)]);
    }

    /// Vertex enumeration for two-variable LPs over a box.
    fn brute_force_2d(rows: &[(i64, i64, i64)], obj: (i64, i64), hi: i64) -> Option<Rational> {
        let mut lines: Vec<(i64, i64, i64)> = rows.to_vec();
        lines.push((1, 0, 0));
        lines.push((1, 0, hi));
        lines.push((0, 1, 0));
        lines.push((0, 1, hi));
        let feasible = |x: &Rational, y: &Rational| {
            *x >= q(0)
                && *x <= q(hi)
                && *y >= q(0)
                && *y <= q(hi)
                && rows.iter().all(|&(a, b, c)| &(&q(a) * x) + &(&q(b) * y) <= q(c))
        };
        let mut best: Option<Rational> = None;
        for (k, &(a1, b1, c1)) in lines.iter().enumerate() {
            for &(a2, b2, c2) in &lines[k + 1..] {
                let det = a1 * b2 - a2 * b1;
                if det == 0 {
                    continue;
                }
                let x = Rational::new(c1 * b2 - c2 * b1, det);
                let y = Rational::new(a1 * c2 - a2 * c1, det);
                if feasible(&x, &y) {
                    let v = &(&q(obj.0) * &x) + &(&q(obj.1) * &y);
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
        }
        best
    }

    proptest! {
        #[test]
        fn two_var_lps_match_vertex_enumeration(
            rows in proptest::collection::vec((-4i64..5, -4i64..5, -6i64..12), 0..5),
            obj in (-3i64..4, -3i64..4),
        ) {
            let hi = 7;
            let mut lp = LinearProgram::new(Sense::Maximize);
            let x = lp.add_var("x", q(0), Some(q(hi)));
            let y = lp.add_var("y", q(0), Some(q(hi)));
            lp.set_objective(x, q(obj.0));
            lp.set_objective(y, q(obj.1));
            for &(a, b, c) in &rows {
                lp.add_row(vec![(x, q(a)), (y, q(b))], Cmp::Le, q(c));
            }
            let s = solve_lp(&lp);
            match brute_force_2d(&rows, obj, hi) {
                None => prop_assert_eq!(s.status, LpStatus::Infeasible),
                Some(v) => {
                    prop_assert_eq!(s.status, LpStatus::Optimal);
                    prop_assert_eq!(&s.value, &v);
                    prop_assert!(lp.is_feasible_point(&s.point));
                }
            }
        }
    }
}
