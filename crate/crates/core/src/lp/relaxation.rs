//! LP relaxations of the distance models.
//!
//! The "d" model keeps only the consecutive distances `x_k = d_{k,k+1}`;
//! every other distance is the sum of the consecutive ones between its
//! marks. The "d+e" model adds assignment variables `e_ijv` (distance of
//! pair (i,j) equals v) relaxed to [0, 1].

use std::collections::BTreeMap;

use super::model::{Cmp, LinearProgram, LpStatus, Sense};
use super::rational::Rational;
use super::simplex::solve_lp;
use super::subset_sum::{separate_subset_sum_all, SubsetSumCut};
use crate::bounds::{num_pairs, pair_index, pairs, BoundsTable};
use crate::error::{GolombError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpBound {
    Value(Rational),
    Infeasible,
}

impl LpBound {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpBound::Value(v) => Some(v),
            LpBound::Infeasible => None,
        }
    }
}

fn check_instance(n: usize, bounds: &BoundsTable) -> Result<()> {
    if n < 2 {
        return Err(GolombError::InvalidConfig("LP bounds need at least two marks".into()));
    }
    if bounds.n() != n {
        return Err(GolombError::InvalidBounds(format!(
            "table is for {} marks, not {n}",
            bounds.n()
        )));
    }
    Ok(())
}

/// The "d" relaxation: variables are the n-1 consecutive distances.
#[derive(Debug, Clone)]
pub struct DRelaxation {
    pub lp: LinearProgram,
    pub n: usize,
}

/// Coefficients on consecutive distances of `sum_{(i,j) in pairs} d_ij`.
pub(crate) fn consecutive_coeffs(pairs: &[(usize, usize)]) -> Vec<(usize, Rational)> {
    let mut count: BTreeMap<usize, i64> = BTreeMap::new();
    for &(i, j) in pairs {
        for k in i..j {
            *count.entry(k).or_default() += 1;
        }
    }
    count.into_iter().map(|(k, c)| (k, Rational::from_int(c))).collect()
}

impl DRelaxation {
    /// Every `d_ij` value implied by a point of the relaxation.
    pub fn pair_values(&self, point: &[Rational]) -> BTreeMap<(usize, usize), Rational> {
        let mut out = BTreeMap::new();
        for i in 0..self.n {
            let mut acc = Rational::zero();
            for j in i + 1..self.n {
                acc = &acc + &point[j - 1];
                out.insert((i, j), acc.clone());
            }
        }
        out
    }
}

pub fn add_subset_sum_row(lp: &mut LinearProgram, cut: &SubsetSumCut) {
    lp.add_row(consecutive_coeffs(&cut.pairs), Cmp::Ge, Rational::from_int(cut.rhs));
}

/// Builds the "d" LP (without subset-sum cuts beyond singletons).
pub fn d_relaxation(n: usize, length: u32, bounds: &BoundsTable) -> Result<DRelaxation> {
    check_instance(n, bounds)?;
    let mut lp = LinearProgram::new(Sense::Minimize);
    for k in 0..n - 1 {
        let (l, u) = bounds.range(k, k + 1);
        let v = lp.add_var(
            format!("x{}", k + 1),
            Rational::from(l.max(1)),
            Some(Rational::from(u.min(length))),
        );
        lp.set_objective(v, Rational::one());
    }
    for (i, j) in pairs(n) {
        if j == i + 1 {
            continue;
        }
        let (l, mut u) = bounds.range(i, j);
        u = u.min(length);
        let coeffs: Vec<_> = (i..j).map(|k| (k, Rational::one())).collect();
        lp.add_row(coeffs.clone(), Cmp::Ge, Rational::from(l.max(1)));
        lp.add_row(coeffs, Cmp::Le, Rational::from(u));
    }
    Ok(DRelaxation { lp, n })
}

/// Optimum of the "d" LP, with subset-sum cuts generated to a fixpoint.
///
/// Each round adds every violated prefix cut of the current point; a cut
/// violated by the current optimum cannot already be in the LP, and the
/// family is finite, so the loop terminates.
pub fn d_lp_bound(n: usize, length: u32, bounds: &BoundsTable) -> Result<LpBound> {
    let mut rel = d_relaxation(n, length, bounds)?;
    if !bounds.is_feasible() {
        return Ok(LpBound::Infeasible);
    }
    loop {
        let sol = solve_lp(&rel.lp);
        match sol.status {
            LpStatus::Infeasible => return Ok(LpBound::Infeasible),
            LpStatus::Unbounded => unreachable!("objective is bounded below by the variable bounds"),
            LpStatus::Optimal => {}
        }
        let cuts = separate_subset_sum_all(&rel.pair_values(&sol.point));
        if cuts.is_empty() {
            return Ok(LpBound::Value(sol.value));
        }
        for c in &cuts {
            add_subset_sum_row(&mut rel.lp, c);
        }
    }
}

/// The relaxed "d+e" LP with the indices of its `d_ij` columns.
#[derive(Debug, Clone)]
pub struct DeRelaxation {
    pub lp: LinearProgram,
    /// Column of `d_ij`, by [`pair_index`].
    pub d_var: Vec<usize>,
}

/// Builds the relaxed "d+e" LP. Assignment columns outside a pair's range
/// are simply not created, which fixes them to zero.
pub fn de_relaxation(n: usize, length: u32, bounds: &BoundsTable) -> Result<Option<DeRelaxation>> {
    check_instance(n, bounds)?;
    if !bounds.is_feasible() {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(Sense::Minimize);
    let mut d_var = vec![0; num_pairs(n)];
    let mut by_value: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    let mut assign_rows = Vec::with_capacity(num_pairs(n));
    for (i, j) in pairs(n) {
        let (l, u) = bounds.range(i, j);
        let lo = l.max(1);
        let hi = u.min(length);
        if lo > hi {
            return Ok(None);
        }
        let d = lp.add_var(
            format!("d_{}_{}", i + 1, j + 1),
            Rational::from(lo),
            Some(Rational::from(hi)),
        );
        d_var[pair_index(n, i, j)] = d;
        if j == i + 1 {
            lp.set_objective(d, Rational::one());
        }
        let mut assign = Vec::new();
        let mut define = vec![(d, -Rational::one())];
        for v in lo..=hi {
            let e = lp.add_var(
                format!("e_{}_{}_{}", i + 1, j + 1, v),
                Rational::zero(),
                Some(Rational::one()),
            );
            assign.push((e, Rational::one()));
            define.push((e, Rational::from(v)));
            by_value.entry(v).or_default().push(e);
        }
        assign_rows.push((assign, define));
    }
    for (assign, define) in assign_rows {
        lp.add_row(assign, Cmp::Eq, Rational::one());
        lp.add_row(define, Cmp::Eq, Rational::zero());
    }
    for cols in by_value.values() {
        if cols.len() > 1 {
            lp.add_row(
                cols.iter().map(|&e| (e, Rational::one())).collect(),
                Cmp::Le,
                Rational::one(),
            );
        }
    }
    for (i, j) in pairs(n) {
        if j == i + 1 {
            continue;
        }
        let mut row = vec![(d_var[pair_index(n, i, j)], Rational::one())];
        row.extend((i..j).map(|k| (d_var[pair_index(n, k, k + 1)], -Rational::one())));
        lp.add_row(row, Cmp::Eq, Rational::zero());
    }
    Ok(Some(DeRelaxation { lp, d_var }))
}

/// Optimum of the relaxed "d+e" LP.
pub fn de_lp_bound(n: usize, length: u32, bounds: &BoundsTable) -> Result<LpBound> {
    let Some(rel) = de_relaxation(n, length, bounds)? else {
        return Ok(LpBound::Infeasible);
    };
    let sol = solve_lp(&rel.lp);
    Ok(match sol.status {
        LpStatus::Optimal => LpBound::Value(sol.value),
        _ => LpBound::Infeasible,
    })
}
