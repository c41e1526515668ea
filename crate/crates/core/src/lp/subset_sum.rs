use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::rational::Rational;

/// `sum_{(i,j) in pairs} d_ij >= |R|(|R|+1)/2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetSumCut {
    pub pairs: Vec<(usize, usize)>,
    pub rhs: i64,
}

impl SubsetSumCut {
    pub fn new(mut pairs: Vec<(usize, usize)>) -> SubsetSumCut {
        pairs.sort_unstable();
        let k = pairs.len() as i64;
        SubsetSumCut {
            pairs,
            rhs: k * (k + 1) / 2,
        }
    }

    pub fn lhs(&self, point: &BTreeMap<(usize, usize), Rational>) -> Rational {
        self.pairs.iter().fold(Rational::zero(), |acc, p| &acc + &point[p])
    }

    /// `rhs - lhs`; positive means violated.
    pub fn violation(&self, point: &BTreeMap<(usize, usize), Rational>) -> Rational {
        &Rational::from_int(self.rhs) - &self.lhs(point)
    }
}

fn sorted_values(point: &BTreeMap<(usize, usize), Rational>) -> Vec<((usize, usize), &Rational)> {
    let mut v: Vec<_> = point.iter().map(|(p, x)| (*p, x)).collect();
    // ties by pair order keep the result deterministic
    v.sort_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)));
    v
}

/// Most violated subset-sum inequality at `point`, if any.
///
/// Violation is measured relative to the right-hand side, `(rhs - lhs) / rhs`,
/// so cuts of different cardinality compare on the same scale; ties go to
/// the smaller cardinality. For a fixed cardinality k the smallest left-hand
/// side comes from the k smallest values, so scanning prefixes of the sorted
/// values is exact.
pub fn separate_subset_sum(point: &BTreeMap<(usize, usize), Rational>) -> Option<SubsetSumCut> {
    let sorted = sorted_values(point);
    let mut prefix = Rational::zero();
    let mut best: Option<(Rational, usize)> = None;
    for (k, (_, x)) in sorted.iter().enumerate() {
        prefix = &prefix + *x;
        let card = (k + 1) as i64;
        let rhs = Rational::from_int(card * (card + 1) / 2);
        let rel = &(&rhs - &prefix) / &rhs;
        if rel.is_positive() && best.as_ref().is_none_or(|(b, _)| rel > *b) {
            best = Some((rel, k + 1));
        }
    }
    best.map(|(_, k)| SubsetSumCut::new(sorted[..k].iter().map(|(p, _)| *p).collect()))
}

/// One violated prefix cut per violating cardinality.
pub fn separate_subset_sum_all(point: &BTreeMap<(usize, usize), Rational>) -> Vec<SubsetSumCut> {
    let sorted = sorted_values(point);
    let mut prefix = Rational::zero();
    let mut out = Vec::new();
    for (k, (_, x)) in sorted.iter().enumerate() {
        prefix = &prefix + *x;
        let card = (k + 1) as i64;
        if prefix < Rational::from_int(card * (card + 1) / 2) {
            out.push(SubsetSumCut::new(sorted[..=k].iter().map(|(p, _)| *p).collect()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(entries: &[((usize, usize), Rational)]) -> BTreeMap<(usize, usize), Rational> {
        entries.iter().cloned().collect()
    }

    #[test]
    fn violated_pair() {
        // d12 = 1, d23 = 1, d13 = 2 (0-based pairs)
        let p = pt(&[
            ((0, 1), Rational::from_int(1)),
            ((1, 2), Rational::from_int(1)),
            ((0, 2), Rational::from_int(2)),
        ]);
        let cut = separate_subset_sum(&p).unwrap();
        assert_eq!(cut.pairs, vec![(0, 1), (1, 2)]);
        assert_eq!(cut.rhs, 3);
        assert_eq!(cut.lhs(&p), Rational::from_int(2));
        // relative violation ties at k = 2 and k = 3 (1/3 each)
        assert!(separate_subset_sum_all(&p).len() >= 2);
    }

    #[test]
    fn satisfied_point() {
        let p = pt(&[
            ((0, 1), Rational::from_int(1)),
            ((1, 2), Rational::from_int(2)),
            ((0, 2), Rational::from_int(3)),
        ]);
        assert_eq!(separate_subset_sum(&p), None);
        assert!(separate_subset_sum_all(&p).is_empty());
    }

    #[test]
    fn rhs_from_cardinality() {
        assert_eq!(SubsetSumCut::new(vec![(0, 1); 4]).rhs, 10);
        assert_eq!(SubsetSumCut::new(vec![]).rhs, 0);
    }
}
