//! Fixed benchmark instances shared by the criterion benches.

use golomb_core::certify::exact_length_bounds;
use golomb_core::{BoundsTable, OptimaTable};

/// Exact-length tables one below the optimum: every engine must refute them.
pub fn refutation_bounds(n: usize) -> BoundsTable {
    let optima = OptimaTable::standard();
    let g = optima.get(n).expect("known optimum");
    exact_length_bounds(n, g - 1, &optima.truncated(n - 1)).expect("valid instance")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refutation_instances_are_open() {
        for n in 3..=8 {
            let b = refutation_bounds(n);
            assert!(b.is_feasible());
            assert_eq!(b.range(0, n - 1), (b.length(), b.length()));
        }
    }
}
