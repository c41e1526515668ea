use super::*;
use crate::ruler::OptimaTable;

fn bounds_with(n: usize, l: u32, pair: (usize, usize), lo: u32, hi: u32) -> BoundsTable {
    let mut b = BoundsTable::uniform(n, l);
    b.raise_lower(pair.0, pair.1, lo);
    b.lower_upper(pair.0, pair.1, hi);
    b
}

fn next_marks(kids: &[QNode]) -> Vec<u32> {
    kids.iter().map(|k| *k.prefix.last().unwrap()).collect()
}

#[test]
fn branch_from_root() {
    let kids = left_mark_branch(&QNode::root(), &bounds_with(4, 10, (0, 1), 1, 3));
    assert_eq!(next_marks(&kids), vec![1, 2, 3]);
    assert!(kids.iter().all(|k| k.depth == 1));
}

#[test]
fn branch_skips_repeated_distance() {
    let node = QNode::with_prefix(&[0, 1]).unwrap();
    let kids = left_mark_branch(&node, &bounds_with(4, 10, (0, 2), 2, 4));
    assert_eq!(next_marks(&kids), vec![3, 4]);
}

#[test]
fn branch_after_three_marks() {
    // prefix distances {1, 2, 3}: 4, 5 and 6 each repeat one of them
    let node = QNode::with_prefix(&[0, 1, 3]).unwrap();
    assert!(left_mark_branch(&node, &bounds_with(5, 12, (0, 3), 4, 6)).is_empty());
    let kids = left_mark_branch(&node, &bounds_with(5, 12, (0, 3), 4, 7));
    assert_eq!(next_marks(&kids), vec![7]);
    assert_eq!(kids[0].distances, [1, 2, 3, 4, 6, 7].into_iter().collect());
}

#[test]
fn branch_stops_at_full_ruler() {
    let node = QNode::with_prefix(&[0, 1, 3]).unwrap();
    assert!(left_mark_branch(&node, &BoundsTable::uniform(3, 5)).is_empty());
    assert!(QNode::with_prefix(&[0, 1, 2]).is_err());
}

fn reached(r: &MarksResult) -> Option<&Ruler> {
    match &r.outcome {
        MarksOutcome::Reached { ruler } => Some(ruler),
        _ => None,
    }
}

#[test]
fn four_marks_fit_in_six() {
    let r = max_marks(6, 4, OptimaTable::standard(), &QipConfig::default()).unwrap();
    let ruler = reached(&r).expect("reached");
    assert_eq!(ruler.order(), 4);
    assert!(ruler.is_golomb() && ruler.length() <= 6);
}

#[test]
fn four_marks_do_not_fit_in_five() {
    let r = max_marks(5, 4, OptimaTable::standard(), &QipConfig::default()).unwrap();
    assert_eq!(r.outcome, MarksOutcome::Below { n_l: 3 });
}

#[test]
fn trivial_targets() {
    let t = OptimaTable::standard();
    let c = QipConfig::default();
    assert_eq!(reached(&max_marks(0, 1, t, &c).unwrap()).unwrap().marks(), &[0]);
    assert_eq!(reached(&max_marks(4, 2, t, &c).unwrap()).unwrap().marks(), &[0, 4]);
    assert_eq!(max_marks(0, 2, t, &c).unwrap().outcome, MarksOutcome::Below { n_l: 1 });
    assert!(max_marks(3, 0, t, &c).is_err());
}

fn configs() -> Vec<QipConfig> {
    let mut out = Vec::new();
    for golomb in [false, true] {
        for clique in [false, true] {
            for tree in [TreeMode::OneTree, TreeMode::MultiTree] {
                out.push(QipConfig {
                    cuts: CutSelection {
                        golomb,
                        clique,
                        ..CutSelection::default()
                    },
                    tree,
                    ..QipConfig::default()
                });
            }
        }
    }
    out
}

#[test]
fn decision_at_the_optimum_matches_table() {
    let t = OptimaTable::standard();
    for n in 3..=6 {
        let g = t.get(n).unwrap();
        for config in configs() {
            let yes = max_marks(g, n, t, &config).unwrap();
            let r = reached(&yes).unwrap_or_else(|| panic!("n={n} {config:?}"));
            assert!(r.is_golomb() && r.order() == n);
            let no = max_marks(g - 1, n, t, &config).unwrap();
            assert_eq!(no.outcome, MarksOutcome::Below { n_l: n - 1 }, "n={n} {config:?}");
        }
    }
}

#[test]
fn pinned_end_gives_exact_length() {
    let t = OptimaTable::standard();
    let config = QipConfig {
        pin_end: true,
        ..QipConfig::default()
    };
    let r = max_marks(11, 5, t, &config).unwrap();
    assert_eq!(reached(&r).unwrap().length(), 11);
    assert!(matches!(
        max_marks(10, 5, t, &config).unwrap().outcome,
        MarksOutcome::Below { .. }
    ));
}

#[test]
fn node_limit_gives_unknown() {
    let config = QipConfig {
        node_limit: Some(1),
        ..QipConfig::default()
    };
    let r = max_marks(33, 8, &OptimaTable::standard().truncated(7), &config).unwrap();
    assert_eq!(r.outcome, MarksOutcome::Unknown);
}

#[test]
fn multi_tree_needs_nogood_cuts() {
    let config = QipConfig {
        tree: TreeMode::MultiTree,
        cuts: CutSelection {
            nogood: NoGoodMode::Off,
            ..CutSelection::default()
        },
        ..QipConfig::default()
    };
    assert!(max_marks(6, 4, OptimaTable::standard(), &config).is_err());
}
