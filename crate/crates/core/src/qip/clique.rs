//! Maximal clique enumeration (Bron-Kerbosch with Tomita pivoting).

use std::collections::BTreeMap;

/// Adjacency as bit rows over dense vertex indices.
#[derive(Debug, Clone)]
pub(crate) struct Graph {
    words: usize,
    adj: Vec<Vec<u64>>,
}

impl Graph {
    pub(crate) fn new(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph {
            words,
            adj: vec![vec![0; words]; n],
        }
    }

    pub(crate) fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b / 64] |= 1 << (b % 64);
            self.adj[b][a / 64] |= 1 << (a % 64);
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }
}

fn members(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(w, &bits)| {
        let mut b = bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let t = b.trailing_zeros() as usize;
            b &= b - 1;
            Some(w * 64 + t)
        })
    })
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn count(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// Calls `visit` on every maximal clique (vertices ascending) until it
/// returns false.
pub(crate) fn for_each_maximal_clique(g: &Graph, visit: &mut dyn FnMut(&[usize]) -> bool) {
    let mut p = vec![0u64; g.words];
    for v in 0..g.len() {
        p[v / 64] |= 1 << (v % 64);
    }
    let x = vec![0u64; g.words];
    let mut r = Vec::new();
    expand(g, &mut r, p, x, visit);
}

fn expand(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: Vec<u64>,
    mut x: Vec<u64>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if count(&p) == 0 {
        if count(&x) == 0 {
            let mut c = r.clone();
            c.sort_unstable();
            return visit(&c);
        }
        return true;
    }
    // pivot: the vertex of P or X with most neighbours in P
    let pivot = members(&p)
        .chain(members(&x))
        .max_by_key(|&u| (count(&and(&p, &g.adj[u])), std::cmp::Reverse(u)))
        .expect("P is not empty");
    let candidates: Vec<usize> = members(&p)
        .filter(|&v| g.adj[pivot][v / 64] & (1 << (v % 64)) == 0)
        .collect();
    for v in candidates {
        r.push(v);
        let go = expand(g, r, and(&p, &g.adj[v]), and(&x, &g.adj[v]), visit);
        r.pop();
        if !go {
            return false;
        }
        p[v / 64] &= !(1 << (v % 64));
        x[v / 64] |= 1 << (v % 64);
    }
    true
}

/// All maximal cliques of the graph on `vertices`, each sorted, in
/// lexicographic order. Edges with an endpoint outside `vertices` are ignored.
pub fn bron_kerbosch(vertices: &[usize], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut labels: Vec<usize> = vertices.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let index: BTreeMap<usize, usize> = labels.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut g = Graph::new(labels.len());
    for (a, b) in edges {
        if let (Some(&x), Some(&y)) = (index.get(a), index.get(b)) {
            g.add_edge(x, y);
        }
    }
    let mut out = Vec::new();
    if !labels.is_empty() {
        for_each_maximal_clique(&g, &mut |c| {
            out.push(c.iter().map(|&k| labels[k]).collect());
            true
        });
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle() {
        assert_eq!(
            bron_kerbosch(&[0, 1, 2], &[(0, 1), (1, 2), (2, 0)]),
            vec![vec![0, 1, 2]]
        );
    }

    #[test]
    fn edgeless() {
        assert_eq!(bron_kerbosch(&[0, 1, 2], &[]), vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn triangle_with_tail() {
        let cliques = bron_kerbosch(&[0, 1, 2, 3], &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        assert_eq!(cliques, vec![vec![0, 1, 2], vec![2, 3]]);
    }

    #[test]
    fn empty_graph() {
        assert!(bron_kerbosch(&[], &[]).is_empty());
    }

    fn brute_force(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let adj = |a: usize, b: usize| edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b));
        let is_clique = |s: &[usize]| {
            s.iter()
                .enumerate()
                .all(|(k, &a)| s[k + 1..].iter().all(|&b| adj(a, b)))
        };
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
            if !is_clique(&s) {
                continue;
            }
            let maximal = (0..n).all(|v| mask & (1 << v) != 0 || !s.iter().all(|&u| adj(u, v)));
            if maximal {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn matches_subset_enumeration(n in 1usize..9, raw in proptest::collection::vec((0usize..9, 0usize..9), 0..20)) {
            let edges: Vec<(usize, usize)> = raw.into_iter().filter(|&(a, b)| a < n && b < n && a != b).collect();
            let vertices: Vec<usize> = (0..n).collect();
            prop_assert_eq!(bron_kerbosch(&vertices, &edges), brute_force(n, &edges));
        }
    }
}
