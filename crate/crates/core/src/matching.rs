//! Perfect matchings: exhaustive enumeration and a blossom existence check.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// Set of pairwise disjoint edges, stored as sorted edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<usize>,
    pub perfect: bool,
}

impl Matching {
    pub fn new(g: &Graph, mut edges: Vec<usize>) -> Option<Matching> {
        edges.sort_unstable();
        edges.dedup();
        let mut covered = vec![false; g.n()];
        for &e in &edges {
            let (u, v) = g.edge(e);
            if covered[u] || covered[v] {
                return None;
            }
            covered[u] = true;
            covered[v] = true;
        }
        let perfect = covered.iter().all(|&c| c);
        Some(Matching { edges, perfect })
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone)]
pub struct MatchingList {
    pub matchings: Vec<Matching>,
    /// False when the cap stopped the enumeration early.
    pub complete: bool,
}

/// All perfect matchings, branching on the lowest uncovered vertex.
pub fn perfect_matchings(g: &Graph, cap: usize) -> MatchingList {
    let mut out = MatchingList {
        matchings: Vec::new(),
        complete: true,
    };
    if g.n() % 2 == 1 {
        return out;
    }
    let mut covered = vec![false; g.n()];
    let mut chosen = Vec::with_capacity(g.n() / 2);
    extend(g, &mut covered, &mut chosen, cap, &mut out);
    out
}

fn extend(
    g: &Graph,
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    cap: usize,
    out: &mut MatchingList,
) {
    if !out.complete {
        return;
    }
    let Some(v) = covered.iter().position(|&c| !c) else {
        if out.matchings.len() >= cap {
            out.complete = false;
            return;
        }
        let mut edges = chosen.clone();
        edges.sort_unstable();
        out.matchings.push(Matching {
            edges,
            perfect: true,
        });
        return;
    };
    covered[v] = true;
    for &(w, e) in g.incident(v) {
        if covered[w] {
            continue;
        }
        covered[w] = true;
        chosen.push(e);
        if residual_has_perfect_matching(g, covered) {
            extend(g, covered, chosen, cap, out);
        }
        chosen.pop();
        covered[w] = false;
    }
    covered[v] = false;
}

/// The subgraph induced by the uncovered vertices has a perfect matching.
fn residual_has_perfect_matching(g: &Graph, covered: &[bool]) -> bool {
    let mut index = vec![NONE; g.n()];
    let mut next = 0;
    for v in (0..g.n()).filter(|&v| !covered[v]) {
        index[v] = next;
        next += 1;
    }
    let edges = g
        .edges()
        .iter()
        .filter(|&&(a, b)| !covered[a] && !covered[b])
        .map(|&(a, b)| (index[a], index[b]));
    let sub = Graph::new(next, edges).expect("induced subgraph is simple");
    has_perfect_matching(&sub)
}

/// Maximum-cardinality matching by Edmonds' blossom algorithm.
pub fn maximum_matching(g: &Graph) -> Matching {
    let n = g.n();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(w) = g.neighbours(v).find(|&w| mate[w] == NONE) {
                mate[v] = w;
                mate[w] = v;
            }
        }
    }
    let mut search = BlossomSearch::new(n);
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        if let Some(mut v) = search.find_path(g, &mate, root) {
            while v != NONE {
                let pv = search.parent[v];
                let next = mate[pv];
                mate[v] = pv;
                mate[pv] = v;
                v = next;
            }
        }
    }
    let edges = (0..n)
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| g.edge_id(v, mate[v]).expect("matched pair is an edge"))
        .collect();
    Matching::new(g, edges).expect("blossom output is a matching")
}

pub fn has_perfect_matching(g: &Graph) -> bool {
    g.n().is_multiple_of(2) && maximum_matching(g).perfect
}

struct BlossomSearch {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl BlossomSearch {
    fn new(n: usize) -> Self {
        BlossomSearch {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_path(&mut self, g: &Graph, mate: &[usize], root: usize) -> Option<usize> {
        let n = mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for to in g.neighbours(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return Some(to);
                    }
                    self.used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(&generate::complete(4), 100).matchings.len(), 3);
        assert_eq!(perfect_matchings(&generate::petersen(), 100).matchings.len(), 6);
        assert_eq!(perfect_matchings(&generate::cycle(6), 100).matchings.len(), 2);
        assert!(perfect_matchings(&generate::cycle(5), 100).matchings.is_empty());
    }

    #[test]
    fn cap_is_reported() {
        let list = perfect_matchings(&generate::petersen(), 4);
        assert_eq!(list.matchings.len(), 4);
        assert!(!list.complete);
    }

    #[test]
    fn blossom_agrees_with_enumeration() {
        for g in [
            generate::petersen(),
            generate::complete(5),
            generate::cycle(7),
            generate::prism(5),
            generate::generalized_petersen(10, 3),
        ] {
            let exists = !perfect_matchings(&g, 1).matchings.is_empty();
            assert_eq!(has_perfect_matching(&g), exists);
        }
        assert_eq!(maximum_matching(&generate::cycle(7)).edges.len(), 3);
    }
}
