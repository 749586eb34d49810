use crate::error::{precondition, Result};
use crate::graph::{Graph, TotalElement};

/// A multiset of total independent sets, each a list of dense indices.
pub type TisMultiset = Vec<Vec<usize>>;

/// One side of a bridge: a graph, its `4N` sets and the bridge endpoint.
#[derive(Debug, Clone, Copy)]
pub struct GlueInput<'a> {
    pub graph: &'a Graph,
    pub sets: &'a [Vec<usize>],
    pub n_cover: usize,
    pub endpoint: usize,
}

/// Every set is independent in T(G) and every element lies in exactly
/// `n_cover` of the sets.
pub fn covers_exactly(g: &Graph, sets: &[Vec<usize>], n_cover: usize) -> bool {
    let mut count = vec![0usize; g.total_len()];
    for set in sets {
        let mut member = vec![false; g.total_len()];
        for &x in set {
            if x >= g.total_len() || member[x] {
                return false;
            }
            member[x] = true;
            count[x] += 1;
        }
        if set.iter().any(|&x| g.total_neighbours(x).iter().any(|&y| member[y])) {
            return false;
        }
    }
    count.iter().all(|&c| c == n_cover)
}

/// Disjoint union of two graphs, the second shifted by `g1.n()`, plus the
/// bridge between the two endpoints.
pub fn glued_graph(g1: &Graph, g2: &Graph, x1: usize, x2: usize) -> Result<Graph> {
    let shift = g1.n();
    let edges = g1
        .edges()
        .iter()
        .copied()
        .chain(g2.edges().iter().map(|&(a, b)| (a + shift, b + shift)))
        .chain([(x1, x2 + shift)]);
    Graph::new(g1.n() + g2.n(), edges)
}

fn touches(g: &Graph, set: &[usize], x: usize) -> (bool, bool) {
    let has_vertex = set.contains(&x);
    let has_edge = g.incident(x).iter().any(|&(_, e)| set.contains(&(g.n() + e)));
    (has_vertex, has_edge)
}

/// Reorder the `4N` sets so that the slots in `vertex_slots` hold the sets
/// containing the endpoint, the other sets meeting its edges fill the rest
/// of `0..3N`, and the last `N` slots avoid the endpoint entirely.
fn arrange(side: &GlueInput, vertex_slots: std::ops::Range<usize>) -> Result<Vec<Vec<usize>>> {
    let n = side.n_cover;
    let (mut with_vertex, mut with_edge, mut clear) = (Vec::new(), Vec::new(), Vec::new());
    for set in side.sets {
        match touches(side.graph, set, side.endpoint) {
            (true, _) => with_vertex.push(set.clone()),
            (false, true) => with_edge.push(set.clone()),
            (false, false) => clear.push(set.clone()),
        }
    }
    if with_vertex.len() != n || with_edge.len() + with_vertex.len() > 3 * n {
        return precondition(format!(
            "endpoint {} lies in {} sets and its edges in {}, need N = {n} and at most 3N in total",
            side.endpoint + 1,
            with_vertex.len(),
            with_edge.len()
        ));
    }
    let mut slots: Vec<Option<Vec<usize>>> = vec![None; 4 * n];
    for (slot, set) in vertex_slots.clone().zip(with_vertex) {
        slots[slot] = Some(set);
    }
    let mut rest = with_edge.into_iter().chain(clear);
    for slot in (0..3 * n).filter(|s| !vertex_slots.contains(s)).chain(3 * n..4 * n) {
        slots[slot] = rest.next();
    }
    Ok(slots.into_iter().map(Option::unwrap_or_default).collect())
}

fn translate(from: &Graph, to: &Graph, set: &[usize], shift: usize) -> Result<Vec<usize>> {
    set.iter()
        .map(|&x| {
            let el = match from.element_at(x) {
                TotalElement::Vertex(v) => TotalElement::Vertex(v + shift),
                TotalElement::Edge(a, b) => TotalElement::edge(a + shift, b + shift),
            };
            to.element_index(&el)
        })
        .collect()
}

/// Glue two `4N`-multisets of total independent sets across the bridge
/// joining their endpoints. Slots `0..N` carry the first endpoint, slots
/// `N..2N` the second, and the bridge is added to the last `N` slots where
/// neither endpoint nor its edges appear.
pub fn bridge_glue(a: GlueInput, b: GlueInput) -> Result<(Graph, TisMultiset)> {
    let n = a.n_cover;
    if n == 0 || b.n_cover != n {
        return precondition("both sides need the same positive N");
    }
    for side in [&a, &b] {
        if side.sets.len() != 4 * n {
            return precondition(format!("{} sets given, expected 4N = {}", side.sets.len(), 4 * n));
        }
        if side.endpoint >= side.graph.n() || side.graph.degree(side.endpoint) > 2 {
            return precondition(format!("endpoint {} must have degree at most 2", side.endpoint + 1));
        }
        if !covers_exactly(side.graph, side.sets, n) {
            return precondition("input sets do not cover every element exactly N times");
        }
    }
    let g = glued_graph(a.graph, b.graph, a.endpoint, b.endpoint)?;
    let left = arrange(&a, 0..n)?;
    let right = arrange(&b, n..2 * n)?;
    let bridge = g.element_index(&TotalElement::edge(a.endpoint, b.endpoint + a.graph.n()))?;
    let mut out = Vec::with_capacity(4 * n);
    for (j, (l, r)) in left.iter().zip(&right).enumerate() {
        let mut set = translate(a.graph, &g, l, 0)?;
        set.extend(translate(b.graph, &g, r, a.graph.n())?);
        if j >= 3 * n {
            set.push(bridge);
        }
        set.sort_unstable();
        out.push(set);
    }
    Ok((g, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_single_vertices() {
        let k1 = Graph::new(1, []).unwrap();
        let sets = vec![vec![0], vec![], vec![], vec![]];
        let side = GlueInput {
            graph: &k1,
            sets: &sets,
            n_cover: 1,
            endpoint: 0,
        };
        let (g, out) = bridge_glue(side, side).unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert!(covers_exactly(&g, &out, 1));
        assert_eq!(out.len(), 4);
    }

    #[test]
    fn rejects_wrong_counts() {
        let k1 = Graph::new(1, []).unwrap();
        let sets = vec![vec![0], vec![0], vec![], vec![]];
        let side = GlueInput {
            graph: &k1,
            sets: &sets,
            n_cover: 1,
            endpoint: 0,
        };
        assert!(bridge_glue(side, side).is_err());
    }
}
