//! Oriented 2-factors, complements of perfect matchings and 2-factorizations.

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::matching::Matching;

/// Spanning 2-regular subgraph with every cycle directed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedTwoFactor {
    succ: Vec<usize>,
    pred: Vec<usize>,
    /// Cycles in orientation order, each starting at its smallest vertex.
    cycles: Vec<Vec<usize>>,
    cycle_of: Vec<usize>,
    position: Vec<usize>,
    /// Edge id of the arc `(v, succ(v))`.
    out_edge: Vec<usize>,
    in_factor: Vec<bool>,
}

impl OrientedTwoFactor {
    pub fn from_successors(g: &Graph, succ: Vec<usize>) -> Result<OrientedTwoFactor> {
        let n = g.n();
        if succ.len() != n {
            return precondition("successor map must cover every vertex");
        }
        let mut pred = vec![usize::MAX; n];
        for (v, &s) in succ.iter().enumerate() {
            if s >= n || pred[s] != usize::MAX {
                return precondition("successor map is not a bijection");
            }
            pred[s] = v;
        }
        let mut out_edge = vec![0; n];
        let mut in_factor = vec![false; g.m()];
        for v in 0..n {
            let e = g.edge_id(v, succ[v]).ok_or_else(|| {
                Error::Precondition(format!("arc {}->{} is not an edge", v + 1, succ[v] + 1))
            })?;
            if in_factor[e] {
                return precondition(format!("edge {} used by two arcs", e));
            }
            in_factor[e] = true;
            out_edge[v] = e;
        }
        let mut cycle_of = vec![usize::MAX; n];
        let mut position = vec![0; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if cycle_of[start] != usize::MAX {
                continue;
            }
            let idx = cycles.len();
            let mut cyc = Vec::new();
            let mut v = start;
            loop {
                cycle_of[v] = idx;
                position[v] = cyc.len();
                cyc.push(v);
                v = succ[v];
                if v == start {
                    break;
                }
            }
            if cyc.len() < 3 {
                return precondition("2-factor cycle shorter than 3");
            }
            cycles.push(cyc);
        }
        Ok(OrientedTwoFactor {
            succ,
            pred,
            cycles,
            cycle_of,
            position,
            out_edge,
            in_factor,
        })
    }

    /// Orient a spanning 2-regular edge set: each cycle is traversed from its
    /// smallest vertex towards the smaller of that vertex's two neighbours.
    pub fn from_edges(g: &Graph, edges: &[usize]) -> Result<OrientedTwoFactor> {
        let n = g.n();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &e in edges {
            let (u, v) = g.edge(e);
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        if nbrs.iter().any(|a| a.len() != 2) {
            return precondition("edge set is not spanning and 2-regular");
        }
        let mut succ = vec![usize::MAX; n];
        for start in 0..n {
            if succ[start] != usize::MAX {
                continue;
            }
            let mut prev = start;
            let mut v = *nbrs[start].iter().min().expect("two neighbours");
            succ[start] = v;
            while v != start {
                let next = if nbrs[v][0] == prev { nbrs[v][1] } else { nbrs[v][0] };
                succ[v] = next;
                prev = v;
                v = next;
            }
        }
        OrientedTwoFactor::from_successors(g, succ)
    }

    pub fn succ(&self, v: usize) -> usize {
        self.succ[v]
    }

    pub fn pred(&self, v: usize) -> usize {
        self.pred[v]
    }

    pub fn successors(&self) -> &[usize] {
        &self.succ
    }

    pub fn cycles(&self) -> &[Vec<usize>] {
        &self.cycles
    }

    pub fn cycle_of(&self, v: usize) -> usize {
        self.cycle_of[v]
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    /// Edge id of the arc leaving `v`.
    pub fn out_edge(&self, v: usize) -> usize {
        self.out_edge[v]
    }

    pub fn in_edge(&self, v: usize) -> usize {
        self.out_edge[self.pred[v]]
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.in_factor[e]
    }

    /// Edge ids of F in orientation order, cycle by cycle.
    pub fn edges(&self) -> Vec<usize> {
        self.cycles
            .iter()
            .flat_map(|c| c.iter().map(|&v| self.out_edge[v]))
            .collect()
    }

    /// Tail of the arc carrying F-edge `e` (its left end).
    pub fn tail(&self, g: &Graph, e: usize) -> usize {
        let (u, v) = g.edge(e);
        if self.succ[u] == v {
            u
        } else {
            v
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.succ.len(), self.succ.len());
        for c in &self.cycles {
            for &v in c {
                s.push_str(&format!("e {} {}\n", v + 1, self.succ[v] + 1));
            }
        }
        s
    }

    /// Read a factor written by [`to_text`](Self::to_text): edge lines are
    /// arcs `tail head`.
    pub fn parse(g: &Graph, text: &str) -> Result<OrientedTwoFactor> {
        let arcs = parse_arcs(text)?;
        let mut succ = vec![usize::MAX; g.n()];
        for (u, v) in arcs {
            if u >= g.n() || v >= g.n() || succ[u] != usize::MAX {
                return precondition(format!("bad arc {} {}", u + 1, v + 1));
            }
            succ[u] = v;
        }
        if succ.contains(&usize::MAX) {
            return precondition("factor file misses a vertex");
        }
        OrientedTwoFactor::from_successors(g, succ)
    }
}

/// Edge lines of a `p`/`e` file as zero-based pairs, in file order.
pub fn parse_arcs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('p') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let parsed = match parts.as_slice() {
            ["e", a, b] => a.parse::<usize>().ok().zip(b.parse::<usize>().ok()),
            _ => None,
        };
        match parsed {
            Some((a, b)) if a > 0 && b > 0 => out.push((a - 1, b - 1)),
            _ => {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("malformed line `{line}`"),
                })
            }
        }
    }
    Ok(out)
}

/// The 2-factor `G - M` of a cubic graph.
pub fn complement_two_factor(g: &Graph, m: &Matching) -> Result<OrientedTwoFactor> {
    if !g.is_cubic() {
        return precondition("complement 2-factor needs a cubic graph");
    }
    if Matching::new(g, m.edges.clone()).is_none_or(|x| !x.perfect) {
        return precondition("matching is not perfect");
    }
    let rest: Vec<usize> = (0..g.m()).filter(|e| !m.contains(*e)).collect();
    OrientedTwoFactor::from_edges(g, &rest)
}

/// Split an even-regular graph into edge-disjoint 2-factors.
///
/// Orient every edge along an Euler tour, so each vertex has equal in- and
/// out-degree; perfect matchings of the out/in split graph are then
/// successor maps.
pub fn two_factorize_even(g: &Graph) -> Result<Vec<OrientedTwoFactor>> {
    let d = match g.regular_degree() {
        Some(d) if d >= 2 && d % 2 == 0 => d,
        Some(d) => return precondition(format!("degree {d} is not even")),
        None => return precondition("graph is not regular"),
    };
    let n = g.n();
    let arcs = euler_orientation(g);
    // out-copy u -> in-copy v for every arc u -> v
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &arcs {
        out_arcs[u].push(v);
    }
    let mut factors = Vec::with_capacity(d / 2);
    for _ in 0..d / 2 {
        let succ = bipartite_perfect_matching(&out_arcs, n).ok_or_else(|| {
            Error::Invariant("regular bipartite split graph without perfect matching".into())
        })?;
        for u in 0..n {
            out_arcs[u].retain(|&v| v != succ[u]);
        }
        let edges: Vec<usize> = (0..n)
            .map(|u| g.edge_id(u, succ[u]).expect("arc is an edge"))
            .collect();
        factors.push(OrientedTwoFactor::from_edges(g, &edges)?);
    }
    Ok(factors)
}

fn euler_orientation(g: &Graph) -> Vec<(usize, usize)> {
    let mut used = vec![false; g.m()];
    let mut next = vec![0usize; g.n()];
    let mut arcs = Vec::with_capacity(g.m());
    for start in 0..g.n() {
        // Hierholzer with an explicit stack of (vertex, edge used to get there)
        let mut stack = vec![(start, usize::MAX)];
        while let Some(&(v, _)) = stack.last() {
            let inc = g.incident(v);
            while next[v] < inc.len() && used[inc[next[v]].1] {
                next[v] += 1;
            }
            if next[v] < inc.len() {
                let (w, e) = inc[next[v]];
                used[e] = true;
                stack.push((w, e));
            } else {
                let (w, e) = stack.pop().expect("non-empty");
                if let Some(&(u, _)) = stack.last() {
                    arcs.push((u, w));
                    debug_assert_eq!(g.edge_id(u, w), Some(e));
                }
            }
        }
    }
    arcs
}

fn bipartite_perfect_matching(out_arcs: &[Vec<usize>], n: usize) -> Option<Vec<usize>> {
    let mut match_in = vec![usize::MAX; n];
    let mut match_out = vec![usize::MAX; n];
    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, out_arcs, &mut match_in, &mut match_out, &mut seen) {
            return None;
        }
    }
    Some(match_out)
}

fn augment(
    u: usize,
    out_arcs: &[Vec<usize>],
    match_in: &mut [usize],
    match_out: &mut [usize],
    seen: &mut [bool],
) -> bool {
    for &v in &out_arcs[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if match_in[v] == usize::MAX || augment(match_in[v], out_arcs, match_in, match_out, seen) {
            match_in[v] = u;
            match_out[u] = v;
            return true;
        }
    }
    false
}

/// Neighbours of `v` joined to it by edges outside F.
pub fn mates(g: &Graph, f: &OrientedTwoFactor, v: usize) -> Vec<usize> {
    g.incident(v)
        .iter()
        .filter(|&&(_, e)| !f.contains_edge(e))
        .map(|&(w, _)| w)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{generate, matching::perfect_matchings};

    #[test]
    fn k4_complement_is_a_four_cycle() {
        let g = generate::complete(4);
        for m in perfect_matchings(&g, 10).matchings {
            let f = complement_two_factor(&g, &m).unwrap();
            assert_eq!(f.cycles().len(), 1);
            assert_eq!(f.cycles()[0].len(), 4);
            assert_eq!(f.cycles()[0][0], 0);
            assert_eq!(f.succ(0), f.cycles()[0][1]);
        }
    }

    #[test]
    fn prism_minus_rungs_is_two_triangles() {
        let g = generate::prism(3);
        let rungs: Vec<usize> = (0..3).map(|i| g.edge_id(i, i + 3).unwrap()).collect();
        let m = Matching::new(&g, rungs).unwrap();
        let f = complement_two_factor(&g, &m).unwrap();
        let lens: Vec<usize> = f.cycles().iter().map(Vec::len).collect();
        assert_eq!(lens, vec![3, 3]);
        assert_eq!(mates(&g, &f, 0), vec![3]);
    }

    #[test]
    fn orientation_rule() {
        let g = generate::cycle(5);
        let f = OrientedTwoFactor::from_edges(&g, &(0..5).collect::<Vec<_>>()).unwrap();
        assert_eq!(f.succ(0), 1);
        assert_eq!(f.pred(0), 4);
        assert_eq!(f.tail(&g, g.edge_id(0, 4).unwrap()), 4);
    }

    #[test]
    fn factor_text_round_trip() {
        let g = generate::petersen();
        let m = perfect_matchings(&g, 1).matchings.remove(0);
        let f = complement_two_factor(&g, &m).unwrap();
        assert_eq!(OrientedTwoFactor::parse(&g, &f.to_text()).unwrap(), f);
    }

    #[test]
    fn even_factorization_of_k5() {
        let g = generate::complete(5);
        let fs = two_factorize_even(&g).unwrap();
        assert_eq!(fs.len(), 2);
        let mut count = vec![0; g.m()];
        for f in &fs {
            for e in f.edges() {
                count[e] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
        assert!(two_factorize_even(&generate::petersen()).is_err());
    }

    #[test]
    fn mates_by_degree() {
        let g = generate::circulant(9, &[1, 2]).unwrap();
        let fs = two_factorize_even(&g).unwrap();
        assert_eq!(mates(&g, &fs[0], 0).len(), 2);
        let c = generate::cycle(6);
        let f = &two_factorize_even(&c).unwrap()[0];
        assert!(mates(&c, f, 2).is_empty());
    }
}
