//! Simple undirected graphs and the geometry of their total graphs.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..n`.
///
/// Edges are stored canonically (`u < v`) and sorted, so an edge id is its
/// position in that order.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    girth: OnceLock<Option<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u},{v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({},{})",
                w[0].0, w[0].1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(u, v)) in list.iter().enumerate() {
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
            girth: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// `(neighbour, edge id)` pairs sorted by neighbour.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Common degree when the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == d).then_some(d)
    }

    pub fn is_cubic(&self) -> bool {
        self.n > 0 && self.regular_degree() == Some(3)
    }

    /// Degree deficiency `sum(3 - d(v))` of a subcubic graph.
    pub fn deficiency(&self) -> usize {
        self.adj.iter().map(|a| 3usize.saturating_sub(a.len())).sum()
    }

    /// Shortest cycle length, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        *self.girth.get_or_init(|| self.compute_girth())
    }

    fn compute_girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            // shortest u-v path avoiding the edge itself
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[u] = 0;
            queue.clear();
            queue.push_back(u);
            let limit = best.map_or(usize::MAX, |b| b - 1);
            'bfs: while let Some(x) = queue.pop_front() {
                if dist[x] + 1 >= limit {
                    break;
                }
                for &(y, eid) in &self.adj[x] {
                    if eid == id || dist[y] != usize::MAX {
                        continue;
                    }
                    dist[y] = dist[x] + 1;
                    if y == v {
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
            if dist[v] != usize::MAX {
                let len = dist[v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let dist = self.bfs(0);
        dist.iter().all(|&d| d != usize::MAX)
    }

    /// Vertex distances from `s` (`usize::MAX` when unreachable).
    pub fn bfs(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Ids of all bridges, found by low-link DFS.
    pub fn bridges(&self) -> Vec<usize> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut out = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent edge, next adjacency index)
            let mut stack = vec![(root, usize::MAX, 0usize)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(top) = stack.last_mut() {
                let (x, pe, i) = *top;
                if i < self.adj[x].len() {
                    top.2 += 1;
                    let (y, eid) = self.adj[x][i];
                    if eid == pe {
                        continue;
                    }
                    if disc[y] == usize::MAX {
                        disc[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        stack.push((y, eid, 0));
                    } else {
                        low[x] = low[x].min(disc[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[x]);
                        if low[x] > disc[p] {
                            out.push(pe);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_bridgeless(&self) -> bool {
        self.bridges().is_empty()
    }

    /// Parse the line-based `p`/`e`/`c` format with 1-indexed vertices.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums: Vec<usize> = parts
                .map(|t| t.parse::<usize>().map_err(|_| err(format!("bad number `{t}`"))))
                .collect::<Result<_>>()?;
            match (tag, nums.as_slice()) {
                ("p", &[n, m]) => {
                    if header.is_some() {
                        return Err(err("second header line".into()));
                    }
                    header = Some((n, m));
                }
                ("e", &[u, v]) => {
                    let (n, _) = header.ok_or_else(|| err("edge before header".into()))?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(err(format!("vertex id out of range in `{line}`")));
                    }
                    if u == v {
                        return Err(err(format!("loop at vertex {u}")));
                    }
                    let key = (u.min(v), u.max(v));
                    if !seen.insert(key) {
                        return Err(err(format!("duplicate edge {u} {v}")));
                    }
                    edges.push((u - 1, v - 1));
                }
                _ => return Err(err(format!("malformed line `{line}`"))),
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p {} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            s.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        s
    }

    // ─── total graph ───

    /// Number of total elements, `n + m`.
    pub fn total_len(&self) -> usize {
        self.n + self.m()
    }

    /// Dense index of a total element: vertices first, then edges by id.
    pub fn element_index(&self, x: &TotalElement) -> Result<usize> {
        match *x {
            TotalElement::Vertex(v) if v < self.n => Ok(v),
            TotalElement::Edge(u, v) => self
                .edge_id(u, v)
                .map(|id| self.n + id)
                .ok_or_else(|| Error::Precondition(format!("{x} is not an edge of the graph"))),
            _ => Err(Error::Precondition(format!("{x} is not a vertex of the graph"))),
        }
    }

    pub fn element_at(&self, idx: usize) -> TotalElement {
        if idx < self.n {
            TotalElement::Vertex(idx)
        } else {
            let (u, v) = self.edges[idx - self.n];
            TotalElement::Edge(u, v)
        }
    }

    /// Neighbours of a dense element index in T(G).
    pub fn total_neighbours(&self, idx: usize) -> Vec<usize> {
        let n = self.n;
        if idx < n {
            let mut out: Vec<usize> = self.adj[idx].iter().map(|&(w, _)| w).collect();
            out.extend(self.adj[idx].iter().map(|&(_, e)| n + e));
            out
        } else {
            let id = idx - n;
            let (u, v) = self.edges[id];
            let mut out = vec![u, v];
            for x in [u, v] {
                out.extend(
                    self.adj[x]
                        .iter()
                        .filter(|&&(_, e)| e != id)
                        .map(|&(_, e)| n + e),
                );
            }
            out
        }
    }

    /// Adjacency lists of T(G) in dense indexing.
    pub fn total_graph(&self) -> Vec<Vec<usize>> {
        (0..self.total_len())
            .map(|i| {
                let mut a = self.total_neighbours(i);
                a.sort_unstable();
                a
            })
            .collect()
    }

    /// Multi-source BFS distances in T(G) from dense indices.
    pub fn total_bfs(&self, sources: &[usize], max_depth: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.total_len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            if dist[x] >= max_depth {
                continue;
            }
            for y in self.total_neighbours(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Distance between two elements in T(G); `None` if disconnected.
    pub fn total_distance(&self, x: &TotalElement, y: &TotalElement) -> Result<Option<usize>> {
        let a = self.element_index(x)?;
        let b = self.element_index(y)?;
        let d = self.total_bfs(&[a], usize::MAX)[b];
        Ok((d != usize::MAX).then_some(d))
    }

    /// `N_i(B)`: vertices within T(G)-distance `i` of an edge of `B`, plus
    /// every edge with both ends among them. Returned as sorted dense indices.
    pub fn neighbourhood(&self, boundary: &[usize], i: usize) -> Vec<usize> {
        let sources: Vec<usize> = boundary.iter().map(|&e| self.n + e).collect();
        let dist = self.total_bfs(&sources, i);
        let inside: Vec<bool> = (0..self.n).map(|v| dist[v] <= i).collect();
        let mut out: Vec<usize> = (0..self.n).filter(|&v| inside[v]).collect();
        out.extend(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| inside[u] && inside[v])
                .map(|(id, _)| self.n + id),
        );
        out
    }
}

/// A vertex or an edge of the host graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TotalElement {
    Vertex(usize),
    /// Endpoints with the smaller id first.
    Edge(usize, usize),
}

impl TotalElement {
    pub fn edge(u: usize, v: usize) -> TotalElement {
        TotalElement::Edge(u.min(v), u.max(v))
    }
}

impl fmt::Display for TotalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalElement::Vertex(v) => write!(f, "v{}", v + 1),
            TotalElement::Edge(u, v) => write!(f, "e{}-{}", u + 1, v + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn parse_complete_graph() {
        let text = "p 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
        let g = Graph::parse(text).unwrap();
        assert_eq!((g.n(), g.m()), (4, 6));
        assert_eq!(g.regular_degree(), Some(3));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(Graph::parse("p 2 1\ne 1 1\n"), Err(Error::Parse { .. })));
        assert!(Graph::parse("p 3 2\ne 1 2\ne 2 1\n").is_err());
        assert!(Graph::parse("p 3 1\ne 1 4\n").is_err());
        assert!(Graph::parse("p 3 1\nx 1 2\n").is_err());
        assert!(Graph::parse("c only a comment\n").is_err());
        assert!(Graph::parse("p 3 2\ne 1 2\n").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let g = Graph::parse("c triangle\np 3 3\ne 1 2\nc mid\ne 2 3\ne 1 3\n").unwrap();
        assert_eq!(g.girth(), Some(3));
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(generate::complete(4).girth(), Some(3));
        assert_eq!(generate::petersen().girth(), Some(5));
        assert_eq!(generate::path(5).girth(), None);
        assert_eq!(generate::cycle(9).girth(), Some(9));
        assert_eq!(generate::complete_bipartite(3, 3).girth(), Some(4));
    }

    #[test]
    fn bridges_found() {
        assert_eq!(generate::path(4).bridges(), vec![0, 1, 2]);
        assert!(generate::petersen().is_bridgeless());
        // two triangles joined by an edge
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        assert_eq!(g.bridges(), vec![g.edge_id(2, 3).unwrap()]);
    }

    #[test]
    fn total_distances() {
        let g = generate::path(4);
        let ab = TotalElement::edge(0, 1);
        let cd = TotalElement::edge(2, 3);
        assert_eq!(g.total_distance(&ab, &TotalElement::Vertex(0)).unwrap(), Some(1));
        assert_eq!(g.total_distance(&ab, &ab).unwrap(), Some(0));
        assert_eq!(g.total_distance(&ab, &cd).unwrap(), Some(2));
        assert!(g.total_distance(&TotalElement::edge(0, 2), &ab).is_err());
    }

    #[test]
    fn small_neighbourhoods() {
        let g = generate::cycle(8);
        let e = g.edge_id(0, 1).unwrap();
        assert!(g.neighbourhood(&[e], 0).is_empty());
        let n1 = g.neighbourhood(&[e], 1);
        assert_eq!(n1, vec![0, 1, g.n() + e]);
    }
}
