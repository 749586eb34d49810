//! Sparse boundary sets: path partitions, ternary sequences, strong
//! colourings and the decomposition of E(F) into `3l` boundary sets.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::factor::OrientedTwoFactor;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SparseParams {
    pub ell: usize,
    pub strict: bool,
}

impl SparseParams {
    pub fn strict_minimum(q: &ConstraintGraph) -> usize {
        83 + 3 * q.max_degree()
    }

    pub fn validate(&self, q: &ConstraintGraph) -> Result<()> {
        if self.ell < 2 {
            return precondition("segment length must be at least 2");
        }
        let min = Self::strict_minimum(q);
        if self.strict && self.ell < min {
            return precondition(format!(
                "strict mode needs segment length >= {min}, got {}",
                self.ell
            ));
        }
        Ok(())
    }
}

/// Pairs of F-edges (by edge id) that must not share a boundary set.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintGraph {
    pub pairs: Vec<(usize, usize)>,
}

impl ConstraintGraph {
    pub fn empty() -> Self {
        Self::default()
    }

    /// For every vertex pair `(x, y)`, forbid each F-edge at `x` from sharing
    /// a set with each F-edge at `y`.
    pub fn from_vertex_pairs(f: &OrientedTwoFactor, pairs: &[(usize, usize)]) -> Self {
        let mut out = Vec::new();
        let at = |v: usize| [f.in_edge(v), f.out_edge(v)];
        for &(x, y) in pairs {
            for a in at(x) {
                for b in at(y) {
                    if a != b {
                        out.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        ConstraintGraph { pairs: out }
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = std::collections::HashMap::new();
        for &(a, b) in &self.pairs {
            *deg.entry(a).or_insert(0usize) += 1;
            *deg.entry(b).or_insert(0usize) += 1;
        }
        deg.values().copied().max().unwrap_or(0)
    }
}

/// Paths of one cycle, each a list of F-edge ids in orientation order.
#[derive(Debug, Clone, Serialize)]
pub struct CyclePaths {
    pub cycle: usize,
    pub paths: Vec<Vec<usize>>,
}

/// Split every cycle into `ceil(|C|/l)` paths, all of length `l` except
/// possibly the first one.
pub fn path_partition(f: &OrientedTwoFactor, ell: usize) -> Result<Vec<CyclePaths>> {
    if ell < 1 {
        return precondition("segment length must be positive");
    }
    let mut out = Vec::new();
    for (i, cyc) in f.cycles().iter().enumerate() {
        let len = cyc.len();
        if len < ell + 1 {
            return precondition(format!(
                "cycle {i} has length {len}, shorter than segment length + 1"
            ));
        }
        out.push(split_cycle(f, i, ell));
    }
    Ok(out)
}

fn split_cycle(f: &OrientedTwoFactor, cycle: usize, ell: usize) -> CyclePaths {
    let edges: Vec<usize> = f.cycles()[cycle].iter().map(|&v| f.out_edge(v)).collect();
    let m = edges.len().div_ceil(ell);
    let first = edges.len() - (m - 1) * ell;
    let mut paths = vec![edges[..first].to_vec()];
    paths.extend(edges[first..].chunks(ell).map(<[usize]>::to_vec));
    CyclePaths { cycle, paths }
}

/// Classes for the strong colouring: every full-length path is a class and
/// the short first paths are concatenated into chunks of size `l`.
pub fn colouring_classes(parts: &[CyclePaths], ell: usize) -> Vec<Vec<usize>> {
    let mut classes = Vec::new();
    let mut leftovers = Vec::new();
    for cp in parts {
        for (j, p) in cp.paths.iter().enumerate() {
            if j == 0 && p.len() < ell {
                leftovers.extend_from_slice(p);
            } else {
                classes.push(p.clone());
            }
        }
    }
    classes.extend(leftovers.chunks(ell).map(<[usize]>::to_vec));
    classes
}

/// Symbols over {0,1,2} of length `m`, starting `01`, ending `2`.
pub fn ternary_sequence(m: usize) -> Result<Vec<u8>> {
    if m < 6 {
        return precondition(format!("sequence length {m} below 6"));
    }
    let base: &[u8] = match m % 3 {
        0 => &[0, 1, 2, 0, 1, 2],
        1 => &[0, 1, 0, 2, 0, 1, 2],
        _ => &[0, 1, 0, 2, 1, 0, 1, 2],
    };
    let mut seq = base[..base.len() - 1].to_vec();
    for _ in 0..(m - base.len()) / 3 {
        seq.extend_from_slice(&[2, 0, 1]);
    }
    seq.push(2);
    Ok(seq)
}

/// Check the separation rules of a ternary sequence, cyclically.
pub fn ternary_sequence_valid(seq: &[u8]) -> bool {
    let m = seq.len();
    if m < 6 || seq[0] != 0 || seq[1] != 1 || seq[m - 1] != 2 {
        return false;
    }
    for sym in 0..3u8 {
        let pos: Vec<usize> = (0..m).filter(|&i| seq[i] == sym).collect();
        if pos.is_empty() {
            return false;
        }
        let max_gap = if sym == 0 { 3 } else { 4 };
        for (i, &a) in pos.iter().enumerate() {
            let b = if i + 1 < pos.len() { pos[i + 1] } else { pos[0] + m };
            let gap = b - a;
            if !(2..=max_gap).contains(&gap) {
                return false;
            }
        }
    }
    true
}

/// Proper colouring of `adj` with `colours` colours using each colour at
/// most once per class.
pub fn is_strong_colouring(
    adj: &[Vec<usize>],
    classes: &[Vec<usize>],
    colours: usize,
    colouring: &[usize],
) -> bool {
    if colouring.len() != adj.len() || colouring.iter().any(|&c| c >= colours) {
        return false;
    }
    let proper = adj
        .iter()
        .enumerate()
        .all(|(x, nb)| nb.iter().all(|&y| colouring[x] != colouring[y]));
    let injective = classes.iter().all(|cl| {
        let set: HashSet<usize> = cl.iter().map(|&x| colouring[x]).collect();
        set.len() == cl.len()
    });
    let covered = {
        let mut seen = vec![false; adj.len()];
        classes.iter().flatten().for_each(|&x| seen[x] = true);
        seen.iter().all(|&s| s)
    };
    proper && injective && covered
}

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub restarts: usize,
    pub steps_per_element: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 20,
            steps_per_element: 200,
        }
    }
}

/// Strong colouring of elements `0..adj.len()` by randomized local search:
/// each class starts with a random injection of colours, then conflicting
/// elements swap colours inside their class. Instances with at most 20
/// elements are solved by exhaustive backtracking.
pub fn strong_colour(
    adj: &[Vec<usize>],
    classes: &[Vec<usize>],
    colours: usize,
    seed: u64,
    budget: SearchBudget,
) -> Result<Vec<usize>> {
    let n = adj.len();
    if classes.iter().any(|c| c.len() > colours) {
        return precondition("a class is larger than the number of colours");
    }
    let mut class_of = vec![usize::MAX; n];
    for (i, cl) in classes.iter().enumerate() {
        for &x in cl {
            if x >= n || class_of[x] != usize::MAX {
                return precondition("classes must partition the elements");
            }
            class_of[x] = i;
        }
    }
    if class_of.contains(&usize::MAX) {
        return precondition("classes must partition the elements");
    }
    if n <= 20 {
        let mut col = vec![usize::MAX; n];
        return if backtrack(0, adj, &class_of, classes, colours, &mut col) {
            Ok(col)
        } else {
            Err(Error::Budget("no strong colouring exists".into()))
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let palette: Vec<usize> = (0..colours).collect();
    for _ in 0..budget.restarts.max(1) {
        let mut col = vec![0; n];
        for cl in classes {
            let mut p = palette.clone();
            p.shuffle(&mut rng);
            for (&x, &c) in cl.iter().zip(&p) {
                col[x] = c;
            }
        }
        if local_search(adj, classes, &class_of, colours, &mut col, budget, &mut rng) {
            debug_assert!(is_strong_colouring(adj, classes, colours, &col));
            return Ok(col);
        }
    }
    Err(Error::Budget(format!(
        "strong colouring with {colours} colours not found after {} restarts",
        budget.restarts
    )))
}

fn clashes(adj: &[Vec<usize>], col: &[usize], x: usize, c: usize) -> usize {
    adj[x].iter().filter(|&&y| col[y] == c).count()
}

fn local_search(
    adj: &[Vec<usize>],
    classes: &[Vec<usize>],
    class_of: &[usize],
    colours: usize,
    col: &mut [usize],
    budget: SearchBudget,
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = adj.len();
    for _ in 0..budget.steps_per_element * n.max(1) {
        let bad: Vec<usize> = (0..n).filter(|&x| clashes(adj, col, x, col[x]) > 0).collect();
        let Some(&x) = bad.choose(rng) else {
            return true;
        };
        let cl = &classes[class_of[x]];
        let cx = col[x];
        // candidate moves: swap with a class mate, or take an unused colour
        let mut moves: Vec<(i64, usize, Option<usize>)> = Vec::new();
        let used: HashSet<usize> = cl.iter().map(|&y| col[y]).collect();
        let before_x = clashes(adj, col, x, cx) as i64;
        for c in (0..colours).filter(|c| !used.contains(c)) {
            moves.push((clashes(adj, col, x, c) as i64 - before_x, c, None));
        }
        for &y in cl.iter().filter(|&&y| y != x) {
            let cy = col[y];
            let adjacent = adj[x].contains(&y);
            let after_x = clashes(adj, col, x, cy) as i64 - adjacent as i64;
            let after_y = clashes(adj, col, y, cx) as i64 - adjacent as i64;
            let before_y = clashes(adj, col, y, cy) as i64;
            moves.push((after_x + after_y - before_x - before_y, cy, Some(y)));
        }
        if moves.is_empty() {
            return false;
        }
        let pick = if rng.gen_bool(0.1) {
            *moves.choose(rng).expect("non-empty")
        } else {
            let best = moves.iter().map(|m| m.0).min().expect("non-empty");
            let ties: Vec<_> = moves.iter().filter(|m| m.0 == best).copied().collect();
            *ties.choose(rng).expect("non-empty")
        };
        let (_, c, partner) = pick;
        if let Some(y) = partner {
            col[y] = cx;
        }
        col[x] = c;
    }
    false
}

fn backtrack(
    x: usize,
    adj: &[Vec<usize>],
    class_of: &[usize],
    classes: &[Vec<usize>],
    colours: usize,
    col: &mut [usize],
) -> bool {
    if x == adj.len() {
        return true;
    }
    for c in 0..colours {
        let ok_adj = adj[x].iter().all(|&y| col[y] != c);
        let ok_class = classes[class_of[x]].iter().all(|&y| col[y] != c);
        if ok_adj && ok_class {
            col[x] = c;
            if backtrack(x + 1, adj, class_of, classes, colours, col) {
                return true;
            }
            col[x] = usize::MAX;
        }
    }
    false
}

/// Per-clause verdict on a candidate boundary set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseReport {
    pub in_factor: bool,
    pub four_distant: bool,
    /// Two boundary edges at total-graph distance below 4.
    pub distance_witness: Option<(usize, usize)>,
    pub min_component: usize,
    pub max_component: usize,
    pub lengths_ok: bool,
    /// Edges of a component of F - B whose length is out of range, or of a
    /// whole cycle left without boundary edges.
    pub length_witness: Option<Vec<usize>>,
    pub q_independent: bool,
    pub q_witness: Option<(usize, usize)>,
    pub two_per_cycle: bool,
    pub cycle_witness: Option<usize>,
    pub passed: bool,
}

/// Check every defining clause of an `(F,l)`-sparse set.
pub fn verify_sparse(
    g: &Graph,
    f: &OrientedTwoFactor,
    boundary: &[usize],
    ell: usize,
    q: &ConstraintGraph,
) -> SparseReport {
    let in_b: HashSet<usize> = boundary.iter().copied().collect();
    let in_factor = boundary.iter().all(|&e| e < g.m() && f.contains_edge(e));

    let mut distance_witness = None;
    if in_factor {
        'outer: for &e in boundary {
            let dist = g.total_bfs(&[g.n() + e], 3);
            for &other in boundary {
                if other != e && dist[g.n() + other] <= 3 {
                    distance_witness = Some((e.min(other), e.max(other)));
                    break 'outer;
                }
            }
        }
    }

    let mut min_component = usize::MAX;
    let mut max_component = 0;
    let mut length_witness = None;
    let mut cycle_witness = None;
    for (ci, cyc) in f.cycles().iter().enumerate() {
        let edges: Vec<usize> = cyc.iter().map(|&v| f.out_edge(v)).collect();
        let marks: Vec<usize> = (0..edges.len()).filter(|&j| in_b.contains(&edges[j])).collect();
        if marks.len() < 2 && cycle_witness.is_none() {
            cycle_witness = Some(ci);
        }
        if marks.is_empty() {
            if length_witness.is_none() {
                length_witness = Some(edges.clone());
            }
            max_component = max_component.max(edges.len());
            continue;
        }
        for (i, &a) in marks.iter().enumerate() {
            let b = if i + 1 < marks.len() { marks[i + 1] } else { marks[0] + edges.len() };
            let comp: Vec<usize> = (a + 1..b).map(|j| edges[j % edges.len()]).collect();
            let len = comp.len();
            min_component = min_component.min(len);
            max_component = max_component.max(len);
            if (len < ell || len > 7 * ell) && length_witness.is_none() {
                length_witness = Some(comp);
            }
        }
    }
    if min_component == usize::MAX {
        min_component = 0;
    }
    let q_witness = q
        .pairs
        .iter()
        .find(|(a, b)| in_b.contains(a) && in_b.contains(b))
        .copied();
    let four_distant = in_factor && distance_witness.is_none();
    let lengths_ok = length_witness.is_none();
    let q_independent = q_witness.is_none();
    let two_per_cycle = cycle_witness.is_none();
    SparseReport {
        in_factor,
        four_distant,
        distance_witness,
        min_component,
        max_component,
        lengths_ok,
        length_witness,
        q_independent,
        q_witness,
        two_per_cycle,
        cycle_witness,
        passed: in_factor && four_distant && lengths_ok && q_independent && two_per_cycle,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySet {
    /// Colour class index, `0..l`.
    pub r: usize,
    /// Sequence symbol, `0..3`.
    pub t: usize,
    pub edges: Vec<usize>,
    pub report: SparseReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub params: SparseParams,
    pub sets: Vec<BoundarySet>,
    /// False when some cycle has fewer edges than there are sets, so the
    /// sets cover E(F) with repetitions instead of partitioning it.
    pub partition: bool,
    /// Cycles too short for the sequence construction.
    pub short_cycles: Vec<usize>,
    pub all_verified: bool,
}

/// Auxiliary graph on the listed F-edges: total-graph distance at most 3,
/// or a constraint pair.
pub fn auxiliary_graph(g: &Graph, edges: &[usize], q: &ConstraintGraph) -> Vec<Vec<usize>> {
    let index: std::collections::HashMap<usize, usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
    for (i, &e) in edges.iter().enumerate() {
        let dist = g.total_bfs(&[g.n() + e], 3);
        for (j, &other) in edges.iter().enumerate() {
            if i != j && dist[g.n() + other] <= 3 {
                adj[i].push(j);
            }
        }
    }
    for &(a, b) in &q.pairs {
        if let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    adj
}

/// Split E(F) into `3l` boundary sets `B_{r,t}`.
///
/// Cycles with at least `5l + 1` edges go through the strong colouring and
/// the ternary sequences. In relaxed mode shorter cycles are allowed: their
/// edges are dealt round-robin to the sets, one edge per set when the cycle
/// has fewer edges than sets.
pub fn decompose(
    g: &Graph,
    f: &OrientedTwoFactor,
    params: SparseParams,
    q: &ConstraintGraph,
    seed: u64,
) -> Result<Decomposition> {
    params.validate(q)?;
    let ell = params.ell;
    let set_count = 3 * ell;
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); set_count];
    let mut long = Vec::new();
    let mut short_cycles = Vec::new();
    let mut partition = true;
    for (i, cyc) in f.cycles().iter().enumerate() {
        if cyc.len().div_ceil(ell) >= 6 {
            long.push(i);
            continue;
        }
        if params.strict {
            return precondition(format!(
                "cycle {i} of length {} is below the sequence minimum of {}",
                cyc.len(),
                5 * ell + 1
            ));
        }
        short_cycles.push(i);
        let edges: Vec<usize> = cyc.iter().map(|&v| f.out_edge(v)).collect();
        let len = edges.len();
        if len >= set_count {
            for (j, &e) in edges.iter().enumerate() {
                let mut s = j % set_count;
                if j == len - 1 && s == 0 {
                    s = 1;
                }
                sets[s].push(e);
            }
        } else {
            partition = false;
            for (s, set) in sets.iter_mut().enumerate() {
                set.push(edges[s % len]);
            }
        }
    }
    if !long.is_empty() && ell < 4 {
        // four consecutive F-edges are pairwise within distance 3
        return Err(Error::Budget(format!(
            "cycles with at least {} edges need at least 4 colours, got {ell}",
            5 * ell + 1
        )));
    }
    if !long.is_empty() {
        let parts: Vec<CyclePaths> = long.iter().map(|&ci| split_cycle(f, ci, ell)).collect();
        let elems: Vec<usize> = parts.iter().flat_map(|cp| cp.paths.concat()).collect();
        let local: std::collections::HashMap<usize, usize> =
            elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let classes: Vec<Vec<usize>> = colouring_classes(&parts, ell)
            .into_iter()
            .map(|cl| cl.iter().map(|e| local[e]).collect())
            .collect();
        let adj = auxiliary_graph(g, &elems, q);
        let colouring = strong_colour(&adj, &classes, ell, seed, SearchBudget::default())?;
        if !is_strong_colouring(&adj, &classes, ell, &colouring) {
            return Err(Error::Invariant("strong colouring failed its check".into()));
        }
        for cp in &parts {
            let seq = ternary_sequence(cp.paths.len())?;
            for (path, &t) in cp.paths.iter().zip(&seq) {
                for e in path {
                    let r = colouring[local[e]];
                    sets[3 * r + t as usize].push(*e);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(set_count);
    for (s, mut edges) in sets.into_iter().enumerate() {
        edges.sort_unstable();
        edges.dedup();
        let report = verify_sparse(g, f, &edges, ell, q);
        out.push(BoundarySet {
            r: s / 3,
            t: s % 3,
            edges,
            report,
        });
    }
    let all_verified = out.iter().all(|b| b.report.passed);
    if params.strict && !all_verified {
        return Err(Error::Invariant(
            "strict decomposition produced a set that fails verification".into(),
        ));
    }
    Ok(Decomposition {
        params,
        sets: out,
        partition,
        short_cycles,
        all_verified,
    })
}

/// Roughly evenly spaced boundary edges: `max(1, |C| / gap)` per cycle,
/// starting `offset` edges after each cycle's anchor.
pub fn spaced_boundary(f: &OrientedTwoFactor, gap: usize, offset: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for cyc in f.cycles() {
        let len = cyc.len();
        let count = (len / gap.max(1)).max(1);
        for i in 0..count {
            let pos = (offset + i * len / count) % len;
            out.push(f.out_edge(cyc[pos]));
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn cycle_factor(len: usize) -> (Graph, OrientedTwoFactor) {
        let g = generate::cycle(len);
        let f = OrientedTwoFactor::from_edges(&g, &(0..len).collect::<Vec<_>>()).unwrap();
        (g, f)
    }

    #[test]
    fn path_partition_sizes() {
        let (_, f) = cycle_factor(12);
        let p = path_partition(&f, 4).unwrap();
        let sizes: Vec<usize> = p[0].paths.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 4, 4]);
        let (_, f) = cycle_factor(13);
        let sizes: Vec<usize> = path_partition(&f, 4).unwrap()[0].paths.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 4, 4, 4]);
        let (_, f) = cycle_factor(4);
        assert!(path_partition(&f, 4).is_err());
    }

    #[test]
    fn leftover_paths_are_merged() {
        let parts = vec![
            CyclePaths { cycle: 0, paths: vec![vec![0], vec![1, 2, 3]] },
            CyclePaths { cycle: 1, paths: vec![vec![4, 5], vec![6, 7, 8]] },
            CyclePaths { cycle: 2, paths: vec![vec![9], vec![10, 11, 12]] },
        ];
        let classes = colouring_classes(&parts, 3);
        let short = classes.iter().filter(|c| c.len() < 3).count();
        assert!(short <= 1);
        assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), 13);
    }

    #[test]
    fn sequences() {
        assert_eq!(ternary_sequence(6).unwrap(), vec![0, 1, 2, 0, 1, 2]);
        assert_eq!(ternary_sequence(7).unwrap(), vec![0, 1, 0, 2, 0, 1, 2]);
        assert_eq!(ternary_sequence(9).unwrap(), vec![0, 1, 2, 0, 1, 2, 0, 1, 2]);
        assert!(ternary_sequence(5).is_err());
        for m in 6..=500 {
            let s = ternary_sequence(m).unwrap();
            assert_eq!(s.len(), m);
            assert!(ternary_sequence_valid(&s), "m = {m}");
        }
    }

    #[test]
    fn strong_colouring_without_constraints() {
        let adj = vec![Vec::new(); 6];
        let classes = vec![vec![0, 1, 2], vec![3, 4, 5]];
        let col = strong_colour(&adj, &classes, 3, 1, SearchBudget::default()).unwrap();
        assert!(is_strong_colouring(&adj, &classes, 3, &col));
    }

    #[test]
    fn strong_colouring_with_disjoint_edges() {
        // edges 0-2 and 1-3 across classes {0,1}, {2,3}
        let adj = vec![vec![2], vec![3], vec![0], vec![1]];
        let classes = vec![vec![0, 1], vec![2, 3]];
        let col = strong_colour(&adj, &classes, 2, 7, SearchBudget::default()).unwrap();
        assert!(is_strong_colouring(&adj, &classes, 2, &col));
        let bad = vec![0, 1, 0, 1];
        assert!(!is_strong_colouring(&adj, &classes, 2, &bad));
    }

    #[test]
    fn verify_spacing() {
        let ell = 5;
        let (g, f) = cycle_factor(6 * ell);
        let q = ConstraintGraph::empty();
        let along = |step: usize| -> Vec<usize> {
            (0..g.n()).step_by(step).map(|v| f.out_edge(v)).collect()
        };
        let every = along(ell + 1);
        assert!(verify_sparse(&g, &f, &every, ell, &q).passed);
        let tight = along(ell);
        let rep = verify_sparse(&g, &f, &tight, ell, &q);
        assert!(!rep.lengths_ok);
        assert_eq!(rep.length_witness.as_ref().unwrap().len(), ell - 1);
        let incident = vec![f.out_edge(0), f.out_edge(1)];
        let rep = verify_sparse(&g, &f, &incident, ell, &q);
        assert!(rep.distance_witness.is_some());
        let single = vec![f.out_edge(0), f.out_edge(4 * ell)];
        let rep = verify_sparse(&g, &f, &single, 2, &q);
        assert!(rep.four_distant);
        assert!(!rep.lengths_ok);
    }

    #[test]
    fn relaxed_short_cycles() {
        let g = generate::petersen();
        let m = crate::matching::perfect_matchings(&g, 1).matchings.remove(0);
        let f = crate::factor::complement_two_factor(&g, &m).unwrap();
        let params = SparseParams { ell: 2, strict: false };
        let d = decompose(&g, &f, params, &ConstraintGraph::empty(), 3).unwrap();
        assert_eq!(d.sets.len(), 6);
        assert!(!d.partition);
        for b in &d.sets {
            for cyc in f.cycles() {
                assert_eq!(cyc.iter().filter(|&&v| b.edges.contains(&f.out_edge(v))).count(), 1);
            }
        }
        assert!(decompose(&g, &f, SparseParams { ell: 2, strict: true }, &ConstraintGraph::empty(), 3).is_err());
    }
}
