//! Randomized construction of full total independent sets from an oriented
//! 2-factor and a set of boundary edges.
//!
//! Phase 1 cuts F at the boundary edges into directed paths, gives every
//! path the level of the boundary edge that starts it, and walks the paths
//! in level order, deciding each edge and vertex from its predecessors and
//! from the mates of the vertex. Phase 2 repairs the local conflicts left at
//! each boundary edge.

use std::fmt;

use num_rational::BigRational;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::factor::OrientedTwoFactor;
use crate::graph::Graph;
use crate::recurrence::{pq_table, RecurrenceTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ConflictType {
    I,
    II,
    IIIa,
    IIIb,
    IIIc,
    IVa,
    IVb,
    IVc,
    /// Left end uncovered and nothing around it to move onto it.
    IVd,
}

impl ConflictType {
    pub const ALL: [ConflictType; 9] = [
        ConflictType::I,
        ConflictType::II,
        ConflictType::IIIa,
        ConflictType::IIIb,
        ConflictType::IIIc,
        ConflictType::IVa,
        ConflictType::IVb,
        ConflictType::IVc,
        ConflictType::IVd,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Repair stage: 0 for a vertex of T next to another element of T,
    /// 1 for two edges of T sharing the left end, 2 for an uncovered left end.
    pub fn stage(self) -> usize {
        match self {
            ConflictType::I | ConflictType::II => 0,
            ConflictType::IIIa | ConflictType::IIIb | ConflictType::IIIc => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConflictType::I => "I",
            ConflictType::II => "II",
            ConflictType::IIIa => "IIIa",
            ConflictType::IIIb => "IIIb",
            ConflictType::IIIc => "IIIc",
            ConflictType::IVa => "IVa",
            ConflictType::IVb => "IVb",
            ConflictType::IVc => "IVc",
            ConflictType::IVd => "IVd",
        }
    }
}

impl fmt::Display for ConflictType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Position of an element inside `N_2` of a boundary edge `u'u0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[repr(u8)]
pub enum Role {
    /// Predecessor of the left end.
    LeftPrev = 1,
    /// F-edge into the left end.
    LeftEdge = 2,
    LeftEnd = 3,
    Boundary = 4,
    RightEnd = 5,
    /// F-edge out of the right end.
    RightEdge = 6,
    /// Successor of the right end.
    RightNext = 7,
    LeftMate = 8,
    LeftMateEdge = 9,
    RightMateEdge = 10,
    RightMate = 11,
}

impl Role {
    pub fn label(self) -> u8 {
        self as u8
    }
}

/// Elements around one boundary edge, as dense indices.
#[derive(Debug, Clone)]
struct Region {
    left_prev: usize,
    left_edge: usize,
    left: usize,
    boundary: usize,
    right: usize,
    right_edge: usize,
    right_next: usize,
    /// `(mate, matching edge)` pairs of the left end, by mate id.
    left_mates: Vec<(usize, usize)>,
    right_mates: Vec<(usize, usize)>,
}

impl Region {
    fn roles(&self) -> Vec<(usize, Role)> {
        let mut out = vec![
            (self.left_prev, Role::LeftPrev),
            (self.left_edge, Role::LeftEdge),
            (self.left, Role::LeftEnd),
            (self.boundary, Role::Boundary),
            (self.right, Role::RightEnd),
            (self.right_edge, Role::RightEdge),
            (self.right_next, Role::RightNext),
        ];
        for &(m, e) in &self.left_mates {
            out.push((m, Role::LeftMate));
            out.push((e, Role::LeftMateEdge));
        }
        for &(m, e) in &self.right_mates {
            out.push((m, Role::RightMate));
            out.push((e, Role::RightMateEdge));
        }
        out
    }
}

/// One path of F - B together with the boundary edge that starts it:
/// `e0, u0, e1, u1, ..., eL, uL` (dense indices).
#[derive(Debug, Clone)]
struct PathInfo {
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

/// Levels on boundary edges and the processing order they induce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelAssignment {
    /// Level in `1..=k` per boundary edge, aligned with the boundary list.
    pub boundary_levels: Vec<usize>,
    /// Boundary indices sorted by `(level, edge id)`.
    pub order: Vec<usize>,
}

/// Which virtual element the seed choice put in front of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Seed {
    Edge,
    Vertex,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictRecord {
    /// Edge id of the boundary edge.
    pub boundary: usize,
    pub kind: ConflictType,
    pub removed: Vec<usize>,
    pub added: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub levels: LevelAssignment,
    pub seeds: Vec<Seed>,
    /// Membership after Phase 1, indexed densely (vertices then edges).
    pub phase1: Vec<bool>,
    pub set: Vec<bool>,
    pub conflicts: Vec<ConflictRecord>,
}

/// Mechanical verdict on a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Violations {
    pub not_independent: usize,
    pub not_full: usize,
    pub not_exactly_one: usize,
    pub outside_region: usize,
    pub phase1_path_conflicts: usize,
    /// Boundary edges repaired more than once.
    pub repeated_conflicts: usize,
}

impl Violations {
    pub fn total(&self) -> usize {
        self.not_independent
            + self.not_full
            + self.not_exactly_one
            + self.outside_region
            + self.phase1_path_conflicts
            + self.repeated_conflicts
    }

    pub fn add(&mut self, o: &Violations) {
        self.not_independent += o.not_independent;
        self.not_full += o.not_full;
        self.not_exactly_one += o.not_exactly_one;
        self.outside_region += o.outside_region;
        self.phase1_path_conflicts += o.phase1_path_conflicts;
        self.repeated_conflicts += o.repeated_conflicts;
    }
}

/// Precomputed geometry for sampling on a fixed `(G, F, B)`.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    g: &'a Graph,
    f: &'a OrientedTwoFactor,
    boundary: Vec<usize>,
    table: RecurrenceTable,
    p: Vec<f64>,
    q: Vec<f64>,
    xi: f64,
    paths: Vec<PathInfo>,
    /// Boundary index of the path holding each vertex.
    vertex_path: Vec<usize>,
    /// Boundary index of the path holding each F-edge (`usize::MAX` off F).
    edge_path: Vec<usize>,
    mates: Vec<Vec<(usize, usize)>>,
    regions: Vec<Region>,
    in_region: Vec<bool>,
    /// Role labels per element, one entry per region containing it.
    roles: Vec<Vec<(usize, Role)>>,
}

impl<'a> Sampler<'a> {
    /// `boundary` must be a set of F-edges meeting every cycle, with no two
    /// of them consecutive on F.
    pub fn new(
        g: &'a Graph,
        f: &'a OrientedTwoFactor,
        boundary: &[usize],
        k: usize,
        xi: &BigRational,
    ) -> Result<Sampler<'a>> {
        let delta = g.max_degree().max(3);
        let table = pq_table(k, xi, delta)?;
        let n = g.n();
        let mut boundary = boundary.to_vec();
        boundary.sort_unstable();
        boundary.dedup();
        let mut is_boundary = vec![false; g.m()];
        for &e in &boundary {
            if e >= g.m() || !f.contains_edge(e) {
                return precondition(format!("boundary edge {e} is not an edge of F"));
            }
            is_boundary[e] = true;
        }
        for (ci, cyc) in f.cycles().iter().enumerate() {
            if !cyc.iter().any(|&v| is_boundary[f.out_edge(v)]) {
                return precondition(format!("cycle {ci} of F has no boundary edge"));
            }
        }
        for &e in &boundary {
            let head = f.succ(f.tail(g, e));
            if is_boundary[f.out_edge(head)] {
                return precondition(format!(
                    "boundary edges {e} and {} are consecutive on F",
                    f.out_edge(head)
                ));
            }
        }
        let mut vertex_path = vec![usize::MAX; n];
        let mut edge_path = vec![usize::MAX; g.m()];
        let mut paths = Vec::with_capacity(boundary.len());
        for (bi, &e) in boundary.iter().enumerate() {
            let mut edges = vec![n + e];
            let mut vertices = Vec::new();
            edge_path[e] = bi;
            let mut v = f.succ(f.tail(g, e));
            loop {
                vertices.push(v);
                vertex_path[v] = bi;
                let out = f.out_edge(v);
                if is_boundary[out] {
                    break;
                }
                edges.push(n + out);
                edge_path[out] = bi;
                v = f.succ(v);
            }
            paths.push(PathInfo { edges, vertices });
        }
        let mates: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|v| {
                g.incident(v)
                    .iter()
                    .filter(|&&(_, e)| !f.contains_edge(e))
                    .map(|&(w, e)| (w, n + e))
                    .collect()
            })
            .collect();
        let mut regions = Vec::with_capacity(boundary.len());
        for &e in &boundary {
            let left = f.tail(g, e);
            let right = f.succ(left);
            regions.push(Region {
                left_prev: f.pred(left),
                left_edge: n + f.in_edge(left),
                left,
                boundary: n + e,
                right,
                right_edge: n + f.out_edge(right),
                right_next: f.succ(right),
                left_mates: mates[left].clone(),
                right_mates: mates[right].clone(),
            });
        }
        let mut roles: Vec<Vec<(usize, Role)>> = vec![Vec::new(); g.total_len()];
        for (bi, r) in regions.iter().enumerate() {
            for (x, role) in r.roles() {
                roles[x].push((bi, role));
            }
        }
        let mut in_region = vec![false; g.total_len()];
        for x in g.neighbourhood(&boundary, 2) {
            in_region[x] = true;
        }
        let p = table.p_f64();
        let q = table.q_f64();
        let xi = table.xi_f64();
        Ok(Sampler {
            g,
            f,
            boundary,
            table,
            p,
            q,
            xi,
            paths,
            vertex_path,
            edge_path,
            mates,
            regions,
            in_region,
            roles,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.g
    }

    pub fn factor(&self) -> &OrientedTwoFactor {
        self.f
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn table(&self) -> &RecurrenceTable {
        &self.table
    }

    pub fn k(&self) -> usize {
        self.table.k
    }

    /// Dense index is inside `N_2(B)`.
    pub fn in_region(&self, x: usize) -> bool {
        self.in_region[x]
    }

    /// Elements that play a role for more than one boundary edge, or two
    /// roles for one. Zero whenever B is 4-distant in a graph of girth >= 5.
    pub fn overlapping_elements(&self) -> usize {
        self.roles.iter().filter(|r| r.len() > 1).count()
    }

    /// Type label `1..=11` of a dense element, `None` outside every region.
    pub fn classify_type(&self, x: usize) -> Result<Option<u8>> {
        match self.roles[x].as_slice() {
            [] => Ok(None),
            [(_, role)] => Ok(Some(role.label())),
            _ => Err(Error::Precondition(format!(
                "{} lies in more than one boundary region",
                self.g.element_at(x)
            ))),
        }
    }

    /// Uniform independent levels on the boundary edges.
    pub fn assign_levels(&self, rng: &mut impl Rng) -> LevelAssignment {
        let k = self.table.k;
        let boundary_levels: Vec<usize> =
            (0..self.boundary.len()).map(|_| rng.gen_range(1..=k)).collect();
        let mut order: Vec<usize> = (0..self.boundary.len()).collect();
        order.sort_by_key(|&bi| (boundary_levels[bi], self.boundary[bi]));
        LevelAssignment {
            boundary_levels,
            order,
        }
    }

    /// Level of a dense element: vertices and F-edges take the level of
    /// their path, edges outside F have none.
    pub fn element_level(&self, levels: &LevelAssignment, x: usize) -> Option<usize> {
        let n = self.g.n();
        let bi = if x < n {
            self.vertex_path[x]
        } else {
            self.edge_path[x - n]
        };
        (bi != usize::MAX).then(|| levels.boundary_levels[bi])
    }

    pub fn phase1(&self, levels: &LevelAssignment, rng: &mut impl Rng) -> (Vec<bool>, Vec<Seed>) {
        let mut set = vec![false; self.g.total_len()];
        let mut seeds = vec![Seed::Neither; self.boundary.len()];
        for &bi in &levels.order {
            let t = levels.boundary_levels[bi];
            let draw: f64 = rng.gen();
            let seed = if draw < self.p[t - 1] {
                Seed::Edge
            } else if draw < self.p[t - 1] + self.q[t - 1] {
                Seed::Vertex
            } else {
                Seed::Neither
            };
            seeds[bi] = seed;
            let mut prev_edge = seed == Seed::Edge;
            let mut prev_vertex = seed == Seed::Vertex;
            let path = &self.paths[bi];
            for (&e, &u) in path.edges.iter().zip(&path.vertices) {
                let edge_in = !prev_edge && !prev_vertex;
                set[e] = edge_in;
                let vertex_in = !prev_vertex
                    && !edge_in
                    && self.mates_allow(levels, &set, u, t)
                    && (self.xi >= 1.0 || rng.gen::<f64>() < self.xi);
                set[u] = vertex_in;
                prev_edge = edge_in;
                prev_vertex = vertex_in;
            }
        }
        (set, seeds)
    }

    fn mates_allow(&self, levels: &LevelAssignment, set: &[bool], u: usize, t: usize) -> bool {
        self.mates[u].iter().all(|&(w, _)| {
            let lw = levels.boundary_levels[self.vertex_path[w]];
            lw > t || (lw < t && !set[w])
        })
    }

    fn covered(&self, set: &[bool], v: usize) -> bool {
        let n = self.g.n();
        set[v] || self.g.incident(v).iter().any(|&(_, e)| set[n + e])
    }

    /// Local snapshot of the current state around boundary index `bi`.
    pub fn junction(&self, set: &[bool], bi: usize) -> Junction {
        let r = &self.regions[bi];
        Junction {
            left_prev: set[r.left_prev],
            left_edge: set[r.left_edge],
            left: set[r.left],
            left_covered: self.covered(set, r.left),
            boundary: set[r.boundary],
            right: set[r.right],
            right_next: set[r.right_next],
            left_mate_in: r.left_mates.iter().any(|&(m, _)| set[m]),
            right_mate_in: r.right_mates.iter().any(|&(m, _)| set[m]),
        }
    }

    /// Conflict type at boundary index `bi` in the current state.
    pub fn detect_conflict(&self, set: &[bool], bi: usize) -> Result<Option<ConflictType>> {
        classify_junction(&self.junction(set, bi)).map_err(|(a, b)| {
            Error::Invariant(format!(
                "conflict types {a} and {b} both hold at boundary edge {}",
                self.boundary[bi]
            ))
        })
    }

    /// Apply the repair for `kind` at boundary index `bi`.
    pub fn resolve_conflict(&self, set: &mut [bool], bi: usize, kind: ConflictType) -> ConflictRecord {
        let r = &self.regions[bi];
        let first_in = |mates: &[(usize, usize)], set: &[bool]| {
            mates.iter().find(|&&(m, _)| set[m]).copied()
        };
        let (removed, added) = match kind {
            ConflictType::I => (vec![r.left, r.right], vec![r.boundary]),
            ConflictType::II => (vec![r.left], vec![]),
            ConflictType::IIIa => (vec![r.boundary, r.right_next], vec![r.right_edge]),
            ConflictType::IIIb => {
                let (m, e) = first_in(&r.right_mates, set).expect("a mate of u0 is in T");
                (vec![r.boundary, m], vec![e])
            }
            ConflictType::IIIc => (vec![r.boundary], vec![r.right]),
            ConflictType::IVa => (vec![r.right], vec![r.boundary]),
            ConflictType::IVb => (vec![r.left_prev], vec![r.left_edge]),
            ConflictType::IVc => {
                let (m, e) = first_in(&r.left_mates, set).expect("a mate of u' is in T");
                (vec![m], vec![e])
            }
            ConflictType::IVd => (vec![], vec![r.left]),
        };
        for &x in &removed {
            set[x] = false;
        }
        for &x in &added {
            set[x] = true;
        }
        ConflictRecord {
            boundary: self.boundary[bi],
            kind,
            removed,
            added,
        }
    }

    /// Resolve conflicts boundary edge by boundary edge in processing order,
    /// reading the current state, once per repair stage.
    pub fn phase2(&self, levels: &LevelAssignment, set: &mut [bool]) -> Result<Vec<ConflictRecord>> {
        let mut records = Vec::new();
        for stage in 0..3 {
            for &bi in &levels.order {
                if let Some(kind) = self.detect_conflict(set, bi)? {
                    if kind.stage() <= stage {
                        records.push(self.resolve_conflict(set, bi, kind));
                    }
                }
            }
        }
        Ok(records)
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<Sample> {
        let levels = self.assign_levels(rng);
        let (phase1, seeds) = self.phase1(&levels, rng);
        let mut set = phase1.clone();
        let conflicts = self.phase2(&levels, &mut set)?;
        Ok(Sample {
            levels,
            seeds,
            phase1,
            set,
            conflicts,
        })
    }

    /// Sample number `trial` of a run seeded with `seed`.
    pub fn sample_trial(&self, seed: u64, trial: u64) -> Result<Sample> {
        self.sample(&mut trial_rng(seed, trial))
    }

    /// Check a sample against every structural guarantee.
    pub fn check(&self, s: &Sample) -> Violations {
        let mut v = check_total_set(self.g, &s.set);
        v.outside_region = s
            .phase1
            .iter()
            .zip(&s.set)
            .enumerate()
            .filter(|(x, (a, b))| a != b && !self.in_region[*x])
            .count();
        v.phase1_path_conflicts = self.phase1_path_conflicts(&s.phase1);
        let mut seen: Vec<usize> = s.conflicts.iter().map(|c| c.boundary).collect();
        seen.sort_unstable();
        v.repeated_conflicts = seen.windows(2).filter(|w| w[0] == w[1]).count();
        v
    }

    /// Adjacent pairs inside one path of F - B that are both in the set.
    pub fn phase1_path_conflicts(&self, set: &[bool]) -> usize {
        let mut count = 0;
        for path in &self.paths {
            let mut seq = Vec::with_capacity(2 * path.edges.len());
            for (&e, &u) in path.edges.iter().zip(&path.vertices) {
                seq.push(e);
                seq.push(u);
            }
            for w in seq.windows(2) {
                count += (set[w[0]] && set[w[1]]) as usize;
            }
            for w in path.vertices.windows(2) {
                count += (set[w[0]] && set[w[1]]) as usize;
            }
        }
        count
    }
}

/// Element classes used for aggregate weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ElementClass {
    Vertex,
    FactorEdge,
    MatchingEdge,
}

impl ElementClass {
    pub const ALL: [ElementClass; 3] = [
        ElementClass::Vertex,
        ElementClass::FactorEdge,
        ElementClass::MatchingEdge,
    ];

    pub fn of(g: &Graph, f: &OrientedTwoFactor, x: usize) -> ElementClass {
        if x < g.n() {
            ElementClass::Vertex
        } else if f.contains_edge(x - g.n()) {
            ElementClass::FactorEdge
        } else {
            ElementClass::MatchingEdge
        }
    }
}

/// Integer tallies over a run of independent samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    /// Samples containing each dense element.
    pub element_hits: Vec<u64>,
    /// Per boundary index, counts per conflict type.
    pub conflict_counts: Vec<[u64; ConflictType::ALL.len()]>,
    /// Per element class, sum over samples of the number of members.
    pub class_sums: [u64; 3],
    /// Per element class, sum over samples of the squared number of members.
    pub class_squares: [u64; 3],
    pub violations: Violations,
    /// Samples with at least one violation.
    pub bad_samples: u64,
}

impl TrialStats {
    fn empty(total_len: usize, boundary_len: usize) -> TrialStats {
        TrialStats {
            trials: 0,
            element_hits: vec![0; total_len],
            conflict_counts: vec![[0; ConflictType::ALL.len()]; boundary_len],
            class_sums: [0; 3],
            class_squares: [0; 3],
            violations: Violations::default(),
            bad_samples: 0,
        }
    }

    fn merge(mut self, other: TrialStats) -> TrialStats {
        self.trials += other.trials;
        for (a, b) in self.element_hits.iter_mut().zip(&other.element_hits) {
            *a += b;
        }
        for (a, b) in self.conflict_counts.iter_mut().zip(&other.conflict_counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for c in 0..3 {
            self.class_sums[c] += other.class_sums[c];
            self.class_squares[c] += other.class_squares[c];
        }
        self.violations.add(&other.violations);
        self.bad_samples += other.bad_samples;
        self
    }

    /// Conflicts of each type summed over all boundary edges.
    pub fn type_totals(&self) -> [u64; ConflictType::ALL.len()] {
        let mut out = [0; ConflictType::ALL.len()];
        for row in &self.conflict_counts {
            for (o, c) in out.iter_mut().zip(row) {
                *o += c;
            }
        }
        out
    }
}

impl Sampler<'_> {
    /// Draw `trials` samples with per-trial streams of `seed` and tally them.
    pub fn run_trials(&self, trials: u64, seed: u64) -> Result<TrialStats> {
        if trials == 0 {
            return precondition("trials must be positive");
        }
        let classes: Vec<usize> = (0..self.g.total_len())
            .map(|x| ElementClass::of(self.g, self.f, x) as usize)
            .collect();
        let index: std::collections::HashMap<usize, usize> =
            self.boundary.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let empty = || TrialStats::empty(self.g.total_len(), self.boundary.len());
        (0..trials)
            .into_par_iter()
            .try_fold(empty, |mut acc, trial| -> Result<TrialStats> {
                let s = self.sample_trial(seed, trial)?;
                let v = self.check(&s);
                acc.trials += 1;
                acc.bad_samples += (v.total() > 0) as u64;
                acc.violations.add(&v);
                let mut per_class = [0u64; 3];
                for (x, _) in s.set.iter().enumerate().filter(|(_, &b)| b) {
                    acc.element_hits[x] += 1;
                    per_class[classes[x]] += 1;
                }
                for c in 0..3 {
                    acc.class_sums[c] += per_class[c];
                    acc.class_squares[c] += per_class[c] * per_class[c];
                }
                for rec in &s.conflicts {
                    acc.conflict_counts[index[&rec.boundary]][rec.kind.index()] += 1;
                }
                Ok(acc)
            })
            .try_reduce(empty, |a, b| Ok(a.merge(b)))
    }
}

/// Membership of the elements around one boundary edge `u'u0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Junction {
    /// `u''`
    pub left_prev: bool,
    /// `e' = u''u'`
    pub left_edge: bool,
    pub left: bool,
    pub left_covered: bool,
    pub boundary: bool,
    pub right: bool,
    /// `u1`
    pub right_next: bool,
    pub left_mate_in: bool,
    pub right_mate_in: bool,
}

/// The conflict type present at a junction. Two types holding at once is
/// returned as an error pair.
pub fn classify_junction(j: &Junction) -> std::result::Result<Option<ConflictType>, (ConflictType, ConflictType)> {
    let both_edges = j.left_edge && j.boundary;
    let open_left = !j.left_covered && !j.right && !j.left_prev;
    let candidates = [
        (ConflictType::I, j.left && j.right),
        (ConflictType::II, j.left && j.boundary),
        (ConflictType::IIIa, both_edges && j.right_next),
        (ConflictType::IIIb, both_edges && j.right_mate_in && !j.right_next),
        (ConflictType::IIIc, both_edges && !j.right_next && !j.right_mate_in),
        (ConflictType::IVa, !j.left_covered && j.right),
        (ConflictType::IVb, !j.left_covered && !j.right && j.left_prev),
        (ConflictType::IVc, open_left && j.left_mate_in),
        (ConflictType::IVd, open_left && !j.left_mate_in),
    ];
    let mut fired = candidates.iter().filter(|c| c.1).map(|c| c.0);
    match (fired.next(), fired.next()) {
        (Some(a), Some(b)) => Err((a, b)),
        (first, _) => Ok(first),
    }
}

/// Independent per-trial generator derived from the master seed.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Independence, fullness and the exactly-one-of-Y property of a dense set.
pub fn check_total_set(g: &Graph, set: &[bool]) -> Violations {
    let n = g.n();
    let mut v = Violations::default();
    for &(a, b) in g.edges() {
        if set[a] && set[b] {
            v.not_independent += 1;
        }
    }
    for x in 0..n {
        let inc = g.incident(x).iter().filter(|&&(_, e)| set[n + e]).count();
        if set[x] && inc > 0 || inc > 1 {
            v.not_independent += 1;
        }
        if !set[x] && inc == 0 {
            v.not_full += 1;
        }
        if set[x] as usize + inc != 1 {
            v.not_exactly_one += 1;
        }
    }
    v
}
