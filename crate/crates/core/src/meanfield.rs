//! Mean-field simulation of Phase 1 on an idealised infinite graph.
//!
//! Every path vertex gets `delta - 2` synthetic mates whose levels are
//! uniform and whose membership is drawn independently: a mate of lower
//! level is in T with probability `xi * q~(level)`, a mate of equal level
//! always blocks. Along a path the sampler is then a Markov chain that the
//! seed distribution keeps stationary, so the empirical inclusion rates of
//! edges and vertices at level `t` estimate `p(t)` and `q(t)`.

use rand::Rng;
use serde::Serialize;

use crate::error::{precondition, Result};
use crate::recurrence::{self, pq_table, RecurrenceTable};
use crate::sampler::{classify_junction, trial_rng, ConflictType, Junction};

pub const MIN_TRIALS: u64 = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct LevelRow {
    pub level: usize,
    pub trials: u64,
    pub edge_hits: u64,
    pub vertex_hits: u64,
    pub p_hat: f64,
    pub q_hat: f64,
    pub p: f64,
    pub q: f64,
    /// Binomial standard deviations of the two estimates.
    pub p_sd: f64,
    pub q_sd: f64,
    /// Deviation in standard deviations.
    pub p_z: f64,
    pub q_z: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConflictFrequency {
    pub kind: ConflictType,
    pub count: u64,
    pub frequency: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanFieldReport {
    pub k: usize,
    pub xi: f64,
    pub delta: usize,
    pub length: usize,
    pub trials: u64,
    pub levels: Vec<LevelRow>,
    pub max_z: f64,
    /// Pooled estimates of `p*` and `q*` with their deviations in standard
    /// deviations.
    pub p_star_hat: f64,
    pub q_star_hat: f64,
    pub p_star_z: f64,
    pub q_star_z: f64,
    pub junction_trials: u64,
    pub conflicts: Vec<ConflictFrequency>,
    /// Junctions where two types held at once.
    pub ambiguous_junctions: u64,
    /// Closed-form IIIb rate of the table, cubic case.
    pub iiib_formula: Option<f64>,
}

struct Chain<'a> {
    table: &'a RecurrenceTable,
    p: Vec<f64>,
    q: Vec<f64>,
    q_tilde: Vec<f64>,
    xi: f64,
    mates: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Step {
    edge: bool,
    vertex: bool,
}

impl Chain<'_> {
    fn seed(&self, t: usize, rng: &mut impl Rng) -> Step {
        let draw: f64 = rng.gen();
        Step {
            edge: draw < self.p[t - 1],
            vertex: draw >= self.p[t - 1] && draw < self.p[t - 1] + self.q[t - 1],
        }
    }

    /// Membership of one synthetic mate of a vertex at level `t`, or `None`
    /// when the mate blocks regardless (equal level).
    fn mate(&self, t: usize, rng: &mut impl Rng) -> Option<(usize, bool)> {
        let level = rng.gen_range(1..=self.table.k);
        if level == t {
            return None;
        }
        let in_t = level < t && rng.gen::<f64>() < self.xi * self.q_tilde[level - 1];
        Some((level, in_t))
    }

    fn mates_allow(&self, t: usize, rng: &mut impl Rng) -> bool {
        (0..self.mates).all(|_| matches!(self.mate(t, rng), Some((_, false))))
    }

    fn step(&self, prev: Step, t: usize, rng: &mut impl Rng) -> Step {
        let edge = !prev.edge && !prev.vertex;
        let vertex = !prev.vertex
            && !edge
            && self.mates_allow(t, rng)
            && (self.xi >= 1.0 || rng.gen::<f64>() < self.xi);
        Step { edge, vertex }
    }

    /// States at positions `0..=upto` of a path at level `t`.
    fn run(&self, t: usize, upto: usize, rng: &mut impl Rng) -> Vec<Step> {
        let mut out = Vec::with_capacity(upto + 1);
        let mut s = self.seed(t, rng);
        for _ in 0..=upto {
            s = self.step(s, t, rng);
            out.push(s);
        }
        out
    }

    /// Whether some mate of a vertex at level `t` is in T once every level
    /// has been processed. Higher-level mates may join only when the vertex
    /// itself stayed out.
    fn any_mate_in(&self, t: usize, vertex_in: bool, rng: &mut impl Rng) -> bool {
        let mut any = false;
        for _ in 0..self.mates {
            let level = rng.gen_range(1..=self.table.k);
            let chance = self.xi * self.q_tilde[level - 1];
            let joins = match level.cmp(&t) {
                std::cmp::Ordering::Less => rng.gen::<f64>() < chance,
                std::cmp::Ordering::Equal => false,
                std::cmp::Ordering::Greater => !vertex_in && rng.gen::<f64>() < chance,
            };
            any |= joins;
        }
        any
    }
}

/// Estimate `p(t)`, `q(t)` and the conflict-type mix for a `delta`-regular
/// graph of unbounded girth.
///
/// Each of the `trials` picks a uniform level and a uniform position below
/// `length` and records the edge and vertex found there; the same number of
/// junction trials glue a left path end to a fresh right path.
pub fn mean_field_process(
    k: usize,
    xi: &num_rational::BigRational,
    delta: usize,
    length: usize,
    trials: u64,
    seed: u64,
) -> Result<MeanFieldReport> {
    if trials < MIN_TRIALS {
        return precondition(format!("trials = {trials} below {MIN_TRIALS}"));
    }
    if delta < 3 {
        return precondition(format!("delta = {delta} must be at least 3"));
    }
    let table = pq_table(k, xi, delta)?;
    if length < 10 * k {
        return precondition(format!("path length {length} below 10k = {}", 10 * k));
    }
    let chain = Chain {
        table: &table,
        p: table.p_f64(),
        q: table.q_f64(),
        q_tilde: table.q_tilde_f64(),
        xi: table.xi_f64(),
        mates: delta - 2,
    };
    let mut level_trials = vec![0u64; k];
    let mut edge_hits = vec![0u64; k];
    let mut vertex_hits = vec![0u64; k];
    let mut rng = trial_rng(seed, 0);
    for _ in 0..trials {
        let t = rng.gen_range(1..=k);
        let j = rng.gen_range(0..length);
        let last = *chain.run(t, j, &mut rng).last().expect("non-empty run");
        level_trials[t - 1] += 1;
        edge_hits[t - 1] += last.edge as u64;
        vertex_hits[t - 1] += last.vertex as u64;
    }
    let mut counts = [0u64; ConflictType::ALL.len()];
    let mut ambiguous = 0u64;
    let mut jrng = trial_rng(seed, 1);
    for _ in 0..trials {
        match classify_junction(&junction(&chain, length, &mut jrng)) {
            Ok(Some(kind)) => counts[kind.index()] += 1,
            Ok(None) => {}
            Err(_) => ambiguous += 1,
        }
    }
    let mut levels = Vec::with_capacity(k);
    let mut max_z: f64 = 0.0;
    for t in 0..k {
        let n = level_trials[t].max(1) as f64;
        let (p, q) = (chain.p[t], chain.q[t]);
        let p_hat = edge_hits[t] as f64 / n;
        let q_hat = vertex_hits[t] as f64 / n;
        let p_sd = (p * (1.0 - p) / n).sqrt();
        let q_sd = (q * (1.0 - q) / n).sqrt();
        let z = |hat: f64, exp: f64, sd: f64| {
            if sd > 0.0 {
                (hat - exp).abs() / sd
            } else if hat == exp {
                0.0
            } else {
                f64::INFINITY
            }
        };
        let p_z = z(p_hat, p, p_sd);
        let q_z = z(q_hat, q, q_sd);
        max_z = max_z.max(p_z).max(q_z);
        levels.push(LevelRow {
            level: t + 1,
            trials: level_trials[t],
            edge_hits: edge_hits[t],
            vertex_hits: vertex_hits[t],
            p_hat,
            q_hat,
            p,
            q,
            p_sd,
            q_sd,
            p_z,
            q_z,
        });
    }
    // pooled over levels, each level drawn with probability 1/k
    let total = trials as f64;
    let p_star_hat = edge_hits.iter().sum::<u64>() as f64 / total;
    let q_star_hat = vertex_hits.iter().sum::<u64>() as f64 / total;
    let p_star = recurrence::to_f64(&table.p_star());
    let q_star = recurrence::to_f64(&table.q_star());
    let p_star_z = (p_star_hat - p_star).abs() / (p_star * (1.0 - p_star) / total).sqrt();
    let q_star_z = (q_star_hat - q_star).abs() / (q_star * (1.0 - q_star) / total).sqrt();
    let conflicts = ConflictType::ALL
        .iter()
        .map(|&kind| ConflictFrequency {
            kind,
            count: counts[kind.index()],
            frequency: counts[kind.index()] as f64 / trials as f64,
        })
        .collect();
    Ok(MeanFieldReport {
        k,
        xi: chain.xi,
        delta,
        length,
        trials,
        levels,
        max_z,
        p_star_hat,
        q_star_hat,
        p_star_z,
        q_star_z,
        junction_trials: trials,
        conflicts,
        ambiguous_junctions: ambiguous,
        iiib_formula: (delta == 3).then(|| table.conflict_iiib()),
    })
}

/// One boundary edge `u'u0` between the end of a path at a uniform level
/// and the start of a path at an independent uniform level.
fn junction(chain: &Chain, length: usize, rng: &mut impl Rng) -> Junction {
    let k = chain.table.k;
    let left_level = rng.gen_range(1..=k);
    let right_level = rng.gen_range(1..=k);
    let left = chain.run(left_level, length, rng);
    let (prev, end) = (left[length - 1], left[length]);
    let start = chain.seed(right_level, rng);
    let right = {
        let e0 = chain.step(start, right_level, rng);
        let e1 = chain.step(e0, right_level, rng);
        [e0, e1]
    };
    Junction {
        left_prev: prev.vertex,
        left_edge: end.edge,
        left: end.vertex,
        left_covered: end.vertex || end.edge || right[0].edge,
        boundary: right[0].edge,
        right: right[0].vertex,
        right_next: right[1].vertex,
        left_mate_in: chain.any_mate_in(left_level, end.vertex, rng),
        right_mate_in: chain.any_mate_in(right_level, right[0].vertex, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::One;

    #[test]
    fn small_run_is_close() {
        let r = mean_field_process(3, &BigRational::one(), 3, 30, 30_000, 4).unwrap();
        assert!(r.max_z < 5.0, "{r:?}");
        assert_eq!(r.ambiguous_junctions, 0);
    }

    #[test]
    fn rejects_short_paths() {
        assert!(mean_field_process(5, &BigRational::one(), 3, 20, 10, 0).is_err());
        assert!(mean_field_process(5, &BigRational::one(), 3, 50, 9_999, 0).is_err());
    }
}
