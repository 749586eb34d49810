//! Test-graph generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    CompleteBipartite { a: usize, b: usize },
    Prism { n: usize },
    GeneralizedPetersen { n: usize, k: usize },
    Circulant { n: usize, a: usize, b: usize },
    RandomCubicGirth { n: usize, min_girth: usize, seed: u64, budget: usize },
}

pub fn generate(kind: GraphKind) -> Result<Graph> {
    match kind {
        GraphKind::Cycle { n } if n >= 3 => Ok(cycle(n)),
        GraphKind::Path { n } if n >= 1 => Ok(path(n)),
        GraphKind::Complete { n } => Ok(complete(n)),
        GraphKind::CompleteBipartite { a, b } => Ok(complete_bipartite(a, b)),
        GraphKind::Prism { n } if n >= 3 => Ok(prism(n)),
        GraphKind::GeneralizedPetersen { n, k } if n >= 3 && k >= 1 && 2 * k < n => {
            Ok(generalized_petersen(n, k))
        }
        GraphKind::Circulant { n, a, b } => circulant(n, &[a, b]),
        GraphKind::RandomCubicGirth {
            n,
            min_girth,
            seed,
            budget,
        } => random_cubic_girth(n, min_girth, seed, budget),
        other => precondition(format!("invalid generator parameters {other:?}")),
    }
}

pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle")
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("path")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::new(n, edges).expect("complete graph")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v)));
    Graph::new(a + b, edges).expect("complete bipartite graph")
}

/// `C_n x K_2`; vertex `i` is matched to `i + n` by a rung.
pub fn prism(n: usize) -> Graph {
    let edges = (0..n).flat_map(|i| [(i, (i + 1) % n), (n + i, n + (i + 1) % n), (i, n + i)]);
    Graph::new(2 * n, edges).expect("prism")
}

/// Outer cycle `0..n`, spokes `i -- n+i`, inner star polygon with step `k`.
pub fn generalized_petersen(n: usize, k: usize) -> Graph {
    let edges = (0..n).flat_map(|i| [(i, (i + 1) % n), (i, n + i), (n + i, n + (i + k) % n)]);
    Graph::new(2 * n, edges).expect("generalized Petersen graph")
}

pub fn petersen() -> Graph {
    generalized_petersen(5, 2)
}

pub fn circulant(n: usize, jumps: &[usize]) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for &j in jumps {
            if j == 0 || 2 * j > n {
                return precondition(format!("jump {j} invalid for circulant on {n} vertices"));
            }
            let w = (i + j) % n;
            if 2 * j == n && w < i {
                continue;
            }
            edges.push((i, w));
        }
    }
    Graph::new(n, edges)
}

/// Random connected bridgeless cubic graph of girth at least `min_girth`.
///
/// Points of the configuration model are paired one at a time; a pairing
/// that would close a cycle shorter than `min_girth` is rejected and another
/// partner is drawn. A dead end restarts the whole pairing, and each restart
/// counts against `budget`.
pub fn random_cubic_girth(n: usize, min_girth: usize, seed: u64, budget: usize) -> Result<Graph> {
    if n < 4 || n % 2 == 1 {
        return precondition(format!("no cubic graph on {n} vertices"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget.max(1) {
        if let Some(edges) = try_pairing(n, min_girth, &mut rng) {
            let g = Graph::new(n, edges)?;
            if g.is_connected()
                && g.is_bridgeless()
                && g.girth().is_none_or(|x| x >= min_girth)
            {
                return Ok(g);
            }
        }
    }
    Err(Error::Budget(format!(
        "no cubic graph with n={n}, girth>={min_girth} after {budget} attempts"
    )))
}

fn try_pairing(n: usize, min_girth: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut free = vec![3usize; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut edges = Vec::with_capacity(3 * n / 2);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for _ in 0..3 * n / 2 {
        // vertex with the fewest free points first keeps dead ends rare
        let u = *order
            .iter()
            .filter(|&&v| free[v] > 0)
            .min_by_key(|&&v| free[v])?;
        // vertices within distance min_girth - 2 of u are forbidden partners
        for &t in &touched {
            dist[t] = usize::MAX;
        }
        touched.clear();
        let reach = min_girth.saturating_sub(2);
        dist[u] = 0;
        touched.push(u);
        let mut frontier = vec![u];
        for d in 1..=reach {
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = d;
                        touched.push(y);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| v != u && free[v] > 0 && dist[v] == usize::MAX)
            .collect();
        if candidates.is_empty() {
            return None;
        }
        // weight by free points, as the configuration model does
        let total: usize = candidates.iter().map(|&v| free[v]).sum();
        let mut pick = rng.gen_range(0..total);
        let mut w = candidates[0];
        for &v in &candidates {
            if pick < free[v] {
                w = v;
                break;
            }
            pick -= free[v];
        }
        free[u] -= 1;
        free[w] -= 1;
        adj[u].push(w);
        adj[w].push(u);
        edges.push((u, w));
    }
    Some(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        let k4 = complete(4);
        assert_eq!((k4.n(), k4.m()), (4, 6));
        let p = petersen();
        assert!(p.is_cubic());
        assert_eq!(p.girth(), Some(5));
        assert_eq!(prism(3).girth(), Some(3));
        assert_eq!(generalized_petersen(10, 3).girth(), Some(6));
        let c9 = circulant(9, &[1, 2]).unwrap();
        assert_eq!(c9.regular_degree(), Some(4));
    }

    #[test]
    fn random_cubic_has_requested_girth() {
        let g = random_cubic_girth(200, 7, 1, 200).unwrap();
        assert!(g.is_cubic());
        assert!(g.is_connected());
        assert!(g.is_bridgeless());
        assert!(g.girth().unwrap() >= 7);
        assert_eq!(g, random_cubic_girth(200, 7, 1, 200).unwrap());
    }

    #[test]
    fn odd_order_rejected() {
        assert!(random_cubic_girth(11, 3, 0, 5).is_err());
    }
}
