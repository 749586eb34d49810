use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation};

/// Largest universe the bitset enumeration handles.
pub const MAX_UNIVERSE: usize = 128;
/// Largest number of maximal independent sets fed to the LP.
pub const SET_CAP: usize = 1_000_000;

/// Exact optimum of the fractional covering LP over maximal independent sets.
#[derive(Debug, Clone, Serialize)]
pub struct LpSolution {
    #[serde(serialize_with = "ser_ratio")]
    pub value: BigRational,
    /// Independent sets with positive weight, as sorted element indices.
    pub weights: Vec<(Vec<usize>, String)>,
    pub set_count: usize,
    pub clique: Vec<usize>,
    /// Every element covered with total weight at least 1, rechecked exactly.
    pub covering_ok: bool,
    /// `value >= |clique|` and the certificate is a clique.
    pub certified: bool,
}

fn ser_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn bits(set: u128) -> Vec<usize> {
    (0..MAX_UNIVERSE).filter(|&i| set >> i & 1 == 1).collect()
}

/// Maximal cliques of the graph whose neighbourhoods are `nbr`, by
/// Bron-Kerbosch with pivoting.
fn maximal_cliques(nbr: &[u128], cap: usize) -> Result<Vec<u128>> {
    fn recurse(nbr: &[u128], r: u128, mut p: u128, mut x: u128, cap: usize, out: &mut Vec<u128>) -> bool {
        if p == 0 && x == 0 {
            if out.len() >= cap {
                return false;
            }
            out.push(r);
            return true;
        }
        let pivot = bits(p | x)
            .into_iter()
            .max_by_key(|&u| (p & nbr[u]).count_ones())
            .expect("p | x non-empty");
        for v in bits(p & !nbr[pivot]) {
            let bit = 1u128 << v;
            if !recurse(nbr, r | bit, p & nbr[v], x & nbr[v], cap, out) {
                return false;
            }
            p &= !bit;
            x |= bit;
        }
        true
    }
    let all = if nbr.len() == MAX_UNIVERSE {
        u128::MAX
    } else {
        (1u128 << nbr.len()) - 1
    };
    let mut out = Vec::new();
    if !recurse(nbr, 0, all, 0, cap, &mut out) {
        return Err(Error::Budget(format!("more than {cap} maximal sets")));
    }
    out.sort_unstable();
    Ok(out)
}

fn adjacency_bits(adj: &[Vec<usize>]) -> Result<Vec<u128>> {
    if adj.len() > MAX_UNIVERSE {
        return precondition(format!(
            "universe of {} elements exceeds {MAX_UNIVERSE}",
            adj.len()
        ));
    }
    Ok(adj
        .iter()
        .enumerate()
        .map(|(v, list)| list.iter().filter(|&&w| w != v).fold(0u128, |acc, &w| acc | 1 << w))
        .collect())
}

/// All maximal independent sets of the graph given by adjacency lists.
pub fn maximal_independent_sets(adj: &[Vec<usize>], cap: usize) -> Result<Vec<Vec<usize>>> {
    let nbr = adjacency_bits(adj)?;
    let n = nbr.len();
    let all = if n == MAX_UNIVERSE { u128::MAX } else { (1u128 << n) - 1 };
    let co: Vec<u128> = nbr.iter().enumerate().map(|(v, &a)| all & !a & !(1 << v)).collect();
    Ok(maximal_cliques(&co, cap)?.into_iter().map(bits).collect())
}

/// Minimum total weight on independent sets covering every element of the
/// universe at least once, solved exactly.
pub fn exact_chi_f(adj: &[Vec<usize>], clique: &[usize]) -> Result<LpSolution> {
    let n = adj.len();
    if n == 0 {
        return precondition("empty universe");
    }
    let sets = maximal_independent_sets(adj, SET_CAP)?;
    let one = BigRational::one();
    let program = LinearProgram {
        objective: vec![one.clone(); sets.len()],
        constraints: (0..n)
            .map(|x| Constraint {
                coeffs: sets
                    .iter()
                    .map(|s| if s.binary_search(&x).is_ok() { one.clone() } else { BigRational::zero() })
                    .collect(),
                relation: Relation::Ge,
                rhs: one.clone(),
            })
            .collect(),
    };
    let (x, value) = match lp::solve(&program)? {
        LpOutcome::Optimal { x, value } => (x, value),
        other => return Err(Error::Invariant(format!("covering LP ended as {other:?}"))),
    };
    let covering_ok = lp::satisfies(&program, &x);
    let nbr = adjacency_bits(adj)?;
    let is_clique = clique
        .iter()
        .all(|&a| clique.iter().all(|&b| a == b || nbr[a] >> b & 1 == 1));
    let certified = is_clique && value >= BigRational::from_integer(clique.len().into());
    if !covering_ok || !certified {
        return Err(Error::Invariant(format!(
            "LP optimum {value} failed its certificate (covering {covering_ok}, clique bound {certified})"
        )));
    }
    let weights = sets
        .iter()
        .zip(&x)
        .filter(|(_, w)| !w.is_zero())
        .map(|(s, w)| (s.clone(), w.to_string()))
        .collect();
    Ok(LpSolution {
        value,
        weights,
        set_count: sets.len(),
        clique: clique.to_vec(),
        covering_ok,
        certified,
    })
}

/// Fractional total chromatic number, certified by the closed neighbourhood
/// of a vertex of maximum degree in the total graph.
pub fn fractional_total_chromatic(g: &Graph) -> Result<LpSolution> {
    let v = (0..g.n())
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .ok_or_else(|| Error::Precondition("graph has no vertices".into()))?;
    let mut clique = vec![v];
    clique.extend(g.incident(v).iter().map(|&(_, e)| g.n() + e));
    exact_chi_f(&g.total_graph(), &clique)
}

/// Fractional chromatic number of `g` itself, certified by a maximum clique.
pub fn fractional_chromatic(g: &Graph) -> Result<LpSolution> {
    let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbours(v).collect()).collect();
    let nbr = adjacency_bits(&adj)?;
    let clique = maximal_cliques(&nbr, SET_CAP)?
        .into_iter()
        .max_by_key(|c| c.count_ones())
        .map(bits)
        .unwrap_or_default();
    exact_chi_f(&adj, &clique)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn odd_cycle_chromatic() {
        let s = fractional_chromatic(&generate::cycle(5)).unwrap();
        assert_eq!(s.value, BigRational::new(5.into(), 2.into()));
        assert_eq!(s.set_count, 5);
    }

    #[test]
    fn independent_sets_of_a_path() {
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        assert_eq!(
            maximal_independent_sets(&adj, 10).unwrap(),
            vec![vec![1], vec![0, 2]]
        );
        assert!(maximal_independent_sets(&adj, 1).is_err());
    }
}
