use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::graph::Graph;
use crate::lp::{self, Constraint, LinearProgram, LpOutcome, Relation};
use crate::matching::{perfect_matchings, Matching};

/// `3N` perfect matchings (with multiplicity) covering every edge `N` times.
#[derive(Debug, Clone, Serialize)]
pub struct PmCover {
    pub matchings: Vec<Matching>,
    pub multiplicities: Vec<u64>,
    pub n_cover: u64,
    /// Perfect matchings enumerated before solving.
    pub enumerated: usize,
}

impl PmCover {
    pub fn total(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    /// Times each edge is covered.
    pub fn edge_coverage(&self, m: usize) -> Vec<u64> {
        let mut out = vec![0; m];
        for (mat, &mult) in self.matchings.iter().zip(&self.multiplicities) {
            for &e in &mat.edges {
                out[e] += mult;
            }
        }
        out
    }
}

/// Uniform perfect-matching cover of a cubic bridgeless graph from an exact
/// basic solution of `sum_{M containing e} x_M = 1/3`.
pub fn uniform_pm_cover(g: &Graph, cap: usize) -> Result<PmCover> {
    if !g.is_cubic() {
        return precondition("graph is not cubic");
    }
    let bridges = g.bridges();
    if !bridges.is_empty() {
        let (a, b) = g.edge(bridges[0]);
        return precondition(format!(
            "graph has a bridge {}-{}, no uniform cover exists",
            a + 1,
            b + 1
        ));
    }
    let list = perfect_matchings(g, cap);
    if !list.complete {
        return Err(Error::Budget(format!("more than {cap} perfect matchings")));
    }
    let all = list.matchings;
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let program = LinearProgram {
        objective: vec![BigRational::zero(); all.len()],
        constraints: (0..g.m())
            .map(|e| Constraint {
                coeffs: all
                    .iter()
                    .map(|mat| {
                        if mat.contains(e) {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect(),
                relation: Relation::Eq,
                rhs: third.clone(),
            })
            .collect(),
    };
    let x = match lp::solve(&program)? {
        LpOutcome::Optimal { x, .. } => x,
        LpOutcome::Infeasible => {
            return Err(Error::Invariant(
                "no fractional perfect-matching cover of a bridgeless cubic graph".into(),
            ))
        }
        LpOutcome::Unbounded => return Err(Error::Invariant("bounded LP reported unbounded".into())),
    };
    // smallest N with 3N x_M integral for every M
    let three = BigRational::from_integer(3.into());
    let n_cover = x
        .iter()
        .map(|v| (v * &three).denom().clone())
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let scale = &three * BigRational::from_integer(n_cover.clone());
    let mut matchings = Vec::new();
    let mut multiplicities = Vec::new();
    for (mat, v) in all.iter().zip(&x) {
        if v.is_zero() {
            continue;
        }
        let mult = (v * &scale).to_integer();
        matchings.push(mat.clone());
        multiplicities.push(mult.to_u64().ok_or_else(|| Error::Budget("multiplicity overflow".into()))?);
    }
    let cover = PmCover {
        matchings,
        multiplicities,
        n_cover: n_cover.to_u64().ok_or_else(|| Error::Budget("N overflow".into()))?,
        enumerated: all.len(),
    };
    if cover.edge_coverage(g.m()).iter().any(|&c| c != cover.n_cover) {
        return Err(Error::Invariant("cover does not cover every edge N times".into()));
    }
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn k4_and_petersen() {
        let c = uniform_pm_cover(&generate::complete(4), 100).unwrap();
        assert_eq!((c.matchings.len(), c.n_cover), (3, 1));
        let c = uniform_pm_cover(&generate::petersen(), 100).unwrap();
        assert_eq!((c.matchings.len(), c.n_cover, c.total()), (6, 2, 6));
    }

    #[test]
    fn refuses_bridges_and_non_cubic() {
        // K4 with edge 2-3 subdivided by 4, twice, joined by the bridge 4-9
        let half = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4)];
        let edges = half
            .iter()
            .flat_map(|&(a, b)| [(a, b), (a + 5, b + 5)])
            .chain([(4, 9)]);
        let bridged = Graph::new(10, edges).unwrap();
        assert!(bridged.is_cubic());
        let err = uniform_pm_cover(&bridged, 100).unwrap_err();
        assert!(err.to_string().contains("bridge"));
        // K4 with one edge subdivided twice
        let twice = Graph::new(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (4, 5), (5, 3)]).unwrap();
        assert!(twice.is_bridgeless());
        assert!(uniform_pm_cover(&twice, 100).is_err());
    }
}
