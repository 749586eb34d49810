//! Dense two-phase simplex over exact rationals with Bland's rule.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// Minimize `objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<BigRational>, value: BigRational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    /// Columns allowed to enter the basis.
    active: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the current basis.
    fn reduced_costs(&self, cost: &[BigRational]) -> Vec<BigRational> {
        let mut red = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if cost[b].is_zero() {
                continue;
            }
            for (r, v) in red.iter_mut().zip(row) {
                if !v.is_zero() {
                    *r -= &cost[b] * v;
                }
            }
        }
        red
    }

    fn run(&mut self, cost: &[BigRational]) -> Step {
        loop {
            let red = self.reduced_costs(cost);
            // Bland: lowest-index improving column, lowest-index leaving variable
            let Some(c) = (0..red.len()).find(|&j| self.active[j] && red[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut best: Option<(BigRational, usize, usize)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[c];
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            match best {
                Some((_, r, _)) => self.pivot(r, c),
                None => return Step::Unbounded,
            }
        }
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .zip(&self.rhs)
            .map(|(&b, v)| &cost[b] * v)
            .sum()
    }
}

pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.len();
    if lp.constraints.iter().any(|c| c.coeffs.len() != n) {
        return precondition("constraint width differs from objective width");
    }
    let m = lp.constraints.len();
    let slack_count = lp
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let art_count = lp
        .constraints
        .iter()
        .filter(|c| match c.relation {
            Relation::Eq => true,
            Relation::Ge => !c.rhs.is_negative(),
            Relation::Le => c.rhs.is_negative(),
        })
        .count();
    let width = n + slack_count + art_count;
    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        active: vec![true; width],
    };
    let (mut next_slack, mut next_art) = (n, n + slack_count);
    let mut art_cols = Vec::new();
    for c in &lp.constraints {
        let mut row = vec![BigRational::zero(); width];
        row[..n].clone_from_slice(&c.coeffs);
        let mut rhs = c.rhs.clone();
        let mut slack_sign = match c.relation {
            Relation::Le => Some(BigRational::one()),
            Relation::Ge => Some(-BigRational::one()),
            Relation::Eq => None,
        };
        if rhs.is_negative() {
            for v in row.iter_mut() {
                *v = -v.clone();
            }
            rhs = -rhs;
            slack_sign = slack_sign.map(|s| -s);
        }
        let mut basic = None;
        if let Some(s) = slack_sign {
            if s.is_positive() {
                basic = Some(next_slack);
            }
            row[next_slack] = s;
            next_slack += 1;
        }
        let basic = match basic {
            Some(b) => b,
            None => {
                row[next_art] = BigRational::one();
                art_cols.push(next_art);
                next_art += 1;
                next_art - 1
            }
        };
        t.rows.push(row);
        t.rhs.push(rhs);
        t.basis.push(basic);
    }
    debug_assert!(next_art <= width);
    if !art_cols.is_empty() {
        let mut phase1 = vec![BigRational::zero(); width];
        for &a in &art_cols {
            phase1[a] = BigRational::one();
        }
        if let Step::Unbounded = t.run(&phase1) {
            return Err(Error::Invariant("phase one cannot be unbounded".into()));
        }
        if t.objective_value(&phase1).is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        let is_art = |j: usize| j >= n + slack_count;
        // drive zero-valued artificials out, dropping redundant rows
        let mut i = 0;
        while i < t.rows.len() {
            if is_art(t.basis[i]) {
                match (0..n + slack_count).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for &a in &art_cols {
            t.active[a] = false;
        }
    }
    let mut cost = vec![BigRational::zero(); width];
    cost[..n].clone_from_slice(&lp.objective);
    if let Step::Unbounded = t.run(&cost) {
        return Ok(LpOutcome::Unbounded);
    }
    let mut x = vec![BigRational::zero(); n];
    for (&b, v) in t.basis.iter().zip(&t.rhs) {
        if b < n {
            x[b] = v.clone();
        }
    }
    let value = lp
        .objective
        .iter()
        .zip(&x)
        .map(|(c, v)| c * v)
        .sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Exact feasibility check of a point against every constraint.
pub fn satisfies(lp: &LinearProgram, x: &[BigRational]) -> bool {
    x.iter().all(|v| !v.is_negative())
        && lp.constraints.iter().all(|c| {
            let lhs: BigRational = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
            match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    fn row(v: &[i64], relation: Relation, rhs: i64) -> Constraint {
        Constraint {
            coeffs: v.iter().map(|&a| r(a)).collect(),
            relation,
            rhs: r(rhs),
        }
    }

    #[test]
    fn small_maximization() {
        // max 3x + 2y, x + y <= 4, x + 3y <= 6, x <= 3
        let lp = LinearProgram {
            objective: vec![r(-3), r(-2)],
            constraints: vec![
                row(&[1, 1], Relation::Le, 4),
                row(&[1, 3], Relation::Le, 6),
                row(&[1, 0], Relation::Le, 3),
            ],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, r(-11));
                assert_eq!(x, vec![r(3), r(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn covering_with_fractional_optimum() {
        // vertex cover LP of a triangle: optimum 3/2
        let lp = LinearProgram {
            objective: vec![r(1), r(1), r(1)],
            constraints: vec![
                row(&[1, 1, 0], Relation::Ge, 1),
                row(&[0, 1, 1], Relation::Ge, 1),
                row(&[1, 0, 1], Relation::Ge, 1),
            ],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, BigRational::new(3.into(), 2.into()));
                assert!(satisfies(&lp, &x));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram {
            objective: vec![r(1)],
            constraints: vec![row(&[1], Relation::Le, 1), row(&[1], Relation::Ge, 2)],
        };
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
        let lp = LinearProgram {
            objective: vec![r(-1), r(0)],
            constraints: vec![row(&[1, -1], Relation::Le, 1)],
        };
        assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn equalities_with_redundant_row() {
        let lp = LinearProgram {
            objective: vec![r(1), r(2)],
            constraints: vec![
                row(&[1, 1], Relation::Eq, 2),
                row(&[2, 2], Relation::Eq, 4),
                row(&[-1, 0], Relation::Ge, -5),
            ],
        };
        match solve(&lp).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, r(2));
                assert_eq!(x, vec![r(2), r(0)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
