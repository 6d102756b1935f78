//! Exact two-phase dense simplex over big rationals.
//!
//! All LPs in this crate are tiny (dimension <= 6, tens of rows), so a dense
//! tableau with Bland's anti-cycling rule is simple, exact, and fast enough.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
}

/// maximize objective . x  subject to the rows and x >= 0.
#[derive(Clone, Debug)]
pub struct Lp {
    pub num_vars: usize,
    pub rows: Vec<(Vec<Rat>, Rel, Rat)>,
    pub objective: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl Lp {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
            objective: vec![Rat::zero(); num_vars],
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, rel, rhs));
    }

    /// `coeffs . x >= rhs`, stored as the negated Le row.
    pub fn add_ge_row(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        let neg: Vec<Rat> = coeffs.into_iter().map(|c| -c).collect();
        self.rows.push((neg, Rel::Le, -rhs));
    }

    pub fn maximize(&self) -> Result<LpOutcome> {
        solve(self)
    }

    /// Feasibility of the constraint system alone.
    pub fn is_feasible(&self) -> Result<bool> {
        let mut probe = self.clone();
        probe.objective = vec![Rat::zero(); self.num_vars];
        Ok(!matches!(probe.maximize()?, LpOutcome::Infeasible))
    }
}

struct Tableau {
    /// rows x (cols + 1); last column is the rhs.
    t: Vec<Vec<Rat>>,
    cols: usize,
    basis: Vec<usize>,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rat {
        &self.t[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for x in self.t[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (x, p) in r.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        self.basis[row] = col;
    }

    /// Maximizes cost . x from the current BFS; Bland's rule throughout.
    /// Only columns below `enterable` may enter the basis.
    fn run(&mut self, cost: &[Rat], enterable: usize) -> Result<Option<usize>> {
        loop {
            // Reduced costs r_j = c_j - c_B . column_j (basis columns give 0).
            let mut entering = None;
            'cols: for j in 0..enterable {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() {
                        r -= &cost[b] * &self.t[i][j];
                    }
                }
                if r.is_positive() {
                    entering = Some(j);
                    break 'cols;
                }
            }
            let Some(col) = entering else {
                return Ok(None);
            };
            let mut leave: Option<usize> = None;
            for i in 0..self.t.len() {
                if !self.t[i][col].is_positive() {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(l) => {
                        let cur = self.rhs(l) / &self.t[l][col];
                        let cand = self.rhs(i) / &self.t[i][col];
                        cand < cur || (cand == cur && self.basis[i] < self.basis[l])
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            let Some(row) = leave else {
                return Ok(Some(col));
            };
            self.pivot(row, col);
        }
    }

    fn objective_value(&self, cost: &[Rat]) -> Rat {
        let mut v = Rat::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            v += &cost[b] * self.rhs(i);
        }
        v
    }

    fn point(&self, num_vars: usize) -> Vec<Rat> {
        let mut x = vec![Rat::zero(); num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < num_vars {
                x[b] = self.rhs(i).clone();
            }
        }
        x
    }
}

fn solve(lp: &Lp) -> Result<LpOutcome> {
    let n = lp.num_vars;
    let m = lp.rows.len();
    let num_slacks = lp.rows.iter().filter(|(_, r, _)| *r == Rel::Le).count();
    let structural = n + num_slacks;
    let cols = structural + m; // + one artificial per row
    let mut t = vec![vec![Rat::zero(); cols + 1]; m];
    let mut slack = n;
    for (i, (coeffs, rel, rhs)) in lp.rows.iter().enumerate() {
        let flip = rhs.is_negative();
        for (j, c) in coeffs.iter().enumerate() {
            t[i][j] = if flip { -c } else { c.clone() };
        }
        if *rel == Rel::Le {
            t[i][slack] = if flip { -Rat::one() } else { Rat::one() };
            slack += 1;
        }
        t[i][structural + i] = Rat::one();
        t[i][cols] = if flip { -rhs } else { rhs.clone() };
    }
    let mut tab = Tableau {
        t,
        cols,
        basis: (structural..structural + m).collect(),
    };

    // Phase 1: maximize minus the sum of artificials.
    let mut phase1 = vec![Rat::zero(); cols];
    for c in phase1.iter_mut().skip(structural) {
        *c = -Rat::one();
    }
    if tab.run(&phase1, cols)?.is_some() {
        return Err(Error::Internal("phase-1 LP unbounded".into()));
    }
    if tab.objective_value(&phase1).is_negative() {
        return Ok(LpOutcome::Infeasible);
    }
    // Pivot any lingering (zero-valued) artificials out of the basis.
    for i in 0..m {
        if tab.basis[i] < structural {
            continue;
        }
        if let Some(j) = (0..structural).find(|&j| !tab.t[i][j].is_zero()) {
            tab.pivot(i, j);
        }
        // An all-zero row is a redundant constraint; the artificial stays
        // basic at value 0 and never re-enters because phase 2 forbids it.
    }

    // Phase 2: original objective; artificials barred from entering.
    let mut phase2 = vec![Rat::zero(); cols];
    phase2[..n].clone_from_slice(&lp.objective);
    if tab.run(&phase2, structural)?.is_some() {
        return Ok(LpOutcome::Unbounded);
    }
    Ok(LpOutcome::Optimal {
        value: tab.objective_value(&phase2),
        point: tab.point(n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn simple_maximum() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
        let mut lp = Lp::new(2);
        lp.add_row(vec![rat_int(1), rat_int(2)], Rel::Le, rat_int(4));
        lp.add_row(vec![rat_int(3), rat_int(1)], Rel::Le, rat_int(6));
        lp.objective = vec![rat_int(1), rat_int(1)];
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(point, vec![rat(8, 5), rat(6, 5)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_constraint() {
        // max x s.t. x + y = 1.
        let mut lp = Lp::new(2);
        lp.add_row(vec![rat_int(1), rat_int(1)], Rel::Eq, rat_int(1));
        lp.objective = vec![rat_int(1), rat_int(0)];
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = Lp::new(1);
        lp.add_row(vec![rat_int(1)], Rel::Le, rat_int(-1));
        assert_eq!(lp.maximize().unwrap(), LpOutcome::Infeasible);
        assert!(!lp.is_feasible().unwrap());
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = Lp::new(1);
        lp.add_ge_row(vec![rat_int(1)], rat_int(1));
        lp.objective = vec![rat_int(1)];
        assert_eq!(lp.maximize().unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_normalized() {
        // max -x s.t. -x <= -2  (i.e. x >= 2): optimum x = 2.
        let mut lp = Lp::new(1);
        lp.add_row(vec![rat_int(-1)], Rel::Le, rat_int(-2));
        lp.objective = vec![rat_int(-1)];
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_int(-2));
                assert_eq!(point, vec![rat_int(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(2);
        lp.add_row(vec![rat_int(1), rat_int(1)], Rel::Eq, rat_int(1));
        lp.add_row(vec![rat_int(2), rat_int(2)], Rel::Eq, rat_int(2));
        lp.objective = vec![rat_int(0), rat_int(1)];
        match lp.maximize().unwrap() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat_int(1)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
