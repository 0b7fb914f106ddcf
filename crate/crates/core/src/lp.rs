//! Exact linear programming over the rationals.
//!
//! A dense two-phase simplex method with Bland's rule, so it always terminates. Variables are
//! free; each is split into a difference of two nonnegative columns internally.
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: BigRational, point: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

/// A linear program in free variables.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    vars: usize,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        Self { vars, constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.vars, "constraint width");
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    pub fn add_int(&mut self, coeffs: &[i64], relation: Relation, rhs: i64) {
        self.add(coeffs.iter().map(|&c| int(c)).collect(), relation, int(rhs));
    }

    pub fn is_feasible(&self) -> bool {
        self.maximize(&vec![BigRational::zero(); self.vars]) != LpOutcome::Infeasible
    }

    pub fn maximize(&self, objective: &[BigRational]) -> LpOutcome {
        Tableau::build(self).solve(self.vars, objective)
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial.
    artificial_from: usize,
    columns: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let structural = 2 * lp.vars;
        let slacks = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        let artificial_from = structural + slacks;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut basis = Vec::new();
        let mut pending = Vec::new();
        let mut slack = structural;
        for c in &lp.constraints {
            let flip = c.rhs.is_negative();
            let sign = if flip { -BigRational::one() } else { BigRational::one() };
            let mut row = vec![BigRational::zero(); artificial_from];
            for (k, a) in c.coeffs.iter().enumerate() {
                row[2 * k] = a * &sign;
                row[2 * k + 1] = -(a * &sign);
            }
            let relation = match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            };
            let mut basic = None;
            match relation {
                Relation::Le => {
                    row[slack] = BigRational::one();
                    basic = Some(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -BigRational::one();
                    slack += 1;
                }
                Relation::Eq => {}
            }
            pending.push(basic);
            rows.push(row);
            rhs.push(&c.rhs * &sign);
        }
        let artificials = pending.iter().filter(|b| b.is_none()).count();
        let columns = artificial_from + artificials;
        let mut next = artificial_from;
        for (row, b) in rows.iter_mut().zip(pending) {
            row.resize(columns, BigRational::zero());
            match b {
                Some(s) => basis.push(s),
                None => {
                    row[next] = BigRational::one();
                    basis.push(next);
                    next += 1;
                }
            }
        }
        Self { rows, rhs, basis, artificial_from, columns }
    }

    fn pivot(&mut self, r: usize, col: usize, objective: &mut (Vec<BigRational>, BigRational)) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v / &p;
            }
        }
        self.rhs[r] = &self.rhs[r] / &p;
        let support: Vec<usize> = (0..self.columns).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let eliminate = |row: &mut Vec<BigRational>, rhs: &mut BigRational| {
            let f = row[col].clone();
            if f.is_zero() {
                return;
            }
            for &j in &support {
                row[j] = &row[j] - &f * &pivot_row[j];
            }
            *rhs = &*rhs - &f * &pivot_rhs;
        };
        for k in 0..self.rows.len() {
            if k != r {
                let (row, rhs) = (&mut self.rows[k], &mut self.rhs[k]);
                eliminate(row, rhs);
            }
        }
        eliminate(&mut objective.0, &mut objective.1);
        self.basis[r] = col;
    }

    /// Reduced costs `c_B B^-1 A - c` and the objective value for the current basis.
    fn objective_row(&self, cost: &[BigRational]) -> (Vec<BigRational>, BigRational) {
        let mut row: Vec<BigRational> = cost.iter().map(|c| -c).collect();
        let mut value = BigRational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (entry, a) in row.iter_mut().zip(&self.rows[r]) {
                if !a.is_zero() {
                    *entry += &cost[b] * a;
                }
            }
            value += &cost[b] * &self.rhs[r];
        }
        (row, value)
    }

    /// Runs the simplex method; returns false when unbounded.
    fn run(&mut self, objective: &mut (Vec<BigRational>, BigRational), allowed: usize) -> bool {
        loop {
            let Some(col) = (0..allowed).find(|&j| objective.0[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(BigRational, usize, usize)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if a.is_positive() {
                    let ratio = &self.rhs[r] / a;
                    let better = match &best {
                        None => true,
                        Some((q, _, b)) => ratio < *q || (ratio == *q && self.basis[r] < *b),
                    };
                    if better {
                        best = Some((ratio, r, self.basis[r]));
                    }
                }
            }
            let Some((_, r, _)) = best else { return false };
            self.pivot(r, col, objective);
        }
    }

    fn solve(mut self, vars: usize, objective: &[BigRational]) -> LpOutcome {
        let mut phase1_cost = vec![BigRational::zero(); self.columns];
        for c in phase1_cost.iter_mut().skip(self.artificial_from) {
            *c = -BigRational::one();
        }
        let mut obj = self.objective_row(&phase1_cost);
        self.run(&mut obj, self.columns);
        if obj.1.is_negative() {
            return LpOutcome::Infeasible;
        }
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.artificial_from {
                match (0..self.artificial_from).find(|&j| !self.rows[r][j].is_zero()) {
                    Some(col) => self.pivot(r, col, &mut obj),
                    None => {
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut cost = vec![BigRational::zero(); self.columns];
        for (k, c) in objective.iter().enumerate() {
            cost[2 * k] = c.clone();
            cost[2 * k + 1] = -c;
        }
        let mut obj = self.objective_row(&cost);
        if !self.run(&mut obj, self.artificial_from) {
            return LpOutcome::Unbounded;
        }
        let mut values = vec![BigRational::zero(); self.columns];
        for (r, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[r].clone();
        }
        let point = (0..vars).map(|k| &values[2 * k] - &values[2 * k + 1]).collect();
        LpOutcome::Optimal { value: obj.1, point }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_optimum() {
        let mut lp = LinearProgram::new(2);
        lp.add_int(&[1, 1], Relation::Le, 4);
        lp.add_int(&[1, 3], Relation::Le, 6);
        lp.add_int(&[1, 0], Relation::Ge, 0);
        lp.add_int(&[0, 1], Relation::Ge, 0);
        match lp.maximize(&[int(1), int(2)]) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(5));
                assert_eq!(point, vec![int(3), int(1)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fractional_optimum_with_equality() {
        let mut lp = LinearProgram::new(3);
        lp.add_int(&[1, 1, 1], Relation::Eq, 0);
        lp.add_int(&[3, 0, 0], Relation::Le, 1);
        lp.add_int(&[0, 1, 0], Relation::Ge, -2);
        lp.add_int(&[0, 0, 1], Relation::Ge, -2);
        match lp.maximize(&[int(1), int(0), int(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, q(1, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add_int(&[1], Relation::Ge, 2);
        lp.add_int(&[1], Relation::Le, 1);
        assert_eq!(lp.maximize(&[int(1)]), LpOutcome::Infeasible);
        assert!(!lp.is_feasible());
        let mut lp = LinearProgram::new(1);
        lp.add_int(&[1], Relation::Ge, 2);
        assert_eq!(lp.maximize(&[int(1)]), LpOutcome::Unbounded);
        assert!(lp.is_feasible());
    }

    proptest! {
        /// Oracle: on a box, a linear objective is maximized at a corner.
        #[test]
        fn box_optimum(bounds in proptest::collection::vec((-5i64..5, 0i64..5), 1..4), c in proptest::collection::vec(-4i64..4, 4)) {
            let n = bounds.len();
            let mut lp = LinearProgram::new(n);
            let mut expected = 0;
            for (k, &(lo, width)) in bounds.iter().enumerate() {
                let mut e = vec![0; n];
                e[k] = 1;
                lp.add_int(&e, Relation::Ge, lo);
                lp.add_int(&e, Relation::Le, lo + width);
                expected += if c[k] > 0 { c[k] * (lo + width) } else { c[k] * lo };
            }
            let objective: Vec<BigRational> = c[..n].iter().map(|&v| int(v)).collect();
            match lp.maximize(&objective) {
                LpOutcome::Optimal { value, point } => {
                    prop_assert_eq!(value.clone(), int(expected));
                    let at: BigRational = point.iter().zip(&objective).map(|(x, c)| x * c).sum();
                    prop_assert_eq!(at, value);
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
