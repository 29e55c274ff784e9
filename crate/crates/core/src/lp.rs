//! Exact rational simplex for `maximize c·x subject to A x ≤ b`, `x` free.
//!
//! The solver works on a Chvátal-style dictionary. Every structural variable
//! is free, so each one is first pivoted into the basis against some slack
//! row and never leaves again; what remains is an ordinary nonnegative
//! problem over the slacks whose nonbasic set has (at most) `n` columns.
//! Feasibility uses the single-artificial auxiliary problem and all pivots
//! follow Bland's rule, so the method terminates without cycling.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// One inequality `coeffs · x ≤ rhs`.
#[derive(Debug, Clone)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Row { coeffs, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { point: Vec<Rational>, value: Rational },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Dictionary {
    n: usize,
    /// basic[r] = rhs[r] + Σ_j table[r][j] · nonbasic[j]
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    rhs: Vec<Rational>,
    table: Vec<Vec<Rational>>,
    /// Objective rows: (constant, coefficients over nonbasic columns).
    objectives: Vec<(Rational, Vec<Rational>)>,
    /// Columns holding structural variables that could not enter the basis.
    stuck: Vec<bool>,
}

const AUX_OFFSET: usize = usize::MAX / 2;

impl Dictionary {
    fn is_free(&self, var: usize) -> bool {
        var < self.n
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let a = self.table[r][j].clone();
        debug_assert!(!a.is_zero());
        let inv = a.recip();
        // Solve row r for the entering variable.
        let new_rhs = -&self.rhs[r] * &inv;
        let mut new_row: Vec<Rational> = self.table[r].iter().map(|t| -(t * &inv)).collect();
        new_row[j] = inv;

        for i in 0..self.table.len() {
            if i == r {
                continue;
            }
            let c = std::mem::take(&mut self.table[i][j]);
            if c.is_zero() {
                continue;
            }
            self.rhs[i] += &c * &new_rhs;
            for (k, v) in self.table[i].iter_mut().enumerate() {
                if k == j {
                    *v = &c * &new_row[j];
                } else if !new_row[k].is_zero() {
                    *v += &c * &new_row[k];
                }
            }
        }
        for (constant, coeffs) in &mut self.objectives {
            let c = std::mem::take(&mut coeffs[j]);
            if c.is_zero() {
                continue;
            }
            *constant += &c * &new_rhs;
            for (k, v) in coeffs.iter_mut().enumerate() {
                if k == j {
                    *v = &c * &new_row[j];
                } else if !new_row[k].is_zero() {
                    *v += &c * &new_row[k];
                }
            }
        }
        self.rhs[r] = new_rhs;
        self.table[r] = new_row;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[j]);
    }

    /// Bland's rule on objective `obj`. Returns false if unbounded.
    fn optimize(&mut self, obj: usize) -> bool {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| !self.stuck[j] && self.objectives[obj].1[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(j) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.basic.len() {
                if self.is_free(self.basic[r]) || !self.table[r][j].is_negative() {
                    continue;
                }
                let ratio = &self.rhs[r] / -&self.table[r][j];
                let better = match &leaving {
                    None => true,
                    Some((best_r, best)) => ratio < *best || (ratio == *best && self.basic[r] < self.basic[*best_r]),
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, j),
                None => return false,
            }
        }
    }
}

/// Maximizes `objective · x` over `{x : row.coeffs · x ≤ row.rhs}`.
pub fn maximize(objective: &[Rational], rows: &[Row]) -> LpOutcome {
    let n = objective.len();
    let m = rows.len();
    debug_assert!(rows.iter().all(|r| r.coeffs.len() == n));

    let mut d = Dictionary {
        n,
        basic: (n..n + m).collect(),
        nonbasic: (0..n).collect(),
        rhs: rows.iter().map(|r| r.rhs.clone()).collect(),
        table: rows.iter().map(|r| r.coeffs.iter().map(|c| -c).collect()).collect(),
        objectives: vec![(Rational::zero(), objective.to_vec())],
        stuck: vec![false; n],
    };

    // Pivot every free variable into the basis.
    for j in 0..n {
        let row = (0..m).find(|&r| !d.is_free(d.basic[r]) && !d.table[r][j].is_zero());
        match row {
            Some(r) => d.pivot(r, j),
            None => d.stuck[j] = true,
        }
    }

    // Phase 1 with a single artificial column.
    let worst = (0..m)
        .filter(|&r| !d.is_free(d.basic[r]) && d.rhs[r].is_negative())
        .min_by(|&a, &b| d.rhs[a].cmp(&d.rhs[b]).then(d.basic[a].cmp(&d.basic[b])));
    if let Some(start) = worst {
        let aux_col = d.nonbasic.len();
        d.nonbasic.push(AUX_OFFSET);
        d.stuck.push(false);
        for r in 0..m {
            let coef = if d.is_free(d.basic[r]) {
                Rational::zero()
            } else {
                crate::rational::int(1)
            };
            d.table[r].push(coef);
        }
        d.objectives[0].1.push(Rational::zero());
        let mut aux_obj = vec![Rational::zero(); aux_col + 1];
        aux_obj[aux_col] = crate::rational::int(-1);
        d.objectives.push((Rational::zero(), aux_obj));

        d.pivot(start, aux_col);
        let bounded = d.optimize(1);
        debug_assert!(bounded, "auxiliary problem is bounded by zero");
        if d.objectives[1].0.is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive the artificial out of the basis if it is still there.
        if let Some(r) = d.basic.iter().position(|&v| v == AUX_OFFSET) {
            match (0..d.nonbasic.len()).find(|&j| !d.stuck[j] && !d.table[r][j].is_zero()) {
                Some(j) => d.pivot(r, j),
                None => {
                    d.basic.remove(r);
                    d.rhs.remove(r);
                    d.table.remove(r);
                }
            }
        }
        let col = d
            .nonbasic
            .iter()
            .position(|&v| v == AUX_OFFSET)
            .expect("artificial is nonbasic");
        d.nonbasic.remove(col);
        d.stuck.remove(col);
        for row in &mut d.table {
            row.remove(col);
        }
        d.objectives.pop();
        d.objectives[0].1.remove(col);
    }

    if !d.optimize(0) {
        return LpOutcome::Unbounded;
    }
    let (value, coeffs) = &d.objectives[0];
    if (0..d.nonbasic.len()).any(|j| d.stuck[j] && !coeffs[j].is_zero()) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Rational::zero(); n];
    for (r, &var) in d.basic.iter().enumerate() {
        if var < n {
            point[var] = d.rhs[r].clone();
        }
    }
    LpOutcome::Optimal {
        point,
        value: value.clone(),
    }
}
