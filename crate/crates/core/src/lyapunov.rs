//! Infinity-norm Lyapunov functions `V(x) = ‖Lx‖∞` and their sublevel sets.

use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, InputCode, Result};
use crate::exec::Execution;
use crate::geometry::{Cell, Constraint, Point, Region};
use crate::lp::LpOutcome;
use crate::matrix::Matrix;
use crate::rational::Rational;

/// `x⁺ = A x`.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    a: Matrix,
}

impl LinearSystem {
    pub fn new(a: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::input(
                InputCode::Dimension,
                format!("A must be square, got {}x{}", a.rows(), a.cols()),
            ));
        }
        Ok(LinearSystem { a })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn step(&self, x: &Point) -> Result<Point> {
        x.apply(&self.a)
    }
}

#[derive(Debug, Clone)]
pub struct PolyhedralLF {
    l: Matrix,
    rho: Rational,
}

impl PolyhedralLF {
    pub fn new(l: Matrix, rho: Rational) -> Result<Self> {
        if l.rows() < l.cols() || l.rank() != l.cols() {
            return Err(Error::input(
                InputCode::RankDeficient,
                format!("L ({}x{}) must have full column rank", l.rows(), l.cols()),
            ));
        }
        if !rho.is_positive() || rho >= Rational::one() {
            return Err(Error::input(
                InputCode::RhoRange,
                format!("rho = {rho} is not in (0,1)"),
            ));
        }
        Ok(PolyhedralLF { l, rho })
    }

    pub fn l(&self) -> &Matrix {
        &self.l
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.l.cols()
    }

    pub fn value(&self, x: &Point) -> Result<Rational> {
        Ok(self
            .l
            .mul_vec(x.coords())?
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// `{x : -Γ ≤ Lx ≤ Γ}` as 2l closed rows: all of `L` first, then `-L`.
    pub fn sublevel_cell(&self, gamma: &Rational) -> Cell {
        let n = self.dim();
        let mut cs = Vec::with_capacity(2 * self.l.rows());
        for sign in [1i64, -1] {
            let s = crate::rational::int(sign);
            for row in self.l.row_iter() {
                let normal: Vec<Rational> = row.iter().map(|v| v * &s).collect();
                cs.push(Constraint::non_strict(normal, gamma.clone()).expect("full rank rows"));
            }
        }
        Cell::new(n, cs).expect("dimension agrees")
    }

    /// Rows of `[L; -L] A`, the objectives of the contraction LPs.
    fn image_rows(&self, sys: &LinearSystem) -> Result<Vec<Vec<Rational>>> {
        check_dim(self.dim(), sys.dim())?;
        let la = self.l.mul(sys.matrix())?;
        let mut rows: Vec<Vec<Rational>> = la.row_iter().map(<[Rational]>::to_vec).collect();
        rows.extend(la.row_iter().map(|r| r.iter().map(|v| -v).collect::<Vec<_>>()));
        Ok(rows)
    }
}

fn support_value(cell: &Cell, objective: &[Rational]) -> Result<Rational> {
    match cell.support(objective)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        // Full column rank makes every sublevel set bounded and non-empty.
        other => Err(Error::invariant(format!("sublevel LP not optimal: {other:?}"))),
    }
}

/// Least `ρ*` with `‖LAx‖∞ ≤ ρ*‖Lx‖∞` for all `x`: the largest support
/// value of the rows of `±LA` over the unit sublevel set.
pub fn verify_contraction(lf: &PolyhedralLF, sys: &LinearSystem) -> Result<Rational> {
    verify_contraction_with(lf, sys, Execution::default())
}

pub fn verify_contraction_with(lf: &PolyhedralLF, sys: &LinearSystem, exec: Execution) -> Result<Rational> {
    let rows = lf.image_rows(sys)?;
    let unit = lf.sublevel_cell(&Rational::one());
    let values = exec.map(&rows, |row| support_value(&unit, row));
    let mut best = Rational::zero();
    for v in values {
        best = best.max(v?);
    }
    Ok(best)
}

/// `Γ₀ = Γ_D < Γ₁ < … < Γ_N = Γ_X` with `Γ_{i+1} = Γ_i / ρ` below the top.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSequence {
    gammas: Vec<Rational>,
}

impl LevelSequence {
    pub fn new(gamma_d: &Rational, gamma_x: &Rational, rho: &Rational) -> Result<Self> {
        if !gamma_d.is_positive() || gamma_d >= gamma_x {
            return Err(Error::input(
                InputCode::GammaOrder,
                format!("need 0 < gamma_D < gamma_X, got {gamma_d} and {gamma_x}"),
            ));
        }
        if !rho.is_positive() || *rho >= Rational::one() {
            return Err(Error::input(
                InputCode::RhoRange,
                format!("rho = {rho} is not in (0,1)"),
            ));
        }
        let step = rho.recip();
        let mut gammas = vec![gamma_d.clone()];
        let mut next = gamma_d * &step;
        while next < *gamma_x {
            gammas.push(next.clone());
            next *= &step;
        }
        gammas.push(gamma_x.clone());
        Ok(LevelSequence { gammas })
    }

    /// Number of steps `N`; there are `N + 1` levels.
    pub fn n(&self) -> usize {
        self.gammas.len() - 1
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.gammas
    }

    pub fn gamma(&self, i: usize) -> &Rational {
        &self.gammas[i]
    }

    /// Slice holding a point of Lyapunov value `v` (outer-closed), if `v ≤ Γ_N`.
    pub fn slice_of_value(&self, v: &Rational) -> Option<usize> {
        self.gammas.iter().position(|g| v <= g)
    }
}

pub fn level_sequence(gamma_d: &Rational, gamma_x: &Rational, rho: &Rational) -> Result<LevelSequence> {
    LevelSequence::new(gamma_d, gamma_x, rho)
}

/// `S₀ = P_{Γ₀}` and `S_i = P_{Γ_i} ∖ P_{Γ_{i-1}}`.
pub fn slices(lf: &PolyhedralLF, seq: &LevelSequence) -> Result<Vec<Region>> {
    let levels: Vec<Region> = seq
        .gammas()
        .iter()
        .map(|g| Region::single(lf.sublevel_cell(g)))
        .collect();
    let mut out = vec![levels[0].clone()];
    for i in 1..levels.len() {
        out.push(levels[i].difference(&levels[i - 1])?.remove_redundancy());
    }
    Ok(out)
}

/// Exact check that `A·P_{Γ_i} ⊆ P_{Γ_{i-1}}` for every `i ≥ 1`.
pub fn slice_descent_check(lf: &PolyhedralLF, sys: &LinearSystem, seq: &LevelSequence) -> Result<bool> {
    let rows = lf.image_rows(sys)?;
    for i in 1..=seq.n() {
        let cell = lf.sublevel_cell(seq.gamma(i));
        let bound = seq.gamma(i - 1);
        for row in &rows {
            if support_value(&cell, row)? > *bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
