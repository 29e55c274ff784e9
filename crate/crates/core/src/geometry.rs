//! Partially-open polytopes ("cells") and finite disjoint unions of them.
//!
//! A [`Cell`] is a conjunction of affine constraints, each either `a·x ≤ b`
//! or `a·x < b`. Cells are closed under intersection and linear preimage,
//! and the complement of a cell is a disjoint union of cells, which makes
//! the family of [`Region`]s closed under every Boolean operation used by
//! the abstraction.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{check_dim, Error, Result};
use crate::lp::{self, LpOutcome, Row};
use crate::matrix::Matrix;
use crate::rational::{dot, int, ratio, Rational};

/// `normal · x ≤ offset` or, when `strict`, `normal · x < offset`.
///
/// Coefficients are kept scaled to coprime integers so that equal
/// halfspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    normal: Vec<Rational>,
    offset: Rational,
    strict: bool,
}

impl Constraint {
    pub fn new(normal: Vec<Rational>, offset: Rational, strict: bool) -> Result<Self> {
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::Precondition("constraint normal is the zero vector".into()));
        }
        Ok(Self::normalized(normal, offset, strict))
    }

    pub fn non_strict(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        Self::new(normal, offset, false)
    }

    pub fn strict(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        Self::new(normal, offset, true)
    }

    /// Zero normals are allowed here; they only arise from preimages under
    /// singular maps and encode an unsatisfiable constant row.
    fn normalized(mut normal: Vec<Rational>, mut offset: Rational, strict: bool) -> Self {
        let mut lcm = BigInt::one();
        for v in normal.iter().chain(std::iter::once(&offset)) {
            lcm = lcm.lcm(v.denom());
        }
        let mut gcd = BigInt::zero();
        for v in normal.iter().chain(std::iter::once(&offset)) {
            gcd = gcd.gcd(&(v.numer() * (&lcm / v.denom())));
        }
        if !gcd.is_zero() {
            let scale = Rational::new(lcm, gcd);
            for v in &mut normal {
                *v *= &scale;
            }
            offset *= &scale;
        }
        Constraint { normal, offset, strict }
    }

    pub fn normal(&self) -> &[Rational] {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    fn is_constant(&self) -> bool {
        self.normal.iter().all(Zero::is_zero)
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.normal, x);
        if self.strict {
            lhs < self.offset
        } else {
            lhs <= self.offset
        }
    }

    /// The set-theoretic complement: `a·x ≤ b` becomes `-a·x < -b`.
    pub fn negated(&self) -> Constraint {
        Constraint {
            normal: self.normal.iter().map(|v| -v).collect(),
            offset: -&self.offset,
            strict: !self.strict,
        }
    }

    /// The closed version of this halfspace.
    pub fn closure(&self) -> Constraint {
        Constraint {
            strict: false,
            ..self.clone()
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(|v| v.to_string()).collect();
        let op = if self.strict { "<" } else { "<=" };
        write!(f, "[{}]·x {op} {}", terms.join(", "), self.offset)
    }
}

/// A point of `Qⁿ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Point(pub Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn origin(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&v| int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn apply(&self, a: &Matrix) -> Result<Point> {
        Ok(Point(a.mul_vec(&self.0)?))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A convex, possibly unbounded and possibly partially open polyhedron.
#[derive(Clone, PartialEq, Eq)]
pub struct Cell {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl Cell {
    /// The whole space `Qⁿ`.
    pub fn universe(dim: usize) -> Self {
        Cell {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn new(dim: usize, constraints: Vec<Constraint>) -> Result<Self> {
        for c in &constraints {
            check_dim(dim, c.dim())?;
        }
        Ok(Cell { dim, constraints })
    }

    /// Closed polytope `{x : H x ≤ h}`.
    pub fn from_halfspaces(h: &Matrix, rhs: &[Rational]) -> Result<Self> {
        check_dim(h.rows(), rhs.len())?;
        let constraints = h
            .row_iter()
            .zip(rhs)
            .map(|(row, b)| Constraint::non_strict(row.to_vec(), b.clone()))
            .collect::<Result<Vec<_>>>()?;
        Cell::new(h.cols(), constraints)
    }

    /// Axis-aligned box `lo ≤ x ≤ hi` (closed).
    pub fn closed_box(lo: &[Rational], hi: &[Rational]) -> Result<Self> {
        check_dim(lo.len(), hi.len())?;
        let n = lo.len();
        let mut cs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[i] = int(1);
            cs.push(Constraint::non_strict(e.clone(), hi[i].clone())?);
            e[i] = int(-1);
            cs.push(Constraint::non_strict(e, -&lo[i])?);
        }
        Cell::new(n, cs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_universe(&self) -> bool {
        self.constraints.is_empty()
    }

    fn with(&self, extra: Constraint) -> Cell {
        let mut constraints = self.constraints.clone();
        constraints.push(extra);
        Cell {
            dim: self.dim,
            constraints,
        }
    }

    /// Solves `max t` over `{strict rows: a·x + t ≤ b, other rows: a·x ≤ b,
    /// 0 ≤ t ≤ 1}`; returns the maximizer when `t* > 0`.
    fn slack_point(&self) -> Option<(Point, Rational)> {
        let n = self.dim;
        let mut rows: Vec<Row> = Vec::with_capacity(self.constraints.len() + 2);
        for c in &self.constraints {
            let mut coeffs = c.normal.clone();
            coeffs.push(if c.strict { int(1) } else { Rational::zero() });
            rows.push(Row::new(coeffs, c.offset.clone()));
        }
        let mut t_unit = vec![Rational::zero(); n + 1];
        t_unit[n] = int(1);
        rows.push(Row::new(t_unit.clone(), int(1)));
        t_unit[n] = int(-1);
        rows.push(Row::new(t_unit, Rational::zero()));
        let mut objective = vec![Rational::zero(); n + 1];
        objective[n] = int(1);
        match lp::maximize(&objective, &rows) {
            LpOutcome::Optimal { mut point, value } if value.is_positive() => {
                point.truncate(n);
                Some((Point(point), value))
            }
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        if self.constraints.is_empty() {
            return false;
        }
        self.slack_point().is_none()
    }

    /// Conjunction of both constraint lists; the caller checks emptiness.
    pub fn intersect(&self, other: &Cell) -> Result<Cell> {
        check_dim(self.dim, other.dim)?;
        let mut constraints = self.constraints.clone();
        for c in &other.constraints {
            if !constraints.contains(c) {
                constraints.push(c.clone());
            }
        }
        Ok(Cell {
            dim: self.dim,
            constraints,
        })
    }

    /// Disjoint "first violated row" decomposition of the complement.
    pub fn complement(&self) -> Region {
        let pieces = (0..self.constraints.len()).map(|i| {
            let mut cs = self.constraints[..i].to_vec();
            cs.push(self.constraints[i].negated());
            Cell {
                dim: self.dim,
                constraints: cs,
            }
        });
        Region::from_disjoint_cells(self.dim, pieces)
    }

    /// `self ∖ other` as disjoint non-empty cells.
    ///
    /// Rows of `other` already implied by the pieces built so far produce
    /// no piece and are not added to the running prefix.
    pub fn minus(&self, other: &Cell) -> Result<Vec<Cell>> {
        check_dim(self.dim, other.dim)?;
        let mut out = Vec::new();
        let mut prefix = self.clone();
        for c in &other.constraints {
            if prefix.constraints.contains(c) {
                continue;
            }
            let piece = prefix.with(c.negated());
            if piece.is_empty() {
                continue;
            }
            out.push(piece);
            prefix = prefix.with(c.clone());
            if prefix.is_empty() {
                break;
            }
        }
        Ok(out)
    }

    pub fn is_subset_of(&self, other: &Cell) -> Result<bool> {
        check_dim(self.dim, other.dim)?;
        Ok(other
            .constraints
            .iter()
            .all(|c| self.constraints.contains(c) || self.with(c.negated()).is_empty()))
    }

    /// `{x : A x ∈ self}`: each row `(a, b, s)` becomes `(Aᵀa, b, s)`.
    pub fn preimage_linear(&self, a: &Matrix) -> Result<Cell> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        check_dim(self.dim, a.rows())?;
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            let normal = a.transpose_mul_vec(&c.normal)?;
            let row = Constraint::normalized(normal, c.offset.clone(), c.strict);
            if row.is_constant() && row.holds_at(&vec![Rational::zero(); self.dim]) {
                continue;
            }
            if !constraints.contains(&row) {
                constraints.push(row);
            }
        }
        Ok(Cell {
            dim: self.dim,
            constraints,
        })
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool> {
        check_dim(self.dim, p.dim())?;
        Ok(self.constraints.iter().all(|c| c.holds_at(&p.0)))
    }

    /// A point satisfying every strict row strictly.
    pub fn sample_point(&self) -> Result<Point> {
        if self.constraints.is_empty() {
            return Ok(Point::origin(self.dim));
        }
        self.slack_point()
            .map(|(p, _)| p)
            .ok_or_else(|| Error::Precondition("sample_point on an empty cell".into()))
    }

    /// `count` points of the cell: the slack maximizer plus random convex
    /// combinations with maximizers of random directions.
    pub fn sample_points<R: Rng>(&self, count: usize, rng: &mut R) -> Result<Vec<Point>> {
        let center = self.sample_point()?;
        let mut out = vec![center.clone()];
        if self.constraints.is_empty() {
            while out.len() < count {
                out.push(Point(
                    (0..self.dim).map(|_| ratio(rng.gen_range(-1000..=1000), 100)).collect(),
                ));
            }
            out.truncate(count);
            return Ok(out);
        }
        let (_, t_star) = self.slack_point().expect("non-empty");
        let half = t_star / int(2);
        // Strict rows keep half the slack margin, so every extreme point
        // below stays strictly inside them.
        let mut rows: Vec<Row> = self
            .constraints
            .iter()
            .map(|c| {
                let rhs = if c.strict { &c.offset - &half } else { c.offset.clone() };
                Row::new(c.normal.clone(), rhs)
            })
            .collect();
        let bound = int(1_000_000);
        for i in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[i] = int(1);
            rows.push(Row::new(e.clone(), &center.0[i] + &bound));
            e[i] = int(-1);
            rows.push(Row::new(e, -&center.0[i] + &bound));
        }
        while out.len() < count {
            let dir: Vec<Rational> = (0..self.dim).map(|_| int(rng.gen_range(-100..=100))).collect();
            let extreme = match lp::maximize(&dir, &rows) {
                LpOutcome::Optimal { point, .. } => point,
                _ => center.0.clone(),
            };
            let w = ratio(rng.gen_range(0..=1000), 1000);
            let one_minus = int(1) - &w;
            let p: Vec<Rational> = center
                .0
                .iter()
                .zip(&extreme)
                .map(|(c, e)| c * &one_minus + e * &w)
                .collect();
            out.push(Point(p));
        }
        out.truncate(count.max(1));
        Ok(out)
    }

    /// Drops every constraint implied by the remaining ones.
    pub fn remove_redundancy(&self) -> Cell {
        let mut kept: Vec<Constraint> = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            if c.is_constant() && c.holds_at(&vec![Rational::zero(); self.dim]) {
                continue;
            }
            if !kept.contains(c) {
                kept.push(c.clone());
            }
        }
        let probe = Cell {
            dim: self.dim,
            constraints: kept.clone(),
        };
        if probe.is_empty() {
            return probe;
        }
        let mut i = 0;
        while i < kept.len() {
            let mut others = kept.clone();
            let row = others.remove(i);
            let test = Cell {
                dim: self.dim,
                constraints: others.clone(),
            }
            .with(row.negated());
            if test.is_empty() {
                kept = others;
            } else {
                i += 1;
            }
        }
        Cell {
            dim: self.dim,
            constraints: kept,
        }
    }

    /// Closed-form bounding box (per-coordinate LP), `None` if unbounded or empty.
    pub fn bounding_box(&self) -> Option<(Vec<Rational>, Vec<Rational>)> {
        let rows: Vec<Row> = self
            .constraints
            .iter()
            .map(|c| Row::new(c.normal.clone(), c.offset.clone()))
            .collect();
        let mut lo = Vec::with_capacity(self.dim);
        let mut hi = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut e = vec![Rational::zero(); self.dim];
            e[i] = int(1);
            match lp::maximize(&e, &rows) {
                LpOutcome::Optimal { value, .. } => hi.push(value),
                _ => return None,
            }
            e[i] = int(-1);
            match lp::maximize(&e, &rows) {
                LpOutcome::Optimal { value, .. } => lo.push(-value),
                _ => return None,
            }
        }
        Some((lo, hi))
    }

    /// Maximum of `objective · x` over the closure of the cell.
    pub fn support(&self, objective: &[Rational]) -> Result<LpOutcome> {
        check_dim(self.dim, objective.len())?;
        let rows: Vec<Row> = self
            .constraints
            .iter()
            .map(|c| Row::new(c.normal.clone(), c.offset.clone()))
            .collect();
        Ok(lp::maximize(objective, &rows))
    }

    /// Same set as points, checked both ways.
    pub fn same_set(&self, other: &Cell) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.constraints).finish()
    }
}

/// A finite union of pairwise disjoint, non-empty cells.
#[derive(Clone, PartialEq, Eq)]
pub struct Region {
    dim: usize,
    cells: Vec<Cell>,
}

impl Region {
    pub fn empty(dim: usize) -> Self {
        Region { dim, cells: Vec::new() }
    }

    /// A region of one cell (empty region if the cell is empty).
    pub fn single(cell: Cell) -> Self {
        let dim = cell.dim;
        Region::from_disjoint_cells(dim, std::iter::once(cell))
    }

    /// Caller guarantees pairwise disjointness; empty cells are dropped.
    pub fn from_disjoint_cells(dim: usize, cells: impl IntoIterator<Item = Cell>) -> Self {
        Region {
            dim,
            cells: cells.into_iter().filter(|c| !c.is_empty()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Cell> {
        self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_point(&self, p: &Point) -> Result<bool> {
        for c in &self.cells {
            if c.contains_point(p)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `self ∖ other`, cell by cell. Pieces are kept irredundant so that
    /// long subtraction chains do not accumulate constraints.
    pub fn difference(&self, other: &Region) -> Result<Region> {
        check_dim(self.dim, other.dim)?;
        let mut pieces = self.cells.clone();
        for sub in &other.cells {
            let mut next = Vec::with_capacity(pieces.len());
            for p in pieces {
                if p.intersect(sub)?.is_empty() {
                    next.push(p);
                    continue;
                }
                next.extend(p.minus(sub)?.iter().map(Cell::remove_redundancy));
            }
            pieces = next;
            if pieces.is_empty() {
                break;
            }
        }
        Ok(Region {
            dim: self.dim,
            cells: pieces,
        })
    }

    pub fn intersect(&self, other: &Region) -> Result<Region> {
        check_dim(self.dim, other.dim)?;
        let mut cells = Vec::new();
        for a in &self.cells {
            for b in &other.cells {
                let c = a.intersect(b)?;
                if !c.is_empty() {
                    cells.push(c);
                }
            }
        }
        Ok(Region { dim: self.dim, cells })
    }

    /// Union with a region known to be disjoint from `self`.
    pub fn extend_disjoint(&mut self, other: Region) {
        debug_assert_eq!(self.dim, other.dim);
        self.cells.extend(other.cells);
    }

    pub fn is_subset_of(&self, other: &Region) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn same_set(&self, other: &Region) -> Result<bool> {
        Ok(self.is_subset_of(other)? && other.is_subset_of(self)?)
    }

    pub fn remove_redundancy(&self) -> Region {
        Region {
            dim: self.dim,
            cells: self.cells.iter().map(Cell::remove_redundancy).collect(),
        }
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.cells).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_f64, ratio};

    fn le(a: &[i64], b: i64) -> Constraint {
        Constraint::non_strict(a.iter().map(|&v| int(v)).collect(), int(b)).unwrap()
    }
    fn lt(a: &[i64], b: i64) -> Constraint {
        Constraint::strict(a.iter().map(|&v| int(v)).collect(), int(b)).unwrap()
    }
    fn cell1(cs: Vec<Constraint>) -> Cell {
        Cell::new(1, cs).unwrap()
    }
    /// [lo, hi] with optional open ends.
    fn interval(lo: i64, lo_open: bool, hi: i64, hi_open: bool) -> Cell {
        let upper = if hi_open { lt(&[1], hi) } else { le(&[1], hi) };
        let lower = if lo_open { lt(&[-1], -lo) } else { le(&[-1], -lo) };
        cell1(vec![upper, lower])
    }
    fn pt(v: &[i64]) -> Point {
        Point::from_ints(v)
    }

    #[test]
    fn emptiness_examples() {
        assert!(!cell1(vec![le(&[1], 1), le(&[-1], -1)]).is_empty());
        assert!(cell1(vec![le(&[1], 1), lt(&[-1], -1)]).is_empty());
        assert!(!cell1(vec![lt(&[1], 1), lt(&[-1], 1)]).is_empty());
        assert!(!Cell::universe(3).is_empty());
        assert!(Constraint::non_strict(vec![int(0)], int(1)).is_err());
    }

    #[test]
    fn dimension_errors() {
        assert!(Cell::new(2, vec![le(&[1], 1)]).is_err());
        assert!(Cell::universe(1).intersect(&Cell::universe(2)).is_err());
        assert!(Cell::universe(2).contains_point(&pt(&[1])).is_err());
    }

    #[test]
    fn intersection_examples() {
        let a = interval(0, false, 2, false);
        let b = interval(1, false, 3, false);
        assert!(a
            .intersect(&b)
            .unwrap()
            .same_set(&interval(1, false, 2, false))
            .unwrap());
        let c = interval(0, false, 1, false)
            .intersect(&interval(1, true, 2, false))
            .unwrap();
        assert!(c.is_empty());
        assert!(a.intersect(&Cell::universe(1)).unwrap().same_set(&a).unwrap());
    }

    #[test]
    fn complement_examples() {
        let c = cell1(vec![le(&[1], 1)]).complement();
        assert_eq!(c.cells().len(), 1);
        assert!(c.cells()[0].same_set(&cell1(vec![lt(&[-1], -1)])).unwrap());

        let c = interval(0, false, 1, false).complement();
        assert_eq!(c.cells().len(), 2);
        assert!(c.contains_point(&Point::new(vec![ratio(-1, 2)])).unwrap());
        assert!(c.contains_point(&Point::new(vec![ratio(3, 2)])).unwrap());
        assert!(!c.contains_point(&pt(&[1])).unwrap());
        assert!(!c.contains_point(&pt(&[0])).unwrap());

        assert!(Cell::universe(2).complement().is_empty());
    }

    #[test]
    fn difference_examples() {
        let a = Region::single(interval(0, false, 2, false));
        let b = Region::single(interval(0, false, 1, false));
        let d = a.difference(&b).unwrap();
        assert!(d.same_set(&Region::single(interval(1, true, 2, false))).unwrap());
        assert!(a.difference(&a).unwrap().is_empty());
        let two = Region::from_disjoint_cells(1, [interval(0, false, 1, false), interval(2, false, 3, false)]);
        assert!(two
            .difference(&Region::single(interval(0, false, 5, false)))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn preimage_examples() {
        let half = Matrix::from_rows(vec![vec![ratio(1, 2)]]).unwrap();
        let p = cell1(vec![le(&[1], 1)]).preimage_linear(&half).unwrap();
        assert!(p.same_set(&cell1(vec![le(&[1], 2)])).unwrap());

        let c = Cell::new(2, vec![le(&[1, 2], 3), lt(&[-1, 0], 4)]).unwrap();
        assert_eq!(c.preimage_linear(&Matrix::identity(2)).unwrap(), c);

        let zero = Matrix::zeros(1, 1);
        assert!(cell1(vec![le(&[1], -1)]).preimage_linear(&zero).unwrap().is_empty());
        assert!(cell1(vec![le(&[1], 1)]).preimage_linear(&zero).unwrap().is_universe());
        let rect = Matrix::zeros(1, 2);
        assert!(Cell::universe(1).preimage_linear(&rect).is_err());
    }

    #[test]
    fn contains_examples() {
        assert!(interval(0, false, 1, false).contains_point(&pt(&[1])).unwrap());
        assert!(!interval(1, true, 2, false).contains_point(&pt(&[1])).unwrap());
        assert!(Cell::universe(1).contains_point(&pt(&[7])).unwrap());
        assert!(!cell1(vec![lt(&[1], 1)]).contains_point(&pt(&[1])).unwrap());
    }

    #[test]
    fn sample_examples() {
        let p = interval(0, false, 2, false).sample_point().unwrap();
        assert!(p.0[0] >= int(0) && p.0[0] <= int(2));
        let p = interval(1, true, 2, false).sample_point().unwrap();
        assert!(p.0[0] > int(1) && p.0[0] <= int(2));
        let p = cell1(vec![le(&[1], 1), le(&[-1], -1)]).sample_point().unwrap();
        assert_eq!(p, pt(&[1]));
        assert!(interval(0, false, 1, true)
            .intersect(&interval(1, false, 2, false))
            .unwrap()
            .sample_point()
            .is_err());
    }

    #[test]
    fn redundancy_examples() {
        let c = cell1(vec![le(&[1], 1), le(&[1], 2)]).remove_redundancy();
        assert_eq!(c.constraints(), &[le(&[1], 1)]);
        let c = cell1(vec![le(&[1], 1), lt(&[1], 2)]).remove_redundancy();
        assert_eq!(c.constraints(), &[le(&[1], 1)]);
        let irr = interval(0, true, 2, false);
        assert_eq!(irr.remove_redundancy(), irr);
        // Strict row is binding here and must stay: x < 1 beats x <= 1.
        let c = cell1(vec![le(&[1], 1), lt(&[1], 1)]).remove_redundancy();
        assert_eq!(c.constraints(), &[lt(&[1], 1)]);
    }

    #[test]
    fn normalization_makes_rows_comparable() {
        let a = Constraint::non_strict(vec![ratio(1, 2), ratio(3, 4)], ratio(5, 4)).unwrap();
        let b = Constraint::non_strict(vec![int(2), int(3)], int(5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(from_f64(0.5), ratio(1, 2));
    }

    // ---- property tests -------------------------------------------------

    use proptest::prelude::*;

    fn arb_constraint(n: usize) -> impl Strategy<Value = Constraint> {
        (proptest::collection::vec(-3i64..=3, n), -4i64..=4, any::<bool>())
            .prop_filter("non-zero normal", |(a, _, _)| a.iter().any(|&v| v != 0))
            .prop_map(|(a, b, s)| Constraint::new(a.into_iter().map(int).collect(), int(b), s).unwrap())
    }

    fn arb_cell(n: usize) -> impl Strategy<Value = Cell> {
        proptest::collection::vec(arb_constraint(n), 0..5).prop_map(move |cs| Cell::new(n, cs).unwrap())
    }

    fn arb_points(n: usize) -> impl Strategy<Value = Vec<Point>> {
        // Quarter-integer grid hits boundaries often.
        proptest::collection::vec(
            proptest::collection::vec(-20i64..=20, n).prop_map(|v| Point(v.into_iter().map(|x| ratio(x, 4)).collect())),
            40,
        )
    }

    fn cell_and_points() -> impl Strategy<Value = (usize, Cell, Cell, Vec<Point>)> {
        (1usize..=3).prop_flat_map(|n| (Just(n), arb_cell(n), arb_cell(n), arb_points(n)))
    }

    /// LP-free emptiness oracle for n ≤ 2: the centroid of the closure's
    /// vertices (inside a big box) lies in the relative interior of the
    /// closure, which for a non-empty convex cell lies inside the cell.
    fn brute_force_empty(c: &Cell) -> bool {
        let n = c.dim();
        let mut rows: Vec<Constraint> = c.constraints().iter().map(Constraint::closure).collect();
        for i in 0..n {
            let mut e = vec![0i64; n];
            e[i] = 1;
            rows.push(le(&e, 100));
            e[i] = -1;
            rows.push(le(&e, 100));
        }
        let closed_ok = |p: &[Rational]| rows.iter().all(|r| r.holds_at(p));
        let mut verts: Vec<Vec<Rational>> = Vec::new();
        if n == 1 {
            for r in &rows {
                let p = vec![&r.offset / &r.normal[0]];
                if closed_ok(&p) {
                    verts.push(p);
                }
            }
        } else {
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    let (a, b) = (&rows[i], &rows[j]);
                    let det = &a.normal[0] * &b.normal[1] - &a.normal[1] * &b.normal[0];
                    if det.is_zero() {
                        continue;
                    }
                    let x = (&a.offset * &b.normal[1] - &b.offset * &a.normal[1]) / &det;
                    let y = (&a.normal[0] * &b.offset - &b.normal[0] * &a.offset) / &det;
                    let p = vec![x, y];
                    if closed_ok(&p) {
                        verts.push(p);
                    }
                }
            }
        }
        if verts.is_empty() {
            return true;
        }
        let k = int(verts.len() as i64);
        let centroid: Vec<Rational> = (0..n)
            .map(|i| verts.iter().fold(Rational::zero(), |acc, v| acc + &v[i]) / &k)
            .collect();
        !c.contains_point(&Point(centroid)).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn intersection_is_conjunction((_n, a, b, pts) in cell_and_points()) {
            let ab = a.intersect(&b).unwrap();
            for p in &pts {
                prop_assert_eq!(
                    ab.contains_point(p).unwrap(),
                    a.contains_point(p).unwrap() && b.contains_point(p).unwrap()
                );
            }
        }

        #[test]
        fn difference_is_set_minus((_n, a, b, pts) in cell_and_points()) {
            let d = Region::single(a.clone()).difference(&Region::single(b.clone())).unwrap();
            for p in &pts {
                prop_assert_eq!(
                    d.contains_point(p).unwrap(),
                    a.contains_point(p).unwrap() && !b.contains_point(p).unwrap()
                );
            }
        }

        #[test]
        fn complement_is_exact_and_disjoint((_n, a, _b, pts) in cell_and_points()) {
            let comp = a.complement();
            for p in &pts {
                prop_assert_eq!(comp.contains_point(p).unwrap(), !a.contains_point(p).unwrap());
            }
            for (i, x) in comp.cells().iter().enumerate() {
                for y in &comp.cells()[i + 1..] {
                    prop_assert!(x.intersect(y).unwrap().is_empty());
                }
            }
        }

        #[test]
        fn preimage_commutes_with_map(
            (n, a, _b, pts) in cell_and_points(),
            entries in proptest::collection::vec(-3i64..=3, 9),
        ) {
            let m = Matrix::from_rows(
                (0..n).map(|i| (0..n).map(|j| ratio(entries[i * 3 + j], 2)).collect()).collect(),
            ).unwrap();
            let pre = a.preimage_linear(&m).unwrap();
            for p in &pts {
                let image = p.apply(&m).unwrap();
                prop_assert_eq!(pre.contains_point(p).unwrap(), a.contains_point(&image).unwrap());
            }
        }

        #[test]
        fn emptiness_matches_vertex_oracle(
            n in 1usize..=2,
            cs in proptest::collection::vec((proptest::collection::vec(-3i64..=3, 2), -4i64..=4, any::<bool>()), 0..6),
        ) {
            let cs: Vec<Constraint> = cs
                .into_iter()
                .filter(|(a, _, _)| a[..n].iter().any(|&v| v != 0))
                .map(|(a, b, s)| Constraint::new(a[..n].iter().map(|&v| int(v)).collect(), int(b), s).unwrap())
                .collect();
            let cell = Cell::new(n, cs).unwrap();
            prop_assert_eq!(cell.is_empty(), brute_force_empty(&cell));
        }

        #[test]
        fn samples_lie_inside((_n, a, _b, _pts) in cell_and_points(), seed in any::<u64>()) {
            use rand::SeedableRng;
            if !a.is_empty() {
                prop_assert!(a.contains_point(&a.sample_point().unwrap()).unwrap());
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                for p in a.sample_points(5, &mut rng).unwrap() {
                    prop_assert!(a.contains_point(&p).unwrap());
                }
            }
        }

        #[test]
        fn redundancy_removal_preserves_set((_n, a, _b, pts) in cell_and_points()) {
            let r = a.remove_redundancy();
            prop_assert!(r.len() <= a.len());
            for p in &pts {
                prop_assert_eq!(r.contains_point(p).unwrap(), a.contains_point(p).unwrap());
            }
        }
    }
}
