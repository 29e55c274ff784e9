//! Exact trajectories of the embedding system and sample-based
//! cross-validation of the quotient.

use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::abstraction::{observation_of, Abstraction, BlockId, Observation, ObservedRegion};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{Cell, Point};
use crate::logic::{eval_ltl_lasso, Formula, LassoWord};
use crate::lyapunov::LinearSystem;
use crate::rational::{format_pq, ratio, Rational};
use crate::verify::SatisfyingSet;

/// Points up to and including the first one in `D`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<Point>,
    pub observations: Vec<Observation>,
}

impl Trajectory {
    /// Observations before `D`, then `PI_D` forever.
    pub fn word(&self) -> LassoWord {
        let prefix = self.observations[..self.observations.len() - 1]
            .iter()
            .map(Observation::letter)
            .collect();
        LassoWord::new(prefix, vec![Observation::PiD.letter()])
    }

    /// Number of steps taken before reaching `D`.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }
}

/// Iterates `x ↦ A x` from `x0` until `D` is entered, failing if that takes
/// more than `max_steps` steps.
pub fn simulate(
    sys: &LinearSystem,
    x_cell: &Cell,
    d_cell: &Cell,
    regions: &[ObservedRegion],
    x0: &Point,
    max_steps: usize,
) -> Result<Trajectory> {
    let mut points = vec![x0.clone()];
    let mut observations = vec![observation_of(x0, regions, x_cell, d_cell)?];
    while *observations.last().expect("non-empty") != Observation::PiD {
        if points.len() > max_steps {
            return Err(Error::invariant(format!(
                "trajectory from {x0} has not reached D after {max_steps} steps"
            )));
        }
        let next = sys.step(points.last().expect("non-empty"))?;
        let obs = observation_of(&next, regions, x_cell, d_cell)
            .map_err(|_| Error::invariant(format!("trajectory from {x0} left X at {next}")))?;
        points.push(next);
        observations.push(obs);
    }
    Ok(Trajectory { points, observations })
}

pub fn simulate_abstraction(abs: &Abstraction, x0: &Point) -> Result<Trajectory> {
    simulate(
        &abs.system,
        &abs.x_cell,
        &abs.d_cell,
        &abs.regions,
        x0,
        abs.n_levels() + 1,
    )
}

#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub index: usize,
    pub x: Point,
    pub block: BlockId,
    pub steps: usize,
    /// Concrete word equals the quotient word of the block.
    pub word_ok: bool,
    /// Formula truth on the concrete word equals satisfying-set membership.
    pub verdict_ok: bool,
    /// The block of `A x` is the recorded successor (always true in `D`).
    pub successor_ok: bool,
    /// Trajectory length is bounded by the block's slice index.
    pub steps_ok: bool,
}

impl SampleOutcome {
    pub fn ok(&self) -> bool {
        self.word_ok && self.verdict_ok && self.successor_ok && self.steps_ok
    }
}

#[derive(Debug, Clone, Default)]
pub struct CrossValidation {
    pub samples: Vec<SampleOutcome>,
}

impl CrossValidation {
    pub fn mismatches(&self) -> usize {
        self.samples.iter().filter(|s| !s.ok()).count()
    }

    pub fn summary(&self) -> String {
        let count = |f: fn(&SampleOutcome) -> bool| self.samples.iter().filter(|s| !f(s)).count();
        format!(
            "cross-validation: {} samples, {} word mismatches, {} verdict mismatches, \
             {} successor mismatches, {} overlong trajectories",
            self.samples.len(),
            count(|s| s.word_ok),
            count(|s| s.verdict_ok),
            count(|s| s.successor_ok),
            count(|s| s.steps_ok),
        )
    }

    /// One `sample <k> x=<...> word_ok=<bool> verdict_ok=<bool>` line per sample.
    pub fn lines(&self) -> String {
        let mut out = String::new();
        for s in &self.samples {
            let coords: Vec<String> = s.x.coords().iter().map(format_pq).collect();
            let _ = writeln!(
                out,
                "sample {} x=({}) block={} word_ok={} verdict_ok={}",
                s.index,
                coords.join(","),
                s.block,
                s.word_ok,
                s.verdict_ok
            );
        }
        out
    }
}

/// Draws points: three quarters block-directed (round robin over blocks,
/// so lower-dimensional blocks are hit too), the rest uniform on a rational
/// grid over the bounding box of `X`, kept if they fall inside `X`.
pub fn sample_points(abs: &Abstraction, count: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let blocks: Vec<&Cell> = abs.partition.blocks().map(|b| &b.cell).collect();
    let directed = if count == 1 { 1 } else { count * 3 / 4 };
    let mut per_block = vec![0usize; blocks.len()];
    for k in 0..directed {
        per_block[k % blocks.len()] += 1;
    }
    let mut points = Vec::with_capacity(count);
    for (cell, &m) in blocks.iter().zip(&per_block) {
        if m > 0 {
            points.extend(cell.sample_points(m, &mut rng)?);
        }
    }
    let (lo, hi) = abs
        .x_cell
        .bounding_box()
        .ok_or_else(|| Error::invariant("X has no bounding box"))?;
    const GRID: i64 = 10_000;
    let mut attempts = 0;
    while points.len() < count {
        attempts += 1;
        if attempts > 1000 * count {
            return Err(Error::invariant("rejection sampling over X does not terminate"));
        }
        let coords: Vec<Rational> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| l + (h - l) * ratio(rng.gen_range(0..=GRID), GRID))
            .collect();
        let p = Point::new(coords);
        if abs.x_cell.contains_point(&p)? {
            points.push(p);
        }
    }
    Ok(points)
}

fn check_sample(
    abs: &Abstraction,
    formula: &Formula,
    sat: &SatisfyingSet,
    index: usize,
    x: &Point,
) -> Result<SampleOutcome> {
    let traj = simulate_abstraction(abs, x)?;
    let block = abs.cell_of(x)?;
    let concrete = traj.word();
    let word_ok = abs.word(block)? == concrete;
    let verdict_ok = eval_ltl_lasso(formula, &concrete) == sat.contains(block);
    let q = &abs.quotient;
    let successor_ok = if block == q.d_state() {
        true
    } else {
        abs.cell_of(&traj.points[1])? == q.successor(block)
    };
    Ok(SampleOutcome {
        index,
        x: x.clone(),
        block,
        steps: traj.steps(),
        word_ok,
        verdict_ok,
        successor_ok,
        steps_ok: traj.steps() <= q.slice_index(block),
    })
}

pub fn cross_validate(
    abs: &Abstraction,
    formula: &Formula,
    sat: &SatisfyingSet,
    sample_count: usize,
    seed: u64,
    exec: Execution,
) -> Result<CrossValidation> {
    let points = sample_points(abs, sample_count, seed)?;
    let results = exec.map_range(points.len(), |k| check_sample(abs, formula, sat, k, &points[k]));
    Ok(CrossValidation {
        samples: results.into_iter().collect::<Result<_>>()?,
    })
}
