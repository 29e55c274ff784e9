//! Bisimulation quotient of the embedding transition system.
//!
//! States of the embedding system are the points of `X`; outside `D` a
//! point steps to `A x`, inside `D` it loops. The partition starts from the
//! observation classes cut along the Lyapunov slices and is refined slice by
//! slice: once every block of slice `i` is known, the preimage of each of
//! them splits the outer blocks, and the blocks that land entirely inside a
//! preimage receive that target as their unique successor.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{check_dim, Error, InputCode, Result};
use crate::exec::Execution;
use crate::geometry::{Cell, Point, Region};
use crate::logic::{LassoWord, Letter, PI_D_ATOM};
use crate::lyapunov::{
    slice_descent_check, slices, verify_contraction_with, LevelSequence, LinearSystem, PolyhedralLF,
};
use crate::rational::Rational;

pub type BlockId = usize;

/// Single-valued observation of a state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Observation {
    Region(String),
    Empty,
    PiD,
}

impl Observation {
    pub fn letter(&self) -> Letter {
        match self {
            Observation::Region(label) => Letter::atom(label),
            Observation::Empty => Letter::empty(),
            Observation::PiD => Letter::atom(PI_D_ATOM),
        }
    }

    pub fn parse(text: &str) -> Observation {
        match text {
            "EMPTY" => Observation::Empty,
            "PI_D" => Observation::PiD,
            other => Observation::Region(other.to_string()),
        }
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observation::Region(label) => f.write_str(label),
            Observation::Empty => f.write_str("EMPTY"),
            Observation::PiD => f.write_str("PI_D"),
        }
    }
}

/// A labelled closed polytope inside `X ∖ D`.
#[derive(Debug, Clone)]
pub struct ObservedRegion {
    label: String,
    cell: Cell,
}

impl ObservedRegion {
    pub fn new(label: impl Into<String>, cell: Cell) -> Result<Self> {
        let label = label.into();
        let valid_ident = label
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        let reserved = matches!(
            label.as_str(),
            "X" | "F" | "G" | "U" | "true" | "false" | "EMPTY" | "PI_D" | PI_D_ATOM
        );
        if !valid_ident || reserved {
            return Err(Error::input(
                InputCode::Malformed,
                format!("region label {label:?} is not a usable atom name"),
            ));
        }
        Ok(ObservedRegion { label, cell })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cell(&self) -> &Cell {
        &self.cell
    }
}

/// Checks every region lies in `X ∖ D` and that regions are pairwise disjoint.
pub fn validate_regions(regions: &[ObservedRegion], x_cell: &Cell, d_cell: &Cell) -> Result<()> {
    let n = x_cell.dim();
    for (i, r) in regions.iter().enumerate() {
        check_dim(n, r.cell.dim())?;
        if regions[..i].iter().any(|o| o.label == r.label) {
            return Err(Error::input(
                InputCode::Malformed,
                format!("duplicate region label {}", r.label),
            ));
        }
        if r.cell.is_empty() {
            return Err(Error::input(
                InputCode::RegionEmpty,
                format!("region {} is empty", r.label),
            ));
        }
        if !r.cell.is_subset_of(x_cell)? || !r.cell.intersect(d_cell)?.is_empty() {
            return Err(Error::input(
                InputCode::RegionDomain,
                format!("region {} is not contained in X \\ D", r.label),
            ));
        }
        for o in &regions[..i] {
            if !r.cell.intersect(&o.cell)?.is_empty() {
                return Err(Error::input(
                    InputCode::RegionOverlap,
                    format!("regions {} and {} overlap", o.label, r.label),
                ));
            }
        }
    }
    Ok(())
}

pub fn observation_of(x: &Point, regions: &[ObservedRegion], x_cell: &Cell, d_cell: &Cell) -> Result<Observation> {
    if !x_cell.contains_point(x)? {
        return Err(Error::Precondition(format!("point {x} is outside X")));
    }
    if d_cell.contains_point(x)? {
        return Ok(Observation::PiD);
    }
    for r in regions {
        if r.cell.contains_point(x)? {
            return Ok(Observation::Region(r.label.clone()));
        }
    }
    Ok(Observation::Empty)
}

#[derive(Debug, Clone)]
pub struct Block {
    pub id: BlockId,
    pub cell: Cell,
    pub observation: Observation,
    pub slice_index: usize,
    pub successor: Option<BlockId>,
}

/// Disjoint labelled blocks covering `X`, each inside one slice.
#[derive(Debug, Clone)]
pub struct Partition {
    dim: usize,
    blocks: BTreeMap<BlockId, Block>,
    slices: Vec<Region>,
    d_block: BlockId,
    next_id: BlockId,
}

enum Split {
    Disjoint,
    Inside,
    Pieces { inside: Vec<Cell>, outside: Vec<Cell> },
}

fn split_cell(cell: &Cell, r: &Region) -> Result<Split> {
    let mut inside = Vec::new();
    for rc in r.cells() {
        let piece = cell.intersect(rc)?;
        if !piece.is_empty() {
            inside.push(piece);
        }
    }
    if inside.is_empty() {
        return Ok(Split::Disjoint);
    }
    let outside = Region::single(cell.clone()).difference(r)?;
    if outside.is_empty() {
        return Ok(Split::Inside);
    }
    Ok(Split::Pieces {
        inside: inside.iter().map(Cell::remove_redundancy).collect(),
        outside: outside.into_cells(),
    })
}

impl Partition {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> + '_ {
        self.blocks.values()
    }

    pub fn block(&self, id: BlockId) -> Option<&Block> {
        self.blocks.get(&id)
    }

    /// The cell an abstract state stands for.
    pub fn eq(&self, id: BlockId) -> Option<&Cell> {
        self.blocks.get(&id).map(|b| &b.cell)
    }

    pub fn d_block(&self) -> BlockId {
        self.d_block
    }

    pub fn slices(&self) -> &[Region] {
        &self.slices
    }

    fn fresh_id(&mut self) -> BlockId {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn insert(&mut self, cell: Cell, observation: Observation, slice_index: usize) -> BlockId {
        let id = self.fresh_id();
        self.blocks.insert(
            id,
            Block {
                id,
                cell,
                observation,
                slice_index,
                successor: None,
            },
        );
        id
    }

    /// Splits every block meeting `r` into its parts inside and outside `r`.
    pub fn refine(&self, r: &Region) -> Result<Partition> {
        let mut out = self.clone();
        let ids: Vec<BlockId> = self.blocks.keys().copied().collect();
        out.refine_blocks(&ids, r, Execution::default())?;
        Ok(out)
    }

    /// Refines the listed blocks by `r`; returns the ids of all resulting
    /// blocks contained in `r`.
    fn refine_blocks(&mut self, ids: &[BlockId], r: &Region, exec: Execution) -> Result<Vec<BlockId>> {
        let splits = exec.map(ids, |id| split_cell(&self.blocks[id].cell, r));
        let mut inside_ids = Vec::new();
        for (&id, split) in ids.iter().zip(splits) {
            match split? {
                Split::Disjoint => {}
                Split::Inside => inside_ids.push(id),
                Split::Pieces { inside, outside } => {
                    let old = self.blocks.remove(&id).expect("listed block exists");
                    for cell in inside {
                        inside_ids.push(self.insert(cell, old.observation.clone(), old.slice_index));
                    }
                    for cell in outside {
                        self.insert(cell, old.observation.clone(), old.slice_index);
                    }
                }
            }
        }
        Ok(inside_ids)
    }

    /// Slice holding `x`, by direct membership in the slice regions.
    pub fn slice_of(&self, x: &Point) -> Result<Option<usize>> {
        for (i, s) in self.slices.iter().enumerate() {
            if s.contains_point(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// The unique block containing `x`.
    pub fn cell_of(&self, x: &Point) -> Result<BlockId> {
        check_dim(self.dim, x.dim())?;
        let slice = self
            .slice_of(x)?
            .ok_or_else(|| Error::Precondition(format!("point {x} is outside X")))?;
        for b in self.blocks.values().filter(|b| b.slice_index == slice) {
            if b.cell.contains_point(x)? {
                return Ok(b.id);
            }
        }
        Err(Error::invariant(format!("no block of slice {slice} contains {x}")))
    }
}

/// `P_X` cut by the slices: inside each slice cell, one block per region
/// overlap plus the unobserved remainder; `D = S₀` stays a single block.
pub fn initial_partition(
    x_cell: &Cell,
    d_cell: &Cell,
    regions: &[ObservedRegion],
    slices: &[Region],
) -> Result<Partition> {
    initial_partition_with(x_cell, d_cell, regions, slices, Execution::default())
}

fn initial_partition_with(
    x_cell: &Cell,
    d_cell: &Cell,
    regions: &[ObservedRegion],
    slices: &[Region],
    exec: Execution,
) -> Result<Partition> {
    validate_regions(regions, x_cell, d_cell)?;
    let n = x_cell.dim();
    let region_union = Region::from_disjoint_cells(n, regions.iter().map(|r| r.cell.clone()));

    let mut partition = Partition {
        dim: n,
        blocks: BTreeMap::new(),
        slices: slices.to_vec(),
        d_block: 0,
        next_id: 0,
    };
    partition.d_block = partition.insert(d_cell.clone(), Observation::PiD, 0);

    let work: Vec<(usize, Cell)> = slices
        .iter()
        .enumerate()
        .skip(1)
        .flat_map(|(i, s)| s.cells().iter().map(move |c| (i, c.clone())))
        .collect();
    let pieces = exec.map(&work, |(i, cell)| -> Result<Vec<(usize, Cell, Observation)>> {
        let mut out = Vec::new();
        for r in regions {
            let piece = cell.intersect(&r.cell)?;
            if !piece.is_empty() {
                out.push((*i, piece.remove_redundancy(), Observation::Region(r.label.clone())));
            }
        }
        let rest = Region::single(cell.clone()).difference(&region_union)?;
        out.extend(rest.into_cells().into_iter().map(|c| (*i, c, Observation::Empty)));
        Ok(out)
    });
    for chunk in pieces {
        for (i, cell, obs) in chunk? {
            partition.insert(cell, obs, i);
        }
    }
    Ok(partition)
}

/// `{x ∈ X ∖ D : A x ∈ target}`.
pub fn find_pre(target: &Region, sys: &LinearSystem, x_cell: &Cell, d_cell: &Cell) -> Result<Region> {
    let domain = Region::single(x_cell.clone()).difference(&Region::single(d_cell.clone()))?;
    let mut cells = Vec::new();
    for t in target.cells() {
        let pre = t.preimage_linear(sys.matrix())?;
        for dc in domain.cells() {
            let piece = pre.intersect(dc)?;
            if !piece.is_empty() {
                cells.push(piece.remove_redundancy());
            }
        }
    }
    // Target cells are disjoint and so are the domain cells, hence so are
    // the pieces (the map is a function).
    Ok(Region::from_disjoint_cells(x_cell.dim(), cells))
}

/// Deterministic finite quotient over the partition blocks.
#[derive(Debug, Clone)]
pub struct QuotientTS {
    states: Vec<BlockId>,
    successor: BTreeMap<BlockId, BlockId>,
    observation: BTreeMap<BlockId, Observation>,
    slice: BTreeMap<BlockId, usize>,
    d_state: BlockId,
}

impl QuotientTS {
    pub fn from_partition(p: &Partition) -> Result<QuotientTS> {
        let mut successor = BTreeMap::new();
        for b in p.blocks() {
            let s = b
                .successor
                .ok_or_else(|| Error::invariant(format!("block {} has no successor", b.id)))?;
            if !p.blocks.contains_key(&s) {
                return Err(Error::invariant(format!("block {} points to missing block {s}", b.id)));
            }
            successor.insert(b.id, s);
        }
        let mut states: Vec<BlockId> = p.blocks.keys().copied().collect();
        states.sort_by_key(|id| (p.blocks[id].slice_index, *id));
        Ok(QuotientTS {
            states,
            successor,
            observation: p.blocks().map(|b| (b.id, b.observation.clone())).collect(),
            slice: p.blocks().map(|b| (b.id, b.slice_index)).collect(),
            d_state: p.d_block,
        })
    }

    /// Assembles a quotient from raw parts (used by the text importer).
    pub fn from_parts(entries: Vec<(BlockId, usize, Observation, BlockId)>, d_state: BlockId) -> Result<QuotientTS> {
        let mut successor = BTreeMap::new();
        let mut observation = BTreeMap::new();
        let mut slice = BTreeMap::new();
        for (id, s, obs, succ) in entries {
            if successor.insert(id, succ).is_some() {
                return Err(Error::input(InputCode::Malformed, format!("state {id} listed twice")));
            }
            observation.insert(id, obs);
            slice.insert(id, s);
        }
        if successor.values().any(|s| !successor.contains_key(s)) || !successor.contains_key(&d_state) {
            return Err(Error::input(InputCode::Malformed, "transition to an unknown state"));
        }
        let mut states: Vec<BlockId> = successor.keys().copied().collect();
        states.sort_by_key(|id| (slice[id], *id));
        Ok(QuotientTS {
            states,
            successor,
            observation,
            slice,
            d_state,
        })
    }

    /// States sorted by `(slice_index, id)`.
    pub fn states(&self) -> &[BlockId] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successor(&self, q: BlockId) -> BlockId {
        self.successor[&q]
    }

    pub fn observation(&self, q: BlockId) -> &Observation {
        &self.observation[&q]
    }

    pub fn slice_index(&self, q: BlockId) -> usize {
        self.slice[&q]
    }

    pub fn d_state(&self) -> BlockId {
        self.d_state
    }

    pub fn contains(&self, q: BlockId) -> bool {
        self.successor.contains_key(&q)
    }

    /// The unique word from `start`: observations up to (excluding) the
    /// `D`-state, then `PI_D` forever.
    pub fn word(&self, start: BlockId, max_len: usize) -> Result<LassoWord> {
        if !self.contains(start) {
            return Err(Error::Precondition(format!("unknown state {start}")));
        }
        let mut prefix = Vec::new();
        let mut q = start;
        while q != self.d_state {
            if prefix.len() >= max_len {
                return Err(Error::invariant(format!(
                    "word from {start} does not reach D within {max_len} steps"
                )));
            }
            prefix.push(self.observation[&q].letter());
            q = self.successor[&q];
        }
        Ok(LassoWord::new(prefix, vec![Observation::PiD.letter()]))
    }
}

pub fn quotient_word(q: &QuotientTS, start: BlockId, max_len: usize) -> Result<LassoWord> {
    q.word(start, max_len)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AbstractionOptions {
    pub execution: Execution,
}

/// The quotient together with everything needed to interpret it.
#[derive(Debug, Clone)]
pub struct Abstraction {
    pub system: LinearSystem,
    pub lf: PolyhedralLF,
    pub levels: LevelSequence,
    pub rho_star: Rational,
    pub x_cell: Cell,
    pub d_cell: Cell,
    pub regions: Vec<ObservedRegion>,
    pub partition: Partition,
    pub quotient: QuotientTS,
}

pub fn build_quotient(
    sys: &LinearSystem,
    lf: &PolyhedralLF,
    gamma_d: &Rational,
    gamma_x: &Rational,
    regions: &[ObservedRegion],
) -> Result<Abstraction> {
    build_quotient_with(sys, lf, gamma_d, gamma_x, regions, &AbstractionOptions::default())
}

pub fn build_quotient_with(
    sys: &LinearSystem,
    lf: &PolyhedralLF,
    gamma_d: &Rational,
    gamma_x: &Rational,
    regions: &[ObservedRegion],
    opts: &AbstractionOptions,
) -> Result<Abstraction> {
    let exec = opts.execution;
    check_dim(lf.dim(), sys.dim())?;
    let rho_star = verify_contraction_with(lf, sys, exec)?;
    let levels = LevelSequence::new(gamma_d, gamma_x, lf.rho())?;
    if !slice_descent_check(lf, sys, &levels)? {
        return Err(Error::input(
            InputCode::Contraction,
            format!(
                "A does not map each sublevel set into the next one inward \
                 (certified rate {rho_star}, declared {})",
                lf.rho()
            ),
        ));
    }
    let x_cell = lf.sublevel_cell(gamma_x);
    let d_cell = lf.sublevel_cell(gamma_d);
    let slice_regions = slices(lf, &levels)?;
    let mut partition = initial_partition_with(&x_cell, &d_cell, regions, &slice_regions, exec)?;
    let d = partition.d_block;
    partition.blocks.get_mut(&d).expect("D block").successor = Some(d);

    for i in 0..levels.n() {
        let targets: Vec<(BlockId, Cell)> = partition
            .blocks()
            .filter(|b| b.slice_index == i)
            .map(|b| (b.id, b.cell.clone()))
            .collect();
        for (target, cell) in targets {
            // Blocks outside D are already inside X ∖ D, so the plain
            // preimage cell cuts them exactly as the restricted Pre would.
            // Blocks with a successor lie in the preimage of another target
            // and are disjoint from this one.
            let pre = Region::single(cell.preimage_linear(sys.matrix())?);
            if pre.is_empty() {
                continue;
            }
            let candidates: Vec<BlockId> = partition
                .blocks()
                .filter(|b| b.slice_index > i && b.successor.is_none())
                .map(|b| b.id)
                .collect();
            for id in partition.refine_blocks(&candidates, &pre, exec)? {
                partition.blocks.get_mut(&id).expect("fresh block").successor = Some(target);
            }
        }
    }

    let quotient = QuotientTS::from_partition(&partition)?;
    Ok(Abstraction {
        system: sys.clone(),
        lf: lf.clone(),
        levels,
        rho_star,
        x_cell,
        d_cell,
        regions: regions.to_vec(),
        partition,
        quotient,
    })
}

/// Outcome of the exact partition audits.
#[derive(Debug, Clone, Default)]
pub struct AuditReport {
    pub blocks: usize,
    pub disjoint: bool,
    pub covering: bool,
    pub slice_aligned: bool,
    pub observation_pure: bool,
    pub image_contained: bool,
    pub descending: bool,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Abstraction {
    pub fn dim(&self) -> usize {
        self.x_cell.dim()
    }

    pub fn n_levels(&self) -> usize {
        self.levels.n()
    }

    pub fn observation_of(&self, x: &Point) -> Result<Observation> {
        observation_of(x, &self.regions, &self.x_cell, &self.d_cell)
    }

    pub fn cell_of(&self, x: &Point) -> Result<BlockId> {
        self.partition.cell_of(x)
    }

    pub fn word(&self, start: BlockId) -> Result<LassoWord> {
        self.quotient.word(start, self.levels.n() + 1)
    }

    /// `A · eq(B) ⊆ eq(successor(B))`, exactly.
    pub fn image_contained(&self, id: BlockId) -> Result<bool> {
        let b = self
            .partition
            .block(id)
            .ok_or_else(|| Error::Precondition(format!("unknown block {id}")))?;
        if id == self.partition.d_block {
            return Ok(b.successor == Some(id));
        }
        let succ = b.successor.and_then(|s| self.partition.block(s));
        match succ {
            Some(s) => b.cell.is_subset_of(&s.cell.preimage_linear(self.system.matrix())?),
            None => Ok(false),
        }
    }

    /// Exact checks of every partition and quotient invariant.
    pub fn audit(&self, exec: Execution) -> Result<AuditReport> {
        let p = &self.partition;
        let blocks: Vec<&Block> = p.blocks().collect();
        let mut report = AuditReport {
            blocks: blocks.len(),
            disjoint: true,
            covering: true,
            slice_aligned: true,
            observation_pure: true,
            image_contained: true,
            descending: true,
            failures: Vec::new(),
        };

        let per_block = exec.map(&blocks, |b| -> Result<Vec<String>> {
            let mut bad = Vec::new();
            let own = Region::single(b.cell.clone());
            if own.is_empty() {
                bad.push(format!("slice: block {} is empty", b.id));
            }
            if !own.is_subset_of(&p.slices[b.slice_index])? {
                bad.push(format!("slice: block {} leaves slice {}", b.id, b.slice_index));
            }
            let pure = match &b.observation {
                Observation::PiD => b.cell.same_set(&self.d_cell)?,
                Observation::Region(label) => {
                    let r = self.regions.iter().find(|r| &r.label == label);
                    match r {
                        Some(r) => b.cell.is_subset_of(&r.cell)?,
                        None => false,
                    }
                }
                Observation::Empty => {
                    b.cell.intersect(&self.d_cell)?.is_empty()
                        && self
                            .regions
                            .iter()
                            .map(|r| b.cell.intersect(&r.cell).map(|c| c.is_empty()))
                            .collect::<Result<Vec<bool>>>()?
                            .into_iter()
                            .all(|e| e)
                }
            };
            if !pure {
                bad.push(format!("observation: block {} is not pure {}", b.id, b.observation));
            }
            if !self.image_contained(b.id)? {
                bad.push(format!("image: A·block {} escapes its successor", b.id));
            }
            if b.id != p.d_block {
                let s = b.successor.and_then(|s| p.block(s));
                if s.is_none_or(|s| s.slice_index >= b.slice_index) {
                    bad.push(format!("descent: block {} does not move inward", b.id));
                }
            }
            Ok(bad)
        });
        for bad in per_block {
            for msg in bad? {
                if msg.starts_with("slice") {
                    report.slice_aligned = false;
                } else if msg.starts_with("observation") {
                    report.observation_pure = false;
                } else if msg.starts_with("image") {
                    report.image_contained = false;
                } else {
                    report.descending = false;
                }
                report.failures.push(msg);
            }
        }
        if self.quotient.successor(self.quotient.d_state()) != self.quotient.d_state()
            || self
                .quotient
                .states()
                .iter()
                .filter(|&&q| self.quotient.successor(q) == q)
                .count()
                != 1
        {
            report.descending = false;
            report.failures.push("quotient: D must be the only self-loop".into());
        }

        // Disjointness: blocks in different slices are separated by slice
        // alignment; within a slice, closed bounding boxes prune the pairs.
        let boxes = exec.map(&blocks, |b| b.cell.bounding_box());
        let mut pairs = Vec::new();
        for i in 0..blocks.len() {
            for j in i + 1..blocks.len() {
                if blocks[i].slice_index != blocks[j].slice_index {
                    continue;
                }
                if let (Some((lo1, hi1)), Some((lo2, hi2))) = (&boxes[i], &boxes[j]) {
                    let apart = (0..lo1.len()).any(|k| hi1[k] < lo2[k] || hi2[k] < lo1[k]);
                    if apart {
                        continue;
                    }
                }
                pairs.push((i, j));
            }
        }
        let overlaps = exec.map(&pairs, |&(i, j)| {
            blocks[i].cell.intersect(&blocks[j].cell).map(|c| !c.is_empty())
        });
        for (&(i, j), o) in pairs.iter().zip(overlaps) {
            if o? {
                report.disjoint = false;
                report.failures.push(format!(
                    "disjoint: blocks {} and {} overlap",
                    blocks[i].id, blocks[j].id
                ));
            }
        }

        // Coverage, slice by slice.
        let slice_ids: Vec<usize> = (0..p.slices.len()).collect();
        let leftovers = exec.map(&slice_ids, |&i| -> Result<bool> {
            let mut rest = p.slices[i].clone();
            for b in blocks.iter().filter(|b| b.slice_index == i) {
                rest = rest.difference(&Region::single(b.cell.clone()))?;
                if rest.is_empty() {
                    break;
                }
            }
            Ok(rest.is_empty())
        });
        for (i, covered) in leftovers.into_iter().enumerate() {
            if !covered? {
                report.covering = false;
                report
                    .failures
                    .push(format!("covering: slice {i} is not covered by its blocks"));
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::rational::{int, ratio};

    fn toy() -> (LinearSystem, PolyhedralLF) {
        let sys = LinearSystem::new(Matrix::from_rows(vec![vec![ratio(1, 2)]]).unwrap()).unwrap();
        let lf = PolyhedralLF::new(Matrix::identity(1), ratio(1, 2)).unwrap();
        (sys, lf)
    }

    fn interval(lo: i64, lo_open: bool, hi: i64, hi_open: bool) -> Cell {
        use crate::geometry::Constraint;
        let upper = Constraint::new(vec![int(1)], int(hi), hi_open).unwrap();
        let lower = Constraint::new(vec![int(-1)], int(-lo), lo_open).unwrap();
        Cell::new(1, vec![upper, lower]).unwrap()
    }

    #[test]
    fn toy_quotient_has_three_states() {
        let (sys, lf) = toy();
        let abs = build_quotient(&sys, &lf, &int(1), &int(2), &[]).unwrap();
        let q = &abs.quotient;
        assert_eq!(q.len(), 3);
        let d = q.d_state();
        assert_eq!(q.successor(d), d);
        assert!(abs
            .partition
            .eq(d)
            .unwrap()
            .same_set(&interval(-1, false, 1, false))
            .unwrap());
        let mut outer: Vec<Cell> = Vec::new();
        for &s in q.states() {
            if s != d {
                assert_eq!(q.successor(s), d);
                assert_eq!(q.slice_index(s), 1);
                assert_eq!(q.observation(s), &Observation::Empty);
                outer.push(abs.partition.eq(s).unwrap().clone());
            }
        }
        let left = interval(-2, false, -1, true);
        let right = interval(1, true, 2, false);
        let matches = |c: &Cell| c.same_set(&left).unwrap() || c.same_set(&right).unwrap();
        assert!(outer.iter().all(matches));
        assert!(!outer[0].same_set(&outer[1]).unwrap());
        assert!(abs.audit(Execution::Sequential).unwrap().passed());
    }

    #[test]
    fn observation_examples() {
        let (sys, lf) = toy();
        let r = ObservedRegion::new("r1", interval(1, true, 2, false)).unwrap();
        let abs = build_quotient(&sys, &lf, &int(1), &int(2), &[r]).unwrap();
        assert_eq!(abs.observation_of(&Point::from_ints(&[0])).unwrap(), Observation::PiD);
        assert_eq!(
            abs.observation_of(&Point::new(vec![ratio(3, 2)])).unwrap(),
            Observation::Region("r1".into())
        );
        assert_eq!(
            abs.observation_of(&Point::new(vec![ratio(-3, 2)])).unwrap(),
            Observation::Empty
        );
        assert!(abs.observation_of(&Point::from_ints(&[3])).is_err());
        // One region equal to a whole slice cell.
        assert_eq!(abs.quotient.len(), 3);
        assert!(abs.audit(Execution::Sequential).unwrap().passed());
    }

    #[test]
    fn region_validation() {
        let x = interval(-2, false, 2, false);
        let d = interval(-1, false, 1, false);
        let inside_d = ObservedRegion::new("a", interval(0, false, 1, false)).unwrap();
        let err = validate_regions(&[inside_d], &x, &d).unwrap_err();
        assert_eq!(err.code(), Some(InputCode::RegionDomain));
        let outside_x = ObservedRegion::new("a", interval(1, true, 3, false)).unwrap();
        assert_eq!(
            validate_regions(&[outside_x], &x, &d).unwrap_err().code(),
            Some(InputCode::RegionDomain)
        );
        let a = ObservedRegion::new(
            "a",
            Cell::new(1, interval(1, true, 2, false).constraints().to_vec()).unwrap(),
        )
        .unwrap();
        let b = ObservedRegion::new("b", Cell::closed_box(&[ratio(3, 2)], &[int(2)]).unwrap()).unwrap();
        assert_eq!(
            validate_regions(&[a, b], &x, &d).unwrap_err().code(),
            Some(InputCode::RegionOverlap)
        );
        assert!(ObservedRegion::new("pid", x.clone()).is_err());
        assert!(ObservedRegion::new("F", x.clone()).is_err());
        assert!(ObservedRegion::new("1abc", x).is_err());
    }

    #[test]
    fn initial_partition_without_regions_matches_slices() {
        let (_, lf) = toy();
        let seq = LevelSequence::new(&int(1), &int(2), &ratio(1, 2)).unwrap();
        let s = slices(&lf, &seq).unwrap();
        let p = initial_partition(&lf.sublevel_cell(&int(2)), &lf.sublevel_cell(&int(1)), &[], &s).unwrap();
        let expected: usize = s.iter().map(|r| r.cells().len()).sum();
        assert_eq!(p.len(), expected);
        assert_eq!(p.block(p.d_block()).unwrap().observation, Observation::PiD);
    }

    #[test]
    fn refine_examples() {
        let (_, lf) = toy();
        let seq = LevelSequence::new(&int(1), &int(2), &ratio(1, 2)).unwrap();
        let s = slices(&lf, &seq).unwrap();
        let p = initial_partition(&lf.sublevel_cell(&int(2)), &lf.sublevel_cell(&int(1)), &[], &s).unwrap();
        // Empty region: unchanged.
        assert_eq!(p.refine(&Region::empty(1)).unwrap().len(), p.len());
        // Union of blocks: unchanged.
        let d = Region::single(p.eq(p.d_block()).unwrap().clone());
        assert_eq!(p.refine(&d).unwrap().len(), p.len());
        // [1.5, 2] splits (1, 2] in two.
        let r = Region::single(Cell::closed_box(&[ratio(3, 2)], &[int(2)]).unwrap());
        let q = p.refine(&r).unwrap();
        assert_eq!(q.len(), p.len() + 1);
        let inside: Vec<&Block> = q
            .blocks()
            .filter(|b| b.cell.is_subset_of(r.cells().first().unwrap()).unwrap())
            .collect();
        assert_eq!(inside.len(), 1);
        assert!(inside[0].cell.same_set(&r.cells()[0]).unwrap());
    }

    #[test]
    fn find_pre_examples() {
        let lf = PolyhedralLF::new(Matrix::identity(1), ratio(1, 2)).unwrap();
        let x = lf.sublevel_cell(&int(2));
        let d = lf.sublevel_cell(&int(1));
        let zero = LinearSystem::new(Matrix::zeros(1, 1)).unwrap();
        let pre = find_pre(&Region::single(d.clone()), &zero, &x, &d).unwrap();
        let domain = Region::single(x.clone())
            .difference(&Region::single(d.clone()))
            .unwrap();
        assert!(pre.same_set(&domain).unwrap());

        let (half, _) = toy();
        let target = Region::single(interval(1, true, 2, false));
        let pre = find_pre(&target, &half, &lf.sublevel_cell(&int(4)), &d).unwrap();
        assert!(pre.same_set(&Region::single(interval(2, true, 4, false))).unwrap());
        assert!(pre.cells().iter().all(|c| c
            .constraints()
            .iter()
            .any(|k| k.normal()[0] == int(1) && k.offset() == &int(4))));
    }

    #[test]
    fn zero_dynamics_point_everything_at_d() {
        let lf = PolyhedralLF::new(Matrix::identity(2), ratio(1, 2)).unwrap();
        let sys = LinearSystem::new(Matrix::zeros(2, 2)).unwrap();
        let r = ObservedRegion::new(
            "r1",
            Cell::closed_box(&[ratio(3, 2), ratio(3, 2)], &[int(2), int(2)]).unwrap(),
        )
        .unwrap();
        let abs = build_quotient(&sys, &lf, &int(1), &int(3), &[r]).unwrap();
        let d = abs.quotient.d_state();
        for &q in abs.quotient.states() {
            assert_eq!(abs.quotient.successor(q), d);
        }
        assert!(abs.audit(Execution::Sequential).unwrap().passed());
    }

    #[test]
    fn contraction_failure_aborts() {
        let lf = PolyhedralLF::new(Matrix::identity(1), ratio(1, 2)).unwrap();
        let sys = LinearSystem::new(Matrix::from_rows(vec![vec![ratio(3, 4)]]).unwrap()).unwrap();
        let err = build_quotient(&sys, &lf, &int(1), &int(4), &[]).unwrap_err();
        assert_eq!(err.code(), Some(InputCode::Contraction));
    }

    #[test]
    fn words_descend_to_d() {
        let (sys, lf) = toy();
        let abs = build_quotient(&sys, &lf, &int(1), &int(8), &[]).unwrap();
        let q = &abs.quotient;
        let w = abs.word(q.d_state()).unwrap();
        assert!(w.prefix().is_empty());
        for &s in q.states() {
            let w = abs.word(s).unwrap();
            assert!(w.prefix().len() <= q.slice_index(s));
            assert_eq!(w.cycle(), &[Letter::atom(PI_D_ATOM)]);
        }
    }

    #[test]
    fn cell_of_uses_outer_closed_slices() {
        let (sys, lf) = toy();
        let abs = build_quotient(&sys, &lf, &int(1), &int(8), &[]).unwrap();
        assert_eq!(abs.cell_of(&Point::from_ints(&[0])).unwrap(), abs.quotient.d_state());
        for (v, slice) in [(2, 1), (4, 2), (8, 3), (-4, 2)] {
            let b = abs.cell_of(&Point::from_ints(&[v])).unwrap();
            assert_eq!(abs.quotient.slice_index(b), slice);
        }
        assert!(abs.cell_of(&Point::from_ints(&[9])).is_err());
    }
}
