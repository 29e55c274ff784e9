//! Finite bisimulation quotients for stable discrete-time linear systems.
//!
//! The state space between a target sublevel set `D` and a working sublevel
//! set `X` of an infinity-norm polyhedral Lyapunov function is cut into
//! contractive slices. Working outward from `D`, every block is refined
//! against the preimages of the blocks one slice further in, yielding a
//! deterministic finite quotient that preserves observations over a set of
//! polytopic regions. The quotient is then model checked against LTL
//! formulas through a Büchi product.
//!
//! All geometry is exact: coordinates, constraints and LP pivots use
//! arbitrary-precision rationals.

pub mod abstraction;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod graph;
pub mod logic;
pub mod lp;
pub mod lyapunov;
pub mod matrix;
pub mod pipeline;
pub mod problem;
pub mod quotient_io;
pub mod rational;
pub mod simulate;
pub mod svg;
pub mod verify;

pub use abstraction::{
    build_quotient, build_quotient_with, Abstraction, AbstractionOptions, Block, BlockId, Observation, ObservedRegion,
    Partition, QuotientTS,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use geometry::{Cell, Constraint, Point, Region};
pub use logic::{BuchiAutomaton, Formula, LassoWord, Letter};
pub use lyapunov::{LevelSequence, LinearSystem, PolyhedralLF};
pub use matrix::Matrix;
pub use rational::Rational;
