//! Plain-text export of quotients and satisfying sets.
//!
//! ```text
//! quotient states=3 dim=1 d_state=0
//! state 0 slice=0 obs=PI_D -> 0
//!   1/1 <= 1/1
//!   -1/1 <= 1/1
//! state 1 slice=1 obs=EMPTY -> 0
//!   1/1 <= 2/1
//!   -1/1 < -1/1
//! ```
//!
//! States appear sorted by `(slice, id)`; each is followed by the
//! constraints of its cell, one per line, coefficients then `<=` or `<`
//! then the offset. A satisfying-set file starts with a
//! `satisfying: k of m states` line and lists only the member states.

use std::fmt::Write as _;

use crate::abstraction::{Abstraction, BlockId, Observation, QuotientTS};
use crate::error::{Error, InputCode, Result};
use crate::geometry::{Cell, Constraint};
use crate::rational::{format_pq, parse_rational};
use crate::verify::SatisfyingSet;

#[derive(Debug, Clone, PartialEq)]
pub struct StateRecord {
    pub id: BlockId,
    pub slice: usize,
    pub observation: Observation,
    pub successor: BlockId,
    pub cell: Cell,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientFile {
    pub dim: usize,
    pub d_state: BlockId,
    /// Present only in satisfying-set files: `(k, m)`.
    pub satisfying: Option<(usize, usize)>,
    pub states: Vec<StateRecord>,
}

impl QuotientFile {
    /// Rebuilds the transition system; all successors must be listed.
    pub fn to_quotient(&self) -> Result<QuotientTS> {
        QuotientTS::from_parts(
            self.states
                .iter()
                .map(|s| (s.id, s.slice, s.observation.clone(), s.successor))
                .collect(),
            self.d_state,
        )
    }
}

fn write_states<'a>(out: &mut String, abs: &Abstraction, ids: impl Iterator<Item = &'a BlockId>) {
    let q = &abs.quotient;
    for &id in ids {
        let _ = writeln!(
            out,
            "state {id} slice={} obs={} -> {}",
            q.slice_index(id),
            q.observation(id),
            q.successor(id)
        );
        let cell = abs.partition.eq(id).expect("quotient state has a block");
        for c in cell.constraints() {
            let coeffs: Vec<String> = c.normal().iter().map(format_pq).collect();
            let rel = if c.is_strict() { "<" } else { "<=" };
            let _ = writeln!(out, "  {} {rel} {}", coeffs.join(" "), format_pq(c.offset()));
        }
    }
}

fn header(abs: &Abstraction, count: usize) -> String {
    format!(
        "quotient states={count} dim={} d_state={}\n",
        abs.dim(),
        abs.quotient.d_state()
    )
}

pub fn export_quotient(abs: &Abstraction) -> String {
    let mut out = header(abs, abs.quotient.len());
    write_states(&mut out, abs, abs.quotient.states().iter());
    out
}

pub fn export_satisfying(abs: &Abstraction, sat: &SatisfyingSet) -> String {
    let mut out = format!("{}\n", sat.summary());
    out.push_str(&header(abs, sat.len()));
    let members = abs.quotient.states().iter().filter(|q| sat.contains(**q));
    write_states(&mut out, abs, members);
    out
}

fn malformed(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::input(InputCode::Malformed, format!("line {}: {msg}", line + 1))
}

fn field<'a>(token: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| malformed(line, format!("expected {key}=")))
}

fn number<T: std::str::FromStr>(text: &str, line: usize) -> Result<T> {
    text.parse()
        .map_err(|_| malformed(line, format!("bad number {text:?}")))
}

pub fn parse_quotient(text: &str) -> Result<QuotientFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();
    let mut satisfying = None;
    if let Some((i, l)) = lines.peek().copied() {
        if let Some(rest) = l.strip_prefix("satisfying: ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "of" || parts[3] != "states" {
                return Err(malformed(i, "bad satisfying summary"));
            }
            satisfying = Some((number(parts[0], i)?, number(parts[2], i)?));
            lines.next();
        }
    }
    let (hi, head) = lines.next().ok_or_else(|| malformed(0, "empty file"))?;
    let mut tokens = head.split_whitespace();
    if tokens.next() != Some("quotient") {
        return Err(malformed(hi, "expected quotient header"));
    }
    let count: usize = number(field(tokens.next(), "states", hi)?, hi)?;
    let dim: usize = number(field(tokens.next(), "dim", hi)?, hi)?;
    let d_state: BlockId = number(field(tokens.next(), "d_state", hi)?, hi)?;

    let mut states: Vec<StateRecord> = Vec::new();
    let mut rows: Vec<Constraint> = Vec::new();
    let finish = |states: &mut Vec<StateRecord>, rows: &mut Vec<Constraint>| -> Result<()> {
        if let Some(last) = states.last_mut() {
            last.cell = Cell::new(dim, std::mem::take(rows))?;
        }
        Ok(())
    };
    for (i, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        if tokens.first() == Some(&"state") {
            finish(&mut states, &mut rows)?;
            if tokens.len() != 6 || tokens[4] != "->" {
                return Err(malformed(i, "expected `state <id> slice=<i> obs=<o> -> <succ>`"));
            }
            states.push(StateRecord {
                id: number(tokens[1], i)?,
                slice: number(field(Some(tokens[2]), "slice", i)?, i)?,
                observation: Observation::parse(field(Some(tokens[3]), "obs", i)?),
                successor: number(tokens[5], i)?,
                cell: Cell::universe(dim),
            });
            continue;
        }
        if states.is_empty() || tokens.len() != dim + 2 {
            return Err(malformed(i, "unexpected line"));
        }
        let strict = match tokens[dim] {
            "<" => true,
            "<=" => false,
            other => return Err(malformed(i, format!("bad relation {other:?}"))),
        };
        let normal = tokens[..dim]
            .iter()
            .map(|t| parse_rational(t))
            .collect::<Result<Vec<_>>>()?;
        rows.push(Constraint::new(normal, parse_rational(tokens[dim + 1])?, strict)?);
    }
    finish(&mut states, &mut rows)?;
    if states.len() != count {
        return Err(Error::input(
            InputCode::Malformed,
            format!("header announces {count} states, found {}", states.len()),
        ));
    }
    Ok(QuotientFile {
        dim,
        d_state,
        satisfying,
        states,
    })
}
