//! Model checking the quotient against a Büchi automaton.

use std::collections::BTreeSet;

use crate::abstraction::{Abstraction, BlockId, Observation, Partition, QuotientTS};
use crate::error::{Error, InputCode, Result};
use crate::geometry::Region;
use crate::graph::Digraph;
use crate::logic::{to_buchi, BuchiAutomaton, Formula, PI_D_ATOM};

/// Synchronized product of the (uninitialized) quotient and an automaton.
///
/// Product state `(q, s)` has index `qi * |S| + s`, where `qi` is the
/// position of `q` in [`QuotientTS::states`].
#[derive(Debug, Clone)]
pub struct ProductAutomaton {
    quotient_states: Vec<BlockId>,
    automaton_states: usize,
    graph: Digraph,
    accepting: Vec<bool>,
    initial: Vec<usize>,
}

impl ProductAutomaton {
    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn index(&self, qi: usize, s: usize) -> usize {
        qi * self.automaton_states + s
    }

    /// The `(quotient state, automaton state)` pair behind an index.
    pub fn pair(&self, idx: usize) -> (BlockId, usize) {
        (
            self.quotient_states[idx / self.automaton_states],
            idx % self.automaton_states,
        )
    }
}

/// Atoms the quotient can ever emit.
pub fn observation_alphabet(q: &QuotientTS) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = q
        .states()
        .iter()
        .filter_map(|&s| match q.observation(s) {
            Observation::Region(label) => Some(label.clone()),
            _ => None,
        })
        .collect();
    out.insert(PI_D_ATOM.to_string());
    out
}

pub fn product(q: &QuotientTS, b: &BuchiAutomaton) -> Result<ProductAutomaton> {
    product_over(q, b, &observation_alphabet(q))
}

/// Product with an explicitly declared alphabet (for regions that no block
/// happens to carry, the check would otherwise be too strict).
pub fn product_over(q: &QuotientTS, b: &BuchiAutomaton, alphabet: &BTreeSet<String>) -> Result<ProductAutomaton> {
    if let Some(a) = b.atoms().into_iter().find(|a| !alphabet.contains(a)) {
        return Err(Error::input(
            InputCode::UnknownAtom,
            format!("automaton refers to undeclared atom {a}"),
        ));
    }
    let states = q.states().to_vec();
    let position: std::collections::BTreeMap<BlockId, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let ns = b.state_count();
    let mut graph = Digraph::new(states.len() * ns);
    let mut accepting = vec![false; states.len() * ns];
    let mut initial = Vec::new();
    for (qi, &qs) in states.iter().enumerate() {
        let letter = q.observation(qs).letter();
        let qj = position[&q.successor(qs)];
        for s in 0..ns {
            let here = qi * ns + s;
            accepting[here] = b.is_accepting(s);
            for t in b.step(s, &letter) {
                graph.add_edge(here, qj * ns + t);
            }
        }
        initial.extend(b.initial().iter().map(|&s0| qi * ns + s0));
    }
    Ok(ProductAutomaton {
        quotient_states: states,
        automaton_states: ns,
        graph,
        accepting,
        initial,
    })
}

/// Greatest set of accepting vertices each reaching a member in at least
/// one step, by iterated removal.
pub fn f_star_fixpoint(g: &Digraph, accepting: &[bool]) -> Vec<bool> {
    let reversed = g.reversed();
    let mut current = accepting.to_vec();
    loop {
        // Vertices with a path of length >= 1 into `current`.
        let preds = (0..g.len())
            .filter(|&v| current[v])
            .flat_map(|v| reversed.successors(v).iter().copied());
        let reaches = reversed.reachable(preds);
        let next: Vec<bool> = current.iter().zip(&reaches).map(|(&c, &r)| c && r).collect();
        if next == current {
            return current;
        }
        current = next;
    }
}

/// Accepting vertices that reach an accepting vertex lying on a cycle.
pub fn f_star_scc(g: &Digraph, accepting: &[bool]) -> Vec<bool> {
    let cyclic = g.on_cycle();
    let anchors = (0..g.len()).filter(|&v| accepting[v] && cyclic[v]);
    let back = g.reversed().reachable(anchors);
    accepting.iter().zip(back).map(|(&a, r)| a && r).collect()
}

pub fn f_star(p: &ProductAutomaton) -> Vec<bool> {
    f_star_scc(&p.graph, &p.accepting)
}

/// Quotient states from which an accepting product run exists.
#[derive(Debug, Clone)]
pub struct SatisfyingSet {
    pub states: BTreeSet<BlockId>,
    pub total: usize,
    pub region: Region,
}

impl SatisfyingSet {
    pub fn contains(&self, q: BlockId) -> bool {
        self.states.contains(&q)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn summary(&self) -> String {
        format!("satisfying: {} of {} states", self.states.len(), self.total)
    }
}

pub fn satisfying_states(p: &ProductAutomaton, fstar: &[bool], partition: &Partition) -> SatisfyingSet {
    let back = p.graph.reversed().reachable((0..p.len()).filter(|&v| fstar[v]));
    let states: BTreeSet<BlockId> = p.initial.iter().filter(|&&v| back[v]).map(|&v| p.pair(v).0).collect();
    let cells = states
        .iter()
        .filter_map(|&id| partition.eq(id).cloned())
        .collect::<Vec<_>>();
    SatisfyingSet {
        total: p.quotient_states.len(),
        region: Region::from_disjoint_cells(partition.dim(), cells),
        states,
    }
}

/// Full check of one formula against an abstraction.
pub fn check_formula(abs: &Abstraction, f: &Formula) -> Result<SatisfyingSet> {
    let mut alphabet: BTreeSet<String> = abs.regions.iter().map(|r| r.label().to_string()).collect();
    alphabet.insert(PI_D_ATOM.to_string());
    f.check_atoms(alphabet.iter().map(String::as_str))?;
    let b = to_buchi(f);
    let p = product_over(&abs.quotient, &b, &alphabet)?;
    let fstar = f_star(&p);
    Ok(satisfying_states(&p, &fstar, &abs.partition))
}
