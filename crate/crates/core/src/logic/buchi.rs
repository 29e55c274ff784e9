//! Tableau translation from LTL to Büchi automata, and lasso acceptance.
//!
//! The formula is put in negation normal form and expanded into tableau
//! nodes (each node records what must hold now and what must hold next).
//! Nodes form a generalized Büchi automaton with one acceptance set per
//! until-subformula; a round-robin counter turns it into an ordinary one.

use std::collections::BTreeSet;
use std::fmt;

use super::word::{LassoWord, Letter};
use super::{nnf, Formula, Nnf};
use crate::graph::Digraph;

/// Conjunction of literals, tested against a single-valued letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guard {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl Guard {
    pub fn top() -> Guard {
        Guard {
            positive: Vec::new(),
            negative: Vec::new(),
        }
    }

    pub fn holds(&self, letter: &Letter) -> bool {
        self.positive.iter().all(|a| letter.holds(a)) && !self.negative.iter().any(|a| letter.holds(a))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> + '_ {
        self.positive.iter().chain(&self.negative)
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lits: Vec<String> = self
            .positive
            .iter()
            .cloned()
            .chain(self.negative.iter().map(|a| format!("!{a}")))
            .collect();
        if lits.is_empty() {
            f.write_str("true")
        } else {
            f.write_str(&lits.join(" & "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub guard: Guard,
}

/// Büchi automaton whose edges read one letter each.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    states: usize,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl BuchiAutomaton {
    /// # Panics
    /// If an edge or initial state refers to a state `>= states` or
    /// `accepting.len() != states`.
    pub fn new(states: usize, initial: Vec<usize>, accepting: Vec<bool>, edges: Vec<Edge>) -> Self {
        assert_eq!(accepting.len(), states);
        assert!(initial.iter().all(|&s| s < states));
        let mut out = vec![Vec::new(); states];
        for (k, e) in edges.iter().enumerate() {
            assert!(e.from < states && e.to < states);
            out[e.from].push(k);
        }
        BuchiAutomaton {
            states,
            initial,
            accepting,
            edges,
            out,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, s: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.out[s].iter().map(move |&k| &self.edges[k])
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        self.edges.iter().flat_map(|e| e.guard.atoms().cloned()).collect()
    }

    /// Successor states on reading `letter` from `s`.
    pub fn step<'a>(&'a self, s: usize, letter: &'a Letter) -> impl Iterator<Item = usize> + 'a {
        self.out_edges(s).filter(move |e| e.guard.holds(letter)).map(|e| e.to)
    }
}

#[derive(Debug, Clone)]
struct Node {
    incoming: BTreeSet<usize>,
    new: BTreeSet<Nnf>,
    old: BTreeSet<Nnf>,
    next: BTreeSet<Nnf>,
}

const INIT: usize = usize::MAX;

struct Tableau {
    nodes: Vec<Node>,
}

impl Tableau {
    fn expand(&mut self, start: Node) {
        let mut pending = vec![start];
        while let Some(mut node) = pending.pop() {
            let Some(eta) = node.new.pop_first() else {
                if let Some(existing) = self.nodes.iter_mut().find(|n| n.old == node.old && n.next == node.next) {
                    existing.incoming.extend(node.incoming);
                } else {
                    let id = self.nodes.len();
                    pending.push(Node {
                        incoming: BTreeSet::from([id]),
                        new: node.next.clone(),
                        old: BTreeSet::new(),
                        next: BTreeSet::new(),
                    });
                    self.nodes.push(node);
                }
                continue;
            };
            match &eta {
                Nnf::False => {}
                Nnf::True => {
                    // Kept in `old`: acceptance for `x U true` looks for it.
                    node.old.insert(eta);
                    pending.push(node);
                }
                Nnf::Lit(a, sign) => {
                    if !node.old.contains(&Nnf::Lit(a.clone(), !sign)) {
                        node.old.insert(eta);
                        pending.push(node);
                    }
                }
                Nnf::And(x, y) => {
                    for part in [x, y] {
                        if !node.old.contains(part.as_ref()) {
                            node.new.insert(part.as_ref().clone());
                        }
                    }
                    node.old.insert(eta);
                    pending.push(node);
                }
                Nnf::Next(x) => {
                    node.next.insert(x.as_ref().clone());
                    node.old.insert(eta);
                    pending.push(node);
                }
                Nnf::Or(x, y) | Nnf::Until(x, y) | Nnf::Release(x, y) => {
                    // First branch: postpone or take the left side; second:
                    // discharge now.
                    let (now1, later1, now2): (Vec<&Nnf>, bool, Vec<&Nnf>) = match &eta {
                        Nnf::Or(..) => (vec![x], false, vec![y]),
                        Nnf::Until(..) => (vec![x], true, vec![y]),
                        _ => (vec![y], true, vec![x, y]),
                    };
                    let mut first = node.clone();
                    let mut second = node;
                    for f in now1 {
                        if !first.old.contains(f) {
                            first.new.insert(f.clone());
                        }
                    }
                    if later1 {
                        first.next.insert(eta.clone());
                    }
                    for f in now2 {
                        if !second.old.contains(f) {
                            second.new.insert(f.clone());
                        }
                    }
                    first.old.insert(eta.clone());
                    second.old.insert(eta);
                    pending.push(second);
                    pending.push(first);
                }
            }
        }
    }
}

fn untils(f: &Nnf, out: &mut BTreeSet<Nnf>) {
    match f {
        Nnf::True | Nnf::False | Nnf::Lit(..) => {}
        Nnf::Next(g) => untils(g, out),
        Nnf::And(a, b) | Nnf::Or(a, b) | Nnf::Release(a, b) => {
            untils(a, out);
            untils(b, out);
        }
        Nnf::Until(a, b) => {
            out.insert(f.clone());
            untils(a, out);
            untils(b, out);
        }
    }
}

/// Büchi automaton accepting exactly the models of `f`.
///
/// State 0 is the unique initial state and is never re-entered; every other
/// state is a (tableau node, counter) pair, and an edge into it is guarded
/// by the literals the node requires now.
pub fn to_buchi(f: &Formula) -> BuchiAutomaton {
    let root = nnf(f, true);
    let mut tableau = Tableau { nodes: Vec::new() };
    tableau.expand(Node {
        incoming: BTreeSet::from([INIT]),
        new: BTreeSet::from([root.clone()]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    });
    let nodes = tableau.nodes;

    let mut until_set = BTreeSet::new();
    untils(&root, &mut until_set);
    let until_list: Vec<Nnf> = until_set.into_iter().collect();
    let k = until_list.len().max(1);
    // Node q is in acceptance set j unless it still owes the eventuality of
    // the j-th until.
    let in_set = |q: usize, j: usize| -> bool {
        match until_list.get(j) {
            None => true,
            Some(u) => {
                let Nnf::Until(_, rhs) = u else { unreachable!() };
                !nodes[q].old.contains(u) || nodes[q].old.contains(rhs.as_ref())
            }
        }
    };
    let guard_of = |q: usize| -> Guard {
        let mut g = Guard::top();
        for lit in &nodes[q].old {
            if let Nnf::Lit(a, sign) = lit {
                if *sign {
                    g.positive.push(a.clone());
                } else {
                    g.negative.push(a.clone());
                }
            }
        }
        g
    };
    let state = |q: usize, c: usize| 1 + q * k + c;

    let count = 1 + nodes.len() * k;
    let mut accepting = vec![false; count];
    for q in 0..nodes.len() {
        accepting[state(q, 0)] = in_set(q, 0);
    }
    let mut edges = Vec::new();
    for (q, node) in nodes.iter().enumerate() {
        let guard = guard_of(q);
        for &p in &node.incoming {
            if p == INIT {
                edges.push(Edge {
                    from: 0,
                    to: state(q, 0),
                    guard: guard.clone(),
                });
                continue;
            }
            for c in 0..k {
                let c2 = if in_set(p, c) { (c + 1) % k } else { c };
                edges.push(Edge {
                    from: state(p, c),
                    to: state(q, c2),
                    guard: guard.clone(),
                });
            }
        }
    }
    BuchiAutomaton::new(count, vec![0], accepting, edges)
}

/// Whether some run of `b` on `w` visits accepting states infinitely often.
pub fn lasso_accepts(b: &BuchiAutomaton, w: &LassoWord) -> bool {
    let positions = w.positions();
    let id = |s: usize, i: usize| s * positions + i;
    let mut g = Digraph::new(b.state_count() * positions);
    for s in 0..b.state_count() {
        for i in 0..positions {
            let next = w.step(i);
            for t in b.step(s, w.letter(i)) {
                g.add_edge(id(s, i), id(t, next));
            }
        }
    }
    let reach = g.reachable(b.initial().iter().map(|&s| id(s, 0)));
    let cyclic = g.on_cycle();
    (0..b.state_count()).any(|s| b.is_accepting(s) && (0..positions).any(|i| reach[id(s, i)] && cyclic[id(s, i)]))
}
