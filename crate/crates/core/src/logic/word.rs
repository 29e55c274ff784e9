use std::fmt;

use super::Formula;

/// One observation: no atom, or exactly one atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub Option<String>);

impl Letter {
    pub fn atom(name: &str) -> Letter {
        Letter(Some(name.to_string()))
    }

    pub fn empty() -> Letter {
        Letter(None)
    }

    pub fn holds(&self, atom: &str) -> bool {
        self.0.as_deref() == Some(atom)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Some(a) => write!(f, "{{{a}}}"),
            None => f.write_str("{}"),
        }
    }
}

/// Ultimately periodic word `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl LassoWord {
    /// # Panics
    /// If `cycle` is empty.
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> LassoWord {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    /// Number of distinct positions `|prefix| + |cycle|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Letter at a position in `0..positions()`.
    pub fn letter(&self, pos: usize) -> &Letter {
        if pos < self.prefix.len() {
            &self.prefix[pos]
        } else {
            &self.cycle[pos - self.prefix.len()]
        }
    }

    /// Position reached after one step; the last position wraps to the cycle start.
    pub fn step(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Letter at any time index of the infinite word.
    pub fn at(&self, t: usize) -> &Letter {
        if t < self.prefix.len() {
            &self.prefix[t]
        } else {
            &self.cycle[(t - self.prefix.len()) % self.cycle.len()]
        }
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        f.write_str("(")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        f.write_str(")^w")
    }
}

/// Truth of `f` at time 0 of `w`, by direct evaluation.
///
/// Every subformula gets a truth vector over the finitely many positions of
/// the lasso. Until is the least solution of `v = b ∨ (a ∧ v∘step)` and
/// globally the greatest solution of `v = a ∧ v∘step`; both are reached by
/// plain iteration within `positions()` rounds.
pub fn eval_ltl_lasso(f: &Formula, w: &LassoWord) -> bool {
    truth(f, w)[0]
}

fn truth(f: &Formula, w: &LassoWord) -> Vec<bool> {
    let n = w.positions();
    let shift = |v: &[bool]| -> Vec<bool> { (0..n).map(|i| v[w.step(i)]).collect() };
    match f {
        Formula::True => vec![true; n],
        Formula::False => vec![false; n],
        Formula::Atom(a) => (0..n).map(|i| w.letter(i).holds(a)).collect(),
        Formula::Not(g) => truth(g, w).into_iter().map(|b| !b).collect(),
        Formula::And(a, b) => zip(truth(a, w), truth(b, w), |x, y| x && y),
        Formula::Or(a, b) => zip(truth(a, w), truth(b, w), |x, y| x || y),
        Formula::Implies(a, b) => zip(truth(a, w), truth(b, w), |x, y| !x || y),
        Formula::Next(g) => shift(&truth(g, w)),
        Formula::Until(a, b) => until(&truth(a, w), truth(b, w), w),
        Formula::Finally(g) => until(&vec![true; n], truth(g, w), w),
        Formula::Globally(g) => {
            let hold = truth(g, w);
            let mut v = hold.clone();
            loop {
                let next: Vec<bool> = (0..n).map(|i| hold[i] && v[w.step(i)]).collect();
                if next == v {
                    return v;
                }
                v = next;
            }
        }
    }
}

fn until(a: &[bool], b: Vec<bool>, w: &LassoWord) -> Vec<bool> {
    let mut v = b.clone();
    loop {
        let next: Vec<bool> = (0..v.len()).map(|i| b[i] || (a[i] && v[w.step(i)])).collect();
        if next == v {
            return v;
        }
        v = next;
    }
}

fn zip(x: Vec<bool>, y: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    x.into_iter().zip(y).map(|(a, b)| op(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_ltl;

    fn eval(text: &str, w: &LassoWord) -> bool {
        eval_ltl_lasso(&parse_ltl(text).unwrap(), w)
    }

    fn l(a: &str) -> Letter {
        Letter::atom(a)
    }

    #[test]
    fn basic_examples() {
        let pid_forever = LassoWord::new(vec![], vec![l("pid")]);
        assert!(eval("G PI_D", &pid_forever));
        let w = LassoWord::new(vec![Letter::empty(), l("r1")], vec![l("pid")]);
        assert!(eval("F r1", &w));
        assert!(!eval("G !r1", &w));
        let bad = LassoWord::new(vec![l("r2")], vec![l("pid")]);
        assert!(!eval("G !r2 & F r1 & (r3 -> X !r1)", &bad));
    }

    #[test]
    fn temporal_operators_against_unrolled_time() {
        // Brute force over a long horizon: for lasso words, truth at t only
        // depends on the position, so looking ahead past prefix + 2·cycle
        // is enough for these shallow formulas.
        let w = LassoWord::new(vec![l("a"), Letter::empty()], vec![l("b"), l("a"), Letter::empty()]);
        let horizon = 40;
        let a_at = |t: usize| w.at(t).holds("a");
        let b_at = |t: usize| w.at(t).holds("b");
        let until_at = |t: usize| (t..horizon).any(|k| b_at(k) && (t..k).all(a_at));
        assert_eq!(eval("a U b", &w), until_at(0));
        assert_eq!(eval("X (a U b)", &w), until_at(1));
        assert!(eval("G F a", &w));
        assert!(!eval("F G a", &w));
        assert_eq!(eval("X X X X b", &w), b_at(4));
        assert!(eval("G (b -> X a)", &w));
        assert!(!eval("G (a -> X b)", &w));
    }

    #[test]
    fn positions_wrap_into_cycle() {
        let w = LassoWord::new(vec![l("a")], vec![l("b"), l("c")]);
        assert_eq!(w.step(2), 1);
        assert_eq!(w.at(4), &l("c"));
        assert_eq!(w.at(5), &l("b"));
        assert_eq!(w.to_string(), "{a}({b}{c})^w");
    }
}
