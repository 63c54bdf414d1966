//! Chronological backtracking over polarity variables with forward-chaining
//! propagation. Each theory supplies the atoms, the contradiction rules and
//! the closure rules; the engine records a justification for every derived
//! atom so that refutations can be sliced down to the facts they use.

use alloc::{boxed::Box, collections::BTreeSet, vec, vec::Vec};

use super::{Contradiction, Refutation, SearchStats, Step};

pub(crate) type Atom = usize;

#[derive(Clone, Debug)]
pub(crate) struct Derivation<K> {
    pub atom: Atom,
    pub rule: K,
    pub premises: [Option<Atom>; 2],
}

pub(crate) trait Theory {
    /// Atom-level justification, exported to a domain rule on refutation.
    type Rule: Clone;
    type Fact;
    type DomainRule;

    fn atom_count(&self) -> usize;
    fn opposite(&self, a: Atom) -> Atom;
    fn is_absurd(&self, a: Atom) -> bool;
    /// Decision variables in branching order, as (positive, negative) atoms.
    fn variables(&self) -> &[(Atom, Atom)];
    /// Facts that hold before any decision.
    fn forced(&self) -> Vec<Derivation<Self::Rule>>;
    /// Consequences of `a` together with the atoms already known.
    fn consequences(
        &self,
        a: Atom,
        known: &[Atom],
        is_known: &dyn Fn(Atom) -> bool,
        out: &mut Vec<Derivation<Self::Rule>>,
    );
    fn fact(&self, a: Atom) -> Self::Fact;
    fn export_rule(&self, rule: &Self::Rule) -> Self::DomainRule;
}

#[derive(Clone, Debug)]
enum Reason<K> {
    Assumed,
    Derived(K, [Option<Atom>; 2]),
}

struct Conflict {
    atoms: [Atom; 2],
    absurd: bool,
}

pub(crate) enum Node<F, R> {
    Found,
    Refuted(Refutation<F, R>),
    Exhausted,
}

pub(crate) struct Engine<'t, T: Theory> {
    theory: &'t T,
    reason: Vec<Option<Reason<T::Rule>>>,
    position: Vec<usize>,
    trail: Vec<Atom>,
    max_nodes: u64,
    pub stats: SearchStats,
}

impl<'t, T: Theory> Engine<'t, T> {
    pub fn new(theory: &'t T, max_nodes: u64) -> Self {
        let n = theory.atom_count();
        Engine {
            theory,
            reason: vec![None; n],
            position: vec![usize::MAX; n],
            trail: Vec::new(),
            max_nodes,
            stats: SearchStats::default(),
        }
    }

    /// Atoms currently true, in the order they were derived.
    pub fn model(&self) -> &[Atom] {
        &self.trail
    }

    fn known(&self, a: Atom) -> bool {
        self.reason[a].is_some()
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let a = self.trail.pop().expect("trail above mark");
            self.reason[a] = None;
            self.position[a] = usize::MAX;
        }
    }

    /// Adds an atom and closes under the theory's rules.
    fn assert(&mut self, atom: Atom, reason: Reason<T::Rule>) -> Result<(), Conflict> {
        let mut queue = vec![(atom, reason)];
        let mut out = Vec::new();
        let mut head = 0;
        while head < queue.len() {
            let (a, why) = queue[head].clone();
            head += 1;
            if self.known(a) {
                continue;
            }
            self.reason[a] = Some(why);
            self.position[a] = self.trail.len();
            self.trail.push(a);
            self.stats.propagations += 1;
            if self.theory.is_absurd(a) {
                return Err(Conflict {
                    atoms: [a, a],
                    absurd: true,
                });
            }
            let opp = self.theory.opposite(a);
            if opp != a && self.known(opp) {
                return Err(Conflict {
                    atoms: [opp, a],
                    absurd: false,
                });
            }
            out.clear();
            let reason = &self.reason;
            self.theory
                .consequences(a, &self.trail, &|b| reason[b].is_some(), &mut out);
            for d in out.drain(..) {
                if !self.known(d.atom) {
                    queue.push((d.atom, Reason::Derived(d.rule, d.premises)));
                }
            }
        }
        Ok(())
    }

    /// Backward slice of a conflict as a self-contained leaf.
    fn leaf(&self, conflict: &Conflict) -> Refutation<T::Fact, T::DomainRule> {
        let mut used = BTreeSet::new();
        let mut stack: Vec<Atom> = conflict.atoms.to_vec();
        while let Some(a) = stack.pop() {
            if !used.insert(a) {
                continue;
            }
            if let Some(Reason::Derived(_, premises)) = &self.reason[a] {
                stack.extend(premises.iter().flatten());
            }
        }
        let mut ordered: Vec<Atom> = used.into_iter().collect();
        ordered.sort_by_key(|&a| self.position[a]);
        let steps = ordered
            .into_iter()
            .filter_map(|a| match &self.reason[a] {
                Some(Reason::Derived(rule, _)) => Some(Step {
                    fact: self.theory.fact(a),
                    rule: self.theory.export_rule(rule),
                }),
                _ => None,
            })
            .collect();
        let contradiction = if conflict.absurd {
            Contradiction::Absurd(self.theory.fact(conflict.atoms[0]))
        } else {
            Contradiction::Clash(
                self.theory.fact(conflict.atoms[0]),
                self.theory.fact(conflict.atoms[1]),
            )
        };
        Refutation::Conflict {
            steps,
            contradiction,
        }
    }

    pub fn run(&mut self) -> Node<T::Fact, T::DomainRule> {
        for d in self.theory.forced() {
            if let Err(c) = self.assert(d.atom, Reason::Derived(d.rule, d.premises)) {
                return Node::Refuted(self.leaf(&c));
            }
        }
        self.solve()
    }

    fn solve(&mut self) -> Node<T::Fact, T::DomainRule> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.max_nodes {
            return Node::Exhausted;
        }
        let theory = self.theory;
        let Some(&(pos, neg)) = theory
            .variables()
            .iter()
            .find(|(p, n)| !self.known(*p) && !self.known(*n))
        else {
            return Node::Found;
        };
        let mut branches = Vec::with_capacity(2);
        for choice in [pos, neg] {
            let mark = self.trail.len();
            let result = match self.assert(choice, Reason::Assumed) {
                Err(c) => Node::Refuted(self.leaf(&c)),
                Ok(()) => self.solve(),
            };
            match result {
                Node::Refuted(r) => {
                    self.undo(mark);
                    branches.push(r);
                }
                other => return other,
            }
        }
        let negative = branches.pop().expect("two branches");
        let positive = branches.pop().expect("two branches");
        Node::Refuted(Refutation::Branch {
            assume_positive: theory.fact(pos),
            positive: Box::new(positive),
            assume_negative: theory.fact(neg),
            negative: Box::new(negative),
        })
    }
}
