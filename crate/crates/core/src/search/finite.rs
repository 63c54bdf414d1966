//! Invariant strict total orders on a finite G-set.
//!
//! Atom `(x, y)` states `x < y`. Translating by a letter and transitivity
//! close the assignment; a pair together with its swap is a clash. Before
//! branching, orbits of the diagonal action on off-diagonal pairs are
//! computed and a pair whose orbit contains its own swap becomes the first
//! decision, which refutes both polarities by translation alone.

use alloc::{format, vec::Vec};

use super::engine::{Atom, Derivation, Engine, Node, Theory};
use super::{Refutation, SearchLimits, SearchStats, Status};
use crate::error::{Error, Result};
use crate::group::Letter;
use crate::gset::GSet;
use crate::relation::Relation;

pub type Pair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum PairRule {
    /// `fact = (x·s, y·s)` for `from = (x, y)`.
    Translate { from: Pair, letter: Letter },
    /// `fact = (x, z)` from `(x, y)` and `(y, z)`.
    Transitive { first: Pair, second: Pair },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderOutcome {
    pub status: Status,
    pub witness: Option<Relation>,
    pub refutation: Option<Refutation<Pair, PairRule>>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug)]
enum Rule {
    Translate(Atom, Letter),
    Transitive(Atom, Atom),
}

struct PairTheory {
    n: usize,
    letters: Vec<Letter>,
    /// `act[slot][x]`, slot in the order of `letters`.
    act: Vec<Vec<usize>>,
    variables: Vec<(Atom, Atom)>,
}

impl PairTheory {
    fn pair(&self, a: Atom) -> Pair {
        (a / self.n, a % self.n)
    }

    fn atom(&self, x: usize, y: usize) -> Atom {
        x * self.n + y
    }
}

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

/// The first pair `(x, y)`, `x < y`, whose diagonal orbit contains `(y, x)`.
fn swap_orbit(n: usize, act: &[Vec<usize>]) -> Option<Pair> {
    let mut parent: Vec<usize> = (0..n * n).collect();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            for perm in act {
                let a = find(&mut parent, x * n + y);
                let b = find(&mut parent, perm[x] * n + perm[y]);
                parent[a] = b;
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if find(&mut parent, x * n + y) == find(&mut parent, y * n + x) {
                return Some((x, y));
            }
        }
    }
    None
}

impl Theory for PairTheory {
    type Rule = Rule;
    type Fact = Pair;
    type DomainRule = PairRule;

    fn atom_count(&self) -> usize {
        self.n * self.n
    }

    fn opposite(&self, a: Atom) -> Atom {
        let (x, y) = self.pair(a);
        self.atom(y, x)
    }

    fn is_absurd(&self, a: Atom) -> bool {
        let (x, y) = self.pair(a);
        x == y
    }

    fn variables(&self) -> &[(Atom, Atom)] {
        &self.variables
    }

    fn forced(&self) -> Vec<Derivation<Rule>> {
        Vec::new()
    }

    fn consequences(
        &self,
        a: Atom,
        _known: &[Atom],
        is_known: &dyn Fn(Atom) -> bool,
        out: &mut Vec<Derivation<Rule>>,
    ) {
        let (x, y) = self.pair(a);
        for (slot, &l) in self.letters.iter().enumerate() {
            let perm = &self.act[slot];
            out.push(Derivation {
                atom: self.atom(perm[x], perm[y]),
                rule: Rule::Translate(a, l),
                premises: [Some(a), None],
            });
        }
        for w in 0..self.n {
            let before = self.atom(w, x);
            if w != x && is_known(before) {
                out.push(Derivation {
                    atom: self.atom(w, y),
                    rule: Rule::Transitive(before, a),
                    premises: [Some(before), Some(a)],
                });
            }
            let after = self.atom(y, w);
            if w != y && is_known(after) {
                out.push(Derivation {
                    atom: self.atom(x, w),
                    rule: Rule::Transitive(a, after),
                    premises: [Some(a), Some(after)],
                });
            }
        }
    }

    fn fact(&self, a: Atom) -> Pair {
        self.pair(a)
    }

    fn export_rule(&self, rule: &Rule) -> PairRule {
        match *rule {
            Rule::Translate(from, letter) => PairRule::Translate {
                from: self.pair(from),
                letter,
            },
            Rule::Transitive(f, s) => PairRule::Transitive {
                first: self.pair(f),
                second: self.pair(s),
            },
        }
    }
}

/// Decides whether a finite G-set with a total action carries an invariant
/// strict total order.
pub fn search_invariant_order_finite(x: &GSet) -> Result<OrderOutcome> {
    search_invariant_order_finite_with_limits(x, SearchLimits::default())
}

pub fn search_invariant_order_finite_with_limits(
    x: &GSet,
    limits: SearchLimits,
) -> Result<OrderOutcome> {
    if x.is_truncated() {
        return Err(Error::InvalidGroup(
            "order search needs a non-truncated G-set".into(),
        ));
    }
    let n = x.len();
    let letters = x.ctx().letters();
    let mut act = Vec::with_capacity(letters.len());
    for &l in &letters {
        let perm = (0..n)
            .map(|p| {
                x.act_letter(p, l).ok_or_else(|| {
                    Error::InvalidGroup(format!("action of letter undefined at point {p}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        act.push(perm);
    }
    let first = swap_orbit(n, &act);
    let mut variables = Vec::new();
    if let Some((a, b)) = first {
        variables.push((a * n + b, b * n + a));
    }
    for a in 0..n {
        for b in a + 1..n {
            if Some((a, b)) != first {
                variables.push((a * n + b, b * n + a));
            }
        }
    }
    let theory = PairTheory {
        n,
        letters,
        act,
        variables,
    };
    let mut engine = Engine::new(&theory, limits.max_nodes);
    let node = engine.run();
    let mut outcome = OrderOutcome {
        status: Status::ExhaustedNoConclusion,
        witness: None,
        refutation: None,
        stats: engine.stats,
    };
    match node {
        Node::Found => {
            let pairs = engine.model().iter().map(|&a| theory.pair(a));
            outcome.status = Status::Found;
            outcome.witness = Some(Relation::new(n, pairs)?);
        }
        Node::Refuted(r) => {
            outcome.status = Status::ImpossibleOnWindow;
            outcome.refutation = Some(r);
        }
        Node::Exhausted => {}
    }
    Ok(outcome)
}
