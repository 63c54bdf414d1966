//! Positive-cone search on a ball.
//!
//! Atom `i` states that the `i`-th ball element lies in `P`. Its opposite is
//! the atom of the inverse, and the identity atom is absurd. Closure rules
//! are in-window products and, in bi mode, in-window conjugates by ball
//! elements. Involutions are forced positive at the root, since `g = g⁻¹`
//! leaves no choice, so torsion refutes without branching.

use alloc::{collections::BTreeMap, vec, vec::Vec};

use super::engine::{Atom, Derivation, Engine, Node, Theory};
use super::{Refutation, SearchLimits, SearchStats, Status};
use crate::error::Result;
use crate::group::{GroupCtx, GroupElement};
use crate::oracle::{Mode, PositiveCone};

const NONE: u32 = u32::MAX;

/// Closure rule behind a derived membership `fact ∈ P`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum ConeRule {
    /// `fact = fact⁻¹ ≠ e`, so `fact` is positive in every order.
    SelfInverse,
    /// `fact = left · right` with both factors positive.
    Product {
        left: GroupElement,
        right: GroupElement,
    },
    /// `fact = by⁻¹ · element · by` with `element` positive.
    Conjugate {
        element: GroupElement,
        by: GroupElement,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeOutcome {
    pub ctx: GroupCtx,
    pub radius: u32,
    pub mode: Mode,
    pub status: Status,
    pub witness: Option<PositiveCone>,
    pub refutation: Option<Refutation<GroupElement, ConeRule>>,
    pub stats: SearchStats,
}

#[derive(Clone, Copy, Debug)]
enum Rule {
    SelfInverse,
    Product(u32, u32),
    Conjugate(u32, u32),
}

struct ConeTheory {
    ball: Vec<GroupElement>,
    inv: Vec<u32>,
    /// `mul[i * n + j]` is the index of `ball[i] · ball[j]`, or `NONE`.
    mul: Vec<u32>,
    /// `conj[i * n + f]` is the index of `ball[f]⁻¹ · ball[i] · ball[f]`.
    conj: Option<Vec<u32>>,
    variables: Vec<(Atom, Atom)>,
}

impl ConeTheory {
    fn new(ctx: &GroupCtx, ball: Vec<GroupElement>, mode: Mode) -> Result<Self> {
        let n = ball.len();
        let index: BTreeMap<&GroupElement, u32> =
            ball.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
        let look = |g: &GroupElement| index.get(g).copied().unwrap_or(NONE);
        let inv = ball
            .iter()
            .map(|g| ctx.invert(g).map(|gi| look(&gi)))
            .collect::<Result<Vec<_>>>()?;
        let mut mul = vec![NONE; n * n];
        for (i, g) in ball.iter().enumerate().skip(1) {
            for (j, h) in ball.iter().enumerate().skip(1) {
                mul[i * n + j] = look(&ctx.op(g, h)?);
            }
        }
        let conj = match mode {
            Mode::Right => None,
            Mode::Bi => {
                let mut c = vec![NONE; n * n];
                for (i, g) in ball.iter().enumerate().skip(1) {
                    for (f, h) in ball.iter().enumerate().skip(1) {
                        c[i * n + f] = look(&ctx.conjugate(g, h)?);
                    }
                }
                Some(c)
            }
        };
        let variables = (1..n)
            .filter(|&i| (i as u32) < inv[i])
            .map(|i| (i, inv[i] as usize))
            .collect();
        Ok(ConeTheory {
            ball,
            inv,
            mul,
            conj,
            variables,
        })
    }
}

impl Theory for ConeTheory {
    type Rule = Rule;
    type Fact = GroupElement;
    type DomainRule = ConeRule;

    fn atom_count(&self) -> usize {
        self.ball.len()
    }

    fn opposite(&self, a: Atom) -> Atom {
        self.inv[a] as usize
    }

    fn is_absurd(&self, a: Atom) -> bool {
        a == 0
    }

    fn variables(&self) -> &[(Atom, Atom)] {
        &self.variables
    }

    fn forced(&self) -> Vec<Derivation<Rule>> {
        (1..self.ball.len())
            .filter(|&i| self.inv[i] as usize == i)
            .map(|i| Derivation {
                atom: i,
                rule: Rule::SelfInverse,
                premises: [None, None],
            })
            .collect()
    }

    fn consequences(
        &self,
        a: Atom,
        known: &[Atom],
        _is_known: &dyn Fn(Atom) -> bool,
        out: &mut Vec<Derivation<Rule>>,
    ) {
        let n = self.ball.len();
        for &b in known {
            for (l, r) in [(a, b), (b, a)] {
                let p = self.mul[l * n + r];
                if p != NONE {
                    out.push(Derivation {
                        atom: p as usize,
                        rule: Rule::Product(l as u32, r as u32),
                        premises: [Some(l), Some(r)],
                    });
                }
            }
        }
        if let Some(conj) = &self.conj {
            for f in 1..n {
                let c = conj[a * n + f];
                if c != NONE {
                    out.push(Derivation {
                        atom: c as usize,
                        rule: Rule::Conjugate(a as u32, f as u32),
                        premises: [Some(a), None],
                    });
                }
            }
        }
    }

    fn fact(&self, a: Atom) -> GroupElement {
        self.ball[a].clone()
    }

    fn export_rule(&self, rule: &Rule) -> ConeRule {
        let el = |i: u32| self.ball[i as usize].clone();
        match *rule {
            Rule::SelfInverse => ConeRule::SelfInverse,
            Rule::Product(l, r) => ConeRule::Product {
                left: el(l),
                right: el(r),
            },
            Rule::Conjugate(g, f) => ConeRule::Conjugate {
                element: el(g),
                by: el(f),
            },
        }
    }
}

/// Searches for a sign assignment on `ball(radius) ∖ {e}` closed under the
/// rules of `mode`, with default limits.
pub fn cone_search(ctx: &GroupCtx, radius: u32, mode: Mode) -> Result<ConeOutcome> {
    cone_search_with_limits(ctx, radius, mode, SearchLimits::default())
}

pub fn cone_search_with_limits(
    ctx: &GroupCtx,
    radius: u32,
    mode: Mode,
    limits: SearchLimits,
) -> Result<ConeOutcome> {
    let ball = ctx.ball_with_cap(radius, limits.max_ball)?;
    let theory = ConeTheory::new(ctx, ball, mode)?;
    let mut engine = Engine::new(&theory, limits.max_nodes);
    let node = engine.run();
    let mut outcome = ConeOutcome {
        ctx: ctx.clone(),
        radius,
        mode,
        status: Status::ExhaustedNoConclusion,
        witness: None,
        refutation: None,
        stats: engine.stats,
    };
    match node {
        Node::Found => {
            let members = engine.model().iter().map(|&a| theory.fact(a)).collect();
            outcome.status = Status::Found;
            outcome.witness = Some(PositiveCone::from_parts_unchecked(
                ctx.clone(),
                radius,
                members,
                mode,
            ));
        }
        Node::Refuted(r) => {
            outcome.status = Status::ImpossibleOnWindow;
            outcome.refutation = Some(r);
        }
        Node::Exhausted => {}
    }
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Twist;
    use crate::search::{Contradiction, Refutation};
    use crate::tables;

    #[test]
    fn integers_found() {
        let ctx = GroupCtx::free_abelian(1);
        let out = cone_search(&ctx, 4, Mode::Right).unwrap();
        assert_eq!(out.status, Status::Found);
        let members = out.witness.unwrap().members();
        let expect: Vec<_> = (1..=4).map(|k| GroupElement::Vector(vec![k])).collect();
        assert_eq!(members, expect);
    }

    #[test]
    fn cyclic_four_refuted_without_branching() {
        let ctx = GroupCtx::finite(tables::cyclic(4));
        let out = cone_search(&ctx, 4, Mode::Right).unwrap();
        assert_eq!(out.status, Status::ImpossibleOnWindow);
        match out.refutation.unwrap() {
            Refutation::Conflict {
                steps,
                contradiction,
            } => {
                assert_eq!(steps[0].fact, GroupElement::Table(2));
                assert_eq!(steps[0].rule, ConeRule::SelfInverse);
                assert_eq!(contradiction, Contradiction::Absurd(GroupElement::Table(0)));
            }
            other => panic!("expected a leaf, got {other:?}"),
        }
    }

    #[test]
    fn node_budget_gives_exhausted() {
        let ctx = GroupCtx::free(2);
        let limits = SearchLimits {
            max_nodes: 1,
            ..SearchLimits::default()
        };
        let out = cone_search_with_limits(&ctx, 2, Mode::Right, limits).unwrap();
        assert_eq!(out.status, Status::ExhaustedNoConclusion);
        assert!(out.witness.is_none() && out.refutation.is_none());
    }

    #[test]
    fn klein_right_found_bi_refuted() {
        let ctx = GroupCtx::semidirect(Twist::Minus);
        let right = cone_search(&ctx, 3, Mode::Right).unwrap();
        assert_eq!(right.status, Status::Found);
        assert!(right.witness.unwrap().check_axioms().unwrap().passes());
        let bi = cone_search(&ctx, 1, Mode::Bi).unwrap();
        assert_eq!(bi.status, Status::ImpossibleOnWindow);
    }
}
