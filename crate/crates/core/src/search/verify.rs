//! Independent re-checking of search outcomes.
//!
//! Witnesses go through the relation and cone checkers; refutations are
//! replayed step by step from their branch assumptions, recomputing every
//! group product and action image from the definitions.

use alloc::{collections::BTreeSet, format, string::String};
use core::fmt::Debug;

use super::{ConeOutcome, ConeRule, Contradiction, OrderOutcome, Pair, PairRule, Refutation, Status};
use crate::error::{Error, Result};
use crate::group::{GroupCtx, GroupElement};
use crate::gset::GSet;
use crate::oracle::{Mode, PositiveCone};

fn reject(check: &'static str, detail: String) -> Error {
    Error::Rejected { check, detail }
}

trait Rules {
    type Fact: Ord + Clone + Debug;
    type Rule: Debug;

    /// The two branch assumptions must cover every possibility.
    fn branch(&self, pos: &Self::Fact, neg: &Self::Fact) -> Result<()>;
    fn step(&self, fact: &Self::Fact, rule: &Self::Rule, known: &BTreeSet<Self::Fact>) -> Result<()>;
    fn contradiction(&self, c: &Contradiction<Self::Fact>) -> Result<()>;
}

fn replay<S: Rules>(
    rules: &S,
    tree: &Refutation<S::Fact, S::Rule>,
    known: &mut BTreeSet<S::Fact>,
) -> Result<()> {
    match tree {
        Refutation::Branch {
            assume_positive,
            positive,
            assume_negative,
            negative,
        } => {
            rules.branch(assume_positive, assume_negative)?;
            for (fact, sub) in [(assume_positive, positive), (assume_negative, negative)] {
                let mut scope = known.clone();
                scope.insert(fact.clone());
                replay(rules, sub, &mut scope)?;
            }
            Ok(())
        }
        Refutation::Conflict {
            steps,
            contradiction,
        } => {
            for s in steps {
                rules.step(&s.fact, &s.rule, known)?;
                known.insert(s.fact.clone());
            }
            let facts = match contradiction {
                Contradiction::Absurd(f) => [f, f],
                Contradiction::Clash(f, g) => [f, g],
            };
            for f in facts {
                if !known.contains(f) {
                    return Err(reject(
                        "replay",
                        format!("contradiction uses {f:?}, which was never established"),
                    ));
                }
            }
            rules.contradiction(contradiction)
        }
    }
}

struct ConeRules<'a> {
    ctx: &'a GroupCtx,
    radius: u32,
    mode: Mode,
}

impl ConeRules<'_> {
    fn in_window(&self, g: &GroupElement) -> Result<()> {
        self.ctx.validate(g)?;
        if self.ctx.length(g) > self.radius {
            return Err(reject(
                "replay",
                format!("{} lies outside the window", self.ctx.display(g)),
            ));
        }
        Ok(())
    }

    fn premise(&self, g: &GroupElement, known: &BTreeSet<GroupElement>) -> Result<()> {
        if known.contains(g) {
            Ok(())
        } else {
            Err(reject(
                "replay",
                format!("premise {} ∈ P is not established", self.ctx.display(g)),
            ))
        }
    }
}

impl Rules for ConeRules<'_> {
    type Fact = GroupElement;
    type Rule = ConeRule;

    fn branch(&self, pos: &GroupElement, neg: &GroupElement) -> Result<()> {
        self.in_window(pos)?;
        if self.ctx.is_identity(pos) || self.ctx.invert(pos)? != *neg || pos == neg {
            return Err(reject(
                "replay",
                format!(
                    "branch on {} / {} is not a sign choice",
                    self.ctx.display(pos),
                    self.ctx.display(neg)
                ),
            ));
        }
        Ok(())
    }

    fn step(&self, fact: &GroupElement, rule: &ConeRule, known: &BTreeSet<GroupElement>) -> Result<()> {
        self.in_window(fact)?;
        let expected = match rule {
            ConeRule::SelfInverse => {
                if self.ctx.is_identity(fact) {
                    return Err(reject("replay", "the identity is not an involution".into()));
                }
                self.ctx.invert(fact)?
            }
            ConeRule::Product { left, right } => {
                self.premise(left, known)?;
                self.premise(right, known)?;
                self.ctx.op(left, right)?
            }
            ConeRule::Conjugate { element, by } => {
                if self.mode != Mode::Bi {
                    return Err(reject("replay", "conjugation step in right mode".into()));
                }
                self.premise(element, known)?;
                self.ctx.conjugate(element, by)?
            }
        };
        if expected != *fact {
            return Err(reject(
                "replay",
                format!(
                    "{rule:?} yields {}, not {}",
                    self.ctx.display(&expected),
                    self.ctx.display(fact)
                ),
            ));
        }
        Ok(())
    }

    fn contradiction(&self, c: &Contradiction<GroupElement>) -> Result<()> {
        let ok = match c {
            Contradiction::Absurd(f) => self.ctx.is_identity(f),
            Contradiction::Clash(f, g) => self.ctx.invert(f)? == *g,
        };
        if ok {
            Ok(())
        } else {
            Err(reject("replay", format!("{c:?} is not contradictory")))
        }
    }
}

/// Re-checks a cone search outcome. An exhausted outcome claims nothing and
/// is accepted as long as it carries neither witness nor refutation.
pub fn verify_cone_outcome(outcome: &ConeOutcome) -> Result<()> {
    match outcome.status {
        Status::Found => {
            let cone = outcome
                .witness
                .as_ref()
                .ok_or_else(|| Error::MalformedCertificate("Found without a witness".into()))?;
            verify_cone(cone, &outcome.ctx, outcome.radius, outcome.mode)
        }
        Status::ImpossibleOnWindow => {
            let tree = outcome.refutation.as_ref().ok_or_else(|| {
                Error::MalformedCertificate("ImpossibleOnWindow without a refutation".into())
            })?;
            let rules = ConeRules {
                ctx: &outcome.ctx,
                radius: outcome.radius,
                mode: outcome.mode,
            };
            replay(&rules, tree, &mut BTreeSet::new())
        }
        Status::ExhaustedNoConclusion => {
            if outcome.witness.is_some() || outcome.refutation.is_some() {
                return Err(Error::MalformedCertificate(
                    "an exhausted outcome carries a verdict".into(),
                ));
            }
            Ok(())
        }
    }
}

/// Checks a cone against the pairing, closure and (bi mode) conjugation
/// axioms on its window.
pub fn verify_cone(cone: &PositiveCone, ctx: &GroupCtx, radius: u32, mode: Mode) -> Result<()> {
    if cone.ctx() != ctx || cone.radius() != radius || cone.mode() != mode {
        return Err(Error::MalformedCertificate(
            "witness context, radius or mode differs from the outcome".into(),
        ));
    }
    let rebuilt = PositiveCone::new(ctx, radius, cone.members(), mode)
        .map_err(|e| reject("pairing", format!("{e}")))?;
    let report = rebuilt.check_axioms()?;
    if let Some(&axiom) = report.failed_axioms().first() {
        let detail = match axiom {
            "pairing" => match report.pairing.first() {
                Some(g) => format!("exactly one of {0}, {0}^-1 must be positive", ctx.display(g)),
                None => "identity or out-of-window member".into(),
            },
            "closure" => {
                let (g, h) = &report.closure[0];
                format!(
                    "{} and {} positive but their product is not",
                    ctx.display(g),
                    ctx.display(h)
                )
            }
            _ => {
                let (g, f) = &report.conjugation[0];
                format!(
                    "{} positive but its conjugate by {} is not",
                    ctx.display(g),
                    ctx.display(f)
                )
            }
        };
        return Err(reject(axiom, detail));
    }
    Ok(())
}

struct PairRules<'a> {
    x: &'a GSet,
}

impl PairRules<'_> {
    fn point(&self, p: Pair) -> Result<()> {
        let n = self.x.len();
        if p.0 >= n || p.1 >= n {
            return Err(reject("replay", format!("pair {p:?} outside {n} points")));
        }
        Ok(())
    }
}

impl Rules for PairRules<'_> {
    type Fact = Pair;
    type Rule = PairRule;

    fn branch(&self, pos: &Pair, neg: &Pair) -> Result<()> {
        self.point(*pos)?;
        if pos.0 == pos.1 || (pos.1, pos.0) != *neg {
            return Err(reject(
                "replay",
                format!("branch on {pos:?} / {neg:?} is not a pair and its swap"),
            ));
        }
        Ok(())
    }

    fn step(&self, fact: &Pair, rule: &PairRule, known: &BTreeSet<Pair>) -> Result<()> {
        self.point(*fact)?;
        let premise = |p: &Pair| {
            if known.contains(p) {
                Ok(())
            } else {
                Err(reject("replay", format!("premise {p:?} is not established")))
            }
        };
        let expected = match rule {
            PairRule::Translate { from, letter } => {
                premise(from)?;
                match (self.x.act_letter(from.0, *letter), self.x.act_letter(from.1, *letter)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(reject(
                            "replay",
                            format!("translate of {from:?} leaves the window"),
                        ))
                    }
                }
            }
            PairRule::Transitive { first, second } => {
                premise(first)?;
                premise(second)?;
                if first.1 != second.0 {
                    return Err(reject(
                        "replay",
                        format!("{first:?} and {second:?} do not chain"),
                    ));
                }
                (first.0, second.1)
            }
        };
        if expected != *fact {
            return Err(reject(
                "replay",
                format!("{rule:?} yields {expected:?}, not {fact:?}"),
            ));
        }
        Ok(())
    }

    fn contradiction(&self, c: &Contradiction<Pair>) -> Result<()> {
        let ok = match c {
            Contradiction::Absurd(f) => f.0 == f.1,
            Contradiction::Clash(f, g) => (f.1, f.0) == *g,
        };
        if ok {
            Ok(())
        } else {
            Err(reject("replay", format!("{c:?} is not contradictory")))
        }
    }
}

/// Re-checks an order search outcome on the G-set it was computed for.
pub fn verify_order_outcome(x: &GSet, outcome: &OrderOutcome) -> Result<()> {
    match outcome.status {
        Status::Found => {
            let r = outcome
                .witness
                .as_ref()
                .ok_or_else(|| Error::MalformedCertificate("Found without a witness".into()))?;
            if r.size() != x.len() {
                return Err(Error::BaseMismatch(x.len(), r.size()));
            }
            let report = r.check_strict_total_order();
            if let Some(&axiom) = report.failed_axioms().first() {
                return Err(reject(axiom, format!("{report:?}")));
            }
            let inv = r.check_invariance(x)?;
            if let Some(v) = inv.violations.first() {
                return Err(reject(
                    "invariance",
                    format!(
                        "{:?} related but its image {:?} under {} is not",
                        v.pair,
                        v.image,
                        x.ctx().letter_name(v.letter)
                    ),
                ));
            }
            Ok(())
        }
        Status::ImpossibleOnWindow => {
            let tree = outcome.refutation.as_ref().ok_or_else(|| {
                Error::MalformedCertificate("ImpossibleOnWindow without a refutation".into())
            })?;
            replay(&PairRules { x }, tree, &mut BTreeSet::new())
        }
        Status::ExhaustedNoConclusion => {
            if outcome.witness.is_some() || outcome.refutation.is_some() {
                return Err(Error::MalformedCertificate(
                    "an exhausted outcome carries a verdict".into(),
                ));
            }
            Ok(())
        }
    }
}
