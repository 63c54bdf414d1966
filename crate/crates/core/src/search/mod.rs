//! Decision procedures for invariant orders.
//!
//! Both searches branch on one polarity variable at a time, close the
//! current assignment under the order axioms after every decision, and
//! report either a witness, a refutation tree, or exhaustion of the node
//! budget. Refutation trees are replayed independently by [`verify`].

use alloc::{boxed::Box, vec::Vec};

mod cone;
mod engine;
mod finite;
pub mod verify;

pub use cone::{cone_search, cone_search_with_limits, ConeOutcome, ConeRule};
pub use finite::{
    search_invariant_order_finite, search_invariant_order_finite_with_limits, OrderOutcome, Pair,
    PairRule,
};

use crate::group::DEFAULT_BALL_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Status {
    Found,
    ImpossibleOnWindow,
    ExhaustedNoConclusion,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchStats {
    pub nodes: u64,
    pub propagations: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_nodes: u64,
    pub max_ball: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_nodes: 1_000_000,
            max_ball: DEFAULT_BALL_CAP,
        }
    }
}

/// One derived fact and the rule instance that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Step<F, R> {
    pub fact: F,
    pub rule: R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Contradiction<F> {
    /// A fact that can never hold, such as `e ∈ P`.
    Absurd(F),
    /// A fact together with its opposite.
    Clash(F, F),
}

/// Proof that no assignment extends the facts in scope.
///
/// A `Conflict` leaf lists derivation steps in order; every premise of a
/// step is either an earlier step or an assumption of an enclosing branch.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Refutation<F, R> {
    Conflict {
        steps: Vec<Step<F, R>>,
        contradiction: Contradiction<F>,
    },
    Branch {
        assume_positive: F,
        positive: Box<Refutation<F, R>>,
        assume_negative: F,
        negative: Box<Refutation<F, R>>,
    },
}

impl<F, R> Refutation<F, R> {
    /// Number of conflict leaves.
    pub fn leaves(&self) -> usize {
        match self {
            Refutation::Conflict { .. } => 1,
            Refutation::Branch {
                positive, negative, ..
            } => positive.leaves() + negative.leaves(),
        }
    }

    /// Longest branch path.
    pub fn depth(&self) -> usize {
        match self {
            Refutation::Conflict { .. } => 0,
            Refutation::Branch {
                positive, negative, ..
            } => 1 + positive.depth().max(negative.depth()),
        }
    }
}
