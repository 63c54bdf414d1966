//! Certificate documents. Serialization is canonical: field order is fixed,
//! collections are emitted in carrier or search order, and no timing data
//! is recorded, so identical jobs give identical bytes.

use lineorder_core::bundle::{Edge, Verdict};
use lineorder_core::oracle::Mode;
use lineorder_core::search::{ConeRule, Pair, PairRule, Refutation, SearchStats, Status};
use lineorder_core::{GroupElement, Letter};
use serde::{Deserialize, Serialize};

use crate::doc::{GSetDoc, GroupDef, Rat};
use crate::error::{Error, Result};

pub const FORMAT: &str = "lineorder-certificate/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    CheckAxioms,
    SearchOrder,
    ConeSearch,
    Embed,
    Realize,
    Witness,
    BiWitness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    ImpossibleOnWindow,
    ExhaustedNoConclusion,
    Certified,
    Refuted,
    Passed,
    Failed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Found | Outcome::Certified | Outcome::Passed => 0,
            Outcome::ImpossibleOnWindow | Outcome::Refuted | Outcome::Failed => 2,
            Outcome::ExhaustedNoConclusion => 3,
        }
    }
}

impl From<Status> for Outcome {
    fn from(s: Status) -> Self {
        match s {
            Status::Found => Outcome::Found,
            Status::ImpossibleOnWindow => Outcome::ImpossibleOnWindow,
            Status::ExhaustedNoConclusion => Outcome::ExhaustedNoConclusion,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub format: String,
    pub task: Task,
    pub outcome: Outcome,
    pub result: Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Body {
    Cone(ConeCert),
    Order(OrderCert),
    Relation(RelationCert),
    ConeCheck(ConeCheckCert),
    Embedding(EmbeddingCert),
    Realization(RealizationCert),
    Witness(WitnessCert),
}

/// A cone search on a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeCert {
    pub group: GroupDef,
    pub radius: u32,
    pub mode: Mode,
    /// Cone members in length-lex order when found.
    pub members: Option<Vec<GroupElement>>,
    pub refutation: Option<Refutation<GroupElement, ConeRule>>,
    pub stats: SearchStats,
}

/// An invariant order search on a finite G-set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderCert {
    pub gset: GSetDoc,
    /// Points from least to greatest when found.
    pub ranking: Option<Vec<usize>>,
    pub refutation: Option<Refutation<Pair, PairRule>>,
    pub stats: SearchStats,
}

/// Axiom and invariance check of a relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationCert {
    pub gset: GSetDoc,
    /// Sorted pairs `(x, y)` with `x < y`.
    pub pairs: Vec<(usize, usize)>,
    /// Failed axiom names, `invariance` last.
    pub failed: Vec<String>,
    /// One witness per failed axiom.
    pub witnesses: Vec<String>,
}

/// Axiom check of a positive cone on its window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeCheckCert {
    pub group: GroupDef,
    pub radius: u32,
    pub mode: Mode,
    pub members: Vec<GroupElement>,
    pub failed: Vec<String>,
}

/// The order used to place points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleDoc {
    Lex,
    Magnus,
    Semidirect,
    Index,
    /// A found positive cone.
    Cone {
        radius: u32,
        mode: Mode,
        members: Vec<GroupElement>,
    },
}

/// Heights of a G-set window placed on the line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Placement {
    /// The group the oracle orders.
    pub group: GroupDef,
    pub oracle: OracleDoc,
    pub gset: GSetDoc,
    /// Order in which points were inserted.
    pub enumeration: Vec<usize>,
    /// Height of each point by carrier id.
    pub heights: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingCert {
    pub placement: Placement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub element: GroupElement,
    pub breakpoints: Vec<Rat>,
    pub values: Vec<Rat>,
}

/// A pair of points with `t(first) < t(second)` whose images under
/// `element` are not in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstruction {
    pub element: GroupElement,
    pub first: usize,
    pub second: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationCert {
    pub placement: Placement,
    pub maps: Vec<MapDoc>,
    pub obstruction: Option<Obstruction>,
    pub equivariance_checked: usize,
    pub composition_checked: usize,
    /// Failed checks of the realization report.
    pub failed: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<Edge>,
    /// `(vertex, letter)` pairs whose edge leaves the window.
    pub dropped: Vec<(usize, Letter)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessCert {
    pub placement: Placement,
    pub graph: GraphDoc,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn new(task: Task, outcome: Outcome, result: Body) -> Self {
        Certificate {
            format: FORMAT.into(),
            task,
            outcome,
            result,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Certificate =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        if c.format != FORMAT {
            return Err(Error::Malformed(format!("unknown format `{}`", c.format)));
        }
        Ok(c)
    }
}
