//! Job documents and the task runner.

use std::path::{Path, PathBuf};

use lineorder_core::bundle::build_cayley_ball;
use lineorder_core::group::{Backend, DEFAULT_BALL_CAP};
use lineorder_core::gset::{GSet, PointTag};
use lineorder_core::magnus::MagnusOrder;
use lineorder_core::oracle::{
    oracle_from_cone, IndexOrder, LexOrder, Mode, OrderOracle, PositiveCone, SemidirectOrder,
};
use lineorder_core::realization::{
    check_realization, embed_in_rationals, extend_action_to_line, point_comparator, OrderEmbedding,
    Realization,
};
use lineorder_core::relation::Relation;
use lineorder_core::search::{
    cone_search_with_limits, search_invariant_order_finite_with_limits, SearchLimits, Status,
};
use lineorder_core::{GroupCtx, GroupElement};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cert::*;
use crate::doc::{parse_element, GSetDoc, GSetSpec, GroupDef, Rat};
use crate::error::{Error, Result};
use crate::par;
use crate::plot::{export_plot, PlotFormat};

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleSpec {
    /// Lex on free abelian groups, Magnus on free groups, the semidirect
    /// order on `⟨a, b⟩` and the index order on tables.
    #[default]
    Auto,
    Lex,
    Magnus,
    Semidirect,
    Index,
    /// Searches a cone on the ball of twice the job radius.
    Cone,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case", deny_unknown_fields)]
pub enum Enumeration {
    /// Carrier order, which is length-lex on balls.
    #[default]
    Carrier,
    /// A shuffle of the carrier seeded with `seed`.
    Seeded { seed: u64 },
    Explicit { order: Vec<usize> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum RelationSpec {
    /// `x < y` as the job's oracle says.
    #[default]
    Oracle,
    Pairs { pairs: Vec<(usize, usize)> },
    /// Points from least to greatest.
    Ranking { ranking: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub task: Task,
    pub group: GroupDef,
    #[serde(default)]
    pub radius: Option<u32>,
    #[serde(default)]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub gset: Option<GSetSpec>,
    #[serde(default)]
    pub oracle: OracleSpec,
    #[serde(default)]
    pub enumeration: Enumeration,
    /// Relation to check in `check-axioms`.
    #[serde(default)]
    pub relation: Option<RelationSpec>,
    /// Cone members to check in `check-axioms`, as words.
    #[serde(default)]
    pub cone: Option<Vec<String>>,
    /// Elements to realize, as words; defaults to the generators.
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub max_ball: Option<usize>,
    #[serde(default)]
    pub max_nodes: Option<u64>,
    /// Worker threads for crossing checks; the certificate does not depend
    /// on it.
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub plot: Option<PathBuf>,
}

impl JobSpec {
    pub fn new(task: Task, group: GroupDef) -> Self {
        JobSpec {
            task,
            group,
            radius: None,
            mode: None,
            gset: None,
            oracle: OracleSpec::Auto,
            enumeration: Enumeration::Carrier,
            relation: None,
            cone: None,
            elements: None,
            max_ball: None,
            max_nodes: None,
            threads: None,
            out: None,
            plot: None,
        }
    }

    /// Parses JSON for `.json` paths and TOML otherwise.
    pub fn parse(text: &str, json: bool) -> Result<Self> {
        if json {
            Ok(serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?)
        } else {
            Ok(toml::from_str(text).map_err(|e| Error::Input(e.to_string()))?)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let json = path.extension().is_some_and(|e| e == "json");
        Self::parse(&text, json)
    }

    fn radius(&self) -> u32 {
        self.radius.unwrap_or(DEFAULT_RADIUS)
    }

    fn mode(&self) -> Mode {
        self.mode.unwrap_or(Mode::Right)
    }

    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_nodes: self.max_nodes.unwrap_or(DEFAULT_MAX_NODES),
            max_ball: self.max_ball.unwrap_or(DEFAULT_BALL_CAP),
        }
    }

    fn window(&self, ctx: &GroupCtx) -> Result<GSet> {
        let bi = self.task == Task::BiWitness || (self.task == Task::Witness && self.mode() == Mode::Bi);
        let spec = match (&self.gset, bi) {
            (_, true) => GSetSpec::Biregular,
            (Some(s), false) => s.clone(),
            (None, false) => GSetSpec::Regular,
        };
        spec.build(ctx, self.radius(), self.limits().max_ball)
    }
}

/// What a run produced: the certificate and, for witness tasks, the
/// witness for plotting.
pub struct RunOutput {
    pub certificate: Certificate,
    pub witness: Option<lineorder_core::bundle::HeightWitness>,
}

/// Runs a job in memory.
pub fn execute(job: &JobSpec) -> Result<RunOutput> {
    let ctx = job.group.build()?;
    let plain = |certificate| RunOutput {
        certificate,
        witness: None,
    };
    match job.task {
        Task::ConeSearch => cone_search_task(job, &ctx).map(plain),
        Task::SearchOrder => search_order_task(job, &ctx).map(plain),
        Task::CheckAxioms => check_axioms_task(job, &ctx).map(plain),
        Task::Embed | Task::Realize | Task::Witness | Task::BiWitness => placement_task(job, &ctx),
    }
}

fn cone_search_task(job: &JobSpec, ctx: &GroupCtx) -> Result<Certificate> {
    let out = cone_search_with_limits(ctx, job.radius(), job.mode(), job.limits())?;
    Ok(Certificate::new(
        job.task,
        out.status.into(),
        Body::Cone(ConeCert {
            group: GroupDef::of(ctx),
            radius: out.radius,
            mode: out.mode,
            members: out.witness.map(|c| sorted_members(ctx, &c)),
            refutation: out.refutation,
            stats: out.stats,
        }),
    ))
}

fn sorted_members(ctx: &GroupCtx, cone: &PositiveCone) -> Vec<GroupElement> {
    let mut m = cone.members();
    m.sort_by(|g, h| ctx.length_lex(g, h));
    m
}

fn search_order_task(job: &JobSpec, ctx: &GroupCtx) -> Result<Certificate> {
    let x = job.window(ctx)?;
    let out = search_invariant_order_finite_with_limits(&x, job.limits())?;
    let ranking = out.witness.as_ref().map(ranking_of);
    Ok(Certificate::new(
        job.task,
        out.status.into(),
        Body::Order(OrderCert {
            gset: GSetDoc::of(&x),
            ranking,
            refutation: out.refutation,
            stats: out.stats,
        }),
    ))
}

/// Points sorted by their number of predecessors.
pub fn ranking_of(r: &Relation) -> Vec<usize> {
    let mut below = vec![0usize; r.size()];
    for (_, y) in r.pairs() {
        below[y] += 1;
    }
    let mut ranking: Vec<usize> = (0..r.size()).collect();
    ranking.sort_by_key(|&p| (below[p], p));
    ranking
}

/// Names and first witnesses of the failed order axioms and invariance.
pub fn relation_failures(r: &Relation, x: &GSet) -> Result<(Vec<String>, Vec<String>)> {
    let report = r.check_strict_total_order();
    let mut failed = Vec::new();
    let mut witnesses = Vec::new();
    for axiom in report.failed_axioms() {
        failed.push(axiom.to_string());
        witnesses.push(match axiom {
            "transitivity" => format!("{:?}", report.transitivity[0]),
            "irreflexivity" => format!("{}", report.irreflexivity[0]),
            "antisymmetry" => format!("{:?}", report.antisymmetry[0]),
            _ => format!("{:?}", report.totality[0]),
        });
    }
    let inv = r.check_invariance(x)?;
    if let Some(v) = inv.violations.first() {
        failed.push("invariance".into());
        witnesses.push(format!(
            "{:?} by {} gives {:?}",
            v.pair,
            x.ctx().letter_name(v.letter),
            v.image
        ));
    }
    Ok((failed, witnesses))
}

fn check_axioms_task(job: &JobSpec, ctx: &GroupCtx) -> Result<Certificate> {
    if let Some(words) = &job.cone {
        let members = words
            .iter()
            .map(|w| parse_element(ctx, w))
            .collect::<Result<Vec<_>>>()?;
        let cone = PositiveCone::new(ctx, job.radius(), members, job.mode())?;
        let failed: Vec<String> = cone
            .check_axioms()?
            .failed_axioms()
            .into_iter()
            .map(String::from)
            .collect();
        let outcome = if failed.is_empty() {
            Outcome::Passed
        } else {
            Outcome::Failed
        };
        return Ok(Certificate::new(
            job.task,
            outcome,
            Body::ConeCheck(ConeCheckCert {
                group: GroupDef::of(ctx),
                radius: job.radius(),
                mode: job.mode(),
                members: sorted_members(ctx, &cone),
                failed,
            }),
        ));
    }
    let x = job.window(ctx)?;
    let r = match job.relation.clone().unwrap_or_default() {
        RelationSpec::Pairs { pairs } => Relation::new(x.len(), pairs)?,
        RelationSpec::Ranking { ranking } => {
            if ranking.len() != x.len() {
                return Err(Error::Input(format!(
                    "relation.ranking lists {} points, the G-set has {}",
                    ranking.len(),
                    x.len()
                )));
            }
            Relation::from_ranking(&ranking)?
        }
        RelationSpec::Oracle => {
            let oracle = build_oracle(job, ctx)?.oracle;
            let cmp = point_comparator(oracle.as_ref(), &x);
            let n = x.len();
            let mut pairs = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    match cmp(a, b) {
                        Some(std::cmp::Ordering::Less) => pairs.push((a, b)),
                        Some(_) => {}
                        None => {
                            return Err(Error::Input(format!(
                                "the oracle cannot compare points {a} and {b}"
                            )))
                        }
                    }
                }
            }
            Relation::new(n, pairs)?
        }
    };
    let (failed, witnesses) = relation_failures(&r, &x)?;
    let outcome = if failed.is_empty() {
        Outcome::Passed
    } else {
        Outcome::Failed
    };
    Ok(Certificate::new(
        job.task,
        outcome,
        Body::Relation(RelationCert {
            gset: GSetDoc::of(&x),
            pairs: r.pairs().collect(),
            failed,
            witnesses,
        }),
    ))
}

pub(crate) struct BuiltOracle {
    pub oracle: Box<dyn OrderOracle>,
    pub doc: OracleDoc,
}

/// Either an oracle or, when a requested cone search fails, its certificate.
enum OracleOrCone {
    Oracle(BuiltOracle),
    NoCone(Box<Certificate>),
}

fn build_oracle(job: &JobSpec, ctx: &GroupCtx) -> Result<BuiltOracle> {
    match oracle_or_cone(job, ctx)? {
        OracleOrCone::Oracle(o) => Ok(o),
        OracleOrCone::NoCone(c) => Err(Error::Input(format!(
            "no positive cone on the radius-{} ball: {:?}",
            2 * job.radius(),
            c.outcome
        ))),
    }
}

fn oracle_or_cone(job: &JobSpec, ctx: &GroupCtx) -> Result<OracleOrCone> {
    let spec = match job.oracle {
        OracleSpec::Auto => match ctx.backend() {
            Backend::FreeAbelian { .. } => OracleSpec::Lex,
            Backend::Free { .. } => OracleSpec::Magnus,
            Backend::Semidirect { .. } => OracleSpec::Semidirect,
            Backend::Table(_) => OracleSpec::Index,
            Backend::Product(..) => {
                return Err(Error::Input(
                    "oracle: no default order on direct products".into(),
                ))
            }
        },
        s => s,
    };
    let doc = match spec {
        OracleSpec::Lex => OracleDoc::Lex,
        OracleSpec::Magnus => OracleDoc::Magnus,
        OracleSpec::Semidirect => OracleDoc::Semidirect,
        OracleSpec::Index => OracleDoc::Index,
        _ => {
            let mode = if job.task == Task::BiWitness {
                Mode::Bi
            } else {
                job.mode()
            };
            let radius = 2 * job.radius();
            let out = cone_search_with_limits(ctx, radius, mode, job.limits())?;
            if out.status != Status::Found {
                return Ok(OracleOrCone::NoCone(Box::new(Certificate::new(
                    job.task,
                    out.status.into(),
                    Body::Cone(ConeCert {
                        group: GroupDef::of(ctx),
                        radius,
                        mode,
                        members: None,
                        refutation: out.refutation,
                        stats: out.stats,
                    }),
                ))));
            }
            let cone = out.witness.expect("found cones carry a witness");
            OracleDoc::Cone {
                radius,
                mode,
                members: sorted_members(ctx, &cone),
            }
        }
    };
    Ok(OracleOrCone::Oracle(BuiltOracle {
        oracle: oracle_of(&doc, ctx)?,
        doc,
    }))
}

pub(crate) fn oracle_of(doc: &OracleDoc, ctx: &GroupCtx) -> Result<Box<dyn OrderOracle>> {
    Ok(match doc {
        OracleDoc::Lex => Box::new(LexOrder::new(ctx)?),
        OracleDoc::Magnus => Box::new(MagnusOrder::new(ctx)?),
        OracleDoc::Semidirect => Box::new(SemidirectOrder::new(ctx)?),
        OracleDoc::Index => Box::new(IndexOrder::new(ctx)?),
        OracleDoc::Cone {
            radius,
            mode,
            members,
        } => {
            let cone = PositiveCone::new(ctx, *radius, members.clone(), *mode)?;
            Box::new(oracle_from_cone(&cone))
        }
    })
}

fn enumeration(job: &JobSpec, n: usize) -> Result<Vec<usize>> {
    Ok(match &job.enumeration {
        Enumeration::Carrier => (0..n).collect(),
        Enumeration::Seeded { seed } => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed));
            order
        }
        Enumeration::Explicit { order } => {
            let mut seen = vec![false; n];
            for &p in order {
                if p >= n || std::mem::replace(&mut seen[p], true) {
                    return Err(Error::Input(format!(
                        "enumeration.order: point {p} is out of range or repeated"
                    )));
                }
            }
            if order.len() != n {
                return Err(Error::Input(format!(
                    "enumeration.order lists {} of {n} points",
                    order.len()
                )));
            }
            order.clone()
        }
    })
}

pub(crate) fn heights_by_point(emb: &OrderEmbedding, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|p| Rat::from(emb.height(p).expect("every point is placed")))
        .collect()
}

fn placement_task(job: &JobSpec, ctx: &GroupCtx) -> Result<RunOutput> {
    let built = match oracle_or_cone(job, ctx)? {
        OracleOrCone::Oracle(o) => o,
        OracleOrCone::NoCone(certificate) => {
            return Ok(RunOutput {
                certificate: *certificate,
                witness: None,
            })
        }
    };
    let x = job.window(ctx)?;
    if x.points().iter().any(|p| !matches!(p, PointTag::Element(_) | PointTag::Coset(_))) {
        return Err(Error::Input(
            "gset: placing points needs a window of group elements or cosets".into(),
        ));
    }
    let order = enumeration(job, x.len())?;
    let emb = embed_in_rationals(&order, point_comparator(built.oracle.as_ref(), &x))?;
    let placement = Placement {
        group: GroupDef::of(ctx),
        oracle: built.doc,
        gset: GSetDoc::of(&x),
        enumeration: order,
        heights: heights_by_point(&emb, x.len()),
    };
    match job.task {
        Task::Embed => Ok(RunOutput {
            certificate: Certificate::new(
                job.task,
                Outcome::Passed,
                Body::Embedding(EmbeddingCert { placement }),
            ),
            witness: None,
        }),
        Task::Realize => {
            let elements = match &job.elements {
                Some(words) => words
                    .iter()
                    .map(|w| parse_element(ctx, w))
                    .collect::<Result<Vec<_>>>()?,
                None => (0..ctx.generator_count())
                    .map(|i| ctx.generator(i))
                    .collect::<lineorder_core::Result<Vec<_>>>()?,
            };
            let cert = realize_cert(placement, &emb, &x, &elements)?;
            let outcome = if cert.obstruction.is_some() {
                Outcome::Refuted
            } else if cert.failed.is_empty() {
                Outcome::Passed
            } else {
                Outcome::Failed
            };
            Ok(RunOutput {
                certificate: Certificate::new(job.task, outcome, Body::Realization(cert)),
                witness: None,
            })
        }
        _ => {
            let graph = build_cayley_ball(&x);
            let w = par::certify(&graph, &emb, job.threads.unwrap_or(1))?;
            let outcome = if w.verdict.is_certified() {
                Outcome::Certified
            } else {
                Outcome::Refuted
            };
            let cert = WitnessCert {
                placement,
                graph: GraphDoc {
                    vertices: graph.vertices().len(),
                    edges: graph.edges().to_vec(),
                    dropped: graph.dropped().to_vec(),
                },
                verdict: w.verdict.clone(),
            };
            Ok(RunOutput {
                certificate: Certificate::new(job.task, outcome, Body::Witness(cert)),
                witness: Some(w),
            })
        }
    }
}

fn realize_cert(
    placement: Placement,
    emb: &OrderEmbedding,
    x: &GSet,
    elements: &[GroupElement],
) -> Result<RealizationCert> {
    let mut maps = Vec::new();
    for g in elements {
        match extend_action_to_line(emb, x, g) {
            Ok(m) => maps.push(m),
            Err(lineorder_core::Error::NotInvariant(a, b))
            | Err(lineorder_core::Error::EqualOnDistinct(a, b)) => {
                return Ok(RealizationCert {
                    placement,
                    maps: Vec::new(),
                    obstruction: Some(Obstruction {
                        element: g.clone(),
                        first: a,
                        second: b,
                    }),
                    equivariance_checked: 0,
                    composition_checked: 0,
                    failed: Vec::new(),
                })
            }
            Err(e) => return Err(e.into()),
        }
    }
    let realization = Realization {
        elements: elements.to_vec(),
        maps,
    };
    let report = check_realization(emb, x, &realization)?;
    Ok(RealizationCert {
        placement,
        maps: map_docs(&realization),
        obstruction: None,
        equivariance_checked: report.equivariance_checked,
        composition_checked: report.composition_checked,
        failed: report.failed_checks().into_iter().map(String::from).collect(),
    })
}

pub(crate) fn map_docs(r: &Realization) -> Vec<MapDoc> {
    r.elements
        .iter()
        .zip(&r.maps)
        .map(|(g, m)| MapDoc {
            element: g.clone(),
            breakpoints: m.breakpoints().iter().map(Rat::from).collect(),
            values: m.values().iter().map(Rat::from).collect(),
        })
        .collect()
}

/// Command-line overrides of job fields.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub task: Option<Task>,
    pub radius: Option<u32>,
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub max_ball: Option<usize>,
    pub seed_enumeration: Option<u64>,
    pub threads: Option<usize>,
}

impl Overrides {
    pub fn apply(self, job: &mut JobSpec) {
        if let Some(t) = self.task {
            job.task = t;
        }
        if self.radius.is_some() {
            job.radius = self.radius;
        }
        if self.mode.is_some() {
            job.mode = self.mode;
        }
        if self.out.is_some() {
            job.out = self.out;
        }
        if self.plot.is_some() {
            job.plot = self.plot;
        }
        if self.max_ball.is_some() {
            job.max_ball = self.max_ball;
        }
        if let Some(seed) = self.seed_enumeration {
            job.enumeration = Enumeration::Seeded { seed };
        }
        if self.threads.is_some() {
            job.threads = self.threads;
        }
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    use std::io::Write;
    let io = |source| Error::Io {
        path: path.into(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs a job and writes its artifacts. Returns the certificate and the
/// exit code; without an output path the certificate is only returned.
pub fn run(job: &JobSpec) -> Result<(Certificate, i32)> {
    let format = match &job.plot {
        Some(p) => Some(PlotFormat::from_path(p).ok_or_else(|| {
            Error::Input(format!("plot: `{}` needs a .csv or .svg extension", p.display()))
        })?),
        None => None,
    };
    if format.is_some() && !matches!(job.task, Task::Witness | Task::BiWitness) {
        return Err(Error::Input("plot: only witness tasks produce plots".into()));
    }
    let out = execute(job)?;
    if let Some(path) = &job.out {
        write_atomic(path, &out.certificate.to_json())?;
    }
    if let (Some(path), Some(format), Some(w)) = (&job.plot, format, &out.witness) {
        write_atomic(path, &export_plot(w, format))?;
    }
    let code = out.certificate.outcome.exit_code();
    Ok((out.certificate, code))
}
