//! Independent re-checking of certificates. Nothing here trusts the search
//! or the runner: witnesses are re-checked against the axioms, refutations
//! are replayed, and heights are re-derived from the stored oracle.

use std::cmp::Ordering;

use lineorder_core::bundle::{build_cayley_ball, certify_embedding, CayleyBallGraph};
use lineorder_core::group::Backend;
use lineorder_core::gset::GSet;
use lineorder_core::oracle::{OrderOracle, PositiveCone};
use lineorder_core::realization::{
    check_realization, embed_in_rationals, point_comparator, OrderEmbedding, PLHomeo, Realization,
};
use lineorder_core::relation::Relation;
use lineorder_core::search::verify::{verify_cone, verify_cone_outcome, verify_order_outcome};
use lineorder_core::search::{ConeOutcome, OrderOutcome, Status};
use lineorder_core::GroupCtx;

use crate::cert::*;
use crate::error::{Error, Result};
use crate::job::{map_docs, oracle_of, relation_failures};

pub fn verify(cert: &Certificate) -> Result<()> {
    let fits = matches!(
        (cert.task, &cert.result),
        (Task::ConeSearch, Body::Cone(_))
            | (Task::SearchOrder, Body::Order(_))
            | (Task::CheckAxioms, Body::Relation(_) | Body::ConeCheck(_))
            | (Task::Embed, Body::Embedding(_))
            | (Task::Realize, Body::Realization(_))
            | (Task::Witness | Task::BiWitness, Body::Witness(_))
            | (Task::Embed | Task::Realize | Task::Witness | Task::BiWitness, Body::Cone(_))
    );
    if !fits {
        return Err(Error::Malformed(format!(
            "a {:?} result does not belong to task {:?}",
            kind(&cert.result),
            cert.task
        )));
    }
    let actual = match &cert.result {
        Body::Cone(c) => verify_cone_cert(cert.outcome, c)?,
        Body::Order(o) => verify_order_cert(cert.outcome, o)?,
        Body::Relation(r) => verify_relation_cert(r)?,
        Body::ConeCheck(c) => verify_cone_check(c)?,
        Body::Embedding(e) => {
            verify_placement(&e.placement)?;
            Outcome::Passed
        }
        Body::Realization(r) => verify_realization_cert(r)?,
        Body::Witness(w) => verify_witness_cert(w)?,
    };
    if actual != cert.outcome {
        return Err(Error::rejected(
            "outcome",
            format!("claimed {:?}, the checked result is {:?}", cert.outcome, actual),
        ));
    }
    Ok(())
}

fn kind(b: &Body) -> &'static str {
    match b {
        Body::Cone(_) => "cone",
        Body::Order(_) => "order",
        Body::Relation(_) => "relation",
        Body::ConeCheck(_) => "cone_check",
        Body::Embedding(_) => "embedding",
        Body::Realization(_) => "realization",
        Body::Witness(_) => "witness",
    }
}

fn status_of(outcome: Outcome) -> Result<Status> {
    match outcome {
        Outcome::Found => Ok(Status::Found),
        Outcome::ImpossibleOnWindow => Ok(Status::ImpossibleOnWindow),
        Outcome::ExhaustedNoConclusion => Ok(Status::ExhaustedNoConclusion),
        o => Err(Error::Malformed(format!("{o:?} is not a search outcome"))),
    }
}

fn verify_cone_cert(outcome: Outcome, c: &ConeCert) -> Result<Outcome> {
    let ctx = c.group.build()?;
    let witness = match &c.members {
        Some(m) => Some(
            PositiveCone::new(&ctx, c.radius, m.clone(), c.mode)
                .map_err(|e| Error::rejected("pairing", e.to_string()))?,
        ),
        None => None,
    };
    let out = ConeOutcome {
        ctx,
        radius: c.radius,
        mode: c.mode,
        status: status_of(outcome)?,
        witness,
        refutation: c.refutation.clone(),
        stats: c.stats,
    };
    verify_cone_outcome(&out)?;
    Ok(outcome)
}

fn verify_order_cert(outcome: Outcome, o: &OrderCert) -> Result<Outcome> {
    let x = o.gset.build()?;
    let witness = match &o.ranking {
        Some(r) => {
            if !is_permutation(r, x.len()) {
                return Err(Error::rejected(
                    "ranking",
                    format!("not a permutation of the {} points", x.len()),
                ));
            }
            Some(Relation::from_ranking(r)?)
        }
        None => None,
    };
    let out = OrderOutcome {
        status: status_of(outcome)?,
        witness,
        refutation: o.refutation.clone(),
        stats: o.stats,
    };
    verify_order_outcome(&x, &out)?;
    Ok(outcome)
}

fn is_permutation(v: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    v.len() == n && v.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

fn passed_if(ok: bool) -> Outcome {
    if ok {
        Outcome::Passed
    } else {
        Outcome::Failed
    }
}

fn verify_relation_cert(r: &RelationCert) -> Result<Outcome> {
    let x = r.gset.build()?;
    let rel = Relation::new(x.len(), r.pairs.iter().copied())?;
    if rel.pairs().ne(r.pairs.iter().copied()) {
        return Err(Error::rejected("canonical", "pairs are not sorted and distinct"));
    }
    let (failed, witnesses) = relation_failures(&rel, &x)?;
    if failed != r.failed || witnesses != r.witnesses {
        return Err(Error::rejected(
            "report",
            format!("recomputed failures {failed:?}, stored {:?}", r.failed),
        ));
    }
    Ok(passed_if(failed.is_empty()))
}

fn verify_cone_check(c: &ConeCheckCert) -> Result<Outcome> {
    let ctx = c.group.build()?;
    let cone = PositiveCone::new(&ctx, c.radius, c.members.clone(), c.mode)
        .map_err(|e| Error::rejected("pairing", e.to_string()))?;
    let failed: Vec<String> = cone
        .check_axioms()?
        .failed_axioms()
        .into_iter()
        .map(String::from)
        .collect();
    if failed != c.failed {
        return Err(Error::rejected(
            "report",
            format!("recomputed failures {failed:?}, stored {:?}", c.failed),
        ));
    }
    Ok(passed_if(failed.is_empty()))
}

struct Placed {
    x: GSet,
    emb: OrderEmbedding,
}

fn oracle_for(p: &Placement, ctx: &GroupCtx) -> Result<Box<dyn OrderOracle>> {
    if let OracleDoc::Cone {
        radius,
        mode,
        members,
    } = &p.oracle
    {
        let cone = PositiveCone::new(ctx, *radius, members.clone(), *mode)
            .map_err(|e| Error::rejected("pairing", e.to_string()))?;
        verify_cone(&cone, ctx, *radius, *mode)?;
    }
    oracle_of(&p.oracle, ctx)
}

/// Checks that heights are distinct, follow the oracle, and are exactly the
/// ones the insertion rule gives for the stored enumeration.
fn verify_placement(p: &Placement) -> Result<Placed> {
    let ctx = p.group.build()?;
    let oracle = oracle_for(p, &ctx)?;
    let x = p.gset.build()?;
    let window_ok = match x.ctx().backend() {
        Backend::Product(l, r) if **l == ctx && **r == ctx => true,
        _ => *x.ctx() == ctx,
    };
    if !window_ok {
        return Err(Error::rejected("window", "the G-set is over another group"));
    }
    let n = x.len();
    if p.heights.len() != n {
        return Err(Error::Malformed(format!(
            "{} heights for {n} points",
            p.heights.len()
        )));
    }
    if !is_permutation(&p.enumeration, n) {
        return Err(Error::rejected(
            "enumeration",
            format!("not a permutation of the {n} points"),
        ));
    }
    let heights = p
        .heights
        .iter()
        .map(|r| r.to_height())
        .collect::<Result<Vec<_>>>()?;
    let emb = OrderEmbedding::from_heights(
        p.enumeration
            .iter()
            .map(|&q| (q, heights[q].clone()))
            .collect(),
    )?;
    if let Some((a, b)) = emb.repeated_height() {
        return Err(Error::rejected(
            "injectivity",
            format!("points {a} and {b} share a height"),
        ));
    }
    let cmp = point_comparator(oracle.as_ref(), &x);
    for w in emb.points_by_height().windows(2) {
        if cmp(w[0], w[1]) != Some(Ordering::Less) {
            return Err(Error::rejected(
                "order",
                format!("point {} is placed below point {} against the order", w[0], w[1]),
            ));
        }
    }
    let again = embed_in_rationals(&p.enumeration, &cmp)?;
    if again != emb {
        let q = (0..n).find(|&q| again.height(q) != emb.height(q)).unwrap_or(0);
        return Err(Error::rejected(
            "placement",
            format!("point {q} is not where the insertion rule puts it"),
        ));
    }
    drop(cmp);
    Ok(Placed { x, emb })
}

fn verify_realization_cert(r: &RealizationCert) -> Result<Outcome> {
    let Placed { x, emb } = verify_placement(&r.placement)?;
    if let Some(ob) = &r.obstruction {
        if !r.maps.is_empty() {
            return Err(Error::Malformed("an obstruction comes without maps".into()));
        }
        let word = x.ctx().spell(&ob.element)?;
        let h = |p: Option<usize>| p.and_then(|p| emb.height(p));
        let (a, b) = (ob.first, ob.second);
        let ok = match (h(Some(a)), h(Some(b)), h(x.act_word(a, &word)), h(x.act_word(b, &word))) {
            (Some(ta), Some(tb), Some(ia), Some(ib)) => ta < tb && ia >= ib,
            _ => false,
        };
        if !ok {
            return Err(Error::rejected(
                "obstruction",
                format!("points {a} and {b} keep their order"),
            ));
        }
        return Ok(Outcome::Refuted);
    }
    let mut maps = Vec::with_capacity(r.maps.len());
    for m in &r.maps {
        let b = m.breakpoints.iter().map(|q| q.to_height()).collect::<Result<Vec<_>>>()?;
        let v = m.values.iter().map(|q| q.to_height()).collect::<Result<Vec<_>>>()?;
        maps.push(PLHomeo::new(b, v)?);
    }
    let realization = Realization {
        elements: r.maps.iter().map(|m| m.element.clone()).collect(),
        maps,
    };
    let report = check_realization(&emb, &x, &realization)?;
    let failed: Vec<String> = report.failed_checks().into_iter().map(String::from).collect();
    if failed != r.failed
        || report.equivariance_checked != r.equivariance_checked
        || report.composition_checked != r.composition_checked
    {
        return Err(Error::rejected(
            failed.first().map_or("report", String::as_str),
            format!("recomputed failures {failed:?}, stored {:?}", r.failed),
        ));
    }
    let rebuilt = lineorder_core::realization::realize(&emb, &x, &realization.elements)?;
    if map_docs(&rebuilt) != r.maps {
        return Err(Error::rejected(
            "splice",
            "maps differ from the affine extension of the heights",
        ));
    }
    Ok(passed_if(failed.is_empty()))
}

fn verify_witness_cert(w: &WitnessCert) -> Result<Outcome> {
    let Placed { x, emb } = verify_placement(&w.placement)?;
    let graph = build_cayley_ball(&x);
    let stored = CayleyBallGraph::from_parts(
        x.ctx().clone(),
        x.points().to_vec(),
        w.graph.edges.clone(),
        w.graph.dropped.clone(),
    )?;
    if w.graph.vertices != x.len() || stored != graph {
        return Err(Error::rejected(
            "graph",
            "edges or truncation report differ from the window",
        ));
    }
    let verdict = certify_embedding(&graph, &emb)?.verdict;
    if verdict != w.verdict {
        return Err(Error::rejected(
            "verdict",
            format!("recomputed {verdict:?}, stored {:?}", w.verdict),
        ));
    }
    Ok(if verdict.is_certified() {
        Outcome::Certified
    } else {
        Outcome::Refuted
    })
}
