mod common;

use common::permutations;
use lineorder_core::bundle::*;
use lineorder_core::group::{Backend, GroupCtx, DEFAULT_BALL_CAP};
use lineorder_core::gset::{make_regular, GSet};
use lineorder_core::magnus::MagnusOrder;
use lineorder_core::oracle::{
    oracle_from_cone, IndexOrder, LexOrder, Mode, OrderOracle, SemidirectOrder,
};
use lineorder_core::realization::{embed_in_rationals, int, OrderEmbedding};
use lineorder_core::search::{cone_search, Status};
use lineorder_core::{standard, tables};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn graph_shapes() {
    let z = make_regular(&GroupCtx::free_abelian(1), 2).unwrap();
    let g = build_cayley_ball(&z);
    assert_eq!((g.vertices().len(), g.edges().len()), (5, 4));
    assert!(g.is_tree());

    let f2 = build_cayley_ball(&make_regular(&GroupCtx::free(2), 2).unwrap());
    assert_eq!((f2.vertices().len(), f2.edges().len()), (17, 16));
    assert!(f2.is_tree());

    let c3 = build_cayley_ball(&make_regular(&GroupCtx::finite(tables::cyclic(3)), 0).unwrap());
    assert_eq!(c3.edges().len(), 3);
    assert!(!c3.is_tree());
}

#[test]
fn free_group_windows_are_trees() {
    for r in 0..=4 {
        let g = build_cayley_ball(&make_regular(&GroupCtx::free(2), r).unwrap());
        assert!(g.is_tree(), "r={r}");
    }
}

#[test]
fn pipeline_examples() {
    let z = GroupCtx::free_abelian(1);
    let lex = LexOrder::new(&z).unwrap();
    let w = witness_from_cone(&z, &lex, 3, &WindowKind::Regular, DEFAULT_BALL_CAP).unwrap();
    assert!(w.verdict.is_certified());

    // cone witnesses decide g h⁻¹ for g, h in ball(3) only at radius 6
    let k = GroupCtx::klein_bottle();
    let found = cone_search(&k, 6, Mode::Right).unwrap();
    assert_eq!(found.status, Status::Found);
    let oracle = oracle_from_cone(&found.witness.unwrap());
    let w = witness_from_cone(&k, &oracle, 3, &WindowKind::Regular, DEFAULT_BALL_CAP).unwrap();
    assert!(w.verdict.is_certified());

    let f2 = GroupCtx::free(2);
    let x = make_regular(&f2, 2).unwrap();
    let w = witness_on(&MagnusOrder::new(&f2).unwrap(), &x, None).unwrap();
    assert!(w.verdict.is_certified());
}

#[test]
fn cyclic_four_refuted_for_every_order() {
    let c4 = GroupCtx::finite(tables::cyclic(4));
    let x = make_regular(&c4, 0).unwrap();
    let graph = build_cayley_ball(&x);
    for rank in permutations(4) {
        let emb = OrderEmbedding::from_heights(
            rank.iter().enumerate().map(|(p, &r)| (p, int(r as i64))).collect(),
        )
        .unwrap();
        let w = certify_embedding(&graph, &emb).unwrap();
        assert!(matches!(w.verdict, Verdict::Crossing(..)));
    }
    let w = witness_from_cone(&c4, &IndexOrder::new(&c4).unwrap(), 0, &WindowKind::Regular, 100)
        .unwrap();
    assert!(!w.verdict.is_certified());
}

#[test]
fn coset_windows() {
    let s3 = GroupCtx::finite(tables::symmetric3());
    let oracle = IndexOrder::new(&s3).unwrap();
    let all = s3.elements().unwrap();
    let w = witness_from_cone(&s3, &oracle, 0, &WindowKind::Coset(all), 100).unwrap();
    assert_eq!(w.graph.vertices().len(), 1);
    assert!(w.verdict.is_certified());
    let w = witness_from_cone(&s3, &oracle, 0, &WindowKind::Coset(vec![s3.generator(0).unwrap()]), 100)
        .unwrap();
    assert_eq!(w.graph.vertices().len(), 3);
    assert!(!w.verdict.is_certified());
}

#[test]
fn bi_witnesses() {
    let z = GroupCtx::free_abelian(1);
    assert!(bi_witness(&z, &LexOrder::new(&z).unwrap(), 3, DEFAULT_BALL_CAP)
        .unwrap()
        .verdict
        .is_certified());
    let f2 = GroupCtx::free(2);
    assert!(bi_witness(&f2, &MagnusOrder::new(&f2).unwrap(), 2, DEFAULT_BALL_CAP)
        .unwrap()
        .verdict
        .is_certified());
    let k = GroupCtx::klein_bottle();
    let w = bi_witness(&k, &SemidirectOrder::new(&k).unwrap(), 2, DEFAULT_BALL_CAP).unwrap();
    match w.verdict {
        Verdict::Crossing(e1, e2) => {
            assert_eq!(e1.label, e2.label);
            // labels 0 and 1 translate on the left
            assert!(e1.label < 2);
        }
        other => panic!("expected a crossing, got {other:?}"),
    }
}

/// Brute-force least crossing pair: labels ascending, then edge pairs in
/// source order.
fn least_pair(graph: &CayleyBallGraph, emb: &OrderEmbedding) -> Option<(Edge, Edge)> {
    for s in 0..graph.ctx().generator_count() {
        let es: Vec<&Edge> = graph.edges().iter().filter(|e| e.label == s).collect();
        for i in 0..es.len() {
            for j in i + 1..es.len() {
                let h = |p| emb.height(p).unwrap();
                if h(es[i].source).cmp(h(es[j].source)) != h(es[i].target).cmp(h(es[j].target)) {
                    return Some((*es[i], *es[j]));
                }
            }
        }
    }
    None
}

fn rankings(x: &GSet, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    let n = x.len();
    if n <= 5 {
        return permutations(n);
    }
    let mut out = Vec::new();
    for _ in 0..40 {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        out.push(p);
    }
    out
}

fn natural_order(ctx: &GroupCtx) -> Option<Box<dyn OrderOracle>> {
    match ctx.backend() {
        Backend::FreeAbelian { .. } => Some(Box::new(LexOrder::new(ctx).ok()?)),
        Backend::Free { .. } => Some(Box::new(MagnusOrder::new(ctx).ok()?)),
        Backend::Semidirect { .. } => Some(Box::new(SemidirectOrder::new(ctx).ok()?)),
        _ => None,
    }
}

#[test]
fn certification_matches_invariant_total_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut certified = 0;
    for (name, x) in standard::windows(20).unwrap() {
        let graph = build_cayley_ball(&x);
        let mut emb_list: Vec<OrderEmbedding> = rankings(&x, &mut rng)
            .into_iter()
            .map(|rank| {
                embed_in_rationals(&(0..x.len()).collect::<Vec<_>>(), |a, b| {
                    Some(rank[a].cmp(&rank[b]))
                })
                .unwrap()
            })
            .collect();
        if let Some(oracle) = natural_order(x.ctx()) {
            if let Ok(emb) = heights_from_oracle(oracle.as_ref(), &x, None) {
                emb_list.push(emb);
            }
        }
        if x.len() >= 2 {
            // a tie between the first two points
            let mut e: Vec<_> = emb_list[0].entries().to_vec();
            e[1].1 = e[0].1.clone();
            emb_list.push(OrderEmbedding::from_heights(e).unwrap());
        }
        for emb in emb_list {
            let w = certify_embedding(&graph, &emb).unwrap();
            let r = emb.induced_relation(x.len());
            let good = r.check_strict_total_order().passes()
                && r.check_invariance(&x).unwrap().passes();
            assert_eq!(w.verdict.is_certified(), good, "{name}");
            certified += usize::from(good);
            if let Verdict::Crossing(a, b) = w.verdict {
                assert_eq!(Some((a, b)), least_pair(&graph, &emb), "{name}");
            }
        }
    }
    assert!(certified > 100, "{certified}");
}

#[test]
fn verdict_ignores_edge_listing_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f2 = GroupCtx::free(2);
    let x = make_regular(&f2, 2).unwrap();
    let graph = build_cayley_ball(&x);
    let emb = embed_in_rationals(&(0..x.len()).collect::<Vec<_>>(), |a, b| {
        Some(((a * 7) % 17).cmp(&((b * 7) % 17)))
    })
    .unwrap();
    let base = certify_embedding(&graph, &emb).unwrap().verdict;
    for _ in 0..10 {
        let mut edges = graph.edges().to_vec();
        edges.shuffle(&mut rng);
        let g2 = CayleyBallGraph::from_parts(
            f2.clone(),
            graph.vertices().to_vec(),
            edges,
            graph.dropped().to_vec(),
        )
        .unwrap();
        assert_eq!(certify_embedding(&g2, &emb).unwrap().verdict, base);
    }
}
