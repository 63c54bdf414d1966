use std::cmp::Ordering;

use lineorder_core::group::{GroupCtx, GroupElement};
use lineorder_core::gset::{make_regular, GSet, PointTag};
use lineorder_core::magnus::MagnusOrder;
use lineorder_core::oracle::{IndexOrder, LexOrder, OrderOracle};
use lineorder_core::realization::*;
use lineorder_core::{tables, Error};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Height {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_dyadic(h: &Height) -> bool {
    let d = h.denom();
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

fn ladder(ctx: &GroupCtx, oracle: &dyn OrderOracle, r: u32) -> (GSet, OrderEmbedding) {
    let x = make_regular(ctx, r).unwrap();
    let order: Vec<usize> = (0..x.len()).collect();
    let cmp = point_comparator(oracle, &x);
    let emb = embed_in_rationals(&order, cmp).unwrap();
    (x, emb)
}

fn letters(ctx: &GroupCtx) -> Vec<GroupElement> {
    ctx.letters().into_iter().map(|l| ctx.letter(l).unwrap()).collect()
}

#[test]
fn hand_traced_embeddings() {
    let vals = [0i64, 1, -1, 2, -2];
    let emb = embed_in_rationals(&[0, 1, 2, 3, 4], |a, b| Some(vals[a].cmp(&vals[b]))).unwrap();
    let hs: Vec<Height> = emb.entries().iter().map(|e| e.1.clone()).collect();
    assert_eq!(hs, vec![int(0), int(1), int(-1), int(2), int(-2)]);

    let vals = [0i64, 2, 1];
    let emb = embed_in_rationals(&[0, 1, 2], |a, b| Some(vals[a].cmp(&vals[b]))).unwrap();
    let hs: Vec<Height> = emb.entries().iter().map(|e| e.1.clone()).collect();
    assert_eq!(hs, vec![int(0), int(1), q(1, 2)]);
}

#[test]
fn integer_translation_map() {
    let z = GroupCtx::free_abelian(1);
    let x = make_regular(&z, 2).unwrap();
    // t(n) = n
    let entries = x
        .points()
        .iter()
        .enumerate()
        .map(|(i, p)| match p {
            PointTag::Element(GroupElement::Vector(v)) => (i, int(v[0])),
            _ => unreachable!(),
        })
        .collect();
    let emb = OrderEmbedding::from_heights(entries).unwrap();
    let m = extend_action_to_line(&emb, &x, &GroupElement::Vector(vec![1])).unwrap();
    let b: Vec<Height> = [-3, -2, -1, 0, 1, 3].iter().map(|&n| int(n)).collect();
    let v: Vec<Height> = [-3, -1, 0, 1, 2, 3].iter().map(|&n| int(n)).collect();
    assert_eq!(m.breakpoints(), &b[..]);
    assert_eq!(m.values(), &v[..]);
    assert!(m.is_identity_outside());
    assert_eq!(m.apply(&int(7)), int(7));
    assert_eq!(m.apply(&q(5, 2)), q(11, 4));

    let id = extend_action_to_line(&emb, &x, &GroupElement::Vector(vec![0])).unwrap();
    assert!(id.is_identity());
}

#[test]
fn trivial_action_realizes_as_identity() {
    let ctx = GroupCtx::free(2);
    let points = (0..4).map(PointTag::Index).collect();
    let fixed: Vec<Vec<Option<usize>>> = vec![(0..4).map(Some).collect(); 2];
    let x = GSet::from_generator_arrays(ctx.clone(), points, fixed, false).unwrap();
    let emb = embed_in_rationals(&[2, 0, 3, 1], |a, b| Some(a.cmp(&b))).unwrap();
    for g in letters(&ctx) {
        assert!(extend_action_to_line(&emb, &x, &g).unwrap().is_identity());
    }
}

fn assert_realizes(ctx: &GroupCtx, oracle: &dyn OrderOracle, r: u32) -> RealizationReport {
    let (x, emb) = ladder(ctx, oracle, r);
    let real = realize(&emb, &x, &letters(ctx)).unwrap();
    let report = check_realization(&emb, &x, &real).unwrap();
    assert!(report.passes(), "{report:?}");
    assert!(report.window_only);
    for m in &real.maps {
        assert!(m.slopes().iter().all(|s| s.is_positive()));
        assert!(m.is_identity_outside());
        assert_eq!(m.support(), emb.support());
        // displacement keeps one sign for a bi-order, so the interior has no
        // fixed points other than known ones
        let disp: Vec<Ordering> = m
            .breakpoints()
            .iter()
            .zip(m.values())
            .map(|(b, v)| v.cmp(b))
            .collect();
        let inner = &disp[1..disp.len() - 1];
        assert!(inner.iter().all(|&d| d == inner[0]));
    }
    report
}

#[test]
fn integers_realize_exactly() {
    let z = GroupCtx::free_abelian(1);
    let rep = assert_realizes(&z, &LexOrder::new(&z).unwrap(), 3);
    assert!(rep.composition_checked > 0);
}

#[test]
fn free_group_ball_two_with_magnus() {
    let f2 = GroupCtx::free(2);
    let rep = assert_realizes(&f2, &MagnusOrder::new(&f2).unwrap(), 2);
    // per letter s: the 5 points of length at most 1 and the 3 words ending in s⁻¹
    assert_eq!(rep.equivariance_checked, 4 * 8);
    assert!(rep.composition_checked > 0);
}

#[test]
fn corrupted_height_names_point() {
    let z = GroupCtx::free_abelian(1);
    let (x, emb) = ladder(&z, &LexOrder::new(&z).unwrap(), 2);
    let real = realize(&emb, &x, &letters(&z)).unwrap();
    let mut entries = emb.entries().to_vec();
    // point 1 is the generator a; nudge its height within its gap
    entries[1].1 = &entries[1].1 + q(1, 4);
    let bad = OrderEmbedding::from_heights(entries).unwrap();
    let report = check_realization(&bad, &x, &real).unwrap();
    assert_eq!(report.failed_checks()[0], "equivariance");
    assert!(report.monotonicity.is_empty());
    assert!(report.equivariance.iter().any(|f| f.point == 1));
}

#[test]
fn non_invariant_order_is_refused() {
    let c3 = GroupCtx::finite(tables::cyclic(3));
    let (x, emb) = ladder(&c3, &IndexOrder::new(&c3).unwrap(), 0);
    let err = extend_action_to_line(&emb, &x, &c3.generator(0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::NotInvariant(..)));
}

fn enumeration_and_values() -> impl Strategy<Value = (Vec<i64>, Vec<usize>)> {
    prop::collection::btree_set(-10_000i64..10_000, 1..300)
        .prop_flat_map(|set| {
            let vals: Vec<i64> = set.into_iter().collect();
            let n = vals.len();
            (Just(vals), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
}

proptest! {
    #[test]
    fn embedding_preserves_order((vals, order) in enumeration_and_values(), cut in 0usize..300) {
        let emb = embed_in_rationals(&order, |a, b| Some(vals[a].cmp(&vals[b]))).unwrap();
        let again = embed_in_rationals(&order, |a, b| Some(vals[a].cmp(&vals[b]))).unwrap();
        prop_assert_eq!(&emb, &again);
        prop_assert!(emb.entries().iter().all(|e| is_dyadic(&e.1)));
        let by = emb.points_by_height();
        for w in by.windows(2) {
            prop_assert!(vals[w[0]] < vals[w[1]]);
            prop_assert!(emb.height(w[0]) < emb.height(w[1]));
        }
        // any prefix of the enumeration gives the prefix of the heights
        let k = cut.min(order.len());
        let pre = embed_in_rationals(&order[..k], |a, b| Some(vals[a].cmp(&vals[b]))).unwrap();
        prop_assert_eq!(pre.entries(), &emb.entries()[..k]);
    }

    #[test]
    fn pl_maps_are_increasing(pts in prop::collection::btree_set(-50i64..50, 2..12), shift in -3i64..4, x in -100i64..100) {
        let b: Vec<Height> = pts.iter().map(|&p| int(p)).collect();
        let v: Vec<Height> = pts.iter().map(|&p| int(2 * p + shift)).collect();
        let m = PLHomeo::new(b, v).unwrap();
        let (x0, x1) = (q(x, 3), q(x + 1, 3));
        prop_assert!(m.apply(&x0) < m.apply(&x1));
        prop_assert_eq!(m.inverse().apply(&m.apply(&x0)), x0);
    }
}
