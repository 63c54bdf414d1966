//! Height witnesses on Cayley-ball graphs.
//!
//! The graph has the points of a G-set window as vertices and an edge
//! `v --s--> v·s` for every positive generator `s` with `v·s` in the window;
//! it is the part of the cover over a rose that the window sees. Drawing
//! each vertex at its height and each edge as a straight segment, two edges
//! with the same label cross exactly when their endpoints swap order, so
//! the drawing embeds fibrewise iff heights are distinct and no same-label
//! pair swaps.

use alloc::{format, vec::Vec};
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::group::{GroupCtx, GroupElement, Letter};
use crate::gset::{make_biregular_with_cap, make_coset, make_regular_with_cap, GSet, PointTag};
use crate::oracle::OrderOracle;
use crate::realization::{embed_in_rationals, point_comparator, OrderEmbedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Edge {
    pub source: usize,
    pub label: u32,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyBallGraph {
    ctx: GroupCtx,
    vertices: Vec<PointTag>,
    /// Sorted by label, then source.
    edges: Vec<Edge>,
    /// `(vertex, letter)` whose edge leaves the window.
    dropped: Vec<(usize, Letter)>,
}

pub fn build_cayley_ball(x: &GSet) -> CayleyBallGraph {
    let k = x.ctx().generator_count();
    let mut edges = Vec::new();
    let mut dropped = Vec::new();
    for s in 0..k {
        for v in 0..x.len() {
            match x.act_letter(v, Letter::positive(s)) {
                Some(w) => edges.push(Edge {
                    source: v,
                    label: s,
                    target: w,
                }),
                None => dropped.push((v, Letter::positive(s))),
            }
        }
    }
    for v in 0..x.len() {
        for s in 0..k {
            if x.act_letter(v, Letter::new(s, true)).is_none() {
                dropped.push((v, Letter::new(s, true)));
            }
        }
    }
    dropped.sort();
    CayleyBallGraph {
        ctx: x.ctx().clone(),
        vertices: x.points().to_vec(),
        edges,
        dropped,
    }
}

impl CayleyBallGraph {
    /// Rebuilds a graph from stored parts, checking vertex ranges and labels.
    pub fn from_parts(
        ctx: GroupCtx,
        vertices: Vec<PointTag>,
        mut edges: Vec<Edge>,
        mut dropped: Vec<(usize, Letter)>,
    ) -> Result<Self> {
        let n = vertices.len();
        for e in &edges {
            for p in [e.source, e.target] {
                if p >= n {
                    return Err(Error::PointOutOfRange { point: p, size: n });
                }
            }
            if e.label >= ctx.generator_count() {
                return Err(Error::MalformedCertificate(format!("edge label {}", e.label)));
            }
        }
        edges.sort_by_key(|e| (e.label, e.source, e.target));
        dropped.sort();
        Ok(CayleyBallGraph {
            ctx,
            vertices,
            edges,
            dropped,
        })
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn vertices(&self) -> &[PointTag] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The truncation report: edges with an endpoint outside the window.
    pub fn dropped(&self) -> &[(usize, Letter)] {
        &self.dropped
    }

    /// Edges carrying `label`, by source.
    pub fn edges_labelled(&self, label: u32) -> &[Edge] {
        let lo = self.edges.partition_point(|e| e.label < label);
        let hi = self.edges.partition_point(|e| e.label <= label);
        &self.edges[lo..hi]
    }

    /// Connected with one edge fewer than vertices.
    pub fn is_tree(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut a: usize) -> usize {
            while p[a] != a {
                p[a] = p[p[a]];
                a = p[a];
            }
            a
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Verdict {
    Certified,
    /// Two vertices at the same height.
    EqualHeights(usize, usize),
    /// Two same-label edges whose endpoints swap order.
    Crossing(Edge, Edge),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        *self == Verdict::Certified
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightWitness {
    pub graph: CayleyBallGraph,
    pub heights: OrderEmbedding,
    pub verdict: Verdict,
}

/// Whether the two edges keep their order from source to target.
pub fn edges_cross(heights: &OrderEmbedding, e1: &Edge, e2: &Edge) -> Result<bool> {
    let h = |p: usize| heights.height(p).ok_or(Error::MissingHeight(p));
    let before = h(e1.source)?.cmp(h(e2.source)?);
    let after = h(e1.target)?.cmp(h(e2.target)?);
    Ok(before != after)
}

/// The least crossing pair among edges with one label, with edges taken in
/// source order and pairs compared lexicographically.
pub fn least_crossing(heights: &OrderEmbedding, edges: &[Edge]) -> Result<Option<(Edge, Edge)>> {
    // quick pass: no crossing iff targets increase along sources sorted by height
    let mut by_height: Vec<&Edge> = edges.iter().collect();
    let h = |p: usize| heights.height(p).ok_or(Error::MissingHeight(p));
    for e in edges {
        h(e.source)?;
        h(e.target)?;
    }
    by_height.sort_by(|a, b| h(a.source).unwrap().cmp(h(b.source).unwrap()));
    let clean = by_height.windows(2).all(|w| {
        let s = h(w[0].source).unwrap().cmp(h(w[1].source).unwrap());
        let t = h(w[0].target).unwrap().cmp(h(w[1].target).unwrap());
        s == t && s == Ordering::Less
    });
    if clean {
        return Ok(None);
    }
    for (i, e1) in edges.iter().enumerate() {
        for e2 in &edges[i + 1..] {
            if edges_cross(heights, e1, e2)? {
                return Ok(Some((*e1, *e2)));
            }
        }
    }
    Ok(None)
}

/// Certifies heights on a graph: all distinct and no same-label crossing.
/// A refutation names the least offending pair.
pub fn certify_embedding(graph: &CayleyBallGraph, heights: &OrderEmbedding) -> Result<HeightWitness> {
    for v in 0..graph.vertices.len() {
        if heights.height(v).is_none() {
            return Err(Error::MissingHeight(v));
        }
    }
    let verdict = if let Some((a, b)) = least_equal_heights(heights, graph.vertices.len()) {
        Verdict::EqualHeights(a, b)
    } else {
        let mut verdict = Verdict::Certified;
        for s in 0..graph.ctx.generator_count() {
            if let Some((e1, e2)) = least_crossing(heights, graph.edges_labelled(s))? {
                verdict = Verdict::Crossing(e1, e2);
                break;
            }
        }
        verdict
    };
    Ok(HeightWitness {
        graph: graph.clone(),
        heights: heights.clone(),
        verdict,
    })
}

fn least_equal_heights(heights: &OrderEmbedding, n: usize) -> Option<(usize, usize)> {
    heights.repeated_height()?;
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .find(|&(a, b)| heights.height(a) == heights.height(b))
}

/// Which fibre to build over the rose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// The group acting on its own ball.
    Regular,
    /// Right cosets of the subgroup generated by the listed elements.
    Coset(Vec<GroupElement>),
}

/// Heights from an oracle on a G-set window, placed in `enumeration` order
/// (default: carrier order).
pub fn heights_from_oracle(
    oracle: &dyn OrderOracle,
    x: &GSet,
    enumeration: Option<&[usize]>,
) -> Result<OrderEmbedding> {
    let default: Vec<usize> = (0..x.len()).collect();
    let cmp = point_comparator(oracle, x);
    embed_in_rationals(enumeration.unwrap_or(&default), cmp)
}

/// Builds the window, places it on the line by the oracle and certifies it.
pub fn witness_from_cone(
    ctx: &GroupCtx,
    oracle: &dyn OrderOracle,
    radius: u32,
    kind: &WindowKind,
    max_ball: usize,
) -> Result<HeightWitness> {
    let x = match kind {
        WindowKind::Regular => make_regular_with_cap(ctx, radius, max_ball)?,
        WindowKind::Coset(h) => make_coset(ctx, h)?,
    };
    witness_on(oracle, &x, None)
}

pub fn witness_on(
    oracle: &dyn OrderOracle,
    x: &GSet,
    enumeration: Option<&[usize]>,
) -> Result<HeightWitness> {
    let heights = heights_from_oracle(oracle, x, enumeration)?;
    certify_embedding(&build_cayley_ball(x), &heights)
}

/// The same pipeline on `G` as a `G×G`-set, `f·(g, h) = g⁻¹fh`. Labels
/// below the rank of `G` are left translations, the rest right ones.
pub fn bi_witness(
    ctx: &GroupCtx,
    oracle: &dyn OrderOracle,
    radius: u32,
    max_ball: usize,
) -> Result<HeightWitness> {
    let x = make_biregular_with_cap(ctx, radius, max_ball)?;
    witness_on(oracle, &x, None)
}
