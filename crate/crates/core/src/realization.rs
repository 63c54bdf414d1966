//! Ordered G-sets on the rational line.
//!
//! [`embed_in_rationals`] places points one at a time: the first at `0`, a
//! new maximum one above the current maximum, a new minimum one below the
//! current minimum, anything else at the midpoint of its two nearest placed
//! neighbours. Heights are therefore dyadic.
//!
//! [`extend_action_to_line`] turns the action of one group element on a
//! window into a piecewise-linear increasing map of the line: known points go
//! to the heights of their images, segments in between are affine, and the
//! map is spliced affinely to the identity one unit beyond the extreme
//! heights. Only points whose image is in the window contribute, so the map
//! realizes the window restriction of the action.

use alloc::{collections::BTreeMap, format, string::ToString, vec::Vec};
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::gset::{GSet, PointTag};
use crate::oracle::OrderOracle;
use crate::relation::Relation;

pub type Height = BigRational;

pub fn int(n: i64) -> Height {
    BigRational::from_integer(BigInt::from(n))
}

/// Heights of points, kept in the order they were placed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderEmbedding {
    entries: Vec<(usize, Height)>,
    index: BTreeMap<usize, usize>,
}

impl OrderEmbedding {
    /// Takes heights as given; only repeated points are refused. Whether the
    /// heights are distinct and order-preserving is for the checkers.
    pub fn from_heights(entries: Vec<(usize, Height)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, (p, _)) in entries.iter().enumerate() {
            if index.insert(*p, i).is_some() {
                return Err(Error::RepeatedPoint(*p));
            }
        }
        Ok(OrderEmbedding { entries, index })
    }

    /// `(point, height)` in placement order.
    pub fn entries(&self) -> &[(usize, Height)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn height(&self, point: usize) -> Option<&Height> {
        self.index.get(&point).map(|&i| &self.entries[i].1)
    }

    /// Points by increasing height; ties keep placement order.
    pub fn points_by_height(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.entries.len()).collect();
        v.sort_by(|&a, &b| self.entries[a].1.cmp(&self.entries[b].1).then(a.cmp(&b)));
        v.into_iter().map(|i| self.entries[i].0).collect()
    }

    /// `(inf, sup)` of the heights.
    pub fn interval(&self) -> Option<(Height, Height)> {
        let lo = self.entries.iter().map(|e| &e.1).min()?;
        let hi = self.entries.iter().map(|e| &e.1).max()?;
        Some((lo.clone(), hi.clone()))
    }

    /// The interval on which realized maps may differ from the identity.
    pub fn support(&self) -> Option<(Height, Height)> {
        self.interval()
            .map(|(lo, hi)| (lo - Height::one(), hi + Height::one()))
    }

    /// `{(x, y) : t(x) < t(y)}` on a carrier of `size` points; points
    /// without a height are unrelated.
    pub fn induced_relation(&self, size: usize) -> Relation {
        Relation::from_fn(size, |a, b| match (self.height(a), self.height(b)) {
            (Some(ta), Some(tb)) => ta < tb,
            _ => false,
        })
    }

    /// The first pair of distinct points with equal heights, if any.
    pub fn repeated_height(&self) -> Option<(usize, usize)> {
        let by = self.points_by_height();
        by.windows(2)
            .find(|w| self.height(w[0]) == self.height(w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// Places the points of `enumeration` on the line in order, consulting
/// `cmp` only for binary search among already placed points.
pub fn embed_in_rationals(
    enumeration: &[usize],
    mut cmp: impl FnMut(usize, usize) -> Option<Ordering>,
) -> Result<OrderEmbedding> {
    let mut entries: Vec<(usize, Height)> = Vec::with_capacity(enumeration.len());
    let mut index = BTreeMap::new();
    // entry indices sorted by height
    let mut sorted: Vec<usize> = Vec::with_capacity(enumeration.len());
    for &p in enumeration {
        if index.insert(p, entries.len()).is_some() {
            return Err(Error::RepeatedPoint(p));
        }
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let q = entries[sorted[mid]].0;
            match cmp(p, q) {
                Some(Ordering::Less) => hi = mid,
                Some(Ordering::Greater) => lo = mid + 1,
                Some(Ordering::Equal) => return Err(Error::EqualOnDistinct(p, q)),
                None => return Err(Error::Undetermined(p.to_string(), q.to_string())),
            }
        }
        let h = if sorted.is_empty() {
            Height::zero()
        } else if lo == 0 {
            &entries[sorted[0]].1 - Height::one()
        } else if lo == sorted.len() {
            &entries[sorted[lo - 1]].1 + Height::one()
        } else {
            (&entries[sorted[lo - 1]].1 + &entries[sorted[lo]].1) / int(2)
        };
        sorted.insert(lo, entries.len());
        entries.push((p, h));
    }
    Ok(OrderEmbedding { entries, index })
}

/// Compares carrier points through a group order: element points directly,
/// coset points through their length-lex least member.
pub fn point_comparator<'a>(
    oracle: &'a dyn OrderOracle,
    x: &'a GSet,
) -> impl Fn(usize, usize) -> Option<Ordering> + 'a {
    fn rep(tag: &PointTag) -> Option<&GroupElement> {
        match tag {
            PointTag::Element(g) => Some(g),
            PointTag::Coset(members) => members.first(),
            _ => None,
        }
    }
    move |a, b| {
        let g = rep(x.points().get(a)?)?;
        let h = rep(x.points().get(b)?)?;
        oracle.compare(g, h)
    }
}

/// An increasing piecewise-linear map of the line. Beyond the outer
/// breakpoints it continues with slope 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLHomeo {
    breakpoints: Vec<Height>,
    values: Vec<Height>,
}

fn first_descent(v: &[Height]) -> Option<usize> {
    v.windows(2).position(|w| w[0] >= w[1])
}

impl PLHomeo {
    pub fn identity() -> Self {
        PLHomeo {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn new(breakpoints: Vec<Height>, values: Vec<Height>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::MalformedCertificate(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if let Some(i) = first_descent(&breakpoints) {
            return Err(Error::Rejected {
                check: "monotonicity",
                detail: format!("breakpoints {i} and {} are not increasing", i + 1),
            });
        }
        if let Some(i) = first_descent(&values) {
            return Err(Error::Rejected {
                check: "monotonicity",
                detail: format!("segment {i} has nonpositive slope"),
            });
        }
        Ok(PLHomeo { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[Height] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Height] {
        &self.values
    }

    /// Whether the map is the identity outside its outer breakpoints.
    pub fn is_identity_outside(&self) -> bool {
        match (self.breakpoints.first(), self.breakpoints.last()) {
            (Some(b0), Some(b1)) => Some(b0) == self.values.first() && Some(b1) == self.values.last(),
            _ => true,
        }
    }

    /// `(first, last)` breakpoint.
    pub fn support(&self) -> Option<(Height, Height)> {
        Some((self.breakpoints.first()?.clone(), self.breakpoints.last()?.clone()))
    }

    pub fn is_identity(&self) -> bool {
        self.breakpoints == self.values
    }

    pub fn slopes(&self) -> Vec<Height> {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(b, v)| (&v[1] - &v[0]) / (&b[1] - &b[0]))
            .collect()
    }

    pub fn apply(&self, x: &Height) -> Height {
        let n = self.breakpoints.len();
        if n == 0 {
            return x.clone();
        }
        if *x <= self.breakpoints[0] {
            return x - &self.breakpoints[0] + &self.values[0];
        }
        if *x >= self.breakpoints[n - 1] {
            return x - &self.breakpoints[n - 1] + &self.values[n - 1];
        }
        let i = self.breakpoints.partition_point(|b| b <= x) - 1;
        let (b0, b1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        let (v0, v1) = (&self.values[i], &self.values[i + 1]);
        v0 + (x - b0) * (v1 - v0) / (b1 - b0)
    }

    pub fn inverse(&self) -> PLHomeo {
        PLHomeo {
            breakpoints: self.values.clone(),
            values: self.breakpoints.clone(),
        }
    }
}

/// Heights of known points and of their images under `g`, by increasing
/// source height.
fn known_graph(emb: &OrderEmbedding, x: &GSet, g: &GroupElement) -> Result<Vec<(usize, usize)>> {
    let word = x.ctx().spell(g)?;
    let mut out = Vec::new();
    for p in emb.points_by_height() {
        if let Some(q) = x.act_word(p, &word) {
            if emb.height(q).is_some() {
                out.push((p, q));
            }
        }
    }
    Ok(out)
}

/// The PL realization of `g` on the window described by `emb`.
pub fn extend_action_to_line(emb: &OrderEmbedding, x: &GSet, g: &GroupElement) -> Result<PLHomeo> {
    let graph = known_graph(emb, x, g)?;
    let Some((lo, hi)) = emb.support() else {
        return Ok(PLHomeo::identity());
    };
    if graph.is_empty() {
        return Ok(PLHomeo::identity());
    }
    let h = |p: usize| emb.height(p).expect("known point").clone();
    for w in graph.windows(2) {
        let (p0, q0) = w[0];
        let (p1, q1) = w[1];
        if h(p0) >= h(p1) {
            return Err(Error::EqualOnDistinct(p0, p1));
        }
        if h(q0) >= h(q1) {
            return Err(Error::NotInvariant(p0, p1));
        }
    }
    let mut breakpoints = Vec::with_capacity(graph.len() + 2);
    let mut values = Vec::with_capacity(graph.len() + 2);
    breakpoints.push(lo.clone());
    values.push(lo);
    for &(p, q) in &graph {
        breakpoints.push(h(p));
        values.push(h(q));
    }
    breakpoints.push(hi.clone());
    values.push(hi);
    PLHomeo::new(breakpoints, values)
}

/// PL maps for a list of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub elements: Vec<GroupElement>,
    pub maps: Vec<PLHomeo>,
}

pub fn realize(emb: &OrderEmbedding, x: &GSet, elements: &[GroupElement]) -> Result<Realization> {
    let maps = elements
        .iter()
        .map(|g| extend_action_to_line(emb, x, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(Realization {
        elements: elements.to_vec(),
        maps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceFailure {
    /// Index into the realization's elements.
    pub element: usize,
    pub point: usize,
    pub expected: Height,
    pub got: Height,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionFailure {
    pub first: usize,
    pub second: usize,
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotonicityFailure {
    /// Segment `segment` of map `element` does not increase.
    Segment { element: usize, segment: usize },
    /// `pair` is ordered but its images under `element` are not.
    NotInvariant {
        element: GroupElement,
        pair: (usize, usize),
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealizationReport {
    pub equivariance_checked: usize,
    pub equivariance: Vec<EquivarianceFailure>,
    pub composition_checked: usize,
    pub composition: Vec<CompositionFailure>,
    pub monotonicity: Vec<MonotonicityFailure>,
    /// The G-set is a truncated window.
    pub window_only: bool,
}

impl RealizationReport {
    pub fn passes(&self) -> bool {
        self.equivariance.is_empty() && self.composition.is_empty() && self.monotonicity.is_empty()
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.equivariance.is_empty() {
            out.push("equivariance");
        }
        if !self.composition.is_empty() {
            out.push("composition");
        }
        if !self.monotonicity.is_empty() {
            out.push("monotonicity");
        }
        out
    }
}

/// Checks (a) `PL(g)(t(x)) = t(x·g)` at every known point with a known
/// image, (b) `PL(h)(PL(g)(t(x))) = PL(gh)(t(x))` wherever `x·g` and `x·gh`
/// are in the window, with `PL(gh)` rebuilt from the embedding, and
/// (c) positive slopes of every map.
pub fn check_realization(
    emb: &OrderEmbedding,
    x: &GSet,
    realization: &Realization,
) -> Result<RealizationReport> {
    let ctx = x.ctx();
    let mut report = RealizationReport {
        window_only: x.is_truncated(),
        ..RealizationReport::default()
    };
    if realization.elements.len() != realization.maps.len() {
        return Err(Error::MalformedCertificate(
            "realization lists elements and maps of different lengths".into(),
        ));
    }
    for (i, (g, map)) in realization.elements.iter().zip(&realization.maps).enumerate() {
        for (segment, w) in map.values.windows(2).enumerate() {
            if w[0] >= w[1] || map.breakpoints[segment] >= map.breakpoints[segment + 1] {
                report
                    .monotonicity
                    .push(MonotonicityFailure::Segment { element: i, segment });
            }
        }
        for (p, q) in known_graph(emb, x, g)? {
            let (tp, tq) = (emb.height(p).unwrap(), emb.height(q).unwrap());
            report.equivariance_checked += 1;
            let got = map.apply(tp);
            if got != *tq {
                report.equivariance.push(EquivarianceFailure {
                    element: i,
                    point: p,
                    expected: tq.clone(),
                    got,
                });
            }
        }
    }
    for (i, g) in realization.elements.iter().enumerate() {
        let gw = ctx.spell(g)?;
        for (j, h) in realization.elements.iter().enumerate() {
            let gh = ctx.op(g, h)?;
            let composite = match extend_action_to_line(emb, x, &gh) {
                Ok(m) => m,
                Err(Error::NotInvariant(a, b)) | Err(Error::EqualOnDistinct(a, b)) => {
                    report.monotonicity.push(MonotonicityFailure::NotInvariant {
                        element: gh,
                        pair: (a, b),
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let ghw = ctx.spell(&gh)?;
            for &(p, ref tp) in emb.entries() {
                let Some(q) = x.act_word(p, &gw) else { continue };
                if emb.height(q).is_none() {
                    continue;
                }
                let Some(r) = x.act_word(p, &ghw) else { continue };
                if emb.height(r).is_none() {
                    continue;
                }
                report.composition_checked += 1;
                let lhs = realization.maps[j].apply(&realization.maps[i].apply(tp));
                if lhs != composite.apply(tp) {
                    report.composition.push(CompositionFailure {
                        first: i,
                        second: j,
                        point: p,
                    });
                }
            }
        }
    }
    Ok(report)
}
