//! Right G-sets on finite carriers, possibly truncated to a window.
//!
//! The action is stored per letter as a table `point -> Option<point>`;
//! `None` means the image lies outside the window. Truncated carriers obey
//! the axioms only where both sides are in the window, and every checker
//! here quantifies over in-window data only.

use alloc::{collections::BTreeMap, format, vec, vec::Vec};

use crate::error::{Error, Result};
use crate::group::{GroupCtx, GroupElement, Letter, DEFAULT_BALL_CAP};

/// What a carrier point stands for. Only used for lookup and display; the
/// action tables are authoritative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum PointTag {
    /// The point of the terminal G-set.
    Star,
    Element(GroupElement),
    /// A right coset `Hx`, listed by its members in length-lex order.
    Coset(Vec<GroupElement>),
    Pair(usize, usize),
    Index(usize),
}

/// Radius of the group ball used by the axiom checker on infinite groups.
pub const DEFAULT_CHECK_RADIUS: u32 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    ctx: GroupCtx,
    points: Vec<PointTag>,
    // indexed by letter slot (2·generator + inverse), then by point
    action: Vec<Vec<Option<usize>>>,
    truncated: bool,
}

fn slot(l: Letter) -> usize {
    2 * l.generator as usize + usize::from(l.inverse)
}

impl GSet {
    /// Builds a G-set from the images of the positive generators; inverse
    /// letters act by the inverse partial maps.
    pub fn from_generator_arrays(
        ctx: GroupCtx,
        points: Vec<PointTag>,
        arrays: Vec<Vec<Option<usize>>>,
        truncated: bool,
    ) -> Result<Self> {
        let n = points.len();
        if arrays.len() != ctx.generator_count() as usize {
            return Err(Error::InvalidGroup(format!(
                "{} action arrays for {} generators",
                arrays.len(),
                ctx.generator_count()
            )));
        }
        let mut action = Vec::with_capacity(2 * arrays.len());
        for arr in arrays {
            if arr.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "action array of length {} for {n} points",
                    arr.len()
                )));
            }
            let mut inv = vec![None; n];
            for (x, y) in arr.iter().enumerate() {
                if let Some(y) = *y {
                    if y >= n {
                        return Err(Error::PointOutOfRange { point: y, size: n });
                    }
                    if let Some(prev) = inv[y].replace(x) {
                        return Err(Error::NotInjective(prev, x));
                    }
                }
            }
            action.push(arr);
            action.push(inv);
        }
        Ok(GSet {
            ctx,
            points,
            action,
            truncated,
        })
    }

    fn tabulate(
        ctx: GroupCtx,
        points: Vec<PointTag>,
        truncated: bool,
        mut image: impl FnMut(usize, &GroupElement) -> Result<Option<usize>>,
    ) -> Result<Self> {
        let mut action = Vec::new();
        for l in ctx.letters() {
            let s = ctx.letter(l)?;
            let row = (0..points.len())
                .map(|x| image(x, &s))
                .collect::<Result<Vec<_>>>()?;
            action.push(row);
        }
        Ok(GSet {
            ctx,
            points,
            action,
            truncated,
        })
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointTag] {
        &self.points
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn position(&self, tag: &PointTag) -> Option<usize> {
        self.points.iter().position(|p| p == tag)
    }

    /// Lookup table from group elements to carrier points, for carriers
    /// tagged by elements.
    pub fn element_index(&self) -> BTreeMap<GroupElement, usize> {
        self.points
            .iter()
            .enumerate()
            .filter_map(|(i, p)| match p {
                PointTag::Element(g) => Some((g.clone(), i)),
                _ => None,
            })
            .collect()
    }

    pub fn act_letter(&self, x: usize, l: Letter) -> Option<usize> {
        self.action.get(slot(l))?.get(x).copied().flatten()
    }

    /// Images of the positive generators, the serialized form of the action.
    pub fn generator_arrays(&self) -> Vec<Vec<Option<usize>>> {
        self.action.iter().step_by(2).cloned().collect()
    }

    pub fn act_word(&self, x: usize, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(x, |p, &l| self.act_letter(p, l))
    }

    /// `x·g`, following a geodesic spelling of `g` letter by letter.
    pub fn act(&self, x: usize, g: &GroupElement) -> Result<Option<usize>> {
        Ok(self.act_word(x, &self.ctx.spell(g)?))
    }

    /// Overwrites one table entry. Intended for fault injection.
    pub fn set_action(&mut self, x: usize, l: Letter, y: Option<usize>) {
        self.action[slot(l)][x] = y;
    }

    /// Keeps only the generators of one factor of a direct product.
    pub fn restrict_to_factor(&self, side: Side) -> Result<GSet> {
        let crate::group::Backend::Product(left, right) = self.ctx.backend() else {
            return Err(Error::InvalidGroup("not a direct product".into()));
        };
        let k = left.generator_count() as usize;
        let (ctx, range) = match side {
            Side::Left => ((**left).clone(), 0..2 * k),
            Side::Right => ((**right).clone(), 2 * k..self.action.len()),
        };
        Ok(GSet {
            ctx,
            points: self.points.clone(),
            action: self.action[range].to_vec(),
            truncated: self.truncated,
        })
    }

    /// Verifies `(x·g)·h = x·(gh)` for every point and every `g, h` in the
    /// whole group (finite) or in the ball of [`DEFAULT_CHECK_RADIUS`].
    pub fn check_action_axioms(&self) -> Result<ActionReport> {
        self.check_action_axioms_within(DEFAULT_CHECK_RADIUS)
    }

    pub fn check_action_axioms_within(&self, radius: u32) -> Result<ActionReport> {
        let mut report = ActionReport::default();
        if !self.truncated {
            for l in self.ctx.letters() {
                for x in 0..self.len() {
                    if self.act_letter(x, l).is_none() {
                        report.undefined.push((x, l));
                    }
                }
            }
        }
        let elems = self.ctx.window(radius, DEFAULT_BALL_CAP)?;
        let words: Vec<Vec<Letter>> = elems
            .iter()
            .map(|g| self.ctx.spell(g))
            .collect::<Result<_>>()?;
        for (gi, g) in elems.iter().enumerate() {
            for (hi, h) in elems.iter().enumerate() {
                let gh = self.ctx.op(g, h)?;
                let gh_word = self.ctx.spell(&gh)?;
                for x in 0..self.len() {
                    let lhs = self
                        .act_word(x, &words[gi])
                        .and_then(|y| self.act_word(y, &words[hi]));
                    let rhs = self.act_word(x, &gh_word);
                    report.checked += 1;
                    let violated = match (lhs, rhs) {
                        (Some(a), Some(b)) => a != b,
                        (None, None) => false,
                        _ => !self.truncated,
                    };
                    if violated {
                        report.violations.push(ActionViolation {
                            point: x,
                            g: g.clone(),
                            h: h.clone(),
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A violated instance of `(x·g)·h = x·(gh)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionViolation {
    pub point: usize,
    pub g: GroupElement,
    pub h: GroupElement,
    pub lhs: Option<usize>,
    pub rhs: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActionReport {
    pub checked: usize,
    pub violations: Vec<ActionViolation>,
    /// Missing table entries on a carrier that claims a total action.
    pub undefined: Vec<(usize, Letter)>,
}

impl ActionReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty() && self.undefined.is_empty()
    }
}

/// Terminal G-set: one point fixed by everything.
pub fn make_trivial(ctx: &GroupCtx) -> GSet {
    let k = ctx.generator_count() as usize;
    GSet {
        ctx: ctx.clone(),
        points: vec![PointTag::Star],
        action: vec![vec![Some(0)]; 2 * k],
        truncated: false,
    }
}

fn element_set(
    ctx: &GroupCtx,
    radius: u32,
    cap: usize,
    image: impl Fn(&GroupElement, &GroupElement) -> Result<GroupElement>,
) -> Result<GSet> {
    let carrier = ctx.window(radius, cap)?;
    let index: BTreeMap<GroupElement, usize> = carrier
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let points = carrier.iter().cloned().map(PointTag::Element).collect();
    GSet::tabulate(ctx.clone(), points, !ctx.is_finite(), |x, s| {
        Ok(index.get(&image(&carrier[x], s)?).copied())
    })
}

/// `G_r`: the group acting on (a ball of) itself by right multiplication.
pub fn make_regular(ctx: &GroupCtx, radius: u32) -> Result<GSet> {
    make_regular_with_cap(ctx, radius, DEFAULT_BALL_CAP)
}

pub fn make_regular_with_cap(ctx: &GroupCtx, radius: u32, cap: usize) -> Result<GSet> {
    element_set(ctx, radius, cap, |x, s| ctx.op(x, s))
}

/// `G_conj`: `h·g = g⁻¹hg`.
pub fn make_conjugation(ctx: &GroupCtx, radius: u32) -> Result<GSet> {
    element_set(ctx, radius, DEFAULT_BALL_CAP, |h, g| ctx.conjugate(h, g))
}

/// `ₗG_r`: `G` as a `G×G`-set via `f·(g, h) = g⁻¹fh`.
pub fn make_biregular(ctx: &GroupCtx, radius: u32) -> Result<GSet> {
    make_biregular_with_cap(ctx, radius, DEFAULT_BALL_CAP)
}

pub fn make_biregular_with_cap(ctx: &GroupCtx, radius: u32, cap: usize) -> Result<GSet> {
    let carrier = ctx.window(radius, cap)?;
    let index: BTreeMap<GroupElement, usize> = carrier
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let product = GroupCtx::direct_product(ctx.clone(), ctx.clone());
    let points = carrier.iter().cloned().map(PointTag::Element).collect();
    GSet::tabulate(product, points, !ctx.is_finite(), |x, s| {
        let GroupElement::Pair(g, h) = s else {
            unreachable!("product letters are pairs")
        };
        let y = ctx.op(&ctx.op(&ctx.invert(g)?, &carrier[x])?, h)?;
        Ok(index.get(&y).copied())
    })
}

/// `H\G` for a finite group, `H` generated by `subgroup`.
pub fn make_coset(ctx: &GroupCtx, subgroup: &[GroupElement]) -> Result<GSet> {
    if !ctx.is_finite() {
        return Err(Error::NotFinite);
    }
    for h in subgroup {
        ctx.validate(h)?;
    }
    let elements = ctx.elements()?;
    // closure of the generators under multiplication
    let mut h_set = alloc::collections::BTreeSet::from([ctx.identity()]);
    let mut frontier = vec![ctx.identity()];
    while let Some(x) = frontier.pop() {
        for s in subgroup {
            let y = ctx.op(&x, s)?;
            if h_set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let mut coset_of: BTreeMap<GroupElement, usize> = BTreeMap::new();
    let mut points = Vec::new();
    let mut reps = Vec::new();
    for x in &elements {
        if coset_of.contains_key(x) {
            continue;
        }
        let mut members = h_set
            .iter()
            .map(|h| ctx.op(h, x))
            .collect::<Result<Vec<_>>>()?;
        members.sort_by(|a, b| ctx.length_lex(a, b));
        for m in &members {
            coset_of.insert(m.clone(), points.len());
        }
        reps.push(x.clone());
        points.push(PointTag::Coset(members));
    }
    GSet::tabulate(ctx.clone(), points, false, |c, s| {
        Ok(coset_of.get(&ctx.op(&reps[c], s)?).copied())
    })
}

/// An equivariant map of G-sets, stored as a point table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSetMorphism {
    pub source: GSet,
    pub target: GSet,
    pub map: Vec<usize>,
}

impl GSetMorphism {
    /// Builds a morphism without checking equivariance.
    pub fn new_unchecked(source: GSet, target: GSet, map: Vec<usize>) -> Result<Self> {
        if source.ctx != target.ctx {
            return Err(Error::ContextMismatch);
        }
        if map.len() != source.len() {
            return Err(Error::PointOutOfRange {
                point: map.len(),
                size: source.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::PointOutOfRange {
                point: bad,
                size: target.len(),
            });
        }
        Ok(GSetMorphism {
            source,
            target,
            map,
        })
    }

    /// Builds a morphism and rejects it unless it is equivariant.
    pub fn new(source: GSet, target: GSet, map: Vec<usize>) -> Result<Self> {
        let f = Self::new_unchecked(source, target, map)?;
        if let Some(v) = f.check_equivariance().violations.first() {
            return Err(Error::NotEquivariant {
                point: v.point,
                letter: f.source.ctx.letter_name(v.letter),
            });
        }
        Ok(f)
    }

    pub fn identity(x: &GSet) -> Self {
        GSetMorphism {
            source: x.clone(),
            target: x.clone(),
            map: (0..x.len()).collect(),
        }
    }

    /// The unique map to the terminal G-set.
    pub fn to_terminal(x: &GSet) -> Self {
        GSetMorphism {
            source: x.clone(),
            target: make_trivial(&x.ctx),
            map: vec![0; x.len()],
        }
    }

    /// Checks `f(x·s) = f(x)·s` for every point and letter where `x·s` is in
    /// the window. A missing `f(x)·s` counts only when the target claims a
    /// total action.
    pub fn check_equivariance(&self) -> EquivarianceReport {
        let mut report = EquivarianceReport::default();
        for l in self.source.ctx.letters() {
            for x in 0..self.source.len() {
                let Some(xs) = self.source.act_letter(x, l) else {
                    continue;
                };
                report.checked += 1;
                let expected = self.map[xs];
                let got = self.target.act_letter(self.map[x], l);
                match got {
                    Some(y) if y == expected => {}
                    None if self.target.truncated => {}
                    _ => report.violations.push(EquivarianceViolation {
                        point: x,
                        letter: l,
                        expected,
                        got,
                    }),
                }
            }
        }
        report
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.map.iter().all(|&y| !core::mem::replace(&mut seen[y], true))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.len() == self.target.len()
            && self.is_injective()
            && self.check_equivariance().passes()
            && {
                let mut inverse = vec![0; self.target.len()];
                for (x, &y) in self.map.iter().enumerate() {
                    inverse[y] = x;
                }
                GSetMorphism {
                    source: self.target.clone(),
                    target: self.source.clone(),
                    map: inverse,
                }
                .check_equivariance()
                .passes()
            }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivarianceViolation {
    pub point: usize,
    pub letter: Letter,
    /// `f(x·s)`.
    pub expected: usize,
    /// `f(x)·s`.
    pub got: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EquivarianceReport {
    pub checked: usize,
    pub violations: Vec<EquivarianceViolation>,
}

impl EquivarianceReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A fibre product with its two projections.
#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub set: GSet,
    pub first: GSetMorphism,
    pub second: GSetMorphism,
}

/// `X1 ×_X3 X2` with the diagonal action.
pub fn fibre_product(f1: &GSetMorphism, f2: &GSetMorphism) -> Result<FibreProduct> {
    if f1.target != f2.target || f1.source.ctx != f2.source.ctx {
        return Err(Error::ContextMismatch);
    }
    let (x1, x2) = (&f1.source, &f2.source);
    let mut points = Vec::new();
    let mut index = BTreeMap::new();
    for a in 0..x1.len() {
        for b in 0..x2.len() {
            if f1.map[a] == f2.map[b] {
                index.insert((a, b), points.len());
                points.push(PointTag::Pair(a, b));
            }
        }
    }
    let pairs: Vec<(usize, usize)> = index.keys().copied().collect();
    let mut action = Vec::new();
    for l in x1.ctx.letters() {
        action.push(
            pairs
                .iter()
                .map(|&(a, b)| {
                    let img = (x1.act_letter(a, l)?, x2.act_letter(b, l)?);
                    index.get(&img).copied()
                })
                .collect(),
        );
    }
    let set = GSet {
        ctx: x1.ctx.clone(),
        points,
        action,
        truncated: x1.truncated || x2.truncated,
    };
    let first = GSetMorphism {
        source: set.clone(),
        target: x1.clone(),
        map: pairs.iter().map(|p| p.0).collect(),
    };
    let second = GSetMorphism {
        source: set.clone(),
        target: x2.clone(),
        map: pairs.iter().map(|p| p.1).collect(),
    };
    Ok(FibreProduct { set, first, second })
}

/// `X1 × X2`, the fibre product over the terminal G-set.
pub fn product(x1: &GSet, x2: &GSet) -> Result<GSet> {
    if x1.ctx != x2.ctx {
        return Err(Error::ContextMismatch);
    }
    Ok(fibre_product(&GSetMorphism::to_terminal(x1), &GSetMorphism::to_terminal(x2))?.set)
}

/// The diagonal `X → X × X`.
pub fn diagonal(x: &GSet) -> Result<GSetMorphism> {
    let target = product(x, x)?;
    let n = x.len();
    let map = (0..n).map(|i| i * n + i).collect();
    GSetMorphism::new(x.clone(), target, map)
}

/// The image of an equivariant map, with its inclusion into the target.
#[derive(Clone, Debug)]
pub struct Image {
    pub set: GSet,
    pub inclusion: Vec<usize>,
}

pub fn image(f: &GSetMorphism) -> Result<Image> {
    if let Some(v) = f.check_equivariance().violations.first() {
        return Err(Error::NotEquivariant {
            point: v.point,
            letter: f.source.ctx.letter_name(v.letter),
        });
    }
    let mut inclusion: Vec<usize> = f.map.clone();
    inclusion.sort_unstable();
    inclusion.dedup();
    let local: BTreeMap<usize, usize> = inclusion.iter().enumerate().map(|(i, &y)| (y, i)).collect();
    let points = inclusion
        .iter()
        .map(|&y| f.target.points[y].clone())
        .collect();
    let action = f
        .target
        .action
        .iter()
        .map(|row| {
            inclusion
                .iter()
                .map(|&y| row[y].and_then(|z| local.get(&z).copied()))
                .collect()
        })
        .collect();
    Ok(Image {
        set: GSet {
            ctx: f.target.ctx.clone(),
            points,
            action,
            truncated: f.target.truncated || f.source.truncated,
        },
        inclusion,
    })
}
