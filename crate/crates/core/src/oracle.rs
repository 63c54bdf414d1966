//! Computable orders on groups and their positive cones.
//!
//! Convention for right orders: `g < h` iff `h g⁻¹ ∈ P`. Every sign-based
//! oracle therefore compares `g` with `h` through the sign of `g h⁻¹`.

use alloc::{collections::BTreeSet, format, vec::Vec};
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::group::{Backend, GroupCtx, GroupElement, Twist};
use crate::gset::{GSet, PointTag};
use crate::relation::Relation;

/// Which translations an order is invariant under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Invariance {
    /// An arbitrary total order with no invariance claim.
    None,
    Right,
    Bi,
}

/// Cone and search mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum Mode {
    Right,
    Bi,
}

pub trait OrderOracle {
    fn ctx(&self) -> &GroupCtx;

    fn invariance(&self) -> Invariance;

    /// `None` when the oracle cannot decide, e.g. outside a cone's window.
    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering>;
}

fn by_sign(
    ctx: &GroupCtx,
    g: &GroupElement,
    h: &GroupElement,
    sign: impl Fn(&GroupElement) -> Option<Ordering>,
) -> Option<Ordering> {
    let d = ctx.op(g, &ctx.invert(h).ok()?).ok()?;
    sign(&d)
}

/// Lexicographic order on `ℤⁿ`: positive iff the first nonzero coordinate is.
#[derive(Clone, Debug)]
pub struct LexOrder {
    ctx: GroupCtx,
}

impl LexOrder {
    pub fn new(ctx: &GroupCtx) -> Result<Self> {
        match ctx.backend() {
            Backend::FreeAbelian { rank } if *rank >= 1 => Ok(LexOrder { ctx: ctx.clone() }),
            _ => Err(Error::InvalidGroup(
                "lexicographic order needs a free abelian group of rank >= 1".into(),
            )),
        }
    }
}

impl OrderOracle for LexOrder {
    fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    fn invariance(&self) -> Invariance {
        Invariance::Bi
    }

    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        by_sign(&self.ctx, g, h, |d| match d {
            GroupElement::Vector(v) => Some(
                v.iter()
                    .find(|x| **x != 0)
                    .map_or(Ordering::Equal, |x| x.cmp(&0)),
            ),
            _ => None,
        })
    }
}

/// `aᵐbⁿ > e` iff `n > 0`, or `n = 0` and `m > 0`.
///
/// On the Klein-bottle group this is a right order that is not a bi-order;
/// for the untwisted product it is a lexicographic bi-order on `ℤ²`.
#[derive(Clone, Debug)]
pub struct SemidirectOrder {
    ctx: GroupCtx,
    twist: Twist,
}

impl SemidirectOrder {
    pub fn new(ctx: &GroupCtx) -> Result<Self> {
        match ctx.backend() {
            Backend::Semidirect { twist } => Ok(SemidirectOrder {
                ctx: ctx.clone(),
                twist: *twist,
            }),
            _ => Err(Error::InvalidGroup(
                "semidirect order needs a semidirect backend".into(),
            )),
        }
    }
}

impl OrderOracle for SemidirectOrder {
    fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    fn invariance(&self) -> Invariance {
        match self.twist {
            Twist::Plus => Invariance::Bi,
            Twist::Minus => Invariance::Right,
        }
    }

    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        by_sign(&self.ctx, g, h, |d| match d {
            GroupElement::Semidirect { a, b } => Some(b.cmp(&0).then(a.cmp(&0))),
            _ => None,
        })
    }
}

/// Orders a finite group by table index. A total order with no invariance,
/// used to feed arbitrary heights into the witness pipeline.
#[derive(Clone, Debug)]
pub struct IndexOrder {
    ctx: GroupCtx,
}

impl IndexOrder {
    pub fn new(ctx: &GroupCtx) -> Result<Self> {
        match ctx.backend() {
            Backend::Table(_) => Ok(IndexOrder { ctx: ctx.clone() }),
            _ => Err(Error::NotFinite),
        }
    }
}

impl OrderOracle for IndexOrder {
    fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    fn invariance(&self) -> Invariance {
        Invariance::None
    }

    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        match (g, h) {
            (GroupElement::Table(x), GroupElement::Table(y)) => Some(x.cmp(y)),
            _ => None,
        }
    }
}

/// A sign assignment on `ball(radius) ∖ {e}`, given by its positive part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveCone {
    ctx: GroupCtx,
    radius: u32,
    members: BTreeSet<GroupElement>,
    mode: Mode,
}

impl PositiveCone {
    /// Checks the structural invariants: `e ∉ P`, never both `g` and `g⁻¹`,
    /// members inside the window. Closure is left to
    /// [`PositiveCone::check_axioms`].
    pub fn new(
        ctx: &GroupCtx,
        radius: u32,
        members: impl IntoIterator<Item = GroupElement>,
        mode: Mode,
    ) -> Result<Self> {
        let members: BTreeSet<GroupElement> = members.into_iter().collect();
        for g in &members {
            ctx.validate(g)?;
            if ctx.is_identity(g) {
                return Err(Error::InconsistentCone("identity is a member".into()));
            }
            if ctx.length(g) > radius {
                return Err(Error::InconsistentCone(format!(
                    "{} lies outside the radius-{radius} window",
                    ctx.display(g)
                )));
            }
            if members.contains(&ctx.invert(g)?) {
                return Err(Error::InconsistentCone(format!(
                    "both {} and its inverse are members",
                    ctx.display(g)
                )));
            }
        }
        Ok(PositiveCone {
            ctx: ctx.clone(),
            radius,
            members,
            mode,
        })
    }

    pub(crate) fn from_parts_unchecked(
        ctx: GroupCtx,
        radius: u32,
        members: BTreeSet<GroupElement>,
        mode: Mode,
    ) -> Self {
        PositiveCone {
            ctx,
            radius,
            members,
            mode,
        }
    }

    pub fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    /// Members in length-then-lex order.
    pub fn members(&self) -> Vec<GroupElement> {
        let mut v: Vec<_> = self.members.iter().cloned().collect();
        v.sort_by(|a, b| self.ctx.length_lex(a, b));
        v
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.members.contains(g)
    }

    /// Verifies (i) exactly one of `g`, `g⁻¹` is positive for every
    /// `g ≠ e` in the window, (ii) in-window products of positives are
    /// positive and, in bi mode, (iii) in-window conjugates `f⁻¹gf` of
    /// positives by window elements `f` are positive.
    pub fn check_axioms(&self) -> Result<ConeReport> {
        let ctx = &self.ctx;
        let ball = ctx.ball(self.radius)?;
        let in_window = |g: &GroupElement| ctx.length(g) <= self.radius;
        let mut report = ConeReport::default();
        for g in &self.members {
            if ctx.is_identity(g) {
                report.identity_member = true;
            } else if !in_window(g) {
                report.outside_window.push(g.clone());
            }
        }
        for g in &ball {
            if ctx.is_identity(g) {
                continue;
            }
            let gi = ctx.invert(g)?;
            if ctx.length_lex(g, &gi) == Ordering::Greater {
                continue;
            }
            if self.contains(g) == self.contains(&gi) {
                report.pairing.push(g.clone());
            }
        }
        let members = self.members();
        for g in &members {
            for h in &members {
                let gh = ctx.op(g, h)?;
                if in_window(&gh) && !self.contains(&gh) {
                    report.closure.push((g.clone(), h.clone()));
                }
            }
        }
        if self.mode == Mode::Bi {
            for g in &members {
                for f in &ball {
                    let c = ctx.conjugate(g, f)?;
                    if in_window(&c) && !self.contains(&c) {
                        report.conjugation.push((g.clone(), f.clone()));
                    }
                }
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeReport {
    pub identity_member: bool,
    pub outside_window: Vec<GroupElement>,
    /// `g` (the length-lex smaller of `g`, `g⁻¹`) with both or neither positive.
    pub pairing: Vec<GroupElement>,
    /// `(g, h)` positive with `gh` in the window but not positive.
    pub closure: Vec<(GroupElement, GroupElement)>,
    /// `(g, f)` with `g` positive and `f⁻¹gf` in the window but not positive.
    pub conjugation: Vec<(GroupElement, GroupElement)>,
}

impl ConeReport {
    pub fn passes(&self) -> bool {
        !self.identity_member
            && self.outside_window.is_empty()
            && self.pairing.is_empty()
            && self.closure.is_empty()
            && self.conjugation.is_empty()
    }

    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.identity_member || !self.outside_window.is_empty() || !self.pairing.is_empty() {
            out.push("pairing");
        }
        if !self.closure.is_empty() {
            out.push("closure");
        }
        if !self.conjugation.is_empty() {
            out.push("conjugation");
        }
        out
    }
}

/// The partial order oracle of a cone: decides `g` vs `h` when `g h⁻¹`
/// lies in the cone's window.
#[derive(Clone, Debug)]
pub struct ConeOracle {
    cone: PositiveCone,
}

pub fn oracle_from_cone(cone: &PositiveCone) -> ConeOracle {
    ConeOracle { cone: cone.clone() }
}

impl ConeOracle {
    pub fn cone(&self) -> &PositiveCone {
        &self.cone
    }

    pub fn sign(&self, d: &GroupElement) -> Option<Ordering> {
        let ctx = &self.cone.ctx;
        if ctx.is_identity(d) {
            return Some(Ordering::Equal);
        }
        if self.cone.contains(d) {
            return Some(Ordering::Greater);
        }
        if self.cone.contains(&ctx.invert(d).ok()?) {
            return Some(Ordering::Less);
        }
        None
    }
}

impl OrderOracle for ConeOracle {
    fn ctx(&self) -> &GroupCtx {
        &self.cone.ctx
    }

    fn invariance(&self) -> Invariance {
        match self.cone.mode {
            Mode::Right => Invariance::Right,
            Mode::Bi => Invariance::Bi,
        }
    }

    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        by_sign(&self.cone.ctx, g, h, |d| self.sign(d))
    }
}

/// Positive elements of `ball(radius) ∖ {e}` under an invariant oracle.
pub fn cone_from_oracle(oracle: &dyn OrderOracle, radius: u32) -> Result<PositiveCone> {
    let ctx = oracle.ctx();
    let mode = match oracle.invariance() {
        Invariance::Bi => Mode::Bi,
        Invariance::Right => Mode::Right,
        Invariance::None => {
            return Err(Error::InconsistentCone(
                "oracle is not invariant, so it has no positive cone".into(),
            ))
        }
    };
    let e = ctx.identity();
    let mut members = BTreeSet::new();
    for g in ctx.ball(radius)? {
        match oracle.compare(&g, &e) {
            Some(Ordering::Greater) => {
                members.insert(g);
            }
            Some(_) => {}
            None => {
                return Err(Error::Undetermined(
                    format!("{}", ctx.display(&g)),
                    "e".into(),
                ))
            }
        }
    }
    Ok(PositiveCone::from_parts_unchecked(ctx.clone(), radius, members, mode))
}

fn element_points(x: &GSet) -> Result<Vec<&GroupElement>> {
    x.points()
        .iter()
        .map(|p| match p {
            PointTag::Element(g) => Ok(g),
            other => Err(Error::InvalidGroup(format!(
                "carrier point {other:?} is not a group element"
            ))),
        })
        .collect()
}

/// `{(x, y) : g_x < g_y}` on a carrier of group elements.
pub fn relation_from_oracle(oracle: &dyn OrderOracle, x: &GSet) -> Result<Relation> {
    let elems = element_points(x)?;
    let ctx = oracle.ctx();
    let n = elems.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match oracle.compare(elems[i], elems[j]) {
                Some(Ordering::Less) => pairs.push((i, j)),
                Some(Ordering::Greater) => {}
                Some(Ordering::Equal) => return Err(Error::EqualOnDistinct(i, j)),
                None => {
                    return Err(Error::Undetermined(
                        format!("{}", ctx.display(elems[i])),
                        format!("{}", ctx.display(elems[j])),
                    ))
                }
            }
        }
    }
    Relation::new(n, pairs)
}

/// The order `g < h ⟺ h g⁻¹ ∈ P` on a regular window. Comparing two points
/// of `ball(r)` needs the cone on `ball(2r)`.
pub fn relation_from_cone(cone: &PositiveCone, x: &GSet) -> Result<Relation> {
    let oracle = oracle_from_cone(cone);
    relation_from_oracle(&oracle, x).map_err(|e| match e {
        Error::Undetermined(g, h) => {
            let ctx = cone.ctx();
            let elems = element_points(x).unwrap_or_default();
            let inside = elems.iter().all(|a| {
                elems.iter().all(|b| {
                    ctx.op(a, &ctx.invert(b).unwrap_or_else(|_| ctx.identity()))
                        .map(|d| ctx.length(&d) <= cone.radius)
                        .unwrap_or(false)
                })
            });
            if inside {
                Error::InconsistentCone(format!("neither {g} < {h} nor {h} < {g}"))
            } else {
                Error::Undetermined(g, h)
            }
        }
        other => other,
    })
}

/// The relation `f₁ < f₂` on an `ₗG_r` window; invariant under the `G × G`
/// action exactly when the oracle is a bi-order on the window.
pub fn biregular_relation_from_bi_oracle(oracle: &dyn OrderOracle, x: &GSet) -> Result<Relation> {
    match x.ctx().backend() {
        Backend::Product(l, r) if **l == *oracle.ctx() && **r == *oracle.ctx() => {}
        _ => return Err(Error::ContextMismatch),
    }
    relation_from_oracle(oracle, x)
}
