//! Relations `R ⊆ X × X` on finite carriers.
//!
//! Points are carrier indices. The order axioms are checked in their
//! subobject form: `R∘R ⊆ R`, `Δ ∩ R = ∅`, `R ∩ Rᵒᵖ = ∅` and
//! `R ∪ Rᵒᵖ = X×X ∖ Δ`.

use alloc::{collections::BTreeSet, vec, vec::Vec};
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::group::Letter;
use crate::gset::{GSet, GSetMorphism};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Relation {
    pub fn empty(size: usize) -> Self {
        Relation {
            size,
            pairs: BTreeSet::new(),
        }
    }

    pub fn new(size: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x >= size || y >= size) {
            return Err(Error::PointOutOfRange {
                point: x.max(y),
                size,
            });
        }
        Ok(Relation { size, pairs })
    }

    pub fn from_fn(size: usize, mut related: impl FnMut(usize, usize) -> bool) -> Self {
        let pairs = (0..size)
            .flat_map(|x| (0..size).map(move |y| (x, y)))
            .filter(|&(x, y)| related(x, y))
            .collect();
        Relation { size, pairs }
    }

    /// `{(x, y) : cmp(x, y) = Less}`.
    pub fn from_comparison(size: usize, mut cmp: impl FnMut(usize, usize) -> Ordering) -> Self {
        Self::from_fn(size, |x, y| cmp(x, y) == Ordering::Less)
    }

    /// The order `x < y` iff `x` comes before `y` in `ranking`.
    pub fn from_ranking(ranking: &[usize]) -> Result<Self> {
        let size = ranking.len();
        let mut rank = vec![usize::MAX; size];
        for (i, &p) in ranking.iter().enumerate() {
            if p >= size {
                return Err(Error::PointOutOfRange { point: p, size });
            }
            rank[p] = i;
        }
        Ok(Self::from_fn(size, |x, y| rank[x] < rank[y]))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    /// Pairs in sorted order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    /// `Rᵒᵖ = {(x, y) : y R x}`.
    pub fn opposite(&self) -> Relation {
        Relation {
            size: self.size,
            pairs: self.pairs.iter().map(|&(x, y)| (y, x)).collect(),
        }
    }

    /// `R₂ ∘ R₁`: the image of `R₁ ×_X R₂ → X × X` under `(s₁, t₂)`.
    pub fn compose(r1: &Relation, r2: &Relation) -> Result<Relation> {
        if r1.size != r2.size {
            return Err(Error::BaseMismatch(r1.size, r2.size));
        }
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); r2.size];
        for &(y, z) in &r2.pairs {
            by_source[y].push(z);
        }
        // fibre product over t₁ = s₂, then project
        let pairs = r1
            .pairs
            .iter()
            .flat_map(|&(x, y)| by_source[y].iter().map(move |&z| (x, z)))
            .collect();
        Ok(Relation {
            size: r1.size,
            pairs,
        })
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        if self.size != other.size {
            return Err(Error::BaseMismatch(self.size, other.size));
        }
        Ok(Relation {
            size: self.size,
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        if self.size != other.size {
            return Err(Error::BaseMismatch(self.size, other.size));
        }
        Ok(Relation {
            size: self.size,
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        })
    }

    /// Checks the four strict total order axioms, collecting every violation.
    pub fn check_strict_total_order(&self) -> OrderReport {
        let mut report = OrderReport::default();
        let composed = Relation::compose(self, self).expect("same base");
        let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); self.size];
        for &(x, y) in &self.pairs {
            by_source[x].push(y);
        }
        for &(x, z) in composed.pairs.difference(&self.pairs) {
            let y = by_source[x]
                .iter()
                .copied()
                .find(|&y| self.contains(y, z))
                .expect("composite pair has a middle point");
            report.transitivity.push((x, y, z));
        }
        report.irreflexivity = (0..self.size).filter(|&x| self.contains(x, x)).collect();
        for x in 0..self.size {
            for y in x + 1..self.size {
                match (self.contains(x, y), self.contains(y, x)) {
                    (true, true) => report.antisymmetry.push((x, y)),
                    (false, false) => report.totality.push((x, y)),
                    _ => {}
                }
            }
        }
        report
    }

    /// `X×X = R ⊔ Rᵒᵖ ⊔ Δ`: each pair lies in exactly one of the three.
    pub fn partition_holds(&self) -> bool {
        (0..self.size).all(|x| {
            (0..self.size).all(|y| {
                let hits = usize::from(self.contains(x, y))
                    + usize::from(self.contains(y, x))
                    + usize::from(x == y);
                hits == 1
            })
        })
    }

    /// Checks `(x·s, y·s) ∈ R` for every `(x, y) ∈ R` and every letter `s`
    /// with both images in the window.
    pub fn check_invariance(&self, base: &GSet) -> Result<InvarianceReport> {
        if base.len() != self.size {
            return Err(Error::BaseMismatch(base.len(), self.size));
        }
        let mut report = InvarianceReport {
            window_only: base.is_truncated(),
            ..InvarianceReport::default()
        };
        for l in base.ctx().letters() {
            for &(x, y) in &self.pairs {
                let (Some(xs), Some(ys)) = (base.act_letter(x, l), base.act_letter(y, l)) else {
                    continue;
                };
                report.checked += 1;
                if !self.contains(xs, ys) {
                    report.violations.push(InvarianceViolation {
                        pair: (x, y),
                        letter: l,
                        image: (xs, ys),
                    });
                }
            }
        }
        Ok(report)
    }

    /// `(f×f)⁻¹(R₂)` along an injective map.
    pub fn pullback(f: &GSetMorphism, r2: &Relation) -> Result<Relation> {
        if r2.size != f.target.len() {
            return Err(Error::BaseMismatch(f.target.len(), r2.size));
        }
        let mut owner = vec![None; f.target.len()];
        for (x, &y) in f.map.iter().enumerate() {
            if let Some(prev) = owner[y].replace(x) {
                return Err(Error::NotInjective(prev, x));
            }
        }
        let n = f.source.len();
        Ok(Relation::from_fn(n, |x, y| r2.contains(f.map[x], f.map[y])))
    }
}

/// Violations of the four order axioms, each with explicit witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderReport {
    /// `(x, y, z)` with `x R y`, `y R z` but not `x R z`.
    pub transitivity: Vec<(usize, usize, usize)>,
    pub irreflexivity: Vec<usize>,
    /// `x < y` with both `(x, y)` and `(y, x)` related.
    pub antisymmetry: Vec<(usize, usize)>,
    /// `x < y` with neither related.
    pub totality: Vec<(usize, usize)>,
}

impl OrderReport {
    pub fn passes(&self) -> bool {
        self.transitivity.is_empty()
            && self.irreflexivity.is_empty()
            && self.antisymmetry.is_empty()
            && self.totality.is_empty()
    }

    /// Names of the failing axioms.
    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.transitivity.is_empty() {
            out.push("transitivity");
        }
        if !self.irreflexivity.is_empty() {
            out.push("irreflexivity");
        }
        if !self.antisymmetry.is_empty() {
            out.push("antisymmetry");
        }
        if !self.totality.is_empty() {
            out.push("totality");
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceViolation {
    pub pair: (usize, usize),
    pub letter: Letter,
    pub image: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvarianceReport {
    pub checked: usize,
    pub violations: Vec<InvarianceViolation>,
    /// Set when the base is a truncated window: a pass means "invariant on
    /// the window", never a global claim.
    pub window_only: bool,
}

impl InvarianceReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}
