//! Finitely generated groups with exact normal forms.
//!
//! Every backend keeps a unique normal form per element, so structural
//! equality of [`GroupElement`]s is equality in the group. Balls are
//! enumerated breadth-first over the declared generators and returned in
//! length-then-lex order.

use alloc::{
    boxed::Box,
    collections::{BTreeSet, VecDeque},
    format,
    string::{String, ToString},
    vec,
    vec::Vec,
};
use core::{cmp::Ordering, fmt};

use crate::error::{Error, Result};

/// Default cap on the number of elements a ball enumeration may produce.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// A generator or the inverse of a generator.
///
/// Letters order as `a < a⁻¹ < b < b⁻¹ < …`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(into = "i32", try_from = "i32")
)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub const fn positive(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub const fn inv(self) -> Self {
        Letter::new(self.generator, !self.inverse)
    }
}

/// Letters serialize as nonzero integers: `+(i+1)` for generator `i`,
/// `-(i+1)` for its inverse.
impl From<Letter> for i32 {
    fn from(l: Letter) -> i32 {
        let v = l.generator as i32 + 1;
        if l.inverse {
            -v
        } else {
            v
        }
    }
}

impl TryFrom<i32> for Letter {
    type Error = &'static str;

    fn try_from(v: i32) -> core::result::Result<Self, Self::Error> {
        match v.cmp(&0) {
            Ordering::Greater => Ok(Letter::new((v - 1) as u32, false)),
            Ordering::Less => Ok(Letter::new((-v - 1) as u32, true)),
            Ordering::Equal => Err("letter 0 is not a generator"),
        }
    }
}

/// Normal form of a group element. Which variant is valid depends on the
/// backend of the owning [`GroupCtx`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "snake_case")
)]
pub enum GroupElement {
    /// Freely reduced word.
    Word(Vec<Letter>),
    /// Exponent vector of a free abelian group.
    Vector(Vec<i64>),
    /// Index into a Cayley table.
    Table(u32),
    /// `a^a · b^b` in `⟨a, b | b⁻¹ab = a^twist⟩`.
    Semidirect { a: i64, b: i64 },
    Pair(Box<GroupElement>, Box<GroupElement>),
}

/// A validated finite group given by its Cayley table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    order: u32,
    table: Vec<u32>,
    identity: u32,
    inverses: Vec<u32>,
    generators: Vec<u32>,
    // geodesic spelling and word length of every element
    spellings: Vec<Vec<Letter>>,
}

impl FiniteTable {
    /// Validates a row-major Cayley table and a generating list.
    pub fn new(order: u32, table: Vec<u32>, generators: Vec<u32>) -> Result<Self> {
        let n = order as usize;
        if n == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        if table.len() != n * n {
            return Err(Error::InvalidTable(format!(
                "expected {} entries, found {}",
                n * n,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= order) {
            return Err(Error::InvalidTable(format!("entry {bad} out of range")));
        }
        let at = |i: usize, j: usize| table[i * n + j] as usize;
        for i in 0..n {
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for j in 0..n {
                if core::mem::replace(&mut row[at(i, j)], true) {
                    return Err(Error::InvalidTable(format!("row {i} is not a permutation")));
                }
                if core::mem::replace(&mut col[at(j, i)], true) {
                    return Err(Error::InvalidTable(format!("column {i} is not a permutation")));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
            inverses.push(inv as u32);
        }
        for x in 0..n {
            for y in 0..n {
                let xy = at(x, y);
                for z in 0..n {
                    if at(xy, z) != at(x, at(y, z)) {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        if let Some(bad) = generators.iter().find(|&&g| g >= order) {
            return Err(Error::InvalidTable(format!("generator {bad} out of range")));
        }

        // BFS from the identity, right-multiplying by letters in letter order.
        let mut spellings: Vec<Option<Vec<Letter>>> = vec![None; n];
        spellings[identity] = Some(Vec::new());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (i, &g) in generators.iter().enumerate() {
                for inverse in [false, true] {
                    let s = if inverse { inverses[g as usize] } else { g } as usize;
                    let y = at(x, s);
                    if spellings[y].is_none() {
                        let mut w = spellings[x].clone().unwrap_or_default();
                        w.push(Letter::new(i as u32, inverse));
                        spellings[y] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        let spellings = spellings
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s.ok_or_else(|| {
                    Error::InvalidTable(format!("generators do not reach element {i}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(FiniteTable {
            order,
            table,
            identity: identity as u32,
            inverses,
            generators,
            spellings,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.table[x as usize * self.order as usize + y as usize]
    }

    pub fn inverse(&self, x: u32) -> u32 {
        self.inverses[x as usize]
    }
}

/// Twist sign of the semidirect product `⟨a, b | b⁻¹ab = a^twist⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    /// `ℤ × ℤ`.
    Plus,
    /// The Klein-bottle group.
    Minus,
}

impl Twist {
    fn power(self, n: i64) -> i64 {
        match self {
            Twist::Minus if n.rem_euclid(2) == 1 => -1,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Free { rank: u32 },
    FreeAbelian { rank: u32 },
    Table(FiniteTable),
    Semidirect { twist: Twist },
    Product(Box<GroupCtx>, Box<GroupCtx>),
}

/// A finitely generated group together with its generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCtx {
    backend: Backend,
    names: Vec<String>,
}

fn default_names(k: u32) -> Vec<String> {
    (0..k)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

impl GroupCtx {
    pub fn free(rank: u32) -> Self {
        GroupCtx {
            backend: Backend::Free { rank },
            names: default_names(rank),
        }
    }

    pub fn free_abelian(rank: u32) -> Self {
        GroupCtx {
            backend: Backend::FreeAbelian { rank },
            names: default_names(rank),
        }
    }

    pub fn semidirect(twist: Twist) -> Self {
        GroupCtx {
            backend: Backend::Semidirect { twist },
            names: default_names(2),
        }
    }

    /// `⟨a, b | b⁻¹ab = a⁻¹⟩`.
    pub fn klein_bottle() -> Self {
        Self::semidirect(Twist::Minus)
    }

    pub fn finite(table: FiniteTable) -> Self {
        let names = table.generators.iter().map(|g| format!("g{g}")).collect();
        GroupCtx {
            backend: Backend::Table(table),
            names,
        }
    }

    /// `G × H` with generators `S×{e}` followed by `{e}×T`.
    pub fn direct_product(left: GroupCtx, right: GroupCtx) -> Self {
        let names = left
            .names
            .iter()
            .map(|n| format!("({n},e)"))
            .chain(right.names.iter().map(|n| format!("(e,{n})")))
            .collect();
        GroupCtx {
            backend: Backend::Product(Box::new(left), Box::new(right)),
            names,
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.generator_count() as usize {
            return Err(Error::InvalidGroup(format!(
                "{} names given for {} generators",
                names.len(),
                self.generator_count()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn backend_name(&self) -> &'static str {
        match self.backend {
            Backend::Free { .. } => "free",
            Backend::FreeAbelian { .. } => "free abelian",
            Backend::Table(_) => "finite table",
            Backend::Semidirect { .. } => "semidirect",
            Backend::Product(..) => "direct product",
        }
    }

    pub fn generator_count(&self) -> u32 {
        match &self.backend {
            Backend::Free { rank } | Backend::FreeAbelian { rank } => *rank,
            Backend::Table(t) => t.generators.len() as u32,
            Backend::Semidirect { .. } => 2,
            Backend::Product(l, r) => l.generator_count() + r.generator_count(),
        }
    }

    /// All letters in letter order: `a, a⁻¹, b, b⁻¹, …`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generator_count())
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    pub fn is_finite(&self) -> bool {
        match &self.backend {
            Backend::Table(_) => true,
            Backend::Product(l, r) => l.is_finite() && r.is_finite(),
            Backend::Free { rank } | Backend::FreeAbelian { rank } => *rank == 0,
            Backend::Semidirect { .. } => false,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.backend {
            Backend::Free { .. } => GroupElement::Word(Vec::new()),
            Backend::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank as usize]),
            Backend::Table(t) => GroupElement::Table(t.identity),
            Backend::Semidirect { .. } => GroupElement::Semidirect { a: 0, b: 0 },
            Backend::Product(l, r) => {
                GroupElement::Pair(Box::new(l.identity()), Box::new(r.identity()))
            }
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// The element a letter stands for.
    pub fn letter(&self, l: Letter) -> Result<GroupElement> {
        if l.generator >= self.generator_count() {
            return Err(self.mismatch(&format!("letter {}", i32::from(l))));
        }
        let pos = match &self.backend {
            Backend::Free { .. } => return Ok(GroupElement::Word(vec![l])),
            Backend::FreeAbelian { rank } => {
                let mut v = vec![0; *rank as usize];
                v[l.generator as usize] = if l.inverse { -1 } else { 1 };
                return Ok(GroupElement::Vector(v));
            }
            Backend::Table(t) => GroupElement::Table(t.generators[l.generator as usize]),
            Backend::Semidirect { .. } => {
                if l.generator == 0 {
                    GroupElement::Semidirect { a: 1, b: 0 }
                } else {
                    GroupElement::Semidirect { a: 0, b: 1 }
                }
            }
            Backend::Product(left, right) => {
                let k = left.generator_count();
                if l.generator < k {
                    GroupElement::Pair(Box::new(left.letter(l)?), Box::new(right.identity()))
                } else {
                    let inner = Letter::new(l.generator - k, l.inverse);
                    GroupElement::Pair(Box::new(left.identity()), Box::new(right.letter(inner)?))
                }
            }
        };
        if l.inverse && !matches!(self.backend, Backend::Product(..)) {
            self.invert(&pos)
        } else {
            Ok(pos)
        }
    }

    pub fn generator(&self, i: u32) -> Result<GroupElement> {
        self.letter(Letter::positive(i))
    }

    fn mismatch(&self, element: &str) -> Error {
        Error::BackendMismatch {
            backend: self.backend_name(),
            element: element.into(),
        }
    }

    /// Checks that `g` is a normal form for this backend.
    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        let ok = match (&self.backend, g) {
            (Backend::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|l| l.generator < *rank)
                    && w.windows(2).all(|p| p[0] != p[1].inv())
            }
            (Backend::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank as usize,
            (Backend::Table(t), GroupElement::Table(i)) => *i < t.order,
            (Backend::Semidirect { .. }, GroupElement::Semidirect { .. }) => true,
            (Backend::Product(l, r), GroupElement::Pair(x, y)) => {
                l.validate(x)?;
                r.validate(y)?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(&format!("{g:?}")))
        }
    }

    /// Normal form of `g·h`.
    pub fn op(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        match (&self.backend, g, h) {
            (Backend::Free { rank }, GroupElement::Word(x), GroupElement::Word(y)) => {
                if y.iter().any(|l| l.generator >= *rank) || x.iter().any(|l| l.generator >= *rank)
                {
                    return Err(self.mismatch(&format!("{g:?}·{h:?}")));
                }
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&l.inv()) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Ok(GroupElement::Word(out))
            }
            (Backend::FreeAbelian { rank }, GroupElement::Vector(x), GroupElement::Vector(y))
                if x.len() == *rank as usize && y.len() == *rank as usize =>
            {
                Ok(GroupElement::Vector(
                    x.iter().zip(y).map(|(a, b)| a + b).collect(),
                ))
            }
            (Backend::Table(t), GroupElement::Table(x), GroupElement::Table(y))
                if *x < t.order && *y < t.order =>
            {
                Ok(GroupElement::Table(t.mul(*x, *y)))
            }
            (
                Backend::Semidirect { twist },
                GroupElement::Semidirect { a: m1, b: n1 },
                GroupElement::Semidirect { a: m2, b: n2 },
            ) => Ok(GroupElement::Semidirect {
                a: m1 + twist.power(*n1) * m2,
                b: n1 + n2,
            }),
            (Backend::Product(l, r), GroupElement::Pair(g1, g2), GroupElement::Pair(h1, h2)) => {
                Ok(GroupElement::Pair(
                    Box::new(l.op(g1, h1)?),
                    Box::new(r.op(g2, h2)?),
                ))
            }
            _ => Err(self.mismatch(&format!("{g:?}·{h:?}"))),
        }
    }

    pub fn invert(&self, g: &GroupElement) -> Result<GroupElement> {
        match (&self.backend, g) {
            (Backend::Free { .. }, GroupElement::Word(w)) => {
                self.validate(g)?;
                Ok(GroupElement::Word(w.iter().rev().map(|l| l.inv()).collect()))
            }
            (Backend::FreeAbelian { rank }, GroupElement::Vector(v)) if v.len() == *rank as usize => {
                Ok(GroupElement::Vector(v.iter().map(|x| -x).collect()))
            }
            (Backend::Table(t), GroupElement::Table(x)) if *x < t.order => {
                Ok(GroupElement::Table(t.inverse(*x)))
            }
            (Backend::Semidirect { twist }, GroupElement::Semidirect { a, b }) => {
                Ok(GroupElement::Semidirect {
                    a: -twist.power(*b) * a,
                    b: -b,
                })
            }
            (Backend::Product(l, r), GroupElement::Pair(x, y)) => Ok(GroupElement::Pair(
                Box::new(l.invert(x)?),
                Box::new(r.invert(y)?),
            )),
            _ => Err(self.mismatch(&format!("{g:?}"))),
        }
    }

    /// `f⁻¹ g f`.
    pub fn conjugate(&self, g: &GroupElement, f: &GroupElement) -> Result<GroupElement> {
        let fi = self.invert(f)?;
        self.op(&self.op(&fi, g)?, f)
    }

    /// Word length with respect to the declared generators.
    pub fn length(&self, g: &GroupElement) -> u32 {
        match g {
            GroupElement::Word(w) => w.len() as u32,
            GroupElement::Vector(v) => v.iter().map(|x| x.unsigned_abs() as u32).sum(),
            GroupElement::Table(i) => match &self.backend {
                Backend::Table(t) => t
                    .spellings
                    .get(*i as usize)
                    .map_or(0, |s| s.len() as u32),
                _ => 0,
            },
            GroupElement::Semidirect { a, b } => (a.unsigned_abs() + b.unsigned_abs()) as u32,
            GroupElement::Pair(x, y) => match &self.backend {
                Backend::Product(l, r) => l.length(x) + r.length(y),
                _ => 0,
            },
        }
    }

    /// A geodesic word spelling `g`.
    pub fn spell(&self, g: &GroupElement) -> Result<Vec<Letter>> {
        self.validate(g)?;
        let repeat = |gen: u32, e: i64| {
            core::iter::repeat_n(Letter::new(gen, e < 0), e.unsigned_abs() as usize)
        };
        Ok(match (&self.backend, g) {
            (_, GroupElement::Word(w)) => w.clone(),
            (_, GroupElement::Vector(v)) => v
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| repeat(i as u32, e))
                .collect(),
            (Backend::Table(t), GroupElement::Table(i)) => t.spellings[*i as usize].clone(),
            (_, GroupElement::Semidirect { a, b }) => repeat(0, *a).chain(repeat(1, *b)).collect(),
            (Backend::Product(l, r), GroupElement::Pair(x, y)) => {
                let k = l.generator_count();
                let mut w = l.spell(x)?;
                w.extend(
                    r.spell(y)?
                        .into_iter()
                        .map(|s| Letter::new(s.generator + k, s.inverse)),
                );
                w
            }
            _ => return Err(self.mismatch(&format!("{g:?}"))),
        })
    }

    /// Sort key for shortlex order: length, then the geodesic spelling
    /// compared letter by letter with `a < a⁻¹ < b < b⁻¹ < …`.
    pub fn shortlex_key(&self, g: &GroupElement) -> (u32, Vec<Letter>) {
        (self.length(g), self.spell(g).unwrap_or_default())
    }

    /// Length-then-lex comparison of geodesic spellings.
    pub fn length_lex(&self, g: &GroupElement, h: &GroupElement) -> Ordering {
        self.shortlex_key(g)
            .cmp(&self.shortlex_key(h))
            .then_with(|| g.cmp(h))
    }

    /// All elements of word length at most `radius`, in length-then-lex order.
    pub fn ball(&self, radius: u32) -> Result<Vec<GroupElement>> {
        self.ball_with_cap(radius, DEFAULT_BALL_CAP)
    }

    pub fn ball_with_cap(&self, radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
        let letters: Vec<GroupElement> = self
            .letters()
            .into_iter()
            .map(|l| self.letter(l))
            .collect::<Result<_>>()?;
        let mut seen = BTreeSet::new();
        let mut frontier = vec![self.identity()];
        seen.insert(self.identity());
        for _ in 0..radius {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &letters {
                    let y = self.op(x, s)?;
                    if !seen.contains(&y) {
                        if seen.len() >= cap {
                            return Err(Error::BallCap { radius, cap });
                        }
                        seen.insert(y.clone());
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort_by_cached_key(|g| self.shortlex_key(g));
        Ok(out)
    }

    /// Every element of a finite group, in length-then-lex order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        if !self.is_finite() {
            return Err(Error::NotFinite);
        }
        self.ball(u32::MAX)
    }

    /// The ball of radius `radius`, or the whole group when it is finite.
    pub fn window(&self, radius: u32, cap: usize) -> Result<Vec<GroupElement>> {
        if self.is_finite() {
            self.ball_with_cap(u32::MAX, cap)
        } else {
            self.ball_with_cap(radius, cap)
        }
    }

    pub fn letter_name(&self, l: Letter) -> String {
        let base = self
            .names
            .get(l.generator as usize)
            .cloned()
            .unwrap_or_else(|| format!("s{}", l.generator));
        if l.inverse {
            format!("{base}^-1")
        } else {
            base
        }
    }

    /// Human-readable rendering of an element.
    pub fn display<'a>(&'a self, g: &'a GroupElement) -> Display<'a> {
        Display { ctx: self, g }
    }
}

pub struct Display<'a> {
    ctx: &'a GroupCtx,
    g: &'a GroupElement,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.ctx.backend, self.g) {
            (Backend::Table(_), GroupElement::Table(i)) => write!(f, "#{i}"),
            (Backend::Product(l, r), GroupElement::Pair(x, y)) => {
                write!(f, "({}, {})", l.display(x), r.display(y))
            }
            (Backend::FreeAbelian { .. }, GroupElement::Vector(v)) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
            _ => {
                let word = self.ctx.spell(self.g).map_err(|_| fmt::Error)?;
                if word.is_empty() {
                    return f.write_str("e");
                }
                for (i, l) in word.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(&self.ctx.letter_name(*l))?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;

    fn w(ls: &[i32]) -> GroupElement {
        GroupElement::Word(ls.iter().map(|&v| Letter::try_from(v).unwrap()).collect())
    }

    fn sd(a: i64, b: i64) -> GroupElement {
        GroupElement::Semidirect { a, b }
    }

    #[test]
    fn free_cancellation() {
        let f2 = GroupCtx::free(2);
        assert_eq!(f2.op(&w(&[1]), &w(&[-1])).unwrap(), f2.identity());
        assert_eq!(f2.invert(&w(&[1, 2])).unwrap(), w(&[-2, -1]));
        assert_eq!(f2.op(&w(&[1, 2]), &w(&[-2, 1])).unwrap(), w(&[1, 1]));
    }

    #[test]
    fn abelian_addition() {
        let z2 = GroupCtx::free_abelian(2);
        let g = z2
            .op(&GroupElement::Vector(vec![1, 2]), &GroupElement::Vector(vec![3, -1]))
            .unwrap();
        assert_eq!(g, GroupElement::Vector(vec![4, 1]));
    }

    // Rewriting oracle: push every b past the a's using b^{-1} a b = a^{-1},
    // i.e. b a = a^{-1} b and b^{-1} a = a^{-1} b^{-1}.
    fn klein_rewrite(word: &[(char, i64)]) -> (i64, i64) {
        let (mut a, mut b) = (0i64, 0i64);
        for &(c, e) in word {
            match c {
                'a' => a += if b.rem_euclid(2) == 0 { e } else { -e },
                'b' => b += e,
                _ => unreachable!(),
            }
        }
        (a, b)
    }

    #[test]
    fn klein_conjugation_inverts_a() {
        let k = GroupCtx::klein_bottle();
        let (a, b) = (k.generator(0).unwrap(), k.generator(1).unwrap());
        let c = k.conjugate(&a, &b).unwrap();
        assert_eq!(c, k.invert(&a).unwrap());
        assert_eq!(c, sd(-1, 0));
        let (m, n) = klein_rewrite(&[('b', -1), ('a', 1), ('b', 1)]);
        assert_eq!(c, sd(m, n));
    }

    #[test]
    fn klein_inverse_matches_rewriting() {
        let k = GroupCtx::klein_bottle();
        let ab = k.op(&sd(1, 0), &sd(0, 1)).unwrap();
        let inv = k.invert(&ab).unwrap();
        let (m, n) = klein_rewrite(&[('b', -1), ('a', -1)]);
        assert_eq!(inv, sd(m, n));
        assert_eq!(k.op(&ab, &inv).unwrap(), k.identity());
    }

    #[test]
    fn klein_product_matches_rewriting_on_words() {
        let k = GroupCtx::klein_bottle();
        let words: [&[(char, i64)]; 4] = [
            &[('a', 2), ('b', 1), ('a', -1)],
            &[('b', -3), ('a', 1)],
            &[('b', 1), ('b', 1), ('a', 5), ('b', -1)],
            &[('a', -1), ('b', 2), ('a', 1), ('b', 1), ('a', 1)],
        ];
        for word in words {
            let mut g = k.identity();
            for &(c, e) in word {
                let gen = if c == 'a' { sd(e, 0) } else { sd(0, e) };
                g = k.op(&g, &gen).unwrap();
            }
            let (m, n) = klein_rewrite(word);
            assert_eq!(g, sd(m, n), "{word:?}");
        }
    }

    #[test]
    fn cyclic_inverse() {
        let c3 = GroupCtx::finite(tables::cyclic(3));
        assert_eq!(
            c3.invert(&GroupElement::Table(1)).unwrap(),
            GroupElement::Table(2)
        );
    }

    #[test]
    fn ball_sizes() {
        let f2 = GroupCtx::free(2);
        assert_eq!(f2.ball(1).unwrap().len(), 5);
        assert_eq!(f2.ball(2).unwrap().len(), 17);
        let z = GroupCtx::free_abelian(1);
        let b: Vec<_> = z.ball(2).unwrap();
        let mut vals: Vec<i64> = b
            .iter()
            .map(|g| match g {
                GroupElement::Vector(v) => v[0],
                _ => unreachable!(),
            })
            .collect();
        vals.sort();
        assert_eq!(vals, vec![-2, -1, 0, 1, 2]);
    }

    #[test]
    fn free_ball_formula() {
        for k in 1..=3u64 {
            let ctx = GroupCtx::free(k as u32);
            for r in 0..=4u32 {
                if k == 3 && r == 4 {
                    continue;
                }
                let expected: u64 = 1 + (1..=r as u64)
                    .map(|i| 2 * k * (2 * k - 1).pow(i as u32 - 1))
                    .sum::<u64>();
                assert_eq!(ctx.ball(r).unwrap().len() as u64, expected, "k={k} r={r}");
            }
        }
    }

    #[test]
    fn product_ball_is_additive() {
        let f = GroupCtx::direct_product(GroupCtx::free(2), GroupCtx::free(2));
        let b = f.ball(1).unwrap();
        assert_eq!(b.len(), 9);
        for g in &b {
            assert!(f.length(g) <= 1);
        }
        let g = f.ball(2).unwrap()[7].clone();
        let gi = f.invert(&g).unwrap();
        if let (GroupElement::Pair(x, y), GroupElement::Pair(xi, yi)) = (&g, &gi) {
            assert_eq!(**xi, GroupCtx::free(2).invert(x).unwrap());
            assert_eq!(**yi, GroupCtx::free(2).invert(y).unwrap());
        } else {
            panic!("not a pair");
        }
    }

    #[test]
    fn z_times_z_matches_free_abelian() {
        let zz = GroupCtx::direct_product(GroupCtx::free_abelian(1), GroupCtx::free_abelian(1));
        let z2 = GroupCtx::free_abelian(2);
        let to_pair = |v: &GroupElement| match v {
            GroupElement::Vector(v) => GroupElement::Pair(
                Box::new(GroupElement::Vector(vec![v[0]])),
                Box::new(GroupElement::Vector(vec![v[1]])),
            ),
            _ => unreachable!(),
        };
        let ball = z2.ball(2).unwrap();
        for g in &ball {
            for h in &ball {
                assert_eq!(
                    to_pair(&z2.op(g, h).unwrap()),
                    zz.op(&to_pair(g), &to_pair(h)).unwrap()
                );
            }
        }
        assert_eq!(zz.ball(3).unwrap().len(), z2.ball(3).unwrap().len());
    }

    #[test]
    fn ball_cap_errors() {
        let f2 = GroupCtx::free(2);
        assert_eq!(
            f2.ball_with_cap(3, 20),
            Err(Error::BallCap { radius: 3, cap: 20 })
        );
    }

    #[test]
    fn mismatch_is_an_error() {
        let f2 = GroupCtx::free(2);
        assert!(matches!(
            f2.op(&GroupElement::Table(0), &f2.identity()),
            Err(Error::BackendMismatch { .. })
        ));
        assert!(f2.op(&w(&[3]), &w(&[1])).is_err());
    }

    #[test]
    fn bad_tables_rejected() {
        assert!(FiniteTable::new(2, vec![0, 1, 1, 1], vec![1]).is_err());
        assert!(FiniteTable::new(2, vec![0, 1, 1, 0], vec![]).is_err());
        assert!(FiniteTable::new(2, vec![0, 1, 1, 0], vec![1]).is_ok());
        // latin square with identity that is not associative
        let quasi = vec![
            0, 1, 2, 3, 4, //
            1, 0, 3, 4, 2, //
            2, 4, 0, 1, 3, //
            3, 2, 4, 0, 1, //
            4, 3, 1, 2, 0,
        ];
        assert!(matches!(
            FiniteTable::new(5, quasi, vec![1, 2]),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn spellings_are_geodesic_words() {
        let ctxs = [
            GroupCtx::free(2),
            GroupCtx::free_abelian(2),
            GroupCtx::klein_bottle(),
            GroupCtx::finite(tables::symmetric3()),
            GroupCtx::direct_product(GroupCtx::klein_bottle(), GroupCtx::free(1)),
        ];
        for ctx in &ctxs {
            for g in ctx.ball(3).unwrap() {
                let word = ctx.spell(&g).unwrap();
                assert_eq!(word.len() as u32, ctx.length(&g));
                let mut acc = ctx.identity();
                for l in word {
                    acc = ctx.op(&acc, &ctx.letter(l).unwrap()).unwrap();
                }
                assert_eq!(acc, g);
            }
        }
    }
}
