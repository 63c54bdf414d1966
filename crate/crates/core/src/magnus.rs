//! The Magnus bi-order on a free group.
//!
//! A reduced word is sent to the truncated power series obtained from
//! `xᵢ ↦ 1 + Xᵢ` and `xᵢ⁻¹ ↦ 1 − Xᵢ + Xᵢ² − …` in noncommuting variables with
//! integer coefficients. The word is positive when the lowest monomial of
//! `series − 1` in graded-lexicographic order (`X₁ < … < Xₙ`) has a positive
//! coefficient. Truncating at the letter count of the word always reaches a
//! nonzero term, so the comparison never needs more than that.

use alloc::{collections::BTreeMap, vec, vec::Vec};
use core::cmp::Ordering;

use crate::group::{Backend, GroupCtx, GroupElement, Letter};
use crate::oracle::{Invariance, OrderOracle};

/// Homogeneous parts of a truncated series, indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    parts: Vec<BTreeMap<Vec<u8>, i128>>,
}

impl TruncatedSeries {
    fn one(max_degree: usize) -> Self {
        let mut parts = vec![BTreeMap::new(); max_degree + 1];
        parts[0].insert(Vec::new(), 1);
        TruncatedSeries { parts }
    }

    pub fn max_degree(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn coefficient(&self, monomial: &[u8]) -> i128 {
        self.parts
            .get(monomial.len())
            .and_then(|p| p.get(monomial))
            .copied()
            .unwrap_or(0)
    }

    /// Multiplies on the right by the image of one letter.
    fn mul_letter(&mut self, l: Letter) {
        let var = l.generator as u8;
        let top = self.max_degree();
        let mut out = vec![BTreeMap::new(); top + 1];
        for (d, part) in self.parts.iter().enumerate() {
            for (mono, &c) in part {
                if c == 0 {
                    continue;
                }
                // X^k with coefficient 1 for k ≤ 1 (positive letter) or (-1)^k (inverse)
                let max_k = if l.inverse { top - d } else { (top - d).min(1) };
                let mut m = mono.clone();
                for k in 0..=max_k {
                    let sign = if l.inverse && k % 2 == 1 { -1 } else { 1 };
                    let entry = out[d + k].entry(m.clone()).or_insert(0i128);
                    *entry = entry
                        .checked_add(sign * c)
                        .expect("Magnus coefficient overflow");
                    m.push(var);
                }
            }
        }
        for part in &mut out {
            part.retain(|_, c| *c != 0);
        }
        self.parts = out;
    }

    /// Expansion of a word truncated at `max_degree`.
    pub fn of_word(word: &[Letter], max_degree: usize) -> Self {
        let mut s = Self::one(max_degree);
        for &l in word {
            s.mul_letter(l);
        }
        s
    }

    /// Lowest nonzero monomial of positive degree, graded then lexicographic.
    pub fn leading_term(&self) -> Option<(&[u8], i128)> {
        self.parts
            .iter()
            .skip(1)
            .find_map(|p| p.iter().next().map(|(m, &c)| (m.as_slice(), c)))
    }
}

/// Sign of a reduced word in the Magnus order: `Greater` means positive.
pub fn magnus_sign(word: &[Letter]) -> Ordering {
    let cap = word.len();
    let mut degree = 1;
    while degree <= cap {
        // coefficients up to `degree` are exact at this truncation
        let series = TruncatedSeries::of_word(word, degree);
        if let Some((_, c)) = series.leading_term() {
            return c.cmp(&0);
        }
        if degree == cap {
            break;
        }
        degree = (degree * 2).min(cap);
    }
    Ordering::Equal
}

/// The Magnus order on `FreeGroup(n)`; bi-invariant.
#[derive(Clone, Debug)]
pub struct MagnusOrder {
    ctx: GroupCtx,
}

impl MagnusOrder {
    pub fn new(ctx: &GroupCtx) -> crate::Result<Self> {
        match ctx.backend() {
            Backend::Free { rank } if *rank >= 1 && *rank <= 255 => Ok(MagnusOrder { ctx: ctx.clone() }),
            _ => Err(crate::Error::InvalidGroup(
                "the Magnus order needs a free group of rank 1..=255".into(),
            )),
        }
    }

    pub fn sign(&self, g: &GroupElement) -> Option<Ordering> {
        match g {
            GroupElement::Word(w) => Some(magnus_sign(w)),
            _ => None,
        }
    }
}

impl OrderOracle for MagnusOrder {
    fn ctx(&self) -> &GroupCtx {
        &self.ctx
    }

    fn invariance(&self) -> Invariance {
        Invariance::Bi
    }

    fn compare(&self, g: &GroupElement, h: &GroupElement) -> Option<Ordering> {
        let d = self.ctx.op(g, &self.ctx.invert(h).ok()?).ok()?;
        self.sign(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ls: &[i32]) -> Vec<Letter> {
        ls.iter().map(|&v| Letter::try_from(v).unwrap()).collect()
    }

    #[test]
    fn single_letters() {
        assert_eq!(magnus_sign(&w(&[1])), Ordering::Greater);
        assert_eq!(magnus_sign(&w(&[-1])), Ordering::Less);
        assert_eq!(magnus_sign(&w(&[])), Ordering::Equal);
        let s = TruncatedSeries::of_word(&w(&[1]), 1);
        assert_eq!(s.coefficient(&[0]), 1);
    }

    #[test]
    fn commutator_expansion() {
        // a b a^-1 b^-1 = 1 + (AB - BA) + higher
        let s = TruncatedSeries::of_word(&w(&[1, 2, -1, -2]), 2);
        assert_eq!(s.coefficient(&[0]), 0);
        assert_eq!(s.coefficient(&[1]), 0);
        assert_eq!(s.coefficient(&[0, 0]), 0);
        assert_eq!(s.coefficient(&[0, 1]), 1);
        assert_eq!(s.coefficient(&[1, 0]), -1);
        assert_eq!(s.coefficient(&[1, 1]), 0);
        assert_eq!(s.leading_term(), Some((&[0u8, 1][..], 1)));
        assert_eq!(magnus_sign(&w(&[1, 2, -1, -2])), Ordering::Greater);
    }

    #[test]
    fn inverse_letter_series() {
        let s = TruncatedSeries::of_word(&w(&[-2]), 4);
        for k in 0..=4usize {
            let mono = vec![1u8; k];
            assert_eq!(s.coefficient(&mono), if k % 2 == 0 { 1 } else { -1 });
        }
        // a a^-1 = 1 exactly
        let s = TruncatedSeries::of_word(&w(&[1, -1]), 6);
        assert_eq!(s.leading_term(), None);
    }

    #[test]
    fn oracle_compares_via_quotient() {
        let ctx = GroupCtx::free(2);
        let m = MagnusOrder::new(&ctx).unwrap();
        let a = GroupElement::Word(w(&[1]));
        let aa = ctx.op(&a, &GroupElement::Word(w(&[-1]))).unwrap();
        assert_eq!(m.compare(&a, &ctx.identity()), Some(Ordering::Greater));
        assert_eq!(m.compare(&aa, &ctx.identity()), Some(Ordering::Equal));
        assert!(MagnusOrder::new(&GroupCtx::free_abelian(2)).is_err());
    }
}
