//! Documents shared by jobs and certificates: group definitions, element
//! words, G-set windows and exact rationals.

use std::str::FromStr;

use lineorder_core::group::{Backend, FiniteTable, Twist};
use lineorder_core::gset::{
    make_biregular_with_cap, make_coset, make_conjugation, make_regular_with_cap, make_trivial,
    GSet, PointTag,
};
use lineorder_core::realization::Height;
use lineorder_core::{standard, GroupCtx, GroupElement, Letter};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwistDef {
    Plus,
    Minus,
}

/// A group by backend tag. `names` overrides the default generator names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDef {
    Free {
        rank: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    FreeAbelian {
        rank: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    /// `⟨a, b | b⁻¹ab = a^±1⟩`.
    Semidirect {
        twist: TwistDef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    /// Row-major Cayley table over `0..order`.
    Table {
        order: u32,
        table: Vec<u32>,
        generators: Vec<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        names: Option<Vec<String>>,
    },
    Product {
        left: Box<GroupDef>,
        right: Box<GroupDef>,
    },
    /// One of the bundled examples: Z, Z2, Z3, F2, K, Z+Z, C2..C6, V4, S3,
    /// D4, Q8.
    Named { name: String },
}

impl GroupDef {
    pub fn build(&self) -> Result<GroupCtx> {
        let named = |ctx: GroupCtx, names: &Option<Vec<String>>| match names {
            Some(n) => Ok(ctx.with_names(n.clone())?),
            None => Ok(ctx),
        };
        match self {
            GroupDef::Free { rank, names } => named(GroupCtx::free(*rank), names),
            GroupDef::FreeAbelian { rank, names } => named(GroupCtx::free_abelian(*rank), names),
            GroupDef::Semidirect { twist, names } => {
                let t = match twist {
                    TwistDef::Plus => Twist::Plus,
                    TwistDef::Minus => Twist::Minus,
                };
                named(GroupCtx::semidirect(t), names)
            }
            GroupDef::Table {
                order,
                table,
                generators,
                names,
            } => {
                let t = FiniteTable::new(*order, table.clone(), generators.clone())?;
                named(GroupCtx::finite(t), names)
            }
            GroupDef::Product { left, right } => {
                Ok(GroupCtx::direct_product(left.build()?, right.build()?))
            }
            GroupDef::Named { name } => standard::group(name)
                .ok_or_else(|| Error::Input(format!("group.name: unknown group `{name}`"))),
        }
    }

    /// The explicit definition of a context, as stored in certificates.
    pub fn of(ctx: &GroupCtx) -> GroupDef {
        let names = Some(ctx.names().to_vec());
        match ctx.backend() {
            Backend::Free { rank } => GroupDef::Free { rank: *rank, names },
            Backend::FreeAbelian { rank } => GroupDef::FreeAbelian { rank: *rank, names },
            Backend::Semidirect { twist } => GroupDef::Semidirect {
                twist: match twist {
                    Twist::Plus => TwistDef::Plus,
                    Twist::Minus => TwistDef::Minus,
                },
                names,
            },
            Backend::Table(t) => GroupDef::Table {
                order: t.order(),
                table: t.table().to_vec(),
                generators: t.generators().to_vec(),
                names,
            },
            Backend::Product(l, r) => GroupDef::Product {
                left: Box::new(GroupDef::of(l)),
                right: Box::new(GroupDef::of(r)),
            },
        }
    }
}

/// Parses a word in the generator names: space-separated factors, each a
/// name with an optional integer exponent (`a b^-1 a^2`). `e` or an empty
/// string is the identity unless `e` names a generator.
pub fn parse_element(ctx: &GroupCtx, word: &str) -> Result<GroupElement> {
    let mut g = ctx.identity();
    for token in word.split_whitespace() {
        let (name, exp) = match token.rsplit_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::Input(format!("bad exponent in `{token}`")))?;
                (n, e)
            }
            None => (token, 1),
        };
        let Some(i) = ctx.names().iter().position(|n| n == name) else {
            if name == "e" || name == "1" {
                continue;
            }
            return Err(Error::Input(format!("`{name}` is not a generator name")));
        };
        let l = ctx.letter(Letter::new(i as u32, exp < 0))?;
        for _ in 0..exp.unsigned_abs() {
            g = ctx.op(&g, &l)?;
        }
    }
    Ok(g)
}

/// Exact rational as decimal numerator and positive denominator strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rat {
    pub num: String,
    pub den: String,
}

impl From<&Height> for Rat {
    fn from(h: &Height) -> Self {
        Rat {
            num: h.numer().to_string(),
            den: h.denom().to_string(),
        }
    }
}

impl Rat {
    /// Parses the fraction; the denominator must be positive.
    pub fn to_height(&self) -> Result<Height> {
        let parse = |s: &str| {
            BigInt::from_str(s).map_err(|_| Error::Malformed(format!("`{s}` is not an integer")))
        };
        let (n, d) = (parse(&self.num)?, parse(&self.den)?);
        if d <= BigInt::from(0) {
            return Err(Error::Malformed(format!("denominator {d} is not positive")));
        }
        Ok(Height::new(n, d))
    }

    pub fn display(&self) -> String {
        if self.den == "1" {
            self.num.clone()
        } else {
            format!("{}/{}", self.num, self.den)
        }
    }
}

/// A window to build from the group: the radius comes from the job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GSetSpec {
    Trivial,
    Regular,
    Conjugation,
    Biregular,
    /// Right cosets of the subgroup generated by the listed words.
    Coset { subgroup: Vec<String> },
    /// Images of the positive generators, `-1` for out of window.
    Explicit {
        action: Vec<Vec<i64>>,
        #[serde(default)]
        truncated: bool,
    },
}

impl GSetSpec {
    pub fn build(&self, ctx: &GroupCtx, radius: u32, max_ball: usize) -> Result<GSet> {
        Ok(match self {
            GSetSpec::Trivial => make_trivial(ctx),
            GSetSpec::Regular => make_regular_with_cap(ctx, radius, max_ball)?,
            GSetSpec::Conjugation => {
                ctx.ball_with_cap(radius, max_ball)?;
                make_conjugation(ctx, radius)?
            }
            GSetSpec::Biregular => make_biregular_with_cap(ctx, radius, max_ball)?,
            GSetSpec::Coset { subgroup } => {
                let h = subgroup
                    .iter()
                    .map(|w| parse_element(ctx, w))
                    .collect::<Result<Vec<_>>>()?;
                make_coset(ctx, &h)?
            }
            GSetSpec::Explicit { action, truncated } => {
                let n = action.first().map_or(0, Vec::len);
                let points = (0..n).map(PointTag::Index).collect();
                GSet::from_generator_arrays(ctx.clone(), points, decode_action(action, n)?, *truncated)?
            }
        })
    }
}

fn decode_action(action: &[Vec<i64>], n: usize) -> Result<Vec<Vec<Option<usize>>>> {
    action
        .iter()
        .enumerate()
        .map(|(s, row)| {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "action row {s} has {} entries, expected {n}",
                    row.len()
                )));
            }
            row.iter()
                .map(|&y| match y {
                    -1 => Ok(None),
                    y if y >= 0 && (y as usize) < n => Ok(Some(y as usize)),
                    y => Err(Error::Input(format!("action row {s}: image {y} out of range"))),
                })
                .collect()
        })
        .collect()
}

/// A G-set as stored in certificates: its group, point tags by carrier id,
/// and one image array per positive generator with `-1` for out of window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDoc {
    pub group: GroupDef,
    pub points: Vec<PointTag>,
    pub action: Vec<Vec<i64>>,
    pub truncated: bool,
}

impl GSetDoc {
    pub fn of(x: &GSet) -> GSetDoc {
        GSetDoc {
            group: GroupDef::of(x.ctx()),
            points: x.points().to_vec(),
            action: x
                .generator_arrays()
                .into_iter()
                .map(|row| row.into_iter().map(|y| y.map_or(-1, |y| y as i64)).collect())
                .collect(),
            truncated: x.is_truncated(),
        }
    }

    pub fn build(&self) -> Result<GSet> {
        let ctx = self.group.build()?;
        let arrays = decode_action(&self.action, self.points.len())?;
        Ok(GSet::from_generator_arrays(
            ctx,
            self.points.clone(),
            arrays,
            self.truncated,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_parse() {
        let f2 = GroupCtx::free(2);
        let g = parse_element(&f2, "a b^-1 a^2").unwrap();
        let (a, b) = (Letter::positive(0), Letter::positive(1));
        assert_eq!(f2.spell(&g).unwrap(), vec![a, b.inv(), a, a]);
        assert!(f2.is_identity(&parse_element(&f2, "a a^-1").unwrap()));
        assert!(f2.is_identity(&parse_element(&f2, "e").unwrap()));
        assert!(parse_element(&f2, "c").is_err());
    }

    #[test]
    fn group_defs_round_trip() {
        for (name, ctx) in standard::groups() {
            let def = GroupDef::of(&ctx);
            assert_eq!(def.build().unwrap(), ctx, "{name}");
            let json = serde_json::to_string(&def).unwrap();
            assert_eq!(serde_json::from_str::<GroupDef>(&json).unwrap(), def);
        }
        let p = GroupCtx::direct_product(GroupCtx::free(1), GroupCtx::free_abelian(1));
        assert_eq!(GroupDef::of(&p).build().unwrap(), p);
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = r#"{"backend":"free","rank":2,"colour":1}"#;
        let err = serde_json::from_str::<GroupDef>(bad).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
    }

    #[test]
    fn rationals() {
        let h = Height::new(BigInt::from(-3), BigInt::from(6));
        let r = Rat::from(&h);
        assert_eq!((r.num.as_str(), r.den.as_str()), ("-1", "2"));
        assert_eq!(r.to_height().unwrap(), h);
        let zero_den = Rat {
            num: "1".into(),
            den: "0".into(),
        };
        assert!(zero_den.to_height().is_err());
    }

    #[test]
    fn gset_docs_round_trip() {
        let k = GroupCtx::klein_bottle();
        let x = make_regular_with_cap(&k, 2, 1000).unwrap();
        let doc = GSetDoc::of(&x);
        assert_eq!(doc.build().unwrap(), x);
        assert!(doc.action.iter().flatten().any(|&y| y == -1));
    }
}
