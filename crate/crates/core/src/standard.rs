//! Named example groups and the small G-set windows built from them.

use alloc::{format, string::String, vec::Vec};

use crate::error::Result;
use crate::group::{GroupCtx, Twist};
use crate::gset::{make_biregular, make_conjugation, make_coset, make_regular, make_trivial, GSet};
use crate::tables;

/// Infinite example groups by name.
pub fn infinite_groups() -> Vec<(&'static str, GroupCtx)> {
    alloc::vec![
        ("Z", GroupCtx::free_abelian(1)),
        ("Z2", GroupCtx::free_abelian(2)),
        ("Z3", GroupCtx::free_abelian(3)),
        ("F2", GroupCtx::free(2)),
        ("K", GroupCtx::klein_bottle()),
        ("Z+Z", GroupCtx::semidirect(Twist::Plus)),
    ]
}

/// Every named group: the infinite examples and the bundled tables.
pub fn groups() -> Vec<(String, GroupCtx)> {
    let mut out: Vec<(String, GroupCtx)> = infinite_groups()
        .into_iter()
        .map(|(n, g)| (n.into(), g))
        .collect();
    for (n, t) in tables::bundled() {
        out.push((n.into(), GroupCtx::finite(t)));
    }
    out
}

pub fn group(name: &str) -> Option<GroupCtx> {
    groups().into_iter().find(|(n, _)| n == name).map(|(_, g)| g)
}

/// Regular, conjugation, biregular, coset and trivial windows of the named
/// groups with at most `max_vertices` points, labelled for reporting.
pub fn windows(max_vertices: usize) -> Result<Vec<(String, GSet)>> {
    let mut out = Vec::new();
    for (name, ctx) in groups() {
        out.push((format!("{name} trivial"), make_trivial(&ctx)));
        let finite = ctx.is_finite();
        for r in 0.. {
            let size = ctx.ball(r)?.len();
            if size > max_vertices {
                break;
            }
            out.push((format!("{name} regular r={r}"), make_regular(&ctx, r)?));
            out.push((format!("{name} conjugation r={r}"), make_conjugation(&ctx, r)?));
            out.push((format!("{name} biregular r={r}"), make_biregular(&ctx, r)?));
            if finite {
                break;
            }
        }
        if finite {
            for h in ctx.elements()? {
                if ctx.is_identity(&h) {
                    continue;
                }
                let x = make_coset(&ctx, core::slice::from_ref(&h))?;
                if x.len() <= max_vertices {
                    out.push((format!("{name} cosets of <{}>", ctx.display(&h)), x));
                }
            }
        }
    }
    Ok(out)
}
