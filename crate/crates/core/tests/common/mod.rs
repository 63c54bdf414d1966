#![allow(dead_code)]

use lineorder_core::group::{GroupCtx, GroupElement};
use lineorder_core::gset::{GSet, PointTag};
use lineorder_core::oracle::{Mode, PositiveCone};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Extends generator permutations along geodesic spellings and checks the
/// result is a right action of the finite group.
pub fn action_if_homomorphism(ctx: &GroupCtx, gens: &[Vec<usize>]) -> Option<GSet> {
    let n = gens.first().map_or(0, |g| g.len());
    let apply = |x: usize, g: &GroupElement| -> usize {
        ctx.spell(g).unwrap().iter().fold(x, |y, l| {
            let p = &gens[l.generator as usize];
            if l.inverse {
                p.iter().position(|&z| z == y).unwrap()
            } else {
                p[y]
            }
        })
    };
    let elements = ctx.elements().unwrap();
    for g in &elements {
        for h in &elements {
            let gh = ctx.op(g, h).unwrap();
            for x in 0..n {
                if apply(x, &gh) != apply(apply(x, g), h) {
                    return None;
                }
            }
        }
    }
    let arrays = gens
        .iter()
        .map(|p| p.iter().map(|&y| Some(y)).collect())
        .collect();
    let points = (0..n).map(PointTag::Index).collect();
    Some(GSet::from_generator_arrays(ctx.clone(), points, arrays, false).unwrap())
}

/// Every action of the group on `n` points.
pub fn all_actions(ctx: &GroupCtx, n: usize) -> Vec<GSet> {
    let perms = permutations(n);
    let k = ctx.generator_count() as usize;
    let mut out = Vec::new();
    let mut idx = vec![0usize; k];
    loop {
        let gens: Vec<Vec<usize>> = idx.iter().map(|&i| perms[i].clone()).collect();
        if let Some(x) = action_if_homomorphism(ctx, &gens) {
            out.push(x);
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < perms.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

pub fn random_action(ctx: &GroupCtx, n: usize, rng: &mut impl Rng) -> GSet {
    let k = ctx.generator_count() as usize;
    loop {
        let gens: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut p: Vec<usize> = (0..n).collect();
                p.shuffle(rng);
                p
            })
            .collect();
        if let Some(x) = action_if_homomorphism(ctx, &gens) {
            return x;
        }
    }
}

/// Whether some total order on the points is invariant, by trying all of them.
pub fn brute_force_orderable(x: &GSet) -> bool {
    let n = x.len();
    let letters = x.ctx().letters();
    permutations(n).into_iter().any(|rank| {
        letters.iter().all(|&l| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    if rank[a] >= rank[b] {
                        return true;
                    }
                    let (sa, sb) = (x.act_letter(a, l).unwrap(), x.act_letter(b, l).unwrap());
                    rank[sa] < rank[sb]
                })
            })
        })
    })
}

pub fn acts_trivially(x: &GSet) -> bool {
    x.ctx()
        .letters()
        .iter()
        .all(|&l| (0..x.len()).all(|p| x.act_letter(p, l) == Some(p)))
}

/// Whether some sign assignment on `ball(r) ∖ {e}` passes the cone checker,
/// by enumerating all of them.
pub fn brute_force_cone_exists(ctx: &GroupCtx, r: u32, mode: Mode) -> bool {
    let ball = ctx.ball(r).unwrap();
    let mut reps = Vec::new();
    for g in &ball {
        if ctx.is_identity(g) {
            continue;
        }
        let gi = ctx.invert(g).unwrap();
        if gi == *g {
            return false;
        }
        if !reps.iter().any(|(_, h)| *h == *g) {
            reps.push((g.clone(), gi));
        }
    }
    assert!(reps.len() <= 20, "brute force over {} pairs", reps.len());
    (0u64..1 << reps.len()).any(|mask| {
        let members = reps
            .iter()
            .enumerate()
            .map(|(i, (g, gi))| if mask >> i & 1 == 0 { g.clone() } else { gi.clone() });
        let cone = PositiveCone::new(ctx, r, members, mode).unwrap();
        cone.check_axioms().unwrap().passes()
    })
}
