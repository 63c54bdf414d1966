//! Bundled Cayley tables of small finite groups.
//!
//! Products are read left to right: for permutation groups `gh` applies `g`
//! first, matching right actions.

use alloc::{vec, vec::Vec};

use crate::group::FiniteTable;

fn build(order: u32, mul: impl Fn(u32, u32) -> u32, generators: Vec<u32>) -> FiniteTable {
    let table = (0..order)
        .flat_map(|x| (0..order).map(move |y| (x, y)))
        .map(|(x, y)| mul(x, y))
        .collect();
    FiniteTable::new(order, table, generators).expect("bundled table is a group")
}

/// `ℤ/n`, generated by `1`.
pub fn cyclic(n: u32) -> FiniteTable {
    assert!(n >= 1);
    let gens = if n > 1 { vec![1] } else { vec![] };
    build(n, |x, y| (x + y) % n, gens)
}

/// `ℤ/2 × ℤ/2` as xor on `{0, 1, 2, 3}`, generated by `1` and `2`.
pub fn klein_four() -> FiniteTable {
    build(4, |x, y| x ^ y, vec![1, 2])
}

/// Permutations of `{0, 1, 2}` listed by their image tuples in lexicographic
/// order: `0 = id, 1 = (2 3), 2 = (1 2), 3 = (1 2 3), 4 = (1 3 2), 5 = (1 3)`
/// in one-based cycle notation. Generated by `(1 2)` and `(2 3)`.
pub fn symmetric3() -> FiniteTable {
    let perms = permutations3();
    let index = |p: [u32; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
    build(
        6,
        |x, y| {
            let (g, h) = (perms[x as usize], perms[y as usize]);
            index([h[g[0] as usize], h[g[1] as usize], h[g[2] as usize]])
        },
        vec![2, 1],
    )
}

fn permutations3() -> Vec<[u32; 3]> {
    vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ]
}

/// Dihedral group of order `2n`: index `k + n·f` stands for `r^k s^f`.
pub fn dihedral(n: u32) -> FiniteTable {
    assert!(n >= 2);
    build(
        2 * n,
        |x, y| {
            let (a, f) = (x % n, x / n);
            let (b, g) = (y % n, y / n);
            let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
            k + n * ((f + g) % 2)
        },
        vec![1, n],
    )
}

/// Quaternion group: `0 = 1, 1 = -1, 2 = i, 3 = -i, 4 = j, 5 = -j, 6 = k,
/// 7 = -k`, generated by `i` and `j`.
pub fn quaternion() -> FiniteTable {
    // unit * unit -> (negate, unit), units 0=1, 1=i, 2=j, 3=k
    const UNIT: [[(bool, u32); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    build(
        8,
        |x, y| {
            let (ux, sx) = (x / 2, x % 2 == 1);
            let (uy, sy) = (y / 2, y % 2 == 1);
            let (neg, u) = UNIT[ux as usize][uy as usize];
            2 * u + u32::from(sx ^ sy ^ neg)
        },
        vec![2, 4],
    )
}

/// The nontrivial groups shipped with the crate, with short names.
pub fn bundled() -> Vec<(&'static str, FiniteTable)> {
    vec![
        ("C2", cyclic(2)),
        ("C3", cyclic(3)),
        ("C4", cyclic(4)),
        ("C5", cyclic(5)),
        ("C6", cyclic(6)),
        ("V4", klein_four()),
        ("S3", symmetric3()),
        ("D4", dihedral(4)),
        ("Q8", quaternion()),
    ]
}
