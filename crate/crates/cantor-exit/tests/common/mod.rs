//! Shared test oracles, independent of the library paths they check.

use cantor_exit::QuadraticPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Naive double-loop enumeration of `a p^2 + b p 3^n + c 3^{2n} = u` with
/// `0 < |u| <= u_max`, `n <= n_max`. The `p` range comes from the Cauchy
/// root bound: `|p| > (H+1) 3^n + u_max` forces `|u| > u_max`.
pub fn naive_bounded_norm(
    a: i64,
    b: i64,
    c: i64,
    h: i64,
    u_max: i64,
    n_max: u32,
) -> BTreeSet<(u32, i128, i128)> {
    let mut out = BTreeSet::new();
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let mut q: i128 = 1;
    for n in 0..=n_max {
        let p_bound = (h as i128 + 1) * q + u_max as i128;
        for p in -p_bound..=p_bound {
            let u = a * p * p + b * p * q + c * q * q;
            if u != 0 && u.abs() <= u_max as i128 {
                out.insert((n, p, u));
            }
        }
        q *= 3;
    }
    out
}

/// Deterministic polynomial corpus of a given size with height at most
/// `h_max` (leading coefficient normalized positive).
pub fn seeded_polys(h_max: i64, count: usize, seed: u64) -> Vec<(i64, i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    while out.len() < count {
        let a = rng.gen_range(1..=h_max);
        let b = rng.gen_range(-h_max..=h_max);
        let c = rng.gen_range(-h_max..=h_max);
        if QuadraticPoly::from_i64(a, b, c).is_ok() && seen.insert((a, b, c)) {
            out.push((a, b, c));
        }
    }
    out
}
