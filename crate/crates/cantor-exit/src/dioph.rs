//! Forced triadic approximants, quadratic-form values at 3-power
//! arguments, and bounded-norm equation enumeration.
//!
//! The enumeration is brute force over a configurable exponent range:
//! effective finiteness theory is replaced by exhaustive search up to
//! `n_max`, and no completeness beyond `n_max` is claimed.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::orbit::{classify_deep, OrbitError, OrbitRecord};
use crate::poly::QuadraticPoly;
use crate::surd::QuadraticSurd;
use crate::util::{map_collect, ratio, three_pow};

/// The digit-forced rational `p/q` with `q = 3^{N+1}`, `p = 3⌊3^N α⌋ + 2`;
/// always `p ≡ 2 (mod 3)`, so `gcd(p, q) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriadicApproximant {
    pub n: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// Builds the approximant at index `n`. When `θ_n ∈ R` the exact identity
/// `α - p/q = (θ_n - 2/3) / 3^n` holds and is asserted.
pub fn forced_approximant(alpha: &QuadraticSurd, n: usize) -> TriadicApproximant {
    let scaled = alpha.mul_pow3(n);
    let floor = scaled.floor();
    let p = BigInt::from(3) * &floor + BigInt::from(2);
    let q = three_pow(n + 1);
    let theta_n = scaled.sub_rational(&BigRational::from(floor));
    if theta_n.compare_to_rational(&ratio(2, 3)) != Ordering::Less {
        let lhs = alpha.sub_rational(&BigRational::new(p.clone(), q.clone()));
        let rhs = theta_n
            .sub_rational(&ratio(2, 3))
            .scale(&BigRational::new(BigInt::from(1), three_pow(n)));
        assert_eq!(lhs, rhs, "forced-approximation identity");
    }
    TriadicApproximant { n, p, q }
}

/// `a p^2 + b p q + c q^2`, the value of the form at `(p, q)`.
pub fn norm_value(f: &QuadraticPoly, p: &BigInt, q: &BigInt) -> BigInt {
    f.a() * p * p + f.b() * p * q + f.c() * q * q
}

#[derive(Debug, Clone)]
pub struct AnBoundEntry {
    pub n: usize,
    pub a_n: BigInt,
    /// `0 < |A_N| ≤ 5 H^2 q_N (θ_N - 2/3)`, exact surd comparison.
    pub main_ok: bool,
    /// For transitions with run length `k`: `|A_N| · 3^k ≤ 5 H^2 3^N`.
    pub run_ok: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct AnBoundReport {
    pub entries: Vec<AnBoundEntry>,
}

impl AnBoundReport {
    pub fn all_ok(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.main_ok && e.run_ok.unwrap_or(true))
    }
}

/// Checks the small-form-value bound at every R-visit, with the
/// run-length corollary at every transition. Violations are reported as
/// findings against the absolute constant 5, never panicked.
pub fn an_bound_check(f: &QuadraticPoly, rec: &OrbitRecord) -> Result<AnBoundReport, OrbitError> {
    rec.require_complete()?;
    let h2 = f.height() * f.height();
    let two_thirds = ratio(2, 3);
    let mut entries = Vec::new();
    for &n in &rec.r_visits {
        let ap = forced_approximant(&rec.alpha, n);
        let a_n = norm_value(f, &ap.p, &ap.q);
        let delta = rec.points[n].sub_rational(&two_thirds);
        let bound = delta.scale(&BigRational::from(BigInt::from(5) * &h2 * &ap.q));
        let main_ok = !a_n.is_zero()
            && bound.compare_to_rational(&BigRational::from(a_n.abs())) != Ordering::Less;
        let run_ok = rec
            .l_run_lengths
            .get(&n)
            .filter(|k| **k >= 1)
            .map(|&k| a_n.abs() * three_pow(k) <= BigInt::from(5) * &h2 * three_pow(n));
        entries.push(AnBoundEntry {
            n,
            a_n,
            main_ok,
            run_ok,
        });
    }
    Ok(AnBoundReport { entries })
}

/// Integer solution of `a p^2 + b p 3^n + c 3^{2n} = u`. Ordered by
/// `(n, p, u)` for deterministic merges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BoundedNormSolution {
    pub n: u32,
    pub p: BigInt,
    pub u: BigInt,
}

/// Enumerates every `(p, n, u)` with `0 < |u| ≤ u_max`, `0 ≤ n ≤ n_max`
/// solving the form equation, via the quadratic formula in `p`: a root is
/// an integer iff `Δ_f 3^{2n} + 4au` is a perfect square and the numerator
/// is divisible by `2a`.
pub fn solve_bounded_norm(
    f: &QuadraticPoly,
    u_max: u64,
    n_max: u32,
) -> Vec<BoundedNormSolution> {
    assert!(u_max >= 1, "u_max must be positive");
    let ns: Vec<u32> = (0..=n_max).collect();
    let groups = map_collect(&ns, |&n| {
        let q = three_pow(n as usize);
        let q2 = &q * &q;
        let two_a = BigInt::from(2) * f.a();
        let mut out = Vec::new();
        for u_abs in 1..=u_max {
            for u in [BigInt::from(u_abs), -BigInt::from(u_abs)] {
                let disc = f.discriminant() * &q2 + BigInt::from(4) * f.a() * &u;
                if disc.is_negative() {
                    continue;
                }
                let s = disc.sqrt();
                if &s * &s != disc {
                    continue;
                }
                let mut roots = vec![s.clone()];
                if !s.is_zero() {
                    roots.push(-s);
                }
                for t in roots {
                    let num = -(f.b() * &q) + t;
                    if num.is_multiple_of(&two_a) {
                        out.push(BoundedNormSolution {
                            n,
                            p: num / &two_a,
                            u: u.clone(),
                        });
                    }
                }
            }
        }
        out
    });
    let mut all: Vec<BoundedNormSolution> = groups.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    all
}

/// The completed-square identity `(2ap + b 3^n)^2 - Δ_f 3^{2n} = 4au`;
/// false signals an enumeration bug or a corrupted solution.
pub fn discriminant_identity_check(f: &QuadraticPoly, sol: &BoundedNormSolution) -> bool {
    let q = three_pow(sol.n as usize);
    let z = BigInt::from(2) * f.a() * &sol.p + f.b() * &q;
    &z * &z - f.discriminant() * &q * &q == BigInt::from(4) * f.a() * &sol.u
}

#[derive(Debug, Clone)]
pub struct DeepBlockEntry {
    pub n: usize,
    pub approximant: TriadicApproximant,
    pub u_n: BigInt,
    /// `|A_N| ≤ U_T = ceil(5 / 3^T)`.
    pub within_u_t: bool,
    /// `(p_N, N+1, u_N)` found by `solve_bounded_norm(f, U_T, ..)`.
    pub in_enumeration: bool,
    pub identity_ok: bool,
}

/// `U_T = ceil(5 · 3^{-T})` for the fixed absolute constant 5.
pub fn deep_norm_bound(t: u32) -> u64 {
    let q = 3u64.checked_pow(t).expect("T small");
    (5 + q - 1) / q
}

/// For each `T`-deep transition: the form value, its bounded-norm
/// membership, and cross-validation against the enumeration. Mismatches
/// are findings, not panics.
pub fn deep_block_report(
    f: &QuadraticPoly,
    rec: &OrbitRecord,
    t: u32,
) -> Result<Vec<DeepBlockEntry>, OrbitError> {
    let deep = classify_deep(rec, t)?.deep;
    if deep.is_empty() {
        return Ok(Vec::new());
    }
    let u_t = deep_norm_bound(t);
    let n_max = (deep.iter().max().unwrap() + 1) as u32;
    let solutions: BTreeSet<(u32, BigInt)> = solve_bounded_norm(f, u_t, n_max)
        .into_iter()
        .map(|s| (s.n, s.p))
        .collect();
    let mut out = Vec::new();
    for n in deep {
        let ap = forced_approximant(&rec.alpha, n);
        let u_n = norm_value(f, &ap.p, &ap.q);
        let within_u_t = u_n.abs() <= BigInt::from(u_t);
        let in_enumeration = solutions.contains(&((n + 1) as u32, ap.p.clone()));
        let identity_ok = discriminant_identity_check(
            f,
            &BoundedNormSolution {
                n: (n + 1) as u32,
                p: ap.p.clone(),
                u: u_n.clone(),
            },
        );
        out.push(DeepBlockEntry {
            n,
            approximant: ap,
            u_n,
            within_u_t,
            in_enumeration,
            identity_ok,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct StratReport {
    /// deficiency value ↦ transition times in that stratum
    pub strata: std::collections::BTreeMap<i64, Vec<usize>>,
    /// transitions violating `|A_N| ≤ 5 · 3^{d(N)}`
    pub violations: Vec<usize>,
}

/// Groups transition times by deficiency and checks `|A_N| ≤ 5 · 3^{d(N)}`
/// for each (for `d < 0` in the multiplied-up form `|A_N| · 3^{-d} ≤ 5`).
/// Strata with `d ≤ -2` force `|A_N| < 1` and so must be empty; any entry
/// there surfaces as a violation.
pub fn deficiency_stratification(
    f: &QuadraticPoly,
    rec: &OrbitRecord,
) -> Result<StratReport, OrbitError> {
    let cls = classify_deep(rec, 1)?;
    let mut strata: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
    let mut violations = Vec::new();
    for (&n, &d) in &cls.deficiency {
        strata.entry(d).or_default().push(n);
        let ap = forced_approximant(&rec.alpha, n);
        let a_n = norm_value(f, &ap.p, &ap.q).abs();
        let ok = if d >= 0 {
            a_n <= BigInt::from(5) * three_pow(d as usize)
        } else {
            a_n * three_pow((-d) as usize) <= BigInt::from(5)
        };
        if !ok {
            violations.push(n);
        }
    }
    Ok(StratReport { strata, violations })
}
