//! Digit streams, itineraries and run/block structure under `θ ↦ {3θ}`.
//!
//! The partition is the half-open one throughout: `L = [0,1/3)`,
//! `M = [1/3,2/3)`, `R = [2/3,1)`, i.e. symbol = first ternary digit
//! 0 / 1 / 2. Exit time is the first `N ≥ 1` with `θ_{N-1} ∈ M`. Every
//! inequality involving `log_3 H` is evaluated in the exact integer form
//! `3^x` versus `H^2 · 3^y`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::poly::{QuadraticPoly, Root};
use crate::surd::QuadraticSurd;
use crate::util::{ratio, three_pow};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("orbit start must be irrational (nonzero surd coefficient)")]
    RationalStart,
    #[error("theta must lie in [0,1)")]
    ThetaOutOfRange,
    #[error("record is truncated; a completed orbit is required")]
    Truncated,
}

/// Partition symbol; `L ⇔ digit 0`, `M ⇔ digit 1`, `R ⇔ digit 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    L,
    M,
    R,
}

impl Symbol {
    pub fn from_digit(d: u8) -> Symbol {
        match d {
            0 => Symbol::L,
            1 => Symbol::M,
            2 => Symbol::R,
            _ => unreachable!("ternary digit out of range"),
        }
    }

    pub fn digit(self) -> u8 {
        match self {
            Symbol::L => 0,
            Symbol::M => 1,
            Symbol::R => 2,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::M => 'M',
            Symbol::R => 'R',
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// `x - floor(x)`, the orbit start `θ_0 = {α}`.
pub fn fractional_part(x: &QuadraticSurd) -> QuadraticSurd {
    x.fract()
}

/// One shift step: returns the ternary digit `⌊3θ⌋` and `{3θ}` exactly.
pub fn next_digit(theta: &QuadraticSurd) -> Result<(u8, QuadraticSurd), OrbitError> {
    if theta.sign() == Ordering::Less
        || theta.compare_to_rational(&BigRational::one()) != Ordering::Less
    {
        return Err(OrbitError::ThetaOutOfRange);
    }
    let tripled = theta.mul_pow3(1);
    let digit = tripled.floor();
    let next = tripled.sub_rational(&BigRational::from(digit.clone()));
    Ok((digit.to_u8().expect("digit in 0..=2"), next))
}

/// Exact ternary digits of a rational `θ_0 ∈ [0,1)` under the half-open
/// convention. Used for pointwise endpoint checks and synthetic inputs.
pub fn rational_digits(theta0: &BigRational, steps: usize) -> Result<Vec<u8>, OrbitError> {
    if theta0.is_negative() || theta0 >= &BigRational::one() {
        return Err(OrbitError::ThetaOutOfRange);
    }
    let mut th = theta0.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let t = th * ratio(3, 1);
        let d = t.floor();
        out.push(d.to_integer().to_u8().expect("digit in 0..=2"));
        th = t - d;
    }
    Ok(out)
}

/// Maximal L-run length after an R-point `θ ∈ (2/3, 1)`, by the defining
/// strict inequalities `3^k δ < 1/3 ≤ 3^{k+1} δ` with `δ = θ - 2/3`.
/// Returns `None` off `R` or at `θ = 2/3` exactly (the run is unbounded).
pub fn rational_run_length(theta: &BigRational) -> Option<usize> {
    let delta = theta - ratio(2, 3);
    if !delta.is_positive() || theta >= &BigRational::one() {
        return None;
    }
    let third = ratio(1, 3);
    let mut k = 0usize;
    let mut scaled = &delta * ratio(3, 1);
    while scaled < third {
        k += 1;
        scaled = scaled * ratio(3, 1);
    }
    Some(k)
}

/// A computed orbit of `θ_0 = {α}` up to (and including) its first `M`
/// point, or up to `max_steps` when no `M` was reached (`truncated`).
///
/// `points[j] = θ_j` and `itinerary[j]` its symbol; when `exit_time = N`
/// the last entries are `θ_{N-1} ∈ M`. `r_visits` are the indices in `R`
/// before exit, `l_run_lengths[n] = ℓ(n)` the maximal following L-run, and
/// `transition_times` the R-visits with `ℓ ≥ 1`.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub alpha: QuadraticSurd,
    pub poly: QuadraticPoly,
    pub theta0: QuadraticSurd,
    pub points: Vec<QuadraticSurd>,
    pub itinerary: Vec<Symbol>,
    pub exit_time: Option<usize>,
    pub n_star: Option<usize>,
    pub r_visits: Vec<usize>,
    pub l_run_lengths: BTreeMap<usize, usize>,
    pub transition_times: Vec<usize>,
    pub truncated: bool,
}

impl OrbitRecord {
    pub fn for_root(
        poly: &QuadraticPoly,
        root: Root,
        max_steps: usize,
    ) -> Result<Self, OrbitError> {
        exit_time(&poly.root(root), poly, max_steps)
    }

    pub fn itinerary_string(&self) -> String {
        self.itinerary.iter().map(|s| s.letter()).collect()
    }

    pub fn require_complete(&self) -> Result<(), OrbitError> {
        if self.truncated {
            Err(OrbitError::Truncated)
        } else {
            Ok(())
        }
    }

    /// `θ_{N-1}`, the point inside `M`, for completed orbits.
    pub fn exit_point(&self) -> Option<&QuadraticSurd> {
        self.exit_time.map(|n| &self.points[n - 1])
    }
}

/// Iterates the shift from `θ_0 = {α}` until the first `M` symbol or
/// `max_steps`, recording the full run/block structure.
pub fn exit_time(
    alpha: &QuadraticSurd,
    poly: &QuadraticPoly,
    max_steps: usize,
) -> Result<OrbitRecord, OrbitError> {
    if alpha.is_rational() {
        return Err(OrbitError::RationalStart);
    }
    debug_assert_eq!(alpha.base(), poly.discriminant());
    let theta0 = alpha.fract();
    let mut points = Vec::new();
    let mut itinerary = Vec::new();
    let mut theta = theta0.clone();
    let mut exit = None;
    for step in 0..max_steps {
        points.push(theta.clone());
        let (digit, next) = next_digit(&theta)?;
        let symbol = Symbol::from_digit(digit);
        itinerary.push(symbol);
        if symbol == Symbol::M {
            exit = Some(step + 1);
            break;
        }
        theta = next;
    }
    let truncated = exit.is_none();
    let n_star = itinerary.iter().position(|s| *s != Symbol::L);
    let r_visits: Vec<usize> = itinerary
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == Symbol::R)
        .map(|(i, _)| i)
        .collect();
    let mut l_run_lengths = BTreeMap::new();
    for &n in &r_visits {
        let mut l = 0usize;
        while n + 1 + l < itinerary.len() && itinerary[n + 1 + l] == Symbol::L {
            l += 1;
        }
        l_run_lengths.insert(n, l);
    }
    let transition_times = r_visits
        .iter()
        .copied()
        .filter(|n| l_run_lengths[n] >= 1)
        .collect();
    Ok(OrbitRecord {
        alpha: alpha.clone(),
        poly: poly.clone(),
        theta0,
        points,
        itinerary,
        exit_time: exit,
        n_star,
        r_visits,
        l_run_lengths,
        transition_times,
        truncated,
    })
}

/// Exact distance from `θ_0` to the level-2 grid `{k/9 : 0 ≤ k ≤ 9}`,
/// with the argmin `k`; ties go to the smaller `k`.
pub fn delta_cantor(theta0: &QuadraticSurd) -> (QuadraticSurd, u32) {
    assert_ne!(theta0.sign(), Ordering::Less, "theta0 must lie in [0,1)");
    assert_eq!(
        theta0.compare_to_rational(&BigRational::one()),
        Ordering::Less,
        "theta0 must lie in [0,1)"
    );
    let mut best: Option<(QuadraticSurd, u32)> = None;
    for k in 0..=9u32 {
        let dist = theta0.sub_rational(&ratio(k as i64, 9)).abs();
        let better = match &best {
            None => true,
            Some((b, _)) => dist.compare(b) == Ordering::Less,
        };
        if better {
            best = Some((dist, k));
        }
    }
    best.expect("ten candidates")
}

/// Maximal R-blocks (inclusive index ranges) and each block paired with
/// the length of the L-run that follows it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunBlocks {
    pub r_blocks: Vec<(usize, usize)>,
    pub rl_blocks: Vec<((usize, usize), usize)>,
}

pub fn run_block_decomposition(rec: &OrbitRecord) -> RunBlocks {
    let it = &rec.itinerary;
    let mut r_blocks = Vec::new();
    let mut i = 0usize;
    while i < it.len() {
        if it[i] == Symbol::R {
            let start = i;
            while i + 1 < it.len() && it[i + 1] == Symbol::R {
                i += 1;
            }
            r_blocks.push((start, i));
        }
        i += 1;
    }
    let rl_blocks = r_blocks
        .iter()
        .map(|&(s, e)| ((s, e), rec.l_run_lengths.get(&e).copied().unwrap_or(0)))
        .collect();
    RunBlocks { r_blocks, rl_blocks }
}

/// Per-transition outcome of the universal L-run checks.
#[derive(Debug, Clone)]
pub struct LrunEntry {
    pub n0: usize,
    pub k: usize,
    /// `θ_{N0+k} = 3^k (θ_{N0} - 2/3)` with `3^k δ < 1/3 ≤ 3^{k+1} δ`.
    pub geometry_ok: bool,
    /// Exact integer form `3^k ≤ 5 H^2 3^{N0}`.
    pub height_ok: bool,
    /// Largest extra exponent `e` with `3^{k+e} ≤ 5 H^2 3^{N0}`.
    pub margin: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct LrunReport {
    pub entries: Vec<LrunEntry>,
}

impl LrunReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.geometry_ok && e.height_ok)
    }
}

/// Checks, at every transition time, the exact run geometry and the
/// universal height bound `3^k ≤ 5 H^2 3^{N0}`. A height violation would
/// falsify the chosen absolute constant 5 and is reported, not panicked.
pub fn check_universal_lrun(rec: &OrbitRecord) -> Result<LrunReport, OrbitError> {
    rec.require_complete()?;
    let h2 = rec.poly.height() * rec.poly.height();
    let two_thirds = ratio(2, 3);
    let one_third = ratio(1, 3);
    let mut entries = Vec::new();
    for &n0 in &rec.transition_times {
        let k = rec.l_run_lengths[&n0];
        let delta = rec.points[n0].sub_rational(&two_thirds);
        let at_k = delta.mul_pow3(k);
        let mut geometry_ok = rec.points[n0 + k] == at_k;
        geometry_ok &= at_k.compare_to_rational(&one_third) == Ordering::Less;
        geometry_ok &= delta.mul_pow3(k + 1).compare_to_rational(&one_third) != Ordering::Less;
        let bound = BigInt::from(5) * &h2 * three_pow(n0);
        let height_ok = three_pow(k) <= bound;
        let margin = if height_ok {
            let mut e = 0u32;
            while three_pow(k + e as usize + 1) <= bound {
                e += 1;
            }
            Some(e)
        } else {
            None
        };
        entries.push(LrunEntry {
            n0,
            k,
            geometry_ok,
            height_ok,
            margin,
        });
    }
    Ok(LrunReport { entries })
}

/// Partition of the transition times into `T`-deep and shallow, with the
/// deficiency `d(N)` of each: the least integer `d` with
/// `3^{k(N)+d} ≥ 3^N H^2`.
#[derive(Debug, Clone)]
pub struct DeepClassification {
    pub t: u32,
    pub deep: Vec<usize>,
    pub shallow_transitions: Vec<usize>,
    pub deficiency: BTreeMap<usize, i64>,
}

pub fn classify_deep(rec: &OrbitRecord, t: u32) -> Result<DeepClassification, OrbitError> {
    rec.require_complete()?;
    let h2 = rec.poly.height() * rec.poly.height();
    // least e ≥ 0 with 3^e ≥ H^2, so d(N) = N + e - k(N)
    let e = {
        let mut e = 0i64;
        let mut p = BigInt::one();
        while p < h2 {
            p *= 3;
            e += 1;
        }
        e
    };
    let mut deep = Vec::new();
    let mut shallow = Vec::new();
    let mut deficiency = BTreeMap::new();
    for &n in &rec.transition_times {
        let k = rec.l_run_lengths[&n];
        let is_deep = three_pow(k) >= three_pow(n + t as usize) * &h2;
        let d = n as i64 + e - k as i64;
        debug_assert_eq!(is_deep, d <= -(t as i64));
        deficiency.insert(n, d);
        if is_deep {
            deep.push(n);
        } else {
            shallow.push(n);
        }
    }
    Ok(DeepClassification {
        t,
        deep,
        shallow_transitions: shallow,
        deficiency,
    })
}

/// Measured quantity only: the sum of `1 + ℓ(n)` over the non-`T`-deep
/// R-visits, with its ratio against `(log_3 H)^2 + 1`. Nothing is asserted.
#[derive(Debug, Clone)]
pub struct ShallowContribution {
    pub t: u32,
    pub total: u64,
    pub ratio_vs_log3h_sq: f64,
}

pub fn shallow_contribution(
    rec: &OrbitRecord,
    t: u32,
) -> Result<ShallowContribution, OrbitError> {
    let deep: BTreeSet<usize> = classify_deep(rec, t)?.deep.into_iter().collect();
    let total: u64 = rec
        .r_visits
        .iter()
        .filter(|n| !deep.contains(n))
        .map(|n| 1 + rec.l_run_lengths[n] as u64)
        .sum();
    let h = rec.poly.height().to_f64().unwrap_or(f64::INFINITY);
    let log3h = h.ln() / 3f64.ln();
    Ok(ShallowContribution {
        t,
        total,
        ratio_vs_log3h_sq: total as f64 / (log3h * log3h + 1.0),
    })
}

/// Disjoint-cover property of the intervals `I_n = {n, …, n+ℓ(n)}`:
/// when `θ_{n_star} ∈ R` they tile `{n_star, …, exit-2}` exactly, which is
/// the equality form `exit - 1 = n_star + Σ (1 + ℓ(n))`.
pub fn check_shallow_cover(rec: &OrbitRecord) -> Result<bool, OrbitError> {
    rec.require_complete()?;
    let exit = rec.exit_time.expect("complete record");
    let n_star = rec.n_star.expect("complete record has an M symbol");
    if rec.itinerary[n_star] == Symbol::M {
        return Ok(rec.r_visits.is_empty());
    }
    let mut expected = n_star;
    for &n in &rec.r_visits {
        if n != expected {
            return Ok(false);
        }
        expected = n + rec.l_run_lengths[&n] + 1;
    }
    Ok(expected == exit - 1)
}
