//! Deterministic corpus scans over primitive quadratics of bounded height.
//!
//! The corpus is exhaustive: every primitive `(a, b, c)` with `a ≥ 1`,
//! `H ≤ h_max` and positive nonsquare discriminant, both roots. (Sign
//! flips `(−a, −b, −c)` carry the same root set, so the leading
//! coefficient is normalized positive.) A seeded random mode exists for
//! larger heights. Rows come back in canonical `(a, b, c, root)` order
//! regardless of how the work was scheduled.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use serde::Serialize;

use crate::dioph::{an_bound_check, deficiency_stratification, solve_bounded_norm};
use crate::distance::{brute_force_cantor_distance, cantor_distance_via_exit, clearance_bound_check};
use crate::orbit::{
    check_shallow_cover, check_universal_lrun, classify_deep, delta_cantor, run_block_decomposition,
    shallow_contribution, OrbitRecord,
};
use crate::poly::{QuadraticPoly, Root};
use crate::util::{map_collect, three_pow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub h_max: u32,
    pub max_steps: usize,
    pub deep_t: u32,
    /// Keep only rows with `δ_C(θ_0) ≥ filter` (exact comparison).
    pub clearance_filter: Option<BigRational>,
    /// Cross-check the exit-scaling distance against the brute-force
    /// oracle on rows with `exit ≤ cap`.
    pub oracle_exit_cap: Option<usize>,
    /// Record, per polynomial, the largest exponent `n ≤ tm_n_max` carrying
    /// a bounded-norm solution with `|u| ≤ tm_u_max`; 0 disables.
    pub tm_n_max: u32,
    pub tm_u_max: u64,
    pub sample: Option<ScanSample>,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanSample {
    pub count: usize,
    pub seed: u64,
}

impl ScanConfig {
    pub fn new(h_max: u32) -> Self {
        ScanConfig {
            h_max,
            max_steps: 10_000,
            deep_t: 1,
            clearance_filter: None,
            oracle_exit_cap: None,
            tm_n_max: 0,
            tm_u_max: 5,
            sample: None,
        }
    }
}

/// One orbit row. Exact values ride along as `num/den` strings; decimals
/// are 30-digit truncations and approximate by construction.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub root: &'static str,
    pub h: i64,
    pub delta: i64,
    pub baby_resonant: bool,
    pub exit: Option<usize>,
    pub truncated: bool,
    pub n_star: Option<usize>,
    pub delta_c: String,
    pub delta_c_argmin: u32,
    pub r_visits: usize,
    pub r_blocks: usize,
    pub transitions: usize,
    pub deep: Option<usize>,
    pub shallow_sum: Option<u64>,
    pub shallow_ratio: Option<String>,
    pub an_ok: Option<bool>,
    pub clearance_ok: Option<bool>,
    pub lrun_ok: Option<bool>,
    pub cover_ok: Option<bool>,
    pub doubling_ok: Option<bool>,
    pub strat_ok: Option<bool>,
    pub dist_oracle_ok: Option<bool>,
    pub distance: Option<String>,
    pub nearest: Option<String>,
    pub tm_max_n: Option<u32>,
}

impl ScanRow {
    /// True when no executed check failed (skipped checks pass vacuously).
    pub fn all_checks_ok(&self) -> bool {
        [
            self.an_ok,
            self.clearance_ok,
            self.lrun_ok,
            self.cover_ok,
            self.doubling_ok,
            self.strat_ok,
            self.dist_oracle_ok,
        ]
        .iter()
        .all(|c| c.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PerHeight {
    pub h: i64,
    pub count: usize,
    pub max_exit: usize,
    pub log3_h: String,
    pub log3_h_sq: String,
    pub max_exit_over_log_sq: Option<String>,
    pub max_exit_over_log: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub h_max: u32,
    pub deep_t: u32,
    pub max_steps: usize,
    pub rows: usize,
    pub truncated: usize,
    pub check_failures: usize,
    pub max_exit: usize,
    pub max_shallow_sum: u64,
    pub exit_hist: Vec<(usize, usize)>,
    pub r_block_hist: Vec<(usize, usize)>,
    pub per_h: Vec<PerHeight>,
    pub tm_max_n_overall: Option<u32>,
}

#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub rows: Vec<ScanRow>,
    pub summary: ScanSummary,
}

/// All primitive `(a, b, c)` with `a ≥ 1`, coefficients bounded by
/// `h_max`, positive nonsquare discriminant, in lexicographic order.
pub fn enumerate_corpus(h_max: u32) -> Vec<QuadraticPoly> {
    let h = h_max as i64;
    let mut out = Vec::new();
    for a in 1..=h {
        for b in -h..=h {
            for c in -h..=h {
                if let Ok(p) = QuadraticPoly::from_i64(a, b, c) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Seeded random corpus for heights where exhaustion is too large;
/// deterministic for a fixed `(h_max, count, seed)`.
pub fn sample_corpus(h_max: u32, count: usize, seed: u64) -> Vec<QuadraticPoly> {
    let h = h_max as i64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
    let mut attempts = 0usize;
    while seen.len() < count && attempts < count.saturating_mul(10_000).max(10_000) {
        attempts += 1;
        let a = rng.gen_range(1..=h);
        let b = rng.gen_range(-h..=h);
        let c = rng.gen_range(-h..=h);
        if QuadraticPoly::from_i64(a, b, c).is_ok() {
            seen.insert((a, b, c));
        }
    }
    seen.into_iter()
        .map(|(a, b, c)| QuadraticPoly::from_i64(a, b, c).expect("validated above"))
        .collect()
}

pub fn run_scan(cfg: &ScanConfig) -> ScanOutput {
    let polys = match cfg.sample {
        None => enumerate_corpus(cfg.h_max),
        Some(s) => sample_corpus(cfg.h_max, s.count, s.seed),
    };
    let nested = map_collect(&polys, |poly| {
        let tm_max_n = if cfg.tm_n_max > 0 {
            solve_bounded_norm(poly, cfg.tm_u_max, cfg.tm_n_max)
                .iter()
                .map(|s| s.n)
                .max()
        } else {
            None
        };
        let mut rows = Vec::with_capacity(2);
        for root in [Root::Plus, Root::Minus] {
            if let Some(row) = scan_row(poly, root, cfg, tm_max_n) {
                rows.push(row);
            }
        }
        rows
    });
    let rows: Vec<ScanRow> = nested.into_iter().flatten().collect();
    let summary = summarize(cfg, &rows);
    ScanOutput { rows, summary }
}

fn scan_row(
    poly: &QuadraticPoly,
    root: Root,
    cfg: &ScanConfig,
    tm_max_n: Option<u32>,
) -> Option<ScanRow> {
    let rec = OrbitRecord::for_root(poly, root, cfg.max_steps).expect("irrational root");
    let (dc, dc_argmin) = delta_cantor(&rec.theta0);
    if let Some(filter) = &cfg.clearance_filter {
        if dc.compare_to_rational(filter) == std::cmp::Ordering::Less {
            return None;
        }
    }
    let blocks = run_block_decomposition(&rec);
    let complete = !rec.truncated;

    let mut row = ScanRow {
        a: poly.a().to_i64().expect("coefficient fits i64"),
        b: poly.b().to_i64().expect("coefficient fits i64"),
        c: poly.c().to_i64().expect("coefficient fits i64"),
        root: root.label(),
        h: poly.height().to_i64().expect("height fits i64"),
        delta: poly.discriminant().to_i64().expect("discriminant fits i64"),
        baby_resonant: poly.is_baby_resonant(),
        exit: rec.exit_time,
        truncated: rec.truncated,
        n_star: rec.n_star,
        delta_c: dc.to_decimal(30),
        delta_c_argmin: dc_argmin,
        r_visits: rec.r_visits.len(),
        r_blocks: blocks.r_blocks.len(),
        transitions: rec.transition_times.len(),
        deep: None,
        shallow_sum: None,
        shallow_ratio: None,
        an_ok: None,
        clearance_ok: None,
        lrun_ok: None,
        cover_ok: None,
        doubling_ok: None,
        strat_ok: None,
        dist_oracle_ok: None,
        distance: None,
        nearest: None,
        tm_max_n,
    };
    if !complete {
        return Some(row);
    }

    let cls = classify_deep(&rec, cfg.deep_t).expect("complete record");
    row.deep = Some(cls.deep.len());
    let shallow = shallow_contribution(&rec, cfg.deep_t).expect("complete record");
    row.shallow_sum = Some(shallow.total);
    row.shallow_ratio = Some(format!("{:.6}", shallow.ratio_vs_log3h_sq));

    row.an_ok = Some(an_bound_check(poly, &rec).expect("complete record").all_ok());
    let clearance = clearance_bound_check(poly, &rec).expect("complete record");
    row.clearance_ok = Some(clearance.clearance_ok && clearance.distance_ok);
    row.lrun_ok = Some(check_universal_lrun(&rec).expect("complete record").all_ok());
    row.cover_ok = Some(check_shallow_cover(&rec).expect("complete record"));
    let h2 = poly.height() * poly.height();
    row.doubling_ok = Some(cls.deep.windows(2).all(|w| {
        three_pow(w[1]) >= three_pow(2 * w[0] + cfg.deep_t as usize + 1) * &h2
    }));
    row.strat_ok = Some(
        deficiency_stratification(poly, &rec)
            .expect("complete record")
            .violations
            .is_empty(),
    );

    let report = cantor_distance_via_exit(&rec).expect("complete record");
    row.distance = Some(report.cantor_distance.to_decimal(30));
    row.nearest = Some(format!("{}", report.nearest_point));
    if let Some(cap) = cfg.oracle_exit_cap {
        let exit = report.exit_time;
        if exit <= cap {
            let brute = brute_force_cantor_distance(&rec.theta0, exit.max(1));
            row.dist_oracle_ok = Some(brute == report.cantor_distance);
        }
    }
    Some(row)
}

fn summarize(cfg: &ScanConfig, rows: &[ScanRow]) -> ScanSummary {
    let mut exit_hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut r_block_hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut per_h: BTreeMap<i64, (usize, usize)> = BTreeMap::new();
    let mut truncated = 0usize;
    let mut check_failures = 0usize;
    let mut max_exit = 0usize;
    let mut max_shallow = 0u64;
    let mut tm_overall: Option<u32> = None;
    for row in rows {
        if row.truncated {
            truncated += 1;
        }
        if !row.all_checks_ok() {
            check_failures += 1;
        }
        if let Some(e) = row.exit {
            *exit_hist.entry(e).or_default() += 1;
            max_exit = max_exit.max(e);
            let entry = per_h.entry(row.h).or_default();
            entry.0 += 1;
            entry.1 = entry.1.max(e);
        }
        *r_block_hist.entry(row.r_blocks).or_default() += 1;
        if let Some(s) = row.shallow_sum {
            max_shallow = max_shallow.max(s);
        }
        if let Some(n) = row.tm_max_n {
            tm_overall = Some(tm_overall.map_or(n, |m: u32| m.max(n)));
        }
    }
    let per_h = per_h
        .into_iter()
        .map(|(h, (count, max_exit))| {
            let log3 = (h as f64).ln() / 3f64.ln();
            let (over_sq, over_lin) = if h > 1 {
                (
                    Some(format!("{:.6}", max_exit as f64 / (log3 * log3))),
                    Some(format!("{:.6}", max_exit as f64 / log3)),
                )
            } else {
                (None, None)
            };
            PerHeight {
                h,
                count,
                max_exit,
                log3_h: format!("{log3:.6}"),
                log3_h_sq: format!("{:.6}", log3 * log3),
                max_exit_over_log_sq: over_sq,
                max_exit_over_log: over_lin,
            }
        })
        .collect();
    ScanSummary {
        h_max: cfg.h_max,
        deep_t: cfg.deep_t,
        max_steps: cfg.max_steps,
        rows: rows.len(),
        truncated,
        check_failures,
        max_exit,
        max_shallow_sum: max_shallow,
        exit_hist: exit_hist.into_iter().collect(),
        r_block_hist: r_block_hist.into_iter().collect(),
        per_h,
        tm_max_n_overall: tm_overall,
    }
}
