//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them). Everything asserted here is
//! exact — zero tolerance unless a criterion states otherwise.

mod common;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use cantor_exit::report::{write_rows_csv, write_summary};
use cantor_exit::scan::ScanRow;
use cantor_exit::{
    brute_force_cantor_distance, cantor_distance_via_exit, discriminant_identity_check,
    enumerate_corpus, iterate_symbolic, rational_digits, run_scan, solve_bounded_norm,
    verify_early_r_hit, verify_far_from_boundary, OrbitRecord, QuadraticPoly, RatInterval, Root,
    ScanConfig, Symbol,
};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn criterion<F>(num: u32, label: &str, body: F)
where
    F: FnOnce() -> Result<String, String>,
{
    match body() {
        Ok(detail) => println!("ACCEPTANCE {num} {label}: PASS ({detail})"),
        Err(detail) => {
            println!("ACCEPTANCE {num} {label}: FAIL ({detail})");
            panic!("acceptance criterion {num} failed: {detail}");
        }
    }
}

#[test]
fn acceptance_1_far_from_boundary_certificate() {
    criterion(1, "certified far-from-boundary verification", || {
        let start = Instant::now();
        let cert = verify_far_from_boundary().map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if !(cert.cover_checked && cert.conclusion_checked) {
            return Err("certificate flags not set".into());
        }
        let total: BigRational = cert.branches.iter().map(|b| b.domain.length()).sum();
        if total != ratio(7, 25) {
            return Err(format!("cover measure {total} != 7/25"));
        }
        for b in &cert.branches {
            if !b.symbols[..3].contains(&Symbol::M) {
                return Err(format!("branch {} misses M", b.domain));
            }
        }
        if elapsed > Duration::from_secs(5) {
            return Err(format!("took {elapsed:?}, budget 5s"));
        }
        Ok(format!(
            "{} branches, measure 7/25, {elapsed:?}",
            cert.branches.len()
        ))
    });
}

#[test]
fn acceptance_2_early_r_certificate() {
    criterion(2, "certified early-R verification", || {
        let start = Instant::now();
        let cert = verify_early_r_hit().map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        if cert.is_degenerate() {
            return Err("degenerate certificate".into());
        }
        let total: BigRational = cert.branches.iter().map(|b| b.domain.length()).sum();
        if total != ratio(9, 25) {
            return Err(format!("cover measure {total} != 9/25"));
        }
        for b in &cert.branches {
            let ok = b.symbols[..5].contains(&Symbol::M) || b.symbols[..6].contains(&Symbol::R);
            if !ok {
                return Err(format!("branch {} fails the disjunction", b.domain));
            }
        }
        if elapsed > Duration::from_secs(30) {
            return Err(format!("took {elapsed:?}, budget 30s"));
        }
        Ok(format!(
            "{} branches, measure 9/25, {elapsed:?}",
            cert.branches.len()
        ))
    });
}

#[test]
fn acceptance_3_named_orbit_regression() {
    criterion(3, "named-orbit regression", || {
        let sqrt2 = OrbitRecord::for_root(
            &QuadraticPoly::from_i64(1, 2, -1).unwrap(),
            Root::Plus,
            100,
        )
        .unwrap();
        if sqrt2.exit_time != Some(1) {
            return Err(format!("exit(sqrt(2)-1) = {:?}", sqrt2.exit_time));
        }
        let golden = OrbitRecord::for_root(
            &QuadraticPoly::from_i64(1, 1, -1).unwrap(),
            Root::Plus,
            100,
        )
        .unwrap();
        if golden.exit_time != Some(1) {
            return Err(format!("exit((sqrt(5)-1)/2) = {:?}", golden.exit_time));
        }
        let sqrt3 = OrbitRecord::for_root(
            &QuadraticPoly::from_i64(1, 2, -2).unwrap(),
            Root::Plus,
            100,
        )
        .unwrap();
        if sqrt3.exit_time != Some(3) || sqrt3.itinerary_string() != "RLM" {
            return Err(format!(
                "exit(sqrt(3)-1) = {:?}, itinerary {}",
                sqrt3.exit_time,
                sqrt3.itinerary_string()
            ));
        }
        Ok("exit values 1, 1, 3 with itinerary RLM".into())
    });
}

#[test]
fn acceptance_4_exit_distance_identity() {
    criterion(4, "exit-distance identity vs brute force (H <= 15)", || {
        let corpus = enumerate_corpus(15);
        let outcomes: Vec<Result<(), String>> = corpus
            .par_iter()
            .map(|poly| {
                for root in [Root::Plus, Root::Minus] {
                    let rec = OrbitRecord::for_root(poly, root, 10_000).unwrap();
                    let Some(exit) = rec.exit_time else {
                        return Err(format!("{poly} truncated"));
                    };
                    if exit > 12 {
                        continue;
                    }
                    let via = cantor_distance_via_exit(&rec).unwrap();
                    let brute = brute_force_cantor_distance(&rec.theta0, exit.max(1));
                    if brute != via.cantor_distance {
                        return Err(format!(
                            "{poly} root {}: identity {} vs oracle {}",
                            root.label(),
                            via.cantor_distance,
                            brute
                        ));
                    }
                }
                Ok(())
            })
            .collect();
        let checked = outcomes.len();
        for o in outcomes {
            o?;
        }
        // pinned closed form for -1 + sqrt(3)
        let rec = OrbitRecord::for_root(
            &QuadraticPoly::from_i64(1, 2, -2).unwrap(),
            Root::Plus,
            100,
        )
        .unwrap();
        let via = cantor_distance_via_exit(&rec).unwrap();
        if via.cantor_distance.rational_part() != &ratio(47, 27)
            || via.cantor_distance.surd_coefficient() != &ratio(-1, 2)
            || via.cantor_distance.base() != &BigInt::from(12)
        {
            return Err(format!(
                "dist(-1+sqrt(3)) = {}, expected 47/27 - sqrt(3)",
                via.cantor_distance
            ));
        }
        Ok(format!("{checked} polynomials, surd equality exact"))
    });
}

#[test]
fn acceptance_5_inequality_suite_h30() {
    criterion(5, "unconditional inequality suite (H <= 30)", || {
        let mut cfg = ScanConfig::new(30);
        cfg.max_steps = 10_000;
        cfg.deep_t = 1;
        cfg.tm_n_max = 0;
        let start = Instant::now();
        let out = run_scan(&cfg);
        let elapsed = start.elapsed();
        if out.summary.truncated > 0 {
            return Err(format!("{} truncated orbits", out.summary.truncated));
        }
        let count = |f: fn(&ScanRow) -> Option<bool>| -> usize {
            out.rows.iter().filter(|r| f(r) == Some(false)).count()
        };
        let an = count(|r| r.an_ok);
        let clearance = count(|r| r.clearance_ok);
        let lrun = count(|r| r.lrun_ok);
        let cover = count(|r| r.cover_ok);
        let doubling = count(|r| r.doubling_ok);
        println!("  (a) form-value bound violations: {an}");
        println!("  (b) clearance/distance bound violations: {clearance}");
        println!("  (c) universal L-run bound violations: {lrun}");
        println!("  (d) disjoint-cover violations: {cover}");
        println!("  (e) deep-time doubling violations: {doubling}");
        if an + clearance + lrun + cover + doubling > 0 {
            return Err("inequality violations found".into());
        }
        if out.summary.check_failures > 0 {
            return Err(format!(
                "{} rows failed some check",
                out.summary.check_failures
            ));
        }
        Ok(format!(
            "{} rows, max exit {}, all checks pass, {elapsed:?}",
            out.summary.rows, out.summary.max_exit
        ))
    });
}

#[test]
fn acceptance_6_bounded_norm_oracle_equivalence() {
    criterion(6, "bounded-norm solver vs naive oracle", || {
        let polys = common::seeded_polys(20, 20, 0x0dd5_eed5);
        let failures: Vec<String> = polys
            .par_iter()
            .filter_map(|&(a, b, c)| {
                let f = QuadraticPoly::from_i64(a, b, c).unwrap();
                let h = num_traits::ToPrimitive::to_i64(f.height()).unwrap();
                let expected = common::naive_bounded_norm(a, b, c, h, 10, 12);
                let got: BTreeSet<(u32, i128, i128)> = solve_bounded_norm(&f, 10, 12)
                    .iter()
                    .map(|s| {
                        (
                            s.n,
                            num_traits::ToPrimitive::to_i128(&s.p).unwrap(),
                            num_traits::ToPrimitive::to_i128(&s.u).unwrap(),
                        )
                    })
                    .collect();
                if got != expected {
                    let missing: Vec<_> = expected.difference(&got).take(3).collect();
                    let extra: Vec<_> = got.difference(&expected).take(3).collect();
                    return Some(format!(
                        "({a},{b},{c}): missing {missing:?}, extra {extra:?}"
                    ));
                }
                for s in solve_bounded_norm(&f, 10, 12) {
                    if !discriminant_identity_check(&f, &s) {
                        return Some(format!("({a},{b},{c}): identity fails at {s:?}"));
                    }
                }
                None
            })
            .collect();
        if !failures.is_empty() {
            return Err(failures.join("; "));
        }
        Ok("20 seeded polynomials, set-for-set equality".into())
    });
}

#[test]
fn acceptance_7_measurement_outputs() {
    criterion(7, "conditional-claim measurements emitted", || {
        let mut cfg = ScanConfig::new(10);
        cfg.tm_n_max = 20;
        let out1 = run_scan(&cfg);
        let out2 = run_scan(&cfg);

        let mut bytes1 = Vec::new();
        write_rows_csv(&mut bytes1, &out1.rows).unwrap();
        write_summary(&mut bytes1, &out1.summary).unwrap();
        let mut bytes2 = Vec::new();
        write_rows_csv(&mut bytes2, &out2.rows).unwrap();
        write_summary(&mut bytes2, &out2.summary).unwrap();
        if bytes1 != bytes2 {
            return Err("scan output is not deterministic".into());
        }

        // the growth measurement must be present for every height
        if out1.summary.per_h.is_empty() {
            return Err("per-height table missing".into());
        }
        for p in &out1.summary.per_h {
            if p.log3_h_sq.is_empty() {
                return Err(format!("missing (log3 H)^2 at h = {}", p.h));
            }
        }
        if !out1.rows.iter().any(|r| r.shallow_sum.is_some()) {
            return Err("shallow contribution measurement missing".into());
        }
        if out1.summary.tm_max_n_overall.is_none() {
            return Err("bounded-norm exponent measurement missing".into());
        }

        // truncation is surfaced as a headline anomaly
        let mut doctored = out1.summary.clone();
        doctored.truncated = 1;
        let mut buf = Vec::new();
        write_summary(&mut buf, &doctored).unwrap();
        if !String::from_utf8(buf).unwrap().contains("ANOMALY") {
            return Err("truncated orbits are not flagged".into());
        }
        if out1.summary.truncated > 0 {
            return Err(format!(
                "headline anomaly: {} truncated orbits in H <= 10",
                out1.summary.truncated
            ));
        }
        Ok(format!(
            "deterministic bytes, per-height table ({} heights), shallow + exponent measurements",
            out1.summary.per_h.len()
        ))
    });
}

#[test]
fn acceptance_8_peel_lemma_suite() {
    criterion(8, "peel lemma interval + pointwise suite", || {
        let one = ratio(1, 1);

        // clause (i): [0, 1/9] -> theta1 in [0,1/3], theta2 in [0,1]
        let dom = RatInterval::closed(ratio(0, 1), ratio(1, 9)).unwrap();
        let branches = iterate_symbolic(&dom, 2).map_err(|e| e.to_string())?;
        if branches.len() != 1 || branches[0].symbols != vec![Symbol::L, Symbol::L] {
            return Err("clause (i) branch structure".into());
        }
        let th1 = branches[0].image_at(1);
        if th1.lo != ratio(0, 1) || th1.hi != ratio(1, 3) {
            return Err(format!("clause (i) theta1 range {th1}"));
        }
        let th2 = branches[0].image_at(2);
        if th2.lo != ratio(0, 1) || th2.hi != one {
            return Err(format!("clause (i) theta2 range {th2}"));
        }

        // clause (ii): [8/9, 1) -> theta1 in [2/3,1), theta2 in [0,1)
        let dom = RatInterval::new(ratio(8, 9), ratio(1, 1), true, false).unwrap();
        let branches = iterate_symbolic(&dom, 2).map_err(|e| e.to_string())?;
        if branches.len() != 1 || branches[0].symbols != vec![Symbol::R, Symbol::R] {
            return Err("clause (ii) branch structure".into());
        }
        let th1 = branches[0].image_at(1);
        if th1.lo != ratio(2, 3) || th1.hi != one || th1.hi_closed {
            return Err(format!("clause (ii) theta1 range {th1}"));
        }

        // clauses (iii), (iv): one step into the closed hull of M
        for (lo, hi, sym) in [
            ((1, 9), (2, 9), Symbol::L),
            ((7, 9), (8, 9), Symbol::R),
        ] {
            let dom = RatInterval::closed(ratio(lo.0, lo.1), ratio(hi.0, hi.1)).unwrap();
            let branches = iterate_symbolic(&dom, 1).map_err(|e| e.to_string())?;
            if branches.len() != 1 || branches[0].symbols != vec![sym] {
                return Err(format!("clause on [{}/{}, {}/{}]", lo.0, lo.1, hi.0, hi.1));
            }
            let img = branches[0].image();
            if img.lo != ratio(1, 3) || img.hi != ratio(2, 3) {
                return Err(format!("image {img} not the closed hull of M"));
            }
        }

        // pointwise: 1000 seeded interior rationals per clause under the
        // half-open convention
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x9ee1);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng, lo: &BigRational, hi: &BigRational| {
            let j = rng.gen_range(1u32..1 << 30);
            lo + (hi - lo) * ratio(j as i64, 1 << 30)
        };
        for _ in 0..1000 {
            // (i): theta1 in [0, 1/3), theta2 in [0, 1)
            let t0 = sample(&mut rng, &ratio(0, 1), &ratio(1, 9));
            let t1 = &t0 * ratio(3, 1);
            if t1 >= ratio(1, 3) {
                return Err(format!("clause (i) pointwise at {t0}"));
            }
            let digits = rational_digits(&t0, 2).unwrap();
            if digits[0] != 0 {
                return Err(format!("clause (i) digit at {t0}"));
            }
            // (ii): theta1 in [2/3, 1)
            let t0 = sample(&mut rng, &ratio(8, 9), &ratio(1, 1));
            let t1 = &t0 * ratio(3, 1) - ratio(2, 1);
            if !(ratio(2, 3)..one.clone()).contains(&t1) {
                return Err(format!("clause (ii) pointwise at {t0}"));
            }
            // (iii): theta1 in [1/3, 2/3)
            let t0 = sample(&mut rng, &ratio(1, 9), &ratio(2, 9));
            let t1 = &t0 * ratio(3, 1);
            if !(ratio(1, 3)..ratio(2, 3)).contains(&t1) {
                return Err(format!("clause (iii) pointwise at {t0}"));
            }
            // (iv): theta1 in [1/3, 2/3)
            let t0 = sample(&mut rng, &ratio(7, 9), &ratio(8, 9));
            let t1 = &t0 * ratio(3, 1) - ratio(2, 1);
            if !(ratio(1, 3)..ratio(2, 3)).contains(&t1) {
                return Err(format!("clause (iv) pointwise at {t0}"));
            }
        }
        Ok("4 clauses certified, 1000 pointwise samples each".into())
    });
}

#[test]
fn early_r_branch_matches_concrete_orbit() {
    // theta0 = sqrt(2) - 1 has delta_C in [1/50, 1/25); its orbit symbols
    // must follow the certified branch containing it.
    let cert = verify_early_r_hit().unwrap();
    let f = QuadraticPoly::from_i64(1, 2, -1).unwrap();
    let rec = OrbitRecord::for_root(&f, Root::Plus, 100).unwrap();
    let theta0 = &rec.theta0;
    let branch = cert
        .branches
        .iter()
        .find(|b| b.domain.contains_surd(theta0))
        .expect("theta0 lies in the certified band");
    // follow the orbit past exit for the full branch depth
    let mut theta = theta0.clone();
    let mut symbols = Vec::new();
    for _ in 0..branch.steps {
        let (d, next) = cantor_exit::next_digit(&theta).unwrap();
        symbols.push(Symbol::from_digit(d));
        theta = next;
    }
    assert_eq!(symbols, branch.symbols);
    assert_eq!(
        theta0.compare_to_rational(&branch.domain.lo),
        Ordering::Greater
    );
}
