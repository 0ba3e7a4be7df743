//! Exact distance from an orbit start to the middle-third Cantor set.
//!
//! The via-exit route uses the scaling identity
//! `dist(θ_0, C) = dist(θ_{N-1}, {1/3, 2/3}) / 3^{N-1}` at `N = exit`;
//! the brute-force route measures against the union of level-`L` Cantor
//! intervals and agrees exactly whenever `L ≥ N`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::orbit::{OrbitError, OrbitRecord};
use crate::poly::QuadraticPoly;
use crate::surd::QuadraticSurd;
use crate::util::{ratio, three_pow};

/// Exit clearance and Cantor distance of one completed orbit, all exact.
#[derive(Debug, Clone)]
pub struct DistanceReport {
    pub alpha: QuadraticSurd,
    pub theta0: QuadraticSurd,
    pub exit_time: usize,
    /// `dist(θ_{N-1}, {1/3, 2/3})`
    pub exit_clearance: QuadraticSurd,
    /// `exit_clearance / 3^{N-1}`
    pub cantor_distance: QuadraticSurd,
    /// The endpoint of the removed middle third nearest to `θ_0`; ties at
    /// the midpoint resolve to the left endpoint.
    pub nearest_point: BigRational,
}

/// Builds the report from a completed record and asserts the exact
/// reconstruction `|θ_0 - nearest| = distance` and the consequence
/// `distance < 3^{-N}`. Truncated records are rejected.
pub fn cantor_distance_via_exit(rec: &OrbitRecord) -> Result<DistanceReport, OrbitError> {
    rec.require_complete()?;
    let n = rec.exit_time.expect("complete record");
    let last = &rec.points[n - 1];
    let left = last.sub_rational(&ratio(1, 3));
    let right = last.sub_rational(&ratio(2, 3)).neg();
    let use_left = left.compare(&right) != Ordering::Greater;
    let clearance = if use_left { left } else { right };
    let distance = clearance.scale(&BigRational::new(BigInt::from(1), three_pow(n - 1)));
    // θ_{N-1} = 3^{N-1} θ_0 - m with m read off the first N-1 digits
    let mut m = BigInt::zero();
    for j in 0..n - 1 {
        m = m * 3 + BigInt::from(rec.itinerary[j].digit());
    }
    let offset = if use_left { 1 } else { 2 };
    let nearest_point = BigRational::new(BigInt::from(3) * m + offset, three_pow(n));
    assert_eq!(
        rec.theta0.sub_rational(&nearest_point).abs(),
        distance,
        "nearest-point reconstruction"
    );
    assert_eq!(
        distance.compare_to_rational(&BigRational::new(BigInt::from(1), three_pow(n))),
        Ordering::Less,
        "distance below 3^-N"
    );
    Ok(DistanceReport {
        alpha: rec.alpha.clone(),
        theta0: rec.theta0.clone(),
        exit_time: n,
        exit_clearance: clearance,
        cantor_distance: distance,
        nearest_point,
    })
}

/// Exact distance from `θ_0 ∈ [0,1)` to the union of the `2^level`
/// level-`level` Cantor intervals, by direct enumeration. Equals the true
/// Cantor distance whenever `level ≥ exit(θ_0)`.
pub fn brute_force_cantor_distance(theta0: &QuadraticSurd, level: usize) -> QuadraticSurd {
    assert!((1..=20).contains(&level), "level must be in 1..=20");
    let q = three_pow(level);
    let mut best: Option<QuadraticSurd> = None;
    for mask in 0u32..(1u32 << level) {
        let mut num = BigInt::zero();
        for j in (0..level).rev() {
            num = num * 3 + if mask >> j & 1 == 1 { 2 } else { 0 };
        }
        let lo = BigRational::new(num.clone(), q.clone());
        let hi = BigRational::new(num + 1, q.clone());
        let dist = if theta0.compare_to_rational(&lo) == Ordering::Less {
            theta0.sub_rational(&lo).neg()
        } else if theta0.compare_to_rational(&hi) == Ordering::Greater {
            theta0.sub_rational(&hi)
        } else {
            QuadraticSurd::from_rational(BigRational::zero(), theta0.base().clone())
                .expect("carried base stays valid")
        };
        let better = match &best {
            None => true,
            Some(b) => dist.compare(b) == Ordering::Less,
        };
        if better {
            best = Some(dist);
        }
    }
    best.expect("at least one interval")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClearanceCheck {
    pub exit_time: usize,
    /// `dist(θ_{N-1}, {1/3,2/3}) ≥ 1/(30 H^2 3^N)`
    pub clearance_ok: bool,
    /// `dist(θ_0, C) ≥ 3^{-2N} / (30 H^2)`
    pub distance_ok: bool,
}

/// The unconditional clearance and distance lower bounds at the exit
/// step; a violation would falsify the implementation, so it is reported
/// for the caller to assert on.
pub fn clearance_bound_check(
    f: &QuadraticPoly,
    rec: &OrbitRecord,
) -> Result<ClearanceCheck, OrbitError> {
    let report = cantor_distance_via_exit(rec)?;
    let n = report.exit_time;
    let h2 = f.height() * f.height();
    let clearance_bound = BigRational::new(BigInt::from(1), BigInt::from(30) * &h2 * three_pow(n));
    let clearance_ok =
        report.exit_clearance.compare_to_rational(&clearance_bound) != Ordering::Less;
    let distance_bound =
        BigRational::new(BigInt::from(1), BigInt::from(30) * &h2 * three_pow(2 * n));
    let distance_ok = report
        .cantor_distance
        .compare_to_rational(&distance_bound)
        != Ordering::Less;
    Ok(ClearanceCheck {
        exit_time: n,
        clearance_ok,
        distance_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Root;

    fn record(a: i64, b: i64, c: i64, root: Root) -> OrbitRecord {
        let f = QuadraticPoly::from_i64(a, b, c).unwrap();
        OrbitRecord::for_root(&f, root, 10_000).unwrap()
    }

    #[test]
    fn via_exit_sqrt3_example() {
        let rec = record(1, 2, -2, Root::Plus); // -1 + sqrt(3), exit 3
        let report = cantor_distance_via_exit(&rec).unwrap();
        assert_eq!(report.exit_time, 3);
        // clearance 47/3 - 9 sqrt(3), carried over base 12 as 47/3 - (9/2) sqrt(12)
        assert_eq!(report.exit_clearance.rational_part(), &ratio(47, 3));
        assert_eq!(report.exit_clearance.surd_coefficient(), &ratio(-9, 2));
        assert_eq!(report.exit_clearance.to_decimal(6), "0.078209");
        // distance 47/27 - sqrt(3)
        assert_eq!(report.cantor_distance.rational_part(), &ratio(47, 27));
        assert_eq!(report.cantor_distance.surd_coefficient(), &ratio(-1, 2));
        assert_eq!(report.cantor_distance.to_decimal(7), "0.0086899");
        assert_eq!(report.nearest_point, ratio(20, 27));
    }

    #[test]
    fn via_exit_sqrt2_example() {
        let rec = record(1, 2, -1, Root::Plus); // sqrt(2) - 1, exit 1
        let report = cantor_distance_via_exit(&rec).unwrap();
        assert_eq!(report.exit_time, 1);
        // distance sqrt(2) - 4/3, nearest point 1/3
        assert_eq!(report.cantor_distance.rational_part(), &ratio(-4, 3));
        assert_eq!(report.cantor_distance.to_decimal(6), "0.080880");
        assert_eq!(report.nearest_point, ratio(1, 3));
    }

    #[test]
    fn brute_force_matches_identity() {
        let rec = record(1, 2, -2, Root::Plus);
        let via = cantor_distance_via_exit(&rec).unwrap();
        let brute = brute_force_cantor_distance(&rec.theta0, 3);
        assert_eq!(brute, via.cantor_distance);

        let rec = record(1, 2, -1, Root::Plus);
        let via = cantor_distance_via_exit(&rec).unwrap();
        let brute = brute_force_cantor_distance(&rec.theta0, 1);
        assert_eq!(brute, via.cantor_distance);
    }

    #[test]
    fn brute_force_rational_midpoint() {
        // synthetic theta0 = 1/2: level-1 distance is 1/6
        let half = QuadraticSurd::from_rational(ratio(1, 2), BigInt::from(2)).unwrap();
        let d = brute_force_cantor_distance(&half, 1);
        assert!(d.is_rational());
        assert_eq!(d.rational_part(), &ratio(1, 6));
    }

    #[test]
    fn clearance_bounds_hold() {
        for (a, b, c, root) in [
            (1, 2, -2, Root::Plus),
            (1, 2, -1, Root::Plus),
            (1, 1, -1, Root::Plus),
            (1, 1, -1, Root::Minus),
        ] {
            let f = QuadraticPoly::from_i64(a, b, c).unwrap();
            let rec = OrbitRecord::for_root(&f, root, 10_000).unwrap();
            let check = clearance_bound_check(&f, &rec).unwrap();
            assert!(check.clearance_ok && check.distance_ok, "({a},{b},{c})");
        }
    }

    #[test]
    fn rejects_truncated_records() {
        let rec = record(1, 2, -2, Root::Plus);
        let mut trunc = rec.clone();
        trunc.truncated = true;
        trunc.exit_time = None;
        assert_eq!(
            cantor_distance_via_exit(&trunc).unwrap_err(),
            OrbitError::Truncated
        );
    }
}
