//! Flat-file serialization: CSV and JSON-lines for scan rows, solution
//! lists and distance reports. No timestamps; byte-identical across runs.

use std::io::{self, Write};

use num_rational::BigRational;

use crate::dioph::BoundedNormSolution;
use crate::distance::DistanceReport;
use crate::poly::{QuadraticPoly, Root};
use crate::scan::{ScanRow, ScanSummary};

pub use crate::util::rational_decimal;

const ROW_COLUMNS: &str = "a,b,c,root,h,delta,baby_resonant,exit,truncated,n_star,delta_c,\
delta_c_argmin,r_visits,r_blocks,transitions,deep,shallow_sum,shallow_ratio,an_ok,\
clearance_ok,lrun_ok,cover_ok,doubling_ok,strat_ok,dist_oracle_ok,distance,nearest,tm_max_n";

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_rows_csv<W: Write>(mut w: W, rows: &[ScanRow]) -> io::Result<()> {
    writeln!(w, "{ROW_COLUMNS}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.a,
            r.b,
            r.c,
            r.root,
            r.h,
            r.delta,
            r.baby_resonant,
            opt(&r.exit),
            r.truncated,
            opt(&r.n_star),
            r.delta_c,
            r.delta_c_argmin,
            r.r_visits,
            r.r_blocks,
            r.transitions,
            opt(&r.deep),
            opt(&r.shallow_sum),
            opt(&r.shallow_ratio),
            opt(&r.an_ok),
            opt(&r.clearance_ok),
            opt(&r.lrun_ok),
            opt(&r.cover_ok),
            opt(&r.doubling_ok),
            opt(&r.strat_ok),
            opt(&r.dist_oracle_ok),
            opt(&r.distance),
            opt(&r.nearest),
            opt(&r.tm_max_n),
        )?;
    }
    Ok(())
}

pub fn write_rows_jsonl<W: Write>(mut w: W, rows: &[ScanRow]) -> io::Result<()> {
    for r in rows {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_summary<W: Write>(mut w: W, s: &ScanSummary) -> io::Result<()> {
    writeln!(w, "scan summary")?;
    writeln!(w, "h_max {}", s.h_max)?;
    writeln!(w, "deep_t {}", s.deep_t)?;
    writeln!(w, "max_steps {}", s.max_steps)?;
    writeln!(w, "rows {}", s.rows)?;
    writeln!(w, "truncated {}", s.truncated)?;
    writeln!(w, "check_failures {}", s.check_failures)?;
    writeln!(w, "max_exit {}", s.max_exit)?;
    writeln!(w, "max_shallow_sum {}", s.max_shallow_sum)?;
    if let Some(n) = s.tm_max_n_overall {
        writeln!(w, "tm_max_n_overall {n}")?;
    }
    if s.truncated > 0 {
        writeln!(
            w,
            "ANOMALY: {} orbit(s) hit the step budget without exiting",
            s.truncated
        )?;
    }
    writeln!(w)?;
    writeln!(w, "exit histogram (exit count)")?;
    for (e, c) in &s.exit_hist {
        writeln!(w, "{e} {c}")?;
    }
    writeln!(w)?;
    writeln!(w, "r-block histogram (blocks count)")?;
    for (b, c) in &s.r_block_hist {
        writeln!(w, "{b} {c}")?;
    }
    writeln!(w)?;
    writeln!(
        w,
        "per-height max exit (h count max_exit log3_h log3_h_sq max/log_sq max/log)"
    )?;
    for p in &s.per_h {
        writeln!(
            w,
            "{} {} {} {} {} {} {}",
            p.h,
            p.count,
            p.max_exit,
            p.log3_h,
            p.log3_h_sq,
            p.max_exit_over_log_sq.as_deref().unwrap_or("-"),
            p.max_exit_over_log.as_deref().unwrap_or("-"),
        )?;
    }
    Ok(())
}

/// Solution list as `a,b,c,p,n,u` rows.
pub fn write_solutions_csv<W: Write>(
    mut w: W,
    f: &QuadraticPoly,
    sols: &[BoundedNormSolution],
) -> io::Result<()> {
    writeln!(w, "a,b,c,p,n,u")?;
    for s in sols {
        writeln!(w, "{},{},{},{},{},{}", f.a(), f.b(), f.c(), s.p, s.n, s.u)?;
    }
    Ok(())
}

pub const DISTANCE_COLUMNS: &str =
    "a,b,c,root,exit,clearance_decimal,distance_decimal,nearest_num,nearest_den";

/// One distance row; decimals are 30-digit truncations, exact values stay
/// in the library report.
pub fn distance_csv_row(f: &QuadraticPoly, root: Root, rep: &DistanceReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        f.a(),
        f.b(),
        f.c(),
        root.label(),
        rep.exit_time,
        rep.exit_clearance.to_decimal(30),
        rep.cantor_distance.to_decimal(30),
        rep.nearest_point.numer(),
        rep.nearest_point.denom(),
    )
}

/// `num/den` rendering used wherever exact rationals ride in text output.
pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
