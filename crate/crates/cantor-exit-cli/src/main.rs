use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use cantor_exit::report::{
    distance_csv_row, rational_string, write_rows_csv, write_rows_jsonl, write_solutions_csv,
    write_summary, DISTANCE_COLUMNS,
};
use cantor_exit::{
    an_bound_check, brute_force_cantor_distance, cantor_distance_via_exit, check_shallow_cover,
    check_universal_lrun, classify_deep, clearance_bound_check, deep_block_report, delta_cantor,
    discriminant_identity_check, run_block_decomposition, run_scan, shallow_contribution,
    solve_bounded_norm, verify_early_r_with, verify_far_with, Certificate, OrbitRecord,
    QuadraticPoly, Root, ScanConfig,
};

#[derive(Parser)]
#[command(
    name = "cantor-exit",
    version,
    about = "Exact ternary-orbit toolkit: exit times of quadratic irrationals from the middle-third Cantor set"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a certified interval verification and write its certificate
    Verify {
        #[command(subcommand)]
        which: VerifyWhich,
    },
    /// Inspect one orbit: exit time, itinerary, runs, blocks, distances
    Orbit {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
        #[arg(long, value_enum)]
        root: RootArg,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        #[arg(long, default_value_t = 1)]
        deep_t: u32,
        /// Emit the report as JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive (or seeded random) corpus scan with per-orbit checks
    Scan {
        #[arg(long)]
        h_max: u32,
        /// Keep only rows with delta_C >= P/Q
        #[arg(long)]
        clearance: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        #[arg(long, default_value_t = 1)]
        deep_t: u32,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        #[arg(long, default_value = "scan.csv")]
        out: PathBuf,
        /// Cross-check distances against the brute-force oracle up to this exit time
        #[arg(long)]
        oracle_exit_cap: Option<usize>,
        /// Per-polynomial bounded-norm exponent measurement range (0 disables)
        #[arg(long, default_value_t = 40)]
        tm_n_max: u32,
        /// Random corpus of this size instead of exhaustion
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate bounded-norm 3-power solutions of a p^2 + b p 3^n + c 3^2n = u
    Solve {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
        #[arg(long)]
        u_max: u64,
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact distance to the Cantor set for one orbit
    Dist {
        #[arg(allow_negative_numbers = true)]
        a: i64,
        #[arg(allow_negative_numbers = true)]
        b: i64,
        #[arg(allow_negative_numbers = true)]
        c: i64,
        #[arg(long, value_enum)]
        root: RootArg,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Also run the brute-force oracle at this Cantor level
        #[arg(long)]
        oracle_level: Option<usize>,
        /// Print the CSV row instead of text
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Subcommand)]
enum VerifyWhich {
    /// delta_C >= lower forces an M symbol within steps 0..=2
    Far {
        #[arg(long, default_value = "1/25")]
        lower: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// lower <= delta_C < upper forces M by step 4 or R by step 5
    #[command(name = "early-r")]
    EarlyR {
        #[arg(long, default_value = "1/50")]
        lower: String,
        #[arg(long, default_value = "1/25")]
        upper: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RootArg {
    Plus,
    Minus,
}

impl From<RootArg> for Root {
    fn from(r: RootArg) -> Root {
        match r {
            RootArg::Plus => Root::Plus,
            RootArg::Minus => Root::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Jsonl,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    s.parse::<BigRational>()
        .map_err(|e| anyhow::anyhow!("invalid rational {s:?}: {e}"))
}

fn poly(a: i64, b: i64, c: i64) -> Result<QuadraticPoly> {
    QuadraticPoly::from_i64(a, b, c).context("invalid polynomial")
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().cmd {
        Cmd::Verify { which } => cmd_verify(which),
        Cmd::Orbit {
            a,
            b,
            c,
            root,
            max_steps,
            deep_t,
            json,
        } => cmd_orbit(a, b, c, root.into(), max_steps, deep_t, json),
        Cmd::Scan {
            h_max,
            clearance,
            max_steps,
            deep_t,
            format,
            out,
            oracle_exit_cap,
            tm_n_max,
            sample,
            seed,
        } => cmd_scan(
            h_max,
            clearance,
            max_steps,
            deep_t,
            format,
            out,
            oracle_exit_cap,
            tm_n_max,
            sample,
            seed,
        ),
        Cmd::Solve {
            a,
            b,
            c,
            u_max,
            n_max,
            out,
        } => cmd_solve(a, b, c, u_max, n_max, out),
        Cmd::Dist {
            a,
            b,
            c,
            root,
            max_steps,
            oracle_level,
            csv,
        } => cmd_dist(a, b, c, root.into(), max_steps, oracle_level, csv),
    }
}

fn write_certificate(cert: &Certificate, out: Option<PathBuf>, default_name: &str) -> Result<()> {
    let path = out.unwrap_or_else(|| PathBuf::from(default_name));
    fs::write(&path, cert.to_text()).with_context(|| format!("writing {}", path.display()))?;
    if cert.is_degenerate() {
        println!("OK (degenerate: empty cover certifies nothing)");
    } else {
        println!("OK");
    }
    println!(
        "certificate: {} ({} branches)",
        path.display(),
        cert.branches.len()
    );
    Ok(())
}

fn cmd_verify(which: VerifyWhich) -> Result<ExitCode> {
    match which {
        VerifyWhich::Far { lower, out } => {
            let lower = parse_rational(&lower)?;
            let cert = verify_far_with(&lower)?;
            write_certificate(&cert, out, "certificate-far.txt")?;
        }
        VerifyWhich::EarlyR { lower, upper, out } => {
            let lower = parse_rational(&lower)?;
            let upper = parse_rational(&upper)?;
            let cert = verify_early_r_with(&lower, &upper)?;
            write_certificate(&cert, out, "certificate-early-r.txt")?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_orbit(
    a: i64,
    b: i64,
    c: i64,
    root: Root,
    max_steps: usize,
    deep_t: u32,
    json: bool,
) -> Result<ExitCode> {
    let f = poly(a, b, c)?;
    let rec = OrbitRecord::for_root(&f, root, max_steps).context("orbit construction")?;
    let (dc, dc_k) = delta_cantor(&rec.theta0);
    let blocks = run_block_decomposition(&rec);

    if rec.truncated {
        let msg = format!(
            "orbit truncated after {max_steps} steps without entering M; \
             itinerary prefix {}...",
            &rec.itinerary_string()[..rec.itinerary.len().min(40)]
        );
        if json {
            println!(
                "{}",
                serde_json::json!({
                    "a": a, "b": b, "c": c, "root": root.label(),
                    "truncated": true, "max_steps": max_steps,
                })
            );
        } else {
            println!("{msg}");
        }
        return Ok(ExitCode::SUCCESS);
    }

    let exit = rec.exit_time.expect("complete");
    let lrun = check_universal_lrun(&rec)?;
    let cls = classify_deep(&rec, deep_t)?;
    let shallow = shallow_contribution(&rec, deep_t)?;
    let an = an_bound_check(&f, &rec)?;
    let clearance = clearance_bound_check(&f, &rec)?;
    let cover_ok = check_shallow_cover(&rec)?;
    let strat = cantor_exit::deficiency_stratification(&f, &rec)?;
    let deep_blocks = deep_block_report(&f, &rec, deep_t)?;
    let dist = cantor_distance_via_exit(&rec)?;

    let all_ok = an.all_ok()
        && clearance.clearance_ok
        && clearance.distance_ok
        && lrun.all_ok()
        && cover_ok
        && strat.violations.is_empty()
        && deep_blocks
            .iter()
            .all(|e| e.within_u_t && e.in_enumeration && e.identity_ok);

    if json {
        let report = serde_json::json!({
            "a": a, "b": b, "c": c, "root": root.label(),
            "h": f.height().to_string(),
            "delta": f.discriminant().to_string(),
            "baby_resonant": f.is_baby_resonant(),
            "alpha": rec.alpha.to_string(),
            "alpha_decimal": rec.alpha.to_decimal(30),
            "theta0_decimal": rec.theta0.to_decimal(30),
            "exit": exit,
            "itinerary": rec.itinerary_string(),
            "n_star": rec.n_star,
            "delta_c": dc.to_string(),
            "delta_c_decimal": dc.to_decimal(30),
            "delta_c_argmin": dc_k,
            "r_blocks": blocks.r_blocks,
            "l_runs": rec.l_run_lengths.iter().map(|(n, l)| (*n, *l)).collect::<Vec<_>>(),
            "transitions": lrun.entries.iter().map(|e| serde_json::json!({
                "n0": e.n0, "k": e.k, "geometry_ok": e.geometry_ok,
                "height_ok": e.height_ok, "margin": e.margin,
            })).collect::<Vec<_>>(),
            "deficiencies": cls.deficiency.iter().map(|(n, d)| (*n, *d)).collect::<Vec<_>>(),
            "deep": cls.deep,
            "shallow_sum": shallow.total,
            "shallow_ratio": format!("{:.6}", shallow.ratio_vs_log3h_sq),
            "a_n": an.entries.iter().map(|e| serde_json::json!({
                "n": e.n, "a_n": e.a_n.to_string(), "main_ok": e.main_ok, "run_ok": e.run_ok,
            })).collect::<Vec<_>>(),
            "exit_clearance": dist.exit_clearance.to_string(),
            "exit_clearance_decimal": dist.exit_clearance.to_decimal(30),
            "distance": dist.cantor_distance.to_string(),
            "distance_decimal": dist.cantor_distance.to_decimal(30),
            "nearest_point": rational_string(&dist.nearest_point),
            "checks_ok": all_ok,
        });
        println!("{report}");
    } else {
        println!("polynomial ({a}, {b}, {c})   H = {}, delta = {}", f.height(), f.discriminant());
        println!(
            "root {}: alpha = {} = {}",
            root.label(),
            rec.alpha,
            rec.alpha.to_decimal(12)
        );
        println!("theta0 = {}", rec.theta0.to_decimal(12));
        println!("exit time {exit}, itinerary {}", rec.itinerary_string());
        println!(
            "delta_C = {} = {} (argmin k = {dc_k})",
            dc,
            dc.to_decimal(12)
        );
        println!("R-blocks {:?}, L-runs {:?}", blocks.r_blocks, rec.l_run_lengths);
        for e in &lrun.entries {
            println!(
                "transition n0={} k={} geometry={} height_bound={} margin={:?}",
                e.n0, e.k, e.geometry_ok, e.height_ok, e.margin
            );
        }
        println!(
            "deep (T={deep_t}) {:?}, deficiencies {:?}",
            cls.deep, cls.deficiency
        );
        println!(
            "shallow contribution {} (ratio vs (log3 H)^2 + 1: {:.6})",
            shallow.total, shallow.ratio_vs_log3h_sq
        );
        for e in &an.entries {
            println!(
                "A_N at n={}: {} main_ok={} run_ok={:?}",
                e.n, e.a_n, e.main_ok, e.run_ok
            );
        }
        for e in &deep_blocks {
            println!(
                "deep block n={} u_n={} within_U_T={} enumerated={} identity={}",
                e.n, e.u_n, e.within_u_t, e.in_enumeration, e.identity_ok
            );
        }
        println!(
            "exit clearance = {} = {}",
            dist.exit_clearance,
            dist.exit_clearance.to_decimal(12)
        );
        println!(
            "distance = {} = {}",
            dist.cantor_distance,
            dist.cantor_distance.to_decimal(12)
        );
        println!("nearest Cantor point = {}", dist.nearest_point);
        println!(
            "checks: an={} clearance={} lrun={} cover={} strat={}",
            an.all_ok(),
            clearance.clearance_ok && clearance.distance_ok,
            lrun.all_ok(),
            cover_ok,
            strat.violations.is_empty()
        );
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    h_max: u32,
    clearance: Option<String>,
    max_steps: usize,
    deep_t: u32,
    format: FormatArg,
    out: PathBuf,
    oracle_exit_cap: Option<usize>,
    tm_n_max: u32,
    sample: Option<usize>,
    seed: u64,
) -> Result<ExitCode> {
    let mut cfg = ScanConfig::new(h_max);
    cfg.max_steps = max_steps;
    cfg.deep_t = deep_t;
    cfg.oracle_exit_cap = oracle_exit_cap;
    cfg.tm_n_max = tm_n_max;
    if let Some(s) = &clearance {
        cfg.clearance_filter = Some(parse_rational(s)?);
    }
    if let Some(count) = sample {
        cfg.sample = Some(cantor_exit::scan::ScanSample { count, seed });
    }
    let output = run_scan(&cfg);

    let mut buf = Vec::new();
    match format {
        FormatArg::Csv => write_rows_csv(&mut buf, &output.rows)?,
        FormatArg::Jsonl => write_rows_jsonl(&mut buf, &output.rows)?,
    }
    fs::write(&out, &buf).with_context(|| format!("writing {}", out.display()))?;

    let summary_path = out.with_extension("summary.txt");
    let mut sbuf = Vec::new();
    write_summary(&mut sbuf, &output.summary)?;
    fs::write(&summary_path, &sbuf)
        .with_context(|| format!("writing {}", summary_path.display()))?;

    println!(
        "scanned {} rows (h_max {h_max}); wrote {} and {}",
        output.summary.rows,
        out.display(),
        summary_path.display()
    );
    if output.summary.truncated > 0 {
        println!(
            "ANOMALY: {} orbit(s) truncated at {} steps without exiting",
            output.summary.truncated, max_steps
        );
    }
    if output.summary.check_failures > 0 {
        println!("check failures: {}", output.summary.check_failures);
        return Ok(ExitCode::FAILURE);
    }
    println!("all checks passed");
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: i64, b: i64, c: i64, u_max: u64, n_max: u32, out: Option<PathBuf>) -> Result<ExitCode> {
    if u_max == 0 {
        bail!("u-max must be at least 1");
    }
    let f = poly(a, b, c)?;
    let sols = solve_bounded_norm(&f, u_max, n_max);
    for s in &sols {
        if !discriminant_identity_check(&f, s) {
            bail!("enumeration bug: solution (p={}, n={}, u={}) fails the discriminant identity", s.p, s.n, s.u);
        }
    }
    let mut buf = Vec::new();
    write_solutions_csv(&mut buf, &f, &sols)?;
    match out {
        Some(path) => {
            fs::write(&path, &buf).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "{} solution(s) with |u| <= {u_max}, n <= {n_max}; wrote {}",
                sols.len(),
                path.display()
            );
        }
        None => print!("{}", String::from_utf8(buf).expect("utf8 csv")),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_dist(
    a: i64,
    b: i64,
    c: i64,
    root: Root,
    max_steps: usize,
    oracle_level: Option<usize>,
    csv: bool,
) -> Result<ExitCode> {
    let f = poly(a, b, c)?;
    let rec = OrbitRecord::for_root(&f, root, max_steps).context("orbit construction")?;
    let report = cantor_distance_via_exit(&rec)
        .context("orbit did not exit within the step budget")?;
    if csv {
        println!("{DISTANCE_COLUMNS}");
        println!("{}", distance_csv_row(&f, root, &report));
    } else {
        println!(
            "alpha = {} (root {}), exit {}",
            rec.alpha,
            root.label(),
            report.exit_time
        );
        println!(
            "exit clearance = {} = {}",
            report.exit_clearance,
            report.exit_clearance.to_decimal(30)
        );
        println!(
            "distance = {} = {}",
            report.cantor_distance,
            report.cantor_distance.to_decimal(30)
        );
        println!("nearest Cantor point = {}", report.nearest_point);
    }
    if let Some(level) = oracle_level {
        let brute = brute_force_cantor_distance(&rec.theta0, level);
        if level >= report.exit_time {
            if brute != report.cantor_distance {
                bail!(
                    "oracle mismatch at level {level}: brute force {} vs identity {}",
                    brute.to_decimal(30),
                    report.cantor_distance.to_decimal(30)
                );
            }
            println!("oracle level {level}: exact match");
        } else {
            println!(
                "oracle level {level} < exit {}: union distance {} is a lower bound only",
                report.exit_time,
                brute.to_decimal(30)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}
