//! Command-line front end: load bodies and plank sets, run normalization,
//! ratio scans, cover verification and bound certification.
//!
//! Exit codes: 0 success, 1 I/O or parse error, 2 certificate failure,
//! 3 failed certification inequality, 4 cover counterexample found.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde::Serialize;

use crate::bounds;
use crate::error::{Error, Result};
use crate::geometry::{difference_body, Direction};
use crate::io;
use crate::john;
use crate::lp;
use crate::planks::{self, CoverVerdict, VerifyConfig};
use crate::sphere::{self, SearchConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CERT_FAILURE: i32 = 2;
pub const EXIT_INEQUALITY_FAILED: i32 = 3;
pub const EXIT_COUNTEREXAMPLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "plankbound", version, about = "Plank-cover lower bound certification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for randomized sweeps. All defaults are deterministic, so this
    /// only matters for explicitly randomized procedures.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the difference body, bring it into John position and emit
    /// the transform plus a sandwich certificate.
    Normalize {
        #[arg(long)]
        body: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// MVEE accuracy.
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
    },
    /// Scan chord/width ratios over a direction set and report the minimum
    /// against the 2/(1+sqrt(d)) threshold.
    RatioScan {
        #[arg(long)]
        body: PathBuf,
        /// Number of scan directions (default 1024 per dimension).
        #[arg(long)]
        n: Option<usize>,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
    },
    /// Evaluate the full inequality chain for a (body, planks) pair.
    Certify {
        #[arg(long)]
        body: PathBuf,
        #[arg(long)]
        planks: PathBuf,
        /// Output directory for report.json and report.csv (stdout JSON
        /// when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run the cover verifier before certifying.
        #[arg(long)]
        verify_cover: bool,
        /// Margin tolerance for the cover verifier.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Print the sharp instance attaining 2/(1+sqrt(d)).
    Witness {
        #[arg(long)]
        dim: usize,
    },
    /// Write a tight slab cover in a given direction.
    GenCover {
        #[arg(long)]
        body: PathBuf,
        /// Direction as comma-separated coordinates, e.g. "1,0".
        #[arg(long)]
        u: String,
        /// Number of slabs.
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Serialize)]
struct CertificateFile {
    dimension: usize,
    inner: f64,
    outer: f64,
    outer_bound: f64,
    passed: bool,
}

fn configure_threads() {
    if let Ok(raw) = std::env::var("PLANKBOUND_THREADS") {
        if let Ok(k) = raw.trim().parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn parse_direction(raw: &str, dim: usize) -> Result<Direction> {
    let coords = raw
        .split(',')
        .map(|s| {
            s.trim().parse::<f64>().map_err(|_| Error::InvalidField {
                field: "u",
                message: format!("cannot parse coordinate {s:?}"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    if coords.len() != dim {
        return Err(Error::InvalidField {
            field: "u",
            message: format!("expected {dim} coordinates, got {}", coords.len()),
        });
    }
    Direction::normalized(DVector::from_row_slice(&coords))
}

fn cmd_normalize(body_path: &Path, out_dir: &Path, eps: f64) -> Result<i32> {
    let body = io::load_body(body_path)?;
    let l = difference_body(&body)?;
    std::fs::create_dir_all(out_dir)?;
    io::save_symmetric_body(&out_dir.join("difference_body.json"), &l)?;
    let norm = match john::john_normalize(&l, eps) {
        Ok(n) => n,
        Err(Error::NormalizationFailed { inner, threshold }) => {
            eprintln!("certificate failure: inner radius {inner} below {threshold}");
            return Ok(EXIT_CERT_FAILURE);
        }
        Err(e) => return Err(e),
    };
    io::save_matrix(&out_dir.join("transform.json"), &norm.transform)?;
    io::save_symmetric_body(&out_dir.join("normalized.json"), &norm.body)?;
    let d = body.dim();
    let outer_bound = (d as f64).sqrt() * (1.0 + 1e-6);
    let passed = norm.certificate.inner >= 1.0 - 1e-4 && norm.certificate.outer <= outer_bound;
    let cert = CertificateFile {
        dimension: d,
        inner: norm.certificate.inner,
        outer: norm.certificate.outer,
        outer_bound,
        passed,
    };
    std::fs::write(
        out_dir.join("certificate.json"),
        serde_json::to_string_pretty(&cert)?,
    )?;
    println!(
        "normalized: inner = {}, outer = {}, bound = {}",
        cert.inner, cert.outer, cert.outer_bound
    );
    Ok(if passed { EXIT_OK } else { EXIT_CERT_FAILURE })
}

fn cmd_ratio_scan(body_path: &Path, n: Option<usize>, out: Option<&Path>, eps: f64) -> Result<i32> {
    let body = io::load_body(body_path)?;
    let d = body.dim();
    let n = n.unwrap_or(1024 * d);
    let l = difference_body(&body)?;
    let norm = john::john_normalize(&l, eps)?;
    let scan_body = norm.body;

    let mut csv = String::from("direction,ell,w,ratio\n");
    let dirs = sphere::sphere_directions(d, n);
    let mut scan_min: Option<(f64, Direction)> = None;
    for u in &dirs {
        let ell = lp::chord_length(scan_body.as_polytope(), u)?;
        let w = scan_body.width_in_direction(u)?;
        let ratio = ell / w;
        let dir_str = u
            .coords()
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(";");
        csv.push_str(&format!("{dir_str},{ell},{w},{ratio}\n"));
        if scan_min.as_ref().map_or(true, |(m, _)| ratio < *m) {
            scan_min = Some((ratio, u.clone()));
        }
    }

    let search = SearchConfig {
        seeds: n,
        refinements: 64,
        f_tol: 1e-9,
        max_iters: 500,
    };
    let (min_dir, min_ratio) =
        bounds::min_chord_width_ratio(&scan_body, &norm.certificate, &search)?;
    let threshold = 2.0 / (1.0 + (d as f64).sqrt());
    let passed = min_ratio >= threshold - 1e-6;
    let dir_str = min_dir
        .coords()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";");
    csv.push_str(&format!("min_ratio,{min_ratio},{dir_str}\n"));
    csv.push_str(&format!("threshold,{threshold}\n"));
    csv.push_str(&format!("pass,{passed}\n"));

    match out {
        Some(p) => std::fs::write(p, csv)?,
        None => print!("{csv}"),
    }
    println!("min ratio = {min_ratio}, threshold = {threshold}, pass = {passed}");
    Ok(if passed { EXIT_OK } else { EXIT_CERT_FAILURE })
}

fn cmd_certify(
    body_path: &Path,
    planks_path: &Path,
    out: Option<&Path>,
    verify_cover: bool,
    tol: Option<f64>,
) -> Result<i32> {
    let body = io::load_body(body_path)?;
    let loaded = io::load_planks(planks_path)?;
    if loaded.renormalized {
        eprintln!("warning: plank normals were renormalized on load");
    }
    if loaded.dimension != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: loaded.dimension,
        });
    }
    let body_id = body_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "body".to_string());

    let mut refuted = None;
    if verify_cover {
        let mut cfg = VerifyConfig::for_dimension(body.dim());
        if let Some(t) = tol {
            cfg.tol = t;
        }
        if let CoverVerdict::Counterexample {
            witness, margin, ..
        } = planks::covers(&loaded.planks, &body, &cfg)?
        {
            refuted = Some((witness, margin));
        }
    }

    let report = bounds::certify_cover_bound(&body, &loaded.planks, &body_id)?;
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), report.to_json()?)?;
            std::fs::write(dir.join("report.csv"), report.to_csv())?;
        }
        None => println!("{}", report.to_json()?),
    }

    if let Some((witness, margin)) = refuted {
        let coords = witness
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        println!("counterexample: witness = ({coords}), margin = {margin}");
        println!("cover hypothesis refuted; inequalities are void");
        return Ok(EXIT_COUNTEREXAMPLE);
    }
    if let Some(name) = report.failing_inequality() {
        println!("inequality failed: {name}");
        return Ok(EXIT_INEQUALITY_FAILED);
    }
    println!(
        "all inequalities pass: total_rw = {}, total_width_over_ell = {}",
        report.total_rw, report.total_width_over_ell
    );
    Ok(EXIT_OK)
}

fn cmd_witness(dim: usize) -> Result<i32> {
    let w = bounds::sharp_witness(dim)?;
    let bound = 2.0 / (1.0 + (dim as f64).sqrt());
    println!("d      = {dim}");
    println!("r      = {}", w.r);
    println!("x      = {}", w.x);
    println!("h      = {}", w.h);
    println!("ratio  = {}", w.ratio);
    println!("bound  = {bound}");
    println!("slack  = {}", w.ratio - bound);
    Ok(EXIT_OK)
}

fn cmd_gen_cover(body_path: &Path, u: &str, m: usize, out: &Path) -> Result<i32> {
    let body = io::load_body(body_path)?;
    let dir = parse_direction(u, body.dim())?;
    let cover = planks::slab_cover(&body, &dir, m)?;
    io::save_planks(out, body.dim(), &cover)?;
    println!("wrote {} planks to {}", cover.len(), out.display());
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Normalize { body, out, eps } => cmd_normalize(body, out, *eps),
        Command::RatioScan { body, n, out, eps } => {
            cmd_ratio_scan(body, *n, out.as_deref(), *eps)
        }
        Command::Certify {
            body,
            planks,
            out,
            verify_cover,
            tol,
        } => cmd_certify(body, planks, out.as_deref(), *verify_cover, *tol),
        Command::Witness { dim } => cmd_witness(*dim),
        Command::GenCover { body, u, m, out } => cmd_gen_cover(body, u, *m, out),
    }
}

/// Runs a parsed command and maps errors onto the exit-code contract.
pub fn run(cli: &Cli) -> i32 {
    configure_threads();
    match dispatch(cli) {
        Ok(code) => code,
        Err(Error::NormalizationFailed { inner, threshold }) => {
            eprintln!("certificate failure: inner radius {inner} below {threshold}");
            EXIT_CERT_FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
