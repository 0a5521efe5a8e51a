//! Command-line driver: classification, torus certificates, quasi-inverses,
//! gap splitting, and the lacunary brute-force verifiers, with JSON/CSV
//! output. Exit codes: 0 success, 1 mathematical anomaly, 2 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lacuna_core::lattice::LatticePoint;
use lacuna_core::poly::IntLaurentPoly;
use lacuna_core::quasi::QuasiInverse;
use lacuna_core::torus::TorusPoint;
use lacuna_core::{gap, lacunary, parse_poly, quasi, torus};

#[derive(Parser)]
#[command(name = "lacuna", version, about = "Divisibility toolkit for integer Laurent polynomials")]
struct Cli {
    /// Worker threads for parallel sections (0 = library default).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial: inline expression in x, y, z or a path to polynomial JSON.
    #[arg(long = "f")]
    f: String,
}

#[derive(Subcommand)]
enum Command {
    /// Exact atoral/toral decision for one-variable polynomials.
    Classify(PolyArg),
    /// Sample the zero set of f on the torus; CSV rows t_1,...,t_d,|f|.
    UvSample {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Merge radius for reporting one point per zero cluster; 0 reports all.
        #[arg(long, default_value_t = 0.0)]
        cluster: f64,
    },
    /// Certify that f has no zeros on the torus via a Lipschitz grid bound.
    CertifyEmpty {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Compute the quasi-inverse f^# (h = 1) for f without torus zeros.
    Qinv {
        #[command(flatten)]
        poly: PolyArg,
        /// Starting grid for the doubling loop.
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
        /// Also report the certified tail mass at this radius.
        #[arg(long)]
        radius: Option<usize>,
        /// Experimental: user-supplied h (expression or JSON path).
        #[arg(long)]
        h: Option<String>,
        /// Write the QuasiInverse JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gap radius R and gap constant M = 3R for a height bound H.
    Gapconst {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "H")]
        height: u64,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Split a multiple r of f into gap-separated clusters and certify each.
    Split {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "r")]
        r: String,
        #[arg(long = "H")]
        height: Option<u64>,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Replay the splitting inequalities for r = p + q with explicit margins.
    Trace {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "p")]
        p: String,
        #[arg(long = "q")]
        q: String,
        #[arg(long = "H")]
        height: u64,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
    /// Lacunary independence verifiers.
    #[command(subcommand)]
    Lacunary(LacunaryCommand),
    /// Reproduce built-in worked examples; writes a run directory.
    #[command(subcommand)]
    Demo(DemoCommand),
}

#[derive(Subcommand)]
enum LacunaryCommand {
    /// Exhaustive spaced-divisibility check over a family and configuration.
    Verify {
        #[command(flatten)]
        poly: PolyArg,
        /// Family member, repeatable.
        #[arg(long = "member", required = true)]
        members: Vec<String>,
        /// Configuration points, e.g. "0,0;10,0".
        #[arg(long)]
        points: String,
        #[arg(long)]
        spacing: usize,
    },
    /// Randomized search for the smallest violation-free spacing.
    Msearch {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "member", required = true)]
        members: Vec<String>,
        #[arg(long, default_value_t = 12)]
        m_max: usize,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Frobenius squaring counterexample mod 2 up to gap 2^n.
    Frobenius {
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum DemoCommand {
    /// Atoral/toral verdicts and torus geometry for the worked examples.
    #[command(name = "exam-1-4")]
    Exam14 {
        #[arg(long, default_value = "runs/exam-1-4")]
        out: PathBuf,
    },
    /// Full pipeline for f = x - 2: qinv, gap constants, split, trace.
    #[command(name = "gap-x-minus-2")]
    GapXMinus2 {
        #[arg(long, default_value = "runs/gap-x-minus-2")]
        out: PathBuf,
    },
    /// Frobenius counterexample report.
    Frobenius {
        #[arg(long, default_value = "runs/frobenius")]
        out: PathBuf,
    },
}

/// Exit 1: a produced certificate contains a falsifying entry.
#[derive(Debug)]
struct Anomaly(String);

impl std::fmt::Display for Anomaly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "anomaly: {}", self.0)
    }
}

impl std::error::Error for Anomaly {}

fn load_poly(src: &str) -> Result<IntLaurentPoly> {
    let looks_like_path = src.ends_with(".json") || Path::new(src).exists();
    if looks_like_path {
        let text = fs::read_to_string(src).with_context(|| format!("reading {src}"))?;
        return Ok(serde_json::from_str(&text).with_context(|| format!("parsing {src}"))?);
    }
    Ok(parse_poly(src, None)?)
}

fn load_poly_dim(src: &str, dim: usize) -> Result<IntLaurentPoly> {
    let p = load_poly(src)?;
    if p.dim() == dim {
        return Ok(p);
    }
    // inline constants parse as d = 1; retry with the requested dimension
    Ok(parse_poly(src, Some(dim))?)
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn write_artifact<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<String> {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)?)?;
    Ok(name.to_string())
}

fn make_qinv(f: &IntLaurentPoly, grid: usize, eps: f64, h: Option<&str>) -> Result<QuasiInverse> {
    match h {
        None => Ok(quasi::compute_empty_variety(f, grid, eps)?),
        Some(src) => {
            let h = load_poly_dim(src, f.dim())?;
            Ok(quasi::attach_user_h(f, &h, grid.max(64), eps)?)
        }
    }
}

fn parse_points(src: &str, dim: usize) -> Result<Vec<LatticePoint>> {
    let mut out = Vec::new();
    for chunk in src.split(';') {
        let coords: Vec<i64> = chunk
            .split(',')
            .map(|c| c.trim().parse::<i64>().context("bad coordinate"))
            .collect::<Result<_>>()?;
        if coords.len() != dim {
            bail!("point '{chunk}' has {} coordinates, expected {dim}", coords.len());
        }
        out.push(LatticePoint::new(coords));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    #[cfg(feature = "parallel")]
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .ok();
    }

    match cli.command {
        Command::Classify(arg) => {
            let f = load_poly(&arg.f)?;
            emit(&torus::classify_d1(&f)?)
        }
        Command::UvSample { poly, grid, tol, cluster } => {
            let f = load_poly(&poly.f)?;
            let mut pts = torus::unitary_variety_sample(&f, grid, tol)?;
            if cluster > 0.0 {
                pts = torus::cluster_sample(&f, &pts, cluster);
            }
            let header: Vec<String> = (1..=f.dim()).map(|j| format!("t{j}")).collect();
            println!("{},absf", header.join(","));
            for p in &pts {
                let coords: Vec<String> = p.0.iter().map(|c| format!("{c:.17e}")).collect();
                let v = torus::eval_on_torus(&f, p).norm();
                println!("{},{v:.17e}", coords.join(","));
            }
            Ok(())
        }
        Command::CertifyEmpty { poly, grid } => {
            let f = load_poly(&poly.f)?;
            let cert = torus::empty_variety_certificate(&f, grid)?;
            let conclusive = cert.conclusive;
            emit(&cert)?;
            if !conclusive {
                bail!(Anomaly("certificate inconclusive at this grid".into()));
            }
            Ok(())
        }
        Command::Qinv { poly, grid, eps, radius, h, out } => {
            let f = load_poly(&poly.f)?;
            let q = make_qinv(&f, grid, eps, h.as_deref())?;
            if let Some(r) = radius {
                #[derive(Serialize)]
                struct TailReport {
                    radius: usize,
                    tail_mass: f64,
                }
                emit(&TailReport { radius: r, tail_mass: q.tail_mass(r) })?;
            }
            match out {
                Some(path) => fs::write(&path, serde_json::to_string_pretty(&q)?)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => emit(&q)?,
            }
            Ok(())
        }
        Command::Gapconst { poly, height, grid, eps } => {
            let f = load_poly(&poly.f)?;
            let q = quasi::compute_empty_variety(&f, grid, eps)?;
            let r = gap::gap_radius(&q, height)?;
            #[derive(Serialize)]
            struct GapReport {
                #[serde(rename = "R")]
                r: usize,
                #[serde(rename = "M")]
                m: usize,
            }
            emit(&GapReport { r, m: 3 * r })
        }
        Command::Split { poly, r, height, grid, eps } => {
            let f = load_poly(&poly.f)?;
            let r = load_poly_dim(&r, f.dim())?;
            let q = quasi::compute_empty_variety(&f, grid, eps)?;
            let cert = gap::split_and_verify(&q, &r, height)?;
            let ok = cert.all_divisible();
            emit(&cert)?;
            if !ok {
                bail!(Anomaly("a gap-separated cluster was not divisible".into()));
            }
            Ok(())
        }
        Command::Trace { poly, p, q, height, grid, eps } => {
            let f = load_poly(&poly.f)?;
            let p = load_poly_dim(&p, f.dim())?;
            let qp = load_poly_dim(&q, f.dim())?;
            let qi = quasi::compute_empty_variety(&f, grid, eps)?;
            let trace = gap::proof_trace(&qi, &p, &qp, height)?;
            let ok = trace.passes();
            emit(&trace)?;
            if !ok {
                bail!(Anomaly("a proof margin check failed".into()));
            }
            Ok(())
        }
        Command::Lacunary(cmd) => run_lacunary(cmd),
        Command::Demo(cmd) => run_demo(cmd),
    }
}

fn run_lacunary(cmd: LacunaryCommand) -> Result<()> {
    match cmd {
        LacunaryCommand::Verify { poly, members, points, spacing } => {
            let f = load_poly(&poly.f)?;
            let family: Vec<IntLaurentPoly> = members
                .iter()
                .map(|m| load_poly_dim(m, f.dim()))
                .collect::<Result<_>>()?;
            let pts = parse_points(&points, f.dim())?;
            let cfg = lacunary::SpacedConfiguration::new(pts, spacing)?;
            let rep = lacunary::verify_spaced_divisibility(&f, &family, &cfg)?;
            let violated = !rep.violations.is_empty();
            emit(&rep)?;
            if violated {
                bail!(Anomaly("spaced divisibility violated".into()));
            }
            Ok(())
        }
        LacunaryCommand::Msearch { poly, members, m_max, trials, seed } => {
            let f = load_poly(&poly.f)?;
            let family: Vec<IntLaurentPoly> = members
                .iter()
                .map(|m| load_poly_dim(m, f.dim()))
                .collect::<Result<_>>()?;
            emit(&lacunary::empirical_m_search(&f, &family, m_max, trials, seed)?)
        }
        LacunaryCommand::Frobenius { n } => {
            let witnesses = lacunary::frobenius_counterexample(n)?;
            let broken = witnesses.iter().any(|w| {
                !w.squaring_identity
                    || !w.sum_divisible_mod2
                    || w.parts_divisible_mod2.iter().any(|b| *b)
                    || w.divisible_over_z
            });
            emit(&witnesses)?;
            if broken {
                bail!(Anomaly("a Frobenius witness failed".into()));
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Manifest {
    demo: String,
    artifacts: Vec<String>,
    summary: Vec<String>,
}

fn finish_demo(dir: &Path, demo: &str, artifacts: Vec<String>, summary: Vec<String>) -> Result<()> {
    let manifest = Manifest {
        demo: demo.into(),
        artifacts,
        summary: summary.clone(),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    for line in &summary {
        println!("{line}");
    }
    println!("artifacts in {}", dir.display());
    Ok(())
}

fn run_demo(cmd: DemoCommand) -> Result<()> {
    match cmd {
        DemoCommand::Exam14 { out } => {
            fs::create_dir_all(&out)?;
            let mut artifacts = Vec::new();
            let mut summary = Vec::new();

            for src in ["x^2 - x - 1", "x^4 - x^3 - x^2 - x + 1", "5x^2 - 6x + 5"] {
                let c = torus::classify_d1(&parse_poly(src, None)?)?;
                summary.push(format!("{src}: {:?}", c.verdict));
                let name = format!(
                    "classify-{}.json",
                    src.replace(' ', "").replace('^', "p").replace('+', "_").replace('-', "m")
                );
                artifacts.push(write_artifact(&out, &name, &c)?);
            }

            let f = parse_poly("1 + x + y", None)?;
            let pts = torus::unitary_variety_sample(&f, 64, 1e-10)?;
            let reps = torus::cluster_sample(&f, &pts, 1e-3);
            summary.push(format!("1+x+y: {} zero clusters on the torus", reps.len()));
            artifacts.push(write_artifact(&out, "uv-1_x_y.json", &reps)?);

            let g = parse_poly("3 + x + y", None)?;
            let cert = torus::empty_variety_certificate(&g, 256)?;
            summary.push(format!(
                "3+x+y: empty zero set certified, min |f| >= {:.6}",
                cert.certified_min
            ));
            artifacts.push(write_artifact(&out, "certify-3_x_y.json", &cert)?);

            let band = parse_poly("3 + x + y + x^-1 + y^-1", None)?;
            let pts = torus::unitary_variety_sample(&band, 64, 1e-8)?;
            summary.push(format!(
                "3+x+y+x^-1+y^-1: sampled {} points on the zero curve",
                pts.len()
            ));
            let sample: Vec<&TorusPoint> = pts.iter().take(50).collect();
            artifacts.push(write_artifact(&out, "uv-band.json", &sample)?);

            finish_demo(&out, "exam-1-4", artifacts, summary)
        }
        DemoCommand::GapXMinus2 { out } => {
            fs::create_dir_all(&out)?;
            let mut artifacts = Vec::new();
            let mut summary = Vec::new();

            let f = parse_poly("x - 2", None)?;
            let q = quasi::compute_empty_variety(&f, 32, 1e-9)?;
            summary.push(format!("qinv: residual {:.3e}", q.residual));
            artifacts.push(write_artifact(&out, "qinv.json", &q)?);

            for h in [1u64, 8] {
                let r = gap::gap_radius(&q, h)?;
                summary.push(format!("H = {h}: R = {r}, M = {}", 3 * r));
            }

            let r = f.add(&parse_poly("x^20", None)?.mul(&f)?)?;
            let cert = gap::split_and_verify(&q, &r, Some(2))?;
            summary.push(format!(
                "split (x-2) + x^20(x-2): {} clusters, all divisible: {}",
                cert.clusters.len(),
                cert.all_divisible()
            ));
            artifacts.push(write_artifact(&out, "split.json", &cert)?);

            let trace = gap::proof_trace(&q, &f, &parse_poly("x^20", None)?.mul(&f)?, 2)?;
            summary.push(format!("trace margins pass: {}", trace.passes()));
            artifacts.push(write_artifact(&out, "trace.json", &trace)?);

            if !cert.all_divisible() || !trace.passes() {
                bail!(Anomaly("gap pipeline check failed".into()));
            }
            finish_demo(&out, "gap-x-minus-2", artifacts, summary)
        }
        DemoCommand::Frobenius { out } => {
            fs::create_dir_all(&out)?;
            let witnesses = lacunary::frobenius_counterexample(8)?;
            let artifacts = vec![write_artifact(&out, "witnesses.json", &witnesses)?];
            let summary: Vec<String> = witnesses
                .iter()
                .map(|w| {
                    format!(
                        "n = {}: gap {} identity mod 2 holds, divisible over Z: {}",
                        w.n, w.gap, w.divisible_over_z
                    )
                })
                .collect();
            finish_demo(&out, "frobenius", artifacts, summary)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Anomaly>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
