//! `hfock`: tables, kernel evaluations and verification suites from the
//! command line. Output is JSON (with `schema: 1`) or CSV.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use hfock_core::bargmann::bargmann_grid;
use hfock_core::dbar::{fock_poly_kernel, DbarProblem};
use hfock_core::expint::{en_scaled, en_value};
use hfock_core::golden::Golden;
use hfock_core::hfock::{GramMatrix, HormanderFock};
use hfock_core::lerch::{cm_evidence, gram_phi, hurwitz_zeta, ml_condition_audit, phi, uniform_grid, MlKernel};
use hfock_core::moments::eta_table;
use hfock_core::sampling::{disk_points, rng};
use hfock_core::verify::{run_suite, VerifyOptions, SUITES};
use hfock_core::{Error, C64};

use output::{fmt, Report};

#[derive(Parser, Debug)]
#[command(name = "hfock", version, about = "Hörmander-Fock space numerics")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Target tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Largest index (moments table, E_n family, bound suite).
    #[arg(long, global = true)]
    nmax: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random point sets (ChaCha8).
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Number of random points.
    #[arg(long, global = true)]
    points: Option<usize>,
    /// Golden-values file; the bundled file when absent.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of η_n with logarithms, error estimates and routes.
    Moments,
    /// E_n(x) for one order, or the family 1..=nmax.
    Expint {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// The entire function E(z) = Σ zⁿ/ηₙ.
    Efun {
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<C64>,
    },
    /// The reproducing kernel K(z,w) = E(z·w̄).
    Kernel {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: C64,
        /// Scale by η₀ so the kernel is 1 at the origin.
        #[arg(long)]
        normalized: bool,
    },
    /// Gram matrix of a kernel on seeded random points.
    Gram {
        #[arg(long, value_enum, default_value_t = GramKernel::K)]
        kernel: GramKernel,
        /// Order for the phi and poly-fock kernels.
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Sampling radius (defaults: 2 for k and poly-fock, 0.95 for phi).
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        normalized: bool,
    },
    /// The η-Bargmann kernel A(z,x) on a grid.
    Bargmann {
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<C64>,
        #[arg(long, required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
    },
    /// Disk kernels, Hurwitz ζ and ML-class audits.
    Lerch {
        #[command(subcommand)]
        action: LerchAction,
    },
    /// Residual report for a ∂̄ problem file.
    Dbar {
        /// JSON file {f, u0, samples, h, tol} with coefficients as [re, im].
        #[arg(long)]
        problem: PathBuf,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum GramKernel {
    K,
    Phi,
    PolyFock,
}

#[derive(Subcommand, Debug)]
enum LerchAction {
    /// φ_n(z) = Σ zᵏ/(k+n).
    Phi {
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, required = true, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Vec<C64>,
    },
    /// Hurwitz ζ(s,a).
    Zeta {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
    },
    /// Finite-difference sign test for a ↦ φ_n(−a) on 0.1, 0.2, …
    Cm {
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 6)]
        kmax: usize,
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
    /// ML-class conditions for φ̃_n or η₀K.
    Audit {
        #[arg(long, value_enum)]
        kernel: AuditKernel,
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum AuditKernel {
    PhiTilde,
    Eta0K,
}

/// Accepts `1.5`, `1.5,-2`, `1.5-2i`, `-2i` and `i`.
fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {s:?} as a complex number (use a, a,b or a+bi)");
    if let Ok(v) = t.parse::<f64>() {
        return Ok(C64::new(v, 0.0));
    }
    if let Some((a, b)) = t.split_once(',') {
        return Ok(C64::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
    }
    let body = t.strip_suffix('i').ok_or_else(bad)?;
    // split at the last sign that is not an exponent sign or the leading sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let imag = |p: &str| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(i) => Ok(C64::new(body[..i].parse().map_err(|_| bad())?, imag(&body[i..])?)),
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

enum Failure {
    Core(Error),
    Io(String),
    Verify(Report),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn complex_json(z: C64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn space() -> Result<HormanderFock<f64>, Failure> {
    Ok(HormanderFock::new()?)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Moments => {
            let n_max = c.nmax.unwrap_or(30);
            let t = eta_table(n_max, c.tol)?;
            let mut rep = Report::new("moments", &["n", "eta", "log_eta", "abs_err", "route"]);
            for n in 0..=n_max {
                rep.row(vec![
                    n.to_string(),
                    t.eta[n].map(fmt).unwrap_or_default(),
                    fmt(t.log_eta[n]),
                    t.abs_err[n].map(fmt).unwrap_or_default(),
                    t.route[n].as_str().to_string(),
                ]);
            }
            rep.json["n_max"] = json!(n_max);
            rep.json["quadrature_checked_to"] = json!(t.quadrature_checked_to);
            rep.json["rows"] = json!((0..=n_max)
                .map(|n| json!({
                    "n": n, "eta": t.eta[n], "log_eta": t.log_eta[n],
                    "abs_err": t.abs_err[n], "route": t.route[n].as_str()
                }))
                .collect::<Vec<_>>());
            Ok(rep)
        }
        Command::Expint { x, order } => {
            let orders: Vec<usize> = match c.nmax {
                Some(m) => (1..=m).collect(),
                None => vec![*order],
            };
            let mut rep = Report::new("expint", &["n", "x", "value", "scaled", "method"]);
            let mut rows = Vec::new();
            for n in orders {
                let v = en_value(n, *x)?;
                let scaled = en_scaled(n, *x)?;
                let method = format!("{:?}", v.method).to_lowercase();
                rep.row(vec![n.to_string(), fmt(*x), fmt(v.value), fmt(scaled), method.clone()]);
                rows.push(json!({ "n": n, "x": x, "value": v.value, "scaled": scaled, "method": method }));
            }
            rep.json["rows"] = json!(rows);
            Ok(rep)
        }
        Command::Efun { z } => {
            let sp = space()?;
            let mut rep = Report::new("efun", &["z_re", "z_im", "e_re", "e_im"]);
            let mut rows = Vec::new();
            for &p in z {
                let v = sp.eval_e(p, c.tol)?;
                rep.row(vec![fmt(p.re), fmt(p.im), fmt(v.re), fmt(v.im)]);
                rows.push(json!({ "z": complex_json(p), "value": complex_json(v) }));
            }
            rep.json["rows"] = json!(rows);
            Ok(rep)
        }
        Command::Kernel { z, w, normalized } => {
            let sp = space()?;
            let v = sp.kernel_k(*z, *w, c.tol, *normalized)?;
            let mut rep = Report::new("kernel", &["z_re", "z_im", "w_re", "w_im", "k_re", "k_im"]);
            rep.row(vec![fmt(z.re), fmt(z.im), fmt(w.re), fmt(w.im), fmt(v.re), fmt(v.im)]);
            rep.json["z"] = complex_json(*z);
            rep.json["w"] = complex_json(*w);
            rep.json["normalized"] = json!(normalized);
            rep.json["value"] = complex_json(v);
            Ok(rep)
        }
        Command::Gram {
            kernel,
            order,
            radius,
            normalized,
        } => {
            let count = c.points.unwrap_or(20);
            let (g, label, r): (GramMatrix<f64>, String, f64) = match kernel {
                GramKernel::K => {
                    let r = radius.unwrap_or(2.0);
                    let pts = disk_points(&mut rng(c.seed), count, r);
                    (space()?.gram_k(&pts, c.tol, *normalized)?, "k".into(), r)
                }
                GramKernel::Phi => {
                    let r = radius.unwrap_or(0.95);
                    let pts = disk_points(&mut rng(c.seed), count, r);
                    (gram_phi(*order, &pts)?, format!("phi_{order}"), r)
                }
                GramKernel::PolyFock => {
                    let r = radius.unwrap_or(2.0);
                    let pts = disk_points(&mut rng(c.seed), count, r);
                    (
                        GramMatrix::build(&pts, |z, w| fock_poly_kernel(*order, z, w))?,
                        format!("poly_fock_{order}"),
                        r,
                    )
                }
            };
            let mut rep = Report::new("gram", &["kernel", "points", "radius", "seed", "min_eig", "trace", "psd"]);
            rep.row(vec![
                label.clone(),
                count.to_string(),
                fmt(r),
                c.seed.to_string(),
                fmt(g.min_eig),
                fmt(g.trace),
                g.is_psd().to_string(),
            ]);
            rep.json["kernel"] = json!(label);
            rep.json["points"] = json!(g.points.iter().map(|&p| complex_json(p)).collect::<Vec<_>>());
            rep.json["radius"] = json!(r);
            rep.json["seed"] = json!(c.seed);
            rep.json["min_eig"] = json!(g.min_eig);
            rep.json["trace"] = json!(g.trace);
            rep.json["psd"] = json!(g.is_psd());
            Ok(rep)
        }
        Command::Bargmann { z, x } => {
            let sp = space()?;
            let rows = bargmann_grid(&sp, z, x, c.tol)?;
            let mut rep = Report::new("bargmann", &["z_re", "z_im", "x", "a_re", "a_im"]);
            for r in &rows {
                rep.row(vec![fmt(r.z_re), fmt(r.z_im), fmt(r.x), fmt(r.a_re), fmt(r.a_im)]);
            }
            rep.json["rows"] = json!(rows);
            Ok(rep)
        }
        Command::Lerch { action } => lerch(c, action),
        Command::Dbar { problem } => {
            let text = std::fs::read_to_string(problem).map_err(|e| Failure::Io(format!("{}: {e}", problem.display())))?;
            let r = DbarProblem::from_json(&text)?.check()?;
            let mut rep = Report::new("dbar", &["sample", "residual"]);
            for (i, v) in r.residuals.iter().enumerate() {
                rep.row(vec![i.to_string(), fmt(*v)]);
            }
            rep.json["report"] = json!(r);
            Ok(rep)
        }
        Command::Verify { suite } => verify(c, suite),
    }
}

fn lerch(c: &Common, action: &LerchAction) -> Result<Report, Failure> {
    match action {
        LerchAction::Phi { order, z } => {
            let mut rep = Report::new("lerch", &["n", "z_re", "z_im", "phi_re", "phi_im"]);
            let mut rows = Vec::new();
            for &p in z {
                let v = phi(*order, p, c.tol)?;
                rep.row(vec![order.to_string(), fmt(p.re), fmt(p.im), fmt(v.re), fmt(v.im)]);
                rows.push(json!({ "n": order, "z": complex_json(p), "value": complex_json(v) }));
            }
            rep.json["rows"] = json!(rows);
            Ok(rep)
        }
        LerchAction::Zeta { s, a } => {
            let v = hurwitz_zeta(*s, *a, c.tol)?;
            let mut rep = Report::new("lerch", &["s", "a", "zeta"]);
            rep.row(vec![fmt(*s), fmt(*a), fmt(v)]);
            rep.json["s"] = json!(s);
            rep.json["a"] = json!(a);
            rep.json["value"] = json!(v);
            Ok(rep)
        }
        LerchAction::Cm { order, kmax, grid } => {
            let r = cm_evidence(*order, &uniform_grid(0.1, 0.1, *grid), *kmax)?;
            let mut rep = Report::new("lerch", &["order", "min_signed", "violations"]);
            for row in &r.rows {
                rep.row(vec![row.order.to_string(), fmt(row.min_signed), row.violations.len().to_string()]);
            }
            rep.json["status"] = json!(if r.passed() { "evidence" } else { "fail" });
            rep.json["report"] = json!(r);
            Ok(rep)
        }
        LerchAction::Audit { kernel, order } => {
            let k = match kernel {
                AuditKernel::PhiTilde => MlKernel::PhiTilde(*order),
                AuditKernel::Eta0K => MlKernel::Eta0K,
            };
            let a = ml_condition_audit(k, &space()?, c.seed)?;
            let mut rep = Report::new("lerch", &["kernel", "condition", "status"]);
            for cnd in &a.conditions {
                rep.row(vec![a.kernel.clone(), cnd.name.clone(), status_str(cnd.status)]);
            }
            rep.json["kernel"] = json!(a.kernel);
            rep.json["conditions"] = json!(a.conditions);
            Ok(rep)
        }
    }
}

fn status_str(s: hfock_core::report::Status) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn verify(c: &Common, suite: &str) -> Result<Report, Failure> {
    let golden = match &c.golden {
        Some(p) => Golden::load(p)?,
        None => Golden::bundled(),
    };
    let mut opts = VerifyOptions {
        golden,
        ..VerifyOptions::default()
    };
    opts.seed = c.seed;
    if let Some(p) = c.points {
        opts.points = p;
    }
    if let Some(n) = c.nmax {
        opts.nmax = n;
    }
    let names: Vec<&str> = if suite == "all" {
        SUITES.iter().map(|(s, _)| *s).collect()
    } else {
        vec![suite]
    };
    let sp = space()?;
    let mut reports = names
        .par_iter()
        .map(|s| run_suite(s, &opts, &sp))
        .collect::<Result<Vec<_>, _>>()?;
    reports.sort_by(|a, b| a.suite.cmp(&b.suite));
    let passed = reports.iter().all(|r| r.passed);
    let mut rep = Report::new("verify", &["suite", "check", "status"]);
    for r in &reports {
        for chk in &r.checks {
            rep.row(vec![r.suite.clone(), chk.name.clone(), status_str(chk.status)]);
        }
    }
    let failures: Vec<_> = reports
        .iter()
        .flat_map(|r| r.failures().map(move |f| json!({ "suite": r.suite, "check": f.name, "details": f.details })))
        .collect();
    rep.json["suite"] = json!(suite);
    rep.json["seed"] = json!(c.seed);
    rep.json["passed"] = json!(passed);
    rep.json["failures"] = json!(failures);
    rep.json["suites"] = json!(reports);
    if passed {
        Ok(rep)
    } else {
        Err(Failure::Verify(rep))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = cli.common.clone();
    match run(&cli) {
        Ok(rep) => match rep.emit(c.format, c.out.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Verify(rep)) => {
            if let Err(e) = rep.emit(c.format, c.out.as_deref()) {
                eprintln!("error: {e}");
            }
            eprintln!("verification failed");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
