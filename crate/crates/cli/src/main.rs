//! Batch front end: proof jobs, certificates, curve exports and audit dumps.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use ival::Interval;
use qshoot::branch;
use qshoot::cases::{self, Case};
use qshoot::coeffs::coefficient_table;
use qshoot::matching::{self, Certificate, FreeVars, MatchVars, NewtonStatus};
use qshoot::qinf;
use qshoot::qzero::{self, IntegrateOptions};
use serde::Deserialize;

/// xi1 ladder tried by the auto mode, from small to large.
const XI1_LADDER: [f64; 10] = [15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 50.0, 60.0, 70.0, 80.0];

const EXPANSION_N: usize = 5;

#[derive(Parser)]
#[command(name = "qshoot", about = "rigorous self-similar profile verification")]
struct Cli {
    /// optional TOML config supplying defaults for the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker threads for parallel sections
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// output path (defaults to stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// include wall-clock timings in artifacts (breaks byte-reproducibility)
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a matching point of the conservative family and emit a
    /// certificate.
    ProveNls {
        /// I or II
        #[arg(long)]
        case: String,
        #[arg(long)]
        j: usize,
        /// matching point, a number or "auto" for the ladder
        #[arg(long)]
        xi1: Option<String>,
        /// norm weight
        #[arg(long)]
        v: Option<f64>,
    },
    /// Verify a branch segment of the dissipative family with chaining.
    VerifyBranch {
        #[arg(long)]
        case: String,
        #[arg(long)]
        j: usize,
        /// end of the epsilon range (defaults to the first continuation step)
        #[arg(long)]
        eps_to: Option<f64>,
        #[arg(long, default_value_t = 32)]
        n_split: usize,
        /// resume from an existing JSON-lines artifact
        #[arg(long)]
        resume: bool,
    },
    /// Count the monotone intervals of |Q| at a verified zero.
    CountMonotone {
        #[arg(long)]
        case: String,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        xi1: Option<String>,
    },
    /// Dump the asymptotic coefficient table and norm bounds as JSON.
    DumpBounds {
        #[arg(long)]
        case: String,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        xi1: Option<String>,
    },
    /// Export curve enclosures of d|Q|^2/dxi as CSV.
    ExportCurve {
        #[arg(long)]
        case: String,
        #[arg(long)]
        j: usize,
        /// upper end of the xi range; defaults to the tail threshold xi2
        #[arg(long)]
        upto: Option<f64>,
    },
}

#[derive(Deserialize, Default)]
struct FileConfig {
    xi1: Option<toml::Value>,
    v: Option<f64>,
    workers: Option<usize>,
    out: Option<String>,
    n_split: Option<usize>,
    eps_to: Option<f64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("config: cannot read {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("config: cannot parse {}", p.display()))
        }
    }
}

fn parse_case(s: &str) -> Result<Case> {
    s.parse::<Case>().map_err(|e| anyhow!("case: {e}"))
}

fn resolve_xi1(flag: &Option<String>, cfg: &FileConfig, default: f64) -> Result<Vec<f64>> {
    let raw = match flag {
        Some(s) => s.clone(),
        None => match &cfg.xi1 {
            Some(toml::Value::String(s)) => s.clone(),
            Some(toml::Value::Float(f)) => f.to_string(),
            Some(toml::Value::Integer(i)) => i.to_string(),
            Some(other) => bail!("config: bad xi1 value {other:?}"),
            None => return Ok(vec![default]),
        },
    };
    if raw == "auto" {
        return Ok(XI1_LADDER.to_vec());
    }
    let v: f64 = raw
        .parse()
        .map_err(|_| anyhow!("xi1: expected a number or \"auto\", got {raw:?}"))?;
    if !(v > 1.0) {
        bail!("xi1: must exceed 1");
    }
    Ok(vec![v])
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(p) => {
            fs::write(p, content).with_context(|| format!("cannot write {}", p.display()))?
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn prove(
    case: Case,
    j: usize,
    xi1_list: &[f64],
    v: Option<f64>,
    timing: bool,
) -> Result<(Certificate, MatchVars, qshoot::Params)> {
    let opts = IntegrateOptions::default();
    let mut last_err: Option<String> = None;
    for &xi1 in xi1_list {
        let mut base = case.params(j).map_err(|e| anyhow!("{e}"))?;
        base.xi1 = Interval::point(xi1);
        if let Some(vv) = v {
            base.v = Interval::point(vv);
        }
        let mu = cases::mu_seed(case, j).map_err(|e| anyhow!("{e}"))?;
        let seed = MatchVars::from_params(&base, Interval::point(mu));
        let t0 = Instant::now();
        let res = matching::find_box(&seed, &base, FreeVars::FixEpsilon, &opts);
        match res {
            Ok(r) if r.status == NewtonStatus::UniqueZero => {
                let cert = Certificate {
                    case: format!("{case:?}"),
                    j,
                    fv_mode: FreeVars::FixEpsilon,
                    xi1,
                    status: r.status,
                    existence_box: r.existence.to_vec(),
                    uniqueness_box: r.uniqueness.to_vec(),
                    g_residual: r.g_residual.to_vec(),
                    monotone_count: None,
                    mu_clamped: r.mu_clamped,
                    wall_time_s: if timing {
                        t0.elapsed().as_secs_f64()
                    } else {
                        0.0
                    },
                    params: base,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                };
                let (vars, _) = seed.with_free_box(&r.existence, FreeVars::FixEpsilon);
                return Ok((cert, vars, base));
            }
            Ok(r) => last_err = Some(format!("status {:?} at xi1 = {xi1}", r.status)),
            Err(e) => last_err = Some(format!("{e} at xi1 = {xi1}")),
        }
        eprintln!("xi1 = {xi1}: verification not concluded, trying next ladder value");
    }
    bail!(
        "verification failed for all xi1 candidates: {}",
        last_err.unwrap_or_default()
    )
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    let cfg = load_config(&cli.config)?;
    let workers = cli.workers.or(cfg.workers).unwrap_or_else(num_cpus);
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build_global()
        .ok();
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from));

    match &cli.cmd {
        Cmd::ProveNls { case, j, xi1, v } => {
            let case = parse_case(case.as_str())?;
            let j = *j;
            let base = case.params(j).map_err(|e| anyhow!("{e}"))?;
            let xi1_list = resolve_xi1(xi1, &cfg, base.xi1.mid())?;
            let v = v.or(cfg.v);
            let (cert, _, _) = prove(case, j, &xi1_list, v, cli.timing)?;
            let json = serde_json::to_string_pretty(&cert)?;
            emit(&out, &(json + "\n"))?;
            Ok(0)
        }
        Cmd::CountMonotone { case, j, xi1 } => {
            let case = parse_case(case.as_str())?;
            let base = case.params(*j).map_err(|e| anyhow!("{e}"))?;
            let xi1_list = resolve_xi1(xi1, &cfg, base.xi1.mid())?;
            let (mut cert, vars, base) = prove(case, *j, &xi1_list, cfg.v, cli.timing)?;
            let p = vars.apply(&base);
            let ct = coefficient_table(&p, EXPANSION_N).map_err(|e| anyhow!("{e}"))?;
            let con = qinf::fixed_point_radius(&p, &ct).map_err(|e| anyhow!("{e}"))?;
            let nb = qinf::norm_bounds(&p, &ct, &con).map_err(|e| anyhow!("{e}"))?;
            let tail = qinf::monotonicity_tail(&p, &ct, &nb, EXPANSION_N)
                .map_err(|e| anyhow!("{e}"))?;
            let opts = IntegrateOptions::default();
            let count = matching::count_monotone_intervals(&base, &vars, &tail, &opts)
                .map_err(|e| anyhow!("{e}"))?;
            cert.monotone_count = Some(count);
            let json = serde_json::json!({
                "certificate": cert,
                "monotone_count": count,
                "c_pmon": tail.c_pmon.to_string(),
                "c_rmon": tail.c_rmon.to_string(),
                "threshold": tail.threshold.to_string(),
                "xi2": tail.xi2.to_string(),
            });
            emit(&out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(0)
        }
        Cmd::DumpBounds { case, j, xi1 } => {
            let case = parse_case(case.as_str())?;
            let mut base = case.params(*j).map_err(|e| anyhow!("{e}"))?;
            let xi1_list = resolve_xi1(xi1, &cfg, base.xi1.mid())?;
            base.xi1 = Interval::point(xi1_list[0]);
            let ct = coefficient_table(&base, EXPANSION_N).map_err(|e| anyhow!("{e}"))?;
            let con = qinf::fixed_point_radius(&base, &ct).map_err(|e| anyhow!("{e}"))?;
            let nb = qinf::norm_bounds(&base, &ct, &con).map_err(|e| anyhow!("{e}"))?;
            let json = serde_json::json!({
                "coefficients": ct.to_json(),
                "norms": {
                    "rho": nb.rho.to_string(),
                    "Q'": nb.nq1.to_string(),
                    "Q''": nb.nq2.to_string(),
                    "Q'''": nb.nq3.to_string(),
                    "Q_gamma": nb.nqg.to_string(),
                    "Q_gamma'": nb.nqg1.to_string(),
                    "Q_kappa": nb.nqk.to_string(),
                    "Q_kappa'": nb.nqk1.to_string(),
                    "Q_eps": nb.nqe.to_string(),
                    "Q_eps'": nb.nqe1.to_string(),
                    "C_T1": nb.c_t1.to_string(),
                    "C_T2": nb.c_t2.to_string(),
                    "M_sigma": nb.m_sigma.to_string(),
                },
            });
            emit(&out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(0)
        }
        Cmd::ExportCurve { case, j, upto } => {
            let case = parse_case(case.as_str())?;
            let default_xi1 = case.params(*j).map_err(|e| anyhow!("{e}"))?.xi1.mid();
            let (_, vars, base) = prove(case, *j, &[default_xi1], cfg.v, false)?;
            let p = vars.apply(&base);
            let upto = match upto {
                Some(x) => *x,
                None => {
                    let ct = coefficient_table(&p, EXPANSION_N).map_err(|e| anyhow!("{e}"))?;
                    let con = qinf::fixed_point_radius(&p, &ct).map_err(|e| anyhow!("{e}"))?;
                    let nb = qinf::norm_bounds(&p, &ct, &con).map_err(|e| anyhow!("{e}"))?;
                    qinf::monotonicity_tail(&p, &ct, &nb, EXPANSION_N)
                        .map_err(|e| anyhow!("{e}"))?
                        .xi2
                        .hi()
                }
            };
            let opts = IntegrateOptions::default();
            let curve =
                qzero::enclose_curve(&p, vars.mu, upto, &opts).map_err(|e| anyhow!("{e}"))?;
            let mut csv = String::from("xi_lo,xi_hi,d1_lo,d1_hi,d2_lo,d2_hi\n");
            for c in &curve.cells {
                csv.push_str(&format!(
                    "{:e},{:e},{:e},{:e},{:e},{:e}\n",
                    c.xi_lo,
                    c.xi_hi,
                    c.d1.lo(),
                    c.d1.hi(),
                    c.d2.lo(),
                    c.d2.hi()
                ));
            }
            emit(&out, &csv)?;
            Ok(0)
        }
        Cmd::VerifyBranch {
            case,
            j,
            eps_to,
            n_split,
            resume,
        } => {
            let case = parse_case(case.as_str())?;
            let base = case.params(*j).map_err(|e| anyhow!("{e}"))?;
            let opts = IntegrateOptions::default();
            let eps_to = eps_to.or(cfg.eps_to).unwrap_or(1.414213562373095e-4);
            let n_split = if *n_split == 0 {
                cfg.n_split.unwrap_or(32)
            } else {
                *n_split
            };
            let approx = branch::approx_branch(case, *j, eps_to, eps_to / 4.0, &opts)
                .map_err(|e| anyhow!("{e}"))?;
            // resumable artifact: skip fully verified leading subintervals
            let existing = match (&out, resume) {
                (Some(p), true) if p.exists() => fs::read_to_string(p)?.lines().count(),
                _ => 0,
            };
            let segment = branch::verify_segment(
                &base,
                &approx,
                FreeVars::FixEpsilon,
                (0.0, eps_to),
                n_split,
                &opts,
            )
            .map_err(|e| anyhow!("{e}"))?;
            let mut lines = String::new();
            for sub in segment.subintervals.iter().skip(existing) {
                lines.push_str(&serde_json::to_string(sub)?);
                lines.push('\n');
            }
            match (&out, resume) {
                (Some(p), true) if p.exists() => {
                    let mut f = fs::OpenOptions::new().append(true).open(p)?;
                    f.write_all(lines.as_bytes())?;
                }
                _ => emit(&out, &lines)?,
            }
            eprintln!(
                "verified {} subintervals, chained = {}",
                segment.subintervals.len(),
                segment.chained
            );
            Ok(if segment.chained { 0 } else { 2 })
        }
    }
}

fn num_cpus() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}
