//! Command-line surface for constructing, enumerating, verifying and
//! probing zero-scarce solutions of f″ = (e^{lz} + b₂e^{sz} + b₃)f.
//!
//! All reports are UTF-8 JSON on stdout (CSV where noted); diagnostics go
//! to stderr. Exit codes: 0 success/verified, 1 usage error, 2 no solution
//! exists for the given parameters, 3 verification failure.

mod config;
mod json;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use osckit_core::builder::{
    alpha_admissible, build_l2, build_l4_s1, build_l4_s3, build_pair, general_probe, BuildError,
    EqSpec, SolutionForm,
};
use osckit_core::expalg::{parse_rational, CNum};
use osckit_core::frobenius::{frobenius_solve, lommel_map};
use osckit_core::mp::MpC;
use osckit_core::oscillation::{
    argument_count, count_zeros, lambda_estimate, ray_integrate, zeros_of, StepControl,
};
use osckit_core::verify::{pair_report, verify_solution};

use config::{Config, OutputFormat};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NO_SOLUTION: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "osckit",
    about = "Construct and verify zero-scarce solutions of f'' = (e^{lz} + b2 e^{sz} + b3) f",
    version
)]
struct Cli {
    /// Float-backend precision in bits (>= 53).
    #[arg(long, global = true)]
    precision_bits: Option<usize>,
    /// Series truncation order.
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Residual tolerance for verification.
    #[arg(long, global = true)]
    residual_tol: Option<f64>,
    /// Contour quadrature starting node count.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Output format: json, csv or text.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Seed for randomized self-checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumCase {
    L2,
    L4s1,
    L4s3,
    /// Two-solution families indexed by distinct degrees (k1, k2).
    Pair,
    /// Accepted alias of `pair`.
    Cor45,
}

#[derive(Subcommand)]
enum Command {
    /// Construct all solution forms for explicit (l, s, b2, b3).
    Construct(ConstructArgs),
    /// Enumerate families by degree.
    Enumerate {
        #[arg(long = "case", value_enum)]
        case: EnumCase,
        #[arg(long = "k-max")]
        k_max: usize,
    },
    /// Verify a solution file against its equation.
    Verify {
        #[arg(long)]
        solution: String,
    },
    /// Transformed-equation data and local series basis at x = 0.
    Frobenius {
        #[command(flatten)]
        eq: EqArgs,
        /// Truncation order (defaults to the configured value).
        #[arg(long = "N")]
        n_trunc: Option<usize>,
    },
    /// Zero lattice, counting function and convergence-exponent estimate.
    Zeros {
        #[arg(long)]
        solution: String,
        /// Radii for n(r); a default ladder applies when omitted.
        #[arg(long = "r")]
        radii: Vec<f64>,
    },
    /// Integrate the equation along a ray from the form's initial data.
    Ray {
        #[arg(long)]
        solution: String,
        #[arg(long)]
        theta: f64,
        #[arg(long = "r-max")]
        r_max: f64,
        /// Local error tolerance (default 1e-10).
        #[arg(long = "rel-tol")]
        rel_tol: Option<f64>,
    },
    /// Derive closure systems for general even l from the raw residual.
    Probe {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        s: u32,
        #[arg(long = "k-max")]
        k_max: usize,
    },
    /// Admissibility of the exponent ratio alpha.
    Alpha {
        #[arg(long)]
        value: String,
    },
}

#[derive(Args)]
struct EqArgs {
    #[arg(long)]
    l: u32,
    #[arg(long)]
    s: u32,
    /// Exact rational: p/q, integer, or decimal literal.
    #[arg(long)]
    b2: String,
    #[arg(long)]
    b3: String,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    eq: EqArgs,
    /// Degree cap for the general even-l search.
    #[arg(long = "k-max", default_value_t = 12)]
    k_max: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut cfg = match Config::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Some(p) = cli.precision_bits {
        cfg.precision_bits = p;
    }
    if let Some(n) = cli.trunc {
        cfg.trunc = n;
    }
    if let Some(t) = cli.residual_tol {
        cfg.residual_tol = t;
    }
    if let Some(q) = cli.quad_nodes {
        cfg.quad_nodes = q;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(f) = &cli.format {
        match config::parse_format(f) {
            Ok(fmt) => cfg.format = fmt,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }

    match run(cli.command, &cfg) {
        Ok(code) => ExitCode::from(code),
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CmdError::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

enum CmdError {
    Usage(String),
    Internal(String),
}

impl From<json::CodecError> for CmdError {
    fn from(e: json::CodecError) -> Self {
        CmdError::Usage(e.0)
    }
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn parse_cnum_arg(name: &str, s: &str) -> Result<CNum, CmdError> {
    parse_rational(s)
        .map(CNum::from_rational)
        .ok_or_else(|| CmdError::Usage(format!("{name} must be an exact rational, got {s:?}")))
}

fn load_solution(path: &str, cfg: &Config) -> Result<SolutionForm, CmdError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::Usage(format!("cannot read {path}: {e}")))?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| CmdError::Usage(format!("malformed JSON in {path}: {e}")))?;
    Ok(json::solution_from_json(&v, cfg.precision_bits)?)
}

fn run(cmd: Command, cfg: &Config) -> Result<u8, CmdError> {
    match cmd {
        Command::Construct(args) => construct(&args, cfg),
        Command::Enumerate { case, k_max } => enumerate(case, k_max, cfg),
        Command::Verify { solution } => verify(&solution, cfg),
        Command::Frobenius { eq, n_trunc } => frobenius(&eq, n_trunc.unwrap_or(cfg.trunc), cfg),
        Command::Zeros { solution, radii } => zeros(&solution, &radii, cfg),
        Command::Ray { solution, theta, r_max, rel_tol } => {
            ray(&solution, theta, r_max, rel_tol, cfg)
        }
        Command::Probe { l, s, k_max } => probe(l, s, k_max, cfg),
        Command::Alpha { value } => alpha(&value),
    }
}

fn construct(args: &ConstructArgs, cfg: &Config) -> Result<u8, CmdError> {
    let b2 = parse_cnum_arg("b2", &args.eq.b2)?;
    let b3 = parse_cnum_arg("b3", &args.eq.b3)?;
    let (l, s) = (args.eq.l, args.eq.s);
    if l % 2 != 0 {
        emit(&json!({
            "solutions": [],
            "note": "no zero-scarce solutions exist: l must be even",
        }));
        return Ok(EXIT_NO_SOLUTION);
    }
    let opts = cfg.build_opts();
    let solutions: Vec<SolutionForm> = match (l, s) {
        (2, 1) => build_l2(&b2, &b3, &opts).map_err(build_usage)?,
        _ => {
            // validate parameters up front so usage errors precede emptiness
            EqSpec::new(l, s, b2.clone(), b3.clone()).map_err(build_usage)?;
            let branches = general_probe(l, s, args.k_max, &opts).map_err(build_usage)?;
            branches
                .into_iter()
                .flat_map(|b| b.solutions)
                .filter(|sol| {
                    sol.b2.sub(&b2).is_zero_tol(cfg.residual_tol)
                        && sol.b3.sub(&b3).is_zero_tol(cfg.residual_tol)
                })
                .collect()
        }
    };
    emit(&json!({
        "solutions": solutions.iter().map(json::solution_to_json).collect::<Vec<_>>(),
    }));
    if solutions.is_empty() {
        Ok(EXIT_NO_SOLUTION)
    } else {
        Ok(EXIT_OK)
    }
}

fn build_usage(e: BuildError) -> CmdError {
    CmdError::Usage(format!("{e}"))
}

fn enumerate(case: EnumCase, k_max: usize, cfg: &Config) -> Result<u8, CmdError> {
    let opts = cfg.build_opts();
    let report = match case {
        EnumCase::L2 => {
            let branches = general_probe(2, 1, k_max, &opts).map_err(build_usage)?;
            json!({
                "case": "l2",
                "branches": branches.iter().map(json::probe_branch_to_json).collect::<Vec<_>>(),
            })
        }
        EnumCase::L4s1 => {
            let mut out = Vec::new();
            for k in 1..=k_max.max(1) {
                for c0 in [1i64, -1] {
                    let (system, sols) = build_l4_s1(k, c0, &opts).map_err(build_usage)?;
                    out.push(json!({
                        "k": k,
                        "c0": c0,
                        "closure": json::closure_to_json(&system),
                        "solutions": sols.iter().map(json::solution_to_json).collect::<Vec<_>>(),
                    }));
                }
            }
            json!({"case": "l4s1", "branches": out})
        }
        EnumCase::L4s3 => {
            let mut out = Vec::new();
            for k in 0..=k_max {
                let (system, sols) = build_l4_s3(k, &opts).map_err(build_usage)?;
                out.push(json!({
                    "k": k,
                    "closure": json::closure_to_json(&system),
                    "solutions": sols.iter().map(json::solution_to_json).collect::<Vec<_>>(),
                }));
            }
            json!({"case": "l4s3", "branches": out})
        }
        EnumCase::Pair | EnumCase::Cor45 => {
            let mut out = Vec::new();
            for k1 in 0..=k_max {
                for k2 in 0..k1 {
                    for c0 in [1i64, -1] {
                        let (spec, f1, f2) = build_pair(k1, k2, c0, &opts).map_err(build_usage)?;
                        let report = pair_report(&spec, &f1, &f2, cfg.residual_tol);
                        out.push(json!({
                            "k1": k1,
                            "k2": k2,
                            "c0": c0,
                            "b2": json::cnum_to_json(&spec.b2),
                            "b3": json::cnum_to_json(&spec.b3),
                            "wronskian": report.wronskian_constant.as_ref().map(json::cnum_to_json),
                            "f1": json::solution_to_json(&f1),
                            "f2": json::solution_to_json(&f2),
                        }));
                    }
                }
            }
            json!({"case": "pair", "branches": out})
        }
    };
    emit(&report);
    Ok(EXIT_OK)
}

fn verify(path: &str, cfg: &Config) -> Result<u8, CmdError> {
    let sol = load_solution(path, cfg)?;
    let spec = sol.eq_spec();
    let report = verify_solution(&spec, &sol, cfg.residual_tol);
    emit(&json::verify_report_to_json(&report));
    if report.is_solution {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn frobenius(eq: &EqArgs, n: usize, cfg: &Config) -> Result<u8, CmdError> {
    let b2 = parse_cnum_arg("b2", &eq.b2)?;
    let b3 = parse_cnum_arg("b3", &eq.b3)?;
    let spec = EqSpec::new(eq.l, eq.s, b2, b3).map_err(build_usage)?;
    let map = lommel_map(&spec);
    let fp = frobenius_solve(&map.h, n, cfg.precision_bits);
    emit(&json!({
        "lommel": json::lommel_to_json(&map),
        "frobenius": json::frobenius_to_json(&fp, n),
    }));
    Ok(EXIT_OK)
}

fn zeros(path: &str, radii: &[f64], cfg: &Config) -> Result<u8, CmdError> {
    let sol = load_solution(path, cfg)?;
    let lat =
        zeros_of(&sol, &cfg.root_opts()).map_err(|e| CmdError::Internal(format!("{e}")))?;
    let rs: Vec<f64> = if radii.is_empty() {
        vec![5.0, 10.0, 20.0, 100.0, 1000.0, 10000.0]
    } else {
        radii.to_vec()
    };
    let counts: Vec<(f64, usize)> = rs.iter().map(|&r| (r, count_zeros(&lat, r))).collect();
    let lambda = if rs.len() >= 4 { Some(lambda_estimate(&lat, &rs)) } else { None };
    match cfg.format {
        OutputFormat::Csv => {
            println!("r,n");
            for (r, n) in &counts {
                println!("{r},{n}");
            }
        }
        _ => {
            let argcheck = counts
                .iter()
                .take(3)
                .filter_map(|(r, n)| {
                    argument_count(&sol, &lat, *r, cfg.quad_nodes)
                        .ok()
                        .map(|w| json!({"r": r, "winding": w, "lattice": n, "agrees": w == *n}))
                })
                .collect::<Vec<_>>();
            emit(&json!({
                "lattice": json::lattice_to_json(&lat, &counts, lambda),
                "argument_principle": argcheck,
            }));
        }
    }
    Ok(EXIT_OK)
}

fn ray(
    path: &str,
    theta: f64,
    r_max: f64,
    rel_tol: Option<f64>,
    cfg: &Config,
) -> Result<u8, CmdError> {
    let sol = load_solution(path, cfg)?;
    let spec = sol.eq_spec();
    let p = cfg.precision_bits;
    let z0 = MpC::zero(p);
    let f0 = sol.f_at(&z0).map_err(|e| CmdError::Internal(format!("initial data: {e}")))?;
    let f0p =
        sol.fprime_at(&z0).map_err(|e| CmdError::Internal(format!("initial data: {e}")))?;
    let ctl = StepControl {
        rel_tol: rel_tol.unwrap_or(1e-10),
        precision: p,
        ..StepControl::default()
    };
    let samples = ray_integrate(&spec, theta, r_max, f0, f0p, &ctl)
        .map_err(|e| CmdError::Internal(format!("{e}")))?;
    match cfg.format {
        OutputFormat::Csv => {
            println!("r,abs_f,re_f,im_f");
            for s in &samples {
                let (re, im) = s.f.to_f64_pair();
                println!("{},{},{},{}", s.r, s.f.abs().to_f64(), re, im);
            }
        }
        _ => emit(&json::ray_samples_to_json(theta, &samples)),
    }
    Ok(EXIT_OK)
}

fn probe(l: u32, s: u32, k_max: usize, cfg: &Config) -> Result<u8, CmdError> {
    let branches = general_probe(l, s, k_max, &cfg.build_opts()).map_err(build_usage)?;
    emit(&json!({
        "l": l,
        "s": s,
        "branches": branches.iter().map(json::probe_branch_to_json).collect::<Vec<_>>(),
    }));
    Ok(EXIT_OK)
}

fn alpha(value: &str) -> Result<u8, CmdError> {
    let Some(alpha) = parse_rational(value) else {
        return Err(CmdError::Usage(format!("alpha must be a rational, got {value:?}")));
    };
    match alpha_admissible(&alpha) {
        Ok((m, admissible)) => {
            emit(&json!({"m": m, "admissible": admissible}));
            Ok(EXIT_OK)
        }
        Err(e) => Err(CmdError::Usage(format!("{e}"))),
    }
}
