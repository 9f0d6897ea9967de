//! Command-line front end for `qlift-core`.
//!
//! Every command prints one JSON object. Exit status is 0 when a verdict or
//! report was produced, 1 for input errors and 2 for numerical failures.

pub mod formats;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qlift_core::classical::{check_lifting_maxflow, ClassicalVerdict, Relation, SubDistribution, Weight};
use qlift_core::quantum::{
    coupling_unitary, is_coupling, is_lifting_witness, marginal_residuals, support_leakage, uniform_density,
    CouplingProblem,
};
use qlift_core::reduction::{cross_check_with, EmbeddingReport};
use qlift_core::sdp::{certificate_slack, check_quantum_lifting, verify_dual_certificate, Verdict};
use qlift_core::{Complex, ComplexMatrix, DensityOperator, HermitianOperator, LiftingVerdict, Subspace};
use serde_json::{json, Value};

use formats::*;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<qlift_core::Error> for CliError {
    fn from(e: qlift_core::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "qlift", version, about = "Decide quantum and classical lifting existence")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Tolerance for the verification predicates.
    #[arg(long, global = true, default_value_t = qlift_core::DEFAULT_TOL)]
    pub tol: f64,
    /// Solver accuracy target.
    #[arg(long, global = true, default_value_t = qlift_core::DEFAULT_EPS_SOLVE)]
    pub eps_solve: f64,
    /// Largest `tr(rho1) - optimum` still declared a lifting.
    #[arg(long, global = true, default_value_t = qlift_core::DEFAULT_EPS_DECIDE)]
    pub eps_decide: f64,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether rho1 and rho2 have a lifting inside a subspace.
    CheckLifting {
        /// First marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho1: PathBuf,
        /// Second marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho2: PathBuf,
        /// Target subspace ({"span": [..]} or {"projector": matrix}).
        #[arg(long, value_name = "FILE")]
        subspace: PathBuf,
    },
    /// Decide a classical lifting by max-flow.
    ClassicalCheck {
        /// First marginal ({"weights": [..]}).
        #[arg(long, value_name = "FILE")]
        mu1: PathBuf,
        /// Second marginal ({"weights": [..]}).
        #[arg(long, value_name = "FILE")]
        mu2: PathBuf,
        /// Relation ({"m", "n", "pairs": [[i, j], ..]}).
        #[arg(long, value_name = "FILE")]
        relation: PathBuf,
        /// Read weights as exact fractions ({"num": [..], "den": [..]}).
        #[arg(long)]
        exact: bool,
    },
    /// Check a joint state against marginals and a subspace.
    VerifyWitness {
        /// A matrix, or the output of check-lifting.
        #[arg(long)]
        witness: PathBuf,
        /// First marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho1: PathBuf,
        /// Second marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho2: PathBuf,
        /// Target subspace ({"span": [..]} or {"projector": matrix}).
        #[arg(long, value_name = "FILE")]
        subspace: PathBuf,
    },
    /// Check a refutation (Y1, Y2).
    VerifyCertificate {
        /// {"y1": matrix, "y2": matrix}, or the output of check-lifting.
        #[arg(long)]
        certificate: PathBuf,
        /// First marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho1: PathBuf,
        /// Second marginal (matrix JSON).
        #[arg(long, value_name = "FILE")]
        rho2: PathBuf,
        /// Target subspace ({"span": [..]} or {"projector": matrix}).
        #[arg(long, value_name = "FILE")]
        subspace: PathBuf,
    },
    /// Run the classical and quantum deciders on the diagonal embedding.
    CrossCheck {
        /// First marginal ({"weights": [..]}).
        #[arg(long, value_name = "FILE")]
        mu1: PathBuf,
        /// Second marginal ({"weights": [..]}).
        #[arg(long, value_name = "FILE")]
        mu2: PathBuf,
        /// Relation ({"m", "n", "pairs": [[i, j], ..]}).
        #[arg(long, value_name = "FILE")]
        relation: PathBuf,
        /// Run the classical side in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Worked constructions with their verification.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Maximally entangled witness for (I/d, I/d, span{|ii>}).
    Bell {
        /// Local dimension d.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Negation couplings: classical on bits, quantum via the bit flip.
    Negation,
    /// The coupling (1/d) sum |i>U|i> <i|<i|U* for a unitary read from a file.
    Unitary {
        /// Unitary matrix JSON.
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
    },
    /// diag(1,0) and diag(0,1) have no lifting into span{|00>}.
    NoLifting,
}

fn read_json(path: &Path) -> Result<Value> {
    let ctx = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{ctx}: {e}")))?;
    parse_json(&text, &ctx)
}

fn ctx(path: &Path) -> String {
    path.display().to_string()
}

fn load_problem(rho1: &Path, rho2: &Path, subspace: &Path) -> Result<CouplingProblem> {
    let r1 = density_from_json(&read_json(rho1)?, &ctx(rho1))?;
    let r2 = density_from_json(&read_json(rho2)?, &ctx(rho2))?;
    let x = subspace_from_json(&read_json(subspace)?, &ctx(subspace))?;
    Ok(CouplingProblem::new(r1, r2, x)?)
}

pub fn verdict_to_json(v: &LiftingVerdict) -> Value {
    let d = &v.diagnostics;
    let mut out = json!({
        "primal_value": d.primal_value,
        "dual_value": d.dual_value,
        "gap": d.gap,
        "iterations": d.iterations,
    });
    match &v.verdict {
        Verdict::Exists(w) => {
            out["verdict"] = json!("exists");
            out["witness"] = matrix_to_json(w.matrix());
        }
        Verdict::NotExists(c) => {
            out["verdict"] = json!("not_exists");
            out["certificate"] = json!({
                "y1": matrix_to_json(c.y1.matrix()),
                "y2": matrix_to_json(c.y2.matrix()),
            });
        }
    }
    out
}

fn witness_report(w: &DensityOperator, p: &CouplingProblem, tol: f64) -> Result<Value> {
    let (r1, r2) = marginal_residuals(w, &p.rho1, &p.rho2)?;
    Ok(json!({
        "valid": is_lifting_witness(w, p, tol)?,
        "marginal_residuals": [r1, r2],
        "leakage": support_leakage(w, &p.subspace)?,
        "tol": tol,
    }))
}

fn certificate_report(y1: &HermitianOperator, y2: &HermitianOperator, p: &CouplingProblem, tol: f64) -> Result<Value> {
    let slack = certificate_slack(y1, y2, p)?;
    Ok(json!({
        "valid": verify_dual_certificate(y1, y2, p, tol)?,
        "slack_min_eigenvalue": slack.min_eigenvalue()?,
        "trace_rho1_y1": qlift_core::quantum::expectation(y1, &p.rho1)?,
        "trace_rho2_y2": qlift_core::quantum::expectation(y2, &p.rho2)?,
        "tol": tol,
    }))
}

fn check_lifting(p: &CouplingProblem, o: &GlobalOpts) -> Result<Value> {
    let v = check_quantum_lifting(p, o.eps_solve, o.eps_decide)?;
    let mut out = verdict_to_json(&v);
    out["verified"] = match &v.verdict {
        Verdict::Exists(w) => json!(is_lifting_witness(w, p, o.tol)?),
        Verdict::NotExists(c) => json!(verify_dual_certificate(&c.y1, &c.y2, p, o.tol)?),
    };
    Ok(out)
}

fn classical_verdict_json<W: Weight>(
    v: &ClassicalVerdict<W>,
    mu1: &SubDistribution<W>,
    mu2: &SubDistribution<W>,
    r: &Relation,
    joint: impl Fn(&qlift_core::classical::JointSubDistribution<W>) -> Value,
) -> Result<Value> {
    Ok(match v {
        ClassicalVerdict::Exists(w) => json!({ "verdict": "exists", "witness": joint(w) }),
        ClassicalVerdict::NotExists(s) => {
            let img = r.image(s)?;
            json!({
                "verdict": "not_exists",
                "violating_set": s,
                "image": img,
                "mu1_mass": weight_sum(mu1, s),
                "mu2_image_mass": weight_sum(mu2, &img),
            })
        }
    })
}

fn load_relation(path: &Path) -> Result<Relation> {
    relation_from_json(&read_json(path)?, &ctx(path))
}

fn classical_check(mu1: &Path, mu2: &Path, relation: &Path, exact: bool) -> Result<Value> {
    let r = load_relation(relation)?;
    if exact {
        let a = rational_distribution_from_json(&read_json(mu1)?, &ctx(mu1))?;
        let b = rational_distribution_from_json(&read_json(mu2)?, &ctx(mu2))?;
        let v = check_lifting_maxflow(&a, &b, &r)?;
        let mut out = classical_verdict_json(&v, &a, &b, &r, rational_joint_to_json)?;
        out["exact"] = json!(true);
        Ok(out)
    } else {
        let a = distribution_from_json(&read_json(mu1)?, &ctx(mu1))?;
        let b = distribution_from_json(&read_json(mu2)?, &ctx(mu2))?;
        let v = check_lifting_maxflow(&a, &b, &r)?;
        classical_verdict_json(&v, &a, &b, &r, joint_to_json)
    }
}

fn report_to_json(r: &EmbeddingReport) -> Value {
    json!({
        "classical_verdict": r.classical_verdict.as_str(),
        "quantum_verdict": r.quantum_verdict.as_str(),
        "agreement": r.agreement,
        "witness_roundtrip_error": r.witness_roundtrip_error,
        "classical_witness_lifts": r.classical_witness_lifts,
        "quantum_witness_projects": r.quantum_witness_projects,
        "quantum": verdict_to_json(&r.quantum),
    })
}

fn cross_check(mu1: &Path, mu2: &Path, relation: &Path, exact: bool, o: &GlobalOpts) -> Result<Value> {
    let r = load_relation(relation)?;
    let report = if exact {
        let a = rational_distribution_from_json(&read_json(mu1)?, &ctx(mu1))?;
        let b = rational_distribution_from_json(&read_json(mu2)?, &ctx(mu2))?;
        cross_check_with(&a, &b, &r, o.eps_solve, o.eps_decide)?
    } else {
        let a = distribution_from_json(&read_json(mu1)?, &ctx(mu1))?;
        let b = distribution_from_json(&read_json(mu2)?, &ctx(mu2))?;
        cross_check_with(&a, &b, &r, o.eps_solve, o.eps_decide)?
    };
    Ok(report_to_json(&report))
}

/// Accepts a bare matrix or an object holding one under `key`.
fn unwrap_key<'a>(v: &'a Value, key: &str) -> &'a Value {
    v.get(key).unwrap_or(v)
}

fn equality_subspace(d: usize) -> Result<Subspace> {
    let idx: Vec<usize> = (0..d).map(|i| i * d + i).collect();
    Ok(Subspace::coordinate(d * d, &idx)?)
}

fn demo(which: &Demo, o: &GlobalOpts) -> Result<Value> {
    match which {
        Demo::Bell { dim } => {
            let d = *dim;
            if d == 0 {
                return Err(CliError::Input("--dim must be positive".into()));
            }
            let s = 1.0 / (d as f64).sqrt();
            let psi: Vec<Complex> =
                (0..d * d).map(|k| Complex::new(if k % (d + 1) == 0 { s } else { 0.0 }, 0.0)).collect();
            let bell = DensityOperator::pure(&psi)?;
            let unif = uniform_density(d)?;
            let p = CouplingProblem::new(unif.clone(), unif, equality_subspace(d)?)?;
            Ok(json!({
                "demo": "bell",
                "dim": d,
                "witness": matrix_to_json(bell.matrix()),
                "subspace": subspace_to_json(&p.subspace),
                "verification": witness_report(&bell, &p, o.tol)?,
                "solver": check_lifting(&p, o)?,
            }))
        }
        Demo::Negation => {
            let flip = SubDistribution::new(vec![0.5, 0.5])?;
            let neq = Relation::from_fn(2, 2, |a, b| a != b);
            let classical = check_lifting_maxflow(&flip, &flip, &neq)?;
            let x = ComplexMatrix::from_parts(2, 2, &[0.0, 1.0, 1.0, 0.0], &[0.0; 4])?;
            let (rho, sub) = coupling_unitary(&x)?;
            let half = uniform_density(2)?;
            let p = CouplingProblem::new(half.clone(), half, sub)?;
            Ok(json!({
                "demo": "negation",
                "classical": classical_verdict_json(&classical, &flip, &flip, &neq, joint_to_json)?,
                "quantum_coupling": matrix_to_json(rho.matrix()),
                "subspace": subspace_to_json(&p.subspace),
                "verification": witness_report(&rho, &p, o.tol)?,
            }))
        }
        Demo::Unitary { file } => {
            let u = matrix_from_json(unwrap_key(&read_json(file)?, "unitary"), &ctx(file))?;
            let (rho, sub) = coupling_unitary(&u)?;
            let unif = uniform_density(u.rows())?;
            let p = CouplingProblem::new(unif.clone(), unif.clone(), sub)?;
            Ok(json!({
                "demo": "unitary",
                "coupling": matrix_to_json(rho.matrix()),
                "subspace": subspace_to_json(&p.subspace),
                "is_coupling": is_coupling(&rho, &unif, &unif, o.tol)?,
                "verification": witness_report(&rho, &p, o.tol)?,
            }))
        }
        Demo::NoLifting => {
            let p = CouplingProblem::new(
                DensityOperator::diagonal(&[1.0, 0.0])?,
                DensityOperator::diagonal(&[0.0, 1.0])?,
                Subspace::coordinate(4, &[0])?,
            )?;
            let v = check_quantum_lifting(&p, o.eps_solve, o.eps_decide)?;
            let verification = match &v.verdict {
                Verdict::NotExists(c) => certificate_report(&c.y1, &c.y2, &p, o.tol)?,
                Verdict::Exists(w) => witness_report(w, &p, o.tol)?,
            };
            Ok(json!({
                "demo": "no-lifting",
                "result": verdict_to_json(&v),
                "verification": verification,
            }))
        }
    }
}

fn validate(o: &GlobalOpts) -> Result<()> {
    for (name, v) in [("--tol", o.tol), ("--eps-solve", o.eps_solve), ("--eps-decide", o.eps_decide)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Input(format!("{name} must be a positive number, got {v}")));
        }
    }
    Ok(())
}

/// Executes a parsed command and returns its JSON result.
pub fn execute(cli: &Cli) -> Result<Value> {
    let o = &cli.opts;
    validate(o)?;
    match &cli.command {
        Command::CheckLifting { rho1, rho2, subspace } => check_lifting(&load_problem(rho1, rho2, subspace)?, o),
        Command::ClassicalCheck { mu1, mu2, relation, exact } => classical_check(mu1, mu2, relation, *exact),
        Command::VerifyWitness { witness, rho1, rho2, subspace } => {
            let p = load_problem(rho1, rho2, subspace)?;
            let w = density_from_json(unwrap_key(&read_json(witness)?, "witness"), &ctx(witness))?;
            witness_report(&w, &p, o.tol)
        }
        Command::VerifyCertificate { certificate, rho1, rho2, subspace } => {
            let p = load_problem(rho1, rho2, subspace)?;
            let v = read_json(certificate)?;
            let c = unwrap_key(&v, "certificate");
            let name = ctx(certificate);
            let get = |k: &str| {
                c.get(k).ok_or_else(|| CliError::Input(format!("{name}: missing field \"{k}\"")))
            };
            let y1 = hermitian_from_json(get("y1")?, &format!("{name}.y1"))?;
            let y2 = hermitian_from_json(get("y2")?, &format!("{name}.y2"))?;
            certificate_report(&y1, &y2, &p, o.tol)
        }
        Command::CrossCheck { mu1, mu2, relation, exact } => cross_check(mu1, mu2, relation, *exact, o),
        Command::Demo(d) => demo(d, o),
    }
}

/// Writes `value` to `--out` or standard output.
pub fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numerical(e.to_string()))?;
    match out {
        Some(path) => fs::write(path, text + "\n").map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(format!("stdout: {e}"))),
                _ => Ok(()),
            }
        }
    }
}
