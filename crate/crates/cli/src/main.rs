use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use modortho::daugavet::{module_daugavet_check, operator_daugavet_witness, DAUGAVET_TOL};
use modortho::derivative::{rho_fd, rho_pair, Side, FD_TOL};
use modortho::io::{read_matrix, MatrixFileError};
use modortho::module::ModuleElement;
use modortho::ortho::{decide, Relation, DEFAULT_TOL};
use modortho::parallel::Execution;
use modortho::verify::oracles::{
    bj_grid_oracle, bj_real_grid_oracle, strong_bj_sample_oracle, ORACLE_GRID, ORACLE_RADIUS, ORACLE_TOL,
};
use modortho::verify::suite::{run_suite, SuiteConfig};
use modortho::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SHAPE: u8 = 3;
const EXIT_INVALID: u8 = 4;

#[derive(Parser)]
#[command(name = "modortho", version, about = "Norm derivatives and orthogonality in matrix Hilbert modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One-sided norm derivatives of x in the direction y.
    Rho {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Cross-check against the finite-difference quotient.
        #[arg(long)]
        oracle: bool,
        /// Stopping tolerance of the finite-difference quotient.
        #[arg(long, default_value_t = FD_TOL)]
        tol: f64,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Decide an orthogonality or parallelism relation; exits 0 if it holds, 1 if not.
    Ortho {
        /// One of ip, bj, bj-real, bj-strong, rho, parallel.
        #[arg(long)]
        relation: Relation,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also run the brute-force oracle for the Birkhoff-James relations.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Check ‖αx + βx⟨x,x⟩‖ = α‖x‖ + β‖x‖³, or with --operator the operator witness.
    Daugavet {
        #[arg(long)]
        x: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = DAUGAVET_TOL)]
        tol: f64,
        /// Treat x as an operator and extract the attaining unit vector.
        #[arg(long)]
        operator: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
    /// Run the seeded property suite; exits 0 only if every property passes.
    Check {
        /// Accepted for symmetry with the other commands; the suite is the only check.
        #[arg(long)]
        suite: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Skip the grid and sampling oracles.
        #[arg(long)]
        no_oracle: bool,
        /// Run instances on one thread.
        #[arg(long)]
        sequential: bool,
        #[arg(long)]
        json_out: Option<PathBuf>,
    },
}

/// An early exit: a JSON body (if any) and an exit code.
struct Failure {
    code: u8,
    body: Option<Value>,
    message: String,
}

impl From<MatrixFileError> for Failure {
    fn from(e: MatrixFileError) -> Self {
        Failure {
            code: EXIT_PARSE,
            body: None,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::ShapeMismatch { .. } => (EXIT_SHAPE, "shape-mismatch"),
            _ => (EXIT_INVALID, "invalid-input"),
        };
        Failure {
            code,
            body: Some(json!({ "error": kind, "message": e.to_string() })),
            message: e.to_string(),
        }
    }
}

fn load(path: &Path) -> Result<ModuleElement, Failure> {
    Ok(ModuleElement::new(read_matrix(path)?))
}

fn load_pair(x: &Path, y: &Path) -> Result<(ModuleElement, ModuleElement), Failure> {
    let (x, y) = (load(x)?, load(y)?);
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch {
            left: x.shape(),
            right: y.shape(),
        }
        .into());
    }
    Ok((x, y))
}

fn emit(report: &Value, json_out: Option<&Path>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    println!("{text}");
    if let Some(path) = json_out {
        std::fs::write(path, text + "\n").map_err(|e| Failure {
            code: EXIT_INVALID,
            body: None,
            message: format!("cannot write {}: {e}", path.display()),
        })?;
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn cmd_rho(x: &Path, y: &Path, oracle: bool, tol: f64, json_out: Option<&Path>) -> Result<u8, Failure> {
    let (x, y) = load_pair(x, y)?;
    let pair = rho_pair(&x, &y)?;
    let mut report = json!({
        "rho_plus": pair.rho_plus,
        "rho_minus": pair.rho_minus,
        "rho": pair.rho_mid,
        "max_witness": to_value(&pair.max_witness),
        "min_witness": to_value(&pair.min_witness),
    });
    let mut code = 0;
    if oracle {
        let scale = 1.0 + x.norm() * y.norm();
        let allowed = 1e-5 * scale;
        let plus = rho_fd(&x, &y, Side::Plus, tol);
        let minus = rho_fd(&x, &y, Side::Minus, tol);
        let agree = matches!((&plus, &minus), (Ok(p), Ok(m))
            if (p - pair.rho_plus).abs() <= allowed && (m - pair.rho_minus).abs() <= allowed);
        code = if agree { 0 } else { EXIT_FAIL };
        report["fd"] = json!({
            "rho_plus": plus.as_ref().ok(),
            "rho_minus": minus.as_ref().ok(),
            "error": plus.err().or(minus.err()).map(|e| e.to_string()),
            "tolerance": allowed,
            "agree": agree,
        });
    }
    emit(&report, json_out)?;
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_ortho(
    relation: Relation,
    x: &Path,
    y: &Path,
    tol: f64,
    oracle: bool,
    seed: u64,
    json_out: Option<&Path>,
) -> Result<u8, Failure> {
    let (x, y) = load_pair(x, y)?;
    let report = decide(relation, &x, &y, tol)?;
    let mut body = to_value(&report);
    body["basis"] = json!("certificate");
    if oracle {
        let verdict = match relation {
            Relation::Bj => Some(bj_grid_oracle(&x, &y, ORACLE_RADIUS, ORACLE_GRID, ORACLE_TOL)),
            Relation::BjReal => Some(bj_real_grid_oracle(&x, &y, ORACLE_RADIUS, ORACLE_GRID, ORACLE_TOL)),
            Relation::BjStrong => Some(strong_bj_sample_oracle(&x, &y, 200, seed, ORACLE_TOL)),
            _ => None,
        };
        if let Some(v) = verdict {
            let mut o = to_value(&v);
            o["basis"] = json!(if v.holds { "evidence" } else { "certificate" });
            body["oracle"] = o;
        }
    }
    emit(&body, json_out)?;
    Ok(if report.holds { 0 } else { EXIT_FAIL })
}

fn cmd_daugavet(
    x: &Path,
    alpha: f64,
    beta: f64,
    tol: f64,
    operator: bool,
    json_out: Option<&Path>,
) -> Result<u8, Failure> {
    let x = load(x)?;
    let (body, holds) = if operator {
        let r = operator_daugavet_witness(x.matrix(), tol)?;
        (to_value(&r), r.holds)
    } else {
        let r = module_daugavet_check(&x, alpha, beta, tol)?;
        (to_value(&r), r.holds)
    };
    emit(&body, json_out)?;
    Ok(if holds { 0 } else { EXIT_FAIL })
}

fn cmd_check(seed: u64, trials: usize, oracles: bool, sequential: bool, json_out: Option<&Path>) -> Result<u8, Failure> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()).into());
    }
    let mut cfg = SuiteConfig::new(seed, trials);
    cfg.oracles = oracles;
    cfg.exec = if sequential { Execution::Sequential } else { Execution::Auto };
    let report = run_suite(&cfg);
    emit(&to_value(&report), json_out)?;
    Ok(if report.all_passed { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rho {
            x,
            y,
            oracle,
            tol,
            json_out,
        } => cmd_rho(&x, &y, oracle, tol, json_out.as_deref()),
        Command::Ortho {
            relation,
            x,
            y,
            tol,
            oracle,
            seed,
            json_out,
        } => cmd_ortho(relation, &x, &y, tol, oracle, seed.unwrap_or(0), json_out.as_deref()),
        Command::Daugavet {
            x,
            alpha,
            beta,
            tol,
            operator,
            json_out,
        } => cmd_daugavet(&x, alpha, beta, tol, operator, json_out.as_deref()),
        Command::Check {
            suite: _,
            seed,
            trials,
            no_oracle,
            sequential,
            json_out,
        } => cmd_check(seed, trials, !no_oracle, sequential, json_out.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            if let Some(body) = f.body {
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
            }
            eprintln!("modortho: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
