use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hypercauchy::admissibility::{solve_admissibility, ReportFile, DEFAULT_TOL};
use hypercauchy::io::{resolve_algebra, resolve_conditions, resolve_function};
use hypercauchy::kernel::CauchyKernel;
use hypercauchy::par::{limit_threads, Exec};
use hypercauchy::suite::{self, SuiteOptions, SuiteReport};
use hypercauchy::verify::{
    boundary_reproduce, verify_representation, Ball, QuadratureSpec, ReproductionReport,
};
use hypercauchy::SCHEMA_VERSION;

/// Cauchy kernels for first-order systems over finite-dimensional real algebras.
#[derive(Debug, Parser)]
#[command(name = "hypercauchy", version)]
struct Cli {
    /// Feasibility tolerance for the admissibility solve.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Quadrature nodes per angle (product rule) or samples (Monte Carlo).
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on worker threads.
    #[arg(long, env = "HYPERCAUCHY_THREADS", hide_env_values = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Structural report for an algebra (built-in name or table file).
    Inspect { algebra: String },
    /// Solve for a Cauchy kernel. Exit 0 if admissible, 2 if not.
    CrSolve { conditions: String },
    /// Reproduce f(x) from boundary values on a ball.
    Reproduce {
        #[arg(long)]
        conditions: String,
        /// Built-in function name or polynomial file.
        #[arg(long)]
        function: String,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Vec<f64>,
        /// Defaults to the origin.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Include the volume term, for functions that do not solve the system.
        #[arg(long)]
        volume: bool,
    },
    /// Run one of the built-in batteries. Non-zero exit if any check fails.
    Suite { name: SuiteName },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteName {
    Gallery,
    Dim3,
    Dim2sweep,
    M2r,
}

const DIM3_SAMPLES: usize = 100;

#[derive(Serialize)]
struct InspectReport {
    schema_version: u32,
    name: String,
    dim: usize,
    basis: Vec<String>,
    unit_ok: bool,
    associativity_defect: f64,
    associative: bool,
    commutativity_defect: f64,
    commutative: bool,
    sum_of_squares: Vec<f64>,
    sum_of_squares_zero: bool,
}

#[derive(Serialize)]
struct ReproduceOutput {
    schema_version: u32,
    conditions: String,
    function: String,
    point: Vec<f64>,
    center: Vec<f64>,
    radius: f64,
    volume_term: bool,
    quadrature: QuadratureSpec,
    report: ReproductionReport,
}

struct Outcome {
    json: String,
    text: String,
    code: u8,
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn warn_all(ws: &[String]) {
    for w in ws {
        eprintln!("warning: {w}");
    }
}

fn inspect(name: &str) -> Result<Outcome> {
    let r = resolve_algebra(name, None)?;
    warn_all(&r.warnings);
    let t = r.value;
    let sos = t.sum_of_squares();
    let rep = InspectReport {
        schema_version: SCHEMA_VERSION,
        name: t.name().to_string(),
        dim: t.dim(),
        basis: t.basis_names().to_vec(),
        unit_ok: t.validate_unit(),
        associativity_defect: t.associativity_defect(),
        associative: t.is_associative(),
        commutativity_defect: t.commutativity_defect(),
        commutative: t.is_commutative(),
        sum_of_squares_zero: sos.max_abs() <= 1e-12,
        sum_of_squares: sos.0,
    };
    let text = format!(
        "algebra {}\n  dim {}\n  unit ok {}\n  associative {} (defect {:.3e})\n  commutative {} (defect {:.3e})\n  sum e_k^2 = {} ({})\n",
        rep.name,
        rep.dim,
        rep.unit_ok,
        rep.associative,
        rep.associativity_defect,
        rep.commutative,
        rep.commutativity_defect,
        fmt_vec(&rep.sum_of_squares),
        if rep.sum_of_squares_zero { "zero" } else { "nonzero" }
    );
    Ok(Outcome {
        json: json(&rep)?,
        text,
        code: 0,
    })
}

fn cr_solve(reference: &str, tol: f64) -> Result<Outcome> {
    let r = resolve_conditions(reference)?;
    warn_all(&r.warnings);
    let rep = solve_admissibility(&r.value, tol)?;
    let file = ReportFile::from(&rep);
    let mut text = format!(
        "{}: {} (residual {:.3e}, free dimension {})\n",
        reference,
        if rep.feasible {
            "admissible"
        } else {
            "not admissible"
        },
        rep.residual,
        rep.free_dim
    );
    if rep.feasible {
        for (m, row) in file.b.iter().enumerate() {
            for (i, b) in row.iter().enumerate() {
                text += &format!("  b[{m}][{i}] = {}\n", fmt_vec(b));
            }
        }
    }
    Ok(Outcome {
        json: json(&file)?,
        text,
        code: if rep.feasible { 0 } else { 2 },
    })
}

#[allow(clippy::too_many_arguments)]
fn reproduce(
    conditions: &str,
    function: &str,
    point: Vec<f64>,
    center: Option<Vec<f64>>,
    radius: f64,
    volume: bool,
    nodes: Option<usize>,
    seed: u64,
    tol: f64,
) -> Result<Outcome> {
    let cs = resolve_conditions(conditions)?;
    warn_all(&cs.warnings);
    let cs = cs.value;
    let f = resolve_function(function, &cs)?;
    warn_all(&f.warnings);
    let f = f.value;
    let n = cs.n();
    if point.len() != n {
        bail!(
            "point has {} coordinates, the system has {n} variables",
            point.len()
        );
    }
    let center = center.unwrap_or_else(|| vec![0.0; n]);
    if radius.is_nan() || radius <= 0.0 {
        bail!("radius must be positive");
    }
    let adm = solve_admissibility(&cs, tol)?;
    if !adm.feasible {
        bail!(
            "conditions are not admissible (residual {:.3e})",
            adm.residual
        );
    }
    let kernel = CauchyKernel::new(adm.solution);
    let spec = if n <= 4 {
        QuadratureSpec::product(nodes.unwrap_or(64))
    } else {
        QuadratureSpec::monte_carlo(nodes.unwrap_or(200_000), seed)
    };
    let ball = Ball::new(center.clone(), radius);
    let report = if volume {
        verify_representation(&kernel, &f, &point, &ball, &spec)?
    } else {
        boundary_reproduce(&kernel, &f, &point, &ball, &spec)?
    };
    let text = format!(
        "computed {}\nexpected {}\nrel_error {:.3e} (estimate {:.3e}, {} nodes)\ncondition defect {:.3e}\n",
        fmt_vec(&report.computed.0),
        fmt_vec(&report.expected.0),
        report.rel_error,
        report.error_estimate,
        report.nodes,
        report.condition_defect
    );
    let out = ReproduceOutput {
        schema_version: SCHEMA_VERSION,
        conditions: conditions.to_string(),
        function: function.to_string(),
        point,
        center,
        radius,
        volume_term: volume,
        quadrature: spec,
        report,
    };
    Ok(Outcome {
        json: json(&out)?,
        text,
        code: 0,
    })
}

fn run_suite(name: SuiteName, opts: &SuiteOptions) -> Result<Outcome> {
    let rep: SuiteReport = match name {
        SuiteName::Gallery => suite::gallery(opts),
        SuiteName::Dim3 => suite::dim3(opts, DIM3_SAMPLES),
        SuiteName::Dim2sweep => suite::dim2sweep(opts),
        SuiteName::M2r => suite::m2r(opts),
    };
    let mut text = String::new();
    for c in &rep.checks {
        text += &format!(
            "{} {}: {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed = rep.checks.iter().filter(|c| !c.passed).count();
    text += &format!(
        "suite {}: {} checks, {failed} failed\n",
        rep.suite,
        rep.checks.len()
    );
    Ok(Outcome {
        json: json(&rep)?,
        text,
        code: if rep.passed { 0 } else { 1 },
    })
}

fn run(cli: Cli) -> Result<u8> {
    if cli.tol.is_nan() || cli.tol <= 0.0 {
        bail!("--tol must be positive");
    }
    if let Some(n) = cli.nodes {
        if n < 8 {
            bail!("--nodes must be at least 8");
        }
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("HYPERCAUCHY_THREADS must be at least 1");
        }
        limit_threads(t).map_err(anyhow::Error::msg)?;
    }
    let outcome = match cli.command {
        Command::Inspect { algebra } => inspect(&algebra)?,
        Command::CrSolve { conditions } => cr_solve(&conditions, cli.tol)?,
        Command::Reproduce {
            conditions,
            function,
            point,
            center,
            radius,
            volume,
        } => reproduce(
            &conditions,
            &function,
            point,
            center,
            radius,
            volume,
            cli.nodes,
            cli.seed,
            cli.tol,
        )?,
        Command::Suite { name } => {
            let opts = SuiteOptions {
                tol: cli.tol,
                nodes: cli.nodes.unwrap_or(SuiteOptions::default().nodes),
                seed: cli.seed,
                exec: Exec::default(),
            };
            run_suite(name, &opts)?
        }
    };
    let body = match cli.format {
        Format::Json => outcome.json,
        Format::Text => outcome.text,
    };
    match &cli.out {
        Some(p) => std::fs::write(p, body).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    // Usage errors exit 1; 2 is reserved for inadmissible systems.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
