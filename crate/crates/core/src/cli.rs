//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::branching::{branch, layer_subspace, BranchError, BranchingResult};
use crate::coideal::{
    check_genericity, coideal_matrices, unitarizable_norms, verify_coideal_relations,
    CoidealParams, Genericity,
};
use crate::exactq::QScalar;
use crate::report::Report;
use crate::uqsl3rep::{
    verify_defining_relations, verify_lemma_relations, verify_norm_positivity, Gen, RepSpace,
    Weight,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "uqsu3",
    version,
    about = "Exact branching of U_q(su(3)) modules to a coideal subalgebra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the dimension of V_lambda and the sizes of its layers U_i.
    Dim(DimArgs),
    /// Decompose V_lambda and check every component.
    Branch(RunConfig),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Write the generator matrices and norms of V_lambda as JSON.
    ExportRep(ExportArgs),
}

#[derive(Args, Debug)]
pub struct DimArgs {
    #[arg(long, num_args = 2, value_names = ["L1", "L2"], required = true)]
    pub lambda: Vec<u32>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct RunConfig {
    #[arg(long, num_args = 2, value_names = ["L1", "L2"], required = true)]
    pub lambda: Vec<u32>,
    #[arg(long, default_value = "q^2")]
    pub c1: String,
    #[arg(long, default_value = "q")]
    pub c2: String,
    /// Sample point in (0, 1) for numeric sign checks; repeatable.
    #[arg(long = "q0", default_value = "1/2")]
    pub q0: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Single weight; without it every weight with lambda1 + lambda2 <= max-sum is checked.
    #[arg(long, num_args = 2, value_names = ["L1", "L2"])]
    pub lambda: Option<Vec<u32>>,
    #[arg(long, default_value_t = 4)]
    pub max_sum: u32,
    #[arg(long, default_value = "q^2")]
    pub c1: String,
    #[arg(long, default_value = "q")]
    pub c2: String,
    #[arg(long = "q0", default_value = "1/2")]
    pub q0: Vec<String>,
    /// Corrupt one matrix before checking: a generator name (E1, F2, K1inv, ...) or `C1`.
    #[arg(long)]
    pub inject_fault: Option<String>,
    #[arg(short, long)]
    pub verbose: bool,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    #[arg(long, num_args = 2, value_names = ["L1", "L2"], required = true)]
    pub lambda: Vec<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Refused(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Refused(_) => EXIT_REFUSED,
            CliError::Failed(_) => EXIT_CHECK_FAILED,
        }
    }
}

fn weight(v: &[u32]) -> Weight {
    Weight::new(v[0], v[1])
}

fn params(c1: &str, c2: &str) -> Result<CoidealParams, CliError> {
    let parse = |name: &str, s: &str| {
        QScalar::from_str(s)
            .map_err(|e| CliError::Usage(format!("cannot parse --{} {:?}: {}", name, s, e)))
    };
    CoidealParams::new(parse("c1", c1)?, parse("c2", c2)?)
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn sample_points(v: &[String]) -> Result<Vec<BigRational>, CliError> {
    v.iter()
        .map(|s| {
            let x = BigRational::from_str(s.trim())
                .map_err(|_| CliError::Usage(format!("cannot parse --q0 {:?}", s)))?;
            if x <= BigRational::zero() || x >= BigRational::one() {
                return Err(CliError::Usage(format!("--q0 {} must lie in (0, 1)", s)));
            }
            Ok(x)
        })
        .collect()
}

fn write_output(out: Option<&Path>, force: bool, text: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{}", text);
            Ok(())
        }
        Some(path) => {
            if path.exists() && !force {
                return Err(CliError::Usage(format!(
                    "{} exists; pass --force to overwrite",
                    path.display()
                )));
            }
            fs::write(path, text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {}", path.display(), e)))
        }
    }
}

fn cmd_dim(a: &DimArgs) -> Result<(), CliError> {
    let w = weight(&a.lambda);
    let rep = RepSpace::new(w);
    println!("dim {}", rep.dim());
    for i in 0..=w.lambda1 {
        let u = layer_subspace(&rep, i).expect("layer in range");
        println!("U_{} {}", i, u.len());
    }
    Ok(())
}

fn refusal(g: Genericity) -> Option<CliError> {
    match g {
        Genericity::Generic => None,
        Genericity::Excluded { s, bound } => Some(CliError::Refused(format!(
            "refused: c2/c1 = -q^{} with s = {} <= {}",
            s, s, bound
        ))),
    }
}

/// Numeric sign check of the invariant norms of every component.
fn norm_signs(res: &BranchingResult, points: &[BigRational]) -> Report {
    let mut r = Report::new();
    if !res.params.unitary_real() {
        r.note("norm positivity skipped: c1 c2 != q^3");
        return r;
    }
    let mut bad = None;
    for c in &res.components {
        let norms = unitarizable_norms(&QScalar::q_pow(c.kappa_exponent), c.n, &res.params)
            .expect("unitary");
        for (k, h) in norms.iter().enumerate() {
            for q0 in points {
                let positive = h
                    .evaluate_at(q0)
                    .map(|v| v > BigRational::zero())
                    .unwrap_or(false);
                if !positive && bad.is_none() {
                    bad = Some(format!(
                        "component (i={}, x={}), k = {}, q0 = {}",
                        c.i, c.x, k, q0
                    ));
                }
            }
        }
    }
    r.push(
        "invariant norms positive at q0",
        bad.is_none(),
        bad.unwrap_or_default(),
    );
    r
}

fn cmd_branch(a: &RunConfig) -> Result<(), CliError> {
    let w = weight(&a.lambda);
    let p = params(&a.c1, &a.c2)?;
    let points = sample_points(&a.q0)?;
    if let Some(e) = refusal(check_genericity(&p, w)) {
        return Err(e);
    }
    let rep = RepSpace::new(w);
    let res = branch(&rep, &p).map_err(|e| match e {
        BranchError::NonGeneric { .. } => CliError::Refused(e.to_string()),
        other => CliError::Failed(other.to_string()),
    })?;
    let mut report = res.report.clone();
    report.merge(norm_signs(&res, &points));
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&res.to_json()).expect("serialisable") + "\n",
        Format::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            for row in res.csv_rows() {
                wtr.serialize(row).expect("serialisable");
            }
            String::from_utf8(wtr.into_inner().expect("in-memory writer")).expect("utf8")
        }
    };
    if let Some(path) = &a.out {
        write_output(Some(path), a.force, &text)?;
    }
    println!(
        "{:>3} {:>3} {:>10} {:>4}  checks",
        "i", "x", "kappa_exp", "dim"
    );
    for c in &res.components {
        println!(
            "{:>3} {:>3} {:>10} {:>4}  {}",
            c.i,
            c.x,
            c.kappa_exponent,
            c.dim(),
            if c.report.all_passed() {
                "pass"
            } else {
                "FAIL"
            }
        );
    }
    println!("span rank {} of {}", res.span_rank, rep.dim());
    if a.out.is_none() {
        print!("{}", text);
    }
    if a.verbose {
        print!("{}", report);
    }
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(CliError::Failed(format!(
            "check failed: {}: {}",
            c.name, c.detail
        ))),
    }
}

fn verify_weight(
    w: Weight,
    p: &CoidealParams,
    points: &[BigRational],
    fault: Option<&str>,
) -> Result<Report, CliError> {
    let mut rep = RepSpace::new(w);
    let mut shift_c1 = false;
    match fault {
        None => {}
        Some("C1") => shift_c1 = true,
        Some(name) => {
            let g = Gen::from_str(name).map_err(CliError::Usage)?;
            rep.inject_fault(g);
        }
    }
    let mut r = Report::new();
    r.merge_prefixed("relations", verify_defining_relations(&rep));
    r.merge_prefixed("norms", verify_norm_positivity(&rep, points));
    r.merge_prefixed("lemmas", verify_lemma_relations(&rep, -3..=3));
    let mut ops = coideal_matrices(&rep, p);
    if shift_c1 {
        ops.inject_c1_shift();
    }
    r.merge_prefixed("coideal", verify_coideal_relations(&ops));
    if check_genericity(p, w).is_generic() && !shift_c1 {
        match branch(&rep, p) {
            Ok(res) => {
                let signs = norm_signs(&res, points);
                r.merge_prefixed("branching", res.report);
                r.merge_prefixed("branching", signs);
            }
            Err(e) => r.push("branching", false, e.to_string()),
        }
    } else {
        r.note("branching skipped");
    }
    Ok(r)
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let p = params(&a.c1, &a.c2)?;
    let points = sample_points(&a.q0)?;
    let weights = match &a.lambda {
        Some(v) => vec![weight(v)],
        None => Weight::all_up_to_sum(a.max_sum),
    };
    let mut first: Option<String> = None;
    for w in weights {
        let r = verify_weight(w, &p, &points, a.inject_fault.as_deref())?;
        let failed = r.failures().count();
        println!("lambda {}: {} checks, {} failed", w, r.len(), failed);
        if a.verbose {
            print!("{}", r);
        }
        if let Some(c) = r.first_failure() {
            println!("FAIL {}: {}", c.name, c.detail);
            first.get_or_insert_with(|| format!("lambda {}: {}", w, c.name));
        }
    }
    match first {
        None => Ok(()),
        Some(name) => Err(CliError::Failed(format!("first failure: {}", name))),
    }
}

fn cmd_export_rep(a: &ExportArgs) -> Result<(), CliError> {
    let rep = RepSpace::new(weight(&a.lambda));
    let text = serde_json::to_string_pretty(&rep.to_json()).expect("serialisable") + "\n";
    write_output(a.out.as_deref(), a.force, &text)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Dim(a) => cmd_dim(a),
        Command::Branch(a) => cmd_branch(a),
        Command::Verify(a) => cmd_verify(a),
        Command::ExportRep(a) => cmd_export_rep(a),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e);
            e.code()
        }
    }
}
