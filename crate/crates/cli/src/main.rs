//! `haarshift`: exact restricted Haar-shift constants, norms, SVD probes,
//! extremal functions, the Poincaré–Wirtinger demo and the claims audit.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use haarshift::audit::{audit_claims, engine_agrees, ClaimStatus, Universe};
use haarshift::bounds::{bound_constant, extremal_interior, gap_lower_bound_check, printed_extremal_interior, pw_build};
use haarshift::format::{
    exact_function_file, parse_coefficients, parse_function, svd_csv_row, write_audit, write_function, FormJson,
    LoadedFunction, SVD_CSV_HEADER,
};
use haarshift::oracle::{smallest_singular, Constraint, DEFAULT_MAX_DIM};
use haarshift::shift::{interior_norm2, printed_interior_norm2, shift_full};
use haarshift::{restricted_indicator_shift, restricted_shift, DyadicInterval, Error, ExactFunction, Sqrt2Scalar};

#[derive(Parser)]
#[command(name = "haarshift", version, about = "Exact lower bounds for the restricted dyadic Hilbert transform")]
struct Cli {
    /// Emit JSON instead of a table
    #[arg(long, global = true)]
    json: bool,

    /// Render exact values as decimals with this many digits
    #[arg(long, global = true, value_name = "N")]
    decimal: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Pair {
    /// Support interval I as scale:index
    #[arg(long = "i", value_name = "k:l", allow_hyphen_values = true)]
    i: DyadicInterval,

    /// Observation interval K as scale:index
    #[arg(long = "k", value_name = "k:l", allow_hyphen_values = true)]
    k: DyadicInterval,
}

#[derive(Subcommand)]
enum Command {
    /// Case, exact form of 1_K Ш 1_I, sharp constant and claimed bound
    Constant {
        #[command(flatten)]
        pair: Pair,
    },

    /// Exact ‖1_K Ш f‖² for a function file
    Norm {
        /// Support interval; defaults to the root of the function file
        #[arg(long = "i", value_name = "k:l", allow_hyphen_values = true)]
        i: Option<DyadicInterval>,

        #[arg(long = "k", value_name = "k:l", allow_hyphen_values = true)]
        k: DyadicInterval,

        /// Function file (exact mode)
        #[arg(long = "f", value_name = "FILE")]
        f: PathBuf,
    },

    /// Leaf values of 1_W Ш f on a zero-anchored window W
    Apply {
        #[arg(long = "f", value_name = "FILE")]
        f: PathBuf,

        #[arg(long, value_name = "k:l", allow_hyphen_values = true)]
        window: DyadicInterval,

        /// Output function file; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Singular values of 1_K Ш on functions supported in I, from the dense oracle
    Svd {
        #[command(flatten)]
        pair: Pair,

        #[arg(long)]
        depth: u32,

        /// Restrict to zero-mean functions
        #[arg(long)]
        zero_mean: bool,
    },

    /// A function supported in I that 1_K Ш annihilates
    Extremal {
        #[command(flatten)]
        pair: Pair,

        /// Emit −ε(K,I)|I|^{−1/2}1_I + h_I instead of the annihilated function
        #[arg(long)]
        printed: bool,

        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Sample a trigonometric polynomial and check the mean bound
    Pw {
        #[arg(long = "i", value_name = "k:l", allow_hyphen_values = true)]
        i: DyadicInterval,

        /// Coefficient file {"coefficients":[{"k":0,"re":1.0,"im":0.0}]}
        #[arg(long)]
        coeffs: PathBuf,

        #[arg(long, default_value_t = 10)]
        depth: u32,

        /// Also check the gap lower bound against this K
        #[arg(long = "k", value_name = "k:l", allow_hyphen_values = true)]
        k: Option<DyadicInterval>,
    },

    /// Check every catalogued claim over a universe of intervals
    Audit {
        /// Scale range a..b
        #[arg(long, default_value = "-6..6", allow_hyphen_values = true, value_parser = parse_scales)]
        scales: (i32, i32),

        /// Largest index swept at each scale (mirrored to the left half-line)
        #[arg(long, default_value_t = 63)]
        max_index: i64,

        /// Depth of interior pairs and test functions below I
        #[arg(long, default_value_t = 3)]
        depth: u32,

        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_scales(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let a: i32 = a.trim().parse().map_err(|e| format!("bad lower scale {a:?}: {e}"))?;
    let b: i32 = b.trim().parse().map_err(|e| format!("bad upper scale {b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty scale range {a}..{b}"));
    }
    Ok((a, b))
}

/// Failures after argument parsing; all are reported as usage errors.
#[derive(Debug)]
enum CliError {
    Engine(Error),
    Io(PathBuf, std::io::Error),
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Input(s) => f.write_str(s),
        }
    }
}

struct Render {
    decimal: Option<usize>,
}

impl Render {
    fn value(&self, x: &Sqrt2Scalar) -> String {
        match self.decimal {
            Some(n) => format!("{:.*}", n, x.to_f64()),
            None => x.to_string(),
        }
    }

    fn rational(&self, x: &haarshift::BigRational) -> String {
        self.value(&Sqrt2Scalar::rational(x.clone()))
    }

    fn form(&self, form: &haarshift::RestrictedShiftForm) -> FormJson {
        let mut j = FormJson::from(form);
        if self.decimal.is_some() {
            j.constant = self.value(&form.constant);
            j.haar = self.value(&form.haar);
            for (t, e) in j.inner.iter_mut().zip(form.inner.values()) {
                t.coef = self.value(e);
            }
            j.norm2 = self.value(&form.norm2());
        }
        j
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io(p.clone(), e)),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn exact_function(path: &PathBuf) -> Result<ExactFunction, CliError> {
    match parse_function(&read(path)?)? {
        LoadedFunction::Exact(f) => Ok(f),
        LoadedFunction::Float(_) => Err(CliError::Input(format!(
            "{}: exact evaluation needs a function file in exact mode",
            path.display()
        ))),
    }
}

/// Prints to stdout; a closed pipe downstream is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn print_json<T: Serialize>(value: &T) {
    emit(&serde_json::to_string_pretty(value).expect("plain data serializes"));
}

#[derive(Serialize)]
struct ConstantOut {
    #[serde(rename = "I")]
    i: DyadicInterval,
    #[serde(rename = "K")]
    k: DyadicInterval,
    case: &'static str,
    form: FormJson,
    exact_constant: String,
    claimed_bound: Option<String>,
    bound_source: &'static str,
}

fn constant(pair: &Pair, json: bool, r: &Render) {
    let form = restricted_indicator_shift(&pair.i, &pair.k);
    let b = bound_constant(&pair.i, &pair.k);
    let out = ConstantOut {
        i: pair.i,
        k: pair.k,
        case: b.case.name(),
        form: r.form(&form),
        exact_constant: r.rational(&b.exact_constant),
        claimed_bound: b.claimed_bound.as_ref().map(|x| r.rational(x)),
        bound_source: b.claim_label,
    };
    if json {
        print_json(&out);
        return;
    }
    println!("I               {}", out.i);
    println!("K               {}", out.k);
    println!("case            {}", out.case);
    println!("constant        {}", out.form.constant);
    println!("haar            {}", out.form.haar);
    for t in &out.form.inner {
        println!("inner {:<9} {}", t.l.to_string(), t.coef);
    }
    println!("norm2           {}", out.form.norm2);
    println!("exact_constant  {}", out.exact_constant);
    match &out.claimed_bound {
        Some(x) => println!("claimed_bound   {x} ({})", out.bound_source),
        None => println!("claimed_bound   none ({})", out.bound_source),
    }
}

#[derive(Serialize)]
struct NormOut {
    #[serde(rename = "I")]
    i: DyadicInterval,
    #[serde(rename = "K")]
    k: DyadicInterval,
    norm2: String,
    f_norm2: String,
    form: FormJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stated_closed_form: Option<String>,
}

fn norm(i: Option<DyadicInterval>, k: &DyadicInterval, path: &PathBuf, json: bool, r: &Render) -> Result<(), CliError> {
    let mut f = exact_function(path)?;
    let i = i.unwrap_or(f.root());
    if i != f.root() {
        let depth = f.depth() + (i.scale() - f.root().scale()).max(0) as u32;
        f = f.embed(i, depth)?;
    }
    let (form, n2) = restricted_shift(&f, k);
    let interior = i.strictly_contains(k);
    let out = NormOut {
        i,
        k: *k,
        norm2: r.value(&n2),
        f_norm2: r.value(&f.norm2()),
        form: r.form(&form),
        closed_form: interior.then(|| interior_norm2(&f, k).map(|x| r.value(&x))).transpose()?,
        stated_closed_form: interior.then(|| printed_interior_norm2(&f, k).map(|x| r.value(&x))).transpose()?,
    };
    if json {
        print_json(&out);
        return Ok(());
    }
    println!("norm2               {}", out.norm2);
    println!("f_norm2             {}", out.f_norm2);
    if let (Some(c), Some(p)) = (&out.closed_form, &out.stated_closed_form) {
        println!("closed_form         {c}");
        println!("stated_closed_form  {p}");
    }
    Ok(())
}

fn apply(path: &PathBuf, window: &DyadicInterval, out: &Option<PathBuf>) -> Result<(), CliError> {
    let f = exact_function(path)?;
    let g = shift_full(&f, window)?;
    write_or_print(out, &write_function(&exact_function_file(&g)))
}

fn svd(pair: &Pair, depth: u32, zero_mean: bool) -> Result<(), CliError> {
    let cap = match std::env::var("HAARSHIFT_MAX_MATRIX") {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Input(format!("HAARSHIFT_MAX_MATRIX must be a positive integer, got {v:?}")))?,
        Err(_) => DEFAULT_MAX_DIM,
    };
    let constraint = if zero_mean { Constraint::ZeroMean } else { Constraint::None };
    let report = smallest_singular(&pair.i, &pair.k, depth, constraint, cap)?;
    println!("{SVD_CSV_HEADER}");
    println!("{}", svd_csv_row(&pair.i, &pair.k, depth, constraint, &report));
    Ok(())
}

fn extremal(pair: &Pair, printed: bool, out: &Option<PathBuf>) -> Result<(), CliError> {
    let f = if printed {
        printed_extremal_interior(&pair.i, &pair.k)?
    } else {
        extremal_interior(&pair.i, &pair.k)?
    };
    write_or_print(out, &write_function(&exact_function_file(&f)))
}

#[derive(Serialize)]
struct PwOut {
    #[serde(rename = "I")]
    i: DyadicInterval,
    depth: u32,
    eta: f64,
    mean_mass: f64,
    norm2: f64,
    mean_bound_rhs: f64,
    mean_bound_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<GapOut>,
}

#[derive(Serialize)]
struct GapOut {
    #[serde(rename = "K")]
    k: DyadicInterval,
    exact_constant: String,
    claimed_constant: Option<String>,
    lhs: f64,
    rhs: f64,
    claimed_rhs: Option<f64>,
    holds: bool,
}

fn pw(i: &DyadicInterval, path: &PathBuf, depth: u32, k: Option<DyadicInterval>, json: bool) -> Result<(), CliError> {
    let modes = parse_coefficients(&read(path)?)?;
    let s = pw_build(i, &modes, depth)?;
    let gap = match k {
        Some(k) => {
            let g = gap_lower_bound_check(&s.function, i, &k, s.eta)?;
            Some(GapOut {
                k,
                holds: g.holds(1e-9),
                exact_constant: g.exact_constant.to_string(),
                claimed_constant: g.claimed_constant.as_ref().map(|c| c.to_string()),
                lhs: g.lhs,
                rhs: g.rhs,
                claimed_rhs: g.claimed_rhs,
            })
        }
        None => None,
    };
    let out = PwOut {
        i: *i,
        depth,
        eta: s.eta,
        mean_mass: s.mean_mass,
        norm2: s.norm2,
        mean_bound_rhs: (1.0 - s.eta).powi(2) * s.norm2,
        mean_bound_holds: s.mean_bound_holds(1e-9),
        gap,
    };
    if json {
        print_json(&out);
        return Ok(());
    }
    println!("eta               {:.12}", out.eta);
    println!("|I|<f>^2          {:.12}", out.mean_mass);
    println!("(1-eta)^2 |f|^2   {:.12}", out.mean_bound_rhs);
    println!("mean bound        {}", if out.mean_bound_holds { "holds" } else { "fails" });
    if let Some(g) = &out.gap {
        println!("K                 {}", g.k);
        println!("exact_constant    {}", g.exact_constant);
        println!("|1_K Ш f|^2       {:.12}", g.lhs);
        println!("(1-eta)^2 C |f|^2 {:.12}", g.rhs);
        if let (Some(c), Some(x)) = (&g.claimed_constant, g.claimed_rhs) {
            println!("claimed_constant  {c}");
            println!("claimed rhs       {x:.12}");
        }
        println!("gap bound         {}", if g.holds { "holds" } else { "fails" });
    }
    Ok(())
}

fn audit(scales: (i32, i32), max_index: i64, depth: u32, out: &Option<PathBuf>) -> Result<bool, CliError> {
    let universe = Universe {
        min_scale: scales.0,
        max_scale: scales.1,
        max_index,
        mirrored: true,
    };
    if max_index < 0 {
        return Err(CliError::Input("--max-index must be non-negative".into()));
    }
    let reports = audit_claims(&universe, depth);
    let text = write_audit(&reports);
    match out {
        Some(p) => {
            fs::write(p, format!("{text}\n")).map_err(|e| CliError::Io(p.clone(), e))?;
            for r in &reports {
                let status = match r.status {
                    ClaimStatus::Verified => "verified",
                    ClaimStatus::VerifiedWithSlack => "verified-with-slack",
                    ClaimStatus::Discrepancy => "discrepancy",
                };
                println!("{:<16} {:<20} {:>9} pairs", r.claim, status, r.pairs_checked);
            }
        }
        None => emit(&text),
    }
    Ok(engine_agrees(&reports))
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let r = Render { decimal: cli.decimal };
    match &cli.command {
        Command::Constant { pair } => constant(pair, cli.json, &r),
        Command::Norm { i, k, f } => norm(*i, k, f, cli.json, &r)?,
        Command::Apply { f, window, out } => apply(f, window, out)?,
        Command::Svd { pair, depth, zero_mean } => svd(pair, *depth, *zero_mean)?,
        Command::Extremal { pair, printed, out } => extremal(pair, *printed, out)?,
        Command::Pw { i, coeffs, depth, k } => pw(i, coeffs, *depth, *k, cli.json)?,
        Command::Audit {
            scales,
            max_index,
            depth,
            out,
        } => {
            if !audit(*scales, *max_index, *depth, out)? {
                eprintln!("error: the exact engine and the brute-force oracle disagree");
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
