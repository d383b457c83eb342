//! `kfree`: exact computations around power-free values of binary forms.
//!
//! Subcommands: hilbert, density, sieve, detmethod, exponents, points.
//! Exit codes: 0 success, 1 failed verification verdict, 2 usage error,
//! 3 bad polynomial syntax, 4 regime violation, 5 I/O error, 6 other
//! domain errors.

mod forms;
mod output;

use clap::{Args, Parser, Subcommand};
use kfree_core::error::Error as CoreError;
use kfree_core::exponents;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERDICT: u8 = 1;
const EXIT_FORM: u8 = 3;
const EXIT_REGIME: u8 = 4;
const EXIT_IO: u8 = 5;
const EXIT_DOMAIN: u8 = 6;

#[derive(Parser)]
#[command(name = "kfree", version, about = "Exact power-free value computations for binary forms")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Emit JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
    /// Write output to a file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the parallel scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed recorded in the provenance header (reserved for sampled runs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function profile of a principal ideal.
    Hilbert(HilbertArgs),
    /// Truncated Euler product of local densities.
    Density(DensityArgs),
    /// Power-free counting and decompositions over a box.
    Sieve(SieveArgs),
    /// Full determinant-method verification run.
    Detmethod(DetArgs),
    /// Threshold and exponent table over a degree range.
    Exponents(ExponentsArgs),
    /// Enumerate surface points in a box.
    Points(PointsArgs),
}

#[derive(Args)]
struct HilbertArgs {
    /// Degree of the binary form defining the standard surface.
    #[arg(long, conflicts_with_all = ["weights", "lead"])]
    d: Option<u64>,
    /// Power in the standard surface (requires --d).
    #[arg(long, requires = "d")]
    k: Option<u64>,
    /// Comma-separated weight vector for a generic ideal.
    #[arg(long, requires = "lead")]
    weights: Option<String>,
    /// Comma-separated leading monomial exponents (requires --weights).
    #[arg(long, requires = "weights")]
    lead: Option<String>,
    /// Largest degree tabulated.
    #[arg(long, default_value_t = 30)]
    u_max: u64,
}

#[derive(Args)]
struct DensityArgs {
    /// Binary form, e.g. "x^3+2y^3" or "coefs:1,0,0,2".
    #[arg(long, conflicts_with = "poly")]
    form: Option<String>,
    /// Univariate polynomial in x instead of a binary form.
    #[arg(long)]
    poly: Option<String>,
    #[arg(long)]
    k: u32,
    #[arg(long, default_value_t = 1000)]
    prime_bound: u64,
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    k: u32,
    #[arg(long = "B")]
    big_b: u64,
    /// count, decompose, or representable.
    #[arg(long, default_value = "count")]
    mode: String,
    /// Preimage cap for representable mode (default ceil(B^(1/D)) + 2).
    #[arg(long)]
    xy_cap: Option<u64>,
    /// Override the small-prime cutoff in decompose mode.
    #[arg(long)]
    xi: Option<f64>,
}

#[derive(Args)]
struct DetArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    k: u32,
    #[arg(long = "B")]
    big_b: u64,
    /// Dyadic exponent as an integer or fraction, e.g. 2 or 5/2.
    #[arg(long, default_value = "2")]
    beta: String,
    /// Require the z coordinate to be prime.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    z_prime: bool,
    /// Skip valuation certification at primes above this bound.
    #[arg(long)]
    max_p: Option<u64>,
}

#[derive(Args)]
struct ExponentsArgs {
    #[arg(long, default_value_t = 5)]
    dmin: u64,
    #[arg(long, default_value_t = 20)]
    dmax: u64,
}

#[derive(Args)]
struct PointsArgs {
    #[arg(long)]
    form: String,
    #[arg(long)]
    k: u32,
    /// Box scale; bounds are (B, B, explicit v cap, B^beta).
    #[arg(long = "B")]
    big_b: u64,
    #[arg(long, default_value = "2")]
    beta: String,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    z_prime: bool,
}

enum Failure {
    Core(CoreError),
    Form(String),
    Io(std::io::Error),
    Usage(String),
    Verdict,
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code_for(f: &Failure) -> u8 {
    match f {
        Failure::Core(CoreError::Regime(_)) => EXIT_REGIME,
        Failure::Core(CoreError::InvalidForm(_)) => EXIT_FORM,
        Failure::Core(_) => EXIT_DOMAIN,
        Failure::Form(_) => EXIT_FORM,
        Failure::Io(_) => EXIT_IO,
        Failure::Usage(_) => EXIT_DOMAIN,
        Failure::Verdict => EXIT_VERDICT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        // A second initialization in the same process is harmless here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Form(m) => eprintln!("error: invalid form: {m}"),
                Failure::Io(e) => eprintln!("error: {e}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Verdict => eprintln!("verification failed: at least one verdict is FAIL"),
            }
            ExitCode::from(exit_code_for(&f))
        }
    }
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Failure::Usage(format!("bad integer list: {e}")))
        })
        .collect()
}

fn parse_beta(s: &str) -> Result<(u32, u32), Failure> {
    let (n, d) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num = n
        .parse::<u32>()
        .map_err(|_| Failure::Usage(format!("bad beta numerator '{n}'")))?;
    let den = d
        .parse::<u32>()
        .map_err(|_| Failure::Usage(format!("bad beta denominator '{d}'")))?;
    if den == 0 {
        return Err(Failure::Usage("beta denominator must be positive".into()));
    }
    Ok((num, den))
}


fn with_seed(g: &GlobalOpts, base: String) -> String {
    format!("{base} --seed {}", g.seed)
}

fn surface_for(d: u64, k: u64) -> Result<kfree_core::SurfaceX, Failure> {
    // Any generator with leading monomial v z^k gives the same profile;
    // x^d + 2 y^d keeps the construction honest.
    let coeffs: Vec<i64> = (0..=d)
        .map(|i| if i == 0 { 1 } else if i == d { 2 } else { 0 })
        .collect();
    let f = kfree_core::BinaryForm::from_i64(&coeffs).map_err(Failure::Core)?;
    kfree_core::make_surface(f, k as u32).map_err(Failure::Core)
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.json && g.csv {
        return Err(Failure::Usage("choose at most one of --json and --csv".into()));
    }
    match &cli.command {
        Command::Hilbert(a) => run_hilbert(g, a),
        Command::Density(a) => run_density(g, a),
        Command::Sieve(a) => run_sieve(g, a),
        Command::Detmethod(a) => run_detmethod(g, a),
        Command::Exponents(a) => run_exponents(g, a),
        Command::Points(a) => run_points(g, a),
    }
}

fn run_hilbert(g: &GlobalOpts, a: &HilbertArgs) -> Result<(), Failure> {
    let (ideal, config) = match (&a.d, &a.weights) {
        (Some(d), None) => {
            let k = a
                .k
                .ok_or_else(|| Failure::Usage("--d requires --k".into()))?;
            let surface = surface_for(*d, k)?;
            (
                surface.ideal(),
                with_seed(g, format!("hilbert --d {d} --k {k} --u-max {}", a.u_max)),
            )
        }
        (None, Some(wstr)) => {
            let lead = a
                .lead
                .as_ref()
                .ok_or_else(|| Failure::Usage("--weights requires --lead".into()))?;
            let ws = parse_u64_list(wstr)?;
            let es = parse_u64_list(lead)?;
            let w = kfree_core::WeightVector::new(ws).map_err(Failure::Core)?;
            let e = kfree_core::ExponentVector::new(es);
            let generator = kfree_core::WeightedForm::monomial(w, e, BigInt::from(1))
                .map_err(Failure::Core)?;
            (
                kfree_core::PrincipalIdeal::new(generator).map_err(Failure::Core)?,
                with_seed(g, format!(
                    "hilbert --weights {wstr} --lead {lead} --u-max {}",
                    a.u_max
                )),
            )
        }
        _ => {
            return Err(Failure::Usage(
                "hilbert needs either --d/--k or --weights/--lead".into(),
            ))
        }
    };
    let rows = kfree_core::hilbert::profile(&ideal, a.u_max).map_err(Failure::Core)?;
    let n = ideal.weights().len();
    let content = if g.json {
        output::json_document(&config, serde_json::to_value(&rows).expect("rows serialize"))
    } else {
        let mut body = String::new();
        let mut header = String::from("u,hilbert");
        for m in 0..n {
            header.push_str(&format!(",sigma_{m}"));
        }
        for m in 0..n {
            header.push_str(&format!(",ratio_{m}"));
        }
        for m in 0..n {
            header.push_str(&format!(",a_{m}"));
        }
        body.push_str(&header);
        body.push('\n');
        for row in &rows {
            let mut line = format!("{},{}", row.u, row.hilbert);
            for s in &row.sigma {
                line.push_str(&format!(",{s}"));
            }
            for r in &row.ratio {
                match r {
                    Some(v) => line.push_str(&format!(",{v:.9}")),
                    None => line.push(','),
                }
            }
            for t in &row.target {
                line.push_str(&format!(",{t:.9}"));
            }
            body.push_str(&line);
            body.push('\n');
        }
        output::csv_document(&config, &body)
    };
    output::emit(g.out.as_deref(), &content)?;
    Ok(())
}

fn run_density(g: &GlobalOpts, a: &DensityArgs) -> Result<(), Failure> {
    if g.csv {
        return Err(Failure::Usage("density emits JSON only".into()));
    }
    let (result, config) = match (&a.form, &a.poly) {
        (Some(fstr), None) => {
            let f = forms::parse_binary_form(fstr).map_err(|e| Failure::Form(e.to_string()))?;
            (
                kfree_core::densities::density_binary(&f, a.k, a.prime_bound)
                    .map_err(Failure::Core)?,
                with_seed(g, format!(
                    "density --form {fstr} --k {} --prime-bound {}",
                    a.k, a.prime_bound
                )),
            )
        }
        (None, Some(pstr)) => {
            let p = forms::parse_univariate(pstr).map_err(|e| Failure::Form(e.to_string()))?;
            (
                kfree_core::densities::density_univariate(&p, a.k, a.prime_bound)
                    .map_err(Failure::Core)?,
                with_seed(g, format!(
                    "density --poly {pstr} --k {} --prime-bound {}",
                    a.k, a.prime_bound
                )),
            )
        }
        _ => {
            return Err(Failure::Usage(
                "density needs exactly one of --form or --poly".into(),
            ))
        }
    };
    let content = output::json_document(
        &config,
        serde_json::to_value(&result).expect("density serializes"),
    );
    output::emit(g.out.as_deref(), &content)?;
    Ok(())
}

fn run_sieve(g: &GlobalOpts, a: &SieveArgs) -> Result<(), Failure> {
    let f = forms::parse_binary_form(&a.form).map_err(|e| Failure::Form(e.to_string()))?;
    let config = with_seed(
        g,
        format!(
            "sieve --form {} --k {} --B {} --mode {}",
            a.form, a.k, a.big_b, a.mode
        ),
    );
    match a.mode.as_str() {
        "count" => {
            let n = kfree_core::sieve::count_kfree(&f, a.k, a.big_b).map_err(Failure::Core)?;
            let ratio = n as f64 / (a.big_b as f64).powi(2);
            emit_sieve_row(g, &config, a.big_b, Some(n), None, None, None, ratio)
        }
        "decompose" => {
            let rep = kfree_core::sieve::m_decomposition(&f, a.k, a.big_b, a.xi)
                .map_err(Failure::Core)?;
            if g.json {
                let content = output::json_document(
                    &config,
                    serde_json::to_value(&rep).expect("report serializes"),
                );
                output::emit(g.out.as_deref(), &content)?;
                return Ok(());
            }
            let ratio = rep.n_kfree as f64 / (a.big_b as f64).powi(2);
            emit_sieve_row(
                g,
                &config,
                a.big_b,
                Some(rep.n_kfree),
                Some(rep.m1),
                Some(rep.m2),
                Some(rep.m3),
                ratio,
            )
        }
        "representable" => {
            let d = f.degree();
            let cap = a.xy_cap.unwrap_or_else(|| {
                (a.big_b as f64).powf(1.0 / d as f64).ceil() as u64 + 2
            });
            let count = kfree_core::sieve::count_representable(&f, a.k, a.big_b, cap)
                .map_err(Failure::Core)?;
            let config = format!("{config} --xy-cap {cap}");
            if g.json {
                let content = output::json_document(
                    &config,
                    serde_json::json!({
                        "B": a.big_b.to_string(),
                        "k": a.k,
                        "xy_cap": cap.to_string(),
                        "count": count.to_string(),
                        "note": "lower bound: preimage search capped at |x|,|y| <= xy_cap",
                    }),
                );
                output::emit(g.out.as_deref(), &content)?;
                return Ok(());
            }
            let body = format!("B,representable,xy_cap\n{},{count},{cap}\n", a.big_b);
            output::emit(g.out.as_deref(), &output::csv_document(&config, &body))?;
            Ok(())
        }
        other => Err(Failure::Usage(format!(
            "unknown mode '{other}' (expected count, decompose, or representable)"
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_sieve_row(
    g: &GlobalOpts,
    config: &str,
    big_b: u64,
    n: Option<u64>,
    m1: Option<u64>,
    m2: Option<u64>,
    m3: Option<u64>,
    ratio: f64,
) -> Result<(), Failure> {
    if g.json {
        let content = output::json_document(
            config,
            serde_json::json!({
                "B": big_b.to_string(),
                "N": n.map(|v| v.to_string()),
                "M1": m1.map(|v| v.to_string()),
                "M2": m2.map(|v| v.to_string()),
                "M3": m3.map(|v| v.to_string()),
                "ratio": ratio,
            }),
        );
        output::emit(g.out.as_deref(), &content)?;
        return Ok(());
    }
    let cell = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    let body = format!(
        "B,N,M1,M2,M3,ratio\n{big_b},{},{},{},{},{ratio:.9}\n",
        cell(n),
        cell(m1),
        cell(m2),
        cell(m3),
    );
    output::emit(g.out.as_deref(), &output::csv_document(config, &body))?;
    Ok(())
}

fn run_detmethod(g: &GlobalOpts, a: &DetArgs) -> Result<(), Failure> {
    if g.csv {
        return Err(Failure::Usage("detmethod emits JSON only".into()));
    }
    let f = forms::parse_binary_form(&a.form).map_err(|e| Failure::Form(e.to_string()))?;
    let (beta_num, beta_den) = parse_beta(&a.beta)?;
    let config = with_seed(
        g,
        format!(
            "detmethod --form {} --k {} --B {} --beta {}/{} --z-prime {} --max-p {:?}",
            a.form, a.k, a.big_b, beta_num, beta_den, a.z_prime, a.max_p
        ),
    );
    let report = kfree_core::detmethod::run_pipeline(
        f,
        a.k,
        a.big_b,
        beta_num,
        beta_den,
        a.z_prime,
        a.max_p,
    )
    .map_err(Failure::Core)?;
    let all_pass = report.all_pass();
    let content = output::json_document(
        &config,
        serde_json::to_value(&report).expect("report serializes"),
    );
    output::emit(g.out.as_deref(), &content)?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn run_exponents(g: &GlobalOpts, a: &ExponentsArgs) -> Result<(), Failure> {
    if a.dmin < 2 || a.dmax < a.dmin {
        return Err(Failure::Usage("need 2 <= dmin <= dmax".into()));
    }
    let config = with_seed(g, format!("exponents --dmin {} --dmax {}", a.dmin, a.dmax));
    let two = num_rational::BigRational::from(BigInt::from(2));
    let mut rows = Vec::new();
    for d in a.dmin..=a.dmax {
        let kb = exponents::threshold_binary(d);
        let ku = if d >= 3 {
            Some(exponents::threshold_univariate(d).map_err(Failure::Core)?)
        } else {
            None
        };
        let (psi_b2, psi_lt_1) = if d > 2 * kb {
            let v = exponents::psi(d, kb, &two).map_err(Failure::Core)?;
            let lt = exponents::psi_cmp_one(d, kb, &two).map_err(Failure::Core)?
                == std::cmp::Ordering::Less;
            (Some(v), Some(lt))
        } else {
            (None, None)
        };
        rows.push((d, kb, ku, psi_b2, psi_lt_1));
    }
    if g.json {
        let value = serde_json::Value::Array(
            rows.iter()
                .map(|(d, kb, ku, psi, lt)| {
                    serde_json::json!({
                        "d": d.to_string(),
                        "threshold_binary": kb.to_string(),
                        "threshold_univariate": ku.map(|v| v.to_string()),
                        "psi_at_beta_2": psi,
                        "psi_below_one": lt,
                    })
                })
                .collect(),
        );
        let content = output::json_document(&config, value);
        output::emit(g.out.as_deref(), &content)?;
        return Ok(());
    }
    let mut body = String::from("d,threshold_binary,threshold_univariate,psi_at_beta_2,psi_below_one\n");
    for (d, kb, ku, psi, lt) in rows {
        body.push_str(&format!(
            "{d},{kb},{},{},{}\n",
            ku.map(|v| v.to_string()).unwrap_or_default(),
            psi.map(|v| format!("{v:.9}")).unwrap_or_default(),
            lt.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    output::emit(g.out.as_deref(), &output::csv_document(&config, &body))?;
    Ok(())
}

fn run_points(g: &GlobalOpts, a: &PointsArgs) -> Result<(), Failure> {
    let f = forms::parse_binary_form(&a.form).map_err(|e| Failure::Form(e.to_string()))?;
    let (beta_num, beta_den) = parse_beta(&a.beta)?;
    let config = with_seed(
        g,
        format!(
            "points --form {} --k {} --B {} --beta {}/{} --z-prime {}",
            a.form, a.k, a.big_b, beta_num, beta_den, a.z_prime
        ),
    );
    // Reuse the pipeline's box construction by running only enumeration:
    // bz = floor(B^beta), bv = explicit cap.
    let surface = kfree_core::make_surface(f, a.k).map_err(Failure::Core)?;
    let d = surface.d();
    let bz = BigInt::from(a.big_b)
        .pow(beta_num)
        .nth_root(beta_den)
        .to_u64()
        .ok_or_else(|| Failure::Usage("z bound exceeds 64 bits".into()))?
        .max(1);
    let height = surface.f().height();
    let bv = (BigInt::from(d) * &height * BigInt::from(a.big_b).pow(d as u32)
        * BigInt::from(2u64).pow(a.k)
        / BigInt::from(bz).pow(a.k))
    .max(BigInt::from(1));
    let bounds = kfree_core::SearchBox::new(a.big_b, a.big_b, bv, bz).map_err(Failure::Core)?;
    let mut points = surface.enumerate_points(&bounds, a.z_prime, &[]);
    points.sort();
    if g.csv {
        let mut body = String::from("x,y,v,z\n");
        for p in &points {
            body.push_str(&format!("{},{},{},{}\n", p.x(), p.y(), p.v(), p.z()));
        }
        output::emit(g.out.as_deref(), &output::csv_document(&config, &body))?;
        return Ok(());
    }
    let content = output::json_document(
        &config,
        serde_json::json!({
            "bounds": serde_json::to_value(&bounds).expect("bounds serialize"),
            "count": points.len().to_string(),
            "points": serde_json::to_value(&points).expect("points serialize"),
        }),
    );
    output::emit(g.out.as_deref(), &content)?;
    Ok(())
}
