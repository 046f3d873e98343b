//! Command-line verification harness.
//!
//! Runs the library's verification sweeps (certified remainder bounds,
//! theta identities, exact representations, scaled main-term comparisons,
//! orthogonality quadrature, decay-rate fits) and emits deterministic CSV
//! reports. Exit codes: 0 all rows pass, 1 any bound violation, 2 usage or
//! configuration error, 3 resource or numerical failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use qasym::asymptotics::MainTermCase;
use qasym::sweep::{emit_csv, run_sweep, OrthoFamily, SweepConfig, SweepTarget};
use qasym::theta::{dedekind_eta, theta, ModularPoint, ThetaKind};
use qasym::{Error, LogComplex, PrecisionContext, QPoint};
use rug::{Complex, Float};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qasym",
    version,
    about = "Verification harness for q-series scaled asymptotics"
)]
struct Cli {
    /// Mantissa precision in bits for every evaluation.
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,

    /// Output file for reports (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Stop a sweep at the first bound violation.
    #[arg(long, global = true)]
    fail_fast: bool,

    /// Worker threads for sweep execution (output is identical for any value).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification sweep and emit a CSV report.
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
    /// Fit the decay rate of one scaled case across a degree list.
    RateFit(RateFitArgs),
    /// Evaluate a single function at one point.
    Eval(EvalArgs),
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Certified q-shifted-factorial remainder bounds on the default grid.
    Lemma1,
    /// Scaled (q;q)_inf asymptotics on the default grid.
    Lemma2,
    /// Theta dual-path, modular and eta transformation identities.
    Theta,
    /// One theorem: exact representation (--rep) or scaled limits (--scaled).
    Theorem(TheoremArgs),
    /// Orthogonality integrals for one polynomial family.
    Orthogonality(OrthogonalityArgs),
}

#[derive(Args)]
struct TheoremArgs {
    /// Theorem identifier: 2.1 .. 2.6.
    #[arg(long)]
    id: String,

    /// Verify the exact theta representation with its certified bound.
    #[arg(long, conflicts_with = "scaled")]
    rep: bool,

    /// Verify the scaled main terms.
    #[arg(long, requires = "a", requires = "u", requires = "n")]
    scaled: bool,

    /// Scaling exponent a in (0, 1/2).
    #[arg(long)]
    a: Option<f64>,

    /// Window coordinate u.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,

    /// Degree list, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,

    /// Bessel order (theorem 2.4).
    #[arg(long, default_value_t = 0.5)]
    nu: f64,

    /// Laguerre parameter (theorem 2.6).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Args)]
struct OrthogonalityArgs {
    /// Polynomial family.
    #[arg(long, value_enum)]
    family: Family,

    /// The base q in (0, 1).
    #[arg(long)]
    q: f64,

    /// Laguerre parameter (required for the q-Laguerre family).
    #[arg(long)]
    alpha: Option<f64>,

    /// Largest polynomial degree; all pairs (m, n) with m <= n are checked.
    #[arg(long)]
    max_degree: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Sw,
    Qlaguerre,
}

#[derive(Args)]
struct RateFitArgs {
    /// Scaled-case identifier (e.g. 2.2, 2.17, 2.33).
    #[arg(long)]
    id: String,

    /// Scaling exponent a in (0, 1/2).
    #[arg(long)]
    a: f64,

    /// Window coordinate u.
    #[arg(long, allow_hyphen_values = true)]
    u: f64,

    /// Degree list, comma separated (at least two).
    #[arg(long, value_delimiter = ',')]
    n: Vec<u64>,

    /// Bessel order (cases 2.17, 2.18).
    #[arg(long, default_value_t = 0.5)]
    nu: f64,

    /// Laguerre parameter (cases 2.31 .. 2.33).
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
}

#[derive(Clone, Copy, ValueEnum)]
#[allow(non_camel_case_types)]
enum EvalFn {
    #[value(name = "Eq")]
    Eq,
    #[value(name = "gammaq")]
    Gammaq,
    #[value(name = "Aq")]
    Aq,
    #[value(name = "J2")]
    J2,
    #[value(name = "SW")]
    Sw,
    #[value(name = "qLaguerre")]
    QLaguerre,
    #[value(name = "theta1")]
    Theta1,
    #[value(name = "theta2")]
    Theta2,
    #[value(name = "theta3")]
    Theta3,
    #[value(name = "theta4")]
    Theta4,
    #[value(name = "eta")]
    Eta,
}

#[derive(Args)]
struct EvalArgs {
    /// Function to evaluate.
    #[arg(long = "fn", value_enum)]
    function: EvalFn,

    /// The base q in (0, 1).
    #[arg(long)]
    q: Option<f64>,

    /// Complex argument, "re" or "re,im".
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,

    /// Real argument (gammaq).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,

    /// Polynomial degree (SW, qLaguerre).
    #[arg(long)]
    n: Option<u64>,

    /// Bessel order (J2).
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,

    /// Laguerre parameter (qLaguerre).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Theta argument v, "re" or "re,im".
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,

    /// Modular parameter tau, "re,im" with positive im.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64), Error> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("cannot parse {what} component {s:?}")))
    };
    match parts.as_slice() {
        [re] => Ok((parse(re)?, 0.0)),
        [re, im] => Ok((parse(re)?, parse(im)?)),
        _ => Err(Error::Config(format!(
            "{what} must be \"re\" or \"re,im\", got {text:?}"
        ))),
    }
}

fn require<T: Copy>(opt: Option<T>, flag: &str) -> Result<T, Error> {
    opt.ok_or_else(|| Error::Config(format!("missing required flag --{flag}")))
}

fn fmt20(x: &Float) -> String {
    format!("{x:.20e}")
}

fn print_logc<W: Write>(out: &mut W, value: &LogComplex) -> Result<(), Error> {
    let c = value.to_complex();
    writeln!(out, "log_mag,{}", fmt20(value.log_mag()))?;
    writeln!(out, "phase,{}", fmt20(value.phase()))?;
    writeln!(out, "re,{}", fmt20(&Float::with_val(c.prec().0, c.real())))?;
    writeln!(out, "im,{}", fmt20(&Float::with_val(c.prec().1, c.imag())))?;
    Ok(())
}

fn print_complex<W: Write>(out: &mut W, value: &Complex) -> Result<(), Error> {
    writeln!(
        out,
        "re,{}",
        fmt20(&Float::with_val(value.prec().0, value.real()))
    )?;
    writeln!(
        out,
        "im,{}",
        fmt20(&Float::with_val(value.prec().1, value.imag()))
    )?;
    Ok(())
}

fn run_eval<W: Write>(args: &EvalArgs, precision: u32, out: &mut W) -> Result<(), Error> {
    let ctx = PrecisionContext::with_bits(precision)?;
    let prec = ctx.working_prec();
    let qpoint = |q: Option<f64>| -> Result<QPoint, Error> {
        QPoint::from_f64(require(q, "q")?, &ctx)
    };
    let complex_arg = |text: &Option<String>, what: &str| -> Result<Complex, Error> {
        let t = text
            .as_ref()
            .ok_or_else(|| Error::Config(format!("missing required flag --{what}")))?;
        let (re, im) = parse_pair(t, what)?;
        Ok(ctx.complex((re, im)))
    };
    match args.function {
        EvalFn::Eq => {
            let z = complex_arg(&args.z, "z")?;
            let v = qasym::qfunctions::euler_eq(&z, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::Gammaq => {
            let x = ctx.float(require(args.x, "x")?);
            let v = qasym::qfunctions::q_gamma(&x, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::Aq => {
            let z = complex_arg(&args.z, "z")?;
            let v = qasym::qfunctions::ramanujan_aq(&z, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::J2 => {
            let z = complex_arg(&args.z, "z")?;
            let nu = require(args.nu, "nu")?;
            let v = qasym::qfunctions::jackson_j2(&z, nu, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::Sw => {
            let z = complex_arg(&args.z, "z")?;
            let n = require(args.n, "n")?;
            let v = qasym::qfunctions::stieltjes_wigert(&z, n, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::QLaguerre => {
            let z = complex_arg(&args.z, "z")?;
            let n = require(args.n, "n")?;
            let alpha = require(args.alpha, "alpha")?;
            let spec = qasym::qfunctions::PolynomialSpec::laguerre(n, alpha)?;
            let v = qasym::qfunctions::q_laguerre(&z, &spec, &qpoint(args.q)?, &ctx)?;
            print_logc(out, &v)
        }
        EvalFn::Theta1 | EvalFn::Theta2 | EvalFn::Theta3 | EvalFn::Theta4 => {
            let kind = match args.function {
                EvalFn::Theta1 => ThetaKind::One,
                EvalFn::Theta2 => ThetaKind::Two,
                EvalFn::Theta3 => ThetaKind::Three,
                _ => ThetaKind::Four,
            };
            let v = complex_arg(&args.v, "v")?;
            let tau = complex_arg(&args.tau, "tau")?;
            let p = ModularPoint::new(v, tau)?;
            let value = theta(kind, &p, &ctx)?;
            print_complex(out, &value)
        }
        EvalFn::Eta => {
            let tau = complex_arg(&args.tau, "tau")?;
            let value = dedekind_eta(&tau, &ctx)?;
            print_complex(out, &value)
        }
    }?;
    let _ = prec;
    Ok(())
}

fn build_target(target: &VerifyTarget) -> Result<SweepTarget, Error> {
    match target {
        VerifyTarget::Lemma1 => Ok(SweepTarget::Lemma1),
        VerifyTarget::Lemma2 => Ok(SweepTarget::Lemma2),
        VerifyTarget::Theta => Ok(SweepTarget::Theta),
        VerifyTarget::Theorem(t) => {
            if t.rep == t.scaled {
                return Err(Error::Config(
                    "choose exactly one of --rep and --scaled".into(),
                ));
            }
            if t.rep {
                Ok(SweepTarget::TheoremRep {
                    theorem_id: t.id.clone(),
                })
            } else {
                Ok(SweepTarget::TheoremScaled {
                    theorem_id: t.id.clone(),
                    a_exp: require(t.a, "a")?,
                    u: require(t.u, "u")?,
                    ns: t.n.clone().unwrap_or_default(),
                    nu: Some(t.nu),
                    alpha: Some(t.alpha),
                })
            }
        }
        VerifyTarget::Orthogonality(o) => Ok(SweepTarget::Orthogonality {
            family: match o.family {
                Family::Sw => OrthoFamily::Sw,
                Family::Qlaguerre => OrthoFamily::QLaguerre,
            },
            q: o.q,
            alpha: o.alpha,
            max_degree: o.max_degree,
        }),
    }
}

fn run_sweep_command(cli: &Cli, target: SweepTarget) -> Result<bool, Error> {
    let cfg = SweepConfig {
        target,
        precision_bits: cli.precision,
        output_path: cli.out.clone(),
        fail_fast: cli.fail_fast,
        jobs: cli.jobs.max(1),
    };
    let report = run_sweep(&cfg)?;
    match &cfg.output_path {
        Some(path) => {
            let mut file = std::fs::File::create(path)?;
            emit_csv(&report, &mut file)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            emit_csv(&report, &mut lock)?;
        }
    }
    eprintln!(
        "rows: {} pass, {} fail, {} skip",
        report.pass_count, report.fail_count, report.skip_count
    );
    if let Some(i) = report.worst_case {
        let row = &report.rows[i];
        if let Some(r) = &row.ratio {
            eprintln!("worst case: {} (n = {}) ratio {:.3e}", row.target, row.n, r);
        }
    }
    Ok(report.fail_count == 0)
}

fn dispatch(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Verify { target } => {
            let t = build_target(target)?;
            run_sweep_command(cli, t)
        }
        Command::RateFit(args) => {
            let case = MainTermCase::from_id(&args.id)?;
            let t = SweepTarget::RateFit {
                case_id: case.id().to_string(),
                a_exp: args.a,
                u: args.u,
                ns: args.n.clone(),
                nu: Some(args.nu),
                alpha: Some(args.alpha),
            };
            run_sweep_command(cli, t)
        }
        Command::Eval(args) => {
            match &cli.out {
                Some(path) => {
                    let mut file = std::fs::File::create(path)?;
                    run_eval(args, cli.precision, &mut file)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    run_eval(args, cli.precision, &mut lock)?;
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Domain(_) => ExitCode::from(2),
                Error::Singularity(_) | Error::Resource(_) | Error::Regime(_) | Error::Io(_) => {
                    ExitCode::from(3)
                }
            }
        }
    }
}
