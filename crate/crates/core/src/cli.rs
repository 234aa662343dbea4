//! The `binform` command line: JSON in, canonical JSON out.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage error, 3 degenerate input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::balance::{balancing_partner, FractionalIdeal};
use crate::codec;
use crate::error::Error;
use crate::formring::{make_ring, normalize_leading};
use crate::groups::enumerate_orbits;
use crate::tensorlink::{phi, psi};
use crate::verify::{self, Suite, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

const MAX_DEGREE: usize = 12;
const MAX_BOUND: i64 = 1_000_000;
const MAX_COUNT: usize = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "binform", version, about = "Binary forms, their rings, and 2 x n x n tensors")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structure constants, discriminant, I_f and J_f of a form.
    Ring {
        #[arg(long)]
        form: String,
    },
    /// Balanced pair of a tensor.
    Psi {
        #[arg(long)]
        tensor: String,
    },
    /// Tensor of a balanced pair.
    Phi {
        #[arg(long)]
        pair: String,
    },
    /// Determinant form of a tensor.
    Det {
        #[arg(long)]
        tensor: String,
    },
    /// Census of tensors with a given determinant form in a box.
    Orbits {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 1)]
        bound: u32,
        /// Maximum length of move words used to merge classes.
        #[arg(long, default_value_t = 4)]
        budget: u32,
    },
    /// The balancing partner (I_f : N) of a fractional ideal.
    Partner {
        #[arg(long)]
        form: String,
        /// Generators of N in zeta coordinates; defaults to R_f.
        #[arg(long)]
        ideal: Option<String>,
    },
    /// Run seeded property suites.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        form: Option<String>,
    },
}

/// A failed command: exit code and message.
#[derive(Debug)]
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure(EXIT_USAGE, msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(exit_code(&e), e.to_string())
    }
}

/// Exit code for an error raised while computing (not while parsing input).
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DegenerateTensor
        | Error::DegenerateForm
        | Error::ZeroForm
        | Error::Singular
        | Error::ZeroDivisor
        | Error::DegenerateLattice => EXIT_DEGENERATE,
        Error::Parse(_)
        | Error::BoundTooLarge(_)
        | Error::DegreeTooSmall(_)
        | Error::DimensionMismatch(_)
        | Error::NonSquare { .. }
        | Error::OutOfRange { .. }
        | Error::NotUnimodular(_) => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

/// Inline JSON when the argument starts with `[` or `{`, otherwise a file path.
fn load(arg: &str) -> Result<Value, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))?
    };
    codec::parse(&text).map_err(|e| Failure::usage(e.to_string()))
}

fn input<T>(arg: &str, decode: impl Fn(&Value) -> crate::Result<T>) -> Result<T, Failure> {
    decode(&load(arg)?).map_err(|e| Failure::usage(format!("invalid input: {e}")))
}

/// Runs the CLI on `args` (including the program name); returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let (code, value) = match dispatch(&cli.command, stderr) {
        Ok(r) => r,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "binform: {msg}");
            return code;
        }
    };
    let text = codec::to_canonical(&value);
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                let _ = writeln!(stderr, "binform: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = writeln!(stdout, "{text}");
        }
    }
    code
}

fn dispatch(cmd: &Command, stderr: &mut dyn Write) -> Result<(i32, Value), Failure> {
    match cmd {
        Command::Ring { form } => {
            let f = input(form, codec::form_from)?;
            if f.degree() < 2 {
                return Err(Failure::usage(Error::DegreeTooSmall(f.degree()).to_string()));
            }
            let (g, h) = normalize_leading(&f)?;
            let ring = make_ring(&h)?;
            Ok((EXIT_OK, codec::ring_report(&f, &g, &ring)))
        }
        Command::Psi { tensor } => {
            let a = input(tensor, codec::tensor_from)?;
            Ok((EXIT_OK, codec::pair(&psi(&a)?)))
        }
        Command::Phi { pair } => {
            let p = input(pair, codec::pair_from)?;
            Ok((EXIT_OK, codec::tensor(&phi(&p)?)))
        }
        Command::Det { tensor } => {
            let a = input(tensor, codec::tensor_from)?;
            let coeffs = a.det_coeffs()?;
            Ok((EXIT_OK, json!({ "coeffs": coeffs.iter().map(codec::int).collect::<Vec<_>>() })))
        }
        Command::Orbits { form, bound, budget } => {
            let f = input(form, codec::form_from)?;
            if *bound == 0 {
                return Err(Failure::usage("--bound must be positive"));
            }
            Ok((EXIT_OK, codec::orbit_report(&enumerate_orbits(&f, *bound, *budget)?)))
        }
        Command::Partner { form, ideal } => {
            let f = input(form, codec::form_from)?;
            let (g, h) = normalize_leading(&f)?;
            let ring = Arc::new(make_ring(&h)?);
            let n = match ideal {
                None => FractionalIdeal::unit(ring.clone()),
                Some(arg) => {
                    let gens = input(arg, |v| {
                        v.as_array()
                            .ok_or_else(|| Error::Parse("ideal must be a list of generators".into()))?
                            .iter()
                            .map(|g| {
                                let c = codec::theta_vec_from(g)?;
                                if c.coords().len() != ring.degree() {
                                    return Err(Error::DimensionMismatch("generator length".into()));
                                }
                                Ok(ring.from_zeta_coords(c.coords()))
                            })
                            .collect::<crate::Result<Vec<_>>>()
                    })?;
                    FractionalIdeal::generated_by(ring.clone(), &gens)?
                }
            };
            let report = balancing_partner(&n)?;
            let mut v = codec::partner(&report);
            v["form"] = codec::form(&f);
            v["transport"] = codec::gl2(&g);
            let code = if report.guaranteed && !report.verdict.balanced() { EXIT_VIOLATION } else { EXIT_OK };
            Ok((code, v))
        }
        Command::Verify { suite, n, bound, count, seed, form } => {
            let suites = Suite::parse_list(suite).map_err(|e| Failure::usage(e.to_string()))?;
            if n.is_some_and(|n| !(2..=MAX_DEGREE).contains(&n)) {
                return Err(Failure::usage(format!("--n must lie in 2..={MAX_DEGREE}")));
            }
            if bound.is_some_and(|b| !(1..=MAX_BOUND).contains(&b)) {
                return Err(Failure::usage(format!("--bound must lie in 1..={MAX_BOUND}")));
            }
            if *count > MAX_COUNT {
                return Err(Failure::usage(format!("--count must be at most {MAX_COUNT}")));
            }
            let form = form.as_deref().map(|f| input(f, codec::form_from)).transpose()?;
            let cfg = VerifyConfig { seed: *seed, count: *count, n: *n, bound: *bound, form };
            let mut reports = Vec::new();
            let mut code = EXIT_OK;
            for s in suites {
                let r = verify::run(s, &cfg)?;
                let total: usize = r.passed.values().sum();
                let _ = writeln!(
                    stderr,
                    "{}: {} {} trials, {} checks passed, {} failed",
                    s,
                    if r.ok() { "PASS" } else { "FAIL" },
                    r.trials,
                    total,
                    r.failures.len()
                );
                if !r.ok() {
                    code = EXIT_VIOLATION;
                }
                reports.push(r.to_json());
            }
            Ok((code, json!({ "seed": seed.to_string(), "count": count, "ok": code == EXIT_OK, "suites": reports })))
        }
    }
}
