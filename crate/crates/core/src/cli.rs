//! The `cofrob` command line. Exit codes: 0 success / yes / valid, 1 no / invalid,
//! 2 undecided within budget, 3 input error.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::algebra::{dualize_coalgebra, dualize_extension};
use crate::coalgebra::{validate_coalgebra, validate_morphism, Coalgebra, CoalgebraMorphism};
use crate::comodule::{hom_space, is_injective_comodule, validate_comodule, Comodule};
use crate::cotensor::{cotensor, cotensor_square};
use crate::document::{
    from_json, sniff, to_json_pretty, AlgebraDoc, AlgebraMorphismDoc, CertificateDoc, CoalgebraDoc, ComoduleDoc,
    CotensorDoc, DocumentKind, FieldDoc, FrobeniusSystemDoc, HomSpaceDoc, MorphismDoc, ReplayDoc, ReportDoc,
    VerdictDoc,
};
use crate::error::{Error, Result};
use crate::family::{SearchOptions, DEFAULT_BUDGET};
use crate::field::FieldSpec;
use crate::frobenius::{check_frobenius_extension, frobenius_system, replay_certificate, CheckOptions, Route, Verdict};
use crate::report::Report;
use crate::zoo::{self, Built};

pub const BUDGET_ENV: &str = "COFROB_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "cofrob", version, about = "Frobenius extensions of finite-dimensional coalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Dual,
    Primal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the axioms of a coalgebra, morphism or comodule document.
    Validate { file: PathBuf },
    /// Decide whether an extension is Frobenius.
    CheckFrobenius {
        extension: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Determinant evaluations allowed; defaults to $COFROB_BUDGET.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the certificate document here on a yes verdict.
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dual")]
        route: RouteArg,
        /// Random α samples for the primal route when no complete grid fits.
        #[arg(long, default_value_t = 32)]
        trials: usize,
    },
    /// Replay a certificate against an extension.
    Verify { extension: PathBuf, certificate: PathBuf },
    /// Cotensor product of a right and a left comodule, or `C □_D C` of one extension.
    Cotensor { first: PathBuf, second: Option<PathBuf> },
    /// Comodule maps between two comodules on the same side.
    Hom { source: PathBuf, target: PathBuf },
    /// Dual algebra of a coalgebra, or dual algebra map of an extension.
    Dualize { file: PathBuf },
    /// Whether a comodule is injective.
    Injective { file: PathBuf },
    /// Frobenius system `(e, π)` of a coalgebra.
    FrobeniusSystem {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Print a preset document, or list the presets.
    Zoo {
        preset: Option<String>,
        /// `Q` or a prime.
        #[arg(long, default_value = "Q")]
        field: String,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn document<T: Serialize>(code: i32, doc: &T) -> Self {
        Outcome { code, stdout: to_json_pretty(doc) + "\n", stderr: String::new() }
    }

    fn input_error(e: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") }
    }
}

/// Runs one command; `args` excludes the program name.
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("cofrob")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(Outcome::input_error)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        e => Error::Parse(format!("{}: {e}", path.display())),
    })
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    in_file(path, from_json(&read(path)?))
}

fn load_extension(path: &Path) -> Result<CoalgebraMorphism> {
    let doc: MorphismDoc = load(path)?;
    in_file(path, doc.build())
}

fn load_coalgebra(path: &Path) -> Result<Coalgebra> {
    let doc: CoalgebraDoc = load(path)?;
    in_file(path, doc.build())
}

fn load_comodule(path: &Path) -> Result<Comodule> {
    let doc: ComoduleDoc = load(path)?;
    in_file(path, doc.build())
}

fn budget(flag: Option<u64>) -> Result<u64> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn check_options(seed: u64, budget_flag: Option<u64>, route: Route, trials: usize) -> Result<CheckOptions> {
    Ok(CheckOptions {
        search: SearchOptions { seed, budget: budget(budget_flag)?, ..SearchOptions::default() },
        route,
        primal_trials: trials,
    })
}

fn parse_field(text: &str) -> Result<FieldSpec> {
    match text.trim() {
        "Q" | "q" | "rationals" => Ok(FieldSpec::Rationals),
        other => {
            let p = other
                .strip_prefix("F")
                .unwrap_or(other)
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("field {other:?}: expected Q or a prime")))?;
            FieldSpec::prime(p)
        }
    }
}

fn validation(report: Report) -> Outcome {
    let code = if report.is_pass() { EXIT_OK } else { EXIT_NO };
    Outcome::document(code, &ReportDoc::from_report(&report))
}

fn validate(path: &Path) -> Result<Outcome> {
    let text = read(path)?;
    let value: serde_json::Value = in_file(path, from_json(&text))?;
    let kind = in_file(path, sniff(&value))?;
    let report = match kind {
        DocumentKind::Coalgebra => {
            let doc: CoalgebraDoc = in_file(path, from_json(&text))?;
            in_file(path, validate_coalgebra(&doc.data()?))?
        }
        DocumentKind::Morphism => {
            let doc: MorphismDoc = in_file(path, from_json(&text))?;
            let source = in_file(path, doc.source.data())?;
            let target = in_file(path, doc.target.data())?;
            let mut report = in_file(path, validate_coalgebra(&source))?;
            report.extend(in_file(path, validate_coalgebra(&target))?);
            if !report.is_pass() {
                return Ok(validation(report));
            }
            let (source, target) = (Coalgebra::new(source)?, Coalgebra::new(target)?);
            in_file(path, validate_morphism(&source, &target, &in_file(path, doc.matrix())?))?
        }
        DocumentKind::Comodule => {
            let doc: ComoduleDoc = in_file(path, from_json(&text))?;
            let (over, coaction) = in_file(path, doc.parts())?;
            in_file(path, validate_comodule(doc.side, &over, doc.dim, &coaction))?
        }
        DocumentKind::Certificate => {
            return Err(Error::Parse(format!(
                "{}: certificates are checked with `verify <extension> <certificate>`",
                path.display()
            )))
        }
    };
    Ok(validation(report))
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::CheckFrobenius { extension, seed, budget, certificate, route, trials } => {
            let lambda = load_extension(&extension)?;
            let route = match route {
                RouteArg::Dual => Route::Dual,
                RouteArg::Primal => Route::Primal,
            };
            let verdict = check_frobenius_extension(&lambda, &check_options(seed, budget, route, trials)?)?;
            let doc = VerdictDoc::from_verdict(&lambda, &verdict);
            if let (Some(out), VerdictDoc::Yes { certificate: cert }) = (&certificate, &doc) {
                std::fs::write(out, to_json_pretty(cert) + "\n")
                    .map_err(|e| Error::Parse(format!("{}: {e}", out.display())))?;
            }
            let code = match verdict {
                Verdict::Yes(_) => EXIT_OK,
                Verdict::No(_) => EXIT_NO,
                Verdict::Unknown { .. } => EXIT_UNKNOWN,
            };
            Ok(Outcome::document(code, &doc))
        }
        Command::Verify { extension, certificate } => {
            let lambda = load_extension(&extension)?;
            let doc: CertificateDoc = load(&certificate)?;
            let cert = in_file(&certificate, doc.certificate_for(&lambda))?;
            let replay = replay_certificate(&lambda, &cert)?;
            let valid = replay.holds();
            Ok(Outcome::document(if valid { EXIT_OK } else { EXIT_NO }, &ReplayDoc { valid, replay }))
        }
        Command::Cotensor { first, second } => {
            let space = match second {
                Some(second) => cotensor(&load_comodule(&first)?, &load_comodule(&second)?)?,
                None => cotensor_square(&load_extension(&first)?)?,
            };
            Ok(Outcome::document(EXIT_OK, &CotensorDoc::from_space(&space)))
        }
        Command::Hom { source, target } => {
            let (m, n) = (load_comodule(&source)?, load_comodule(&target)?);
            let h = hom_space(&[(&m, &n)])?;
            Ok(Outcome::document(EXIT_OK, &HomSpaceDoc::from_hom_space(&h)))
        }
        Command::Dualize { file } => {
            let value: serde_json::Value = load(&file)?;
            match in_file(&file, sniff(&value))? {
                DocumentKind::Coalgebra => {
                    let c = load_coalgebra(&file)?;
                    Ok(Outcome::document(EXIT_OK, &AlgebraDoc::from_algebra(&dualize_coalgebra(&c))))
                }
                DocumentKind::Morphism => {
                    let phi = dualize_extension(&load_extension(&file)?);
                    Ok(Outcome::document(EXIT_OK, &AlgebraMorphismDoc::from_morphism(&phi)))
                }
                _ => Err(Error::Parse(format!("{}: expected a coalgebra or extension document", file.display()))),
            }
        }
        Command::Injective { file } => {
            #[derive(Serialize)]
            struct Doc {
                injective: bool,
            }
            let m = load_comodule(&file)?;
            Ok(Outcome::document(EXIT_OK, &Doc { injective: is_injective_comodule(&m) }))
        }
        Command::FrobeniusSystem { file, seed, budget } => {
            let c = Arc::new(load_coalgebra(&file)?);
            let opts = check_options(seed, budget, Route::Dual, 32)?;
            match frobenius_system(c, &opts) {
                Ok(s) => Ok(Outcome::document(EXIT_OK, &FrobeniusSystemDoc::from_system(s.as_ref()))),
                Err(Error::Undecided { confidence }) => {
                    #[derive(Serialize)]
                    struct Doc {
                        exists: Option<bool>,
                        confidence: f64,
                    }
                    Ok(Outcome::document(EXIT_UNKNOWN, &Doc { exists: None, confidence }))
                }
                Err(e) => Err(e),
            }
        }
        Command::Zoo { preset, field } => {
            let field = parse_field(&field)?;
            let Some(expr) = preset else {
                #[derive(Serialize)]
                struct Doc {
                    field: FieldDoc,
                    presets: &'static [&'static str],
                }
                return Ok(Outcome::document(
                    EXIT_OK,
                    &Doc { field: FieldDoc::from_field(field), presets: zoo::PRESET_NAMES },
                ));
            };
            Ok(match zoo::build(&expr, field)? {
                Built::Coalgebra(c) => Outcome::document(EXIT_OK, &CoalgebraDoc::from_coalgebra(&c)),
                Built::Extension(e) => Outcome::document(EXIT_OK, &MorphismDoc::from_morphism(&e)),
            })
        }
    }
}
