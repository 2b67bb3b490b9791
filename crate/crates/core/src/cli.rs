//! Command-line front end. Results go to stdout as JSON, diagnostics to
//! stderr. Exit status is 0 on success, 1 when a verification suite reports
//! failures and 2 on unreadable or invalid input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::complexes::{self, homology_all, truncate_above, truncate_below};
use crate::error::{Error, Result};
use crate::formats::{
    class_to_json, complex_to_json, group_to_json, module_to_presentation_json, parse_complex,
    parse_matrix_file, parse_module, parse_poset, parse_support_arg, snf_to_json, support_to_json,
};
use crate::hovey::{split_object, WideSubcat};
use crate::ktheory::{class_of_complex, class_of_module, decompose_class};
use crate::snf::smith_normal_form;
use crate::spectra::{enumerate_thick_supports, is_local, ks_decompose, SpectrumModel, ThickSupport};
use crate::verify::run_suite;
use crate::zmodules;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "widecat", version, about = "Supports, K-theory and wide subcategories over the integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form of an integer matrix
    Snf {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
    },
    /// Finitely generated abelian groups given by presentations
    Module {
        action: ModuleAction,
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// `full` or a comma-separated list of primes
        #[arg(long)]
        support: Option<String>,
    },
    /// Perfect complexes of free abelian groups
    Complex(ComplexArgs),
    /// Thick supports of the integer spectrum or of a finite poset
    Spec(SpecArgs),
    /// Seeded property suites
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModuleAction {
    Canon,
    Support,
    Split,
    K0,
}

#[derive(Args, Debug)]
struct ComplexArgs {
    action: ComplexAction,
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long)]
    support: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    at: Option<i64>,
    #[arg(long, value_enum, default_value_t = Mode::Above)]
    mode: Mode,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ComplexAction {
    Homology,
    Support,
    K0,
    Truncate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Above,
    Below,
}

#[derive(Args, Debug)]
struct SpecArgs {
    action: SpecAction,
    #[arg(long = "in", value_name = "FILE", conflicts_with = "zspec", required_unless_present = "zspec")]
    input: Option<PathBuf>,
    /// Use the spectrum of the integers instead of a poset file
    #[arg(long)]
    zspec: bool,
    #[arg(long)]
    support: Option<String>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SpecAction {
    Decompose,
    Islocal,
    Enumerate,
}

/// Runs the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "widecat: {e}");
            EXIT_INPUT
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::input(format!("{}: cannot read file: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: malformed JSON: {e}", path.display())))
}

/// Attaches the file name to errors raised while interpreting its contents.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) => Error::Input(format!("{}: {m}", path.display())),
        Error::Domain(m) => Error::Domain(format!("{}: {m}", path.display())),
        Error::Resource(m) => Error::Resource(format!("{}: {m}", path.display())),
    })
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    writeln!(out, "{text}").map_err(|e| Error::resource(format!("cannot write output: {e}")))
}

fn z_support(arg: &Option<String>, default: impl FnOnce() -> ThickSupport) -> Result<ThickSupport> {
    match arg {
        Some(s) => parse_support_arg(s, &SpectrumModel::ZSpec).map_err(|e| match e {
            Error::Input(m) => Error::Input(format!("--support: {m}")),
            other => other,
        }),
        None => Ok(default()),
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    let z = SpectrumModel::ZSpec;
    match command {
        Command::Snf { matrix } => {
            let a = in_file(&matrix, parse_matrix_file(&read_json(&matrix)?))?;
            emit(out, &snf_to_json(&smith_normal_form(&a)))?;
        }
        Command::Module { action, input, support } => {
            let m = in_file(&input, parse_module(&read_json(&input)?))?;
            let s = z_support(&support, || zmodules::support(&m))?;
            let v = match action {
                ModuleAction::Canon => json!({
                    "group": group_to_json(&m),
                    "presentation": module_to_presentation_json(&m),
                    "display": m.to_string(),
                }),
                ModuleAction::Support => json!({ "support": support_to_json(&zmodules::support(&m), &z) }),
                ModuleAction::Split => {
                    let w = WideSubcat::new(s)?;
                    let pieces: Vec<Value> = in_file(&input, split_object(&w, &m))?
                        .iter()
                        .map(|(c, g)| json!({ "component": support_to_json(c.support(), &z), "group": group_to_json(g) }))
                        .collect();
                    json!({ "pieces": pieces })
                }
                ModuleAction::K0 => {
                    let class = in_file(&input, class_of_module(&m, &s))?;
                    let parts: Vec<Value> = in_file(&input, decompose_class(&m, &s))?
                        .iter()
                        .map(|(p, c)| json!({ "component": support_to_json(p, &z), "class": class_to_json(c) }))
                        .collect();
                    json!({ "class": class_to_json(&class), "components": parts })
                }
            };
            emit(out, &v)?;
        }
        Command::Complex(args) => {
            let x = in_file(&args.input, parse_complex(&read_json(&args.input)?))?;
            let v = match args.action {
                ComplexAction::Homology => {
                    let h: serde_json::Map<String, Value> = homology_all(&x)
                        .iter()
                        .map(|(n, g)| (n.to_string(), group_to_json(g)))
                        .collect();
                    json!({ "homology": h })
                }
                ComplexAction::Support => json!({ "support": support_to_json(&complexes::support(&x), &z) }),
                ComplexAction::K0 => {
                    let s = z_support(&args.support, || complexes::support(&x))?;
                    json!({ "class": class_to_json(&in_file(&args.input, class_of_complex(&x, &s))?) })
                }
                ComplexAction::Truncate => {
                    let k = args
                        .at
                        .ok_or_else(|| Error::input("complex truncate requires --at N"))?;
                    let t = match args.mode {
                        Mode::Above => truncate_above(&x, k),
                        Mode::Below => truncate_below(&x, k),
                    };
                    complex_to_json(&t)
                }
            };
            emit(out, &v)?;
        }
        Command::Spec(args) => {
            let model = match &args.input {
                Some(path) => SpectrumModel::FinPoset(in_file(path, parse_poset(&read_json(path)?))?),
                None => SpectrumModel::ZSpec,
            };
            let support = |default: Option<ThickSupport>| -> Result<ThickSupport> {
                match (&args.support, default) {
                    (Some(s), _) => parse_support_arg(s, &model).map_err(|e| match e {
                        Error::Input(m) => Error::Input(format!("--support: {m}")),
                        other => other,
                    }),
                    (None, Some(d)) => Ok(d),
                    (None, None) => Err(Error::input("--support is required for the integer spectrum")),
                }
            };
            let v = match args.action {
                SpecAction::Decompose => {
                    let default = match &model {
                        SpectrumModel::FinPoset(p) => Some(ThickSupport::UpSet(p.all())),
                        SpectrumModel::ZSpec => None,
                    };
                    let a = support(default)?;
                    let parts: Vec<Value> = ks_decompose(&model, &a)?
                        .parts
                        .iter()
                        .map(|p| support_to_json(p, &model))
                        .collect();
                    json!({ "support": support_to_json(&a, &model), "parts": parts })
                }
                SpecAction::Islocal => json!({ "local": is_local(&model)? }),
                SpecAction::Enumerate => match &model {
                    SpectrumModel::FinPoset(p) => {
                        let all: Vec<Value> = enumerate_thick_supports(p)?
                            .iter()
                            .map(|s| support_to_json(s, &model))
                            .collect();
                        json!({ "count": all.len(), "supports": all })
                    }
                    SpectrumModel::ZSpec => {
                        return Err(Error::input(
                            "spec enumerate needs a finite poset (--in FILE); the integer spectrum has infinitely many thick supports",
                        ))
                    }
                },
            };
            emit(out, &v)?;
        }
        Command::Verify { suite, trials, seed, report } => {
            let r = run_suite(&suite, trials, seed)?;
            let v = serde_json::to_value(&r).expect("reports serialize");
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n";
                fs::write(&path, text)
                    .map_err(|e| Error::input(format!("{}: cannot write report: {e}", path.display())))?;
            }
            emit(out, &v)?;
            if !r.passed() {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}
