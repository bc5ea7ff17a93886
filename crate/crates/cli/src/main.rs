//! `pmb` — check, decompose, and generate grid-indexed persistence modules.
//!
//! Subcommands: `check` (freeness criteria), `basis` (extract a homogeneous
//! basis), `verify` (confirm a basis file against a module), `gen`
//! (deterministic free fixtures), `betti` (per-degree generator counts),
//! `support` (classify an upset-support descriptor).
//!
//! Exit codes: 0 success; 1 input error (unreadable, malformed, or
//! over-cap files); 2 mathematical failure (criteria or verification); 64
//! usage error. Reports go to standard output and are byte-deterministic
//! for fixed inputs and flags; `--format json` mirrors every report.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pmbasis::basis1d::{check_criteria_1d, compute_basis_1d, Basis1dError};
use pmbasis::basis2d::{
    check_commutativity, check_injectivity_2d, check_intersection_condition, compute_basis_2d,
    Basis2dError,
};
use pmbasis::oracle::{
    betti_1d, betti_2d, gen_free_1d, gen_free_2d, verify_basis_1d_report, verify_basis_2d_report,
};
use pmbasis::pmod::{
    parse_basis_1d, parse_basis_2d, parse_module, serialize_basis_1d, serialize_basis_2d,
    serialize_module_1d, serialize_module_2d, GradedBasis, Module, Window1d, Window2d,
};
use pmbasis::posetcheck::{classify, parse_descriptor, DescriptorError};

const DEFAULT_MAX_DIM: usize = 64;

#[derive(Parser)]
#[command(
    name = "pmb",
    version,
    about = "Freeness checks and basis extraction for grid-indexed persistence modules"
)]
struct Cli {
    /// Report format for standard output.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the freeness criteria of a module file.
    Check { path: PathBuf },
    /// Extract a homogeneous basis; print generator counts and row-op totals.
    Basis {
        path: PathBuf,
        /// Write the basis document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Confirm that a basis file is a homogeneous basis of a module.
    Verify { module: PathBuf, basis: PathBuf },
    /// Generate a deterministic free-module fixture.
    Gen {
        /// Seed for the change-of-coordinates randomness.
        #[arg(long)]
        seed: u64,
        /// Window bounds: "a,b" for a line, "a,b,c,d" for a rectangle.
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// Generator degrees: "(d1);(d2);..." with one or two coordinates each.
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        /// Write the module document here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the per-degree generator counts of a module.
    Betti { path: PathBuf },
    /// Classify an upset-support descriptor file.
    Support { path: PathBuf },
}

fn main() {
    // Die quietly when the reader closes the pipe (`pmb betti m.json | head`)
    // instead of panicking mid-write; the runtime masks SIGPIPE by default.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            process::exit(code);
        }
    };
    process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let max_dim = match read_max_dim() {
        Ok(v) => v,
        Err(msg) => return usage(&msg),
    };
    match cli.command {
        Command::Check { path } => with_module(&path, max_dim, |m| cmd_check(&m, cli.format)),
        Command::Basis { path, out } => with_module(&path, max_dim, |m| {
            cmd_basis(&m, out.as_deref(), cli.format)
        }),
        Command::Verify { module, basis } => {
            with_module(&module, max_dim, |m| cmd_verify(&m, &basis, cli.format))
        }
        Command::Gen {
            seed,
            window,
            gens,
            out,
        } => cmd_gen(seed, &window, &gens, out.as_deref(), max_dim),
        Command::Betti { path } => with_module(&path, max_dim, |m| cmd_betti(&m, cli.format)),
        Command::Support { path } => cmd_support(&path, cli.format),
    }
}

fn usage(msg: &str) -> i32 {
    eprintln!("pmb: {msg}");
    64
}

fn input_error(msg: &str) -> i32 {
    eprintln!("pmb: {msg}");
    1
}

fn read_max_dim() -> Result<usize, String> {
    match env::var("PMB_MAX_DIM") {
        Err(env::VarError::NotPresent) => Ok(DEFAULT_MAX_DIM),
        Err(env::VarError::NotUnicode(_)) => Err("PMB_MAX_DIM is not valid unicode".to_string()),
        Ok(raw) => raw
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("PMB_MAX_DIM must be a nonnegative integer, got {raw:?}")),
    }
}

fn with_module(path: &Path, max_dim: usize, f: impl FnOnce(Module) -> i32) -> i32 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(&format!("cannot read {}: {e}", path.display())),
    };
    let module = match parse_module(&text) {
        Ok(m) => m,
        Err(e) => return input_error(&format!("{}: {e}", path.display())),
    };
    let dim = match &module {
        Module::One(m) => m.max_dim(),
        Module::Two(m) => m.max_dim(),
    };
    if dim > max_dim {
        return input_error(&format!(
            "module dimension {dim} exceeds the PMB_MAX_DIM cap of {max_dim}"
        ));
    }
    f(module)
}

fn emit(format: Format, value: Value, text: &str) {
    match format {
        Format::Json => println!("{value}"),
        Format::Text => println!("{text}"),
    }
}

fn cmd_check(module: &Module, format: Format) -> i32 {
    match module {
        Module::One(m) => {
            let report = check_criteria_1d(m);
            let failure = report
                .first_failure
                .map(|i| Basis1dError::NotInjectiveAt(i).to_string());
            let mut text = if report.pass {
                format!("check: PASS ({} maps injective)", report.checks.len())
            } else {
                format!("check: FAIL {}", failure.clone().unwrap())
            };
            if let Some(note) = &report.stabilization_note {
                text.push_str(&format!("\nnote: {note}"));
            }
            emit(
                format,
                json!({
                    "index": "Z",
                    "pass": report.pass,
                    "failure": failure,
                    "criteria": report,
                }),
                &text,
            );
            if report.pass {
                0
            } else {
                2
            }
        }
        Module::Two(m) => {
            let commutativity = check_commutativity(m);
            let injectivity = check_injectivity_2d(m);
            let intersection = check_intersection_condition(m);
            let failure = commutativity
                .first_failure
                .map(|t| Basis2dError::NotCommutativeAt(t).to_string())
                .or_else(|| {
                    injectivity
                        .first_failure
                        .map(|(s, d)| Basis2dError::NotInjectiveAt(s, d).to_string())
                })
                .or_else(|| {
                    intersection
                        .first_failure
                        .map(|t| Basis2dError::IntersectionFailAt(t).to_string())
                });
            let pass = failure.is_none();
            let text = if pass {
                format!(
                    "check: PASS ({} squares, {} maps, {} corners)",
                    commutativity.squares.len(),
                    injectivity.maps.len(),
                    intersection.corners.len()
                )
            } else {
                format!("check: FAIL {}", failure.clone().unwrap())
            };
            emit(
                format,
                json!({
                    "index": "Z2",
                    "pass": pass,
                    "failure": failure,
                    "commutativity": commutativity,
                    "injectivity": injectivity,
                    "intersection": intersection,
                }),
                &text,
            );
            if pass {
                0
            } else {
                2
            }
        }
    }
}

/// Per-degree generator counts in window order, plus a text rendering of
/// the nonzero entries.
fn count_lines<D: Copy + PartialEq>(
    degrees: &[D],
    basis_degrees: &[D],
    show: impl Fn(D) -> String,
) -> (Vec<Value>, String) {
    let mut entries = Vec::new();
    let mut nonzero = Vec::new();
    for &d in degrees {
        let count = basis_degrees.iter().filter(|&&b| b == d).count();
        entries.push(json!({"degree": show(d), "count": count}));
        if count > 0 {
            nonzero.push(format!("{}:{count}", show(d)));
        }
    }
    (entries, nonzero.join(" "))
}

fn cmd_basis(module: &Module, out: Option<&Path>, format: Format) -> i32 {
    let (basis_text, counts, counts_text, total, ops) = match module {
        Module::One(m) => match compute_basis_1d(m) {
            Err(e) => return math_failure(format, &e.to_string()),
            Ok(result) => {
                let degrees: Vec<i64> = m.window().degrees().collect();
                let basis_degrees: Vec<i64> =
                    result.basis.elements.iter().map(|e| e.degree).collect();
                let (counts, counts_text) =
                    count_lines(&degrees, &basis_degrees, |d| format!("{d}"));
                (
                    serialize_basis_1d(&result.basis),
                    counts,
                    counts_text,
                    result.basis.elements.len(),
                    result.ops,
                )
            }
        },
        Module::Two(m) => match compute_basis_2d(m) {
            Err(e) => return math_failure(format, &e.to_string()),
            Ok(result) => {
                let degrees: Vec<(i64, i64)> = m.window().degrees().collect();
                let basis_degrees: Vec<(i64, i64)> =
                    result.basis.elements.iter().map(|e| e.degree).collect();
                let (counts, counts_text) =
                    count_lines(&degrees, &basis_degrees, |(i, j)| format!("({i},{j})"));
                (
                    serialize_basis_2d(&result.basis),
                    counts,
                    counts_text,
                    result.basis.elements.len(),
                    result.ops,
                )
            }
        },
    };

    if let Some(path) = out {
        if let Err(e) = fs::write(path, format!("{basis_text}\n")) {
            return input_error(&format!("cannot write {}: {e}", path.display()));
        }
    }

    let basis_value: Value =
        serde_json::from_str(&basis_text).expect("basis text is canonical JSON");
    let mut text = format!("counts: {counts_text}\ntotal: {total}\nrow ops: {ops}");
    match out {
        Some(path) => text.push_str(&format!("\nwrote basis to {}", path.display())),
        None => text.push_str(&format!("\n{basis_text}")),
    }
    emit(
        format,
        json!({
            "pass": true,
            "counts": counts,
            "total": total,
            "ops": ops,
            "basis": basis_value,
        }),
        &text,
    );
    0
}

fn math_failure(format: Format, failure: &str) -> i32 {
    emit(
        format,
        json!({"pass": false, "failure": failure}),
        &format!("FAIL {failure}"),
    );
    2
}

fn cmd_verify(module: &Module, basis_path: &Path, format: Format) -> i32 {
    let basis_text = match fs::read_to_string(basis_path) {
        Ok(t) => t,
        Err(e) => return input_error(&format!("cannot read {}: {e}", basis_path.display())),
    };
    let outcome = match module {
        Module::One(m) => {
            let basis: GradedBasis<i64> = match parse_basis_1d(&basis_text) {
                Ok(b) => b,
                Err(e) => return input_error(&format!("{}: {e}", basis_path.display())),
            };
            let outcome = verify_basis_1d_report(m, &basis);
            outcome.is_ok().then_some(()).ok_or(outcome.to_string())
        }
        Module::Two(m) => {
            let basis: GradedBasis<(i64, i64)> = match parse_basis_2d(&basis_text) {
                Ok(b) => b,
                Err(e) => return input_error(&format!("{}: {e}", basis_path.display())),
            };
            let outcome = verify_basis_2d_report(m, &basis);
            outcome.is_ok().then_some(()).ok_or(outcome.to_string())
        }
    };
    match outcome {
        Ok(()) => {
            emit(format, json!({"pass": true}), "verify: PASS");
            0
        }
        Err(failure) => {
            emit(
                format,
                json!({"pass": false, "failure": failure}),
                &format!("verify: FAIL {failure}"),
            );
            2
        }
    }
}

fn parse_degree_list(raw: &str) -> Result<Vec<Vec<i64>>, String> {
    raw.split(';')
        .map(|part| {
            let trimmed = part.trim();
            let inner = trimmed
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(trimmed);
            inner
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<i64>()
                        .map_err(|_| format!("invalid generator degree {trimmed:?}"))
                })
                .collect()
        })
        .collect()
}

fn cmd_gen(seed: u64, window: &str, gens: &str, out: Option<&Path>, max_dim: usize) -> i32 {
    let bounds: Result<Vec<i64>, _> = window.split(',').map(|v| v.trim().parse::<i64>()).collect();
    let Ok(bounds) = bounds else {
        return usage(&format!("invalid --window {window:?}"));
    };
    let degrees = match parse_degree_list(gens) {
        Ok(d) => d,
        Err(msg) => return usage(&msg),
    };
    if degrees.len() > max_dim {
        return usage(&format!(
            "{} generators exceed the PMB_MAX_DIM cap of {max_dim}",
            degrees.len()
        ));
    }

    let text = match bounds.as_slice() {
        [alpha, beta] => {
            let window = match Window1d::new(*alpha, *beta) {
                Ok(w) => w,
                Err(e) => return usage(&e.to_string()),
            };
            let mut flat = Vec::new();
            for d in &degrees {
                let [degree] = d.as_slice() else {
                    return usage("a line window takes single-coordinate generators");
                };
                if !window.contains(*degree) {
                    return usage(&format!("generator degree {degree} outside the window"));
                }
                flat.push(*degree);
            }
            serialize_module_1d(&gen_free_1d(seed, window, &flat))
        }
        [alpha, beta, gamma, delta] => {
            let window = match Window2d::new(*alpha, *beta, *gamma, *delta) {
                Ok(w) => w,
                Err(e) => return usage(&e.to_string()),
            };
            let mut flat = Vec::new();
            for d in &degrees {
                let [i, j] = d.as_slice() else {
                    return usage("a rectangle window takes two-coordinate generators");
                };
                if !window.contains((*i, *j)) {
                    return usage(&format!("generator degree ({i},{j}) outside the window"));
                }
                flat.push((*i, *j));
            }
            serialize_module_2d(&gen_free_2d(seed, window, &flat))
        }
        _ => return usage("--window takes \"a,b\" or \"a,b,c,d\""),
    };

    match out {
        Some(path) => {
            if let Err(e) = fs::write(path, format!("{text}\n")) {
                return input_error(&format!("cannot write {}: {e}", path.display()));
            }
        }
        None => println!("{text}"),
    }
    0
}

fn cmd_betti(module: &Module, format: Format) -> i32 {
    let (entries, text_lines): (Vec<Value>, Vec<String>) = match module {
        Module::One(m) => m
            .window()
            .degrees()
            .map(|d| {
                let b = betti_1d(m, d).expect("window degree");
                (json!({"degree": d, "count": b}), format!("{d}: {b}"))
            })
            .unzip(),
        Module::Two(m) => m
            .window()
            .degrees()
            .map(|d| {
                let b = betti_2d(m, d).expect("window degree");
                (
                    json!({"degree": [d.0, d.1], "count": b}),
                    format!("({},{}): {b}", d.0, d.1),
                )
            })
            .unzip(),
    };
    emit(format, json!({"betti": entries}), &text_lines.join("\n"));
    0
}

fn cmd_support(path: &Path, format: Format) -> i32 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(&format!("cannot read {}: {e}", path.display())),
    };
    let desc = match parse_descriptor(&text) {
        Ok(d) => d,
        Err(e @ (DescriptorError::Json(_) | DescriptorError::Invalid(_))) => {
            return input_error(&format!("{}: {e}", path.display()))
        }
    };
    let classification = classify(&desc);
    let minimals = desc.minimal_elements();

    let mut lines = vec![
        format!("flat: {}", classification.flat),
        format!(
            "free_by_construction: {}",
            classification.free_by_construction
        ),
        format!("not_projective: {}", classification.not_projective),
    ];
    if let Some((x, y)) = classification.witness {
        lines.push(format!("witness: ({x},{y})"));
    }
    let minimal_text = if minimals.is_empty() {
        "none".to_string()
    } else {
        minimals
            .iter()
            .map(|(x, y)| format!("({x},{y})"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    lines.push(format!("minimal elements: {minimal_text}"));
    lines.push(format!("conclusion: {}", classification.conclusion));
    if let Some(note) = &classification.note {
        lines.push(format!("note: {note}"));
    }

    emit(
        format,
        json!({
            "classification": classification,
            "minimal_elements": minimals,
        }),
        &lines.join("\n"),
    );
    0
}
