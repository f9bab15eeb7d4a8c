//! Batch command-line front end.
//!
//! [`run`] parses arguments, executes one command and returns a
//! [`CommandResult`]; [`render`] turns it into output text. Neither touches
//! stdout, so both are testable and deterministic.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::codec::{parse_diagram, render_diagram};
use crate::diagram::Diagram;
use crate::error::Error;
use crate::invariants::{bracket, is_jones_unlink, jones, linking_matrix, skein_residual, writhe};
use crate::moves::simplify_traced;
use crate::realization::{
    classify, classify_realizations, enumerate_realizations, find_nontrivial_realization,
    Assignment, Certificate, RealizationReport,
};
use crate::representation::{parse_arcs, parse_groups, parse_word, Representation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_BOUND: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "vknot", version, about = "Virtual link diagram toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Input {
    /// Diagram file in `.vkd` format.
    file: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct RepArgs {
    /// Handle groups, e.g. `0,1;2`. Defaults to one handle per virtual crossing.
    #[arg(long)]
    handles: Option<String>,
    /// Arc choice per virtual crossing, e.g. `12`. Defaults to all `1`.
    #[arg(long)]
    arcs: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a diagram.
    Validate(Input),
    /// Writhe, linking matrix, bracket and Jones polynomial.
    Invariants(Input),
    /// Enumerate realizations.
    Realizations {
        #[command(flatten)]
        input: Input,
        /// Report the first certified non-trivial realization.
        #[arg(long)]
        find_nontrivial: bool,
        /// Classify every realization.
        #[arg(long)]
        classify: bool,
    },
    /// Greedily remove crossings by decreasing moves.
    Simplify(Input),
    /// Build a surface representation and render it.
    Represent {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rep: RepArgs,
    },
    /// Apply Dehn twists to one handle of a representation.
    Twist {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        handle: usize,
        /// Comma-separated twists, e.g. `M+,L+,M+`.
        #[arg(long)]
        word: String,
    },
    /// Check the skein relation at every positive classical crossing.
    SkeinCheck(Input),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub input_digest: String,
    pub payload: Value,
    pub exit_code: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Rendered output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BoundExceeded { .. } => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

fn error_payload(kind: &str, message: &str) -> Value {
    json!({ "error": { "kind": kind, "message": message } })
}

fn lib_error(e: &Error) -> Value {
    let kind = match e {
        Error::Syntax { .. } => "parse",
        Error::BoundExceeded { .. } => "bound",
        _ => "validation",
    };
    error_payload(kind, &e.to_string())
}

fn digest(bytes: &[u8]) -> String {
    let h = Sha256::digest(bytes);
    let hex: String = h.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

/// Executes `args` (without the program name).
pub fn run(args: &[String]) -> (CommandResult, Format) {
    let command = args.join(" ");
    let format = if args.iter().any(|a| a == "--json") {
        Format::Json
    } else {
        Format::Text
    };
    let argv = std::iter::once("vknot".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let payload = if code == EXIT_OK {
                json!({ "help": e.render().to_string() })
            } else {
                error_payload("usage", &e.render().to_string())
            };
            return (
                CommandResult {
                    command,
                    input_digest: String::new(),
                    payload,
                    exit_code: code,
                },
                format,
            );
        }
    };
    let input = match &cli.command {
        Command::Validate(i)
        | Command::Invariants(i)
        | Command::Simplify(i)
        | Command::SkeinCheck(i) => i,
        Command::Realizations { input, .. }
        | Command::Represent { input, .. }
        | Command::Twist { input, .. } => input,
    };
    let bytes = match std::fs::read(&input.file) {
        Ok(b) => b,
        Err(e) => {
            let msg = format!("cannot read {}: {e}", input.file.display());
            return (
                CommandResult {
                    command,
                    input_digest: String::new(),
                    payload: error_payload("usage", &msg),
                    exit_code: EXIT_USAGE,
                },
                format,
            );
        }
    };
    let input_digest = digest(&bytes);
    let outcome = String::from_utf8(bytes)
        .map_err(|_| Error::Syntax {
            line: 1,
            col: 1,
            msg: "input is not UTF-8".into(),
        })
        .and_then(|text| parse_diagram(&text))
        .and_then(|d| dispatch(&cli.command, &d));
    let (payload, exit_code) = match outcome {
        Ok(p) => (p, EXIT_OK),
        Err(e) => (lib_error(&e), exit_code(&e)),
    };
    (
        CommandResult {
            command,
            input_digest,
            payload,
            exit_code,
        },
        format,
    )
}

fn dispatch(cmd: &Command, d: &Diagram) -> crate::Result<Value> {
    match cmd {
        Command::Validate(_) => Ok(json!({
            "valid": true,
            "crossings": d.crossing_count(),
            "classical": d.classical_count(),
            "virtual": d.virtual_count(),
            "components": d.component_count(),
            "free_loops": d.free_loops(),
            "diagram": render_diagram(&d.canonical()),
        })),
        Command::Invariants(_) => Ok(json!({
            "writhe": writhe(d),
            "linking_matrix": linking_matrix(d),
            "bracket": bracket(d)?.to_string(),
            "jones": jones(d)?.to_string(),
            "jones_unlink": is_jones_unlink(d)?,
        })),
        Command::Realizations {
            find_nontrivial,
            classify: with_classes,
            ..
        } => realizations(d, *find_nontrivial, *with_classes),
        Command::Simplify(_) => {
            let (r, moves) = simplify_traced(d);
            Ok(json!({
                "input_crossings": d.crossing_count(),
                "crossings": r.crossing_count(),
                "moves": moves,
                "diagram": render_diagram(&r),
            }))
        }
        Command::Represent { rep, .. } => {
            let r = representation(d, rep)?;
            report(&r)
        }
        Command::Twist {
            rep, handle, word, ..
        } => {
            let r = representation(d, rep)?;
            let w = parse_word(word)?;
            let twisted = r.apply_word(*handle, &w)?;
            report(&twisted)
        }
        Command::SkeinCheck(_) => {
            let mut checks = Vec::new();
            let mut ok = true;
            for c in d.classical_ids() {
                if d.crossing_sign(c)? > 0 {
                    let r = skein_residual(d, c)?;
                    ok &= r.is_zero();
                    checks.push(json!({ "crossing": c, "residual": r.to_string() }));
                }
            }
            Ok(json!({ "checks": checks, "ok": ok }))
        }
    }
}

fn report_json(r: &RealizationReport) -> Value {
    let certificate = match &r.certificate {
        Certificate::Reduction { moves } => json!({ "kind": "reduction", "moves": moves.len() }),
        Certificate::Jones { value } => json!({ "kind": "jones", "value": value.to_string() }),
        Certificate::None => json!({ "kind": "none" }),
    };
    json!({
        "assignment": r.assignment.code(),
        "status": r.status.as_str(),
        "jones": r.jones.to_string(),
        "certificate": certificate,
    })
}

fn realizations(d: &Diagram, find: bool, with_classes: bool) -> crate::Result<Value> {
    let ids = d.virtual_ids();
    let mut out = serde_json::Map::new();
    out.insert("virtual_crossings".into(), json!(ids));
    out.insert("count".into(), json!(1u64 << ids.len().min(63)));
    if with_classes {
        let reports: Vec<Value> = classify_realizations(d)?.iter().map(report_json).collect();
        out.insert("reports".into(), Value::Array(reports));
    }
    if find {
        let found = find_nontrivial_realization(d)?.map(|a| a.code());
        out.insert("nontrivial".into(), json!(found));
    }
    if !find && !with_classes {
        let list: Vec<Value> = enumerate_realizations(d)?
            .map(|(a, r)| json!({ "assignment": a.code(), "diagram": render_diagram(&r) }))
            .collect();
        out.insert("realizations".into(), Value::Array(list));
    }
    Ok(Value::Object(out))
}

fn representation(d: &Diagram, args: &RepArgs) -> crate::Result<Representation> {
    let arcs = match &args.arcs {
        Some(code) => parse_arcs(d, code)?,
        None => parse_arcs(d, &"1".repeat(d.virtual_count()))?,
    };
    match &args.handles {
        Some(g) => Representation::from_diagram(d, &arcs, &parse_groups(g)?),
        None => Representation::singletons(d, &arcs),
    }
}

fn report(rep: &Representation) -> crate::Result<Value> {
    let f = rep.forget()?;
    let r = classify(Assignment::default(), f.clone())?;
    let handles: Vec<Value> = rep
        .handles
        .iter()
        .map(|h| {
            json!({
                "id": h.id,
                "members": h.members,
                "through_strands": h.through_strands(),
                "torus_class": [h.torus_class.0, h.torus_class.1],
                "twist_word": h.twist_word.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let table = rep.intersection_pairs();
    let pairs: Vec<Value> = table
        .0
        .iter()
        .enumerate()
        .map(|(h, row)| {
            json!({
                "handle": h,
                "pairs": row.iter().map(|&(p, n)| json!({ "p": p, "n": n })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "genus": rep.genus(),
        "arcs": rep.arc_choice.code(),
        "handles": handles,
        "intersection_pairs": pairs,
        "jones": r.jones.to_string(),
        "status": r.status.as_str(),
        "diagram": render_diagram(&f),
    }))
}

/// Renders a result in the requested format.
pub fn render(result: &CommandResult, format: Format) -> Output {
    if let Some(help) = result.payload.get("help").and_then(Value::as_str) {
        return Output {
            stdout: help.to_string(),
            stderr: String::new(),
            code: result.exit_code,
        };
    }
    let error = result.payload.get("error");
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(result).expect("values serialize");
            s.push('\n');
            Output {
                stdout: s,
                stderr: String::new(),
                code: result.exit_code,
            }
        }
        Format::Text => {
            if let Some(e) = error {
                let msg = e["message"].as_str().unwrap_or_default().trim_end();
                let msg = msg.strip_prefix("error: ").unwrap_or(msg);
                return Output {
                    stdout: String::new(),
                    stderr: format!("error: {msg}\n"),
                    code: result.exit_code,
                };
            }
            let mut s = format!(
                "command: {}\ninput: {}\n",
                result.command, result.input_digest
            );
            write_value(&mut s, &result.payload, 0);
            Output {
                stdout: s,
                stderr: String::new(),
                code: result.exit_code,
            }
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) if !s.contains('\n') => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_))) => Some(format!(
            "[{}]",
            a.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )),
        _ => None,
    }
}

// indented key/value listing; multi-line strings become blocks
fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match (scalar(x), x) {
                    (Some(s), _) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    (None, Value::String(s)) => {
                        out.push_str(&format!("{pad}{k}: |\n"));
                        for line in s.lines() {
                            out.push_str(&format!("{pad}  {line}\n"));
                        }
                    }
                    (None, Value::Array(a)) if a.is_empty() => {
                        out.push_str(&format!("{pad}{k}: []\n"))
                    }
                    _ => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        other => {
            if let Some(s) = scalar(other) {
                out.push_str(&format!("{pad}{s}\n"));
            }
        }
    }
}

/// Applies `VKNOT_THREADS` to the global thread pool.
pub fn configure_threads(value: Option<&str>) -> Result<(), String> {
    let Some(v) = value else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("VKNOT_THREADS must be a positive integer, got '{v}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}
