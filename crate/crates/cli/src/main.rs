use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tamewild::algebra::Endomorphism;
use tamewild::autgroup::{anick, TameWord};
use tamewild::certify::{certify_normalized, certify_xy_linear, demo_anick};
use tamewild::commpoly::Ring;
use tamewild::e2decide::{decide_e2, decide_ge2f, verify_certificate, Mat2C};
use tamewild::fox::{fox_derive, gradient, j2, jacobian};
use tamewild::matrix::Matrix;
use tamewild::metabelian::{straighten, MetabelianRecord};
use tamewild::morphisms::{nu_b, nu_matrix, pi_b};
use tamewild::ncpoly::{GeneratorId, NCPoly};
use tamewild::parse::{parse_comm, parse_nc};
use tamewild::selftest::{run_selftest, Profile};
use tamewild::Error;

/// Fox calculus, tame words and E2 certificates for automorphisms of
/// Q<x, y, z>.
#[derive(Parser)]
#[command(name = "tamewild", version)]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Normalize to abelianize to the identity, then decide nu(J2) in E2.
    #[value(name = "theorem1", alias = "normalized")]
    Normalized,
    /// Maps `(f, g, z)` linear in `x, y`: decide J2 in GL2(Q) E2.
    #[value(name = "corollary2", alias = "xy-linear")]
    XyLinear,
}

#[derive(Subcommand)]
enum Command {
    /// Fox derivatives of a polynomial (all of them, or one with --var).
    Fox {
        expr: String,
        /// 1-based generator index.
        #[arg(long)]
        var: Option<usize>,
    },
    /// Full Jacobian over U(B).
    Jacobian { endo: String },
    /// Upper-left 2x2 block of the Jacobian.
    J2 { endo: String },
    /// Abelianization of a polynomial or of an endomorphism's images.
    Abelianize { input: String },
    /// nu of a polynomial, or nu(J2) of an endomorphism.
    Nu { input: String },
    /// Canonical form in the free metabelian algebra.
    Eps { expr: String },
    /// The composite `first(second(w))`.
    Compose { first: String, second: String },
    /// Inverse of a tame word, checked by evaluation.
    Invert { word: String },
    /// Decide membership of a 2x2 matrix in E2 (or GL2(Q) E2 with --ge2f).
    #[command(name = "e2-decide")]
    E2Decide {
        /// JSON rows, e.g. [["1+u*v","v^2"],["-u^2","1-u*v"]], or a file.
        matrix: String,
        /// Comma-separated variable names of the polynomial ring.
        #[arg(long, default_value = "u,v")]
        ring: String,
        #[arg(long)]
        ge2f: bool,
    },
    /// Wildness certification.
    Certify {
        #[arg(long, value_enum)]
        mode: Mode,
        endo: String,
        /// File (or inline text) with a tame word composed after the input.
        #[arg(long)]
        normalizer: Option<String>,
    },
    /// End-to-end checks for the Anick automorphism.
    #[command(name = "demo-anick")]
    DemoAnick {
        /// Use a deliberately wrong normalizer (negative control).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "small")]
        profile: String,
    },
}

enum Failure {
    Precondition(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CheckFailed(_) => Failure::Check(e.to_string()),
            other => Failure::Precondition(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// Reads `arg` as a file when such a file exists.
fn text_arg(arg: &str) -> CliResult<String> {
    let path = PathBuf::from(arg);
    if path.is_file() {
        fs::read_to_string(&path)
            .map_err(|e| Failure::Precondition(format!("cannot read {}: {e}", path.display())))
    } else {
        Ok(arg.to_string())
    }
}

fn looks_like_endo(s: &str) -> bool {
    let t = s.trim();
    t == "anick" || t.starts_with('{') || t.starts_with("s(") || t == "id"
}

/// `anick`, `id`, a JSON document `{"images": [...]}`, or a tame word.
fn parse_endo(arg: &str) -> CliResult<Endomorphism<NCPoly>> {
    let src = text_arg(arg)?;
    let t = src.trim();
    if t == "anick" {
        return Ok(anick());
    }
    if t == "id" {
        return Ok(Endomorphism::identity(3));
    }
    if t.starts_with('{') {
        let v: Value = serde_json::from_str(t)
            .map_err(|e| Failure::Precondition(format!("invalid JSON: {e}")))?;
        let images = v
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(|| Failure::Precondition("expected {\"images\": [...]}".into()))?;
        if images.len() != 3 {
            return Err(Failure::Precondition(format!(
                "expected 3 images, got {}",
                images.len()
            )));
        }
        let polys = images
            .iter()
            .map(|s| {
                let s = s
                    .as_str()
                    .ok_or_else(|| Failure::Precondition("images must be strings".into()))?;
                Ok(parse_nc(s)?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(Endomorphism::new(polys));
    }
    Ok(parse_word(t)?.evaluate())
}

fn parse_word(src: &str) -> CliResult<TameWord<NCPoly>> {
    Ok(TameWord::parse(src, 3)?)
}

fn images_json(e: &Endomorphism<NCPoly>) -> Value {
    json!({ "images": e.images.iter().map(|f| f.to_string()).collect::<Vec<_>>() })
}

fn parse_matrix(arg: &str, ring: &str) -> CliResult<Mat2C> {
    let names: Vec<&str> = ring.split(',').map(str::trim).collect();
    let ring = Ring::new(&names);
    let src = text_arg(arg)?;
    let rows: Vec<Vec<String>> = serde_json::from_str(&src)
        .map_err(|e| Failure::Precondition(format!("matrix must be JSON rows of strings: {e}")))?;
    if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
        return Err(Failure::Precondition("expected a 2x2 matrix".into()));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|s| Ok(parse_comm(s, &ring)?)).collect())
        .collect::<CliResult<Vec<Vec<_>>>>()?;
    Ok(Matrix::from_rows(rows))
}

struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: 0,
        }
    }
}

fn run(cmd: Command) -> CliResult<Output> {
    match cmd {
        Command::Fox { expr, var } => {
            let f = parse_nc(&expr)?;
            match var {
                Some(i) => {
                    let i = GeneratorId::new(i, 3)?.index();
                    let d = fox_derive(&f, i);
                    Ok(Output::ok(d.to_string(), json!(d.to_string())))
                }
                None => {
                    let g: Vec<String> = gradient(&f).iter().map(|t| t.to_string()).collect();
                    let text = g
                        .iter()
                        .enumerate()
                        .map(|(i, t)| format!("d/dy{}: {t}", i + 1))
                        .collect::<Vec<_>>()
                        .join("\n");
                    Ok(Output::ok(text, json!(g)))
                }
            }
        }
        Command::Jacobian { endo } => {
            let m = jacobian(&parse_endo(&endo)?);
            Ok(Output::ok(m.to_string(), json!(m.to_strings())))
        }
        Command::J2 { endo } => {
            let m = j2(&parse_endo(&endo)?);
            Ok(Output::ok(m.to_string(), json!(m.to_strings())))
        }
        Command::Abelianize { input } => {
            if looks_like_endo(&text_arg(&input)?) {
                let e = parse_endo(&input)?;
                let im = e
                    .images
                    .iter()
                    .map(|f| Ok(pi_b(f)?.to_string()))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(Output::ok(format!("({})", im.join(", ")), json!(im)))
            } else {
                let p = pi_b(&parse_nc(&text_arg(&input)?)?)?;
                Ok(Output::ok(p.to_string(), json!(p.to_string())))
            }
        }
        Command::Nu { input } => {
            if looks_like_endo(&text_arg(&input)?) {
                let m = nu_matrix(&j2(&parse_endo(&input)?))?;
                Ok(Output::ok(m.to_string(), json!(m.to_strings())))
            } else {
                let p = nu_b(&parse_nc(&text_arg(&input)?)?)?;
                Ok(Output::ok(p.to_string(), json!(p.to_string())))
            }
        }
        Command::Eps { expr } => {
            let m = straighten(&parse_nc(&expr)?)?;
            Ok(Output::ok(
                m.to_string(),
                serde_json::to_value(MetabelianRecord::from(&m)).expect("serializable"),
            ))
        }
        Command::Compose { first, second } => {
            let e = parse_endo(&first)?.compose(&parse_endo(&second)?);
            Ok(Output::ok(e.to_string(), images_json(&e)))
        }
        Command::Invert { word } => {
            let w = parse_word(&text_arg(&word)?)?;
            let inv = w.inverse();
            if !w.concat(&inv).evaluate().is_identity() {
                return Err(Failure::Check("inverse does not cancel the word".into()));
            }
            Ok(Output::ok(
                inv.to_string(),
                json!({ "inverse": inv.to_string(), "images": images_json(&inv.evaluate())["images"] }),
            ))
        }
        Command::E2Decide { matrix, ring, ge2f } => {
            let m = parse_matrix(&matrix, &ring)?;
            let cert = if ge2f {
                decide_ge2f(&m)?
            } else {
                decide_e2(&m)?
            };
            verify_certificate(&cert)?;
            let mut text = format!("verdict: {}\n", cert.verdict);
            if let Some(d) = &cert.scalar {
                text.push_str(&format!("scalar: diag({d}, 1)\n"));
            }
            if cert.is_in() {
                let f: Vec<String> = cert.factors.iter().map(|f| f.to_string()).collect();
                text.push_str(&format!("factors: {}\n", f.join(" * ")));
            }
            if let Some(r) = &cert.reason {
                text.push_str(&format!("reason: {r}\n"));
            }
            if let Some(w) = &cert.witness {
                text.push_str(&format!("witness:\n{w}"));
            }
            Ok(Output::ok(
                text.trim_end().to_string(),
                serde_json::to_value(cert.to_record()).expect("serializable"),
            ))
        }
        Command::Certify {
            mode,
            endo,
            normalizer,
        } => {
            let phi = parse_endo(&endo)?;
            let verdict = match mode {
                Mode::Normalized => {
                    let w = normalizer
                        .map(|n| text_arg(&n).and_then(|s| parse_word(&s)))
                        .transpose()?;
                    certify_normalized(&phi, w.as_ref())?
                }
                Mode::XyLinear => {
                    if normalizer.is_some() {
                        return Err(Failure::Precondition(
                            "--normalizer only applies to --mode theorem1".into(),
                        ));
                    }
                    certify_xy_linear(&phi)?
                }
            };
            let mut text = format!("status: {}\nmatrix:\n{}", verdict.status, verdict.matrix);
            text.push_str(&format!("E2 verdict: {}", verdict.certificate.verdict));
            if let Some(w) = &verdict.decomposition {
                text.push_str(&format!("\ndecomposition: {w}"));
            }
            if let Some(w) = &verdict.certificate.witness {
                text.push_str(&format!("\nwitness:\n{w}"));
            }
            Ok(Output::ok(
                text.trim_end().to_string(),
                serde_json::to_value(verdict.to_record()).expect("serializable"),
            ))
        }
        Command::DemoAnick { corrupt } => {
            let report = demo_anick(corrupt)?;
            let code = if report.passed() { 0 } else { 2 };
            let mut text = report.to_string();
            if let Some(s) = report.first_failure() {
                text.push_str(&format!("failed step: {}", s.name));
            }
            Ok(Output {
                text: text.trim_end().to_string(),
                json: serde_json::to_value(&report).expect("serializable"),
                code,
            })
        }
        Command::Selftest { seed, profile } => {
            let profile: Profile = profile.parse()?;
            let report = run_selftest(seed, profile);
            Ok(Output {
                text: report.to_string().trim_end().to_string(),
                json: serde_json::to_value(&report).expect("serializable"),
                code: if report.all_passed() { 0 } else { 2 },
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli.command) {
        Ok(out) => {
            let body = if json {
                serde_json::to_string_pretty(&out.json).expect("serializable")
            } else {
                out.text
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(out.code)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("internal check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
