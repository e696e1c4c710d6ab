//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a decision verb answers false or none, 2 on usage and
//! parse errors. With `--json` every invocation prints exactly one document of the form
//! `{"verb": ..., "result": ..., "witness": ...}` (plus `"error"` on failures).

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::bundle::{ext1_dim, SplitBundle};
use crate::certificate::ConcordanceCertificate;
use crate::chow::{self, GradedIsoWitness, ProjBundleRing};
use crate::concordance::{self, BundleClass, CertificateError};
use crate::parse::{parse_bundle, parse_laurent_matrix, parse_rational};
use crate::pic_group::PicGroup;
use crate::transition::{self, ExtClass};

#[derive(Debug, Parser)]
#[command(
    name = "a1conc",
    version,
    about = "Concordance, splitting types and Chow-ring decisions for bundles on curves"
)]
pub struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical representative O^{n-1} + det of a bundle (or of `rank:det` with --pic).
    Canon {
        bundle: String,
        #[arg(long)]
        pic: Option<String>,
    },
    /// Decide concordance of two bundles.
    Concordant {
        first: String,
        second: String,
        #[arg(long)]
        pic: Option<String>,
    },
    /// Generate a concordance certificate to the canonical form.
    Certify { bundle: String },
    /// Replay an a1cert/1 certificate read from a file (`-` for stdin).
    VerifyCert { file: String },
    /// dim Ext^1(quotient, sub).
    ExtDim { quotient: String, sub: String },
    /// Transition matrix of the extension with the given Čech coefficients.
    BuildExt {
        sub: String,
        quotient: String,
        class: String,
    },
    /// Fiber at --lambda of the family through an extension class.
    Family {
        sub: String,
        quotient: String,
        class: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Splitting type of a Laurent transition matrix.
    SplitType { matrix: String },
    /// Weak-equivalence criterion: (n+1) divides a - b (in the Picard group with --pic).
    WeakEquiv {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        pic: Option<String>,
    },
    /// Search a graded isomorphism between two rings `PB(n=.., a=..)`.
    ChowIso { first: String, second: String },
    /// Enumerate graded isomorphisms with coefficients in [-bound, bound].
    EnumIsos {
        first: String,
        second: String,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Run the three algebraic checks on Z[x,y]/(x², y³) and O(-1)+O+O(1).
    VerifyThmCount,
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Canon { .. } => "canon",
            Command::Concordant { .. } => "concordant",
            Command::Certify { .. } => "certify",
            Command::VerifyCert { .. } => "verify-cert",
            Command::ExtDim { .. } => "ext-dim",
            Command::BuildExt { .. } => "build-ext",
            Command::Family { .. } => "family",
            Command::SplitType { .. } => "split-type",
            Command::WeakEquiv { .. } => "weak-equiv",
            Command::ChowIso { .. } => "chow-iso",
            Command::EnumIsos { .. } => "enum-isos",
            Command::VerifyThmCount => "verify-thm-count",
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// What a verb produced before rendering.
struct Answer {
    ok: bool,
    text: String,
    result: Value,
    witness: Value,
}

impl Answer {
    fn value(text: impl Into<String>, result: Value) -> Self {
        Self {
            ok: true,
            text: text.into(),
            result,
            witness: Value::Null,
        }
    }
}

struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses and executes a command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.to_string();
            if !e.use_stderr() {
                return Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                };
            }
            // the one-document contract also covers command lines clap rejects
            let json_requested = args.iter().skip(1).take_while(|a| *a != "--").any(|a| a == "--json");
            let stdout = if json_requested {
                let msg = e.kind().as_str().unwrap_or("invalid command line");
                let doc = json!({"verb": Value::Null, "result": Value::Null, "witness": Value::Null, "error": msg});
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("json values serialize")
                )
            } else {
                String::new()
            };
            return Outcome {
                code: 2,
                stdout,
                stderr: rendered,
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let verb = cli.command.verb();
    match dispatch(&cli.command) {
        Ok(answer) => {
            let code = if answer.ok { 0 } else { 1 };
            let stdout = if cli.json {
                let doc = json!({"verb": verb, "result": answer.result, "witness": answer.witness});
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("json values serialize")
                )
            } else if answer.text.ends_with('\n') {
                answer.text
            } else {
                format!("{}\n", answer.text)
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(UsageError(msg)) => {
            let stdout = if cli.json {
                let doc = json!({"verb": verb, "result": Value::Null, "witness": Value::Null, "error": msg});
                format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("json values serialize")
                )
            } else {
                String::new()
            };
            Outcome {
                code: 2,
                stdout,
                stderr: format!("error: {msg}\n"),
            }
        }
    }
}

fn bundle_arg(text: &str) -> Result<SplitBundle, UsageError> {
    parse_bundle(text).map_err(|e| UsageError(format!("`{text}`: {e}")))
}

fn class_arg(group: &PicGroup, text: &str) -> Result<BundleClass, UsageError> {
    let (rank, det) = text
        .split_once(':')
        .ok_or_else(|| UsageError(format!("`{text}`: expected `rank:det`")))?;
    let rank: usize = rank
        .trim()
        .parse()
        .map_err(|_| UsageError(format!("`{text}`: bad rank")))?;
    let det = group.parse_element(det)?;
    Ok(concordance::canonical_class(group, rank, &det)?)
}

fn ext_class_arg(sub: &str, quotient: &str, class: &str) -> Result<ExtClass, UsageError> {
    let sub = bundle_arg(sub)?;
    let quotient = bundle_arg(quotient)?;
    let coefficients = if class.trim().is_empty() {
        Vec::new()
    } else {
        class
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<BigRational>, _>>()?
    };
    Ok(ExtClass::new(sub, quotient, coefficients)?)
}

fn ring_arg(text: &str) -> Result<ProjBundleRing, UsageError> {
    let r: ProjBundleRing = text.parse().map_err(|e| UsageError(format!("`{text}`: {e}")))?;
    Ok(r)
}

fn witness_json(w: &GradedIsoWitness) -> Value {
    json!({
        "alpha": w.alpha, "beta": w.beta, "gamma": w.gamma, "delta": w.delta,
        "map": w.to_string(),
    })
}

fn decision(ok: bool, witness: Value) -> Answer {
    Answer {
        ok,
        text: ok.to_string(),
        result: Value::Bool(ok),
        witness,
    }
}

fn dispatch(cmd: &Command) -> Result<Answer, UsageError> {
    match cmd {
        Command::Canon { bundle, pic: None } => {
            let c = concordance::canonical_form(&bundle_arg(bundle)?);
            Ok(Answer::value(c.to_string(), json!(c.to_string())))
        }
        Command::Canon { bundle, pic: Some(g) } => {
            let group: PicGroup = g.parse()?;
            let class = class_arg(&group, bundle)?;
            Ok(Answer::value(class.to_string(), json!(class.to_string())))
        }
        Command::Concordant {
            first,
            second,
            pic: None,
        } => {
            let (e, f) = (bundle_arg(first)?, bundle_arg(second)?);
            let ok = concordance::concordant(&e, &f);
            Ok(decision(
                ok,
                json!({
                    "canonical": [concordance::canonical_form(&e).to_string(), concordance::canonical_form(&f).to_string()]
                }),
            ))
        }
        Command::Concordant {
            first,
            second,
            pic: Some(g),
        } => {
            let group: PicGroup = g.parse()?;
            let (a, b) = (class_arg(&group, first)?, class_arg(&group, second)?);
            let ok = concordance::concordant_classes(&group, &a, &b)?;
            Ok(decision(ok, json!({"canonical": [a.to_string(), b.to_string()]})))
        }
        Command::Certify { bundle } => {
            let cert = concordance::generate_certificate(&bundle_arg(bundle)?);
            Ok(Answer::value(cert.to_string(), cert.to_json()))
        }
        Command::VerifyCert { file } => {
            let text = if file == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            } else {
                std::fs::read_to_string(file).map_err(|e| UsageError(format!("{file}: {e}")))?
            };
            verify_cert_text(&text)
        }
        Command::ExtDim { quotient, sub } => {
            let d = ext1_dim(&bundle_arg(quotient)?, &bundle_arg(sub)?);
            Ok(Answer::value(d.to_string(), json!(d)))
        }
        Command::BuildExt { sub, quotient, class } => {
            let c = ext_class_arg(sub, quotient, class)?;
            let m = transition::build_extension(&c);
            Ok(Answer::value(m.to_string(), json!(m.to_string())))
        }
        Command::Family {
            sub,
            quotient,
            class,
            lambda,
        } => {
            let c = ext_class_arg(sub, quotient, class)?;
            let lambda = parse_rational(lambda)?;
            let m = transition::family(&c, &lambda);
            let split = transition::splitting_type(&m);
            let mut a = Answer::value(m.to_string(), json!(m.to_string()));
            a.witness = json!({"splittingType": split.to_string()});
            Ok(a)
        }
        Command::SplitType { matrix } => {
            let m = parse_laurent_matrix(matrix)?;
            let t = transition::splitting_type(&m);
            Ok(Answer::value(t.to_string(), json!(t.to_string())))
        }
        Command::WeakEquiv { n, a, b, pic: None } => {
            let a: i64 = a.trim().parse().map_err(|_| UsageError(format!("bad integer `{a}`")))?;
            let b: i64 = b.trim().parse().map_err(|_| UsageError(format!("bad integer `{b}`")))?;
            let ok = chow::weak_equivalent_p1(*n, a, b)?;
            let iso = chow::find_graded_iso(&ProjBundleRing::new(*n, a)?, &ProjBundleRing::new(*n, b)?)?;
            let line = ok.then(|| (a - b) / (*n as i64 + 1));
            Ok(decision(
                ok,
                json!({"line": line, "chowRingIso": iso.as_ref().map(witness_json)}),
            ))
        }
        Command::WeakEquiv { n, a, b, pic: Some(g) } => {
            let group: PicGroup = g.parse()?;
            let (l1, l2) = (group.parse_element(a)?, group.parse_element(b)?);
            let w = chow::weak_equivalent_curve(&group, &l1, &l2, *n)?;
            Ok(decision(
                w.is_some(),
                json!({"line": w.as_ref().map(|x| x.to_string())}),
            ))
        }
        Command::ChowIso { first, second } => {
            let (r1, r2) = (ring_arg(first)?, ring_arg(second)?);
            let iso = chow::find_graded_iso(&r1, &r2)?;
            let weak = chow::weak_equivalent_p1(r1.fiber_dim(), r1.det_class(), r2.det_class())?;
            let text = match &iso {
                Some(w) => w.to_string(),
                None => "none".to_string(),
            };
            Ok(Answer {
                ok: iso.is_some(),
                text,
                result: Value::Bool(iso.is_some()),
                witness: json!({"map": iso.as_ref().map(witness_json), "weakEquivalent": weak}),
            })
        }
        Command::EnumIsos { first, second, bound } => {
            let (r1, r2) = (ring_arg(first)?, ring_arg(second)?);
            let isos = chow::enumerate_graded_isos(&r1, &r2, *bound)?;
            let text = if isos.is_empty() {
                "none".to_string()
            } else {
                isos.iter().map(|w| w.to_string()).collect::<Vec<_>>().join("\n")
            };
            let mut answer = Answer::value(text, Value::Array(isos.iter().map(witness_json).collect()));
            answer.ok = !isos.is_empty();
            Ok(answer)
        }
        Command::VerifyThmCount => {
            let checks = chow::verify_theorem_count();
            let all = checks.iter().all(|c| c.pass);
            let text = checks
                .iter()
                .map(|c| format!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.check))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Answer {
                ok: all,
                text,
                result: json!({"pass": all, "checks": checks}),
                witness: Value::Null,
            })
        }
    }
}

/// Accepts a bare certificate document or the `--json` envelope printed by `certify`.
fn verify_cert_text(text: &str) -> Result<Answer, UsageError> {
    let mut doc: Value =
        serde_json::from_str(text).map_err(|e| UsageError(format!("invalid certificate JSON: {e}")))?;
    if doc.get("verb").and_then(Value::as_str) == Some("certify") {
        doc = doc["result"].take();
    }
    let cert = ConcordanceCertificate::from_json(doc)?;
    Ok(match concordance::verify_certificate(&cert) {
        Ok(()) => decision(true, json!({"moves": cert.total_moves()})),
        Err(e) => {
            let kind = match e {
                CertificateError::Malformed { .. } => "malformed",
                CertificateError::Invalid { .. } => "invalid",
            };
            Answer {
                ok: false,
                text: format!("false: {e}"),
                result: Value::Bool(false),
                witness: json!({"kind": kind, "message": e.to_string()}),
            }
        }
    })
}
