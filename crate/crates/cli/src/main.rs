//! `modalc`: command-line front end for the dual-context workbench.
//!
//! Exit codes: 0 = every verdict positive, 1 = a well-posed negative
//! verdict, 2 = usage, parse, or internal failure.

use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use modalc_core::semantics::{verify_model_with, VerifyConfig};
use modalc_core::typecheck::TypingDerivation;
use modalc_core::{
    check_hilbert, infer, interp_ctx, interp_term, interp_type, normalize,
    parse_eq_judgment, parse_judgment, parse_judgments, parse_proof_script, parse_term,
    print_proof_script, FiniteModel, FunctorSpec, LogicId, ProofScript, Relation, SourceJudgment,
    SystemId, Term,
};

#[derive(Parser)]
#[command(name = "modalc", version, about = "Workbench for dual-context modal lambda-calculi")]
struct Cli {
    /// Emit one machine-readable JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArg {
    /// One of: k, k4, gl, t, s4
    #[arg(long)]
    system: String,
}

impl SystemArg {
    fn parse(&self) -> Result<SystemId, String> {
        SystemId::from_name(&self.system)
            .ok_or_else(|| format!("unknown system `{}` (use k, k4, gl, t, s4)", self.system))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Type-check the judgments in a file, "-" (stdin), or a literal
    Check {
        #[command(flatten)]
        system: SystemArg,
        /// Print the full derivation for each judgment
        #[arg(long)]
        verbose: bool,
        input: String,
    },
    /// Reduce a term to normal form
    Normalize {
        #[command(flatten)]
        system: SystemArg,
        /// Also contract the commuting conversions
        #[arg(long)]
        cc: bool,
        /// Step limit (default 10000; MODALC_FUEL overrides the default)
        #[arg(long)]
        fuel: Option<u32>,
        /// Print every reduction step
        #[arg(long)]
        trace: bool,
        input: String,
    },
    /// Decide an equation `D ; G |- M = N : A`
    Eq {
        #[command(flatten)]
        system: SystemArg,
        input: String,
    },
    /// Check a Hilbert proof script
    HilbertCheck {
        /// One of: ck, ck4, ct, cs4, cgl
        #[arg(long)]
        logic: String,
        input: String,
    },
    /// Translate a judgment's derivation into a Hilbert proof script
    Translate {
        #[command(flatten)]
        system: SystemArg,
        input: String,
    },
    /// Print the denotation table of a judgment in a finite model
    Interp {
        #[command(flatten)]
        system: SystemArg,
        /// One of: identity, unit, diag
        #[arg(long)]
        model: String,
        /// Atom sizes, e.g. --size p=3 (default: every atom 2)
        #[arg(long = "size")]
        sizes: Vec<String>,
        input: String,
    },
    /// Verify the categorical laws a system requires of a model
    VerifyModel {
        #[command(flatten)]
        system: SystemArg,
        /// One of: identity, unit, diag
        #[arg(long)]
        model: String,
        /// Check laws exhaustively up to this object size (default 3)
        #[arg(long = "size-bound", alias = "size")]
        size_bound: Option<usize>,
    },
}

#[derive(Serialize)]
struct Diagnostic {
    severity: String,
    location: Option<String>,
    message: String,
}

struct Outcome {
    command: &'static str,
    status: &'static str, // ok | fail | error
    data: Value,
    diagnostics: Vec<Diagnostic>,
    text: String,
}

impl Outcome {
    fn exit(&self) -> ExitCode {
        match self.status {
            "ok" => ExitCode::from(0),
            "fail" => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

fn diag(severity: &str, location: Option<String>, message: impl Into<String>) -> Diagnostic {
    Diagnostic { severity: severity.into(), location, message: message.into() }
}

fn error_outcome(command: &'static str, message: String, location: Option<String>) -> Outcome {
    Outcome {
        command,
        status: "error",
        data: Value::Null,
        diagnostics: vec![diag("error", location, message.clone())],
        text: format!("error: {}\n", message),
    }
}

/// Resolves the input argument: `-` reads stdin, an existing path reads
/// the file, anything else is taken as literal source text.
fn read_input(input: &str) -> Result<String, String> {
    if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("cannot read stdin: {}", e))?;
        return Ok(buf);
    }
    let path = std::path::Path::new(input);
    if path.exists() {
        return std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", input, e));
    }
    Ok(input.to_string())
}

fn default_fuel() -> u32 {
    std::env::var("MODALC_FUEL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(10_000)
}

fn atoms_of_judgment(j: &SourceJudgment) -> BTreeSet<String> {
    fn term_atoms(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(_) => {}
            Term::Lam(_, ty, b) | Term::FixBox(_, ty, b) => {
                out.extend(ty.atoms());
                term_atoms(b, out);
            }
            Term::App(a, b) | Term::Pair(a, b) | Term::LetBox(_, a, b) => {
                term_atoms(a, out);
                term_atoms(b, out);
            }
            Term::Proj(_, b) | Term::BoxI(b) => term_atoms(b, out),
        }
    }
    let mut out = BTreeSet::new();
    for (_, ty) in j.ctx.modal.iter().chain(j.ctx.intuit.iter()) {
        out.extend(ty.atoms());
    }
    term_atoms(&j.term, &mut out);
    if let Some(ty) = &j.ascription {
        out.extend(ty.atoms());
    }
    out
}

fn build_model(
    name: &str,
    sizes: &[String],
    atoms: BTreeSet<String>,
) -> Result<FiniteModel, String> {
    let functor = FunctorSpec::from_name(name)
        .ok_or_else(|| format!("unknown model `{}` (use identity, unit, diag)", name))?;
    let mut model = FiniteModel::new(functor);
    for spec in sizes {
        let (atom, size) = spec
            .split_once('=')
            .ok_or_else(|| format!("bad --size `{}` (use atom=N)", spec))?;
        let n: usize = size.parse().map_err(|_| format!("bad --size `{}`", spec))?;
        model.atoms.insert(atom.trim().to_string(), n);
    }
    model.fill_atoms(atoms, 2);
    Ok(model)
}

fn run_check(system: &SystemArg, verbose: bool, input: &str) -> Outcome {
    const CMD: &str = "check";
    let sys = match system.parse() {
        Ok(s) => s,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let judgments = match parse_judgments(&text) {
        Ok(js) if !js.is_empty() => js,
        Ok(_) => return error_outcome(CMD, "no judgments in input".into(), None),
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    let mut rows = Vec::new();
    let mut lines = String::new();
    let mut diagnostics = Vec::new();
    let mut any_fail = false;
    for (i, j) in judgments.iter().enumerate() {
        match infer(sys, &j.ctx, &j.term) {
            Ok(d) => {
                let matches = j.ascription.as_ref().map(|t| *t == d.ty);
                if matches == Some(false) {
                    any_fail = true;
                    let msg = format!(
                        "inferred {} but the judgment ascribes {}",
                        d.ty,
                        j.ascription.as_ref().unwrap()
                    );
                    lines.push_str(&format!("fail: {}  # {}\n", j, msg));
                    diagnostics.push(diag("error", Some(format!("judgment {}", i + 1)), msg));
                    rows.push(json!({
                        "judgment": j.to_string(),
                        "status": "fail",
                        "inferred": d.ty.to_string(),
                    }));
                } else {
                    lines.push_str(&format!("ok: {} |- {} : {}\n", j.ctx, j.term, d.ty));
                    if verbose {
                        lines.push_str(&d.pretty());
                    }
                    rows.push(json!({
                        "judgment": j.to_string(),
                        "status": "ok",
                        "type": d.ty.to_string(),
                    }));
                }
            }
            Err(e) => {
                any_fail = true;
                lines.push_str(&format!("fail: {}  # {}\n", j, e));
                diagnostics.push(diag("error", Some(format!("judgment {}", i + 1)), e.to_string()));
                rows.push(json!({
                    "judgment": j.to_string(),
                    "status": "fail",
                    "error": e.to_string(),
                }));
            }
        }
    }
    Outcome {
        command: CMD,
        status: if any_fail { "fail" } else { "ok" },
        data: json!({ "system": sys.name(), "results": rows }),
        diagnostics,
        text: lines,
    }
}

fn run_normalize(
    system: &SystemArg,
    cc: bool,
    fuel: Option<u32>,
    trace: bool,
    input: &str,
) -> Outcome {
    const CMD: &str = "normalize";
    if let Err(e) = system.parse() {
        return error_outcome(CMD, e, None);
    }
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let term = match parse_term(text.trim()) {
        Ok(t) => t,
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    let fuel = fuel.unwrap_or_else(default_fuel);
    let relation = if cc { Relation::Cc } else { Relation::Plain };
    match normalize(&term, relation, fuel) {
        Ok(n) => {
            let mut text_out = String::new();
            if trace {
                for (i, s) in n.trace.steps.iter().enumerate() {
                    text_out.push_str(&format!(
                        "step {}: {} at {:?}: {}\n",
                        i + 1,
                        s.rule,
                        s.path,
                        s.term
                    ));
                }
            }
            text_out.push_str(&format!("{}\n", n.term));
            let steps: Vec<Value> = n
                .trace
                .steps
                .iter()
                .map(|s| json!({ "rule": s.rule.name(), "path": s.path, "term": s.term.to_string() }))
                .collect();
            Outcome {
                command: CMD,
                status: "ok",
                data: json!({
                    "normal_form": n.term.to_string(),
                    "steps": n.trace.steps.len(),
                    "trace": if trace { Value::Array(steps) } else { Value::Null },
                }),
                diagnostics: vec![],
                text: text_out,
            }
        }
        Err(e) => Outcome {
            command: CMD,
            status: "fail",
            data: json!({ "fuel": fuel }),
            diagnostics: vec![diag("error", None, e.to_string())],
            text: format!("fail: {}\n", e),
        },
    }
}

fn run_eq(system: &SystemArg, input: &str) -> Outcome {
    const CMD: &str = "eq";
    let sys = match system.parse() {
        Ok(s) => s,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let j = match parse_eq_judgment(text.trim()) {
        Ok(j) => j,
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    match modalc_core::equality::eq_terms_with_fuel(sys, &j.ctx, &j.left, &j.right, &j.ty, default_fuel()) {
        Ok(v) => {
            let status = if v.equal { "ok" } else { "fail" };
            let verdict = if v.equal { "equal" } else { "not proved equal" };
            Outcome {
                command: CMD,
                status,
                data: json!({
                    "verdict": verdict,
                    "left_normal": v.left_nf.to_string(),
                    "right_normal": v.right_nf.to_string(),
                }),
                diagnostics: vec![],
                text: format!(
                    "{}\n  left  ~> {}\n  right ~> {}\n",
                    verdict, v.left_nf, v.right_nf
                ),
            }
        }
        Err(e) => error_outcome(CMD, e.to_string(), None),
    }
}

fn run_hilbert_check(logic: &str, input: &str) -> Outcome {
    const CMD: &str = "hilbert-check";
    let logic = match LogicId::from_name(logic) {
        Some(l) => l,
        None => {
            return error_outcome(
                CMD,
                format!("unknown logic `{}` (use ck, ck4, ct, cs4, cgl)", logic),
                None,
            )
        }
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let script: ProofScript = match parse_proof_script(&text) {
        Ok(s) => s,
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    match check_hilbert(logic, &script.assumptions, &script.goal, &script.proof) {
        Ok(()) => Outcome {
            command: CMD,
            status: "ok",
            data: json!({
                "logic": logic.name(),
                "goal": script.goal.to_string(),
                "assumptions": script.assumptions.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            }),
            diagnostics: vec![],
            text: format!(
                "ok: {} assumption(s) |- {} [{}]\n",
                script.assumptions.len(),
                script.goal,
                logic
            ),
        },
        Err(e) => Outcome {
            command: CMD,
            status: "fail",
            data: json!({ "logic": logic.name(), "goal": script.goal.to_string() }),
            diagnostics: vec![diag("error", None, e.to_string())],
            text: format!("fail: {}\n", e),
        },
    }
}

fn run_translate(system: &SystemArg, input: &str) -> Outcome {
    const CMD: &str = "translate";
    let sys = match system.parse() {
        Ok(s) => s,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let j = match parse_judgment(text.trim()) {
        Ok(j) => j,
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    let derivation: TypingDerivation = match infer(sys, &j.ctx, &j.term) {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                command: CMD,
                status: "fail",
                data: Value::Null,
                diagnostics: vec![diag("error", None, e.to_string())],
                text: format!("fail: {}\n", e),
            }
        }
    };
    match modalc_core::translate(sys, &derivation) {
        Ok(t) => {
            debug_assert!(check_hilbert(t.logic, &t.assumptions, &t.goal, &t.proof).is_ok());
            let script = ProofScript {
                assumptions: t.assumptions.clone(),
                goal: t.goal.clone(),
                proof: t.proof.clone(),
            };
            let rendered = print_proof_script(&script);
            Outcome {
                command: CMD,
                status: "ok",
                data: json!({
                    "logic": t.logic.name(),
                    "assumptions": t.assumptions.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    "goal": t.goal.to_string(),
                    "script": rendered,
                }),
                diagnostics: vec![],
                text: format!("# logic: {}\n{}", t.logic, rendered),
            }
        }
        Err(e) => error_outcome(CMD, e.to_string(), None),
    }
}

fn run_interp(system: &SystemArg, model: &str, sizes: &[String], input: &str) -> Outcome {
    const CMD: &str = "interp";
    let sys = match system.parse() {
        Ok(s) => s,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let j = match parse_judgment(text.trim()) {
        Ok(j) => j,
        Err(e) => {
            return error_outcome(CMD, e.to_string(), Some(format!("{}:{}", e.line, e.col)))
        }
    };
    let model = match build_model(model, sizes, atoms_of_judgment(&j)) {
        Ok(m) => m,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let report = match modalc_core::verify_model(&model, sys) {
        Ok(r) => r,
        Err(e) => return error_outcome(CMD, e.to_string(), None),
    };
    if !report.passed {
        let f = report.first_failure().unwrap();
        return Outcome {
            command: CMD,
            status: "fail",
            data: json!({ "law": f.law, "witness": f.witness }),
            diagnostics: vec![diag(
                "error",
                None,
                format!("model `{}` fails {} for {}", report.functor, f.law, sys),
            )],
            text: format!(
                "fail: model `{}` does not satisfy the {} laws ({}: {})\n",
                report.functor,
                sys,
                f.law,
                f.witness.clone().unwrap_or_default()
            ),
        };
    }
    let derivation = match infer(sys, &j.ctx, &j.term) {
        Ok(d) => d,
        Err(e) => {
            return Outcome {
                command: CMD,
                status: "fail",
                data: Value::Null,
                diagnostics: vec![diag("error", None, e.to_string())],
                text: format!("fail: {}\n", e),
            }
        }
    };
    let den = match interp_term(&model, sys, &derivation) {
        Ok(d) => d,
        Err(e) => return error_outcome(CMD, e.to_string(), None),
    };
    let dom_obj = interp_ctx(&model, &j.ctx).expect("sized during interp");
    let cod_obj = interp_type(&model, &derivation.ty).expect("sized during interp");
    let mut text_out = format!(
        "domain {} ({} elements), codomain {} ({} elements)\n",
        dom_obj,
        den.table.len(),
        cod_obj,
        cod_obj.size().unwrap_or(0)
    );
    for (i, &v) in den.table.iter().enumerate() {
        text_out.push_str(&format!("  {} |-> {}\n", dom_obj.label(i), cod_obj.label(v)));
    }
    Outcome {
        command: CMD,
        status: "ok",
        data: json!({
            "system": sys.name(),
            "model": model.functor.name(),
            "type": derivation.ty.to_string(),
            "domain_size": den.table.len(),
            "codomain_size": cod_obj.size().unwrap_or(0),
            "table": den.table,
        }),
        diagnostics: vec![],
        text: text_out,
    }
}

fn run_verify_model(system: &SystemArg, model: &str, size_bound: Option<usize>) -> Outcome {
    const CMD: &str = "verify-model";
    let sys = match system.parse() {
        Ok(s) => s,
        Err(e) => return error_outcome(CMD, e, None),
    };
    let functor = match FunctorSpec::from_name(model) {
        Some(f) => f,
        None => {
            return error_outcome(
                CMD,
                format!("unknown model `{}` (use identity, unit, diag)", model),
                None,
            )
        }
    };
    let fm = FiniteModel::new(functor);
    let cfg = VerifyConfig { max_atom_size: size_bound.unwrap_or(3) };
    match verify_model_with(&fm, sys, cfg) {
        Ok(report) => {
            let mut text = String::new();
            for c in &report.checks {
                if c.passed {
                    text.push_str(&format!("pass {}\n", c.law));
                } else {
                    text.push_str(&format!(
                        "FAIL {}: {}\n",
                        c.law,
                        c.witness.clone().unwrap_or_default()
                    ));
                }
            }
            text.push_str(&format!(
                "{}: model `{}` for system {}\n",
                if report.passed { "ok" } else { "fail" },
                functor.name(),
                sys
            ));
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "law": c.law, "passed": c.passed, "witness": c.witness }))
                .collect();
            Outcome {
                command: CMD,
                status: if report.passed { "ok" } else { "fail" },
                data: json!({ "system": sys.name(), "model": functor.name(), "checks": checks }),
                diagnostics: report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| {
                        diag(
                            "error",
                            None,
                            format!("{}: {}", c.law, c.witness.clone().unwrap_or_default()),
                        )
                    })
                    .collect(),
                text,
            }
        }
        Err(e) => error_outcome(CMD, e.to_string(), None),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Check { system, verbose, input } => run_check(system, *verbose, input),
        Command::Normalize { system, cc, fuel, trace, input } => {
            run_normalize(system, *cc, *fuel, *trace, input)
        }
        Command::Eq { system, input } => run_eq(system, input),
        Command::HilbertCheck { logic, input } => run_hilbert_check(logic, input),
        Command::Translate { system, input } => run_translate(system, input),
        Command::Interp { system, model, sizes, input } => run_interp(system, model, sizes, input),
        Command::VerifyModel { system, model, size_bound } => {
            run_verify_model(system, model, *size_bound)
        }
    };
    if cli.json {
        let out = json!({
            "command": outcome.command,
            "status": outcome.status,
            "data": outcome.data,
            "diagnostics": outcome.diagnostics.iter().map(|d| json!({
                "severity": d.severity,
                "location": d.location,
                "message": d.message,
            })).collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        print!("{}", outcome.text);
    }
    outcome.exit()
}
