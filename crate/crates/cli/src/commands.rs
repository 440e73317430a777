// Copyright 2026 The qacc-lab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Subcommands of the `qacc` binary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qacc_core::algebra::json::scalar_to_doc;
use qacc_core::algebra::ExactScalar;
use qacc_core::circuit::{index_to_bits, Circuit, CircuitError};
use qacc_core::statevec::{self, Decision, Mode, SimError};
use qacc_core::tensorgraph::json::graph_to_json;
use qacc_core::tensorgraph::{
    tg_amplitude_dp, tg_amplitude_paths, tg_build, tg_metrics, TgError, DEFAULT_PATH_CAP,
};
use qacc_core::transforms::{builder_instance, equivalence_check, TransformError, Verdict};

use crate::dsl::{parse_bits, parse_document, serialize_circuit, DslError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "qacc", version, about = "Exact simulation and tensor-graph analysis of constant-depth circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CircuitInput {
    /// Circuit file in the qacc DSL.
    #[arg(long, value_name = "FILE")]
    pub circuit: PathBuf,
    /// Input bits, one per input line, most significant line first.
    #[arg(long, value_name = "BITS")]
    pub input: String,
}

#[derive(Args, Debug, Clone)]
pub struct BuilderArgs {
    /// One of the registered builder names.
    #[arg(long, value_name = "NAME")]
    pub builder: String,
    /// Number of inputs or digit blocks.
    #[arg(long)]
    pub n: usize,
    /// Modulus.
    #[arg(long)]
    pub q: u32,
    /// Residue, for builders that take one.
    #[arg(long, default_value_t = 0)]
    pub r: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    /// Exact: |amplitude|² must be 0 or 1.
    #[value(name = "E")]
    E,
    /// Nonzero amplitude accepts.
    #[value(name = "N")]
    N,
    /// Bounded error, rational contexts only.
    #[value(name = "B")]
    B,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Dp,
    Paths,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the output state.
    Simulate {
        #[command(flatten)]
        src: CircuitInput,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print one output amplitude.
    Amplitude {
        #[command(flatten)]
        src: CircuitInput,
        /// Output bits over all lines, inputs then auxiliaries.
        #[arg(long, value_name = "BITS")]
        target: String,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Decide acceptance of a target in one of the three modes.
    Accept {
        #[command(flatten)]
        src: CircuitInput,
        /// Output bits over all lines, inputs then auxiliaries.
        #[arg(long, value_name = "BITS")]
        target: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print a constructed circuit in the DSL.
    Build {
        #[command(flatten)]
        b: BuilderArgs,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compare a constructed circuit against the gate it implements.
    Check {
        #[command(flatten)]
        b: BuilderArgs,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Dump the tensor graph, or one amplitude read off it with --target.
    Graph {
        #[command(flatten)]
        src: CircuitInput,
        /// Output bits over all lines, inputs then auxiliaries.
        #[arg(long, value_name = "BITS")]
        target: Option<String>,
        /// How the amplitude is read off the graph.
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
    /// Print size and color statistics of the tensor graph.
    Metrics {
        #[command(flatten)]
        src: CircuitInput,
        /// Print JSON.
        #[arg(long)]
        json: bool,
    },
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        Failure::usage(e.to_string())
    }
}

fn circuit_code(e: &CircuitError) -> i32 {
    match e {
        CircuitError::TooWide { .. } => EXIT_CAP,
        _ => EXIT_USAGE,
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let code = match &e {
            SimError::Circuit(c) => circuit_code(c),
            SimError::NotEOperator(_) => EXIT_REJECT,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<TgError> for Failure {
    fn from(e: TgError) -> Self {
        let code = match &e {
            TgError::PathCapExceeded { .. } | TgError::DenseCapExceeded { .. } => EXIT_CAP,
            TgError::Circuit(c) => circuit_code(c),
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::TooWide { .. } => Failure { code: EXIT_CAP, message: e.to_string() },
            TransformError::Sim(s) => s.into(),
            TransformError::BadArgs(m) => Failure::usage(m),
        }
    }
}

fn load(src: &CircuitInput) -> Result<(Circuit, u64), Failure> {
    let text = std::fs::read_to_string(&src.circuit)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", src.circuit.display())))?;
    let doc = parse_document(&text, src.circuit.parent())?;
    let c = doc.circuit;
    let x = parse_bits(&src.input, c.n_inputs).map_err(|m| Failure::usage(format!("--input: {m}")))?;
    Ok((c, x))
}

fn target_index(c: &Circuit, bits: &str) -> Result<u64, Failure> {
    parse_bits(bits, c.width()).map_err(|m| Failure::usage(format!("--target: {m}")))
}

fn approx(a: &ExactScalar) -> [f64; 2] {
    a.eval_numeric().map(|z| [z.re, z.im]).unwrap_or([f64::NAN, f64::NAN])
}

fn approx_text(a: &ExactScalar) -> String {
    // Round first so that tiny negative residues print as +0.
    let [re, im] = approx(a).map(|v| (v * 1e12).round() / 1e12 + 0.0);
    format!("{re:.12} {} {:.12}i", if im < 0.0 { '-' } else { '+' }, im.abs())
}

fn amplitude_json(a: &ExactScalar) -> Value {
    json!({ "exact": a.to_string(), "scalar": scalar_to_doc(a), "approx": approx(a) })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn ok(stdout: String) -> Result<(i32, String), Failure> {
    Ok((EXIT_OK, stdout))
}

fn simulate(src: &CircuitInput, as_json: bool) -> Result<(i32, String), Failure> {
    let (c, x) = load(src)?;
    let s = statevec::run(&c, x)?;
    if as_json {
        return ok(pretty(&json!({ "lines": c.width(), "input": src.input, "state": s.to_json() })));
    }
    let mut out = String::new();
    for (idx, a) in s.entries() {
        writeln!(out, "{}  {}  ~ {}", index_to_bits(*idx, c.width()), a, approx_text(a)).unwrap();
    }
    ok(out)
}

fn amplitude(src: &CircuitInput, target: &str, as_json: bool) -> Result<(i32, String), Failure> {
    let (c, x) = load(src)?;
    let z = target_index(&c, target)?;
    let a = statevec::amplitude(&c, x, z)?;
    if as_json {
        return ok(pretty(&json!({ "input": src.input, "target": target, "amplitude": amplitude_json(&a) })));
    }
    ok(format!("exact: {a}\napprox: {}\n", approx_text(&a)))
}

fn accept(src: &CircuitInput, target: &str, mode: ModeArg, as_json: bool) -> Result<(i32, String), Failure> {
    let (c, x) = load(src)?;
    let z = target_index(&c, target)?;
    let m = match mode {
        ModeArg::E => Mode::E,
        ModeArg::N => Mode::N,
        ModeArg::B => Mode::B,
    };
    let d = statevec::accept(&c, x, z, m)?;
    let word = match d {
        Decision::Accept => "accept",
        Decision::Reject => "reject",
        Decision::InvalidGap => "invalid",
    };
    let code = if d == Decision::Accept { EXIT_OK } else { EXIT_REJECT };
    let out = if as_json {
        pretty(&json!({ "mode": format!("{mode:?}"), "input": src.input, "target": target, "decision": word }))
    } else {
        format!("{word}\n")
    };
    Ok((code, out))
}

fn build(b: &BuilderArgs, as_json: bool) -> Result<(i32, String), Failure> {
    let inst = builder_instance(&b.builder, b.n, b.q, b.r)?;
    let text = serialize_circuit(&inst.candidate);
    if as_json {
        return ok(pretty(&json!({
            "builder": inst.name,
            "n": b.n,
            "q": b.q,
            "r": b.r,
            "inputs": inst.candidate.n_inputs,
            "aux": inst.candidate.n_aux,
            "depth": inst.candidate.depth(),
            "dsl": text,
        })));
    }
    ok(text)
}

fn check(b: &BuilderArgs, as_json: bool) -> Result<(i32, String), Failure> {
    let inst = builder_instance(&b.builder, b.n, b.q, b.r)?;
    let rep = equivalence_check(&inst.target, &inst.candidate, &inst.domain)?;
    let lines = rep.lines_compared;
    let code = if rep.verdict == Verdict::Equivalent { EXIT_OK } else { EXIT_REJECT };
    let verdict = if rep.verdict == Verdict::Equivalent { "equivalent" } else { "counterexample" };
    if as_json {
        let ce = rep.counterexample.as_ref().map(|ce| {
            json!({
                "x": index_to_bits(ce.x, lines),
                "y": index_to_bits(ce.y, lines),
                "aux": index_to_bits(ce.aux, inst.candidate.n_aux),
                "target": amplitude_json(&ce.lhs),
                "candidate": amplitude_json(&ce.rhs),
            })
        });
        let v = json!({
            "builder": inst.name,
            "verdict": verdict,
            "aux_setting": rep.aux_setting,
            "aux_restored": rep.aux_restored,
            "lines_compared": lines,
            "inputs_checked": rep.inputs_checked,
            "counterexample": ce,
        });
        return Ok((code, pretty(&v)));
    }
    let mut out = format!("{verdict}\n");
    writeln!(out, "inputs checked: {}", rep.inputs_checked).unwrap();
    writeln!(out, "aux restored: {}", rep.aux_restored).unwrap();
    if let Some(ce) = &rep.counterexample {
        writeln!(
            out,
            "x={} y={} aux={}\ntarget: {}\ncandidate: {}",
            index_to_bits(ce.x, lines),
            index_to_bits(ce.y, lines),
            index_to_bits(ce.aux, inst.candidate.n_aux),
            ce.lhs,
            ce.rhs
        )
        .unwrap();
    }
    Ok((code, out))
}

fn graph(src: &CircuitInput, target: Option<&str>, method: Method, as_json: bool) -> Result<(i32, String), Failure> {
    let (c, x) = load(src)?;
    let g = tg_build(&c, x)?;
    let Some(target) = target else {
        if as_json {
            let mut s = graph_to_json(&g);
            s.push('\n');
            return ok(s);
        }
        let mut out = format!("nodes {} source {} terminal {}\n", g.node_count(), g.source(), g.terminal());
        for e in g.vedges() {
            writeln!(out, "v {} -> {} [{}] {} ; {}", e.from, e.to, e.colors, e.amp0, e.amp1).unwrap();
        }
        for (a, b) in g.hedges() {
            writeln!(out, "h {a} -> {b}").unwrap();
        }
        return ok(out);
    };
    let z = target_index(&c, target)?;
    let a = match method {
        Method::Dp => tg_amplitude_dp(&g, z)?,
        Method::Paths => tg_amplitude_paths(&g, z, DEFAULT_PATH_CAP)?,
    };
    let name = if method == Method::Dp { "dp" } else { "paths" };
    if as_json {
        return ok(pretty(&json!({ "method": name, "input": src.input, "target": target, "amplitude": amplitude_json(&a) })));
    }
    ok(format!("exact: {a}\napprox: {}\n", approx_text(&a)))
}

fn metrics(src: &CircuitInput, as_json: bool) -> Result<(i32, String), Failure> {
    let (c, x) = load(src)?;
    let m = tg_metrics(&tg_build(&c, x)?);
    if as_json {
        return ok(pretty(&json!({
            "width": m.width,
            "height": m.height,
            "nodes": m.nodes,
            "path_count": m.path_count.to_string(),
            "color_depth": m.color_depth,
            "colors_per_height": m.colors_per_height,
            "color_consistent": m.color_consistent,
            "lowerings": m.lowerings,
        })));
    }
    let mut out = String::new();
    writeln!(out, "width: {}", m.width).unwrap();
    writeln!(out, "height: {}", m.height).unwrap();
    writeln!(out, "nodes: {}", m.nodes).unwrap();
    writeln!(out, "paths: {}", m.path_count).unwrap();
    writeln!(out, "color depth: {}", m.color_depth).unwrap();
    writeln!(out, "colors per height: {}", m.colors_per_height).unwrap();
    writeln!(out, "color consistent: {}", m.color_consistent).unwrap();
    for l in &m.lowerings {
        writeln!(out, "lowering: {l}").unwrap();
    }
    ok(out)
}

/// Runs one parsed command.
pub fn execute(cmd: &Command) -> Outcome {
    let r = match cmd {
        Command::Simulate { src, json } => simulate(src, *json),
        Command::Amplitude { src, target, json } => amplitude(src, target, *json),
        Command::Accept { src, target, mode, json } => accept(src, target, *mode, *json),
        Command::Build { b, json } => build(b, *json),
        Command::Check { b, json } => check(b, *json),
        Command::Graph { src, target, method, json } => graph(src, target.as_deref(), *method, *json),
        Command::Metrics { src, json } => metrics(src, *json),
    };
    match r {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}
