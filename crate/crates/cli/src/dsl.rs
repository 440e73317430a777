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

//! Text format for circuits.
//!
//! ```text
//! # comments run to the end of the line
//! circuit n=2 aux=1 context=cyc8
//! layer { H[0]; TOF[0,1->2] }
//! layer { U [[1,0],[0,w]] [1] }
//! cnotlayer { 0->1 }
//! cnotlog { 0->1 | 1->2 }
//! ```
//!
//! `context=` takes a built-in name (`cyc<q>`, `rat<u>`), a quoted path to a
//! context JSON file, or an inline JSON object. Scalars are exact expressions
//! over integers and context symbols; decimal literals are refused.

use std::fmt;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use qacc_core::algebra::json::{context_from_doc, context_from_json, context_to_doc, ContextDoc};
use qacc_core::algebra::{AlgebraContext, ContextRef, ExactScalar};
use qacc_core::circuit::{validate, Circuit, Diagnostic, Gate, Layer};

/// A syntax error at a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    /// Tokens that would have been accepted here; empty when not applicable.
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            let e: Vec<String> = self.expected.iter().map(|t| format!("`{t}`")).collect();
            write!(f, " (expected {})", e.join(", "))?;
        }
        Ok(())
    }
}

/// A validation finding mapped back to the offending layer or gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocatedDiagnostic {
    pub line: usize,
    pub col: usize,
    pub diagnostic: Diagnostic,
}

impl fmt::Display for LocatedDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.diagnostic)
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{}", join(.0))]
    Syntax(Vec<ParseError>),
    #[error("{}", join(.0))]
    Invalid(Vec<LocatedDiagnostic>),
}

/// A parsed file: the circuit plus its comment lines.
#[derive(Clone, Debug, PartialEq)]
pub struct DslDocument {
    pub circuit: Circuit,
    pub comments: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Json(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Json(_) => write!(f, "JSON object"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 18] = ["->", "<-", "[", "]", "{", "}", "(", ")", ",", ";", "=", "+", "-", "*", "/", "^", ":", "|"];

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    out: Vec<Spanned>,
    comments: Vec<String>,
    errors: Vec<ParseError>,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer { chars: src.chars().collect(), pos: 0, line: 1, col: 1, out: Vec::new(), comments: Vec::new(), errors: Vec::new() }
    }

    fn peek(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&mut self, line: usize, col: usize, message: String) {
        self.errors.push(ParseError { line, col, message, expected: Vec::new() });
    }

    fn after_context_eq(&self) -> bool {
        matches!(self.out.as_slice(), [.., Spanned { tok: Tok::Ident(k), .. }, Spanned { tok: Tok::Sym("="), .. }] if k == "context")
    }

    fn run(mut self) -> (Vec<Spanned>, Vec<String>, Vec<ParseError>) {
        while let Some(c) = self.peek(0) {
            let (line, col) = (self.line, self.col);
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                let mut s = String::new();
                self.bump();
                while let Some(c) = self.peek(0) {
                    if c == '\n' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                self.comments.push(s.trim().to_string());
            } else if c == '{' && self.after_context_eq() {
                self.lex_json(line, col);
            } else if c == '"' {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some('"') => break,
                        Some('\n') | None => {
                            self.error(line, col, "unterminated string".into());
                            break;
                        }
                        Some(c) => s.push(c),
                    }
                }
                self.out.push(Spanned { tok: Tok::Str(s), line, col });
            } else if c.is_ascii_digit() {
                let mut s = String::new();
                while let Some(d) = self.peek(0).filter(char::is_ascii_digit) {
                    s.push(d);
                    self.bump();
                }
                if self.peek(0) == Some('.') && self.peek(1).is_some_and(|d| d.is_ascii_digit()) {
                    self.bump();
                    while self.peek(0).is_some_and(|d| d.is_ascii_digit()) {
                        self.bump();
                    }
                    self.error(line, col, "decimal literals are not allowed; write scalars exactly, e.g. 1/2 or h".into());
                    continue;
                }
                self.out.push(Spanned { tok: Tok::Int(s.parse().expect("digits")), line, col });
            } else if c.is_ascii_alphabetic() || c == '_' {
                let mut s = String::new();
                while let Some(d) = self.peek(0).filter(|d| d.is_ascii_alphanumeric() || *d == '_') {
                    s.push(d);
                    self.bump();
                }
                self.out.push(Spanned { tok: Tok::Ident(s), line, col });
            } else if let Some(sym) = SYMBOLS.iter().find(|s| s.chars().enumerate().all(|(i, ch)| self.peek(i) == Some(ch))) {
                for _ in 0..sym.len() {
                    self.bump();
                }
                self.out.push(Spanned { tok: Tok::Sym(sym), line, col });
            } else {
                self.bump();
                self.error(line, col, format!("unexpected character `{c}`"));
            }
        }
        self.out.push(Spanned { tok: Tok::Eof, line: self.line, col: self.col });
        (self.out, self.comments, self.errors)
    }

    /// Captures a balanced `{...}` object verbatim.
    fn lex_json(&mut self, line: usize, col: usize) {
        let mut depth = 0usize;
        let mut in_str = false;
        let mut s = String::new();
        while let Some(c) = self.bump() {
            s.push(c);
            if in_str {
                if c == '\\' {
                    if let Some(n) = self.bump() {
                        s.push(n);
                    }
                } else if c == '"' {
                    in_str = false;
                }
                continue;
            }
            match c {
                '"' => in_str = true,
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        self.out.push(Spanned { tok: Tok::Json(s), line, col });
                        return;
                    }
                }
                _ => {}
            }
        }
        self.error(line, col, "unterminated JSON context object".into());
    }
}

const GATE_NAMES: [&str; 14] = ["H", "X", "U", "TOF", "CX", "FAN", "MOD", "MQ", "MQINV", "FQ", "FQINV", "HQ", "HQINV", "PERM"];
const LAYER_KEYWORDS: [&str; 3] = ["layer", "cnotlayer", "cnotlog"];

type PResult<T> = Result<T, ParseError>;

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    base_dir: Option<&'a Path>,
    ctx: Option<ContextRef>,
    errors: Vec<ParseError>,
}

impl Parser<'_> {
    fn cur(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.cur();
        Err(ParseError {
            line: t.line,
            col: t.col,
            message: format!("unexpected {}", t.tok),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn error_at(&self, t: &Spanned, message: String) -> ParseError {
        ParseError { line: t.line, col: t.col, message, expected: Vec::new() }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.cur().tok, Tok::Sym(x) if x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.cur().tok, Tok::Ident(x) if x == s)
    }

    fn sym(&mut self, s: &'static str) -> PResult<()> {
        if self.is_sym(s) {
            self.advance();
            Ok(())
        } else {
            self.fail(&[s])
        }
    }

    fn keyword(&mut self, k: &'static str) -> PResult<()> {
        if self.is_ident(k) {
            self.advance();
            Ok(())
        } else {
            self.fail(&[k])
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match &self.cur().tok {
            Tok::Int(n) => {
                let n = n.clone();
                self.advance();
                Ok(n)
            }
            _ => self.fail(&["integer"]),
        }
    }

    fn small<T: TryFrom<u64>>(&mut self, what: &str) -> PResult<T> {
        let t = self.cur().clone();
        let n = self.int()?;
        n.to_u64().and_then(|v| T::try_from(v).ok()).ok_or_else(|| self.error_at(&t, format!("{what} `{n}` is out of range")))
    }

    fn line_index(&mut self) -> PResult<usize> {
        self.small("line index")
    }

    /// `a,b,c` with at least one entry.
    fn ints(&mut self) -> PResult<Vec<usize>> {
        let mut v = vec![self.line_index()?];
        while self.is_sym(",") {
            self.advance();
            v.push(self.line_index()?);
        }
        Ok(v)
    }

    fn block(&mut self) -> PResult<Vec<usize>> {
        self.sym("(")?;
        let v = self.ints()?;
        self.sym(")")?;
        Ok(v)
    }

    fn blocks(&mut self) -> PResult<Vec<Vec<usize>>> {
        let mut v = vec![self.block()?];
        while self.is_sym(",") {
            self.advance();
            v.push(self.block()?);
        }
        Ok(v)
    }

    fn header(&mut self) -> PResult<(usize, usize)> {
        self.keyword("circuit")?;
        self.keyword("n")?;
        self.sym("=")?;
        let n = self.small("input count")?;
        self.keyword("aux")?;
        self.sym("=")?;
        let aux = self.small("auxiliary count")?;
        if self.is_ident("context") {
            self.advance();
            self.sym("=")?;
            let t = self.advance();
            let ctx: Result<ContextRef, String> = match &t.tok {
                Tok::Ident(name) => AlgebraContext::by_name(name).map_err(|e| e.to_string()),
                Tok::Str(path) => {
                    let p = match self.base_dir {
                        Some(d) if Path::new(path).is_relative() => d.join(path),
                        _ => PathBuf::from(path),
                    };
                    std::fs::read_to_string(&p)
                        .map_err(|e| format!("cannot read context file {}: {e}", p.display()))
                        .and_then(|s| context_from_json(&s).map_err(|e| e.to_string()))
                }
                Tok::Json(text) => serde_json::from_str::<ContextDoc>(text)
                    .map_err(|e| format!("malformed JSON: {e}"))
                    .and_then(|d| context_from_doc(&d).map_err(|e| e.to_string())),
                _ => {
                    self.pos -= 1;
                    return self.fail(&["context name", "quoted path", "JSON object"]);
                }
            };
            self.ctx = Some(ctx.map_err(|m| self.error_at(&t, m))?);
        } else {
            self.ctx = Some(AlgebraContext::cyclotomic(8).expect("cyc8"));
        }
        Ok((n, aux))
    }

    fn ctx(&self) -> &ContextRef {
        self.ctx.as_ref().expect("header parsed first")
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> PResult<ExactScalar> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym("+") {
                self.advance();
                acc = &acc + &self.term()?;
            } else if self.is_sym("-") {
                self.advance();
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    fn term(&mut self) -> PResult<ExactScalar> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym("*") {
                self.advance();
                acc = &acc * &self.unary()?;
            } else if self.is_sym("/") {
                self.advance();
                let t = self.cur().clone();
                let d = self.unary()?;
                acc = self.divide(&acc, &d).map_err(|m| self.error_at(&t, m))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn divide(&self, a: &ExactScalar, d: &ExactScalar) -> Result<ExactScalar, String> {
        let ctx = self.ctx();
        if d.is_zero() {
            return Err("division by zero".into());
        }
        if let Some(r) = d.to_rational() {
            return a.scale_int(r.denom()).div_int(r.numer()).map_err(|e| e.to_string());
        }
        let u = ExactScalar::from_poly(ctx, ctx.u().clone()).map_err(|e| e.to_string())?;
        let mut uk = u.clone();
        for k in 1..=64u32 {
            if &uk == d {
                return Ok(a * &ExactScalar::u_inverse(ctx).pow(k));
            }
            uk = &uk * &u;
        }
        Err(format!("cannot divide by `{d}`; only integers and powers of u are invertible"))
    }

    fn unary(&mut self) -> PResult<ExactScalar> {
        if self.is_sym("-") {
            self.advance();
            return Ok(-self.unary()?);
        }
        let base = self.atom()?;
        if self.is_sym("^") {
            self.advance();
            let k: u32 = self.small("exponent")?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<ExactScalar> {
        let t = self.cur().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.advance();
                Ok(ExactScalar::from_int(self.ctx(), n.clone()))
            }
            Tok::Ident(name) => {
                self.advance();
                ExactScalar::symbol(self.ctx(), name)
                    .ok_or_else(|| self.error_at(&t, format!("context `{}` has no symbol `{name}`", self.ctx().name())))
            }
            Tok::Sym("(") => {
                self.advance();
                let v = self.expr()?;
                self.sym(")")?;
                Ok(v)
            }
            _ => self.fail(&["integer", "symbol", "("]),
        }
    }

    fn matrix(&mut self) -> PResult<[[ExactScalar; 2]; 2]> {
        self.sym("[")?;
        let r0 = self.row()?;
        self.sym(",")?;
        let r1 = self.row()?;
        self.sym("]")?;
        Ok([r0, r1])
    }

    fn row(&mut self) -> PResult<[ExactScalar; 2]> {
        self.sym("[")?;
        let a = self.expr()?;
        self.sym(",")?;
        let b = self.expr()?;
        self.sym("]")?;
        Ok([a, b])
    }

    fn single_line(&mut self) -> PResult<usize> {
        self.sym("[")?;
        let l = self.line_index()?;
        self.sym("]")?;
        Ok(l)
    }

    fn gate(&mut self) -> PResult<Gate> {
        let t = self.cur().clone();
        let Tok::Ident(name) = &t.tok else { return self.fail(&GATE_NAMES) };
        if !GATE_NAMES.contains(&name.as_str()) {
            return self.fail(&GATE_NAMES);
        }
        self.advance();
        let ctx = self.ctx().clone();
        Ok(match name.as_str() {
            "H" => {
                let line = self.single_line()?;
                Gate::h(&ctx, line).map_err(|e| self.error_at(&t, e.to_string()))?
            }
            "X" => Gate::x(&ctx, self.single_line()?),
            "U" => {
                let m = self.matrix()?;
                Gate::one_qubit(m, self.single_line()?)
            }
            "TOF" => {
                self.sym("[")?;
                let controls = self.ints()?;
                self.sym("->")?;
                let target = self.line_index()?;
                self.sym("]")?;
                Gate::Toffoli { controls, target }
            }
            "CX" => {
                self.sym("[")?;
                let control = self.line_index()?;
                self.sym("->")?;
                let target = self.line_index()?;
                self.sym("]")?;
                Gate::CNot { control, target }
            }
            "FAN" => {
                self.sym("[")?;
                let targets = self.ints()?;
                self.sym("<-")?;
                let control = self.line_index()?;
                self.sym("]")?;
                Gate::FanOut { targets, control }
            }
            "MOD" => {
                let q = self.small("modulus")?;
                let r = self.small("residue")?;
                self.sym("[")?;
                let inputs = self.ints()?;
                self.sym("->")?;
                let output = self.line_index()?;
                self.sym("]")?;
                Gate::ModQ { q, r, inputs, output }
            }
            "MQ" | "MQINV" => {
                let q = self.small("modulus")?;
                self.sym("[")?;
                let digits = self.blocks()?;
                self.sym("->")?;
                let result = self.block()?;
                self.sym("]")?;
                Gate::AddModQ { q, digits, result, inverse: name == "MQINV" }
            }
            "FQ" | "FQINV" => {
                let q = self.small("modulus")?;
                self.sym("[")?;
                let targets = self.blocks()?;
                self.sym("<-")?;
                let control = self.block()?;
                self.sym("]")?;
                Gate::FanOutQ { q, targets, control, inverse: name == "FQINV" }
            }
            "HQ" | "HQINV" => {
                let q = self.small("modulus")?;
                self.sym("[")?;
                let block = self.block()?;
                self.sym("]")?;
                Gate::Qft { q, block, inverse: name == "HQINV" }
            }
            _ => {
                self.sym("[")?;
                let lines = self.ints()?;
                self.sym(":")?;
                let mut table = vec![self.small::<u64>("table entry")?];
                while self.is_sym(",") {
                    self.advance();
                    table.push(self.small("table entry")?);
                }
                self.sym("]")?;
                Gate::Permutation { lines, table }
            }
        })
    }

    fn pair(&mut self) -> PResult<(usize, usize)> {
        let c = self.line_index()?;
        self.sym("->")?;
        let t = self.line_index()?;
        Ok((c, t))
    }

    /// Skips to the next `;`, `|` or `}` of the current body.
    fn recover_in_body(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.cur().tok {
                Tok::Eof => return,
                Tok::Sym("[") | Tok::Sym("(") => depth += 1,
                Tok::Sym("]") | Tok::Sym(")") => depth = depth.saturating_sub(1),
                Tok::Sym(";") | Tok::Sym("|") | Tok::Sym("}") if depth == 0 => return,
                Tok::Ident(ref k) if LAYER_KEYWORDS.contains(&k.as_str()) => return,
                _ => {}
            }
            self.advance();
        }
    }

    /// Items of a `{ ... }` body separated by `;`; `|` starts a new group.
    fn body<T>(&mut self, mut item: impl FnMut(&mut Self) -> PResult<T>, groups: bool) -> PResult<Vec<Vec<(T, Spanned)>>> {
        self.sym("{")?;
        let mut out = vec![Vec::new()];
        loop {
            if self.is_sym("}") {
                self.advance();
                return Ok(out);
            }
            if matches!(self.cur().tok, Tok::Eof) || LAYER_KEYWORDS.iter().any(|k| self.is_ident(k)) {
                return self.fail(&["}"]);
            }
            let start = self.cur().clone();
            match item(self) {
                Ok(v) => out.last_mut().expect("group").push((v, start)),
                Err(e) => {
                    self.errors.push(e);
                    self.recover_in_body();
                }
            }
            if self.is_sym(";") {
                self.advance();
            } else if groups && self.is_sym("|") {
                self.advance();
                out.push(Vec::new());
            } else if !self.is_sym("}") {
                let mut exp = vec![";", "}"];
                if groups {
                    exp.insert(1, "|");
                }
                let e = self.fail::<()>(&exp).unwrap_err();
                self.errors.push(e);
                self.recover_in_body();
                if self.is_sym(";") || self.is_sym("|") {
                    self.advance();
                }
            }
        }
    }

    /// The layer plus the positions of the keyword and of each gate.
    fn layer(&mut self) -> PResult<(Layer, Spanned, Vec<Spanned>)> {
        let kw = self.cur().clone();
        if self.is_ident("layer") {
            self.advance();
            let items = self.body(|p| p.gate(), false)?.into_iter().flatten();
            let (gates, spans): (Vec<_>, Vec<_>) = items.unzip();
            Ok((Layer::Tensor(gates), kw, spans))
        } else if self.is_ident("cnotlayer") {
            self.advance();
            let pairs = self.body(|p| p.pair(), false)?.into_iter().flatten().map(|(v, _)| v).collect();
            Ok((Layer::CNotLayer(pairs), kw, Vec::new()))
        } else if self.is_ident("cnotlog") {
            self.advance();
            let subs = self.body(|p| p.pair(), true)?.into_iter().map(|g| g.into_iter().map(|(v, _)| v).collect()).collect();
            Ok((Layer::CNotLayerLogDepth(subs), kw, Vec::new()))
        } else {
            self.fail(&LAYER_KEYWORDS)
        }
    }

    fn recover_top(&mut self) {
        loop {
            match &self.cur().tok {
                Tok::Eof => return,
                Tok::Ident(k) if LAYER_KEYWORDS.contains(&k.as_str()) => return,
                _ => {
                    self.advance();
                }
            }
        }
    }
}

/// Parses and validates a circuit. Relative context paths resolve against
/// `base_dir` when given, else the working directory.
pub fn parse_document(text: &str, base_dir: Option<&Path>) -> Result<DslDocument, DslError> {
    let (toks, comments, mut errors) = Lexer::new(text).run();
    let mut p = Parser { toks, pos: 0, base_dir, ctx: None, errors: Vec::new() };
    let (n, aux) = match p.header() {
        Ok(h) => h,
        Err(e) => {
            errors.push(e);
            return Err(DslError::Syntax(errors));
        }
    };
    let mut c = Circuit::new(n, aux, p.ctx().clone());
    let mut spans = Vec::new();
    while !matches!(p.cur().tok, Tok::Eof) {
        match p.layer() {
            Ok((layer, kw, gates)) => {
                c.push(layer);
                spans.push((kw, gates));
            }
            Err(e) => {
                p.errors.push(e);
                p.advance();
                p.recover_top();
            }
        }
    }
    errors.extend(p.errors);
    if !errors.is_empty() {
        errors.sort_by_key(|e| (e.line, e.col));
        return Err(DslError::Syntax(errors));
    }
    if let Err(diags) = validate(&c) {
        let located = diags
            .into_iter()
            .map(|d| {
                let (kw, gates) = d.layer.and_then(|l| spans.get(l - 1)).map_or((None, None), |(k, g)| (Some(k), Some(g)));
                // Layer-level findings point at the last gate touching a reported line.
                let gate = d.gate.or_else(|| match d.layer.map(|l| &c.layers[l - 1]) {
                    Some(Layer::Tensor(gs)) if !d.lines.is_empty() => {
                        gs.iter().rposition(|g| g.lines().iter().any(|l| d.lines.contains(l))).map(|i| i + 1)
                    }
                    _ => None,
                });
                let at = gate.and_then(|g| gates.and_then(|gs| gs.get(g - 1))).or(kw);
                let (line, col) = at.map_or((1, 1), |s| (s.line, s.col));
                LocatedDiagnostic { line, col, diagnostic: d }
            })
            .collect();
        return Err(DslError::Invalid(located));
    }
    Ok(DslDocument { circuit: c, comments })
}

pub fn parse_circuit(text: &str) -> Result<Circuit, DslError> {
    Ok(parse_document(text, None)?.circuit)
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn block_list(bs: &[Vec<usize>]) -> String {
    bs.iter().map(|b| format!("({})", list(b))).collect::<Vec<_>>().join(",")
}

fn context_text(ctx: &ContextRef) -> String {
    match AlgebraContext::by_name(ctx.name()) {
        Ok(named) if named == *ctx => ctx.name().to_string(),
        _ => serde_json::to_string(&context_to_doc(ctx)).expect("context documents always serialize"),
    }
}

fn gate_text(g: &Gate, ctx: &ContextRef) -> String {
    match g {
        Gate::OneQubit { matrix, line } => {
            if Gate::h(ctx, *line).is_ok_and(|h| &h == g) {
                format!("H[{line}]")
            } else if &Gate::x(ctx, *line) == g {
                format!("X[{line}]")
            } else {
                let [[a, b], [c, d]] = &**matrix;
                format!("U [[{a}, {b}], [{c}, {d}]] [{line}]")
            }
        }
        Gate::Toffoli { controls, target } => format!("TOF[{}->{target}]", list(controls)),
        Gate::CNot { control, target } => format!("CX[{control}->{target}]"),
        Gate::FanOut { targets, control } => format!("FAN[{}<-{control}]", list(targets)),
        Gate::ModQ { q, r, inputs, output } => format!("MOD {q} {r} [{}->{output}]", list(inputs)),
        Gate::AddModQ { q, digits, result, inverse } => {
            format!("{} {q} [{}->({})]", if *inverse { "MQINV" } else { "MQ" }, block_list(digits), list(result))
        }
        Gate::FanOutQ { q, targets, control, inverse } => {
            format!("{} {q} [{}<-({})]", if *inverse { "FQINV" } else { "FQ" }, block_list(targets), list(control))
        }
        Gate::Qft { q, block, inverse } => format!("{} {q} [({})]", if *inverse { "HQINV" } else { "HQ" }, list(block)),
        Gate::Permutation { lines, table } => {
            let t: Vec<String> = table.iter().map(|v| v.to_string()).collect();
            format!("PERM[{} : {}]", list(lines), t.join(","))
        }
    }
}

fn pairs_text(ps: &[(usize, usize)]) -> String {
    ps.iter().map(|(c, t)| format!("{c}->{t}")).collect::<Vec<_>>().join("; ")
}

fn braced(body: String) -> String {
    if body.is_empty() {
        "{ }".into()
    } else {
        format!("{{ {body} }}")
    }
}

/// Canonical text: one layer per line, gates sorted by lowest line.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("circuit n={} aux={} context={}\n", c.n_inputs, c.n_aux, context_text(&c.context));
    for layer in &c.layers {
        let line = match layer.canonical() {
            Layer::Tensor(gates) => {
                let g: Vec<String> = gates.iter().map(|g| gate_text(g, &c.context)).collect();
                format!("layer {}", braced(g.join("; ")))
            }
            Layer::CNotLayer(ps) => format!("cnotlayer {}", braced(pairs_text(&ps))),
            Layer::CNotLayerLogDepth(subs) => {
                let s: Vec<String> = subs.iter().map(|p| pairs_text(p)).collect();
                format!("cnotlog {}", braced(s.join(" | ")))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn serialize_document(doc: &DslDocument) -> String {
    let mut out: String = doc.comments.iter().map(|c| format!("# {c}\n")).collect();
    out.push_str(&serialize_circuit(&doc.circuit));
    out
}

/// Parses a bitstring of `0`/`1` characters, most significant line first.
pub fn parse_bits(s: &str, width: usize) -> Result<u64, String> {
    if s.len() != width || !s.chars().all(|c| c == '0' || c == '1') {
        return Err(format!("expected {width} bits of 0/1, got `{s}`"));
    }
    if width == 0 {
        return Ok(0);
    }
    let v = BigInt::parse_bytes(s.as_bytes(), 2).unwrap_or_else(BigInt::zero);
    v.to_u64().filter(|_| !v.is_negative()).ok_or_else(|| format!("`{s}` does not fit in 64 bits"))
}
