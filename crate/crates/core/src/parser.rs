//! Concrete syntax: lexer, parsers for types, terms, judgments, formulas
//! and Hilbert proof scripts, plus the pretty-printers that invert them.
//!
//! Grammar (ASCII only, `#` starts a line comment):
//!
//! ```text
//! Type     ::= ident | "(" Type ")" | "[]" Type | Type "*" Type | Type "->" Type
//! Term     ::= ident["'"] | "\" binder ":" Type "." Term | Term Term
//!            | "<" Term "," Term ">" | "fst" Term | "snd" Term | "box" Term
//!            | "let" "box" binder "=" Term "in" Term
//!            | "fix" binder ":" Type "." Term | "(" Term ")"
//! Judgment ::= Bindings ";" Bindings "|-" Term [":" Type]
//! Bindings ::= e | binder ":" Type ("," binder ":" Type)*
//! Formula  ::= ident | "bot" | "(" Formula ")" | "[]" Formula
//!            | Formula "&" Formula | Formula "|" Formula | Formula "->" Formula
//! ```
//!
//! Precedence: `[]` binds tightest, then `*` (left), then `->` (right);
//! for formulas `[]` then `&` then `|` then `->`. Application is left
//! associative; `fst`/`snd`/`box` take the tightest argument.

use std::fmt;

use crate::hilbert::{Formula, HilbertProof, SchemaId};
use crate::syntax::{Context, DualContext, ProjIndex, Term, TypeExpr, VarName};

/// Parse failure with location and the token set that would have been
/// accepted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub found: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at {}:{}: found {}, expected {}",
            self.line,
            self.col,
            self.found,
            self.expected.join(" or ")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String, bool),
    Nat(usize),
    Lambda,
    Dot,
    Colon,
    Comma,
    Semi,
    Turnstile,
    Equals,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Star,
    Arrow,
    BoxTy,
    Amp,
    Pipe,
    KwLet,
    KwBox,
    KwIn,
    KwFst,
    KwSnd,
    KwFix,
    KwBot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s, primed) => {
                if *primed {
                    format!("identifier `{}'`", s)
                } else {
                    format!("identifier `{}`", s)
                }
            }
            Tok::Nat(n) => format!("number `{}`", n),
            Tok::Lambda => "`\\`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::Equals => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Star => "`*`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::BoxTy => "`[]`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::KwLet => "`let`".into(),
            Tok::KwBox => "`box`".into(),
            Tok::KwIn => "`in`".into(),
            Tok::KwFst => "`fst`".into(),
            Tok::KwSnd => "`snd`".into(),
            Tok::KwFix => "`fix`".into(),
            Tok::KwBot => "`bot`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: u32,
    col: u32,
}

fn lex(text: &str, start_line: u32) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut line = start_line;
    let mut col = 1u32;
    let mut chars = text.chars().peekable();
    let err = |line: u32, col: u32, found: String| ParseError {
        line,
        col,
        found,
        expected: vec!["a token".into()],
    };
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '\\' => {
                chars.next();
                col += 1;
                out.push((Tok::Lambda, pos));
            }
            '.' => {
                chars.next();
                col += 1;
                out.push((Tok::Dot, pos));
            }
            ':' => {
                chars.next();
                col += 1;
                out.push((Tok::Colon, pos));
            }
            ',' => {
                chars.next();
                col += 1;
                out.push((Tok::Comma, pos));
            }
            ';' => {
                chars.next();
                col += 1;
                out.push((Tok::Semi, pos));
            }
            '=' => {
                chars.next();
                col += 1;
                out.push((Tok::Equals, pos));
            }
            '(' => {
                chars.next();
                col += 1;
                out.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                col += 1;
                out.push((Tok::RParen, pos));
            }
            '<' => {
                chars.next();
                col += 1;
                out.push((Tok::LAngle, pos));
            }
            '>' => {
                chars.next();
                col += 1;
                out.push((Tok::RAngle, pos));
            }
            '*' => {
                chars.next();
                col += 1;
                out.push((Tok::Star, pos));
            }
            '&' => {
                chars.next();
                col += 1;
                out.push((Tok::Amp, pos));
            }
            '|' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Turnstile, pos));
                } else {
                    out.push((Tok::Pipe, pos));
                }
            }
            '-' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&'>') {
                    chars.next();
                    col += 1;
                    out.push((Tok::Arrow, pos));
                } else {
                    return Err(err(pos.line, pos.col, "`-`".into()));
                }
            }
            '[' => {
                chars.next();
                col += 1;
                if chars.peek() == Some(&']') {
                    chars.next();
                    col += 1;
                    out.push((Tok::BoxTy, pos));
                } else {
                    return Err(err(pos.line, pos.col, "`[`".into()));
                }
            }
            c if c.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        n.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let v: usize = n
                    .parse()
                    .map_err(|_| err(pos.line, pos.col, format!("`{}`", n)))?;
                out.push((Tok::Nat(v), pos));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let mut primed = false;
                if chars.peek() == Some(&'\'') {
                    chars.next();
                    col += 1;
                    primed = true;
                    if chars.peek() == Some(&'\'') {
                        return Err(err(line, col, "`''` (double prime)".into()));
                    }
                }
                let tok = match (s.as_str(), primed) {
                    ("let", false) => Tok::KwLet,
                    ("box", false) => Tok::KwBox,
                    ("in", false) => Tok::KwIn,
                    ("fst", false) => Tok::KwFst,
                    ("snd", false) => Tok::KwSnd,
                    ("fix", false) => Tok::KwFix,
                    ("bot", false) => Tok::KwBot,
                    _ => Tok::Ident(s, primed),
                };
                out.push((tok, pos));
            }
            other => return Err(err(pos.line, pos.col, format!("`{}`", other))),
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct P {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl P {
    fn new(text: &str, start_line: u32) -> Result<P, ParseError> {
        Ok(P { toks: lex(text, start_line)?, at: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let p = self.pos();
        Err(ParseError {
            line: p.line,
            col: p.col,
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == &t {
            self.bump();
            Ok(())
        } else {
            self.fail(&[what])
        }
    }

    fn done(&self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            self.fail(&["end of input"])
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let left = self.ty_prod()?;
        if self.peek() == &Tok::Arrow {
            self.bump();
            let right = self.ty()?;
            Ok(TypeExpr::arrow(left, right))
        } else {
            Ok(left)
        }
    }

    fn ty_prod(&mut self) -> Result<TypeExpr, ParseError> {
        let mut acc = self.ty_atom()?;
        while self.peek() == &Tok::Star {
            self.bump();
            let rhs = self.ty_atom()?;
            acc = TypeExpr::prod(acc, rhs);
        }
        Ok(acc)
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name, false) => {
                self.bump();
                Ok(TypeExpr::Atom(name))
            }
            Tok::BoxTy => {
                self.bump();
                Ok(TypeExpr::boxed(self.ty_atom()?))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.fail(&["a type atom", "`[]`", "`(`"]),
        }
    }

    // ---- terms ----

    fn binder(&mut self) -> Result<VarName, ParseError> {
        match self.peek().clone() {
            Tok::Ident(base, primed) => {
                self.bump();
                Ok(VarName { base, primed })
            }
            _ => self.fail(&["a variable"]),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(Term::lam(x, ty, body))
            }
            Tok::KwLet => {
                self.bump();
                self.expect(Tok::KwBox, "`box`")?;
                let u = self.binder()?;
                self.expect(Tok::Equals, "`=`")?;
                let bound = self.term()?;
                self.expect(Tok::KwIn, "`in`")?;
                let body = self.term()?;
                Ok(Term::letbox(u, bound, body))
            }
            Tok::KwFix => {
                let pos = self.pos();
                self.bump();
                let z = self.binder()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                if !matches!(ty, TypeExpr::Box(_)) {
                    return Err(ParseError {
                        line: pos.line,
                        col: pos.col,
                        found: format!("`fix` annotation `{}`", ty),
                        expected: vec!["a boxed type `[]A`".into()],
                    });
                }
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(Term::fixbox(z, ty, body))
            }
            _ => self.app_chain(),
        }
    }

    fn app_chain(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.prefix_term()?;
        while matches!(self.peek(), Tok::Ident(_, _) | Tok::LParen | Tok::LAngle) {
            let arg = self.atom_term()?;
            acc = Term::app(acc, arg);
        }
        Ok(acc)
    }

    fn prefix_term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::KwFst => {
                self.bump();
                Ok(Term::proj(ProjIndex::Fst, self.prefix_term()?))
            }
            Tok::KwSnd => {
                self.bump();
                Ok(Term::proj(ProjIndex::Snd, self.prefix_term()?))
            }
            Tok::KwBox => {
                self.bump();
                Ok(Term::boxi(self.prefix_term()?))
            }
            _ => self.atom_term(),
        }
    }

    fn atom_term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(base, primed) => {
                self.bump();
                Ok(Term::Var(VarName { base, primed }))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.term()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Term::pair(a, b))
            }
            _ => self.fail(&["a term"]),
        }
    }

    // ---- judgments ----

    fn bindings(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        if !matches!(self.peek(), Tok::Ident(_, _)) {
            return Ok(ctx);
        }
        loop {
            let v = self.binder()?;
            self.expect(Tok::Colon, "`:`")?;
            let ty = self.ty()?;
            ctx.push(v, ty);
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(ctx)
    }

    fn dual_context(&mut self) -> Result<DualContext, ParseError> {
        let pos = self.pos();
        let modal = self.bindings()?;
        self.expect(Tok::Semi, "`;`")?;
        let intuit = self.bindings()?;
        let ctx = DualContext::new(modal, intuit);
        if !ctx.modal.no_duplicates() || !ctx.intuit.no_duplicates() {
            return Err(ParseError {
                line: pos.line,
                col: pos.col,
                found: "duplicate variable in a context".into(),
                expected: vec!["distinct context variables".into()],
            });
        }
        if ctx.modal.vars().intersection(&ctx.intuit.vars()).next().is_some() {
            return Err(ParseError {
                line: pos.line,
                col: pos.col,
                found: "variable bound in both zones".into(),
                expected: vec!["disjoint modal and intuitionistic zones".into()],
            });
        }
        Ok(ctx)
    }

    fn judgment(&mut self) -> Result<SourceJudgment, ParseError> {
        let ctx = self.dual_context()?;
        self.expect(Tok::Turnstile, "`|-`")?;
        let term = self.term()?;
        let ascription = if self.peek() == &Tok::Colon {
            self.bump();
            Some(self.ty()?)
        } else {
            None
        };
        Ok(SourceJudgment { ctx, term, ascription })
    }

    fn eq_judgment(&mut self) -> Result<EqJudgment, ParseError> {
        let ctx = self.dual_context()?;
        self.expect(Tok::Turnstile, "`|-`")?;
        let left = self.term()?;
        self.expect(Tok::Equals, "`=`")?;
        let right = self.term()?;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        Ok(EqJudgment { ctx, left, right, ty })
    }

    // ---- formulas ----

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.formula_or()?;
        if self.peek() == &Tok::Arrow {
            self.bump();
            let right = self.formula()?;
            Ok(Formula::implies(left, right))
        } else {
            Ok(left)
        }
    }

    fn formula_or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_and()?;
        while self.peek() == &Tok::Pipe {
            self.bump();
            let rhs = self.formula_and()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.formula_atom()?;
        while self.peek() == &Tok::Amp {
            self.bump();
            let rhs = self.formula_atom()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name, false) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Tok::KwBot => {
                self.bump();
                Ok(Formula::Falsity)
            }
            Tok::BoxTy => {
                self.bump();
                Ok(Formula::boxed(self.formula_atom()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.fail(&["a formula", "`bot`", "`[]`", "`(`"]),
        }
    }

    // ---- proof s-expressions ----

    fn proof_sexpr(&mut self) -> Result<HilbertProof, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let head = match self.peek().clone() {
            Tok::Ident(s, false) => {
                self.bump();
                s
            }
            _ => return self.fail(&["`assn`", "`ax`", "`mp`", "`nec`"]),
        };
        let node = match head.as_str() {
            "assn" => match self.peek().clone() {
                Tok::Nat(i) => {
                    self.bump();
                    HilbertProof::Assn(i)
                }
                _ => return self.fail(&["an assumption index"]),
            },
            "ax" => {
                let name = match self.peek().clone() {
                    Tok::Ident(s, false) => {
                        self.bump();
                        s
                    }
                    Tok::Nat(4) => {
                        self.bump();
                        "4".to_string()
                    }
                    Tok::KwFst => {
                        self.bump();
                        "fst".to_string()
                    }
                    Tok::KwSnd => {
                        self.bump();
                        "snd".to_string()
                    }
                    _ => return self.fail(&["an axiom schema name"]),
                };
                let schema = match SchemaId::from_name(&name) {
                    Some(s) => s,
                    None => {
                        let p = self.pos();
                        return Err(ParseError {
                            line: p.line,
                            col: p.col,
                            found: format!("`{}`", name),
                            expected: vec!["a known axiom schema name".into()],
                        });
                    }
                };
                let mut args = Vec::new();
                while self.peek() != &Tok::RParen {
                    args.push(self.formula()?);
                }
                HilbertProof::Ax(schema, args)
            }
            "mp" => {
                let major = self.proof_sexpr()?;
                let minor = self.proof_sexpr()?;
                HilbertProof::mp(major, minor)
            }
            "nec" => HilbertProof::nec(self.proof_sexpr()?),
            _ => return self.fail(&["`assn`", "`ax`", "`mp`", "`nec`"]),
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(node)
    }
}

/// A parsed judgment `Δ ; Γ |- M [: A]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceJudgment {
    pub ctx: DualContext,
    pub term: Term,
    pub ascription: Option<TypeExpr>,
}

/// A parsed equation `Δ ; Γ |- M = N : A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqJudgment {
    pub ctx: DualContext,
    pub left: Term,
    pub right: Term,
    pub ty: TypeExpr,
}

/// A parsed Hilbert proof script: assumption list, goal, proof tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofScript {
    pub assumptions: Vec<Formula>,
    pub goal: Formula,
    pub proof: HilbertProof,
}

pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = P::new(text, 1)?;
    let t = p.ty()?;
    p.done()?;
    Ok(t)
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = P::new(text, 1)?;
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

pub fn parse_judgment(text: &str) -> Result<SourceJudgment, ParseError> {
    parse_judgment_at(text, 1)
}

fn parse_judgment_at(text: &str, line: u32) -> Result<SourceJudgment, ParseError> {
    let mut p = P::new(text, line)?;
    let j = p.judgment()?;
    p.done()?;
    Ok(j)
}

pub fn parse_eq_judgment(text: &str) -> Result<EqJudgment, ParseError> {
    let mut p = P::new(text, 1)?;
    let j = p.eq_judgment()?;
    p.done()?;
    Ok(j)
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    parse_formula_at(text, 1)
}

fn parse_formula_at(text: &str, line: u32) -> Result<Formula, ParseError> {
    let mut p = P::new(text, line)?;
    let f = p.formula()?;
    p.done()?;
    Ok(f)
}

/// Splits a source file into judgment chunks separated by blank lines and
/// parses each; comment-only lines count as blank separators.
pub fn parse_judgments(text: &str) -> Result<Vec<SourceJudgment>, ParseError> {
    let mut out = Vec::new();
    for (chunk, line) in blank_separated_chunks(text) {
        out.push(parse_judgment_at(&chunk, line)?);
    }
    Ok(out)
}

fn blank_separated_chunks(text: &str) -> Vec<(String, u32)> {
    let mut chunks = Vec::new();
    let mut current = String::new();
    let mut start = 0u32;
    for (i, raw) in text.lines().enumerate() {
        let stripped = raw.split('#').next().unwrap_or("");
        if stripped.trim().is_empty() {
            if !current.trim().is_empty() {
                chunks.push((current.clone(), start));
            }
            current.clear();
        } else {
            if current.trim().is_empty() {
                current.clear();
                start = i as u32 + 1;
            }
            current.push_str(raw);
            current.push('\n');
        }
    }
    if !current.trim().is_empty() {
        chunks.push((current, start));
    }
    chunks
}

/// Parses a Hilbert proof script:
///
/// ```text
/// assume <formula>      # zero or more, in order; (assn 0) is the first
/// goal <formula>
/// proof <s-expression>  # (assn i) | (ax NAME F...) | (mp P P) | (nec P)
/// ```
pub fn parse_proof_script(text: &str) -> Result<ProofScript, ParseError> {
    let mut assumptions = Vec::new();
    let mut goal = None;
    let mut lines = text.lines().enumerate().peekable();
    while let Some((i, raw)) = lines.next() {
        let lineno = i as u32 + 1;
        let stripped = raw.split('#').next().unwrap_or("").trim();
        if stripped.is_empty() {
            continue;
        }
        if let Some(rest) = stripped.strip_prefix("assume") {
            assumptions.push(parse_formula_at(rest, lineno)?);
        } else if let Some(rest) = stripped.strip_prefix("goal") {
            if goal.is_some() {
                return Err(ParseError {
                    line: lineno,
                    col: 1,
                    found: "second `goal` line".into(),
                    expected: vec!["a single goal".into()],
                });
            }
            goal = Some(parse_formula_at(rest, lineno)?);
        } else if let Some(rest) = stripped.strip_prefix("proof") {
            let mut body = rest.to_string();
            for (_, cont) in lines.by_ref() {
                body.push('\n');
                body.push_str(cont);
            }
            let goal = goal.ok_or(ParseError {
                line: lineno,
                col: 1,
                found: "`proof` before `goal`".into(),
                expected: vec!["a `goal` line".into()],
            })?;
            let mut p = P::new(&body, lineno)?;
            let proof = p.proof_sexpr()?;
            p.done()?;
            return Ok(ProofScript { assumptions, goal, proof });
        } else {
            return Err(ParseError {
                line: lineno,
                col: 1,
                found: format!("`{}`", stripped.split_whitespace().next().unwrap_or("")),
                expected: vec!["`assume`".into(), "`goal`".into(), "`proof`".into()],
            });
        }
    }
    Err(ParseError {
        line: text.lines().count() as u32,
        col: 1,
        found: "end of input".into(),
        expected: vec!["a `proof` line".into()],
    })
}

// ---- printers ----

fn fmt_type(t: &TypeExpr, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        TypeExpr::Arrow(_, _) => 0,
        TypeExpr::Prod(_, _) => 1,
        TypeExpr::Box(_) => 2,
        TypeExpr::Atom(_) => 3,
    };
    let parens = level < min;
    if parens {
        write!(f, "(")?;
    }
    match t {
        TypeExpr::Atom(s) => write!(f, "{}", s)?,
        TypeExpr::Box(a) => {
            write!(f, "[]")?;
            fmt_type(a, 2, f)?;
        }
        TypeExpr::Prod(a, b) => {
            fmt_type(a, 1, f)?;
            write!(f, " * ")?;
            fmt_type(b, 2, f)?;
        }
        TypeExpr::Arrow(a, b) => {
            fmt_type(a, 1, f)?;
            write!(f, " -> ")?;
            fmt_type(b, 0, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_type(self, 0, f)
    }
}

fn fmt_term(t: &Term, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        Term::Lam(_, _, _) | Term::LetBox(_, _, _) | Term::FixBox(_, _, _) => 0,
        Term::App(_, _) => 1,
        Term::Proj(_, _) | Term::BoxI(_) => 2,
        Term::Var(_) | Term::Pair(_, _) => 3,
    };
    let parens = level < min;
    if parens {
        write!(f, "(")?;
    }
    match t {
        Term::Var(v) => write!(f, "{}", v)?,
        Term::Lam(x, ty, body) => {
            write!(f, "\\{}:{}. ", x, ty)?;
            fmt_term(body, 0, f)?;
        }
        Term::App(g, a) => {
            fmt_term(g, 1, f)?;
            write!(f, " ")?;
            fmt_term(a, 3, f)?;
        }
        Term::Pair(a, b) => {
            write!(f, "<")?;
            fmt_term(a, 0, f)?;
            write!(f, ", ")?;
            fmt_term(b, 0, f)?;
            write!(f, ">")?;
        }
        Term::Proj(ProjIndex::Fst, m) => {
            write!(f, "fst ")?;
            fmt_term(m, 2, f)?;
        }
        Term::Proj(ProjIndex::Snd, m) => {
            write!(f, "snd ")?;
            fmt_term(m, 2, f)?;
        }
        Term::BoxI(m) => {
            write!(f, "box ")?;
            fmt_term(m, 2, f)?;
        }
        Term::LetBox(u, m, n) => {
            write!(f, "let box {} = ", u)?;
            fmt_term(m, 0, f)?;
            write!(f, " in ")?;
            fmt_term(n, 0, f)?;
        }
        Term::FixBox(z, ty, body) => {
            write!(f, "fix {}:{}. ", z, ty)?;
            fmt_term(body, 0, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

pub fn print_type(t: &TypeExpr) -> String {
    t.to_string()
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, ty)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", v, ty)?;
        }
        Ok(())
    }
}

impl fmt::Display for DualContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.modal, self.intuit)
    }
}

impl fmt::Display for SourceJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.ctx, self.term)?;
        if let Some(ty) = &self.ascription {
            write!(f, " : {}", ty)?;
        }
        Ok(())
    }
}

fn fmt_formula(t: &Formula, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let level = match t {
        Formula::Implies(_, _) => 0,
        Formula::Or(_, _) => 1,
        Formula::And(_, _) => 2,
        Formula::Box(_) => 3,
        Formula::Atom(_) | Formula::Falsity => 4,
    };
    let parens = level < min;
    if parens {
        write!(f, "(")?;
    }
    match t {
        Formula::Atom(s) => write!(f, "{}", s)?,
        Formula::Falsity => write!(f, "bot")?,
        Formula::Box(a) => {
            write!(f, "[]")?;
            fmt_formula(a, 3, f)?;
        }
        Formula::And(a, b) => {
            fmt_formula(a, 2, f)?;
            write!(f, " & ")?;
            fmt_formula(b, 3, f)?;
        }
        Formula::Or(a, b) => {
            fmt_formula(a, 1, f)?;
            write!(f, " | ")?;
            fmt_formula(b, 2, f)?;
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, 1, f)?;
            write!(f, " -> ")?;
            fmt_formula(b, 0, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

impl fmt::Display for HilbertProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HilbertProof::Assn(i) => write!(f, "(assn {})", i),
            HilbertProof::Ax(schema, args) => {
                write!(f, "(ax {}", schema.name())?;
                for a in args {
                    write!(f, " ({})", a)?;
                }
                write!(f, ")")
            }
            HilbertProof::Mp(major, minor) => write!(f, "(mp {} {})", major, minor),
            HilbertProof::Nec(sub) => write!(f, "(nec {})", sub),
        }
    }
}

/// Renders a full proof script in the format `parse_proof_script` accepts.
pub fn print_proof_script(script: &ProofScript) -> String {
    let mut out = String::new();
    for a in &script.assumptions {
        out.push_str(&format!("assume {}\n", a));
    }
    out.push_str(&format!("goal {}\n", script.goal));
    out.push_str(&format!("proof {}\n", script.proof));
    out
}
