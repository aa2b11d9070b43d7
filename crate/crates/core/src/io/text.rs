//! The line-oriented QBF text format.
//!
//! ```text
//! document   := { newline } { prefix_line } expr { newline }
//! prefix_line:= ("forall" | "exists") ident { ident } (newline | EOF)
//! expr       := xor { "|" xor }
//! xor        := and { "^" and }          (left associative)
//! and        := unary { "&" unary }
//! unary      := "!" unary | "0" | "1" | ident | "(" expr ")"
//! ident      := [A-Za-z_][A-Za-z0-9_]*   (not "forall"/"exists")
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Newlines inside the
//! matrix are plain whitespace.

use std::collections::BTreeMap;

use crate::error::{ParseError, ParseErrorKind};
use crate::formula::{Formula, VarId};
use crate::qbf::{PrenexQbf, Quantifier};

const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Quant(Quantifier),
    Const(bool),
    Not,
    And,
    Or,
    Xor,
    LParen,
    RParen,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::Quant(q) => format!("keyword {:?}", q.keyword()),
            Tok::Const(b) => format!("constant {}", *b as u8),
            Tok::Not => "'!'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Xor => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(input: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut push = |tok| out.push(Spanned { tok, line: l, column: col });
        match c {
            '\n' => {
                chars.next();
                push(Tok::Newline);
                line += 1;
                column = 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|c| *c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '!' => push(Tok::Not),
            '&' => push(Tok::And),
            '|' => push(Tok::Or),
            '^' => push(Tok::Xor),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let width = word.len();
                let tok = match word.as_str() {
                    "forall" => Tok::Quant(Quantifier::Forall),
                    "exists" => Tok::Quant(Quantifier::Exists),
                    "0" => Tok::Const(false),
                    "1" => Tok::Const(true),
                    w if w.starts_with(|c: char| c.is_ascii_digit()) => {
                        return Err(ParseError::syntax(l, col, format!("invalid token {w:?}"))
                            .expecting(&["0", "1", "identifier"]))
                    }
                    _ => Tok::Ident(word),
                };
                push(tok);
                column += width;
                continue;
            }
            other => {
                return Err(ParseError::syntax(l, col, format!("unexpected character {other:?}")))
            }
        }
        chars.next();
        column += 1;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    bound: BTreeMap<String, VarId>,
    depth: usize,
}

impl Parser {
    fn peek_raw(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn skip_newlines(&mut self) {
        while self.toks[self.pos].tok == Tok::Newline {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> &Spanned {
        self.skip_newlines();
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, expected: &[&str]) -> ParseError {
        ParseError::syntax(at.line, at.column, format!("unexpected {}", at.tok.describe()))
            .expecting(expected)
    }

    fn prefix(&mut self) -> Result<(Vec<(Quantifier, VarId)>, Vec<(VarId, String)>), ParseError> {
        let mut prefix = Vec::new();
        let mut names = Vec::new();
        loop {
            self.skip_newlines();
            let Tok::Quant(q) = self.peek_raw().tok else {
                break;
            };
            self.bump();
            let mut count = 0;
            loop {
                let t = self.peek_raw().clone();
                match t.tok {
                    Tok::Ident(name) => {
                        self.bump();
                        if self.bound.contains_key(&name) {
                            return Err(ParseError::new(
                                ParseErrorKind::DuplicateQuantification,
                                t.line,
                                t.column,
                                format!("variable {name:?} is quantified more than once"),
                            ));
                        }
                        let id = VarId::of(prefix.len() as u32 + 1);
                        self.bound.insert(name.clone(), id);
                        prefix.push((q, id));
                        names.push((id, name));
                        count += 1;
                    }
                    Tok::Newline | Tok::Eof if count > 0 => break,
                    _ => return Err(self.error(&t, &["identifier"])),
                }
            }
        }
        Ok((prefix, names))
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let t = self.peek().clone();
            return Err(ParseError::syntax(t.line, t.column, "expression nested too deeply"));
        }
        let mut items = vec![self.xor()?];
        while self.peek().tok == Tok::Or {
            self.bump();
            items.push(self.xor()?);
        }
        self.depth -= 1;
        Ok(Formula::or(items))
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.peek().tok == Tok::Xor {
            self.bump();
            acc = Formula::xor(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while self.peek().tok == Tok::And {
            self.bump();
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Not => {
                self.bump();
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(ParseError::syntax(t.line, t.column, "expression nested too deeply"));
                }
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(Formula::not(inner))
            }
            Tok::Const(b) => {
                self.bump();
                Ok(Formula::Const(b))
            }
            Tok::Ident(ref name) => {
                self.bump();
                match self.bound.get(name) {
                    Some(v) => Ok(Formula::Var(*v)),
                    None => Err(ParseError::new(
                        ParseErrorKind::UnboundVariable,
                        t.line,
                        t.column,
                        format!("variable {name:?} is not quantified"),
                    )),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let close = self.peek().clone();
                if close.tok != Tok::RParen {
                    return Err(self.error(&close, &["')'", "'|'", "'^'", "'&'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(&t, &["'!'", "'('", "0", "1", "identifier"])),
        }
    }
}

/// Parses the text format. Variables are numbered 1..=m in prefix order.
pub fn parse_qbf_text(input: &str) -> Result<PrenexQbf, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
        bound: BTreeMap::new(),
        depth: 0,
    };
    let (prefix, names) = p.prefix()?;
    let matrix = p.expr()?;
    let end = p.peek().clone();
    if end.tok != Tok::Eof {
        return Err(p.error(&end, &["'|'", "'^'", "'&'", "end of input"]));
    }
    let q = PrenexQbf::new(prefix, matrix).expect("parser only binds quantified names");
    Ok(q.with_names(names).expect("parser rejects duplicate names"))
}

/// Byte-level entry point; invalid UTF-8 is reported at its position.
pub fn parse_qbf_bytes(input: &[u8]) -> Result<PrenexQbf, ParseError> {
    match std::str::from_utf8(input) {
        Ok(s) => parse_qbf_text(s),
        Err(e) => {
            let valid = &input[..e.valid_up_to()];
            let line = 1 + valid.iter().filter(|b| **b == b'\n').count();
            let column = 1 + valid.iter().rev().take_while(|b| **b != b'\n').count();
            Err(ParseError::syntax(line, column, "invalid UTF-8"))
        }
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Or(cs) if cs.len() >= 2 => 1,
        Formula::Xor(..) => 2,
        Formula::And(cs) if cs.len() >= 2 => 3,
        Formula::And(cs) | Formula::Or(cs) if cs.len() == 1 => precedence(&cs[0]),
        _ => 4,
    }
}

fn write_formula(f: &Formula, names: &dyn Fn(VarId) -> String, out: &mut String) {
    let child = |c: &Formula, parens: bool, out: &mut String| {
        if parens {
            out.push('(');
            write_formula(c, names, out);
            out.push(')');
        } else {
            write_formula(c, names, out);
        }
    };
    match f {
        Formula::Const(b) => out.push(if *b { '1' } else { '0' }),
        Formula::Var(v) => out.push_str(&names(*v)),
        Formula::Not(g) => {
            out.push('!');
            child(g, precedence(g) < 4, out);
        }
        Formula::And(cs) if cs.is_empty() => out.push('1'),
        Formula::Or(cs) if cs.is_empty() => out.push('0'),
        Formula::And(cs) | Formula::Or(cs) if cs.len() == 1 => write_formula(&cs[0], names, out),
        Formula::And(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                child(c, precedence(c) <= 3, out);
            }
        }
        Formula::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                child(c, precedence(c) <= 1, out);
            }
        }
        Formula::Xor(a, b) => {
            child(a, precedence(a) < 2, out);
            out.push_str(" ^ ");
            child(b, precedence(b) <= 2, out);
        }
    }
}

/// Renders a matrix using `x<id>` names.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &|v| crate::qbf::default_name(v), &mut out);
    out
}

/// Renders `q` in the text format, one line per quantifier block.
pub fn print_qbf(q: &PrenexQbf) -> String {
    let mut out = String::new();
    let mut blocks: Vec<(Quantifier, Vec<VarId>)> = Vec::new();
    for (k, v) in q.prefix() {
        match blocks.last_mut() {
            Some((last, vars)) if last == k => vars.push(*v),
            _ => blocks.push((*k, vec![*v])),
        }
    }
    for (k, vars) in blocks {
        out.push_str(k.keyword());
        for v in vars {
            out.push(' ');
            out.push_str(&q.name(v));
        }
        out.push('\n');
    }
    write_formula(q.matrix(), &|v| q.name(v).into_owned(), &mut out);
    out.push('\n');
    out
}
