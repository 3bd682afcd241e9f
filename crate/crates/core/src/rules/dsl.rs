//! Text format for grade rules.
//!
//! ```text
//! ruleset  := header? rule* ;
//! header   := "dsl-version" ":" INTEGER ;
//! rule     := "when" clause ("and" clause)* "then" IDENT ";" ;
//! clause   := IDENT CMP levelref ;
//! CMP      := "==" | "!=" | "<=" | ">=" | "<" | ">" ;
//! levelref := INTEGER | STRING ;
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Identifiers may
//! contain `-` after the first character so grade names like `light-green`
//! need no quoting.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::LevelRef;

pub const DSL_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub fn holds(self, level: usize, reference: usize) -> bool {
        match self {
            Comparator::Eq => level == reference,
            Comparator::Ne => level != reference,
            Comparator::Lt => level < reference,
            Comparator::Le => level <= reference,
            Comparator::Gt => level > reference,
            Comparator::Ge => level >= reference,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "==",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "==" => Comparator::Eq,
            "!=" => Comparator::Ne,
            "<" => Comparator::Lt,
            "<=" => Comparator::Le,
            ">" => Comparator::Gt,
            ">=" => Comparator::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// 1-based line and column of a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub axis: String,
    pub cmp: Comparator,
    pub level: LevelRef,
}

/// One parsed rule. Names are not yet checked against a model.
///
/// Equality ignores `span`, so a rule re-parsed from its printed form compares
/// equal to the original.
#[derive(Debug, Clone, Eq)]
pub struct Rule {
    pub clauses: Vec<Clause>,
    pub grade: String,
    pub span: Span,
}

impl PartialEq for Rule {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses && self.grade == other.grade
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("when ")?;
        for (k, c) in self.clauses.iter().enumerate() {
            if k > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{} {} ", c.axis, c.cmp)?;
            match &c.level {
                LevelRef::Index(i) => write!(f, "{i}")?,
                LevelRef::Label(s) => write_string_literal(f, s)?,
            }
        }
        write!(f, " then {};", self.grade)
    }
}

fn write_string_literal(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_str("\"")?;
    for ch in s.chars() {
        match ch {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            c => write!(f, "{c}")?,
        }
    }
    f.write_str("\"")
}

/// Prints rules one per line, re-parseable by [`parse_rules`].
pub fn print_rules(rules: &[Rule]) -> String {
    let mut out = String::new();
    for r in rules {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(usize),
    Str(String),
    Cmp(Comparator),
    Semi,
    Colon,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Cmp(c) => write!(f, "`{c}`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Colon => f.write_str("`:`"),
        }
    }
}

fn syntax(span: Span, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: span.line,
        column: span.column,
        message: message.into(),
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            column: self.column,
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, Span)>> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let span = self.span();
            match c {
                c if c.is_whitespace() => {
                    self.bump();
                }
                '#' => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                ';' => {
                    self.bump();
                    out.push((Tok::Semi, span));
                }
                ':' => {
                    self.bump();
                    out.push((Tok::Colon, span));
                }
                '=' | '!' | '<' | '>' => {
                    self.bump();
                    let two = self.chars.peek() == Some(&'=');
                    let sym = match (c, two) {
                        ('=', true) => "==",
                        ('!', true) => "!=",
                        ('<', true) => "<=",
                        ('>', true) => ">=",
                        ('<', false) => "<",
                        ('>', false) => ">",
                        _ => return Err(syntax(span, format!("unexpected character `{c}`"))),
                    };
                    if two {
                        self.bump();
                    }
                    out.push((Tok::Cmp(Comparator::from_symbol(sym).unwrap()), span));
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            None => return Err(syntax(span, "unterminated string literal")),
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                Some(other) => {
                                    return Err(syntax(span, format!("unknown escape `\\{other}`")))
                                }
                                None => return Err(syntax(span, "unterminated string literal")),
                            },
                            Some(ch) => s.push(ch),
                        }
                    }
                    out.push((Tok::Str(s), span));
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if !d.is_ascii_digit() {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    let n = s
                        .parse::<usize>()
                        .map_err(|_| syntax(span, format!("integer `{s}` is too large")))?;
                    out.push((Tok::Int(n), span));
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&d) = self.chars.peek() {
                        if !(d.is_alphanumeric() || d == '_' || d == '-') {
                            break;
                        }
                        s.push(d);
                        self.bump();
                    }
                    out.push((Tok::Ident(s), span));
                }
                other => return Err(syntax(span, format!("unexpected character `{other}`"))),
            }
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    end: Span,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn span(&self) -> Span {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| *s)
    }

    fn next(&mut self, expected: &str) -> Result<(Tok, Span)> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.clone())
            }
            None => Err(syntax(self.end, format!("expected {expected}, found end of input"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Span> {
        match self.next(&format!("`{kw}`"))? {
            (Tok::Ident(s), span) if s == kw => Ok(span),
            (t, span) => Err(syntax(span, format!("expected `{kw}`, found {t}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.next(what)? {
            (Tok::Ident(s), span) if is_keyword(&s) => {
                Err(syntax(span, format!("expected {what}, found keyword `{s}`")))
            }
            (Tok::Ident(s), _) => Ok(s),
            (t, span) => Err(syntax(span, format!("expected {what}, found {t}"))),
        }
    }

    fn header(&mut self) -> Result<()> {
        if !matches!(self.peek(), Some(Tok::Ident(s)) if s == "dsl-version") {
            return Ok(());
        }
        self.pos += 1;
        match self.next("`:`")? {
            (Tok::Colon, _) => {}
            (t, span) => return Err(syntax(span, format!("expected `:`, found {t}"))),
        }
        match self.next("a version number")? {
            (Tok::Int(v), _) if v as u64 == DSL_VERSION => Ok(()),
            (Tok::Int(v), span) => Err(syntax(span, format!("unsupported dsl-version {v}"))),
            (t, span) => Err(syntax(span, format!("expected a version number, found {t}"))),
        }
    }

    fn clause(&mut self) -> Result<(Clause, Span)> {
        let span = self.span();
        let axis = self.ident("an axis name")?;
        let cmp = match self.next("a comparator")? {
            (Tok::Cmp(c), _) => c,
            (t, span) => return Err(syntax(span, format!("expected a comparator, found {t}"))),
        };
        let level = match self.next("a level (integer or string)")? {
            (Tok::Int(i), _) => LevelRef::Index(i),
            (Tok::Str(s), _) => LevelRef::Label(s),
            (t, span) => {
                return Err(syntax(span, format!("expected a level (integer or string), found {t}")))
            }
        };
        Ok((Clause { axis, cmp, level }, span))
    }

    fn rule(&mut self) -> Result<Rule> {
        let span = self.keyword("when")?;
        let mut clauses: Vec<Clause> = Vec::new();
        loop {
            let (clause, cspan) = self.clause()?;
            if clauses.iter().any(|c| c.axis == clause.axis) {
                return Err(syntax(
                    cspan,
                    format!("axis `{}` appears in more than one clause of this rule", clause.axis),
                ));
            }
            clauses.push(clause);
            match self.peek() {
                Some(Tok::Ident(s)) if s == "and" => self.pos += 1,
                _ => break,
            }
        }
        self.keyword("then")?;
        let grade = self.ident("a grade name")?;
        match self.next("`;`")? {
            (Tok::Semi, _) => {}
            (t, span) => return Err(syntax(span, format!("expected `;`, found {t}"))),
        }
        Ok(Rule { clauses, grade, span })
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "when" | "and" | "then")
}

/// Parses rule text into rules in source order. Axis, level and grade names
/// are checked later, against a concrete model.
pub fn parse_rules(src: &str) -> Result<Vec<Rule>> {
    let lexer = Lexer::new(src);
    let toks = lexer.tokens()?;
    let end = {
        let mut l = Lexer::new(src);
        while l.bump().is_some() {}
        l.span()
    };
    let mut p = Parser { toks, pos: 0, end };
    p.header()?;
    let mut rules = Vec::new();
    while p.peek().is_some() {
        rules.push(p.rule()?);
    }
    Ok(rules)
}
