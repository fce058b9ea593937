//! Session files: lexer, parser and canonical printer.
//!
//! ```text
//! statement  := ring | seq | ideal | map | show
//! ring       := "ring" NAME "=" FIELD "[" vars "]" ["/" "(" polys ")"] ";"
//! seq        := "seq" NAME ["in" RING] "=" "[" polys "]" ";"
//! ideal      := "ideal" NAME ["in" RING] "=" "(" polys ")" ";"
//! map        := "map" NAME ":" RING "->" RING "=" "[" polys "]" ";"
//! show       := "show" COMMAND "(" [arg {"," arg}] ")" ";"
//! FIELD      := "QQ" | "Fp" "(" INT ")"
//! ```
//!
//! Polynomials are read in the most recently declared ring unless `in` names
//! another; command arguments use the ring given as the first argument.
//! `#` starts a comment.

use std::fmt;

use limclose_core::poly::{parse_polynomial, PolyError};
use limclose_core::{MonomialOrder, PolyRing, Polynomial, RingRef};

use crate::commands::{lookup, ArgKind, CommandSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownIdentifier,
    Arity,
    Type,
    Duplicate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug)]
pub struct RingDecl {
    pub name: String,
    pub field: Field,
    pub ring: RingRef,
    pub relations: Vec<Polynomial>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct SeqDecl {
    pub name: String,
    pub ring: String,
    pub entries: Vec<Polynomial>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct IdealDecl {
    pub name: String,
    pub ring: String,
    pub generators: Vec<Polynomial>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub images: Vec<Polynomial>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum Arg {
    Name(String),
    Int(u64),
    Poly(Polynomial),
    /// An inline ideal `(f, g, ...)`.
    Ideal(Vec<Polynomial>),
}

#[derive(Clone, Debug)]
pub struct Command {
    pub name: String,
    pub args: Vec<Arg>,
    pub pos: Pos,
}

impl Command {
    pub fn spec(&self) -> &'static CommandSpec {
        lookup(&self.name).expect("checked while parsing")
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match a {
                Arg::Name(n) => write!(f, "{n}")?,
                Arg::Int(k) => write!(f, "{k}")?,
                Arg::Ideal(gens) => {
                    let parts: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                    write!(f, "({})", parts.join(", "))?
                }
                Arg::Poly(p) => write!(f, "{p}")?,
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug)]
pub enum Statement {
    Ring(RingDecl),
    Seq(SeqDecl),
    Ideal(IdealDecl),
    Map(MapDecl),
    Show(Command),
}

/// A parsed session: declarations and commands in source order, plus the
/// results of the commands run so far.
#[derive(Clone, Debug, Default)]
pub struct Session {
    pub statements: Vec<Statement>,
    pub log: Vec<crate::render::CommandResult>,
}

impl Session {
    pub fn ring(&self, name: &str) -> Option<&RingDecl> {
        self.statements.iter().find_map(|s| match s {
            Statement::Ring(r) if r.name == name => Some(r),
            _ => None,
        })
    }

    pub fn seq(&self, name: &str) -> Option<&SeqDecl> {
        self.statements.iter().find_map(|s| match s {
            Statement::Seq(r) if r.name == name => Some(r),
            _ => None,
        })
    }

    pub fn ideal(&self, name: &str) -> Option<&IdealDecl> {
        self.statements.iter().find_map(|s| match s {
            Statement::Ideal(r) if r.name == name => Some(r),
            _ => None,
        })
    }

    pub fn map(&self, name: &str) -> Option<&MapDecl> {
        self.statements.iter().find_map(|s| match s {
            Statement::Map(r) if r.name == name => Some(r),
            _ => None,
        })
    }

    pub fn commands(&self) -> impl Iterator<Item = &Command> {
        self.statements.iter().filter_map(|s| match s {
            Statement::Show(c) => Some(c),
            _ => None,
        })
    }

    /// Canonical source text; parsing it yields the same session.
    pub fn to_source(&self) -> String {
        let list = |ps: &[Polynomial]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        for s in &self.statements {
            let line = match s {
                Statement::Ring(r) => {
                    let field = match r.field {
                        Field::Rationals => "QQ".to_string(),
                        Field::Prime(p) => format!("Fp({p})"),
                    };
                    let rel = if r.relations.is_empty() { "0".to_string() } else { list(&r.relations) };
                    format!("ring {} = {}[{}] / ({});", r.name, field, r.ring.names().join(", "), rel)
                }
                Statement::Seq(d) => format!("seq {} in {} = [{}];", d.name, d.ring, list(&d.entries)),
                Statement::Ideal(d) => format!("ideal {} in {} = ({});", d.name, d.ring, list(&d.generators)),
                Statement::Map(d) => format!("map {} : {} -> {} = [{}];", d.name, d.source, d.target, list(&d.images)),
                Statement::Show(c) => format!("show {c};"),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
    pos: Pos,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let (mut i, mut line, mut line_start) = (0usize, 1usize, 0usize);
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = Pos {
            line,
            column: i - line_start + 1,
        };
        if c == '\n' {
            i += 1;
            line += 1;
            line_start = i;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(src[start..i].to_string())
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[start..i].parse().map_err(|_| ParseError {
                kind: ParseErrorKind::Syntax,
                pos,
                message: "integer literal too large".into(),
            })?;
            Tok::Int(v)
        } else if c == '-' && bytes.get(i + 1) == Some(&b'>') {
            i += 2;
            Tok::Arrow
        } else if ";=[](),/:+-*^".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                pos,
                message: format!("unexpected character `{c}`"),
            });
        };
        out.push(Token { tok, start, end: i, pos });
    }
    let pos = Pos {
        line,
        column: bytes.len() - line_start + 1,
    };
    out.push(Token {
        tok: Tok::Eof,
        start: bytes.len(),
        end: bytes.len(),
        pos,
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ring,
    Seq,
    Ideal,
    Map,
}

impl Kind {
    fn noun(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Seq => "sequence",
            Kind::Ideal => "ideal",
            Kind::Map => "map",
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    at: usize,
    order: MonomialOrder,
    /// Bound names with their kind and ring (the source ring for maps).
    names: Vec<(String, Kind, String)>,
    rings: Vec<(String, RingRef)>,
    current_ring: Option<String>,
}

/// Parses a session with rings in grevlex order.
pub fn parse_session(text: &str) -> Result<Session, ParseError> {
    parse_session_with(text, &MonomialOrder::grevlex())
}

/// Parses a session; declared rings use `order`.
pub fn parse_session_with(text: &str, order: &MonomialOrder) -> Result<Session, ParseError> {
    let mut p = Parser {
        src: text,
        toks: lex(text)?,
        at: 0,
        order: order.clone(),
        names: Vec::new(),
        rings: Vec::new(),
        current_ring: None,
    };
    let mut statements = Vec::new();
    while p.peek() != &Tok::Eof {
        statements.push(p.statement()?);
    }
    Ok(Session {
        statements,
        log: Vec::new(),
    })
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].pos
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind, pos: Pos, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            pos,
            message: message.into(),
        }
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(v) => format!("`{v}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == &Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error(
                ParseErrorKind::Syntax,
                self.pos(),
                format!("expected `{c}`, found {}", Self::describe(self.peek())),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok((s, pos))
            }
            other => Err(self.error(
                ParseErrorKind::Syntax,
                pos,
                format!("expected a name, found {}", Self::describe(&other)),
            )),
        }
    }

    fn lookup(&self, name: &str) -> Option<&(String, Kind, String)> {
        self.names.iter().find(|(n, _, _)| n == name)
    }

    fn bind(&mut self, name: String, pos: Pos, kind: Kind, ring: String) -> Result<(), ParseError> {
        if self.lookup(&name).is_some() {
            return Err(self.error(ParseErrorKind::Duplicate, pos, format!("`{name}` is already bound")));
        }
        if lookup(&name).is_some() || ["ring", "seq", "ideal", "map", "show", "in", "QQ", "Fp"].contains(&name.as_str()) {
            return Err(self.error(ParseErrorKind::Syntax, pos, format!("`{name}` is reserved")));
        }
        self.names.push((name, kind, ring));
        Ok(())
    }

    fn ring_named(&self, name: &str, pos: Pos) -> Result<RingRef, ParseError> {
        match self.lookup(name) {
            Some((_, Kind::Ring, _)) => Ok(self.rings.iter().find(|(n, _)| n == name).unwrap().1.clone()),
            Some((_, k, _)) => Err(self.error(ParseErrorKind::Type, pos, format!("`{name}` is a {}, not a ring", k.noun()))),
            None => Err(self.error(ParseErrorKind::UnknownIdentifier, pos, format!("unknown ring `{name}`"))),
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (kw, pos) = self.ident()?;
        let s = match kw.as_str() {
            "ring" => Statement::Ring(self.ring_decl(pos)?),
            "seq" => Statement::Seq(self.seq_decl(pos)?),
            "ideal" => Statement::Ideal(self.ideal_decl(pos)?),
            "map" => Statement::Map(self.map_decl(pos)?),
            "show" => Statement::Show(self.show(pos)?),
            _ => {
                return Err(self.error(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("expected `ring`, `seq`, `ideal`, `map` or `show`, found `{kw}`"),
                ))
            }
        };
        self.expect_sym(';')?;
        Ok(s)
    }

    fn ring_decl(&mut self, pos: Pos) -> Result<RingDecl, ParseError> {
        let (name, npos) = self.ident()?;
        self.expect_sym('=')?;
        let (field_name, fpos) = self.ident()?;
        let field = match field_name.as_str() {
            "QQ" => Field::Rationals,
            "Fp" => {
                self.expect_sym('(')?;
                let ppos = self.pos();
                let p = match self.next().tok {
                    Tok::Int(p) => p,
                    other => {
                        return Err(self.error(
                            ParseErrorKind::Syntax,
                            ppos,
                            format!("expected a prime, found {}", Self::describe(&other)),
                        ))
                    }
                };
                if !is_prime(p) {
                    return Err(self.error(ParseErrorKind::Syntax, ppos, format!("{p} is not prime")));
                }
                self.expect_sym(')')?;
                Field::Prime(p)
            }
            other => {
                return Err(self.error(
                    ParseErrorKind::Syntax,
                    fpos,
                    format!("expected `QQ` or `Fp(p)`, found `{other}`"),
                ))
            }
        };
        self.expect_sym('[')?;
        let mut vars: Vec<String> = Vec::new();
        loop {
            let (v, vpos) = self.ident()?;
            if vars.contains(&v) {
                return Err(self.error(ParseErrorKind::Duplicate, vpos, format!("variable `{v}` repeated")));
            }
            vars.push(v);
            if self.peek() == &Tok::Sym(',') {
                self.next();
                continue;
            }
            self.expect_sym(']')?;
            break;
        }
        let ring = PolyRing::new(&vars, self.order.clone());
        let mut relations = Vec::new();
        if self.peek() == &Tok::Sym('/') {
            self.next();
            self.expect_sym('(')?;
            relations = self.poly_list(')', &ring)?;
            relations.retain(|p| !p.is_zero());
        }
        self.bind(name.clone(), npos, Kind::Ring, name.clone())?;
        self.rings.push((name.clone(), ring.clone()));
        self.current_ring = Some(name.clone());
        Ok(RingDecl {
            name,
            field,
            ring,
            relations,
            pos,
        })
    }

    /// `["in" RING]`, defaulting to the current ring.
    fn ring_clause(&mut self, pos: Pos) -> Result<(String, RingRef), ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "in") {
            self.next();
            let (r, rpos) = self.ident()?;
            let ring = self.ring_named(&r, rpos)?;
            return Ok((r, ring));
        }
        match &self.current_ring {
            Some(r) => {
                let ring = self.ring_named(&r.clone(), pos)?;
                Ok((r.clone(), ring))
            }
            None => Err(self.error(ParseErrorKind::UnknownIdentifier, pos, "no ring declared yet")),
        }
    }

    fn seq_decl(&mut self, pos: Pos) -> Result<SeqDecl, ParseError> {
        let (name, npos) = self.ident()?;
        let (ring_name, ring) = self.ring_clause(npos)?;
        self.expect_sym('=')?;
        self.expect_sym('[')?;
        let entries = self.poly_list(']', &ring)?;
        self.bind(name.clone(), npos, Kind::Seq, ring_name.clone())?;
        Ok(SeqDecl {
            name,
            ring: ring_name,
            entries,
            pos,
        })
    }

    fn ideal_decl(&mut self, pos: Pos) -> Result<IdealDecl, ParseError> {
        let (name, npos) = self.ident()?;
        let (ring_name, ring) = self.ring_clause(npos)?;
        self.expect_sym('=')?;
        self.expect_sym('(')?;
        let mut generators = self.poly_list(')', &ring)?;
        generators.retain(|p| !p.is_zero());
        self.bind(name.clone(), npos, Kind::Ideal, ring_name.clone())?;
        Ok(IdealDecl {
            name,
            ring: ring_name,
            generators,
            pos,
        })
    }

    fn map_decl(&mut self, pos: Pos) -> Result<MapDecl, ParseError> {
        let (name, npos) = self.ident()?;
        self.expect_sym(':')?;
        let (source, spos) = self.ident()?;
        let sring = self.ring_named(&source, spos)?;
        if self.peek() != &Tok::Arrow {
            return Err(self.error(
                ParseErrorKind::Syntax,
                self.pos(),
                format!("expected `->`, found {}", Self::describe(self.peek())),
            ));
        }
        self.next();
        let (target, tpos) = self.ident()?;
        let tring = self.ring_named(&target, tpos)?;
        self.expect_sym('=')?;
        let lpos = self.pos();
        self.expect_sym('[')?;
        let images = self.poly_list(']', &tring)?;
        if images.len() != sring.nvars() {
            return Err(self.error(
                ParseErrorKind::Arity,
                lpos,
                format!("{} images for the {} variables of `{source}`", images.len(), sring.nvars()),
            ));
        }
        self.bind(name.clone(), npos, Kind::Map, source.clone())?;
        Ok(MapDecl {
            name,
            source,
            target,
            images,
            pos,
        })
    }

    /// Comma-separated polynomials up to the closing `close`; no trailing comma.
    fn poly_list(&mut self, close: char, ring: &RingRef) -> Result<Vec<Polynomial>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == &Tok::Sym(close) {
            self.next();
            return Ok(out);
        }
        loop {
            out.push(self.poly(ring)?);
            match self.peek() {
                Tok::Sym(',') => {
                    self.next();
                }
                Tok::Sym(c) if *c == close => {
                    self.next();
                    return Ok(out);
                }
                other => {
                    return Err(self.error(
                        ParseErrorKind::Syntax,
                        self.pos(),
                        format!("expected `,` or `{close}`, found {}", Self::describe(other)),
                    ))
                }
            }
        }
    }

    /// Token range of one expression: up to a `,` `)` `]` or `;` at depth 0.
    fn expr_span(&mut self) -> Result<(usize, usize, Pos), ParseError> {
        let first = self.at;
        let mut depth = 0usize;
        loop {
            match self.peek() {
                Tok::Eof | Tok::Sym(';') => break,
                Tok::Sym(',') if depth == 0 => break,
                Tok::Sym(')') | Tok::Sym(']') if depth == 0 => break,
                Tok::Sym('(') | Tok::Sym('[') => depth += 1,
                Tok::Sym(')') | Tok::Sym(']') => depth -= 1,
                _ => {}
            }
            self.next();
        }
        let pos = self.toks[first].pos;
        if self.at == first {
            let what = Self::describe(self.peek());
            return Err(self.error(ParseErrorKind::Syntax, pos, format!("expected a polynomial, found {what}")));
        }
        Ok((self.toks[first].start, self.toks[self.at - 1].end, pos))
    }

    fn poly(&mut self, ring: &RingRef) -> Result<Polynomial, ParseError> {
        let (start, end, pos) = self.expr_span()?;
        let text = &self.src[start..end];
        parse_polynomial(ring, text).map_err(|e| match e {
            PolyError::UnknownVariable(v) => self.error(ParseErrorKind::UnknownIdentifier, pos, format!("unknown variable `{v}`")),
            other => self.error(ParseErrorKind::Syntax, pos, other.to_string()),
        })
    }

    fn show(&mut self, _pos: Pos) -> Result<Command, ParseError> {
        let (mut name, pos) = self.ident()?;
        // Hyphenated command names: adjacent `-` and identifier tokens.
        while self.peek() == &Tok::Sym('-') && self.toks[self.at].start == self.toks[self.at - 1].end {
            match &self.toks[self.at + 1].tok {
                Tok::Ident(s) if self.toks[self.at + 1].start == self.toks[self.at].end => {
                    name.push('-');
                    name.push_str(s);
                    self.at += 2;
                }
                _ => break,
            }
        }
        let Some(spec) = lookup(&name) else {
            return Err(self.error(ParseErrorKind::UnknownIdentifier, pos, format!("unknown command `{name}`")));
        };
        self.expect_sym('(')?;
        let mut args = Vec::new();
        let mut ring: Option<(String, RingRef)> = None;
        if self.peek() != &Tok::Sym(')') {
            loop {
                let idx = args.len();
                let Some(kind) = spec.kind_at(idx) else {
                    return Err(self.error(
                        ParseErrorKind::Arity,
                        self.pos(),
                        format!("`{name}` takes {}", spec.arity_text()),
                    ));
                };
                let arg = self.arg(kind, &name, &mut ring)?;
                args.push(arg);
                match self.peek() {
                    Tok::Sym(',') => {
                        self.next();
                    }
                    Tok::Sym(')') => break,
                    other => {
                        return Err(self.error(
                            ParseErrorKind::Syntax,
                            self.pos(),
                            format!("expected `,` or `)`, found {}", Self::describe(other)),
                        ))
                    }
                }
            }
        }
        if args.len() < spec.required {
            return Err(self.error(ParseErrorKind::Arity, pos, format!("`{name}` takes {}", spec.arity_text())));
        }
        self.expect_sym(')')?;
        Ok(Command { name, args, pos })
    }

    fn arg(&mut self, kind: ArgKind, command: &str, ring: &mut Option<(String, RingRef)>) -> Result<Arg, ParseError> {
        let pos = self.pos();
        let single = matches!(self.toks[self.at + 1].tok, Tok::Sym(',') | Tok::Sym(')'));
        let named = |k: Kind| matches!(kind, ArgKind::Ring if k == Kind::Ring)
            || matches!(kind, ArgKind::Seq if k == Kind::Seq)
            || matches!(kind, ArgKind::Ideal | ArgKind::IdealOrPoly if k == Kind::Ideal)
            || matches!(kind, ArgKind::Map if k == Kind::Map);
        if let (Tok::Ident(s), true) = (self.peek().clone(), single) {
            if let Some((_, k, r)) = self.lookup(&s).cloned() {
                if !named(k) {
                    return Err(self.error(
                        ParseErrorKind::Type,
                        pos,
                        format!("`{s}` is a {}; `{command}` expects {} here", k.noun(), kind.noun()),
                    ));
                }
                self.next();
                match (k, ring.as_ref()) {
                    (Kind::Ring, None) => *ring = Some((s.clone(), self.ring_named(&s, pos)?)),
                    (Kind::Seq | Kind::Ideal, Some((rn, _))) if *rn != r => {
                        return Err(self.error(
                            ParseErrorKind::Type,
                            pos,
                            format!("`{s}` lives in ring `{r}`, not `{rn}`"),
                        ))
                    }
                    _ => {}
                }
                return Ok(Arg::Name(s));
            }
        }
        if matches!(kind, ArgKind::Ideal | ArgKind::IdealOrPoly) && self.peek() == &Tok::Sym('(') && self.is_ideal_literal(kind) {
            let r = self.arg_ring(ring, pos)?;
            self.next();
            let mut gens = self.poly_list(')', &r)?;
            gens.retain(|p| !p.is_zero());
            return Ok(Arg::Ideal(gens));
        }
        match kind {
            ArgKind::Int => match self.peek().clone() {
                Tok::Int(v) if single => {
                    self.next();
                    Ok(Arg::Int(v))
                }
                other => Err(self.error(
                    ParseErrorKind::Type,
                    pos,
                    format!("`{command}` expects an integer here, found {}", Self::describe(&other)),
                )),
            },
            ArgKind::Poly | ArgKind::IdealOrPoly | ArgKind::Var => {
                let r = self.arg_ring(ring, pos)?;
                let p = self.poly(&r)?;
                if kind == ArgKind::Var && !(p.is_monomial() && p.total_degree() == 1 && p.lc().is_one()) {
                    return Err(self.error(ParseErrorKind::Type, pos, format!("`{command}` expects a variable here")));
                }
                Ok(Arg::Poly(p))
            }
            _ => match self.peek().clone() {
                Tok::Ident(s) if self.lookup(&s).is_none() => {
                    Err(self.error(ParseErrorKind::UnknownIdentifier, pos, format!("unknown name `{s}`")))
                }
                other => Err(self.error(
                    ParseErrorKind::Type,
                    pos,
                    format!("`{command}` expects {} here, found {}", kind.noun(), Self::describe(&other)),
                )),
            },
        }
    }
}

impl Parser<'_> {
    fn arg_ring(&mut self, ring: &Option<(String, RingRef)>, pos: Pos) -> Result<RingRef, ParseError> {
        match ring {
            Some((_, r)) => Ok(r.clone()),
            None => Ok(self.ring_clause(pos)?.1),
        }
    }

    /// At `(`: whether the argument is a parenthesized generator list. For
    /// arguments that may also be a polynomial, a list needs a comma inside
    /// the parentheses and nothing after them.
    fn is_ideal_literal(&self, kind: ArgKind) -> bool {
        if kind == ArgKind::Ideal {
            return true;
        }
        let mut depth = 0usize;
        let mut comma = false;
        for (k, t) in self.toks[self.at..].iter().enumerate() {
            match t.tok {
                Tok::Sym('(') | Tok::Sym('[') => depth += 1,
                Tok::Sym(')') | Tok::Sym(']') => {
                    depth -= 1;
                    if depth == 0 {
                        let after = &self.toks[self.at + k + 1].tok;
                        return comma && matches!(after, Tok::Sym(',') | Tok::Sym(')'));
                    }
                }
                Tok::Sym(',') if depth == 1 => comma = true,
                Tok::Eof | Tok::Sym(';') => return false,
                _ => {}
            }
        }
        false
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}
