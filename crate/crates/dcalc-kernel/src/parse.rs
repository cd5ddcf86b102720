//! Recursive-descent parser for expressions and `.dc` documents.
//!
//! Bound names resolve to indices while parsing, so α-equivalent inputs yield
//! identical terms. `def` bodies are kept as tokens and re-parsed at every use,
//! which lets axiom-scheme references inside them see the actual arguments.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::axioms::{AxiomRequest, Scheme};
use crate::context::Context;
use crate::expr::*;
use crate::lexer::{lex, Tok, Token};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line, col, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decl {
    pub name: Name,
    pub ty: Expr,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Context { name: String, decls: Vec<Decl> },
    Check { term: Expr, ty: Expr, line: usize },
    Axiom(AxiomRequest),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub items: Vec<Item>,
    /// Every scheme instance mentioned anywhere, in order of first mention.
    pub requests: Vec<AxiomRequest>,
}

impl Document {
    /// All context blocks concatenated, without axiom instances.
    pub fn user_context(&self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        for item in &self.items {
            if let Item::Context { decls, .. } = item {
                for d in decls {
                    ctx.push(d.name.clone(), d.ty.clone())
                        .map_err(|e| ParseError::new(d.line, 1, format!("duplicate declaration `{}`", e.0)))?;
                }
            }
        }
        Ok(ctx)
    }

    pub fn checks(&self) -> impl Iterator<Item = (&Expr, &Expr, usize)> {
        self.items.iter().filter_map(|i| match i {
            Item::Check { term, ty, line } => Some((term, ty, *line)),
            _ => None,
        })
    }
}

struct DefSrc {
    params: Vec<String>,
    body: Arc<Vec<Token>>,
    /// Defs visible inside the body: those declared earlier.
    visible: usize,
}

/// Parser state that persists across inputs: definitions and collected axiom requests.
#[derive(Default)]
pub struct Session {
    defs: Vec<(String, DefSrc)>,
    def_index: HashMap<String, usize>,
    requests: Vec<AxiomRequest>,
    seen: HashSet<Name>,
    declared: HashSet<Name>,
}

const MAX_EXPANSION: usize = 64;

impl Session {
    pub fn new() -> Session {
        Session::default()
    }

    pub fn requests(&self) -> &[AxiomRequest] {
        &self.requests
    }

    fn record(&mut self, r: AxiomRequest) {
        if self.seen.insert(r.name()) {
            self.requests.push(r);
        }
    }

    pub fn parse_expr(&mut self, src: &str) -> Result<Expr, ParseError> {
        let toks = Arc::new(lex(src)?);
        let visible = self.defs.len();
        let mut p = Parser::new(self, toks, vec![], HashMap::new(), visible, 0);
        let e = p.expr()?;
        p.expect_eof()?;
        Ok(e)
    }

    pub fn parse_document(&mut self, src: &str) -> Result<Document, ParseError> {
        let toks = Arc::new(lex(src)?);
        let first = self.requests.len();
        let mut items = vec![];
        let mut pos = 0;
        while toks[pos].tok != Tok::Eof {
            let visible = self.defs.len();
            let mut p = Parser::new(self, toks.clone(), vec![], HashMap::new(), visible, 0);
            p.pos = pos;
            if let Some(item) = p.item()? {
                items.push(item);
            }
            pos = p.pos;
        }
        Ok(Document { items, requests: self.requests[first..].to_vec() })
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    Session::new().parse_expr(src)
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    Session::new().parse_document(src)
}

/// A bare declaration list `x, y : T; z : U`.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    let mut s = Session::new();
    let toks = Arc::new(lex(src)?);
    let mut p = Parser::new(&mut s, toks, vec![], HashMap::new(), 0, 0);
    let decls = p.decls(&Tok::Eof)?;
    p.expect_eof()?;
    let mut ctx = Context::new();
    for d in decls {
        ctx.push(d.name, d.ty).map_err(|e| ParseError::new(1, 1, format!("duplicate declaration `{}`", e.0)))?;
    }
    Ok(ctx)
}

struct Parser<'s> {
    session: &'s mut Session,
    toks: Arc<Vec<Token>>,
    pos: usize,
    /// Innermost binder last; empty strings are anonymous binders.
    scope: Vec<String>,
    /// Macro parameters: argument and the scope depth it was parsed at.
    params: HashMap<String, (Expr, usize)>,
    visible: usize,
    depth: usize,
}

impl<'s> Parser<'s> {
    fn new(
        session: &'s mut Session,
        toks: Arc<Vec<Token>>,
        scope: Vec<String>,
        params: HashMap<String, (Expr, usize)>,
        visible: usize,
        depth: usize,
    ) -> Parser<'s> {
        Parser { session, toks, pos: 0, scope, params, visible, depth }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError::new(t.line, t.col, msg)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => Err(self.err(format!("unexpected {}", describe(t)))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !crate::print::KEYWORDS.contains(&s.as_str()) => {
                self.pos += 1;
                Ok(s)
            }
            t => Err(self.err(format!("expected identifier, found {}", describe(&t)))),
        }
    }

    // ---- documents ----

    fn item(&mut self) -> Result<Option<Item>, ParseError> {
        let line = self.toks[self.pos].line;
        match self.peek().clone() {
            Tok::Ident(k) if k == "context" => {
                self.pos += 1;
                let name = self.ident()?;
                self.expect(&Tok::LBrace, "`{`")?;
                let decls = self.decls(&Tok::RBrace)?;
                self.expect(&Tok::RBrace, "`}`")?;
                Ok(Some(Item::Context { name, decls }))
            }
            Tok::Ident(k) if k == "def" => {
                self.pos += 1;
                self.def()?;
                Ok(None)
            }
            Tok::Ident(k) if k == "check" => {
                self.pos += 1;
                let term = self.expr()?;
                self.expect(&Tok::Colon, "`:`")?;
                let ty = self.expr()?;
                Ok(Some(Item::Check { term, ty, line }))
            }
            Tok::Ident(k) if k == "axiom" => {
                self.pos += 1;
                let scheme = self.scheme_name()?.ok_or_else(|| self.err("expected an axiom scheme"))?;
                let req = self.scheme_ref(scheme)?;
                Ok(Some(Item::Axiom(req)))
            }
            t => Err(self.err(format!("expected `context`, `def`, `check` or `axiom`, found {}", describe(&t)))),
        }
    }

    /// `x, y : T` groups separated by `;` or `,`, up to `end`.
    fn decls(&mut self, end: &Tok) -> Result<Vec<Decl>, ParseError> {
        let mut out: Vec<Decl> = vec![];
        while self.peek() != end {
            let line = self.toks[self.pos].line;
            let mut names = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                names.push(self.ident()?);
            }
            self.expect(&Tok::Colon, "`:`")?;
            let ty = self.expr()?;
            for n in names {
                let n = name(&n);
                if !self.session.declared.insert(n.clone()) {
                    return Err(ParseError::new(line, 1, format!("duplicate declaration `{n}`")));
                }
                out.push(Decl { name: n, ty: ty.clone(), line });
            }
            if !self.eat(&Tok::Semi) && !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    fn def(&mut self) -> Result<(), ParseError> {
        let (line, col) = (self.toks[self.pos].line, self.toks[self.pos].col);
        let name = self.ident()?;
        if self.session.def_index.contains_key(&name) {
            return Err(ParseError::new(line, col, format!("`{name}` is already defined")));
        }
        let mut params = vec![];
        if self.eat(&Tok::LBrace) {
            loop {
                params.push(self.ident()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RBrace, "`}`")?;
        }
        self.expect(&Tok::Assign, "`:=`")?;
        let start = self.pos;
        // Parsed once for diagnostics; parameters stand as free names and requests are dropped.
        let before = self.session.requests.len();
        let seen = self.session.seen.clone();
        let saved = std::mem::take(&mut self.params);
        let shadow: HashMap<String, (Expr, usize)> = params.iter().map(|p| (p.clone(), (var(p), 0))).collect();
        self.params = shadow;
        let r = self.expr();
        self.params = saved;
        self.session.requests.truncate(before);
        self.session.seen = seen;
        r?;
        let mut body: Vec<Token> = self.toks[start..self.pos].to_vec();
        let end = self.toks[self.pos].clone();
        body.push(Token { tok: Tok::Eof, ..end });
        let visible = self.session.defs.len();
        self.session.def_index.insert(name.clone(), visible);
        self.session.defs.push((name, DefSrc { params, body: Arc::new(body), visible }));
        Ok(())
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.unary()
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&Tok::Tilde) {
            return Ok(neg(self.unary()?));
        }
        if self.peek() == &Tok::LBrack && self.binder_ahead(1) {
            return self.binder_group();
        }
        self.postfix()
    }

    /// True if tokens from `self.pos + k` read `Ident (, Ident)* (: | !)`.
    fn binder_ahead(&self, mut k: usize) -> bool {
        loop {
            match self.peek_at(k) {
                Tok::Ident(s) if !crate::print::KEYWORDS.contains(&s.as_str()) => k += 1,
                _ => return false,
            }
            match self.peek_at(k) {
                Tok::Comma => k += 1,
                Tok::Colon | Tok::Bang => return true,
                _ => return false,
            }
        }
    }

    fn binder_group(&mut self) -> Result<Expr, ParseError> {
        self.expect(&Tok::LBrack, "`[`")?;
        let base = self.scope.len();
        let mut bindings: Vec<(String, bool, Expr)> = vec![];
        loop {
            let mut names = vec![self.ident()?];
            while self.eat(&Tok::Comma) {
                names.push(self.ident()?);
            }
            let exist = match self.next().tok {
                Tok::Colon => false,
                Tok::Bang => true,
                t => return Err(self.err(format!("expected `:` or `!`, found {}", describe(&t)))),
            };
            let dom = self.expr()?;
            for (i, n) in names.into_iter().enumerate() {
                bindings.push((n.clone(), exist, shift(&dom, i as i64, 0)));
                self.scope.push(n);
            }
            if self.eat(&Tok::Semi) {
                continue;
            }
            if self.peek() == &Tok::Comma && self.binder_ahead(1) {
                self.pos += 1;
                continue;
            }
            break;
        }
        let closed = self.expect(&Tok::RBrack, "`]`");
        let body = closed.and_then(|_| self.unary());
        self.scope.truncate(base);
        let mut e = body?;
        for (n, exist, dom) in bindings.into_iter().rev() {
            let (h, d, b) = (Hint::new(&n), bx(dom), bx(e));
            e = if exist { Expr::ExistAbs(h, d, b) } else { Expr::UnivAbs(h, d, b) };
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Tok::Dot => {
                    self.pos += 1;
                    match self.next().tok {
                        Tok::Num(1) => e = proj_l(e),
                        Tok::Num(2) => e = proj_r(e),
                        _ => return Err(self.err("expected `1` or `2` after `.`")),
                    }
                }
                Tok::LParen { adjacent: true } => {
                    self.pos += 1;
                    let args = self.comma_list(&Tok::RParen)?;
                    e = apps(e, args);
                }
                _ => return Ok(e),
            }
        }
    }

    /// Comma-separated expressions up to and including `end`; at least one.
    fn comma_list(&mut self, end: &Tok) -> Result<Vec<Expr>, ParseError> {
        let mut out = vec![self.expr()?];
        while self.eat(&Tok::Comma) {
            out.push(self.expr()?);
        }
        self.expect(end, &describe(end))?;
        Ok(out)
    }

    fn pair_args(&mut self, what: &str) -> Result<(Expr, Expr), ParseError> {
        if !matches!(self.peek(), Tok::LParen { .. }) {
            return Err(self.err(format!("expected `(` after `{what}`")));
        }
        self.pos += 1;
        let mut args = self.comma_list(&Tok::RParen)?;
        if args.len() != 2 {
            return Err(self.err(format!("`{what}` takes two arguments")));
        }
        let b = args.pop().expect("two");
        Ok((args.pop().expect("two"), b))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                match s.as_str() {
                    "tau" => {
                        self.pos += 1;
                        return Ok(Expr::Prim);
                    }
                    "inl" | "inr" | "case" => {
                        self.pos += 1;
                        let (a, b) = self.pair_args(&s)?;
                        return Ok(match s.as_str() {
                            "inl" => inj_l(a, b),
                            "inr" => inj_r(a, b),
                            _ => case(a, b),
                        });
                    }
                    _ => {}
                }
                if let Some(scheme) = self.scheme_name()? {
                    let req = self.scheme_ref(scheme)?;
                    return Ok(Expr::Var(req.name()));
                }
                let x = self.ident()?;
                self.resolve(&x)
            }
            Tok::LParen { .. } => {
                self.pos += 1;
                let mut e = self.unary()?;
                while !self.eat(&Tok::RParen) {
                    if self.peek() == &Tok::Eof {
                        return Err(self.err("unclosed `(`"));
                    }
                    e = app(e, self.unary()?);
                }
                Ok(e)
            }
            Tok::LBrack => {
                self.pos += 1;
                self.bracket()
            }
            Tok::LAngle => {
                self.pos += 1;
                let x = self.ident()?;
                self.expect(&Tok::Assign, "`:=`")?;
                let w = self.expr()?;
                self.expect(&Tok::Comma, "`,`")?;
                let p = self.expr()?;
                self.expect(&Tok::Colon, "`:`")?;
                self.scope.push(x.clone());
                let tag = self.expr();
                self.scope.pop();
                let tag = tag?;
                self.expect(&Tok::RAngle, "`>`")?;
                Ok(Expr::ProtDef(Hint::new(&x), bx(w), bx(p), bx(tag)))
            }
            t => Err(self.err(format!("expected an expression, found {}", describe(&t)))),
        }
    }

    /// After `[`: products, sums and arrows.
    fn bracket(&mut self) -> Result<Expr, ParseError> {
        let first = self.expr()?;
        match self.peek() {
            Tok::Comma => {
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr()?);
                }
                self.expect(&Tok::RBrack, "`]`")?;
                Ok(fold_right(items, product))
            }
            Tok::Plus => {
                let mut items = vec![first];
                while self.eat(&Tok::Plus) {
                    items.push(self.expr()?);
                }
                self.expect(&Tok::RBrack, "`]`")?;
                Ok(fold_right(items, sum))
            }
            Tok::Semi | Tok::Arrow => {
                let base = self.scope.len();
                let mut ants = vec![first];
                self.scope.push(String::new());
                while self.eat(&Tok::Semi) {
                    let a = self.expr();
                    let a = match a {
                        Ok(a) => a,
                        Err(e) => {
                            self.scope.truncate(base);
                            return Err(e);
                        }
                    };
                    ants.push(a);
                    self.scope.push(String::new());
                }
                let body = self
                    .expect(&Tok::Arrow, "`=>`")
                    .and_then(|_| self.expr())
                    .and_then(|b| self.expect(&Tok::RBrack, "`]`").map(|_| b));
                self.scope.truncate(base);
                let mut e = body?;
                for a in ants.into_iter().rev() {
                    e = Expr::UnivAbs(Hint::anon(), bx(a), bx(e));
                }
                Ok(e)
            }
            t => Err(self.err(format!("expected `,`, `+`, `;` or `=>`, found {}", describe(t)))),
        }
    }

    /// Recognizes `negax+ {`, `negax- {` and `cast {` style scheme references.
    fn scheme_name(&mut self) -> Result<Option<Scheme>, ParseError> {
        let Tok::Ident(s) = self.peek().clone() else { return Ok(None) };
        if s == "negax" {
            let sign = match self.peek_at(1) {
                Tok::Plus => Scheme::NegaxPlus,
                Tok::Minus => Scheme::NegaxMinus,
                _ => return Ok(None),
            };
            if self.peek_at(2) != &Tok::LBrace {
                return Ok(None);
            }
            self.pos += 2;
            return Ok(Some(sign));
        }
        match Scheme::from_surface(&s) {
            Some(k) if self.peek_at(1) == &Tok::LBrace && !self.is_shadowed(&s) => {
                self.pos += 1;
                Ok(Some(k))
            }
            _ => Ok(None),
        }
    }

    fn is_shadowed(&self, s: &str) -> bool {
        self.scope.iter().any(|n| n == s) || self.params.contains_key(s)
    }

    fn scheme_ref(&mut self, scheme: Scheme) -> Result<AxiomRequest, ParseError> {
        self.expect(&Tok::LBrace, "`{`")?;
        let indices = self.comma_list(&Tok::RBrace)?;
        let req = AxiomRequest::new(scheme, indices).map_err(|e| self.err(e.to_string()))?;
        self.session.record(req.clone());
        Ok(req)
    }

    fn resolve(&mut self, x: &str) -> Result<Expr, ParseError> {
        if let Some(i) = self.scope.iter().rposition(|n| n == x) {
            return Ok(Expr::Bound((self.scope.len() - 1 - i) as u32));
        }
        if let Some((arg, at)) = self.params.get(x) {
            return Ok(shift(arg, (self.scope.len() - at) as i64, 0));
        }
        match self.session.def_index.get(x) {
            Some(&i) if i < self.visible => self.expand(i),
            _ => Ok(Expr::Var(name(x))),
        }
    }

    fn expand(&mut self, i: usize) -> Result<Expr, ParseError> {
        if self.depth >= MAX_EXPANSION {
            return Err(self.err("definition expansion too deep"));
        }
        let (def_name, params, body, visible) = {
            let (n, d) = &self.session.defs[i];
            (n.clone(), d.params.clone(), d.body.clone(), d.visible)
        };
        let args = if params.is_empty() {
            vec![]
        } else {
            if self.peek() != &Tok::LBrace {
                return Err(self.err(format!("`{def_name}` expects {} arguments in braces", params.len())));
            }
            self.pos += 1;
            self.comma_list(&Tok::RBrace)?
        };
        if args.len() != params.len() {
            return Err(self.err(format!("`{def_name}` expects {} arguments, got {}", params.len(), args.len())));
        }
        let depth = self.scope.len();
        let bindings = params.into_iter().zip(args).map(|(p, a)| (p, (a, depth))).collect();
        // Use-site binders stay counted but can no longer be named from the body.
        let hidden = vec![String::new(); depth];
        let mut sub = Parser::new(self.session, body, hidden, bindings, visible, self.depth + 1);
        let e = sub.expr()?;
        sub.expect_eof()?;
        Ok(e)
    }
}

fn fold_right(mut items: Vec<Expr>, f: fn(Expr, Expr) -> Expr) -> Expr {
    let mut e = items.pop().expect("nonempty");
    while let Some(x) = items.pop() {
        e = f(x, e);
    }
    e
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::LParen { .. } => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LAngle => "`<`".into(),
        Tok::RAngle => "`>`".into(),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Colon => "`:`".into(),
        Tok::Bang => "`!`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Arrow => "`=>`".into(),
        Tok::Assign => "`:=`".into(),
        Tok::Eof => "end of input".into(),
    }
}
