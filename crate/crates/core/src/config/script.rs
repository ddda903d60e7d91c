//! Line-oriented construction language.
//!
//! ```text
//! # comment
//! basis v1=(1,0,-1) v2=(1,0,1) v9=(1,-1,0) v10=(1,1,0)
//! param v3 (1, a, 0)
//! line l1 v9 v10
//! point v4 l3 l4
//! require-collinear v4 v7 v8
//! points v1 v2 v3 ...
//! config-line v1 v2 v7
//! ```
//!
//! `basis` without coordinates assigns `e1, e2, e3, e1+e2+e3`. Coordinates
//! are expressions in the parameter `a` built from integers, `+ - * / ^`,
//! parentheses and juxtaposition (`2a`). `points` fixes the order of the
//! output realization (default: order of definition); `config-line` lists
//! the configuration lines the realization is checked against.

use std::collections::HashMap;

use num::BigInt;

use crate::error::{Error, Result};
use crate::exactnum::{Field, Poly, RatFunc, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Param,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Value as a rational function of `a`; `None` on division by zero.
    pub fn eval(&self) -> Option<RatFunc> {
        Some(match self {
            Expr::Int(n) => RatFunc::from_rational(&(), &Rational::from_integer(n.clone())),
            Expr::Param => RatFunc::from_poly(Poly::x()),
            Expr::Neg(e) => e.eval()?.neg(),
            Expr::Add(x, y) => x.eval()?.add(&y.eval()?),
            Expr::Sub(x, y) => x.eval()?.sub(&y.eval()?),
            Expr::Mul(x, y) => x.eval()?.mul(&y.eval()?),
            Expr::Div(x, y) => x.eval()?.checked_div(&y.eval()?)?,
            Expr::Pow(x, e) => {
                let b = x.eval()?;
                (0..*e).fold(RatFunc::one(&()), |acc, _| acc.mul(&b))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Basis(Vec<(String, Option<[Expr; 3]>)>),
    Param(String, [Expr; 3]),
    Line(String, String, String),
    Point(String, String, String),
    RequireCollinear([String; 3]),
    Points(Vec<String>),
    ConfigLine(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    /// 1-based source line.
    pub line: usize,
    pub stmt: Stmt,
}

/// A parsed script. Parsing already checks that names are defined before
/// use, that there is exactly one `basis` and at most one `points`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionScript {
    pub statements: Vec<Statement>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, text: &str, offset: usize) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Lexed { tok: Tok::Int(s.parse().expect("digits")), col });
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push(Lexed { tok: Tok::Ident(chars[start..i].iter().collect()), col });
        } else if "()=,+-*/^".contains(c) {
            out.push(Lexed { tok: Tok::Sym(c), col });
            i += 1;
        } else {
            return Err(Error::Parse { line: line_no, col, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let col = self.toks.get(self.pos).map_or(self.end_col, |t| t.col);
        Err(Error::Parse { line: self.line, col, msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn name(&mut self) -> Result<(String, usize)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => self.err("expected a name"),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn coords(&mut self) -> Result<[Expr; 3]> {
        self.expect('(')?;
        let x = self.expr()?;
        self.expect(',')?;
        let y = self.expr()?;
        self.expect(',')?;
        let z = self.expr()?;
        self.expect(')')?;
        Ok([x, y, z])
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.unary()?;
        loop {
            if self.eat('*') {
                e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
            } else if self.eat('/') {
                e = Expr::Div(Box::new(e), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Sym('('))) {
                e = Expr::Mul(Box::new(e), Box::new(self.power()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => self.err("expected an integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) if s == "a" => {
                self.pos += 1;
                Ok(Expr::Param)
            }
            Some(Tok::Ident(s)) => self.err(format!("unknown symbol {s:?}; the only parameter is `a`")),
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => self.err("expected an expression"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Point,
    Line,
}

pub fn parse_script(src: &str) -> Result<ConstructionScript> {
    let mut statements = Vec::new();
    let mut defined: HashMap<String, Kind> = HashMap::new();
    let mut seen_basis = false;
    let mut seen_points = false;
    let mut deferred: Vec<(String, usize, usize)> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let trimmed = text.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = text.len() - trimmed.len();
        let kw_len = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let keyword = &trimmed[..kw_len];
        let rest_offset = lead + kw_len;
        let toks = lex(line_no, &text[rest_offset..], rest_offset)?;
        let mut cur = Cursor { toks: &toks, pos: 0, line: line_no, end_col: text.trim_end().len() + 1 };
        let parse_err = |col: usize, msg: String| Error::Parse { line: line_no, col, msg };

        let define = |name: &str, col: usize, kind: Kind, defined: &mut HashMap<String, Kind>| -> Result<()> {
            if name == "a" {
                return Err(parse_err(col, "`a` is reserved for the parameter".into()));
            }
            if defined.insert(name.to_string(), kind).is_some() {
                return Err(parse_err(col, format!("{name:?} is already defined")));
            }
            Ok(())
        };
        let require = |name: &str, col: usize, kind: Kind, defined: &HashMap<String, Kind>| -> Result<()> {
            match defined.get(name) {
                Some(k) if *k == kind => Ok(()),
                Some(_) => Err(parse_err(
                    col,
                    format!(
                        "{name:?} is a {}",
                        if kind == Kind::Point { "line, expected a point" } else { "point, expected a line" }
                    ),
                )),
                None => Err(parse_err(col, format!("{name:?} is not defined"))),
            }
        };

        if keyword != "basis" && !seen_basis && matches!(keyword, "param" | "line" | "point" | "require-collinear") {
            return Err(parse_err(lead + 1, "the script must start with `basis`".into()));
        }

        let stmt = match keyword {
            "basis" => {
                if seen_basis {
                    return Err(parse_err(lead + 1, "a script has exactly one `basis`".into()));
                }
                seen_basis = true;
                let mut items = Vec::new();
                while !cur.at_end() {
                    let (name, col) = cur.name()?;
                    define(&name, col, Kind::Point, &mut defined)?;
                    let coords = if cur.eat('=') { Some(cur.coords()?) } else { None };
                    items.push((name, coords));
                }
                if items.len() != 4 {
                    return Err(parse_err(lead + 1, format!("`basis` takes 4 points, got {}", items.len())));
                }
                let explicit = items.iter().filter(|(_, c)| c.is_some()).count();
                if explicit != 0 && explicit != 4 {
                    return Err(parse_err(lead + 1, "give coordinates for all four basis points or none".into()));
                }
                Stmt::Basis(items)
            }
            "param" => {
                let (name, col) = cur.name()?;
                define(&name, col, Kind::Point, &mut defined)?;
                Stmt::Param(name, cur.coords()?)
            }
            "line" | "point" => {
                let (name, col) = cur.name()?;
                let (x, xc) = cur.name()?;
                let (y, yc) = cur.name()?;
                let (new_kind, arg_kind) =
                    if keyword == "line" { (Kind::Line, Kind::Point) } else { (Kind::Point, Kind::Line) };
                require(&x, xc, arg_kind, &defined)?;
                require(&y, yc, arg_kind, &defined)?;
                define(&name, col, new_kind, &mut defined)?;
                if keyword == "line" {
                    Stmt::Line(name, x, y)
                } else {
                    Stmt::Point(name, x, y)
                }
            }
            "require-collinear" => {
                let mut names = Vec::new();
                for _ in 0..3 {
                    let (n, c) = cur.name()?;
                    require(&n, c, Kind::Point, &defined)?;
                    names.push(n);
                }
                Stmt::RequireCollinear(names.try_into().expect("three names"))
            }
            "points" | "config-line" => {
                if keyword == "points" {
                    if seen_points {
                        return Err(parse_err(lead + 1, "at most one `points` statement".into()));
                    }
                    seen_points = true;
                }
                let mut names = Vec::new();
                while !cur.at_end() {
                    let (n, c) = cur.name()?;
                    if names.contains(&n) {
                        return Err(parse_err(c, format!("{n:?} listed twice")));
                    }
                    deferred.push((n.clone(), line_no, c));
                    names.push(n);
                }
                if keyword == "config-line" {
                    if names.len() < 3 {
                        return Err(parse_err(lead + 1, "a configuration line needs at least 3 points".into()));
                    }
                    Stmt::ConfigLine(names)
                } else {
                    Stmt::Points(names)
                }
            }
            other => return Err(parse_err(lead + 1, format!("unknown statement {other:?}"))),
        };
        if !cur.at_end() {
            return cur.err("unexpected trailing input");
        }
        statements.push(Statement { line: line_no, stmt });
    }
    if !seen_basis {
        return Err(Error::Parse { line: 1, col: 1, msg: "missing `basis` statement".into() });
    }
    for (name, line, col) in deferred {
        if defined.get(&name) != Some(&Kind::Point) {
            return Err(Error::Parse { line, col, msg: format!("{name:?} is not a defined point") });
        }
    }
    Ok(ConstructionScript { statements })
}
