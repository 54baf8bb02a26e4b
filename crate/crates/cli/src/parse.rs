//! Instance files: a line-oriented text format for GCD programs and for
//! divisibility systems.

use std::collections::HashMap;
use std::fmt;

use divsys::{DivConstraint, DivSystem, LinearPoly, Var};
use ipgcd::{GcdConstraint, Inequality, IpGcdInstance, Objective, Rel, Sense};
use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

const KEYWORDS: [&str; 6] = ["vars", "minimize", "maximize", "increasing", "gcd", "div"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("line {line}: {found} cannot appear in a file that already uses {dialect} lines")]
    MixedMode { line: usize, found: &'static str, dialect: &'static str },
}

/// A divisibility system with the variable names it was written with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivFile {
    pub names: Vec<String>,
    pub system: DivSystem,
    /// Blocks of an `increasing` directive, if present.
    pub partition: Option<Vec<Vec<Var>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Ip(IpGcdInstance),
    Div(DivFile),
}

impl Parsed {
    pub fn names(&self) -> &[String] {
        match self {
            Parsed::Ip(i) => &i.names,
            Parsed::Div(d) => &d.names,
        }
    }
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Ip(inst) => write!(f, "{inst}"),
            Parsed::Div(d) => {
                let names = |v: Var| d.names[v].clone();
                writeln!(f, "vars {}", d.names.join(" "))?;
                for c in d.system.constraints() {
                    writeln!(f, "div: {}", c.display_with(&names))?;
                }
                if let Some(blocks) = &d.partition {
                    let blocks: Vec<String> =
                        blocks.iter().map(|b| b.iter().map(|v| names(*v)).collect::<Vec<_>>().join(" ")).collect();
                    writeln!(f, "increasing {}", blocks.join(" | "))?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Sym(s) => write!(f, "'{s}'"),
        }
    }
}

const SYMBOLS: [&str; 12] = ["<=", ">=", "!=", "=", "+", "-", "*", "|", "(", ")", ",", ":"];

struct Line {
    no: usize,
    toks: Vec<(Tok, usize)>,
    end: usize,
    pos: usize,
}

impl Line {
    fn lex(no: usize, text: &str) -> Result<Line, InputError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push((Tok::Int(s.parse().expect("digits")), col));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else {
                let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
                let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                    return Err(perr(no, col, format!("unexpected character '{c}'")));
                };
                toks.push((Tok::Sym(sym), col));
                i += sym.len();
            }
        }
        Ok(Line { no, toks, end: chars.len() + 1, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, message: impl Into<String>) -> InputError {
        perr(self.no, self.col(), message.into())
    }

    fn unexpected(&self, wanted: &str) -> InputError {
        match self.peek() {
            Some(t) => self.err(format!("expected {wanted}, found {t}")),
            None => self.err(format!("expected {wanted}, found end of line")),
        }
    }

    fn eat(&mut self, sym: &str) -> bool {
        let hit = matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym);
        self.pos += usize::from(hit);
        hit
    }

    fn expect(&mut self, sym: &str) -> Result<(), InputError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{sym}'")))
        }
    }

    fn finish(&self) -> Result<(), InputError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of line"))
        } else {
            Ok(())
        }
    }

    fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Some(s)
            }
            _ => None,
        }
    }

    /// `term (('+' | '-') term)*` where a term is `[sign] (int ['*'] [name] | name)`.
    fn poly(&mut self, vars: &HashMap<String, Var>) -> Result<LinearPoly, InputError> {
        let mut acc = LinearPoly::zero();
        let mut sign = BigInt::one();
        loop {
            acc = acc.add(&self.term(vars)?.scale(&sign));
            sign = if self.eat("+") {
                BigInt::one()
            } else if self.eat("-") {
                -BigInt::one()
            } else {
                return Ok(acc);
            };
        }
    }

    fn term(&mut self, vars: &HashMap<String, Var>) -> Result<LinearPoly, InputError> {
        let mut sign = BigInt::one();
        while let Some(neg) = if self.eat("-") { Some(true) } else if self.eat("+") { Some(false) } else { None } {
            if neg {
                sign = -sign;
            }
        }
        let coeff = match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Some(n)
            }
            _ => None,
        };
        let star = coeff.is_some() && self.eat("*");
        let col = self.col();
        let var = match self.ident() {
            Some(name) => match vars.get(&name) {
                Some(v) => Some(*v),
                None => return Err(perr(self.no, col, format!("undeclared variable '{name}'"))),
            },
            None if star || coeff.is_none() => return Err(self.unexpected("a variable or an integer")),
            None => None,
        };
        let k = coeff.unwrap_or_else(BigInt::one) * sign;
        Ok(match var {
            Some(v) => LinearPoly::term(v, k),
            None => LinearPoly::constant(k),
        })
    }

    fn int(&mut self) -> Result<BigInt, InputError> {
        let neg = self.eat("-");
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(if neg { -n } else { n })
            }
            _ => Err(self.unexpected("an integer")),
        }
    }
}

fn perr(line: usize, column: usize, message: String) -> InputError {
    InputError::Parse { line, column, message }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Dialect {
    Ip,
    Div,
}

struct Builder {
    names: Vec<String>,
    vars: HashMap<String, Var>,
    declared: bool,
    dialect: Option<(Dialect, &'static str)>,
    inst: IpGcdInstance,
    divs: Vec<DivConstraint>,
    partition: Option<Vec<Vec<Var>>>,
}

impl Builder {
    fn mode(&mut self, line: usize, d: Dialect, what: &'static str) -> Result<(), InputError> {
        match self.dialect {
            Some((seen, first)) if seen != d => Err(InputError::MixedMode { line, found: what, dialect: first }),
            Some(_) => Ok(()),
            None => {
                self.dialect = Some((d, what));
                Ok(())
            }
        }
    }

    fn need_vars(&self, l: &Line) -> Result<(), InputError> {
        if self.declared {
            Ok(())
        } else {
            Err(perr(l.no, 1, "a 'vars' line must come first".into()))
        }
    }

    fn line(&mut self, mut l: Line) -> Result<(), InputError> {
        let head = match l.toks.first() {
            Some((Tok::Ident(s), _)) if KEYWORDS.contains(&s.as_str()) => {
                let next = l.toks.get(1).map(|(t, _)| t);
                match (s.as_str(), next) {
                    ("gcd", Some(Tok::Sym("("))) | ("div", Some(Tok::Sym(":"))) => Some(s.clone()),
                    ("gcd", _) | ("div", _) => None,
                    _ => Some(s.clone()),
                }
            }
            _ => None,
        };
        if head.as_deref() != Some("vars") {
            self.need_vars(&l)?;
        }
        match head.as_deref() {
            Some("vars") => {
                if self.declared {
                    return Err(l.err("variables are already declared"));
                }
                l.next();
                while l.peek().is_some() {
                    let col = l.col();
                    let Some(name) = l.ident() else { return Err(l.unexpected("a variable name")) };
                    if KEYWORDS.contains(&name.as_str()) {
                        return Err(perr(l.no, col, format!("'{name}' is a keyword")));
                    }
                    if self.vars.insert(name.clone(), self.names.len()).is_some() {
                        return Err(perr(l.no, col, format!("variable '{name}' declared twice")));
                    }
                    self.names.push(name);
                }
                self.declared = true;
                self.inst.names = self.names.clone();
            }
            Some(kw @ ("minimize" | "maximize")) => {
                self.mode(l.no, Dialect::Ip, "objective")?;
                if self.inst.objective.is_some() {
                    return Err(l.err("objective given twice"));
                }
                l.next();
                let poly = l.poly(&self.vars)?;
                l.finish()?;
                let sense = if kw == "minimize" { Sense::Minimize } else { Sense::Maximize };
                self.inst.objective = Some(Objective { poly, sense });
            }
            Some("gcd") => {
                self.mode(l.no, Dialect::Ip, "gcd")?;
                l.next();
                l.expect("(")?;
                let f = l.poly(&self.vars)?;
                l.expect(",")?;
                let g = l.poly(&self.vars)?;
                l.expect(")")?;
                let rel = match l.next() {
                    Some(Tok::Sym("=")) => Rel::Eq,
                    Some(Tok::Sym("!=")) => Rel::Ne,
                    Some(Tok::Sym("<=")) => Rel::Le,
                    Some(Tok::Sym(">=")) => Rel::Ge,
                    _ => {
                        l.pos -= 1;
                        return Err(l.unexpected("one of = != <= >="));
                    }
                };
                let col = l.col();
                let c = l.int()?;
                if c < BigInt::one() {
                    return Err(perr(l.no, col, "gcd bound must be positive".into()));
                }
                l.finish()?;
                self.inst.gcds.push(GcdConstraint::new(f, g, rel, c));
            }
            Some("div") => {
                self.mode(l.no, Dialect::Div, "div")?;
                l.next();
                l.next();
                let col = l.col();
                let f = l.poly(&self.vars)?;
                if f.is_zero() {
                    return Err(perr(l.no, col, "left-hand side of a divisibility is zero".into()));
                }
                l.expect("|")?;
                let g = l.poly(&self.vars)?;
                l.finish()?;
                self.divs.push(DivConstraint::new(f, g));
            }
            Some("increasing") => {
                self.mode(l.no, Dialect::Div, "increasing")?;
                if self.partition.is_some() {
                    return Err(l.err("partition given twice"));
                }
                l.next();
                let mut blocks = vec![Vec::new()];
                let mut seen = vec![false; self.names.len()];
                loop {
                    let col = l.col();
                    if let Some(name) = l.ident() {
                        let Some(&v) = self.vars.get(&name) else {
                            return Err(perr(l.no, col, format!("undeclared variable '{name}'")));
                        };
                        if std::mem::replace(&mut seen[v], true) {
                            return Err(perr(l.no, col, format!("variable '{name}' listed twice")));
                        }
                        blocks.last_mut().expect("non-empty").push(v);
                    } else if l.peek().is_none() {
                        break;
                    } else if blocks.last().is_some_and(|b| !b.is_empty()) && l.eat("|") {
                        blocks.push(Vec::new());
                    } else {
                        return Err(l.unexpected("a variable name"));
                    }
                }
                if blocks.last().is_some_and(|b| b.is_empty()) {
                    return Err(l.unexpected("a variable name"));
                }
                if let Some(v) = seen.iter().position(|s| !s) {
                    return Err(l.err(format!("variable '{}' missing from the partition", self.names[v])));
                }
                self.partition = Some(blocks);
            }
            _ => {
                self.mode(l.no, Dialect::Ip, "inequality")?;
                let lhs = l.poly(&self.vars)?;
                let op = match l.next() {
                    Some(Tok::Sym(s @ ("<=" | ">=" | "="))) => s,
                    _ => {
                        l.pos -= 1;
                        return Err(l.unexpected("one of <= >= ="));
                    }
                };
                let rhs = l.poly(&self.vars)?;
                l.finish()?;
                match op {
                    "<=" => self.inst.rows.push(Inequality::le(&lhs, &rhs)),
                    ">=" => self.inst.rows.push(Inequality::ge(&lhs, &rhs)),
                    _ => {
                        self.inst.rows.push(Inequality::le(&lhs, &rhs));
                        self.inst.rows.push(Inequality::ge(&lhs, &rhs));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses an instance file.
///
/// # Errors
/// `Parse` with a 1-based line and column, or `MixedMode` when GCD-program
/// lines and divisibility lines share a file.
pub fn parse(text: &str) -> Result<Parsed, InputError> {
    let mut b = Builder {
        names: Vec::new(),
        vars: HashMap::new(),
        declared: false,
        dialect: None,
        inst: IpGcdInstance::default(),
        divs: Vec::new(),
        partition: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line::lex(i + 1, body)?;
        if !line.toks.is_empty() {
            b.line(line)?;
        }
    }
    if !b.declared {
        return Err(perr(1, 1, "missing 'vars' line".into()));
    }
    match b.dialect {
        Some((Dialect::Div, _)) => {
            let system = DivSystem::new((0..b.names.len()).collect(), b.divs).expect("variables and sides checked");
            Ok(Parsed::Div(DivFile { names: b.names, system, partition: b.partition }))
        }
        _ => Ok(Parsed::Ip(b.inst)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(text: &str) -> IpGcdInstance {
        match parse(text).unwrap() {
            Parsed::Ip(i) => i,
            other => panic!("expected a GCD program, got {other:?}"),
        }
    }

    fn at(text: &str) -> (usize, usize) {
        match parse(text) {
            Err(InputError::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn one_variable_program() {
        let inst = ip("vars x\n1 x >= 1\ngcd(x, x) = 1");
        assert_eq!(inst.names, vec!["x"]);
        assert_eq!(inst.rows, vec![Inequality { poly: LinearPoly::from_i64(&[(0, -1)], 1) }]);
        assert_eq!(inst.gcds, vec![GcdConstraint::new(LinearPoly::var(0), LinearPoly::var(0), Rel::Eq, 1)]);
    }

    #[test]
    fn divisibility_with_partition() {
        let Parsed::Div(d) = parse("vars x y\ndiv: x + 1 | y - 2\nincreasing x | y").unwrap() else { panic!() };
        let c = &d.system.constraints()[0];
        assert_eq!(c.lhs, LinearPoly::from_i64(&[(0, 1)], 1));
        assert_eq!(c.rhs, LinearPoly::from_i64(&[(1, 1)], -2));
        assert_eq!(d.partition, Some(vec![vec![0], vec![1]]));
    }

    #[test]
    fn terms_in_every_spelling() {
        let inst = ip("vars x y\nminimize 2 x + -1 y\n-x - 2y + 3*x + +4 <= -5 + y");
        assert_eq!(inst.objective.unwrap().poly, LinearPoly::from_i64(&[(0, 2), (1, -1)], 0));
        assert_eq!(inst.rows[0].poly, LinearPoly::from_i64(&[(0, 2), (1, -3)], 9));
    }

    #[test]
    fn equality_becomes_two_rows() {
        let inst = ip("vars x\nx = 3 # pinned");
        assert_eq!(inst.rows.len(), 2);
        assert_eq!(inst.rows[1].poly, inst.rows[0].poly.neg());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(at("vars x\ngcd(x) = 1"), (2, 6));
        assert_eq!(at("vars x\nx <= y"), (2, 6));
        assert_eq!(at("vars x\nx < 2"), (2, 3));
        assert_eq!(at("x <= 2"), (1, 1));
        assert_eq!(at("vars x\ngcd(x, 1) = 0"), (2, 13));
        assert_eq!(at("vars x y\ndiv: x | y\nincreasing x"), (3, 13));
    }

    #[test]
    fn dialects_do_not_mix() {
        let e = parse("vars x y\ngcd(x, y) = 1\ndiv: x | y").unwrap_err();
        assert_eq!(e, InputError::MixedMode { line: 3, found: "div", dialect: "gcd" });
        assert!(matches!(parse("vars x\ndiv: x | 2\nx <= 1"), Err(InputError::MixedMode { line: 3, .. })));
    }

    #[test]
    fn printed_form_parses_back() {
        let text = "vars a b\nmaximize a - 3 b\n2 a + -1 b <= 5\n0 <= a\ngcd(3 a + 1, b) >= 2\ngcd(a, 6) != 1\n";
        let first = parse(text).unwrap();
        assert_eq!(parse(&first.to_string()).unwrap(), first);
        let first = parse("vars x y z\ndiv: 2 x + 2 | 4 y\ndiv: -x | z\nincreasing x y | z\n").unwrap();
        assert_eq!(parse(&first.to_string()).unwrap(), first);
    }
}
