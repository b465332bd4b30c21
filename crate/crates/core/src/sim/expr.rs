//! Arithmetic for `delay` lines: numbers with optional `s`/`ms`/`us` units,
//! `pi`, `J(A,B)` (Hz, looked up in the spin system), `sqrt`, `atan`, and
//! `+ - * /` with parentheses.

use std::fmt;

use crate::error::{Error, Result};
use crate::spin::SpinSystem;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Coupling(String, String),
    Call(Func, Box<Expr>),
    Neg(Box<Expr>),
    Bin(Op, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Atan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> std::result::Result<Vec<Tok>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent, only when followed by a digit or sign+digit
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let mut v: f64 = text.parse().map_err(|_| format!("bad number `{text}`"))?;
            let ustart = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            let unit: String = chars[ustart..i].iter().collect();
            v *= match unit.as_str() {
                "" | "s" => 1.0,
                "ms" => 1e-3,
                "us" => 1e-6,
                u => return Err(format!("unknown unit `{u}`")),
            };
            out.push(Tok::Num(v));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/(),".contains(ch) {
            out.push(Tok::Sym(ch));
            i += 1;
        } else {
            return Err(format!("unexpected character `{ch}`"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, c: char) -> std::result::Result<(), String> {
        match self.next() {
            Some(Tok::Sym(s)) if s == c => Ok(()),
            other => Err(format!("expected `{c}`, found {}", describe(other.as_ref()))),
        }
    }

    fn expr(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.term()?;
        while let Some(Tok::Sym(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(if c == '+' { Op::Add } else { Op::Sub }, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> std::result::Result<Expr, String> {
        let mut lhs = self.factor()?;
        while let Some(Tok::Sym(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = Expr::Bin(if c == '*' { Op::Mul } else { Op::Div }, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> std::result::Result<Expr, String> {
        match self.next() {
            Some(Tok::Sym('-')) => Ok(Expr::Neg(Box::new(self.factor()?))),
            Some(Tok::Sym('(')) => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::Ident(name)) => match name.as_str() {
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "J" => {
                    self.expect('(')?;
                    let a = self.ident()?;
                    self.expect(',')?;
                    let b = self.ident()?;
                    self.expect(')')?;
                    Ok(Expr::Coupling(a, b))
                }
                "sqrt" | "atan" => {
                    self.expect('(')?;
                    let e = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::Call(if name == "sqrt" { Func::Sqrt } else { Func::Atan }, Box::new(e)))
                }
                _ => Err(format!("unknown name `{name}`")),
            },
            other => Err(format!("unexpected {}", describe(other.as_ref()))),
        }
    }

    fn ident(&mut self) -> std::result::Result<String, String> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => Err(format!("expected a spin label, found {}", describe(other.as_ref()))),
        }
    }
}

fn describe(t: Option<&Tok>) -> String {
    match t {
        None => "end of expression".into(),
        Some(Tok::Num(v)) => format!("number {v}"),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Sym(c)) => format!("`{c}`"),
    }
}

impl Expr {
    pub fn parse(s: &str) -> std::result::Result<Expr, String> {
        let mut p = Parser { toks: tokenize(s)?, pos: 0 };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(format!("trailing {}", describe(p.peek())));
        }
        Ok(e)
    }

    pub fn eval(&self, system: &SpinSystem<f64>) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::Coupling(a, b) => system.coupling_by_label(a, b)?,
            Expr::Call(f, e) => {
                let v = e.eval(system)?;
                match f {
                    Func::Sqrt => v.sqrt(),
                    Func::Atan => v.atan(),
                }
            }
            Expr::Neg(e) => -e.eval(system)?,
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.eval(system)?, b.eval(system)?);
                match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div => x / y,
                }
            }
        })
    }

    /// Value when the expression needs no spin system.
    pub fn constant(&self) -> Option<f64> {
        match self {
            Expr::Num(v) => Some(*v),
            Expr::Coupling(..) => None,
            Expr::Call(f, e) => e.constant().map(|v| match f {
                Func::Sqrt => v.sqrt(),
                Func::Atan => v.atan(),
            }),
            Expr::Neg(e) => e.constant().map(|v| -v),
            Expr::Bin(op, a, b) => {
                let (x, y) = (a.constant()?, b.constant()?);
                Some(match op {
                    Op::Add => x + y,
                    Op::Sub => x - y,
                    Op::Mul => x * y,
                    Op::Div => x / y,
                })
            }
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        match self {
            Expr::Num(_) => vec![],
            Expr::Coupling(a, b) => vec![a.as_str(), b.as_str()],
            Expr::Call(_, e) | Expr::Neg(e) => e.labels(),
            Expr::Bin(_, a, b) => {
                let mut v = a.labels();
                v.extend(b.labels());
                v
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Coupling(a, b) => write!(f, "J({a},{b})"),
            Expr::Call(func, e) => write!(f, "{}({e})", if *func == Func::Sqrt { "sqrt" } else { "atan" }),
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Bin(op, a, b) => {
                let c = match op {
                    Op::Add => '+',
                    Op::Sub => '-',
                    Op::Mul => '*',
                    Op::Div => '/',
                };
                write!(f, "({a} {c} {b})")
            }
        }
    }
}

pub(crate) fn check_nonnegative(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::Validation(format!("{what} must be a non-negative duration, got {v}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::preset_alanine;

    fn ev(s: &str) -> f64 {
        Expr::parse(s).unwrap().eval(&preset_alanine()).unwrap()
    }

    #[test]
    fn units_and_precedence() {
        assert!((ev("3.88ms") - 3.88e-3).abs() < 1e-18);
        assert!((ev("1 + 2 * 3") - 7.0).abs() < 1e-15);
        assert!((ev("(1 + 2) * 3") - 9.0).abs() < 1e-15);
        assert!((ev("-2us") + 2e-6).abs() < 1e-18);
        assert!((ev("1e-3") - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn couplings_and_functions() {
        assert!((ev("1/(2*J(S,I1))") - 1.0 / 259.6).abs() < 1e-15);
        assert!((ev("atan(sqrt(2))/(pi*J(I1,S))") - 2f64.sqrt().atan() / (std::f64::consts::PI * 129.8)).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert!(Expr::parse("1 +").is_err());
        assert!(Expr::parse("3 fortnights").is_err());
        assert!(Expr::parse("foo(1)").is_err());
        assert!(Expr::parse("1 2").is_err());
        assert!(Expr::parse("J(S,Q)").unwrap().eval(&preset_alanine()).is_err());
    }

    #[test]
    fn constant_folding() {
        assert_eq!(Expr::parse("2*3ms").unwrap().constant(), Some(6e-3));
        assert_eq!(Expr::parse("J(S,M)").unwrap().constant(), None);
    }
}
