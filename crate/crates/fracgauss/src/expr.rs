//! Arithmetic expressions over one free variable (`t` in the time domain,
//! `s` in the transform domain), with a real evaluator for sampling and a
//! complex evaluator for contour evaluation.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | power
//! power   := primary ('^' factor)?
//! primary := number | variable | 'pi' | 'e' | function '(' expr ')' | '(' expr ')'
//! number  := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
//! ```
//!
//! `^` is right-associative and binds tighter than unary minus, so `-t^2`
//! is `-(t^2)` and `2^-3` is legal. Functions: exp, ln, sqrt, sin, cos,
//! gamma, abs. No implicit multiplication, no hex literals.

use crate::error::{Error, Result};
use crate::specfun::{self, ComplexScalar};

#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Number(f64),
    Var,
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sqrt,
    Sin,
    Cos,
    Gamma,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sqrt" => Some(Func::Sqrt),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "gamma" => Some(Func::Gamma),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Gamma => "gamma",
            Func::Abs => "abs",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
        }
    }
}

fn parse_err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        position,
        message: message.into(),
    })
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // exponent only when it is actually followed by digits,
                // so `2e3` is one literal but `e` in `2*e` stays a name
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let slice = &text[start..i];
                let value: f64 = slice.parse().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("invalid number literal '{slice}'"),
                })?;
                if !value.is_finite() {
                    return parse_err(start, format!("number literal '{slice}' out of range"));
                }
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return parse_err(i, format!("unexpected character '{ch}'"));
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    var_name: &'a str,
    input_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, p)| p)
            .unwrap_or(self.input_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Ast::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = Ast::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Ast::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Ast::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary minus binds looser than '^': -t^2 parses as -(t^2)
    fn factor(&mut self) -> Result<Ast> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            let inner = self.factor()?;
            return Ok(Ast::Neg(Box::new(inner)));
        }
        self.power()
    }

    // right-associative: t^2^3 = t^(2^3)
    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exponent = self.factor()?;
            return Ok(Ast::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast> {
        let position = self.here();
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Ast::Number(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(other) => parse_err(
                        self.here().saturating_sub(1),
                        format!("expected ')', found {}", other.describe()),
                    ),
                    None => parse_err(self.input_len, "expected ')', found end of input"),
                }
            }
            Some(Tok::Ident(name)) => {
                if name == self.var_name {
                    return Ok(Ast::Var);
                }
                match name.as_str() {
                    "pi" => return Ok(Ast::Number(std::f64::consts::PI)),
                    "e" => return Ok(Ast::Number(std::f64::consts::E)),
                    _ => {}
                }
                if let Some(func) = Func::from_name(&name) {
                    if !matches!(self.peek(), Some(Tok::LParen)) {
                        return parse_err(
                            self.here(),
                            format!("expected '(' after function '{}'", func.name()),
                        );
                    }
                    self.bump();
                    let arg = self.expr()?;
                    match self.bump() {
                        Some(Tok::RParen) => Ok(Ast::Call(func, Box::new(arg))),
                        Some(other) => parse_err(
                            self.here().saturating_sub(1),
                            format!("expected ')', found {}", other.describe()),
                        ),
                        None => parse_err(self.input_len, "expected ')', found end of input"),
                    }
                } else {
                    parse_err(position, format!("unknown identifier '{name}'"))
                }
            }
            Some(other) => parse_err(position, format!("unexpected token {}", other.describe())),
            None => parse_err(self.input_len, "unexpected end of input"),
        }
    }
}

/// Parse `text` over the single free variable `var_name` ("t" or "s").
pub fn parse(text: &str, var_name: &str) -> Result<Ast> {
    if var_name != "t" && var_name != "s" {
        return Err(Error::InvalidArgument(format!(
            "variable name must be \"t\" or \"s\", got \"{var_name}\""
        )));
    }
    if text.trim().is_empty() {
        return parse_err(0, "empty expression");
    }
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        var_name,
        input_len: text.len(),
    };
    let ast = parser.expr()?;
    if let Some(tok) = parser.peek() {
        let desc = tok.describe();
        return parse_err(parser.here(), format!("unexpected token {desc}"));
    }
    Ok(ast)
}

fn pow_real(base: f64, exponent: f64) -> Result<f64> {
    if base == 0.0 && exponent < 0.0 {
        return Err(Error::Domain(format!(
            "'^' with zero base and negative exponent {exponent}"
        )));
    }
    let value = if base < 0.0 {
        if !specfun::is_near_integer(exponent) {
            return Err(Error::Domain(format!(
                "'^' with negative base {base} and non-integer exponent {exponent}"
            )));
        }
        if exponent.abs() > 9.0e15 {
            return Err(Error::Domain(format!(
                "'^' exponent {exponent} too large for a negative base"
            )));
        }
        let k = exponent.round();
        let magnitude = (-base).powf(k);
        if (k as i64) % 2 == 0 {
            magnitude
        } else {
            -magnitude
        }
    } else {
        base.powf(exponent)
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(format!(
            "'^' produced a non-finite value for base {base}, exponent {exponent}"
        )))
    }
}

/// Evaluate in real (IEEE double) mode; the free variable takes `value`.
pub fn eval_real(ast: &Ast, value: f64) -> Result<f64> {
    let v = match ast {
        Ast::Number(v) => *v,
        Ast::Var => value,
        Ast::Neg(inner) => -eval_real(inner, value)?,
        Ast::Bin(op, a, b) => {
            let x = eval_real(a, value)?;
            let y = eval_real(b, value)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    x / y
                }
                BinOp::Pow => pow_real(x, y)?,
            }
        }
        Ast::Call(func, arg) => {
            let x = eval_real(arg, value)?;
            match func {
                Func::Exp => x.exp(),
                Func::Ln => {
                    if x <= 0.0 {
                        return Err(Error::Domain(format!("ln of non-positive argument {x}")));
                    }
                    x.ln()
                }
                Func::Sqrt => {
                    if x < 0.0 {
                        return Err(Error::Domain(format!("sqrt of negative argument {x}")));
                    }
                    x.sqrt()
                }
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Gamma => specfun::gamma(x)?,
                Func::Abs => x.abs(),
            }
        }
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(
            "expression evaluated to a non-finite value".into(),
        ))
    }
}

/// Evaluate in complex mode. Powers and logs take the principal branch
/// (argument in (-pi, pi]); gamma is not available here.
pub fn eval_complex(ast: &Ast, value: ComplexScalar) -> Result<ComplexScalar> {
    let v = match ast {
        Ast::Number(v) => ComplexScalar::new(*v, 0.0),
        Ast::Var => value,
        Ast::Neg(inner) => -eval_complex(inner, value)?,
        Ast::Bin(op, a, b) => {
            let x = eval_complex(a, value)?;
            let y = eval_complex(b, value)?;
            match op {
                BinOp::Add => x + y,
                BinOp::Sub => x - y,
                BinOp::Mul => x * y,
                BinOp::Div => {
                    if y.re == 0.0 && y.im == 0.0 {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    x / y
                }
                BinOp::Pow => {
                    if x.re == 0.0 && x.im == 0.0 {
                        if y.im == 0.0 && y.re > 0.0 {
                            ComplexScalar::new(0.0, 0.0)
                        } else {
                            return Err(Error::Domain(format!(
                                "'^' with zero base and exponent {y}"
                            )));
                        }
                    } else {
                        x.powc(y)
                    }
                }
            }
        }
        Ast::Call(func, arg) => {
            let x = eval_complex(arg, value)?;
            match func {
                Func::Exp => x.exp(),
                Func::Ln => {
                    if x.re == 0.0 && x.im == 0.0 {
                        return Err(Error::Domain("ln of zero".into()));
                    }
                    x.ln()
                }
                Func::Sqrt => x.sqrt(),
                Func::Sin => x.sin(),
                Func::Cos => x.cos(),
                Func::Gamma => {
                    return Err(Error::Unsupported(
                        "gamma is not available in complex mode".into(),
                    ))
                }
                Func::Abs => ComplexScalar::new(x.norm(), 0.0),
            }
        }
    };
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(
            "expression evaluated to a non-finite complex value".into(),
        ))
    }
}
