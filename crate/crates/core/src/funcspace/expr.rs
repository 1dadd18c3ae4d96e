//! Expression mini-language for user-supplied integrands.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' factor)?
//! atom   := number | 'x' | 'pi' | func '(' args ')' | '(' expr ')' | '-' atom
//! func   := sin | cos | exp | ln | abs | sqrt | sign | ind
//! ```
//!
//! `ind(a, b)` is the half-open indicator of `[a, b)` and takes two numeric
//! literals. `^` is right-associative and `-x^2` means `(-x)^2`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::{Integrability, Interval, RealFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinFn {
    Sin,
    Cos,
    Exp,
    Ln,
    Abs,
    Sqrt,
    Sign,
}

impl BuiltinFn {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => BuiltinFn::Sin,
            "cos" => BuiltinFn::Cos,
            "exp" => BuiltinFn::Exp,
            "ln" => BuiltinFn::Ln,
            "abs" => BuiltinFn::Abs,
            "sqrt" => BuiltinFn::Sqrt,
            "sign" => BuiltinFn::Sign,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            BuiltinFn::Sin => "sin",
            BuiltinFn::Cos => "cos",
            BuiltinFn::Exp => "exp",
            BuiltinFn::Ln => "ln",
            BuiltinFn::Abs => "abs",
            BuiltinFn::Sqrt => "sqrt",
            BuiltinFn::Sign => "sign",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            BuiltinFn::Sin => v.sin(),
            BuiltinFn::Cos => v.cos(),
            BuiltinFn::Exp => v.exp(),
            BuiltinFn::Ln => v.ln(),
            BuiltinFn::Abs => v.abs(),
            BuiltinFn::Sqrt => v.sqrt(),
            BuiltinFn::Sign => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether `f(0) = 0`, so a support hint survives application.
    fn preserves_zero(self) -> bool {
        matches!(self, BuiltinFn::Sin | BuiltinFn::Abs | BuiltinFn::Sqrt | BuiltinFn::Sign)
    }
}

/// Expression tree. Number literals are always non-negative; negation is an
/// explicit node so that printing and re-parsing gives the same tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(BuiltinFn, Box<Expr>),
    Ind(f64, f64),
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(p.error("empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    /// Consumes a binary operator; a missing right operand is reported at
    /// the operator.
    fn operator(&mut self) -> Result<(), ParseError> {
        let at = self.pos;
        let op = self.src[at] as char;
        self.pos += 1;
        match self.peek() {
            Some(c) if c.is_ascii_alphanumeric() || c == b'.' || c == b'(' || c == b'-' => Ok(()),
            _ => Err(ParseError::Syntax { offset: at, message: format!("`{op}` is missing its right operand") }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.operator()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.operator()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.operator()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(b'/') => {
                    self.operator()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.operator()?;
            let exponent = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.atom()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => Ok(Expr::Num(self.number()?)),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            Some(_) => Err(self.error("expected a number, `x`, a function call or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if name == "x" {
            return Ok(Expr::X);
        }
        if name == "pi" {
            return Ok(Expr::Num(std::f64::consts::PI));
        }
        if name == "ind" {
            self.expect(b'(')?;
            let a = self.signed_literal()?;
            self.expect(b',')?;
            let b = self.signed_literal()?;
            self.expect(b')')?;
            return Ok(Expr::Ind(a, b));
        }
        let Some(func) = BuiltinFn::from_name(name) else {
            return Err(ParseError::UnknownIdentifier { offset: start, name: name.to_string() });
        };
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        Ok(Expr::Call(func, Box::new(arg)))
    }

    fn signed_literal(&mut self) -> Result<f64, ParseError> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let v = self.number()?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.error("ind() takes numeric literal arguments")),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.src.len() && p.src[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
                return Err(self.error("malformed exponent"));
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => {
                self.pos = start;
                Err(self.error("number out of range"))
            }
        }
    }
}

impl Expr {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, b) => a.eval(x).powf(b.eval(x)),
            Expr::Call(f, a) => f.apply(a.eval(x)),
            Expr::Ind(lo, hi) => {
                if *lo <= x && x < *hi {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// An interval outside of which the expression is identically zero, when
    /// one can be read off the tree (products with an indicator, mostly).
    pub fn support_hint(&self) -> Option<Interval> {
        match self {
            Expr::Ind(lo, hi) => Interval::try_new(*lo, *hi),
            Expr::Num(v) if *v == 0.0 => None,
            Expr::Num(_) | Expr::X => None,
            Expr::Neg(a) => a.support_hint(),
            Expr::Add(a, b) | Expr::Sub(a, b) => Some(a.support_hint()?.hull(&b.support_hint()?)),
            Expr::Mul(a, b) => match (a.support_hint(), b.support_hint()) {
                (Some(s), Some(t)) => s.intersect(&t).or(Some(s)),
                (s, t) => s.or(t),
            },
            Expr::Div(a, _) => a.support_hint(),
            Expr::Pow(a, b) => match **b {
                Expr::Num(p) if p > 0.0 => a.support_hint(),
                _ => None,
            },
            Expr::Call(f, a) if f.preserves_zero() => a.support_hint(),
            Expr::Call(..) => None,
        }
    }

    /// Wraps the expression as a function on `domain`. When a support hint
    /// exists and lies in the domain, the function is tagged as compactly
    /// supported with a sampled bound.
    pub fn to_function(&self, domain: Interval, singularities: Vec<f64>) -> RealFunction {
        let tree = Arc::new(self.clone());
        let name = self.to_string();
        let eval_tree = Arc::clone(&tree);
        let mut f = RealFunction::new(name, domain, move |x| eval_tree.eval(x)).with_singularities(singularities);
        if let Some(support) = self.support_hint().and_then(|s| s.intersect(&domain)) {
            f = f.with_support(support);
            if f.singularities().is_empty() {
                let n = 4096;
                let bound = (0..=n)
                    .map(|i| tree.eval(support.lo + support.len() * i as f64 / n as f64).abs())
                    .fold(0.0, f64::max);
                if bound.is_finite() {
                    f = f.with_tag(Integrability::BoundedCompactSupport { bound });
                }
            }
        }
        f
    }
}

fn write_atom(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        Expr::Num(_) | Expr::X | Expr::Call(..) | Expr::Ind(..) | Expr::Neg(_) => write!(f, "{e}"),
        _ => write!(f, "({e})"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                write_atom(a, f)
            }
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => {
                write_atom(a, f)?;
                write!(f, "^")?;
                write_atom(b, f)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Ind(a, b) => write!(f, "ind({a:?}, {b:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let e = parse_expr("x^2 + 1").unwrap();
        assert_eq!(e.eval(2.0), 5.0);

        let e = parse_expr("ind(0,1)*sin(3.141592653589793*x)").unwrap();
        assert_eq!(e.eval(2.0), 0.0);
        assert!((e.eval(0.5) - 1.0).abs() < 1e-15);

        let err = parse_expr("x ++ 2").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { offset: 2, .. }), "{err:?}");
    }

    #[test]
    fn precedence_rules() {
        assert_eq!(parse_expr("2^3^2").unwrap().eval(0.0), 512.0);
        assert_eq!(parse_expr("-x^2").unwrap().eval(3.0), 9.0);
        assert_eq!(parse_expr("1 - 2 - 3").unwrap().eval(0.0), -4.0);
        assert_eq!(parse_expr("8 / 4 / 2").unwrap().eval(0.0), 1.0);
        assert_eq!(parse_expr("2 * x + 3 * x").unwrap().eval(1.0), 5.0);
        assert_eq!(parse_expr("2^-1").unwrap().eval(0.0), 0.5);
        assert_eq!(parse_expr("1.5e2 + .5").unwrap().eval(0.0), 150.5);
    }

    #[test]
    fn builtins_evaluate() {
        let e = parse_expr("sign(x) * sqrt(abs(x)) + ln(exp(1)) + cos(0)").unwrap();
        assert!((e.eval(-4.0) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse_expr("y + 1"),
            Err(ParseError::UnknownIdentifier { offset: 0, name: "y".into() })
        );
        assert_eq!(parse_expr("sin(pi*x)").unwrap().eval(0.5), 1.0);
        assert!(matches!(parse_expr("foo(x)"), Err(ParseError::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(parse_expr("ind(x, 1)"), Err(ParseError::Syntax { offset: 4, .. })));
        assert!(matches!(parse_expr("ind(0, 1, 2)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("(x + 1"), Err(ParseError::Syntax { offset: 6, .. })));
        assert!(matches!(parse_expr("1e"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("1e999"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("   "), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x x"), Err(ParseError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn support_hints() {
        let e = parse_expr("ind(0,1)*sin(3*x)").unwrap();
        assert_eq!(e.support_hint(), Some(Interval::new(0.0, 1.0)));
        let e = parse_expr("ind(-1,0) + 2*ind(0.5, 2)").unwrap();
        assert_eq!(e.support_hint(), Some(Interval::new(-1.0, 2.0)));
        assert_eq!(parse_expr("exp(x)").unwrap().support_hint(), None);
        let f = parse_expr("3*ind(0,2)").unwrap().to_function(Interval::new(-1.0, 3.0), vec![]);
        assert_eq!(f.bound(), Some(3.0));
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0.0f64..1e6).prop_map(Expr::Num),
            Just(Expr::X),
            (-10.0f64..10.0, 0.0f64..10.0).prop_map(|(a, w)| Expr::Ind(a, a + w + 1e-3)),
        ];
        leaf.prop_recursive(5, 48, 2, |inner| {
            let func = prop_oneof![
                Just(BuiltinFn::Sin),
                Just(BuiltinFn::Cos),
                Just(BuiltinFn::Exp),
                Just(BuiltinFn::Ln),
                Just(BuiltinFn::Abs),
                Just(BuiltinFn::Sqrt),
                Just(BuiltinFn::Sign),
            ];
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
                (func, inner).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn print_then_parse_is_identity(e in arb_expr()) {
            let printed = e.to_string();
            let reparsed = parse_expr(&printed).unwrap();
            prop_assert_eq!(&reparsed, &e);
            prop_assert_eq!(parse_expr(&reparsed.to_string()).unwrap(), reparsed);
        }
    }
}
