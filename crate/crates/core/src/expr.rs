//! Scalar expressions in chart coordinates.
//!
//! Every geometric input (metric entries, the almost complex structure,
//! the submersion components and the Clairaut exponent) is an [`Expr`]
//! over the variables `x1 .. xm`. Expressions are parsed from infix text,
//! evaluated at points and differentiated exactly.
//!
//! Grammar (left-associative `+ - * /`, right-associative `^`):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' unary)?          exponent must be constant
//! primary := number | 'pi' | var | func '(' sum ')' | '(' sum ')'
//! func    := sqrt | ln | exp | sin | cos
//! ```

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Elementary function applied to a single argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Neg,
    Sqrt,
    Ln,
    Exp,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Neg => "-",
            Func::Sqrt => "sqrt",
            Func::Ln => "ln",
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sqrt" => Func::Sqrt,
            "ln" => Func::Ln,
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

/// Expression tree. Variables are zero-based internally: `Var(0)` prints as `x1`.
///
/// Subtrees are reference counted so derivative trees share structure with
/// their source instead of deep-copying it.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Unary(Func, Arc<Expr>),
    Binary(BinOp, Arc<Expr>, Arc<Expr>),
    /// Power with a constant exponent.
    Pow(Arc<Expr>, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected token '{0}'")]
    UnexpectedToken(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("malformed number '{0}'")]
    BadNumber(String),
    #[error("unknown identifier '{0}'")]
    UnknownIdentifier(String),
    #[error("variable x{index} exceeds coordinate count {dim}")]
    VariableOutOfRange { index: usize, dim: usize },
    #[error("exponent must be a constant")]
    NonConstantExponent,
}

/// Parse failure with a 1-based character position (end of input is `len + 1`).
#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at position {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("domain error in '{node}': {reason}")]
    Domain { node: String, reason: &'static str },
    #[error("point has {got} coordinates but expression uses x{needed}")]
    PointDimension { needed: usize, got: usize },
}

fn domain(node: &Expr, reason: &'static str) -> EvalError {
    EvalError::Domain {
        node: node.to_string(),
        reason,
    }
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    /// Zero-based coordinate variable.
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn zero() -> Expr {
        Expr::Const(0.0)
    }

    pub fn one() -> Expr {
        Expr::Const(1.0)
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn unary(f: Func, a: Expr) -> Expr {
        if let Expr::Const(c) = a {
            if f == Func::Neg {
                return Expr::Const(-c);
            }
        }
        Expr::Unary(f, Arc::new(a))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::unary(Func::Neg, a)
    }

    // The folding below only removes additive/multiplicative identities and
    // zeros; it never changes the value of the tree.

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Binary(BinOp::Add, Arc::new(a), Arc::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x - y),
            (Some(x), _) if x == 0.0 => Expr::neg(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expr::Binary(BinOp::Sub, Arc::new(a), Arc::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expr::Const(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expr::zero(),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Binary(BinOp::Mul, Arc::new(a), Arc::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (a.as_const(), b.as_const()) {
            (Some(x), _) if x == 0.0 => Expr::zero(),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expr::Binary(BinOp::Div, Arc::new(a), Arc::new(b)),
        }
    }

    pub fn pow(a: Expr, exponent: f64) -> Expr {
        if exponent == 1.0 {
            return a;
        }
        if exponent == 0.0 {
            return Expr::one();
        }
        Expr::Pow(Arc::new(a), exponent)
    }

    /// Sum of an iterator of expressions (zero when empty).
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        terms.into_iter().fold(Expr::zero(), Expr::add)
    }

    /// One past the largest variable index used, i.e. the minimum chart dimension.
    pub fn min_dim(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.min_dim(),
            Expr::Binary(_, a, b) => a.min_dim().max(b.min_dim()),
        }
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64, EvalError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => *p.get(*i).ok_or(EvalError::PointDimension {
                needed: i + 1,
                got: p.len(),
            })?,
            Expr::Unary(f, a) => {
                let x = a.eval(p)?;
                match f {
                    Func::Neg => -x,
                    Func::Sqrt => {
                        if x < 0.0 {
                            return Err(domain(self, "square root of a negative number"));
                        }
                        x.sqrt()
                    }
                    Func::Ln => {
                        if x <= 0.0 {
                            return Err(domain(self, "logarithm of a non-positive number"));
                        }
                        x.ln()
                    }
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                }
            }
            Expr::Binary(op, a, b) => {
                let x = a.eval(p)?;
                let y = b.eval(p)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(domain(self, "division by zero"));
                        }
                        x / y
                    }
                }
            }
            Expr::Pow(a, k) => {
                let x = a.eval(p)?;
                if x == 0.0 && *k < 0.0 {
                    return Err(domain(self, "zero raised to a negative power"));
                }
                if x < 0.0 && k.fract() != 0.0 {
                    return Err(domain(self, "negative base with fractional exponent"));
                }
                if k.fract() == 0.0 && k.abs() <= i32::MAX as f64 {
                    x.powi(*k as i32)
                } else {
                    x.powf(*k)
                }
            }
        };
        if !v.is_finite() {
            return Err(domain(self, "non-finite result"));
        }
        Ok(v)
    }

    /// Exact partial derivative with respect to the zero-based coordinate `i`.
    pub fn diff(&self, i: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(j) => {
                if *j == i {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Unary(f, a) => {
                let da = a.diff(i);
                if da.is_zero() {
                    return Expr::zero();
                }
                let a = (**a).clone();
                let outer = match f {
                    Func::Neg => return Expr::neg(da),
                    // d sqrt(u) = u' / (2 sqrt(u))
                    Func::Sqrt => {
                        return Expr::div(da, Expr::mul(Expr::Const(2.0), self.clone()))
                    }
                    Func::Ln => return Expr::div(da, a),
                    Func::Exp => self.clone(),
                    Func::Sin => Expr::unary(Func::Cos, a),
                    Func::Cos => Expr::neg(Expr::unary(Func::Sin, a)),
                };
                Expr::mul(outer, da)
            }
            Expr::Binary(op, a, b) => {
                let da = a.diff(i);
                let db = b.diff(i);
                let (a, b) = ((**a).clone(), (**b).clone());
                match op {
                    BinOp::Add => Expr::add(da, db),
                    BinOp::Sub => Expr::sub(da, db),
                    BinOp::Mul => Expr::add(Expr::mul(da, b), Expr::mul(a, db)),
                    BinOp::Div => {
                        if db.is_zero() {
                            Expr::div(da, b)
                        } else {
                            Expr::div(
                                Expr::sub(Expr::mul(da, b.clone()), Expr::mul(a, db)),
                                Expr::pow(b, 2.0),
                            )
                        }
                    }
                }
            }
            Expr::Pow(a, k) => {
                let da = a.diff(i);
                if da.is_zero() {
                    return Expr::zero();
                }
                Expr::mul(
                    Expr::mul(Expr::Const(*k), Expr::pow((**a).clone(), k - 1.0)),
                    da,
                )
            }
        }
    }

    /// Gradient expressions `[d/dx1, .., d/dxdim]`.
    pub fn gradient(&self, dim: usize) -> Vec<Expr> {
        (0..dim).map(|i| self.diff(i)).collect()
    }
}

fn fmt_const(c: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c < 0.0 || (c == 0.0 && c.is_sign_negative()) {
        write!(f, "(-{})", -c)
    } else {
        write!(f, "{c}")
    }
}

/// Fully parenthesised output that re-parses to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => fmt_const(*c, f),
            Expr::Var(i) => write!(f, "x{}", i + 1),
            Expr::Unary(Func::Neg, a) => write!(f, "(-{a})"),
            Expr::Unary(func, a) => write!(f, "{}({a})", func.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Pow(a, k) => {
                write!(f, "({a}^")?;
                fmt_const(*k, f)?;
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
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
            let lit: String = chars[start..i].iter().collect();
            let v = lit.parse::<f64>().map_err(|_| ParseError {
                position: pos,
                kind: ParseErrorKind::BadNumber(lit.clone()),
            })?;
            out.push((Tok::Num(v), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), pos));
            i += 1;
        } else {
            return Err(ParseError {
                position: pos,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            position: self.pos(),
            kind,
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            None => self.err(ParseErrorKind::UnexpectedEnd),
            Some(Tok::Num(v)) => self.err(ParseErrorKind::UnexpectedToken(v.to_string())),
            Some(Tok::Ident(s)) => self.err(ParseErrorKind::UnexpectedToken(s.clone())),
            Some(Tok::Sym(c)) => self.err(ParseErrorKind::UnexpectedToken(c.to_string())),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Expr::Binary(op, Arc::new(lhs), Arc::new(rhs));
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Arc::new(lhs), Arc::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            let a = self.unary()?;
            return Ok(Expr::Unary(Func::Neg, Arc::new(a)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.pos();
        let exponent = self.unary()?;
        if exponent.min_dim() > 0 {
            return Err(ParseError {
                position: at,
                kind: ParseErrorKind::NonConstantExponent,
            });
        }
        let k = exponent.eval(&[]).map_err(|_| ParseError {
            position: at,
            kind: ParseErrorKind::NonConstantExponent,
        })?;
        Ok(Expr::Pow(Arc::new(base), k))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(Expr::Const(v))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if let Some(func) = Func::from_name(&name) {
                    self.expect('(')?;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    return Ok(Expr::Unary(func, Arc::new(arg)));
                }
                if name == "pi" {
                    return Ok(Expr::Const(std::f64::consts::PI));
                }
                if let Some(digits) = name.strip_prefix('x') {
                    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                        let index: usize = digits.parse().unwrap_or(usize::MAX);
                        if index == 0 || index > self.dim {
                            return Err(ParseError {
                                position: pos,
                                kind: ParseErrorKind::VariableOutOfRange {
                                    index,
                                    dim: self.dim,
                                },
                            });
                        }
                        return Ok(Expr::Var(index - 1));
                    }
                }
                Err(ParseError {
                    position: pos,
                    kind: ParseErrorKind::UnknownIdentifier(name),
                })
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parse `text` as an expression over `x1 .. x<dim>`.
pub fn parse(text: &str, dim: usize) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        at: 0,
        end: text.chars().count() + 1,
        dim,
    };
    let e = parser.sum()?;
    if parser.peek().is_some() {
        return Err(parser.unexpected());
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;

    /// Parses without a dimension bound.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s, usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, p: &[f64]) -> f64 {
        parse(text, 4).unwrap().eval(p).unwrap()
    }

    #[test]
    fn pythagorean_radius() {
        assert_eq!(ev("sqrt(x1^2 + x2^2)", &[3.0, 4.0, 0.0, 0.0]), 5.0);
    }

    #[test]
    fn dangling_operator_reports_end_position() {
        let err = parse("x1 +", 4).unwrap_err();
        assert_eq!(err.position, 5);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn clairaut_exponent_parses() {
        let f = parse("ln(sqrt(x1^2+x2^2))", 4).unwrap();
        let v = f.eval(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((v - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((v - 0.34657359027997264).abs() < 1e-15);
    }

    #[test]
    fn constant_is_constant() {
        assert_eq!(ev("7", &[0.3, -2.0, 5.0, 1.0]), 7.0);
    }

    #[test]
    fn division_by_zero_names_node() {
        let e = parse("x1/x2", 4).unwrap();
        match e.eval(&[1.0, 0.0, 0.0, 0.0]) {
            Err(EvalError::Domain { node, .. }) => assert_eq!(node, "(x1 / x2)"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn log_and_negative_power_domains() {
        assert!(parse("ln(x1)", 1).unwrap().eval(&[0.0]).is_err());
        assert!(parse("ln(x1)", 1).unwrap().eval(&[-1.0]).is_err());
        assert!(parse("x1^-1", 1).unwrap().eval(&[0.0]).is_err());
        assert!(parse("sqrt(x1)", 1).unwrap().eval(&[-1.0]).is_err());
    }

    #[test]
    fn unknown_identifier_and_range() {
        let e = parse("foo(x1)", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
        assert_eq!(e.position, 1);
        let e = parse("x1 + x5", 4).unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::VariableOutOfRange { index: 5, dim: 4 }
        );
        assert_eq!(e.position, 6);
        assert!(parse("x0", 4).is_err());
    }

    #[test]
    fn exponent_must_be_constant() {
        let e = parse("x1^x2", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonConstantExponent);
        assert_eq!(ev("x1^(1/2)", &[4.0]), 2.0);
        assert_eq!(ev("x1^-2", &[2.0]), 0.25);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2^3^2", &[]), 512.0);
        assert_eq!(ev("-2^2", &[]), -4.0);
        assert_eq!(ev("8/4/2", &[]), 1.0);
        assert_eq!(ev("8-4-2", &[]), 2.0);
        assert_eq!(ev("1 + 2*3", &[]), 7.0);
        assert_eq!(ev("1.5e1 + 2E-1", &[]), 15.2);
    }

    #[test]
    fn derivative_rules() {
        let c = parse("3.5", 4).unwrap();
        assert!(c.diff(0).is_zero());

        let f = parse("ln(sqrt(x1^2+x2^2))", 4).unwrap();
        let d = f.diff(0).eval(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((d - 0.5).abs() < 1e-14);

        let m = parse("x1*x2", 2).unwrap();
        let d2 = m.diff(1);
        for p in [[1.0, 2.0], [-3.0, 0.5], [0.0, 7.0]] {
            assert_eq!(d2.eval(&p).unwrap(), p[0]);
        }
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "sqrt(x1^2 + x2^2)",
            "-x1 * (x2 - 3) / exp(-x3)",
            "cos(x1)^-1.5 + sin(x2) - 1e-7",
            "-(-2)",
        ] {
            let e = parse(text, 4).unwrap();
            let again = parse(&e.to_string(), 4).unwrap();
            assert_eq!(e, again, "{text} -> {e}");
        }
    }
}
