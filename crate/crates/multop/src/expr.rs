//! Tiny expression language for scalar symbol entries: complex-valued
//! expressions in the atom coordinate `x`.
//!
//! Grammar (usual precedence, `^` right-associative and binding tightest,
//! then unary minus, then `* /`, then `+ -`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'i' | 'x' | func '(' expr ')' | '(' expr ')'
//! func   := exp | log | sin | cos | sqrt | abs | conj
//! ```
//!
//! `log`, `sqrt` and non-integer powers use principal branches; integer
//! powers go through repeated squaring so dyadic literals stay exact.

use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

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
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
    Conj,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Conj => "conj",
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Literal(Complex64),
    Variable,
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

impl Expression {
    /// Evaluate at the real coordinate `x`. Division by zero and overflow
    /// yield non-finite values; callers decide whether that is an error.
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Expression::Literal(z) => *z,
            Expression::Variable => Complex64::new(x, 0.0),
            Expression::Neg(inner) => -inner.eval(x),
            Expression::Binary(op, lhs, rhs) => {
                let a = lhs.eval(x);
                let b = rhs.eval(x);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => pow(a, b),
                }
            }
            Expression::Call(f, inner) => {
                let z = inner.eval(x);
                match f {
                    Func::Exp => z.exp(),
                    Func::Log => on_real_axis(z).ln(),
                    Func::Sin => z.sin(),
                    Func::Cos => z.cos(),
                    Func::Sqrt => on_real_axis(z).sqrt(),
                    Func::Abs => Complex64::new(z.norm(), 0.0),
                    Func::Conj => z.conj(),
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expression::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expression::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expression::Neg(_) => 3,
            Expression::Binary(BinOp::Pow, ..) => 4,
            _ => 5,
        }
    }
}

/// A zero imaginary part of either sign reads as the real axis itself, so
/// branch cuts of `log`, `sqrt` and `^` are approached from above.
fn on_real_axis(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// `a^b`: repeated squaring for integer exponents, principal branch
/// otherwise.
fn pow(a: Complex64, b: Complex64) -> Complex64 {
    if b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() <= i32::MAX as f64 {
        let k = b.re as i32;
        return a.powi(k);
    }
    if a.re == 0.0 && a.im == 0.0 {
        // 0^b with non-integer b: principal value
        return Complex64::new(0.0, 0.0);
    }
    (b * on_real_axis(a).ln()).exp()
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // parenthesize children whose precedence is too low for the context
        fn child(f: &mut fmt::Formatter<'_>, e: &Expression, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                fmt::Display::fmt(e, f)?;
                write!(f, ")")
            } else {
                fmt::Display::fmt(e, f)
            }
        }
        match self {
            Expression::Literal(z) => {
                if z.im == 0.0 {
                    if z.re < 0.0 {
                        write!(f, "({})", z.re)
                    } else {
                        write!(f, "{}", z.re)
                    }
                } else if z.re == 0.0 && z.im == 1.0 {
                    write!(f, "i")
                } else {
                    write!(f, "({}+{}*i)", z.re, z.im)
                }
            }
            Expression::Variable => write!(f, "x"),
            Expression::Neg(inner) => {
                write!(f, "-")?;
                child(f, inner, 3)
            }
            Expression::Binary(op, lhs, rhs) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    // right-associative: parenthesize a left child of equal precedence
                    child(f, lhs, prec + 1)?;
                    write!(f, "{sym}")?;
                    child(f, rhs, 3)
                } else {
                    child(f, lhs, prec)?;
                    write!(f, "{sym}")?;
                    // left-associative: right child needs strictly higher precedence
                    child(f, rhs, prec + 1)
                }
            }
            Expression::Call(func, inner) => {
                write!(f, "{}(", func.name())?;
                fmt::Display::fmt(inner, f)?;
                write!(f, ")")
            }
        }
    }
}

/// Parse an expression, reporting syntax errors with byte offsets.
pub fn parse(text: &str) -> Result<Expression> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let expr = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(Error::Parse {
            offset: tok.offset,
            message: format!("unexpected `{}`", tok.kind.describe()),
        });
    }
    Ok(expr)
}

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Number(v) => format!("{v}"),
            TokenKind::Ident(s) => s.clone(),
            TokenKind::Plus => "+".into(),
            TokenKind::Minus => "-".into(),
            TokenKind::Star => "*".into(),
            TokenKind::Slash => "/".into(),
            TokenKind::Caret => "^".into(),
            TokenKind::LParen => "(".into(),
            TokenKind::RParen => ")".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                let kind = match b {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                };
                tokens.push(Token { kind, offset: start });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent part
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
                    offset: start,
                    message: format!("malformed number `{slice}`"),
                })?;
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    offset: start,
                });
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    offset: start,
                });
            }
            _ => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character `{}`", &text[start..start + 1]),
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next_offset(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().map(|t| &t.kind) == Some(kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<()> {
        if self.eat(&kind) {
            Ok(())
        } else {
            Err(Error::Parse {
                offset: self.next_offset(),
                message: format!("expected `{}`", kind.describe()),
            })
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat(&TokenKind::Plus) {
                BinOp::Add
            } else if self.eat(&TokenKind::Minus) {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat(&TokenKind::Star) {
                BinOp::Mul
            } else if self.eat(&TokenKind::Slash) {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expression> {
        if self.eat(&TokenKind::Minus) {
            Ok(Expression::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expression> {
        let base = self.atom()?;
        if self.eat(&TokenKind::Caret) {
            // exponent may carry a unary minus; `^` is right-associative
            let exponent = self.unary()?;
            Ok(Expression::Binary(
                BinOp::Pow,
                Box::new(base),
                Box::new(exponent),
            ))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expression> {
        let offset = self.next_offset();
        let token = match self.peek() {
            Some(t) => t.clone(),
            None => {
                return Err(Error::Parse {
                    offset,
                    message: "unexpected end of input".into(),
                })
            }
        };
        match token.kind {
            TokenKind::Number(v) => {
                self.pos += 1;
                Ok(Expression::Literal(Complex64::new(v, 0.0)))
            }
            TokenKind::Ident(name) => {
                self.pos += 1;
                match name.as_str() {
                    "x" => Ok(Expression::Variable),
                    "i" => Ok(Expression::Literal(Complex64::new(0.0, 1.0))),
                    "exp" | "log" | "sin" | "cos" | "sqrt" | "abs" | "conj" => {
                        let func = match name.as_str() {
                            "exp" => Func::Exp,
                            "log" => Func::Log,
                            "sin" => Func::Sin,
                            "cos" => Func::Cos,
                            "sqrt" => Func::Sqrt,
                            "abs" => Func::Abs,
                            _ => Func::Conj,
                        };
                        self.expect(TokenKind::LParen)?;
                        let arg = self.expr()?;
                        self.expect(TokenKind::RParen)?;
                        Ok(Expression::Call(func, Box::new(arg)))
                    }
                    _ => Err(Error::Parse {
                        offset: token.offset,
                        message: format!("unknown identifier `{name}`"),
                    }),
                }
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            other => Err(Error::Parse {
                offset: token.offset,
                message: format!("unexpected `{}`", other.describe()),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn eval(text: &str, x: f64) -> Complex64 {
        parse(text).unwrap().eval(x)
    }

    #[test]
    fn euler_identity() {
        let v = eval("exp(i*x)", PI);
        assert!((v - Complex64::new(-1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn polynomial_is_exact_on_dyadics() {
        assert_eq!(eval("x^2 + 1", 2.0), Complex64::new(5.0, 0.0));
        assert_eq!(eval("x^2", 1.5), Complex64::new(2.25, 0.0));
        assert_eq!(eval("0.25*x", 0.5), Complex64::new(0.125, 0.0));
    }

    #[test]
    fn truncated_input_reports_offset() {
        match parse("2*") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_is_rejected() {
        match parse("foo(x)") {
            Err(Error::Parse { offset, message }) => {
                assert_eq!(offset, 0);
                assert!(message.contains("foo"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("2+3*4^2", 0.0).re, 50.0);
        assert_eq!(eval("2-3-4", 0.0).re, -5.0);
        assert_eq!(eval("6/3/2", 0.0).re, 1.0);
        assert_eq!(eval("2^3^2", 0.0).re, 512.0);
        assert_eq!(eval("-2^2", 0.0).re, -4.0);
        assert_eq!(eval("(2+3)*4", 0.0).re, 20.0);
    }

    #[test]
    fn principal_branches() {
        let v = eval("sqrt(-1)", 0.0);
        assert!((v - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let w = eval("log(exp(1))", 0.0);
        assert!((w - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let a = eval("abs(3-4*i)", 0.0);
        assert!((a - Complex64::new(5.0, 0.0)).norm() < 1e-15);
        let c = eval("conj(i)", 0.0);
        assert!((c - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_non_finite_not_a_panic() {
        let v = eval("1/x", 0.0);
        assert!(!v.re.is_finite() || !v.im.is_finite());
    }

    #[test]
    fn print_then_reparse_evaluates_identically() {
        use rand::{Rng, SeedableRng};
        let samples = [
            "exp(i*x)",
            "x^2 + 1",
            "-x^3*0.5 + sin(x)/(1+x^2)",
            "conj(x + i*x) * sqrt(abs(x))",
            "2^-x",
            "-(x - 1)*(x + 1)",
            "log(2 + cos(x))^2",
            "1/(1 + exp(-x))",
            "x^2^x",
            "--x",
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for text in samples {
            let ast = parse(text).unwrap();
            let printed = ast.to_string();
            let reparsed =
                parse(&printed).unwrap_or_else(|e| panic!("reparse of `{printed}` failed: {e}"));
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-3.0..3.0);
                let a = ast.eval(x);
                let b = reparsed.eval(x);
                if a.is_finite() {
                    assert!(
                        (a - b).norm() <= 1e-13,
                        "`{text}` printed as `{printed}` diverged at x={x}"
                    );
                }
            }
        }
    }
}
