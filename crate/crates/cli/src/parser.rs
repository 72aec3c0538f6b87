//! Recursive-descent parser for polynomial potentials over ℚ.
//!
//! Grammar:
//!   expr     := term (('+' | '-') term)*
//!   term     := factor (('*' factor) | ('/' rational))*
//!   factor   := base ('^' uint)?
//!   base     := rational | ident | '(' expr ')'
//!   rational := int ('/' uint)?
//!
//! Implicit multiplication is disallowed. Division is only by rational
//! literals, which is what makes `t^2/2` a polynomial.

use std::fmt;

use shifted_poisson::dcrit::PolySpec;
use shifted_poisson::scalars::{Field, Rat, Ring};

#[derive(Debug, Clone)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at line {}, column {}",
            self.message, self.line, self.column
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    tokens: Vec<(Token, usize, usize)>,
    pos: usize,
    end: (usize, usize),
}

fn lex(src: &str) -> Result<Lexer, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let start = (line, col);
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                chars.next();
                col += 1;
                let t = match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    _ => Token::RParen,
                };
                tokens.push((t, start.0, start.1));
            }
            c if c.is_ascii_digit() => {
                let mut value = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        value.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let n: i64 = value.parse().map_err(|_| ParseError {
                    message: format!("integer literal {} out of range", value),
                    line: start.0,
                    column: start.1,
                })?;
                tokens.push((Token::Int(n), start.0, start.1));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(name), start.0, start.1));
            }
            other => {
                return Err(ParseError {
                    message: format!("unexpected character {:?}", other),
                    line,
                    column: col,
                })
            }
        }
    }
    Ok(Lexer {
        tokens,
        pos: 0,
        end: (line, col),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.tokens
            .get(self.pos)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> ParseError {
        let (line, column) = self.here();
        ParseError {
            message: message.to_string(),
            line,
            column,
        }
    }
}

/// A parsed polynomial: exponent rows over the declared variables.
#[derive(Debug, Clone)]
pub struct Polynomial {
    terms: Vec<(Vec<u32>, Rat)>,
    nvars: usize,
}

impl Polynomial {
    fn zero(nvars: usize) -> Self {
        Polynomial {
            terms: Vec::new(),
            nvars,
        }
    }

    fn constant(c: Rat, nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    fn variable(i: usize, nvars: usize) -> Self {
        let mut exps = vec![0u32; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, Rat::one());
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        if let Some(entry) = self.terms.iter_mut().find(|(e, _)| *e == exps) {
            entry.1 = entry.1.add(&c);
        } else {
            self.terms.push((exps, c));
        }
        self.terms.retain(|(_, c)| !c.is_zero());
    }

    fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.neg()))
                .collect(),
            nvars: self.nvars,
        }
    }

    fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.mul(cb));
            }
        }
        out
    }

    fn scale(&self, c: &Rat) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k.mul(c)))
                .collect(),
            nvars: self.nvars,
        }
    }

    fn pow(&self, n: u32) -> Polynomial {
        let mut out = Self::constant(Rat::one(), self.nvars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn into_spec(mut self) -> PolySpec {
        self.terms.sort();
        self.terms
    }

    /// Canonical rendering, sorted by exponent rows.
    pub fn render(&self, vars: &[String]) -> String {
        let mut terms = self.terms.clone();
        terms.sort();
        if terms.is_empty() {
            return "0".to_string();
        }
        terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0)
                    .map(|(i, &p)| {
                        if p == 1 {
                            vars[i].clone()
                        } else {
                            format!("{}^{}", vars[i], p)
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    format!("{}", c)
                } else if c.is_one() {
                    mono.join("*")
                } else {
                    format!("{}*{}", c, mono.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

struct Parser<'a> {
    lexer: Lexer,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn parse_expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_term()?;
        loop {
            match self.lexer.peek() {
                Some(Token::Plus) => {
                    self.lexer.next();
                    acc = acc.add(&self.parse_term()?);
                }
                Some(Token::Minus) => {
                    self.lexer.next();
                    acc = acc.add(&self.parse_term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.lexer.peek() {
                Some(Token::Star) => {
                    self.lexer.next();
                    acc = acc.mul(&self.parse_factor()?);
                }
                Some(Token::Slash) => {
                    self.lexer.next();
                    let divisor = self.parse_rational()?;
                    if divisor.is_zero() {
                        return Err(self.lexer.error("division by zero"));
                    }
                    acc = acc.scale(&divisor.inv().expect("nonzero divisor"));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.parse_base()?;
        if matches!(self.lexer.peek(), Some(Token::Caret)) {
            self.lexer.next();
            match self.lexer.next() {
                Some(Token::Int(n)) if n >= 0 => Ok(base.pow(n as u32)),
                _ => Err(self.lexer.error("expected a nonnegative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_base(&mut self) -> Result<Polynomial, ParseError> {
        match self.lexer.peek().cloned() {
            Some(Token::Int(_)) | Some(Token::Minus) => {
                let r = self.parse_rational()?;
                Ok(Polynomial::constant(r, self.nvars()))
            }
            Some(Token::Ident(name)) => {
                let (line, column) = self.lexer.here();
                self.lexer.next();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::variable(i, self.nvars())),
                    None => Err(ParseError {
                        message: format!("unknown identifier {}", name),
                        line,
                        column,
                    }),
                }
            }
            Some(Token::LParen) => {
                self.lexer.next();
                let inner = self.parse_expr()?;
                match self.lexer.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(self.lexer.error("expected ')'")),
                }
            }
            _ => Err(self.lexer.error("expected a rational, identifier or '('")),
        }
    }

    fn parse_rational(&mut self) -> Result<Rat, ParseError> {
        let negative = if matches!(self.lexer.peek(), Some(Token::Minus)) {
            self.lexer.next();
            true
        } else {
            false
        };
        let Some(Token::Int(n)) = self.lexer.next() else {
            return Err(self.lexer.error("expected an integer"));
        };
        let mut value = Rat::from_int(if negative { -n } else { n });
        if matches!(self.lexer.peek(), Some(Token::Slash)) {
            // lookahead: rational denominator only when the next token is an
            // integer literal
            if let Some((Token::Int(d), _, _)) = self.lexer.tokens.get(self.lexer.pos + 1) {
                let d = *d;
                self.lexer.next();
                self.lexer.next();
                if d == 0 {
                    return Err(self.lexer.error("zero denominator"));
                }
                value = value.mul(&Rat::from_int(d).inv().expect("nonzero denominator"));
            }
        }
        Ok(value)
    }
}

/// Parses a potential over the declared variables.
pub fn parse_potential(src: &str, vars: &[String]) -> Result<Polynomial, ParseError> {
    let lexer = lex(src)?;
    let mut parser = Parser { lexer, vars };
    let poly = parser.parse_expr()?;
    if parser.lexer.peek().is_some() {
        return Err(parser.lexer.error("trailing input"));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn quadratic_over_two() {
        let v = vars(&["t"]);
        let p = parse_potential("t^2/2", &v).unwrap();
        assert_eq!(p.render(&v), "1/2*t^2");
    }

    #[test]
    fn two_variable_sum() {
        let v = vars(&["y1", "y2"]);
        let p = parse_potential("y1*y2 + y1^3", &v).unwrap();
        assert_eq!(p.render(&v), "y1*y2 + y1^3");
    }

    #[test]
    fn zero_denominator_rejected() {
        let v = vars(&["t"]);
        let err = parse_potential("2/0", &v).unwrap_err();
        assert!(err.message.contains("zero denominator"), "{}", err);
    }

    #[test]
    fn unknown_identifier_rejected() {
        let v = vars(&["t"]);
        let err = parse_potential("t + s", &v).unwrap_err();
        assert!(err.message.contains("unknown identifier"), "{}", err);
        assert_eq!(err.column, 5);
    }

    #[test]
    fn parse_print_parse_roundtrip() {
        let v = vars(&["y1", "y2"]);
        let p = parse_potential("(y1 + y2)^2 - 3*y1*y2/4", &v).unwrap();
        let printed = p.render(&v);
        let q = parse_potential(&printed, &v).unwrap();
        assert_eq!(q.render(&v), printed);
    }

    #[test]
    fn implicit_multiplication_disallowed() {
        let v = vars(&["t"]);
        assert!(parse_potential("2t", &v).is_err());
    }
}
