//! Text format for polynomials.
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := INT ["/" INT] | VAR ["^" INT] | PARAM ["^" INT]
//! VAR    := "x0".."x4" | "y1".."y3"
//! PARAM  := "c" INT
//! ```
//!
//! Multiplication must be written out with `*`. An expression uses either the
//! `x` family or the `y` family, never both.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Arity, Monomial, ParamCoefficient, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnexpectedChar(char),
    UnexpectedEnd(&'static str),
    Expected { expected: &'static str, found: String },
    ImplicitMultiplication,
    NegativeExponent,
    ExponentTooLarge,
    ZeroDenominator,
    UnknownVariable(String),
    MixedFamilies,
    VariablesNotAllowed,
    WrongFamily(Arity),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Empty => f.write_str("empty expression"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedEnd(what) => write!(f, "unexpected end of input, expected {what}"),
            ParseErrorKind::Expected { expected, found } => write!(f, "expected {expected}, found {found}"),
            ParseErrorKind::ImplicitMultiplication => {
                f.write_str("implicit multiplication is not accepted, write '*'")
            }
            ParseErrorKind::NegativeExponent => f.write_str("exponents must be non-negative integers"),
            ParseErrorKind::ExponentTooLarge => f.write_str("exponent too large"),
            ParseErrorKind::ZeroDenominator => f.write_str("zero denominator"),
            ParseErrorKind::UnknownVariable(name) => write!(
                f,
                "unknown variable {name:?} (use x0..x4, y1..y3 or parameters c0, c1, ...)"
            ),
            ParseErrorKind::MixedFamilies => f.write_str("cannot mix x- and y-variables in one expression"),
            ParseErrorKind::VariablesNotAllowed => f.write_str("only numbers and parameters are allowed here"),
            ParseErrorKind::WrongFamily(arity) => write!(f, "expected a {arity} expression"),
        }
    }
}

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Slash => "'/'".into(),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize)>,
    end: usize,
}

fn lex(text: &str) -> Result<Lexed, (usize, ParseErrorKind)> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => toks.push((Tok::Plus, start)),
            b'-' => toks.push((Tok::Minus, start)),
            b'*' => toks.push((Tok::Star, start)),
            b'^' => toks.push((Tok::Caret, start)),
            b'/' => toks.push((Tok::Slash, start)),
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                toks.push((Tok::Int(n), start));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                // a name is one letter followed by digits, so "x1x2" is two names
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return Err((start, ParseErrorKind::UnexpectedChar(ch)));
            }
        }
        i += 1;
    }
    Ok(Lexed {
        toks,
        end: text.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symbol {
    X(usize),
    Y(usize),
    Param(usize),
}

fn symbol(name: &str) -> Option<Symbol> {
    let (head, digits) = name.split_at(1);
    if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
        return None;
    }
    let index: usize = digits.parse().ok()?;
    match head {
        "x" if index <= 4 => Some(Symbol::X(index)),
        "y" if (1..=3).contains(&index) => Some(Symbol::Y(index - 1)),
        "c" => Some(Symbol::Param(index)),
        _ => None,
    }
}

/// What the caller allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Infer,
    Fixed(Arity),
    ConstantOnly,
}

struct Parser<'a> {
    lexed: &'a Lexed,
    pos: usize,
    mode: Mode,
    family: Option<Arity>,
}

type Term = (Vec<u32>, Vec<u32>, BigRational);

impl Parser<'_> {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.lexed.toks.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.lexed.end, |(_, at)| *at)
    }

    fn expect_int(&mut self, what: &'static str) -> Result<(BigInt, usize), (usize, ParseErrorKind)> {
        match self.peek().cloned() {
            Some((Tok::Int(n), at)) => {
                self.pos += 1;
                Ok((n, at))
            }
            Some((Tok::Minus, at)) if what == "an exponent" => Err((at, ParseErrorKind::NegativeExponent)),
            Some((tok, at)) => Err((
                at,
                ParseErrorKind::Expected {
                    expected: what,
                    found: tok.describe(),
                },
            )),
            None => Err((self.lexed.end, ParseErrorKind::UnexpectedEnd(what))),
        }
    }

    fn exponent(&mut self) -> Result<u32, (usize, ParseErrorKind)> {
        if !matches!(self.peek(), Some((Tok::Caret, _))) {
            return Ok(1);
        }
        self.pos += 1;
        let (n, at) = self.expect_int("an exponent")?;
        u32::try_from(n).map_err(|_| (at, ParseErrorKind::ExponentTooLarge))
    }

    fn set_family(&mut self, arity: Arity, at: usize) -> Result<(), (usize, ParseErrorKind)> {
        match self.mode {
            Mode::ConstantOnly => return Err((at, ParseErrorKind::VariablesNotAllowed)),
            Mode::Fixed(fixed) if fixed != arity => return Err((at, ParseErrorKind::WrongFamily(fixed))),
            _ => {}
        }
        match self.family {
            Some(existing) if existing != arity => Err((at, ParseErrorKind::MixedFamilies)),
            _ => {
                self.family = Some(arity);
                Ok(())
            }
        }
    }

    fn factor(&mut self, term: &mut Term) -> Result<(), (usize, ParseErrorKind)> {
        let Some((tok, at)) = self.peek().cloned() else {
            return Err((self.lexed.end, ParseErrorKind::UnexpectedEnd("a number or variable")));
        };
        match tok {
            Tok::Int(numer) => {
                self.pos += 1;
                let mut value = BigRational::from_integer(numer);
                if matches!(self.peek(), Some((Tok::Slash, _))) {
                    self.pos += 1;
                    let (denom, at) = self.expect_int("a denominator")?;
                    if denom.is_zero() {
                        return Err((at, ParseErrorKind::ZeroDenominator));
                    }
                    value /= BigRational::from_integer(denom);
                }
                term.2 *= value;
            }
            Tok::Ident(name) => {
                self.pos += 1;
                let sym = symbol(&name).ok_or((at, ParseErrorKind::UnknownVariable(name.clone())))?;
                let e = self.exponent()?;
                match sym {
                    Symbol::X(i) => {
                        self.set_family(Arity::Projective, at)?;
                        term.0[i] += e;
                    }
                    Symbol::Y(i) => {
                        self.set_family(Arity::Chart, at)?;
                        term.0[i] += e;
                    }
                    Symbol::Param(i) => {
                        if term.1.len() <= i {
                            term.1.resize(i + 1, 0);
                        }
                        term.1[i] += e;
                    }
                }
            }
            other => {
                return Err((
                    at,
                    ParseErrorKind::Expected {
                        expected: "a number or variable",
                        found: other.describe(),
                    },
                ))
            }
        }
        Ok(())
    }

    fn term(&mut self, negative: bool) -> Result<Term, (usize, ParseErrorKind)> {
        let sign = if negative { -BigRational::one() } else { BigRational::one() };
        let mut term: Term = (vec![0; 5], Vec::new(), sign);
        self.factor(&mut term)?;
        loop {
            match self.peek() {
                Some((Tok::Star, _)) => {
                    self.pos += 1;
                    self.factor(&mut term)?;
                }
                Some((Tok::Int(_) | Tok::Ident(_), at)) => {
                    return Err((*at, ParseErrorKind::ImplicitMultiplication));
                }
                _ => return Ok(term),
            }
        }
    }

    fn expr(&mut self) -> Result<Vec<Term>, (usize, ParseErrorKind)> {
        if self.lexed.toks.is_empty() {
            return Err((0, ParseErrorKind::Empty));
        }
        let mut negative = false;
        match self.peek() {
            Some((Tok::Minus, _)) => {
                negative = true;
                self.pos += 1;
            }
            Some((Tok::Plus, _)) => self.pos += 1,
            _ => {}
        }
        let mut terms = vec![self.term(negative)?];
        while let Some((tok, at)) = self.peek().cloned() {
            let negative = match tok {
                Tok::Plus => false,
                Tok::Minus => true,
                other => {
                    return Err((
                        at,
                        ParseErrorKind::Expected {
                            expected: "'+', '-' or '*'",
                            found: other.describe(),
                        },
                    ))
                }
            };
            self.pos += 1;
            terms.push(self.term(negative)?);
        }
        debug_assert_eq!(self.offset(), self.lexed.end);
        Ok(terms)
    }
}

fn locate(text: &str, offset: usize, kind: ParseErrorKind) -> ParseError {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { line, column, kind }
}

fn run(text: &str, mode: Mode) -> Result<(Option<Arity>, Vec<Term>), ParseError> {
    let lexed = lex(text).map_err(|(at, kind)| locate(text, at, kind))?;
    let mut parser = Parser {
        lexed: &lexed,
        pos: 0,
        mode,
        family: None,
    };
    let terms = parser.expr().map_err(|(at, kind)| locate(text, at, kind))?;
    Ok((parser.family, terms))
}

fn assemble(arity: Arity, terms: Vec<Term>) -> Polynomial {
    let n = arity.n_vars();
    Polynomial::from_terms(
        arity,
        terms.into_iter().map(|(mut exps, params, value)| {
            exps.truncate(n);
            (Monomial::new(exps), ParamCoefficient::from_term(params, value))
        }),
    )
    .expect("monomials built with the target arity")
}

/// Parses an expression, taking the arity from the variables used.
/// Expressions without variables are projective.
pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    let (family, terms) = run(text, Mode::Infer)?;
    Ok(assemble(family.unwrap_or(Arity::Projective), terms))
}

/// Parses an expression that may only use variables of `arity`.
pub fn parse_with_arity(text: &str, arity: Arity) -> Result<Polynomial, ParseError> {
    let (_, terms) = run(text, Mode::Fixed(arity))?;
    Ok(assemble(arity, terms))
}

/// Parses an expression in `y1..y3`.
pub fn parse_chart(text: &str) -> Result<Polynomial, ParseError> {
    parse_with_arity(text, Arity::Chart)
}

/// Parses a coefficient: numbers and parameters only.
pub fn parse_coefficient(text: &str) -> Result<ParamCoefficient, ParseError> {
    let (_, terms) = run(text, Mode::ConstantOnly)?;
    let mut c = ParamCoefficient::zero();
    for (_, params, value) in terms {
        c.add_term(params, value);
    }
    Ok(c)
}

/// Parses a signed rational literal such as `-3/2`.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let c = parse_coefficient(text)?;
    c.as_rational().ok_or_else(|| ParseError {
        line: 1,
        column: 1,
        kind: ParseErrorKind::Expected {
            expected: "a rational number",
            found: "parameters".into(),
        },
    })
}

/// Canonical text of `p`; inverse of [`parse_with_arity`].
pub fn format_polynomial(p: &Polynomial) -> String {
    p.to_string()
}
