//! Recursive-descent parser for closed formulas.
//!
//! ```text
//! formula    := conjunct ("or" conjunct)*
//! conjunct   := clause ("and" clause)*
//! clause     := "(" formula ")" | expr rel expr
//! rel        := ">=" | "<=" | "="
//! expr       := term (("+" | "-") term)*
//! term       := unary (("*" | "/") unary)*
//! unary      := "-" unary | power
//! power      := primary ("^" integer)?
//! primary    := number | x<i> | p<m> | "(" expr ")"
//! ```
//!
//! `p<m>` abbreviates the power sum `x1^m + ... + xk^m`. Numbers are
//! integers, `a/b` quotients (via `/`), or decimal literals, all exact.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::formula::{ClosedFormula, FormulaNode, Relation, SignAtom};
use crate::poly::polynomial::Polynomial;
use crate::scalar::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("negation at position {position} is not allowed in closed formulas")]
    Negation { position: usize },
    #[error("strict inequality at position {position} is not allowed in closed formulas")]
    StrictInequality { position: usize },
    #[error("variable {name} at position {position} is out of range 1..={k}")]
    VariableOutOfRange { name: String, position: usize, k: usize },
    #[error("formulas need at least one variable (k = 0)")]
    NoVariables,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Var(usize),
    PowerSum(u32),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Rel(Relation),
    And,
    Or,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn syntax(position: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { position, message: message.into() }
}

fn tokenize(text: &str, prefix: char, k: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let single = |tok| Token { tok, pos };
        match c {
            '+' => out.push(single(Tok::Plus)),
            '-' => out.push(single(Tok::Minus)),
            '*' => out.push(single(Tok::Star)),
            '/' => out.push(single(Tok::Slash)),
            '^' => out.push(single(Tok::Caret)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            '>' | '<' => {
                if next == Some('=') {
                    let rel = if c == '>' { Relation::Ge } else { Relation::Le };
                    out.push(single(Tok::Rel(rel)));
                    i += 1;
                } else {
                    return Err(ParseError::StrictInequality { position: pos });
                }
            }
            '=' => {
                if next == Some('=') {
                    i += 1;
                }
                out.push(single(Tok::Rel(Relation::Eq)));
            }
            '!' | '~' | '¬' => return Err(ParseError::Negation { position: pos }),
            '&' if next == Some('&') => {
                out.push(single(Tok::And));
                i += 1;
            }
            '|' if next == Some('|') => {
                out.push(single(Tok::Or));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let value = parse_rational(&lit).map_err(|_| syntax(pos, format!("bad number {lit:?}")))?;
                out.push(single(Tok::Num(value)));
                continue;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                let lower = word.to_ascii_lowercase();
                let tok = match lower.as_str() {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => return Err(ParseError::Negation { position: pos }),
                    _ => ident_token(&word, pos, prefix, k)?,
                };
                out.push(single(tok));
                continue;
            }
            other => return Err(syntax(pos, format!("unexpected character {other:?}"))),
        }
        i += 1;
    }
    out.push(Token { tok: Tok::End, pos: text.len() });
    Ok(out)
}

fn ident_token(word: &str, pos: usize, prefix: char, k: usize) -> Result<Tok, ParseError> {
    let mut cs = word.chars();
    let head = cs.next().unwrap();
    let digits: String = cs.collect();
    let index: Option<usize> = if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) { digits.parse().ok() } else { None };
    match (head, index) {
        (h, Some(i)) if h == prefix => {
            if i == 0 || i > k {
                return Err(ParseError::VariableOutOfRange { name: word.to_string(), position: pos, k });
            }
            Ok(Tok::Var(i - 1))
        }
        ('p', Some(m)) if prefix != 'p' && m >= 1 => Ok(Tok::PowerSum(m as u32)),
        _ => Err(syntax(pos, format!("unknown identifier {word:?}"))),
    }
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    k: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> usize {
        self.toks[self.at].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> PResult<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected {what}")))
        }
    }

    fn formula(&mut self) -> PResult<FormulaNode<SignAtom>> {
        let mut parts = vec![self.conjunct()?];
        while *self.peek() == Tok::Or {
            self.bump();
            parts.push(self.conjunct()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { FormulaNode::Or(parts) })
    }

    fn conjunct(&mut self) -> PResult<FormulaNode<SignAtom>> {
        let mut parts = vec![self.clause()?];
        while *self.peek() == Tok::And {
            self.bump();
            parts.push(self.clause()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { FormulaNode::And(parts) })
    }

    fn clause(&mut self) -> PResult<FormulaNode<SignAtom>> {
        if *self.peek() == Tok::LParen {
            // Either a parenthesised formula or a comparison whose left side
            // starts with a parenthesised expression; try the formula first.
            let save = self.at;
            self.bump();
            if let Ok(inner) = self.formula() {
                if *self.peek() == Tok::RParen {
                    self.bump();
                    if matches!(self.peek(), Tok::And | Tok::Or | Tok::RParen | Tok::End) {
                        return Ok(inner);
                    }
                }
            }
            self.at = save;
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<FormulaNode<SignAtom>> {
        let lhs = self.expr()?;
        let rel = match self.bump() {
            Tok::Rel(r) => r,
            _ => return Err(syntax(self.toks[self.at.saturating_sub(1)].pos, "expected a relation (>=, <=, =)")),
        };
        let rhs = self.expr()?;
        if let Tok::Rel(_) = self.peek() {
            return Err(syntax(self.pos(), "chained relations are not supported"));
        }
        Ok(FormulaNode::Atom(SignAtom { poly: lhs - rhs, relation: rel }))
    }

    fn expr(&mut self) -> PResult<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> PResult<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.unary()?;
                    if !rhs.is_constant() || rhs.is_zero() {
                        return Err(syntax(pos, "division is only allowed by a nonzero constant"));
                    }
                    let inv = Rational::one() / rhs.constant_term();
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        if *self.peek() == Tok::Plus {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Polynomial> {
        let base = self.primary()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Tok::Num(q) if q.is_integer() && q >= Rational::zero() && q <= Rational::from_integer(BigInt::from(64)) => {
                    let e: u32 = q.to_integer().try_into().unwrap();
                    Ok(base.pow(e))
                }
                _ => Err(syntax(pos, "exponent must be an integer literal in 0..=64")),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> PResult<Polynomial> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(q) => Ok(Polynomial::constant(self.k, q)),
            Tok::Var(i) => Ok(Polynomial::var(self.k, i)),
            Tok::PowerSum(m) => {
                let mut p = Polynomial::zero(self.k);
                for i in 0..self.k {
                    p = p + Polynomial::var(self.k, i).pow(m);
                }
                Ok(p)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            other => Err(syntax(pos, format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a closed formula over variables `x1..xk`.
pub fn parse_formula(text: &str, k: usize) -> Result<ClosedFormula, ParseError> {
    parse_formula_with_prefix(text, k, 'x')
}

/// Parses a closed formula whose variables are written `<prefix><i>`.
pub fn parse_formula_with_prefix(text: &str, k: usize, prefix: char) -> Result<ClosedFormula, ParseError> {
    if k == 0 {
        return Err(ParseError::NoVariables);
    }
    let toks = tokenize(text, prefix, k)?;
    let mut parser = Parser { toks, at: 0, k };
    let tree = parser.formula()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(parser.pos(), "unexpected trailing input"));
    }
    ClosedFormula::from_tree(k, &prefix.to_string(), tree).map_err(|e| syntax(0, e.to_string()))
}

/// Parses a single polynomial expression (no relation).
pub fn parse_polynomial(text: &str, k: usize) -> Result<Polynomial, ParseError> {
    if k == 0 {
        return Err(ParseError::NoVariables);
    }
    let toks = tokenize(text, 'x', k)?;
    let mut parser = Parser { toks, at: 0, k };
    let p = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(syntax(parser.pos(), "unexpected trailing input"));
    }
    Ok(p)
}
