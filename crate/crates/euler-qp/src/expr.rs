//! A small expression language over the quiver algebra: idempotents,
//! arrows, continuants `<a1,b1,a2>`, inverses `inv(<...>)`, rational
//! coefficients `p/q`, sums, and products written with `*` or by
//! juxtaposition.
//!
//! Parsing yields a positioned syntax error on bad input. Products of
//! non-composable factors are not errors: they elaborate to the zero
//! element with a warning, matching the algebra's own convention.

use crate::algebra::{El, Rat};
use crate::continuants::{continuant, ContinuantDescriptor};
use crate::error::Error;
use crate::gamma::Gamma;
use num::{BigInt, One};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ast {
    Idem(String),
    Gen(String),
    Continuant(Vec<String>),
    Inverse(Vec<String>),
    Num(Rat),
    Neg(Box<Ast>),
    Sum(Vec<Ast>),
    Prod(Vec<Ast>),
    /// Display-only: the printer renders tensors, the parser never
    /// produces them.
    Tensor(Box<Ast>, Box<Ast>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    LAngle,
    RAngle,
    Comma,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '+' | '-' | '*' | '/' | '(' | ')' | '<' | '>' | ',' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let tok = match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::LAngle,
                    '>' => Tok::RAngle,
                    _ => Tok::Comma,
                };
                out.push(Spanned {
                    tok,
                    line: tline,
                    col: tcol,
                });
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(digits.parse().expect("digits")),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        ident.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Ident(ident),
                    line: tline,
                    col: tcol,
                });
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        match self.peek() {
            Some(s) => ParseError {
                line: s.line,
                col: s.col,
                message: message.into(),
            },
            None => {
                let (line, col) = self
                    .toks
                    .last()
                    .map(|s| (s.line, s.col + 1))
                    .unwrap_or((1, 1));
                ParseError {
                    line,
                    col,
                    message: format!("{} (at end of input)", message.into()),
                }
            }
        }
    }

    fn eat(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.peek().map(|s| &s.tok) == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(format!("expected {tok:?}")))
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut parts = vec![self.term()?];
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    parts.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    parts.push(Ast::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Ast::Sum(parts)
        })
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut parts = vec![self.factor()?];
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Star) => {
                    self.pos += 1;
                    parts.push(self.factor()?);
                }
                // juxtaposition: another factor begins
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::LParen)
                | Some(Tok::LAngle) => {
                    parts.push(self.factor()?);
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Ast::Prod(parts)
        })
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        if self.peek().map(|s| &s.tok) == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let Some(spanned) = self.peek().cloned() else {
            return Err(self.error_here("expected an expression"));
        };
        match spanned.tok {
            Tok::Int(p) => {
                self.pos += 1;
                // rational p/q at the token level
                if self.peek().map(|s| &s.tok) == Some(&Tok::Slash) {
                    self.pos += 1;
                    match self.peek().map(|s| s.tok.clone()) {
                        Some(Tok::Int(q)) => {
                            self.pos += 1;
                            if q == BigInt::from(0) {
                                return Err(ParseError {
                                    line: spanned.line,
                                    col: spanned.col,
                                    message: "zero denominator".into(),
                                });
                            }
                            Ok(Ast::Num(Rat::new(p, q)))
                        }
                        _ => Err(self.error_here("expected a denominator")),
                    }
                } else {
                    Ok(Ast::Num(Rat::from_integer(p)))
                }
            }
            Tok::Ident(name) if name == "inv" => {
                self.pos += 1;
                self.eat(&Tok::LParen)?;
                let seq = self.continuant_body()?;
                self.eat(&Tok::RParen)?;
                Ok(Ast::Inverse(seq))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if name.starts_with('e') && name[1..].chars().all(|c| c.is_ascii_digit()) {
                    Ok(Ast::Idem(name))
                } else {
                    Ok(Ast::Gen(name))
                }
            }
            Tok::LAngle => Ok(Ast::Continuant(self.continuant_body()?)),
            Tok::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.eat(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error_here("expected an expression")),
        }
    }

    fn continuant_body(&mut self) -> Result<Vec<String>, ParseError> {
        self.eat(&Tok::LAngle)?;
        let mut names = Vec::new();
        loop {
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    names.push(name);
                }
                _ => return Err(self.error_here("expected a generator name")),
            }
            match self.peek().map(|s| s.tok.clone()) {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::RAngle) => {
                    self.pos += 1;
                    return Ok(names);
                }
                _ => return Err(self.error_here("expected ',' or '>'")),
            }
        }
    }
}

pub fn parse(text: &str) -> Result<Ast, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.error_here("trailing input"));
    }
    Ok(ast)
}

/// Canonical printer; `parse(print(ast)) == ast` for parser-produced trees.
pub fn print(ast: &Ast) -> String {
    print_prec(ast, 0)
}

// precedence: 0 = sum context, 1 = product context, 2 = factor context
fn print_prec(ast: &Ast, prec: u8) -> String {
    match ast {
        Ast::Idem(name) | Ast::Gen(name) => name.clone(),
        Ast::Continuant(seq) => format!("<{}>", seq.join(",")),
        Ast::Inverse(seq) => format!("inv(<{}>)", seq.join(",")),
        Ast::Num(r) => {
            let s = r.to_string();
            if s.starts_with('-') && prec >= 1 {
                format!("({s})")
            } else {
                s
            }
        }
        Ast::Neg(inner) => {
            let s = format!("-{}", print_prec(inner, 2));
            if prec >= 1 {
                format!("({s})")
            } else {
                s
            }
        }
        Ast::Sum(parts) => {
            let mut out = String::new();
            for (i, part) in parts.iter().enumerate() {
                if i == 0 {
                    out.push_str(&print_prec(part, 1));
                } else if let Ast::Neg(inner) = part {
                    out.push_str(" - ");
                    out.push_str(&print_prec(inner, 1));
                } else {
                    out.push_str(" + ");
                    out.push_str(&print_prec(part, 1));
                }
            }
            if prec >= 1 {
                format!("({out})")
            } else {
                out
            }
        }
        Ast::Prod(parts) => {
            let rendered: Vec<String> = parts.iter().map(|p| print_prec(p, 2)).collect();
            let out = rendered.join("*");
            if prec >= 2 {
                format!("({out})")
            } else {
                out
            }
        }
        Ast::Tensor(l, r) => format!("{} (x) {}", print_prec(l, 1), print_prec(r, 1)),
    }
}

/// Elaborate an AST over the quiver with `n` arrow pairs. Products of
/// non-composable nonzero factors produce the zero element plus a warning.
pub fn elaborate(ast: &Ast, g: &Gamma) -> Result<(El, Vec<String>), Error> {
    let mut warnings = Vec::new();
    let el = elab(ast, g, &mut warnings)?;
    Ok((el, warnings))
}

fn elab(ast: &Ast, g: &Gamma, warnings: &mut Vec<String>) -> Result<El, Error> {
    let alg = g.alg();
    match ast {
        Ast::Idem(name) => {
            let rest = &name[1..];
            let v = alg
                .vertex_names
                .iter()
                .position(|vn| vn == rest)
                .ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            Ok(El::idem(v as u8))
        }
        Ast::Gen(name) => alg
            .gen_by_name(name)
            .map(El::generator)
            .ok_or_else(|| Error::UnknownSymbol(name.clone())),
        Ast::Continuant(names) => {
            let seq = lookup_seq(names, g)?;
            continuant(alg, &ContinuantDescriptor::new(seq, 1))
        }
        Ast::Inverse(names) => {
            let key: String = names.join("");
            alg.inv_by_name(&key)
                .map(El::inverse)
                .ok_or(Error::UnknownInverse)
        }
        Ast::Num(r) => Ok(El::one(alg).scale(r)),
        Ast::Neg(inner) => Ok(elab(inner, g, warnings)?.neg()),
        Ast::Sum(parts) => {
            let mut out = El::zero();
            for p in parts {
                out = out.add(&elab(p, g, warnings)?);
            }
            Ok(out)
        }
        Ast::Prod(parts) => {
            let mut out = El::one(alg);
            for p in parts {
                let factor = elab(p, g, warnings)?;
                let prod = out.mul(&factor, alg);
                if prod.is_zero() && !out.is_zero() && !factor.is_zero() {
                    warnings.push(format!(
                        "non-composable product: {} * {} = 0",
                        out.display(alg),
                        factor.display(alg)
                    ));
                }
                out = prod;
            }
            Ok(out)
        }
        Ast::Tensor(_, _) => Err(Error::Config(
            "tensor nodes are display-only and cannot be elaborated".into(),
        )),
    }
}

fn lookup_seq(names: &[String], g: &Gamma) -> Result<Vec<crate::algebra::GenId>, Error> {
    names
        .iter()
        .map(|n| {
            g.alg()
                .gen_by_name(n)
                .ok_or_else(|| Error::UnknownSymbol(n.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use rand::{Rng, SeedableRng};

    #[test]
    fn parse_sum_and_product() {
        let ast = parse("e2 + a1*b1").unwrap();
        assert_eq!(
            ast,
            Ast::Sum(vec![
                Ast::Idem("e2".into()),
                Ast::Prod(vec![Ast::Gen("a1".into()), Ast::Gen("b1".into())]),
            ])
        );
    }

    #[test]
    fn parse_continuant_and_inverse() {
        let ast = parse("<a1,b1,a2,b2>").unwrap();
        assert_eq!(
            ast,
            Ast::Continuant(vec!["a1".into(), "b1".into(), "a2".into(), "b2".into()])
        );
        let ast = parse("inv(<a1,b1>)").unwrap();
        assert_eq!(ast, Ast::Inverse(vec!["a1".into(), "b1".into()]));
    }

    #[test]
    fn juxtaposition_is_product() {
        assert_eq!(parse("a1 b1").unwrap(), parse("a1*b1").unwrap());
        assert_eq!(parse("2 a1").unwrap(), parse("2*a1").unwrap());
    }

    #[test]
    fn rationals_and_negation() {
        let ast = parse("-3/4 a1 + 2").unwrap();
        // the minus binds the first factor; juxtaposition extends the product
        assert_eq!(
            ast,
            Ast::Sum(vec![
                Ast::Prod(vec![
                    Ast::Neg(Box::new(Ast::Num(rat(3, 4)))),
                    Ast::Gen("a1".into())
                ]),
                Ast::Num(rat(2, 1)),
            ])
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("a1 + ?").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));
        let err = parse("a1 +\n  <a1,").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse("1/0").unwrap_err();
        assert!(err.message.contains("denominator"));
    }

    #[test]
    fn elaboration_examples() {
        let g = Gamma::boalch(2).unwrap();
        let alg = g.alg();
        let (el, warnings) = elaborate(&parse("e2 + a1*b1").unwrap(), &g).unwrap();
        assert_eq!(el, g.e2().add(&g.a(1).mul(&g.b(1), alg)));
        assert!(warnings.is_empty());
        let (el, _) = elaborate(&parse("<a1,b1,a2,b2>").unwrap(), &g).unwrap();
        assert_eq!(el, g.phi2());
        let (el, _) = elaborate(&parse("inv(<b2,a2,b1,a1>)").unwrap(), &g).unwrap();
        assert_eq!(el, g.phi1().unwrap());
    }

    #[test]
    fn non_composable_product_warns_and_vanishes() {
        let g = Gamma::boalch(2).unwrap();
        let (el, warnings) = elaborate(&parse("b1*b2").unwrap(), &g).unwrap();
        assert!(el.is_zero());
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("non-composable"));
    }

    #[test]
    fn unknown_names_are_rejected() {
        let g = Gamma::boalch(1).unwrap();
        assert!(matches!(
            elaborate(&parse("a7").unwrap(), &g),
            Err(Error::UnknownSymbol(_))
        ));
        assert!(matches!(
            elaborate(&parse("inv(<a1,b2>)").unwrap(), &g),
            Err(Error::UnknownInverse)
        ));
    }

    fn random_ast(rng: &mut impl Rng, depth: usize) -> Ast {
        let leaf = depth == 0 || rng.gen_bool(0.4);
        if leaf {
            match rng.gen_range(0..5) {
                0 => Ast::Idem(format!("e{}", rng.gen_range(1..=2))),
                1 => Ast::Gen(format!("a{}", rng.gen_range(1..=3))),
                2 => Ast::Gen(format!("b{}", rng.gen_range(1..=3))),
                3 => Ast::Num(rat(rng.gen_range(0..=9), rng.gen_range(1..=9))),
                _ => {
                    let k = rng.gen_range(1..=4usize);
                    let mut seq = Vec::new();
                    for pos in 0..k {
                        let idx = rng.gen_range(1..=3);
                        let a_type = pos % 2 == 0;
                        seq.push(if a_type {
                            format!("a{idx}")
                        } else {
                            format!("b{idx}")
                        });
                    }
                    Ast::Continuant(seq)
                }
            }
        } else {
            match rng.gen_range(0..3) {
                0 => Ast::Neg(Box::new(random_ast(rng, depth - 1))),
                1 => {
                    let k = rng.gen_range(2..=3);
                    Ast::Sum((0..k).map(|_| random_ast(rng, depth - 1)).collect())
                }
                _ => {
                    let k = rng.gen_range(2..=3);
                    Ast::Prod((0..k).map(|_| random_ast(rng, depth - 1)).collect())
                }
            }
        }
    }

    /// The parser never nests sums directly inside sums (it flattens at
    /// each level), so normalize generated trees the same way before
    /// comparing.
    fn normalize(ast: &Ast) -> Ast {
        match ast {
            Ast::Sum(parts) => {
                let mut flat = Vec::new();
                for p in parts.iter().map(normalize) {
                    match p {
                        Ast::Sum(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    Ast::Sum(flat)
                }
            }
            Ast::Prod(parts) => {
                let mut flat = Vec::new();
                for p in parts.iter().map(normalize) {
                    match p {
                        Ast::Prod(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    Ast::Prod(flat)
                }
            }
            Ast::Neg(inner) => Ast::Neg(Box::new(normalize(inner))),
            other => other.clone(),
        }
    }

    #[test]
    fn print_parse_round_trip_on_a_corpus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut checked = 0;
        while checked < 100 {
            let ast = normalize(&random_ast(&mut rng, 3));
            let text = print(&ast);
            let reparsed = parse(&text).unwrap_or_else(|e| panic!("{text:?}: {e}"));
            assert_eq!(normalize(&reparsed), ast, "text: {text}");
            checked += 1;
        }
    }

    #[test]
    fn handwritten_round_trips() {
        for text in [
            "e2 + a1*b1",
            "<a1,b1,a2>",
            "inv(<a1,b1>)*a1",
            "1/2*(a1 + b1*a1) - e1",
            "-a1 - -b1",
            "2/3",
            "(a1 + b1)*(a2 + b2)",
        ] {
            let ast = parse(text).unwrap();
            let printed = print(&ast);
            assert_eq!(parse(&printed).unwrap(), ast, "text: {text}");
        }
    }
}
