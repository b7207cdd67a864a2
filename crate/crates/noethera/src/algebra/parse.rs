//! Parsers for ring descriptors and ring elements.
//!
//! Ring grammar: `Z | Q | GF(p) | Z/m | <ring>[v1,...,vk] | <field>[v]/(v^n)`.
//! Element grammar: integer and rational literals, tower variables, `+ - * ^`
//! and parentheses, with `^` taking natural exponents. `/` appears only
//! inside rational literals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraError, Element, RingDesc};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    cursor: usize,
    end: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, AlgebraError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let b = bytes[pos];
            if b.is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            let start = pos;
            let tok = match b {
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'^' => Tok::Caret,
                b'/' => Tok::Slash,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b',' => Tok::Comma,
                b if b.is_ascii_digit() => {
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let text = std::str::from_utf8(&bytes[start..pos]).unwrap();
                    toks.push((Tok::Num(text.parse().unwrap()), start));
                    continue;
                }
                b if b.is_ascii_alphabetic() || b == b'_' => {
                    while pos < bytes.len()
                        && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_')
                    {
                        pos += 1;
                    }
                    let text = std::str::from_utf8(&bytes[start..pos]).unwrap();
                    toks.push((Tok::Ident(text.to_string()), start));
                    continue;
                }
                _ => {
                    return Err(AlgebraError::Syntax {
                        pos,
                        msg: format!("unexpected character {:?}", b as char),
                    })
                }
            };
            toks.push((tok, pos));
            pos += 1;
        }
        Ok(Lexer {
            toks,
            cursor: 0,
            end: bytes.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.cursor)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.toks.get(self.cursor).map(|(t, _)| t.clone());
        if tok.is_some() {
            self.cursor += 1;
        }
        tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.cursor += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), AlgebraError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn number(&mut self, what: &str) -> Result<BigInt, AlgebraError> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                let Some(Tok::Num(n)) = self.bump() else {
                    unreachable!()
                };
                Ok(n)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, AlgebraError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(s)) = self.bump() else {
                    unreachable!()
                };
                Ok(s)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    fn finish(&self) -> Result<(), AlgebraError> {
        if self.cursor == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

/// Parses a ring descriptor from its textual grammar.
pub fn parse_ring(text: &str) -> Result<RingDesc, AlgebraError> {
    let mut lx = Lexer::new(text)?;
    let ring = ring_expr(&mut lx)?;
    lx.finish()?;
    Ok(ring)
}

fn ring_expr(lx: &mut Lexer) -> Result<RingDesc, AlgebraError> {
    let name = lx.ident("a ring name")?;
    let mut ring = match name.as_str() {
        "Z" => {
            if lx.eat(&Tok::Slash) {
                RingDesc::integers_mod(lx.number("a modulus")?)?
            } else {
                RingDesc::integers()
            }
        }
        "Q" => RingDesc::rationals(),
        "GF" => {
            lx.expect(&Tok::LParen, "'('")?;
            let p = lx.number("a prime")?;
            lx.expect(&Tok::RParen, "')'")?;
            RingDesc::prime_field(p)?
        }
        other => {
            return Err(lx.error(&format!("unknown ring '{other}'")));
        }
    };
    while lx.eat(&Tok::LBracket) {
        let mut vars = vec![lx.ident("a variable")?];
        while lx.eat(&Tok::Comma) {
            vars.push(lx.ident("a variable")?);
        }
        lx.expect(&Tok::RBracket, "']'")?;
        if lx.eat(&Tok::Slash) {
            lx.expect(&Tok::LParen, "'('")?;
            let v = lx.ident("a variable")?;
            lx.expect(&Tok::Caret, "'^'")?;
            let n = lx.number("a truncation order")?;
            lx.expect(&Tok::RParen, "')'")?;
            if vars.len() != 1 || vars[0] != v {
                return Err(lx.error("truncation must name the single bracketed variable"));
            }
            let n: u32 = u32::try_from(&n)
                .map_err(|_| lx.error("truncation order too large"))?;
            ring = RingDesc::truncated_poly(ring, &v, n)?;
        } else {
            for v in &vars {
                ring = RingDesc::poly(ring, v)?;
            }
        }
    }
    Ok(ring)
}

/// Parses an element expression against a ring descriptor.
pub fn parse_element(ring: &RingDesc, text: &str) -> Result<Element, AlgebraError> {
    let mut lx = Lexer::new(text)?;
    let e = expr(ring, &mut lx)?;
    lx.finish()?;
    Ok(e)
}

fn expr(ring: &RingDesc, lx: &mut Lexer) -> Result<Element, AlgebraError> {
    let mut acc = term(ring, lx)?;
    loop {
        if lx.eat(&Tok::Plus) {
            acc = ring.add(&acc, &term(ring, lx)?)?;
        } else if lx.eat(&Tok::Minus) {
            acc = ring.sub(&acc, &term(ring, lx)?)?;
        } else {
            return Ok(acc);
        }
    }
}

fn term(ring: &RingDesc, lx: &mut Lexer) -> Result<Element, AlgebraError> {
    let mut acc = unary(ring, lx)?;
    while lx.eat(&Tok::Star) {
        acc = ring.mul(&acc, &unary(ring, lx)?)?;
    }
    Ok(acc)
}

fn unary(ring: &RingDesc, lx: &mut Lexer) -> Result<Element, AlgebraError> {
    if lx.eat(&Tok::Minus) {
        let e = unary(ring, lx)?;
        ring.neg(&e)
    } else {
        power(ring, lx)
    }
}

fn power(ring: &RingDesc, lx: &mut Lexer) -> Result<Element, AlgebraError> {
    let base = primary(ring, lx)?;
    if lx.eat(&Tok::Caret) {
        let e = lx.number("a natural exponent")?;
        let e: u32 = u32::try_from(&e).map_err(|_| lx.error("exponent too large"))?;
        ring.pow(&base, e)
    } else {
        Ok(base)
    }
}

fn primary(ring: &RingDesc, lx: &mut Lexer) -> Result<Element, AlgebraError> {
    match lx.peek() {
        Some(Tok::Num(_)) => {
            let Some(Tok::Num(n)) = lx.bump() else {
                unreachable!()
            };
            if lx.eat(&Tok::Slash) {
                let d = lx.number("a denominator")?;
                fraction(ring, n, d)
            } else {
                Ok(ring.from_int(n))
            }
        }
        Some(Tok::Ident(_)) => {
            let pos = lx.pos();
            let Some(Tok::Ident(name)) = lx.bump() else {
                unreachable!()
            };
            ring.var_element(&name).ok_or_else(|| {
                let _ = pos;
                AlgebraError::UnknownVariable { name }
            })
        }
        Some(Tok::LParen) => {
            lx.bump();
            let e = expr(ring, lx)?;
            lx.expect(&Tok::RParen, "')'")?;
            Ok(e)
        }
        _ => Err(lx.error("expected a literal, variable, or '('")),
    }
}

/// A literal `a/b`: a rational in `Q`, elsewhere `a * b^-1` when `b` is a
/// unit.
fn fraction(ring: &RingDesc, a: BigInt, b: BigInt) -> Result<Element, AlgebraError> {
    if b.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    match ring {
        RingDesc::Rationals => Ok(Element::Rat(BigRational::new(a, b))),
        _ => {
            let b_inv = ring.inv(&ring.from_int(b))?;
            ring.mul(&ring.from_int(a), &b_inv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_tower() {
        let r = parse_ring("Z[x,y]").unwrap();
        let RingDesc::Poly { base, var } = &r else {
            panic!("expected polynomial ring");
        };
        assert_eq!(var, "y");
        assert_eq!(base.to_string(), "Z[x]");
    }

    #[test]
    fn element_coefficients() {
        let qx = parse_ring("Q[x]").unwrap();
        let e = parse_element(&qx, "3*x^2 - 1/2").unwrap();
        let q = RingDesc::rationals();
        assert_eq!(
            e,
            Element::Poly(vec![
                parse_element(&q, "-1/2").unwrap(),
                q.zero(),
                q.from_i64(3),
            ])
        );
    }

    #[test]
    fn non_prime_field_rejected() {
        assert!(matches!(
            parse_ring("GF(6)"),
            Err(AlgebraError::NotPrime(_))
        ));
    }

    #[test]
    fn unknown_variable_rejected() {
        let qx = parse_ring("Q[x]").unwrap();
        assert!(matches!(
            parse_element(&qx, "x + z"),
            Err(AlgebraError::UnknownVariable { .. })
        ));
    }

    #[test]
    fn duplicate_tower_variable_rejected() {
        assert!(matches!(
            parse_ring("Z[x,x]"),
            Err(AlgebraError::BadDescriptor(_))
        ));
    }

    #[test]
    fn fraction_literals() {
        let gf7 = parse_ring("GF(7)").unwrap();
        assert_eq!(parse_element(&gf7, "1/2").unwrap(), gf7.from_i64(4));
        let z = RingDesc::integers();
        assert!(parse_element(&z, "1/2").is_err());
        assert_eq!(parse_element(&z, "5/1").unwrap(), z.from_i64(5));
        let q = RingDesc::rationals();
        assert!(matches!(
            parse_element(&q, "1/0"),
            Err(AlgebraError::DivisionByZero)
        ));
    }

    #[test]
    fn precedence_and_unary_minus() {
        let qx = parse_ring("Q[x]").unwrap();
        assert_eq!(
            parse_element(&qx, "-x^2").unwrap(),
            qx.neg(&parse_element(&qx, "x^2").unwrap()).unwrap()
        );
        assert_eq!(
            parse_element(&qx, "(-x)^2").unwrap(),
            parse_element(&qx, "x^2").unwrap()
        );
        assert_eq!(
            parse_element(&qx, "1 + 2*x^2").unwrap(),
            parse_element(&qx, "2*x*x + 1").unwrap()
        );
    }

    #[test]
    fn syntax_error_positions() {
        let q = RingDesc::rationals();
        match parse_element(&q, "1 + + 2") {
            Err(AlgebraError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_element(&q, "x$") {
            Err(AlgebraError::Syntax { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn division_is_only_a_literal() {
        let q = RingDesc::rationals();
        assert!(parse_element(&q, "(1 + 1)/2").is_err());
        let qx = parse_ring("Q[x]").unwrap();
        assert!(parse_element(&qx, "x/2").is_err());
    }
}
