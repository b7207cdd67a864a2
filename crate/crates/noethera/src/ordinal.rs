//! Ordinals below omega^omega in Cantor normal form.
//!
//! An ordinal is stored as a list of `(exponent, coefficient)` terms with
//! strictly decreasing exponents, representing
//! `w^e1*c1 + ... + w^ek*ck`. Exponents are plain naturals, which is all the
//! engine ever needs: every bound it manipulates lives below `w^w`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("left subtraction requires a <= g")]
    LeftSubUnderflow,
    #[error("ordinal {ordinal} is not below w^{arity}")]
    TupleOutOfRange { ordinal: String, arity: usize },
    #[error("coefficient overflow in ordinal arithmetic")]
    Overflow,
}

/// One CNF term `w^exp * coeff` with `coeff >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Term {
    exp: u64,
    coeff: u64,
}

/// An ordinal below `w^w` in Cantor normal form.
///
/// The empty term list is 0. Terms are kept strictly decreasing in
/// exponent with coefficients >= 1, so the representation is unique.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        Self::monomial(0, n)
    }

    pub fn omega() -> Self {
        Self::monomial(1, 1)
    }

    /// `w^e`.
    pub fn omega_pow(e: u64) -> Self {
        Self::monomial(e, 1)
    }

    /// `w^exp * coeff`; a zero coefficient gives 0.
    pub fn monomial(exp: u64, coeff: u64) -> Self {
        if coeff == 0 {
            Ordinal::zero()
        } else {
            Ordinal {
                terms: vec![Term { exp, coeff }],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// CNF terms as `(exponent, coefficient)` pairs, exponents strictly
    /// decreasing.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.terms.iter().map(|t| (t.exp, t.coeff))
    }

    /// Returns `Some(n)` when the ordinal is the finite ordinal `n`.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [Term { exp: 0, coeff }] => Some(*coeff),
            _ => None,
        }
    }

    fn checked_add(a: u64, b: u64) -> u64 {
        a.checked_add(b).expect("ordinal coefficient overflow")
    }

    fn checked_mul(a: u64, b: u64) -> u64 {
        a.checked_mul(b).expect("ordinal coefficient overflow")
    }

    /// Hessenberg natural sum: coefficient-wise addition of CNF terms.
    pub fn nat_sum(&self, other: &Ordinal) -> Ordinal {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (self.terms[i], other.terms[j]);
            match a.exp.cmp(&b.exp) {
                Ordering::Greater => {
                    terms.push(a);
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    terms.push(Term {
                        exp: a.exp,
                        coeff: Self::checked_add(a.coeff, b.coeff),
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ordinal { terms }
    }

    /// Hessenberg natural product: distributes over the natural sum, and on
    /// monomials multiplies coefficients while adding exponents.
    pub fn nat_prod(&self, other: &Ordinal) -> Ordinal {
        let mut acc = Ordinal::zero();
        for a in &self.terms {
            for b in &other.terms {
                acc = acc.nat_sum(&Ordinal::monomial(
                    Self::checked_add(a.exp, b.exp),
                    Self::checked_mul(a.coeff, b.coeff),
                ));
            }
        }
        acc
    }

    /// Standard (left-absorbing) ordinal addition.
    pub fn ord_sum(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .copied()
            .take_while(|t| t.exp > lead.exp)
            .collect();
        if let Some(t) = self.terms.iter().find(|t| t.exp == lead.exp) {
            terms.push(Term {
                exp: lead.exp,
                coeff: Self::checked_add(t.coeff, lead.coeff),
            });
        } else {
            terms.push(*lead);
        }
        terms.extend_from_slice(&other.terms[1..]);
        Ordinal { terms }
    }

    /// The unique `d` with `self.ord_sum(d) == g`, defined when `self <= g`.
    pub fn left_sub(&self, g: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut i = 0;
        loop {
            let a = self.terms.get(i);
            let b = g.terms.get(i);
            match (a, b) {
                (None, _) => {
                    return Ok(Ordinal {
                        terms: g.terms[i..].to_vec(),
                    })
                }
                (Some(_), None) => return Err(OrdinalError::LeftSubUnderflow),
                (Some(a), Some(b)) => {
                    if a.exp < b.exp {
                        // self < w^{b.exp} <= g, so g absorbs self entirely.
                        return Ok(Ordinal {
                            terms: g.terms[i..].to_vec(),
                        });
                    }
                    if a.exp > b.exp {
                        return Err(OrdinalError::LeftSubUnderflow);
                    }
                    match a.coeff.cmp(&b.coeff) {
                        Ordering::Greater => return Err(OrdinalError::LeftSubUnderflow),
                        Ordering::Less => {
                            let mut terms = vec![Term {
                                exp: b.exp,
                                coeff: b.coeff - a.coeff,
                            }];
                            terms.extend_from_slice(&g.terms[i + 1..]);
                            return Ok(Ordinal { terms });
                        }
                        Ordering::Equal => i += 1,
                    }
                }
            }
        }
    }

    /// Encodes a tuple `(e_0, ..., e_{n-1})` as
    /// `w^{n-1}*e_{n-1} + ... + w^0*e_0` (last entry most significant).
    pub fn encode_tuple(entries: &[u64]) -> Ordinal {
        let mut acc = Ordinal::zero();
        for (i, &e) in entries.iter().enumerate() {
            acc = acc.nat_sum(&Ordinal::monomial(i as u64, e));
        }
        acc
    }

    /// Inverse of [`Ordinal::encode_tuple`] for ordinals below `w^arity`.
    pub fn decode_tuple(&self, arity: usize) -> Result<Vec<u64>, OrdinalError> {
        let mut entries = vec![0u64; arity];
        for t in &self.terms {
            if t.exp >= arity as u64 {
                return Err(OrdinalError::TupleOutOfRange {
                    ordinal: self.to_string(),
                    arity,
                });
            }
            entries[t.exp as usize] = t.coeff;
        }
        Ok(entries)
    }

    /// Parses the textual grammar `term ("+" term)*` with
    /// `term := "w" ("^" nat)? ("*" posnat)? | nat`. Whitespace is
    /// insignificant and non-canonical term orders are normalized.
    pub fn parse(text: &str) -> Result<Ordinal, OrdinalError> {
        Parser::new(text).parse()
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        // Lexicographic on the CNF term lists; a proper prefix is smaller.
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if t.exp == 0 {
                write!(f, "{}", t.coeff)?;
            } else {
                write!(f, "w")?;
                if t.exp != 1 {
                    write!(f, "^{}", t.exp)?;
                }
                if t.coeff != 1 {
                    write!(f, "*{}", t.coeff)?;
                }
            }
        }
        Ok(())
    }
}

/// An ordinal extended below by a bottom element, covering the `-1` endpoint
/// of half-open bound intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrdinalExt {
    Bottom,
    Ord(Ordinal),
}

impl OrdinalExt {
    pub fn is_bottom(&self) -> bool {
        matches!(self, OrdinalExt::Bottom)
    }
}

impl PartialOrd for OrdinalExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalExt {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrdinalExt::Bottom, OrdinalExt::Bottom) => Ordering::Equal,
            (OrdinalExt::Bottom, OrdinalExt::Ord(_)) => Ordering::Less,
            (OrdinalExt::Ord(_), OrdinalExt::Bottom) => Ordering::Greater,
            (OrdinalExt::Ord(a), OrdinalExt::Ord(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for OrdinalExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdinalExt::Bottom => write!(f, "-1"),
            OrdinalExt::Ord(o) => write!(f, "{o}"),
        }
    }
}

impl From<Ordinal> for OrdinalExt {
    fn from(o: Ordinal) -> Self {
        OrdinalExt::Ord(o)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, msg: &str) -> OrdinalError {
        OrdinalError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u64, OrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| OrdinalError::Syntax {
                pos: start,
                msg: "number too large".to_string(),
            })
    }

    fn term(&mut self) -> Result<Ordinal, OrdinalError> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.number()?
                } else {
                    1
                };
                let coeff = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let start = self.pos;
                    let c = self.number()?;
                    if c == 0 {
                        return Err(OrdinalError::Syntax {
                            pos: start,
                            msg: "coefficient must be positive".to_string(),
                        });
                    }
                    c
                } else {
                    1
                };
                Ok(Ordinal::monomial(exp, coeff))
            }
            Some(b) if b.is_ascii_digit() => Ok(Ordinal::from_nat(self.number()?)),
            _ => Err(self.error("expected 'w' or a number")),
        }
    }

    fn parse(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            acc = acc.nat_sum(&self.term()?);
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(Ordinal::zero().cmp(&Ordinal::zero()), Ordering::Equal);
        assert_eq!(Ordinal::omega().cmp(&Ordinal::from_nat(5)), Ordering::Greater);
        // w^2 + 3 < w^2 + w: second terms decide.
        assert_eq!(ord("w^2 + 3").cmp(&ord("w^2 + w")), Ordering::Less);
        // A proper CNF prefix is smaller.
        assert!(ord("w^2") < ord("w^2 + 3"));
    }

    #[test]
    fn nat_sum_examples() {
        assert_eq!(ord("w + 1").nat_sum(&ord("w")), ord("w*2 + 1"));
        assert_eq!(ord("w^3 + w").nat_sum(&Ordinal::zero()), ord("w^3 + w"));
        assert_eq!(ord("w^2*2 + 3").nat_sum(&ord("w*4")), ord("w^2*2 + w*4 + 3"));
    }

    #[test]
    fn nat_prod_examples() {
        assert_eq!(ord("w").nat_prod(&ord("w*2 + 3")), ord("w^2*2 + w*3"));
        assert_eq!(ord("w^2 + w*5").nat_prod(&ord("1")), ord("w^2 + w*5"));
        assert_eq!(ord("w").nat_prod(&ord("w")), ord("w^2"));
    }

    #[test]
    fn ord_sum_and_left_sub_examples() {
        assert_eq!(ord("3").ord_sum(&ord("w")), ord("w"));
        assert_eq!(ord("3").left_sub(&ord("w + 1")).unwrap(), ord("w + 1"));
        assert_eq!(ord("w").left_sub(&ord("w*2")).unwrap(), ord("w"));
        assert_eq!(
            ord("w*2").left_sub(&ord("w")),
            Err(OrdinalError::LeftSubUnderflow)
        );
        // 1 + (w+1) = w+1.
        assert_eq!(ord("1").left_sub(&ord("w + 1")).unwrap(), ord("w + 1"));
    }

    #[test]
    fn tuple_codec_examples() {
        assert_eq!(ord("w*5").decode_tuple(2).unwrap(), vec![0, 5]);
        assert_eq!(Ordinal::encode_tuple(&[0, 0, 0]), Ordinal::zero());
        assert_eq!(Ordinal::encode_tuple(&[3, 2]), ord("w*2 + 3"));
        assert!(ord("w^2").decode_tuple(2).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(ord("w^2*3 + w + 4").to_string(), "w^2*3 + w + 4");
        assert_eq!(ord("0").to_string(), "0");
        assert_eq!(ord("w*2 + 1").to_string(), "w*2 + 1");
        // Non-canonical orders and duplicate exponents normalize.
        assert_eq!(ord("w + w^2"), ord("w^2 + w"));
        assert_eq!(ord("w + w"), ord("w*2"));
        assert_eq!(ord("w^0"), ord("1"));
        assert!(Ordinal::parse("w*0").is_err());
        assert!(Ordinal::parse("w +").is_err());
        assert!(Ordinal::parse("").is_err());
        match Ordinal::parse("w^2 ^ 3") {
            Err(OrdinalError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn ordinal_ext_order() {
        assert!(OrdinalExt::Bottom < OrdinalExt::Ord(Ordinal::zero()));
        assert!(OrdinalExt::Ord(ord("w")) > OrdinalExt::Ord(ord("5")));
        assert_eq!(OrdinalExt::Bottom.to_string(), "-1");
    }
}
