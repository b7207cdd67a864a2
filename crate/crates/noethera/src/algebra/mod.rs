//! Exact arithmetic for the concrete rings the engine works over.
//!
//! A [`RingDesc`] is a recursive descriptor: integers, rationals, a prime
//! field, modular integers, a truncated polynomial ring over a field, or a
//! polynomial ring over any descriptor. Multivariate rings are towers with
//! the outermost variable last, so `Z[x,y]` is `(Z[x])[y]`.
//!
//! Elements are kept canonical: residues are reduced into `[0, m)`,
//! rationals carry a positive denominator in lowest terms, and polynomial
//! coefficient lists (low degree first) never end in a zero. Operations
//! reject operands that do not belong to the descriptor.

mod parse;

pub use parse::{parse_element, parse_ring};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable '{name}'")]
    UnknownVariable { name: String },
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("invalid ring descriptor: {0}")]
    BadDescriptor(String),
    #[error("element does not belong to {ring}")]
    WrongRing { ring: String },
    #[error("element is not a unit")]
    NotAUnit,
    #[error("leading coefficient of the zero polynomial")]
    LcOfZero,
    #[error("expected a polynomial ring, found {0}")]
    NotAPolynomialRing(String),
    #[error("combination longer than its context ({comb} > {context})")]
    CombTooLong { comb: usize, context: usize },
    #[error("division by zero")]
    DivisionByZero,
}

/// Recursive ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingDesc {
    Integers,
    Rationals,
    PrimeField {
        p: BigInt,
    },
    /// `Z/m`. `m = 1` is the trivial ring. The factorization is computed by
    /// trial division when the descriptor is built.
    IntegersMod {
        modulus: BigInt,
        factors: Vec<(BigInt, u32)>,
    },
    /// `K[v]/(v^n)` over a field descriptor.
    TruncatedPoly {
        base: Box<RingDesc>,
        var: String,
        n: u32,
    },
    Poly {
        base: Box<RingDesc>,
        var: String,
    },
}

/// A ring element: an integer, a reduced rational, or a dense coefficient
/// list over the base ring (low degree first, no trailing zero).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Int(BigInt),
    Rat(BigRational),
    Poly(Vec<Element>),
}

/// Coefficients of a linear combination, aligned index-wise with a context
/// list of elements; missing tail entries mean zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinComb {
    coeffs: Vec<Element>,
}

impl LinComb {
    pub fn new(coeffs: Vec<Element>) -> Self {
        LinComb { coeffs }
    }

    pub fn empty() -> Self {
        LinComb { coeffs: Vec::new() }
    }

    /// Zeros everywhere except a one at `position`.
    pub fn unit(ring: &RingDesc, position: usize) -> Self {
        let mut coeffs = vec![ring.zero(); position];
        coeffs.push(ring.one());
        LinComb { coeffs }
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn factorize(m: &BigInt) -> Vec<(BigInt, u32)> {
    let mut factors = Vec::new();
    let mut rest = m.clone();
    let mut push = |p: &BigInt, rest: &mut BigInt| {
        let mut mult = 0u32;
        while (&*rest % p).is_zero() {
            *rest /= p;
            mult += 1;
        }
        if mult > 0 {
            factors.push((p.clone(), mult));
        }
    };
    let two = BigInt::from(2);
    push(&two, &mut rest);
    let mut d = BigInt::from(3);
    while &d * &d <= rest {
        push(&d, &mut rest);
        d += 2;
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    factors
}

fn is_prime(m: &BigInt) -> bool {
    *m > BigInt::one() && factorize(m) == vec![(m.clone(), 1)]
}

impl RingDesc {
    pub fn integers() -> Self {
        RingDesc::Integers
    }

    pub fn rationals() -> Self {
        RingDesc::Rationals
    }

    pub fn prime_field(p: BigInt) -> Result<Self, AlgebraError> {
        if !is_prime(&p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(RingDesc::PrimeField { p })
    }

    pub fn integers_mod(m: BigInt) -> Result<Self, AlgebraError> {
        if m < BigInt::one() {
            return Err(AlgebraError::BadDescriptor(format!(
                "modulus must be at least 1, got {m}"
            )));
        }
        let factors = factorize(&m);
        Ok(RingDesc::IntegersMod { modulus: m, factors })
    }

    pub fn poly(base: RingDesc, var: &str) -> Result<Self, AlgebraError> {
        if base.tower_vars().iter().any(|v| *v == var) {
            return Err(AlgebraError::BadDescriptor(format!(
                "variable '{var}' already used in the tower"
            )));
        }
        Ok(RingDesc::Poly {
            base: Box::new(base),
            var: var.to_string(),
        })
    }

    pub fn truncated_poly(base: RingDesc, var: &str, n: u32) -> Result<Self, AlgebraError> {
        if !base.is_field() {
            return Err(AlgebraError::BadDescriptor(format!(
                "truncated polynomial rings need a field base, got {base}"
            )));
        }
        if n == 0 {
            return Err(AlgebraError::BadDescriptor(
                "truncation order must be at least 1".to_string(),
            ));
        }
        if base.tower_vars().iter().any(|v| *v == var) {
            return Err(AlgebraError::BadDescriptor(format!(
                "variable '{var}' already used in the tower"
            )));
        }
        Ok(RingDesc::TruncatedPoly {
            base: Box::new(base),
            var: var.to_string(),
            n,
        })
    }

    /// Field descriptors: the rationals and prime fields.
    pub fn is_field(&self) -> bool {
        matches!(self, RingDesc::Rationals | RingDesc::PrimeField { .. })
    }

    /// Whether this is `Z/1`, the trivial ring.
    pub fn is_trivial(&self) -> bool {
        matches!(self, RingDesc::IntegersMod { modulus, .. } if modulus.is_one())
    }

    /// Base ring and variable of a polynomial descriptor.
    pub fn poly_parts(&self) -> Option<(&RingDesc, &str)> {
        match self {
            RingDesc::Poly { base, var } => Some((base, var)),
            _ => None,
        }
    }

    fn tower_vars(&self) -> Vec<&str> {
        match self {
            RingDesc::Poly { base, var } | RingDesc::TruncatedPoly { base, var, .. } => {
                let mut vars = base.tower_vars();
                vars.push(var);
                vars
            }
            _ => Vec::new(),
        }
    }

    fn modulus(&self) -> Option<&BigInt> {
        match self {
            RingDesc::PrimeField { p } => Some(p),
            RingDesc::IntegersMod { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            RingDesc::Integers => Element::Int(BigInt::zero()),
            RingDesc::Rationals => Element::Rat(BigRational::zero()),
            RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. } => {
                Element::Int(BigInt::zero())
            }
            RingDesc::TruncatedPoly { .. } | RingDesc::Poly { .. } => Element::Poly(Vec::new()),
        }
    }

    pub fn one(&self) -> Element {
        match self {
            RingDesc::Integers => Element::Int(BigInt::one()),
            RingDesc::Rationals => Element::Rat(BigRational::one()),
            RingDesc::PrimeField { p } => {
                if p.is_one() {
                    // unreachable for primes, kept for symmetry
                    Element::Int(BigInt::zero())
                } else {
                    Element::Int(BigInt::one())
                }
            }
            RingDesc::IntegersMod { modulus, .. } => {
                if modulus.is_one() {
                    Element::Int(BigInt::zero())
                } else {
                    Element::Int(BigInt::one())
                }
            }
            RingDesc::TruncatedPoly { base, .. } | RingDesc::Poly { base, .. } => {
                Element::Poly(vec![base.one()])
            }
        }
    }

    pub fn is_zero_elem(&self, e: &Element) -> bool {
        e == &self.zero()
    }

    /// Embeds an integer constant.
    pub fn from_int(&self, n: BigInt) -> Element {
        match self {
            RingDesc::Integers => Element::Int(n),
            RingDesc::Rationals => Element::Rat(BigRational::from_integer(n)),
            RingDesc::PrimeField { p } => Element::Int(n.mod_floor(p)),
            RingDesc::IntegersMod { modulus, .. } => Element::Int(n.mod_floor(modulus)),
            RingDesc::TruncatedPoly { base, .. } | RingDesc::Poly { base, .. } => {
                let c = base.from_int(n);
                if base.is_zero_elem(&c) {
                    Element::Poly(Vec::new())
                } else {
                    Element::Poly(vec![c])
                }
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Element {
        self.from_int(BigInt::from(n))
    }

    /// The tower variable `name` as an element, if the descriptor binds it.
    pub fn var_element(&self, name: &str) -> Option<Element> {
        match self {
            RingDesc::Poly { base, var } => {
                if var == name {
                    Some(Element::Poly(vec![base.zero(), base.one()]))
                } else {
                    let inner = base.var_element(name)?;
                    Some(if base.is_zero_elem(&inner) {
                        Element::Poly(Vec::new())
                    } else {
                        Element::Poly(vec![inner])
                    })
                }
            }
            RingDesc::TruncatedPoly { base, var, n } => {
                if var == name {
                    if *n == 1 {
                        Some(Element::Poly(Vec::new()))
                    } else {
                        Some(Element::Poly(vec![base.zero(), base.one()]))
                    }
                } else {
                    let inner = base.var_element(name)?;
                    Some(if base.is_zero_elem(&inner) {
                        Element::Poly(Vec::new())
                    } else {
                        Element::Poly(vec![inner])
                    })
                }
            }
            _ => None,
        }
    }

    fn wrong_ring(&self) -> AlgebraError {
        AlgebraError::WrongRing {
            ring: self.to_string(),
        }
    }

    /// Checks that `e` is a canonical element of this ring.
    pub fn validate(&self, e: &Element) -> Result<(), AlgebraError> {
        match (self, e) {
            (RingDesc::Integers, Element::Int(_)) => Ok(()),
            (RingDesc::Rationals, Element::Rat(_)) => Ok(()),
            (RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. }, Element::Int(v)) => {
                let m = self.modulus().unwrap();
                if v.is_negative() || v >= m {
                    Err(self.wrong_ring())
                } else {
                    Ok(())
                }
            }
            (RingDesc::Poly { base, .. }, Element::Poly(coeffs)) => {
                self.validate_coeffs(base, coeffs, None)
            }
            (RingDesc::TruncatedPoly { base, n, .. }, Element::Poly(coeffs)) => {
                self.validate_coeffs(base, coeffs, Some(*n as usize))
            }
            _ => Err(self.wrong_ring()),
        }
    }

    fn validate_coeffs(
        &self,
        base: &RingDesc,
        coeffs: &[Element],
        limit: Option<usize>,
    ) -> Result<(), AlgebraError> {
        if let Some(limit) = limit {
            if coeffs.len() > limit {
                return Err(self.wrong_ring());
            }
        }
        for c in coeffs {
            base.validate(c)?;
        }
        if let Some(last) = coeffs.last() {
            if base.is_zero_elem(last) {
                return Err(self.wrong_ring());
            }
        }
        Ok(())
    }

    /// Accepts boundary forms (out-of-range residues, padded coefficient
    /// lists) and returns the canonical element.
    pub fn normalize(&self, e: &Element) -> Result<Element, AlgebraError> {
        match (self, e) {
            (RingDesc::Integers, Element::Int(_)) | (RingDesc::Rationals, Element::Rat(_)) => {
                Ok(e.clone())
            }
            (RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. }, Element::Int(v)) => {
                Ok(Element::Int(v.mod_floor(self.modulus().unwrap())))
            }
            (RingDesc::Poly { base, .. }, Element::Poly(coeffs)) => {
                let coeffs = coeffs
                    .iter()
                    .map(|c| base.normalize(c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::strip(base, coeffs))
            }
            (RingDesc::TruncatedPoly { base, n, .. }, Element::Poly(coeffs)) => {
                let coeffs = coeffs
                    .iter()
                    .take(*n as usize)
                    .map(|c| base.normalize(c))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::strip(base, coeffs))
            }
            _ => Err(self.wrong_ring()),
        }
    }

    fn strip(base: &RingDesc, mut coeffs: Vec<Element>) -> Element {
        while coeffs.last().is_some_and(|c| base.is_zero_elem(c)) {
            coeffs.pop();
        }
        Element::Poly(coeffs)
    }

    /// Builds a polynomial from a dense low-first coefficient list,
    /// normalizing boundary forms.
    pub fn poly_from_coeffs(&self, coeffs: Vec<Element>) -> Result<Element, AlgebraError> {
        match self {
            RingDesc::Poly { .. } | RingDesc::TruncatedPoly { .. } => {
                self.normalize(&Element::Poly(coeffs))
            }
            _ => Err(AlgebraError::NotAPolynomialRing(self.to_string())),
        }
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.add_unchecked(a, b))
    }

    fn add_unchecked(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (RingDesc::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x + y),
            (RingDesc::Rationals, Element::Rat(x), Element::Rat(y)) => Element::Rat(x + y),
            (
                RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. },
                Element::Int(x),
                Element::Int(y),
            ) => Element::Int((x + y).mod_floor(self.modulus().unwrap())),
            (
                RingDesc::Poly { base, .. } | RingDesc::TruncatedPoly { base, .. },
                Element::Poly(xs),
                Element::Poly(ys),
            ) => {
                let len = xs.len().max(ys.len());
                let mut out = Vec::with_capacity(len);
                for i in 0..len {
                    let zero = base.zero();
                    let x = xs.get(i).unwrap_or(&zero);
                    let y = ys.get(i).unwrap_or(&zero);
                    out.push(base.add_unchecked(x, y));
                }
                Self::strip(base, out)
            }
            _ => unreachable!("operands validated"),
        }
    }

    pub fn neg(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        Ok(self.neg_unchecked(a))
    }

    fn neg_unchecked(&self, a: &Element) -> Element {
        match (self, a) {
            (RingDesc::Integers, Element::Int(x)) => Element::Int(-x),
            (RingDesc::Rationals, Element::Rat(x)) => Element::Rat(-x),
            (RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. }, Element::Int(x)) => {
                Element::Int((-x).mod_floor(self.modulus().unwrap()))
            }
            (
                RingDesc::Poly { base, .. } | RingDesc::TruncatedPoly { base, .. },
                Element::Poly(xs),
            ) => Element::Poly(xs.iter().map(|c| base.neg_unchecked(c)).collect()),
            _ => unreachable!("operand validated"),
        }
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.add_unchecked(a, &self.neg_unchecked(b)))
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    fn mul_unchecked(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (RingDesc::Integers, Element::Int(x), Element::Int(y)) => Element::Int(x * y),
            (RingDesc::Rationals, Element::Rat(x), Element::Rat(y)) => Element::Rat(x * y),
            (
                RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. },
                Element::Int(x),
                Element::Int(y),
            ) => Element::Int((x * y).mod_floor(self.modulus().unwrap())),
            (RingDesc::Poly { base, .. }, Element::Poly(xs), Element::Poly(ys)) => {
                Self::poly_mul(base, xs, ys, None)
            }
            (RingDesc::TruncatedPoly { base, n, .. }, Element::Poly(xs), Element::Poly(ys)) => {
                Self::poly_mul(base, xs, ys, Some(*n as usize))
            }
            _ => unreachable!("operands validated"),
        }
    }

    fn poly_mul(base: &RingDesc, xs: &[Element], ys: &[Element], limit: Option<usize>) -> Element {
        if xs.is_empty() || ys.is_empty() {
            return Element::Poly(Vec::new());
        }
        let full = xs.len() + ys.len() - 1;
        let len = limit.map_or(full, |l| full.min(l));
        let mut out = vec![base.zero(); len];
        for (i, x) in xs.iter().enumerate() {
            for (j, y) in ys.iter().enumerate() {
                if i + j < len {
                    let prod = base.mul_unchecked(x, y);
                    out[i + j] = base.add_unchecked(&out[i + j], &prod);
                }
            }
        }
        Self::strip(base, out)
    }

    /// Left-to-right equality of canonical elements.
    pub fn eq_elems(&self, a: &Element, b: &Element) -> Result<bool, AlgebraError> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(a == b)
    }

    /// Multiplicative inverse where defined: nonzero field elements,
    /// invertible residues, truncated polynomials with invertible constant
    /// term, and constants invertible in the base of a polynomial ring.
    pub fn inv(&self, a: &Element) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        match (self, a) {
            (RingDesc::Integers, Element::Int(x)) => {
                if x.is_one() || (-x).is_one() {
                    Ok(Element::Int(x.clone()))
                } else {
                    Err(AlgebraError::NotAUnit)
                }
            }
            (RingDesc::Rationals, Element::Rat(x)) => {
                if x.is_zero() {
                    Err(AlgebraError::NotAUnit)
                } else {
                    Ok(Element::Rat(x.recip()))
                }
            }
            (RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. }, Element::Int(x)) => {
                let m = self.modulus().unwrap();
                if m.is_one() {
                    // trivial ring: 0 = 1 is its own inverse
                    return Ok(Element::Int(BigInt::zero()));
                }
                let ext = x.extended_gcd(m);
                if ext.gcd.is_one() {
                    Ok(Element::Int(ext.x.mod_floor(m)))
                } else {
                    Err(AlgebraError::NotAUnit)
                }
            }
            (RingDesc::TruncatedPoly { base, n, .. }, Element::Poly(coeffs)) => {
                let c0 = coeffs.first().ok_or(AlgebraError::NotAUnit)?;
                let c0_inv = base.inv(c0).map_err(|_| AlgebraError::NotAUnit)?;
                // Power series inversion truncated at n:
                // v_0 = c_0^-1, v_k = -c_0^-1 * sum_{i=1..k} c_i v_{k-i}.
                let n = *n as usize;
                let mut v = vec![c0_inv.clone()];
                for k in 1..n {
                    let mut s = base.zero();
                    for i in 1..=k.min(coeffs.len() - 1) {
                        let prod = base.mul_unchecked(&coeffs[i], &v[k - i]);
                        s = base.add_unchecked(&s, &prod);
                    }
                    v.push(base.neg_unchecked(&base.mul_unchecked(&c0_inv, &s)));
                }
                Ok(Self::strip(base, v))
            }
            (RingDesc::Poly { base, .. }, Element::Poly(coeffs)) => {
                if coeffs.len() != 1 {
                    return Err(AlgebraError::NotAUnit);
                }
                let inv = base.inv(&coeffs[0]).map_err(|_| AlgebraError::NotAUnit)?;
                Ok(Self::strip(base, vec![inv]))
            }
            _ => Err(AlgebraError::NotAUnit),
        }
    }

    pub fn pow(&self, a: &Element, e: u32) -> Result<Element, AlgebraError> {
        self.validate(a)?;
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// Degree and leading coefficient of a polynomial: the zero polynomial
    /// has degree -1 and no leading coefficient.
    pub fn poly_view(&self, f: &Element) -> Result<(i64, Option<Element>), AlgebraError> {
        match self {
            RingDesc::Poly { .. } | RingDesc::TruncatedPoly { .. } => {
                let f = self.normalize(f)?;
                let Element::Poly(coeffs) = &f else {
                    return Err(self.wrong_ring());
                };
                Ok((
                    coeffs.len() as i64 - 1,
                    coeffs.last().cloned(),
                ))
            }
            _ => Err(AlgebraError::NotAPolynomialRing(self.to_string())),
        }
    }

    pub fn deg(&self, f: &Element) -> Result<i64, AlgebraError> {
        Ok(self.poly_view(f)?.0)
    }

    pub fn lc(&self, f: &Element) -> Result<Element, AlgebraError> {
        self.poly_view(f)?.1.ok_or(AlgebraError::LcOfZero)
    }

    /// `c * v^k` as an element of a polynomial ring.
    pub fn monomial_elem(&self, c: Element, k: usize) -> Result<Element, AlgebraError> {
        match self {
            RingDesc::Poly { base, .. } | RingDesc::TruncatedPoly { base, .. } => {
                let mut coeffs = vec![base.zero(); k];
                coeffs.push(c);
                self.poly_from_coeffs(coeffs)
            }
            _ => Err(AlgebraError::NotAPolynomialRing(self.to_string())),
        }
    }

    /// Evaluates `sum_i comb_i * context_i` with left multiplication; the
    /// combination may be shorter than the context (missing entries are
    /// zero) but not longer.
    pub fn eval_comb(&self, context: &[Element], comb: &LinComb) -> Result<Element, AlgebraError> {
        if comb.len() > context.len() {
            return Err(AlgebraError::CombTooLong {
                comb: comb.len(),
                context: context.len(),
            });
        }
        let mut acc = self.zero();
        for (c, x) in comb.coeffs().iter().zip(context.iter()) {
            let prod = self.mul(c, x)?;
            acc = self.add(&acc, &prod)?;
        }
        Ok(acc)
    }

    pub fn comb_add(&self, a: &LinComb, b: &LinComb) -> Result<LinComb, AlgebraError> {
        let len = a.len().max(b.len());
        let zero = self.zero();
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let x = a.coeffs().get(i).unwrap_or(&zero);
            let y = b.coeffs().get(i).unwrap_or(&zero);
            out.push(self.add(x, y)?);
        }
        Ok(LinComb::new(out))
    }

    /// Left-scales every coefficient of the combination.
    pub fn comb_scale(&self, s: &Element, c: &LinComb) -> Result<LinComb, AlgebraError> {
        let coeffs = c
            .coeffs()
            .iter()
            .map(|x| self.mul(s, x))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LinComb::new(coeffs))
    }

    /// Pads a combination with zeros up to `len`.
    pub fn comb_pad(&self, c: &LinComb, len: usize) -> LinComb {
        let mut coeffs = c.coeffs().to_vec();
        while coeffs.len() < len {
            coeffs.push(self.zero());
        }
        LinComb::new(coeffs)
    }

    /// Canonical text of an element of this ring.
    pub fn format_element(&self, e: &Element) -> Result<String, AlgebraError> {
        self.validate(e)?;
        Ok(self.format_unchecked(e))
    }

    fn format_unchecked(&self, e: &Element) -> String {
        match (self, e) {
            (_, Element::Int(v)) => v.to_string(),
            (_, Element::Rat(v)) => v.to_string(),
            (
                RingDesc::Poly { base, var } | RingDesc::TruncatedPoly { base, var, .. },
                Element::Poly(coeffs),
            ) => {
                if coeffs.is_empty() {
                    return "0".to_string();
                }
                let one = base.one();
                let neg_one = base.neg_unchecked(&one);
                let mut out = String::new();
                for (deg, c) in coeffs.iter().enumerate().rev() {
                    if base.is_zero_elem(c) {
                        continue;
                    }
                    let piece = if deg == 0 {
                        base.format_unchecked(c)
                    } else {
                        let pow = if deg == 1 {
                            var.clone()
                        } else {
                            format!("{var}^{deg}")
                        };
                        if *c == one {
                            pow
                        } else if *c == neg_one {
                            format!("-{pow}")
                        } else {
                            let cs = base.format_unchecked(c);
                            if cs.contains(' ') {
                                format!("({cs})*{pow}")
                            } else {
                                format!("{cs}*{pow}")
                            }
                        }
                    };
                    if out.is_empty() {
                        out = piece;
                    } else if let Some(rest) = piece.strip_prefix('-') {
                        out = format!("{out} - {rest}");
                    } else {
                        out = format!("{out} + {piece}");
                    }
                }
                out
            }
            _ => unreachable!("element validated"),
        }
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDesc::Integers => write!(f, "Z"),
            RingDesc::Rationals => write!(f, "Q"),
            RingDesc::PrimeField { p } => write!(f, "GF({p})"),
            RingDesc::IntegersMod { modulus, .. } => write!(f, "Z/{modulus}"),
            RingDesc::TruncatedPoly { base, var, n } => write!(f, "{base}[{var}]/({var}^{n})"),
            RingDesc::Poly { .. } => {
                // Collapse a maximal chain of polynomial extensions into one
                // bracket, innermost variable first.
                let mut vars = Vec::new();
                let mut cursor = self;
                while let RingDesc::Poly { base, var } = cursor {
                    vars.push(var.as_str());
                    cursor = base;
                }
                vars.reverse();
                write!(f, "{cursor}[{}]", vars.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> RingDesc {
        parse_ring(s).unwrap()
    }

    fn elem(r: &RingDesc, s: &str) -> Element {
        parse_element(r, s).unwrap()
    }

    #[test]
    fn rational_arithmetic() {
        let q = RingDesc::rationals();
        let sum = q.add(&elem(&q, "1/2"), &elem(&q, "1/3")).unwrap();
        assert_eq!(sum, elem(&q, "5/6"));
    }

    #[test]
    fn modular_arithmetic() {
        let z12 = ring("Z/12");
        let p = z12.mul(&elem(&z12, "7"), &elem(&z12, "7")).unwrap();
        assert_eq!(p, elem(&z12, "1"));
    }

    #[test]
    fn polynomial_identity() {
        let qx = ring("Q[x]");
        let prod = qx
            .mul(&elem(&qx, "x + 1"), &elem(&qx, "x - 1"))
            .unwrap();
        assert_eq!(prod, elem(&qx, "x^2 - 1"));
    }

    #[test]
    fn poly_view_examples() {
        let qx = ring("Q[x]");
        assert_eq!(qx.poly_view(&qx.zero()).unwrap(), (-1, None));
        let f = elem(&qx, "x^2 + 1");
        assert_eq!(qx.poly_view(&f).unwrap(), (2, Some(elem(&RingDesc::rationals(), "1"))));
        // Padded list [1, 2, 0] normalizes before the view.
        let q = RingDesc::rationals();
        let padded = Element::Poly(vec![q.from_i64(1), q.from_i64(2), q.from_i64(0)]);
        assert_eq!(qx.poly_view(&padded).unwrap().0, 1);
        assert_eq!(qx.lc(&padded).unwrap(), q.from_i64(2));
        assert!(matches!(qx.lc(&qx.zero()), Err(AlgebraError::LcOfZero)));
    }

    #[test]
    fn eval_comb_examples() {
        let z = RingDesc::integers();
        let ctx = [z.from_i64(4), z.from_i64(2)];
        let comb = LinComb::new(vec![z.from_i64(0), z.from_i64(3)]);
        assert_eq!(z.eval_comb(&ctx, &comb).unwrap(), z.from_i64(6));
        assert_eq!(z.eval_comb(&ctx, &LinComb::empty()).unwrap(), z.zero());

        let qx = ring("Q[x]");
        let ctx = [elem(&qx, "x + 1"), elem(&qx, "x")];
        let comb = LinComb::new(vec![elem(&qx, "1"), elem(&qx, "-1")]);
        assert_eq!(qx.eval_comb(&ctx, &comb).unwrap(), qx.one());

        assert!(matches!(
            z.eval_comb(&[], &LinComb::new(vec![z.one()])),
            Err(AlgebraError::CombTooLong { .. })
        ));
    }

    #[test]
    fn inversion() {
        let q = RingDesc::rationals();
        assert_eq!(q.inv(&elem(&q, "-2/3")).unwrap(), elem(&q, "-3/2"));
        assert!(q.inv(&q.zero()).is_err());

        let gf7 = ring("GF(7)");
        assert_eq!(gf7.inv(&elem(&gf7, "3")).unwrap(), elem(&gf7, "5"));

        let z12 = ring("Z/12");
        assert_eq!(z12.inv(&elem(&z12, "7")).unwrap(), elem(&z12, "7"));
        assert!(z12.inv(&elem(&z12, "4")).is_err());

        let t = ring("Q[t]/(t^3)");
        let u = elem(&t, "1 + t");
        let v = t.inv(&u).unwrap();
        assert_eq!(t.mul(&u, &v).unwrap(), t.one());
        assert!(t.inv(&elem(&t, "t")).is_err());

        let z = RingDesc::integers();
        assert_eq!(z.inv(&z.from_i64(-1)).unwrap(), z.from_i64(-1));
        assert!(z.inv(&z.from_i64(2)).is_err());
    }

    #[test]
    fn mixed_ring_operands_reject() {
        let z = RingDesc::integers();
        let q = RingDesc::rationals();
        assert!(matches!(
            z.add(&z.one(), &q.one()),
            Err(AlgebraError::WrongRing { .. })
        ));
    }

    #[test]
    fn trivial_ring() {
        let triv = ring("Z/1");
        assert!(triv.is_trivial());
        assert_eq!(triv.one(), triv.zero());
        assert_eq!(triv.from_i64(5), triv.zero());
    }

    #[test]
    fn truncated_multiplication() {
        let t = ring("GF(2)[u]/(u^3)");
        let u = elem(&t, "u");
        let u2 = t.mul(&u, &u).unwrap();
        assert_eq!(u2, elem(&t, "u^2"));
        assert_eq!(t.mul(&u2, &u).unwrap(), t.zero());
    }

    #[test]
    fn ring_display_round_trip() {
        for text in [
            "Z",
            "Q",
            "GF(7)",
            "Z/12",
            "Z/1",
            "Z[x,y]",
            "Q[x]",
            "Q[t]/(t^3)",
            "Q[t]/(t^3)[x,y]",
            "GF(5)[u]/(u^2)",
        ] {
            let desc = ring(text);
            assert_eq!(desc.to_string(), text);
            assert_eq!(parse_ring(&desc.to_string()).unwrap(), desc);
        }
        // Iterated brackets normalize to one bracket list.
        assert_eq!(ring("Z[x][y]").to_string(), "Z[x,y]");
    }
}
