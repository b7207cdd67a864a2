//! Deterministic random generators shared by the integration suites.

#![allow(dead_code)]

use noethera::algebra::{Element, RingDesc};
use noethera::chomp::ConstraintSet;
use noethera::ordinal::Ordinal;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random CNF ordinal with exponents below `max_exp` and coefficients in
/// `1..=max_coeff`.
pub fn random_ordinal(rng: &mut StdRng, max_exp: u64, max_coeff: u64) -> Ordinal {
    let mut acc = Ordinal::zero();
    let terms = rng.gen_range(0..=3usize);
    for _ in 0..terms {
        let exp = rng.gen_range(0..max_exp);
        let coeff = rng.gen_range(1..=max_coeff);
        acc = acc.nat_sum(&Ordinal::monomial(exp, coeff));
    }
    acc
}

/// Random ordinal strictly below a nonzero bound: truncate the CNF at a
/// random term, shrink that term's coefficient, and append smaller junk.
pub fn random_ordinal_below(rng: &mut StdRng, bound: &Ordinal) -> Ordinal {
    assert!(!bound.is_zero(), "no ordinal below zero");
    let terms: Vec<(u64, u64)> = bound.terms().collect();
    let cut = rng.gen_range(0..terms.len());
    let mut acc = Ordinal::zero();
    for &(e, c) in &terms[..cut] {
        acc = acc.nat_sum(&Ordinal::monomial(e, c));
    }
    let (exp, coeff) = terms[cut];
    let shrunk = rng.gen_range(0..coeff);
    acc = acc.nat_sum(&Ordinal::monomial(exp, shrunk));
    if exp > 0 {
        for _ in 0..rng.gen_range(0..=2usize) {
            let e = rng.gen_range(0..exp);
            let c = rng.gen_range(1..=4u64);
            acc = acc.nat_sum(&Ordinal::monomial(e, c));
        }
    }
    assert!(acc < *bound);
    acc
}

/// Random constraint set on a board of height `alpha` with up to
/// `max_pairs` pairs at columns below `max_col`.
pub fn random_constraints(
    rng: &mut StdRng,
    alpha: &Ordinal,
    max_pairs: usize,
    max_col: u64,
) -> ConstraintSet {
    let mut pairs = Vec::new();
    for _ in 0..rng.gen_range(0..=max_pairs) {
        let d = rng.gen_range(0..max_col);
        let a = random_ordinal_below(rng, alpha);
        pairs.push((d, a));
    }
    ConstraintSet::new(alpha.clone(), pairs).unwrap()
}

/// A random point strictly inside the position, if any remains.
pub fn random_chop_point(
    rng: &mut StdRng,
    set: &ConstraintSet,
    max_col: u64,
) -> Option<(u64, Ordinal)> {
    for _ in 0..30 {
        let d = rng.gen_range(0..max_col);
        let h = set.column_height(d);
        if !h.is_zero() {
            return Some((d, random_ordinal_below(rng, &h)));
        }
    }
    None
}

/// Random element of a ring, with polynomial degrees up to `max_deg` and
/// integer coefficients bounded by `max_coeff`.
pub fn random_element(
    rng: &mut StdRng,
    ring: &RingDesc,
    max_deg: usize,
    max_coeff: i64,
) -> Element {
    match ring {
        RingDesc::Integers => ring.from_i64(rng.gen_range(-max_coeff..=max_coeff)),
        RingDesc::Rationals => {
            let num = rng.gen_range(-max_coeff..=max_coeff);
            let den = rng.gen_range(1..=max_coeff.max(1));
            let text = format!("{num}/{den}");
            noethera::algebra::parse_element(ring, &text).unwrap()
        }
        RingDesc::PrimeField { .. } | RingDesc::IntegersMod { .. } => {
            ring.from_i64(rng.gen_range(0..=2 * max_coeff))
        }
        RingDesc::Poly { base, .. } | RingDesc::TruncatedPoly { base, .. } => {
            let deg = rng.gen_range(0..=max_deg);
            let coeffs = (0..=deg)
                .map(|_| random_element(rng, base, max_deg, max_coeff))
                .collect();
            ring.poly_from_coeffs(coeffs).unwrap()
        }
    }
}

/// Random nonzero element.
pub fn random_nonzero(
    rng: &mut StdRng,
    ring: &RingDesc,
    max_deg: usize,
    max_coeff: i64,
) -> Element {
    loop {
        let e = random_element(rng, ring, max_deg, max_coeff);
        if !ring.is_zero_elem(&e) {
            return e;
        }
    }
}
