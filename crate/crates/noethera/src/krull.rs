//! Krull-dimension collapse certificates.
//!
//! For a commutative ring whose witness bound sits below `w^n`, probing the
//! witness along the monomial stream indexed by ordinals below `w^n` (tuple
//! encoding, last exponent most significant) must terminate: the probe
//! indices strictly descend and the final step certifies one monomial of
//! `x_0, ..., x_{n-1}` as a combination of monomials with strictly larger
//! ordinal index. That relation, packaged with the probes that produced it,
//! is a [`CollapseCert`]; [`verify_collapse`] rechecks it by ring arithmetic
//! alone, and [`lombardi_check`] attempts the boundary-ideal form by
//! monomial divisibility.

use thiserror::Error;

use crate::algebra::{AlgebraError, Element, LinComb, RingDesc};
use crate::noether::{self, GoodCert, Step, WitnessError, WitnessState};
use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KrullError {
    #[error("insufficient ordinal headroom: witness bound {bound} is not below w^{arity}")]
    InsufficientHeadroom { bound: String, arity: usize },
    #[error("probe oracle failed at index {index}: {msg}")]
    Oracle { index: String, msg: String },
    #[error("certificate does not verify")]
    InvalidCert,
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// One probe of the index stream: the ordinal index, its exponent tuple,
/// and the monomial the oracle produced there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub ordinal: Ordinal,
    pub tuple: Vec<u64>,
    pub monomial: Element,
}

/// A verified collapse relation: the last probed monomial equals the stated
/// combination of the earlier (ordinal-larger) probed monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollapseCert {
    pub arity: usize,
    pub ring: RingDesc,
    pub elements: Vec<Element>,
    pub probes: Vec<Probe>,
    pub comb: LinComb,
}

/// Drives a witness along an ordinal-indexed element stream: each probe
/// happens at the state's current bound, so the indices strictly descend
/// and stay below `idx_bound`. Returns the probe indices, the probed
/// elements, and the certificate for the final element.
pub fn extract_good_subsequence<F>(
    start: WitnessState,
    idx_bound: &Ordinal,
    mut oracle: F,
) -> Result<(Vec<Ordinal>, Vec<Element>, GoodCert), KrullError>
where
    F: FnMut(&Ordinal) -> Result<Element, KrullError>,
{
    if start.bound() >= idx_bound {
        return Err(KrullError::InsufficientHeadroom {
            bound: start.bound().to_string(),
            arity: 0,
        });
    }
    let mut state = start;
    let mut indices = Vec::new();
    let mut probed = Vec::new();
    loop {
        let index = state.bound().clone();
        let value = oracle(&index)?;
        indices.push(index);
        probed.push(value.clone());
        match state.advance(&value)? {
            Step::Good(cert) => return Ok((indices, probed, cert)),
            Step::Continue { state: next, .. } => state = next,
        }
    }
}

/// Builds the monomial `x_0^{e_0} * ... * x_{n-1}^{e_{n-1}}`.
fn monomial(ring: &RingDesc, elements: &[Element], tuple: &[u64]) -> Result<Element, AlgebraError> {
    let mut acc = ring.one();
    for (x, &e) in elements.iter().zip(tuple.iter()) {
        let e = u32::try_from(e).map_err(|_| {
            AlgebraError::BadDescriptor("monomial exponent too large".to_string())
        })?;
        acc = ring.mul(&acc, &ring.pow(x, e)?)?;
    }
    Ok(acc)
}

/// Runs the witness of a commutative ring along the monomial stream of the
/// given elements, indexed by ordinals below `w^n` with `n` the number of
/// elements. Requires the witness bound to be strictly below `w^n`.
pub fn collapse(ring: &RingDesc, elements: &[Element]) -> Result<CollapseCert, KrullError> {
    let arity = elements.len();
    for x in elements {
        ring.validate(x)?;
    }
    let (state, alpha) = noether::fresh(ring)?;
    let idx_bound = Ordinal::omega_pow(arity as u64);
    if alpha >= idx_bound {
        return Err(KrullError::InsufficientHeadroom {
            bound: alpha.to_string(),
            arity,
        });
    }
    let (indices, probed, cert) = extract_good_subsequence(state, &idx_bound, |index| {
        let tuple = index.decode_tuple(arity)?;
        monomial(ring, elements, &tuple).map_err(|e| KrullError::Oracle {
            index: index.to_string(),
            msg: e.to_string(),
        })
    })?;
    let probes = indices
        .into_iter()
        .zip(probed)
        .map(|(ordinal, monomial)| {
            let tuple = ordinal.decode_tuple(arity)?;
            Ok(Probe {
                ordinal,
                tuple,
                monomial,
            })
        })
        .collect::<Result<Vec<_>, KrullError>>()?;
    let cert = CollapseCert {
        arity,
        ring: ring.clone(),
        elements: elements.to_vec(),
        probes,
        comb: cert.comb,
    };
    debug_assert!(verify_collapse(&cert));
    Ok(cert)
}

/// Reverifies a collapse certificate from scratch: probe ordinals strictly
/// decrease and decode to the stated tuples, monomials recompute from the
/// tuples, and the combination of the earlier monomials equals the last.
/// Uses ring arithmetic only; returns false on any failure.
pub fn verify_collapse(cert: &CollapseCert) -> bool {
    let Some((last, earlier)) = cert.probes.split_last() else {
        return false;
    };
    for pair in cert.probes.windows(2) {
        if pair[0].ordinal <= pair[1].ordinal {
            return false;
        }
    }
    let idx_bound = Ordinal::omega_pow(cert.arity as u64);
    for probe in &cert.probes {
        if probe.ordinal >= idx_bound {
            return false;
        }
        match probe.ordinal.decode_tuple(cert.arity) {
            Ok(tuple) if tuple == probe.tuple => {}
            _ => return false,
        }
        match monomial(&cert.ring, &cert.elements, &probe.tuple) {
            Ok(m) if m == probe.monomial => {}
            _ => return false,
        }
    }
    let context: Vec<Element> = earlier.iter().map(|p| p.monomial.clone()).collect();
    match cert.ring.eval_comb(&context, &cert.comb) {
        Ok(value) => value == last.monomial,
        Err(_) => false,
    }
}

impl CollapseCert {
    /// Renders the certificate as a serializable document with canonical
    /// texts.
    pub fn to_document(&self) -> Result<crate::cert::CollapseDocument, AlgebraError> {
        Ok(crate::cert::CollapseDocument {
            version: crate::cert::FORMAT_VERSION,
            ring: self.ring.to_string(),
            arity: self.arity,
            elements: self
                .elements
                .iter()
                .map(|e| self.ring.format_element(e))
                .collect::<Result<Vec<_>, _>>()?,
            probes: self
                .probes
                .iter()
                .map(|p| {
                    Ok(crate::cert::ProbeRecord {
                        ordinal: p.ordinal.to_string(),
                        tuple: p.tuple.clone(),
                        monomial: self.ring.format_element(&p.monomial)?,
                    })
                })
                .collect::<Result<Vec<_>, AlgebraError>>()?,
            comb: self
                .comb
                .coeffs()
                .iter()
                .map(|c| self.ring.format_element(c))
                .collect::<Result<Vec<_>, _>>()?,
        })
    }

    /// Parses a document back into a certificate. The result still needs
    /// [`verify_collapse`].
    pub fn from_document(doc: &crate::cert::CollapseDocument) -> Result<Self, KrullError> {
        let ring = crate::algebra::parse_ring(&doc.ring)?;
        let elements = doc
            .elements
            .iter()
            .map(|t| crate::algebra::parse_element(&ring, t))
            .collect::<Result<Vec<_>, _>>()?;
        let probes = doc
            .probes
            .iter()
            .map(|p| {
                Ok(Probe {
                    ordinal: Ordinal::parse(&p.ordinal)?,
                    tuple: p.tuple.clone(),
                    monomial: crate::algebra::parse_element(&ring, &p.monomial)?,
                })
            })
            .collect::<Result<Vec<_>, KrullError>>()?;
        let comb = LinComb::new(
            doc.comb
                .iter()
                .map(|t| crate::algebra::parse_element(&ring, t))
                .collect::<Result<Vec<_>, _>>()?,
        );
        Ok(CollapseCert {
            arity: doc.arity,
            ring,
            elements,
            probes,
            comb,
        })
    }
}

/// Outcome of the boundary-ideal conversion attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LombardiOutcome {
    /// Every monomial supporting the collapse combination is divisible by a
    /// boundary generator, yielding an explicit membership combination for
    /// the final monomial in the boundary ideal.
    Full {
        generators: Vec<Element>,
        comb: LinComb,
    },
    /// The collapse relation stands on its own; no divisibility witness.
    CollapseOnly,
}

/// With `E` the final exponent tuple, the boundary generators are
/// `G_k = x_0^{e_0} * ... * x_{k-1}^{e_{k-1}} * x_k^{e_k + 1}`. The
/// conversion succeeds when every monomial in the combination's support is
/// an exponent-wise multiple of some generator.
pub fn lombardi_check(cert: &CollapseCert) -> Result<LombardiOutcome, KrullError> {
    if !verify_collapse(cert) {
        return Err(KrullError::InvalidCert);
    }
    let last = cert.probes.last().expect("verified certs have probes");
    let final_tuple = &last.tuple;
    let n = cert.arity;
    let mut gen_exps: Vec<Vec<u64>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut exps = vec![0u64; n];
        exps[..k].copy_from_slice(&final_tuple[..k]);
        exps[k] = final_tuple[k] + 1;
        gen_exps.push(exps);
    }
    let generators = gen_exps
        .iter()
        .map(|exps| monomial(&cert.ring, &cert.elements, exps))
        .collect::<Result<Vec<_>, _>>()?;

    let earlier = &cert.probes[..cert.probes.len() - 1];
    let mut gen_comb = vec![cert.ring.zero(); n];
    for (c, probe) in cert.comb.coeffs().iter().zip(earlier.iter()) {
        if cert.ring.is_zero_elem(c) {
            continue;
        }
        // Smallest k whose generator divides this support monomial,
        // exponent-wise.
        let found = (0..n).find(|&k| {
            gen_exps[k]
                .iter()
                .zip(probe.tuple.iter())
                .all(|(g, e)| g <= e)
        });
        let Some(k) = found else {
            return Ok(LombardiOutcome::CollapseOnly);
        };
        let quotient_exps: Vec<u64> = probe
            .tuple
            .iter()
            .zip(gen_exps[k].iter())
            .map(|(e, g)| e - g)
            .collect();
        let quotient = monomial(&cert.ring, &cert.elements, &quotient_exps)?;
        let term = cert.ring.mul(c, &quotient)?;
        gen_comb[k] = cert.ring.add(&gen_comb[k], &term)?;
    }
    let comb = LinComb::new(gen_comb);
    debug_assert_eq!(
        cert.ring.eval_comb(&generators, &comb).unwrap(),
        last.monomial
    );
    Ok(LombardiOutcome::Full { generators, comb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_element, parse_ring};

    fn ring(s: &str) -> RingDesc {
        parse_ring(s).unwrap()
    }

    fn elem(r: &RingDesc, s: &str) -> Element {
        parse_element(r, s).unwrap()
    }

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    #[test]
    fn field_powers_extraction() {
        // Over Q with f(g) = 5^g on [0, w): probes 1 then 0, cert 1 = (1/5)*5.
        let q = ring("Q");
        let (state, _) = noether::fresh(&q).unwrap();
        let (indices, probed, cert) =
            extract_good_subsequence(state, &Ordinal::omega(), |index| {
                let e = index.as_nat().expect("finite index") as u32;
                Ok(q.pow(&elem(&q, "5"), e).unwrap())
            })
            .unwrap();
        assert_eq!(indices, vec![ord("1"), ord("0")]);
        assert_eq!(probed, vec![elem(&q, "5"), elem(&q, "1")]);
        assert_eq!(cert.comb.coeffs(), &[elem(&q, "1/5")]);
    }

    #[test]
    fn trivial_ring_extraction() {
        let triv = ring("Z/1");
        let (state, _) = noether::fresh(&triv).unwrap();
        let (indices, _, cert) =
            extract_good_subsequence(state, &Ordinal::omega(), |_| Ok(triv.zero())).unwrap();
        assert_eq!(indices, vec![Ordinal::zero()]);
        assert!(cert.comb.is_empty());
    }

    #[test]
    fn integers_two_three_hand_trace() {
        let z = ring("Z");
        let cert = collapse(&z, &[z.from_i64(2), z.from_i64(3)]).unwrap();
        assert_eq!(cert.arity, 2);
        let expected_probes = vec![
            Probe {
                ordinal: ord("w"),
                tuple: vec![0, 1],
                monomial: z.from_i64(3),
            },
            Probe {
                ordinal: ord("2"),
                tuple: vec![2, 0],
                monomial: z.from_i64(4),
            },
            Probe {
                ordinal: ord("0"),
                tuple: vec![0, 0],
                monomial: z.from_i64(1),
            },
        ];
        assert_eq!(cert.probes, expected_probes);
        // 1 = (-1)*3 + 1*4.
        assert_eq!(cert.comb.coeffs(), &[z.from_i64(-1), z.from_i64(1)]);
        assert!(verify_collapse(&cert));
    }

    #[test]
    fn field_single_element() {
        let q = ring("Q");
        let cert = collapse(&q, &[elem(&q, "7")]).unwrap();
        assert_eq!(cert.probes.last().unwrap().tuple, vec![0]);
        assert_eq!(cert.comb.coeffs(), &[elem(&q, "1/7")]);
        assert!(verify_collapse(&cert));
    }

    #[test]
    fn rational_poly_pair_hand_trace() {
        let qx = ring("Q[x]");
        let cert = collapse(&qx, &[elem(&qx, "x"), elem(&qx, "x + 1")]).unwrap();
        let ords: Vec<Ordinal> = cert.probes.iter().map(|p| p.ordinal.clone()).collect();
        assert_eq!(ords, vec![ord("w"), ord("1"), ord("0")]);
        assert_eq!(cert.probes.last().unwrap().tuple, vec![0, 0]);
        // 1 = 1*(x+1) + (-1)*x.
        assert_eq!(cert.comb.coeffs(), &[qx.one(), elem(&qx, "-1")]);
        assert!(verify_collapse(&cert));
    }

    #[test]
    fn verify_rejects_mutations() {
        let z = ring("Z");
        let cert = collapse(&z, &[z.from_i64(2), z.from_i64(3)]).unwrap();

        let mut tampered = cert.clone();
        tampered.comb = LinComb::new(vec![z.from_i64(1), z.from_i64(1)]);
        assert!(!verify_collapse(&tampered));

        // Reordering probes breaks the strict descent.
        let mut reordered = cert.clone();
        reordered.probes.swap(0, 2);
        assert!(!verify_collapse(&reordered));

        // A tuple inconsistent with its ordinal is rejected.
        let mut bad_tuple = cert.clone();
        bad_tuple.probes[0].tuple = vec![1, 1];
        assert!(!verify_collapse(&bad_tuple));

        // A monomial that does not recompute is rejected.
        let mut bad_monomial = cert;
        bad_monomial.probes[1].monomial = z.from_i64(5);
        assert!(!verify_collapse(&bad_monomial));
    }

    #[test]
    fn headroom_law() {
        let qxy = ring("Q[x,y]");
        let xs = [elem(&qxy, "x"), elem(&qxy, "y")];
        // Bound w^2 is not below w^2: rejected at n = 2.
        assert!(matches!(
            collapse(&qxy, &xs),
            Err(KrullError::InsufficientHeadroom { .. })
        ));
        // n = 3 has headroom.
        let xs3 = [elem(&qxy, "x"), elem(&qxy, "y"), elem(&qxy, "x + y")];
        let cert = collapse(&qxy, &xs3).unwrap();
        assert!(verify_collapse(&cert));

        // Z at n = 1: bound w is not below w^1.
        let z = ring("Z");
        assert!(matches!(
            collapse(&z, &[z.from_i64(2)]),
            Err(KrullError::InsufficientHeadroom { .. })
        ));
    }

    #[test]
    fn probe_zero_forces_the_next_advance() {
        // Whenever a run reaches probe index 0, it is the last probe.
        let z = ring("Z");
        for (a, b) in [(2i64, 3i64), (4, 6), (10, 15), (-7, 11)] {
            let cert = collapse(&z, &[z.from_i64(a), z.from_i64(b)]).unwrap();
            for (i, probe) in cert.probes.iter().enumerate() {
                if probe.ordinal.is_zero() {
                    assert_eq!(i, cert.probes.len() - 1);
                }
            }
        }
    }

    #[test]
    fn lombardi_full_for_integers() {
        let z = ring("Z");
        let cert = collapse(&z, &[z.from_i64(2), z.from_i64(3)]).unwrap();
        match lombardi_check(&cert).unwrap() {
            LombardiOutcome::Full { generators, comb } => {
                // E = (0,0): G_0 = 2, G_1 = 3.
                assert_eq!(generators, vec![z.from_i64(2), z.from_i64(3)]);
                let value = z.eval_comb(&generators, &comb).unwrap();
                assert_eq!(value, z.from_i64(1));
            }
            other => panic!("expected Full, got {other:?}"),
        }
    }

    #[test]
    fn lombardi_full_for_poly_pair() {
        let qx = ring("Q[x]");
        let cert = collapse(&qx, &[elem(&qx, "x"), elem(&qx, "x + 1")]).unwrap();
        match lombardi_check(&cert).unwrap() {
            LombardiOutcome::Full { generators, comb } => {
                assert_eq!(generators, vec![elem(&qx, "x"), elem(&qx, "x + 1")]);
                let value = qx.eval_comb(&generators, &comb).unwrap();
                assert_eq!(value, qx.one());
            }
            other => panic!("expected Full, got {other:?}"),
        }
    }

    #[test]
    fn lombardi_collapse_only_without_divisibility() {
        // Synthetic but verified relation whose support monomial x1^5 is
        // divisible by neither G_0 = x0^4 nor G_1 = x0^3*x1^3 when E = (3,2).
        let z = ring("Z");
        let one = z.from_i64(1);
        let cert = CollapseCert {
            arity: 2,
            ring: z.clone(),
            elements: vec![one.clone(), one.clone()],
            probes: vec![
                Probe {
                    ordinal: ord("w*5"),
                    tuple: vec![0, 5],
                    monomial: one.clone(),
                },
                Probe {
                    ordinal: ord("w*2 + 3"),
                    tuple: vec![3, 2],
                    monomial: one.clone(),
                },
            ],
            comb: LinComb::new(vec![one.clone()]),
        };
        assert!(verify_collapse(&cert));
        assert_eq!(
            lombardi_check(&cert).unwrap(),
            LombardiOutcome::CollapseOnly
        );
    }

    #[test]
    fn lombardi_rejects_unverified() {
        let z = ring("Z");
        let mut cert = collapse(&z, &[z.from_i64(2), z.from_i64(3)]).unwrap();
        cert.comb = LinComb::new(vec![z.from_i64(5), z.from_i64(5)]);
        assert!(matches!(lombardi_check(&cert), Err(KrullError::InvalidCert)));
    }
}
