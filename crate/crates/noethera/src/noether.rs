//! Good-list witnesses with declared ordinal bounds.
//!
//! A witness state tracks an implicit list of ring elements together with a
//! bound. Feeding it one more element either produces a [`GoodCert`] — plain
//! coefficients expressing the new element as a combination of the earlier
//! ones — or a strictly smaller bound and a successor state. Since ordinal
//! descent is well founded, every infinite stream of elements is forced to
//! yield a certificate after finitely many steps.
//!
//! Base instances come from Euclidean structures: a rank function that is
//! bottom exactly on zero, and a reduction step `y = q*pivot + z` that
//! strictly drops the rank. The converter in this module turns any such
//! structure into a witness; polynomial rings are handled by the lifting in
//! [`crate::hilbert`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, Element, LinComb, RingDesc};
use crate::hilbert;
use crate::ordinal::{Ordinal, OrdinalExt};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("no witness instance for ring {0}")]
    UnsupportedDescriptor(String),
    #[error("element is too large to rank (exceeds the machine ordinal range)")]
    RankTooLarge,
    #[error("witness invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coefficients proving the last element of a list is generated by the
/// earlier ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodCert {
    pub comb: LinComb,
}

/// Result of advancing a witness with one element.
#[derive(Debug, Clone)]
pub enum Step {
    Good(GoodCert),
    Continue { bound: Ordinal, state: WitnessState },
}

pub(crate) trait Strategy: Send + Sync {
    fn ring(&self) -> &RingDesc;
    fn bound(&self) -> &Ordinal;
    fn sigma_len(&self) -> usize;
    fn advance(&self, x: &Element) -> Result<Step, WitnessError>;
    /// Validates every stored invariant against the list consumed so far.
    fn self_check(&self, sigma: &[Element]) -> Result<(), String>;
    fn clone_box(&self) -> Box<dyn Strategy>;
    /// For states whose behavior depends only on one stored pivot: the
    /// pivot, its combination over the consumed list, and an equivalent
    /// state whose consumed list is the pivot alone.
    fn pivot_compression(&self) -> Option<(Element, LinComb, WitnessState)> {
        None
    }
}

/// Opaque, duplicable witness state. Advancing is pure: the state is not
/// consumed and may be advanced again with different elements.
pub struct WitnessState(Box<dyn Strategy>);

impl WitnessState {
    pub(crate) fn new(strategy: Box<dyn Strategy>) -> Self {
        WitnessState(strategy)
    }

    pub fn ring(&self) -> &RingDesc {
        self.0.ring()
    }

    /// The declared current bound: every `Continue` from here is strictly
    /// below it.
    pub fn bound(&self) -> &Ordinal {
        self.0.bound()
    }

    /// Length of the implicit list consumed so far.
    pub fn len(&self) -> usize {
        self.0.sigma_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn advance(&self, x: &Element) -> Result<Step, WitnessError> {
        self.0.advance(x)
    }

    /// An independent copy with identical observable behavior.
    pub fn duplicate(&self) -> WitnessState {
        self.clone()
    }

    pub(crate) fn pivot_compression(&self) -> Option<(Element, LinComb, WitnessState)> {
        self.0.pivot_compression()
    }

    /// Checks internal invariants (stored certificates, bound bookkeeping)
    /// against the list of elements this state has consumed, in order.
    pub fn self_check(&self, sigma: &[Element]) -> Result<(), String> {
        if sigma.len() != self.len() {
            return Err(format!(
                "state consumed {} elements, got {}",
                self.len(),
                sigma.len()
            ));
        }
        self.0.self_check(sigma)
    }
}

impl Clone for WitnessState {
    fn clone(&self) -> Self {
        WitnessState(self.0.clone_box())
    }
}

impl std::fmt::Debug for WitnessState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WitnessState")
            .field("ring", &self.ring().to_string())
            .field("bound", &self.bound().to_string())
            .field("len", &self.len())
            .finish()
    }
}

/// Fresh witness for a supported ring, with its declared bound: 0 for the
/// trivial ring, 1 for a discrete field, `w` for the integers, the number of
/// prime factors (with multiplicity) for `Z/m`, `n` for `K[v]/(v^n)`, and
/// the lifted bound for polynomial towers.
pub fn fresh(desc: &RingDesc) -> Result<(WitnessState, Ordinal), WitnessError> {
    match desc {
        RingDesc::Poly { base, var } => hilbert::lift(base, var),
        _ => euclid_fresh(desc),
    }
}

/// Fresh converter state over the ring's Euclidean structure. Errors where
/// no structure exists; [`fresh`] falls back to the lifting there.
pub(crate) fn euclid_fresh(desc: &RingDesc) -> Result<(WitnessState, Ordinal), WitnessError> {
    let structure = euclid_structure(desc)?;
    let alpha = structure.declared_bound().clone();
    let state = WitnessState::new(Box::new(EuclidState {
        structure,
        sigma_len: 0,
        pivot: None,
        bound: alpha.clone(),
    }));
    Ok((state, alpha))
}

/// Checks a certificate by ring arithmetic alone: the combination of all
/// but the last element must equal the last element.
pub fn verify_good(
    ring: &RingDesc,
    sigma: &[Element],
    cert: &GoodCert,
) -> Result<bool, AlgebraError> {
    let Some((last, context)) = sigma.split_last() else {
        return Err(AlgebraError::CombTooLong {
            comb: cert.comb.len(),
            context: 0,
        });
    };
    let value = ring.eval_comb(context, &cert.comb)?;
    ring.eq_elems(&value, last)
}

/// Rank and reduction step witnessing that a ring is Euclidean below a
/// declared ordinal.
#[derive(Debug, Clone)]
pub struct EuclidStructure {
    ring: RingDesc,
    kind: EuclidKind,
    declared: Ordinal,
}

#[derive(Debug, Clone)]
enum EuclidKind {
    /// Nonzero elements have rank 0; the step divides exactly.
    Field,
    /// rank(x) = |x| - 1; the step takes the remainder in [0, |pivot|).
    Integers,
    /// rank(x) = number of prime factors of gcd(x, m) with multiplicity.
    IntegersMod,
    /// rank(x) = index of the lowest nonzero coefficient; the step truncates
    /// below the pivot's order.
    TruncatedPoly,
    /// rank(x) = deg x; the step is polynomial division.
    PolyOverField,
}

/// Euclidean structure for the supported base rings: `Z`, `Z/m`,
/// `K[v]/(v^n)`, univariate `K[v]` over a field, and fields themselves.
pub fn euclid_structure(desc: &RingDesc) -> Result<EuclidStructure, WitnessError> {
    let (kind, declared) = match desc {
        RingDesc::Rationals | RingDesc::PrimeField { .. } => {
            (EuclidKind::Field, Ordinal::from_nat(1))
        }
        RingDesc::Integers => (EuclidKind::Integers, Ordinal::omega()),
        RingDesc::IntegersMod { factors, .. } => {
            let omega_m: u64 = factors.iter().map(|(_, e)| u64::from(*e)).sum();
            (EuclidKind::IntegersMod, Ordinal::from_nat(omega_m))
        }
        RingDesc::TruncatedPoly { n, .. } => (
            EuclidKind::TruncatedPoly,
            Ordinal::from_nat(u64::from(*n)),
        ),
        RingDesc::Poly { base, .. } if base.is_field() => {
            (EuclidKind::PolyOverField, Ordinal::omega())
        }
        other => return Err(WitnessError::UnsupportedDescriptor(other.to_string())),
    };
    Ok(EuclidStructure {
        ring: desc.clone(),
        kind,
        declared,
    })
}

impl EuclidStructure {
    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    /// The declared bound: every rank is strictly below it.
    pub fn declared_bound(&self) -> &Ordinal {
        &self.declared
    }

    /// Rank of an element; bottom exactly on zero.
    pub fn rank(&self, x: &Element) -> Result<OrdinalExt, WitnessError> {
        self.ring.validate(x)?;
        if self.ring.is_zero_elem(x) {
            return Ok(OrdinalExt::Bottom);
        }
        let rank = match &self.kind {
            EuclidKind::Field => Ordinal::zero(),
            EuclidKind::Integers => {
                let Element::Int(v) = x else { unreachable!() };
                let abs = v.abs();
                let abs: u64 = u64::try_from(&abs).map_err(|_| WitnessError::RankTooLarge)?;
                Ordinal::from_nat(abs - 1)
            }
            EuclidKind::IntegersMod => {
                let Element::Int(v) = x else { unreachable!() };
                Ordinal::from_nat(self.omega_of_gcd(v))
            }
            EuclidKind::TruncatedPoly => {
                let Element::Poly(coeffs) = x else { unreachable!() };
                let ord = coeffs
                    .iter()
                    .position(|c| !is_zero_in_base(&self.ring, c))
                    .expect("nonzero polynomial has a nonzero coefficient");
                Ordinal::from_nat(ord as u64)
            }
            EuclidKind::PolyOverField => {
                let Element::Poly(coeffs) = x else { unreachable!() };
                Ordinal::from_nat(coeffs.len() as u64 - 1)
            }
        };
        Ok(OrdinalExt::Ord(rank))
    }

    /// Reduction step: returns `(q, z)` with `z = y - q*pivot` and
    /// `rank(z) < rank(pivot)`, for a nonzero pivot.
    pub fn step(&self, pivot: &Element, y: &Element) -> Result<(Element, Element), WitnessError> {
        self.ring.validate(pivot)?;
        self.ring.validate(y)?;
        if self.ring.is_zero_elem(pivot) {
            return Err(WitnessError::Internal("step needs a nonzero pivot".into()));
        }
        match &self.kind {
            EuclidKind::Field => {
                let q = self.ring.mul(y, &self.ring.inv(pivot)?)?;
                Ok((q, self.ring.zero()))
            }
            EuclidKind::Integers => {
                let (Element::Int(p), Element::Int(yv)) = (pivot, y) else {
                    unreachable!()
                };
                let m = p.abs();
                let z = yv.mod_floor(&m);
                let q = (yv - &z) / p;
                Ok((Element::Int(q), Element::Int(z)))
            }
            EuclidKind::IntegersMod => self.step_mod(pivot, y),
            EuclidKind::TruncatedPoly => self.step_truncated(pivot, y),
            EuclidKind::PolyOverField => self.step_poly(pivot, y),
        }
    }

    fn omega_of_gcd(&self, x: &BigInt) -> u64 {
        let RingDesc::IntegersMod { factors, .. } = &self.ring else {
            unreachable!()
        };
        let mut total = 0u64;
        for (p, e) in factors {
            let mut v = 0u32;
            let mut rest = x.clone();
            while v < *e && (&rest % p).is_zero() {
                rest /= p;
                v += 1;
            }
            total += u64::from(v);
        }
        total
    }

    /// In `Z/m`, reduce `y` modulo the subgroup generated by the pivot to
    /// the representative sharing the fewest prime factors with `m`.
    /// Writing `d = gcd(pivot, m)` and `g = gcd(y, d)`, a representative
    /// `z = y + t*d` with `gcd(z, m) = g` exists; `t` is chosen one prime of
    /// `m` at a time and combined by remainders.
    fn step_mod(&self, pivot: &Element, y: &Element) -> Result<(Element, Element), WitnessError> {
        let RingDesc::IntegersMod { modulus: m, factors } = &self.ring else {
            unreachable!()
        };
        let (Element::Int(p), Element::Int(yv)) = (pivot, y) else {
            unreachable!()
        };
        let d = p.gcd(m);
        let m_over_d = m / &d;
        let p_over_d = p / &d;
        let u = if m_over_d.is_one() {
            BigInt::zero()
        } else {
            p_over_d.extended_gcd(&m_over_d).x.mod_floor(&m_over_d)
        };

        if yv.mod_floor(&d).is_zero() {
            // y is in the subgroup: exact quotient, zero remainder.
            let q = ((yv / &d) * &u).mod_floor(m);
            return Ok((Element::Int(q), self.ring.zero()));
        }

        let g = yv.gcd(&d);
        let y_red = yv / &g;
        let d_red = &d / &g;
        // For each prime of m where the valuation of g falls short of m's
        // and d_red is invertible, avoid the single residue of t that would
        // raise the valuation of y_red + t*d_red.
        let mut t = BigInt::zero();
        let mut modulus_so_far = BigInt::one();
        for (prime, e_m) in factors {
            let v_g = {
                let mut v = 0u32;
                let mut rest = g.clone();
                while v < *e_m && (&rest % prime).is_zero() {
                    rest /= prime;
                    v += 1;
                }
                v
            };
            if v_g >= *e_m || (&d_red % prime).is_zero() {
                continue;
            }
            let inv_d = d_red.extended_gcd(prime).x.mod_floor(prime);
            let bad = (-&y_red * inv_d).mod_floor(prime);
            let choice = if bad.is_zero() {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            // Merge t = choice (mod prime) into the remainders so far.
            let ext = modulus_so_far.extended_gcd(prime);
            let diff = (&choice - &t).mod_floor(prime);
            t += &modulus_so_far * ((ext.x * diff).mod_floor(prime));
            modulus_so_far *= prime;
        }

        let z = (yv + &t * &d).mod_floor(m);
        // z = y - q*pivot requires q*pivot = -t*d (mod m).
        let q = ((-&t).mod_floor(&m_over_d) * &u).mod_floor(m);
        debug_assert_eq!((yv - &q * p).mod_floor(m), z);
        debug_assert_eq!(z.gcd(m), g);
        Ok((Element::Int(q), Element::Int(z)))
    }

    /// In `K[v]/(v^n)`, keep the part of `y` below the pivot's order; the
    /// discarded part is an exact multiple of the pivot because the pivot
    /// factors as `v^k * unit`.
    fn step_truncated(
        &self,
        pivot: &Element,
        y: &Element,
    ) -> Result<(Element, Element), WitnessError> {
        let (Element::Poly(pc), Element::Poly(yc)) = (pivot, y) else {
            unreachable!()
        };
        let k = pc
            .iter()
            .position(|c| !is_zero_in_base(&self.ring, c))
            .expect("pivot is nonzero");
        let z = self
            .ring
            .poly_from_coeffs(yc.iter().take(k).cloned().collect())?;
        // y - z = v^k * w; pivot = v^k * u with u a unit.
        let w = self
            .ring
            .poly_from_coeffs(yc.iter().skip(k).cloned().collect())?;
        let u = self
            .ring
            .poly_from_coeffs(pc.iter().skip(k).cloned().collect())?;
        let q = self.ring.mul(&w, &self.ring.inv(&u)?)?;
        debug_assert_eq!(
            self.ring
                .sub(y, &self.ring.mul(&q, pivot).unwrap())
                .unwrap(),
            z
        );
        Ok((q, z))
    }

    /// Polynomial long division in `K[v]`.
    fn step_poly(&self, pivot: &Element, y: &Element) -> Result<(Element, Element), WitnessError> {
        let RingDesc::Poly { base, .. } = &self.ring else {
            unreachable!()
        };
        let dp = self.ring.deg(pivot)?;
        let lp_inv = base.inv(&self.ring.lc(pivot)?)?;
        let mut q = self.ring.zero();
        let mut rem = y.clone();
        loop {
            let dr = self.ring.deg(&rem)?;
            if dr < dp {
                return Ok((q, rem));
            }
            let factor = base.mul(&self.ring.lc(&rem)?, &lp_inv)?;
            let mono = self.ring.monomial_elem(factor, (dr - dp) as usize)?;
            q = self.ring.add(&q, &mono)?;
            rem = self.ring.sub(&rem, &self.ring.mul(&mono, pivot)?)?;
        }
    }
}

fn is_zero_in_base(ring: &RingDesc, c: &Element) -> bool {
    match ring {
        RingDesc::Poly { base, .. } | RingDesc::TruncatedPoly { base, .. } => {
            base.is_zero_elem(c)
        }
        _ => unreachable!("polynomial coefficients live over a polynomial ring"),
    }
}

/// Witness built from a Euclidean structure. The state keeps the latest
/// reduction remainder as pivot together with coefficients expressing the
/// pivot over the consumed list.
#[derive(Clone)]
struct EuclidState {
    structure: EuclidStructure,
    sigma_len: usize,
    pivot: Option<PivotData>,
    bound: Ordinal,
}

#[derive(Clone)]
struct PivotData {
    pivot: Element,
    /// pivot = sum comb_i * sigma_i over the consumed list.
    comb: LinComb,
}

impl Strategy for EuclidState {
    fn ring(&self) -> &RingDesc {
        &self.structure.ring
    }

    fn bound(&self) -> &Ordinal {
        &self.bound
    }

    fn sigma_len(&self) -> usize {
        self.sigma_len
    }

    fn advance(&self, x: &Element) -> Result<Step, WitnessError> {
        let ring = &self.structure.ring;
        let x = ring.normalize(x)?;
        match &self.pivot {
            None => {
                if ring.is_zero_elem(&x) {
                    return Ok(Step::Good(GoodCert {
                        comb: LinComb::empty(),
                    }));
                }
                let OrdinalExt::Ord(rank) = self.structure.rank(&x)? else {
                    unreachable!("nonzero elements have proper ranks")
                };
                let mut state = self.clone();
                state.sigma_len += 1;
                state.pivot = Some(PivotData {
                    pivot: x,
                    comb: LinComb::unit(ring, self.sigma_len),
                });
                state.bound = rank.clone();
                Ok(Step::Continue {
                    bound: rank,
                    state: WitnessState::new(Box::new(state)),
                })
            }
            Some(data) => {
                let (q, z) = self.structure.step(&data.pivot, &x)?;
                if ring.is_zero_elem(&z) {
                    // x = q * pivot = q * (comb . sigma)
                    let comb = ring.comb_scale(&q, &data.comb)?;
                    return Ok(Step::Good(GoodCert { comb }));
                }
                let OrdinalExt::Ord(rank) = self.structure.rank(&z)? else {
                    unreachable!("z was checked nonzero")
                };
                // z = x - q * pivot: negate the scaled pivot comb and put a
                // one at x's position.
                let neg_q = ring.neg(&q)?;
                let scaled = ring.comb_scale(&neg_q, &data.comb)?;
                let mut coeffs = ring.comb_pad(&scaled, self.sigma_len).coeffs().to_vec();
                coeffs.push(ring.one());
                let mut state = self.clone();
                state.sigma_len += 1;
                state.pivot = Some(PivotData {
                    pivot: z,
                    comb: LinComb::new(coeffs),
                });
                state.bound = rank.clone();
                Ok(Step::Continue {
                    bound: rank,
                    state: WitnessState::new(Box::new(state)),
                })
            }
        }
    }

    fn self_check(&self, sigma: &[Element]) -> Result<(), String> {
        let ring = &self.structure.ring;
        match &self.pivot {
            None => {
                if self.sigma_len != 0 {
                    return Err("pivotless state with nonempty list".to_string());
                }
                if self.bound != *self.structure.declared_bound() {
                    return Err("fresh state bound differs from the declared bound".to_string());
                }
            }
            Some(data) => {
                let value = ring
                    .eval_comb(sigma, &data.comb)
                    .map_err(|e| format!("pivot comb: {e}"))?;
                if value != data.pivot {
                    return Err("stored pivot does not match its combination".to_string());
                }
                match self.structure.rank(&data.pivot) {
                    Ok(OrdinalExt::Ord(r)) if r == self.bound => {}
                    other => {
                        return Err(format!(
                            "bound {} does not match pivot rank {:?}",
                            self.bound, other
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn pivot_compression(&self) -> Option<(Element, LinComb, WitnessState)> {
        let data = self.pivot.as_ref()?;
        let rebased = EuclidState {
            structure: self.structure.clone(),
            sigma_len: 1,
            pivot: Some(PivotData {
                pivot: data.pivot.clone(),
                comb: LinComb::unit(&self.structure.ring, 0),
            }),
            bound: self.bound.clone(),
        };
        Some((
            data.pivot.clone(),
            data.comb.clone(),
            WitnessState::new(Box::new(rebased)),
        ))
    }
}
