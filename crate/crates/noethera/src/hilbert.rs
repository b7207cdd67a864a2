//! Witness lifting from a ring `A` to the polynomial ring `A[X]`.
//!
//! The lifted state keeps a finite set of entries `(d, a)` — one per pair of
//! a degree bound and a base-witness bound — each holding witness
//! polynomials of degree at most `d` that are known combinations of the
//! consumed list, together with a base witness state that has consumed their
//! leading coefficients and sits at bound `a`. The entries form a constraint
//! set on the `w x alpha` chomp board and the declared bound of the state is
//! its size, so a fresh lifted witness starts at `w (x) alpha` and every new
//! entry strictly shrinks the bound.
//!
//! Advancing with a polynomial `f` repeatedly cancels its leading
//! coefficient against the best applicable entry. When the base witness
//! certifies the leading coefficient, `f` drops in degree and the loop
//! continues; when it answers with a smaller bound instead, the reduced
//! polynomial joins the witnesses of a brand-new entry strictly inside the
//! old position.

use crate::algebra::{AlgebraError, Element, LinComb, RingDesc};
use crate::chomp::ConstraintSet;
use crate::noether::{self, GoodCert, Step, Strategy, WitnessError, WitnessState};
use crate::ordinal::Ordinal;

/// Builds a fresh witness for `base[var]` from the base ring's witness; the
/// declared bound is `w (x) alpha` for a base bound `alpha`. Iterating over
/// a tower of variables lifts multivariate rings.
pub fn lift(base: &RingDesc, var: &str) -> Result<(WitnessState, Ordinal), WitnessError> {
    let outer = RingDesc::poly(base.clone(), var)?;
    let (_, base_alpha) = base_factory(base)?;
    let bound = ConstraintSet::empty(base_alpha.clone()).size();
    let state = LiftState {
        outer,
        base: base.clone(),
        base_alpha,
        sigma_len: 0,
        entries: Vec::new(),
        bound: bound.clone(),
    };
    Ok((WitnessState::new(Box::new(state)), bound))
}

/// Fresh base states for the lift's payloads. Univariate polynomial bases
/// over a field get a gcd-pivot witness: its combinations grow additively
/// along a run where the remainder-chain converter compounds degrees, and
/// any witness state for the leading-coefficient lists satisfies the
/// describing-set obligations. Other bases use the Euclidean converter when
/// a structure exists and the recursive lifting otherwise; the declared
/// bound is the same either way.
fn base_factory(base: &RingDesc) -> Result<(WitnessState, Ordinal), WitnessError> {
    if let RingDesc::Poly { base: inner, .. } = base {
        if inner.is_field() {
            let state = GcdPivotState {
                ring: base.clone(),
                sigma_len: 0,
                pivot: None,
                bound: Ordinal::omega(),
            };
            return Ok((WitnessState::new(Box::new(state)), Ordinal::omega()));
        }
    }
    noether::euclid_fresh(base).or_else(|_| noether::fresh(base))
}

/// Witness for a univariate polynomial ring over a field that keeps the
/// monic gcd of the consumed list as pivot, with a Bezout combination over
/// the list. Non-multiples strictly drop the gcd degree, multiples certify.
#[derive(Clone)]
struct GcdPivotState {
    ring: RingDesc,
    sigma_len: usize,
    pivot: Option<GcdPivot>,
    bound: Ordinal,
}

#[derive(Clone)]
struct GcdPivot {
    /// Monic gcd of the consumed list.
    gcd: Element,
    /// gcd = sum comb_i * sigma_i.
    comb: LinComb,
}

impl GcdPivotState {
    fn field(&self) -> &RingDesc {
        let RingDesc::Poly { base, .. } = &self.ring else {
            unreachable!("gcd pivots live over univariate polynomial rings")
        };
        base
    }

    fn make_monic(&self, p: &Element, comb: &LinComb) -> Result<(Element, LinComb), WitnessError> {
        let scale = self
            .ring
            .monomial_elem(self.field().inv(&self.ring.lc(p)?)?, 0)?;
        Ok((
            self.ring.mul(&scale, p)?,
            self.ring.comb_scale(&scale, comb)?,
        ))
    }

    /// One division: `high = q * low + rem`.
    fn divmod(&self, low: &Element, high: &Element) -> Result<(Element, Element), WitnessError> {
        noether::euclid_structure(&self.ring)?.step(low, high)
    }
}

impl Strategy for GcdPivotState {
    fn ring(&self) -> &RingDesc {
        &self.ring
    }

    fn bound(&self) -> &Ordinal {
        &self.bound
    }

    fn sigma_len(&self) -> usize {
        self.sigma_len
    }

    fn advance(&self, y: &Element) -> Result<Step, WitnessError> {
        let ring = &self.ring;
        let y = ring.normalize(y)?;
        let Some(data) = &self.pivot else {
            if ring.is_zero_elem(&y) {
                return Ok(Step::Good(GoodCert {
                    comb: LinComb::empty(),
                }));
            }
            let (gcd, comb) = self.make_monic(&y, &LinComb::unit(ring, 0))?;
            let bound = Ordinal::from_nat(ring.deg(&gcd)? as u64);
            let state = GcdPivotState {
                ring: ring.clone(),
                sigma_len: 1,
                pivot: Some(GcdPivot { gcd, comb }),
                bound: bound.clone(),
            };
            return Ok(Step::Continue {
                bound,
                state: WitnessState::new(Box::new(state)),
            });
        };
        let (q, rem) = self.divmod(&data.gcd, &y)?;
        if ring.is_zero_elem(&rem) {
            return Ok(Step::Good(GoodCert {
                comb: ring.comb_scale(&q, &data.comb)?,
            }));
        }
        // Extended Euclid from (gcd, rem), tracking combinations over
        // sigma.y. rem = y - q * gcd.
        let pad = |c: &LinComb| ring.comb_pad(c, self.sigma_len);
        let mut r0 = data.gcd.clone();
        let mut c0 = pad(&data.comb);
        let mut r1 = rem;
        let mut c1 = {
            let scaled = ring.comb_scale(&ring.neg(&q)?, &c0)?;
            let mut coeffs = scaled.coeffs().to_vec();
            coeffs.push(ring.one());
            LinComb::new(coeffs)
        };
        loop {
            let (q2, r2) = self.divmod(&r1, &r0)?;
            if ring.is_zero_elem(&r2) {
                break;
            }
            let c2 = ring.comb_add(&pad(&c0), &ring.comb_scale(&ring.neg(&q2)?, &c1)?)?;
            r0 = std::mem::replace(&mut r1, r2);
            c0 = std::mem::replace(&mut c1, c2);
        }
        let (gcd, comb) = self.make_monic(&r1, &c1)?;
        let bound = Ordinal::from_nat(ring.deg(&gcd)? as u64);
        debug_assert!(bound < self.bound);
        let state = GcdPivotState {
            ring: ring.clone(),
            sigma_len: self.sigma_len + 1,
            pivot: Some(GcdPivot { gcd, comb }),
            bound: bound.clone(),
        };
        Ok(Step::Continue {
            bound,
            state: WitnessState::new(Box::new(state)),
        })
    }

    fn self_check(&self, sigma: &[Element]) -> Result<(), String> {
        match &self.pivot {
            None => {
                if self.sigma_len != 0 || self.bound != Ordinal::omega() {
                    return Err("fresh gcd pivot must be empty at bound w".to_string());
                }
            }
            Some(data) => {
                let value = self
                    .ring
                    .eval_comb(sigma, &data.comb)
                    .map_err(|e| format!("gcd comb: {e}"))?;
                if value != data.gcd {
                    return Err("stored gcd does not match its combination".to_string());
                }
                let deg = self.ring.deg(&data.gcd).map_err(|e| e.to_string())?;
                if deg < 0 || Ordinal::from_nat(deg as u64) != self.bound {
                    return Err("gcd pivot bound must be its degree".to_string());
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
        let rebased = GcdPivotState {
            ring: self.ring.clone(),
            sigma_len: 1,
            pivot: Some(GcdPivot {
                gcd: data.gcd.clone(),
                comb: LinComb::unit(&self.ring, 0),
            }),
            bound: self.bound.clone(),
        };
        Some((
            data.gcd.clone(),
            data.comb.clone(),
            WitnessState::new(Box::new(rebased)),
        ))
    }

}

/// Rewrites a combination over `sigma.g` into one over `sigma.f`, given
/// coefficients expressing `g` over `sigma.f`. The last position of `c`
/// multiplies `g`; everything else is shared context.
pub fn cert_substitute(
    ring: &RingDesc,
    c: &LinComb,
    g_comb: &LinComb,
) -> Result<LinComb, AlgebraError> {
    let len = g_comb.len();
    if c.len() > len {
        return Err(AlgebraError::CombTooLong {
            comb: c.len(),
            context: len,
        });
    }
    let last = len.saturating_sub(1);
    let zero = ring.zero();
    let c_g = c.coeffs().get(last).unwrap_or(&zero).clone();
    let mut prefix: Vec<Element> = c.coeffs().iter().take(last).cloned().collect();
    while prefix.len() < len {
        prefix.push(ring.zero());
    }
    ring.comb_add(&LinComb::new(prefix), &ring.comb_scale(&c_g, g_comb)?)
}

#[derive(Clone)]
struct WitnessPoly {
    poly: Element,
    /// poly = sum memb_i * sigma_i over the consumed list.
    memb: LinComb,
}

#[derive(Clone)]
struct DescEntry {
    d: u64,
    a: Ordinal,
    witnesses: Vec<WitnessPoly>,
    /// Base witness that has consumed the leading coefficients of the
    /// witnesses, in order; its bound is exactly `a`.
    lcstate: WitnessState,
}

#[derive(Clone)]
pub(crate) struct LiftState {
    outer: RingDesc,
    base: RingDesc,
    base_alpha: Ordinal,
    sigma_len: usize,
    entries: Vec<DescEntry>,
    bound: Ordinal,
}

impl LiftState {
    fn constraint_set(&self) -> ConstraintSet {
        ConstraintSet::new(
            self.base_alpha.clone(),
            self.entries.iter().map(|e| (e.d, e.a.clone())),
        )
        .expect("entry bounds stay below the board height")
    }

    /// Shrinks the below-top coefficients of a freshly built witness by
    /// subtracting multiples of already stored witnesses, using the base
    /// ring's Euclidean step on coefficients. The leading coefficient, the
    /// degree, and membership all survive, and stored coefficient sizes stay
    /// bounded instead of compounding from one entry to the next. Bases
    /// without a Euclidean structure are left alone.
    /// One coefficient-shrinking pass: subtracts multiples of stored
    /// witnesses so that every coefficient of `poly` at a position some
    /// witness can reach ends up below that witness's leading-coefficient
    /// rank. Returns the subtracted amount as a combination over the
    /// consumed list, or `None` when nothing applied.
    fn shrink_pass(&self, poly: &mut Element) -> Result<Option<LinComb>, WitnessError> {
        let Ok(es) = noether::euclid_structure(&self.base) else {
            return Ok(None);
        };
        let outer = &self.outer;
        let mut subtracted: Option<LinComb> = None;
        loop {
            let top = outer.deg(poly)?;
            if top < 0 {
                break;
            }
            let mut changed = false;
            for p in (0..=top as u64).rev() {
                let Element::Poly(coeffs) = &*poly else {
                    unreachable!("polynomial ring elements are coefficient lists")
                };
                let Some(c) = coeffs.get(p as usize) else {
                    continue;
                };
                if self.base.is_zero_elem(c) {
                    continue;
                }
                let c = c.clone();
                // The reducer: a stored witness of degree at most p whose
                // leading coefficient has the least rank.
                let mut reducer: Option<(&WitnessPoly, u64, Element)> = None;
                for entry in &self.entries {
                    for w in &entry.witnesses {
                        let deg = outer.deg(&w.poly)? as u64;
                        if deg > p {
                            continue;
                        }
                        let lc = outer.lc(&w.poly)?;
                        match &reducer {
                            Some((_, _, best)) if es.rank(&lc)? >= es.rank(best)? => {}
                            _ => reducer = Some((w, deg, lc)),
                        }
                    }
                }
                let Some((w, deg, lc)) = reducer else {
                    continue;
                };
                if es.rank(&c)? < es.rank(&lc)? {
                    continue;
                }
                let (q, _) = es.step(&lc, &c)?;
                if self.base.is_zero_elem(&q) {
                    continue;
                }
                let scalar = outer.monomial_elem(q, (p - deg) as usize)?;
                *poly = outer.sub(poly, &outer.mul(&scalar, &w.poly)?)?;
                let amount = outer.comb_scale(&scalar, &w.memb)?;
                subtracted = Some(match subtracted {
                    Some(acc) => outer.comb_add(&acc, &amount)?,
                    None => amount,
                });
                changed = true;
                // Positions above p are untouched; a vanished top changes
                // the degree, so restart the pass.
                break;
            }
            if !changed {
                break;
            }
        }
        Ok(subtracted)
    }

    /// Shrinks a freshly built witness; the subtracted combination leaves
    /// its membership, leading coefficient, and degree intact.
    fn reduce_witness(
        &self,
        mut poly: Element,
        memb: LinComb,
    ) -> Result<(Element, LinComb), WitnessError> {
        let outer = &self.outer;
        let top = outer.deg(&poly)?;
        if top <= 0 {
            return Ok((poly, memb));
        }
        // Split off the top term so the pass cannot touch the leading
        // coefficient, then put it back.
        let Element::Poly(mut coeffs) = poly else {
            unreachable!("polynomial ring elements are coefficient lists")
        };
        let lc = coeffs.pop().expect("degree checked positive");
        poly = outer.poly_from_coeffs(coeffs)?;
        let memb = match self.shrink_pass(&mut poly)? {
            Some(sub) => {
                let neg = outer.comb_scale(&outer.neg(&outer.one())?, &sub)?;
                outer.comb_add(&memb, &neg)?
            }
            None => memb,
        };
        let Element::Poly(mut coeffs) = poly else {
            unreachable!()
        };
        while coeffs.len() < top as usize {
            coeffs.push(self.base.zero());
        }
        coeffs.push(lc);
        Ok((outer.poly_from_coeffs(coeffs)?, memb))
    }

    /// The best applicable entry for degree `dg`: minimal bound, then
    /// smallest degree, then earliest insertion.
    fn choose_payload(&self, dg: u64) -> Option<&DescEntry> {
        let mut best: Option<&DescEntry> = None;
        for entry in self.entries.iter().filter(|e| e.d <= dg) {
            best = match best {
                None => Some(entry),
                Some(b) if entry.a < b.a || (entry.a == b.a && entry.d < b.d) => Some(entry),
                Some(b) => Some(b),
            };
        }
        best
    }
}

impl Strategy for LiftState {
    fn ring(&self) -> &RingDesc {
        &self.outer
    }

    fn bound(&self) -> &Ordinal {
        &self.bound
    }

    fn sigma_len(&self) -> usize {
        self.sigma_len
    }

    fn advance(&self, f: &Element) -> Result<Step, WitnessError> {
        let outer = &self.outer;
        let f = outer.normalize(f)?;
        let mut g = f;
        // Invariant: input = g + acc . sigma.
        let mut acc = outer.comb_pad(&LinComb::empty(), self.sigma_len);
        loop {
            // Keep the running value's coefficients small relative to the
            // stored witnesses; the subtracted multiples join the
            // accumulated combination.
            if let Some(sub) = self.shrink_pass(&mut g)? {
                acc = outer.comb_add(&acc, &sub)?;
            }
            if outer.is_zero_elem(&g) {
                return Ok(Step::Good(GoodCert { comb: acc }));
            }
            let dg = outer.deg(&g)? as u64;
            let lcg = outer.lc(&g)?;
            if std::env::var_os("NOETHERA_TRACE").is_some() {
                let wmass: usize = self
                    .entries
                    .iter()
                    .flat_map(|e| e.witnesses.iter())
                    .map(|w| format!("{:?}{:?}", w.poly, w.memb).len())
                    .sum();
                eprintln!(
                    "    iter dg={dg} lcg_bytes={} g_bytes={} acc_bytes={} stored_bytes={wmass}",
                    format!("{lcg:?}").len(),
                    format!("{g:?}").len(),
                    format!("{acc:?}").len()
                );
            }
            let (witnesses, lcstate) = match self.choose_payload(dg) {
                Some(entry) => (entry.witnesses.clone(), entry.lcstate.duplicate()),
                None => (Vec::new(), base_factory(&self.base)?.0),
            };
            match lcstate.advance(&lcg)? {
                Step::Good(sub) => {
                    // lc g = sum c_i * lc(w_i): cancel the top coefficient.
                    let mut reducer = outer.zero();
                    let mut reducer_comb = LinComb::empty();
                    for (c, w) in sub.comb.coeffs().iter().zip(witnesses.iter()) {
                        if self.base.is_zero_elem(c) {
                            continue;
                        }
                        let k = dg - outer.deg(&w.poly)? as u64;
                        let scalar = outer.monomial_elem(c.clone(), k as usize)?;
                        reducer = outer.add(&reducer, &outer.mul(&scalar, &w.poly)?)?;
                        reducer_comb =
                            outer.comb_add(&reducer_comb, &outer.comb_scale(&scalar, &w.memb)?)?;
                    }
                    let reduced = outer.sub(&g, &reducer)?;
                    assert!(
                        outer.deg(&reduced)? < dg as i64,
                        "leading-coefficient cancellation must drop the degree"
                    );
                    acc = outer.comb_add(&acc, &reducer_comb)?;
                    g = reduced;
                }
                Step::Continue {
                    bound: beta,
                    state: lcstate2,
                } => {
                    // g joins a new entry (deg g, beta). Its membership over
                    // sigma.f: g = f - acc . sigma.
                    let mut g_comb = Vec::with_capacity(self.sigma_len + 1);
                    for c in outer.comb_pad(&acc, self.sigma_len).coeffs() {
                        g_comb.push(outer.neg(c)?);
                    }
                    g_comb.push(outer.one());
                    let g_memb = cert_substitute(
                        outer,
                        &LinComb::unit(outer, self.sigma_len),
                        &LinComb::new(g_comb),
                    )?;
                    let mut witnesses = witnesses;
                    witnesses.push(WitnessPoly {
                        poly: g,
                        memb: g_memb,
                    });
                    // When the base state reduces to a single pivot, the
                    // whole witness list combines into one polynomial whose
                    // leading coefficient is that pivot; the entry then
                    // carries one witness and one membership combination.
                    let lcstate2 = match lcstate2.pivot_compression() {
                        Some((pivot, comb, rebased)) => {
                            let mut poly = outer.zero();
                            let mut memb = LinComb::empty();
                            for (c, w) in comb.coeffs().iter().zip(witnesses.iter()) {
                                if self.base.is_zero_elem(c) {
                                    continue;
                                }
                                let k = dg - outer.deg(&w.poly)? as u64;
                                let scalar = outer.monomial_elem(c.clone(), k as usize)?;
                                poly = outer.add(&poly, &outer.mul(&scalar, &w.poly)?)?;
                                memb = outer.comb_add(&memb, &outer.comb_scale(&scalar, &w.memb)?)?;
                            }
                            debug_assert_eq!(outer.lc(&poly)?, pivot);
                            debug_assert_eq!(outer.deg(&poly)?, dg as i64);
                            let (poly, memb) = self.reduce_witness(poly, memb)?;
                            witnesses = vec![WitnessPoly { poly, memb }];
                            rebased
                        }
                        None => lcstate2,
                    };
                    // The new pair must lie strictly inside the old position,
                    // so the measure strictly shrinks.
                    let chopped = self
                        .constraint_set()
                        .chop(dg, beta.clone())
                        .expect("new describing pair lies inside the position");
                    let bound = chopped.size();
                    assert!(
                        bound < self.bound,
                        "describing-set size must strictly decrease"
                    );
                    let mut entries = self.entries.clone();
                    entries.push(DescEntry {
                        d: dg,
                        a: beta,
                        witnesses,
                        lcstate: lcstate2,
                    });
                    let state = LiftState {
                        outer: self.outer.clone(),
                        base: self.base.clone(),
                        base_alpha: self.base_alpha.clone(),
                        sigma_len: self.sigma_len + 1,
                        entries,
                        bound: bound.clone(),
                    };
                    return Ok(Step::Continue {
                        bound,
                        state: WitnessState::new(Box::new(state)),
                    });
                }
            }
        }
    }

    fn self_check(&self, sigma: &[Element]) -> Result<(), String> {
        let cs = self.constraint_set();
        if cs.size() != self.bound {
            return Err(format!(
                "declared bound {} differs from the position size {}",
                self.bound,
                cs.size()
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.entries {
            if !seen.insert((entry.d, entry.a.clone())) {
                return Err(format!("duplicate entry ({}, {})", entry.d, entry.a));
            }
            if entry.lcstate.bound() != &entry.a {
                return Err(format!(
                    "entry ({}, {}) carries a base state at bound {}",
                    entry.d,
                    entry.a,
                    entry.lcstate.bound()
                ));
            }
            if entry.lcstate.len() != entry.witnesses.len() {
                return Err("base state length differs from the witness count".to_string());
            }
            let mut lcs = Vec::with_capacity(entry.witnesses.len());
            for w in &entry.witnesses {
                let deg = self
                    .outer
                    .deg(&w.poly)
                    .map_err(|e| format!("witness degree: {e}"))?;
                if deg < 0 || deg as u64 > entry.d {
                    return Err(format!(
                        "witness of degree {deg} exceeds the entry bound {}",
                        entry.d
                    ));
                }
                let value = self
                    .outer
                    .eval_comb(sigma, &w.memb)
                    .map_err(|e| format!("witness memb: {e}"))?;
                if value != w.poly {
                    return Err("witness membership combination is wrong".to_string());
                }
                lcs.push(self.outer.lc(&w.poly).map_err(|e| e.to_string())?);
            }
            entry
                .lcstate
                .self_check(&lcs)
                .map_err(|e| format!("entry ({}, {}): {e}", entry.d, entry.a))?;
        }
        Ok(())
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}
