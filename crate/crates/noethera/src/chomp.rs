//! Positions of transfinite chomp on an `w x alpha` board.
//!
//! A finite set of pairs `(d, a)` cuts the board down to the points lying
//! strictly left of `d` or strictly below `a` of every pair; the remaining
//! position is a staircase of column heights. `size` assigns each position
//! an ordinal measure that is `w (x) alpha` on the full board and strictly
//! shrinks whenever the position strictly shrinks.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::ordinal::{Ordinal, OrdinalError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChompError {
    #[error("pair ({d}, {a}) exceeds the board height {alpha}")]
    PairAboveBoard { d: u64, a: String, alpha: String },
    #[error("positions live on different boards: {left} vs {right}")]
    AlphaMismatch { left: String, right: String },
    #[error("chop point ({d}, {a}) lies outside the position")]
    ChopOutside { d: u64, a: String },
    #[error("constraint syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A finite constraint set on the `w x alpha` board: the stored pairs are
/// the played points, the position is everything strictly dominated by all
/// of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    alpha: Ordinal,
    pairs: BTreeSet<(u64, Ordinal)>,
}

impl ConstraintSet {
    pub fn empty(alpha: Ordinal) -> Self {
        ConstraintSet {
            alpha,
            pairs: BTreeSet::new(),
        }
    }

    pub fn new(
        alpha: Ordinal,
        pairs: impl IntoIterator<Item = (u64, Ordinal)>,
    ) -> Result<Self, ChompError> {
        let mut set = BTreeSet::new();
        for (d, a) in pairs {
            if a >= alpha {
                return Err(ChompError::PairAboveBoard {
                    d,
                    a: a.to_string(),
                    alpha: alpha.to_string(),
                });
            }
            set.insert((d, a));
        }
        Ok(ConstraintSet { alpha, pairs: set })
    }

    /// Parses the textual form `d:ordinal,d:ordinal,...`; an empty string is
    /// the empty constraint set.
    pub fn parse(alpha: Ordinal, text: &str) -> Result<Self, ChompError> {
        let mut pairs = Vec::new();
        for chunk in text.split(',') {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                continue;
            }
            let (d, a) = chunk
                .split_once(':')
                .ok_or_else(|| ChompError::Syntax(format!("expected d:ordinal in {chunk:?}")))?;
            let d = d
                .trim()
                .parse::<u64>()
                .map_err(|_| ChompError::Syntax(format!("bad column index in {chunk:?}")))?;
            pairs.push((d, Ordinal::parse(a)?));
        }
        ConstraintSet::new(alpha, pairs)
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.alpha
    }

    pub fn pairs(&self) -> impl Iterator<Item = &(u64, Ordinal)> {
        self.pairs.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Height of column `d`: the least constraint ordinal among pairs with
    /// column index at most `d`, or the board height when none applies.
    pub fn column_height(&self, d: u64) -> Ordinal {
        self.pairs
            .iter()
            .filter(|(dj, _)| *dj <= d)
            .map(|(_, a)| a)
            .min()
            .unwrap_or(&self.alpha)
            .clone()
    }

    /// Collapses the constraints into the staircase of column heights.
    pub fn normalize(&self) -> Staircase {
        let mut breaks: Vec<u64> = self.pairs.iter().map(|(d, _)| *d).collect();
        breaks.push(0);
        breaks.sort_unstable();
        breaks.dedup();

        // Levels: (first column, height), heights strictly decreasing.
        let mut levels: Vec<(u64, Ordinal)> = Vec::new();
        for d in breaks {
            let h = self.column_height(d);
            match levels.last() {
                Some((_, prev)) if *prev == h => {}
                _ => levels.push((d, h)),
            }
        }
        let (tail_start, tail) = levels.pop().expect("column 0 always yields a level");
        let mut steps = Vec::with_capacity(levels.len());
        for i in 0..levels.len() {
            let start = levels[i].0;
            let end = levels.get(i + 1).map_or(tail_start, |level| level.0);
            steps.push((end - start, levels[i].1.clone()));
        }
        Staircase { steps, tail }
    }

    /// Whether the position of `self` is strictly contained in the position
    /// of `other`. Boards must match.
    pub fn position_lt(&self, other: &ConstraintSet) -> Result<bool, ChompError> {
        if self.alpha != other.alpha {
            return Err(ChompError::AlphaMismatch {
                left: self.alpha.to_string(),
                right: other.alpha.to_string(),
            });
        }
        let mut cols: Vec<u64> = self
            .pairs
            .iter()
            .chain(other.pairs.iter())
            .map(|(d, _)| *d)
            .collect();
        cols.push(0);
        cols.sort_unstable();
        cols.dedup();
        let mut some_lt = false;
        for d in cols {
            let (h_self, h_other) = (self.column_height(d), other.column_height(d));
            if h_self > h_other {
                return Ok(false);
            }
            if h_self < h_other {
                some_lt = true;
            }
        }
        Ok(some_lt)
    }

    /// Ordinal measure of the position. With staircase heights
    /// `g_1 > ... > g_k` (the last being the tail), cumulative finite widths
    /// `W_1 <= ... <= W_{k-1}`, and band heights `d_i` satisfying
    /// `g_{i+1} + d_i = g_i`, the measure is the natural sum of
    /// `W_i (x) d_i` over the finite bands plus `w (x) g_k` for the tail.
    pub fn size(&self) -> Ordinal {
        let stairs = self.normalize();
        let mut acc = Ordinal::omega().nat_prod(&stairs.tail);
        let mut cumulative = 0u64;
        for i in 0..stairs.steps.len() {
            cumulative += stairs.steps[i].0;
            let lower = if i + 1 < stairs.steps.len() {
                &stairs.steps[i + 1].1
            } else {
                &stairs.tail
            };
            let band = lower
                .left_sub(&stairs.steps[i].1)
                .expect("staircase heights strictly decrease");
            acc = acc.nat_sum(&Ordinal::from_nat(cumulative).nat_prod(&band));
        }
        acc
    }

    /// Plays the point `(d, a)`: it must lie inside the current position.
    pub fn chop(&self, d: u64, a: Ordinal) -> Result<ConstraintSet, ChompError> {
        if a >= self.column_height(d) {
            return Err(ChompError::ChopOutside {
                d,
                a: a.to_string(),
            });
        }
        let mut pairs = self.pairs.clone();
        pairs.insert((d, a));
        Ok(ConstraintSet {
            alpha: self.alpha.clone(),
            pairs,
        })
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, a) in &self.pairs {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{d}:{a}")?;
            first = false;
        }
        Ok(())
    }
}

/// The staircase of column heights of a position: finitely many steps with
/// strictly decreasing heights followed by an infinite tail strictly below
/// the last step (or the sole level when there are no steps).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Staircase {
    steps: Vec<(u64, Ordinal)>,
    tail: Ordinal,
}

impl Staircase {
    pub fn steps(&self) -> &[(u64, Ordinal)] {
        &self.steps
    }

    pub fn tail_height(&self) -> &Ordinal {
        &self.tail
    }

    pub fn column_height(&self, d: u64) -> &Ordinal {
        let mut start = 0u64;
        for (width, height) in &self.steps {
            if d < start + width {
                return height;
            }
            start += width;
        }
        &self.tail
    }

    /// Re-derives a constraint set producing exactly this staircase on a
    /// board of height `alpha`.
    pub fn to_constraint_set(&self, alpha: Ordinal) -> Result<ConstraintSet, ChompError> {
        let mut pairs = Vec::new();
        let mut start = 0u64;
        for (width, height) in &self.steps {
            if *height < alpha {
                pairs.push((start, height.clone()));
            }
            start += width;
        }
        if self.tail < alpha {
            pairs.push((start, self.tail.clone()));
        }
        ConstraintSet::new(alpha, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        Ordinal::parse(s).unwrap()
    }

    fn cs(alpha: &str, text: &str) -> ConstraintSet {
        ConstraintSet::parse(ord(alpha), text).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let empty = cs("w", "");
        let stairs = empty.normalize();
        assert!(stairs.steps().is_empty());
        assert_eq!(stairs.tail_height(), &ord("w"));

        let flat = cs("w", "0:5");
        let stairs = flat.normalize();
        assert!(stairs.steps().is_empty());
        assert_eq!(stairs.tail_height(), &ord("5"));

        let two = cs("w", "2:1,0:3");
        let stairs = two.normalize();
        assert_eq!(stairs.steps(), &[(2, ord("3"))]);
        assert_eq!(stairs.tail_height(), &ord("1"));
        assert_eq!(stairs.column_height(0), &ord("3"));
        assert_eq!(stairs.column_height(1), &ord("3"));
        assert_eq!(stairs.column_height(2), &ord("1"));
        assert_eq!(stairs.column_height(99), &ord("1"));
    }

    #[test]
    fn normalize_ignores_dominated_constraints() {
        // (5, 3) is implied by (0, 3) and must not create a step.
        let set = cs("w", "0:3,5:3");
        let stairs = set.normalize();
        assert!(stairs.steps().is_empty());
        assert_eq!(stairs.tail_height(), &ord("3"));
    }

    #[test]
    fn position_lt_examples() {
        assert!(cs("w", "0:3").position_lt(&cs("w", "0:5")).unwrap());
        let s = cs("w", "0:3");
        assert!(!s.position_lt(&s).unwrap());
        assert!(!cs("w", "0:5").position_lt(&cs("w", "2:1,0:3")).unwrap());
        assert!(cs("w", "2:1,0:3").position_lt(&cs("w", "0:5")).unwrap());
        assert!(matches!(
            cs("w", "").position_lt(&cs("w^2", "")),
            Err(ChompError::AlphaMismatch { .. })
        ));
    }

    #[test]
    fn size_examples() {
        assert_eq!(cs("w", "").size(), ord("w^2"));
        assert_eq!(cs("w", "0:5").size(), ord("w*5"));
        assert_eq!(cs("w", "2:1,0:3").size(), ord("w + 4"));
        assert_eq!(cs("w", "3:2").size(), ord("w*5"));
        assert_eq!(cs("1", "2:0").size(), ord("2"));
        assert_eq!(cs("w", "0:0").size(), ord("0"));
    }

    #[test]
    fn size_of_empty_is_omega_times_alpha() {
        for alpha in ["1", "5", "w", "w*2 + 3", "w^2", "w^2*3 + w"] {
            let alpha = ord(alpha);
            assert_eq!(
                ConstraintSet::empty(alpha.clone()).size(),
                Ordinal::omega().nat_prod(&alpha),
                "alpha = {alpha}"
            );
        }
    }

    #[test]
    fn chop_examples() {
        let chopped = cs("w", "").chop(3, ord("2")).unwrap();
        assert_eq!(chopped.size(), ord("w*5"));
        assert!(chopped.position_lt(&cs("w", "")).unwrap());

        let full = cs("w", "0:5").chop(0, ord("0")).unwrap();
        assert_eq!(full.size(), Ordinal::zero());

        assert!(matches!(
            cs("w", "").chop(0, ord("w")),
            Err(ChompError::ChopOutside { .. })
        ));
        assert!(matches!(
            cs("w", "0:5").chop(7, ord("5")),
            Err(ChompError::ChopOutside { .. })
        ));
    }

    #[test]
    fn normalize_round_trips_through_constraints() {
        for (alpha, text) in [
            ("w", ""),
            ("w", "0:5"),
            ("w", "2:1,0:3"),
            ("w^2", "1:w*2,4:w,9:3"),
            ("w*2 + 3", "0:w + 5,2:4"),
        ] {
            let set = cs(alpha, text);
            let stairs = set.normalize();
            let rederived = stairs.to_constraint_set(ord(alpha)).unwrap();
            assert_eq!(rederived.normalize(), stairs, "{alpha} {text}");
        }
    }

    #[test]
    fn pair_above_board_rejected() {
        assert!(matches!(
            ConstraintSet::new(ord("w"), [(0, ord("w"))]),
            Err(ChompError::PairAboveBoard { .. })
        ));
    }
}
