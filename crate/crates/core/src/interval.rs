//! Finite unions of half-open intervals `[lo, hi)` with exact endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::SetError;
use crate::scalar::{EpsBinding, Rational, Scalar};

/// Half-open interval `[lo, hi)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

impl Interval {
    /// Checked constructor: requires `lo < hi` under `binding`.
    pub fn new(lo: Scalar, hi: Scalar, binding: &EpsBinding) -> Result<Self, SetError> {
        for x in [&lo, &hi] {
            if !binding.admits(x) {
                return Err(SetError::UnboundEps(x.to_string()));
            }
        }
        if lo.cmp_under(&hi, binding) != Ordering::Less {
            return Err(SetError::MalformedInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Raw endpoint pair; emptiness is not checked.
    pub(crate) fn raw(lo: Scalar, hi: Scalar) -> Self {
        Self { lo, hi }
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn length(&self) -> Scalar {
        &self.hi - &self.lo
    }

    pub fn is_empty_under(&self, binding: &EpsBinding) -> bool {
        self.lo.cmp_under(&self.hi, binding) != Ordering::Less
    }

    pub fn contains(&self, x: &Scalar, binding: &EpsBinding) -> bool {
        self.lo.cmp_under(x, binding) != Ordering::Greater
            && x.cmp_under(&self.hi, binding) == Ordering::Less
    }

    pub fn translate_2pi(&self, k: &BigInt) -> Interval {
        Interval::raw(self.lo.shift_2pi(k), self.hi.shift_2pi(k))
    }

    /// Image under `x ↦ r·x`; endpoints are swapped for negative `r`.
    pub fn scale(&self, r: &Rational) -> Interval {
        let (a, b) = (self.lo.scale(r), self.hi.scale(r));
        if num_traits::Signed::is_negative(r) {
            Interval::raw(b, a)
        } else {
            Interval::raw(a, b)
        }
    }

    /// Image under `x ↦ x + t`.
    pub fn shift(&self, t: &Scalar) -> Interval {
        Interval::raw(&self.lo + t, &self.hi + t)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lo, self.hi)
    }
}

/// Boolean operation selector for [`IntervalSet::boolean`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    Difference,
}

/// Sorted, pairwise disjoint, non-adjacent intervals under one binding.
#[derive(Clone, Debug)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
    binding: EpsBinding,
}

/// A maximal run of constant multiplicity inside a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub lo: Scalar,
    pub hi: Scalar,
    pub count: u32,
}

struct Event {
    at: Rational,
    point: Scalar,
    delta: i64,
    slot: usize,
}

fn sorted_events(mut events: Vec<Event>) -> Vec<Event> {
    events.sort_by(|a, b| a.at.cmp(&b.at));
    events
}

/// Sweeps sorted endpoint events, calling `emit(lo, hi, counts)` for every
/// maximal run between distinct event positions.
fn sweep<const N: usize>(events: Vec<Event>, mut emit: impl FnMut(&Scalar, &Scalar, &[i64; N])) {
    let events = sorted_events(events);
    let mut counts = [0i64; N];
    let mut i = 0;
    let mut prev: Option<Scalar> = None;
    while i < events.len() {
        let at = events[i].at.clone();
        let point = events[i].point.clone();
        if let Some(p) = &prev {
            emit(p, &point, &counts);
        }
        while i < events.len() && events[i].at == at {
            counts[events[i].slot] += events[i].delta;
            i += 1;
        }
        prev = Some(point);
    }
}

impl IntervalSet {
    pub fn empty(binding: EpsBinding) -> Self {
        Self {
            intervals: Vec::new(),
            binding,
        }
    }

    /// Canonicalizes arbitrary intervals; every input must satisfy `lo < hi`.
    pub fn normalize(raw: Vec<Interval>, binding: EpsBinding) -> Result<Self, SetError> {
        for iv in &raw {
            Interval::new(iv.lo.clone(), iv.hi.clone(), &binding)?;
        }
        Ok(Self::from_pieces(raw, binding))
    }

    /// Canonicalizes, silently dropping empty pieces (`lo ≥ hi`).
    ///
    /// Callers must only pass endpoints admitted by `binding`.
    pub fn from_pieces(raw: Vec<Interval>, binding: EpsBinding) -> Self {
        let mut keyed: Vec<(Rational, Rational, Interval)> = raw
            .into_iter()
            .filter_map(|iv| {
                let (l, h) = (iv.lo.value(&binding), iv.hi.value(&binding));
                (l < h).then_some((l, h, iv))
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Rational, Interval)> = Vec::with_capacity(keyed.len());
        for (l, h, iv) in keyed {
            match out.last_mut() {
                Some((last_h, last)) if l <= *last_h => {
                    if h > *last_h {
                        *last_h = h;
                        last.hi = iv.hi;
                    }
                }
                _ => out.push((h, iv)),
            }
        }
        Self {
            intervals: out.into_iter().map(|(_, iv)| iv).collect(),
            binding,
        }
    }

    /// Single interval set; errors if `lo ≥ hi`.
    pub fn interval(lo: Scalar, hi: Scalar, binding: EpsBinding) -> Result<Self, SetError> {
        let iv = Interval::new(lo, hi, &binding)?;
        Ok(Self {
            intervals: vec![iv],
            binding,
        })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn binding(&self) -> &EpsBinding {
        &self.binding
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Whether the stored list is already in canonical form.
    pub fn is_canonical_list(raw: &[Interval], binding: &EpsBinding) -> bool {
        raw.iter().all(|iv| !iv.is_empty_under(binding))
            && raw
                .windows(2)
                .all(|w| w[0].hi.cmp_under(&w[1].lo, binding) == Ordering::Less)
    }

    fn merged_binding(&self, other: &IntervalSet) -> Result<EpsBinding, SetError> {
        self.binding
            .merge(&other.binding)
            .ok_or(SetError::BindingMismatch)
    }

    /// Exact union, intersection, or difference `self ∖ other`.
    pub fn boolean(&self, op: BoolOp, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        let binding = self.merged_binding(other)?;
        let mut events = Vec::with_capacity(2 * (self.len() + other.len()));
        for (slot, set) in [self, other].into_iter().enumerate() {
            for iv in &set.intervals {
                events.push(Event {
                    at: iv.lo.value(&binding),
                    point: iv.lo.clone(),
                    delta: 1,
                    slot,
                });
                events.push(Event {
                    at: iv.hi.value(&binding),
                    point: iv.hi.clone(),
                    delta: -1,
                    slot,
                });
            }
        }
        let mut pieces = Vec::new();
        sweep::<2>(events, |lo, hi, c| {
            let (a, b) = (c[0] > 0, c[1] > 0);
            let keep = match op {
                BoolOp::Union => a || b,
                BoolOp::Intersect => a && b,
                BoolOp::Difference => a && !b,
            };
            if keep {
                pieces.push(Interval::raw(lo.clone(), hi.clone()));
            }
        });
        Ok(IntervalSet::from_pieces(pieces, binding))
    }

    pub fn union(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        self.boolean(BoolOp::Union, other)
    }

    pub fn intersect(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        self.boolean(BoolOp::Intersect, other)
    }

    pub fn difference(&self, other: &IntervalSet) -> Result<IntervalSet, SetError> {
        self.boolean(BoolOp::Difference, other)
    }

    /// Every endpoint shifted by `2kπ`.
    pub fn translate_2pi(&self, k: i64) -> IntervalSet {
        let k = BigInt::from(k);
        Self {
            intervals: self
                .intervals
                .iter()
                .map(|iv| iv.translate_2pi(&k))
                .collect(),
            binding: self.binding.clone(),
        }
    }

    /// Every endpoint multiplied by `2^m`.
    pub fn dilate_pow2(&self, m: i64) -> IntervalSet {
        let r = crate::scalar::pow2(m);
        Self {
            intervals: self.intervals.iter().map(|iv| iv.scale(&r)).collect(),
            binding: self.binding.clone(),
        }
    }

    /// Image under `x ↦ x + t`.
    pub fn shift(&self, t: &Scalar) -> IntervalSet {
        Self::from_pieces(
            self.intervals.iter().map(|iv| iv.shift(t)).collect(),
            self.binding.clone(),
        )
    }

    /// Image under `x ↦ r·x` for any nonzero rational `r`.
    pub fn scale(&self, r: &Rational) -> IntervalSet {
        Self::from_pieces(
            self.intervals.iter().map(|iv| iv.scale(r)).collect(),
            self.binding.clone(),
        )
    }

    /// Total length, exact and symbolic in ε.
    pub fn measure(&self) -> Scalar {
        self.intervals
            .iter()
            .fold(Scalar::zero(), |acc, iv| &acc + &iv.length())
    }

    /// Membership with the half-open convention.
    pub fn contains(&self, x: &Scalar) -> bool {
        let v = x.value(&self.binding);
        // first interval whose hi is above x
        let idx = self
            .intervals
            .partition_point(|iv| iv.hi.value(&self.binding) <= v);
        self.intervals
            .get(idx)
            .is_some_and(|iv| iv.lo.value(&self.binding) <= v)
    }

    /// Same point set (under the merged binding).
    pub fn same_points(&self, other: &IntervalSet) -> bool {
        let Some(b) = self.binding.merge(&other.binding) else {
            return false;
        };
        self.len() == other.len()
            && self.intervals.iter().zip(&other.intervals).all(|(x, y)| {
                x.lo.cmp_under(&y.lo, &b) == Ordering::Equal
                    && x.hi.cmp_under(&y.hi, &b) == Ordering::Equal
            })
    }

    /// Infimum of the set, if nonempty.
    pub fn support_lo(&self) -> Option<&Scalar> {
        self.intervals.first().map(|iv| &iv.lo)
    }

    /// Supremum of the set, if nonempty.
    pub fn support_hi(&self) -> Option<&Scalar> {
        self.intervals.last().map(|iv| &iv.hi)
    }

    /// Part of the set inside `[lo, hi)`.
    pub fn clip(&self, lo: &Scalar, hi: &Scalar) -> IntervalSet {
        let window = IntervalSet::from_pieces(
            vec![Interval::raw(lo.clone(), hi.clone())],
            self.binding.clone(),
        );
        self.intersect(&window).expect("same binding")
    }

    /// Whether some interval touches or straddles 0 (`lo ≤ 0 ≤ hi`).
    pub fn touches_zero(&self) -> bool {
        let z = Scalar::zero();
        self.intervals.iter().any(|iv| {
            iv.lo.cmp_under(&z, &self.binding) != Ordering::Greater
                && iv.hi.cmp_under(&z, &self.binding) != Ordering::Less
        })
    }

    /// Largest `|x|` over the closure of the set.
    pub fn max_abs(&self) -> Scalar {
        let mut best = Scalar::zero();
        for x in [self.support_lo(), self.support_hi()].into_iter().flatten() {
            let a = if x.value(&self.binding) < Rational::from_integer(0.into()) {
                -x
            } else {
                x.clone()
            };
            if a.cmp_under(&best, &self.binding) == Ordering::Greater {
                best = a;
            }
        }
        best
    }

    /// Smallest `|endpoint|`, a lower bound on `|x|` for members when the
    /// set does not touch zero.
    pub fn min_abs(&self) -> Option<Scalar> {
        let z = Rational::from_integer(0.into());
        let mut best: Option<Scalar> = None;
        for iv in &self.intervals {
            for x in [&iv.lo, &iv.hi] {
                let a = if x.value(&self.binding) < z {
                    -x
                } else {
                    x.clone()
                };
                if best
                    .as_ref()
                    .is_none_or(|b| a.cmp_under(b, &self.binding) == Ordering::Less)
                {
                    best = Some(a);
                }
            }
        }
        best
    }

    /// Parts on `(0, ∞)` and `(−∞, 0)`.
    pub fn split_sign(&self) -> (IntervalSet, IntervalSet) {
        let z = Scalar::zero();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for iv in &self.intervals {
            let lo_sign = iv.lo.cmp_under(&z, &self.binding);
            let hi_sign = iv.hi.cmp_under(&z, &self.binding);
            if lo_sign != Ordering::Less {
                pos.push(iv.clone());
            } else if hi_sign != Ordering::Greater {
                neg.push(iv.clone());
            } else {
                neg.push(Interval::raw(iv.lo.clone(), z.clone()));
                pos.push(Interval::raw(z.clone(), iv.hi.clone()));
            }
        }
        (
            IntervalSet::from_pieces(pos, self.binding.clone()),
            IntervalSet::from_pieces(neg, self.binding.clone()),
        )
    }
}

impl PartialEq for IntervalSet {
    fn eq(&self, other: &Self) -> bool {
        self.binding == other.binding && self.same_points(other)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Multiplicity profile of `pieces` over the cell `[cell_lo, cell_hi)`.
///
/// Returns contiguous segments covering the cell, each with the number of
/// pieces covering it; adjacent segments always differ in count. Pieces are
/// clipped to the cell.
pub fn coverage(
    pieces: &[Interval],
    cell_lo: &Scalar,
    cell_hi: &Scalar,
    binding: &EpsBinding,
) -> Vec<Segment> {
    let lo_v = cell_lo.value(binding);
    let hi_v = cell_hi.value(binding);
    let mut events = vec![
        Event {
            at: lo_v.clone(),
            point: cell_lo.clone(),
            delta: 1,
            slot: 1,
        },
        Event {
            at: hi_v.clone(),
            point: cell_hi.clone(),
            delta: -1,
            slot: 1,
        },
    ];
    for iv in pieces {
        let (l, h) = (iv.lo.value(binding), iv.hi.value(binding));
        if l >= h || h <= lo_v || l >= hi_v {
            continue;
        }
        let (lp, l) = if l < lo_v {
            (cell_lo.clone(), lo_v.clone())
        } else {
            (iv.lo.clone(), l)
        };
        let (hp, h) = if h > hi_v {
            (cell_hi.clone(), hi_v.clone())
        } else {
            (iv.hi.clone(), h)
        };
        events.push(Event {
            at: l,
            point: lp,
            delta: 1,
            slot: 0,
        });
        events.push(Event {
            at: h,
            point: hp,
            delta: -1,
            slot: 0,
        });
    }
    let mut out: Vec<Segment> = Vec::new();
    sweep::<2>(events, |lo, hi, c| {
        if c[1] <= 0 {
            return;
        }
        let count = c[0] as u32;
        match out.last_mut() {
            Some(last) if last.count == count => last.hi = hi.clone(),
            _ => out.push(Segment {
                lo: lo.clone(),
                hi: hi.clone(),
                count,
            }),
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn pi(n: i64, d: i64) -> Scalar {
        Scalar::pi_frac(n, d)
    }

    fn iv(lo: Scalar, hi: Scalar) -> Interval {
        Interval::raw(lo, hi)
    }

    fn unbound(ivs: Vec<Interval>) -> IntervalSet {
        IntervalSet::normalize(ivs, EpsBinding::unbound()).unwrap()
    }

    fn shannon() -> IntervalSet {
        unbound(vec![iv(pi(-2, 1), pi(-1, 1)), iv(pi(1, 1), pi(2, 1))])
    }

    #[test]
    fn normalize_examples() {
        let a = unbound(vec![iv(pi(0, 1), pi(1, 1)), iv(pi(1, 1), pi(2, 1))]);
        assert_eq!(a.intervals(), &[iv(pi(0, 1), pi(2, 1))]);
        let b = unbound(vec![iv(pi(0, 1), pi(3, 2)), iv(pi(1, 1), pi(2, 1))]);
        assert_eq!(b.intervals(), &[iv(pi(0, 1), pi(2, 1))]);
        assert!(unbound(vec![]).is_empty());
        let err = IntervalSet::normalize(vec![iv(pi(1, 1), pi(1, 1))], EpsBinding::unbound());
        assert!(matches!(err, Err(SetError::MalformedInterval { .. })));
        let err = IntervalSet::normalize(
            vec![iv(Scalar::eps(int(1)), pi(1, 1))],
            EpsBinding::unbound(),
        );
        assert!(matches!(err, Err(SetError::UnboundEps(_))));
    }

    #[test]
    fn boolean_examples() {
        let a = unbound(vec![iv(pi(0, 1), pi(2, 1))]);
        let b = unbound(vec![iv(pi(1, 1), pi(2, 1))]);
        assert_eq!(
            a.difference(&b).unwrap().intervals(),
            &[iv(pi(0, 1), pi(1, 1))]
        );
        let c = unbound(vec![iv(pi(0, 1), pi(1, 1))]);
        assert!(c.intersect(&b).unwrap().is_empty());
        assert_eq!(c.union(&b).unwrap().intervals(), &[iv(pi(0, 1), pi(2, 1))]);
    }

    #[test]
    fn window_minus_first_hole() {
        // n = 2, ε = π/5: window [25π/6 + ε/32, 13π/3) minus 16·X₁
        let bind = EpsBinding::new(rat(1, 5)).unwrap();
        let window =
            IntervalSet::interval(Scalar::new(rat(25, 6), rat(1, 32)), pi(13, 3), bind.clone())
                .unwrap();
        let x1 = IntervalSet::interval(pi(2003, 7680), pi(2026, 7680), bind.clone()).unwrap();
        let d = window.difference(&x1.dilate_pow2(4)).unwrap();
        let expect = IntervalSet::from_pieces(
            vec![
                iv(pi(25, 6) + pi(1, 160), pi(16 * 2003, 7680)),
                iv(pi(16 * 2026, 7680), pi(13, 3)),
            ],
            bind,
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn affine_examples() {
        let a = unbound(vec![iv(pi(-2, 1), pi(-1, 1))]);
        assert_eq!(a.translate_2pi(1).intervals(), &[iv(pi(0, 1), pi(1, 1))]);
        assert_eq!(a.translate_2pi(0), a);
        let bind = EpsBinding::new(rat(1, 5)).unwrap();
        let s2 =
            IntervalSet::interval(Scalar::new(rat(-1, 3), rat(1, 16)), pi(-1, 6), bind.clone())
                .unwrap();
        let shifted = s2.translate_2pi(2);
        assert_eq!(
            shifted.intervals(),
            &[iv(Scalar::new(rat(11, 3), rat(1, 16)), pi(23, 6))]
        );
        let b = unbound(vec![iv(pi(1, 1), pi(2, 1))]);
        assert_eq!(b.dilate_pow2(1).intervals(), &[iv(pi(2, 1), pi(4, 1))]);
        assert_eq!(b.dilate_pow2(0), b);
        let z0 = IntervalSet::interval(pi(7, 24), pi(7, 24) + pi(1, 80), bind.clone()).unwrap();
        let expect =
            IntervalSet::interval(pi(14, 3), pi(14, 3) + Scalar::eps(int(1)), bind).unwrap();
        assert_eq!(z0.dilate_pow2(4), expect);
        // negative scale flips orientation
        assert_eq!(b.scale(&int(-1)).intervals(), &[iv(pi(-2, 1), pi(-1, 1))]);
    }

    #[test]
    fn measure_examples() {
        assert_eq!(shannon().measure(), pi(2, 1));
        let journe = unbound(vec![
            iv(pi(-32, 7), pi(-4, 1)),
            iv(pi(-1, 1), pi(-4, 7)),
            iv(pi(4, 7), pi(1, 1)),
            iv(pi(4, 1), pi(32, 7)),
        ]);
        assert_eq!(journe.measure(), pi(2, 1));
        let bind = EpsBinding::new(rat(1, 5)).unwrap();
        let x0 = IntervalSet::interval(
            Scalar::new(rat(1, 6), rat(1, 32)),
            Scalar::new(rat(1, 3) - rat(1, 8), rat(1, 16)),
            bind.clone(),
        )
        .unwrap();
        assert_eq!(x0.measure().value(&bind), rat(23, 480));
    }

    #[test]
    fn contains_examples() {
        let s = shannon();
        assert!(s.contains(&pi(1, 1)));
        assert!(!s.contains(&pi(2, 1)));
        assert!(s.contains(&pi(3, 2)));
        assert!(s.contains(&pi(-2, 1)));
        assert!(!s.contains(&pi(-1, 1)));
        assert!(!s.contains(&pi(0, 1)));
    }

    #[test]
    fn binding_mismatch() {
        let a =
            IntervalSet::interval(pi(0, 1), pi(1, 1), EpsBinding::new(rat(1, 5)).unwrap()).unwrap();
        let b =
            IntervalSet::interval(pi(0, 1), pi(1, 1), EpsBinding::new(rat(1, 7)).unwrap()).unwrap();
        assert_eq!(a.union(&b), Err(SetError::BindingMismatch));
        assert!(a.union(&shannon()).is_ok());
    }

    #[test]
    fn coverage_counts() {
        let pieces = vec![
            iv(pi(0, 1), pi(1, 1)),
            iv(pi(1, 2), pi(3, 2)),
            iv(pi(-1, 1), pi(1, 4)),
        ];
        let segs = coverage(&pieces, &pi(0, 1), &pi(2, 1), &EpsBinding::unbound());
        let got: Vec<(Scalar, Scalar, u32)> =
            segs.into_iter().map(|s| (s.lo, s.hi, s.count)).collect();
        assert_eq!(
            got,
            vec![
                (pi(0, 1), pi(1, 4), 2),
                (pi(1, 4), pi(1, 2), 1),
                (pi(1, 2), pi(1, 1), 2),
                (pi(1, 1), pi(3, 2), 1),
                (pi(3, 2), pi(2, 1), 0),
            ]
        );
    }

    #[test]
    fn split_and_extent() {
        let a = unbound(vec![iv(pi(-1, 1), pi(2, 1))]);
        let (p, n) = a.split_sign();
        assert_eq!(p.intervals(), &[iv(pi(0, 1), pi(2, 1))]);
        assert_eq!(n.intervals(), &[iv(pi(-1, 1), pi(0, 1))]);
        assert!(a.touches_zero());
        assert!(!shannon().touches_zero());
        assert_eq!(shannon().max_abs(), pi(2, 1));
        assert_eq!(shannon().min_abs(), Some(pi(1, 1)));
    }
}
