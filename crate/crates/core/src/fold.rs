//! Wavelet-set verification by folding.
//!
//! A set `K` is a wavelet set exactly when its `2πℤ`-translates tile the
//! line and its dyadic dilates tile the line. Both conditions are checked by
//! folding `K` into a fundamental cell and measuring where the fold misses
//! the cell (gap) or hits it more than once (overlap):
//!
//! * translations fold into `[0, 2π)`;
//! * dilations fold the positive part into `[π, 2π)` and the negative part
//!   into `[−2π, −π)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::exec::Exec;
use crate::interval::{coverage, Interval, IntervalSet, Segment};
use crate::scalar::{int, pow2, EpsBinding, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FoldFailure {
    /// An interval reaches 0, so infinitely many dyadic cells are hit.
    AccumulationAtZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Clone, Debug)]
pub struct FoldReport {
    pub cell: (Scalar, Scalar),
    pub cover: IntervalSet,
    pub gap: IntervalSet,
    pub overlap: IntervalSet,
    pub gap_measure: Scalar,
    pub overlap_measure: Scalar,
    /// Total length of all folded pieces.
    pub piece_mass: Scalar,
    /// `Σ (multiplicity − 1)·length` over the overlap.
    pub excess_mass: Scalar,
    pub max_multiplicity: u32,
    pub failure_reason: Option<FoldFailure>,
}

impl FoldReport {
    pub fn is_exact(&self) -> bool {
        self.failure_reason.is_none() && self.gap.is_empty() && self.overlap.is_empty()
    }

    pub fn binding(&self) -> &EpsBinding {
        self.cover.binding()
    }

    fn from_pieces(
        pieces: Vec<Interval>,
        cell_lo: Scalar,
        cell_hi: Scalar,
        binding: &EpsBinding,
    ) -> Self {
        let segments = coverage(&pieces, &cell_lo, &cell_hi, binding);
        let piece_mass = pieces
            .iter()
            .fold(Scalar::zero(), |acc, iv| &acc + &iv.length());
        Self::from_segments(&segments, piece_mass, cell_lo, cell_hi, binding)
    }

    fn from_segments(
        segments: &[Segment],
        piece_mass: Scalar,
        cell_lo: Scalar,
        cell_hi: Scalar,
        binding: &EpsBinding,
    ) -> Self {
        let pick = |pred: &dyn Fn(u32) -> bool| {
            IntervalSet::from_pieces(
                segments
                    .iter()
                    .filter(|s| pred(s.count))
                    .map(|s| Interval::raw(s.lo.clone(), s.hi.clone()))
                    .collect(),
                binding.clone(),
            )
        };
        let cover = pick(&|c| c >= 1);
        let gap = pick(&|c| c == 0);
        let overlap = pick(&|c| c >= 2);
        let excess_mass = segments
            .iter()
            .filter(|s| s.count >= 2)
            .fold(Scalar::zero(), |acc, s| {
                &acc + &(&s.hi - &s.lo).scale(&int(i64::from(s.count) - 1))
            });
        let max_multiplicity = segments.iter().map(|s| s.count).max().unwrap_or(0);
        Self {
            cell: (cell_lo, cell_hi),
            gap_measure: gap.measure(),
            overlap_measure: overlap.measure(),
            cover,
            gap,
            overlap,
            piece_mass,
            excess_mass,
            max_multiplicity,
            failure_reason: None,
        }
    }

    fn failed(reason: FoldFailure, cell_lo: Scalar, cell_hi: Scalar, binding: &EpsBinding) -> Self {
        let mut r = Self::from_pieces(Vec::new(), cell_lo, cell_hi, binding);
        r.failure_reason = Some(reason);
        r
    }

    /// Mirror image `x ↦ −x` of every set in the report.
    fn reflected(self) -> Self {
        let m1 = int(-1);
        Self {
            cell: (-&self.cell.1, -&self.cell.0),
            cover: self.cover.scale(&m1),
            gap: self.gap.scale(&m1),
            overlap: self.overlap.scale(&m1),
            ..self
        }
    }
}

/// `floor(v / 2)` for the π-coefficient `v`, i.e. the index `k` with
/// `2kπ ≤ x < 2(k+1)π`.
fn cell_index_2pi(v: &Rational) -> BigInt {
    (v / int(2)).floor().to_integer()
}

/// The unique `m` with `2^m ≤ v < 2^{m+1}` for positive rational `v`.
pub(crate) fn floor_log2(v: &Rational) -> i64 {
    debug_assert!(v.is_positive());
    let mut m = v.numer().bits() as i64 - v.denom().bits() as i64;
    while pow2(m) > *v {
        m -= 1;
    }
    while pow2(m + 1) <= *v {
        m += 1;
    }
    m
}

fn split_mod_2pi(iv: &Interval, binding: &EpsBinding) -> Vec<Interval> {
    let hi_v = iv.hi().value(binding);
    let mut k = cell_index_2pi(&iv.lo().value(binding));
    let mut out = Vec::new();
    loop {
        let start = Rational::from_integer(&k * 2);
        if start >= hi_v {
            break;
        }
        let end = &start + int(2);
        let lo = if start > iv.lo().value(binding) {
            Scalar::pi(start.clone())
        } else {
            iv.lo().clone()
        };
        let hi = if end < hi_v {
            Scalar::pi(end.clone())
        } else {
            iv.hi().clone()
        };
        out.push(Interval::raw(lo, hi).translate_2pi(&-&k));
        k += BigInt::one();
    }
    out
}

/// Pieces of a positive interval folded into `[π, 2π)`.
fn split_dyadic(iv: &Interval, binding: &EpsBinding) -> Vec<Interval> {
    let lo_v = iv.lo().value(binding);
    let hi_v = iv.hi().value(binding);
    let mut m = floor_log2(&lo_v);
    let mut out = Vec::new();
    loop {
        let start = pow2(m);
        if start >= hi_v {
            break;
        }
        let end = pow2(m + 1);
        let lo = if start > lo_v {
            Scalar::pi(start.clone())
        } else {
            iv.lo().clone()
        };
        let hi = if end < hi_v {
            Scalar::pi(end)
        } else {
            iv.hi().clone()
        };
        out.push(Interval::raw(lo, hi).scale(&pow2(-m)));
        m += 1;
    }
    out
}

/// Folds `a` into `[0, 2π)` under `2πℤ` translations.
pub fn fold_mod_2pi(a: &IntervalSet) -> FoldReport {
    fold_mod_2pi_with(a, Exec::default())
}

pub fn fold_mod_2pi_with(a: &IntervalSet, exec: Exec) -> FoldReport {
    let binding = a.binding();
    let pieces: Vec<Interval> = exec
        .map(a.intervals(), |iv| split_mod_2pi(iv, binding))
        .into_iter()
        .flatten()
        .collect();
    FoldReport::from_pieces(pieces, Scalar::zero(), Scalar::pi(int(2)), binding)
}

/// Whether some interval of `a` reaches 0 from the `sign` side.
fn reaches_zero(a: &IntervalSet, sign: Sign) -> bool {
    let binding = a.binding();
    let zero = Scalar::zero();
    a.intervals().iter().any(|iv| {
        let lo = iv.lo().cmp_under(&zero, binding);
        let hi = iv.hi().cmp_under(&zero, binding);
        match sign {
            Sign::Positive => lo != Ordering::Greater && hi == Ordering::Greater,
            Sign::Negative => lo == Ordering::Less && hi != Ordering::Less,
        }
    })
}

/// Folds the `sign` part of `a` into `[π, 2π)` or `[−2π, −π)` under dyadic
/// dilations.
pub fn fold_dyadic(a: &IntervalSet, sign: Sign) -> FoldReport {
    fold_dyadic_with(a, sign, Exec::default())
}

pub fn fold_dyadic_with(a: &IntervalSet, sign: Sign, exec: Exec) -> FoldReport {
    let binding = a.binding();
    let reaches_zero = reaches_zero(a, sign);
    let (cell_lo, cell_hi) = match sign {
        Sign::Positive => (Scalar::pi(int(1)), Scalar::pi(int(2))),
        Sign::Negative => (Scalar::pi(int(-2)), Scalar::pi(int(-1))),
    };
    if reaches_zero {
        return FoldReport::failed(FoldFailure::AccumulationAtZero, cell_lo, cell_hi, binding);
    }
    let (pos, neg) = a.split_sign();
    let part = match sign {
        Sign::Positive => pos,
        Sign::Negative => neg.scale(&int(-1)),
    };
    let pieces: Vec<Interval> = exec
        .map(part.intervals(), |iv| split_dyadic(iv, binding))
        .into_iter()
        .flatten()
        .collect();
    let report = FoldReport::from_pieces(pieces, Scalar::pi(int(1)), Scalar::pi(int(2)), binding);
    match sign {
        Sign::Positive => report,
        Sign::Negative => report.reflected(),
    }
}

/// Multiplicity segments of the dyadic fold of the `sign` part of `a` over
/// its reference cell (`[π, 2π)` for both signs, the negative part being
/// reflected first). `None` when an interval reaches 0.
pub(crate) fn dyadic_coverage(a: &IntervalSet, sign: Sign) -> Option<Vec<Segment>> {
    let binding = a.binding();
    let reaches_zero = reaches_zero(a, sign);
    if reaches_zero {
        return None;
    }
    let (pos, neg) = a.split_sign();
    let part = match sign {
        Sign::Positive => pos,
        Sign::Negative => neg.scale(&int(-1)),
    };
    let pieces: Vec<Interval> = part
        .intervals()
        .iter()
        .flat_map(|iv| split_dyadic(iv, binding))
        .collect();
    Some(coverage(
        &pieces,
        &Scalar::pi(int(1)),
        &Scalar::pi(int(2)),
        binding,
    ))
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub translation: FoldReport,
    pub dilation_pos: FoldReport,
    pub dilation_neg: FoldReport,
    pub is_wavelet_set: bool,
}

impl Verdict {
    pub fn reports(&self) -> [(&'static str, &FoldReport); 3] {
        [
            ("translation", &self.translation),
            ("dilation_pos", &self.dilation_pos),
            ("dilation_neg", &self.dilation_neg),
        ]
    }

    /// Sum of all gap and overlap measures.
    pub fn total_defect(&self) -> Scalar {
        self.reports().iter().fold(Scalar::zero(), |acc, (_, r)| {
            &(&acc + &r.gap_measure) + &r.overlap_measure
        })
    }
}

/// Runs all three folds.
pub fn wavelet_verdict(a: &IntervalSet) -> Verdict {
    wavelet_verdict_with(a, Exec::default())
}

pub fn wavelet_verdict_with(a: &IntervalSet, exec: Exec) -> Verdict {
    let translation = fold_mod_2pi_with(a, exec);
    let dilation_pos = fold_dyadic_with(a, Sign::Positive, exec);
    let dilation_neg = fold_dyadic_with(a, Sign::Negative, exec);
    let is_wavelet_set =
        translation.is_exact() && dilation_pos.is_exact() && dilation_neg.is_exact();
    Verdict {
        translation,
        dilation_pos,
        dilation_neg,
        is_wavelet_set,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pi(n: i64, d: i64) -> Scalar {
        Scalar::pi_frac(n, d)
    }

    fn set(bounds: &[(i64, i64, i64, i64)]) -> IntervalSet {
        IntervalSet::normalize(
            bounds
                .iter()
                .map(|&(a, b, c, d)| Interval::raw(pi(a, b), pi(c, d)))
                .collect(),
            EpsBinding::unbound(),
        )
        .unwrap()
    }

    fn shannon() -> IntervalSet {
        set(&[(-2, 1, -1, 1), (1, 1, 2, 1)])
    }

    fn journe() -> IntervalSet {
        set(&[(-32, 7, -4, 1), (-1, 1, -4, 7), (4, 7, 1, 1), (4, 1, 32, 7)])
    }

    #[test]
    fn floor_log2_exact() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&rat(3, 2)), 0);
        assert_eq!(floor_log2(&int(2)), 1);
        assert_eq!(floor_log2(&rat(1, 2)), -1);
        assert_eq!(floor_log2(&rat(4, 7)), -1);
        assert_eq!(floor_log2(&rat(32, 7)), 2);
        assert_eq!(floor_log2(&rat(1023, 1024)), -1);
    }

    #[test]
    fn translation_fold_examples() {
        let r = fold_mod_2pi(&shannon());
        assert!(r.is_exact());
        assert_eq!(r.cover, set(&[(0, 1, 2, 1)]));

        let r = fold_mod_2pi(&journe());
        assert!(r.is_exact());
        assert_eq!(r.piece_mass, pi(2, 1));

        let r = fold_mod_2pi(&set(&[(0, 1, 1, 1)]));
        assert_eq!(r.gap, set(&[(1, 1, 2, 1)]));
        assert_eq!(r.gap_measure, pi(1, 1));
        assert!(!r.is_exact());
    }

    #[test]
    fn dilation_fold_examples() {
        let r = fold_dyadic(&shannon(), Sign::Positive);
        assert!(r.is_exact());
        let r = fold_dyadic(&journe(), Sign::Positive);
        assert!(r.is_exact());
        assert_eq!(r.cover, set(&[(1, 1, 2, 1)]));
        let r = fold_dyadic(&journe(), Sign::Negative);
        assert!(r.is_exact());
        assert_eq!(r.cover, set(&[(-2, 1, -1, 1)]));

        let r = fold_dyadic(&set(&[(1, 1, 3, 1)]), Sign::Positive);
        assert_eq!(r.overlap, set(&[(1, 1, 3, 2)]));
        assert_eq!(r.overlap_measure, pi(1, 2));
        assert_eq!(r.excess_mass, pi(1, 2));
        assert_eq!(r.max_multiplicity, 2);
    }

    #[test]
    fn verdict_examples() {
        assert!(wavelet_verdict(&shannon()).is_wavelet_set);
        assert!(wavelet_verdict(&journe()).is_wavelet_set);
        let v = wavelet_verdict(&set(&[(0, 1, 2, 1)]));
        assert!(!v.is_wavelet_set);
        assert_eq!(
            v.dilation_pos.failure_reason,
            Some(FoldFailure::AccumulationAtZero)
        );
        // no negative part: full gap
        assert_eq!(v.dilation_neg.gap, set(&[(-2, 1, -1, 1)]));
        assert!(v.translation.is_exact());
    }

    #[test]
    fn measure_balance() {
        let a = set(&[(1, 3, 5, 2), (-7, 2, -1, 5), (9, 1, 10, 1)]);
        for r in [
            fold_mod_2pi(&a),
            fold_dyadic(&a, Sign::Positive),
            fold_dyadic(&a, Sign::Negative),
        ] {
            assert_eq!(r.piece_mass, &r.cover.measure() + &r.excess_mass);
        }
    }

    #[test]
    fn touching_zero_from_other_side_is_fine() {
        let a = set(&[(-1, 1, 0, 1), (1, 1, 2, 1)]);
        assert!(fold_dyadic(&a, Sign::Positive).is_exact());
        assert_eq!(
            fold_dyadic(&a, Sign::Negative).failure_reason,
            Some(FoldFailure::AccumulationAtZero)
        );
    }
}
