//! Dimension functions of MSF wavelets.
//!
//! For `ψ̂ = χ_A` the dimension function
//! `D(ξ) = Σ_{j≥1} Σ_{k∈ℤ} |ψ̂(2^j(ξ + 2kπ))|²` counts the pairs `(j, k)`
//! with `2^j(ξ + 2kπ) ∈ A`. Everything here is an exact count.

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::construction::{dist_from_zero, witness_interval, witness_pairs, Params, WaveletSet};
use crate::error::DimensionError;
use crate::exec::Exec;
use crate::fold::{dyadic_coverage, floor_log2, Sign};
use crate::interval::{coverage, Interval, IntervalSet};
use crate::scalar::{format_rational, int, pow2, rat, EpsBinding, Rational, Scalar};

/// Membership oracle for a bounded set, in π-coefficients.
pub trait SetOracle: Sync {
    fn binding(&self) -> &EpsBinding;

    fn contains_value(&self, v: &Rational) -> bool;

    /// `[lo, hi)` with `contains` false outside.
    fn support(&self) -> (Rational, Rational);

    /// Lower bound on `|x|` over the set; zero when the set reaches 0.
    fn dist0(&self) -> Rational;

    fn contains(&self, x: &Scalar) -> bool {
        self.contains_value(&x.value(self.binding()))
    }

    /// `max(|lo|, |hi|)`.
    fn max_abs(&self) -> Rational {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }
}

/// Oracle over a finite [`IntervalSet`].
#[derive(Clone, Debug)]
pub struct FiniteOracle {
    binding: EpsBinding,
    ivs: Vec<(Rational, Rational)>,
}

impl FiniteOracle {
    pub fn new(a: &IntervalSet) -> Self {
        let b = a.binding().clone();
        Self {
            ivs: a
                .intervals()
                .iter()
                .map(|iv| (iv.lo().value(&b), iv.hi().value(&b)))
                .collect(),
            binding: b,
        }
    }
}

impl SetOracle for FiniteOracle {
    fn binding(&self) -> &EpsBinding {
        &self.binding
    }

    fn contains_value(&self, v: &Rational) -> bool {
        let idx = self.ivs.partition_point(|(_, hi)| hi <= v);
        self.ivs.get(idx).is_some_and(|(lo, _)| lo <= v)
    }

    fn support(&self) -> (Rational, Rational) {
        match (self.ivs.first(), self.ivs.last()) {
            (Some(f), Some(l)) => (f.0.clone(), l.1.clone()),
            _ => (Rational::zero(), Rational::zero()),
        }
    }

    fn dist0(&self) -> Rational {
        let zero = Rational::zero();
        if self.ivs.iter().any(|(lo, hi)| *lo <= zero && zero <= *hi) {
            return zero;
        }
        self.ivs
            .iter()
            .flat_map(|(lo, hi)| [lo.abs(), hi.abs()])
            .min()
            .unwrap_or_else(|| int(1))
    }
}

impl SetOracle for WaveletSet {
    fn binding(&self) -> &EpsBinding {
        self.params().binding()
    }

    fn contains_value(&self, v: &Rational) -> bool {
        WaveletSet::contains_value(self, v)
    }

    fn support(&self) -> (Rational, Rational) {
        self.support_values().clone()
    }

    fn dist0(&self) -> Rational {
        dist_from_zero(self.params()).value(self.params().binding())
    }
}

/// `#{j ≥ 1 : 2^j·ξ ∈ A}`.
pub fn folded_tail<O: SetOracle + ?Sized>(o: &O, xi: &Scalar) -> u32 {
    folded_tail_value(o, &xi.value(o.binding()), &o.max_abs())
}

fn folded_tail_value<O: SetOracle + ?Sized>(o: &O, v: &Rational, max: &Rational) -> u32 {
    if v.is_zero() {
        return 0;
    }
    let mut y = v * int(2);
    let mut count = 0;
    while y.abs() <= *max {
        if o.contains_value(&y) {
            count += 1;
        }
        y *= int(2);
    }
    count
}

/// Range of `k` with `|ξ + 2kπ| ≤ max/2`, the only shifts that can reach
/// the support after a dilation by `2^j`, `j ≥ 1`.
fn k_range(v: &Rational, max: &Rational) -> (i64, i64) {
    let half = max / int(2);
    let lo = ((-&half - v) / int(2)).ceil().to_integer();
    let hi = ((&half - v) / int(2)).floor().to_integer();
    let conv = |k: BigInt| i64::try_from(k).expect("shift index fits in i64");
    (conv(lo), conv(hi))
}

/// All pairs `(j, k)`, `j ≥ 1`, with `2^j(ξ + 2kπ) ∈ A`, sorted by `j`.
pub fn dimension_pairs<O: SetOracle + ?Sized>(o: &O, xi: &Scalar) -> Vec<(u32, i64)> {
    let v = xi.value(o.binding());
    let max = o.max_abs();
    let (klo, khi) = k_range(&v, &max);
    let mut pairs = Vec::new();
    for k in klo..=khi {
        let base = &v + int(2 * k);
        if base.is_zero() {
            continue;
        }
        let mut y = &base * int(2);
        let mut j = 1u32;
        while y.abs() <= max {
            if o.contains_value(&y) {
                pairs.push((j, k));
            }
            y *= int(2);
            j += 1;
        }
    }
    pairs.sort();
    pairs
}

/// `D(ξ)`: number of pairs `(j, k)` with `2^j(ξ + 2kπ) ∈ A`.
pub fn dimension_at<O: SetOracle + ?Sized>(o: &O, xi: &Scalar) -> u32 {
    let v = xi.value(o.binding());
    let max = o.max_abs();
    let (klo, khi) = k_range(&v, &max);
    (klo..=khi)
        .map(|k| folded_tail_value(o, &(&v + int(2 * k)), &max))
        .sum()
}

/// `#{j ∈ ℤ : 2^j·ξ ∈ A}`.
pub fn sum_rule_at<O: SetOracle + ?Sized>(o: &O, xi: &Scalar) -> Result<u32, DimensionError> {
    let v = xi.value(o.binding());
    if v.is_zero() {
        return Err(DimensionError::ZeroInput);
    }
    let dist0 = o.dist0();
    if !dist0.is_positive() {
        return Err(DimensionError::AccumulationAtZero);
    }
    let a = v.abs();
    let max = o.max_abs();
    if max < dist0 {
        return Ok(0);
    }
    let j_lo = floor_log2(&(&dist0 / &a));
    let j_hi = floor_log2(&(&max / &a));
    Ok((j_lo..=j_hi)
        .filter(|&j| o.contains_value(&(&v * pow2(j))))
        .count() as u32)
}

/// Batch [`dimension_at`].
pub fn dimension_at_many<O: SetOracle>(o: &O, xs: &[Scalar], exec: Exec) -> Vec<u32> {
    exec.map(xs, |x| dimension_at(o, x))
}

/// Batch [`sum_rule_at`].
pub fn sum_rule_many<O: SetOracle>(
    o: &O,
    xs: &[Scalar],
    exec: Exec,
) -> Vec<Result<u32, DimensionError>> {
    exec.map(xs, |x| sum_rule_at(o, x))
}

/// Piecewise-constant `D` on `[−π, π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    /// `breakpoints[0] = −π`, last is `π`; one more than `values`.
    pub breakpoints: Vec<Scalar>,
    pub values: Vec<u32>,
    pub binding: EpsBinding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileStats {
    pub max: u32,
    pub integral: Scalar,
}

impl Profile {
    pub fn pieces(&self) -> impl Iterator<Item = (&Scalar, &Scalar, u32)> {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (&w[0], &w[1], v))
    }

    /// `D(ξ)`, reducing `ξ` into `[−π, π)` first.
    pub fn value_at(&self, xi: &Scalar) -> u32 {
        let mut v = xi.value(&self.binding);
        let shift = ((&v + int(1)) / int(2)).floor();
        v -= shift * int(2);
        let idx = self
            .breakpoints
            .partition_point(|b| b.value(&self.binding) <= v);
        self.values[idx.saturating_sub(1).min(self.values.len() - 1)]
    }

    /// CSV with decimal and exact endpoints.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from(
            "breakpoint_lo,breakpoint_hi,breakpoint_lo_exact,breakpoint_hi_exact,value\n",
        );
        for (lo, hi, v) in self.pieces() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                lo.to_decimal(&self.binding, digits),
                hi.to_decimal(&self.binding, digits),
                lo,
                hi,
                v
            );
        }
        out
    }

    /// Static step plot.
    pub fn to_svg(&self) -> String {
        let (w, h, pad) = (800.0, 300.0, 40.0);
        let max = self.values.iter().copied().max().unwrap_or(0).max(1) as f64;
        let pi = std::f64::consts::PI;
        let sx = |x: f64| pad + (x + pi) / (2.0 * pi) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - y / max * (h - 2.0 * pad);
        let mut path = String::new();
        for (i, (lo, hi, v)) in self.pieces().enumerate() {
            let (x0, x1, y) = (
                sx(lo.approx(&self.binding)),
                sx(hi.approx(&self.binding)),
                sy(v as f64),
            );
            if i == 0 {
                let _ = write!(path, "M{x0:.2},{y:.2}");
            } else {
                let _ = write!(path, " L{x0:.2},{y:.2}");
            }
            let _ = write!(path, " L{x1:.2},{y:.2}");
        }
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{pad}\" y1=\"{y0:.2}\" x2=\"{x2:.2}\" y2=\"{y0:.2}\" stroke=\"#888\"/>",
            y0 = sy(0.0),
            x2 = w - pad
        );
        for level in 0..=(max as u32) {
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{level}</text>",
                pad - 20.0,
                sy(level as f64) + 4.0
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">-π</text><text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">π</text>",
            sx(-pi) - 6.0,
            h - pad + 16.0,
            sx(pi) - 6.0,
            h - pad + 16.0
        );
        let _ = writeln!(
            svg,
            "<path d=\"{path}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>"
        );
        svg.push_str("</svg>\n");
        svg
    }
}

/// Maximum value and `∫_{−π}^{π} D`.
pub fn profile_stats(p: &Profile) -> ProfileStats {
    let max = p.values.iter().copied().max().unwrap_or(0);
    let integral = p.pieces().fold(Scalar::zero(), |acc, (lo, hi, v)| {
        &acc + &(hi - lo).scale(&int(i64::from(v)))
    });
    ProfileStats { max, integral }
}

/// Constant multiplicity of the dyadic fold of one sign part.
fn stationary_count(a: &IntervalSet, sign: Sign) -> Result<u32, DimensionError> {
    let segs = dyadic_coverage(a, sign).ok_or(DimensionError::AccumulationAtZero)?;
    match segs.as_slice() {
        [only] => Ok(only.count),
        _ => Err(DimensionError::NonStationaryAtZero),
    }
}

/// Exact piecewise-constant `D` on `[−π, π)` for a finite set.
///
/// Near `ξ = 0` the `k = 0` terms sum over infinitely many `j`; for
/// `|ξ| < r ≤ dist0` that sum is the multiplicity of the dyadic fold at
/// `ξ`, which must be constant on each side for a finite profile to exist.
/// Everything else needs only `j ≤ log₂(max/r)`.
pub fn dimension_profile(a: &IntervalSet) -> Result<Profile, DimensionError> {
    dimension_profile_with(a, Exec::default())
}

pub fn dimension_profile_with(a: &IntervalSet, exec: Exec) -> Result<Profile, DimensionError> {
    let binding = a.binding().clone();
    let neg_pi = Scalar::pi(int(-1));
    let pos_pi = Scalar::pi(int(1));
    if a.is_empty() {
        return Ok(Profile {
            breakpoints: vec![neg_pi, pos_pi],
            values: vec![0],
            binding,
        });
    }
    if a.touches_zero() {
        return Err(DimensionError::AccumulationAtZero);
    }
    let c_pos = stationary_count(a, Sign::Positive)?;
    let c_neg = stationary_count(a, Sign::Negative)?;

    let min_abs = a.min_abs().expect("nonempty");
    let r = if min_abs.cmp_under(&pos_pi, &binding) == Ordering::Less {
        min_abs
    } else {
        pos_pi.clone()
    };
    let max = a.max_abs();
    let j_max = floor_log2(&(max.value(&binding) / r.value(&binding)));

    let cell = IntervalSet::from_pieces(
        vec![Interval::raw(neg_pi.clone(), pos_pi.clone())],
        binding.clone(),
    );
    let outer = IntervalSet::from_pieces(
        vec![
            Interval::raw(neg_pi.clone(), -&r),
            Interval::raw(r.clone(), pos_pi.clone()),
        ],
        binding.clone(),
    );
    let per_level: Vec<Vec<Interval>> = exec.map_range(1, j_max + 1, |j| {
        let scaled = a.dilate_pow2(-j);
        let home = scaled.intersect(&outer).expect("same binding");
        let away = scaled.difference(&cell).expect("same binding");
        let mut pieces: Vec<Interval> = home.intervals().to_vec();
        for iv in away.intervals() {
            // fold into [−π, π) by folding x + π into [0, 2π)
            let shifted = iv.shift(&pos_pi);
            pieces.extend(
                split_into_cell(&shifted, &binding)
                    .into_iter()
                    .map(|p| p.shift(&neg_pi)),
            );
        }
        pieces
    });
    let mut pieces: Vec<Interval> = per_level.into_iter().flatten().collect();
    let zero = Scalar::zero();
    for _ in 0..c_pos {
        pieces.push(Interval::raw(zero.clone(), r.clone()));
    }
    for _ in 0..c_neg {
        pieces.push(Interval::raw(-&r, zero.clone()));
    }
    let segs = coverage(&pieces, &neg_pi, &pos_pi, &binding);
    let mut breakpoints: Vec<Scalar> = segs.iter().map(|s| s.lo.clone()).collect();
    breakpoints.push(pos_pi);
    Ok(Profile {
        breakpoints,
        values: segs.iter().map(|s| s.count).collect(),
        binding,
    })
}

/// Splits an interval at multiples of `2π` and translates each part into
/// `[0, 2π)`.
fn split_into_cell(iv: &Interval, binding: &EpsBinding) -> Vec<Interval> {
    let hi_v = iv.hi().value(binding);
    let lo_v = iv.lo().value(binding);
    let mut k = (&lo_v / int(2)).floor().to_integer();
    let mut out = Vec::new();
    loop {
        let start = Rational::from_integer(&k * 2);
        if start >= hi_v {
            break;
        }
        let end = &start + int(2);
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
        out.push(Interval::raw(lo, hi).translate_2pi(&-&k));
        k += 1;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    /// Support in `[−2^{n+2}π/3, 2^{n+2}π/3)`.
    Dyadic,
    /// Support in `[−2nπ, 2nπ)`.
    Linear,
}

#[derive(Clone, Debug)]
pub struct BoundCheck {
    pub holds: bool,
    pub max: u32,
    pub profile: Profile,
}

/// Whether `D ≤ n` a.e., after checking the support hypothesis of `mode`.
pub fn check_bound(a: &IntervalSet, n: u32, mode: BoundMode) -> Result<BoundCheck, DimensionError> {
    let half_width = match mode {
        BoundMode::Dyadic => pow2(i64::from(n) + 2) / int(3),
        BoundMode::Linear => int(2 * i64::from(n)),
    };
    let b = a.binding();
    if let (Some(lo), Some(hi)) = (a.support_lo(), a.support_hi()) {
        if lo.value(b) < -&half_width || hi.value(b) > half_width {
            return Err(DimensionError::SupportOutOfRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
                req_lo: format!("{}·π", format_rational(&-&half_width)),
                req_hi: format!("{}·π", format_rational(&half_width)),
            });
        }
    }
    let profile = dimension_profile(a)?;
    let max = profile_stats(&profile).max;
    Ok(BoundCheck {
        holds: max <= n,
        max,
        profile,
    })
}

#[derive(Clone, Debug)]
pub struct WitnessCheck {
    /// Pairs with whether `2^j(ξ + 2kπ)` lands in `W`.
    pub pairs: Vec<((u32, i64), bool)>,
    pub xi_sample: Scalar,
    /// All pairs contributing at `xi_sample`.
    pub all_pairs: Vec<(u32, i64)>,
    pub dim: u32,
    pub ok: bool,
}

/// Checks `D ≥ n + 1` at the midpoint of the witness interval.
pub fn check_witness(p: &Params) -> WitnessCheck {
    let w = WaveletSet::new(p);
    let iv = witness_interval(p);
    let xi = (iv.lo() + iv.hi()).scale(&rat(1, 2));
    let pairs: Vec<((u32, i64), bool)> = witness_pairs(p)
        .into_iter()
        .map(|(j, k)| {
            let x = xi.shift_2pi(&BigInt::from(k)).scale_pow2(i64::from(j));
            ((j, k), w.member(&x))
        })
        .collect();
    let all_pairs = dimension_pairs(&w, &xi);
    let dim = dimension_at(&w, &xi);
    let ok = pairs.iter().all(|(_, hit)| *hit) && dim > p.n();
    WitnessCheck {
        pairs,
        xi_sample: xi,
        all_pairs,
        dim,
        ok,
    }
}
