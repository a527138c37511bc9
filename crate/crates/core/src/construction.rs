//! The wavelet sets `W(n, ε)` supported in `[−M, M + ε)`, `M = 2^{n+2}π/3`,
//! whose dimension function exceeds `n` on a set of positive measure.
//!
//! `W` is six intervals `S₁…S₆`, three self-similar families `X_j, Y_j, Z_j`
//! generated from seeds by the contraction `P ↦ (P + c)/2^{n+2}`, and a
//! remainder `V` which is a window with the dilated family punched out.
//! Even and odd `n` use different pieces and shift constants.
//!
//! All coordinates below are π-coefficients: `[a + b·ε, …)` means
//! `[a·π + b·ε, …)`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::ConstructionError;
use crate::exec::Exec;
use crate::interval::{Interval, IntervalSet};
use crate::scalar::{format_rational, int, pow2, rat, EpsBinding, Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// `δ(n) = 2^{n+2}π / (3(2^{n+2} − 1))`.
pub fn delta_bound(n: u32) -> Scalar {
    let b = pow2(i64::from(n) + 2);
    Scalar::pi(&b / (int(3) * (&b - int(1))))
}

/// Construction parameters `n ≥ 1` and `ε = ρπ` with `0 < ε < δ(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    n: u32,
    binding: EpsBinding,
}

impl Params {
    pub fn new(n: u32, eps_ratio: Rational) -> Result<Self, ConstructionError> {
        if n == 0 {
            return Err(ConstructionError::InvalidN);
        }
        let binding = EpsBinding::new(eps_ratio.clone())?;
        let delta = delta_bound(n);
        if eps_ratio >= *delta.pi_coef() {
            return Err(ConstructionError::EpsOutOfRange {
                eps: format_rational(&eps_ratio),
                delta: format_rational(delta.pi_coef()),
            });
        }
        Ok(Self { n, binding })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn binding(&self) -> &EpsBinding {
        &self.binding
    }

    pub fn eps_ratio(&self) -> &Rational {
        self.binding.ratio().expect("params always bind eps")
    }

    pub fn parity(&self) -> Parity {
        if self.n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Contraction exponent `n + 2`.
    pub fn exponent(&self) -> i64 {
        i64::from(self.n) + 2
    }

    /// `2^{n+2}`.
    pub fn big(&self) -> Rational {
        pow2(self.exponent())
    }

    /// `M = 2^{n+2}π/3`.
    pub fn m(&self) -> Scalar {
        Scalar::pi(self.big() / int(3))
    }

    /// Shift of the self-similar recursion: `2(2^{n+1}−2)π/3` for even `n`,
    /// `2(2^{n+1}−1)π/3` for odd `n`.
    pub fn shift(&self) -> Scalar {
        let b = self.big();
        match self.parity() {
            Parity::Even => Scalar::pi((b - int(4)) / int(3)),
            Parity::Odd => Scalar::pi((b - int(2)) / int(3)),
        }
    }

    /// Translation carrying `S₁` next to `S₅`/`S₃`: `2(2^{n+2}−1)π/3` for
    /// even `n`, `2(2^{n+2}−2)π/3` for odd `n`.
    pub fn s1_shift(&self) -> Scalar {
        let b = self.big();
        match self.parity() {
            Parity::Even => Scalar::pi(int(2) * (b - int(1)) / int(3)),
            Parity::Odd => Scalar::pi(int(2) * (b - int(2)) / int(3)),
        }
    }

    /// Fixed point `p* = c/(2^{n+2} − 1)` of the contraction.
    pub fn fixed_point(&self) -> Scalar {
        self.shift().scale(&(int(1) / (self.big() - int(1))))
    }

    /// Seed basin `[π/6 + ε/2^{n+3}, π/3)`.
    pub fn basin(&self) -> Interval {
        Interval::raw(
            Scalar::new(rat(1, 6), pow2(-self.exponent() - 1)),
            Scalar::pi_frac(1, 3),
        )
    }

    /// Window containing `V`.
    pub fn window(&self) -> Interval {
        let m = self.m();
        let e = Scalar::eps(pow2(-self.exponent() - 1));
        match self.parity() {
            Parity::Even => Interval::raw(
                &(&m - &Scalar::pi_frac(7, 6)) + &e,
                &m - &Scalar::pi_frac(1, 1),
            ),
            Parity::Odd => Interval::raw(
                &(&m - &Scalar::pi_frac(1, 2)) + &e,
                &m - &Scalar::pi_frac(1, 3),
            ),
        }
    }

    /// `[M + ε − 2π, M + ε)`, the length-2π interval `W` is translation
    /// equivalent to.
    pub fn translation_target(&self) -> Interval {
        let top = &self.m() + &Scalar::eps(int(1));
        Interval::raw(&top - &Scalar::pi(int(2)), top)
    }

    /// `[M/2 + ε/2, M + ε)`, dilation target of the positive part.
    pub fn dilation_target_pos(&self) -> Interval {
        let top = &self.m() + &Scalar::eps(int(1));
        Interval::raw(top.scale(&rat(1, 2)), top)
    }

    /// `[−M, −M/2)`, dilation target of the negative part.
    pub fn dilation_target_neg(&self) -> Interval {
        let m = self.m();
        Interval::raw(-&m, -&m.scale(&rat(1, 2)))
    }

    /// Bounding interval `[−M, M + ε)` of the support.
    pub fn support(&self) -> Interval {
        Interval::raw(-&self.m(), &self.m() + &Scalar::eps(int(1)))
    }
}

/// The finite pieces and seeds of `W(n, ε)`, exactly as the formulas give
/// them. Intervals here are raw endpoint pairs and may be empty when the
/// formulas degenerate; [`Pieces::empty_pieces`] names them.
#[derive(Clone, Debug)]
pub struct Pieces {
    pub s: [Interval; 6],
    pub x0: Interval,
    pub y0: Interval,
    pub z0: Interval,
    pub parity: Parity,
}

impl Pieces {
    pub fn seeds(&self) -> [&Interval; 3] {
        [&self.x0, &self.y0, &self.z0]
    }

    /// Pieces whose formulas produce `lo ≥ hi`, by name.
    pub fn empty_pieces(&self, binding: &EpsBinding) -> Vec<&'static str> {
        const NAMES: [&str; 9] = ["S1", "S2", "S3", "S4", "S5", "S6", "X0", "Y0", "Z0"];
        self.s
            .iter()
            .chain(self.seeds())
            .zip(NAMES)
            .filter(|(iv, _)| iv.is_empty_under(binding))
            .map(|(_, name)| name)
            .collect()
    }
}

fn eps_over_pow2(m: i64) -> Scalar {
    Scalar::eps(pow2(-m))
}

/// `S₁…S₆` and the seeds `X₀, Y₀, Z₀` for the parity of `n`.
pub fn build_pieces(p: &Params) -> Pieces {
    let m = p.m();
    let e = p.exponent();
    let eps = Scalar::eps(int(1));
    let pi = |a: i64, b: i64| Scalar::pi_frac(a, b);
    let big = p.big();

    let s1 = Interval::raw(-&m, &-&m + &eps);
    let s2 = Interval::raw(&pi(-1, 3) + &eps_over_pow2(e), pi(-1, 6));
    let x0 = Interval::raw(
        &pi(1, 6) + &eps_over_pow2(e + 1),
        &(&pi(1, 3) - &Scalar::pi(pow2(-(e - 1)))) + &eps_over_pow2(e),
    );
    let shifted_s2 = s2.shift(&p.shift()).scale(&(int(1) / &big));

    match p.parity() {
        Parity::Even => {
            let s3 = Interval::raw(
                &(&m - &pi(2, 1)) + &eps,
                &(&m - &pi(5, 3)) + &eps_over_pow2(e),
            );
            let s4 = Interval::raw(&m - &pi(3, 2), &(&m - &pi(7, 6)) + &eps_over_pow2(e + 1));
            let s5 = Interval::raw(&m - &pi(1, 1), &m - &pi(2, 3));
            let s6 = Interval::raw(&(&m - &pi(2, 3)) + &eps, &m + &eps);
            // π/3 − π/(3·2^{n+1})
            let z_lo = &pi(1, 3) - &Scalar::pi(pow2(-(e - 1)) / int(3));
            let z0 = Interval::raw(z_lo.clone(), &z_lo + &eps_over_pow2(e));
            Pieces {
                s: [s1, s2, s3, s4, s5, s6],
                x0,
                y0: shifted_s2,
                z0,
                parity: Parity::Even,
            }
        }
        Parity::Odd => {
            let s3 = Interval::raw(&(&m - &pi(2, 1)) + &eps, &m - &pi(4, 3));
            let s4 = Interval::raw(
                &(&m - &pi(4, 3)) + &eps,
                &(&m - &pi(1, 1)) + &eps_over_pow2(e),
            );
            let s5 = Interval::raw(&m - &pi(5, 6), &(&m - &pi(1, 2)) + &eps_over_pow2(e + 1));
            let s6 = Interval::raw(&m - &pi(1, 3), &m + &eps);
            // π/3 − π/(3·2^n)
            let y_lo = &pi(1, 3) - &Scalar::pi(pow2(-(e - 2)) / int(3));
            let y0 = Interval::raw(y_lo.clone(), &y_lo + &eps_over_pow2(e));
            Pieces {
                s: [s1, s2, s3, s4, s5, s6],
                x0,
                y0,
                z0: shifted_s2,
                parity: Parity::Odd,
            }
        }
    }
}

/// The contraction data of the family `X_j, Y_j, Z_j`.
#[derive(Clone, Debug)]
pub struct SelfSimilarFamily {
    pub seeds: [Interval; 3],
    pub shift: Scalar,
    /// Levels contract by `2^{−exponent}`.
    pub exponent: i64,
    pub fixed_point: Scalar,
    pub basin: Interval,
}

impl SelfSimilarFamily {
    pub fn new(p: &Params, pieces: &Pieces) -> Self {
        Self {
            seeds: [pieces.x0.clone(), pieces.y0.clone(), pieces.z0.clone()],
            shift: p.shift(),
            exponent: p.exponent(),
            fixed_point: p.fixed_point(),
            basin: p.basin(),
        }
    }

    /// One step of the recursion `P ↦ (P + c)/2^{n+2}`.
    pub fn step(&self, iv: &Interval) -> Interval {
        iv.shift(&self.shift).scale(&pow2(-self.exponent))
    }

    /// `[X_j, Y_j, Z_j]` as raw intervals.
    pub fn level(&self, j: u32) -> [Interval; 3] {
        // P_j = P_0/2^{(n+2)j} + (1 − 2^{−(n+2)j})·p*
        let r = pow2(-self.exponent * i64::from(j));
        let offset = self.fixed_point.scale(&(int(1) - &r));
        self.seeds.clone().map(|s| s.scale(&r).shift(&offset))
    }
}

/// `X_j ∪ Y_j ∪ Z_j`.
pub fn level_set(p: &Params, j: u32) -> IntervalSet {
    let pieces = build_pieces(p);
    let fam = SelfSimilarFamily::new(p, &pieces);
    IntervalSet::from_pieces(fam.level(j).to_vec(), p.binding().clone())
}

/// Finite rendering of `W(n, ε)` at depth `J`.
#[derive(Clone, Debug)]
pub struct TruncatedSet {
    pub params: Params,
    pub depth: u32,
    pub set: IntervalSet,
    /// `measure(set) − 2π`.
    pub excess_measure: Scalar,
    /// Measure of `⋃_{j>J} P_j`, absent from `set` but part of `W`.
    pub missing_measure: Scalar,
    /// Measure of `⋃_{j>J} 2^{n+2}P_j`, present in `set` but not in `W`.
    pub surplus_measure: Scalar,
}

/// `|X₀| + |Y₀| + |Z₀|`, counting degenerate seeds as empty.
pub fn seed_measure(p: &Params) -> Scalar {
    let pieces = build_pieces(p);
    IntervalSet::from_pieces(
        pieces.seeds().map(Clone::clone).to_vec(),
        p.binding().clone(),
    )
    .measure()
}

/// Depth-`J` truncation: all `S_i`, levels `0..=J`, and the window minus
/// the first `J` dilated levels.
pub fn truncate(p: &Params, depth: u32) -> TruncatedSet {
    truncate_with(p, depth, Exec::default())
}

pub fn truncate_with(p: &Params, depth: u32, exec: Exec) -> TruncatedSet {
    let binding = p.binding().clone();
    let pieces = build_pieces(p);
    let fam = SelfSimilarFamily::new(p, &pieces);
    let levels: Vec<[Interval; 3]> =
        exec.map_range(0, i64::from(depth) + 1, |j| fam.level(j as u32));

    let holes: Vec<Interval> = levels[1..]
        .iter()
        .flatten()
        .map(|iv| iv.scale(&p.big()))
        .collect();
    let window = IntervalSet::from_pieces(vec![p.window()], binding.clone());
    let v = window
        .difference(&IntervalSet::from_pieces(holes, binding.clone()))
        .expect("same binding");

    let mut all: Vec<Interval> = pieces.s.to_vec();
    all.extend(levels.into_iter().flatten());
    all.extend(v.intervals().iter().cloned());
    let set = IntervalSet::from_pieces(all, binding.clone());

    let excess_measure = &set.measure() - &Scalar::pi(int(2));
    let s0 = seed_measure(p);
    let big = p.big();
    let tail = s0.scale(&pow2(-p.exponent() * i64::from(depth)));
    let missing_measure = tail.scale(&(int(1) / (&big - int(1))));
    let surplus_measure = missing_measure.scale(&big);
    TruncatedSet {
        params: p.clone(),
        depth,
        set,
        excess_measure,
        missing_measure,
        surplus_measure,
    }
}

/// Where a point sits relative to the parts of `W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// Inside `S_i` (1-based).
    Piece(u8),
    /// Inside `X_j ∪ Y_j ∪ Z_j`.
    Level(u32),
    /// Inside `V`.
    Remainder,
    /// Inside the window but in the hole `2^{n+2}(X_j ∪ Y_j ∪ Z_j)`, `j ≥ 1`.
    Hole(u32),
    /// The accumulation point `p*` or its image `2^{n+2}p*`.
    FixedPoint,
    Outside,
}

impl Region {
    pub fn is_member(self) -> bool {
        matches!(
            self,
            Region::Piece(_) | Region::Level(_) | Region::Remainder
        )
    }
}

/// Classification of a point together with the number of inverse-map
/// applications used to decide it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub region: Region,
    pub depth: u32,
}

/// Exact membership oracle for the untruncated `W(n, ε)`.
///
/// Endpoints are cached as rational π-coefficients under the binding.
#[derive(Clone, Debug)]
pub struct WaveletSet {
    params: Params,
    pieces: Pieces,
    s: Vec<(Rational, Rational)>,
    seeds: Vec<(Rational, Rational)>,
    basin: (Rational, Rational),
    window: (Rational, Rational),
    shift: Rational,
    big: Rational,
    fixed_point: Rational,
    support: (Rational, Rational),
}

fn values(iv: &Interval, b: &EpsBinding) -> (Rational, Rational) {
    (iv.lo().value(b), iv.hi().value(b))
}

fn within(v: &Rational, iv: &(Rational, Rational)) -> bool {
    iv.0 <= *v && *v < iv.1
}

impl WaveletSet {
    pub fn new(p: &Params) -> Self {
        let b = p.binding();
        let pieces = build_pieces(p);
        Self {
            s: pieces.s.iter().map(|iv| values(iv, b)).collect(),
            seeds: pieces.seeds().iter().map(|iv| values(iv, b)).collect(),
            basin: values(&p.basin(), b),
            window: values(&p.window(), b),
            shift: p.shift().value(b),
            big: p.big(),
            fixed_point: p.fixed_point().value(b),
            support: values(&p.support(), b),
            pieces,
            params: p.clone(),
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn pieces(&self) -> &Pieces {
        &self.pieces
    }

    /// Level index `j` with `v ∈ X_j ∪ Y_j ∪ Z_j`, found by iterating
    /// `y ↦ 2^{n+2}y − c` while `y` stays in the basin. Returns the number
    /// of iterations alongside.
    fn level_of(&self, v: &Rational) -> (Option<u32>, u32) {
        let mut y = v.clone();
        let mut depth = 0u32;
        loop {
            if self.seeds.iter().any(|s| within(&y, s)) {
                return (Some(depth), depth);
            }
            if y == self.fixed_point || !within(&y, &self.basin) {
                return (None, depth);
            }
            // |g(y) − p*| = 2^{n+2}|y − p*|, so this leaves the basin
            y = &y * &self.big - &self.shift;
            depth += 1;
        }
    }

    /// Classifies a π-coefficient.
    pub fn classify_value(&self, v: &Rational) -> Membership {
        if let Some(i) = self.s.iter().position(|s| within(v, s)) {
            return Membership {
                region: Region::Piece(i as u8 + 1),
                depth: 0,
            };
        }
        if *v == self.fixed_point {
            return Membership {
                region: Region::FixedPoint,
                depth: 0,
            };
        }
        if within(v, &self.basin) || self.seeds.iter().any(|s| within(v, s)) {
            let (level, depth) = self.level_of(v);
            return Membership {
                region: level.map_or(Region::Outside, Region::Level),
                depth,
            };
        }
        if within(v, &self.window) {
            // x ∈ 2^{n+2}P_j  ⇔  x − c ∈ P_{j−1}
            let y = v - &self.shift;
            if y == self.fixed_point {
                return Membership {
                    region: Region::FixedPoint,
                    depth: 0,
                };
            }
            let (level, depth) = self.level_of(&y);
            return Membership {
                region: level.map_or(Region::Remainder, |j| Region::Hole(j + 1)),
                depth,
            };
        }
        Membership {
            region: Region::Outside,
            depth: 0,
        }
    }

    pub fn classify(&self, x: &Scalar) -> Membership {
        self.classify_value(&x.value(self.params.binding()))
    }

    pub fn contains_value(&self, v: &Rational) -> bool {
        self.classify_value(v).region.is_member()
    }

    pub fn member(&self, x: &Scalar) -> bool {
        self.classify(x).region.is_member()
    }

    /// `[−M, M + ε)` as π-coefficients.
    pub fn support_values(&self) -> &(Rational, Rational) {
        &self.support
    }
}

/// Exact membership in the untruncated `W(n, ε)`.
pub fn member(p: &Params, x: &Scalar) -> bool {
    WaveletSet::new(p).member(x)
}

/// The `n + 1` pairs `(j, k)` with `2^j(ξ + 2kπ) ∈ W` on the witness
/// interval `[2π/3, 2π/3 + ε/2^{n+1})`.
pub fn witness_pairs(p: &Params) -> Vec<(u32, i64)> {
    let n = p.n();
    (1..=n + 1)
        .map(|j| {
            let e = n + 1 - j;
            let two_e = BigInt::one() << e;
            let k_num: BigInt = &two_e - 1;
            let k = if (&k_num % 3u32).is_zero() {
                k_num / 3
            } else {
                -(two_e + BigInt::one()) / 3
            };
            (j, i64::try_from(k).expect("k fits in i64"))
        })
        .collect()
}

/// `[2π/3, 2π/3 + ε/2^{n+1})`.
pub fn witness_interval(p: &Params) -> Interval {
    let lo = Scalar::pi_frac(2, 3);
    let hi = &lo + &Scalar::eps(pow2(-(i64::from(p.n()) + 1)));
    Interval::raw(lo, hi)
}

/// Lower bound on `|x|` over `W`: `π/6`.
pub fn dist_from_zero(p: &Params) -> Scalar {
    let a = Scalar::new(rat(1, 6), pow2(-p.exponent() - 1));
    let b = Scalar::pi_frac(1, 6);
    match a.cmp_under(&b, p.binding()) {
        Ordering::Less => a,
        _ => b,
    }
}

/// Outcome of one identity or structural fact.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    /// A literal reading known not to hold; reported but not gating.
    pub informational: bool,
    pub detail: Option<SetDiscrepancy>,
}

/// Exact comparison of a disjoint union against its claimed value.
#[derive(Clone, Debug)]
pub struct SetDiscrepancy {
    pub union: IntervalSet,
    pub expected: IntervalSet,
    /// `expected ∖ union`.
    pub missing: IntervalSet,
    /// `union ∖ expected`.
    pub extra: IntervalSet,
    /// `Σ |parts| − |union|`; zero iff the parts are a.e. disjoint.
    pub overlap_mass: Scalar,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub n: u32,
    pub depth: u32,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    /// Every gating check holds.
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .filter(|c| !c.informational)
            .all(|c| c.holds)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checker<'a> {
    binding: &'a EpsBinding,
    checks: Vec<IdentityCheck>,
}

impl Checker<'_> {
    fn partition(
        &mut self,
        name: impl Into<String>,
        parts: Vec<Interval>,
        expected: Interval,
        informational: bool,
    ) {
        let b = self.binding.clone();
        let mass = parts
            .iter()
            .filter(|iv| !iv.is_empty_under(&b))
            .fold(Scalar::zero(), |acc, iv| &acc + &iv.length());
        let union = IntervalSet::from_pieces(parts, b.clone());
        let expected = IntervalSet::from_pieces(vec![expected], b.clone());
        let missing = expected.difference(&union).expect("same binding");
        let extra = union.difference(&expected).expect("same binding");
        let overlap_mass = &mass - &union.measure();
        let holds = missing.is_empty() && extra.is_empty() && overlap_mass.value(&b).is_zero();
        self.checks.push(IdentityCheck {
            name: name.into(),
            holds,
            informational,
            detail: Some(SetDiscrepancy {
                union,
                expected,
                missing,
                extra,
                overlap_mass,
            }),
        });
    }

    fn fact(&mut self, name: impl Into<String>, holds: bool) {
        self.checks.push(IdentityCheck {
            name: name.into(),
            holds,
            informational: false,
            detail: None,
        });
    }
}

fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

/// Checks every finite identity behind the translation and dilation
/// equivalences of `W(n, ε)`, the self-similar level identity
/// `P_j + c = 2^{n+2}P_{j+1}` for `j < J`, and the structural facts of the
/// family at levels `0..=J`.
pub fn verify_identities(p: &Params, depth: u32) -> IdentityReport {
    let b = p.binding();
    let pieces = build_pieces(p);
    let fam = SelfSimilarFamily::new(p, &pieces);
    let big = p.big();
    let m = p.m();
    let eps = Scalar::eps(int(1));
    let e = p.exponent();
    let c = p.shift();
    let t1 = p.s1_shift();
    let [s1, s2, s3, s4, s5, s6] = pieces.s.clone();
    let window = p.window();
    let levels: Vec<[Interval; 3]> = (0..=depth + 1).map(|j| fam.level(j)).collect();
    let holes: Vec<Interval> = levels[1..=depth as usize]
        .iter()
        .flatten()
        .map(|iv| iv.scale(&big))
        .collect();
    let v = IntervalSet::from_pieces(vec![window.clone()], b.clone())
        .difference(&IntervalSet::from_pieces(holes.clone(), b.clone()))
        .expect("same binding");
    let v_parts: Vec<Interval> = v.intervals().to_vec();
    let translated_levels: Vec<Interval> = levels[..depth as usize]
        .iter()
        .flatten()
        .map(|iv| iv.shift(&c))
        .collect();

    let mut ck = Checker {
        binding: b,
        checks: Vec::new(),
    };
    let pi = |a: i64, d: i64| Scalar::pi_frac(a, d);
    let two_pi = int(2);

    ck.fact(
        "shift c_n is a multiple of 2π",
        is_integer(&(c.pi_coef() / &two_pi)),
    );
    ck.fact(
        "S1 translation is a multiple of 2π",
        is_integer(&(t1.pi_coef() / &two_pi)),
    );
    let empty = pieces.empty_pieces(b);
    ck.fact(
        if empty.is_empty() {
            "all pieces nonempty".to_string()
        } else {
            format!("all pieces nonempty (empty: {})", empty.join(", "))
        },
        empty.is_empty(),
    );

    // level-wise self-similarity P_j + c = 2^{n+2}P_{j+1}
    let mut self_similar = true;
    for j in 0..depth as usize {
        for (a, bb) in levels[j].iter().zip(&levels[j + 1]) {
            let lhs = a.shift(&c);
            let rhs = bb.scale(&big);
            self_similar &= lhs.lo().cmp_under(rhs.lo(), b) == Ordering::Equal
                && lhs.hi().cmp_under(rhs.hi(), b) == Ordering::Equal;
        }
    }
    ck.fact(
        format!("P_j + c = 2^(n+2)·P_(j+1) for j < {depth}"),
        self_similar,
    );

    // V_J ∪ ⋃_{j<J}(P_j + c) = window
    let mut parts = v_parts.clone();
    parts.extend(translated_levels.iter().cloned());
    ck.partition("V ∪ ((X∪Y∪Z) + c) = window", parts, window.clone(), false);
    // 2^{n+2}·⋃_{1≤j≤J} P_j ∪ V_J = window
    let mut parts = v_parts.clone();
    parts.extend(holes.iter().cloned());
    ck.partition(
        "2^(n+2)·⋃(X_j∪Y_j∪Z_j) ∪ V = window",
        parts,
        window.clone(),
        false,
    );

    let top = &m + &eps;
    let scaled = |iv: &Interval| iv.scale(&big);
    let neg_target = p.dilation_target_neg();
    ck.partition(
        "S1 ∪ 2^(n+2)·S2 = [−M, −M/2)",
        vec![s1.clone(), scaled(&s2)],
        neg_target,
        false,
    );

    let mut translated: Vec<Interval> = vec![
        s1.shift(&t1),
        s2.shift(&c),
        s3.clone(),
        s4.clone(),
        s5.clone(),
        s6.clone(),
    ];
    translated.extend(v_parts.iter().cloned());
    translated.extend(translated_levels.iter().cloned());

    match p.parity() {
        Parity::Even => {
            let mid = &(&m - &pi(7, 6)) + &Scalar::eps(pow2(-e - 1));
            ck.partition(
                "S3 ∪ (S2 + c) ∪ S4 = [M+ε−2π, M−7π/6+ε/2^(n+3))",
                vec![s3.clone(), s2.shift(&c), s4.clone()],
                Interval::raw(&top - &pi(2, 1), mid.clone()),
                false,
            );
            ck.partition(
                "S5 ∪ (S1 + 2(2^(n+2)−1)π/3) ∪ S6 = [M−π, M+ε)",
                vec![s5.clone(), s1.shift(&t1), s6.clone()],
                Interval::raw(&m - &pi(1, 1), top.clone()),
                false,
            );
            // literal constant of the even-case text, which does not match the recursion
            let literal = Scalar::pi(int(2) * (&big - int(1)) / int(3));
            let mut parts = v_parts.clone();
            parts.extend(
                levels[..depth as usize]
                    .iter()
                    .flatten()
                    .map(|iv| iv.shift(&literal)),
            );
            ck.partition(
                "V ∪ ((X∪Y∪Z) + 2(2^(n+2)−1)π/3) = window [literal constant]",
                parts,
                window.clone(),
                true,
            );
            ck.partition(
                "2^(n+2)X0 ∪ S3 ∪ 2^(n+2)Y0 ∪ S4 = [M/2+ε/2, M−7π/6+ε/2^(n+3))",
                vec![
                    scaled(&pieces.x0),
                    s3.clone(),
                    scaled(&pieces.y0),
                    s4.clone(),
                ],
                Interval::raw(top.scale(&rat(1, 2)), mid),
                false,
            );
            ck.partition(
                "S5 ∪ 2^(n+2)Z0 ∪ S6 = [M−π, M+ε)",
                vec![s5.clone(), scaled(&pieces.z0), s6.clone()],
                Interval::raw(&m - &pi(1, 1), top.clone()),
                false,
            );
        }
        Parity::Odd => {
            let mid = &(&m - &pi(1, 2)) + &Scalar::eps(pow2(-e - 1));
            let chain = vec![
                s3.clone(),
                s1.shift(&t1),
                s4.clone(),
                s2.shift(&c),
                s5.clone(),
            ];
            ck.partition(
                "S3 ∪ (S1 + 2(2^(n+2)−2)π/3) ∪ S4 ∪ (S2 + c) ∪ S5 = [M+ε−2π, M+ε) [literal]",
                chain.clone(),
                p.translation_target(),
                true,
            );
            ck.partition(
                "S3 ∪ (S1 + 2(2^(n+2)−2)π/3) ∪ S4 ∪ (S2 + c) ∪ S5 = [M+ε−2π, M−π/2+ε/2^(n+3))",
                chain,
                Interval::raw(&top - &pi(2, 1), mid.clone()),
                false,
            );
            ck.partition(
                "S6 = [M−π/3, M+ε)",
                vec![s6.clone()],
                Interval::raw(&m - &pi(1, 3), top.clone()),
                false,
            );
            ck.partition(
                "2^(n+2)X0 ∪ S3 ∪ 2^(n+2)Y0 ∪ S4 ∪ 2^(n+2)Z0 ∪ S5 = [M/2+ε/2, M−π/2+ε/2^(n+3))",
                vec![
                    scaled(&pieces.x0),
                    s3.clone(),
                    scaled(&pieces.y0),
                    s4.clone(),
                    scaled(&pieces.z0),
                    s5.clone(),
                ],
                Interval::raw(top.scale(&rat(1, 2)), mid),
                false,
            );
        }
    }

    ck.partition(
        "all translated pieces = [M+ε−2π, M+ε)",
        translated,
        p.translation_target(),
        false,
    );

    // structural facts at every level 0..=J
    let basin_lo = p.basin().lo().clone();
    let third = pi(1, 3);
    let le = |x: &Scalar, y: &Scalar| x.cmp_under(y, b) != Ordering::Greater;
    let mut fact_i = true;
    let mut fact_ii = true;
    let mut fact_iv = true;
    let mut fact_v = true;
    for (j, lv) in levels[..=depth as usize].iter().enumerate() {
        for iv in lv {
            fact_i &= le(&basin_lo, iv.lo()) && le(iv.hi(), &third);
            if j >= 1 {
                let d = iv.scale(&big);
                fact_ii &= le(window.lo(), d.lo()) && le(d.hi(), window.hi());
            }
        }
        fact_iv &= le(lv[0].hi(), lv[1].lo()) && le(lv[1].hi(), lv[2].lo());
        let next = &levels[j + 1];
        fact_v &= match p.parity() {
            // nested strictly between Y_j and Z_j
            Parity::Even => le(lv[1].hi(), next[0].lo()) && le(next[2].hi(), lv[2].lo()),
            // to the right of Z_j, below p*
            Parity::Odd => le(lv[2].hi(), next[0].lo()) && le(next[2].hi(), &fam.fixed_point),
        };
    }
    let all_levels: Vec<Interval> = levels[..=depth as usize]
        .iter()
        .flatten()
        .cloned()
        .collect();
    let mass = all_levels
        .iter()
        .filter(|iv| !iv.is_empty_under(b))
        .fold(Scalar::zero(), |acc, iv| &acc + &iv.length());
    let fact_iii = IntervalSet::from_pieces(all_levels.clone(), b.clone())
        .measure()
        .cmp_under(&mass, b)
        == Ordering::Equal
        && all_levels.iter().all(|iv| !iv.is_empty_under(b));
    ck.fact(
        format!("(i) P_j ⊆ [π/6+ε/2^(n+3), π/3] for j ≤ {depth}"),
        fact_i,
    );
    ck.fact(
        format!("(ii) 2^(n+2)P_j ⊆ window for 1 ≤ j ≤ {depth}"),
        fact_ii,
    );
    ck.fact(
        format!("(iii) levels 0..={depth} pairwise disjoint and nonempty"),
        fact_iii,
    );
    ck.fact(format!("(iv) X_j < Y_j < Z_j for j ≤ {depth}"), fact_iv);
    ck.fact(
        match p.parity() {
            Parity::Even => format!("(v) level j+1 between Y_j and Z_j for j ≤ {depth}"),
            Parity::Odd => format!("(v) level j+1 between Z_j and p* for j ≤ {depth}"),
        },
        fact_v,
    );
    let p_star = fam.fixed_point.clone();
    ck.fact(
        "fixed point p* lies in the basin",
        fam.basin.contains(&p_star, b),
    );

    IdentityReport {
        n: p.n(),
        depth,
        checks: ck.checks,
    }
}
