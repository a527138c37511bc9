//! Exact numbers of the form `(a + b·ρ)·π`.
//!
//! Every endpoint handled by this crate is a rational multiple of π plus a
//! rational multiple of ε, where ε itself is bound to `ρ·π` for a positive
//! rational `ρ`. Keeping ε symbolic lets formulas be written once and then
//! evaluated under any binding; comparisons collapse to exact rational
//! comparisons of the π-coefficient `a + b·ρ`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ScalarError;

/// Arbitrary-precision rational in canonical form.
pub type Rational = BigRational;

/// Shorthand for a small rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^m` for any integer `m`.
pub fn pow2(m: i64) -> Rational {
    let mag = BigInt::one() << m.unsigned_abs();
    if m >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Formats a rational as `p/q` (denominator always present).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q`, `p`, with an optional leading `-` or `−`.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-').or_else(|| t.strip_prefix('−')) {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let bad = || ScalarError::BadRational(s.to_string());
    let digits = |d: &str| -> Result<BigInt, ScalarError> {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(d).map_err(|_| bad())
    };
    let (p, q) = match body.split_once('/') {
        Some((p, q)) => (digits(p.trim())?, digits(q.trim())?),
        None => (digits(body)?, BigInt::one()),
    };
    if q.is_zero() {
        return Err(ScalarError::ZeroDenominator(s.to_string()));
    }
    let r = Rational::new(p, q);
    Ok(if neg { -r } else { r })
}

/// Binds the symbol ε to `ratio·π`.
///
/// An unbound binding is used by sets that never mention ε; evaluating a
/// scalar with a nonzero ε-coefficient under it is a logic error and is
/// rejected by every constructor that accepts endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EpsBinding {
    ratio: Option<Rational>,
}

impl EpsBinding {
    pub fn new(ratio: Rational) -> Result<Self, ScalarError> {
        if !ratio.is_positive() {
            return Err(ScalarError::NonPositiveEps(format_rational(&ratio)));
        }
        Ok(Self { ratio: Some(ratio) })
    }

    pub fn unbound() -> Self {
        Self { ratio: None }
    }

    pub fn ratio(&self) -> Option<&Rational> {
        self.ratio.as_ref()
    }

    pub fn is_bound(&self) -> bool {
        self.ratio.is_some()
    }

    /// Two bindings can share a computation when they agree or one is unbound.
    pub fn merge(&self, other: &EpsBinding) -> Option<EpsBinding> {
        match (&self.ratio, &other.ratio) {
            (Some(a), Some(b)) if a != b => None,
            (Some(_), _) => Some(self.clone()),
            (None, _) => Some(other.clone()),
        }
    }

    /// Whether `x` can be evaluated under this binding.
    pub fn admits(&self, x: &Scalar) -> bool {
        self.ratio.is_some() || x.eps.is_zero()
    }
}

/// `pi·π + eps·ε`, both coefficients exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    pi: Rational,
    eps: Rational,
}

impl Scalar {
    pub fn new(pi: Rational, eps: Rational) -> Self {
        Self { pi, eps }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    /// `r·π`.
    pub fn pi(r: Rational) -> Self {
        Self::new(r, Rational::zero())
    }

    /// `r·ε`.
    pub fn eps(r: Rational) -> Self {
        Self::new(Rational::zero(), r)
    }

    /// `(num/den)·π`.
    pub fn pi_frac(num: i64, den: i64) -> Self {
        Self::pi(rat(num, den))
    }

    pub fn pi_coef(&self) -> &Rational {
        &self.pi
    }

    pub fn eps_coef(&self) -> &Rational {
        &self.eps
    }

    pub fn is_zero(&self) -> bool {
        self.pi.is_zero() && self.eps.is_zero()
    }

    /// The π-coefficient `a + b·ρ` under `binding`.
    ///
    /// An unbound binding evaluates ε-terms as zero; callers keep ε-bearing
    /// scalars away from unbound sets (see [`EpsBinding::admits`]).
    pub fn value(&self, binding: &EpsBinding) -> Rational {
        match binding.ratio() {
            Some(rho) if !self.eps.is_zero() => &self.pi + &self.eps * rho,
            _ => self.pi.clone(),
        }
    }

    /// Exact trichotomy of the two values under `binding`.
    pub fn cmp_under(&self, other: &Scalar, binding: &EpsBinding) -> Ordering {
        if self.eps == other.eps {
            return self.pi.cmp(&other.pi);
        }
        self.value(binding).cmp(&other.value(binding))
    }

    /// Both coefficients multiplied by `r`.
    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar::new(&self.pi * r, &self.eps * r)
    }

    /// Multiplication by `2^m`.
    pub fn scale_pow2(&self, m: i64) -> Scalar {
        if m == 0 {
            return self.clone();
        }
        self.scale(&pow2(m))
    }

    /// Adds `2kπ`.
    pub fn shift_2pi(&self, k: &BigInt) -> Scalar {
        if k.is_zero() {
            return self.clone();
        }
        Scalar::new(&self.pi + Rational::from_integer(k * 2), self.eps.clone())
    }

    /// Correctly rounded decimal rendering of the value with `digits`
    /// fractional digits.
    pub fn to_decimal(&self, binding: &EpsBinding, digits: usize) -> String {
        decimal_of_pi_multiple(&self.value(binding), digits.max(1))
    }

    /// Floating-point approximation for plotting only.
    pub fn approx(&self, binding: &EpsBinding) -> f64 {
        let v = self.value(binding);
        let num: f64 = v.numer().to_string().parse().unwrap_or(f64::NAN);
        let den: f64 = v.denom().to_string().parse().unwrap_or(f64::NAN);
        num / den * std::f64::consts::PI
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Display for Scalar {
    /// `p/q·π+r/s·ε`, omitting a zero ε-term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}·π", format_rational(&self.pi))?;
        if !self.eps.is_zero() {
            if self.eps.is_positive() {
                write!(f, "+")?;
            }
            write!(f, "{}·ε", format_rational(&self.eps))?;
        }
        Ok(())
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Parses values in units of π: `a/b`, `a/b+c/d*eps`, `c/d·eps`,
    /// `a/b·π-c/d·ε` (the `Display` form).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.replace('−', "-");
        if t.is_empty() {
            return Err(ScalarError::BadScalar(s.to_string()));
        }
        let mut pi = Rational::zero();
        let mut eps = Rational::zero();
        // split into signed terms at + or - that are not leading
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in t.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&t[start..i]);
                start = i;
            }
        }
        terms.push(&t[start..]);
        for term in terms {
            let term = term.strip_prefix('+').unwrap_or(term);
            let eps_suffix = ["*eps", "·eps", "eps", "*ε", "·ε", "ε"]
                .iter()
                .find_map(|suf| term.strip_suffix(suf));
            match eps_suffix {
                Some(coef) => {
                    let coef = match coef {
                        "" => Rational::one(),
                        "-" => -Rational::one(),
                        c => {
                            parse_rational(c).map_err(|_| ScalarError::BadScalar(s.to_string()))?
                        }
                    };
                    eps += coef;
                }
                None => {
                    let coef = ["*pi", "·pi", "pi", "*π", "·π", "π"]
                        .iter()
                        .find_map(|suf| term.strip_suffix(suf))
                        .unwrap_or(term);
                    pi += match coef {
                        "" if coef.len() < term.len() => Rational::one(),
                        "-" if coef.len() < term.len() => -Rational::one(),
                        c => {
                            parse_rational(c).map_err(|_| ScalarError::BadScalar(s.to_string()))?
                        }
                    };
                }
            }
        }
        Ok(Scalar::new(pi, eps))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.pi + &rhs.pi, &self.eps + &rhs.eps)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.pi - &rhs.pi, &self.eps - &rhs.eps)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.pi, -&self.eps)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarDoc {
    pi: String,
    eps: String,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ScalarDoc {
            pi: format_rational(&self.pi),
            eps: format_rational(&self.eps),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let doc = ScalarDoc::deserialize(de)?;
        let pi = parse_rational(&doc.pi).map_err(serde::de::Error::custom)?;
        let eps = parse_rational(&doc.eps).map_err(serde::de::Error::custom)?;
        Ok(Scalar::new(pi, eps))
    }
}

/// `floor(π·10^digits)` together with an error bound of ±2 units.
fn pi_fixed(digits: u32) -> BigInt {
    // Machin: π = 16·atan(1/5) − 4·atan(1/239), evaluated with 10 guard digits.
    let guard = 10u32;
    let scale = num_traits::pow(BigInt::from(10), (digits + guard) as usize);
    let atan_inv = |x: u32| -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power = &scale / &x;
        let mut sum = BigInt::zero();
        let mut k = 0u32;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &x2;
            k += 1;
        }
        sum
    };
    let pi: BigInt = atan_inv(5) * 16 - atan_inv(239) * 4;
    pi.div_floor(&num_traits::pow(BigInt::from(10), guard as usize))
}

fn round_half_up(x: &Rational) -> BigInt {
    (x + rat(1, 2)).floor().to_integer()
}

fn decimal_of_pi_multiple(coef: &Rational, digits: usize) -> String {
    let n = if coef.is_zero() {
        BigInt::zero()
    } else {
        let mag_digits = coef.abs().ceil().to_integer().to_string().len() as u32;
        let mut extra = 8u32;
        loop {
            let p = digits as u32 + mag_digits + extra;
            let pi_p = Rational::from_integer(pi_fixed(p));
            let unit = Rational::new(
                BigInt::one(),
                num_traits::pow(BigInt::from(10), (p as usize) - digits),
            );
            let a = coef * (&pi_p - int(2)) * &unit;
            let b = coef * (&pi_p + int(2)) * &unit;
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (rl, rh) = (round_half_up(&lo), round_half_up(&hi));
            if rl == rh {
                break rl;
            }
            extra += 16;
        }
    };
    let neg = n.is_negative();
    let mut s = n.abs().to_string();
    if s.len() <= digits {
        s = format!("{}{}", "0".repeat(digits + 1 - s.len()), s);
    }
    let split = s.len() - digits;
    format!(
        "{}{}.{}",
        if neg { "-" } else { "" },
        &s[..split],
        &s[split..]
    )
}
